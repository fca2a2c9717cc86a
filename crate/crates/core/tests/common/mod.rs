//! Oracles shared by the integration tests. Nothing here calls the code
//! under test for the quantity it checks.

#![allow(dead_code)]

use gacurve::catalog::{jet_at, point_at, Resolved};
use gacurve::invariants::arc_element;
use gacurve::jet::Jet;
use nalgebra::DMatrix;

/// Least-squares conic `a x^2 + b xy + c y^2 + d x + e y + f = 0` through
/// the points, as the right singular vector of the smallest singular value.
/// Returns the unit coefficient vector and the largest point residual.
pub fn fit_conic(points: &[[f64; 2]]) -> ([f64; 6], f64) {
    // center and scale for conditioning
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let sc = points
        .iter()
        .map(|p| (p[0] - cx).hypot(p[1] - cy))
        .fold(0.0, f64::max)
        .max(1e-300);
    let rows: Vec<[f64; 6]> = points
        .iter()
        .map(|p| {
            let (x, y) = ((p[0] - cx) / sc, (p[1] - cy) / sc);
            [x * x, x * y, y * y, x, y, 1.0]
        })
        .collect();
    let m = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::MAX), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v: Vec<f64> = vt.row(imin).iter().copied().collect();
    let coeffs = [v[0], v[1], v[2], v[3], v[4], v[5]];
    let resid = rows
        .iter()
        .map(|r| r.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>().abs())
        .fold(0.0, f64::max);
    (coeffs, resid)
}

/// `b^2 - 4ac` of a conic fit.
pub fn discriminant(c: &[f64; 6]) -> f64 {
    c[1] * c[1] - 4.0 * c[0] * c[2]
}

/// Five-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
];

/// A curve source with its general-affine arc length.
pub struct ArcCurve {
    pub src: Resolved,
}

impl ArcCurve {
    pub fn point(&self, t: f64) -> [f64; 2] {
        point_at(&self.src, t).expect("point on curve")
    }

    /// `ds/dt`, signed like `ds/dx` times `dx/dt`.
    pub fn speed(&self, t: f64) -> f64 {
        let dxdt = match &self.src {
            Resolved::Graph(_) => 1.0,
            Resolved::Parametric(x, _) => x
                .eval_series(&Jet::variable(t))
                .expect("x(t) defined")
                .derivative(1),
        };
        let j = jet_at(&self.src, t).expect("graph jet");
        arc_element(&j).expect("regular") * dxdt
    }

    /// Arc length from `t0` to `t`.
    pub fn arc(&self, t0: f64, t: f64) -> f64 {
        let pieces = 64;
        let h = (t - t0) / pieces as f64;
        let mut sum = 0.0;
        for i in 0..pieces {
            let mid = t0 + h * (i as f64 + 0.5);
            for (x, w) in GL5 {
                sum += w * self.speed(mid + 0.5 * h * x);
            }
        }
        sum * 0.5 * h
    }

    /// Parameter at arc length `s` from `t0`. Newton's method, continued
    /// over short arc pieces so the first guess never leaves the domain.
    pub fn param_at(&self, t0: f64, s: f64) -> f64 {
        let pieces = 16;
        let (mut ta, mut t) = (t0, t0);
        let ds = s / pieces as f64;
        for _ in 0..pieces {
            t += ds / self.speed(t);
            for _ in 0..60 {
                let step = (self.arc(ta, t) - ds) / self.speed(t);
                t -= step;
                if step.abs() < 1e-15 * (1.0 + t.abs()) {
                    break;
                }
            }
            ta = t;
        }
        t
    }
}

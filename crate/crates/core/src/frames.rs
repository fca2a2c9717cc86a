//! Moving frames along a regular curve.
//!
//! The right frame is the unique linear map `A` with `det A > 0` that sends
//! the jet (translated to the origin) to the normal form
//! `y1 = 0, y2 = 1, y3 = 0, y4 = ±1`. Its inverse has columns `e1, e2` (the
//! left frame), and the Frenet frame is `t = e1`, `n = dt/ds = e2 + q t / 2`.
//!
//! With `k` the normalized fifth derivative and `q = -sigma k`, the frames
//! satisfy
//!
//! ```text
//! d/ds A        = [[-q/2, sigma/3], [-1, -q]] A
//! d/ds (e1, e2) = (e1, e2) [[q/2, -sigma/3], [1, q]]
//! d/ds (t, n, r) = (t, n, r) [[0, -q^2/2 + q_s/2 - sigma/3, 1], [1, 3q/2, 0], [0, 0, 0]]
//! ```
//!
//! The `-sigma` factor comes from `k` carrying `|S2|^(3/2)` in its
//! denominator while the frame vectors carry `|S2|^(1/2)`.

use nalgebra::{Matrix2, Matrix2x3, Vector2};
use serde::{Serialize, Serializer};

use crate::affine::{prolong, AffineMap};
use crate::error::{Error, Result};
use crate::invariants::{
    arc_element, compute_s, curvature, curvature_derivative, is_regular, sigma, SValues,
};
use crate::jet::GraphJet;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameRecord {
    pub base: [f64; 2],
    /// Right frame, rows `alpha1`, `alpha2`.
    #[serde(rename = "A", serialize_with = "rows2")]
    pub a: Matrix2<f64>,
    /// `det A` from the closed form `sqrt(y2 * a22^3)`.
    pub det: f64,
    #[serde(serialize_with = "vec2")]
    pub e1: Vector2<f64>,
    #[serde(serialize_with = "vec2")]
    pub e2: Vector2<f64>,
    #[serde(serialize_with = "vec2")]
    pub t: Vector2<f64>,
    #[serde(serialize_with = "vec2")]
    pub n: Vector2<f64>,
}

fn rows2<S: Serializer>(m: &Matrix2<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
}

fn vec2<S: Serializer>(v: &Vector2<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [v.x, v.y].serialize(s)
}

fn regular_s(j: &GraphJet) -> Result<SValues> {
    if !j.is_finite() || !is_regular(j) {
        return Err(Error::SingularPoint);
    }
    Ok(compute_s(j))
}

/// Linear part of the right frame and its determinant.
pub fn right_frame_matrix(j: &GraphJet) -> Result<(Matrix2<f64>, f64)> {
    let s = regular_s(j)?;
    let (y1, y2, y3) = (j.y(1), j.y(2), j.y(3));
    let abs_s2 = s.s2.abs();
    let root = abs_s2.sqrt();
    let y2_cubed = y2.powi(3);
    let a22 = abs_s2 / (3.0 * y2_cubed);
    let a21 = -y1 * a22;
    let a12 = y3 * root / (3.0 * SQRT3 * y2_cubed);
    let a11 = -(y1 * y3 - 3.0 * y2 * y2) * root / (3.0 * SQRT3 * y2_cubed);
    let det = (y2 * a22.powi(3)).sqrt();
    Ok((Matrix2::new(a11, a12, a21, a22), det))
}

/// Closed-form left frame `(e1, e2)`.
pub fn left_frame(j: &GraphJet) -> Result<(Vector2<f64>, Vector2<f64>)> {
    let s = regular_s(j)?;
    let (y1, y2, y3) = (j.y(1), j.y(2), j.y(3));
    let abs_s2 = s.s2.abs();
    let root = abs_s2.sqrt();
    let e1 = Vector2::new(SQRT3 * y2 / root, SQRT3 * y1 * y2 / root);
    let e2 = Vector2::new(-y2 * y3 / abs_s2, -y2 * (y1 * y3 - 3.0 * y2 * y2) / abs_s2);
    Ok((e1, e2))
}

/// Frenet pair `(t, n)`.
pub fn frenet(j: &GraphJet) -> Result<(Vector2<f64>, Vector2<f64>)> {
    let (e1, e2) = left_frame(j)?;
    let q = -f64::from(sigma(j)?) * curvature(j)?;
    Ok((e1, e2 + e1 * (0.5 * q)))
}

pub fn right_frame(j: &GraphJet) -> Result<FrameRecord> {
    let (a, det) = right_frame_matrix(j)?;
    let (e1, e2) = left_frame(j)?;
    let (t, n) = frenet(j)?;
    Ok(FrameRecord {
        base: [j.x, j.y],
        a,
        det,
        e1,
        e2,
        t,
        n,
    })
}

/// The affine map `p -> A (p - base)` taking the jet to normal form.
pub fn normalizing_map(j: &GraphJet) -> Result<AffineMap> {
    let (a, _) = right_frame_matrix(j)?;
    let shift = -(a * Vector2::new(j.x, j.y));
    AffineMap::from_parts(&a, &shift)
}

/// Normal form `(0, 0 | 0, 1, 0, sigma, k, *)` of the jet and the map producing it.
pub fn normalize_jet(j: &GraphJet) -> Result<(GraphJet, AffineMap)> {
    let map = normalizing_map(j)?;
    Ok((prolong(&map, j)?, map))
}

/// Which moving-equation system to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovingEquation {
    /// `d/ds A = K A`, `K = [[-q/2, sigma/3], [-1, -q]]`, `q = -sigma k`.
    Right,
    /// `d/ds (e1, e2) = (e1, e2) L`, `L = [[q/2, -sigma/3], [1, q]]`.
    Left,
    /// `d/ds (t, n, r) = (t, n, r) X` with the Frenet generator `X`.
    Frenet,
}

/// Generator of the Frenet system, as a 3x3 matrix acting on the right.
pub fn frenet_generator(k: f64, k_s: f64, sigma: i8) -> nalgebra::Matrix3<f64> {
    let sg = f64::from(sigma);
    let (q, q_s) = (-sg * k, -sg * k_s);
    nalgebra::Matrix3::new(
        0.0,
        -0.5 * q * q + 0.5 * q_s - sg / 3.0,
        1.0,
        1.0,
        1.5 * q,
        0.0,
        0.0,
        0.0,
        0.0,
    )
}

fn frame_state(j: &GraphJet, which: MovingEquation) -> Result<Matrix2x3<f64>> {
    let mut m = Matrix2x3::zeros();
    match which {
        MovingEquation::Right => {
            let (a, _) = right_frame_matrix(j)?;
            m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
        }
        MovingEquation::Left => {
            let (e1, e2) = left_frame(j)?;
            m.set_column(0, &e1);
            m.set_column(1, &e2);
        }
        MovingEquation::Frenet => {
            let (t, n) = frenet(j)?;
            m.set_column(0, &t);
            m.set_column(1, &n);
            m.set_column(2, &Vector2::new(j.x, j.y));
        }
    }
    Ok(m)
}

/// Right-hand side of the moving equation at `j`.
fn moving_rhs(j: &GraphJet, which: MovingEquation, state: &Matrix2x3<f64>) -> Result<Matrix2x3<f64>> {
    let sg = f64::from(sigma(j)?);
    let k = -sg * curvature(j)?;
    let mut out = Matrix2x3::zeros();
    match which {
        MovingEquation::Right => {
            let kk = Matrix2::new(-0.5 * k, sg / 3.0, -1.0, -k);
            let a = state.fixed_view::<2, 2>(0, 0).into_owned();
            out.fixed_view_mut::<2, 2>(0, 0).copy_from(&(kk * a));
        }
        MovingEquation::Left => {
            let l = Matrix2::new(0.5 * k, -sg / 3.0, 1.0, k);
            let e = state.fixed_view::<2, 2>(0, 0).into_owned();
            out.fixed_view_mut::<2, 2>(0, 0).copy_from(&(e * l));
        }
        MovingEquation::Frenet => {
            let x = frenet_generator(-sg * k, curvature_derivative(j)?, sigma(j)?);
            out = state * x;
        }
    }
    Ok(out)
}

/// Max-norm residual of a moving equation over `n_samples` evenly spaced
/// points of `[a, b]`.
///
/// `d/ds` is a five-point central difference in `x` with step `h`, divided
/// by `ds/dx`.
pub fn moving_eq_residual<F>(
    curve: F,
    window: (f64, f64),
    which: MovingEquation,
    h: f64,
    n_samples: usize,
) -> Result<f64>
where
    F: Fn(f64) -> Result<GraphJet>,
{
    let (a, b) = window;
    let n = n_samples.max(2);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let j = curve(x)?;
        let state = frame_state(&j, which)?;
        let at = |dx: f64| -> Result<Matrix2x3<f64>> { frame_state(&curve(x + dx)?, which) };
        let dfdx = (at(-2.0 * h)? - at(2.0 * h)? + (at(h)? - at(-h)?) * 8.0) / (12.0 * h);
        let dfds = dfdx / arc_element(&j)?;
        let rhs = moving_rhs(&j, which, &state)?;
        worst = worst.max((dfds - rhs).amax());
    }
    Ok(worst)
}

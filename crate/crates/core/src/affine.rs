//! The general affine group `Aff(2)`: action on points, prolonged action on
//! curve jets, and one-parameter subgroups with their orbits.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::jet::{graph_jet_from_parametric, GraphJet, Jet, LEN, ORDER};

/// `|det| <= DET_TOL` is rejected at construction.
pub const DET_TOL: f64 = 1e-12;
/// `|a11 + a12*y1| <= GAMMA_TOL` means the image leaves graph form.
pub const GAMMA_TOL: f64 = 1e-12;

pub type Point = Vector2<f64>;

/// `p -> L p + b` with invertible `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub x0: f64,
    pub y0: f64,
}

impl AffineMap {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64, x0: f64, y0: f64) -> Result<Self> {
        let m = Self {
            a11,
            a12,
            a21,
            a22,
            x0,
            y0,
        };
        let det = m.det();
        if !det.is_finite() || det.abs() <= DET_TOL {
            return Err(Error::DegenerateMap);
        }
        Ok(m)
    }

    pub fn linear(a11: f64, a12: f64, a21: f64, a22: f64) -> Result<Self> {
        Self::new(a11, a12, a21, a22, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self {
            a11: 1.0,
            a12: 0.0,
            a21: 0.0,
            a22: 1.0,
            x0: 0.0,
            y0: 0.0,
        }
    }

    pub fn translation(x0: f64, y0: f64) -> Self {
        Self {
            x0,
            y0,
            ..Self::identity()
        }
    }

    pub fn from_parts(lin: &Matrix2<f64>, shift: &Vector2<f64>) -> Result<Self> {
        Self::new(lin[(0, 0)], lin[(0, 1)], lin[(1, 0)], lin[(1, 1)], shift.x, shift.y)
    }

    /// Reads the top two rows of a homogeneous matrix.
    pub fn from_homogeneous(m: &Matrix3<f64>) -> Result<Self> {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], m[(0, 2)], m[(1, 2)])
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a21 * self.a12
    }

    /// `+1` for orientation preserving maps, `-1` otherwise.
    pub fn orientation(&self) -> i8 {
        if self.det() > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn linear_part(&self) -> Matrix2<f64> {
        Matrix2::new(self.a11, self.a12, self.a21, self.a22)
    }

    pub fn translation_part(&self) -> Vector2<f64> {
        Vector2::new(self.x0, self.y0)
    }

    pub fn to_homogeneous(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.a11, self.a12, self.x0, self.a21, self.a22, self.y0, 0.0, 0.0, 1.0,
        )
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.linear_part() * p + self.translation_part()
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let lin = self.linear_part() * other.linear_part();
        let shift = self.linear_part() * other.translation_part() + self.translation_part();
        AffineMap {
            a11: lin[(0, 0)],
            a12: lin[(0, 1)],
            a21: lin[(1, 0)],
            a22: lin[(1, 1)],
            x0: shift.x,
            y0: shift.y,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        let lin = Matrix2::new(self.a22, -self.a12, -self.a21, self.a11) / d;
        let shift = -(lin * self.translation_part());
        AffineMap {
            a11: lin[(0, 0)],
            a12: lin[(0, 1)],
            a21: lin[(1, 0)],
            a22: lin[(1, 1)],
            x0: shift.x,
            y0: shift.y,
        }
    }

    /// `a11 + a12*y1`, the factor `dx'/dx` along the curve.
    pub fn gamma(&self, y1: f64) -> f64 {
        self.a11 + self.a12 * y1
    }
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        homogeneous_rows(&self.to_homogeneous()).serialize(s)
    }
}

fn homogeneous_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut rows = [[0.0; 3]; 3];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    rows
}

pub fn apply_point(a: &AffineMap, p: &Point) -> Point {
    a.apply(p)
}

/// Orders 1..5 of the transformed jet from the explicit polynomial formulas.
/// `n_scale` multiplies the order-5 numerator (1.0 for the true formula).
pub(crate) fn closed_form_orders(a: &AffineMap, j: &GraphJet, n_scale: f64) -> Result<[f64; 5]> {
    let (y1, y2, y3, y4, y5) = (j.y(1), j.y(2), j.y(3), j.y(4), j.y(5));
    let g = a.gamma(y1);
    if g.abs() <= GAMMA_TOL {
        return Err(Error::VerticalTangent);
    }
    let delta = a.det();
    let a12 = a.a12;
    let m = g * g * y4 - 10.0 * a12 * g * y2 * y3 + 15.0 * a12 * a12 * y2.powi(3);
    let n = g.powi(3) * y5 - 15.0 * a12 * g * g * y2 * y4 - 10.0 * a12 * g * g * y3 * y3
        + 105.0 * a12 * a12 * g * y2 * y2 * y3
        - 105.0 * a12.powi(3) * y2.powi(4);
    let n = n * n_scale;
    Ok([
        (a.a21 + a.a22 * y1) / g,
        delta * y2 / g.powi(3),
        delta * (a.a11 * y3 + a12 * y1 * y3 - 3.0 * a12 * y2 * y2) / g.powi(5),
        delta * m / g.powi(7),
        delta * n / g.powi(9),
    ])
}

/// Prolonged action using the explicit formulas through order 5; the
/// order-6 entry comes from [`prolong`].
pub fn prolong_closed_form(a: &AffineMap, j: &GraphJet) -> Result<GraphJet> {
    let low = closed_form_orders(a, j, 1.0)?;
    let generic = prolong(a, j)?;
    let base = a.apply(&Point::new(j.x, j.y));
    let mut d = [0.0; ORDER];
    d[..5].copy_from_slice(&low);
    d[5] = generic.y(6);
    Ok(GraphJet::new(base.x, base.y, d))
}

/// Prolonged action by jet transport: the jet is written as the parametric
/// curve `(x0 + t, y(x0 + t))`, mapped by `a`, and re-graphed.
pub fn prolong(a: &AffineMap, j: &GraphJet) -> Result<GraphJet> {
    if a.gamma(j.y(1)).abs() <= GAMMA_TOL {
        return Err(Error::VerticalTangent);
    }
    let xt = Jet::variable(j.x);
    let yt = j.function_jet();
    let xp = xt * a.a11 + yt * a.a12 + a.x0;
    let yp = xt * a.a21 + yt * a.a22 + a.y0;
    graph_jet_from_parametric(&xp, &yp).map_err(|e| match e {
        Error::NotAGraph => Error::VerticalTangent,
        other => other,
    })
}

/// Element of `aff(2)` in homogeneous form (last row zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator(Matrix3<f64>);

/// The canonical generators up to conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum CanonicalForm {
    /// `diag(l1, l2, 0)`
    Diagonal { l1: f64, l2: f64 },
    /// `[[l, 1, 0], [0, l, 0], 0]`
    Jordan { l: f64 },
    /// `[[l, -m, 0], [m, l, 0], 0]`
    Complex { l: f64, m: f64 },
    /// `[[0, 0, a], [0, l, 0], 0]`
    TranslationScaling { a: f64, l: f64 },
    /// `[[0, 1, 0], [0, 0, 1], 0]`
    Parabolic,
}

const CANON_TOL: f64 = 1e-12;

impl Generator {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        if m[(2, 0)] != 0.0 || m[(2, 1)] != 0.0 || m[(2, 2)] != 0.0 {
            return Err(Error::InvalidSpec(
                "generator must have a zero last row".into(),
            ));
        }
        Ok(Self(m))
    }

    /// From the top two rows `[[a, b, c], [d, e, f]]`.
    pub fn from_rows(top: [f64; 3], mid: [f64; 3]) -> Self {
        Self(Matrix3::new(
            top[0], top[1], top[2], mid[0], mid[1], mid[2], 0.0, 0.0, 0.0,
        ))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn canonical_form(&self) -> Option<CanonicalForm> {
        let m = &self.0;
        let z = |i: usize, j: usize| m[(i, j)].abs() <= CANON_TOL;
        let eq = |i: usize, j: usize, v: f64| (m[(i, j)] - v).abs() <= CANON_TOL;
        let no_shift = z(0, 2) && z(1, 2);
        if no_shift && z(0, 1) && z(1, 0) {
            return Some(CanonicalForm::Diagonal {
                l1: m[(0, 0)],
                l2: m[(1, 1)],
            });
        }
        if no_shift && eq(0, 1, 1.0) && z(1, 0) && eq(0, 0, m[(1, 1)]) {
            return Some(CanonicalForm::Jordan { l: m[(0, 0)] });
        }
        if no_shift && eq(0, 0, m[(1, 1)]) && eq(0, 1, -m[(1, 0)]) {
            return Some(CanonicalForm::Complex {
                l: m[(0, 0)],
                m: m[(1, 0)],
            });
        }
        if z(0, 0) && z(0, 1) && z(1, 0) && z(1, 2) {
            return Some(CanonicalForm::TranslationScaling {
                a: m[(0, 2)],
                l: m[(1, 1)],
            });
        }
        if z(0, 0) && eq(0, 1, 1.0) && z(0, 2) && z(1, 0) && z(1, 1) && eq(1, 2, 1.0) {
            return Some(CanonicalForm::Parabolic);
        }
        None
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        homogeneous_rows(&self.0).serialize(s)
    }
}

impl CanonicalForm {
    /// `exp(tX)` written out for the canonical generator.
    pub fn exp(&self, t: f64) -> Matrix3<f64> {
        match *self {
            CanonicalForm::Diagonal { l1, l2 } => {
                Matrix3::new((l1 * t).exp(), 0.0, 0.0, 0.0, (l2 * t).exp(), 0.0, 0.0, 0.0, 1.0)
            }
            CanonicalForm::Jordan { l } => {
                let e = (l * t).exp();
                Matrix3::new(e, t * e, 0.0, 0.0, e, 0.0, 0.0, 0.0, 1.0)
            }
            CanonicalForm::Complex { l, m } => {
                let e = (l * t).exp();
                let (s, c) = (m * t).sin_cos();
                Matrix3::new(e * c, -e * s, 0.0, e * s, e * c, 0.0, 0.0, 0.0, 1.0)
            }
            CanonicalForm::TranslationScaling { a, l } => {
                Matrix3::new(1.0, 0.0, a * t, 0.0, (l * t).exp(), 0.0, 0.0, 0.0, 1.0)
            }
            CanonicalForm::Parabolic => {
                Matrix3::new(1.0, t, 0.5 * t * t, 0.0, 1.0, t, 0.0, 0.0, 1.0)
            }
        }
    }
}

/// Relative agreement required between the closed form and the series.
pub const SUBGROUP_CROSSCHECK_TOL: f64 = 1e-10;

/// `exp(tX)` as an affine map.
///
/// Canonical generators use their closed form; in debug builds that value
/// is checked against the Padé result.
pub fn one_param_subgroup(x: &Generator, t: f64) -> AffineMap {
    let m = subgroup_matrix(x, t);
    AffineMap::from_homogeneous(&m).expect("exp(tX) is invertible")
}

pub(crate) fn subgroup_matrix(x: &Generator, t: f64) -> Matrix3<f64> {
    let series = expm(&(x.0 * t));
    match x.canonical_form() {
        Some(form) => {
            let closed = form.exp(t);
            debug_assert!(
                crosscheck_error(&closed, &series) <= SUBGROUP_CROSSCHECK_TOL,
                "closed form of {form:?} disagrees with series at t = {t}"
            );
            closed
        }
        None => series,
    }
}

/// Max-entry difference relative to `max(1, max-entry)`.
pub fn crosscheck_error(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let scale = a.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    (a - b).iter().fold(0.0f64, |acc, v| acc.max(v.abs())) / scale
}

/// Samples with `|dx/dt| <= ORBIT_VERTICAL_TOL * |velocity|` are skipped.
pub const ORBIT_VERTICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSample {
    pub t: f64,
    pub point: [f64; 2],
    pub jet: GraphJet,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct OrbitCurve {
    pub samples: Vec<OrbitSample>,
    /// Parameters where the orbit has a vertical tangent.
    pub skipped: Vec<f64>,
}

/// Samples the orbit `t -> exp(tX) p`.
///
/// The jet at each sample is exact: `exp((t+u)X) p = exp(tX) Σ u^k X^k p / k!`.
pub fn orbit_curve(x: &Generator, p: &Point, t_grid: &[f64]) -> OrbitCurve {
    let ph = Vector3::new(p.x, p.y, 1.0);
    let mut powers = [Vector3::zeros(); LEN];
    let mut v = ph;
    let mut fact = 1.0;
    for (k, slot) in powers.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *slot = v / fact;
        v = x.0 * v;
    }

    let mut out = OrbitCurve::default();
    for &t in t_grid {
        let g = subgroup_matrix(x, t);
        let mut xc = [0.0; LEN];
        let mut yc = [0.0; LEN];
        for k in 0..LEN {
            let v = g * powers[k];
            xc[k] = v.x;
            yc[k] = v.y;
        }
        let speed = xc[1].hypot(yc[1]);
        if xc[1].abs() <= ORBIT_VERTICAL_TOL * speed {
            out.skipped.push(t);
            continue;
        }
        match graph_jet_from_parametric(&Jet::new(xc), &Jet::new(yc)) {
            Ok(jet) => out.samples.push(OrbitSample {
                t,
                point: [xc[0], yc[0]],
                jet,
            }),
            Err(_) => out.skipped.push(t),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn close(a: &GraphJet, b: &GraphJet, orders: std::ops::RangeInclusive<usize>, tol: f64) {
        for k in orders {
            let (u, v) = (a.y(k), b.y(k));
            assert!(
                (u - v).abs() <= tol * u.abs().max(v.abs()).max(1.0),
                "order {k}: {u} vs {v}"
            );
        }
    }

    #[test]
    fn point_action() {
        let p = Point::new(3.0, 4.0);
        assert_eq!(apply_point(&AffineMap::identity(), &p), p);
        assert_eq!(
            apply_point(&AffineMap::translation(1.0, 2.0), &Point::zeros()),
            Point::new(1.0, 2.0)
        );
        let shear = AffineMap::linear(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(apply_point(&shear, &Point::new(1.0, 1.0)), Point::new(2.0, 1.0));
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(
            AffineMap::linear(1.0, 2.0, 2.0, 4.0),
            Err(Error::DegenerateMap)
        );
    }

    #[test]
    fn compose_and_inverse() {
        assert_eq!(AffineMap::identity().inverse(), AffineMap::identity());
        let inv = AffineMap::translation(1.0, 2.0).inverse();
        assert_eq!((inv.x0, inv.y0), (-1.0, -2.0));

        let a = AffineMap::new(0.3, -1.2, 2.0, 0.7, 5.0, -3.0).unwrap();
        let id = a.compose(&a.inverse());
        let diff = id.to_homogeneous() - Matrix3::identity();
        assert!(diff.amax() < 1e-12);

        // y-scale by 2 and a shear do not commute; compare against 3x3 products
        let scale = AffineMap::linear(1.0, 0.0, 0.0, 2.0).unwrap();
        let shear = AffineMap::linear(1.0, 1.0, 0.0, 1.0).unwrap();
        let ab = scale.compose(&shear);
        let ba = shear.compose(&scale);
        assert_eq!(
            ab.to_homogeneous(),
            scale.to_homogeneous() * shear.to_homogeneous()
        );
        assert_eq!(
            ba.to_homogeneous(),
            shear.to_homogeneous() * scale.to_homogeneous()
        );
        assert_ne!(ab, ba);
    }

    fn cubic_at_one() -> GraphJet {
        GraphJet::new(1.0, 1.0, [3.0, 6.0, 6.0, 0.0, 0.0, 0.0])
    }

    #[test]
    fn closed_form_identity_and_scaling() {
        let j = GraphJet::new(0.2, 0.5, [1.0, -2.0, 0.5, 3.0, 1.5, -0.7]);
        assert_eq!(prolong_closed_form(&AffineMap::identity(), &j).unwrap(), j);

        let scale = AffineMap::linear(1.0, 0.0, 0.0, 2.0).unwrap();
        let p = prolong_closed_form(&scale, &cubic_at_one()).unwrap();
        assert_eq!(&p.d[..5], &[6.0, 12.0, 12.0, 0.0, 0.0]);
        let g = prolong(&scale, &cubic_at_one()).unwrap();
        close(&p, &g, 1..=6, 1e-14);
    }

    #[test]
    fn closed_form_shear_third_order() {
        let shear = AffineMap::linear(1.0, 1.0, 0.0, 1.0).unwrap();
        let j = GraphJet::new(0.0, 0.0, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = prolong_closed_form(&shear, &j).unwrap();
        assert_relative_eq!(p.y(3), -3.0, epsilon = 1e-15);
    }

    #[test]
    fn generic_identity() {
        let j = GraphJet::new(0.2, 0.5, [1.0, -2.0, 0.5, 3.0, 1.5, -0.7]);
        close(&prolong(&AffineMap::identity(), &j).unwrap(), &j, 1..=6, 1e-15);
    }

    #[test]
    fn two_paths_agree_on_exponential() {
        let a = AffineMap::new(1.3, -0.4, 0.6, 0.9, 0.2, -1.0).unwrap();
        let j = GraphJet::new(0.0, 1.0, [1.0; 6]);
        let c = prolong_closed_form(&a, &j).unwrap();
        let g = prolong(&a, &j).unwrap();
        close(&c, &g, 1..=5, 1e-12);
        assert_eq!((c.x, c.y), (g.x, g.y));
    }

    #[test]
    fn vertical_tangent() {
        // a11 + a12*y1 = 1 - 1*1 = 0
        let a = AffineMap::linear(1.0, -1.0, 1.0, 1.0).unwrap();
        let j = GraphJet::new(0.0, 0.0, [1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(prolong_closed_form(&a, &j), Err(Error::VerticalTangent));
        assert_eq!(prolong(&a, &j), Err(Error::VerticalTangent));
    }

    #[test]
    fn subgroup_examples() {
        let zero = Generator::from_rows([0.0; 3], [0.0; 3]);
        assert_eq!(one_param_subgroup(&zero, 3.7), AffineMap::identity());

        let parab = Generator::from_rows([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert_eq!(parab.canonical_form(), Some(CanonicalForm::Parabolic));
        let t = 1.7;
        let m = one_param_subgroup(&parab, t).to_homogeneous();
        let want = Matrix3::new(1.0, t, 0.5 * t * t, 0.0, 1.0, t, 0.0, 0.0, 1.0);
        assert!((m - want).amax() < 1e-14);

        let diag = Generator::from_rows([1.0, 0.0, 0.0], [0.0, 3.0, 0.0]);
        let m = one_param_subgroup(&diag, 2f64.ln()).to_homogeneous();
        let want = Matrix3::new(2.0, 0.0, 0.0, 0.0, 8.0, 0.0, 0.0, 0.0, 1.0);
        assert!((m - want).amax() < 1e-14);
    }

    #[test]
    fn canonical_closed_forms_match_series() {
        let gens = [
            Generator::from_rows([0.4, 0.0, 0.0], [0.0, -1.3, 0.0]),
            Generator::from_rows([0.7, 1.0, 0.0], [0.0, 0.7, 0.0]),
            Generator::from_rows([-0.2, -1.5, 0.0], [1.5, -0.2, 0.0]),
            Generator::from_rows([0.0, 0.0, 2.5], [0.0, 0.8, 0.0]),
            Generator::from_rows([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
        ];
        for g in gens {
            let form = g.canonical_form().expect("canonical");
            for t in [-3.0, -0.5, 0.0, 1e-5, 0.9, 4.0] {
                let err = crosscheck_error(&form.exp(t), &expm(&(g.matrix() * t)));
                assert!(err <= SUBGROUP_CROSSCHECK_TOL, "{form:?} t={t}: {err}");
            }
        }
        let generic = Generator::from_rows([0.3, 0.5, 1.0], [-0.2, 0.1, 2.0]);
        assert_eq!(generic.canonical_form(), None);
    }

    #[test]
    fn subgroup_homomorphism() {
        let g = Generator::from_rows([0.3, 0.5, 1.0], [-0.2, 0.1, 2.0]);
        let (s, t) = (0.7, -1.9);
        let lhs = one_param_subgroup(&g, s + t).to_homogeneous();
        let rhs = one_param_subgroup(&g, s).to_homogeneous() * one_param_subgroup(&g, t).to_homogeneous();
        assert!(crosscheck_error(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn orbit_of_diagonal_is_cubic() {
        let g = Generator::from_rows([1.0, 0.0, 0.0], [0.0, 3.0, 0.0]);
        let orbit = orbit_curve(&g, &Point::new(1.0, 1.0), &[0.0, 0.5]);
        assert!(orbit.skipped.is_empty());
        let s0 = &orbit.samples[0];
        assert_eq!(s0.point, [1.0, 1.0]);
        let want = [3.0, 6.0, 6.0, 0.0, 0.0, 0.0];
        for k in 0..6 {
            assert!((s0.jet.d[k] - want[k]).abs() < 1e-12, "{:?}", s0.jet.d);
        }
        let s1 = &orbit.samples[1];
        assert_relative_eq!(s1.point[0], 0.5f64.exp(), epsilon = 1e-14);
        assert_relative_eq!(s1.point[1], 1.5f64.exp(), epsilon = 1e-13);
        assert_relative_eq!(s1.jet.y(1), 3.0 * s1.point[0].powi(2), max_relative = 1e-12);
    }

    #[test]
    fn orbit_vertical_tangents_are_skipped() {
        let rot = Generator::from_rows([0.0, -1.0, 0.0], [1.0, 0.0, 0.0]);
        let orbit = orbit_curve(&rot, &Point::new(1.0, 0.0), &[0.0, 0.5, std::f64::consts::PI]);
        assert_eq!(orbit.samples.len(), 1);
        assert_eq!(orbit.skipped.len(), 2);
    }
}

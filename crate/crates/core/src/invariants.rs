//! Pointwise differential invariants of a curve jet.
//!
//! `S1 = y2`, `S2 = 3 y2 y4 - 5 y3^2` and
//! `S3 = 9 y2^2 y5 - 45 y2 y3 y4 + 40 y3^3` are relative invariants that pick
//! up powers of `det` and `a11 + a12 y1` under the prolonged action. From them:
//!
//! * arc element `ds/dx = |S2|^(1/2) / (sqrt(3) S1)`,
//! * curvature `k = sqrt(3) S3 / (3 |S2|^(3/2))`,
//! * signature `sigma = sign(S2)`,
//! * modular invariants `T1 = S1^4 / S3` (weight (1, 0)) and
//!   `T2 = S1 S2 / S3` (weight (0, 1)).
//!
//! A point is regular when both `S1` and `S2` are nonzero relative to the
//! magnitude of the terms they are built from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{GraphJet, Jet};

/// Relative threshold separating zero from nonzero `S1`, `S2`.
pub const EPS_REG: f64 = 1e-10;
/// Relative threshold below which `S3` counts as zero.
pub const EPS_S3: f64 = 1e-12;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SValues {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

pub fn compute_s(j: &GraphJet) -> SValues {
    let (y2, y3, y4, y5) = (j.y(2), j.y(3), j.y(4), j.y(5));
    SValues {
        s1: y2,
        s2: 3.0 * y2 * y4 - 5.0 * y3 * y3,
        s3: -45.0 * y2 * y3 * y4 + 9.0 * y2 * y2 * y5 + 40.0 * y3.powi(3),
    }
}

/// Magnitudes that `S1`, `S2`, `S3` are compared against.
///
/// `S1` uses `|y1| + |y2| + |y3|^(2/3) + |y4|^(1/2)`; `S2` and `S3` use the
/// sums of the absolute values of their own terms.
pub fn s_scales(j: &GraphJet) -> SValues {
    let (y1, y2, y3, y4, y5) = (j.y(1), j.y(2), j.y(3), j.y(4), j.y(5));
    SValues {
        s1: y1.abs() + y2.abs() + y3.abs().powf(2.0 / 3.0) + y4.abs().sqrt(),
        s2: 3.0 * (y2 * y4).abs() + 5.0 * y3 * y3,
        s3: 45.0 * (y2 * y3 * y4).abs() + 9.0 * y2 * y2 * y5.abs() + 40.0 * y3.abs().powi(3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularKind {
    LineLike,
    ParabolaLike,
    MixedOrUnknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Singular(SingularKind),
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

fn s1_vanishes(s: &SValues, scale: &SValues) -> bool {
    !(s.s1.abs() > EPS_REG * scale.s1)
}

fn s2_vanishes(s: &SValues, scale: &SValues) -> bool {
    !(s.s2.abs() > EPS_REG * scale.s2)
}

pub fn regularity(j: &GraphJet) -> Regularity {
    let s = compute_s(j);
    let scale = s_scales(j);
    if s1_vanishes(&s, &scale) {
        Regularity::Singular(SingularKind::LineLike)
    } else if s2_vanishes(&s, &scale) {
        Regularity::Singular(SingularKind::ParabolaLike)
    } else {
        Regularity::Regular
    }
}

pub fn is_regular(j: &GraphJet) -> bool {
    regularity(j).is_regular()
}

/// Kind of a curve that is singular at every sample.
pub fn classify_singular(samples: &[GraphJet]) -> Result<SingularKind> {
    if samples.len() < 5 {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: samples.len(),
        });
    }
    let mut all_line = true;
    for (index, j) in samples.iter().enumerate() {
        match regularity(j) {
            Regularity::Regular => return Err(Error::NotAllSingular { index }),
            Regularity::Singular(SingularKind::LineLike) => {}
            Regularity::Singular(_) => all_line = false,
        }
    }
    Ok(if all_line {
        SingularKind::LineLike
    } else {
        SingularKind::ParabolaLike
    })
}

fn require_regular(j: &GraphJet) -> Result<SValues> {
    if !j.is_finite() || !is_regular(j) {
        return Err(Error::SingularPoint);
    }
    Ok(compute_s(j))
}

/// `sign(S2)` at a regular point.
pub fn sigma(j: &GraphJet) -> Result<i8> {
    let s = require_regular(j)?;
    Ok(if s.s2 > 0.0 { 1 } else { -1 })
}

/// `ds/dx`; carries the sign of `S1`.
pub fn arc_element(j: &GraphJet) -> Result<f64> {
    let s = require_regular(j)?;
    Ok(s.s2.abs().sqrt() / (SQRT3 * s.s1))
}

pub fn curvature(j: &GraphJet) -> Result<f64> {
    let s = require_regular(j)?;
    Ok(curvature_from_s(&s))
}

pub(crate) fn curvature_from_s(s: &SValues) -> f64 {
    SQRT3 * s.s3 / (3.0 * s.s2.abs().powf(1.5))
}

/// Curvature as a jet in `x - x0`. Only the constant and linear
/// coefficients are meaningful (the order-5 input has one extra order).
pub fn curvature_jet(j: &GraphJet) -> Result<Jet> {
    require_regular(j)?;
    let y2 = j.derivative_jet(2);
    let y3 = j.derivative_jet(3);
    let y4 = j.derivative_jet(4);
    let y5 = j.derivative_jet(5);
    let s2 = y2 * y4 * 3.0 - y3 * y3 * 5.0;
    let s3 = y2 * y3 * y4 * -45.0 + y2 * y2 * y5 * 9.0 + y3 * y3 * y3 * 40.0;
    let denom = s2.abs()?.powf(1.5)? * 3.0;
    let mut k = (s3 * SQRT3).checked_div(&denom)?;
    for c in k.coeffs.iter_mut().skip(2) {
        *c = 0.0;
    }
    Ok(k)
}

/// `df/ds = (df/dx) / (ds/dx)` for `f` given as a jet in `x - x0`.
pub fn invariant_derivative(f: &Jet, j: &GraphJet) -> Result<f64> {
    Ok(f.derivative(1) / arc_element(j)?)
}

/// `dk/ds`, which needs the full order-6 jet.
pub fn curvature_derivative(j: &GraphJet) -> Result<f64> {
    invariant_derivative(&curvature_jet(j)?, j)
}

/// `(T1, T2) = (S1^4 / S3, S1 S2 / S3)`.
pub fn modular_t(j: &GraphJet) -> Result<(f64, f64)> {
    let s = compute_s(j);
    let scale = s_scales(j);
    if !(s.s3.abs() > EPS_S3 * scale.s3) {
        return Err(Error::S3Zero);
    }
    Ok((s.s1.powi(4) / s.s3, s.s1 * s.s2 / s.s3))
}

/// Everything known about a curve at one point. Quantities that only exist
/// at regular points are `None` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S3")]
    pub s3: f64,
    pub sigma: Option<i8>,
    pub regular: bool,
    pub ds_dx: Option<f64>,
    pub k: Option<f64>,
    pub k_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<SingularKind>,
}

impl InvariantRecord {
    pub fn at(j: &GraphJet) -> Self {
        let s = compute_s(j);
        let reg = regularity(j);
        let mut rec = InvariantRecord {
            x: j.x,
            y: j.y,
            s1: s.s1,
            s2: s.s2,
            s3: s.s3,
            sigma: None,
            regular: reg.is_regular(),
            ds_dx: None,
            k: None,
            k_s: None,
            kind: None,
        };
        match reg {
            Regularity::Regular => {
                rec.sigma = sigma(j).ok();
                rec.ds_dx = arc_element(j).ok();
                rec.k = curvature(j).ok();
                rec.k_s = curvature_derivative(j).ok();
            }
            Regularity::Singular(kind) => rec.kind = Some(kind),
        }
        rec
    }
}

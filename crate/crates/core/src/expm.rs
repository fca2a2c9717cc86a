//! Matrix exponential for 3x3 matrices: scaling and squaring with a
//! diagonal Padé(6) approximant, plain Taylor series for tiny norms.

use nalgebra::Matrix3;

/// Padé(6,6) numerator coefficients; the denominator uses alternating signs.
const PADE6: [f64; 7] = [
    1.0,
    0.5,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15_840.0,
    1.0 / 665_280.0,
];

/// Scaled norm bound for the Padé(6) evaluation.
const THETA: f64 = 0.5;
/// Below this 1-norm the truncated Taylor series is used directly.
const SERIES_CUTOFF: f64 = 1e-4;

pub fn norm1(a: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn taylor(a: &Matrix3<f64>) -> Matrix3<f64> {
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=8 {
        term = term * a / k as f64;
        sum += term;
    }
    sum
}

fn pade6(a: &Matrix3<f64>) -> Matrix3<f64> {
    let id = Matrix3::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let even = id * PADE6[0] + a2 * PADE6[2] + a4 * PADE6[4] + a6 * PADE6[6];
    let odd = a * (id * PADE6[1] + a2 * PADE6[3] + a4 * PADE6[5]);
    let p = even + odd;
    let q = even - odd;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is invertible for scaled norm <= 0.5")
}

/// `exp(a)`.
pub fn expm(a: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = norm1(a);
    if norm < SERIES_CUTOFF {
        return taylor(a);
    }
    let squarings = if norm > THETA {
        (norm / THETA).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let mut r = pade6(&scaled);
    for _ in 0..squarings {
        r = r * r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &Matrix3<f64>) -> f64 {
        m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    #[test]
    fn zero_is_identity() {
        assert_eq!(expm(&Matrix3::zeros()), Matrix3::identity());
    }

    #[test]
    fn diagonal() {
        let a = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -2.0, 0.3));
        let e = expm(&a);
        let want = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            1f64.exp(),
            (-2f64).exp(),
            0.3f64.exp(),
        ));
        assert!(max_abs(&(e - want)) < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        let th = 7.0;
        let a = Matrix3::new(0.0, -th, 0.0, th, 0.0, 0.0, 0.0, 0.0, 0.0);
        let e = expm(&a);
        let want = Matrix3::new(
            th.cos(),
            -th.sin(),
            0.0,
            th.sin(),
            th.cos(),
            0.0,
            0.0,
            0.0,
            1.0,
        );
        assert!(max_abs(&(e - want)) < 1e-13);
    }

    #[test]
    fn series_and_pade_agree_near_cutoff() {
        let a = Matrix3::new(0.3, -0.2, 0.5, 0.1, 0.2, -0.4, 0.0, 0.0, 0.0) * 2.0e-4;
        let d = taylor(&a) - pade6(&a);
        assert!(max_abs(&d) < 4e-16, "{}", max_abs(&d));
    }

    #[test]
    fn inverse_pair() {
        let a = Matrix3::new(0.7, -1.2, 3.0, 2.0, -0.4, 1.0, 0.0, 0.0, 0.0);
        let p = expm(&a) * expm(&-a);
        assert!(max_abs(&(p - Matrix3::identity())) < 1e-13);
    }
}

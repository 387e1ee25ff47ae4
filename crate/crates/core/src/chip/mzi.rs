use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;

/// Symmetric 50:50 coupler `(1/sqrt 2) [[1, i], [i, 1]]`.
pub fn coupler() -> Matrix2<Complex64> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let t = Complex64::new(0.0, FRAC_1_SQRT_2);
    Matrix2::new(r, t, t, r)
}

/// Phase `e^{ix}` on the upper arm.
pub fn phase_shifter(x: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::from_polar(1.0, x),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

/// Transfer matrix of an MZI: external phase, coupler, internal phase, coupler.
///
/// `theta = pi` is the bar state and `theta = 0` the cross state.
pub fn mzi_transfer(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let bs = coupler();
    bs * phase_shifter(theta) * bs * phase_shifter(phi)
}

/// Internal phase whose coupling matches a real rotation by `angle`:
/// `|T[0,0]| = |cos angle|`, `|T[1,0]| = |sin angle|`.
///
/// With this choice `mzi_transfer(theta, phi) = i e^{i theta/2} R(angle) diag(e^{i phi}, -1)`,
/// where `R` is the rotation used by the modal layer.
pub fn internal_phase_for_rotation(angle: f64) -> f64 {
    PI - 2.0 * angle
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn unitarity_error(t: &Matrix2<Complex64>) -> f64 {
        (t.adjoint() * t - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn bar_and_cross() {
        let bar = mzi_transfer(PI, 0.4);
        assert!((bar[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(bar[(1, 0)].norm() < 1e-12);
        let cross = mzi_transfer(0.0, 1.3);
        assert!((cross[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(cross[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn factorizes_into_rotation() {
        for &(angle, phi) in &[(0.3, 0.0), (1.1, 2.0), (FRAC_PI_2, -0.7), (0.0, 5.0)] {
            let theta = internal_phase_for_rotation(angle);
            let t = mzi_transfer(theta, phi);
            let g = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, theta / 2.0);
            let (c, s) = (Complex64::new(angle.cos(), 0.0), Complex64::new(angle.sin(), 0.0));
            let r = Matrix2::new(c, -s, s, c);
            let d = Matrix2::new(
                Complex64::from_polar(1.0, phi),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            );
            let expected = r * d * g;
            let err = (t - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "angle {angle}: {err}");
        }
    }

    #[test]
    fn unitary_for_sample_phases() {
        for i in 0..16 {
            let t = mzi_transfer(0.37 * i as f64, -1.9 + 0.61 * i as f64);
            assert!(unitarity_error(&t) < 1e-12);
        }
    }
}

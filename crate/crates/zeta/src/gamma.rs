//! Lanczos Γ for complex arguments (g = 7, nine terms).

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// 1/Γ(z), entire; exactly zero at nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    1.0 / gamma(z)
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma_real(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.3;
        let g = gamma(Complex64::new(0.0, y));
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
        assert_eq!(rgamma(Complex64::new(-2.0, 0.0)), Complex64::new(0.0, 0.0));
    }
}

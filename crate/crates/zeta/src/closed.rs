use num_complex::Complex64;

use fieldlab_numerics::{lerch_sum, Ladder, NumericsError, KERNEL_TOL};

use crate::{Result, ZetaError};

/// Σ_{n≥0} ((n+b)² + q²)^{−s}: a direct head, then the binomial series in
/// q²/(n+b)² resummed with Hurwitz values.
fn shifted_massive(b: f64, q2: f64, s: Complex64) -> Result<Complex64> {
    let q = q2.sqrt();
    let k = ((2.0 * q + 16.0 - b).ceil().max(0.0)) as usize;
    let mut head = Complex64::new(0.0, 0.0);
    for n in (0..k).rev() {
        let x = (n as f64 + b).powi(2) + q2;
        head += (-s * x.ln()).exp();
    }
    let a = k as f64 + b;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut binom = Complex64::new(1.0, 0.0);
    let mut qp = 1.0;
    for j in 0..400usize {
        if j > 0 {
            binom *= (-s - (j as f64 - 1.0)) / j as f64;
            qp *= q2;
        }
        if binom.norm() == 0.0 {
            break;
        }
        let h = match lerch_sum(2.0 * s + 2.0 * j as f64, a) {
            Ok(v) => v,
            Err(NumericsError::Pole(_)) => return Err(ZetaError::Pole(s)),
            Err(e) => return Err(e.into()),
        };
        let term = binom * qp * h;
        tail += term;
        if q2 == 0.0 || (j > 2 && term.norm() < 1e-17 * (head + tail).norm().max(1e-300)) {
            break;
        }
    }
    Ok(head + tail)
}

/// ζ(s) of the one-factor spectrum {(scale·(n+b))² + m²} ∪ {m² per zero mode},
/// zero eigenvalues excluded.
pub fn ladder_zeta(ladder: &Ladder, mass2: f64, s: Complex64) -> Result<Complex64> {
    let sc = ladder.scale;
    let q2 = mass2 / (sc * sc);
    let mut total = Complex64::new(0.0, 0.0);
    for &b in &ladder.shifts {
        total += shifted_massive(b, q2, s)?;
    }
    total *= (-2.0 * s * sc.ln()).exp();
    if mass2 >= KERNEL_TOL {
        total += ladder.zero_modes as f64 * (-s * mass2.ln()).exp();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn massless_circle_at_two() {
        // 2 Σ n^{-4} = π⁴/45 for L = 2π
        let l = Ladder::new(1.0, vec![1.0, 1.0], 1).unwrap();
        let v = ladder_zeta(&l, 0.0, c(2.0)).unwrap();
        assert!((v.re - PI.powi(4) / 45.0).abs() < 1e-13);
    }

    #[test]
    fn massive_matches_brute_force() {
        let l = Ladder::new(0.7, vec![0.25, 0.75], 0).unwrap();
        let m2 = 2.3;
        let s = Complex64::new(1.7, 0.4);
        let v = ladder_zeta(&l, m2, s).unwrap();
        let mut brute = Complex64::new(0.0, 0.0);
        for n in (0..2_000_000).rev() {
            for b in [0.25, 0.75] {
                let x = (0.7 * (n as f64 + b)).powi(2) + m2;
                brute += (-s * x.ln()).exp();
            }
        }
        // tail Σ_{n≥N} ≈ ∫ 2 (0.7 n)^{-2s} dn
        let nn = 2_000_000.0f64;
        brute += 2.0 * (-2.0 * s * 0.7f64.ln()).exp() * (-(2.0 * s - 1.0) * nn.ln()).exp()
            / (2.0 * s - 1.0);
        assert!((v - brute).norm() < 1e-9, "{v} vs {brute}");
    }

    #[test]
    fn pole_at_half() {
        let l = Ladder::new(1.0, vec![1.0], 0).unwrap();
        assert!(matches!(ladder_zeta(&l, 1.0, c(0.5)), Err(ZetaError::Pole(_))));
    }
}

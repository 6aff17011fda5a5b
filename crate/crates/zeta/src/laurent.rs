use num_complex::Complex64;
use std::f64::consts::PI;

use crate::Result;

/// Leading Laurent data of f at z₀, assuming at most a simple pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Laurent {
    pub residue: Complex64,
    pub finite: Complex64,
    pub derivative: Complex64,
}

/// Trapezoid rule on the circle |z − z₀| = r with M nodes. The aliasing
/// error is of order (r/R)^M where R is the distance to the next singularity.
pub fn laurent_at<F>(f: F, z0: Complex64, r: f64, m: usize) -> Result<Laurent>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut res = Complex64::new(0.0, 0.0);
    let mut fin = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
        let e = Complex64::from_polar(1.0, phi);
        let v = f(z0 + r * e)?;
        res += v * e;
        fin += v;
        der += v / e;
    }
    let mf = m as f64;
    Ok(Laurent {
        residue: res * r / mf,
        finite: fin / mf,
        derivative: der / (r * mf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        // f = 2/(z-1) + 3 + 5(z-1) + (z-1)^2
        let f = |z: Complex64| {
            let w = z - 1.0;
            Ok(2.0 / w + 3.0 + 5.0 * w + w * w)
        };
        let l = laurent_at(f, Complex64::new(1.0, 0.0), 0.2, 32).unwrap();
        assert!((l.residue - 2.0).norm() < 1e-14);
        assert!((l.finite - 3.0).norm() < 1e-14);
        assert!((l.derivative - 5.0).norm() < 1e-13);
    }
}

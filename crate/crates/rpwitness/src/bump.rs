use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// φ(x) = exp(−1/(1 − s²)), s = (x − center)/halfwidth, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub halfwidth: f64,
}

/// Tanh-sinh nodes on (−1, 1) with the bump profile folded into the
/// weights: (s_k, w_k·e^{−1/(1−s_k²)}).
fn nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let h = 1.0 / 64.0;
        let mut out = Vec::new();
        for k in -256i32..=256 {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let s = u.tanh();
            // 1 − s² without cancellation
            let one_minus = 1.0 / u.cosh().powi(2);
            let w = h * FRAC_PI_2 * t.cosh() * one_minus;
            let profile = (-1.0 / one_minus).exp();
            if profile * w > 0.0 {
                out.push((s, w * profile));
            }
        }
        out
    })
}

impl Bump {
    /// Centred at π/2 with support [π/2 − 0.4, π/2 + 0.4].
    pub fn standard() -> Self {
        Bump {
            center: FRAC_PI_2,
            halfwidth: 0.4,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.halfwidth;
        if s.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - s * s)).exp()
        }
    }

    /// ∫ g(x)φ(x) dx.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.halfwidth
            * nodes()
                .iter()
                .map(|&(s, w)| w * g(self.center + self.halfwidth * s))
                .sum::<f64>()
    }

    /// (A(ξ), B(ξ)) with ∫φ(x)e^{iξx} dx = A + iB.
    pub fn fourier(&self, xi: f64) -> (f64, f64) {
        let (mut a, mut b) = (0.0, 0.0);
        for &(s, w) in nodes() {
            let (sn, cs) = (xi * (self.center + self.halfwidth * s)).sin_cos();
            a += w * cs;
            b += w * sn;
        }
        (self.halfwidth * a, self.halfwidth * b)
    }

    /// ∫φ(x)e^{−ax} dx.
    pub fn laplace(&self, a: f64) -> f64 {
        self.integrate(|x| (-a * x).exp())
    }

    /// ∫φ ≈ 0.4440·halfwidth.
    pub fn mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }
}

/// ∫_{−1}^{1} e^{−1/(1−s²)} ds, computed on a separate Gauss–Legendre grid
/// for tests of the node table.
pub fn profile_mass_reference() -> f64 {
    let rule = fieldlab_numerics::gauss_legendre(2000, -1.0, 1.0).expect("fixed rule");
    rule.integrate(|s| (-1.0 / (1.0 - s * s)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_matches_reference() {
        let b = Bump { center: 0.0, halfwidth: 1.0 };
        assert!((b.mass() - profile_mass_reference()).abs() < 1e-13);
        assert!((b.mass() - 0.443993816168).abs() < 1e-11);
    }

    #[test]
    fn fourier_of_symmetric_bump() {
        // centred at 0 the transform is real and even
        let b = Bump { center: 0.0, halfwidth: 0.7 };
        for xi in [0.3, 2.0, 11.0] {
            let (a, bb) = b.fourier(xi);
            assert!(bb.abs() < 1e-15);
            assert!((a - b.fourier(-xi).0).abs() < 1e-15);
        }
        let s = Bump::standard();
        let (a, bb) = s.fourier(1.0);
        // cos is odd about π/2, sin is even
        assert!(a.abs() < 1e-15);
        assert!((bb - s.integrate(|x| x.sin())).abs() < 1e-15);
    }
}

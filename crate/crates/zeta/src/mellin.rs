//! Mellin split of the heat trace at t = 1 with the small-t expansion
//! subtracted analytically.

use num_complex::Complex64;

use fieldlab_numerics::{gauss_legendre, Ladder, TailLaw};

use crate::gamma::rgamma;
use crate::{Result, ZetaError, EULER_GAMMA};

/// Laurent data of the bracket B(s) = Γ(s)ζ(s) at s = 0:
/// B = f_minus1/s + f0 + O(s), so ζ(0) = f_minus1 and ζ'(0) = f0 + γ·f_minus1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinParts {
    pub f_minus1: f64,
    pub f0: f64,
    pub error_estimate: f64,
}

impl MellinParts {
    pub fn zeta0(&self) -> f64 {
        self.f_minus1
    }

    pub fn dzeta0(&self) -> f64 {
        self.f0 + EULER_GAMMA * self.f_minus1
    }
}

struct Law<'a> {
    factors: &'a [Ladder],
    mass2: f64,
    k0: f64,
    terms: Vec<(f64, f64)>,
}

impl<'a> Law<'a> {
    fn new(law: &'a TailLaw) -> Result<Self> {
        let TailLaw::Separable { factors, mass2 } = law else {
            return Err(ZetaError::MissingTailLaw);
        };
        if !law.asymptotics_exact() {
            return Err(ZetaError::Continuation(
                "shift pattern has power-law heat remainder".into(),
            ));
        }
        Ok(Law {
            factors,
            mass2: *mass2,
            k0: law.kernel_dim() as f64,
            terms: law.heat_terms(),
        })
    }

    /// Product of factor thetas minus its small-t polynomial, e^{−m²t} excluded.
    fn remainder(&self, t: f64) -> f64 {
        let asym: Vec<f64> = self
            .factors
            .iter()
            .map(|f| {
                let (c1, c0) = f.heat_coefficients();
                c1 / t.sqrt() + c0
            })
            .collect();
        let rem: Vec<f64> = self.factors.iter().map(|f| f.remainder(t)).collect();
        let n = self.factors.len();
        let mut total = 0.0;
        for i in 0..n {
            let mut p = rem[i];
            for j in 0..i {
                p *= asym[j] + rem[j];
            }
            for a in asym.iter().skip(i + 1) {
                p *= a;
            }
            total += p;
        }
        total
    }

    /// Θ(t) − dim ker.
    fn excess(&self, t: f64) -> f64 {
        if self.k0 > 0.0 {
            let z: Vec<f64> = self.factors.iter().map(|f| f.zero_modes as f64).collect();
            let x: Vec<f64> = self.factors.iter().map(|f| f.nonzero_theta(t)).collect();
            let n = self.factors.len();
            let mut total = 0.0;
            for i in 0..n {
                let mut p = x[i];
                for j in 0..i {
                    p *= z[j] + x[j];
                }
                for zj in z.iter().skip(i + 1) {
                    p *= zj;
                }
                total += p;
            }
            total
        } else {
            (-self.mass2 * t).exp() * self.factors.iter().map(|f| f.theta(t)).product::<f64>()
        }
    }

    fn max_scale(&self) -> f64 {
        self.factors.iter().map(|f| f.scale).fold(0.0, f64::max)
    }
}

fn panels(a: f64, b: f64, width: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n).map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h)).collect()
}

/// ∫ g(u) du over [a, b] on 0.5-wide panels at two orders; (value, |diff|).
fn integrate<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64) -> Result<(Complex64, f64)> {
    let mut hi = Complex64::new(0.0, 0.0);
    let mut lo = Complex64::new(0.0, 0.0);
    for (p, q) in panels(a, b, 0.5) {
        let r1 = gauss_legendre(24, p, q)?;
        let r2 = gauss_legendre(16, p, q)?;
        for (x, w) in r1.nodes.iter().zip(&r1.weights) {
            hi += *w * g(*x);
        }
        for (x, w) in r2.nodes.iter().zip(&r2.weights) {
            lo += *w * g(*x);
        }
    }
    Ok((hi, (hi - lo).norm()))
}

fn u_range(law: &Law, lambda1: f64) -> (f64, f64) {
    // remainder terms carry exp(−π²/(scale²·t))
    let s = law.max_scale();
    let u_min = (std::f64::consts::PI.powi(2) / (48.0 * s * s)).ln().min(0.0);
    let t_max = (50.0 / lambda1).max(2.0);
    (u_min, t_max.ln())
}

/// Σ_α c_α Σ_k (−m²)^k/(k!(s+α+k)), skipping the s+α+k = 0 slots when `skip`.
fn polynomial_part(law: &Law, s: Complex64, skip_zero: bool) -> Result<(Complex64, f64)> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut singular = 0.0;
    for &(alpha, c) in &law.terms {
        let mut coef = c;
        for k in 0..400usize {
            if k > 0 {
                coef *= -law.mass2 / k as f64;
            }
            if coef == 0.0 {
                break;
            }
            let d = s + alpha + k as f64;
            if d.norm() < 1e-13 {
                if skip_zero {
                    singular += coef;
                    continue;
                }
                return Err(ZetaError::Pole(s));
            }
            total += coef / d;
            if k > 4 && coef.abs() < 1e-18 * total.norm().max(1.0) {
                break;
            }
        }
    }
    Ok((total, singular))
}

/// ζ at s = 0 and its derivative from the Mellin split.
pub fn mellin_at_zero(law: &TailLaw, lambda1: f64) -> Result<MellinParts> {
    let l = Law::new(law)?;
    let (poly, singular) = polynomial_part(&l, Complex64::new(0.0, 0.0), true)?;
    let (u_min, u_max) = u_range(&l, lambda1);
    let (ir, er) = integrate(
        &|u: f64| {
            let t = u.exp();
            Complex64::new((-l.mass2 * t).exp() * l.remainder(t), 0.0)
        },
        u_min,
        0.0,
    )?;
    let (iinf, ei) = integrate(&|u: f64| Complex64::new(l.excess(u.exp()), 0.0), 0.0, u_max)?;
    Ok(MellinParts {
        f_minus1: singular - l.k0,
        f0: poly.re + ir.re + iinf.re,
        error_estimate: er + ei + 1e-15 * (poly.norm() + iinf.norm()),
    })
}

fn bracket(l: &Law, lambda1: f64, s: Complex64) -> Result<(Complex64, f64)> {
    let (poly, _) = polynomial_part(l, s, false)?;
    let (u_min, u_max) = u_range(l, lambda1);
    let (ir, er) = integrate(
        &|u: f64| {
            let t = u.exp();
            (s * u).exp() * ((-l.mass2 * t).exp() * l.remainder(t))
        },
        u_min,
        0.0,
    )?;
    let (iinf, ei) = integrate(&|u: f64| (s * u).exp() * l.excess(u.exp()), 0.0, u_max)?;
    let k0_term = if l.k0 > 0.0 {
        if s.norm() < 1e-13 {
            return Err(ZetaError::Pole(s));
        }
        -l.k0 / s
    } else {
        Complex64::new(0.0, 0.0)
    };
    let b = poly + k0_term + ir + iinf;
    Ok((b, er + ei + 1e-15 * b.norm()))
}

/// ζ(s) = B(s)/Γ(s) with its quadrature error estimate.
pub fn mellin_zeta(law: &TailLaw, lambda1: f64, s: Complex64) -> Result<(Complex64, f64)> {
    let l = Law::new(law)?;
    let near_int = s.im.abs() < 1e-9 && s.re <= 1e-9 && (s.re - s.re.round()).abs() < 1e-9;
    if near_int {
        // B has a pole where 1/Γ vanishes; average ζ over a small circle
        let m = 32;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for j in 0..m {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
            let z = Complex64::new(s.re.round(), 0.0) + 0.1 * Complex64::from_polar(1.0, phi);
            let (b, e) = bracket(&l, lambda1, z)?;
            let rg = rgamma(z);
            acc += b * rg;
            err += e * rg.norm();
        }
        return Ok((acc / m as f64, err / m as f64));
    }
    let (b, e) = bracket(&l, lambda1, s)?;
    let rg = rgamma(s);
    Ok((b * rg, e * rg.norm()))
}

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{NumericsError, Result};

/// Eigenvalues below this count as kernel.
pub const KERNEL_TOL: f64 = 1e-12;

/// One separable factor of an arithmetic spectrum: the values
/// (scale·(n + b))² for n ≥ 0 and each shift b > 0, plus `zero_modes` zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub scale: f64,
    pub shifts: Vec<f64>,
    pub zero_modes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailLaw {
    /// The listed eigenvalues are the whole spectrum.
    Finite,
    /// Spectrum is {Σ_f μ_f + mass2 : μ_f ∈ factor f}.
    Separable { factors: Vec<Ladder>, mass2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub n_max: usize,
    /// Every eigenvalue of the full operator below this value is listed.
    pub complete_below: f64,
    pub tail: TailLaw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub kernel_dim: usize,
    pub truncation: Truncation,
}

enum ShiftPattern {
    Pair(f64),
    One,
    Other(f64),
}

fn classify(shifts: &[f64]) -> Vec<ShiftPattern> {
    let mut rest: Vec<f64> = shifts.to_vec();
    rest.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    while let Some(b) = rest.pop() {
        if (b - 1.0).abs() < 1e-14 {
            out.push(ShiftPattern::One);
            continue;
        }
        let partner = rest.iter().position(|&c| (b + c - 1.0).abs() < 1e-12);
        match partner {
            Some(i) => {
                let c = rest.remove(i);
                out.push(ShiftPattern::Pair(c.min(b)));
            }
            None => out.push(ShiftPattern::Other(b)),
        }
    }
    out
}

/// Σ_{n∈Z} exp(−t s²(n+a)²), switching to the Poisson-dual sum for small t.
pub fn theta_z(t: f64, s: f64, a: f64) -> f64 {
    let q = t * s * s;
    if q >= 1.0 {
        let nmax = (40.0 / q).sqrt().ceil() as i64 + 2;
        let a0 = a - a.round();
        let mut sum = 0.0;
        for n in (-nmax..=nmax).rev() {
            let x = n as f64 + a0;
            sum += (-q * x * x).exp();
        }
        sum
    } else {
        let pre = PI.sqrt() / q.sqrt();
        let kmax = (40.0 * q).sqrt().ceil() as i64 + 3;
        let mut sum = 0.0;
        for k in (1..=kmax).rev() {
            let kf = k as f64;
            sum += 2.0 * (-PI * PI * kf * kf / q).exp() * (2.0 * PI * kf * a).cos();
        }
        pre * (1.0 + sum)
    }
}

impl Ladder {
    pub fn new(scale: f64, shifts: Vec<f64>, zero_modes: usize) -> Result<Self> {
        if !(scale > 0.0) || shifts.iter().any(|&b| !(b > 0.0)) {
            return Err(NumericsError::InvalidArgument(
                "ladder needs positive scale and positive shifts".into(),
            ));
        }
        Ok(Ladder {
            scale,
            shifts,
            zero_modes,
        })
    }

    /// Σ e^{−tμ} over the factor's values.
    pub fn theta(&self, t: f64) -> f64 {
        let s = self.scale;
        let mut total = self.zero_modes as f64;
        for p in classify(&self.shifts) {
            total += match p {
                ShiftPattern::Pair(a) => theta_z(t, s, a),
                ShiftPattern::One => 0.5 * (theta_z(t, s, 0.0) - 1.0),
                ShiftPattern::Other(b) => {
                    let q = t * s * s;
                    let nmax = ((40.0 / q).sqrt().ceil() as usize).max(4);
                    (0..=nmax)
                        .rev()
                        .map(|n| (-q * (n as f64 + b).powi(2)).exp())
                        .sum()
                }
            };
        }
        total
    }

    /// θ(t) minus the zero modes, summed without cancellation when t·scale² is
    /// not small.
    pub fn nonzero_theta(&self, t: f64) -> f64 {
        let q = t * self.scale * self.scale;
        if q < 0.2 {
            return self.theta(t) - self.zero_modes as f64;
        }
        let nmax = (46.0 / q).sqrt().ceil() as usize + 2;
        let mut total = 0.0;
        for &b in &self.shifts {
            for n in (0..=nmax).rev() {
                total += (-q * (n as f64 + b).powi(2)).exp();
            }
        }
        total
    }

    /// θ(t) − c₋½ t^{−½} − c₀, by the dual sum for small t.
    pub fn remainder(&self, t: f64) -> f64 {
        let q = t * self.scale * self.scale;
        let (c1, c0) = self.heat_coefficients();
        if q >= 0.5 || !self.asymptotics_exact() {
            return self.nonzero_theta(t) + self.zero_modes as f64 - c1 / t.sqrt() - c0;
        }
        let pre = PI.sqrt() / q.sqrt();
        let kmax = (46.0 * q).sqrt().ceil() as i64 + 2;
        let dual = |a: f64| -> f64 {
            (1..=kmax)
                .rev()
                .map(|k| {
                    let kf = k as f64;
                    2.0 * (-PI * PI * kf * kf / q).exp() * (2.0 * PI * kf * a).cos()
                })
                .sum()
        };
        classify(&self.shifts)
            .iter()
            .map(|p| match *p {
                ShiftPattern::Pair(a) => pre * dual(a),
                ShiftPattern::One => 0.5 * pre * dual(0.0),
                ShiftPattern::Other(_) => unreachable!(),
            })
            .sum()
    }

    /// True when θ(t) = c₋½ t^{−½} + c₀ up to exponentially small terms.
    pub fn asymptotics_exact(&self) -> bool {
        classify(&self.shifts)
            .iter()
            .all(|p| !matches!(p, ShiftPattern::Other(_)))
    }

    /// (c₋½, c₀) of the small-t expansion.
    pub fn heat_coefficients(&self) -> (f64, f64) {
        let c_half = self.shifts.len() as f64 * PI.sqrt() / (2.0 * self.scale);
        let c0 = self.shifts.iter().map(|b| 0.5 - b).sum::<f64>() + self.zero_modes as f64;
        (c_half, c0)
    }

    /// The n smallest values of the factor (with zeros), ascending.
    pub fn values_up_to(&self, bound: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.zero_modes];
        for &b in &self.shifts {
            let mut n = 0usize;
            loop {
                let x = self.scale * (n as f64 + b);
                let mu = x * x;
                if mu > bound {
                    break;
                }
                v.push(mu);
                n += 1;
            }
        }
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TailLaw {
    pub fn theta(&self, t: f64) -> Option<f64> {
        match self {
            TailLaw::Finite => None,
            TailLaw::Separable { factors, mass2 } => {
                Some((-t * mass2).exp() * factors.iter().map(|f| f.theta(t)).product::<f64>())
            }
        }
    }

    /// Small-t terms Σ c·t^α of the product of factor thetas (mass factor
    /// excluded), as (α, c) with α ∈ {0, −½, −1, ...}.
    pub fn heat_terms(&self) -> Vec<(f64, f64)> {
        let TailLaw::Separable { factors, .. } = self else {
            return Vec::new();
        };
        // polynomial in u = t^{-1/2}
        let mut poly = vec![1.0];
        for f in factors {
            let (c1, c0) = f.heat_coefficients();
            let mut next = vec![0.0; poly.len() + 1];
            for (k, &p) in poly.iter().enumerate() {
                next[k] += p * c0;
                next[k + 1] += p * c1;
            }
            poly = next;
        }
        poly.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, &c)| (-(k as f64) / 2.0, c))
            .collect()
    }

    pub fn asymptotics_exact(&self) -> bool {
        match self {
            TailLaw::Finite => true,
            TailLaw::Separable { factors, .. } => factors.iter().all(Ladder::asymptotics_exact),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            TailLaw::Finite => 0,
            TailLaw::Separable { factors, .. } => factors.len(),
        }
    }

    pub fn mass2(&self) -> f64 {
        match self {
            TailLaw::Finite => 0.0,
            TailLaw::Separable { mass2, .. } => *mass2,
        }
    }

    /// Zero eigenvalues of the full operator (only possible when massless).
    pub fn kernel_dim(&self) -> usize {
        match self {
            TailLaw::Finite => 0,
            TailLaw::Separable { factors, mass2 } => {
                if *mass2 > KERNEL_TOL {
                    0
                } else {
                    factors.iter().map(|f| f.zero_modes).product()
                }
            }
        }
    }
}

fn clean(mut values: Vec<f64>) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for v in values.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-9 * scale {
                return Err(NumericsError::InvalidArgument(format!(
                    "negative eigenvalue {v}"
                )));
            }
            *v = 0.0;
        }
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

impl Spectrum {
    /// A complete finite spectrum. Round-off negatives are clamped to zero.
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        let eigenvalues = clean(values)?;
        let kernel_dim = eigenvalues.iter().filter(|&&v| v < KERNEL_TOL).count();
        Ok(Spectrum {
            eigenvalues,
            kernel_dim,
            truncation: Truncation {
                n_max: 0,
                complete_below: f64::INFINITY,
                tail: TailLaw::Finite,
            },
        })
    }

    /// A listed initial segment of an infinite spectrum with a known law.
    pub fn truncated(
        values: Vec<f64>,
        n_max: usize,
        complete_below: f64,
        tail: TailLaw,
    ) -> Result<Self> {
        let eigenvalues = clean(values)?;
        let kernel_dim = eigenvalues.iter().filter(|&&v| v < KERNEL_TOL).count();
        Ok(Spectrum {
            eigenvalues,
            kernel_dim,
            truncation: Truncation {
                n_max,
                complete_below,
                tail,
            },
        })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.truncation.tail, TailLaw::Finite)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn positive(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().copied().filter(|&v| v >= KERNEL_TOL)
    }

    /// Grouped (value, multiplicity), merging values within `rel_tol`.
    pub fn multiplicities(&self, rel_tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some((w, m)) if (v - *w).abs() <= rel_tol * v.abs().max(1.0) => *m += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// Add a constant to every eigenvalue (mass shift), updating the law.
    pub fn shifted(&self, m2: f64) -> Result<Self> {
        let tail = match &self.truncation.tail {
            TailLaw::Finite => TailLaw::Finite,
            TailLaw::Separable { factors, mass2 } => TailLaw::Separable {
                factors: factors.clone(),
                mass2: mass2 + m2,
            },
        };
        Spectrum::truncated(
            self.eigenvalues.iter().map(|v| v + m2).collect(),
            self.truncation.n_max,
            self.truncation.complete_below + m2,
            tail,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_branches_agree() {
        for &a in &[0.0, 0.2, 0.5] {
            for &s in &[0.5, 1.0, 3.0] {
                // q = 1 boundary from both sides
                let t = 1.0 / (s * s);
                let direct: f64 = (-200..=200)
                    .map(|n| (-t * s * s * (n as f64 + a).powi(2)).exp())
                    .sum();
                assert!((theta_z(t, s, a) - direct).abs() < 1e-14 * direct);
                let t2 = 0.999 * t;
                let direct2: f64 = (-200..=200)
                    .map(|n| (-t2 * s * s * (n as f64 + a).powi(2)).exp())
                    .sum();
                assert!((theta_z(t2, s, a) - direct2).abs() < 1e-13 * direct2);
            }
        }
    }

    #[test]
    fn interval_ladder_theta() {
        let l = Ladder::new(1.0, vec![1.0], 0).unwrap();
        for &t in &[0.01, 0.3, 2.0] {
            let direct: f64 = (1..5000).map(|n| (-t * (n * n) as f64).exp()).sum();
            assert!((l.theta(t) - direct).abs() < 1e-12 * direct.max(1.0));
        }
        let (c1, c0) = l.heat_coefficients();
        assert!((c1 - PI.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(c0, -0.5);
    }

    #[test]
    fn remainder_branches_agree() {
        let l = Ladder::new(0.8, vec![0.3, 0.7, 1.0, 1.0], 1).unwrap();
        let (c1, c0) = l.heat_coefficients();
        for &t in &[0.05, 0.3, 0.5 / 0.64, 0.4999 / 0.64, 1.0, 3.0] {
            let direct = l.theta(t) - c1 / t.sqrt() - c0;
            assert!((l.remainder(t) - direct).abs() < 1e-12, "t={t}");
            assert!((l.nonzero_theta(t) + 1.0 - l.theta(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn unpaired_shifts_flagged() {
        let l = Ladder::new(1.0, vec![0.3], 0).unwrap();
        assert!(!l.asymptotics_exact());
        let l = Ladder::new(1.0, vec![0.3, 0.7, 1.0], 0).unwrap();
        assert!(l.asymptotics_exact());
    }

    #[test]
    fn product_heat_terms() {
        // torus 2π x 2π, massless: θ(t) ≈ π/t
        let c = Ladder::new(1.0, vec![1.0, 1.0], 1).unwrap();
        let law = TailLaw::Separable {
            factors: vec![c.clone(), c],
            mass2: 0.0,
        };
        let terms = law.heat_terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, -1.0);
        assert!((terms[0].1 - PI).abs() < 1e-14);
        assert_eq!(law.kernel_dim(), 1);
    }

    #[test]
    fn finite_spectrum_bookkeeping() {
        let s = Spectrum::finite(vec![2.0, -1e-15, 1.0, 1.0]).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(s.kernel_dim, 1);
        assert_eq!(s.multiplicities(1e-12), vec![(0.0, 1), (1.0, 2), (2.0, 1)]);
        assert!(Spectrum::finite(vec![-1.0]).is_err());
    }
}

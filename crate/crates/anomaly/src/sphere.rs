//! Functions on the unit sphere S² ⊂ R³ with exact first and second
//! derivatives. The round metric is the Fubini–Study metric of the
//! Riemann sphere under inverse stereographic projection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{AnomalyError, Result};

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn axpy(a: f64, x: Vec3, y: Vec3) -> Vec3 {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Great-circle distance on the unit sphere.
pub fn geodesic_distance(a: Vec3, b: Vec3) -> f64 {
    let c = norm(sub(a, b));
    let s = norm([a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    2.0 * c.atan2(s)
}

/// A point of the Riemann sphere, stored as a unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(pub Vec3);

impl SpherePoint {
    /// z ↦ (2Re z, 2Im z, 1 − |z|²)/(1 + |z|²); z = 0 is the north pole.
    pub fn from_plane(z: Complex64) -> Self {
        if z.norm_sqr() > 1.0 {
            // through w = 1/z, so that huge |z| does not overflow
            let w = z.inv();
            let s2 = w.norm_sqr();
            let d = 1.0 + s2;
            return SpherePoint([2.0 * w.re / d, -2.0 * w.im / d, (s2 - 1.0) / d]);
        }
        let r2 = z.norm_sqr();
        let d = 1.0 + r2;
        SpherePoint([2.0 * z.re / d, 2.0 * z.im / d, (1.0 - r2) / d])
    }

    pub fn infinity() -> Self {
        SpherePoint([0.0, 0.0, -1.0])
    }

    pub fn north() -> Self {
        SpherePoint([0.0, 0.0, 1.0])
    }

    pub fn antipode(&self) -> Self {
        let p = self.0;
        SpherePoint([-p[0], -p[1], -p[2]])
    }

    /// Orthonormal tangent frame (e1, e2) with e1 × e2 = p.
    pub fn frame(&self) -> (Vec3, Vec3) {
        let p = self.0;
        let a = if p[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
        let t = axpy(-dot(a, p), p, a);
        let n = norm(t);
        let e1 = [t[0] / n, t[1] / n, t[2] / n];
        let e2 = [
            p[1] * e1[2] - p[2] * e1[1],
            p[2] * e1[0] - p[0] * e1[2],
            p[0] * e1[1] - p[1] * e1[0],
        ];
        (e1, e2)
    }

    /// Point at geodesic distance ρ in direction α.
    pub fn ray(&self, frame: &(Vec3, Vec3), rho: f64, alpha: f64) -> Vec3 {
        let (s, c) = rho.sin_cos();
        let (sa, ca) = alpha.sin_cos();
        let p = self.0;
        let (e1, e2) = frame;
        [
            c * p[0] + s * (ca * e1[0] + sa * e2[0]),
            c * p[1] + s * (ca * e1[1] + sa * e2[1]),
            c * p[2] + s * (ca * e1[2] + sa * e2[2]),
        ]
    }
}

fn pw(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

/// Polynomial in the ambient coordinates, restricted to the sphere.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly3 {
    pub terms: Vec<([u32; 3], f64)>,
}

/// Value, ambient gradient and ambient Hessian at a point.
struct Jet {
    v: f64,
    g: Vec3,
    h: [[f64; 3]; 3],
}

impl Poly3 {
    pub fn constant(c: f64) -> Self {
        Poly3 { terms: vec![([0, 0, 0], c)] }
    }

    pub fn linear(a: Vec3) -> Self {
        Poly3 {
            terms: vec![([1, 0, 0], a[0]), ([0, 1, 0], a[1]), ([0, 0, 1], a[2])],
        }
    }

    pub fn monomial(exps: [u32; 3], c: f64) -> Self {
        Poly3 { terms: vec![(exps, c)] }
    }

    pub fn plus(mut self, other: &Poly3) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for t in &mut self.terms {
            t.1 *= s;
        }
        self
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e[0] + e[1] + e[2]).max().unwrap_or(0)
    }

    /// f(−x).
    pub fn antipodal(&self) -> Self {
        Poly3 {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e, if (e[0] + e[1] + e[2]) % 2 == 1 { -c } else { c }))
                .collect(),
        }
    }

    pub fn eval(&self, p: Vec3) -> f64 {
        self.terms
            .iter()
            .map(|&(e, c)| c * pw(p[0], e[0]) * pw(p[1], e[1]) * pw(p[2], e[2]))
            .sum()
    }

    fn jet(&self, p: Vec3) -> Jet {
        let mut j = Jet {
            v: 0.0,
            g: [0.0; 3],
            h: [[0.0; 3]; 3],
        };
        for &(e, c) in &self.terms {
            // d^k x^n = n(n−1)…x^{n−k}
            let d = |i: usize, k: u32| -> f64 {
                let n = e[i];
                if k > n {
                    return 0.0;
                }
                let f: f64 = (0..k).map(|m| (n - m) as f64).product();
                f * pw(p[i], n - k)
            };
            let base = [d(0, 0), d(1, 0), d(2, 0)];
            let first = [d(0, 1), d(1, 1), d(2, 1)];
            let second = [d(0, 2), d(1, 2), d(2, 2)];
            j.v += c * base[0] * base[1] * base[2];
            for a in 0..3 {
                let mut g = c * first[a];
                for b in 0..3 {
                    if b != a {
                        g *= base[b];
                    }
                }
                j.g[a] += g;
                for b in 0..3 {
                    let mut h = c;
                    for k in 0..3 {
                        h *= if a == b {
                            if k == a {
                                second[k]
                            } else {
                                base[k]
                            }
                        } else if k == a || k == b {
                            first[k]
                        } else {
                            base[k]
                        };
                    }
                    j.h[a][b] += h;
                }
            }
        }
        j
    }
}

/// Tangential gradient and Laplace–Beltrami from an ambient jet.
fn sphere_calculus(p: Vec3, j: &Jet) -> (Vec3, f64) {
    let pg = dot(p, j.g);
    let grad = axpy(-pg, p, j.g);
    let tr = j.h[0][0] + j.h[1][1] + j.h[2][2];
    let mut php = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            php += p[a] * j.h[a][b] * p[b];
        }
    }
    (grad, tr - php - 2.0 * pg)
}

/// coef · log Q(x), with Q > 0 on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogPoly {
    pub coef: f64,
    pub q: Poly3,
}

/// γ · log|x − n|: a cone point of exponent γ at n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordalLog {
    pub gamma: f64,
    pub point: SpherePoint,
}

/// Sum of a polynomial, log-polynomials and chordal logarithms. Smooth
/// iff `cones` is empty; the Laplacian returned away from the cones is
/// the regular part (no point masses).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SphereFn {
    #[serde(default)]
    pub poly: Poly3,
    #[serde(default)]
    pub log_polys: Vec<LogPoly>,
    #[serde(default)]
    pub cones: Vec<ChordalLog>,
}

impl SphereFn {
    pub fn zero() -> Self {
        SphereFn::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_poly(Poly3::constant(c))
    }

    pub fn from_poly(poly: Poly3) -> Self {
        SphereFn {
            poly,
            ..Default::default()
        }
    }

    pub fn with_log_poly(mut self, coef: f64, q: Poly3) -> Self {
        self.log_polys.push(LogPoly { coef, q });
        self
    }

    pub fn with_cone(mut self, point: SpherePoint, gamma: f64) -> Self {
        self.cones.push(ChordalLog { gamma, point });
        self
    }

    pub fn plus(&self, other: &SphereFn) -> SphereFn {
        let mut out = self.clone();
        out.poly = out.poly.plus(&other.poly);
        out.log_polys.extend(other.log_polys.iter().cloned());
        out.cones.extend(other.cones.iter().copied());
        out
    }

    pub fn scaled(&self, s: f64) -> SphereFn {
        SphereFn {
            poly: self.poly.clone().scaled(s),
            log_polys: self
                .log_polys
                .iter()
                .map(|l| LogPoly { coef: l.coef * s, q: l.q.clone() })
                .collect(),
            cones: self
                .cones
                .iter()
                .map(|c| ChordalLog { gamma: c.gamma * s, point: c.point })
                .collect(),
        }
    }

    pub fn minus(&self, other: &SphereFn) -> SphereFn {
        self.plus(&other.scaled(-1.0))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| c.gamma == 0.0)
    }

    /// f(−x).
    pub fn antipodal(&self) -> SphereFn {
        SphereFn {
            poly: self.poly.antipodal(),
            log_polys: self
                .log_polys
                .iter()
                .map(|l| LogPoly { coef: l.coef, q: l.q.antipodal() })
                .collect(),
            cones: self
                .cones
                .iter()
                .map(|c| ChordalLog { gamma: c.gamma, point: c.point.antipode() })
                .collect(),
        }
    }

    pub fn value(&self, p: Vec3) -> f64 {
        self.value_skip(p, None)
    }

    /// Value with the chordal log of cone `skip` left out.
    pub fn value_without(&self, p: Vec3, skip: usize) -> f64 {
        self.value_skip(p, Some(skip))
    }

    fn value_skip(&self, p: Vec3, skip: Option<usize>) -> f64 {
        let mut v = self.poly.eval(p);
        for l in &self.log_polys {
            v += l.coef * l.q.eval(p).ln();
        }
        for (i, c) in self.cones.iter().enumerate() {
            if Some(i) != skip {
                v += c.gamma * norm(sub(p, c.point.0)).ln();
            }
        }
        v
    }

    /// (value, tangential gradient, regular Laplacian).
    pub fn eval(&self, p: Vec3) -> (f64, Vec3, f64) {
        self.eval_skip(p, None)
    }

    /// Value at geodesic polar coordinates (ρ, α) around cone `j`, with
    /// that cone's log taken as log(2 sin(ρ/2)) so that it stays exact
    /// as ρ → 0.
    pub fn value_polar(&self, j: usize, frame: &(Vec3, Vec3), rho: f64, alpha: f64) -> f64 {
        let c = &self.cones[j];
        let p = c.point.ray(frame, rho, alpha);
        self.value_skip(p, Some(j)) + c.gamma * (2.0 * (0.5 * rho).sin()).ln()
    }

    /// [`SphereFn::eval`] in polar coordinates around cone `j`.
    pub fn eval_polar(&self, j: usize, frame: &(Vec3, Vec3), rho: f64, alpha: f64) -> (f64, Vec3, f64) {
        let c = &self.cones[j];
        let n = c.point.0;
        let p = c.point.ray(frame, rho, alpha);
        let (v, g, l) = self.eval_skip(p, Some(j));
        let (ca, sa) = (alpha.cos(), alpha.sin());
        let (cr, sr) = (rho.cos(), rho.sin());
        let t = [0, 1, 2].map(|i| -sr * n[i] + cr * (ca * frame.0[i] + sa * frame.1[i]));
        let k = 0.5 * c.gamma / (0.5 * rho).tan();
        (
            v + c.gamma * (2.0 * (0.5 * rho).sin()).ln(),
            axpy(k, t, g),
            l - 0.5 * c.gamma,
        )
    }

    fn eval_skip(&self, p: Vec3, skip: Option<usize>) -> (f64, Vec3, f64) {
        let j = self.poly.jet(p);
        let (mut grad, mut lap) = sphere_calculus(p, &j);
        let mut v = j.v;
        for l in &self.log_polys {
            let q = l.q.jet(p);
            let inv = 1.0 / q.v;
            let mut h = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    h[a][b] = q.h[a][b] * inv - q.g[a] * q.g[b] * inv * inv;
                }
            }
            let lj = Jet {
                v: q.v.ln(),
                g: [q.g[0] * inv, q.g[1] * inv, q.g[2] * inv],
                h,
            };
            let (g2, l2) = sphere_calculus(p, &lj);
            v += l.coef * lj.v;
            grad = axpy(l.coef, g2, grad);
            lap += l.coef * l2;
        }
        for (i, c) in self.cones.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let d = sub(p, c.point.0);
            let d2 = dot(d, d);
            v += 0.5 * c.gamma * d2.ln();
            // ∇ log|x − n| = (x − n)/|x − n|² − x/2 on the sphere
            let g = axpy(-0.5, p, [d[0] / d2, d[1] / d2, d[2] / d2]);
            grad = axpy(c.gamma, g, grad);
            lap -= 0.5 * c.gamma;
        }
        (v, grad, lap)
    }

    /// Fails when a log-polynomial is not positive on a test grid.
    pub fn validate(&self) -> Result<()> {
        if self.log_polys.is_empty() {
            return Ok(());
        }
        let n = 48;
        for i in 0..=n {
            let th = std::f64::consts::PI * i as f64 / n as f64;
            for k in 0..2 * n {
                let ph = std::f64::consts::PI * k as f64 / n as f64;
                let p = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                for l in &self.log_polys {
                    let q = l.q.eval(p);
                    if !(q > 0.0) {
                        return Err(AnomalyError::InvalidArgument(format!(
                            "log argument not positive ({q:e}) at {p:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Conformal factor of f*g_FS against g_FS for f(z) = z^d: cones of
/// exponent d − 1 at 0 and ∞.
pub fn power_pullback(d: u32) -> Result<SphereFn> {
    if d < 1 {
        return Err(AnomalyError::InvalidArgument("degree must be >= 1".into()));
    }
    let df = d as f64;
    // (1+Z)^d + (1−Z)^d, odd powers of Z cancel
    let mut q = Poly3::default();
    let mut binom = 1.0;
    for k in 0..=d {
        if k % 2 == 0 {
            q.terms.push(([0, 0, k], 2.0 * binom));
        }
        binom = binom * (df - k as f64) / (k as f64 + 1.0);
    }
    let g = df - 1.0;
    let mut s = SphereFn::constant((2.0 * df).ln() - g * 2f64.ln()).with_log_poly(-1.0, q);
    if d > 1 {
        s = s
            .with_cone(SpherePoint::north(), g)
            .with_cone(SpherePoint::infinity(), g);
    }
    Ok(s)
}

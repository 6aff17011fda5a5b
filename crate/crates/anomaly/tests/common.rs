#![allow(dead_code)]

use std::f64::consts::PI;

use fieldlab_anomaly::{integrate, Cap, ConicalSurfaceData, SphereFn, SphereQuad, Vec3};
use fieldlab_anomaly::{quad::converged, sphere::dot};

/// ℛA(g̃, g_FS) via Green's identity on the excised sphere:
/// (1/24π)∫σ(2 − Δσ) + (1/12)Σ[(γ²/(γ+1) − γ)φ_j − γ² log(γ+1)/(γ+1)].
pub fn closed_form_fs(data: &ConicalSurfaceData) -> f64 {
    let s = &data.sigma;
    let f = |p: Vec3| {
        let (v, _, l) = s.eval(p);
        v * (2.0 - l)
    };
    let tiny = |_: f64| 1e-13;
    let locals: Vec<_> = (0..s.cones.len())
        .map(|j| {
            let frame = s.cones[j].point.frame();
            move |r: f64, a: f64| {
                let (v, _, l) = s.eval_polar(j, &frame, r, a);
                v * (2.0 - l)
            }
        })
        .collect();
    let caps: Vec<Cap<'_>> = s
        .cones
        .iter()
        .zip(&locals)
        .map(|(c, l)| Cap { center: c.point, inner: &tiny, local: Some(l) })
        .collect();
    let (bulk, _) = converged(&SphereQuad::default(), 0.0, |q| integrate(&f, &caps, q)).unwrap();
    let mut local = 0.0;
    for (j, (_, g)) in data.divisor().into_iter().enumerate() {
        let phi = data.regular_potential(j).unwrap();
        local += (g * g / (g + 1.0) - g) * phi - g * g * (g + 1.0).ln() / (g + 1.0);
    }
    bulk / (24.0 * PI) + local / 12.0
}

/// (1/24π)∫|∇σ|² + 2(1 − Δu)σ for smooth data, brute force.
pub fn smooth_brute(sigma: &SphereFn, u: &SphereFn) -> f64 {
    let f = |p: Vec3| {
        let (s, g, _) = sigma.eval(p);
        let (_, _, l) = u.eval(p);
        dot(g, g) + 2.0 * (1.0 - l) * s
    };
    integrate(&f, &[], &SphereQuad::default().refined(2.0)).unwrap() / (24.0 * PI)
}

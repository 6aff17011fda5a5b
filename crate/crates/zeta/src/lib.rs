//! Spectral zeta functions and regularized determinants.

pub mod bfk;
pub mod closed;
pub mod det;
pub mod gamma;
pub mod laurent;
pub mod mellin;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use fieldlab_numerics::{Spectrum, TailLaw, KERNEL_TOL};

pub use bfk::{bfk_torus_check, dn_mode_scalar, BfkReport};
pub use closed::ladder_zeta;
pub use det::{
    det_fredholm, det_zeta, factorization_check, log_det_mellin, log_det_zeta, DetZeta, DiagonalPerturbation,
    FactorizationReport,
};
pub use laurent::{laurent_at, Laurent};
pub use mellin::{mellin_at_zero, mellin_zeta, MellinParts};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZetaError {
    #[error("pole of the zeta function at s = {0}")]
    Pole(Complex64),
    #[error("infinite spectrum without a usable tail law")]
    MissingTailLaw,
    #[error("direct sum does not converge at Re s = {0}")]
    Divergent(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

impl From<fieldlab_spectra::SpectraError> for ZetaError {
    fn from(e: fieldlab_spectra::SpectraError) -> Self {
        ZetaError::InvalidArgument(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZetaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMethod {
    DirectSum,
    MellinSplit,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaEvaluation {
    pub s: Complex64,
    pub value: Complex64,
    pub method: ZetaMethod,
    pub error_estimate: f64,
}

/// Smallest positive listed eigenvalue.
pub(crate) fn lambda_min(sp: &Spectrum) -> Option<f64> {
    sp.positive().next()
}

fn cpow(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

/// ζ(s) = Σ_{λ>0} λ^{−s}, choosing exact summation for finite spectra, the
/// shifted-sum closed form for one-factor laws and the Mellin split otherwise.
pub fn zeta_of_spectrum(sp: &Spectrum, s: Complex64) -> Result<ZetaEvaluation> {
    let method = match &sp.truncation.tail {
        TailLaw::Finite => ZetaMethod::DirectSum,
        TailLaw::Separable { factors, .. } if factors.len() == 1 => ZetaMethod::ClosedForm,
        TailLaw::Separable { .. } => ZetaMethod::MellinSplit,
    };
    zeta_with(sp, s, method)
}

pub fn zeta_with(sp: &Spectrum, s: Complex64, method: ZetaMethod) -> Result<ZetaEvaluation> {
    match method {
        ZetaMethod::DirectSum => direct_sum(sp, s),
        ZetaMethod::ClosedForm => {
            let TailLaw::Separable { factors, mass2 } = &sp.truncation.tail else {
                return direct_sum(sp, s);
            };
            if factors.len() != 1 {
                return Err(ZetaError::InvalidArgument(
                    "closed form needs a one-factor law".into(),
                ));
            }
            let value = ladder_zeta(&factors[0], *mass2, s)?;
            Ok(ZetaEvaluation {
                s,
                value,
                method,
                error_estimate: 1e-14 * value.norm().max(1.0),
            })
        }
        ZetaMethod::MellinSplit => {
            let lmin = lambda_min(sp).ok_or(ZetaError::MissingTailLaw)?;
            let (value, err) = mellin_zeta(&sp.truncation.tail, lmin, s)?;
            Ok(ZetaEvaluation {
                s,
                value,
                method,
                error_estimate: err,
            })
        }
    }
}

fn direct_sum(sp: &Spectrum, s: Complex64) -> Result<ZetaEvaluation> {
    let bound = sp.truncation.complete_below;
    let mut terms: Vec<Complex64> = sp
        .positive()
        .filter(|&l| l < bound)
        .map(|l| cpow(l, s))
        .collect();
    terms.reverse();
    let mut value: Complex64 = terms.iter().sum();
    let mut err = 1e-16 * terms.iter().map(|z| z.norm()).sum::<f64>();
    if let TailLaw::Separable { .. } = &sp.truncation.tail {
        let law = &sp.truncation.tail;
        let d = law.dimension() as f64;
        if s.re <= d / 2.0 {
            return Err(ZetaError::Divergent(s.re));
        }
        let lead = law
            .heat_terms()
            .into_iter()
            .find(|&(a, _)| a == -d / 2.0)
            .map(|(_, c)| c)
            .ok_or(ZetaError::MissingTailLaw)?;
        // Weyl: N(λ) ≈ c λ^{d/2}/Γ(d/2+1)
        let g = gamma::gamma_real(d / 2.0);
        let tail = lead / g * cpow(bound, s - d / 2.0) / (s - d / 2.0);
        value += tail;
        err += tail.norm();
    }
    let _ = KERNEL_TOL;
    Ok(ZetaEvaluation {
        s,
        value,
        method: ZetaMethod::DirectSum,
        error_estimate: err,
    })
}

use serde::Serialize;

/// Usage errors exit with 2; failures inside a module exit with 1.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CliError {
    #[error("usage: {message}")]
    Usage { message: String },
    #[error("{module}: {message}")]
    Module {
        module: String,
        /// Variant name of the inner error, e.g. "Precondition".
        variant: String,
        message: String,
    },
    #[error("io: {message}")]
    Io { message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage { message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

fn variant_of<E: std::fmt::Debug>(e: &E) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("")
        .to_string()
}

macro_rules! module_error {
    ($($ty:path => $name:literal),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Module {
                    module: $name.into(),
                    variant: variant_of(&e),
                    message: e.to_string(),
                }
            }
        }
    )*};
}

module_error! {
    fieldlab_numerics::NumericsError => "numerics",
    fieldlab_spectra::SpectraError => "spectra",
    fieldlab_zeta::ZetaError => "zeta",
    fieldlab_transfer::TransferError => "transfer",
    fieldlab_covers::CoversError => "covers",
    fieldlab_gaussnet::GaussError => "gff",
    fieldlab_anomaly::AnomalyError => "anomaly",
    fieldlab_rpwitness::RpError => "rp",
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io { message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io { message: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io { message: e.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

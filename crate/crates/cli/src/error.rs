//! Failure taxonomy of the driver. Every error leaves the process through
//! one machine-readable JSON line on stderr and a category-specific exit
//! code, so scripts can branch on what went wrong without scraping text.

use bsp_core::CoreError;
use bsp_engine::EngineError;
use bsp_prune::PruneError;
use bsp_tuner::TunerError;
use bspc::BspcError;
use thiserror::Error;

/// Exit codes: 0 success, 2 usage, 3 unreadable/corrupt inputs,
/// 4 infeasible configuration, 5 numeric divergence, 6 verification
/// failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Divergence(String),
    #[error("{0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Infeasible(_) => 4,
            CliError::Divergence(_) => 5,
            CliError::Verification(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Infeasible(_) => "infeasible",
            CliError::Divergence(_) => "divergence",
            CliError::Verification(_) => "verification",
        }
    }

    /// The single stderr line emitted before a nonzero exit.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }

    /// Prefixes a file-path context onto an input error.
    pub fn in_file(path: &std::path::Path, err: impl Into<CliError>) -> CliError {
        let err = err.into();
        let msg = format!("{}: {}", path.display(), err);
        match err {
            CliError::Usage(_) => CliError::Usage(msg),
            CliError::Parse(_) => CliError::Parse(msg),
            CliError::Infeasible(_) => CliError::Infeasible(msg),
            CliError::Divergence(_) => CliError::Divergence(msg),
            CliError::Verification(_) => CliError::Verification(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NumericDivergence { .. } => CliError::Divergence(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<PruneError> for CliError {
    fn from(e: PruneError) -> Self {
        match e {
            PruneError::Infeasible { .. }
            | PruneError::BadRate { .. }
            | PruneError::DegenerateMask => CliError::Infeasible(e.to_string()),
            PruneError::BadMask(_) => CliError::Parse(e.to_string()),
            PruneError::Core(inner) => inner.into(),
        }
    }
}

impl From<BspcError> for CliError {
    fn from(e: BspcError) -> Self {
        match e {
            BspcError::SupportViolation { .. } => CliError::Verification(e.to_string()),
            BspcError::Invalid(_) => CliError::Parse(e.to_string()),
            BspcError::Core(inner) => inner.into(),
            BspcError::Prune(inner) => inner.into(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::TooFewReps { .. } => CliError::Usage(e.to_string()),
            EngineError::DimMismatch { .. } | EngineError::ScheduleMismatch(_) => {
                CliError::Parse(e.to_string())
            }
            EngineError::Core(inner) => inner.into(),
            EngineError::Format(inner) => inner.into(),
        }
    }
}

impl From<TunerError> for CliError {
    fn from(e: TunerError) -> Self {
        match e {
            TunerError::EmptySpace { .. }
            | TunerError::BadCandidate { .. }
            | TunerError::BadLambda { .. }
            | TunerError::EvaluatorFailed { .. } => CliError::Infeasible(e.to_string()),
            TunerError::Core(inner) => inner.into(),
            TunerError::Prune(inner) => inner.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct_per_category() {
        let cases = [
            (CliError::Usage("u".into()), 2, "usage"),
            (CliError::Parse("p".into()), 3, "parse"),
            (CliError::Infeasible("i".into()), 4, "infeasible"),
            (CliError::Divergence("d".into()), 5, "divergence"),
            (CliError::Verification("v".into()), 6, "verification"),
        ];
        for (err, code, kind) in cases {
            assert_eq!(err.exit_code(), code);
            assert_eq!(err.kind(), kind);
        }
    }

    #[test]
    fn json_line_is_parseable_and_tagged() {
        let err = CliError::Infeasible("rate too steep".into());
        let line = err.to_json_line();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["error"]["kind"], "infeasible");
        assert_eq!(v["error"]["exit_code"], 4);
        assert_eq!(v["error"]["message"], "rate too steep");
    }

    #[test]
    fn divergence_maps_from_core() {
        let err: CliError = CoreError::NumericDivergence { epoch: 3 }.into();
        assert_eq!(err.exit_code(), 5);
    }

    #[test]
    fn infeasible_maps_from_prune() {
        let err: CliError = PruneError::BadRate { rate: 0.5 }.into();
        assert_eq!(err.exit_code(), 4);
    }
}

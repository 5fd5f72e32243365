use thiserror::Error;

/// Hypotheses of the form/represented-form consistency bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `q(D(a))` is not all of `V`.
    Density,
    /// `q` is not a norm equivalence between the graph norm and the `V` norm.
    NormEquivalence,
    /// `j ∘ q` differs from the identity on `D(a)`.
    JCompositionQ,
    /// `ã(q(u), q(v))` differs from `a(u, v)`.
    FormAgreement,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::Density => "density",
            Hypothesis::NormEquivalence => "norm-equivalence",
            Hypothesis::JCompositionQ => "jq",
            Hypothesis::FormAgreement => "form",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("operands live in different ambient spaces")]
    AmbientMismatch,
    #[error("Gram matrix must be Hermitian positive definite")]
    InvalidGram,
    #[error("vector lies outside the form domain (relative distance {distance:.3e})")]
    DomainViolation { distance: f64 },
    #[error("form is not sectorial at its maximal vertex")]
    NotSectorial,
    #[error("vertex {vertex} is not admissible for this form")]
    VertexNotAdmissible { vertex: f64 },
    #[error("point is not in the resolvent set")]
    NotInResolventSet,
    #[error("relation is not m-sectorial: {0}")]
    NotMSectorial(String),
    #[error("single-valued decomposition does not reconstruct the relation (residual {residual:.3e})")]
    DecompositionFailure { residual: f64 },
    #[error("represented form is not j-elliptic")]
    EllipticityFailure,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(Hypothesis),
    #[error("matrix is not an orthogonal projector (residual {residual:.3e})")]
    ProjectorViolation { residual: f64 },
    #[error("absorption problem carries no form-bound constants")]
    MissingBoundConstants,
    #[error("operator B does not represent the form b (residual {residual:.3e})")]
    MismatchWithFormB { residual: f64 },
    #[error("form is not closable: ker j meets the representation; use the projection-free limit graph instead")]
    NotClosable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

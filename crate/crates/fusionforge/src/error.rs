use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axiom violated: {axiom} at {indices:?}")]
    AxiomViolation { axiom: Axiom, indices: Vec<usize> },
    #[error("Perron eigenvector did not converge")]
    NonConvergence,
    #[error("operation requires an integral fusion ring")]
    NonIntegralInput,
    #[error("block decomposition of the central spectrum is ambiguous: {0}")]
    AmbiguousDecomposition(String),
    #[error("operation requires a commutative fusion ring")]
    NotCommutative,
    #[error("numerical precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("search budget of {budget} nodes exhausted")]
    Timeout { budget: u64 },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("cocycle-sensitive stabilizer: {0}")]
    CocycleSensitive(String),
    #[error("character match failed: {0}")]
    CharacterMatchFailed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Shape,
    Duality,
    Unit,
    Dual,
    AntiInvolution,
    Associativity,
    FrobeniusReciprocity,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::Shape => "shape",
            Axiom::Duality => "duality",
            Axiom::Unit => "unit",
            Axiom::Dual => "dual",
            Axiom::AntiInvolution => "anti-involution",
            Axiom::Associativity => "associativity",
            Axiom::FrobeniusReciprocity => "Frobenius reciprocity",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

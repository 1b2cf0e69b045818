use thiserror::Error;

/// Errors across the whole crate. Witness data uses element indices.
#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table entry out of range at ({row},{col})")]
    EntryOutOfRange { row: usize, col: usize },
    #[error("table is not associative: witness triple ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {s} has no unique generalized inverse")]
    NoUniqueInverse { s: usize },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: usize, f: usize },
    #[error("designated unit {unit} is not two-sided neutral (witness {witness})")]
    UnitNotNeutral { unit: usize, witness: usize },
    #[error("instance would have {n} elements, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("semigroup must be nonempty")]
    Empty,
    #[error("unknown corpus instance `{0}`")]
    UnknownCorpus(String),

    #[error("supplied idempotent action operators do not commute (idempotents {e},{f})")]
    NonCommutingIdempotentActions { e: usize, f: usize },

    #[error("structure tensor is not associative (basis triple {a},{b},{c}, residual {residual:.3e})")]
    AlgebraNotAssociative { a: usize, b: usize, c: usize, residual: f64 },
    #[error("star map fails to be a conjugate-linear involutive anti-automorphism ({detail})")]
    BadStar { detail: String },
    #[error("designated unit is not neutral in the algebra (residual {residual:.3e})")]
    AlgebraUnitNotNeutral { residual: f64 },
    #[error("eigenvalue clustering stayed degenerate after {retries} reseeds")]
    NumericalDegeneracy { retries: usize },
    #[error("module multiplicity over block {block} is not a non-negative integer (got {value})")]
    NonIntegerMultiplicity { block: usize, value: f64 },
    #[error("envelope self-check failed: {0}")]
    EnvelopeInconsistent(String),

    #[error("alpha is not a unital semigroup homomorphism (witness s={s}, t={t}, residual {residual:.3e})")]
    NotHomomorphism { s: usize, t: usize, residual: f64 },
    #[error("alpha_{s} is not a *-endomorphism (residual {residual:.3e})")]
    NotStarMap { s: usize, residual: f64 },
    #[error("centrality fails for s={s} (residual {residual:.3e})")]
    CentralityFails { s: usize, residual: f64 },
    #[error("idempotent {e} does not act by a central projection of the block algebra")]
    NotCentralProjection { e: usize },

    #[error("gamma fails to be a *-homomorphism (residual {residual:.3e})")]
    GammaFailsHomomorphism { residual: f64 },
    #[error("gamma is not bijective between the envelopes")]
    GammaNotBijective,
    #[error("groupoid axiom violated: {0}")]
    GroupoidAxiom(String),
    #[error("groupoid C*-oracle routes disagree: {0}")]
    GroupoidOracleMismatch(String),

    #[error("bimodule axiom `{axiom}` fails (witness {witness}, residual {residual:.3e})")]
    BimoduleAxiom { axiom: &'static str, witness: String, residual: f64 },
    #[error("operator is not adjointable (residual {residual:.3e})")]
    NotAdjointable { residual: f64 },
    #[error("operator is not odd with respect to the grading")]
    NotOdd,
    #[error("map does not descend to the C*-envelope (kernel residual {residual:.3e})")]
    DoesNotDescend { residual: f64 },

    #[error("right-module axiom fails during integration ({detail}, residual {residual:.3e})")]
    ModuleAxiomFails { detail: String, residual: f64 },
    #[error("round-trip pinching identity fails (residual {residual:.3e})")]
    PinchingMismatch { residual: f64 },
    #[error("K0 class not invariant under {operation}")]
    ClassNotInvariant { operation: String },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("IO error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

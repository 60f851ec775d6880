use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants split roughly into input problems (parse failures, malformed
/// objects), mathematical obstructions (the requested object provably does
/// not exist) and budget exhaustion. [`Error::is_obstruction`] tells the
/// second group apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol `{0}` is already registered")]
    DuplicateSymbol(String),
    #[error("malformed witness for `{name}`: {witness:?}")]
    MalformedWitness { name: String, witness: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operands live over incompatible symbol tables")]
    MixedSymbolTables,
    #[error("witness precision cannot separate {0} from zero")]
    InsufficientPrecision(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a reverser: {0}")]
    NotAReverser(String),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    EnumerationBoundExceeded { n: usize, bound: usize },
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
    #[error("A-obstruction: A(f) = {0} is nonzero, and the kernel of A coincides with the subgroup generated by involutions")]
    AObstruction(String),
    #[error("not an element of G_{n}: {reason}")]
    NotInGn { n: usize, reason: String },

    #[error("point {0} lies outside [0, 1)")]
    OutOfDomain(String),
    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),
    #[error("invalid piecewise affine map: {0}")]
    InvalidPlMap(String),
    #[error("not of the required form: {0}")]
    NotOfThisForm(String),
    #[error("conjugate is not an interval exchange on {0}")]
    NotAnIet(String),
    #[error("tensor has a nonvanishing symmetric part")]
    NotAntisymmetric,
    #[error("no period found within budget {0}")]
    NotPeriodicWithinBudget(u64),
    #[error("decomposition left a component unresolved: {0}")]
    UnresolvedComponent(String),
    #[error("expected at most 3 intervals, found {0}")]
    NotAThreeIet(usize),
    #[error("certificate not applicable: {0}")]
    NotApplicable(String),
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error("no rational found in the target gap at the available witness precision")]
    RationalGapNotFound,

    #[error("unbound generator `{0}`")]
    UnboundGenerator(String),
    #[error("relation not satisfied: {0}")]
    RelationNotSatisfied(String),
    #[error("freeness could not be verified: {0}")]
    FreenessUnverified(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors that report a mathematical obstruction rather than a
    /// malformed input or an exhausted budget.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            Error::AObstruction(_)
                | Error::NotAReverser(_)
                | Error::NotInGn { .. }
                | Error::NotOfThisForm(_)
                | Error::NotAnIet(_)
                | Error::NotApplicable(_)
                | Error::HypothesesViolated(_)
                | Error::RelationNotSatisfied(_)
                | Error::FreenessUnverified(_)
        )
    }

    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

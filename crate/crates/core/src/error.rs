use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator names must be non-empty")]
    EmptyGeneratorName,
    #[error("letter sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("operation is undefined on the identity")]
    IdentityInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("duplicate generator `{name}` at byte {pos}")]
    DuplicateGenerator { name: String, pos: usize },
    #[error("relator {index} (at byte {pos}) reduces to the identity")]
    IdentityRelator { index: usize, pos: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("quotient names unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cyclic modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("relator `{relator}` does not map to the identity (image `{image}`)")]
    RelatorNotKilled { relator: String, image: String },
    #[error("word uses generators outside the quotient's alphabet")]
    AlphabetMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnnError {
    #[error("word uses a generator outside the tower")]
    NotInTower,
    #[error("associated element for `{0}` is the identity")]
    IdentityAssociation(String),
    #[error("stable letter `{0}` may not occur in its own associated elements")]
    SelfReferentialAssociation(String),
    #[error("relator `{0}` is not of the form t c t^-1 d^-1")]
    NotHnnRelator(String),
    #[error("cyclic membership of `{segment}` undecided within bound {bound}")]
    MembershipUnknown { segment: String, bound: u64 },
    #[error("conjugator verification was inconclusive (bound {bound})")]
    Inconclusive { bound: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("invalid tower configuration: {0}")]
    InvalidConfig(String),
    #[error("stage {stage}: no representative for image `{image}`")]
    MissingRepresentative { stage: usize, image: String },
    #[error("stage {stage}: {message}")]
    Stage { stage: usize, message: String },
    #[error(transparent)]
    Hnn(#[from] HnnError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A certificate that does not re-verify, naming the first offending stage
/// (`0` for facts about the base).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certification failed at stage {stage}: {reason}")]
pub struct CertificationError {
    pub stage: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmallCancellationError {
    #[error("relator {index} is the identity")]
    Identity { index: usize },
    #[error("relator {index} is not cyclically reduced")]
    NotCyclicallyReduced { index: usize },
    #[error("relator {index} is a proper power (exponent {exponent})")]
    ProperPower { index: usize, exponent: usize },
    #[error("C'({lambda}) fails: piece of length {piece} in a relator of length {relator}")]
    MetricFails { lambda: String, piece: usize, relator: usize },
    #[error("family parameters must be positive")]
    BadParameters,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelPathError {
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("letter {pos} is the identity of its factor")]
    IdentityLetter { pos: usize },
    #[error("letters {start}..{end} of one factor multiply to the identity")]
    IdentityRun { start: usize, end: usize },
    #[error("bad factor element `{text}`: {message}")]
    BadElement { text: String, message: String },
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("path does not close up")]
    NotACycle,
    #[error("label of `{0}` is not in W")]
    NotInW(String),
    #[error("identity element has no hyperbolicity type")]
    IdentityElement,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("factor oracle could not decide equality")]
    Undecided,
}

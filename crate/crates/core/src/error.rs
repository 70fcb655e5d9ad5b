use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("samples mix incompatible kinds ({first} and {other})")]
    MixedKinds { first: &'static str, other: &'static str },
    #[error("metric `{metric}` cannot be applied to {kind} samples")]
    MetricMismatch { metric: &'static str, kind: &'static str },
    #[error("sample {index} has length {found}, expected {expected}")]
    LengthMismatch { index: usize, expected: usize, found: usize },
    #[error("distance matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("distance matrix is asymmetric at ({i}, {j}): |{a} - {b}| exceeds 1e-9")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("invalid distance {value} at ({i}, {j}): entries must be finite and nonnegative with a zero diagonal")]
    InvalidDistance { i: usize, j: usize, value: f64 },
    #[error("resolution must be a finite nonnegative number, got {0}")]
    InvalidRadius(f64),
    #[error("vertex {vertex} out of range for a complex on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("subset width {found} does not match complex size {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("operation needs a nonempty vertex subset")]
    EmptySubset,
    #[error("vertex {0} is already in the subset")]
    VertexInSubset(usize),
    #[error("eigensolver did not converge within {0} iterations")]
    EigenNonConvergence(usize),
    #[error("{n} vertices exceed the exact enumeration cap of {cap}; use permutation sampling instead")]
    SizeCap { n: usize, cap: usize },
    #[error("Shapley vector sums to zero")]
    ZeroShapley,
    #[error("invalid graph family: {0}")]
    InvalidFamily(String),
    #[error("no closed form exists for {0}")]
    NoClosedForm(String),
    #[error("unknown built-in grammar g{0} (expected 1..=4)")]
    UnknownGrammar(u8),
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("symbol {0:?} is not in the alphabet {{0, 1}}")]
    ForeignSymbol(char),
    #[error("grammar {grammar} accepts no strings of length {len}")]
    EmptyLanguage { grammar: String, len: usize },
    #[error("cannot mask all {0} vertices")]
    MaskAll(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("class {class} unreachable after {attempts} draws (n {n_min}..={n_max}, p {p_min}..{p_max})")]
    ClassUnreachable { class: usize, attempts: usize, n_min: usize, n_max: usize, p_min: f64, p_max: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

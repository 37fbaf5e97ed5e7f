//! Error taxonomy shared by every module in the crate.
//!
//! All fallible operations return [`Result`] with this error type, so that
//! the CLI can map failures onto its exit-code contract (configuration
//! errors vs. numerical-resolution errors) without string matching.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The H-type dimension constraint p+1 ≤ 2d is violated.
    #[error("dimension constraint violated: p+1 = {p_plus_one} exceeds 2d = {two_d}")]
    DimensionConstraint { p_plus_one: usize, two_d: usize },

    /// 2d is not a multiple of the Clifford module dimension required for p
    /// anticommuting generators, or p is outside the supported range.
    #[error("no Clifford module: 2d = {two_d} is not a multiple of {module_dim} (p = {p})")]
    NoCliffordModule {
        two_d: usize,
        p: usize,
        module_dim: usize,
    },

    /// A point, field, or spectrum is dimensioned for a different group.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// Dilation scale must be strictly positive.
    #[error("nonpositive dilation scale {0}")]
    NonpositiveScale(f64),

    /// A finite-difference stencil would leave the sampled grid.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Laguerre function argument out of domain.
    #[error("negative argument: {0}")]
    NegativeArgument(f64),

    /// The radial quadrature cannot resolve the requested Laguerre
    /// oscillation at the extreme frequencies of the dual grid.
    #[error("resolution insufficient: {0}")]
    ResolutionInsufficient(String),

    /// Laguerre cutoff larger than the transform was designed for.
    #[error("cutoff too large: requested M = {requested}, grid designed for M = {designed}")]
    CutoffTooLarge { requested: usize, designed: usize },

    /// Two spectra/fields do not share a grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A spectral multiplier produced a non-finite value on the spectrum.
    #[error("non-finite multiplier value at joint-spectrum point {at}")]
    NonFiniteMultiplier { at: f64 },

    /// Heat semigroup requires t ≥ 0.
    #[error("negative time {0} for the heat semigroup")]
    NegativeTime(f64),

    /// A dyadic band is not representable on the grid's joint spectrum.
    #[error("band out of range: dyadic band j = {j} has no support on the representable spectrum [{spec_min:.3e}, {spec_max:.3e}]")]
    BandOutOfRange { j: i32, spec_min: f64, spec_max: f64 },

    /// Spectral mass near the edge of the representable dyadic band range
    /// exceeds the norm-truncation tolerance.
    #[error("band truncation: fraction {fraction:.3e} of spectral mass lies in the edge bands")]
    BandTruncationWarning { fraction: f64 },

    /// Grids are not dyadic relabelings of one another.
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    /// The evolved-kernel phase cannot be resolved by the dual grid over the
    /// requested time window.
    #[error("aliasing window exceeded: {0}")]
    AliasingWindowExceeded(String),

    /// Frequency split undefined at t = 0.
    #[error("zero time: the low/high frequency split threshold is undefined at t = 0")]
    ZeroTime,

    /// A quotient against a zero denominator was requested.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// Transport demonstration input has mass outside the required
    /// single-(m, sign) support.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// Exponent outside [2, ∞].
    #[error("exponent out of range: {0}")]
    OutOfRange(String),

    /// (q, r) = (∞, ∞) is excluded from admissibility.
    #[error("(q, r) = (inf, inf) is not an admissible-pair candidate")]
    BothInfinite,

    /// Nonlinearity degree must exceed 1.
    #[error("invalid nonlinearity degree alpha = {0}; require alpha > 1")]
    InvalidAlpha(f64),

    /// No admissible pair exists for the requested (s, δ) window.
    #[error("no admissible pair: {0}")]
    NoPair(String),

    /// Quotient estimation against zero data.
    #[error("zero data: {0}")]
    ZeroData(String),

    /// Pair fails admissibility where an admissible pair is required.
    #[error("pair (q, r) = ({q}, {r}) is not admissible (or is an endpoint) for p = {p}")]
    NotAdmissible { q: String, r: String, p: usize },

    /// Duhamel evaluation outside the recorded path horizon.
    #[error("time {t} outside the path horizon [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    /// Hölder-type exponent relation violated in the product-rule probe.
    #[error("exponent relation violated: {0}")]
    ExponentRelationViolated(String),

    /// Picard iteration distances grew for several consecutive iterations.
    #[error("divergence detected: contraction ratio exceeded 1 for {consecutive} consecutive iterations")]
    DivergenceDetected { consecutive: usize },

    /// Invalid experiment configuration (CLI layer).
    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    /// I/O failure while writing or reading artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

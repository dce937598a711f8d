use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coefficient or argument was NaN or infinite.
    NonFinite,
    /// `quadratic_roots` needs a polynomial of degree 1 or 2.
    Degree {
        degree: Option<usize>,
    },
    /// `z^b` requested at the branch point `z = 0`.
    BranchPoint,
    /// Input violates a structural invariant.
    InvalidInput(&'static str),
    /// The K-dependence of the radicand discriminant cancels.
    DegenerateDiscriminant,
    /// The radicand is not the square of a polynomial for the given K.
    NotPerfectSquare {
        discriminant: f64,
        tolerance: f64,
    },
    /// No (K, sign) combination yields `Re τ′ < 0`.
    NoBranch {
        detail: String,
    },
    /// The preferred combination failed the weight screen and several remain.
    AmbiguousBranch {
        candidates: Vec<(usize, i8)>,
    },
    /// Only `σ(s) = c·s` is supported for φ and ρ.
    UnsupportedSigma,
    /// Rodrigues quotient left an exponential or power factor behind.
    CancellationFailure {
        rate: f64,
        power: f64,
    },
    /// The eigen-residual does not change sign on the scan interval.
    NoSignChange {
        lo: f64,
        hi: f64,
    },
    /// The eigen-residual changes sign more than once on the scan interval.
    MultipleSignChanges {
        count: usize,
    },
    /// Transform groups `{α, β}` and `{γ, δ}` were mixed.
    ForbiddenCombination,
    /// The φ₂/φ₄ angles depend on the state and cannot be evaluated.
    WavefunctionDependentAngle,
    DivisionByZero,
    /// Only the αδ ∈ {−1, −3} branches are supported.
    UnsupportedBranch {
        alphadelta: f64,
    },
    /// Configuration-space recovery needs β = 0 and γ = 0.
    UnsupportedRecovery,
    /// Finite-difference estimates have not converged on this grid.
    GridTooCoarse {
        state: usize,
        deviation: f64,
    },
}

impl Error {
    /// Stable variant name, used for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFinite => "NonFinite",
            Error::Degree { .. } => "DegreeError",
            Error::BranchPoint => "BranchPointError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::DegenerateDiscriminant => "DegenerateDiscriminant",
            Error::NotPerfectSquare { .. } => "NotPerfectSquare",
            Error::NoBranch { .. } => "NoBranch",
            Error::AmbiguousBranch { .. } => "AmbiguousBranch",
            Error::UnsupportedSigma => "UnsupportedSigma",
            Error::CancellationFailure { .. } => "CancellationFailure",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::MultipleSignChanges { .. } => "MultipleSignChanges",
            Error::ForbiddenCombination => "ForbiddenCombination",
            Error::WavefunctionDependentAngle => "WavefunctionDependentAngle",
            Error::DivisionByZero => "DivisionByZero",
            Error::UnsupportedBranch { .. } => "UnsupportedBranch",
            Error::UnsupportedRecovery => "UnsupportedRecovery",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "non-finite value"),
            Error::Degree { degree: Some(d) } => {
                write!(f, "expected degree 1 or 2, got {d}")
            }
            Error::Degree { degree: None } => {
                write!(f, "expected degree 1 or 2, got the zero polynomial")
            }
            Error::BranchPoint => write!(f, "fractional or negative power evaluated at 0"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DegenerateDiscriminant => {
                write!(f, "radicand discriminant does not depend on K")
            }
            Error::NotPerfectSquare {
                discriminant,
                tolerance,
            } => write!(
                f,
                "radicand is not a perfect square (|disc| = {discriminant:e} > {tolerance:e})"
            ),
            Error::NoBranch { detail } => write!(f, "no branch with Re τ′ < 0: {detail}"),
            Error::AmbiguousBranch { candidates } => {
                write!(
                    f,
                    "ambiguous branch, admissible (k_index, sign): {candidates:?}"
                )
            }
            Error::UnsupportedSigma => write!(f, "σ must have the form c·s"),
            Error::CancellationFailure { rate, power } => write!(
                f,
                "Rodrigues quotient did not reduce to a polynomial (rate {rate:e}, power {power:e})"
            ),
            Error::NoSignChange { lo, hi } => {
                write!(f, "eigen-residual has no sign change on [{lo:e}, {hi:e}]")
            }
            Error::MultipleSignChanges { count } => {
                write!(f, "eigen-residual changes sign {count} times")
            }
            Error::ForbiddenCombination => {
                write!(f, "cannot combine transforms acting on {{α,β}} and {{γ,δ}}")
            }
            Error::WavefunctionDependentAngle => {
                write!(f, "phase angle depends on the wavefunction")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::UnsupportedBranch { alphadelta } => {
                write!(f, "unsupported αδ = {alphadelta}, expected -1 or -3")
            }
            Error::UnsupportedRecovery => {
                write!(f, "recovery needs β = 0 and γ = 0")
            }
            Error::GridTooCoarse { state, deviation } => write!(
                f,
                "grid does not resolve state {state} (relative deviation {deviation:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

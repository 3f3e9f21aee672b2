use thiserror::Error;

/// Why an involute construction has no distinguished member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoEvolventReason {
    /// The side-reflection composition is a glide reflection.
    Glide,
    /// The side-reflection composition is a nontrivial translation.
    Translation,
    /// The composition is a rotation by an angle other than the one required.
    Rotation,
    /// Odd-gon with nonzero quasiperimeter.
    NonzeroQuasiperimeter,
    /// The affine parameter equation has zero slope.
    DegenerateFamily,
}

impl std::fmt::Display for NoEvolventReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Glide => "reflection composition is a glide reflection",
            Self::Translation => "reflection composition is a translation",
            Self::Rotation => "reflection composition is a rotation",
            Self::NonzeroQuasiperimeter => "quasiperimeter is nonzero",
            Self::DegenerateFamily => "involute family is degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lines {0} and {1} are parallel")]
    ParallelLines(usize, usize),
    #[error("turning angle {0} is congruent to 0 mod pi")]
    DegenerateTurning(usize),
    #[error("a polygon needs at least 3 sides, got {0}")]
    TooFewSides(usize),
    #[error("operation requires an odd number of sides, got {0}")]
    EvenGon(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("support function has nonzero mean {0}")]
    NonzeroLength(f64),
    #[error("harmonic index {m} out of range for n = {n}")]
    IndexOutOfRange { n: usize, m: usize },
    #[error("polygon is not equiangular")]
    NotEquiangular,
    #[error("polygon is not convex")]
    NotConvex,
    #[error("eigensolver did not converge")]
    EigensolverFailure,
    #[error("generalized eigenspace of +-i has dimension {0}, no invariant complement")]
    NoInvariantComplement(usize),
    #[error("evolute sides {0} and {1} are parallel")]
    EvoluteParallelSides(usize, usize),
    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("polygon collapsed to a point")]
    Collapsed,
    #[error("no evolvent: {0}")]
    NoEvolvent(NoEvolventReason),
    #[error("support function must be 2pi-periodic (q = 1), got q = {0}")]
    NotPeriodic(u32),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

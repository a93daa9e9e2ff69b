use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductors {0} and {1} are not related by divisibility")]
    ConductorMismatch(u32, u32),
    #[error("conductor {from} does not divide {to}")]
    NotEmbeddable { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,

    #[error("coincident points")]
    CoincidentPoints,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("point lies on the line")]
    PointOnLine,
    #[error("line lies in the plane")]
    LineInPlane,
    #[error("planes coincide")]
    EqualPlanes,
    #[error("lines are not skew")]
    NotSkew,
    #[error("lines do not meet")]
    LinesSkew,
    #[error("line lies on the quadric")]
    LineOnQuadric,
    #[error("point is not on the {0}")]
    NotIncident(&'static str),
    #[error("infinitely many lines meet the four given lines")]
    DegeneratePencil,
    #[error("second solution coincides with the known one")]
    Tangency,
    #[error("points are not in general position")]
    GeneralPosition,
    #[error("expected a {expected}-dimensional kernel, found {found}")]
    KernelDimension { expected: usize, found: usize },

    #[error("permutation {0} does not preserve the cross ratio")]
    NotCrossRatioPreserving(String),
    #[error("map is the identity")]
    IdentityMap,
    #[error("square test undecided for non-rational radicand {0}")]
    SquareUndecided(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("transversal misses the labeled points: {0}")]
    NotHalfGrid(String),

    #[error("projection center lies on a secant of the configuration")]
    SecantCollision,
    #[error("projection center lies on the image plane")]
    CenterOnPlane,
    #[error("not a complete intersection: {0}")]
    NotCompleteIntersection(String),
    #[error("retry budget exhausted after {0} attempts")]
    RetryBudget(usize),

    #[error("invalid input: {0}")]
    Input(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

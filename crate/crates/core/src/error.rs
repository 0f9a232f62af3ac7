use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("calculus mismatch: {0} vs {1}")]
    CalculusMismatch(&'static str, &'static str),

    #[error("empty relation not allowed: {0}")]
    EmptyRelation(&'static str),

    #[error("constraint ({i},{j}) is not basic")]
    NonBasicConstraint { i: usize, j: usize },

    #[error("relation outside refinement mapping domain")]
    OutsideMappingDomain,

    #[error("interval pair is not an instance of the relaxed relation of `{0}`")]
    NotAnInstance(&'static str),

    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonRange,

    #[error("degenerate interval: endpoints must satisfy lo < hi")]
    DegenerateInterval,

    #[error("{stage}: network is unsatisfiable")]
    UnsatisfiableAt { stage: &'static str },

    #[error("directional constraint ({i},{j}) is outside DIR49; use the general checker")]
    OutsideDir49 { i: usize, j: usize },

    #[error("rectangles incompatible with the topological network ({0} violation(s))")]
    IncompatibleRectangles(usize),

    #[error("expected {expected} rectangles, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("membership table: {0}")]
    MembershipData(String),
}

/// Signal that constraint propagation emptied a relation.
///
/// Not an `Error`: inconsistency is a legitimate propagation outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent {
    pub i: usize,
    pub j: usize,
}

impl std::fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "inconsistent at pair ({}, {})", self.i, self.j)
    }
}

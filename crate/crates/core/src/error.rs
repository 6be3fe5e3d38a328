//! Error types, one enum per layer. Everything is `thiserror`-derived and
//! carries enough context to state *which* precondition failed, since most
//! of these surface to the command line as exit-code decisions.

use thiserror::Error;

/// Failures in F_p, F_p[t]/(t^s) and F_q arithmetic.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{p} is not prime")]
    NotPrime { p: u32 },

    #[error("truncation order s must be at least 1")]
    ZeroPrecision,

    #[error("polynomial degree must be at least 1")]
    ZeroDegree,

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("mixed moduli: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("mixed rings: F_{}[t]/(t^{}) vs F_{}[t]/(t^{})", left.0, left.1, right.0, right.1)]
    RingMismatch { left: (u32, u32), right: (u32, u32) },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{element} is not a unit (zero constant term)")]
    NotAUnit { element: String },

    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },

    #[error("{poly} is not monic irreducible")]
    NotIrreducible { poly: String },

    #[error("elements of different extensions: {left} vs {right}")]
    ExtensionMismatch { left: String, right: String },
}

/// Failures in matrix-group construction and enumeration.
#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("elementary matrix requires i != j (got {i})")]
    EqualIndices { i: i64 },

    #[error("matrix dimension must be at least 2, got {d}")]
    DimensionTooSmall { d: u32 },

    #[error("type index {i} outside 1..={d}")]
    TypeOutOfRange { i: u32, d: u32 },

    #[error("operands live over different parameters: (p,s,d)={left:?} vs {right:?}")]
    ContextMismatch {
        left: (u32, u32, u32),
        right: (u32, u32, u32),
    },

    #[error("matrix determinant {det} is not a unit; no inverse")]
    NotInvertible { det: String },

    #[error("matrix entries need {bits} bits to key; the 128-bit budget is exceeded")]
    KeyOverflow { bits: u32 },

    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("brute-force domain p^(s*d^2) = 2^{bits} exceeds the 2^30 guard")]
    BruteforceTooLarge { bits: u32 },

    #[error("claimed subgroup contains an element outside the ambient group")]
    NotSubset,

    #[error("element is not in the enumerated group")]
    NotInGroup,

    #[error("omitted-type set must be a nonempty strict subset of 1..={d}")]
    BadTypeSet { d: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot parse group dump: {reason}")]
    Parse { reason: String },
}

/// Failures in complex construction and weight bookkeeping.
#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Group(#[from] GroupError),

    #[error("face {face} not present in the complex")]
    FaceNotFound { face: String },

    #[error("level {level} out of range; dimension is {dim}")]
    LevelOutOfRange { level: i32, dim: i32 },

    #[error("balance violated at level {level}, face {face}: weight {found}, recursion gives {expected}")]
    Unbalanced {
        level: i32,
        face: String,
        expected: String,
        found: String,
    },

    #[error("weights at level {level} sum to {total}, not 1")]
    BadLevelTotal { level: i32, total: String },

    #[error("complex is not pure: face {face} at level {level} has no superface")]
    NotPure { face: String, level: i32 },

    #[error("link of {face} is empty")]
    EmptyLink { face: String },

    #[error("complex structure inconsistent: {reason}")]
    Inconsistent { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot parse face list: {reason}")]
    Parse { reason: String },
}

/// Failures in graph handling and eigensolving.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("edge ({u},{v}) out of range for {n} vertices")]
    BadEdge { u: u32, v: u32, n: usize },

    #[error("self-loop at vertex {u}")]
    SelfLoop { u: u32 },

    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: u32, v: u32 },

    #[error("edge ({u},{v}) has non-positive weight")]
    NonPositiveWeight { u: u32, v: u32 },

    #[error("vertex {u} is isolated; normalized operators are undefined")]
    IsolatedVertex { u: u32 },

    #[error("operator is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("iterative solver requires a connected graph")]
    NotConnected,

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("eigensolver did not converge: residual {residual} after {iterations} iterations (tolerance {tol})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error("tolerance must be positive and finite, got {tol}")]
    BadTolerance { tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot parse graph file: {reason}")]
    Parse { reason: String },
}

/// Failures while assembling expansion certificates across a whole complex.
#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error("one-level trickle-down needs a 2-dimensional complex, got d = {d}")]
    NeedsDimensionThree { d: u32 },
}

/// Failures in the affine-plane constructions.
#[derive(Debug, Error)]
pub enum AffineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Group(#[from] GroupError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Complex(#[from] ComplexError),

    #[error("{q} is not the cube of a prime")]
    NotPrimeCube { q: u64 },

    #[error("truncation order {s} is too small; degree-2 products need s >= 3 to be faithful")]
    UnfaithfulTruncation { s: u32 },

    #[error("walk-count check failed: {detail}")]
    WalkCountMismatch { detail: String },

    #[error("spectrum check failed: {detail}")]
    SpectrumMismatch { detail: String },

    #[error("graphs disagree: {detail}")]
    EdgeMismatch { detail: String },

    #[error("coset-to-pair correspondence failed: {detail}")]
    BijectionFailure { detail: String },

    #[error("need 0 < d <= D, got d={d}, D={big_d}")]
    BadDegrees { d: f64, big_d: f64 },
}

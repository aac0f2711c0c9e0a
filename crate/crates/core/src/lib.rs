//! Exact integral equivariant cohomology of GKM graphs.
//!
//! The input is a labelled multigraph `(Γ, α)`: vertices, edges, and an
//! integer weight vector per edge (defined up to sign). The library computes
//! the graph cohomology `H*_T(Γ; ℤ)` and the modified invariant `Ĥ*_T(Γ)`
//! obtained by recursively intersecting with coefficient-extended modules
//! over the divisor tree of the weight contents. All arithmetic is exact;
//! every degreewise computation reduces to integer lattice operations in
//! Hermite normal form.

pub mod cli;
pub mod gkmgraph;
pub mod graphcohomology;
pub mod intlinalg;
pub mod polyring;
pub mod recursion;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("lattice containment violated: {0}")]
    Containment(String),
    #[error("modulus {target} does not divide module modulus {module}")]
    ModulusMismatch { target: u64, module: u64 },
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

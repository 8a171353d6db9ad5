//! Exact computations with modular representations of elementary abelian
//! p-groups: module arithmetic in the Green ring, Krull–Schmidt
//! decomposition, the Heller operator, rank-variety periodicity tests,
//! certificate-producing tensor-closure searches, a small-dimension census,
//! and a symbolic calculus for interlaced Auslander–Reiten components.

pub mod algcheck;
pub mod census;
pub mod config;
pub mod decomp;
pub mod error;
pub mod field;
pub mod heller;
pub mod hom;
pub mod io;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod testkit;

pub use config::{Budgets, RunConfig, DEFAULT_SEED};
pub use error::{Error, Result};
pub use field::Field;
pub use matrix::Matrix;
pub use rep::{GroupSpec, Module, SubgroupSpec};

//! Hall bases of free Lie algebras.
//!
//! Trees live in a hash-consed [`Magma`]; a [`HallOrder`] ranks them and a
//! [`HallSet`] holds the basis elements up to a maximum length. The
//! [`Decomposer`] rewrites brackets of basis elements onto the basis, and the
//! [`oracle`] module checks results in the free associative algebra.

pub mod bounds;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod families;
pub mod hall;
pub mod magma;
pub mod oracle;
pub mod order;

pub use decomp::{DecompStats, Decomposer, FoldTree, Folding, FoldingCounts, LieSeries};
pub use error::{HallError, Result};
pub use hall::{witt_dimension, HallSet, RValue};
pub use magma::{Magma, Shape, Side, TreeId};
pub use order::{HallOrder, OrderSpec, SuperGeomKey};

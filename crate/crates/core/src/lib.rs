//! Exact computations on finite-group equivariant simplicial complexes:
//! subgroup lattices and tables of marks, isotropy stratifications, linking
//! simplices and isovariant cell structures, equivariant and isovariant
//! maps, fixed-point invariants, and a finite-set model of the cube lemma
//! on iterated limits.

pub mod cubelim;
pub mod error;
pub mod fixpoint;
pub mod gcomplex;
pub mod gmap;
pub mod group;
pub mod io;
pub mod linking;
pub mod models;
pub mod snf;

pub use error::{Error, Result};
pub use gcomplex::{GComplex, Simplex, Subcomplex};
pub use gmap::GMap;
pub use group::{Element, FiniteGroup, Subgroup, SubgroupChain};

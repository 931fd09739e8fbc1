//! Geometry of groups of automorphisms of `Q_p^n`: distances between
//! lattices, the scale function, minimizing lattices, flatness certificates,
//! roots and rank, orbit growth, bounded conjugacy classes, and a
//! Bruhat-Tits tree model for `SL_2(Q_p)`.

pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod autoscale;
pub mod flatgeom;
pub mod building;

pub use error::{Error, Result};
pub use exactnum::{PMatrix, PScalar, Prime, Valuation};
pub use lattice::{DistanceUnits, Lattice};
pub use autoscale::{Automorphism, ScaleValue};

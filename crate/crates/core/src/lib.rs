//! Exact computation of the volume constant α of Del Pezzo surfaces and of
//! pairs (Y, H) with a finite group action on the Picard lattice.
//!
//! α(Y) is the Leray volume of the nef cone of Y with respect to −K_Y,
//! normalized by the intersection form. Everything is computed with
//! arbitrary precision integers and rationals.
//!
//! ```
//! use nefcone::{SurfaceKind, SurfaceSpec};
//!
//! let x6 = SurfaceSpec::ordinary(SurfaceKind::Blowup(6));
//! assert_eq!(x6.alpha().unwrap().alpha.to_string(), "1/72");
//! ```

pub mod classes;
pub mod cones;
pub mod corpus;
pub mod error;
pub mod files;
pub mod lattice;
pub mod linalg;
pub mod pairs;
pub mod rootsys;
pub mod surface;

pub use cones::{dualize, dualize_on, face, leray_volume, LerayFunctional, RationalCone, Sublattice};
pub use error::{Error, Result};
pub use lattice::{standard_lattice, DivisorClass, KindSelector, LatticeMap, PicardLattice, SurfaceKind};
pub use linalg::Rat;
pub use pairs::{alpha_pair, alpha_pair_via_weyl, fixed_lattice, orbit_sum_generators, GroupAction};
pub use rootsys::{weyl_order, Family, RootType, SimpleSystem};
pub use surface::{ordinary_alpha, AlphaOptions, AlphaResult, SurfaceSpec, Validation};

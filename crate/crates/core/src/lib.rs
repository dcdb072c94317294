//! Refined discrete invariants of multidimensional persistence.
//!
//! Exact linear algebra over prime fields, Tor of multigraded modules via the
//! Koszul complex and minimal free resolutions, hypertor of multifiltered
//! complexes, and orbit classification of relation families.

pub mod complex;
pub mod error;
pub mod field;
pub mod generate;
pub mod grading;
pub mod hypertor;
pub mod linalg;
pub mod orbits;
pub mod persistence;
pub mod tor;

pub use complex::{parse_mfc, parse_presentation, Cell, MultiFilteredComplex, PresentationInput, Relation};
pub use error::{Error, Result};
pub use field::{FiniteField, Field, Fp};
pub use num_traits::{Inv, One, Zero};
pub use grading::{grid, join, DegreeMultiset, Grid, MultiDegree};
pub use linalg::Matrix;
pub use persistence::PersistenceModule;
pub use tor::{koszul_tor, minimal_resolution, xi, MinimalResolution, TorTable};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

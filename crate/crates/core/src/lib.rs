//! Sectorial forms and m-sectorial linear relations on finite-dimensional
//! complex Hilbert spaces.
//!
//! The crate covers
//! - subspace calculus with weighted inner products ([`hilbert`]),
//! - sesquilinear forms and their vertex/semi-angle analysis ([`forms`]),
//! - linear relations with shift, inversion, resolvents and single-valued
//!   parts ([`relations`]),
//! - association of graphs with forms and with `j`-elliptic represented
//!   forms ([`association`]),
//! - semigroups of m-sectorial graphs and Trotter-type products
//!   ([`semigroups`]),
//! - series of sectorial forms, their limits and the weighted tower of
//!   auxiliary spaces ([`series`]),
//! - absorption `a + (n - 1) b` and its product formulas ([`absorption`]).
//!
//! Everything is dense linear algebra over `Complex64`; dimensions are meant
//! to stay small (up to a few hundred).

pub mod absorption;
pub mod association;
pub mod error;
pub mod forms;
pub mod hilbert;
pub mod linalg;
pub mod random;
pub mod relations;
pub mod semigroups;
pub mod series;

pub use error::{Error, Hypothesis, Result};
pub use forms::{FormBound, Sector, SectorParams, SesqForm};
pub use hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
pub use linalg::{CMatrix, CVector, C64};
pub use relations::{Inversion, LinearRelation, MSector};

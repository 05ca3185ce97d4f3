pub mod catalog;
pub mod cells;
pub mod coxeter;
pub mod error;
pub mod findimalg;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod serre;
pub mod shifts;
pub mod typea;
pub mod verify;

pub use coxeter::{CoxeterGroup, CoxeterSystem, Element, Side, SystemId, TypeTag};
pub use error::Error;
pub use hecke::{HeckeElt, KLTable};
pub use findimalg::{Complex, GradedAlgebra, GradedModule, ProjectiveComplex};
pub use laurent::LaurentPoly;
pub use linalg::Matrix;

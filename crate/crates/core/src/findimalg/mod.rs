//! Finite-dimensional graded algebras, their graded modules, minimal
//! projective resolutions, the Nakayama functor and `ext` tables.

pub mod algebra;
pub mod complex;
pub mod ext;
pub mod iso;
pub mod module;

pub use algebra::{Arrow, BasisElt, Coeff, GradedAlgebra, Quiver, RelationTerm, SparseVec, DEFAULT_DEGREE_CAP};
pub use complex::{
    minimal_resolution, projective_cover, resolve, BettiTable, Complex, ProjSummand, ProjectiveComplex,
    DEFAULT_MAX_LEN,
};
pub use ext::{ext_from_complex, ext_row, ext_table, ExtTable};
pub use iso::{is_isomorphic, IsoResult, Obstruction};
pub use module::{GradedModule, ModuleDump};

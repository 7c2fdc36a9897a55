//! Homological invariants of finite-dimensional bound quiver algebras.
//!
//! The crate builds monomial bound quiver algebras over exact rationals (or a
//! prime field), computes projective resolutions, Ext groups and dimension
//! certificates, detects Gorenstein algebras, enumerates Gorenstein projective
//! modules with their stable-category Hom tables, and verifies the recollement
//! and gluing structure of algebras assembled from Nakayama components.

pub mod field;
pub mod glue;
pub mod gorenstein;
pub mod homalg;
pub mod linalg;
pub mod qspec;
pub mod quiver;
pub mod rep;

pub use field::{FieldSpec, Scalar};
pub use linalg::Mat;
pub use quiver::{BoundAlgebra, Path, Quiver};
pub use rep::{Morphism, Representation};

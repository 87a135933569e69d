//! Trigonometry of spherical triangles and spherical tetrahedra.
//!
//! The crate converts between the edge lengths and the dihedral angles of a
//! spherical tetrahedron in closed form, evaluates the length Gram
//! determinant and its factorizations, and computes the Wigner derivative
//! `∂θ/∂l'` together with its inverse `∂l'/∂θ`. Finite-difference oracles
//! and a seeded sampler make every formula checkable on random instances.
//!
//! ```
//! use sphtet::{dihedrals_from_lengths, wigner_derivative, EdgeId, TetLengths};
//!
//! let regular = TetLengths::splat(std::f64::consts::FRAC_PI_3);
//! let angles = dihedrals_from_lengths(&regular)?;
//! assert!((angles[EdgeId::E01] - 0.25f64.acos()).abs() < 1e-12);
//!
//! let w = wigner_derivative(&regular, EdgeId::E01)?;
//! assert!((w - 0.75 / (5.0f64 / 16.0).sqrt()).abs() < 1e-12);
//! # Ok::<(), sphtet::GeometryError>(())
//! ```
//!
//! All angles and lengths are in radians.

pub mod error;
pub mod linalg;
pub mod sampling;
pub mod sphtrig;
pub mod tetra;
pub mod tolerances;
pub mod verify;
pub mod wigner;

pub use error::{GeometryError, Result};
pub use sampling::{perturb, sample_tetrahedra, SampleConfig};
pub use sphtrig::{
    cosine_law_angle, dual_cosine_law_side, triangle_angles_from_sides, triangle_gram_det,
    triangle_inverse_wigner, triangle_sides_from_angles, triangle_wigner, validate_triangle,
    TriangleAngles, TriangleGram, TriangleSides, TriangleValidity,
};
pub use tetra::{
    dihedrals_from_lengths, dihedrals_from_vertices, gram_det, gram_from_lengths,
    lengths_from_dihedrals, lengths_from_vertices, link_triangle, validate_angles,
    validate_lengths, vertices_from_lengths, EdgeId, FaceNormals, GramMatrix4, LinkTriangle,
    TetAngles, TetLengths, TetValidity, TetVertices,
};
pub use wigner::{
    fd_partial, inverse_via_links, inverse_wigner_derivative, jacobian_l_of_theta,
    jacobian_theta_of_l, reciprocity_report, remark_reciprocal, wigner_derivative,
    wigner_via_links, DerivativeReport, Jacobian6, JacobianKind,
};

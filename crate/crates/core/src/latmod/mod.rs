//! Exact integer matrix and lattice computations: characteristic
//! polynomials, Smith/Hermite normal forms, compound matrices, the
//! subset-product test for residual nilpotence, norm sequences, image
//! chains and mapping-torus homology.

pub mod exterior;
pub mod homology;
pub mod matrix;
pub mod norms;
pub mod poly;
pub mod snf;
pub mod sublattice;

pub use exterior::{
    exterior_power, subset_product_check, subset_product_check_with_lattice, Certificate, ResNilpStatus,
    ResNilpVerdict, UnitSublattice, DEFAULT_EXTERIOR_LIMIT,
};
pub use homology::{mapping_torus_homology, MappingTorusHomology};
pub use matrix::{json_int, IntMatrix};
pub use norms::{norm_sequences, structured_product_check, NormReport, NormSequences};
pub use poly::{char_poly, IntPoly};
pub use snf::{hermite_rows, kernel, smith_normal_form, AbelianGroup, Lattice, Snf};
pub use sublattice::{find_unit_invariant_sublattice, stable_image_chain, ImageChain, UnitSearch};

/// The matrix `[[0, 1], [1, 3]]` of the automorphism `x ↦ y, y ↦ x y³` on
/// the abelianized fiber (columns are images).
pub fn reference_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[[0, 1], [1, 3]])
}

/// Companion matrix of `x² − 3x + 1`, the contrast case where the subset
/// product test fails.
pub fn contrast_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[[0, -1], [1, 3]])
}

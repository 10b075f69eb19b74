//! Homology of mapping tori `Z^m ⋊_A Z` from the Wang sequence.

use num_bigint::BigInt;
use num_traits::One;

use super::exterior::{exterior_power, DEFAULT_EXTERIOR_LIMIT};
use super::matrix::IntMatrix;
use super::snf::{kernel, AbelianGroup};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingTorusHomology {
    /// `Z ⊕ coker(A − I)`.
    pub h1: AbelianGroup,
    /// `coker(Λ²A − I)`.
    pub h2_cokernel_piece: AbelianGroup,
    /// `ker(A − I)`, always free.
    pub h2_kernel_piece: AbelianGroup,
    /// The two pieces assembled. The kernel piece is free, so the extension
    /// splits and this is their direct sum.
    pub h2: AbelianGroup,
    pub notes: Vec<String>,
}

impl MappingTorusHomology {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "H1": self.h1.to_string(),
            "H1_invariants": self.h1.invariant_list().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "H2_pieces": [self.h2_cokernel_piece.to_string(), self.h2_kernel_piece.to_string()],
            "H2": self.h2.to_string(),
            "notes": self.notes,
        })
    }
}

pub fn mapping_torus_homology(a: &IntMatrix) -> Result<MappingTorusHomology> {
    let m = a.require_square("mapping_torus_homology")?;
    let b = a.minus_identity()?;
    let h1 = AbelianGroup::free(1).direct_sum(&AbelianGroup::cokernel(&b));

    let l2 = exterior_power(a, 2, DEFAULT_EXTERIOR_LIMIT.max(m * m))?;
    let coker_piece = AbelianGroup::cokernel(&l2.minus_scalar(&BigInt::one())?);
    let ker_piece = AbelianGroup::free(kernel(&b)?.rank());
    let h2 = coker_piece.direct_sum(&ker_piece);
    let mut notes = Vec::new();
    if !coker_piece.is_trivial() && !ker_piece.is_trivial() {
        notes.push(
            "both Wang pieces are nonzero; the kernel piece is free so the extension splits".into(),
        );
    }
    Ok(MappingTorusHomology {
        h1,
        h2_cokernel_piece: coker_piece,
        h2_kernel_piece: ker_piece,
        h2,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_torus() {
        let u = IntMatrix::from_i64(&[[0, 1], [1, 3]]);
        let h = mapping_torus_homology(&u).unwrap();
        assert_eq!(h.h1.to_string(), "Z + Z/3");
        assert_eq!(h.h2_cokernel_piece.to_string(), "Z/2");
        assert!(h.h2_kernel_piece.is_trivial());
        assert_eq!(h.h2.to_string(), "Z/2");
        assert!(h.notes.is_empty());
    }

    #[test]
    fn trivial_action_gives_torus_homology() {
        let h = mapping_torus_homology(&IntMatrix::identity(2)).unwrap();
        assert_eq!(h.h1, AbelianGroup::free(3));
        assert_eq!(h.h2_cokernel_piece, AbelianGroup::free(1));
        assert_eq!(h.h2_kernel_piece, AbelianGroup::free(2));
        assert_eq!(h.h2, AbelianGroup::free(3));
        assert_eq!(h.notes.len(), 1);
    }

    #[test]
    fn rank_one_torus() {
        // Klein bottle: Z ⋊_{-1} Z
        let h = mapping_torus_homology(&IntMatrix::from_i64(&[[-1]])).unwrap();
        assert_eq!(h.h1.to_string(), "Z + Z/2");
        assert!(h.h2.is_trivial());
    }

    #[test]
    fn contrast_torus() {
        let c = IntMatrix::from_i64(&[[0, -1], [1, 3]]);
        let h = mapping_torus_homology(&c).unwrap();
        // C - I = [[-1,-1],[1,2]] has det -1
        assert_eq!(h.h1, AbelianGroup::free(1));
        // Λ²C - I = 1 - 1 = 0
        assert_eq!(h.h2, AbelianGroup::free(1));
    }
}

//! Homology of mapping tori `Z^m ⋊_A Z` and the one-relator check on the
//! reference relator.

use lcs_verify::fbc::FbcGroup;
use lcs_verify::latmod::{contrast_matrix, mapping_torus_homology, reference_matrix, IntMatrix};
use lcs_verify::words::exponent_sums;

fn main() -> lcs_verify::Result<()> {
    for (name, a) in [
        ("reference", reference_matrix()),
        ("contrast", contrast_matrix()),
        ("identity", IntMatrix::identity(2)),
    ] {
        let h = mapping_torus_homology(&a)?;
        println!("{name}: H1 = {}, H2 = {}", h.h1, h.h2);
    }
    let g = FbcGroup::reference();
    let r = g.reference_relator()?;
    let (_, e) = r.is_proper_power()?;
    let sums = exponent_sums(&r, 2);
    println!("relator {} exponent {e}, exponent sums {:?}", r.display(g.presentation()), sums);
    Ok(())
}

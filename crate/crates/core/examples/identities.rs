//! Normal forms in `F_2 ⋊_φ Z` and the reference identity suite.

use lcs_verify::fbc::{identity_suite, reference_identity_list, FbcGroup, IdentityVerdict};

fn main() -> lcs_verify::Result<()> {
    let g = FbcGroup::reference();
    let report = identity_suite(&g, &reference_identity_list())?;
    for c in &report.checks {
        println!("{:<24} {} = {}", c.name, c.lhs, c.rhs);
        println!("{:<24} -> {}", "", c.lhs_normal_form.display(g.fiber()));
    }
    println!("all hold: {}", report.all_pass());

    // A non-identity comes back with the normal form of rhs⁻¹·lhs.
    let (ab, ba) = (g.parse("a b")?, g.parse("b a")?);
    if let IdentityVerdict::Unequal(w) = g.verify_identity(&ab, &ba)? {
        println!("ab != ba, witness {}", w.display(g.fiber()));
    }
    Ok(())
}

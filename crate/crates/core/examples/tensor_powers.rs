//! `U^{⊗m} − I` through the norm-sequence route, cross-checked against
//! compound determinants of the full Kronecker power for small `m`.

use lcs_verify::latmod::{reference_matrix, structured_product_check, subset_product_check};
use lcs_verify::liemod::{kronecker_power, tensor_power_char_poly};

fn main() -> lcs_verify::Result<()> {
    let u = reference_matrix();
    for m in 1..=12 {
        let v = structured_product_check(&u, m, 40)?;
        println!("m={m:>2} structured {:?}", v.status);
    }
    for m in 1..=3 {
        let k = kronecker_power(&u, m, 64)?;
        let v = subset_product_check(&k.minus_identity()?, 128)?;
        println!("m={m} side {} exterior {:?}", k.rows(), v.status);
    }
    println!("char poly of U^(x2): {}", tensor_power_char_poly(&u, 2)?);
    Ok(())
}

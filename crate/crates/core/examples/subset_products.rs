//! Residual nilpotence of `Z^m` under `A`: no product of eigenvalues of
//! `A − I` equals `±1`, decided exactly with compound matrices.

use lcs_verify::latmod::{
    contrast_matrix, reference_matrix, stable_image_chain, subset_product_check_with_lattice,
    IntMatrix,
};

fn show(label: &str, a: &IntMatrix) -> lcs_verify::Result<()> {
    let b = a.minus_identity()?;
    let v = subset_product_check_with_lattice(&b, 128)?;
    println!("{label}: A - I =\n{b}");
    println!("  verdict {:?} via {}", v.status, v.route);
    for d in &v.determinants {
        println!("  k={} det(L^k - I)={} det(L^k + I)={}", d.k, d.minus, d.plus);
    }
    for c in &v.certificates {
        println!("  certificate {}", c.to_json());
    }
    let chain = stable_image_chain(&b, 6)?;
    println!("  image chain indices {:?}", chain.indices());
    Ok(())
}

fn main() -> lcs_verify::Result<()> {
    show("reference", &reference_matrix())?;
    show("contrast", &contrast_matrix())?;
    Ok(())
}

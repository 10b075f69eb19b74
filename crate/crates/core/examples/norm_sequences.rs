//! Integer norm sequences `M_l = δ^l − t_l + 1` and `N_s = δ^s + t_s + 1`.

use lcs_verify::latmod::{norm_sequences, reference_matrix};

fn main() -> lcs_verify::Result<()> {
    let r = norm_sequences(&reference_matrix(), 40)?;
    let s = &r.sequences;
    for l in 1..=8 {
        println!("l={l} t={} M={} N={}", s.t[l], s.m[l], s.n[l]);
    }
    for c in &r.checks {
        println!("{} : {}", c.name, c.holds);
    }
    println!(
        "N_s | N_1 for odd s: {} (first failure {:?})",
        r.reverse_divisibility_holds, r.reverse_divisibility_first_failure
    );
    Ok(())
}

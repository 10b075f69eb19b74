//! `γ_n(G) ∩ F` for `n ≤ 7`, exact modulo `γ_7(F)`.

use lcs_verify::fbc::FbcGroup;
use lcs_verify::lcs::{Engine, EngineConfig};
use lcs_verify::num_bigint::BigInt;

fn main() -> lcs_verify::Result<()> {
    let g = FbcGroup::reference();
    let engine = Engine::build(EngineConfig::new(g.clone(), 7)?)?;
    for (i, s) in engine.stats().iter().enumerate() {
        println!("W_{} basis {} after {} passes", i + 2, s.basis_size, s.passes);
    }
    let x = g.parse_fiber("x")?;
    for k in 1..=4u32 {
        let p = x.pow(&BigInt::from(3).pow(k))?;
        println!("x^(3^{k}) in gamma_{}: {}", k + 1, engine.member(&p, k as usize + 1)?);
    }
    println!("x in gamma_2: {}", engine.member(&x, 2)?);
    for n in 1..7 {
        println!("gamma_{n}/gamma_{}: {}", n + 1, engine.graded_invariants(n)?.group);
    }
    let c = g.parse_fiber("[x, y]")?;
    println!("[x,y] in gamma_7: {}", engine.member(&c, 7)?);
    print!("{}", engine.dump().lines().take(8).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

//! The contrast preset: `A − I` has a unit-determinant invariant lattice,
//! so the module is not residually nilpotent. The run still passes because
//! the preset expects the violation.

use lcs_verify::cli::{run, RunConfig};

fn main() -> lcs_verify::Result<()> {
    let report = run(&RunConfig::preset("contrast-resnilp-fail")?)?;
    print!("{}", report.render_text());
    Ok(())
}

//! An inline group from a JSON config: `x ↦ y, y ↦ x y²`.

use lcs_verify::cli::{run, RunConfig};

const CONFIG: &str = r#"{
  "group": {
    "fiber": ["x", "y"],
    "phi": ["y", "x y^2"],
    "identities": [{"name": "t-conjugation", "lhs": "t^-1 x t", "rhs": "y"}]
  },
  "caps": {"class_cap": 5, "tensor_max": 6, "degree_cap": 6},
  "expect": {"residually_nilpotent": true, "h1": "Z + Z/2"}
}"#;

fn main() -> lcs_verify::Result<()> {
    let report = run(&RunConfig::from_json(CONFIG)?)?;
    print!("{}", report.render_text());
    Ok(())
}

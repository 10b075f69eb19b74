//! Magnus weights of `[[y,x], x, [y,x], …, [y,x]]`.

use lcs_verify::lcs::witness_report;

fn main() -> lcs_verify::Result<()> {
    for w in witness_report(4, 12)? {
        println!(
            "k={} letters={} weight={} expected={} in gamma_(k+2)(F)={}",
            w.k, w.letters, w.weight, w.expected_weight, w.in_free_gamma
        );
    }
    Ok(())
}

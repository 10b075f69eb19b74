//! Lyndon bases of free Lie rings and the induced Lie power matrices.

use lcs_verify::latmod::reference_matrix;
use lcs_verify::liemod::{hall_basis, lie_power_matrix, lie_power_subset_check, witt_dimension};
use lcs_verify::words::Alphabet;

fn main() -> lcs_verify::Result<()> {
    let xy = Alphabet::standard(2);
    for n in 1..=8 {
        let basis = hall_basis(2, n)?;
        println!("n={n} witt={} hall={}", witt_dimension(2, n), basis.len());
        if n <= 4 {
            for h in &basis {
                println!("    {}", h.bracket.display(&xy));
            }
        }
    }
    let u = reference_matrix();
    println!("L^2(U) =\n{}", lie_power_matrix(&u, 2)?.matrix);
    println!("L^3(U) =\n{}", lie_power_matrix(&u, 3)?.matrix);
    for n in 2..=8 {
        let v = lie_power_subset_check(&u, n, 128)?;
        println!("n={n} {:?} via {}", v.status, v.route);
    }
    Ok(())
}

//! Logarithmic gap between the classical constant and the explicit one for
//! `q - 1 <= k <= 2q - 2`.

use ritz_spline::bounds::{schultz_gap_table, schultz_k};

fn main() -> ritz_spline::Result<()> {
    let table = schultz_gap_table(8);
    for q in 1..=8 {
        let row: Vec<String> = table
            .iter()
            .filter(|e| e.q == q)
            .map(|e| format!("{:7.3}", e.gap))
            .collect();
        println!("q={q}: {}", row.join(" "));
    }
    let min = table.iter().map(|e| e.gap).fold(f64::INFINITY, f64::min);
    println!("smallest gap {min:.3e}");
    println!("K(q=2, k=2, l=1) = {:.10}", schultz_k(2, 2, 1)?);
    Ok(())
}

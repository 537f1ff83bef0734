// SPDX-License-Identifier: Apache-2.0

//! Computes the d0-homology of the special elements S(m,n) by exact
//! ranks, stratum by stratum.
//!
//! cargo run --release --example acyclicity -- [max_arity]

use std::time::Instant;

use propmodel::linalg::{homology, matrix_of_d0, rank};
use propmodel::special_elements::enumerate_special;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max_arity must be an integer"))
        .unwrap_or(6);

    for total in 3..=max {
        for m in 1..total {
            let n = total - m;
            let start = Instant::now();
            let table = enumerate_special(m, n);
            let h = homology(&table).expect("homology");
            println!(
                "S({m},{n}): dim {}, homology {h:?} [{:.2?}]",
                table.len(),
                start.elapsed()
            );
        }
    }

    println!("\nranks of d0 on S(2,3):");
    let table = enumerate_special(2, 3);
    for &(d, g) in table.strata().keys() {
        let mat = matrix_of_d0(&table, d, g).expect("matrix");
        println!(
            "  ({d},{g}) -> ({},{g}): {}x{}, rank {}",
            d - 1,
            mat.rows(),
            mat.cols(),
            rank(&mat)
        );
    }
}

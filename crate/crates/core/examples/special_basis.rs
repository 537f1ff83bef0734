// SPDX-License-Identifier: Apache-2.0

//! Enumerates bases of special elements and prints their dimensions,
//! split by degree and genus.
//!
//! cargo run --release --example special_basis -- [max_product]

use std::time::Instant;

use propmodel::special_elements::{enumerate_special, genus_zero_part};
use propmodel::syntax::print_monomial;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max_product must be an integer"))
        .unwrap_or(6);

    println!("basis of S(2,2):");
    for x in enumerate_special(2, 2).iter() {
        println!("  {}", print_monomial(x));
    }

    println!("\n  m  n    dim  genus-0  strata (degree,genus)=count");
    for m in 1..=max {
        for n in 1..=max / m {
            let start = Instant::now();
            let t = enumerate_special(m, n);
            let strata: Vec<String> = t
                .strata()
                .iter()
                .map(|((d, g), v)| format!("({d},{g})={}", v.len()))
                .collect();
            println!(
                "{m:>3}{n:>3}{:>7}{:>9}  {}  [{:.2?}]",
                t.len(),
                genus_zero_part(&t).len(),
                strata.join(" "),
                start.elapsed()
            );
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Loads the recorded full differential, prints its term counts by genus
//! and checks that it squares to zero.
//!
//! cargo run --release --example full_differential -- [m n]

use propmodel::differential::{
    codim1_term_count, recorded_differential, verify_square_zero, TableDerivation,
};
use propmodel::perturbation::genus_part;
use propmodel::syntax::print_element;
use propmodel::Generator;

fn main() {
    let table = recorded_differential();
    let d = TableDerivation::new(&table);

    for g in table.generators() {
        let e = table.get(g).unwrap();
        let by_genus: Vec<usize> = (0..=((g.outputs - 1) * (g.inputs - 1)) as u64)
            .map(|k| genus_part(e, k).len())
            .collect();
        println!(
            "{g}: {:>3} terms, by genus {by_genus:?}",
            codim1_term_count(&d, g).unwrap()
        );
    }

    let gens: Vec<Generator> = table.generators().collect();
    let report = verify_square_zero(&d, &gens).unwrap();
    println!(
        "square-zero on {} entries: {}",
        gens.len(),
        if report.is_ok() { "ok" } else { "FAILED" }
    );

    let args: Vec<u32> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("integer"))
        .collect();
    if let [m, n] = args[..] {
        let g = Generator::new(m, n).expect("generator");
        match table.get(g) {
            Some(e) => print!("d {g} =\n{}", print_element(e)),
            None => println!("no recorded entry for {g}"),
        }
    }
}

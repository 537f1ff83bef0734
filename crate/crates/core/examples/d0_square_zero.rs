// SPDX-License-Identifier: Apache-2.0

//! Prints the d0-images of small generators and checks d0 o d0 = 0 up to
//! a total arity.
//!
//! cargo run --release --example d0_square_zero -- [max_arity]

use std::time::Instant;

use propmodel::differential::{d0_generator, generators_up_to, verify_square_zero, D0};
use propmodel::syntax::print_element;
use propmodel::Generator;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max_arity must be an integer"))
        .unwrap_or(8);

    for (m, n) in [(2, 2), (1, 3), (1, 4), (2, 3)] {
        let g = Generator::new(m, n).unwrap();
        let d = d0_generator(g);
        println!("d0 {g} ({} terms) =\n{}", d.len(), print_element(&d));
    }

    let gens = generators_up_to(max);
    let start = Instant::now();
    let report = verify_square_zero(&D0::new(), &gens).expect("d0");
    println!(
        "d0^2 on {} generators with m+n <= {max}: {} failures [{:.2?}]",
        gens.len(),
        report.failures.len(),
        start.elapsed()
    );
    for (g, r) in &report.failures {
        println!("  {g}: {} residual terms", r.len());
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Builds the perturbed differential level by level, validates it and
//! compares the solved entries with the recorded formulas.
//!
//! cargo run --release --example perturbation -- [max_level]

use std::time::Instant;

use propmodel::differential::recorded_differential;
use propmodel::perturbation::{
    compare_entries, seed_base_cases, solve_through, validate_structure, PerturbationState,
};

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max_level must be an integer"))
        .unwrap_or(6);

    let mut state = PerturbationState::new();
    seed_base_cases(&mut state);
    let start = Instant::now();
    let log = solve_through(&mut state, max).expect("solver");
    for (g, steps) in &log {
        println!("{g}:");
        for s in steps {
            println!(
                "  genus {}: rhs {} terms, matrix {}x{}, solution {} terms",
                s.genus, s.rhs_terms, s.matrix.0, s.matrix.1, s.solution_terms
            );
        }
    }
    println!("solved through m+n = {max} in {:.2?}", start.elapsed());

    let violations = validate_structure(&state, max).expect("validation");
    println!("violations: {}", violations.len());
    for v in &violations {
        println!("  {}: {}", v.generator, v.message);
    }

    let record = recorded_differential();
    for g in record.generators() {
        if g.outputs + g.inputs == 6 && state.table.get(g).is_some() {
            let c = compare_entries(&state.table, &record, g).expect("compare");
            if c.identical() {
                println!("{g}: solver agrees with the recorded formula");
            }
            for (genus, terms, cycle) in c.by_genus {
                println!("{g}: genus {genus} differs in {terms} terms, d0-cycle: {cycle}");
            }
        }
    }
}

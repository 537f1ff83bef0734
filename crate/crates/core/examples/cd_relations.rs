// SPDX-License-Identifier: Apache-2.0

//! Checks the (c;d)-relations between fractions on the printed instances
//! and on random ones.
//!
//! cargo run --release --example cd_relations -- [count] [seed]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use propmodel::special_elements::{
    cd_instance_12_21, cd_instance_21_11, cd_instance_21_21, check_cd_relation, enumerate_special,
    random_cd_instance,
};
use propmodel::syntax::print_monomial;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer"));
    let count = args.next().unwrap_or(200);
    let seed = args.next().unwrap_or(7);

    let inst = cd_instance_21_11();
    let (up, _) = inst.up().unwrap();
    let (down, _) = inst.down().unwrap();
    println!(
        "first printed instance: {}",
        check_cd_relation(&inst).unwrap()
    );
    println!("  {}\n  {}", print_monomial(&up), print_monomial(&down));

    for x in enumerate_special(2, 2).iter() {
        println!(
            "{}: {} {}",
            print_monomial(x),
            check_cd_relation(&cd_instance_21_21(x.clone())).unwrap(),
            check_cd_relation(&cd_instance_12_21(x.clone())).unwrap()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let failures = (0..count)
        .filter(|_| !check_cd_relation(&random_cd_instance(&mut rng, 3)).unwrap())
        .count();
    println!("{count} random instances, {failures} failures");
}

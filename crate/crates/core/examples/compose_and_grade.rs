// SPDX-License-Identifier: Apache-2.0

//! Builds small composites with the library API and with the term
//! language, then prints their gradings.
//!
//! cargo run --example compose_and_grade -- ["expression"]

use propmodel::gradings::grades;
use propmodel::prop_algebra::{act, comp_at_input, fraction, hcomp, vcomp, Element};
use propmodel::syntax::{parse_element, print_element};
use propmodel::term_graph::WireBundle;

fn show(name: &str, x: &Element) {
    println!("{name}: {}", print_element(x).trim_end());
    for (m, _) in x.iter() {
        let g = grades(m);
        println!(
            "    degree {}, genus {}, pth {}, vertices {}",
            g.degree, g.genus, g.pth, g.vertices
        );
    }
}

fn main() {
    let xi = |m, n| Element::xi(m, n).unwrap();

    let upsilon = vcomp(&xi(2, 1), &xi(1, 2)).unwrap();
    show("upsilon", &upsilon);

    let butterfly = fraction(&[xi(1, 2), xi(1, 2)], &[xi(2, 1), xi(2, 1)]).unwrap();
    show("butterfly", &butterfly);

    let comb = vcomp(
        &hcomp(&Element::identity(1), &xi(1, 2)),
        &hcomp(&xi(2, 1), &Element::identity(1)),
    )
    .unwrap();
    show("left comb over a cotree", &comb);

    let partial = comp_at_input(&xi(1, 2), 2, &xi(1, 2)).unwrap();
    show("xi(1,2) o_2 xi(1,2)", &partial);

    let swap = WireBundle::from_one_based(&[2, 1]).unwrap();
    let twisted = act(&swap, &xi(2, 2), &WireBundle::identity(2)).unwrap();
    show("act[(2,1); xi(2,2); (1,2)]", &twisted);

    // Odd generators anticommute under the interchange law.
    let ab = hcomp(&xi(1, 3), &xi(2, 2));
    let ba = hcomp(&xi(2, 2), &xi(1, 3));
    show("xi(1,3) * xi(2,2)", &ab);
    show("xi(2,2) * xi(1,3)", &ba);

    if let Some(src) = std::env::args().nth(1) {
        match parse_element(&src) {
            Ok(x) => show("input", &x),
            Err(e) => eprintln!("{e}"),
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Round-trips an element through the term language, JSON and the text
//! graph document.
//!
//! cargo run --example serialization -- ["expression"]

use propmodel::serial::{element_from_json, element_from_text, element_to_json, element_to_text};
use propmodel::syntax::{parse_element, print_element};

fn main() {
    let src = std::env::args().nth(1).unwrap_or_else(|| {
        "- 1/2 xi(2,1) . xi(1,2) + 3 frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]".into()
    });
    let x = parse_element(&src).expect("expression");

    let printed = print_element(&x);
    println!("printed:\n{printed}");
    assert_eq!(parse_element(&printed).unwrap(), x);

    let json = element_to_json(&x);
    println!("json:\n{json}");
    assert_eq!(element_from_json(&json).unwrap(), x);

    let text = element_to_text(&x);
    println!("text document:\n{text}");
    assert_eq!(element_from_text(&text).unwrap(), x);

    println!("all three round trips agree");
}

// SPDX-License-Identifier: Apache-2.0

//! Randomized properties of the engine.

use num_traits::Zero;
use proptest::prelude::*;

use propmodel::differential::{extend_derivation, D0};
use propmodel::gradings::{genus, grades, path_grading};
use propmodel::linalg::{kernel_basis, rank, solve, SparseMatrix};
use propmodel::prop_algebra::{act, coeff_int, hcomp};
use propmodel::serial::{element_from_json, element_to_json};
use propmodel::special_elements::special_monomials;
use propmodel::syntax::{parse_element, print_element};
use propmodel::term_graph::WireBundle;
use propmodel::{Coeff, Element, Monomial};

fn special(m: u32, n: u32, pick: usize) -> Monomial {
    let list = special_monomials(m, n);
    list[pick % list.len()].clone()
}

fn biarity() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=3, 1u32..=3).prop_filter("not (1,1)", |&(m, n)| (m, n) != (1, 1))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (biarity(), any::<usize>()).prop_map(|((m, n), k)| special(m, n, k))
}

fn permutation(k: u32) -> impl Strategy<Value = WireBundle> {
    Just((0..k).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| WireBundle::from_image(v).unwrap())
}

/// A linear combination of special monomials of one biarity.
fn element() -> impl Strategy<Value = Element> {
    (
        biarity(),
        prop::collection::vec((any::<usize>(), -5i64..=5, 1i64..=4), 1..5),
    )
        .prop_map(|((m, n), terms)| {
            let mut x = Element::zero(m, n);
            for (k, p, q) in terms {
                x.add_term(special(m, n, k), Coeff::new(p.into(), q.into()));
            }
            x
        })
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<Coeff>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-2i64..=2).prop_map(coeff_int), c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip(x in element()) {
        prop_assert_eq!(parse_element(&print_element(&x)).unwrap(), x.clone());
        prop_assert_eq!(element_from_json(&element_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn d0_squares_to_zero_on_special_elements(x in element()) {
        let d = D0::new();
        let dx = extend_derivation(&d, &x).unwrap();
        prop_assert!(extend_derivation(&d, &dx).unwrap().is_zero());
    }

    #[test]
    fn gradings_ignore_leg_labels(
        (x, sigma, tau) in monomial().prop_flat_map(|x| {
            let (m, n) = x.biarity();
            (Just(x), permutation(m), permutation(n))
        })
    ) {
        let y = act(&sigma, &Element::from_monomial(x.clone()), &tau).unwrap();
        let moved = y.terms().keys().next().unwrap();
        prop_assert_eq!(grades(&x), grades(moved));
    }

    #[test]
    fn gradings_add_under_tensor_product(x in monomial(), y in monomial()) {
        let z = hcomp(&Element::from_monomial(x.clone()), &Element::from_monomial(y.clone()));
        let z = z.terms().keys().next().unwrap();
        prop_assert_eq!(genus(z), genus(&x) + genus(&y));
        prop_assert_eq!(path_grading(z), path_grading(&x) + path_grading(&y));
        prop_assert_eq!(z.degree(), x.degree() + y.degree());
    }

    #[test]
    fn transpose_keeps_gradings(x in monomial()) {
        let t = x.transpose();
        prop_assert_eq!(t.biarity(), (x.inputs(), x.outputs()));
        prop_assert_eq!(genus(&t), genus(&x));
        prop_assert_eq!(path_grading(&t), path_grading(&x));
        prop_assert_eq!(t.transpose(), x);
    }

    #[test]
    fn rank_nullity_and_solving(rows in small_matrix(), y in prop::collection::vec(-3i64..=3, 5)) {
        let a = SparseMatrix::from_dense(&rows);
        let r = rank(&a);
        prop_assert_eq!(r, rank(&a.transpose()));
        let kernel = kernel_basis(&a);
        prop_assert_eq!(kernel.len() + r, a.cols());
        for v in &kernel {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        let y: Vec<Coeff> = y[..a.cols()].iter().map(|&v| coeff_int(v)).collect();
        let b = a.mul_vec(&y).unwrap();
        let x = solve(&a, &b).unwrap().expect("consistent system");
        prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Gradings of monomials: genus, path count, vertex count.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::prop_algebra::Element;
use crate::term_graph::{vertex_components, Monomial, Source};

/// First Betti number of the graph with legs pruned: `E_int - V + c`.
pub fn genus(x: &Monomial) -> u64 {
    let internal: usize = (0..x.vertex_count())
        .map(|v| {
            x.feeds(v)
                .iter()
                .filter(|s| matches!(s, Source::Port(..)))
                .count()
        })
        .sum();
    (internal + vertex_components(x) - x.vertex_count()) as u64
}

/// For each input leg `j` and output leg `i`, the number of directed paths
/// from `j` to `i`, indexed `[i][j]`.
pub fn path_matrix(x: &Monomial) -> Vec<Vec<BigUint>> {
    let n = x.inputs() as usize;
    // Vertices in reverse canonical order are not topologically sorted in
    // general, so memoize on demand.
    let mut memo: Vec<Option<Vec<BigUint>>> = vec![None; x.vertex_count()];
    fn count(
        x: &Monomial,
        v: usize,
        n: usize,
        memo: &mut Vec<Option<Vec<BigUint>>>,
    ) -> Vec<BigUint> {
        if let Some(c) = &memo[v] {
            return c.clone();
        }
        let mut acc = vec![BigUint::zero(); n];
        for s in x.feeds(v) {
            match *s {
                Source::Input(j) => acc[j as usize] += BigUint::one(),
                Source::Port(u, _) => {
                    let sub = count(x, u as usize, n, memo);
                    for (a, b) in acc.iter_mut().zip(sub) {
                        *a += b;
                    }
                }
            }
        }
        memo[v] = Some(acc.clone());
        acc
    }
    x.outs()
        .iter()
        .map(|s| match *s {
            Source::Input(j) => {
                let mut row = vec![BigUint::zero(); n];
                row[j as usize] = BigUint::one();
                row
            }
            Source::Port(u, _) => count(x, u as usize, n, &mut memo),
        })
        .collect()
}

/// Total number of directed paths from input legs to output legs.
pub fn path_grading(x: &Monomial) -> BigUint {
    path_matrix(x).into_iter().flatten().sum()
}

/// Number of vertices.
pub fn vertex_grading(x: &Monomial) -> usize {
    x.vertex_count()
}

/// Half-PROP monomials are exactly those of genus 0 with `pth = mn`.
pub fn is_half_prop_monomial(x: &Monomial) -> bool {
    let (m, n) = x.biarity();
    genus(x) == 0 && path_grading(x) == BigUint::from(m as u64 * n as u64)
}

/// The bound `pth(x) <= mn (gen(x) + 1)`.
///
/// It holds on fractions and tensor products of generators but not on every
/// vertical composite: two stacked copies of `xi(1,2) . xi(2,1)` have four
/// paths at genus 2 in biarity (1,1).
pub fn check_path_genus_inequality(x: &Monomial) -> bool {
    let (m, n) = x.biarity();
    path_grading(x) <= BigUint::from(m as u64 * n as u64) * BigUint::from(genus(x) + 1)
}

/// A summary of all gradings of a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grades {
    pub degree: i64,
    pub genus: u64,
    pub pth: BigUint,
    pub vertices: usize,
}

pub fn grades(x: &Monomial) -> Grades {
    Grades {
        degree: x.degree(),
        genus: genus(x),
        pth: path_grading(x),
        vertices: x.vertex_count(),
    }
}

/// Common genus of all terms, or `None` for zero or mixed genus.
pub fn element_genus(e: &Element) -> Option<u64> {
    let mut it = e.terms().keys().map(genus);
    let g = it.next()?;
    it.all(|h| h == g).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop_algebra::{fraction, vcomp, Element};

    fn mono(e: &Element) -> Monomial {
        e.terms().keys().next().unwrap().clone()
    }

    #[test]
    fn butterfly_and_upsilon() {
        let x = |m, n| Element::xi(m, n).unwrap();
        let bfly = fraction(&[x(1, 2), x(1, 2)], &[x(2, 1), x(2, 1)]).unwrap();
        let g = grades(&mono(&bfly));
        assert_eq!((g.degree, g.genus, g.vertices), (0, 1, 4));
        assert_eq!(g.pth, BigUint::from(4u32));
        let ups = vcomp(&x(2, 1), &x(1, 2)).unwrap();
        assert_eq!(genus(&mono(&ups)), 0);
        assert!(is_half_prop_monomial(&mono(&ups)));
        assert!(!is_half_prop_monomial(&mono(&bfly)));
        assert!(check_path_genus_inequality(&mono(&bfly)));
    }

    #[test]
    fn path_bound_fails_on_stacked_bubbles() {
        let x = |m, n| Element::xi(m, n).unwrap();
        let bubble = vcomp(&x(1, 2), &x(2, 1)).unwrap();
        let twice = mono(&vcomp(&bubble, &bubble).unwrap());
        assert_eq!(
            (genus(&twice), path_grading(&twice)),
            (2, BigUint::from(4u32))
        );
        assert!(!check_path_genus_inequality(&twice));
    }
}

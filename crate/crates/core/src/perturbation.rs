// SPDX-License-Identifier: Apache-2.0

//! The perturbed differential `d = d0 + d1 + d2 + ...`, where `d_g` raises
//! the genus by `g`, constructed generator by generator.
//!
//! For `xi(m,n)` with all smaller generators known, `d_g(xi)` solves
//! `d0 d_g(xi) = b_g` with `b_g = -sum_{s+t=g, t<g} d_s d_t(xi)`, inside the
//! special elements of degree `m+n-4` and genus `g`. Generators with
//! `m + n <= 5` are seeded from the recorded formulas.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::differential::{
    d0_generator, extend_derivation, recorded_differential, verify_square_zero, Derivation,
    DifferentialTable, Provenance, TableDerivation, D0,
};
use crate::error::{Error, Result};
use crate::gradings::{genus, path_grading};
use crate::linalg::{coordinates, from_coordinates, matrix_of_d0, solve};
use crate::prop_algebra::Element;
use crate::special_elements::enumerate_special;
use crate::syntax::print_monomial;
use crate::term_graph::Generator;

/// `(m-1)(n-1)`: the largest genus a component of `d(xi(m,n))` may have.
pub fn genus_cap(g: Generator) -> u64 {
    ((g.outputs - 1) * (g.inputs - 1)) as u64
}

/// The genus `g` part of an element.
pub fn genus_part(x: &Element, g: u64) -> Element {
    x.filter(|m| genus(m) == g)
}

/// The derivation `d_s`: generator images are the genus `s` parts of the
/// table entries.
pub struct Component<'a> {
    table: &'a DifferentialTable,
    genus: u64,
    cache: RwLock<HashMap<Generator, Arc<Element>>>,
}

impl<'a> Component<'a> {
    pub fn new(table: &'a DifferentialTable, genus: u64) -> Self {
        Component {
            table,
            genus,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl Derivation for Component<'_> {
    fn image(&self, g: Generator) -> Result<Arc<Element>> {
        if let Some(e) = self.cache.read().expect("lock").get(&g) {
            return Ok(e.clone());
        }
        let full = self.table.get(g).ok_or(Error::MissingEntry(g))?;
        let e = Arc::new(genus_part(full, self.genus));
        self.cache.write().expect("lock").insert(g, e.clone());
        Ok(e)
    }
}

/// A partial table of full differentials, filled level by level in
/// `N = m + n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerturbationState {
    pub table: DifferentialTable,
}

impl PerturbationState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Components `g -> d_g(xi)` of a known generator, zero ones omitted.
    pub fn components(&self, g: Generator) -> Option<BTreeMap<u64, Element>> {
        let e = self.table.get(g)?;
        let mut out: BTreeMap<u64, Element> = BTreeMap::new();
        for (m, c) in e.iter() {
            let (a, b) = g.biarity();
            out.entry(genus(m))
                .or_insert_with(|| Element::zero(a, b))
                .add_term(m.clone(), c.clone());
        }
        Some(out)
    }

    /// Largest `N` such that every generator with `m + n <= N` is known.
    pub fn complete_through(&self) -> u32 {
        let mut n = 2;
        while generators_of_level(n + 1)
            .iter()
            .all(|g| self.table.get(*g).is_some())
        {
            n += 1;
        }
        n
    }
}

/// Generators with `m + n = level`, by increasing `m`.
pub fn generators_of_level(level: u32) -> Vec<Generator> {
    (1..level)
        .filter_map(|m| Generator::new(m, level - m).ok())
        .collect()
}

/// Seeds every generator with `m + n <= 5` from the recorded formulas.
pub fn seed_base_cases(state: &mut PerturbationState) {
    let record = recorded_differential();
    for level in 3..=5 {
        for g in generators_of_level(level) {
            let e = record.get(g).expect("recorded base case").clone();
            state.table.insert(g, e, Provenance::Record);
        }
    }
}

/// What happened at one genus while solving a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusStep {
    pub genus: u64,
    /// Number of terms of `b_g`.
    pub rhs_terms: usize,
    /// Size of the `d0` matrix used, rows by columns.
    pub matrix: (usize, usize),
    /// Number of terms of the chosen `d_g(xi)`.
    pub solution_terms: usize,
}

/// `b_g = -sum_{t<g} d_{g-t}(d_t(xi))`, given the components of `xi`
/// found so far.
fn right_hand_side(
    table: &DifferentialTable,
    gen: Generator,
    known: &BTreeMap<u64, Element>,
    g: u64,
) -> Result<Element> {
    let (m, n) = gen.biarity();
    let mut b = Element::zero(m, n);
    for t in 0..g {
        let Some(dt) = known.get(&t) else { continue };
        if dt.is_zero() {
            continue;
        }
        b += &extend_derivation(&Component::new(table, g - t), dt)?;
    }
    Ok(-&b)
}

/// Solves `d(xi(m,n))` from the generators already in `state`, and
/// returns the new entry with a log of the steps. The state is not
/// modified.
pub fn solve_entry(state: &PerturbationState, gen: Generator) -> Result<(Element, Vec<GenusStep>)> {
    let (m, n) = gen.biarity();
    let level = m + n;
    let missing: Vec<Generator> = (3..level)
        .flat_map(generators_of_level)
        .filter(|g| state.table.get(*g).is_none())
        .collect();
    if let Some(g) = missing.first() {
        return Err(Error::MissingEntry(*g));
    }
    let basis = enumerate_special(m, n);
    let top = level as i64 - 4;
    let cap = genus_cap(gen);
    let mut known: BTreeMap<u64, Element> = BTreeMap::new();
    known.insert(0, d0_generator(gen));
    let mut steps = Vec::new();
    let max_sub = (3..level)
        .flat_map(generators_of_level)
        .map(genus_cap)
        .max()
        .unwrap_or(0);
    for g in 1..=cap + max_sub {
        let b = right_hand_side(&state.table, gen, &known, g)?;
        let where_ = format!("stratum (degree {}, genus {g}) of S({m},{n})", top - 1);
        if g > cap {
            if !b.is_zero() {
                return Err(Error::Unsupported(format!(
                    "{gen}: right-hand side in {where_} is nonzero beyond the genus cap"
                )));
            }
            continue;
        }
        if !extend_derivation(&D0::new(), &b)?.is_zero() {
            return Err(Error::Unsupported(format!(
                "{gen}: right-hand side in {where_} is not a d0-cycle"
            )));
        }
        let rhs = coordinates(&basis, (top - 1, g), &b)
            .map_err(|e| Error::Unsupported(format!("{gen}: {e}")))?;
        let matrix = matrix_of_d0(&basis, top, g)?;
        let x = solve(&matrix, &rhs)?.ok_or_else(|| {
            Error::Unsupported(format!("{gen}: no solution of d0 x = b in {where_}"))
        })?;
        let dg = from_coordinates(&basis, (top, g), &x);
        steps.push(GenusStep {
            genus: g,
            rhs_terms: b.len(),
            matrix: (matrix.rows(), matrix.cols()),
            solution_terms: dg.len(),
        });
        known.insert(g, dg);
    }
    let mut total = Element::zero(m, n);
    for part in known.values() {
        total += part;
    }
    Ok((total, steps))
}

/// Solves one generator and records it with solver provenance.
pub fn solve_generator(state: &mut PerturbationState, gen: Generator) -> Result<Vec<GenusStep>> {
    let (e, steps) = solve_entry(state, gen)?;
    state.table.insert(gen, e, Provenance::Solver);
    Ok(steps)
}

/// Solves every level from the first incomplete one through `max_level`.
/// Generators within a level are solved in parallel.
pub fn solve_through(
    state: &mut PerturbationState,
    max_level: u32,
) -> Result<BTreeMap<Generator, Vec<GenusStep>>> {
    let mut log = BTreeMap::new();
    for level in 3..=max_level {
        let todo: Vec<Generator> = generators_of_level(level)
            .into_iter()
            .filter(|g| state.table.get(*g).is_none())
            .collect();
        let solved: Vec<(Generator, Element, Vec<GenusStep>)> = todo
            .par_iter()
            .map(|&g| solve_entry(state, g).map(|(e, s)| (g, e, s)))
            .collect::<Result<_>>()?;
        for (g, e, s) in solved {
            state.table.insert(g, e, Provenance::Solver);
            log.insert(g, s);
        }
    }
    Ok(log)
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub generator: Generator,
    pub message: String,
}

/// Checks the structural claims on every generator with `m + n <= max_level`:
/// each `d_g` term has genus `g`, degree `m+n-4` and path grading `mn`;
/// `d_g = 0` above the genus cap; `d(xi(1,n)) = d0(xi(1,n))` and dually;
/// the genus zero part is `d0`; and `d` squares to zero.
pub fn validate_structure(state: &PerturbationState, max_level: u32) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let gens: Vec<Generator> = (3..=max_level).flat_map(generators_of_level).collect();
    for &gen in &gens {
        let mut bad = |message: String| {
            out.push(Violation {
                generator: gen,
                message,
            })
        };
        let Some(e) = state.table.get(gen) else {
            bad("missing".into());
            continue;
        };
        let (m, n) = gen.biarity();
        let cap = genus_cap(gen);
        for (mono, _) in e.iter() {
            let shown = print_monomial(mono);
            if mono.degree() != (m + n) as i64 - 4 {
                bad(format!("term {shown} has degree {}", mono.degree()));
            }
            if path_grading(mono) != ((m * n) as u64).into() {
                bad(format!(
                    "term {shown} has path grading {}",
                    path_grading(mono)
                ));
            }
            if genus(mono) > cap {
                bad(format!(
                    "term {shown} has genus {} above the cap {cap}",
                    genus(mono)
                ));
            }
        }
        if genus_part(e, 0) != d0_generator(gen) {
            bad("genus zero part differs from d0".into());
        }
        if (m == 1 || n == 1) && *e != d0_generator(gen) {
            bad("d differs from d0 on a generator with one input or one output".into());
        }
    }
    let d = TableDerivation::new(&state.table);
    let present: Vec<Generator> = gens
        .iter()
        .copied()
        .filter(|g| state.table.get(*g).is_some())
        .collect();
    match verify_square_zero(&d, &present) {
        Ok(report) => {
            for (g, residue) in report.failures {
                out.push(Violation {
                    generator: g,
                    message: format!("d squared leaves {} terms", residue.len()),
                });
            }
        }
        Err(e) => out.push(Violation {
            generator: present[0],
            message: format!("square-zero check failed: {e}"),
        }),
    }
    Ok(out)
}

/// Termwise comparison of two differentials on one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub generator: Generator,
    /// Genus of each differing component, with its number of terms and
    /// whether the difference is a `d0`-cycle.
    pub by_genus: Vec<(u64, usize, bool)>,
}

impl Comparison {
    pub fn identical(&self) -> bool {
        self.by_genus.is_empty()
    }
}

/// Compares `a` and `b` on `gen`, genus by genus.
pub fn compare_entries(
    a: &DifferentialTable,
    b: &DifferentialTable,
    gen: Generator,
) -> Result<Comparison> {
    let x = a.get(gen).ok_or(Error::MissingEntry(gen))?;
    let y = b.get(gen).ok_or(Error::MissingEntry(gen))?;
    let diff = x - y;
    let mut by_genus = Vec::new();
    for g in 0..=genus_cap(gen) {
        let part = genus_part(&diff, g);
        if !part.is_zero() {
            let cycle = extend_derivation(&D0::new(), &part)?.is_zero();
            by_genus.push((g, part.len(), cycle));
        }
    }
    Ok(Comparison {
        generator: gen,
        by_genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_element;

    fn g(m: u32, n: u32) -> Generator {
        Generator::new(m, n).unwrap()
    }

    #[test]
    fn seeds() {
        let mut s = PerturbationState::new();
        seed_base_cases(&mut s);
        assert_eq!(s.complete_through(), 5);
        let butterfly = parse_element("frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]").unwrap();
        assert_eq!(
            s.table.get(g(2, 2)).unwrap(),
            &(&d0_generator(g(2, 2)) - &butterfly)
        );
        assert_eq!(s.table.get(g(1, 4)).unwrap(), &d0_generator(g(1, 4)));
        assert!(validate_structure(&s, 5).unwrap().is_empty());
    }

    #[test]
    fn missing_levels_are_reported() {
        let s = PerturbationState::new();
        assert!(matches!(
            solve_entry(&s, g(2, 3)),
            Err(Error::MissingEntry(_))
        ));
    }

    #[test]
    fn recompute_two_three() {
        let mut s = PerturbationState::new();
        seed_base_cases(&mut s);
        let (e, steps) = solve_entry(&s, g(2, 3)).unwrap();
        assert_eq!(steps.len(), 2);
        let mut t = s.clone();
        t.table.insert(g(2, 3), e, Provenance::Solver);
        assert!(validate_structure(&t, 5).unwrap().is_empty());
        let c = compare_entries(&t.table, &s.table, g(2, 3)).unwrap();
        // Same genus 1 part; the genus 2 parts differ by a d0-cycle.
        assert_eq!(c.by_genus, vec![(2, 4, true)]);
    }
}

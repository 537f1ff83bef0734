// SPDX-License-Identifier: Apache-2.0

//! The differential: `d0` on generators, extension to all elements as a
//! derivation, the table of full differentials for small generators, and
//! square-zero checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prop_algebra::{comp_at_input, comp_at_output, substitute_mono, vcomp, Coeff, Element};
use crate::syntax::parse_element;
use crate::term_graph::Generator;

/// A degree -1 map given on generators.
pub trait Derivation: Sync {
    fn image(&self, g: Generator) -> Result<Arc<Element>>;
}

fn xi(m: u32, n: u32) -> Element {
    Element::xi(m, n).expect("valid generator")
}

fn sign(e: u32) -> Coeff {
    crate::prop_algebra::coeff_int(if e.is_multiple_of(2) { 1 } else { -1 })
}

/// `d0(xi(m,n))`.
///
/// Sums `(-1)^m xi(m,1) . xi(1,n)`, then `(-1)^{i(s+1)+m+su} xi(m,u) o_i
/// xi(1,s)` over `u + s = n + 1` with `u, s >= 2`, then `(-1)^{j(t+1)+1} xi(t,1) i_j
/// xi(v,n)` over `t + v = m + 1` with `t, v >= 2`. Terms with `u = 1` or
/// `v = 1` would repeat the first one and are not part of the sum.
///
/// The `su` exponent only matters when `s` and `u` are both odd, so never
/// for `n < 5`. Without it `d0` fails to square to zero on `xi(1,5)`.
pub fn d0_generator(g: Generator) -> Element {
    let (m, n) = g.biarity();
    let mut out = Element::zero(m, n);
    if m >= 2 && n >= 2 {
        out += &vcomp(&xi(m, 1), &xi(1, n)).expect("arity").scale(&sign(m));
    }
    for u in 2..n {
        let s = n + 1 - u;
        for i in 1..=u {
            let t = comp_at_input(&xi(m, u), i, &xi(1, s)).expect("arity");
            out += &t.scale(&sign(i * (s + 1) + m + s * u));
        }
    }
    for v in 2..m {
        let t = m + 1 - v;
        for j in 1..=v {
            let x = comp_at_output(&xi(t, 1), j, &xi(v, n)).expect("arity");
            out += &x.scale(&sign(j * (t + 1) + 1));
        }
    }
    out
}

/// The same sum keeping the `u = 1` and `v = 1` terms. Only used to show
/// that this reading does not square to zero.
pub fn d0_generator_with_unit_terms(g: Generator) -> Element {
    let (m, n) = g.biarity();
    let mut out = d0_generator(g);
    if m >= 2 && n >= 2 {
        let first = vcomp(&xi(m, 1), &xi(1, n)).expect("arity");
        out += &first.scale(&sign(n + 1 + m));
        out += &first.scale(&sign(m + 1 + 1));
    }
    out
}

/// `d0` with generator images cached.
#[derive(Default)]
pub struct D0 {
    cache: RwLock<HashMap<Generator, Arc<Element>>>,
}

impl D0 {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Derivation for D0 {
    fn image(&self, g: Generator) -> Result<Arc<Element>> {
        if let Some(e) = self.cache.read().expect("lock").get(&g) {
            return Ok(e.clone());
        }
        let e = Arc::new(d0_generator(g));
        self.cache.write().expect("lock").insert(g, e.clone());
        Ok(e)
    }
}

/// Applies a derivation: each vertex in turn is replaced by its image, with
/// sign `(-1)` to the total degree of the vertices before it.
pub fn extend_derivation<D: Derivation + ?Sized>(d: &D, x: &Element) -> Result<Element> {
    let (m, n) = x.biarity();
    let mut out = Element::zero(m, n);
    for (mono, c) in x.iter() {
        let mut before = 0i64;
        for (v, &g) in mono.vertices().iter().enumerate() {
            let img = d.image(g)?;
            if !img.is_zero() {
                let c = if before % 2 == 0 {
                    c.clone()
                } else {
                    -c.clone()
                };
                for (t, ct) in img.iter() {
                    let (res, s) = substitute_mono(mono, v, t)?;
                    out.add_signed(res, &(&c * ct), s);
                }
            }
            before += g.degree();
        }
    }
    Ok(out)
}

/// Where a table entry comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Published formula.
    Record,
    /// Computed by the perturbation solver.
    Solver,
}

/// Full differential on finitely many generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialTable {
    entries: BTreeMap<Generator, (Element, Provenance)>,
}

impl DifferentialTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: Generator, e: Element, p: Provenance) {
        assert_eq!(e.biarity(), g.biarity(), "table entry of wrong biarity");
        self.entries.insert(g, (e, p));
    }

    pub fn get(&self, g: Generator) -> Option<&Element> {
        self.entries.get(&g).map(|e| &e.0)
    }

    pub fn provenance(&self, g: Generator) -> Option<Provenance> {
        self.entries.get(&g).map(|e| e.1)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Generator, &Element, Provenance)> {
        self.entries.iter().map(|(g, (e, p))| (*g, e, *p))
    }
}

impl Derivation for DifferentialTable {
    fn image(&self, g: Generator) -> Result<Arc<Element>> {
        self.get(g)
            .map(|e| Arc::new(e.clone()))
            .ok_or(Error::MissingEntry(g))
    }
}

/// Table lookups without cloning entries on every call.
pub struct TableDerivation<'a> {
    table: &'a DifferentialTable,
    cache: RwLock<HashMap<Generator, Arc<Element>>>,
}

impl<'a> TableDerivation<'a> {
    pub fn new(table: &'a DifferentialTable) -> Self {
        TableDerivation {
            table,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl Derivation for TableDerivation<'_> {
    fn image(&self, g: Generator) -> Result<Arc<Element>> {
        if let Some(e) = self.cache.read().expect("lock").get(&g) {
            return Ok(e.clone());
        }
        let e = self.table.image(g)?;
        self.cache.write().expect("lock").insert(g, e.clone());
        Ok(e)
    }
}

const RECORD: &str = include_str!("../data/full_differential.txt");

/// Parses the data file format: `let name = expr` definitions, then
/// entries headed `[xi(m,n)]` whose body is an element, with a `d0` line
/// standing for the unperturbed part.
pub fn parse_table_source(src: &str) -> Result<DifferentialTable> {
    let bad = |line: usize, msg: String| Error::Format(format!("line {line}: {msg}"));
    let mut defs: Vec<(String, String)> = Vec::new();
    let mut table = DifferentialTable::new();
    let mut current: Option<(Generator, bool, String, usize)> = None;
    let finish = |cur: Option<(Generator, bool, String, usize)>,
                  table: &mut DifferentialTable|
     -> Result<()> {
        if let Some((g, with_d0, body, line)) = cur {
            let mut e = if with_d0 {
                d0_generator(g)
            } else {
                Element::zero(g.outputs, g.inputs)
            };
            if !body.trim().is_empty() {
                let extra = parse_element(&body).map_err(|err| bad(line, err.to_string()))?;
                if extra.biarity() != g.biarity() {
                    return Err(bad(
                        line,
                        format!("entry for {g} has biarity {:?}", extra.biarity()),
                    ));
                }
                e += &extra;
            }
            table.insert(g, e, Provenance::Record);
        }
        Ok(())
    };
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(def) = line.strip_prefix("let ") {
            let (name, body) = def
                .split_once('=')
                .ok_or_else(|| bad(line_no, "definition without '='".into()))?;
            defs.push((format!("${}", name.trim()), format!("({})", body.trim())));
            continue;
        }
        if let Some(head) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            finish(current.take(), &mut table)?;
            let e = parse_element(head).map_err(|err| bad(line_no, err.to_string()))?;
            let g = e
                .terms()
                .keys()
                .next()
                .and_then(|m| m.as_generator())
                .filter(|_| e.len() == 1)
                .ok_or_else(|| bad(line_no, format!("{head} is not a generator")))?;
            current = Some((g, false, String::new(), line_no));
            continue;
        }
        let cur = current
            .as_mut()
            .ok_or_else(|| bad(line_no, "term outside an entry".into()))?;
        if line == "d0" {
            cur.1 = true;
            continue;
        }
        let mut text = line.to_string();
        // Longest names first so that no name is a prefix of a later one.
        let mut sorted = defs.clone();
        sorted.sort_by_key(|d| std::cmp::Reverse(d.0.len()));
        for (name, body) in &sorted {
            text = text.replace(name.as_str(), body);
        }
        if text.contains('$') {
            return Err(bad(line_no, format!("undefined name in {line:?}")));
        }
        cur.2.push_str(&text);
        cur.2.push('\n');
    }
    finish(current, &mut table)?;
    Ok(table)
}

/// The published full differential: `d = d0` on `xi(1,n)` and `xi(n,1)` for
/// `n <= 5`, and the recorded formulas for `xi(2,2)`, `xi(2,3)`, `xi(3,2)`,
/// `xi(3,3)` and `xi(2,4)`.
pub fn recorded_differential() -> DifferentialTable {
    let mut table = parse_table_source(RECORD).expect("bundled table parses");
    for n in 2..=5 {
        for g in [Generator::new(1, n), Generator::new(n, 1)] {
            let g = g.expect("valid");
            table.insert(g, d0_generator(g), Provenance::Record);
        }
    }
    table
}

/// Outcome of a square-zero check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareZeroReport {
    pub checked: Vec<Generator>,
    /// Generators where `d(d(xi))` is not zero, with the residue.
    pub failures: Vec<(Generator, Element)>,
}

impl SquareZeroReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `d(d(g)) = 0` for each generator, in parallel.
pub fn verify_square_zero<D: Derivation + ?Sized>(
    d: &D,
    gens: &[Generator],
) -> Result<SquareZeroReport> {
    let results: Vec<(Generator, Element)> = gens
        .par_iter()
        .map(|&g| {
            let once = d.image(g)?;
            Ok((g, extend_derivation(d, &once)?))
        })
        .collect::<Result<_>>()?;
    let mut report = SquareZeroReport::default();
    for (g, residue) in results {
        report.checked.push(g);
        if !residue.is_zero() {
            report.failures.push((g, residue));
        }
    }
    Ok(report)
}

/// Number of monomials of `d(g)`.
pub fn codim1_term_count<D: Derivation + ?Sized>(d: &D, g: Generator) -> Result<usize> {
    Ok(d.image(g)?.len())
}

/// All generators with `m + n <= max`.
pub fn generators_up_to(max: u32) -> Vec<Generator> {
    let mut out = BTreeSet::new();
    for total in 3..=max {
        for m in 1..total {
            if let Ok(g) = Generator::new(m, total - m) {
                out.insert(g);
            }
        }
    }
    let mut v: Vec<Generator> = out.into_iter().collect();
    v.sort_by_key(|g| (g.outputs + g.inputs, g.outputs));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: u32, n: u32) -> Generator {
        Generator::new(m, n).unwrap()
    }

    #[test]
    fn small_images() {
        assert!(d0_generator(g(1, 2)).is_zero());
        assert!(d0_generator(g(2, 1)).is_zero());
        assert_eq!(
            d0_generator(g(2, 2)),
            parse_element("xi(2,1) . xi(1,2)").unwrap()
        );
        assert_eq!(
            d0_generator(g(1, 3)),
            parse_element("xi(1,2) o_1 xi(1,2) - xi(1,2) o_2 xi(1,2)").unwrap()
        );
    }

    #[test]
    fn unit_terms_break_square_zero() {
        let g23 = g(2, 3);
        // Both readings agree for an even number of inputs.
        assert_eq!(d0_generator_with_unit_terms(g(2, 2)), d0_generator(g(2, 2)));
        let literal = d0_generator_with_unit_terms(g23);
        let first = parse_element("xi(2,1) . xi(1,3)").unwrap();
        let m = first.terms().keys().next().unwrap();
        assert_eq!(literal.coeff(m), crate::prop_algebra::coeff_int(3));
        assert!(!extend_derivation(&D0::new(), &literal).unwrap().is_zero());
    }

    #[test]
    fn derivation_on_a_fraction() {
        let x = parse_element("frac[xi(1,2) xi(1,2) / xi(2,2) xi(2,1)]").unwrap();
        let want = parse_element("frac[xi(1,2) xi(1,2) / (xi(2,1) . xi(1,2)) xi(2,1)]").unwrap();
        assert_eq!(extend_derivation(&D0::new(), &x).unwrap(), want);
    }

    #[test]
    fn table_parser_rejects_garbage() {
        assert!(parse_table_source("+ xi(1,2)").is_err());
        assert!(parse_table_source("[xi(2,2)]\n+ $nope").is_err());
        assert!(parse_table_source("[xi(2,2)]\n+ xi(1,2)").is_err());
    }
}

#[cfg(test)]
mod square_zero_tests {
    use super::*;

    #[test]
    fn unadjusted_sign_fails_at_five_inputs() {
        // Flip the sign of the u = s = 3 stratum back.
        let g = Generator::new(1, 5).unwrap();
        let mut e = d0_generator(g);
        for i in 1..=3 {
            let t = comp_at_input(&xi(1, 3), i, &xi(1, 3)).unwrap();
            e += &t.scale(&crate::prop_algebra::coeff_int(-2));
        }
        assert!(!extend_derivation(&D0::new(), &e).unwrap().is_zero());
    }

    #[test]
    fn d0_squares_to_zero_small() {
        let r = verify_square_zero(&D0::new(), &generators_up_to(8)).unwrap();
        assert!(
            r.is_ok(),
            "{:?}",
            r.failures.iter().map(|f| f.0).collect::<Vec<_>>()
        );
    }

    #[test]
    fn recorded_table_squares_to_zero() {
        let t = recorded_differential();
        let d = TableDerivation::new(&t);
        let gens: Vec<Generator> = t.generators().collect();
        let r = verify_square_zero(&d, &gens).unwrap();
        assert!(
            r.is_ok(),
            "{:?}",
            r.failures
                .iter()
                .map(|f| (f.0, f.1.len()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn term_counts() {
        let t = recorded_differential();
        let counts: Vec<usize> = [(2, 2), (2, 3), (3, 3), (2, 4)]
            .iter()
            .map(|&(m, n)| t.get(Generator::new(m, n).unwrap()).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 7, 30, 21]);
        let d = D0::new();
        assert_eq!(
            codim1_term_count(&d, Generator::new(1, 3).unwrap()).unwrap(),
            2
        );
        assert_eq!(
            codim1_term_count(&d, Generator::new(1, 4).unwrap()).unwrap(),
            5
        );
        assert_eq!(
            codim1_term_count(&d, Generator::new(1, 5).unwrap()).unwrap(),
            9
        );
    }
}

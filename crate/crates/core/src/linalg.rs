// SPDX-License-Identifier: Apache-2.0

//! Exact sparse linear algebra over the rationals.
//!
//! Elimination is fraction free: rows are scaled to primitive integer
//! vectors and combined with integer multipliers. Pivots are chosen by
//! smallest column, then smallest row, so every result is reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::differential::{extend_derivation, Derivation};
use crate::error::{Error, Result};
use crate::prop_algebra::{Coeff, Element};
use crate::special_elements::{BasisTable, Stratum};

/// A sparse matrix with exact rational entries. No stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Coeff>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a matrix from dense rows.
    pub fn from_dense(rows: &[Vec<Coeff>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Coeff)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn get(&self, r: usize, c: usize) -> Coeff {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Sets an entry. Zero removes it.
    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r},{c}) out of range"
        );
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    pub fn mul_vec(&self, x: &[Coeff]) -> Result<Vec<Coeff>> {
        if x.len() != self.cols {
            return Err(Error::ArityMismatch {
                context: "matrix times vector",
                expected: (self.cols as u32, 1),
                found: (x.len() as u32, 1),
            });
        }
        let mut out = vec![Coeff::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            out[r] += v * &x[c];
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch {
                context: "matrix product",
                expected: (self.cols as u32, other.cols as u32),
                found: (other.rows as u32, other.cols as u32),
            });
        }
        let mut by_row: Vec<Vec<(usize, &Coeff)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), Coeff> = BTreeMap::new();
        for (&(r, k), v) in &self.entries {
            for &(c, w) in &by_row[k] {
                *acc.entry((r, c)).or_insert_with(Coeff::zero) += v * w;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }
}

type IntRow = BTreeMap<usize, BigInt>;

/// Scales a rational row to a primitive integer row.
fn integer_row(row: &BTreeMap<usize, Coeff>) -> IntRow {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .map(|(&c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// `a * target - b * pivot`, where `a` is the pivot entry and `b` the entry
/// of `target` in the pivot column, divided by `gcd(a, b)` first.
fn eliminate(target: &mut IntRow, pivot: &IntRow, col: usize) {
    let Some(b) = target.get(&col).cloned() else {
        return;
    };
    let a = &pivot[&col];
    let g = a.gcd(&b);
    let (a, b) = (a / &g, b / &g);
    if !a.is_one() {
        for v in target.values_mut() {
            *v *= &a;
        }
    }
    for (&c, v) in pivot {
        let e = target.entry(c).or_insert_with(BigInt::zero);
        *e -= &b * v;
        if e.is_zero() {
            target.remove(&c);
        }
    }
    make_primitive(target);
}

/// A reduced row echelon form: every pivot row has zeros in all other pivot
/// columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// `(row, column)` of each pivot, by increasing column.
    pub pivots: Vec<(usize, usize)>,
    rows: Vec<IntRow>,
    cols: usize,
}

impl Echelon {
    /// Gauss-Jordan elimination restricted to the first `cols` columns.
    /// Columns at or beyond `cols` ride along.
    fn reduce(mut rows: Vec<IntRow>, cols: usize) -> Echelon {
        let mut used = vec![false; rows.len()];
        let mut pivots = Vec::new();
        for col in 0..cols {
            let Some(p) = (0..rows.len()).find(|&r| !used[r] && rows[r].contains_key(&col)) else {
                continue;
            };
            used[p] = true;
            pivots.push((p, col));
            let pivot = std::mem::take(&mut rows[p]);
            for (r, row) in rows.iter_mut().enumerate() {
                if r != p {
                    eliminate(row, &pivot, col);
                }
            }
            rows[p] = pivot;
        }
        Echelon { pivots, rows, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn pivot_value(&self, row: usize, col: usize) -> &BigInt {
        &self.rows[row][&col]
    }
}

fn int_rows(m: &SparseMatrix) -> Vec<IntRow> {
    let mut rational: Vec<BTreeMap<usize, Coeff>> = vec![BTreeMap::new(); m.rows];
    for (&(r, c), v) in &m.entries {
        rational[r].insert(c, v.clone());
    }
    rational.iter().map(integer_row).collect()
}

/// Reduced echelon form of `m`.
pub fn echelon(m: &SparseMatrix) -> Echelon {
    Echelon::reduce(int_rows(m), m.cols)
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m).rank()
}

/// A solution of `m x = b` with zeros in every non-pivot coordinate, or
/// `None` when the system is inconsistent.
pub fn solve(m: &SparseMatrix, b: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
    if b.len() != m.rows {
        return Err(Error::ArityMismatch {
            context: "right-hand side",
            expected: (m.rows as u32, 1),
            found: (b.len() as u32, 1),
        });
    }
    let mut rational: Vec<BTreeMap<usize, Coeff>> = vec![BTreeMap::new(); m.rows];
    for (&(r, c), v) in &m.entries {
        rational[r].insert(c, v.clone());
    }
    for (r, v) in b.iter().enumerate() {
        if !v.is_zero() {
            rational[r].insert(m.cols, v.clone());
        }
    }
    let ech = Echelon::reduce(rational.iter().map(integer_row).collect(), m.cols);
    let pivot_rows: Vec<bool> = {
        let mut p = vec![false; m.rows];
        for &(r, _) in &ech.pivots {
            p[r] = true;
        }
        p
    };
    if ech
        .rows
        .iter()
        .enumerate()
        .any(|(r, row)| !pivot_rows[r] && row.contains_key(&m.cols))
    {
        return Ok(None);
    }
    let mut x = vec![Coeff::zero(); m.cols];
    for &(r, c) in &ech.pivots {
        if let Some(rhs) = ech.rows[r].get(&m.cols) {
            x[c] = Coeff::new(rhs.clone(), ech.pivot_value(r, c).clone());
        }
    }
    Ok(Some(x))
}

/// A basis of the null space, one vector per non-pivot column, in
/// increasing column order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Coeff>> {
    let ech = echelon(m);
    let mut is_pivot = vec![false; ech.cols];
    for &(_, c) in &ech.pivots {
        is_pivot[c] = true;
    }
    (0..ech.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Coeff::zero(); ech.cols];
            v[f] = Coeff::one();
            for &(r, c) in &ech.pivots {
                if let Some(e) = ech.rows[r].get(&f) {
                    v[c] = -Coeff::new(e.clone(), ech.pivot_value(r, c).clone());
                }
            }
            v
        })
        .collect()
}

/// Coordinates of `x` in one stratum of a basis table. Fails if `x` has a
/// monomial outside the stratum.
pub fn coordinates(table: &BasisTable, stratum: Stratum, x: &Element) -> Result<Vec<Coeff>> {
    let basis = table.stratum(stratum.0, stratum.1);
    let mut out = vec![Coeff::zero(); basis.len()];
    for (mono, c) in x.iter() {
        match table.position(mono) {
            Some((s, i)) if s == stratum => out[i] = c.clone(),
            _ => {
                return Err(Error::Unsupported(format!(
                    "term {} lies outside stratum (degree {}, genus {}) of S{:?}",
                    crate::syntax::print_monomial(mono),
                    stratum.0,
                    stratum.1,
                    table.biarity()
                )))
            }
        }
    }
    Ok(out)
}

/// The element with the given coordinates in a stratum.
pub fn from_coordinates(table: &BasisTable, stratum: Stratum, v: &[Coeff]) -> Element {
    let (m, n) = table.biarity();
    let mut out = Element::zero(m, n);
    for (mono, c) in table.stratum(stratum.0, stratum.1).iter().zip(v) {
        if !c.is_zero() {
            out.add_term(mono.clone(), c.clone());
        }
    }
    out
}

/// The matrix of a derivation from stratum `(d, g)` to `(d - 1, g)`:
/// column `j` holds the image of the `j`-th basis monomial.
pub fn matrix_of<D: Derivation + ?Sized>(
    d: &D,
    table: &BasisTable,
    degree: i64,
    genus: u64,
) -> Result<SparseMatrix> {
    let source = table.stratum(degree, genus);
    let target_len = table.stratum(degree - 1, genus).len();
    let mut m = SparseMatrix::new(target_len, source.len());
    for (j, mono) in source.iter().enumerate() {
        let img = extend_derivation(d, &Element::from_monomial(mono.clone()))?;
        let col = coordinates(table, (degree - 1, genus), &img)?;
        for (i, v) in col.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// The matrix of `d0` from stratum `(d, g)` to `(d - 1, g)`.
pub fn matrix_of_d0(table: &BasisTable, degree: i64, genus: u64) -> Result<SparseMatrix> {
    matrix_of(&crate::differential::D0::new(), table, degree, genus)
}

/// Homology dimensions of `(S(m,n), d0)`, keyed by `(degree, genus)`.
/// Only strata with nonzero homology are listed.
pub fn homology(table: &BasisTable) -> Result<BTreeMap<Stratum, usize>> {
    let d0 = crate::differential::D0::new();
    let mut ranks: BTreeMap<Stratum, usize> = BTreeMap::new();
    for &(d, g) in table.strata().keys() {
        ranks.insert((d, g), rank(&matrix_of(&d0, table, d, g)?));
    }
    let mut out = BTreeMap::new();
    for (&(d, g), list) in table.strata() {
        let kernel = list.len() - ranks[&(d, g)];
        let boundaries = ranks.get(&(d + 1, g)).copied().unwrap_or(0);
        if kernel > boundaries {
            out.insert((d, g), kernel - boundaries);
        }
    }
    Ok(out)
}

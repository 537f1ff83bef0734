// SPDX-License-Identifier: Apache-2.0

//! Special elements: the smallest family of subspaces `S(m,n)` containing
//! the identity and every generator and closed under fractions.
//!
//! Every special monomial other than a generator or the identity is a
//! fraction `frac(A_1..A_v / B_1..B_u)` with `A_i` in `S(a_i,u)`, `B_j` in
//! `S(v,b_j)`, `sum a_i = m`, `sum b_j = n` and `(v,u)` different from
//! `(1,n)` and `(m,1)`. Those two shapes only reproduce their single
//! non-identity factor. Each factor has a smaller biarity in the
//! lexicographic sense on `(m+n, n)`, so the recursion terminates.
//!
//! Vertex bound: each vertex has at least three legs, so `3V <= 2E + m + n`.
//! With `E = V + g - c` and `c >= 1` components this gives
//! `V <= m + n + 2g - 2 <= m + n + 2(m-1)(n-1) - 2`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gradings::genus;
use crate::prop_algebra::fraction_mono;
use crate::term_graph::{Generator, Monomial};

/// A stratum key: `(degree, genus)`.
pub type Stratum = (i64, u64);

/// An indexed monomial basis of `S(m,n)`, split by degree and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTable {
    biarity: (u32, u32),
    strata: BTreeMap<Stratum, Vec<Monomial>>,
    index: HashMap<Monomial, (Stratum, usize)>,
}

impl BasisTable {
    /// Builds a table from distinct monomials of one biarity. Each stratum is
    /// sorted by canonical encoding.
    pub fn from_monomials(biarity: (u32, u32), monos: impl IntoIterator<Item = Monomial>) -> Self {
        let mut strata: BTreeMap<Stratum, Vec<Monomial>> = BTreeMap::new();
        for m in monos {
            assert_eq!(m.biarity(), biarity, "basis monomial of wrong biarity");
            strata.entry((m.degree(), genus(&m))).or_default().push(m);
        }
        let mut index = HashMap::new();
        for (key, list) in strata.iter_mut() {
            list.sort();
            list.dedup();
            for (i, m) in list.iter().enumerate() {
                index.insert(m.clone(), (*key, i));
            }
        }
        BasisTable {
            biarity,
            strata,
            index,
        }
    }

    pub fn biarity(&self) -> (u32, u32) {
        self.biarity
    }

    pub fn strata(&self) -> &BTreeMap<Stratum, Vec<Monomial>> {
        &self.strata
    }

    /// Monomials of one stratum, empty if there are none.
    pub fn stratum(&self, degree: i64, genus: u64) -> &[Monomial] {
        self.strata
            .get(&(degree, genus))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Stratum and position of a monomial.
    pub fn position(&self, m: &Monomial) -> Option<(Stratum, usize)> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// All monomials, stratum by stratum.
    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.strata.values().flatten()
    }

    /// Keeps the strata accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Stratum) -> bool) -> BasisTable {
        BasisTable::from_monomials(
            self.biarity,
            self.strata
                .iter()
                .filter(|(k, _)| keep(**k))
                .flat_map(|(_, v)| v.iter().cloned()),
        )
    }
}

type Memo = Mutex<HashMap<(u32, u32), Arc<Vec<Monomial>>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Compositions of `total` into `parts` positive summands, in
/// lexicographic order.
pub fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < parts {
            return;
        }
        for first in 1..=total - (parts - 1) {
            cur.push(first);
            go(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Sorted canonical monomials of `S(m,n)`, memoized per biarity.
pub fn special_monomials(m: u32, n: u32) -> Arc<Vec<Monomial>> {
    assert!(m >= 1 && n >= 1, "biarity must be positive");
    if let Some(v) = memo().lock().expect("memo").get(&(m, n)) {
        return v.clone();
    }
    let list = Arc::new(compute(m, n));
    memo()
        .lock()
        .expect("memo")
        .entry((m, n))
        .or_insert(list)
        .clone()
}

fn compute(m: u32, n: u32) -> Vec<Monomial> {
    if (m, n) == (1, 1) {
        return vec![Monomial::identity(1)];
    }
    let mut found: HashSet<Monomial> = HashSet::new();
    found.insert(Monomial::generator(Generator::new(m, n).expect("valid")));
    for v in 1..=m {
        for u in 1..=n {
            if (v, u) == (1, n) || (v, u) == (m, 1) {
                continue;
            }
            for a in compositions(m, v) {
                for b in compositions(n, u) {
                    let factors: Vec<Arc<Vec<Monomial>>> = a
                        .iter()
                        .map(|&ai| special_monomials(ai, u))
                        .chain(b.iter().map(|&bj| special_monomials(v, bj)))
                        .collect();
                    found.extend(all_fractions(&factors, v as usize));
                }
            }
        }
    }
    let mut out: Vec<Monomial> = found.into_iter().collect();
    out.sort();
    out
}

/// Every fraction whose first `l` factors are numerators and the rest
/// denominators, one choice from each list.
fn all_fractions(factors: &[Arc<Vec<Monomial>>], l: usize) -> HashSet<Monomial> {
    let radix: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total: usize = radix.iter().product();
    (0..total)
        .into_par_iter()
        .fold(HashSet::new, |mut acc, mut code| {
            let picks: Vec<&Monomial> = factors
                .iter()
                .zip(&radix)
                .map(|(f, &r)| {
                    let x = &f[code % r];
                    code /= r;
                    x
                })
                .collect();
            let (mono, _) = fraction_mono(&picks[..l], &picks[l..]).expect("shapes match");
            acc.insert(mono);
            acc
        })
        .reduce(HashSet::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        })
}

/// The basis table of `S(m,n)`.
pub fn enumerate_special(m: u32, n: u32) -> BasisTable {
    BasisTable::from_monomials((m, n), special_monomials(m, n).iter().cloned())
}

/// The genus zero strata.
pub fn genus_zero_part(table: &BasisTable) -> BasisTable {
    table.restrict(|(_, g)| g == 0)
}

/// Largest vertex count allowed for a special monomial of biarity `(m,n)`.
pub fn vertex_bound(m: u32, n: u32) -> usize {
    (m + n + 2 * (m - 1) * (n - 1)).saturating_sub(2) as usize
}

/// One row of a dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub biarity: (u32, u32),
    pub total: usize,
    pub strata: BTreeMap<Stratum, usize>,
}

/// `dim S(m,n)` with its refinement by degree and genus, for
/// `1 <= m <= max_m`, `1 <= n <= max_n`.
pub fn dimension_series(max_m: u32, max_n: u32) -> Vec<DimensionRow> {
    let mut rows = Vec::new();
    for m in 1..=max_m {
        for n in 1..=max_n {
            let t = enumerate_special(m, n);
            rows.push(DimensionRow {
                biarity: (m, n),
                total: t.len(),
                strata: t.strata().iter().map(|(k, v)| (*k, v.len())).collect(),
            });
        }
    }
    rows
}

/// Data of a `(c;d)`-relation: `c` has `s` entries, `d` has `t` entries,
/// `cmat[i][j]` lies in `S(d_i, c_j)`, `a[i]` holds `d_i` monomials with
/// `s` inputs and `b[j]` holds `c_j` monomials with `t` outputs.
#[derive(Clone, Debug)]
pub struct CdInstance {
    pub c: Vec<u32>,
    pub d: Vec<u32>,
    pub cmat: Vec<Vec<Monomial>>,
    pub a: Vec<Vec<Monomial>>,
    pub b: Vec<Vec<Monomial>>,
}

impl CdInstance {
    fn check_shape(&self) -> Result<()> {
        let (s, t) = (self.c.len(), self.d.len());
        let shape = |msg: &str| Err(Error::Unsupported(format!("(c;d) shape: {msg}")));
        if s == 0 || t == 0 {
            return shape("empty c or d");
        }
        if self.cmat.len() != t || self.cmat.iter().any(|row| row.len() != s) {
            return shape("C must be t x s");
        }
        for (i, row) in self.cmat.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.biarity() != (self.d[i], self.c[j]) {
                    return Err(Error::ArityMismatch {
                        context: "(c;d) matrix entry",
                        expected: (self.d[i], self.c[j]),
                        found: x.biarity(),
                    });
                }
            }
        }
        if self.a.len() != t
            || self
                .a
                .iter()
                .zip(&self.d)
                .any(|(r, &di)| r.len() != di as usize)
        {
            return shape("row i of A must have d_i entries");
        }
        if self.a.iter().flatten().any(|x| x.inputs() != s as u32) {
            return shape("every A entry must have s inputs");
        }
        if self.b.len() != s
            || self
                .b
                .iter()
                .zip(&self.c)
                .any(|(r, &cj)| r.len() != cj as usize)
        {
            return shape("column j of B must have c_j entries");
        }
        if self.b.iter().flatten().any(|x| x.outputs() != t as u32) {
            return shape("every B entry must have t outputs");
        }
        Ok(())
    }

    /// The up-reducible form: numerators `frac(A_i* / C_i*)`, denominators
    /// `B` column by column. Returns the canonical monomial and its sign.
    pub fn up(&self) -> Result<(Monomial, i32)> {
        self.check_shape()?;
        let mut sign = 1;
        let mut nums = Vec::new();
        for (arow, crow) in self.a.iter().zip(&self.cmat) {
            let (x, s) = fraction_mono(
                &arow.iter().collect::<Vec<_>>(),
                &crow.iter().collect::<Vec<_>>(),
            )?;
            sign *= s;
            nums.push(x);
        }
        let dens: Vec<&Monomial> = self.b.iter().flatten().collect();
        let (x, s) = fraction_mono(&nums.iter().collect::<Vec<_>>(), &dens)?;
        Ok((x, sign * s))
    }

    /// The down-reducible form: numerators `A` row by row, denominators
    /// `frac(C_*j / B_*j)`.
    pub fn down(&self) -> Result<(Monomial, i32)> {
        self.check_shape()?;
        let mut sign = 1;
        let mut dens = Vec::new();
        for (j, bcol) in self.b.iter().enumerate() {
            let ccol: Vec<&Monomial> = self.cmat.iter().map(|row| &row[j]).collect();
            let (x, s) = fraction_mono(&ccol, &bcol.iter().collect::<Vec<_>>())?;
            sign *= s;
            dens.push(x);
        }
        let nums: Vec<&Monomial> = self.a.iter().flatten().collect();
        let (x, s) = fraction_mono(&nums, &dens.iter().collect::<Vec<_>>())?;
        Ok((x, sign * s))
    }
}

/// Whether the up- and down-reducible forms of a `(c;d)` instance are the
/// same monomial.
pub fn check_cd_relation(inst: &CdInstance) -> Result<bool> {
    Ok(inst.up()?.0 == inst.down()?.0)
}

fn xi(m: u32, n: u32) -> Monomial {
    Monomial::generator(Generator::new(m, n).expect("valid generator"))
}

fn id() -> Monomial {
    Monomial::identity(1)
}

/// The `(2,1;1,1)` instance: `frac(xi12 xi12 / butterfly xi21)` against
/// `frac(mu_l mu_l / xi21 xi21 xi21)`.
pub fn cd_instance_21_11() -> CdInstance {
    CdInstance {
        c: vec![2, 1],
        d: vec![1, 1],
        cmat: vec![vec![xi(1, 2), id()], vec![xi(1, 2), id()]],
        a: vec![vec![xi(1, 2)], vec![xi(1, 2)]],
        b: vec![vec![xi(2, 1), xi(2, 1)], vec![xi(2, 1)]],
    }
}

/// The `(2,1;2,1)` instance, with `x` any monomial of `S(2,2)`.
pub fn cd_instance_21_21(x: Monomial) -> CdInstance {
    CdInstance {
        c: vec![2, 1],
        d: vec![2, 1],
        cmat: vec![vec![x, xi(2, 1)], vec![xi(1, 2), id()]],
        a: vec![vec![xi(1, 2), xi(1, 2)], vec![xi(1, 2)]],
        b: vec![vec![xi(2, 1), xi(2, 1)], vec![xi(2, 1)]],
    }
}

/// The mirrored `(1,2;2,1)` instance, with `x` any monomial of `S(2,2)`.
pub fn cd_instance_12_21(x: Monomial) -> CdInstance {
    CdInstance {
        c: vec![1, 2],
        d: vec![2, 1],
        cmat: vec![vec![xi(2, 1), x], vec![id(), xi(1, 2)]],
        a: vec![vec![xi(1, 2), xi(1, 2)], vec![xi(1, 2)]],
        b: vec![vec![xi(2, 1)], vec![xi(2, 1), xi(2, 1)]],
    }
}

/// A random well-shaped `(c;d)` instance with `s, t <= max_parts` and all
/// arities at most 2, drawn from the special elements.
pub fn random_cd_instance<R: Rng + ?Sized>(rng: &mut R, max_parts: u32) -> CdInstance {
    let s = rng.gen_range(1..=max_parts);
    let t = rng.gen_range(1..=max_parts);
    let c: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=2)).collect();
    let d: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=2)).collect();
    let pick = |a: u32, b: u32, rng: &mut R| {
        let list = special_monomials(a, b);
        list[rng.gen_range(0..list.len())].clone()
    };
    let cmat = d
        .iter()
        .map(|&di| c.iter().map(|&cj| pick(di, cj, rng)).collect())
        .collect();
    let a = d
        .iter()
        .map(|&di| {
            (0..di)
                .map(|_| {
                    let out = rng.gen_range(1..=2);
                    pick(out, s, rng)
                })
                .collect()
        })
        .collect();
    let b = c
        .iter()
        .map(|&cj| {
            (0..cj)
                .map(|_| {
                    let inp = rng.gen_range(1..=2);
                    pick(t, inp, rng)
                })
                .collect()
        })
        .collect();
    CdInstance { c, d, cmat, a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradings::{is_half_prop_monomial, path_grading};
    use crate::syntax::parse_element;

    fn mono(src: &str) -> Monomial {
        let e = parse_element(src).unwrap();
        assert_eq!(e.len(), 1);
        e.terms().keys().next().unwrap().clone()
    }

    #[test]
    fn small_tables() {
        assert_eq!(enumerate_special(1, 1).len(), 1);
        assert_eq!(enumerate_special(1, 2).len(), 1);
        assert_eq!(enumerate_special(2, 1).len(), 1);
        let t = enumerate_special(2, 2);
        assert_eq!(t.len(), 3);
        assert_eq!(t.stratum(1, 0).len(), 1);
        assert_eq!(t.stratum(0, 0).len(), 1);
        assert_eq!(t.stratum(0, 1).len(), 1);
        assert!(t.contains(&mono("frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]")));
        assert!(t.contains(&mono("xi(2,1) . xi(1,2)")));
        let g0 = genus_zero_part(&enumerate_special(1, 3));
        assert_eq!(g0.len(), 3);
        assert!(g0.contains(&mono("xi(1,2) o_1 xi(1,2)")));
    }

    #[test]
    fn associahedron_counts() {
        // Planar rooted trees with n leaves and no unary vertices.
        let want = [1, 1, 3, 11, 45, 197];
        for (n, w) in want.iter().enumerate().skip(1) {
            assert_eq!(special_monomials(1, n as u32 + 1).len(), *w);
        }
    }

    #[test]
    fn invariants_on_small_biarities() {
        for (m, n) in [(2, 3), (3, 2), (2, 4), (3, 3)] {
            let t = enumerate_special(m, n);
            for x in t.iter() {
                assert_eq!(path_grading(x), ((m * n) as u64).into());
                assert!(genus(x) <= ((m - 1) * (n - 1)) as u64);
                assert!(x.vertex_count() <= vertex_bound(m, n));
                assert_eq!(genus(x) == 0, is_half_prop_monomial(x));
            }
            let flipped = enumerate_special(n, m);
            let sizes = |t: &BasisTable| {
                t.strata()
                    .iter()
                    .map(|(k, v)| (*k, v.len()))
                    .collect::<Vec<_>>()
            };
            assert_eq!(sizes(&t), sizes(&flipped));
            assert!(t.iter().all(|x| flipped.contains(&x.transpose())));
        }
    }

    #[test]
    fn printed_relations_hold() {
        assert!(check_cd_relation(&cd_instance_21_11()).unwrap());
        let (up, _) = cd_instance_21_11().up().unwrap();
        assert_eq!(
            up,
            mono("frac[xi(1,2) o_1 xi(1,2) xi(1,2) o_1 xi(1,2) / xi(2,1) xi(2,1) xi(2,1)]")
        );
        for x in enumerate_special(2, 2).iter() {
            assert!(check_cd_relation(&cd_instance_21_21(x.clone())).unwrap());
            assert!(check_cd_relation(&cd_instance_12_21(x.clone())).unwrap());
        }
    }

    #[test]
    fn random_instances_hold() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let inst = random_cd_instance(&mut rng, 3);
            assert!(check_cd_relation(&inst).unwrap(), "{inst:?}");
        }
    }

    #[test]
    fn bad_shapes_are_rejected() {
        let mut inst = cd_instance_21_11();
        inst.cmat[0][0] = xi(2, 1);
        assert!(check_cd_relation(&inst).is_err());
        let mut inst = cd_instance_21_11();
        inst.b.pop();
        assert!(check_cd_relation(&inst).is_err());
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert!(compositions(2, 3).is_empty());
    }
}

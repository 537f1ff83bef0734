// SPDX-License-Identifier: Apache-2.0

//! Linear combinations of monomials and the PROP operations on them.
//!
//! Signs follow one rule. A monomial is oriented by its canonical vertex
//! order. A composite lists the vertices of its operands left to right
//! (numerators before denominators in a fraction) and its coefficient picks
//! up the sign of the permutation taking the odd vertices of that list to
//! canonical order. Identities and wire permutations carry no sign.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::term_graph::{
    canonicalize_signed_unchecked, Generator, Monomial, RawGraph, Source, WireBundle,
};

/// Exact rational coefficient.
pub type Coeff = BigRational;

/// A finite linear combination of monomials of one biarity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    outputs: u32,
    inputs: u32,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Element {
    pub fn zero(outputs: u32, inputs: u32) -> Element {
        Element {
            outputs,
            inputs,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(m: Monomial) -> Element {
        Self::term(m, Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Element {
        let (outputs, inputs) = m.biarity();
        let mut e = Element::zero(outputs, inputs);
        e.add_term(m, c);
        e
    }

    pub fn generator(g: Generator) -> Element {
        Self::from_monomial(Monomial::generator(g))
    }

    /// `xi(m,n)`, failing on non generators.
    pub fn xi(outputs: u32, inputs: u32) -> Result<Element> {
        Ok(Self::generator(Generator::new(outputs, inputs)?))
    }

    pub fn identity(k: u32) -> Element {
        Self::from_monomial(Monomial::identity(k))
    }

    pub fn biarity(&self) -> (u32, u32) {
        (self.outputs, self.inputs)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// Number of terms with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`Element::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `c * m`, dropping the term if it cancels.
    ///
    /// Panics if the biarity of `m` differs; callers construct terms of the
    /// right shape.
    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        assert_eq!(m.biarity(), self.biarity(), "term of wrong biarity");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, m: Monomial, c: &Coeff, sign: i32) {
        if sign < 0 {
            self.add_term(m, -c.clone());
        } else {
            self.add_term(m, c.clone());
        }
    }

    pub fn scale(&self, c: &Coeff) -> Element {
        let mut out = Element::zero(self.outputs, self.inputs);
        if !c.is_zero() {
            for (m, x) in &self.terms {
                out.terms.insert(m.clone(), x * c);
            }
        }
        out
    }

    /// The common degree of all terms, or `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Restriction to the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            outputs: self.outputs,
            inputs: self.inputs,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &Element) {
        assert_eq!(
            self.biarity(),
            other.biarity(),
            "sum of different biarities"
        );
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        self.check_same(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Coeff::one())
    }
}

pub fn coeff_int(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// Formats a coefficient as `p/q` (or `p` when integral).
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Absolute value helper used by printers.
pub fn abs_coeff(c: &Coeff) -> Coeff {
    c.abs()
}

// ---------------------------------------------------------------------------
// Monomial level operations. Each returns the canonical result and the
// orientation sign.

struct Frame {
    vertex_base: u32,
    input_base: u32,
}

fn shift(s: Source, f: &Frame) -> Source {
    match s {
        Source::Input(j) => Source::Input(f.input_base + j),
        Source::Port(u, p) => Source::Port(f.vertex_base + u, p),
    }
}

/// `x ∘ y`: outputs of `y` feed inputs of `x`.
pub fn vcomp_mono(x: &Monomial, y: &Monomial) -> Result<(Monomial, i32)> {
    if x.inputs() != y.outputs() {
        return Err(Error::ArityMismatch {
            context: "vertical composition",
            expected: (x.inputs(), x.inputs()),
            found: y.biarity(),
        });
    }
    let nx = x.vertex_count() as u32;
    let fy = Frame {
        vertex_base: nx,
        input_base: 0,
    };
    let resolve_x = |s: Source| match s {
        Source::Input(j) => shift(y.outs()[j as usize], &fy),
        p => p,
    };
    let mut raw = RawGraph {
        outputs: x.outputs(),
        inputs: y.inputs(),
        vertices: x.vertices().iter().chain(y.vertices()).copied().collect(),
        feeds: Vec::with_capacity(x.vertex_count() + y.vertex_count()),
        outs: x.outs().iter().map(|&s| resolve_x(s)).collect(),
    };
    for v in 0..x.vertex_count() {
        raw.feeds
            .push(x.feeds(v).iter().map(|&s| resolve_x(s)).collect());
    }
    for v in 0..y.vertex_count() {
        raw.feeds
            .push(y.feeds(v).iter().map(|&s| shift(s, &fy)).collect());
    }
    Ok(canonicalize_signed_unchecked(&raw))
}

/// `x ⊗ y`: side by side, `x` on the left.
pub fn hcomp_mono(x: &Monomial, y: &Monomial) -> (Monomial, i32) {
    hcomp_many(&[x, y])
}

/// Tensor product of several monomials, left to right.
pub fn hcomp_many(xs: &[&Monomial]) -> (Monomial, i32) {
    let mut raw = RawGraph {
        outputs: xs.iter().map(|x| x.outputs()).sum(),
        inputs: xs.iter().map(|x| x.inputs()).sum(),
        vertices: Vec::new(),
        feeds: Vec::new(),
        outs: Vec::new(),
    };
    let mut f = Frame {
        vertex_base: 0,
        input_base: 0,
    };
    for x in xs {
        raw.vertices.extend_from_slice(x.vertices());
        for v in 0..x.vertex_count() {
            raw.feeds
                .push(x.feeds(v).iter().map(|&s| shift(s, &f)).collect());
        }
        raw.outs.extend(x.outs().iter().map(|&s| shift(s, &f)));
        f.vertex_base += x.vertex_count() as u32;
        f.input_base += x.inputs();
    }
    canonicalize_signed_unchecked(&raw)
}

/// `sigma · x · tau`: output `i` of `x` becomes output `sigma(i)`, and input
/// leg `j` of the result feeds input `tau(j)` of `x`.
pub fn act_mono(sigma: &WireBundle, x: &Monomial, tau: &WireBundle) -> Result<(Monomial, i32)> {
    if sigma.len() != x.outputs() || tau.len() != x.inputs() {
        return Err(Error::ArityMismatch {
            context: "permutation action",
            expected: x.biarity(),
            found: (sigma.len(), tau.len()),
        });
    }
    let tinv = tau.inverse();
    let relabel = |s: Source| match s {
        Source::Input(t) => Source::Input(tinv.apply(t)),
        p => p,
    };
    let mut outs = vec![Source::Input(0); x.outputs() as usize];
    for (i, &s) in x.outs().iter().enumerate() {
        outs[sigma.apply(i as u32) as usize] = relabel(s);
    }
    let raw = RawGraph {
        outputs: x.outputs(),
        inputs: x.inputs(),
        vertices: x.vertices().to_vec(),
        feeds: (0..x.vertex_count())
            .map(|v| x.feeds(v).iter().map(|&s| relabel(s)).collect())
            .collect(),
        outs,
    };
    Ok(canonicalize_signed_unchecked(&raw))
}

/// Replaces vertex `v` of `x` by the graph `t`, whose biarity must equal the
/// generator at `v`. The raw order puts the vertices of `t` in the slot of
/// `v`.
pub fn substitute_mono(x: &Monomial, v: usize, t: &Monomial) -> Result<(Monomial, i32)> {
    let g = x.vertices()[v];
    if t.biarity() != g.biarity() {
        return Err(Error::ArityMismatch {
            context: "vertex substitution",
            expected: g.biarity(),
            found: t.biarity(),
        });
    }
    let nt = t.vertex_count() as u32;
    let v32 = v as u32;
    // Position of a vertex of x in the new raw order.
    let xpos = |u: u32| if u < v32 { u } else { u - 1 + nt };
    let map_x = |s: Source| -> Source {
        match s {
            Source::Input(j) => Source::Input(j),
            Source::Port(u, p) if u == v32 => match t.outs()[p as usize] {
                Source::Port(w, q) => Source::Port(v32 + w, q),
                Source::Input(j) => match x.feeds(v)[j as usize] {
                    Source::Port(u2, p2) => Source::Port(xpos(u2), p2),
                    i => i,
                },
            },
            Source::Port(u, p) => Source::Port(xpos(u), p),
        }
    };
    let map_t = |s: Source| -> Source {
        match s {
            Source::Port(w, q) => Source::Port(v32 + w, q),
            Source::Input(j) => match x.feeds(v)[j as usize] {
                Source::Port(u2, p2) => Source::Port(xpos(u2), p2),
                i => i,
            },
        }
    };
    let mut raw = RawGraph {
        outputs: x.outputs(),
        inputs: x.inputs(),
        vertices: Vec::with_capacity(x.vertex_count() + t.vertex_count()),
        feeds: Vec::with_capacity(x.vertex_count() + t.vertex_count()),
        outs: x.outs().iter().map(|&s| map_x(s)).collect(),
    };
    for u in 0..v {
        raw.vertices.push(x.vertices()[u]);
        raw.feeds
            .push(x.feeds(u).iter().map(|&s| map_x(s)).collect());
    }
    for w in 0..t.vertex_count() {
        raw.vertices.push(t.vertices()[w]);
        raw.feeds
            .push(t.feeds(w).iter().map(|&s| map_t(s)).collect());
    }
    for u in v + 1..x.vertex_count() {
        raw.vertices.push(x.vertices()[u]);
        raw.feeds
            .push(x.feeds(u).iter().map(|&s| map_x(s)).collect());
    }
    Ok(canonicalize_signed_unchecked(&raw))
}

/// Shape check for a fraction: numerators `A_1..A_l` of biarity `(a_i, k)`
/// and denominators `B_1..B_k` of biarity `(l, b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionShape {
    pub numerator_outputs: Vec<u32>,
    pub denominator_inputs: Vec<u32>,
}

impl FractionShape {
    pub fn check(nums: &[(u32, u32)], dens: &[(u32, u32)]) -> Result<FractionShape> {
        let (l, k) = (nums.len() as u32, dens.len() as u32);
        if l == 0 || k == 0 {
            return Err(Error::Unsupported(
                "fraction needs at least one numerator and one denominator".into(),
            ));
        }
        for &(a, kk) in nums {
            if kk != k {
                return Err(Error::ArityMismatch {
                    context: "fraction numerator",
                    expected: (a, k),
                    found: (a, kk),
                });
            }
        }
        for &(ll, b) in dens {
            if ll != l {
                return Err(Error::ArityMismatch {
                    context: "fraction denominator",
                    expected: (l, b),
                    found: (ll, b),
                });
            }
        }
        Ok(FractionShape {
            numerator_outputs: nums.iter().map(|x| x.0).collect(),
            denominator_inputs: dens.iter().map(|x| x.1).collect(),
        })
    }

    pub fn biarity(&self) -> (u32, u32) {
        (
            self.numerator_outputs.iter().sum(),
            self.denominator_inputs.iter().sum(),
        )
    }
}

/// `frac(A_1..A_l / B_1..B_k)` on monomials: output `r` of `B_j` feeds
/// input `j` of `A_r`. Raw order is `A_1..A_l, B_1..B_k`.
pub fn fraction_mono(nums: &[&Monomial], dens: &[&Monomial]) -> Result<(Monomial, i32)> {
    let shape = FractionShape::check(
        &nums.iter().map(|x| x.biarity()).collect::<Vec<_>>(),
        &dens.iter().map(|x| x.biarity()).collect::<Vec<_>>(),
    )?;
    let (outputs, inputs) = shape.biarity();
    let mut vbase = 0u32;
    let mut a_base = Vec::with_capacity(nums.len());
    for a in nums {
        a_base.push(vbase);
        vbase += a.vertex_count() as u32;
    }
    let mut b_frame = Vec::with_capacity(dens.len());
    let mut ibase = 0u32;
    for b in dens {
        b_frame.push(Frame {
            vertex_base: vbase,
            input_base: ibase,
        });
        vbase += b.vertex_count() as u32;
        ibase += b.inputs();
    }
    let map_a = |r: usize, s: Source| match s {
        Source::Port(u, p) => Source::Port(a_base[r] + u, p),
        Source::Input(j) => shift(dens[j as usize].outs()[r], &b_frame[j as usize]),
    };
    let mut raw = RawGraph {
        outputs,
        inputs,
        vertices: Vec::with_capacity(vbase as usize),
        feeds: Vec::with_capacity(vbase as usize),
        outs: Vec::with_capacity(outputs as usize),
    };
    for (r, a) in nums.iter().enumerate() {
        raw.vertices.extend_from_slice(a.vertices());
        for v in 0..a.vertex_count() {
            raw.feeds
                .push(a.feeds(v).iter().map(|&s| map_a(r, s)).collect());
        }
        raw.outs.extend(a.outs().iter().map(|&s| map_a(r, s)));
    }
    for (j, b) in dens.iter().enumerate() {
        raw.vertices.extend_from_slice(b.vertices());
        for v in 0..b.vertex_count() {
            raw.feeds
                .push(b.feeds(v).iter().map(|&s| shift(s, &b_frame[j])).collect());
        }
    }
    Ok(canonicalize_signed_unchecked(&raw))
}

// ---------------------------------------------------------------------------
// Element level operations.

fn bilinear(
    x: &Element,
    y: &Element,
    biarity: (u32, u32),
    mut f: impl FnMut(&Monomial, &Monomial) -> Result<(Monomial, i32)>,
) -> Result<Element> {
    let mut out = Element::zero(biarity.0, biarity.1);
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let (m, s) = f(mx, my)?;
            out.add_signed(m, &(cx * cy), s);
        }
    }
    Ok(out)
}

/// The special permutation `sigma(k,l)`: position `(s-1)l + r` goes to
/// position `k(r-1) + s`, for `1 <= s <= k` and `1 <= r <= l`.
pub fn special_permutation(k: u32, l: u32) -> WireBundle {
    let mut image = Vec::with_capacity((k * l) as usize);
    for s in 0..k {
        for r in 0..l {
            image.push(k * r + s);
        }
    }
    WireBundle::from_image(image).expect("special permutation is a bijection")
}

/// Vertical composition `x ∘ y`.
pub fn vcomp(x: &Element, y: &Element) -> Result<Element> {
    if x.inputs != y.outputs {
        return Err(Error::ArityMismatch {
            context: "vertical composition",
            expected: (x.inputs, y.inputs),
            found: y.biarity(),
        });
    }
    bilinear(x, y, (x.outputs, y.inputs), vcomp_mono)
}

/// Horizontal composition `x ⊗ y`.
pub fn hcomp(x: &Element, y: &Element) -> Element {
    bilinear(
        x,
        y,
        (x.outputs + y.outputs, x.inputs + y.inputs),
        |a, b| Ok(hcomp_mono(a, b)),
    )
    .expect("tensor product never fails")
}

/// `x ∘_i y = x ∘ (1^{i-1} ⊗ y ⊗ 1^{k-i})`, with `i` one based and `y` of
/// output arity 1.
pub fn comp_at_input(x: &Element, i: u32, y: &Element) -> Result<Element> {
    if y.outputs != 1 {
        return Err(Error::ArityMismatch {
            context: "input composition needs a single output",
            expected: (1, y.inputs),
            found: y.biarity(),
        });
    }
    if i == 0 || i + y.outputs > x.inputs + 1 {
        return Err(Error::IndexOutOfRange {
            context: "input composition",
            index: i,
            max: (x.inputs + 1).saturating_sub(y.outputs),
        });
    }
    let padded = pad(y, i - 1, x.inputs + 1 - i - y.outputs);
    vcomp(x, &padded)
}

/// `u _j∘ v = (1^{j-1} ⊗ u ⊗ 1^{l-j}) ∘ v`, with `j` one based and `u` of
/// input arity 1.
pub fn comp_at_output(u: &Element, j: u32, v: &Element) -> Result<Element> {
    if u.inputs != 1 {
        return Err(Error::ArityMismatch {
            context: "output composition needs a single input",
            expected: (u.outputs, 1),
            found: u.biarity(),
        });
    }
    if j == 0 || j + u.inputs > v.outputs + 1 {
        return Err(Error::IndexOutOfRange {
            context: "output composition",
            index: j,
            max: (v.outputs + 1).saturating_sub(u.inputs),
        });
    }
    let padded = pad(u, j - 1, v.outputs + 1 - j - u.inputs);
    vcomp(&padded, v)
}

fn pad(x: &Element, left: u32, right: u32) -> Element {
    let mut out = x.clone();
    if left > 0 {
        out = hcomp(&Element::identity(left), &out);
    }
    if right > 0 {
        out = hcomp(&out, &Element::identity(right));
    }
    out
}

/// Multilinear fraction `frac(A_1..A_l / B_1..B_k)`.
pub fn fraction(nums: &[Element], dens: &[Element]) -> Result<Element> {
    let shape = FractionShape::check(
        &nums.iter().map(Element::biarity).collect::<Vec<_>>(),
        &dens.iter().map(Element::biarity).collect::<Vec<_>>(),
    )?;
    let (m, n) = shape.biarity();
    let mut out = Element::zero(m, n);
    let factors: Vec<Vec<(&Monomial, &Coeff)>> = nums
        .iter()
        .chain(dens)
        .map(|e| e.terms.iter().collect())
        .collect();
    if factors.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let l = nums.len();
    let mut idx = vec![0usize; factors.len()];
    let mut picked: Vec<&Monomial> = Vec::with_capacity(factors.len());
    loop {
        picked.clear();
        let mut c = Coeff::one();
        for (f, &i) in factors.iter().zip(&idx) {
            picked.push(f[i].0);
            c *= f[i].1;
        }
        let (mono, s) = fraction_mono(&picked[..l], &picked[l..])?;
        out.add_signed(mono, &c, s);
        // Odometer over term choices.
        let mut p = factors.len();
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < factors[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Tensor product of a list of elements.
pub fn hcomp_all(xs: &[Element]) -> Element {
    let mut it = xs.iter();
    let first = it.next().expect("nonempty tensor product").clone();
    it.fold(first, |acc, x| hcomp(&acc, x))
}

/// The same fraction built from tensor products, the special permutation and
/// vertical composition.
pub fn fraction_by_composition(nums: &[Element], dens: &[Element]) -> Result<Element> {
    FractionShape::check(
        &nums.iter().map(Element::biarity).collect::<Vec<_>>(),
        &dens.iter().map(Element::biarity).collect::<Vec<_>>(),
    )?;
    let (k, l) = (dens.len() as u32, nums.len() as u32);
    let sigma = Element::from_monomial(special_permutation(k, l).to_monomial());
    vcomp(&hcomp_all(nums), &vcomp(&sigma, &hcomp_all(dens))?)
}

/// Left action on outputs and right action on inputs: `sigma · x · tau`.
pub fn act(sigma: &WireBundle, x: &Element, tau: &WireBundle) -> Result<Element> {
    let mut out = Element::zero(x.outputs, x.inputs);
    for (m, c) in &x.terms {
        let (mm, s) = act_mono(sigma, m, tau)?;
        out.add_signed(mm, c, s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(m: u32, n: u32) -> Element {
        Element::xi(m, n).unwrap()
    }

    #[test]
    fn special_permutation_small_cases() {
        assert_eq!(special_permutation(2, 2).image(), &[0, 2, 1, 3]);
        assert!(special_permutation(1, 4).is_identity());
        assert!(special_permutation(3, 1).is_identity());
        assert_eq!(special_permutation(2, 3).image(), &[0, 2, 4, 1, 3, 5]);
        assert_eq!(special_permutation(3, 2).image(), &[0, 3, 1, 4, 2, 5]);
    }

    #[test]
    fn fraction_matches_composition_on_butterfly() {
        let nums = [xi(1, 2), xi(1, 2)];
        let dens = [xi(2, 1), xi(2, 1)];
        let a = fraction(&nums, &dens).unwrap();
        let b = fraction_by_composition(&nums, &dens).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.biarity(), (2, 2));
        assert_eq!(a.terms().keys().next().unwrap().vertex_count(), 4);
    }

    #[test]
    fn fraction_with_one_denominator_is_vertical() {
        let a = fraction(&[xi(2, 1)], &[xi(1, 2)]).unwrap();
        assert_eq!(a, vcomp(&xi(2, 1), &xi(1, 2)).unwrap());
    }

    #[test]
    fn identities_are_units() {
        let x = xi(2, 3);
        assert_eq!(vcomp(&Element::identity(2), &x).unwrap(), x);
        assert_eq!(vcomp(&x, &Element::identity(3)).unwrap(), x);
    }

    #[test]
    fn interchange_sign_on_odd_vertices() {
        // (x1 ⊗ y1) ∘ (x2 ⊗ y2) = (-1)^{|x2||y1|} (x1 ∘ x2) ⊗ (y1 ∘ y2)
        let x1 = xi(1, 3);
        let x2 = xi(3, 1);
        let y1 = xi(2, 2);
        let y2 = xi(2, 2);
        let lhs = vcomp(&hcomp(&x1, &y1), &hcomp(&x2, &y2)).unwrap();
        let rhs = hcomp(&vcomp(&x1, &x2).unwrap(), &vcomp(&y1, &y2).unwrap());
        assert_eq!(lhs, -&rhs);
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        assert!(vcomp(&xi(1, 2), &xi(1, 2)).is_err());
        assert!(fraction(&[xi(1, 2)], &[xi(2, 1)]).is_err());
        assert!(comp_at_input(&xi(1, 2), 3, &xi(1, 2)).is_err());
    }

    #[test]
    fn action_composes() {
        let x = vcomp(&xi(3, 1), &xi(1, 3)).unwrap();
        let s1 = WireBundle::from_one_based(&[2, 3, 1]).unwrap();
        let s2 = WireBundle::from_one_based(&[2, 1, 3]).unwrap();
        let t1 = WireBundle::from_one_based(&[3, 1, 2]).unwrap();
        let t2 = WireBundle::from_one_based(&[1, 3, 2]).unwrap();
        let twice = act(&s1, &act(&s2, &x, &t2).unwrap(), &t1).unwrap();
        let once = act(&s1.compose(&s2), &x, &t2.compose(&t1)).unwrap();
        assert_eq!(twice, once);
    }
}

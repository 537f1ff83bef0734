// SPDX-License-Identifier: Apache-2.0

//! Port graphs: the monomials of the free PROP.
//!
//! A monomial is a directed acyclic graph whose vertices are generators
//! `xi(m,n)` (m outputs, n inputs) with ordered ports, plus ordered input
//! and output legs. Monomials are always stored in canonical form so that
//! structural equality is isomorphism preserving legs and port orders.
//!
//! Internally every index is zero based. The text exports use one based
//! legs and ports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `xi(m,n)` with `m` outputs and `n` inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub outputs: u32,
    pub inputs: u32,
}

impl Generator {
    pub fn new(outputs: u32, inputs: u32) -> Result<Self> {
        if outputs == 0 || inputs == 0 || (outputs == 1 && inputs == 1) {
            return Err(Error::InvalidGenerator(outputs, inputs));
        }
        Ok(Generator { outputs, inputs })
    }

    /// Homological degree `m + n - 3`.
    pub fn degree(self) -> i64 {
        self.outputs as i64 + self.inputs as i64 - 3
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 != 0
    }

    pub fn biarity(self) -> (u32, u32) {
        (self.outputs, self.inputs)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi({},{})", self.outputs, self.inputs)
    }
}

/// The producer end of a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// Global input leg.
    Input(u32),
    /// Output port `port` of vertex `vertex`.
    Port(u32, u32),
}

/// A permutation block, written in image notation: position `i` at the
/// bottom is wired to position `image[i]` at the top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WireBundle {
    image: Vec<u32>,
}

impl WireBundle {
    pub fn identity(k: u32) -> Self {
        WireBundle {
            image: (0..k).collect(),
        }
    }

    /// Builds a bundle from a zero based image vector.
    pub fn from_image(image: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::InvalidPermutation(image)),
            }
        }
        Ok(WireBundle { image })
    }

    /// Builds a bundle from a one based image vector.
    pub fn from_one_based(image: &[u32]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::InvalidPermutation(image.to_vec()));
        }
        Self::from_image(image.iter().map(|x| x - 1).collect())
    }

    pub fn len(&self) -> u32 {
        self.image.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.image[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> WireBundle {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        WireBundle { image: inv }
    }

    /// `self ∘ other` as functions: first `other`, then `self`.
    pub fn compose(&self, other: &WireBundle) -> WireBundle {
        WireBundle {
            image: other
                .image
                .iter()
                .map(|&x| self.image[x as usize])
                .collect(),
        }
    }

    /// The bundle as a monomial with no vertices.
    pub fn to_monomial(&self) -> Monomial {
        let k = self.len();
        let mut outs = vec![Source::Input(0); k as usize];
        for (i, &x) in self.image.iter().enumerate() {
            outs[x as usize] = Source::Input(i as u32);
        }
        Monomial {
            outputs: k,
            inputs: k,
            vertices: Vec::new(),
            offsets: vec![0],
            wires: Vec::new(),
            outs,
        }
    }
}

/// A port graph in arbitrary vertex order, not yet validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGraph {
    pub outputs: u32,
    pub inputs: u32,
    pub vertices: Vec<Generator>,
    /// `feeds[v][j]` is the producer wired into input port `j` of vertex `v`.
    pub feeds: Vec<Vec<Source>>,
    /// `outs[i]` is the producer wired to output leg `i`.
    pub outs: Vec<Source>,
}

/// A canonical port graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    outputs: u32,
    inputs: u32,
    vertices: Vec<Generator>,
    offsets: Vec<u32>,
    wires: Vec<Source>,
    outs: Vec<Source>,
}

fn offsets_of(vertices: &[Generator]) -> Vec<u32> {
    let mut offsets = Vec::with_capacity(vertices.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for g in vertices {
        acc += g.inputs;
        offsets.push(acc);
    }
    offsets
}

impl Monomial {
    /// The single vertex graph of a generator.
    pub fn generator(g: Generator) -> Monomial {
        Monomial {
            outputs: g.outputs,
            inputs: g.inputs,
            vertices: vec![g],
            offsets: vec![0, g.inputs],
            wires: (0..g.inputs).map(Source::Input).collect(),
            outs: (0..g.outputs).map(|p| Source::Port(0, p)).collect(),
        }
    }

    /// The identity bundle of width `k`.
    pub fn identity(k: u32) -> Monomial {
        WireBundle::identity(k).to_monomial()
    }

    pub fn biarity(&self) -> (u32, u32) {
        (self.outputs, self.inputs)
    }

    pub fn outputs(&self) -> u32 {
        self.outputs
    }

    pub fn inputs(&self) -> u32 {
        self.inputs
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> &[Generator] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Producers feeding the input ports of vertex `v`.
    pub fn feeds(&self, v: usize) -> &[Source] {
        &self.wires[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Producers feeding the output legs.
    pub fn outs(&self) -> &[Source] {
        &self.outs
    }

    /// Sum of vertex degrees.
    pub fn degree(&self) -> i64 {
        self.vertices.iter().map(|g| g.degree()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.is_empty()
            && self
                .outs
                .iter()
                .enumerate()
                .all(|(i, s)| *s == Source::Input(i as u32))
    }

    /// The generator if this is exactly `xi(m,n)` with legs in order.
    pub fn as_generator(&self) -> Option<Generator> {
        match self.vertices.as_slice() {
            [g] if *self == Monomial::generator(*g) => Some(*g),
            _ => None,
        }
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            outputs: self.outputs,
            inputs: self.inputs,
            vertices: self.vertices.clone(),
            feeds: (0..self.vertices.len())
                .map(|v| self.feeds(v).to_vec())
                .collect(),
            outs: self.outs.clone(),
        }
    }

    /// For every producer, the consumer it is wired to.
    pub fn consumers(&self) -> Consumers {
        let mut input = vec![Sink::Output(u32::MAX); self.inputs as usize];
        let mut port: Vec<Vec<Sink>> = self
            .vertices
            .iter()
            .map(|g| vec![Sink::Output(u32::MAX); g.outputs as usize])
            .collect();
        let mut set = |s: Source, sink: Sink| match s {
            Source::Input(j) => input[j as usize] = sink,
            Source::Port(u, p) => port[u as usize][p as usize] = sink,
        };
        for v in 0..self.vertices.len() {
            for (j, s) in self.feeds(v).iter().enumerate() {
                set(*s, Sink::Port(v as u32, j as u32));
            }
        }
        for (i, s) in self.outs.iter().enumerate() {
            set(*s, Sink::Output(i as u32));
        }
        Consumers { input, port }
    }

    /// The same graph read upside down: every vertex `xi(m,n)` becomes
    /// `xi(n,m)`, input legs become output legs and wires are reversed.
    pub fn transpose(&self) -> Monomial {
        let vertices: Vec<Generator> = self
            .vertices
            .iter()
            .map(|g| Generator {
                outputs: g.inputs,
                inputs: g.outputs,
            })
            .collect();
        let mut feeds: Vec<Vec<Source>> = vertices
            .iter()
            .map(|g| vec![Source::Input(0); g.inputs as usize])
            .collect();
        let mut outs = vec![Source::Input(0); self.inputs as usize];
        let mut wire = |src: Source, sink: Sink| {
            let producer = match sink {
                Sink::Output(i) => Source::Input(i),
                Sink::Port(v, j) => Source::Port(v, j),
            };
            match src {
                Source::Input(j) => outs[j as usize] = producer,
                Source::Port(u, p) => feeds[u as usize][p as usize] = producer,
            }
        };
        for v in 0..self.vertices.len() {
            for (j, s) in self.feeds(v).iter().enumerate() {
                wire(*s, Sink::Port(v as u32, j as u32));
            }
        }
        for (i, s) in self.outs.iter().enumerate() {
            wire(*s, Sink::Output(i as u32));
        }
        let raw = RawGraph {
            outputs: self.inputs,
            inputs: self.outputs,
            vertices,
            feeds,
            outs,
        };
        canonicalize_unchecked(&raw).0
    }

    /// Deterministic text export: one vertex per line, then one wire per
    /// line in consumer order. Legs and ports are one based.
    pub fn to_dot(&self) -> String {
        let mut s = format!("biarity {} {}\n", self.outputs, self.inputs);
        for (v, g) in self.vertices.iter().enumerate() {
            s.push_str(&format!("v{v} {g}\n"));
        }
        let src = |x: &Source| match *x {
            Source::Input(j) => format!("in{}", j + 1),
            Source::Port(u, p) => format!("v{}:{}", u, p + 1),
        };
        for v in 0..self.vertices.len() {
            for (j, x) in self.feeds(v).iter().enumerate() {
                s.push_str(&format!("e {} -> v{}:{}\n", src(x), v, j + 1));
            }
        }
        for (i, x) in self.outs.iter().enumerate() {
            s.push_str(&format!("e {} -> out{}\n", src(x), i + 1));
        }
        s
    }

    /// Parses the output of [`Monomial::to_dot`]. The vertex order of the
    /// text is kept as the raw order; the returned index map sends it to
    /// canonical order.
    pub fn from_dot(text: &str) -> Result<(Monomial, Vec<u32>)> {
        let raw = parse_dot(text)?;
        canonicalize(&raw)
    }
}

/// The consumer end of a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sink {
    Output(u32),
    Port(u32, u32),
}

/// Consumers of every producer of a monomial.
#[derive(Clone, Debug)]
pub struct Consumers {
    pub input: Vec<Sink>,
    pub port: Vec<Vec<Sink>>,
}

impl Consumers {
    pub fn of(&self, s: Source) -> Sink {
        match s {
            Source::Input(j) => self.input[j as usize],
            Source::Port(u, p) => self.port[u as usize][p as usize],
        }
    }
}

fn parse_dot(text: &str) -> Result<RawGraph> {
    let bad = |line: &str| Error::Format(format!("bad graph line: {line:?}"));
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head = lines.next().ok_or_else(|| bad(""))?;
    let dims: Vec<u32> = head
        .strip_prefix("biarity ")
        .ok_or_else(|| bad(head))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(head)))
        .collect::<Result<_>>()?;
    let [outputs, inputs] = dims[..] else {
        return Err(bad(head));
    };
    let mut vertices = Vec::new();
    let mut feeds: Vec<Vec<Option<Source>>> = Vec::new();
    let mut outs = vec![None; outputs as usize];
    let parse_num = |t: &str, line: &str| t.parse::<u32>().map_err(|_| bad(line));
    for line in lines {
        if let Some(rest) = line.strip_prefix('v') {
            let (id, gen) = rest.split_once(' ').ok_or_else(|| bad(line))?;
            if parse_num(id, line)? as usize != vertices.len() {
                return Err(bad(line));
            }
            let inner = gen
                .strip_prefix("xi(")
                .and_then(|g| g.strip_suffix(')'))
                .ok_or_else(|| bad(line))?;
            let (m, n) = inner.split_once(',').ok_or_else(|| bad(line))?;
            let g = Generator::new(parse_num(m.trim(), line)?, parse_num(n.trim(), line)?)?;
            vertices.push(g);
            feeds.push(vec![None; g.inputs as usize]);
        } else if let Some(rest) = line.strip_prefix("e ") {
            let (a, b) = rest.split_once(" -> ").ok_or_else(|| bad(line))?;
            let src = if let Some(j) = a.strip_prefix("in") {
                Source::Input(
                    parse_num(j, line)?
                        .checked_sub(1)
                        .ok_or_else(|| bad(line))?,
                )
            } else {
                let (u, p) = a
                    .strip_prefix('v')
                    .and_then(|x| x.split_once(':'))
                    .ok_or_else(|| bad(line))?;
                let p = parse_num(p, line)?
                    .checked_sub(1)
                    .ok_or_else(|| bad(line))?;
                Source::Port(parse_num(u, line)?, p)
            };
            let slot = if let Some(i) = b.strip_prefix("out") {
                let i = parse_num(i, line)?
                    .checked_sub(1)
                    .ok_or_else(|| bad(line))?;
                outs.get_mut(i as usize).ok_or_else(|| bad(line))?
            } else {
                let (v, j) = b
                    .strip_prefix('v')
                    .and_then(|x| x.split_once(':'))
                    .ok_or_else(|| bad(line))?;
                let v = parse_num(v, line)? as usize;
                let j = parse_num(j, line)?
                    .checked_sub(1)
                    .ok_or_else(|| bad(line))? as usize;
                feeds
                    .get_mut(v)
                    .and_then(|f| f.get_mut(j))
                    .ok_or_else(|| bad(line))?
            };
            if slot.replace(src).is_some() {
                return Err(bad(line));
            }
        } else {
            return Err(bad(line));
        }
    }
    let missing = || Error::Wiring("unwired consumer in graph text".into());
    Ok(RawGraph {
        outputs,
        inputs,
        vertices,
        feeds: feeds
            .into_iter()
            .map(|f| f.into_iter().map(|s| s.ok_or_else(missing)).collect())
            .collect::<Result<_>>()?,
        outs: outs
            .into_iter()
            .map(|s| s.ok_or_else(missing))
            .collect::<Result<_>>()?,
    })
}

fn validate(raw: &RawGraph) -> Result<()> {
    let nv = raw.vertices.len();
    if raw.feeds.len() != nv || raw.outs.len() != raw.outputs as usize {
        return Err(Error::Wiring(
            "consumer count does not match arities".into(),
        ));
    }
    let mut used_in = vec![false; raw.inputs as usize];
    let mut used_port: Vec<Vec<bool>> = raw
        .vertices
        .iter()
        .map(|g| vec![false; g.outputs as usize])
        .collect();
    let mut mark = |s: Source| -> Result<()> {
        let slot = match s {
            Source::Input(j) => used_in.get_mut(j as usize),
            Source::Port(u, p) => used_port
                .get_mut(u as usize)
                .and_then(|v| v.get_mut(p as usize)),
        };
        match slot {
            None => Err(Error::Wiring(format!("dangling reference {s:?}"))),
            Some(b) if *b => Err(Error::Wiring(format!("{s:?} wired twice"))),
            Some(b) => {
                *b = true;
                Ok(())
            }
        }
    };
    for (v, f) in raw.feeds.iter().enumerate() {
        if f.len() != raw.vertices[v].inputs as usize {
            return Err(Error::Wiring(format!("vertex {v} has wrong input count")));
        }
        for s in f {
            mark(*s)?;
        }
    }
    for s in &raw.outs {
        mark(*s)?;
    }
    if used_in.iter().any(|b| !b) || used_port.iter().flatten().any(|b| !b) {
        return Err(Error::Wiring("dangling producer".into()));
    }
    // Kahn on the vertex graph.
    let mut indeg = vec![0usize; nv];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (v, f) in raw.feeds.iter().enumerate() {
        for s in f {
            if let Source::Port(u, _) = *s {
                indeg[v] += 1;
                succ[u as usize].push(v);
            }
        }
    }
    let mut stack: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    if seen != nv {
        return Err(Error::Cycle);
    }
    Ok(())
}

/// Validates a raw graph and brings it to canonical form.
///
/// Canonical vertex order is breadth first discovery from the output legs
/// taken in order, scanning input ports in order. Returns the monomial and
/// the map from raw vertex index to canonical index.
pub fn canonicalize(raw: &RawGraph) -> Result<(Monomial, Vec<u32>)> {
    validate(raw)?;
    Ok(canonicalize_unchecked(raw))
}

/// Canonical form of a raw graph known to be well formed.
pub(crate) fn canonicalize_unchecked(raw: &RawGraph) -> (Monomial, Vec<u32>) {
    let nv = raw.vertices.len();
    let mut order = vec![u32::MAX; nv];
    let mut queue = Vec::with_capacity(nv);
    let visit = |s: &Source, order: &mut Vec<u32>, queue: &mut Vec<usize>| {
        if let Source::Port(u, _) = *s {
            if order[u as usize] == u32::MAX {
                order[u as usize] = queue.len() as u32;
                queue.push(u as usize);
            }
        }
    };
    for s in &raw.outs {
        visit(s, &mut order, &mut queue);
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for s in &raw.feeds[u] {
            visit(s, &mut order, &mut queue);
        }
    }
    debug_assert_eq!(queue.len(), nv, "every vertex reaches an output leg");
    let remap = |s: &Source| match *s {
        Source::Input(j) => Source::Input(j),
        Source::Port(u, p) => Source::Port(order[u as usize], p),
    };
    let vertices: Vec<Generator> = queue.iter().map(|&u| raw.vertices[u]).collect();
    let mut wires = Vec::with_capacity(vertices.iter().map(|g| g.inputs as usize).sum());
    for &u in &queue {
        wires.extend(raw.feeds[u].iter().map(remap));
    }
    let monomial = Monomial {
        outputs: raw.outputs,
        inputs: raw.inputs,
        offsets: offsets_of(&vertices),
        vertices,
        wires,
        outs: raw.outs.iter().map(remap).collect(),
    };
    (monomial, order)
}

/// Sign of the permutation that sorts the odd vertices, listed in raw
/// order, into canonical order.
pub fn reorder_sign(raw_vertices: &[Generator], raw_to_canon: &[u32]) -> i32 {
    let odd: Vec<u32> = raw_vertices
        .iter()
        .zip(raw_to_canon)
        .filter(|(g, _)| g.is_odd())
        .map(|(_, &c)| c)
        .collect();
    let mut inversions = 0usize;
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            if odd[i] > odd[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Canonical form together with the orientation sign relative to the raw
/// vertex order.
pub fn canonicalize_signed(raw: &RawGraph) -> Result<(Monomial, i32)> {
    let (m, order) = canonicalize(raw)?;
    Ok((m, reorder_sign(&raw.vertices, &order)))
}

pub(crate) fn canonicalize_signed_unchecked(raw: &RawGraph) -> (Monomial, i32) {
    let (m, order) = canonicalize_unchecked(raw);
    let s = reorder_sign(&raw.vertices, &order);
    (m, s)
}

/// Convenience constructor for `xi(m,n)` as a monomial.
pub fn make_generator(outputs: u32, inputs: u32) -> Result<Monomial> {
    Ok(Monomial::generator(Generator::new(outputs, inputs)?))
}

/// One connected component of a monomial. Legs are one based positions of
/// the ambient monomial, kept zero based here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<u32>,
    pub inputs: Vec<u32>,
    pub outputs: Vec<u32>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Connected components including legs, ordered by their first output leg.
pub fn connected_components(x: &Monomial) -> Vec<Component> {
    let nv = x.vertex_count();
    let ni = x.inputs as usize;
    // Nodes: vertices, then input legs, then output legs.
    let mut uf = UnionFind::new(nv + ni + x.outputs as usize);
    let node = |s: &Source| match *s {
        Source::Input(j) => nv + j as usize,
        Source::Port(u, _) => u as usize,
    };
    for v in 0..nv {
        for s in x.feeds(v) {
            uf.union(node(s), v);
        }
    }
    for (i, s) in x.outs.iter().enumerate() {
        uf.union(node(s), nv + ni + i);
    }
    let mut comps: Vec<(usize, Component)> = Vec::new();
    let mut index_of = std::collections::HashMap::new();
    for i in 0..x.outputs as usize {
        let r = uf.find(nv + ni + i);
        let k = *index_of.entry(r).or_insert_with(|| {
            comps.push((
                r,
                Component {
                    vertices: vec![],
                    inputs: vec![],
                    outputs: vec![],
                },
            ));
            comps.len() - 1
        });
        comps[k].1.outputs.push(i as u32);
    }
    for v in 0..nv {
        let r = uf.find(v);
        comps[index_of[&r]].1.vertices.push(v as u32);
    }
    for j in 0..ni {
        let r = uf.find(nv + j);
        comps[index_of[&r]].1.inputs.push(j as u32);
    }
    comps.into_iter().map(|(_, c)| c).collect()
}

/// Number of connected components of the graph with legs pruned.
pub fn vertex_components(x: &Monomial) -> usize {
    let nv = x.vertex_count();
    let mut uf = UnionFind::new(nv);
    let mut c = nv;
    for v in 0..nv {
        for s in x.feeds(v) {
            if let Source::Port(u, _) = *s {
                if uf.union(u as usize, v) {
                    c -= 1;
                }
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: u32, n: u32) -> Generator {
        Generator::new(m, n).unwrap()
    }

    // xi(2,1) on top of xi(1,2), raw order bottom first.
    fn upsilon_raw() -> RawGraph {
        RawGraph {
            outputs: 2,
            inputs: 2,
            vertices: vec![g(1, 2), g(2, 1)],
            feeds: vec![
                vec![Source::Input(0), Source::Input(1)],
                vec![Source::Port(0, 0)],
            ],
            outs: vec![Source::Port(1, 0), Source::Port(1, 1)],
        }
    }

    #[test]
    fn rejects_non_generators() {
        assert!(Generator::new(1, 1).is_err());
        assert!(Generator::new(0, 3).is_err());
        assert_eq!(g(3, 3).degree(), 3);
    }

    #[test]
    fn canonical_order_starts_at_outputs() {
        let (m, order) = canonicalize(&upsilon_raw()).unwrap();
        assert_eq!(order, vec![1, 0]);
        assert_eq!(m.vertices(), &[g(2, 1), g(1, 2)]);
        assert_eq!(m.feeds(0), &[Source::Port(1, 0)]);
    }

    #[test]
    fn detects_cycles_and_dangling() {
        let mut raw = upsilon_raw();
        raw.feeds[0][1] = Source::Port(1, 1);
        raw.outs[1] = Source::Input(1);
        assert_eq!(canonicalize(&raw).unwrap_err(), Error::Cycle);
        let mut raw = upsilon_raw();
        raw.outs[1] = Source::Port(1, 0);
        assert!(matches!(canonicalize(&raw), Err(Error::Wiring(_))));
    }

    #[test]
    fn dot_round_trip() {
        let (m, _) = canonicalize(&upsilon_raw()).unwrap();
        let text = m.to_dot();
        assert_eq!(
            text,
            "biarity 2 2\nv0 xi(2,1)\nv1 xi(1,2)\ne v1:1 -> v0:1\ne in1 -> v1:1\n\
             e in2 -> v1:2\ne v0:1 -> out1\ne v0:2 -> out2\n"
        );
        assert_eq!(Monomial::from_dot(&text).unwrap().0, m);
    }

    #[test]
    fn components_of_a_tensor_product() {
        let raw = RawGraph {
            outputs: 3,
            inputs: 3,
            vertices: vec![g(1, 2), g(2, 1)],
            feeds: vec![
                vec![Source::Input(0), Source::Input(1)],
                vec![Source::Input(2)],
            ],
            outs: vec![Source::Port(0, 0), Source::Port(1, 0), Source::Port(1, 1)],
        };
        let (m, _) = canonicalize(&raw).unwrap();
        let cs = connected_components(&m);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1].outputs, vec![1, 2]);
        assert_eq!(cs[1].inputs, vec![2]);
        assert_eq!(vertex_components(&m), 2);
    }

    #[test]
    fn permutation_bundle_algebra() {
        let s = WireBundle::from_one_based(&[2, 3, 1]).unwrap();
        assert!(s.compose(&s.inverse()).is_identity());
        assert!(WireBundle::from_one_based(&[1, 1]).is_err());
        let m = s.to_monomial();
        assert_eq!(m.outs()[1], Source::Input(0));
    }

    #[test]
    fn transpose_is_an_involution() {
        let raw = RawGraph {
            outputs: 2,
            inputs: 3,
            vertices: vec![g(2, 2), g(1, 2)],
            feeds: vec![
                vec![Source::Port(1, 0), Source::Input(2)],
                vec![Source::Input(0), Source::Input(1)],
            ],
            outs: vec![Source::Port(0, 1), Source::Port(0, 0)],
        };
        let (m, _) = canonicalize(&raw).unwrap();
        let t = m.transpose();
        assert_eq!(t.biarity(), (3, 2));
        assert_eq!(
            t.vertices()
                .iter()
                .map(|x| x.biarity())
                .collect::<Vec<_>>()
                .len(),
            2
        );
        assert_eq!(t.transpose(), m);
        assert_eq!(
            Monomial::generator(g(1, 3)).transpose(),
            Monomial::generator(g(3, 1))
        );
    }
}

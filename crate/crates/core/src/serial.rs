// SPDX-License-Identifier: Apache-2.0

//! Serialization of elements and differential tables.
//!
//! # JSON
//!
//! ```text
//! {"version":1,"biarity":[m,n],"terms":[{"coeff":"p/q","vertices":[[m,n],...],
//!   "edges":[[src,port,dst,port],...],"inputs":[[dst,port],...],
//!   "outputs":[[src,port],...]}]}
//! ```
//!
//! * `vertices` lists the generators in canonical order. Vertex ids are the
//!   zero based positions in this list.
//! * An endpoint is a vertex id, `-j` for input leg `j`, or `-(1000+i)` for
//!   output leg `i`. Legs are one based. Ports are one based on vertices and
//!   `0` on legs.
//! * `edges` lists every wire once, ordered by consumer: the input ports of
//!   vertex 0, then of vertex 1, and so on, then the output legs.
//! * `inputs[j-1]` is the consumer `[dst,port]` of input leg `j` and
//!   `outputs[i-1]` the producer `[src,port]` of output leg `i`. They repeat
//!   the leg edges so that a reader can look legs up directly.
//! * `coeff` is an integer or `p/q` in lowest terms.
//!
//! Terms appear in canonical monomial order. Reading accepts any vertex
//! order and applies the Koszul sign of the reordering.
//!
//! # Text document
//!
//! ```text
//! propmodel-element 1
//! biarity m n
//! term <coeff>
//! <graph block as written by Monomial::to_dot>
//! end
//! ```
//!
//! with one `term ... end` block per monomial.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::differential::{DifferentialTable, Provenance};
use crate::error::{Error, Result};
use crate::prop_algebra::{format_coeff, Coeff, Element};
use crate::term_graph::{canonicalize, reorder_sign, Generator, Monomial, RawGraph, Sink, Source};

pub const FORMAT_VERSION: u32 = 1;
const OUTPUT_BASE: i64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub vertices: Vec<[u32; 2]>,
    pub edges: Vec<[i64; 4]>,
    pub inputs: Vec<[i64; 2]>,
    pub outputs: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonElement {
    pub version: u32,
    pub biarity: [u32; 2],
    pub terms: Vec<JsonTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEntry {
    pub generator: [u32; 2],
    pub provenance: Provenance,
    pub differential: JsonElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTable {
    pub version: u32,
    pub entries: Vec<JsonEntry>,
}

fn producer_code(s: Source) -> [i64; 2] {
    match s {
        Source::Input(j) => [-(j as i64 + 1), 0],
        Source::Port(v, p) => [v as i64, p as i64 + 1],
    }
}

fn consumer_code(s: Sink) -> [i64; 2] {
    match s {
        Sink::Output(i) => [-(OUTPUT_BASE + i as i64 + 1), 0],
        Sink::Port(v, j) => [v as i64, j as i64 + 1],
    }
}

fn term_to_json(m: &Monomial, c: &Coeff) -> JsonTerm {
    let mut edges = Vec::new();
    for v in 0..m.vertex_count() {
        for (j, s) in m.feeds(v).iter().enumerate() {
            let [a, b] = producer_code(*s);
            let [c, d] = consumer_code(Sink::Port(v as u32, j as u32));
            edges.push([a, b, c, d]);
        }
    }
    for (i, s) in m.outs().iter().enumerate() {
        let [a, b] = producer_code(*s);
        let [c, d] = consumer_code(Sink::Output(i as u32));
        edges.push([a, b, c, d]);
    }
    let consumers = m.consumers();
    JsonTerm {
        coeff: format_coeff(c),
        vertices: m.vertices().iter().map(|g| [g.outputs, g.inputs]).collect(),
        edges,
        inputs: consumers.input.iter().map(|s| consumer_code(*s)).collect(),
        outputs: m.outs().iter().map(|s| producer_code(*s)).collect(),
    }
}

pub fn element_to_json_value(x: &Element) -> JsonElement {
    let (m, n) = x.biarity();
    JsonElement {
        version: FORMAT_VERSION,
        biarity: [m, n],
        terms: x.iter().map(|(mono, c)| term_to_json(mono, c)).collect(),
    }
}

/// Compact JSON for an element.
pub fn element_to_json(x: &Element) -> String {
    serde_json::to_string(&element_to_json_value(x)).expect("serializable")
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let bad = || Error::Format(format!("bad coefficient {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = p.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
    let q = q.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Coeff::new(p, q))
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {v}")));
    }
    Ok(())
}

fn term_from_json(t: &JsonTerm, outputs: u32, inputs: u32) -> Result<(Monomial, i32)> {
    let bad = |msg: String| Error::Format(msg);
    let vertices: Vec<Generator> = t
        .vertices
        .iter()
        .map(|[m, n]| Generator::new(*m, *n))
        .collect::<Result<_>>()?;
    let mut feeds: Vec<Vec<Option<Source>>> = vertices
        .iter()
        .map(|g| vec![None; g.inputs as usize])
        .collect();
    let mut outs: Vec<Option<Source>> = vec![None; outputs as usize];
    for e in &t.edges {
        let [src, sport, dst, dport] = *e;
        let producer = if src < 0 {
            let j = -src;
            if j > inputs as i64 || sport != 0 {
                return Err(bad(format!("bad producer in edge {e:?}")));
            }
            Source::Input(j as u32 - 1)
        } else {
            let g = vertices
                .get(src as usize)
                .ok_or_else(|| bad(format!("bad vertex in edge {e:?}")))?;
            if sport < 1 || sport > g.outputs as i64 {
                return Err(bad(format!("bad port in edge {e:?}")));
            }
            Source::Port(src as u32, sport as u32 - 1)
        };
        let slot = if dst <= -(OUTPUT_BASE + 1) {
            let i = -dst - OUTPUT_BASE;
            if i > outputs as i64 || dport != 0 {
                return Err(bad(format!("bad consumer in edge {e:?}")));
            }
            &mut outs[i as usize - 1]
        } else if dst >= 0 {
            let g = vertices
                .get(dst as usize)
                .ok_or_else(|| bad(format!("bad vertex in edge {e:?}")))?;
            if dport < 1 || dport > g.inputs as i64 {
                return Err(bad(format!("bad port in edge {e:?}")));
            }
            &mut feeds[dst as usize][dport as usize - 1]
        } else {
            return Err(bad(format!("bad consumer in edge {e:?}")));
        };
        if slot.replace(producer).is_some() {
            return Err(bad(format!("consumer wired twice in edge {e:?}")));
        }
    }
    let fill = |v: Vec<Option<Source>>| -> Result<Vec<Source>> {
        v.into_iter()
            .map(|s| s.ok_or_else(|| bad("unwired consumer".into())))
            .collect()
    };
    let raw = RawGraph {
        outputs,
        inputs,
        vertices: vertices.clone(),
        feeds: feeds.into_iter().map(fill).collect::<Result<_>>()?,
        outs: fill(outs)?,
    };
    let (mono, order) = canonicalize(&raw)?;
    let echo = term_to_json(&mono, &Coeff::zero());
    let consumers = mono.consumers();
    let remap = |[a, b]: [i64; 2]| {
        if a >= 0 {
            [order[a as usize] as i64, b]
        } else {
            [a, b]
        }
    };
    let inputs_ok = t.inputs.len() == consumers.input.len()
        && t.inputs
            .iter()
            .zip(&echo.inputs)
            .all(|(x, y)| remap(*x) == *y);
    let outputs_ok = t.outputs.len() == echo.outputs.len()
        && t.outputs
            .iter()
            .zip(&echo.outputs)
            .all(|(x, y)| remap(*x) == *y);
    if !inputs_ok || !outputs_ok {
        return Err(bad("leg lists disagree with edges".into()));
    }
    Ok((mono, reorder_sign(&vertices, &order)))
}

pub fn element_from_json_value(doc: &JsonElement) -> Result<Element> {
    check_version(doc.version)?;
    let [m, n] = doc.biarity;
    let mut out = Element::zero(m, n);
    for t in &doc.terms {
        let (mono, sign) = term_from_json(t, m, n)?;
        out.add_signed(mono, &parse_coeff(&t.coeff)?, sign);
    }
    Ok(out)
}

pub fn element_from_json(text: &str) -> Result<Element> {
    let doc: JsonElement = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    element_from_json_value(&doc)
}

/// A differential table as JSON, entries in generator order.
pub fn table_to_json(t: &DifferentialTable) -> String {
    let doc = JsonTable {
        version: FORMAT_VERSION,
        entries: t
            .iter()
            .map(|(g, e, p)| JsonEntry {
                generator: [g.outputs, g.inputs],
                provenance: p,
                differential: element_to_json_value(e),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn table_from_json(text: &str) -> Result<DifferentialTable> {
    let doc: JsonTable = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    check_version(doc.version)?;
    let mut t = DifferentialTable::new();
    for e in &doc.entries {
        let g = Generator::new(e.generator[0], e.generator[1])?;
        let x = element_from_json_value(&e.differential)?;
        if x.biarity() != g.biarity() {
            return Err(Error::Format(format!(
                "entry for {g} has biarity {:?}",
                x.biarity()
            )));
        }
        t.insert(g, x, e.provenance);
    }
    Ok(t)
}

const TEXT_HEADER: &str = "propmodel-element";

/// The text document for an element.
pub fn element_to_text(x: &Element) -> String {
    let (m, n) = x.biarity();
    let mut s = format!("{TEXT_HEADER} {FORMAT_VERSION}\nbiarity {m} {n}\n");
    for (mono, c) in x.iter() {
        s.push_str(&format!("term {}\n", format_coeff(c)));
        s.push_str(&mono.to_dot());
        s.push_str("end\n");
    }
    s
}

/// Graphviz DOT rendering of an element, one cluster per term. Inputs sit
/// at the bottom; edge labels give the one based port numbers.
pub fn element_to_graphviz(x: &Element) -> String {
    let mut s =
        String::from("digraph element {\n  rankdir=BT;\n  node [fontname=\"monospace\"];\n");
    for (t, (mono, c)) in x.iter().enumerate() {
        s.push_str(&format!(
            "  subgraph cluster_{t} {{\n    label=\"{}\";\n",
            format_coeff(c)
        ));
        for j in 1..=mono.inputs() {
            s.push_str(&format!(
                "    t{t}_in{j} [shape=plaintext, label=\"in{j}\"];\n"
            ));
        }
        for i in 1..=mono.outputs() {
            s.push_str(&format!(
                "    t{t}_out{i} [shape=plaintext, label=\"out{i}\"];\n"
            ));
        }
        for (v, g) in mono.vertices().iter().enumerate() {
            s.push_str(&format!("    t{t}_v{v} [shape=box, label=\"{g}\"];\n"));
        }
        let tail = |src: &Source| match *src {
            Source::Input(j) => (format!("t{t}_in{}", j + 1), String::new()),
            Source::Port(u, p) => (format!("t{t}_v{u}"), format!("taillabel=\"{}\", ", p + 1)),
        };
        for v in 0..mono.vertex_count() {
            for (k, src) in mono.feeds(v).iter().enumerate() {
                let (from, label) = tail(src);
                s.push_str(&format!(
                    "    {from} -> t{t}_v{v} [{label}headlabel=\"{}\"];\n",
                    k + 1
                ));
            }
        }
        for (i, src) in mono.outs().iter().enumerate() {
            let (from, label) = tail(src);
            s.push_str(&format!(
                "    {from} -> t{t}_out{} [{}];\n",
                i + 1,
                label.trim_end_matches(", ")
            ));
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

pub fn element_from_text(text: &str) -> Result<Element> {
    let bad = |line: usize, msg: &str| Error::Format(format!("line {line}: {msg}"));
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = || lines.find(|(_, l)| !l.is_empty());
    let (ln, head) = next().ok_or_else(|| bad(1, "empty document"))?;
    let version = head
        .strip_prefix(TEXT_HEADER)
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| bad(ln, "missing header"))?;
    check_version(version)?;
    let (ln, dims) = next().ok_or_else(|| bad(ln, "missing biarity"))?;
    let nums: Vec<u32> = dims
        .strip_prefix("biarity ")
        .map(|d| {
            d.split_whitespace()
                .filter_map(|t| t.parse().ok())
                .collect()
        })
        .unwrap_or_default();
    let [m, n] = nums[..] else {
        return Err(bad(ln, "bad biarity line"));
    };
    let mut out = Element::zero(m, n);
    while let Some((ln, line)) = next() {
        let c = line
            .strip_prefix("term ")
            .ok_or_else(|| bad(ln, "expected 'term'"))
            .and_then(|c| parse_coeff(c).map_err(|_| bad(ln, "bad coefficient")))?;
        let mut block = String::new();
        loop {
            let (bl, l) = next().ok_or_else(|| bad(ln, "unterminated term"))?;
            if l == "end" {
                break;
            }
            if l.starts_with("term ") {
                return Err(bad(bl, "missing 'end'"));
            }
            block.push_str(l);
            block.push('\n');
        }
        let raw_vertices = dot_vertices(&block)?;
        let (mono, order) = Monomial::from_dot(&block).map_err(|e| bad(ln, &e.to_string()))?;
        if mono.biarity() != (m, n) {
            return Err(bad(ln, "term biarity differs from the document"));
        }
        out.add_signed(mono, &c, reorder_sign(&raw_vertices, &order));
    }
    Ok(out)
}

fn dot_vertices(block: &str) -> Result<Vec<Generator>> {
    block
        .lines()
        .filter_map(|l| {
            l.strip_prefix('v')
                .and_then(|r| r.split_once(' '))
                .map(|x| x.1)
        })
        .map(|g| {
            let inner = g
                .trim()
                .strip_prefix("xi(")
                .and_then(|g| g.strip_suffix(')'))
                .ok_or_else(|| Error::Format(format!("bad vertex {g:?}")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad vertex {g:?}")))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Format(format!("bad vertex {g:?}")))
            };
            Generator::new(num(a)?, num(b)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::recorded_differential;
    use crate::syntax::parse_element;

    #[test]
    fn graphviz_of_a_composite() {
        let x = parse_element("- 1/2 xi(2,1) . xi(1,2)").unwrap();
        let want = "digraph element {
  rankdir=BT;
  node [fontname=\"monospace\"];
  subgraph cluster_0 {
    label=\"-1/2\";
    t0_in1 [shape=plaintext, label=\"in1\"];
    t0_in2 [shape=plaintext, label=\"in2\"];
    t0_out1 [shape=plaintext, label=\"out1\"];
    t0_out2 [shape=plaintext, label=\"out2\"];
    t0_v0 [shape=box, label=\"xi(2,1)\"];
    t0_v1 [shape=box, label=\"xi(1,2)\"];
    t0_v1 -> t0_v0 [taillabel=\"1\", headlabel=\"1\"];
    t0_in1 -> t0_v1 [headlabel=\"1\"];
    t0_in2 -> t0_v1 [headlabel=\"2\"];
    t0_v0 -> t0_out1 [taillabel=\"1\"];
    t0_v0 -> t0_out2 [taillabel=\"2\"];
  }
}
";
        assert_eq!(element_to_graphviz(&x), want);
    }

    #[test]
    fn json_layout_of_a_composite() {
        let x = parse_element("- 1/2 xi(2,1) . xi(1,2)").unwrap();
        assert_eq!(
            element_to_json(&x),
            concat!(
                r#"{"version":1,"biarity":[2,2],"terms":[{"coeff":"-1/2","vertices":[[2,1],[1,2]],"#,
                r#""edges":[[1,1,0,1],[-1,0,1,1],[-2,0,1,2],[0,1,-1001,0],[0,2,-1002,0]],"#,
                r#""inputs":[[1,1],[1,2]],"outputs":[[0,1],[0,2]]}]}"#
            )
        );
    }

    #[test]
    fn json_round_trip_and_reordering_sign() {
        let x = parse_element("3/4 xi(1,3) * xi(2,2) + xi(2,2) * xi(1,3) - xi(1,3) * frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]").unwrap();
        assert_eq!(element_from_json(&element_to_json(&x)).unwrap(), x);
        // Swap the two odd vertices of a tensor product by hand.
        let y = parse_element("xi(1,3) * xi(2,2)").unwrap();
        let mut doc = element_to_json_value(&y);
        let t = &mut doc.terms[0];
        t.vertices.swap(0, 1);
        let swap = |v: &mut i64| {
            if *v == 0 || *v == 1 {
                *v = 1 - *v
            }
        };
        for e in &mut t.edges {
            swap(&mut e[0]);
            swap(&mut e[2]);
        }
        for p in t.inputs.iter_mut().chain(t.outputs.iter_mut()) {
            swap(&mut p[0]);
        }
        assert_eq!(element_from_json_value(&doc).unwrap(), -&y);
    }

    #[test]
    fn json_rejects_bad_documents() {
        assert!(element_from_json("{}").is_err());
        let x = parse_element("xi(2,1) . xi(1,2)").unwrap();
        let mut doc = element_to_json_value(&x);
        doc.version = 2;
        assert!(element_from_json_value(&doc).is_err());
        let mut doc = element_to_json_value(&x);
        doc.terms[0].edges.pop();
        assert!(element_from_json_value(&doc).is_err());
        let mut doc = element_to_json_value(&x);
        doc.terms[0].inputs.swap(0, 1);
        assert!(element_from_json_value(&doc).is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = parse_element("2 xi(2,3) - 1/3 xi(2,2) o_2 xi(1,2)").unwrap();
        let text = element_to_text(&x);
        assert!(text.starts_with("propmodel-element 1\nbiarity 2 3\nterm "));
        assert_eq!(element_from_text(&text).unwrap(), x);
        assert_eq!(
            element_from_text(&element_to_text(&Element::zero(1, 2))).unwrap(),
            Element::zero(1, 2)
        );
        assert!(
            element_from_text("propmodel-element 1\nbiarity 1 2\nterm 1\nbiarity 1 2\n").is_err()
        );
    }

    #[test]
    fn table_round_trip() {
        let t = recorded_differential();
        let s = table_to_json(&t);
        assert_eq!(table_from_json(&s).unwrap(), t);
    }
}

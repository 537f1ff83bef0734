// SPDX-License-Identifier: Apache-2.0

//! The term language.
//!
//! ```text
//! element  := ['+'|'-'] term (('+'|'-') term)*
//! term     := [rational] factor
//! rational := int ['/' int]
//! factor   := hfactor (('.' | 'o_' int | 'i_' int) hfactor)*     left associative
//! hfactor  := atom ('*' atom)*
//! atom     := 'xi(' int ',' int ')' | 'id' ['^' int] | 'zero(' int ',' int ')'
//!           | '(' element ')' | 'frac[' factor+ '/' factor+ ']'
//!           | 'act[' perm ';' factor ';' perm ']'
//! perm     := '(' int (',' int)* ')'                              image notation
//! ```
//!
//! `a . b` is vertical composition (outputs of `b` feed `a`), `a * b` is the
//! tensor product, `a o_i b` grafts the single output of `b` into input `i`
//! of `a`, and `a i_j b` grafts output `j` of `b` into the single input of
//! `a`. `act[s; x; t]` relabels outputs by `s` and inputs by `t`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::prop_algebra::{
    act, comp_at_input, comp_at_output, format_coeff, fraction, hcomp, vcomp, Coeff, Element,
};
use crate::term_graph::{
    canonicalize, connected_components, Generator, Monomial, RawGraph, Sink, Source, WireBundle,
};

/// A parsed expression with its byte offset in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub pos: usize,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Sum(Vec<(Coeff, Expr)>),
    Xi(u32, u32),
    Id(u32),
    Zero(u32, u32),
    Vert(Box<Expr>, Box<Expr>),
    Horiz(Box<Expr>, Box<Expr>),
    AtInput(Box<Expr>, u32, Box<Expr>),
    AtOutput(Box<Expr>, u32, Box<Expr>),
    Frac(Vec<Expr>, Vec<Expr>),
    Act(Vec<u32>, Box<Expr>, Vec<u32>),
}

impl Expr {
    fn new(pos: usize, kind: ExprKind) -> Expr {
        Expr { pos, kind }
    }

    fn at(kind: ExprKind) -> Expr {
        Expr { pos: 0, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Xi,
    Id,
    Zero,
    Frac,
    Act,
    OComp(u32),
    IComp(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Dot,
    Star,
    Slash,
    Plus,
    Minus,
    Caret,
}

fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn err_at(src: &str, pos: usize, msg: impl Into<String>) -> Error {
    let (line, col) = line_col(src, pos);
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| src[start..*i].parse().expect("digits"))
    };
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let n = read_int(&mut i).expect("digit");
            out.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match word {
                "xi" => Tok::Xi,
                "id" => Tok::Id,
                "zero" => Tok::Zero,
                "frac" => Tok::Frac,
                "act" => Tok::Act,
                "o_" | "i_" => {
                    let n = read_int(&mut i)
                        .and_then(|n| u32::try_from(n).ok())
                        .ok_or_else(|| err_at(src, i, "expected index after composition"))?;
                    if word == "o_" {
                        Tok::OComp(n)
                    } else {
                        Tok::IComp(n)
                    }
                }
                w if (w.starts_with("o_") || w.starts_with("i_"))
                    && w[2..].bytes().all(|d| d.is_ascii_digit())
                    && w.len() > 2 =>
                {
                    let n: u32 = w[2..]
                        .parse()
                        .map_err(|_| err_at(src, start, "composition index too large"))?;
                    if w.starts_with('o') {
                        Tok::OComp(n)
                    } else {
                        Tok::IComp(n)
                    }
                }
                w => return Err(err_at(src, start, format!("unknown word {w:?}"))),
            };
            out.push((start, tok));
            continue;
        }
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'.' => Tok::Dot,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'^' => Tok::Caret,
            _ => {
                let ch = src[i..].chars().next().expect("char");
                return Err(err_at(src, start, format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.src.len(), |t| t.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        err_at(self.src, self.pos(), msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.i += 1;
                Ok(n)
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.int()?;
        u32::try_from(&n).map_err(|_| self.err("integer out of range"))
    }

    fn element(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Tok::Minus) {
            -1
        } else {
            self.eat(&Tok::Plus);
            1
        };
        loop {
            let (c, f) = self.term()?;
            terms.push((if sign < 0 { -c } else { c }, f));
            if self.eat(&Tok::Plus) {
                sign = 1;
            } else if self.eat(&Tok::Minus) {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(Expr::new(pos, ExprKind::Sum(terms)))
    }

    fn term(&mut self) -> Result<(Coeff, Expr)> {
        let c = if let Some(Tok::Int(_)) = self.peek() {
            let p = self.int()?;
            let q = if self.eat(&Tok::Slash) {
                self.int()?
            } else {
                BigInt::one()
            };
            if q.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Coeff::new(p, q)
        } else {
            Coeff::one()
        };
        Ok((c, self.factor()?))
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut lhs = self.hfactor()?;
        loop {
            let pos = self.pos();
            let kind = match self.peek() {
                Some(Tok::Dot) => {
                    self.i += 1;
                    let rhs = self.hfactor()?;
                    ExprKind::Vert(Box::new(lhs), Box::new(rhs))
                }
                Some(&Tok::OComp(k)) => {
                    self.i += 1;
                    let rhs = self.hfactor()?;
                    ExprKind::AtInput(Box::new(lhs), k, Box::new(rhs))
                }
                Some(&Tok::IComp(k)) => {
                    self.i += 1;
                    let rhs = self.hfactor()?;
                    ExprKind::AtOutput(Box::new(lhs), k, Box::new(rhs))
                }
                _ => return Ok(lhs),
            };
            lhs = Expr::new(pos, kind);
        }
    }

    fn hfactor(&mut self) -> Result<Expr> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.atom()?;
            lhs = Expr::new(pos, ExprKind::Horiz(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn pair(&mut self) -> Result<(u32, u32)> {
        self.expect(Tok::LParen, "'('")?;
        let m = self.small()?;
        self.expect(Tok::Comma, "','")?;
        let n = self.small()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((m, n))
    }

    fn perm(&mut self) -> Result<Vec<u32>> {
        self.expect(Tok::LParen, "'(' opening a permutation")?;
        let mut v = vec![self.small()?];
        while self.eat(&Tok::Comma) {
            v.push(self.small()?);
        }
        self.expect(Tok::RParen, "')' closing a permutation")?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let kind = match self.peek() {
            Some(Tok::Xi) => {
                self.i += 1;
                let (m, n) = self.pair()?;
                ExprKind::Xi(m, n)
            }
            Some(Tok::Zero) => {
                self.i += 1;
                let (m, n) = self.pair()?;
                ExprKind::Zero(m, n)
            }
            Some(Tok::Id) => {
                self.i += 1;
                let k = if self.eat(&Tok::Caret) {
                    self.small()?
                } else {
                    1
                };
                ExprKind::Id(k)
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.element()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(e);
            }
            Some(Tok::Frac) => {
                self.i += 1;
                self.expect(Tok::LBrack, "'[' after frac")?;
                let mut nums = vec![self.factor()?];
                while !self.eat(&Tok::Slash) {
                    if self.peek().is_none() {
                        return Err(self.err("expected '/' in fraction"));
                    }
                    nums.push(self.factor()?);
                }
                let mut dens = vec![self.factor()?];
                while !self.eat(&Tok::RBrack) {
                    if self.peek().is_none() {
                        return Err(self.err("expected ']' closing fraction"));
                    }
                    dens.push(self.factor()?);
                }
                ExprKind::Frac(nums, dens)
            }
            Some(Tok::Act) => {
                self.i += 1;
                self.expect(Tok::LBrack, "'[' after act")?;
                let s = self.perm()?;
                self.expect(Tok::Semi, "';'")?;
                let x = self.factor()?;
                self.expect(Tok::Semi, "';'")?;
                let t = self.perm()?;
                self.expect(Tok::RBrack, "']'")?;
                ExprKind::Act(s, Box::new(x), t)
            }
            _ => return Err(self.err("expected a factor")),
        };
        Ok(Expr::new(pos, kind))
    }
}

/// Parses an element expression.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, i: 0 };
    let e = p.element()?;
    if p.i != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates an expression. Errors name the position of the offending
/// sub-expression.
pub fn elaborate(src: &str, e: &Expr) -> Result<Element> {
    let wrap = |r: Result<Element>| {
        r.map_err(|err| match err {
            Error::Parse { .. } => err,
            other => err_at(src, e.pos, other.to_string()),
        })
    };
    match &e.kind {
        ExprKind::Sum(terms) => {
            let mut acc: Option<Element> = None;
            for (c, f) in terms {
                let x = elaborate(src, f)?.scale(c);
                acc = Some(match acc {
                    None => x,
                    Some(a) if a.biarity() == x.biarity() => &a + &x,
                    Some(a) => {
                        return Err(err_at(
                            src,
                            f.pos,
                            format!(
                                "summand of biarity {:?} in a sum of biarity {:?}",
                                x.biarity(),
                                a.biarity()
                            ),
                        ))
                    }
                });
            }
            Ok(acc.expect("nonempty sum"))
        }
        ExprKind::Xi(m, n) => wrap(Element::xi(*m, *n)),
        ExprKind::Id(k) if *k == 0 => Err(err_at(src, e.pos, "identity of width 0")),
        ExprKind::Id(k) => Ok(Element::identity(*k)),
        ExprKind::Zero(m, n) => Ok(Element::zero(*m, *n)),
        ExprKind::Vert(a, b) => wrap(vcomp(&elaborate(src, a)?, &elaborate(src, b)?)),
        ExprKind::Horiz(a, b) => Ok(hcomp(&elaborate(src, a)?, &elaborate(src, b)?)),
        ExprKind::AtInput(a, i, b) => {
            wrap(comp_at_input(&elaborate(src, a)?, *i, &elaborate(src, b)?))
        }
        ExprKind::AtOutput(a, j, b) => {
            wrap(comp_at_output(&elaborate(src, a)?, *j, &elaborate(src, b)?))
        }
        ExprKind::Frac(nums, dens) => {
            let nums = nums
                .iter()
                .map(|x| elaborate(src, x))
                .collect::<Result<Vec<_>>>()?;
            let dens = dens
                .iter()
                .map(|x| elaborate(src, x))
                .collect::<Result<Vec<_>>>()?;
            wrap(fraction(&nums, &dens))
        }
        ExprKind::Act(s, x, t) => {
            let s = WireBundle::from_one_based(s);
            let t = WireBundle::from_one_based(t);
            wrap(act(&s?, &elaborate(src, x)?, &t?))
        }
    }
}

/// Parses and evaluates an element expression.
pub fn parse_element(src: &str) -> Result<Element> {
    elaborate(src, &parse(src)?)
}

// ---------------------------------------------------------------------------
// Printing.

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Sum(t) if t.len() != 1 || !t[0].0.is_one() => 0,
        ExprKind::Sum(t) => prec(&t[0].1),
        ExprKind::Vert(..) | ExprKind::AtInput(..) | ExprKind::AtOutput(..) => 1,
        ExprKind::Horiz(..) => 2,
        _ => 3,
    }
}

fn write_perm(out: &mut String, p: &[u32]) {
    out.push('(');
    for (i, x) in p.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push(')');
}

fn write_expr(out: &mut String, e: &Expr, ctx: u8) {
    let paren = prec(e) < ctx;
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Sum(terms) => {
            for (i, (c, f)) in terms.iter().enumerate() {
                let neg = c.is_negative();
                if i > 0 {
                    out.push_str(if neg { " - " } else { " + " });
                } else if neg {
                    out.push_str("- ");
                }
                let a = c.abs();
                if !a.is_one() {
                    out.push_str(&format_coeff(&a));
                    out.push(' ');
                }
                write_expr(out, f, 1);
            }
        }
        ExprKind::Xi(m, n) => {
            let _ = write!(out, "xi({m},{n})");
        }
        ExprKind::Id(1) => out.push_str("id"),
        ExprKind::Id(k) => {
            let _ = write!(out, "id^{k}");
        }
        ExprKind::Zero(m, n) => {
            let _ = write!(out, "zero({m},{n})");
        }
        ExprKind::Vert(a, b) => {
            write_expr(out, a, 1);
            out.push_str(" . ");
            write_expr(out, b, 2);
        }
        ExprKind::AtInput(a, i, b) => {
            write_expr(out, a, 1);
            let _ = write!(out, " o_{i} ");
            write_expr(out, b, 2);
        }
        ExprKind::AtOutput(a, j, b) => {
            write_expr(out, a, 1);
            let _ = write!(out, " i_{j} ");
            write_expr(out, b, 2);
        }
        ExprKind::Horiz(a, b) => {
            write_expr(out, a, 2);
            out.push_str(" * ");
            write_expr(out, b, 3);
        }
        ExprKind::Frac(nums, dens) => {
            out.push_str("frac[");
            for x in nums {
                write_expr(out, x, 3);
                out.push(' ');
            }
            out.push('/');
            for x in dens {
                out.push(' ');
                write_expr(out, x, 3);
            }
            out.push(']');
        }
        ExprKind::Act(s, x, t) => {
            out.push_str("act[");
            write_perm(out, s);
            out.push_str("; ");
            write_expr(out, x, 1);
            out.push_str("; ");
            write_perm(out, t);
            out.push(']');
        }
    }
    if paren {
        out.push(')');
    }
}

/// Renders an expression in the term language.
pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

/// Largest graph for which the printer searches for a fraction shape.
const FRACTION_SEARCH_LIMIT: usize = 16;

/// An expression evaluating to `±m`. Special monomials come out as nested
/// fractions and operadic compositions; anything else is peeled into layers.
pub fn express(m: &Monomial) -> Expr {
    if m.vertex_count() == 0 {
        if m.is_identity() {
            return Expr::at(ExprKind::Id(m.outputs()));
        }
        let sigma = wiring_image(m);
        return Expr::at(ExprKind::Act(
            sigma,
            Box::new(Expr::at(ExprKind::Id(m.outputs()))),
            (1..=m.inputs()).collect(),
        ));
    }
    if let Some(g) = m.as_generator() {
        return Expr::at(ExprKind::Xi(g.outputs, g.inputs));
    }
    if let Some((a, b)) = horizontal_split(m) {
        return Expr::at(ExprKind::Horiz(
            Box::new(express(&a)),
            Box::new(express(&b)),
        ));
    }
    if m.vertex_count() <= FRACTION_SEARCH_LIMIT {
        if let Some((nums, dens)) = fraction_split(m) {
            return fraction_expr(&nums, &dens);
        }
    }
    peel(m)
}

/// One based images of a vertex free wiring.
fn wiring_image(m: &Monomial) -> Vec<u32> {
    let mut image = vec![0; m.inputs() as usize];
    for (i, s) in m.outs().iter().enumerate() {
        if let Source::Input(j) = *s {
            image[j as usize] = i as u32 + 1;
        }
    }
    image
}

fn fraction_expr(nums: &[Monomial], dens: &[Monomial]) -> Expr {
    let (l, k) = (nums.len(), dens.len());
    let non_id = |xs: &[Monomial]| -> Vec<usize> {
        (0..xs.len()).filter(|&i| !xs[i].is_identity()).collect()
    };
    if l == 1 && k == 1 {
        return Expr::at(ExprKind::Vert(
            Box::new(express(&nums[0])),
            Box::new(express(&dens[0])),
        ));
    }
    if l == 1 {
        if let [i] = non_id(dens)[..] {
            return Expr::at(ExprKind::AtInput(
                Box::new(express(&nums[0])),
                i as u32 + 1,
                Box::new(express(&dens[i])),
            ));
        }
    }
    if k == 1 {
        if let [r] = non_id(nums)[..] {
            return Expr::at(ExprKind::AtOutput(
                Box::new(express(&nums[r])),
                r as u32 + 1,
                Box::new(express(&dens[0])),
            ));
        }
    }
    Expr::at(ExprKind::Frac(
        nums.iter().map(express).collect(),
        dens.iter().map(express).collect(),
    ))
}

/// Splits `m = a * b` at the first place the legs allow it.
fn horizontal_split(m: &Monomial) -> Option<(Monomial, Monomial)> {
    let comps = connected_components(m);
    if comps.len() < 2 {
        return None;
    }
    let (mut p, mut q) = (0u32, 0u32);
    let mut verts = Vec::new();
    for (idx, c) in comps.iter().enumerate() {
        p += c.outputs.len() as u32;
        q += c.inputs.len() as u32;
        verts.extend_from_slice(&c.vertices);
        if idx + 1 == comps.len() {
            return None;
        }
        let outs_ok = comps[..=idx]
            .iter()
            .flat_map(|c| &c.outputs)
            .all(|&i| i < p);
        let ins_ok = comps[..=idx].iter().flat_map(|c| &c.inputs).all(|&j| j < q);
        if outs_ok && ins_ok {
            let left = restrict(m, &verts, 0..p, 0..q);
            let rest: Vec<u32> = (0..m.vertex_count() as u32)
                .filter(|v| !verts.contains(v))
                .collect();
            let right = restrict(m, &rest, p..m.outputs(), q..m.inputs());
            return Some((left, right));
        }
    }
    None
}

/// The sub-monomial on a union of components with the given leg ranges.
fn restrict(
    m: &Monomial,
    verts: &[u32],
    outs: std::ops::Range<u32>,
    ins: std::ops::Range<u32>,
) -> Monomial {
    let local = |u: u32| verts.iter().position(|&v| v == u).expect("closed") as u32;
    let map = |s: Source| match s {
        Source::Input(j) => Source::Input(j - ins.start),
        Source::Port(u, p) => Source::Port(local(u), p),
    };
    let raw = RawGraph {
        outputs: outs.len() as u32,
        inputs: ins.len() as u32,
        vertices: verts.iter().map(|&v| m.vertices()[v as usize]).collect(),
        feeds: verts
            .iter()
            .map(|&v| m.feeds(v as usize).iter().map(|&s| map(s)).collect())
            .collect(),
        outs: outs.map(|i| map(m.outs()[i as usize])).collect(),
    };
    canonicalize(&raw).expect("restriction of a valid graph").0
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Searches for `m = frac(A_1..A_l / B_1..B_k)` with vertices on both sides,
/// trying smaller upper parts first.
pub fn fraction_split(m: &Monomial) -> Option<(Vec<Monomial>, Vec<Monomial>)> {
    let nv = m.vertex_count();
    if nv < 2 {
        return None;
    }
    let cons = m.consumers();
    let succ: Vec<u32> = (0..nv)
        .map(|v| {
            cons.port[v].iter().fold(0u32, |acc, s| match *s {
                Sink::Port(w, _) => acc | (1 << w),
                Sink::Output(_) => acc,
            })
        })
        .collect();
    let full: u32 = if nv == 32 { u32::MAX } else { (1 << nv) - 1 };
    let mut masks: Vec<u32> = (1..full)
        .filter(|&t| (0..nv).all(|v| t & (1 << v) == 0 || succ[v] & !t == 0))
        .collect();
    masks.sort_by_key(|t| (t.count_ones(), *t));
    masks.into_iter().find_map(|t| try_cut(m, t))
}

fn try_cut(m: &Monomial, top: u32) -> Option<(Vec<Monomial>, Vec<Monomial>)> {
    let nv = m.vertex_count();
    let (mo, ni) = (m.outputs() as usize, m.inputs() as usize);
    let in_top = |v: u32| top & (1 << v) != 0;
    // Upper side: vertices of `top` and output legs, the latter at nv + i.
    let mut up = Dsu((0..nv + mo).collect());
    for v in 0..nv as u32 {
        if !in_top(v) {
            continue;
        }
        for s in m.feeds(v as usize) {
            if let Source::Port(u, _) = *s {
                if in_top(u) {
                    up.union(v as usize, u as usize);
                }
            }
        }
    }
    for (i, s) in m.outs().iter().enumerate() {
        if let Source::Port(u, _) = *s {
            if in_top(u) {
                up.union(nv + i, u as usize);
            }
        }
    }
    // Lower side: the other vertices and input legs at nv + j.
    let mut down = Dsu((0..nv + ni).collect());
    for v in 0..nv as u32 {
        if in_top(v) {
            continue;
        }
        for s in m.feeds(v as usize) {
            match *s {
                Source::Port(u, _) => down.union(v as usize, u as usize),
                Source::Input(j) => down.union(v as usize, nv + j as usize),
            }
        }
    }
    let a_of_leg: Vec<usize> = (0..mo).map(|i| up.find(nv + i)).collect();
    let b_of_leg: Vec<usize> = (0..ni).map(|j| down.find(nv + j)).collect();
    let a_roots = contiguous_blocks(&a_of_leg)?;
    let b_roots = contiguous_blocks(&b_of_leg)?;
    let (l, k) = (a_roots.len(), b_roots.len());
    let a_index = |root: usize| a_roots.iter().position(|&r| r == root);
    let b_index = |root: usize| b_roots.iter().position(|&r| r == root);
    let b_of_source = |s: Source, down: &mut Dsu| match s {
        Source::Input(j) => b_index(down.find(nv + j as usize)),
        Source::Port(u, _) => b_index(down.find(u as usize)),
    };
    // wire[r][j]: the lower producer feeding numerator r from denominator j.
    let mut wire: Vec<Vec<Option<Source>>> = vec![vec![None; k]; l];
    // Position of each cut wire among the inputs of its numerator.
    let mut cut_sink: Vec<(Sink, usize)> = Vec::new();
    let mut record = |r: usize, j: usize, s: Source, sink: Sink| -> Option<()> {
        if wire[r][j].replace(s).is_some() {
            return None;
        }
        cut_sink.push((sink, j));
        Some(())
    };
    for v in 0..nv as u32 {
        if !in_top(v) {
            continue;
        }
        let r = a_index(up.find(v as usize))?;
        for (p, &s) in m.feeds(v as usize).iter().enumerate() {
            let lower = match s {
                Source::Port(u, _) => !in_top(u),
                Source::Input(_) => true,
            };
            if lower {
                let j = b_of_source(s, &mut down)?;
                record(r, j, s, Sink::Port(v, p as u32))?;
            }
        }
    }
    for (i, &s) in m.outs().iter().enumerate() {
        let lower = match s {
            Source::Port(u, _) => !in_top(u),
            Source::Input(_) => true,
        };
        if lower {
            let r = a_index(a_of_leg[i])?;
            let j = b_of_source(s, &mut down)?;
            record(r, j, s, Sink::Output(i as u32))?;
        }
    }
    if wire.iter().flatten().any(Option::is_none) {
        return None;
    }
    let cut_of = |sink: Sink| cut_sink.iter().find(|c| c.0 == sink).map(|c| c.1);

    // Numerators.
    let mut nums = Vec::with_capacity(l);
    for &root in &a_roots {
        let verts: Vec<u32> = (0..nv as u32)
            .filter(|&v| in_top(v) && up.find(v as usize) == root)
            .collect();
        let local = |u: u32| verts.iter().position(|&w| w == u).expect("member") as u32;
        let legs: Vec<usize> = (0..mo).filter(|&i| a_of_leg[i] == root).collect();
        let feeds = verts
            .iter()
            .map(|&v| {
                m.feeds(v as usize)
                    .iter()
                    .enumerate()
                    .map(|(p, &s)| match cut_of(Sink::Port(v, p as u32)) {
                        Some(j) => Source::Input(j as u32),
                        None => match s {
                            Source::Port(u, q) => Source::Port(local(u), q),
                            Source::Input(_) => unreachable!("inputs are cut wires"),
                        },
                    })
                    .collect()
            })
            .collect();
        let outs = legs
            .iter()
            .map(|&i| match cut_of(Sink::Output(i as u32)) {
                Some(j) => Source::Input(j as u32),
                None => match m.outs()[i] {
                    Source::Port(u, q) => Source::Port(local(u), q),
                    Source::Input(_) => unreachable!(),
                },
            })
            .collect();
        let raw = RawGraph {
            outputs: legs.len() as u32,
            inputs: k as u32,
            vertices: verts.iter().map(|&v| m.vertices()[v as usize]).collect(),
            feeds,
            outs,
        };
        nums.push(canonicalize(&raw).ok()?.0);
    }
    // Denominators.
    let mut dens = Vec::with_capacity(k);
    for (j, &root) in b_roots.iter().enumerate() {
        let verts: Vec<u32> = (0..nv as u32)
            .filter(|&v| !in_top(v) && down.find(v as usize) == root)
            .collect();
        let legs: Vec<u32> = (0..ni as u32)
            .filter(|&t| b_of_leg[t as usize] == root)
            .collect();
        let first = legs[0];
        let local = |s: Source| match s {
            Source::Port(u, q) => Source::Port(
                verts.iter().position(|&w| w == u).expect("member") as u32,
                q,
            ),
            Source::Input(t) => Source::Input(t - first),
        };
        let raw = RawGraph {
            outputs: l as u32,
            inputs: legs.len() as u32,
            vertices: verts.iter().map(|&v| m.vertices()[v as usize]).collect(),
            feeds: verts
                .iter()
                .map(|&v| m.feeds(v as usize).iter().map(|&s| local(s)).collect())
                .collect(),
            outs: (0..l)
                .map(|r| local(wire[r][j].expect("complete")))
                .collect(),
        };
        dens.push(canonicalize(&raw).ok()?.0);
    }
    Some((nums, dens))
}

/// Distinct labels in order of first appearance, provided each label
/// occupies one contiguous run.
fn contiguous_blocks(labels: &[usize]) -> Option<Vec<usize>> {
    let mut roots: Vec<usize> = Vec::new();
    for (i, &x) in labels.iter().enumerate() {
        if i == 0 || labels[i - 1] != x {
            if roots.contains(&x) {
                return None;
            }
            roots.push(x);
        }
    }
    Some(roots)
}

/// Removes a vertex all of whose outputs are legs and expresses `m` as a
/// permuted layer over the rest.
fn peel(m: &Monomial) -> Expr {
    let cons = m.consumers();
    let v = (0..m.vertex_count())
        .find(|&v| cons.port[v].iter().all(|s| matches!(s, Sink::Output(_))))
        .expect("a DAG has a sink vertex");
    let g: Generator = m.vertices()[v];
    let v32 = v as u32;
    let others: Vec<u32> = (0..m.vertex_count() as u32).filter(|&u| u != v32).collect();
    let local = |s: Source| match s {
        Source::Input(j) => Source::Input(j),
        Source::Port(u, p) => Source::Port(if u > v32 { u - 1 } else { u }, p),
    };
    let rest_legs: Vec<u32> = (0..m.outputs())
        .filter(|&i| !matches!(m.outs()[i as usize], Source::Port(u, _) if u == v32))
        .collect();
    let mut outs: Vec<Source> = m.feeds(v).iter().map(|&s| local(s)).collect();
    outs.extend(rest_legs.iter().map(|&i| local(m.outs()[i as usize])));
    let raw = RawGraph {
        outputs: outs.len() as u32,
        inputs: m.inputs(),
        vertices: others.iter().map(|&u| m.vertices()[u as usize]).collect(),
        feeds: others
            .iter()
            .map(|&u| m.feeds(u as usize).iter().map(|&s| local(s)).collect())
            .collect(),
        outs,
    };
    let below = canonicalize(&raw).expect("peeling keeps validity").0;
    // Layer output p goes to output leg sigma(p).
    let mut sigma: Vec<u32> = (0..g.outputs)
        .map(|p| match cons.port[v][p as usize] {
            Sink::Output(i) => i + 1,
            Sink::Port(..) => unreachable!("sink vertex"),
        })
        .collect();
    sigma.extend(rest_legs.iter().map(|&i| i + 1));
    let r = m.outputs() - g.outputs;
    let xi = Expr::at(ExprKind::Xi(g.outputs, g.inputs));
    let mut layer = if r == 0 {
        xi
    } else {
        Expr::at(ExprKind::Horiz(
            Box::new(xi),
            Box::new(Expr::at(ExprKind::Id(r))),
        ))
    };
    if sigma.iter().enumerate().any(|(i, &x)| x != i as u32 + 1) {
        let width = g.inputs + r;
        layer = Expr::at(ExprKind::Act(sigma, Box::new(layer), (1..=width).collect()));
    }
    if below.is_identity() {
        return layer;
    }
    Expr::at(ExprKind::Vert(Box::new(layer), Box::new(express(&below))))
}

/// Orientation of the printed form relative to the canonical monomial.
fn expression_sign(m: &Monomial, e: &Expr) -> i32 {
    let x = elaborate("", e).expect("printer output elaborates");
    let c = x.coeff(m);
    debug_assert_eq!(x.len(), 1, "printer output is a single monomial");
    if c.is_negative() {
        -1
    } else {
        1
    }
}

/// Term language rendering of a monomial with the sign it denotes.
pub fn express_signed(m: &Monomial) -> (Expr, i32) {
    let e = express(m);
    let s = expression_sign(m, &e);
    (e, s)
}

/// Prints an element one term per line, each line starting with its sign.
/// The zero element prints as `zero(m,n)`.
pub fn print_element(x: &Element) -> String {
    if x.is_zero() {
        let (m, n) = x.biarity();
        return format!("zero({m},{n})\n");
    }
    let mut out = String::new();
    for (mono, c) in x.iter() {
        let (e, s) = express_signed(mono);
        let c = if s < 0 { -c.clone() } else { c.clone() };
        out.push_str(if c.is_negative() { "- " } else { "+ " });
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&format_coeff(&a));
            out.push(' ');
        }
        let mut body = String::new();
        write_expr(&mut body, &e, 1);
        out.push_str(&body);
        out.push('\n');
    }
    out
}

/// The printed form of a single monomial, ignoring orientation.
pub fn print_monomial(m: &Monomial) -> String {
    print_expr(&express(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_forms() {
        let ups = parse_element("xi(2,1) . xi(1,2)").unwrap();
        assert_eq!(ups.len(), 1);
        let bfly = parse_element("frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]").unwrap();
        assert_eq!(bfly.biarity(), (2, 2));
        let d = parse_element("xi(1,2) o_1 xi(1,2) - xi(1,2) o_2 xi(1,2)").unwrap();
        assert_eq!(d.len(), 2);
        let half = parse_element("1/2 xi(2,2) + 1/2 xi(2,2)").unwrap();
        assert_eq!(half, Element::xi(2, 2).unwrap());
    }

    #[test]
    fn reports_positions() {
        let err = parse_element("xi(1,2) .\n  xi(1,3)").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (1, 9)),
            e => panic!("unexpected {e:?}"),
        }
        let err = parse("xi(1,2) $").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 1,
                col: 9,
                ..
            }
        ));
        assert!(parse_element("xi(1,1)").is_err());
    }

    #[test]
    fn prints_special_shapes_readably() {
        let cases = [
            ("xi(2,1) . xi(1,2)", "+ xi(2,1) . xi(1,2)\n"),
            (
                "frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]",
                "+ frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]\n",
            ),
            ("xi(1,2) o_2 xi(1,2)", "+ xi(1,2) o_2 xi(1,2)\n"),
            ("xi(1,2) * xi(2,1)", "+ xi(1,2) * xi(2,1)\n"),
            ("id^3", "+ id^3\n"),
        ];
        for (src, want) in cases {
            assert_eq!(print_element(&parse_element(src).unwrap()), want, "{src}");
        }
    }

    #[test]
    fn round_trips_odd_signs_and_permutations() {
        let srcs = [
            "- 3/4 xi(2,2) * xi(2,2) + xi(2,2) * id * id . id * xi(2,2) * id",
            "xi(2,2) * xi(1,3) . xi(2,1) * xi(3,1)",
            "act[(2,1); xi(2,2); (2,1)]",
            "act[(3,1,2); id^3; (1,2,3)]",
            "(id * xi(1,2)) . (xi(2,1) * id)",
            "frac[xi(2,2) xi(1,2) / xi(2,1) xi(2,2)] - 2 frac[xi(1,2) xi(2,2) / xi(2,2) xi(2,1)]",
            "zero(2,3)",
        ];
        for src in srcs {
            let x = parse_element(src).unwrap();
            let printed = print_element(&x);
            assert_eq!(parse_element(&printed).unwrap(), x, "{src} -> {printed}");
        }
    }
}

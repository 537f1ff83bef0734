// SPDX-License-Identifier: Apache-2.0

//! Command line front end. [`run`] parses arguments and writes to the
//! given streams; exit codes are 0 on success, 1 when a check or
//! computation fails and 2 on usage errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::json;

use crate::differential::{
    codim1_term_count, d0_generator, extend_derivation, generators_up_to, recorded_differential,
    verify_square_zero, DifferentialTable, TableDerivation, D0,
};
use crate::error::Error;
use crate::gradings::grades;
use crate::linalg::homology;
use crate::perturbation::{
    genus_part, seed_base_cases, solve_through, validate_structure, PerturbationState,
};
use crate::prop_algebra::Element;
use crate::serial::{
    element_from_json, element_from_text, element_to_graphviz, element_to_json, element_to_text,
    table_from_json, table_to_json,
};
use crate::special_elements::{
    cd_instance_12_21, cd_instance_21_11, cd_instance_21_21, check_cd_relation, enumerate_special,
    random_cd_instance,
};
use crate::syntax::{parse_element, print_element, print_monomial};
use crate::term_graph::Generator;

#[derive(Parser, Debug)]
#[command(
    name = "propmodel",
    version,
    about = "Exact computations in the free resolution of the bialgebra PROP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DotFormat {
    Graphviz,
    Document,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the canonical monomial basis of S(m,n).
    Basis {
        m: u32,
        n: u32,
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long)]
        genus: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Allow biarities beyond the tested size range.
        #[arg(long)]
        force: bool,
    },
    /// Dimensions of S(m,n) for m <= max-m, n <= max-n.
    Dims {
        #[arg(long, default_value_t = 3)]
        max_m: u32,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        /// Refine by (degree, genus).
        #[arg(long)]
        strata: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        force: bool,
    },
    /// Degree, genus, path grading and vertex count of each term.
    Grade {
        /// Expression, `-` for stdin or `@file`. JSON and text documents are accepted too.
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply d0.
    D0 {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply the full differential from the recorded table or `--table`.
    Dfull {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// JSON table written by `solve-pert --emit`.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run checks. With no check selected, runs `--square-zero`.
    Verify {
        /// d0 squares to zero on all generators with m+n <= max-arity.
        #[arg(long)]
        square_zero: bool,
        /// The recorded (or `--table`) full differential squares to zero.
        #[arg(long)]
        recorded: bool,
        /// S(m,n) has no d0-homology in positive degrees, for small m, n.
        #[arg(long)]
        acyclic: bool,
        /// Printed and random (c;d)-relations.
        #[arg(long)]
        cd_relations: bool,
        #[arg(long, default_value_t = 6)]
        max_arity: u32,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Build the perturbed differential through m+n = max-arity.
    SolvePert {
        #[arg(long, default_value_t = 6)]
        max_arity: u32,
        /// Write the table as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Number of terms of the differential of each generator.
    Fvector {
        #[arg(long, default_value_t = 6)]
        max_arity: u32,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Render an element as Graphviz DOT, or as the round-trippable graph document.
    ExportDot {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value_t = DotFormat::Graphviz)]
        format: DotFormat,
    },
    /// d0-homology of S(m,n) by degree and genus.
    Homology {
        m: u32,
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        force: bool,
    },
}

/// A failure with its exit code.
struct Exit {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit {
        code: 2,
        msg: msg.into(),
    }
}

fn failure(msg: impl Into<String>) -> Exit {
    Exit {
        code: 1,
        msg: msg.into(),
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::ArityMismatch { .. } | Error::InvalidGenerator(..) => {
                usage(e.to_string())
            }
            _ => failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        failure(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

/// Whether enumerating `S(m,n)` is known to be cheap.
pub fn enumeration_is_small(m: u32, n: u32) -> bool {
    let (lo, total) = (m.min(n), m + n);
    total <= 7 || (lo == 2 && total <= 8) || (lo == 1 && total <= 11)
}

const SIZE_NOTE: &str =
    "measured sizes: S(1,11) = 518859 (47 s), S(2,6) = 66879, S(3,4) = 117747; \
S(4,4) exceeded 16 GB; pass --force to try anyway";

fn guard(m: u32, n: u32, force: bool) -> Result<(), Exit> {
    if m == 0 || n == 0 {
        return Err(usage("biarity entries must be positive"));
    }
    if !force && !enumeration_is_small(m, n) {
        return Err(usage(format!(
            "S({m},{n}) is beyond the tested size range; {SIZE_NOTE}"
        )));
    }
    Ok(())
}

fn read_element(src: &str) -> Result<Element, Exit> {
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else if let Some(path) = src.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
    } else {
        src.to_string()
    };
    let t = text.trim_start();
    let parsed = if t.starts_with('{') {
        element_from_json(t)
    } else if t.starts_with("propmodel-element") {
        element_from_text(t)
    } else {
        parse_element(&text)
    };
    parsed.map_err(|e| usage(e.to_string()))
}

fn write_element(out: Out, x: &Element, format: Format) -> Result<(), Exit> {
    match format {
        Format::Text => write!(out, "{}", print_element(x))?,
        Format::Json => writeln!(out, "{}", element_to_json(x))?,
        Format::Csv => return Err(usage("csv output is not available for elements")),
    }
    Ok(())
}

fn load_table(path: &Option<PathBuf>) -> Result<DifferentialTable, Exit> {
    match path {
        None => Ok(recorded_differential()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            table_from_json(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_basis(
    out: Out,
    m: u32,
    n: u32,
    degree: Option<i64>,
    genus: Option<u64>,
    format: Format,
    force: bool,
) -> Result<(), Exit> {
    guard(m, n, force)?;
    let table = enumerate_special(m, n);
    let keep = |(d, g): (i64, u64)| degree.is_none_or(|x| x == d) && genus.is_none_or(|x| x == g);
    let rows: Vec<_> = table
        .strata()
        .iter()
        .filter(|(k, _)| keep(**k))
        .flat_map(|(&(d, g), v)| v.iter().map(move |x| (d, g, x)))
        .collect();
    match format {
        Format::Text => {
            for (_, _, x) in rows {
                writeln!(out, "{}", print_monomial(x))?;
            }
        }
        Format::Csv => {
            writeln!(out, "degree,genus,expression")?;
            for (d, g, x) in rows {
                writeln!(out, "{d},{g},\"{}\"", print_monomial(x))?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(d, g, x)| {
                    let e = Element::from_monomial((*x).clone());
                    json!({
                        "degree": d,
                        "genus": g,
                        "expression": print_monomial(x),
                        "graph": serde_json::from_str::<serde_json::Value>(&element_to_json(&e)).expect("valid json"),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string(&items).expect("json"))?;
        }
    }
    Ok(())
}

fn cmd_dims(
    out: Out,
    max_m: u32,
    max_n: u32,
    strata: bool,
    format: Format,
    force: bool,
) -> Result<(), Exit> {
    for m in 1..=max_m {
        for n in 1..=max_n {
            guard(m, n, force)?;
        }
    }
    let mut rows = Vec::new();
    for m in 1..=max_m {
        for n in 1..=max_n {
            rows.push(((m, n), enumerate_special(m, n)));
        }
    }
    match format {
        Format::Csv if strata => {
            writeln!(out, "m,n,degree,genus,dim")?;
            for ((m, n), t) in &rows {
                for ((d, g), v) in t.strata() {
                    writeln!(out, "{m},{n},{d},{g},{}", v.len())?;
                }
            }
        }
        Format::Csv => {
            writeln!(out, "m,n,dim")?;
            for ((m, n), t) in &rows {
                writeln!(out, "{m},{n},{}", t.len())?;
            }
        }
        Format::Text => {
            for ((m, n), t) in &rows {
                write!(out, "S({m},{n}) {}", t.len())?;
                if strata {
                    for ((d, g), v) in t.strata() {
                        write!(out, " ({d},{g})={}", v.len())?;
                    }
                }
                writeln!(out)?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|((m, n), t)| {
                    let s: Vec<_> = t
                        .strata()
                        .iter()
                        .map(|((d, g), v)| json!({"degree": d, "genus": g, "dim": v.len()}))
                        .collect();
                    json!({"biarity": [m, n], "dim": t.len(), "strata": s})
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string(&items).expect("json"))?;
        }
    }
    Ok(())
}

fn cmd_grade(out: Out, src: &str, format: Format) -> Result<(), Exit> {
    let x = read_element(src)?;
    let rows: Vec<_> = x
        .iter()
        .map(|(m, _)| (print_monomial(m), grades(m)))
        .collect();
    match format {
        Format::Text => {
            for (e, g) in &rows {
                let line = format!(
                    "degree {}, genus {}, pth {}, vertices {}",
                    g.degree, g.genus, g.pth, g.vertices
                );
                if rows.len() == 1 {
                    writeln!(out, "{line}")?;
                } else {
                    writeln!(out, "{e}: {line}")?;
                }
            }
        }
        Format::Csv => {
            writeln!(out, "expression,degree,genus,pth,vertices")?;
            for (e, g) in &rows {
                writeln!(
                    out,
                    "\"{e}\",{},{},{},{}",
                    g.degree, g.genus, g.pth, g.vertices
                )?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(e, g)| {
                    json!({"expression": e, "degree": g.degree, "genus": g.genus,
                           "pth": g.pth.to_string(), "vertices": g.vertices})
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string(&items).expect("json"))?;
        }
    }
    Ok(())
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    out: Out,
    square_zero: bool,
    recorded: bool,
    acyclic: bool,
    cd: bool,
    max_arity: u32,
    table: &Option<PathBuf>,
    force: bool,
) -> Result<(), Exit> {
    let square_zero = square_zero || !(recorded || acyclic || cd);
    if max_arity > 9 && !force {
        return Err(usage(
            "--max-arity above 9 is untested; pass --force to try anyway",
        ));
    }
    let mut all_ok = true;
    if square_zero {
        let gens = generators_up_to(max_arity);
        let r = verify_square_zero(&D0::new(), &gens)?;
        writeln!(
            out,
            "d0 squares to zero on {} generators with m+n <= {max_arity}: {}",
            gens.len(),
            status(r.is_ok())
        )?;
        for (g, res) in &r.failures {
            writeln!(out, "  {g}: {} residual terms", res.len())?;
        }
        all_ok &= r.is_ok();
    }
    if recorded {
        let t = load_table(table)?;
        let gens: Vec<Generator> = t
            .generators()
            .filter(|g| g.outputs + g.inputs <= max_arity)
            .collect();
        let r = verify_square_zero(&TableDerivation::new(&t), &gens)?;
        writeln!(
            out,
            "full differential squares to zero on {} entries: {}",
            gens.len(),
            status(r.is_ok())
        )?;
        for (g, res) in &r.failures {
            writeln!(out, "  {g}: {} residual terms", res.len())?;
        }
        all_ok &= r.is_ok();
    }
    if acyclic {
        for total in 3..=max_arity {
            for m in 1..total {
                let n = total - m;
                if !force && !enumeration_is_small(m, n) {
                    writeln!(out, "S({m},{n}): skipped, beyond the tested size range")?;
                    continue;
                }
                let h = homology(&enumerate_special(m, n))?;
                let ok = h.keys().all(|&(d, _)| d <= 0);
                writeln!(
                    out,
                    "S({m},{n}) acyclic in positive degrees: {}",
                    status(ok)
                )?;
                all_ok &= ok;
            }
        }
    }
    if cd {
        let mut ok = check_cd_relation(&cd_instance_21_11())?;
        for x in enumerate_special(2, 2).iter() {
            ok &= check_cd_relation(&cd_instance_21_21(x.clone()))?;
            ok &= check_cd_relation(&cd_instance_12_21(x.clone()))?;
        }
        writeln!(out, "printed (c;d)-relations: {}", status(ok))?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut random_ok = true;
        for _ in 0..200 {
            random_ok &= check_cd_relation(&random_cd_instance(&mut rng, 3))?;
        }
        writeln!(out, "200 random (c;d)-relations: {}", status(random_ok))?;
        all_ok &= ok && random_ok;
    }
    if all_ok {
        Ok(())
    } else {
        Err(failure("verification failed"))
    }
}

fn cmd_solve(out: Out, max_arity: u32, emit: &Option<PathBuf>, force: bool) -> Result<(), Exit> {
    if max_arity > 7 && !force {
        return Err(usage(
            "m+n > 7 is beyond desk scale: m+n = 6 solves in well under a second, m+n = 7 takes \
             about 4.5 minutes with systems up to 22200 x 28800, and S(4,4) alone exceeded 16 GB; \
             pass --force to try anyway",
        ));
    }
    let mut state = PerturbationState::new();
    seed_base_cases(&mut state);
    let log = solve_through(&mut state, max_arity)?;
    for (g, steps) in &log {
        let parts: Vec<String> = steps
            .iter()
            .map(|s| format!("genus {}: {} terms", s.genus, s.solution_terms))
            .collect();
        writeln!(
            out,
            "{g}: {}",
            if parts.is_empty() {
                "d = d0".into()
            } else {
                parts.join(", ")
            }
        )?;
    }
    let violations = validate_structure(&state, max_arity.max(5))?;
    writeln!(out, "violations: {}", violations.len())?;
    for v in &violations {
        writeln!(out, "  {}: {}", v.generator, v.message)?;
    }
    if let Some(path) = emit {
        std::fs::write(path, table_to_json(&state.table))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(failure("validation failed"))
    }
}

fn cmd_fvector(
    out: Out,
    max_arity: u32,
    table: &Option<PathBuf>,
    format: Format,
) -> Result<(), Exit> {
    let t = load_table(table)?;
    if format == Format::Csv {
        writeln!(out, "m,n,terms,genus_counts")?;
    }
    let mut items = Vec::new();
    for g in generators_up_to(max_arity) {
        let entry = match t.get(g) {
            Some(e) => e.clone(),
            None if g.outputs == 1 || g.inputs == 1 => d0_generator(g),
            None => continue,
        };
        let count = codim1_term_count(
            &TableDerivation::new(&{
                let mut one = DifferentialTable::new();
                one.insert(g, entry.clone(), crate::differential::Provenance::Record);
                one
            }),
            g,
        )?;
        let by_genus: Vec<usize> = (0..=((g.outputs - 1) * (g.inputs - 1)) as u64)
            .map(|k| genus_part(&entry, k).len())
            .collect();
        match format {
            Format::Text => writeln!(out, "{g}: {count} terms, by genus {by_genus:?}")?,
            Format::Csv => writeln!(
                out,
                "{},{},{count},{}",
                g.outputs,
                g.inputs,
                by_genus
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            )?,
            Format::Json => items.push(
                json!({"generator": [g.outputs, g.inputs], "terms": count, "by_genus": by_genus}),
            ),
        }
    }
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string(&items).expect("json"))?;
    }
    Ok(())
}

fn cmd_homology(out: Out, m: u32, n: u32, format: Format, force: bool) -> Result<(), Exit> {
    guard(m, n, force)?;
    let table = enumerate_special(m, n);
    let h = homology(&table)?;
    match format {
        Format::Text => {
            for (&(d, g), v) in table.strata() {
                writeln!(
                    out,
                    "degree {d}, genus {g}: {} cells, homology {}",
                    v.len(),
                    h.get(&(d, g)).unwrap_or(&0)
                )?;
            }
            let ok = h.keys().all(|&(d, _)| d <= 0);
            writeln!(
                out,
                "acyclic in positive degrees: {}",
                if ok { "yes" } else { "no" }
            )?;
        }
        Format::Csv => {
            writeln!(out, "degree,genus,cells,homology")?;
            for (&(d, g), v) in table.strata() {
                writeln!(out, "{d},{g},{},{}", v.len(), h.get(&(d, g)).unwrap_or(&0))?;
            }
        }
        Format::Json => {
            let items: Vec<_> = table
                .strata()
                .iter()
                .map(|(&(d, g), v)| json!({"degree": d, "genus": g, "cells": v.len(), "homology": h.get(&(d, g)).unwrap_or(&0)}))
                .collect();
            writeln!(out, "{}", serde_json::to_string(&items).expect("json"))?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli, out: Out) -> Result<(), Exit> {
    match cli.command {
        Command::Basis {
            m,
            n,
            degree,
            genus,
            format,
            force,
        } => cmd_basis(out, m, n, degree, genus, format, force),
        Command::Dims {
            max_m,
            max_n,
            strata,
            format,
            force,
        } => cmd_dims(out, max_m, max_n, strata, format, force),
        Command::Grade { expr, format } => cmd_grade(out, &expr, format),
        Command::D0 { expr, format } => {
            let x = read_element(&expr)?;
            write_element(out, &extend_derivation(&D0::new(), &x)?, format)
        }
        Command::Dfull {
            expr,
            table,
            format,
        } => {
            let x = read_element(&expr)?;
            let t = load_table(&table)?;
            write_element(
                out,
                &extend_derivation(&TableDerivation::new(&t), &x)?,
                format,
            )
        }
        Command::Verify {
            square_zero,
            recorded,
            acyclic,
            cd_relations,
            max_arity,
            table,
            force,
        } => cmd_verify(
            out,
            square_zero,
            recorded,
            acyclic,
            cd_relations,
            max_arity,
            &table,
            force,
        ),
        Command::SolvePert {
            max_arity,
            emit,
            force,
        } => cmd_solve(out, max_arity, &emit, force),
        Command::Fvector {
            max_arity,
            table,
            format,
        } => cmd_fvector(out, max_arity, &table, format),
        Command::ExportDot { expr, format } => {
            let x = read_element(&expr)?;
            match format {
                DotFormat::Graphviz => write!(out, "{}", element_to_graphviz(&x))?,
                DotFormat::Document => write!(out, "{}", element_to_text(&x))?,
            }
            Ok(())
        }
        Command::Homology {
            m,
            n,
            format,
            force,
        } => cmd_homology(out, m, n, format, force),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Exit { code, msg }) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

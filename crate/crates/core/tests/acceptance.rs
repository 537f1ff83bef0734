// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! measured time and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use propmodel::differential::{
    codim1_term_count, d0_generator, extend_derivation, generators_up_to, recorded_differential,
    verify_square_zero, TableDerivation, D0,
};
use propmodel::gradings::{
    check_path_genus_inequality, genus, grades, is_half_prop_monomial, path_grading,
};
use propmodel::linalg::homology;
use propmodel::perturbation::{
    compare_entries, generators_of_level, seed_base_cases, solve_through, validate_structure,
    PerturbationState,
};
use propmodel::prop_algebra::{comp_at_input, fraction_mono, hcomp, vcomp_mono};
use propmodel::serial::{
    element_from_json, element_from_text, element_to_json, element_to_text, table_to_json,
};
use propmodel::special_elements::{
    cd_instance_12_21, cd_instance_21_11, cd_instance_21_21, check_cd_relation, enumerate_special,
    random_cd_instance, special_monomials, vertex_bound,
};
use propmodel::syntax::{parse_element, print_element};
use propmodel::{Element, Generator, Monomial};

/// Every element produced by criteria 1 to 9, replayed by criterion 10.
static EMITTED: Mutex<Vec<Element>> = Mutex::new(Vec::new());

fn emit(xs: impl IntoIterator<Item = Element>) {
    EMITTED.lock().unwrap().extend(xs);
}

fn emit_monos<'a>(xs: impl IntoIterator<Item = &'a Monomial>) {
    emit(xs.into_iter().map(|m| Element::from_monomial(m.clone())));
}

type Outcome = Result<String, String>;

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gen(m: u32, n: u32) -> Generator {
    Generator::new(m, n).unwrap()
}

fn parse(s: &str) -> Element {
    parse_element(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn single(e: &Element) -> Monomial {
    assert_eq!(e.len(), 1);
    e.terms().keys().next().unwrap().clone()
}

fn c1_d0_square_zero() -> Outcome {
    let gens = generators_up_to(8);
    let report = verify_square_zero(&D0::new(), &gens).map_err(|e| e.to_string())?;
    let images: Vec<Element> = gens.iter().map(|&g| d0_generator(g)).collect();
    for x in &images {
        let twice = extend_derivation(&D0::new(), x).map_err(|e| e.to_string())?;
        emit([twice]);
    }
    emit(images);
    ensure(report.is_ok(), || {
        format!("{} generators leave residue", report.failures.len())
    })?;
    Ok(format!("{} generators with m+n <= 8", gens.len()))
}

fn c2_d0_examples() -> Outcome {
    let cases = [
        ((1, 2), "zero(1,2)"),
        ((2, 1), "zero(2,1)"),
        ((2, 2), "xi(2,1) . xi(1,2)"),
        ((1, 3), "xi(1,2) o_1 xi(1,2) - xi(1,2) o_2 xi(1,2)"),
        (
            (1, 4),
            "xi(1,3) o_1 xi(1,2) - xi(1,3) o_2 xi(1,2) + xi(1,3) o_3 xi(1,2) \
             - xi(1,2) o_1 xi(1,3) - xi(1,2) o_2 xi(1,3)",
        ),
    ];
    for ((m, n), want) in cases {
        let got = d0_generator(gen(m, n));
        ensure(got == parse(want), || {
            format!("d0 xi({m},{n}) = {}", print_element(&got))
        })?;
        emit([got]);
    }
    Ok("xi(1,2), xi(2,1), xi(2,2), xi(1,3), xi(1,4)".into())
}

fn c3_recorded_table() -> Outcome {
    let t = recorded_differential();
    let d = TableDerivation::new(&t);
    let gens = [gen(2, 2), gen(2, 3), gen(3, 2), gen(3, 3), gen(2, 4)];
    let report = verify_square_zero(&d, &gens).map_err(|e| e.to_string())?;
    for &g in &gens {
        emit([extend_derivation(&d, t.get(g).unwrap()).map_err(|e| e.to_string())?]);
    }
    emit(t.iter().map(|(_, e, _)| e.clone()));
    ensure(report.is_ok(), || {
        let bad: Vec<String> = report
            .failures
            .iter()
            .map(|(g, r)| format!("{g}: {} terms", r.len()))
            .collect();
        bad.join(", ")
    })?;
    Ok("d^2 = 0 on xi(2,2), xi(2,3), xi(3,2), xi(3,3), xi(2,4)".into())
}

fn c4_term_counts() -> Outcome {
    let t = recorded_differential();
    let full = TableDerivation::new(&t);
    let d0 = D0::new();
    let want = [
        ((2, 2), 2),
        ((2, 3), 7),
        ((3, 3), 30),
        ((2, 4), 21),
        ((1, 3), 2),
        ((1, 4), 5),
    ];
    let mut seen = Vec::new();
    for ((m, n), count) in want {
        let got = if m == 1 {
            codim1_term_count(&d0, gen(m, n))
        } else {
            codim1_term_count(&full, gen(m, n))
        }
        .map_err(|e| e.to_string())?;
        ensure(got == count, || {
            format!("xi({m},{n}) has {got} terms, expected {count}")
        })?;
        seen.push(got.to_string());
    }
    Ok(format!("counts {}", seen.join("/")))
}

/// A connected monomial of biarity `(a,b)`, either special or a vertical
/// composite of two special ones through a random middle arity.
fn random_operand(rng: &mut ChaCha8Rng, a: u32, b: u32, allow_vertical: bool) -> Monomial {
    loop {
        let pick = |rng: &mut ChaCha8Rng, p: u32, q: u32| {
            let list = special_monomials(p, q);
            list[rng.gen_range(0..list.len())].clone()
        };
        let x = if allow_vertical && rng.gen_bool(0.4) {
            let c = rng.gen_range(1..=2);
            vcomp_mono(&pick(rng, a, c), &pick(rng, c, b)).unwrap().0
        } else {
            pick(rng, a, b)
        };
        if x.vertex_count() <= 5 {
            return x;
        }
    }
}

/// A random `(k,l)`-fraction with operands of at most five vertices.
/// Returns the fraction and the genus predicted from its operands.
fn random_fraction(rng: &mut ChaCha8Rng, allow_vertical: bool) -> (Monomial, u64) {
    let k = rng.gen_range(1..=3);
    let l = rng.gen_range(1..=3);
    let nums: Vec<Monomial> = (0..l)
        .map(|_| {
            let a = rng.gen_range(1..=2);
            random_operand(rng, a, k, allow_vertical)
        })
        .collect();
    let dens: Vec<Monomial> = (0..k)
        .map(|_| {
            let b = rng.gen_range(1..=2);
            random_operand(rng, l, b, allow_vertical)
        })
        .collect();
    let predicted =
        (k as u64 - 1) * (l as u64 - 1) + nums.iter().chain(&dens).map(genus).sum::<u64>();
    let x = fraction_mono(
        &nums.iter().collect::<Vec<_>>(),
        &dens.iter().collect::<Vec<_>>(),
    )
    .unwrap()
    .0;
    (x, predicted)
}

/// Grows a monomial by random fractions, operadic compositions and tensor
/// products.
fn random_composite(rng: &mut ChaCha8Rng) -> Monomial {
    let mut x = random_fraction(rng, false).0;
    for _ in 0..rng.gen_range(0..3) {
        let y = random_fraction(rng, false).0;
        x = match rng.gen_range(0..2) {
            0 if y.outputs() == 1 => {
                let i = rng.gen_range(1..=x.inputs());
                let e = comp_at_input(&Element::from_monomial(x), i, &Element::from_monomial(y))
                    .unwrap();
                single(&e)
            }
            _ => single(&hcomp(
                &Element::from_monomial(x),
                &Element::from_monomial(y),
            )),
        };
    }
    x
}

fn c5_gradings() -> Outcome {
    let g = |s: &str| grades(&single(&parse(s)));
    let upsilon = g("xi(2,1) . xi(1,2)");
    let butterfly = g("frac[xi(1,2) xi(1,2) / xi(2,1) xi(2,1)]");
    let comb_src = "(id * xi(1,2)) . (xi(2,1) * id)";
    let comb = g(comb_src);
    let four = BigUint::from(4u32);
    ensure(upsilon.genus == 0 && upsilon.pth == four, || {
        format!("upsilon {upsilon:?}")
    })?;
    ensure(butterfly.genus == 1 && butterfly.pth == four, || {
        format!("butterfly {butterfly:?}")
    })?;
    ensure(comb.genus == 0 && comb.pth == BigUint::from(3u32), || {
        format!("comb {comb:?}")
    })?;
    ensure(!is_half_prop_monomial(&single(&parse(comb_src))), || {
        "comb is not half-PROP".into()
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fractions: Vec<(Monomial, u64)> =
        (0..500).map(|_| random_fraction(&mut rng, true)).collect();
    for (x, predicted) in &fractions {
        ensure(genus(x) == *predicted, || {
            format!("fraction genus {} != {predicted}", genus(x))
        })?;
    }
    let composites: Vec<Monomial> = (0..500).map(|_| random_composite(&mut rng)).collect();
    for x in &composites {
        ensure(check_path_genus_inequality(x), || {
            format!(
                "pth bound fails on {}",
                print_element(&Element::from_monomial(x.clone()))
            )
        })?;
    }
    emit_monos(fractions.iter().map(|(x, _)| x));
    emit_monos(&composites);
    Ok("reference values; fraction genus on 500 fractions; pth bound on 500 fraction/o_i/tensor composites".into())
}

fn c6_special_structure() -> Outcome {
    let s22 = enumerate_special(2, 2);
    let strata: Vec<((i64, u64), usize)> =
        s22.strata().iter().map(|(k, v)| (*k, v.len())).collect();
    ensure(
        s22.len() == 3 && strata == vec![((0, 0), 1), ((0, 1), 1), ((1, 0), 1)],
        || format!("S(2,2) strata {strata:?}"),
    )?;
    let mut biarities = Vec::new();
    for m in 1..=9u32 {
        for n in 1..=9 / m {
            biarities.push((m, n));
        }
    }
    let total: usize = biarities
        .par_iter()
        .map(|&(m, n)| -> Result<usize, String> {
            let t = enumerate_special(m, n);
            let cap = ((m - 1) * (n - 1)) as u64;
            let mn = BigUint::from(m * n);
            for x in t.iter() {
                let g = genus(x);
                ensure(path_grading(x) == mn, || format!("S({m},{n}): pth != mn"))?;
                ensure(g <= cap, || format!("S({m},{n}): genus {g} above {cap}"))?;
                ensure(x.vertex_count() <= vertex_bound(m, n), || {
                    format!("S({m},{n}): vertex bound")
                })?;
                if (m, n) != (1, 1) {
                    ensure((g == 0) == is_half_prop_monomial(x), || {
                        format!("S({m},{n}): half-PROP mismatch")
                    })?;
                }
            }
            Ok(t.len())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    for (m, n) in biarities.iter().filter(|(m, n)| m + n <= 7) {
        emit_monos(enumerate_special(*m, *n).iter());
    }
    Ok(format!(
        "{} monomials over {} biarities with mn <= 9",
        total,
        biarities.len()
    ))
}

fn c7_acyclicity() -> Outcome {
    let list = [
        (1, 2),
        (2, 1),
        (1, 3),
        (3, 1),
        (2, 2),
        (1, 4),
        (4, 1),
        (2, 3),
        (3, 2),
        (3, 3),
    ];
    for (m, n) in list {
        let h = homology(&enumerate_special(m, n)).map_err(|e| e.to_string())?;
        ensure(h.keys().all(|&(d, _)| d <= 0), || {
            format!("S({m},{n}) homology {h:?}")
        })?;
    }
    Ok(format!("H_d = 0 for d > 0 on {} biarities", list.len()))
}

fn solve_once() -> Result<PerturbationState, String> {
    let mut state = PerturbationState::new();
    seed_base_cases(&mut state);
    solve_through(&mut state, 6).map_err(|e| e.to_string())?;
    Ok(state)
}

fn c8_perturbation() -> Outcome {
    let a = solve_once()?;
    let b = solve_once()?;
    let violations = validate_structure(&a, 6).map_err(|e| e.to_string())?;
    ensure(violations.is_empty(), || {
        format!(
            "{} violations, first: {:?}",
            violations.len(),
            violations[0]
        )
    })?;
    let (ja, jb) = (table_to_json(&a.table), table_to_json(&b.table));
    ensure(ja == jb, || "two runs differ".into())?;
    let record = recorded_differential();
    let mut differing = Vec::new();
    for g in generators_of_level(6)
        .into_iter()
        .filter(|&g| record.get(g).is_some())
    {
        let c = compare_entries(&a.table, &record, g).map_err(|e| e.to_string())?;
        if !c.identical() {
            let parts: Vec<String> = c
                .by_genus
                .iter()
                .map(|(k, n, cyc)| format!("g{k}:{n}{}", if *cyc { "c" } else { "" }))
                .collect();
            differing.push(format!("{g} {}", parts.join(" ")));
        }
    }
    emit(a.table.iter().map(|(_, e, _)| e.clone()));
    Ok(format!(
        "0 violations, deterministic ({} bytes); vs record: {}",
        ja.len(),
        if differing.is_empty() {
            "identical".into()
        } else {
            differing.join("; ")
        }
    ))
}

fn c9_cd_relations() -> Outcome {
    let mut printed = vec![cd_instance_21_11()];
    for x in enumerate_special(2, 2).iter() {
        printed.push(cd_instance_21_21(x.clone()));
        printed.push(cd_instance_12_21(x.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let random: Vec<_> = (0..200).map(|_| random_cd_instance(&mut rng, 3)).collect();
    for (i, inst) in printed.iter().chain(&random).enumerate() {
        ensure(check_cd_relation(inst).map_err(|e| e.to_string())?, || {
            format!("instance {i} fails")
        })?;
        let up = inst.up().map_err(|e| e.to_string())?.0;
        emit_monos([&up]);
    }
    Ok(format!(
        "{} printed and {} random instances",
        printed.len(),
        random.len()
    ))
}

fn c10_round_trip() -> Outcome {
    let all = std::mem::take(&mut *EMITTED.lock().unwrap());
    all.par_iter().try_for_each(|x| -> Result<(), String> {
        let printed = print_element(x);
        let back = parse_element(&printed).map_err(|e| format!("{e} in\n{printed}"))?;
        ensure(&back == x, || format!("print/parse changes\n{printed}"))?;
        ensure(
            element_from_json(&element_to_json(x)).ok().as_ref() == Some(x),
            || format!("json round trip\n{printed}"),
        )?;
        ensure(
            element_from_text(&element_to_text(x)).ok().as_ref() == Some(x),
            || format!("text round trip\n{printed}"),
        )
    })?;
    // The same path through the command line front end.
    let record = recorded_differential();
    for g in record.generators() {
        let src = format!("xi({},{})", g.outputs, g.inputs);
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = propmodel::cli::run(["propmodel", "dfull", &src], &mut out, &mut err);
        ensure(code == 0, || format!("dfull {src} exited {code}"))?;
        let x = parse_element(&String::from_utf8(out).unwrap()).map_err(|e| e.to_string())?;
        ensure(
            x == extend_derivation(&TableDerivation::new(&record), &Element::generator(g)).unwrap(),
            || format!("dfull {src}"),
        )?;
        let mut doc = Vec::new();
        let code = propmodel::cli::run(
            [
                "propmodel",
                "export-dot",
                &print_element(&x),
                "--format",
                "document",
            ],
            &mut doc,
            &mut err,
        );
        ensure(code == 0, || "export-dot".into())?;
        ensure(
            element_from_text(&String::from_utf8(doc).unwrap()).ok() == Some(x),
            || format!("cli round trip {src}"),
        )?;
    }
    Ok(format!(
        "{} elements through text, JSON and graph documents; CLI dfull/export-dot",
        all.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "d0 squares to zero, m+n <= 8",
            Duration::from_secs(60),
            c1_d0_square_zero,
        ),
        ("d0 examples", Duration::from_secs(1), c2_d0_examples),
        (
            "recorded full differential squares to zero",
            Duration::from_secs(60),
            c3_recorded_table,
        ),
        ("term counts", Duration::from_secs(10), c4_term_counts),
        ("gradings", Duration::from_secs(30), c5_gradings),
        (
            "special element structure, mn <= 9",
            Duration::from_secs(300),
            c6_special_structure,
        ),
        (
            "acyclicity witness",
            Duration::from_secs(600),
            c7_acyclicity,
        ),
        (
            "perturbation solver through m+n = 6",
            Duration::from_secs(900),
            c8_perturbation,
        ),
        ("(c;d)-relations", Duration::from_secs(30), c9_cd_relations),
        (
            "round trip of every emitted element",
            Duration::from_secs(30),
            c10_round_trip,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > *limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

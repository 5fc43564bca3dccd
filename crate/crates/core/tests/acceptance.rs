//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always show.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use tasseq::algebra::{
    hom_parametrization, indecomposables, AlgebraHom, AlgebraPresentation, ConstraintStatus,
    Flavor, ModuleViaHom,
};
use tasseq::chart::{json, parse_json};
use tasseq::cohomology::{andre_quillen, cotriple_cohomology, hochschild, OracleSettings};
use tasseq::exactlin::{subquotient, AbelianGroupDescriptor as G};
use tasseq::graded::DegreeWindow;
use tasseq::resolutions::{regularity_check, RegularityClass};
use tasseq::scenarios::{build_scenario, heisenberg_presentation, Params, SCENARIOS};
use tasseq::specseq::{
    abutment_diagonal, collapse_bound, obstruction_report, run_pages, Value,
};
use tasseq::IntMatrix;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn w(a: i64, b: i64) -> DegreeWindow {
    DegreeWindow::new(a, b).unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn poly(gens: &[(&str, i64)]) -> Arc<AlgebraPresentation> {
    Arc::new(AlgebraPresentation::free(Flavor::Commutative, gens).unwrap())
}

fn hopf_map() -> AlgebraHom {
    let b = Arc::new(
        AlgebraPresentation::from_names(
            Flavor::Commutative,
            &[("e", -2)],
            &[vec![(q(1), vec!["e", "e"])]],
        )
        .unwrap(),
    );
    let y = poly(&[("y", -3)]);
    AlgebraHom::trivial(b, y)
}

fn su_params(n: usize) -> Params {
    let mut p = Params::new();
    p.insert("n".into(), n.to_string());
    p
}

fn c1_hopf_chart() -> Outcome {
    let sc = build_scenario("hopf", &Params::new(), Some((0, 6)), Some(3)).map_err(|e| e.to_string())?;
    let p = &sc.page;
    let origin = p.entry(0, 0).ok_or("no (0,0) entry")?;
    ensure!(origin.value.is_point(), "E2^(0,0) is {}", origin.value);
    let e11 = p.entry(1, 1).map(|e| e.value.clone());
    ensure!(e11 == Some(Value::Dim(1)), "E2^(1,1) is {e11:?}");
    Ok("E2^(0,0) = single point, E2^(1,1) = Q".into())
}

fn c2_hopf_oracle() -> Outcome {
    let eps = hopf_map();
    let coeff = ModuleViaHom::new(eps.clone(), w(-20, 20));
    let fast = andre_quillen(eps.source(), &coeff, 2, w(1, 6)).map_err(|e| e.to_string())?;
    let settings = OracleSettings {
        degree_bound: 10,
        ..Default::default()
    };
    let slow = cotriple_cohomology(&eps, 2, w(1, 6), &settings).map_err(|e| e.to_string())?;
    let mut n = 0;
    for s in 0..=2 {
        for t in 1..=6 {
            let (a, b) = (fast.dim(s, t), slow.dim(s, t));
            ensure!(a == b, "(s={s}, t={t}): cotangent {a}, oracle {b}");
            ensure!(!slow.get(s, t).unwrap().window_limited, "oracle window-limited at ({s},{t})");
            n += 1;
        }
    }
    Ok(format!("{n} bidegrees agree exactly"))
}

fn c3_su_n_vanishing() -> Outcome {
    for n in 1..=3usize {
        let gens: Vec<(String, i64)> = (1..=n).map(|i| (format!("x{i}"), 2 * i as i64)).collect();
        let named: Vec<(&str, i64)> = gens.iter().map(|(a, d)| (a.as_str(), *d)).collect();
        let r = poly(&named);
        let coeff = ModuleViaHom::new(AlgebraHom::identity(r.clone()), w(0, 40));
        let hh = hochschild(&r, &coeff, n + 2, w(0, 12), &OracleSettings::default())
            .map_err(|e| e.to_string())?;
        for s in n + 1..=n + 2 {
            for t in 0..=12 {
                ensure!(hh.dim(s, t) == 0, "n={n}: HH^{s} at t={t} is {}", hh.dim(s, t));
            }
        }
        ensure!((0..=12).any(|t| hh.dim(n, t) > 0), "n={n}: HH^{n} vanishes too");
        let sc = build_scenario("su-n", &su_params(n), Some((0, 12)), None).map_err(|e| e.to_string())?;
        let bound = collapse_bound(&sc.page, None).page;
        let want = if n <= 1 { 2 } else { n };
        ensure!(bound == Some(want), "n={n}: collapse bound {bound:?}, want E_{want}");
    }
    Ok("HH^{s>n} = 0 on t in [0,12]; collapse at E2, E2, E3 for n = 1, 2, 3".into())
}

/// Monomials of degree `2i` in generators of degrees `2, 4, ..., 2n`:
/// partitions of `i` into parts at most `n`.
fn partitions(i: usize, n: usize) -> usize {
    let mut ways = vec![0usize; i + 1];
    ways[0] = 1;
    for part in 1..=n {
        for k in part..=i {
            ways[k] += ways[k - part];
        }
    }
    ways[i]
}

fn c4_su_n_hom_set() -> Outcome {
    let mut seen = Vec::new();
    for n in 1..=3usize {
        let sc = build_scenario("su-n", &su_params(n), Some((0, 12)), None).map_err(|e| e.to_string())?;
        let Some(Value::HomSet {
            parameters,
            constraints,
        }) = sc.page.entry(0, 0).map(|e| e.value.clone())
        else {
            return Err(format!("n={n}: E2^(0,0) is not a hom set"));
        };
        ensure!(constraints == ConstraintStatus::IdenticallyZero, "n={n}: constrained");
        let counts: Vec<usize> = (1..=n)
            .map(|i| {
                parameters
                    .iter()
                    .filter(|p| p.split(':').next() == Some(format!("x{i}").as_str()))
                    .count()
            })
            .collect();
        let want: Vec<usize> = (1..=n).map(|i| partitions(i, n)).collect();
        ensure!(counts == want, "n={n}: counts {counts:?}, monomial counts {want:?}");
        seen.push(format!("{counts:?}"));
    }
    Ok(format!("parameter counts {}", seen.join(", ")))
}

fn c5_koszul_vs_oracle() -> Outcome {
    let mut n = 0;
    for gens in [vec![("x1", 2)], vec![("x1", 2), ("x2", 4)]] {
        let r = poly(&gens);
        let coeff = ModuleViaHom::new(AlgebraHom::identity(r.clone()), w(0, 30));
        let koszul = hochschild(&r, &coeff, 3, w(0, 8), &OracleSettings::default())
            .map_err(|e| e.to_string())?;
        let assoc = Arc::new(r.as_associative());
        let eps = AlgebraHom::identity(assoc);
        let settings = OracleSettings {
            degree_bound: 8,
            ..Default::default()
        };
        let oracle = cotriple_cohomology(&eps, 2, w(0, 8), &settings).map_err(|e| e.to_string())?;
        for s in 1..=2 {
            for t in 0..=8 {
                let (a, b) = (koszul.dim(s + 1, t), oracle.dim(s, t));
                ensure!(a == b, "{gens:?} s={s} t={t}: Koszul HH^{} = {a}, oracle H^{s} = {b}", s + 1);
                n += 1;
            }
        }
    }
    Ok(format!("{n} comparisons agree exactly"))
}

fn c6_s_sigma() -> Outcome {
    let sc = build_scenario("s-sigma", &Params::new(), Some((0, 4)), Some(4)).map_err(|e| e.to_string())?;
    let nonzero: Vec<_> = sc.page.nonzero().map(|(k, e)| (*k, e.value.clone())).collect();
    ensure!(
        nonzero == vec![((1, 1), Value::Group(G::cyclic(2)))],
        "nonzero entries {nonzero:?}"
    );
    let a = abutment_diagonal(&sc.page, 0);
    let pieces: Vec<_> = a.pieces.iter().map(|p| p.value.clone()).collect();
    ensure!(pieces == vec![Value::Group(G::cyclic(2))], "stem 0 is {pieces:?}");
    Ok("only E2^(1,1) = Z/2; stem 0 = [Z/2]".into())
}

/// `H^s(C₂; ℤ)` in closed form: trivial action or sign action.
fn c2_closed_form(s: usize, sign: bool) -> G {
    match (sign, s) {
        (false, 0) => G::free(1),
        (false, s) if s % 2 == 0 => G::cyclic(2),
        (true, s) if s % 2 == 1 => G::cyclic(2),
        _ => G::zero(),
    }
}

fn c7_ku() -> Outcome {
    let sc = build_scenario("ku-c2", &Params::new(), Some((0, 8)), Some(5)).map_err(|e| e.to_string())?;
    let mut n = 0;
    for (s, t) in sc.page.window.spots() {
        let want = if t % 2 == 0 {
            c2_closed_form(s, (t / 2) % 2 == 1)
        } else {
            G::zero()
        };
        let got = match sc.page.entry(s, t).map(|e| &e.value) {
            Some(Value::Group(g)) => g.clone(),
            None => G::zero(),
            Some(v) => return Err(format!("({s},{t}) holds {v}")),
        };
        ensure!(got == want, "E2^({s},{t}) = {got}, closed form {want}");
        n += 1;
    }
    let pages = run_pages(&sc.page, &sc.differentials).map_err(|e| e.to_string())?;
    let e4 = pages.iter().find(|p| p.r == 4).ok_or("no E4")?;
    ensure!(e4.entry(3, 6).is_none(), "E4^(3,6) = {}", e4.entry(3, 6).unwrap().value);
    let e404 = e4.entry(0, 4).map(|e| e.value.clone());
    ensure!(e404 == Some(Value::Group(G::free(1))), "E4^(0,4) = {e404:?}");
    // the surviving subgroup is 2Z inside Z
    let sq = subquotient(
        &G::zero(),
        &G::free(1),
        &G::cyclic(2),
        &IntMatrix::zeros(1, 0),
        &IntMatrix::from_dense(&[vec![z(1)]]).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(sq.generators == vec![vec![z(2)]], "kernel generated by {:?}", sq.generators);
    Ok(format!("{n} E2 entries match the periodic resolution; E4^(3,6) = 0, E4^(0,4) = 2Z"))
}

fn c8_smooth() -> Outcome {
    let b = poly(&[("x1", 2), ("x2", 4), ("x3", 6)]);
    let reg = regularity_check(&b, w(-30, 30));
    ensure!(reg.class == RegularityClass::Smooth, "regularity {:?}", reg.class);
    let coeff = ModuleViaHom::new(AlgebraHom::identity(b.clone()), w(0, 40));
    let aq = andre_quillen(&b, &coeff, 3, w(1, 10)).map_err(|e| e.to_string())?;
    for s in 1..=3 {
        for t in 1..=10 {
            ensure!(aq.dim(s, t) == 0, "AQ^{s} at t={t} is {}", aq.dim(s, t));
        }
    }
    Ok("smooth; AQ^{s>0} = 0 for t in [1,10]".into())
}

fn c9_heisenberg() -> Outcome {
    let h = heisenberg_presentation().map_err(|e| e.to_string())?;
    let target = AlgebraPresentation::from_names(
        Flavor::Commutative,
        &[("u", -2)],
        &[vec![(q(1), vec!["u", "u"])]],
    )
    .unwrap();
    let hp = hom_parametrization(&h, &target, w(-12, 12));
    ensure!(hp.affine_dimension() == Some(2), "affine dimension {:?}", hp.affine_dimension());
    ensure!(hp.constraints == ConstraintStatus::IdenticallyZero, "{:?}", hp.constraints);
    let ind = indecomposables(&h, -2).map_err(|e| e.to_string())?;
    ensure!(ind == 2, "indecomposables in degree -2: {ind}");
    Ok("affine dimension 2, constraints identically zero, 2 indecomposables in degree -2".into())
}

fn c10_free() -> Outcome {
    let sc = build_scenario("free", &Params::new(), None, None).map_err(|e| e.to_string())?;
    let off: Vec<_> = sc.page.nonzero().filter(|((s, _), _)| *s > 0).map(|(k, _)| *k).collect();
    ensure!(off.is_empty(), "entries off the 0-line: {off:?}");
    let rep = obstruction_report(&sc.page, &sc.differentials).map_err(|e| e.to_string())?;
    ensure!(rep.bijective() == Some(true), "edge map bijective: {:?}", rep.bijective());
    let bound = collapse_bound(&sc.page, None).page;
    ensure!(bound == Some(2), "collapse bound {bound:?}");
    Ok("concentrated on s = 0; edge map a bijection; collapse at E2".into())
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(&S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner
        .run(&strategy, |v| check(&v))
        .map(|_| format!("{name} x{cases}"))
        .map_err(|e| format!("{name}: {e}"))
}

fn c11_properties() -> Outcome {
    let parts = [
        run_property("d∘d = 0 on oracle complexes", 200, oracle_case(), check_oracle_square_zero)?,
        run_property("SNF reconstruction", 500, small_int_matrix(), |m| check_snf(m))?,
        run_property("page monotonicity", 200, chart_case(), check_monotone)?,
        run_property("Q cyclic vanishing", 200, cyclic_case(), check_cyclic_rational)?,
    ];
    Ok(parts.join("; "))
}

fn cli_json(name: &str) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tasseq::cli::run(["e2", "scenario", name, "--format", "json"], &mut out, &mut err);
    ensure!(code == 0, "{name}: exit {code}: {}", String::from_utf8_lossy(&err));
    Ok(out)
}

fn c12_cli_round_trip() -> Outcome {
    for name in SCENARIOS {
        let first = cli_json(name)?;
        let second = cli_json(name)?;
        ensure!(first == second, "{name}: output differs between runs");
        let text = String::from_utf8(first).map_err(|e| e.to_string())?;
        let page = parse_json(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(json(&page) == text, "{name}: render(parse(x)) != x");
        let sc = build_scenario(name, &Params::new(), None, None).map_err(|e| e.to_string())?;
        let direct = sc.page.clone().with_differentials(
            sc.differentials.iter().filter(|d| d.r == 2).cloned().collect(),
        );
        ensure!(page == direct, "{name}: parsed page differs from the computed one");
    }
    Ok(format!("{} scenarios round-trip byte-identically", SCENARIOS.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Hopf chart", c1_hopf_chart),
        ("Hopf oracle equivalence", c2_hopf_oracle),
        ("su-n vanishing and collapse", c3_su_n_vanishing),
        ("su-n E2^(0,0) dimensions", c4_su_n_hom_set),
        ("Koszul vs oracle", c5_koszul_vs_oracle),
        ("S^sigma chart", c6_s_sigma),
        ("KU^hC2 chart", c7_ku),
        ("smooth vanishing", c8_smooth),
        ("Heisenberg E2^(0,0)", c9_heisenberg),
        ("free-source collapse", c10_free),
        ("property suites", c11_properties),
        ("CLI round-trip", c12_cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

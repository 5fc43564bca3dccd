//! Strategies and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use tasseq::algebra::{AlgebraHom, AlgebraPresentation, ConstraintStatus, Flavor};
use tasseq::cohomology::{cyclic_group_cohomology, CyclicModule};
use tasseq::exactlin::{smith_normal_form, AbelianGroupDescriptor, SparseMatrix};
use tasseq::resolutions::{cotriple_moore_complex, CotripleData, ResolutionError};
use tasseq::specseq::{turn_page, Entry, InjectedDifferential, Page, PageWindow, Value};
use tasseq::{IntMatrix, Integer, RatMatrix, Rational};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

pub fn z(n: i64) -> Integer {
    Integer::from(n)
}

// ---------------------------------------------------------------- oracle

#[derive(Debug, Clone)]
pub struct OracleCase {
    pub commutative: bool,
    pub degrees: Vec<i64>,
    pub square_relation: bool,
    pub identity: bool,
    pub target_degree: i64,
    pub t: i64,
}

pub fn oracle_case() -> impl Strategy<Value = OracleCase> {
    (
        any::<bool>(),
        prop::collection::vec(1i64..=3, 1..=2),
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
        1i64..=3,
        -2i64..=4,
    )
        .prop_map(|(commutative, degrees, negative, square_relation, identity, td, t)| {
            let sign = if negative { -1 } else { 1 };
            OracleCase {
                commutative,
                degrees: degrees.into_iter().map(|d| d * sign).collect(),
                square_relation,
                identity,
                target_degree: td * sign,
                t,
            }
        })
}

/// Builds the cotriple complex for the case and checks `δ∘δ = 0` block by
/// block. Cases over the size budget are skipped.
pub fn check_oracle_square_zero(c: &OracleCase) -> Result<(), TestCaseError> {
    let flavor = if c.commutative {
        Flavor::Commutative
    } else {
        Flavor::Associative
    };
    let names: Vec<String> = (0..c.degrees.len()).map(|i| format!("g{i}")).collect();
    let gens: Vec<(&str, i64)> = names
        .iter()
        .zip(&c.degrees)
        .map(|(n, d)| (n.as_str(), *d))
        .collect();
    let rels = if c.square_relation {
        vec![vec![(q(1), vec!["g0", "g0"])]]
    } else {
        Vec::new()
    };
    let source = Arc::new(AlgebraPresentation::from_names(flavor, &gens, &rels).unwrap());
    let eps = if c.identity {
        AlgebraHom::identity(source)
    } else {
        let target =
            Arc::new(AlgebraPresentation::free(flavor, &[("u", c.target_degree)]).unwrap());
        AlgebraHom::trivial(source, target)
    };
    let data = CotripleData::new(eps, 6).with_s_max(2).with_budget(4000);
    let oc = match cotriple_moore_complex(&data, c.t) {
        Ok(oc) => oc,
        Err(ResolutionError::OracleTooLarge { .. }) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
    };
    let cx = &oc.complex;
    for s in 0..=1 {
        let (Some(first), Some(second)) = (cx.differential(s), cx.differential(s + 1)) else {
            continue;
        };
        let Some(term) = cx.term(s) else { continue };
        for d in term.dims().keys() {
            let comp = second.block(*d).mul(&first.block(*d)).unwrap();
            prop_assert!(comp.is_zero(), "δ∘δ ≠ 0 at s={s}, degree {d} for {c:?}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- SNF

pub fn small_int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
    })
}

fn dense(m: &[Vec<i64>]) -> IntMatrix {
    let rows: Vec<Vec<Integer>> = m.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect();
    IntMatrix::from_dense(&rows).unwrap()
}

/// `left · m · right` is the diagonal of invariant factors, the transforms
/// are invertible over ℤ, and each factor divides the next.
pub fn check_snf(m: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let a = dense(m);
    let f = smith_normal_form(&a);
    let lhs = f.left.mul(&a).unwrap().mul(&f.right).unwrap();
    prop_assert_eq!(&lhs, &f.diagonal);
    prop_assert_eq!(
        f.left.mul(&f.left_inverse).unwrap(),
        SparseMatrix::identity(a.rows())
    );
    prop_assert_eq!(
        f.right.mul(&f.right_inverse).unwrap(),
        SparseMatrix::identity(a.cols())
    );
    // reconstruct m from the factorization
    let back = f
        .left_inverse
        .mul(&f.diagonal)
        .unwrap()
        .mul(&f.right_inverse)
        .unwrap();
    prop_assert_eq!(&back, &a);
    for (i, d) in f.invariant_factors.iter().enumerate() {
        prop_assert!(*d > z(0));
        prop_assert_eq!(f.diagonal.get(i, i), d.clone());
        if let Some(next) = f.invariant_factors.get(i + 1) {
            prop_assert!((next % d).is_zero());
        }
    }
    prop_assert_eq!(f.diagonal.nnz(), f.invariant_factors.len());
    Ok(())
}

// ---------------------------------------------------------------- pages

#[derive(Debug, Clone)]
pub struct ChartCase {
    /// dims on lines 0..=3 at t = 3..=6
    pub dims: Vec<Vec<usize>>,
    /// one entry per (source line 0 or 1, t): matrix entries in [−2, 2]
    pub matrices: Vec<Vec<i64>>,
}

pub fn chart_case() -> impl Strategy<Value = ChartCase> {
    (
        prop::collection::vec(prop::collection::vec(0usize..=3, 4), 4),
        prop::collection::vec(prop::collection::vec(-2i64..=2, 9), 8),
    )
        .prop_map(|(dims, matrices)| ChartCase { dims, matrices })
}

fn chart_window() -> PageWindow {
    PageWindow {
        s_max: 3,
        t_min: 0,
        t_max: 8,
    }
}

/// A ℚ-chart with `d₂` from lines 0 and 1; no two differentials compose.
pub fn chart(c: &ChartCase) -> (Page, Vec<InjectedDifferential>) {
    let mut p = Page::new(2, chart_window());
    for (s, row) in c.dims.iter().enumerate() {
        for (k, &d) in row.iter().enumerate() {
            let t = 3 + k as i64;
            p.set(s, t, Value::Dim(d), "random").unwrap();
        }
    }
    let mut diffs = Vec::new();
    for (i, entries) in c.matrices.iter().enumerate() {
        let s = i / 4;
        let t = 3 + (i % 4) as i64;
        let tt = t + 1;
        if tt > 6 {
            continue;
        }
        let rows = c.dims[s + 2][(tt - 3) as usize];
        let cols = c.dims[s][(t - 3) as usize];
        let matrix = (0..rows)
            .map(|r| (0..cols).map(|k| q(entries[(r * 3 + k) % 9])).collect())
            .collect();
        diffs.push(InjectedDifferential::new(2, (s, t), matrix, "random"));
    }
    (p, diffs)
}

fn dim(p: &Page, s: usize, t: i64) -> usize {
    match p.entry(s, t).map(|e| &e.value) {
        Some(Value::Dim(d)) => *d,
        None => 0,
        Some(v) => panic!("unexpected {v}"),
    }
}

/// Every entry shrinks, and the total loss is twice the summed ranks.
pub fn check_monotone(c: &ChartCase) -> Result<(), TestCaseError> {
    let (p, diffs) = chart(c);
    let next = turn_page(&p, &diffs).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut lost = 0;
    for (s, t) in p.window.spots() {
        let (a, b) = (dim(&p, s, t), dim(&next, s, t));
        prop_assert!(b <= a, "({s},{t}) grew {a} -> {b}");
        lost += a - b;
    }
    let ranks: usize = diffs
        .iter()
        .map(|d| {
            let rows = d.matrix.len();
            let cols = d.matrix.first().map_or(0, Vec::len);
            let m = RatMatrix::from_triplets(
                rows,
                cols,
                d.matrix
                    .iter()
                    .enumerate()
                    .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.clone()))),
            )
            .unwrap();
            tasseq::exactlin::rank_fraction_free(&m)
        })
        .sum();
    prop_assert_eq!(lost, 2 * ranks);
    Ok(())
}

// ---------------------------------------------------------------- cyclic

#[derive(Debug, Clone)]
pub struct CyclicCase {
    pub order: u32,
    /// blocks: for C₂, ±1; for C₃, 1 or the 2×2 rotation
    pub blocks: Vec<bool>,
    /// elementary operations (i, j, k): row_i += k·row_j
    pub conjugators: Vec<(usize, usize, i64)>,
}

pub fn cyclic_case() -> impl Strategy<Value = CyclicCase> {
    (
        prop_oneof![Just(2u32), Just(3u32)],
        prop::collection::vec(any::<bool>(), 1..=3),
        prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..6),
    )
        .prop_map(|(order, blocks, conjugators)| CyclicCase {
            order,
            blocks,
            conjugators,
        })
}

fn rat_dense(rows: Vec<Vec<Rational>>) -> RatMatrix {
    RatMatrix::from_dense(&rows).unwrap()
}

pub fn cyclic_action(c: &CyclicCase) -> RatMatrix {
    let mut diag: Vec<(usize, usize, Rational)> = Vec::new();
    let mut n = 0;
    for &b in &c.blocks {
        match (c.order, b) {
            (2, true) => {
                diag.push((n, n, q(-1)));
                n += 1;
            }
            (3, true) => {
                // [[0, −1], [1, −1]]
                diag.push((n, n + 1, q(-1)));
                diag.push((n + 1, n, q(1)));
                diag.push((n + 1, n + 1, q(-1)));
                n += 2;
            }
            _ => {
                diag.push((n, n, q(1)));
                n += 1;
            }
        }
    }
    let d = RatMatrix::from_triplets(n, n, diag).unwrap();
    let mut p = RatMatrix::identity(n);
    let mut p_inv = RatMatrix::identity(n);
    for &(i, j, k) in &c.conjugators {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let e = |k: i64| {
            let mut rows = vec![vec![Rational::zero(); n]; n];
            for (r, row) in rows.iter_mut().enumerate() {
                row[r] = Rational::one();
            }
            rows[i][j] = q(k);
            rat_dense(rows)
        };
        p = e(k).mul(&p).unwrap();
        p_inv = p_inv.mul(&e(-k)).unwrap();
    }
    p.mul(&d).unwrap().mul(&p_inv).unwrap()
}

pub fn check_cyclic_rational(c: &CyclicCase) -> Result<(), TestCaseError> {
    let action = cyclic_action(c);
    let m = CyclicModule::new(c.order, action).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let h = cyclic_group_cohomology(&m, 4).unwrap();
    let invariant = c.blocks.iter().filter(|&&b| !b).count();
    prop_assert_eq!(h[0], invariant);
    prop_assert!(h[1..].iter().all(|&d| d == 0), "{h:?}");
    Ok(())
}

// ---------------------------------------------------------------- json

pub fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        (0usize..5).prop_map(Value::Dim),
        (0usize..3, prop::collection::vec(2u64..12, 0..3)).prop_map(|(f, t)| {
            Value::Group(AbelianGroupDescriptor::from_orders(f, t.into_iter().map(Integer::from)))
        }),
        Just(Value::unidentified()),
    ]
}

pub fn random_page() -> impl Strategy<Value = Page> {
    (
        2usize..5,
        prop::collection::vec((0usize..4, 0i64..7, value(), any::<bool>()), 0..12),
        0usize..3,
        any::<bool>(),
    )
        .prop_map(|(r, entries, params, constrained)| {
            let mut p = Page::new(
                r,
                PageWindow {
                    s_max: 3,
                    t_min: 0,
                    t_max: 6,
                },
            );
            p.insert(
                0,
                0,
                Entry {
                    value: Value::HomSet {
                        parameters: (0..params).map(|i| format!("g{i}:u")).collect(),
                        constraints: if constrained {
                            ConstraintStatus::Polynomials(vec!["g0:u^2".into()])
                        } else {
                            ConstraintStatus::IdenticallyZero
                        },
                    },
                    window_limited: false,
                    provenance: "random".into(),
                },
            )
            .unwrap();
            for (s, t, v, limited) in entries {
                if (s, t) == (0, 0) || !p.window.contains(s, t) {
                    continue;
                }
                p.insert(
                    s,
                    t,
                    Entry {
                        value: v,
                        window_limited: limited,
                        provenance: format!("entry {s},{t}"),
                    },
                )
                .unwrap();
            }
            p
        })
}

pub fn check_json_round_trip(p: &Page) -> Result<(), TestCaseError> {
    let text = tasseq::chart::json(p);
    let back = tasseq::chart::parse_json(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, p);
    prop_assert_eq!(tasseq::chart::json(&back), text);
    Ok(())
}

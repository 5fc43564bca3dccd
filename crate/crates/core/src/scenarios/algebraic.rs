use std::sync::Arc;

use num_traits::One;

use super::{Regime, Scenario, ScenarioError};
use crate::algebra::{
    hom_parametrization, AlgebraHom, AlgebraPresentation, Flavor, ModuleViaHom,
};
use crate::cohomology::{andre_quillen, cotriple_cohomology, hochschild, Method, OracleSettings};
use crate::graded::DegreeWindow;
use crate::resolutions::ResolutionError;
use crate::specseq::{Entry, InjectedDifferential, Page, PageWindow, Value};
use crate::Rational;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Koszul => "koszul",
        Method::Cotangent => "cotangent",
        Method::Derivations => "derivations",
        Method::CotripleOracle => "cotriple oracle",
    }
}

/// How far from the page window coefficient degrees get read.
fn reach(a: &AlgebraPresentation) -> i64 {
    let gens: i64 = a.generators().iter().map(|g| g.degree.abs()).sum();
    let rels: i64 = (0..a.relations().len())
        .map(|k| a.relation_degree(k).abs())
        .sum();
    gens + rels + 2
}

/// Generator images and relations only live in the source's own degrees.
fn hom_window(a: &AlgebraPresentation) -> Result<DegreeWindow, ScenarioError> {
    let top = a
        .generators()
        .iter()
        .map(|g| g.degree.abs())
        .chain((0..a.relations().len()).map(|k| a.relation_degree(k).abs()))
        .max()
        .unwrap_or(0);
    Ok(DegreeWindow::new(-top - 2, top + 2)?)
}

fn hom_set_entry(eps: &AlgebraHom, w: DegreeWindow) -> Entry {
    let hp = hom_parametrization(eps.source(), eps.target(), w);
    Entry {
        value: Value::HomSet {
            parameters: hp.parameters,
            constraints: hp.constraints,
        },
        window_limited: hp.window_limited,
        provenance: "hom set: generic generator images substituted into the relations".into(),
    }
}

/// `E₂` in an algebraic regime for `ε: source → target`: the hom set at
/// `(0,0)` and Hochschild or André–Quillen dimensions elsewhere.
pub fn algebraic_page(
    regime: Regime,
    eps: &AlgebraHom,
    window: PageWindow,
    settings: &OracleSettings,
) -> Result<Page, ScenarioError> {
    let source = eps.source().clone();
    let r = reach(&source);
    let cw = DegreeWindow::new(window.t_min - r, window.t_max + r)?;
    let tw = DegreeWindow::new(window.t_min, window.t_max)?;
    let coeff = ModuleViaHom::new(eps.clone(), cw);
    let mut page = Page::new(2, window);
    if window.contains(0, 0) {
        page.insert(0, 0, hom_set_entry(eps, hom_window(&source)?))?;
    }
    let mut over_budget = None;
    let (dims, offset, name) = match regime {
        Regime::Hochschild => {
            let dims = match hochschild(&source, &coeff, window.s_max + 1, tw, settings) {
                Err(crate::cohomology::CohomologyError::Resolution(
                    e @ ResolutionError::OracleTooLarge { .. },
                )) => {
                    // derivations still give the 0-line; higher rows stay unknown
                    over_budget = Some(e.to_string());
                    hochschild(&source, &coeff, 1, tw, settings)?
                }
                other => other?,
            };
            (dims, 1, "HH")
        }
        Regime::AndreQuillen => (andre_quillen(&source, &coeff, window.s_max, tw)?, 0, "AQ"),
        _ => unreachable!("not an algebraic regime"),
    };
    for (s, t) in window.spots() {
        if (s, t) == (0, 0) {
            continue;
        }
        let k = s + offset;
        let Some(d) = dims.get(k, t) else {
            if let Some(why) = &over_budget {
                page.set(s, t, Value::unidentified(), &format!("{name}^{k} not computed: {why}"))?;
            }
            continue;
        };
        page.insert(
            s,
            t,
            Entry {
                value: Value::Dim(d.dim),
                window_limited: d.window_limited,
                provenance: format!("{name}^{k} via {}", method_name(d.method)),
            },
        )?;
    }
    Ok(page)
}

fn polynomial(names: &[(String, i64)]) -> Result<Arc<AlgebraPresentation>, ScenarioError> {
    let gens: Vec<(&str, i64)> = names.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    Ok(Arc::new(AlgebraPresentation::free(Flavor::Commutative, &gens)?))
}

pub(super) fn su_n(n: usize, window: PageWindow) -> Result<Scenario, ScenarioError> {
    let gens: Vec<(String, i64)> = (1..=n).map(|i| (format!("x{i}"), 2 * i as i64)).collect();
    let r = polynomial(&gens)?;
    let eps = AlgebraHom::identity(r);
    let page = algebraic_page(Regime::Hochschild, &eps, window, &OracleSettings::default())?
        .with_vanishing_line(n - 1);
    Ok(Scenario {
        name: "su-n".into(),
        description: format!(
            "Self-maps of the polynomial ring Q[x1..x{n}], |xi| = 2i, as an associative \
             algebra; E2^(0,t) = Der, E2^(s,t) = HH^(s+1) for s > 0"
        ),
        regime: Regime::Hochschild,
        page,
        differentials: Vec::new(),
        collapse_note: Some(format!(
            "HH of a polynomial ring on {n} generators vanishes above degree {n}, so E2 \
             lies on lines 0..={}",
            n - 1
        )),
        epsilon: Some(eps),
    })
}

pub(super) fn bu(window: PageWindow) -> Result<Scenario, ScenarioError> {
    let k = (window.t_max / 2).max(1);
    let gens: Vec<(String, i64)> = (1..=k).map(|i| (format!("x{i}"), 2 * i)).collect();
    let b = polynomial(&gens)?;
    let eps = AlgebraHom::identity(b);
    let page = algebraic_page(Regime::AndreQuillen, &eps, window, &OracleSettings::default())?
        .with_vanishing_line(0);
    Ok(Scenario {
        name: "bu".into(),
        description: format!(
            "Self-maps of Q[x1, x2, ...], |xi| = 2i, truncated to the generators x1..x{k} \
             that fit the window, as a commutative algebra; E2^(s,t) = AQ^s"
        ),
        regime: Regime::AndreQuillen,
        page,
        differentials: Vec::new(),
        collapse_note: Some("the source is smooth, so AQ^s = 0 for s > 0".into()),
        epsilon: Some(eps),
    })
}

pub(super) fn free(generators: usize, window: PageWindow) -> Result<Scenario, ScenarioError> {
    let gens: Vec<(String, i64)> = (1..=generators)
        .map(|i| (format!("x{i}"), 2 * i as i64))
        .collect();
    let b = polynomial(&gens)?;
    let eps = AlgebraHom::identity(b);
    let page = algebraic_page(Regime::AndreQuillen, &eps, window, &OracleSettings::default())?
        .with_vanishing_line(0);
    Ok(Scenario {
        name: "free".into(),
        description: format!(
            "Maps out of the free commutative algebra on {generators} generator(s) (degrees \
             2, 4, ...) to itself via the identity"
        ),
        regime: Regime::AndreQuillen,
        page,
        differentials: Vec::new(),
        collapse_note: Some(
            "a free source splits its bar resolution, so E2 lies on the 0-line and the \
             sequence collapses at E2"
                .into(),
        ),
        epsilon: Some(eps),
    })
}

pub(super) fn hopf(window: PageWindow) -> Result<Scenario, ScenarioError> {
    let b = Arc::new(AlgebraPresentation::from_names(
        Flavor::Commutative,
        &[("e", -2)],
        &[vec![(Rational::one(), vec!["e", "e"])]],
    )?);
    let y = Arc::new(AlgebraPresentation::free(Flavor::Commutative, &[("y", -3)])?);
    let eps = AlgebraHom::trivial(b, y);
    let mut page = algebraic_page(Regime::AndreQuillen, &eps, window, &OracleSettings::default())?
        .with_vanishing_line(1);
    // only (0,0) and (1,1) are classical; the rest is computed here
    let derived: Vec<_> = page
        .entries()
        .filter(|(k, _)| **k != (0, 0) && **k != (1, 1))
        .map(|(k, e)| (*k, e.clone()))
        .collect();
    for ((s, t), mut e) in derived {
        e.provenance.push_str(" (derived)");
        page.insert(s, t, e)?;
    }
    Ok(Scenario {
        name: "hopf".into(),
        description: "Cochains: Q[e]/(e^2), |e| = -2, mapping to the exterior algebra on y, \
                      |y| = -3, by the trivial map; E2^(s,t) = AQ^s"
            .into(),
        regime: Regime::AndreQuillen,
        page,
        differentials: Vec::new(),
        collapse_note: Some(
            "the source is a complete intersection, so AQ^s = 0 for s > 1".into(),
        ),
        epsilon: Some(eps),
    })
}

/// Four generators `x, y` (degree −1) and `α, β` (degree −2) with the seven
/// quadratic relations of the cochains of the Heisenberg nilmanifold.
pub fn heisenberg_presentation() -> Result<AlgebraPresentation, ScenarioError> {
    let one = Rational::one;
    Ok(AlgebraPresentation::from_names(
        Flavor::Commutative,
        &[("x", -1), ("y", -1), ("alpha", -2), ("beta", -2)],
        &[
            vec![(one(), vec!["x", "y"])],
            vec![(one(), vec!["alpha", "alpha"])],
            vec![(one(), vec!["beta", "beta"])],
            vec![(one(), vec!["alpha", "beta"])],
            vec![(one(), vec!["x", "alpha"])],
            vec![(one(), vec!["y", "beta"])],
            vec![(one(), vec!["x", "beta"]), (one(), vec!["y", "alpha"])],
        ],
    )?)
}

pub(super) fn heisenberg(
    kill: &[String],
    r: Option<usize>,
    window: PageWindow,
) -> Result<Scenario, ScenarioError> {
    let h = Arc::new(heisenberg_presentation()?);
    let target = Arc::new(AlgebraPresentation::from_names(
        Flavor::Commutative,
        &[("u", -2)],
        &[vec![(Rational::one(), vec!["u", "u"])]],
    )?);
    let eps = AlgebraHom::trivial(h.clone(), target);
    let mut page = Page::new(2, window);
    for (s, t) in window.spots() {
        if (s, t) == (0, 0) {
            page.insert(0, 0, hom_set_entry(&eps, DegreeWindow::new(-12, 12)?))?;
        } else {
            page.set(s, t, Value::unidentified(), "not regular; only E2^(0,0) is computed")?;
        }
    }
    let mut differentials = Vec::new();
    if let Some(r) = r {
        if !kill.is_empty() {
            differentials.push(InjectedDifferential::obstruction(
                r,
                kill.to_vec(),
                "user-injected: the classes must support differentials because of Massey \
                 product relations; the page is not known",
            ));
        }
    }
    Ok(Scenario {
        name: "heisenberg".into(),
        description: "Cochains of the Heisenberg nilmanifold (x, y in degree -1; alpha, beta \
                      in degree -2; seven relations) mapping to Q[u]/(u^2), |u| = -2"
            .into(),
        regime: Regime::HomSetOnly,
        page,
        differentials,
        collapse_note: None,
        epsilon: Some(eps),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleComparison {
    pub s: usize,
    pub t: i64,
    pub page: usize,
    pub oracle: usize,
    pub window_limited: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub compared: Vec<OracleComparison>,
    /// Why no comparison was made, if none was.
    pub skipped: Option<String>,
}

impl OracleCheck {
    pub fn agrees(&self) -> bool {
        self.compared.iter().all(|c| c.page == c.oracle)
    }
}

/// Recomputes `E₂^{s,t}` for `s ≤ s_cap`, `1 ≤ t ≤ t_cap` from the cotriple
/// resolution and pairs the two answers. An oracle over budget is reported
/// as skipped rather than failed.
pub fn oracle_check(
    sc: &Scenario,
    settings: &OracleSettings,
    s_cap: usize,
    t_cap: i64,
) -> Result<OracleCheck, ScenarioError> {
    let skipped = |why: &str| OracleCheck {
        compared: Vec::new(),
        skipped: Some(why.to_string()),
    };
    let Some(eps) = &sc.epsilon else {
        return Ok(skipped("no algebra map to resolve"));
    };
    let eps = match sc.regime {
        Regime::AndreQuillen => eps.clone(),
        Regime::Hochschild => AlgebraHom::new(
            Arc::new(eps.source().as_associative()),
            eps.target().clone(),
            eps.images().to_vec(),
        )?,
        _ => return Ok(skipped("E2 is not identified by cotriple cohomology here")),
    };
    let w = sc.page.window;
    let s_hi = s_cap.min(w.s_max);
    let t_lo = w.t_min.max(1);
    let t_hi = t_cap.min(w.t_max);
    if t_lo > t_hi {
        return Ok(skipped("no positive shifts in the window"));
    }
    let dims = match cotriple_cohomology(&eps, s_hi, DegreeWindow::new(t_lo, t_hi)?, settings) {
        Ok(d) => d,
        Err(crate::cohomology::CohomologyError::Resolution(e @ ResolutionError::OracleTooLarge { .. })) => {
            return Ok(skipped(&e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let mut compared = Vec::new();
    for s in 0..=s_hi {
        for t in t_lo..=t_hi {
            if !w.contains(s, t) {
                continue;
            }
            let page = match sc.page.entry(s, t).map(|e| &e.value) {
                Some(Value::Dim(d)) => *d,
                None => 0,
                Some(_) => continue,
            };
            let o = dims.get(s, t).expect("computed");
            compared.push(OracleComparison {
                s,
                t,
                page,
                oracle: o.dim,
                window_limited: o.window_limited,
            });
        }
    }
    Ok(OracleCheck {
        compared,
        skipped: None,
    })
}

//! Built-in worked examples: a presentation or homotopy data, the matching
//! identification of `E₂`, and any cited differentials.

mod algebraic;
mod equivariant;

pub use algebraic::{algebraic_page, heisenberg_presentation, oracle_check, OracleCheck, OracleComparison};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraHom};
use crate::cohomology::CohomologyError;
use crate::graded::GradedError;
use crate::resolutions::ResolutionError;
use crate::specseq::{InjectedDifferential, Page, PageWindow, SpecSeqError};

pub const SCENARIOS: [&str; 7] = ["su-n", "bu", "free", "hopf", "heisenberg", "s-sigma", "ku-c2"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("UnknownScenario: {0}")]
    UnknownScenario(String),
    #[error("BadParam: {name}: {reason}")]
    BadParam { name: String, reason: String },
    #[error("MissingParam: {0}")]
    MissingParam(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    SpecSeq(#[from] SpecSeqError),
}

impl ScenarioError {
    /// Whether the fault lies with the request rather than the computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Self::UnknownScenario(_) | Self::BadParam { .. } | Self::MissingParam(_)
        )
    }
}

/// How `E₂` was identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `E₂^{0,t} = Der`, `E₂^{s,t} = HH^{s+1}`.
    Hochschild,
    /// `E₂^{s,t} = AQ^s`.
    AndreQuillen,
    /// `E₂^{s,t} = H^s(C_n; π_t)`.
    CyclicGroup { order: u32 },
    /// Only `E₂^{0,0}` is computed.
    HomSetOnly,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub regime: Regime,
    /// The `E₂` page.
    pub page: Page,
    pub differentials: Vec<InjectedDifferential>,
    /// Why the page has the vanishing line it carries, if any.
    pub collapse_note: Option<String>,
    /// The map `ε` for algebraic regimes, kept for oracle cross-checks.
    pub epsilon: Option<AlgebraHom>,
}

pub type Params = BTreeMap<String, String>;

/// Reads the named parameters, rejecting any others.
pub(crate) struct ParamReader<'a> {
    params: &'a Params,
    allowed: &'static [&'static str],
}

impl<'a> ParamReader<'a> {
    fn new(params: &'a Params, allowed: &'static [&'static str]) -> Result<Self, ScenarioError> {
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(ScenarioError::BadParam {
                name: k.clone(),
                reason: format!("not a parameter of this scenario (expected one of {allowed:?})"),
            });
        }
        Ok(Self { params, allowed })
    }

    fn usize(&self, name: &str) -> Result<Option<usize>, ScenarioError> {
        debug_assert!(self.allowed.contains(&name));
        self.params
            .get(name)
            .map(|v| {
                v.trim().parse::<usize>().map_err(|e| ScenarioError::BadParam {
                    name: name.to_string(),
                    reason: e.to_string(),
                })
            })
            .transpose()
    }

    fn list(&self, name: &str) -> Vec<String> {
        self.params
            .get(name)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Builds the named scenario's `E₂` page. `window` overrides the default
/// `t`-range and `s_max` the default number of lines.
pub fn build_scenario(
    name: &str,
    params: &Params,
    window: Option<(i64, i64)>,
    s_max: Option<usize>,
) -> Result<Scenario, ScenarioError> {
    if let Some((a, b)) = window {
        if a > b {
            return Err(ScenarioError::BadParam {
                name: "window".into(),
                reason: format!("empty range {a}:{b}"),
            });
        }
    }
    let pick = |default: (i64, i64, usize)| PageWindow {
        t_min: window.map_or(default.0, |w| w.0).max(0),
        t_max: window.map_or(default.1, |w| w.1),
        s_max: s_max.unwrap_or(default.2),
    };
    match name {
        "su-n" => {
            let p = ParamReader::new(params, &["n"])?;
            let n = p.usize("n")?.unwrap_or(2);
            if n == 0 {
                return Err(ScenarioError::BadParam {
                    name: "n".into(),
                    reason: "need at least one generator".into(),
                });
            }
            algebraic::su_n(n, pick((0, 12, n + 1)))
        }
        "bu" => {
            ParamReader::new(params, &[])?;
            algebraic::bu(pick((0, 10, 3)))
        }
        "free" => {
            let p = ParamReader::new(params, &["generators"])?;
            let gens = p.usize("generators")?.unwrap_or(1);
            if gens == 0 {
                return Err(ScenarioError::BadParam {
                    name: "generators".into(),
                    reason: "need at least one generator".into(),
                });
            }
            algebraic::free(gens, pick((0, 8, 3)))
        }
        "hopf" => {
            ParamReader::new(params, &[])?;
            algebraic::hopf(pick((0, 6, 3)))
        }
        "heisenberg" => {
            let p = ParamReader::new(params, &["kill", "r"])?;
            let kill = p.list("kill");
            let r = p.usize("r")?;
            if !kill.is_empty() && r.is_none() {
                return Err(ScenarioError::MissingParam("r".into()));
            }
            if let Some(r) = r {
                if r < 2 {
                    return Err(ScenarioError::BadParam {
                        name: "r".into(),
                        reason: "pages start at 2".into(),
                    });
                }
            }
            algebraic::heisenberg(&kill, r, pick((0, 4, 4)))
        }
        "s-sigma" => {
            ParamReader::new(params, &[])?;
            equivariant::s_sigma(pick((0, 4, 4)))
        }
        "ku-c2" => {
            ParamReader::new(params, &[])?;
            equivariant::ku_c2(pick((0, 8, 5)))
        }
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}

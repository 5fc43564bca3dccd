//! The JSON document accepted by `e2 custom --spec`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::algebra::{AlgebraHom, AlgebraPresentation, Flavor};
use crate::cohomology::OracleSettings;
use crate::graded::DegreeWindow;
use crate::resolutions::{regularity_check, RegularityClass};
use crate::scenarios::{algebraic_page, Regime, Scenario, ScenarioError};
use crate::specseq::{InjectedDifferential, PageWindow};
use crate::Rational;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlavorName {
    Associative,
    Commutative,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonSpec {
    pub images: BTreeMap<String, Vec<TermSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub tmin: i64,
    pub tmax: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialSpec {
    pub r: usize,
    pub source: (usize, i64),
    #[serde(default)]
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub classes: Vec<String>,
    #[serde(default)]
    pub target_label: Option<String>,
    pub citation: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSpec {
    pub flavor: FlavorName,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    /// Absent: the source itself.
    #[serde(default)]
    pub target: Option<TargetSpec>,
    /// Absent: the identity when there is no target, the trivial map otherwise.
    #[serde(default)]
    pub epsilon: Option<EpsilonSpec>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub smax: Option<usize>,
    #[serde(default)]
    pub differentials: Vec<DifferentialSpec>,
}

fn rational(s: &str) -> Result<Rational, ScenarioError> {
    s.trim().parse().map_err(|_| ScenarioError::BadParam {
        name: "coeff".into(),
        reason: format!("{s:?} is not a rational number p/q"),
    })
}

fn terms(ts: &[TermSpec]) -> Result<Vec<(Rational, Vec<&str>)>, ScenarioError> {
    ts.iter()
        .map(|t| Ok((rational(&t.coeff)?, t.monomial.iter().map(String::as_str).collect())))
        .collect()
}

fn presentation(
    flavor: Flavor,
    gens: &[GeneratorSpec],
    rels: &[RelationSpec],
) -> Result<AlgebraPresentation, ScenarioError> {
    let g: Vec<(&str, i64)> = gens.iter().map(|g| (g.name.as_str(), g.degree)).collect();
    let r = rels
        .iter()
        .map(|r| terms(&r.terms))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgebraPresentation::from_names(flavor, &g, &r)?)
}

const CUSTOM_ORACLE_BUDGET: usize = 2_000;

/// The parts of a custom run that can be rejected before computing.
pub struct Prepared {
    pub epsilon: AlgebraHom,
    pub regime: Regime,
    pub window: PageWindow,
    pub differentials: Vec<InjectedDifferential>,
}

impl CustomSpec {
    pub fn prepare(&self, window: Option<(i64, i64)>, s_max: Option<usize>) -> Result<Prepared, ScenarioError> {
        if self.generators.is_empty() {
            return Err(ScenarioError::BadParam {
                name: "generators".into(),
                reason: "the presentation has no generators".into(),
            });
        }
        let flavor = match self.flavor {
            FlavorName::Associative => Flavor::Associative,
            FlavorName::Commutative => Flavor::Commutative,
        };
        let source = Arc::new(presentation(flavor, &self.generators, &self.relations)?);
        let target = match &self.target {
            Some(t) => Arc::new(presentation(flavor, &t.generators, &t.relations)?),
            None => source.clone(),
        };
        let epsilon = match (&self.epsilon, &self.target) {
            (Some(e), _) => {
                let images = e
                    .images
                    .iter()
                    .map(|(g, ts)| Ok((g.as_str(), terms(ts)?)))
                    .collect::<Result<Vec<_>, ScenarioError>>()?;
                AlgebraHom::from_names(source.clone(), target, &images)?
            }
            (None, None) => AlgebraHom::identity(source.clone()),
            (None, Some(_)) => AlgebraHom::trivial(source.clone(), target),
        };
        let (t_min, t_max) = window
            .or(self.window.as_ref().map(|w| (w.tmin, w.tmax)))
            .unwrap_or((0, 6));
        if t_min > t_max {
            return Err(ScenarioError::BadParam {
                name: "window".into(),
                reason: format!("empty range {t_min}:{t_max}"),
            });
        }
        let window = PageWindow {
            s_max: s_max.or(self.smax).unwrap_or(3),
            t_min: t_min.max(0),
            t_max,
        };
        let differentials = self
            .differentials
            .iter()
            .map(|d| {
                let matrix = d
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(|x| rational(x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let mut out = if d.source == (0, 0) && !d.classes.is_empty() {
                    InjectedDifferential::obstruction(d.r, d.classes.clone(), &d.citation)
                } else {
                    InjectedDifferential::new(d.r, d.source, matrix, &d.citation)
                };
                out.target_label = d.target_label.clone();
                Ok(out)
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        let regime = match flavor {
            Flavor::Associative => Regime::Hochschild,
            Flavor::Commutative => Regime::AndreQuillen,
        };
        Ok(Prepared {
            epsilon,
            regime,
            window,
            differentials,
        })
    }
}

impl Prepared {
    pub fn compute(self) -> Result<Scenario, ScenarioError> {
        let source = self.epsilon.source().clone();
        // keep interactive runs short; rows the oracle cannot reach become markers
        let settings = OracleSettings {
            budget: CUSTOM_ORACLE_BUDGET,
            ..OracleSettings::default()
        };
        let mut page = algebraic_page(self.regime, &self.epsilon, self.window, &settings)?;
        let mut note = None;
        match self.regime {
            Regime::AndreQuillen => {
                let reg = regularity_check(&source, DegreeWindow::new(-24, 24)?);
                let line = match reg.class {
                    RegularityClass::Smooth | RegularityClass::Etale => Some(0),
                    RegularityClass::CompleteIntersection => Some(1),
                    RegularityClass::Unknown => None,
                };
                if let Some(line) = line {
                    page = page.with_vanishing_line(line);
                    note = Some(format!("{:?}: AQ vanishes above degree {line}", reg.class));
                }
            }
            _ if source.is_even_polynomial() => {
                let n = source.generators().len();
                page = page.with_vanishing_line(n - 1);
                note = Some(format!("polynomial on {n} generators: HH vanishes above degree {n}"));
            }
            _ => {}
        }
        Ok(Scenario {
            name: "custom".into(),
            description: "custom presentation".into(),
            regime: self.regime,
            page,
            differentials: self.differentials,
            collapse_note: note,
            epsilon: Some(self.epsilon),
        })
    }
}

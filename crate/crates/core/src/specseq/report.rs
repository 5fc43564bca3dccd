use serde::{Deserialize, Serialize};

use super::{turn_page, InjectedDifferential, Obstruction, Page, SpecSeqError, Value, CONVERGENCE_CAVEAT};

/// `E_2, E_3, …` through the page after the last injected differential.
/// Each page carries the differentials that act on it.
pub fn run_pages(e2: &Page, diffs: &[InjectedDifferential]) -> Result<Vec<Page>, SpecSeqError> {
    let last = diffs.iter().map(|d| d.r).max().unwrap_or(e2.r).max(e2.r);
    let at = |r: usize| -> Vec<InjectedDifferential> {
        diffs.iter().filter(|d| d.r == r).cloned().collect()
    };
    if let Some(d) = diffs.iter().find(|d| d.r < e2.r) {
        return Err(SpecSeqError::WrongPage { page: e2.r, got: d.r });
    }
    let mut pages = vec![e2.clone().with_differentials(at(e2.r))];
    if diffs.is_empty() {
        return Ok(pages);
    }
    while pages.last().expect("nonempty").r <= last {
        let cur = pages.last().expect("nonempty");
        let next = turn_page(cur, &cur.differentials)?;
        let r = next.r;
        pages.push(next.with_differentials(at(r)));
    }
    Ok(pages)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseBound {
    /// `E_r = E_∞` from this page on; `None` when nothing structural is known.
    pub page: Option<usize>,
    pub justification: String,
}

/// With `E₂` concentrated on lines `0..=S`, every `d_r` with `r > S` leaves
/// that band, so the sequence collapses at `E_{max(2, S+1)}`.
pub fn collapse_bound(p: &Page, vanishing_line: Option<usize>) -> CollapseBound {
    match vanishing_line.or(p.vanishing_line) {
        Some(line) => {
            let page = (line + 1).max(2);
            CollapseBound {
                page: Some(page),
                justification: format!(
                    "E_2 vanishes above line {line}; any d_r with r > {line} has source or \
                     target outside lines 0..={line}, so E_{page} = E_inf"
                ),
            }
        }
        None => CollapseBound {
            page: None,
            justification: "window-limited, no bound".to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStatus {
    pub class: String,
    pub survives: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub killed_by: Option<Obstruction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalEntry {
    pub t: i64,
    pub value: Value,
    pub window_limited: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// No class of `E^{0,0}` supports an injected differential.
    pub surjective: bool,
    /// `E_∞^{t,t} = 0` for all `t > 0`; `None` when the window cannot tell.
    pub injective: Option<bool>,
    pub diagonal: Vec<DiagonalEntry>,
    pub classes: Vec<ClassStatus>,
    pub final_page: usize,
    pub caveat: String,
}

impl ObstructionReport {
    pub fn bijective(&self) -> Option<bool> {
        match (self.surjective, self.injective) {
            (false, _) | (_, Some(false)) => Some(false),
            (true, Some(true)) => Some(true),
            (true, None) => None,
        }
    }
}

/// Surjectivity and injectivity of the edge map `π₀ → E₂^{0,0}` as far as
/// the injected differentials and the window decide them.
pub fn obstruction_report(
    e2: &Page,
    injected: &[InjectedDifferential],
) -> Result<ObstructionReport, SpecSeqError> {
    let pages = run_pages(e2, injected)?;
    let last = pages.last().expect("nonempty");
    let w = last.window;
    let integral = last.integral();

    let mut diagonal = Vec::new();
    let mut injective = Some(true);
    for t in 1..=w.t_max {
        let s = t as usize;
        let structural_zero = last.vanishing_line.is_some_and(|l| s > l);
        if structural_zero {
            continue;
        }
        if !w.contains(s, t) {
            if injective == Some(true) {
                injective = None;
            }
            continue;
        }
        let value = last.value_or_zero(s, t, integral);
        let limited = last.entry(s, t).is_some_and(|e| e.window_limited);
        match &value {
            v if v.is_zero() => {}
            Value::Marker(_) => {
                if injective == Some(true) {
                    injective = None;
                }
            }
            _ => injective = Some(false),
        }
        diagonal.push(DiagonalEntry {
            t,
            value,
            window_limited: limited,
        });
    }
    // the diagonal past the window is only known through a vanishing line
    let covered = last
        .vanishing_line
        .is_some_and(|l| (l as i64) <= w.t_max && l <= w.s_max);
    if !covered && injective == Some(true) {
        injective = None;
    }

    let parameters = match e2.entry(0, 0).map(|e| &e.value) {
        Some(Value::HomSet { parameters, .. }) => parameters.clone(),
        _ => Vec::new(),
    };
    let classes = parameters
        .iter()
        .map(|p| {
            let generator = p.split(':').next().unwrap_or(p);
            let killed = last
                .obstructions
                .iter()
                .find(|o| o.class == *p || o.class == generator)
                .cloned();
            ClassStatus {
                class: p.clone(),
                survives: killed.is_none(),
                killed_by: killed,
            }
        })
        .collect();

    Ok(ObstructionReport {
        surjective: last.obstructions.is_empty(),
        injective,
        diagonal,
        classes,
        final_page: last.r,
        caveat: CONVERGENCE_CAVEAT.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentPiece {
    pub s: usize,
    pub t: i64,
    pub value: Value,
    pub window_limited: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abutment {
    pub stem: i64,
    pub pieces: Vec<AbutmentPiece>,
    pub caveat: String,
}

/// The nonzero `E^{s, s+n}` on a final page, by increasing filtration `s`.
pub fn abutment_diagonal(p: &Page, stem: i64) -> Abutment {
    let pieces = p
        .entries()
        .filter(|((s, t), e)| t - *s as i64 == stem && !e.value.is_zero() && !e.value.is_point())
        .map(|(&(s, t), e)| AbutmentPiece {
            s,
            t,
            value: e.value.clone(),
            window_limited: e.window_limited,
        })
        .collect::<Vec<_>>();
    let mut pieces = pieces;
    pieces.sort_by_key(|p| p.s);
    Abutment {
        stem,
        pieces,
        caveat: CONVERGENCE_CAVEAT.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConstraintStatus;
    use crate::exactlin::AbelianGroupDescriptor as G;
    use crate::specseq::page::int_rows;
    use crate::specseq::PageWindow;

    fn window(s_max: usize, t_max: i64) -> PageWindow {
        PageWindow {
            s_max,
            t_min: 0,
            t_max,
        }
    }

    #[test]
    fn collapse_from_vanishing_line() {
        let p = Page::new(2, window(4, 8));
        assert_eq!(collapse_bound(&p, Some(2)).page, Some(3));
        assert_eq!(collapse_bound(&p, Some(0)).page, Some(2));
        assert_eq!(collapse_bound(&p, Some(1)).page, Some(2));
        let none = collapse_bound(&p, None);
        assert_eq!(none.page, None);
        assert_eq!(none.justification, "window-limited, no bound");
    }

    #[test]
    fn ku_pages_and_abutment() {
        let mut p = Page::new(2, window(5, 8));
        p.set(0, 4, Value::Group(G::free(1)), "test").unwrap();
        p.set(3, 6, Value::Group(G::cyclic(2)), "test").unwrap();
        let d = InjectedDifferential::new(3, (0, 4), int_rows(&[&[1]]), "test");
        let pages = run_pages(&p, &[d]).unwrap();
        assert_eq!(pages.iter().map(|p| p.r).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(pages[1].differentials.len(), 1);
        let e4 = &pages[2];
        assert!(e4.entry(3, 6).is_none());
        let a = abutment_diagonal(e4, 4);
        assert_eq!(a.pieces.len(), 1);
        assert_eq!(a.pieces[0].value, Value::Group(G::free(1)));
        assert!(abutment_diagonal(e4, 3).pieces.is_empty());
        assert_eq!(a.caveat, CONVERGENCE_CAVEAT);
    }

    #[test]
    fn report_on_a_point_with_diagonal_class() {
        let mut p = Page::new(2, window(3, 6)).with_vanishing_line(1);
        p.set(
            0,
            0,
            Value::HomSet {
                parameters: vec![],
                constraints: ConstraintStatus::IdenticallyZero,
            },
            "test",
        )
        .unwrap();
        p.set(1, 1, Value::Dim(1), "test").unwrap();
        let rep = obstruction_report(&p, &[]).unwrap();
        assert!(rep.surjective);
        assert_eq!(rep.injective, Some(false));
        assert_eq!(rep.bijective(), Some(false));
    }

    #[test]
    fn killed_classes_are_reported() {
        let mut p = Page::new(2, window(3, 4));
        p.set(
            0,
            0,
            Value::HomSet {
                parameters: vec!["alpha:u".into(), "beta:u".into()],
                constraints: ConstraintStatus::IdenticallyZero,
            },
            "test",
        )
        .unwrap();
        p.set(3, 2, Value::Dim(1), "test").unwrap();
        let d = InjectedDifferential::obstruction(3, vec!["alpha".into(), "beta".into()], "test");
        let rep = obstruction_report(&p, &[d]).unwrap();
        assert!(!rep.surjective);
        assert!(rep.classes.iter().all(|c| !c.survives));
        assert_eq!(rep.classes[0].killed_by.as_ref().unwrap().target, (3, 2));
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::SpecSeqError;
use crate::algebra::ConstraintStatus;
use crate::exactlin::{rank, subquotient, AbelianGroupDescriptor, LinAlgError};
use crate::{IntMatrix, RatMatrix, Rational};

/// What sits at a spot of a page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    /// A ℚ-vector space.
    Dim(usize),
    Group(AbelianGroupDescriptor),
    /// The set at `(0,0)` in the algebraic regimes: affine coordinates and
    /// the equations they satisfy.
    HomSet {
        parameters: Vec<String>,
        constraints: ConstraintStatus,
    },
    /// Not identified by any computation; never read as zero.
    Marker(MarkerKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerKind {
    Unidentified,
}

impl Value {
    pub fn unidentified() -> Self {
        Value::Marker(MarkerKind::Unidentified)
    }

    /// Zero groups and spaces; hom-sets and markers never are.
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Dim(d) => *d == 0,
            Value::Group(g) => g.is_zero(),
            Value::HomSet { .. } | Value::Marker(_) => false,
        }
    }

    /// A hom-set with no parameters: a single point.
    pub fn is_point(&self) -> bool {
        matches!(self, Value::HomSet { parameters, .. } if parameters.is_empty())
    }

    /// Generators in the coordinates differentials are written in.
    fn generator_count(&self) -> Option<usize> {
        match self {
            Value::Dim(d) => Some(*d),
            Value::Group(g) => Some(g.generator_count()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Dim(0) => write!(f, "0"),
            Value::Dim(1) => write!(f, "Q"),
            Value::Dim(d) => write!(f, "Q^{d}"),
            Value::Group(g) => write!(f, "{g}"),
            Value::HomSet {
                parameters,
                constraints,
            } => match (parameters.len(), constraints) {
                (0, _) => write!(f, "*"),
                (k, ConstraintStatus::IdenticallyZero) => write!(f, "A^{k}"),
                (k, ConstraintStatus::Polynomials(_)) => write!(f, "V(A^{k})"),
            },
            Value::Marker(MarkerKind::Unidentified) => write!(f, "?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub value: Value,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub window_limited: bool,
    pub provenance: String,
}

/// Differential `d_r: E_r^{s,t} → E_r^{s+r, t+r−1}` supplied from outside,
/// with its matrix in the page's coordinates (target rows, source columns).
/// A differential out of the hom-set at `(0,0)` is an obstruction record
/// instead: it names the classes that support it and has no matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectedDifferential {
    pub r: usize,
    pub source: (usize, i64),
    pub target: (usize, i64),
    #[serde(with = "rational_rows", default, skip_serializing_if = "Vec::is_empty")]
    pub matrix: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_label: Option<String>,
    pub citation: String,
}

impl InjectedDifferential {
    pub fn new(r: usize, source: (usize, i64), matrix: Vec<Vec<Rational>>, citation: &str) -> Self {
        Self {
            r,
            source,
            target: (source.0 + r, source.1 + r as i64 - 1),
            matrix,
            classes: Vec::new(),
            target_label: None,
            citation: citation.to_string(),
        }
    }

    /// An obstruction out of `E^{0,0}` supported by the named classes.
    pub fn obstruction(r: usize, classes: Vec<String>, citation: &str) -> Self {
        Self {
            classes,
            ..Self::new(r, (0, 0), Vec::new(), citation)
        }
    }

    pub fn with_target_label(mut self, label: &str) -> Self {
        self.target_label = Some(label.to_string());
        self
    }

    fn check_bidegree(&self) -> Result<(), SpecSeqError> {
        let (s, t) = self.source;
        let (ts, tt) = self.target;
        if self.r < 2 || ts != s + self.r || tt != t + self.r as i64 - 1 {
            return Err(SpecSeqError::BidegreeMismatch {
                r: self.r,
                s,
                t,
                ts,
                tt,
            });
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero) && self.classes.is_empty()
    }
}

/// Exact rationals travel as `"p/q"` strings.
mod rational_rows {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.trim().parse::<Rational>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// A class of `E^{0,0}` that supports a differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub r: usize,
    pub class: String,
    pub target: (usize, i64),
    pub citation: String,
}

/// Spots `(s, t)` with `0 ≤ s ≤ min(s_max, t + 1)` and `t_min ≤ t ≤ t_max`:
/// the range `s ≤ t` plus the fringe `s = t + 1` where obstructions land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageWindow {
    pub s_max: usize,
    pub t_min: i64,
    pub t_max: i64,
}

impl PageWindow {
    pub fn contains(&self, s: usize, t: i64) -> bool {
        s <= self.s_max && t >= self.t_min && t <= self.t_max && (s as i64) <= t + 1
    }

    pub fn spots(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        (self.t_min.max(0)..=self.t_max).flat_map(move |t| {
            (0..=self.s_max)
                .filter(move |&s| (s as i64) <= t + 1)
                .map(move |s| (s, t))
        })
    }
}

/// One page. Spots without a stored entry are zero; a stored entry is never
/// a plain, unflagged zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub window: PageWindow,
    entries: BTreeMap<(usize, i64), Entry>,
    /// Differentials acting on this page.
    pub differentials: Vec<InjectedDifferential>,
    /// Classes of `E^{0,0}` found to support differentials so far.
    pub obstructions: Vec<Obstruction>,
    /// A structural line above which `E₂` vanishes, when one is known.
    pub vanishing_line: Option<usize>,
}

impl Page {
    pub fn new(r: usize, window: PageWindow) -> Self {
        Self {
            r,
            window,
            entries: BTreeMap::new(),
            differentials: Vec::new(),
            obstructions: Vec::new(),
            vanishing_line: None,
        }
    }

    /// Stores an entry; unflagged zeros are dropped.
    pub fn insert(&mut self, s: usize, t: i64, entry: Entry) -> Result<(), SpecSeqError> {
        if !self.window.contains(s, t) {
            return Err(SpecSeqError::OutsideWindow { s, t });
        }
        if entry.value.is_zero() && !entry.window_limited {
            self.entries.remove(&(s, t));
        } else {
            self.entries.insert((s, t), entry);
        }
        Ok(())
    }

    pub fn set(&mut self, s: usize, t: i64, value: Value, provenance: &str) -> Result<(), SpecSeqError> {
        self.insert(
            s,
            t,
            Entry {
                value,
                window_limited: false,
                provenance: provenance.to_string(),
            },
        )
    }

    pub fn entry(&self, s: usize, t: i64) -> Option<&Entry> {
        self.entries.get(&(s, t))
    }

    /// The value at a spot, zero when nothing is stored. `kind` decides
    /// which zero (`Dim(0)` or the zero group) an empty spot reads as.
    pub fn value_or_zero(&self, s: usize, t: i64, integral: bool) -> Value {
        match self.entries.get(&(s, t)) {
            Some(e) => e.value.clone(),
            None if integral => Value::Group(AbelianGroupDescriptor::zero()),
            None => Value::Dim(0),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, i64), &Entry)> {
        self.entries.iter()
    }

    /// Stored entries that are not zero.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, i64), &Entry)> {
        self.entries.iter().filter(|(_, e)| !e.value.is_zero())
    }

    pub fn with_differentials(mut self, diffs: Vec<InjectedDifferential>) -> Self {
        self.differentials = diffs;
        self
    }

    pub fn with_vanishing_line(mut self, line: usize) -> Self {
        self.vanishing_line = Some(line);
        self
    }

    pub(crate) fn from_parts(
        r: usize,
        window: PageWindow,
        entries: BTreeMap<(usize, i64), Entry>,
    ) -> Self {
        Self {
            entries,
            ..Self::new(r, window)
        }
    }

    pub(crate) fn integral(&self) -> bool {
        self.entries
            .values()
            .any(|e| matches!(e.value, Value::Group(_)))
    }
}

fn integer_matrix(d: &InjectedDifferential, rows: usize, cols: usize) -> Result<IntMatrix, SpecSeqError> {
    let mut triplets = Vec::new();
    for (i, row) in d.matrix.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return Err(SpecSeqError::NonIntegral { r: d.r });
            }
            triplets.push((i, j, x.to_integer()));
        }
    }
    Ok(IntMatrix::from_triplets(rows, cols, triplets)?)
}

fn rational_matrix(d: &InjectedDifferential, rows: usize, cols: usize) -> Result<RatMatrix, SpecSeqError> {
    let triplets = d
        .matrix
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
    Ok(RatMatrix::from_triplets(rows, cols, triplets)?)
}

fn check_shape(d: &InjectedDifferential, rows: usize, cols: usize) -> Result<(), SpecSeqError> {
    let ok = if rows == 0 || cols == 0 {
        d.matrix.iter().all(|r| r.len() == cols) && (d.matrix.len() == rows || d.matrix.is_empty())
    } else {
        d.matrix.len() == rows && d.matrix.iter().all(|r| r.len() == cols)
    };
    if ok {
        Ok(())
    } else {
        Err(SpecSeqError::MatrixShape {
            r: d.r,
            s: d.source.0,
            t: d.source.1,
            rows,
            cols,
        })
    }
}

/// Whether `after` is no larger than `before`.
fn shrinks(before: &Value, after: &Value) -> bool {
    match (before, after) {
        (Value::Dim(a), Value::Dim(b)) => b <= a,
        (Value::Group(a), Value::Group(b)) => b.no_larger_than(a),
        (a, b) => a == b,
    }
}

/// `E_{r+1}` from `E_r` and the differentials acting on it: each spot
/// becomes `ker(out) / im(in)`; spots no differential touches pass through.
pub fn turn_page(p: &Page, diffs: &[InjectedDifferential]) -> Result<Page, SpecSeqError> {
    let integral = p.integral();
    let mut outgoing: BTreeMap<(usize, i64), &InjectedDifferential> = BTreeMap::new();
    let mut incoming: BTreeMap<(usize, i64), &InjectedDifferential> = BTreeMap::new();
    let mut obstructions = p.obstructions.clone();
    for d in diffs {
        if d.r != p.r {
            return Err(SpecSeqError::WrongPage { page: p.r, got: d.r });
        }
        d.check_bidegree()?;
        for &(s, t) in [&d.source, &d.target] {
            if !p.window.contains(s, t) {
                return Err(SpecSeqError::OutsideWindow { s, t });
            }
        }
        let src = p.value_or_zero(d.source.0, d.source.1, integral);
        if let Value::HomSet { parameters, .. } = &src {
            // an obstruction: the named classes do not survive, which needs
            // somewhere nonzero (or unknown) for the obstruction to live
            let (ts, tt) = d.target;
            let target_known_zero = p.value_or_zero(ts, tt, integral).is_zero()
                && !p.entry(ts, tt).is_some_and(|e| e.window_limited);
            if target_known_zero && !d.classes.is_empty() {
                return Err(SpecSeqError::ObstructionIntoZero { r: d.r, s: ts, t: tt });
            }
            for c in &d.classes {
                let known = parameters
                    .iter()
                    .any(|name| name == c || name.split(':').next() == Some(c));
                if !known {
                    return Err(SpecSeqError::UnknownClass(c.clone()));
                }
                obstructions.push(Obstruction {
                    r: d.r,
                    class: c.clone(),
                    target: d.target,
                    citation: d.citation.clone(),
                });
            }
            continue;
        }
        let tgt = p.value_or_zero(d.target.0, d.target.1, integral);
        for (v, (s, t)) in [(&src, d.source), (&tgt, d.target)] {
            if matches!(v, Value::Marker(_) | Value::HomSet { .. }) {
                return Err(SpecSeqError::MarkerInDifferentialPath { s, t });
            }
        }
        if std::mem::discriminant(&src) != std::mem::discriminant(&tgt) {
            return Err(SpecSeqError::KindMismatch {
                s: d.source.0,
                t: d.source.1,
            });
        }
        check_shape(
            d,
            tgt.generator_count().unwrap_or(0),
            src.generator_count().unwrap_or(0),
        )?;
        if outgoing.insert(d.source, d).is_some() {
            return Err(SpecSeqError::DuplicateDifferential {
                s: d.source.0,
                t: d.source.1,
            });
        }
        if incoming.insert(d.target, d).is_some() {
            return Err(SpecSeqError::DuplicateDifferential {
                s: d.target.0,
                t: d.target.1,
            });
        }
    }

    let mut next = Page::new(p.r + 1, p.window);
    next.obstructions = obstructions;
    next.vanishing_line = p.vanishing_line;
    let r = p.r;
    for (s, t) in p.window.spots() {
        let Some(entry) = p.entry(s, t).cloned() else {
            continue;
        };
        let out = outgoing.get(&(s, t)).filter(|d| !d.is_zero());
        let inc = incoming.get(&(s, t)).filter(|d| !d.is_zero());
        let value = match (&entry.value, out, inc) {
            (v, None, None) => v.clone(),
            (Value::Dim(n), out, inc) => {
                let dim = *n;
                let g = match out {
                    Some(d) => {
                        let c = p.value_or_zero(d.target.0, d.target.1, false).generator_count().unwrap_or(0);
                        Some(rational_matrix(d, c, dim)?)
                    }
                    None => None,
                };
                let f = match inc {
                    Some(d) => {
                        let a = p.value_or_zero(d.source.0, d.source.1, false).generator_count().unwrap_or(0);
                        Some(rational_matrix(d, dim, a)?)
                    }
                    None => None,
                };
                if let (Some(g), Some(f)) = (&g, &f) {
                    let gf = g.mul(f)?;
                    if !gf.is_zero() {
                        return Err(LinAlgError::CompositionNotZero { nonzero: gf.nnz() }.into());
                    }
                }
                Value::Dim(dim - g.as_ref().map_or(0, rank) - f.as_ref().map_or(0, rank))
            }
            (Value::Group(b), out, inc) => {
                let (a, f) = match inc {
                    Some(d) => {
                        let Value::Group(a) = p.value_or_zero(d.source.0, d.source.1, true) else {
                            unreachable!()
                        };
                        let f = integer_matrix(d, b.generator_count(), a.generator_count())?;
                        (a, f)
                    }
                    None => (
                        AbelianGroupDescriptor::zero(),
                        IntMatrix::zeros(b.generator_count(), 0),
                    ),
                };
                let (c, g) = match out {
                    Some(d) => {
                        let Value::Group(c) = p.value_or_zero(d.target.0, d.target.1, true) else {
                            unreachable!()
                        };
                        let g = integer_matrix(d, c.generator_count(), b.generator_count())?;
                        (c, g)
                    }
                    None => (
                        AbelianGroupDescriptor::zero(),
                        IntMatrix::zeros(0, b.generator_count()),
                    ),
                };
                Value::Group(subquotient(&a, b, &c, &f, &g)?.group)
            }
            (v, _, _) => v.clone(),
        };
        if !shrinks(&entry.value, &value) {
            return Err(SpecSeqError::NotMonotone {
                s,
                t,
                before: entry.value.to_string(),
                after: value.to_string(),
            });
        }
        // a later differential could leave or enter the window here
        let ri = r as i64 + 1;
        // past a known vanishing line the target is zero wherever it lies
        let exits = (s as i64) <= t
            && p.vanishing_line.is_none_or(|l| s + r < l)
            && (s + r + 1 > p.window.s_max || t + ri - 1 > p.window.t_max);
        let enters = s > r && t - ri + 1 < p.window.t_min;
        // a zero reached by a differential is exact; a zero read off truncated
        // data keeps its flag
        let limited = if value.is_zero() {
            entry.window_limited && entry.value.is_zero()
        } else {
            entry.window_limited || exits || enters
        };
        next.insert(
            s,
            t,
            Entry {
                value,
                window_limited: limited,
                provenance: entry.provenance.clone(),
            },
        )?;
    }
    Ok(next)
}

/// Integer entries of a differential matrix written as rationals.
#[cfg(test)]
pub(crate) fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(crate::Integer::from(x))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> PageWindow {
        PageWindow {
            s_max: 5,
            t_min: 0,
            t_max: 8,
        }
    }

    #[test]
    fn no_differentials_only_increments_r() {
        let mut p = Page::new(2, window());
        p.set(1, 1, Value::Dim(1), "test").unwrap();
        p.set(0, 2, Value::Dim(2), "test").unwrap();
        let q = turn_page(&p, &[]).unwrap();
        assert_eq!(q.r, 3);
        let a: Vec<_> = p.entries().map(|(k, e)| (*k, e.value.clone())).collect();
        let b: Vec<_> = q.entries().map(|(k, e)| (*k, e.value.clone())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_one_differential_between_lines() {
        let mut p = Page::new(2, window());
        p.set(0, 3, Value::Dim(1), "test").unwrap();
        p.set(2, 4, Value::Dim(1), "test").unwrap();
        let d = InjectedDifferential::new(2, (0, 3), int_rows(&[&[1]]), "test");
        let q = turn_page(&p, &[d]).unwrap();
        assert!(q.nonzero().next().is_none());
    }

    #[test]
    fn ku_style_d3_on_integers() {
        let mut p = Page::new(3, window());
        p.set(0, 4, Value::Group(AbelianGroupDescriptor::free(1)), "test").unwrap();
        p.set(3, 6, Value::Group(AbelianGroupDescriptor::cyclic(2)), "test").unwrap();
        let d = InjectedDifferential::new(3, (0, 4), int_rows(&[&[1]]), "test");
        assert_eq!(d.target, (3, 6));
        let q = turn_page(&p, &[d]).unwrap();
        assert_eq!(q.entry(0, 4).unwrap().value, Value::Group(AbelianGroupDescriptor::free(1)));
        assert!(q.entry(3, 6).is_none());
    }

    #[test]
    fn rejects_bad_bidegree_and_markers() {
        let mut p = Page::new(2, window());
        p.set(0, 3, Value::unidentified(), "test").unwrap();
        p.set(2, 4, Value::Dim(1), "test").unwrap();
        let mut d = InjectedDifferential::new(2, (0, 3), int_rows(&[&[1]]), "test");
        assert!(matches!(
            turn_page(&p, std::slice::from_ref(&d)),
            Err(SpecSeqError::MarkerInDifferentialPath { s: 0, t: 3 })
        ));
        d.target = (2, 5);
        assert!(matches!(
            turn_page(&p, &[d]),
            Err(SpecSeqError::BidegreeMismatch { .. })
        ));
    }

    #[test]
    fn obstruction_out_of_hom_set() {
        let mut p = Page::new(2, window());
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
        p.set(3, 1, Value::unidentified(), "test").unwrap_err();
        let d = InjectedDifferential::obstruction(2, vec!["alpha".into()], "test");
        assert!(matches!(
            turn_page(&p, std::slice::from_ref(&d)),
            Err(SpecSeqError::ObstructionIntoZero { r: 2, s: 2, t: 1 })
        ));
        p.set(2, 1, Value::unidentified(), "test").unwrap();
        let q = turn_page(&p, &[d]).unwrap();
        assert_eq!(q.obstructions.len(), 1);
        assert_eq!(q.obstructions[0].class, "alpha");
        let bad = InjectedDifferential::obstruction(2, vec!["gamma".into()], "test");
        assert!(matches!(turn_page(&p, &[bad]), Err(SpecSeqError::UnknownClass(_))));
    }
}

//! Graded vector spaces, graded maps and cochain complexes with an internal
//! grading.
//!
//! All objects are truncated to a [`DegreeWindow`]. Anything whose value
//! could change outside the window carries a `window_limited` flag rather
//! than silently dropping data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{homology_at, LinAlgError};
use crate::RatMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("invalid degree window [{0}, {1}]")]
    InvalidWindow(i64, i64),
    #[error("degree {0} lies outside the window")]
    OutsideWindow(i64),
    #[error("shape mismatch in degree {degree}: {detail}")]
    ShapeMismatch { degree: i64, detail: String },
    #[error("CompositionNotZero at cohomological degree {s}, internal degree {degree}")]
    CompositionNotZero { s: usize, degree: i64 },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Closed range of internal degrees `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub t_min: i64,
    pub t_max: i64,
}

impl DegreeWindow {
    pub fn new(t_min: i64, t_max: i64) -> Result<Self, GradedError> {
        if t_min > t_max {
            return Err(GradedError::InvalidWindow(t_min, t_max));
        }
        Ok(Self { t_min, t_max })
    }

    pub fn contains(&self, d: i64) -> bool {
        self.t_min <= d && d <= self.t_max
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.t_min..=self.t_max
    }

    pub fn covers(&self, other: &DegreeWindow) -> bool {
        self.t_min <= other.t_min && other.t_max <= self.t_max
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self {
            t_min: self.t_min + by,
            t_max: self.t_max + by,
        }
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &DegreeWindow) -> Self {
        Self {
            t_min: self.t_min.min(other.t_min),
            t_max: self.t_max.max(other.t_max),
        }
    }
}

/// Finitely supported dimensions over ℚ in each internal degree, optionally
/// with a labeled basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDim {
    window: DegreeWindow,
    dims: BTreeMap<i64, usize>,
    labels: Option<BTreeMap<i64, Vec<String>>>,
    window_limited: bool,
}

impl GradedDim {
    pub fn zero(window: DegreeWindow) -> Self {
        Self {
            window,
            dims: BTreeMap::new(),
            labels: None,
            window_limited: false,
        }
    }

    pub fn from_dims<I: IntoIterator<Item = (i64, usize)>>(
        window: DegreeWindow,
        dims: I,
    ) -> Result<Self, GradedError> {
        let mut g = Self::zero(window);
        for (d, n) in dims {
            g.set_dim(d, n)?;
        }
        Ok(g)
    }

    pub fn from_labels(
        window: DegreeWindow,
        labels: BTreeMap<i64, Vec<String>>,
    ) -> Result<Self, GradedError> {
        let mut g = Self::zero(window);
        for (d, l) in &labels {
            g.set_dim(*d, l.len())?;
        }
        g.labels = Some(labels.into_iter().filter(|(_, l)| !l.is_empty()).collect());
        Ok(g)
    }

    fn set_dim(&mut self, d: i64, n: usize) -> Result<(), GradedError> {
        if !self.window.contains(d) {
            return Err(GradedError::OutsideWindow(d));
        }
        if n == 0 {
            self.dims.remove(&d);
        } else {
            self.dims.insert(d, n);
        }
        Ok(())
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn labels(&self, d: i64) -> Option<&[String]> {
        self.labels
            .as_ref()
            .and_then(|l| l.get(&d))
            .map(Vec::as_slice)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn window_limited(&self) -> bool {
        self.window_limited
    }

    pub fn mark_window_limited(mut self) -> Self {
        self.window_limited = true;
        self
    }

    /// `shift(g, t).dim(d) == g.dim(d + t)`: a generator of degree `d` pairs
    /// with elements of degree `d + t`. The window moves along, so nothing
    /// is clipped.
    pub fn shift(&self, t: i64) -> Self {
        Self {
            window: self.window.shifted(-t),
            dims: self.dims.iter().map(|(d, n)| (d - t, *n)).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| l.iter().map(|(d, v)| (d - t, v.clone())).collect()),
            window_limited: self.window_limited,
        }
    }

    /// Restriction to `w`. Flags the result when data is dropped or when `w`
    /// reaches beyond what `self` knows about.
    pub fn restrict(&self, w: DegreeWindow) -> Self {
        let dropped = self.dims.keys().any(|d| !w.contains(*d));
        let unknown = !self.window.covers(&w);
        Self {
            window: w,
            dims: self
                .dims
                .iter()
                .filter(|(d, _)| w.contains(**d))
                .map(|(d, n)| (*d, *n))
                .collect(),
            labels: self.labels.as_ref().map(|l| {
                l.iter()
                    .filter(|(d, _)| w.contains(**d))
                    .map(|(d, v)| (*d, v.clone()))
                    .collect()
            }),
            window_limited: self.window_limited || dropped || unknown,
        }
    }
}

/// Degree-`shift` linear map between graded spaces, one block per source
/// degree. Missing blocks are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMap {
    source: GradedDim,
    target: GradedDim,
    shift: i64,
    blocks: BTreeMap<i64, RatMatrix>,
}

impl GradedMap {
    pub fn new(
        source: GradedDim,
        target: GradedDim,
        shift: i64,
        blocks: BTreeMap<i64, RatMatrix>,
    ) -> Result<Self, GradedError> {
        for (d, m) in &blocks {
            let want = (target.dim(d + shift), source.dim(*d));
            if (m.rows(), m.cols()) != want {
                return Err(GradedError::ShapeMismatch {
                    degree: *d,
                    detail: format!(
                        "block is {}x{}, dims require {}x{}",
                        m.rows(),
                        m.cols(),
                        want.0,
                        want.1
                    ),
                });
            }
        }
        Ok(Self {
            source,
            target,
            shift,
            blocks: blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        })
    }

    pub fn zero(source: GradedDim, target: GradedDim, shift: i64) -> Self {
        Self {
            source,
            target,
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &GradedDim {
        &self.source
    }

    pub fn target(&self) -> &GradedDim {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Block at source degree `d`, materialized as a zero matrix if absent.
    pub fn block(&self, d: i64) -> RatMatrix {
        self.blocks.get(&d).cloned().unwrap_or_else(|| {
            RatMatrix::zeros(self.target.dim(d + self.shift), self.source.dim(d))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Cochain complex `term_0 → term_1 → …` of graded spaces with
/// degree-preserving differentials and `δ ∘ δ = 0` verified on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    terms: BTreeMap<usize, GradedDim>,
    differentials: BTreeMap<usize, GradedMap>,
    provenance: String,
}

impl Complex {
    pub fn new(
        terms: BTreeMap<usize, GradedDim>,
        differentials: BTreeMap<usize, GradedMap>,
        provenance: impl Into<String>,
    ) -> Result<Self, GradedError> {
        for (s, d) in &differentials {
            if d.shift != 0 {
                return Err(GradedError::ShapeMismatch {
                    degree: 0,
                    detail: format!("differential at s={s} has internal shift {}", d.shift),
                });
            }
            let empty = |w| GradedDim::zero(w);
            let src = terms.get(s).cloned().unwrap_or_else(|| empty(d.source.window));
            let tgt = terms
                .get(&(s + 1))
                .cloned()
                .unwrap_or_else(|| empty(d.target.window));
            if src.dims != d.source.dims || tgt.dims != d.target.dims {
                return Err(GradedError::ShapeMismatch {
                    degree: 0,
                    detail: format!("differential at s={s} does not match the terms"),
                });
            }
        }
        let c = Self {
            terms,
            differentials,
            provenance: provenance.into(),
        };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<(), GradedError> {
        for (s, first) in &self.differentials {
            let Some(second) = self.differentials.get(&(s + 1)) else {
                continue;
            };
            for d in first.blocks.keys() {
                let comp = second.block(*d).mul(&first.block(*d))?;
                if !comp.is_zero() {
                    return Err(GradedError::CompositionNotZero { s: *s, degree: *d });
                }
            }
        }
        Ok(())
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn term(&self, s: usize) -> Option<&GradedDim> {
        self.terms.get(&s)
    }

    pub fn differential(&self, s: usize) -> Option<&GradedMap> {
        self.differentials.get(&s)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Internal degrees where any term is nonzero.
    pub fn support(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .terms
            .values()
            .flat_map(|g| g.dims.keys().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn window_of(&self, s: usize) -> DegreeWindow {
        self.terms
            .get(&s)
            .or_else(|| self.terms.values().next())
            .map(|g| g.window)
            .unwrap_or(DegreeWindow { t_min: 0, t_max: 0 })
    }

    fn incoming_block(&self, s: usize, d: i64) -> RatMatrix {
        let here = self.terms.get(&s).map_or(0, |g| g.dim(d));
        match s.checked_sub(1).and_then(|p| self.differentials.get(&p)) {
            Some(m) => m.block(d),
            None => {
                let prev = s
                    .checked_sub(1)
                    .and_then(|p| self.terms.get(&p))
                    .map_or(0, |g| g.dim(d));
                RatMatrix::zeros(here, prev)
            }
        }
    }

    fn outgoing_block(&self, s: usize, d: i64) -> RatMatrix {
        let here = self.terms.get(&s).map_or(0, |g| g.dim(d));
        match self.differentials.get(&s) {
            Some(m) => m.block(d),
            None => {
                let next = self.terms.get(&(s + 1)).map_or(0, |g| g.dim(d));
                RatMatrix::zeros(next, here)
            }
        }
    }

    /// `H^s` in every internal degree of the term's window.
    pub fn cohomology(&self, s: usize) -> Result<GradedDim, GradedError> {
        let window = self.window_of(s);
        let mut out = GradedDim::zero(window);
        let Some(term) = self.terms.get(&s) else {
            return Ok(out);
        };
        for &d in term.dims.keys() {
            let h = homology_at(&self.incoming_block(s, d), &self.outgoing_block(s, d))
                .map_err(|e| match e {
                    LinAlgError::CompositionNotZero { .. } => {
                        GradedError::CompositionNotZero { s, degree: d }
                    }
                    other => GradedError::LinAlg(other),
                })?;
            out.set_dim(d, h)?;
        }
        if self.terms.values().any(|g| g.window_limited) {
            out.window_limited = true;
        }
        Ok(out)
    }

    /// Alternating sum of term dimensions in internal degree `d`.
    pub fn euler_characteristic(&self, d: i64) -> i64 {
        self.terms
            .iter()
            .map(|(s, g)| if s % 2 == 0 { 1 } else { -1 } * g.dim(d) as i64)
            .sum()
    }

    /// Compares the Euler characteristic of terms and of cohomology in every
    /// internal degree; a mismatch means a malformed complex.
    pub fn check_euler_characteristic(&self) -> Result<bool, GradedError> {
        let Some(top) = self.max_degree() else {
            return Ok(true);
        };
        let hs: Vec<GradedDim> = (0..=top).map(|s| self.cohomology(s)).collect::<Result<_, _>>()?;
        Ok(self.support().into_iter().all(|d| {
            let chi_h: i64 = hs
                .iter()
                .enumerate()
                .map(|(s, h)| if s % 2 == 0 { 1 } else { -1 } * h.dim(d) as i64)
                .sum();
            chi_h == self.euler_characteristic(d)
        }))
    }
}

/// `H^s` of `c`; see [`Complex::cohomology`].
pub fn complex_cohomology(c: &Complex, s: usize) -> Result<GradedDim, GradedError> {
    c.cohomology(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn w(a: i64, b: i64) -> DegreeWindow {
        DegreeWindow::new(a, b).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rejects_inverted_window() {
        assert!(DegreeWindow::new(3, 1).is_err());
    }

    #[test]
    fn shift_identity_and_instance() {
        let g = GradedDim::from_dims(w(0, 4), [(2, 1)]).unwrap();
        assert_eq!(g.shift(0), g);
        assert_eq!(g.shift(3).dim(-1), 1);
        assert_eq!(g.shift(3).dims().len(), 1);
    }

    #[test]
    fn shift_reads_derivation_slots() {
        // R = Q[x1], |x1| = 2: R_6 is one-dimensional
        let r = GradedDim::from_dims(w(0, 10), [(0, 1), (2, 1), (4, 1), (6, 1), (8, 1), (10, 1)])
            .unwrap();
        assert_eq!(r.shift(4).dim(2), r.dim(6));
        assert_eq!(r.shift(4).dim(2), 1);
    }

    #[test]
    fn shifts_compose() {
        let g = GradedDim::from_dims(w(-3, 5), [(-3, 2), (1, 1), (5, 4)]).unwrap();
        assert_eq!(g.shift(2).shift(-5), g.shift(-3));
    }

    #[test]
    fn restriction_is_loud() {
        let g = GradedDim::from_dims(w(0, 4), [(4, 1)]).unwrap();
        assert!(g.restrict(w(0, 3)).window_limited());
        assert!(g.restrict(w(0, 6)).window_limited());
        assert!(!g.restrict(w(1, 4)).window_limited());
    }

    fn one_dim_terms(n: usize) -> BTreeMap<usize, GradedDim> {
        (0..n)
            .map(|s| (s, GradedDim::from_dims(w(0, 0), [(0, 1)]).unwrap()))
            .collect()
    }

    #[test]
    fn acyclic_two_term_complex() {
        let terms = one_dim_terms(2);
        let id = GradedMap::new(
            terms[&0].clone(),
            terms[&1].clone(),
            0,
            [(0, RatMatrix::identity(1))].into(),
        )
        .unwrap();
        let c = Complex::new(terms, [(0, id)].into(), "test").unwrap();
        assert!(c.cohomology(0).unwrap().is_zero());
        assert!(c.cohomology(1).unwrap().is_zero());
        assert!(c.check_euler_characteristic().unwrap());
    }

    #[test]
    fn zero_differentials_return_terms() {
        let c = Complex::new(one_dim_terms(3), BTreeMap::new(), "test").unwrap();
        for s in 0..3 {
            assert_eq!(c.cohomology(s).unwrap().dim(0), 1);
        }
    }

    #[test]
    fn non_square_zero_is_rejected() {
        let terms = one_dim_terms(3);
        let id = |a: usize, b: usize| {
            GradedMap::new(
                terms[&a].clone(),
                terms[&b].clone(),
                0,
                [(0, RatMatrix::from_dense(&[vec![q(1)]]).unwrap())].into(),
            )
            .unwrap()
        };
        let err = Complex::new(terms.clone(), [(0, id(0, 1)), (1, id(1, 2))].into(), "bad")
            .unwrap_err();
        assert_eq!(err, GradedError::CompositionNotZero { s: 0, degree: 0 });
    }
}

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::ResolutionError;
use crate::algebra::{AlgebraError, AlgebraHom, Flavor, TruncatedAlgebra};
use crate::exactlin::SparseVec;
use crate::graded::{Complex, DegreeWindow, GradedDim, GradedMap};
use crate::{RatMatrix, Rational};

/// Input to the brute-force cotriple oracle: the augmented source algebra
/// (through ε into the coefficient algebra) and the truncation parameters.
#[derive(Debug, Clone)]
pub struct CotripleData {
    pub epsilon: AlgebraHom,
    /// Source elements of `|degree| > degree_bound` are dropped. The complex
    /// splits by source degree, so what remains is exact.
    pub degree_bound: i64,
    pub s_max: usize,
    /// Maximum number of basis elements per level and degree.
    pub budget: usize,
}

impl CotripleData {
    pub fn new(epsilon: AlgebraHom, degree_bound: i64) -> Self {
        Self {
            epsilon,
            degree_bound,
            s_max: 3,
            budget: 20_000,
        }
    }

    pub fn with_s_max(mut self, s_max: usize) -> Self {
        self.s_max = s_max;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn flavor(&self) -> Flavor {
        self.epsilon.source().flavor()
    }
}

/// Oracle output: the cochain complex plus whether source degrees beyond
/// the bound could have contributed.
#[derive(Debug, Clone)]
pub struct OracleComplex {
    pub complex: Complex,
    pub window_limited: bool,
}

/// One level `W_ℓ = T̄^ℓ(A⁺)` of the iterated reduced free algebra. Elements
/// are numbered by increasing `|degree|`.
#[derive(Debug, Default)]
struct Level {
    degrees: Vec<i64>,
    /// Words in the previous level's indices (canonical order); empty at
    /// level 0.
    parts: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Level {
    fn odd(&self, e: usize) -> bool {
        self.degrees[e] % 2 != 0
    }
}

/// Sorts a word of elements of `level` into canonical order, tracking the
/// Koszul sign; `None` if an odd element repeats.
fn canonical(level: &Level, word: &[usize], commutative: bool) -> Option<(bool, Vec<usize>)> {
    if !commutative {
        return Some((false, word.to_vec()));
    }
    let mut negative = false;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] && level.odd(word[i]) && level.odd(word[j]) {
                negative = !negative;
            }
        }
    }
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1] && level.odd(w[0])) {
        return None;
    }
    Some((negative, sorted))
}

/// The levels, face maps and augmentations needed for cochains up to
/// cosimplicial degree `s_max + 1`, built once and shared across shifts.
#[derive(Debug)]
pub struct CotripleOracle {
    data: CotripleData,
    source: TruncatedAlgebra,
    coeff: Arc<TruncatedAlgebra>,
    levels: Vec<Level>,
    /// level-0 index of each `(degree, basis index)` of `A⁺`
    level0: Vec<(i64, usize)>,
    /// `faces[L][j][e]`: face `j` of element `e` of level `L`, in level `L−1`
    faces: Vec<Vec<Vec<SparseVec<Rational>>>>,
    /// iterated augmentation of each element into the coefficient algebra
    augment: Vec<Vec<Vec<Rational>>>,
    window_limited_from: (Option<i64>, Option<i64>),
}

impl CotripleOracle {
    pub fn new(data: &CotripleData, tw: DegreeWindow) -> Result<Self, ResolutionError> {
        let a = data.epsilon.source().clone();
        let bound = data.degree_bound.max(1);
        let positive = a.connectivity().admits(1);
        let sign = if positive { 1 } else { -1 };
        let commutative = a.flavor() == Flavor::Commutative;
        let source = TruncatedAlgebra::new(a.clone(), DegreeWindow::new(-bound, bound)?);

        let step = data
            .epsilon
            .target()
            .generators()
            .iter()
            .map(|g| g.degree.abs())
            .max()
            .unwrap_or(1);
        // augmentations land in degrees ±bound, module elements shifted by t
        let cw = DegreeWindow::new(
            (-bound).min(-bound + tw.t_min).min(tw.t_min) - 2 * step,
            bound.max(bound + tw.t_max).max(tw.t_max) + 2 * step,
        )?;
        let coeff = Arc::new(TruncatedAlgebra::new(data.epsilon.target().clone(), cw));

        // level 0: basis of A⁺
        let mut levels = Vec::new();
        let mut l0 = Level::default();
        let mut level0 = Vec::new();
        for k in 1..=bound {
            let d = sign * k;
            let n = source.dim(d).ok_or(AlgebraError::WindowClipped(d))?;
            if n > data.budget {
                return Err(ResolutionError::OracleTooLarge {
                    what: format!("level 0 in degree {d}"),
                    size: n,
                    budget: data.budget,
                });
            }
            for i in 0..n {
                l0.degrees.push(d);
                l0.parts.push(Vec::new());
                level0.push((d, i));
            }
        }
        levels.push(l0);

        for l in 1..=data.s_max + 1 {
            let next = Self::next_level(&levels[l - 1], bound, commutative, data.budget, l)?;
            levels.push(next);
        }

        let mut oracle = Self {
            data: data.clone(),
            source,
            coeff,
            levels,
            level0,
            faces: Vec::new(),
            augment: Vec::new(),
            window_limited_from: (None, None),
        };
        oracle.build_faces(commutative)?;
        oracle.build_augmentations()?;
        oracle.window_limited_from = oracle.coeff.support();
        Ok(oracle)
    }

    fn next_level(
        prev: &Level,
        bound: i64,
        commutative: bool,
        budget: usize,
        l: usize,
    ) -> Result<Level, ResolutionError> {
        let mut words: Vec<(i64, Vec<usize>)> = Vec::new();
        let mut counts: HashMap<i64, usize> = HashMap::new();
        let mut stack: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 0)];
        while let Some((word, deg)) = stack.pop() {
            let start = match (commutative, word.last()) {
                (true, Some(&e)) if prev.odd(e) => e + 1,
                (true, Some(&e)) => e,
                _ => 0,
            };
            for e in start..prev.degrees.len() {
                let d = deg + prev.degrees[e];
                if d.abs() > bound {
                    break;
                }
                let mut w = word.clone();
                w.push(e);
                let c = counts.entry(d).or_default();
                *c += 1;
                if *c > budget {
                    return Err(ResolutionError::OracleTooLarge {
                        what: format!("level {l} in degree {d}"),
                        size: *c,
                        budget,
                    });
                }
                words.push((d, w.clone()));
                stack.push((w, d));
            }
        }
        words.sort_by(|x, y| x.0.abs().cmp(&y.0.abs()).then_with(|| x.1.cmp(&y.1)));
        let mut level = Level::default();
        for (i, (d, w)) in words.into_iter().enumerate() {
            level.degrees.push(d);
            level.index.insert(w.clone(), i);
            level.parts.push(w);
        }
        Ok(level)
    }

    /// Looks up a word of level-`l−1` elements as an element of level `l`.
    fn lookup(&self, l: usize, word: &[usize], commutative: bool) -> Option<(bool, usize)> {
        let (neg, w) = canonical(&self.levels[l - 1], word, commutative)?;
        let idx = *self.levels[l].index.get(&w).expect("faces preserve degree");
        Some((neg, idx))
    }

    fn build_faces(&mut self, commutative: bool) -> Result<(), ResolutionError> {
        let mut faces: Vec<Vec<Vec<SparseVec<Rational>>>> = vec![Vec::new()];
        for l in 1..self.levels.len() {
            let mut per_j = Vec::with_capacity(l);
            for j in 0..l {
                let this = &*self;
                let prev_faces = &faces;
                let col: Vec<SparseVec<Rational>> = (0..self.levels[l].degrees.len())
                    .into_par_iter()
                    .map(|e| this.face(prev_faces, l, e, j, commutative))
                    .collect::<Result<_, _>>()?;
                per_j.push(col);
            }
            faces.push(per_j);
        }
        self.faces = faces;
        Ok(())
    }

    fn face(
        &self,
        faces: &[Vec<Vec<SparseVec<Rational>>>],
        l: usize,
        e: usize,
        j: usize,
        commutative: bool,
    ) -> Result<SparseVec<Rational>, ResolutionError> {
        let parts = &self.levels[l].parts[e];
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        if j == 0 && l == 1 {
            // the algebra structure map T̄(A⁺) → A⁺
            let (d0, i0) = self.level0[parts[0]];
            let mut deg = d0;
            let mut v = vec![Rational::zero(); self.source.dim(d0).unwrap_or(0)];
            v[i0] = Rational::one();
            for &p in &parts[1..] {
                let (d, i) = self.level0[p];
                let mut u = vec![Rational::zero(); self.source.dim(d).unwrap_or(0)];
                u[i] = Rational::one();
                v = self
                    .source
                    .mul(deg, &v, d, &u)
                    .ok_or(AlgebraError::WindowClipped(deg + d))?;
                deg += d;
            }
            let base = self
                .level0
                .partition_point(|&(d, _)| d.abs() < deg.abs());
            for (i, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    acc.insert(base + i, c);
                }
            }
        } else if j == 0 {
            // monad multiplication: concatenate the inner words
            let flat: Vec<usize> = parts
                .iter()
                .flat_map(|&p| self.levels[l - 1].parts[p].iter().copied())
                .collect();
            if let Some((neg, idx)) = self.lookup(l - 1, &flat, commutative) {
                acc.insert(idx, if neg { -Rational::one() } else { Rational::one() });
            }
        } else {
            // T̄ applied to face j−1 of each part, expanded multilinearly
            let mut terms: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
            for &p in parts {
                let f = &faces[l - 1][j - 1][p];
                let mut next = Vec::with_capacity(terms.len() * f.len());
                for (w, c) in &terms {
                    for (u, a) in f {
                        let mut w2 = w.clone();
                        w2.push(*u);
                        next.push((w2, c * a));
                    }
                }
                terms = next;
                if terms.is_empty() {
                    break;
                }
            }
            for (w, c) in terms {
                if let Some((neg, idx)) = self.lookup(l - 1, &w, commutative) {
                    let slot = acc.entry(idx).or_insert_with(Rational::zero);
                    *slot += if neg { -c } else { c };
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    fn build_augmentations(&mut self) -> Result<(), ResolutionError> {
        let y = &self.coeff;
        let mut augment = Vec::with_capacity(self.levels.len());
        let mut first = Vec::with_capacity(self.level0.len());
        for &(d, i) in &self.level0 {
            let m = &self.source.basis(d)[i];
            let img = self.data.epsilon.image_of_monomial(m);
            first.push(y.reduce(d, &img).ok_or(AlgebraError::WindowClipped(d))?);
        }
        augment.push(first);
        for l in 1..self.levels.len() {
            let prev: &Vec<Vec<Rational>> = &augment[l - 1];
            let lower = &self.levels[l - 1];
            let level = &self.levels[l];
            let col: Vec<Vec<Rational>> = (0..level.degrees.len())
                .into_par_iter()
                .map(|e| {
                    let mut v = y.one();
                    let mut deg = 0;
                    for &p in &level.parts[e] {
                        let d = lower.degrees[p];
                        v = y.mul(deg, &v, d, &prev[p]).ok_or(AlgebraError::WindowClipped(deg + d))?;
                        deg += d;
                    }
                    Ok(v)
                })
                .collect::<Result<_, ResolutionError>>()?;
            augment.push(col);
        }
        self.augment = augment;
        Ok(())
    }

    pub fn data(&self) -> &CotripleData {
        &self.data
    }

    /// Number of elements of `T̄^l(A⁺)` kept.
    pub fn level_size(&self, l: usize) -> usize {
        self.levels.get(l).map_or(0, |x| x.degrees.len())
    }

    /// Whether some source degree beyond the bound could meet a nonzero
    /// coefficient group at shift `t`.
    fn limited_at(&self, t: i64) -> bool {
        let bound = self.data.degree_bound.max(1);
        let (lo, hi) = self.window_limited_from;
        if self.source.presentation().connectivity().admits(1) {
            hi.is_none_or(|hi| hi - t > bound)
        } else {
            lo.is_none_or(|lo| lo - t < -bound)
        }
    }

    /// Offsets and sizes of the coefficient blocks of each element of level
    /// `l` at shift `t`.
    fn layout(&self, l: usize, t: i64) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.levels[l]
            .degrees
            .iter()
            .map(|&d| {
                let n = self.coeff.dim(d + t).unwrap_or(0);
                let b = (off, n);
                off += n;
                b
            })
            .collect()
    }

    /// The coboundary from cosimplicial degree `s` to `s + 1` at shift `t`.
    fn coboundary(&self, s: usize, t: i64) -> Result<RatMatrix, ResolutionError> {
        let y = &self.coeff;
        let src = self.layout(s, t);
        let tgt = self.layout(s + 1, t);
        let cols = src.last().map_or(0, |b| b.0 + b.1);
        let rows = tgt.last().map_or(0, |b| b.0 + b.1);
        let upper = &self.levels[s + 1];
        let lower = &self.levels[s];
        let mut triplets = Vec::new();
        for (w, &(roff, rn)) in tgt.iter().enumerate() {
            if rn == 0 {
                continue;
            }
            // δ^0: Leibniz extension through the augmentation
            let parts = &upper.parts[w];
            let k = parts.len();
            let mut prefix = vec![(0i64, y.one())];
            for &p in parts {
                let (d, v) = prefix.last().expect("nonempty");
                let d2 = lower.degrees[p];
                let next = y
                    .mul(*d, v, d2, &self.augment[s][p])
                    .ok_or(AlgebraError::WindowClipped(d + d2))?;
                prefix.push((d + d2, next));
            }
            let mut suffix = vec![(0i64, y.one()); k + 1];
            for i in (0..k).rev() {
                let p = parts[i];
                let d2 = lower.degrees[p];
                let (d, v) = &suffix[i + 1];
                let next = y
                    .mul(d2, &self.augment[s][p], *d, v)
                    .ok_or(AlgebraError::WindowClipped(d + d2))?;
                suffix[i] = (d + d2, next);
            }
            for (j, &p) in parts.iter().enumerate() {
                let (pd, pv) = &prefix[j];
                let (sd, sv) = &suffix[j + 1];
                if pv.iter().all(Zero::is_zero) || sv.iter().all(Zero::is_zero) {
                    continue;
                }
                let (coff, cn) = src[p];
                let md = lower.degrees[p] + t;
                let negative = (t * pd).rem_euclid(2) == 1;
                for b in 0..cn {
                    let mut unit = vec![Rational::zero(); cn];
                    unit[b] = Rational::one();
                    let left = y.mul(*pd, pv, md, &unit).ok_or(AlgebraError::WindowClipped(pd + md))?;
                    let val = y
                        .mul(pd + md, &left, *sd, sv)
                        .ok_or(AlgebraError::WindowClipped(pd + md + sd))?;
                    for (r, x) in val.into_iter().enumerate() {
                        if !x.is_zero() {
                            triplets.push((roff + r, coff + b, if negative { -x } else { x }));
                        }
                    }
                }
            }
            // δ^i, i ≥ 1: precomposition with face i − 1
            for i in 1..=s + 1 {
                for (u, c) in &self.faces[s + 1][i - 1][w] {
                    let (coff, cn) = src[*u];
                    debug_assert_eq!(cn, rn);
                    let c = if i % 2 == 1 { -c.clone() } else { c.clone() };
                    for r in 0..rn {
                        triplets.push((roff + r, coff + r, c.clone()));
                    }
                }
            }
        }
        Ok(RatMatrix::from_triplets(rows, cols, triplets)?)
    }

    /// Cochains in cosimplicial degrees `0..=s_max + 1` over the shift window
    /// `tw`. Cohomology is meaningful through `s_max`.
    pub fn complex_over(&self, tw: DegreeWindow) -> Result<OracleComplex, ResolutionError> {
        let top = self.data.s_max + 1;
        let ts: Vec<i64> = tw.degrees().collect();
        let per_t: Vec<(i64, Vec<RatMatrix>)> = ts
            .par_iter()
            .map(|&t| {
                let ms = (0..top)
                    .map(|s| self.coboundary(s, t))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((t, ms))
            })
            .collect::<Result<_, ResolutionError>>()?;
        let limited = ts.iter().any(|&t| self.limited_at(t));
        let mut terms = BTreeMap::new();
        for s in 0..=top {
            let dims = ts.iter().map(|&t| {
                let n: usize = self.layout(s, t).iter().map(|b| b.1).sum();
                (t, n)
            });
            let g = GradedDim::from_dims(tw, dims)?;
            terms.insert(s, if limited { g.mark_window_limited() } else { g });
        }
        let mut differentials = BTreeMap::new();
        for s in 0..top {
            let blocks = per_t.iter().map(|(t, ms)| (*t, ms[s].clone())).collect();
            differentials.insert(
                s,
                GradedMap::new(terms[&s].clone(), terms[&(s + 1)].clone(), 0, blocks)?,
            );
        }
        let complex = Complex::new(terms, differentials, "cotriple Moore complex")?;
        Ok(OracleComplex {
            complex,
            window_limited: limited,
        })
    }

    pub fn complex(&self, t: i64) -> Result<OracleComplex, ResolutionError> {
        self.complex_over(DegreeWindow::new(t, t)?)
    }
}

/// Builds the oracle for a single shift and returns its cochain complex.
pub fn cotriple_moore_complex(c: &CotripleData, t: i64) -> Result<OracleComplex, ResolutionError> {
    CotripleOracle::new(c, DegreeWindow::new(t, t)?)?.complex(t)
}

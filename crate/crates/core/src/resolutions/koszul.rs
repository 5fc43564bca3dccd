use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::ResolutionError;
use crate::algebra::{AlgebraPresentation, ModuleViaHom};
use crate::graded::{Complex, DegreeWindow, GradedDim, GradedMap};
use crate::{RatMatrix, Rational};

/// Polynomial algebra on even generators together with its exterior
/// suspension classes `σx_i` of bidegree `(1, |x_i|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KoszulData {
    base: Arc<AlgebraPresentation>,
    exterior: Vec<(String, i64)>,
}

impl KoszulData {
    pub fn new(base: Arc<AlgebraPresentation>) -> Result<Self, ResolutionError> {
        if !base.is_even_polynomial() {
            return Err(ResolutionError::NotPolynomial(format!(
                "{base} is not a polynomial algebra on even generators"
            )));
        }
        let exterior = base
            .generators()
            .iter()
            .map(|g| (format!("σ{}", g.name), g.degree))
            .collect();
        Ok(Self { base, exterior })
    }

    pub fn base(&self) -> &Arc<AlgebraPresentation> {
        &self.base
    }

    pub fn exterior(&self) -> &[(String, i64)] {
        &self.exterior
    }

    /// Index sets of size `s` with their total internal degree.
    fn subsets(&self, s: usize) -> Vec<(Vec<usize>, i64)> {
        let n = self.exterior.len();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            start: usize,
            n: usize,
            s: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, s, cur, out);
                cur.pop();
            }
        }
        let mut sets = Vec::new();
        rec(0, n, s, &mut cur, &mut sets);
        for set in sets {
            let d = set.iter().map(|&i| self.exterior[i].1).sum();
            out.push((set, d));
        }
        out
    }
}

fn unit_vector(n: usize, b: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[b] = Rational::one();
    v
}

/// `Hom(Λ[σx_1…σx_n], M)` with the Koszul transpose differential
/// `(dφ)(σ_I) = Σ_j (−1)^j (x_{i_j}·φ(σ_{I∖i_j}) − φ(σ_{I∖i_j})·x_{i_j})`,
/// internally graded by the shift `t`. Term `s` in shift `t` is
/// `⊕_{|I|=s} Y_{D_I+t}`.
pub fn koszul_hochschild_complex(
    k: &KoszulData,
    coeff: &ModuleViaHom,
    tw: DegreeWindow,
    s_max: usize,
) -> Result<Complex, ResolutionError> {
    if **coeff.epsilon().source() != *k.base {
        return Err(ResolutionError::CoefficientMismatch);
    }
    let y = coeff.target();
    let gens = k.base.generators();
    let eps: Vec<Vec<Rational>> = (0..gens.len())
        .map(|i| coeff.epsilon_of(&[i]).expect("generator degree inside the window"))
        .collect();
    // the complex is finite, so build all of it: truncating at s_max would
    // corrupt H^{s_max}
    let top = s_max.max(gens.len());
    let sets: Vec<Vec<(Vec<usize>, i64)>> = (0..=top + 1).map(|s| k.subsets(s)).collect();

    // (offset, dim) of each index set, per s and t
    let mut layout: Vec<BTreeMap<i64, Vec<(usize, usize)>>> = Vec::new();
    let mut terms = BTreeMap::new();
    for (s, ss) in sets.iter().enumerate() {
        let mut per_t = BTreeMap::new();
        let mut dims = Vec::new();
        let mut limited = false;
        for t in tw.degrees() {
            let mut off = 0;
            let mut blocks = Vec::with_capacity(ss.len());
            for (_, d) in ss {
                let n = y.dim(d + t).unwrap_or_else(|| {
                    limited = true;
                    0
                });
                blocks.push((off, n));
                off += n;
            }
            dims.push((t, off));
            per_t.insert(t, blocks);
        }
        layout.push(per_t);
        if s <= top {
            let g = GradedDim::from_dims(tw, dims)?;
            terms.insert(s, if limited { g.mark_window_limited() } else { g });
        }
    }

    let mut differentials = BTreeMap::new();
    for s in 0..top {
        let mut blocks = BTreeMap::new();
        for t in tw.degrees() {
            let src = &layout[s][&t];
            let tgt = &layout[s + 1][&t];
            let rows = tgt.iter().map(|b| b.1).sum();
            let cols = src.iter().map(|b| b.1).sum();
            let mut triplets = Vec::new();
            for (ti, (big, dbig)) in sets[s + 1].iter().enumerate() {
                let (roff, rn) = tgt[ti];
                if rn == 0 {
                    continue;
                }
                for (j, &i) in big.iter().enumerate() {
                    let small: Vec<usize> = big.iter().copied().filter(|&x| x != i).collect();
                    let si = sets[s]
                        .iter()
                        .position(|(set, _)| *set == small)
                        .expect("subset present");
                    let (coff, cn) = src[si];
                    let dsmall = dbig - gens[i].degree;
                    let xi = gens[i].degree;
                    let left_sign = if (t * xi).rem_euclid(2) == 1 { -1 } else { 1 };
                    let pos_sign = if j % 2 == 1 { -1 } else { 1 };
                    for b in 0..cn {
                        let m = unit_vector(cn, b);
                        let left = y.mul(xi, &eps[i], dsmall + t, &m).expect("inside window");
                        let right = y.mul(dsmall + t, &m, xi, &eps[i]).expect("inside window");
                        for (r, (l, rr)) in left.into_iter().zip(right).enumerate() {
                            let v = l * Rational::from_integer(left_sign.into()) - rr;
                            if !v.is_zero() {
                                triplets.push((
                                    roff + r,
                                    coff + b,
                                    v * Rational::from_integer(pos_sign.into()),
                                ));
                            }
                        }
                    }
                }
            }
            blocks.insert(t, RatMatrix::from_triplets(rows, cols, triplets)?);
        }
        differentials.insert(
            s,
            GradedMap::new(terms[&s].clone(), terms[&(s + 1)].clone(), 0, blocks)?,
        );
    }
    Ok(Complex::new(terms, differentials, "Koszul complex")?)
}

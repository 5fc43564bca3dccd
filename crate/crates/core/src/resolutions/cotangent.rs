use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::regularity::{regularity_check, Regularity, RegularityClass};
use super::ResolutionError;
use crate::algebra::{AlgebraPresentation, Flavor, ModuleViaHom, Poly, TruncatedAlgebra};
use crate::graded::{Complex, DegreeWindow, GradedDim, GradedMap};
use crate::{RatMatrix, Rational};

/// Two-term cotangent complex `⊕ B·df_j → ⊕ B·dg_i` of a complete
/// intersection `B = A/(f_1, …, f_m)`, with `df_j ↦ Σ_i ∂f_j/∂g_i · dg_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentData {
    base: Arc<AlgebraPresentation>,
    regularity: Regularity,
    /// `jacobian[j][i] = ∂f_j/∂g_i`
    jacobian: Vec<Vec<Poly>>,
}

/// Right graded partial derivative: `∂(P g S)/∂g = (−1)^{|g||S|} P S`.
fn partial(a: &AlgebraPresentation, f: &Poly, g: usize) -> Poly {
    let gd = a.generators()[g].degree;
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        for j in 0..m.len() {
            if m[j] != g {
                continue;
            }
            let sd = a.degree_of(&m[j + 1..]);
            let mut rest = m.clone();
            rest.remove(j);
            let c = if (gd * sd).rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
            out.add_term(rest, c);
        }
    }
    out
}

/// Verifies regularity in the window and builds the cotangent data.
pub fn cotangent_complex_ci(
    b: Arc<AlgebraPresentation>,
    w: DegreeWindow,
) -> Result<CotangentData, ResolutionError> {
    let reg = regularity_check(&b, w);
    if reg.class == RegularityClass::Unknown {
        return Err(ResolutionError::NotRegular(reg.evidence));
    }
    CotangentData::build(b, reg)
}

impl CotangentData {
    fn build(b: Arc<AlgebraPresentation>, regularity: Regularity) -> Result<Self, ResolutionError> {
        if b.flavor() != Flavor::Commutative {
            return Err(ResolutionError::NotPolynomial(
                "cotangent complex needs a commutative presentation".into(),
            ));
        }
        let jacobian = b
            .relations()
            .iter()
            .map(|f| (0..b.generators().len()).map(|i| partial(&b, f, i)).collect())
            .collect();
        Ok(Self {
            base: b,
            regularity,
            jacobian,
        })
    }

    /// Takes the relations as a regular sequence without checking; the
    /// result is flagged window-limited.
    pub fn asserted(b: Arc<AlgebraPresentation>) -> Result<Self, ResolutionError> {
        let reg = Regularity {
            class: RegularityClass::CompleteIntersection,
            window_limited: true,
            evidence: "asserted".into(),
        };
        Self::build(b, reg)
    }

    pub fn base(&self) -> &Arc<AlgebraPresentation> {
        &self.base
    }

    pub fn regularity(&self) -> &Regularity {
        &self.regularity
    }

    pub fn jacobian(&self) -> &[Vec<Poly>] {
        &self.jacobian
    }

    /// The complex itself as B-modules, reindexed cohomologically: term 0 is
    /// `⊕ B·df_j`, term 1 is `⊕ B·dg_i`, graded by internal degree over `w`.
    pub fn linear_complex(&self, w: DegreeWindow) -> Result<Complex, ResolutionError> {
        let b = &self.base;
        let gdeg: Vec<i64> = b.generators().iter().map(|g| g.degree).collect();
        let fdeg: Vec<i64> = (0..b.relations().len()).map(|j| b.relation_degree(j)).collect();
        let lo = w.t_min - gdeg.iter().chain(&fdeg).copied().max().unwrap_or(0).max(0);
        let hi = w.t_max - gdeg.iter().chain(&fdeg).copied().min().unwrap_or(0).min(0);
        let alg = TruncatedAlgebra::new(b.clone(), DegreeWindow::new(lo, hi)?);
        let dims_of = |shifts: &[i64], d: i64| -> Vec<usize> {
            shifts.iter().map(|s| alg.dim(d - s).unwrap_or(0)).collect()
        };
        let mut t0 = Vec::new();
        let mut t1 = Vec::new();
        let mut blocks = BTreeMap::new();
        for d in w.degrees() {
            let rows = dims_of(&gdeg, d);
            let cols = dims_of(&fdeg, d);
            t0.push((d, cols.iter().sum()));
            t1.push((d, rows.iter().sum()));
            let mut triplets = Vec::new();
            let mut coff = 0;
            for (j, &cn) in cols.iter().enumerate() {
                let mut roff = 0;
                for (i, &rn) in rows.iter().enumerate() {
                    let entry = &self.jacobian[j][i];
                    let ed = fdeg[j] - gdeg[i];
                    if let Some(a) = alg.reduce(ed, entry) {
                        for c in 0..cn {
                            let mut unit = vec![Rational::zero(); cn];
                            unit[c] = num_traits::One::one();
                            let v = alg
                                .mul(d - fdeg[j], &unit, ed, &a)
                                .ok_or(crate::algebra::AlgebraError::WindowClipped(d))?;
                            for (r, x) in v.into_iter().enumerate() {
                                if !x.is_zero() {
                                    triplets.push((roff + r, coff + c, x));
                                }
                            }
                        }
                    }
                    roff += rn;
                }
                coff += cn;
            }
            let nrows = rows.iter().sum();
            blocks.insert(d, RatMatrix::from_triplets(nrows, coff, triplets)?);
        }
        let t0 = GradedDim::from_dims(w, t0)?;
        let t1 = GradedDim::from_dims(w, t1)?;
        let d = GradedMap::new(t0.clone(), t1.clone(), 0, blocks)?;
        Ok(Complex::new(
            [(0, t0), (1, t1)].into(),
            [(0, d)].into(),
            "cotangent complex",
        )?)
    }

    /// `Hom_B(L, Σ^{-t} Y)` over ε, graded by the shift `t`: term 0 is
    /// `⊕_i Y_{|g_i|+t}`, term 1 is `⊕_j Y_{|f_j|+t}`. Its cohomology is
    /// André–Quillen cohomology in degrees 0 and 1.
    pub fn hom_complex(
        &self,
        coeff: &ModuleViaHom,
        tw: DegreeWindow,
    ) -> Result<Complex, ResolutionError> {
        if **coeff.epsilon().source() != *self.base {
            return Err(ResolutionError::CoefficientMismatch);
        }
        let b = &self.base;
        let y = coeff.target();
        let eps = coeff.epsilon();
        let gdeg: Vec<i64> = b.generators().iter().map(|g| g.degree).collect();
        let fdeg: Vec<i64> = (0..b.relations().len()).map(|j| b.relation_degree(j)).collect();
        // ε of each Jacobian entry, in degree |f_j| − |g_i|
        let eps_jac: Vec<Vec<Option<Vec<Rational>>>> = self
            .jacobian
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, a)| y.reduce(fdeg[j] - gdeg[i], &eps.image_of_poly(a)))
                    .collect()
            })
            .collect();
        let mut limited = self.regularity.window_limited;
        let mut t0 = Vec::new();
        let mut t1 = Vec::new();
        let mut blocks = BTreeMap::new();
        for t in tw.degrees() {
            let cols: Vec<usize> = gdeg
                .iter()
                .map(|g| y.dim(g + t).ok_or(crate::algebra::AlgebraError::WindowClipped(g + t)))
                .collect::<Result<_, _>>()?;
            let rows: Vec<usize> = fdeg
                .iter()
                .map(|f| {
                    y.dim(f + t).unwrap_or_else(|| {
                        limited = true;
                        0
                    })
                })
                .collect();
            t0.push((t, cols.iter().sum()));
            t1.push((t, rows.iter().sum()));
            let mut triplets = Vec::new();
            let mut roff = 0;
            for (j, &rn) in rows.iter().enumerate() {
                let mut coff = 0;
                for (i, &cn) in cols.iter().enumerate() {
                    let ed = fdeg[j] - gdeg[i];
                    if rn > 0 && cn > 0 {
                        let a = eps_jac[j][i]
                            .clone()
                            .ok_or(crate::algebra::AlgebraError::WindowClipped(ed))?;
                        let sign = (t * ed).rem_euclid(2) == 1;
                        for c in 0..cn {
                            let mut unit = vec![Rational::zero(); cn];
                            unit[c] = num_traits::One::one();
                            let v = y
                                .mul(ed, &a, gdeg[i] + t, &unit)
                                .ok_or(crate::algebra::AlgebraError::WindowClipped(fdeg[j] + t))?;
                            for (r, x) in v.into_iter().enumerate() {
                                if !x.is_zero() {
                                    triplets.push((roff + r, coff + c, if sign { -x } else { x }));
                                }
                            }
                        }
                    }
                    coff += cn;
                }
                roff += rn;
            }
            let ncols = cols.iter().sum();
            blocks.insert(t, RatMatrix::from_triplets(roff, ncols, triplets)?);
        }
        let mk = |dims| -> Result<GradedDim, ResolutionError> {
            let g = GradedDim::from_dims(tw, dims)?;
            Ok(if limited { g.mark_window_limited() } else { g })
        };
        let (t0, t1) = (mk(t0)?, mk(t1)?);
        let d = GradedMap::new(t0.clone(), t1.clone(), 0, blocks)?;
        Ok(Complex::new(
            [(0, t0), (1, t1)].into(),
            [(0, d)].into(),
            "cotangent hom complex",
        )?)
    }
}

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{BigradedDims, CohomologyError, Method};
use crate::algebra::{derivations, AlgebraError, AlgebraHom, AlgebraPresentation, ModuleViaHom};
use crate::exactlin::rank;
use crate::graded::DegreeWindow;
use crate::resolutions::{
    cotangent_complex_ci, koszul_hochschild_complex, CotripleData, CotripleOracle, KoszulData,
};
use crate::{RatMatrix, Rational};

/// Truncation used whenever a computation falls back to the cotriple oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleSettings {
    pub degree_bound: i64,
    pub budget: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            degree_bound: 12,
            budget: 20_000,
        }
    }
}

/// Cohomology of the cotriple complex of `ε: A → Y` for `s ≤ s_max`.
pub fn cotriple_cohomology(
    eps: &AlgebraHom,
    s_max: usize,
    tw: DegreeWindow,
    settings: &OracleSettings,
) -> Result<BigradedDims, CohomologyError> {
    let data = CotripleData::new(eps.clone(), settings.degree_bound)
        .with_s_max(s_max)
        .with_budget(settings.budget);
    let oracle = CotripleOracle::new(&data, tw)?.complex_over(tw)?;
    let mut out = BigradedDims::new(tw, s_max);
    for s in 0..=s_max {
        let h = oracle.complex.cohomology(s)?;
        for t in tw.degrees() {
            out.insert(s, t, h.dim(t), Method::CotripleOracle, oracle.window_limited);
        }
    }
    Ok(out)
}

/// The map `Y_t → ⊕_g Y_{|g|+t}`, `m ↦ (g ↦ ±ε(g)m − mε(g))`: its kernel
/// is `HH⁰` and its image the inner derivations.
fn inner_derivations(
    a: &AlgebraPresentation,
    coeff: &ModuleViaHom,
    t: i64,
) -> Result<RatMatrix, CohomologyError> {
    let y = coeff.target();
    let cols = y.dim(t).ok_or(AlgebraError::WindowClipped(t))?;
    let mut triplets = Vec::new();
    let mut roff = 0;
    for (i, g) in a.generators().iter().enumerate() {
        let d = g.degree + t;
        let rn = y.dim(d).ok_or(AlgebraError::WindowClipped(d))?;
        let eg = coeff
            .epsilon_of(&[i])
            .ok_or(AlgebraError::WindowClipped(g.degree))?;
        let negative = (t * g.degree).rem_euclid(2) == 1;
        for c in 0..cols {
            let mut unit = vec![Rational::zero(); cols];
            unit[c] = Rational::one();
            let left = y.mul(g.degree, &eg, t, &unit).ok_or(AlgebraError::WindowClipped(d))?;
            let right = y.mul(t, &unit, g.degree, &eg).ok_or(AlgebraError::WindowClipped(d))?;
            for (r, (l, rr)) in left.into_iter().zip(right).enumerate() {
                let v = if negative { -l } else { l } - rr;
                if !v.is_zero() {
                    triplets.push((roff + r, c, v));
                }
            }
        }
        roff += rn;
    }
    Ok(RatMatrix::from_triplets(roff, cols, triplets)?)
}

/// `HH^s(R; M)` in each shift. Even polynomial algebras use the Koszul
/// complex; anything else uses inner derivations and derivations in degrees
/// 0 and 1 and the associative cotriple oracle above that.
pub fn hochschild(
    r: &Arc<AlgebraPresentation>,
    coeff: &ModuleViaHom,
    s_max: usize,
    tw: DegreeWindow,
    settings: &OracleSettings,
) -> Result<BigradedDims, CohomologyError> {
    let mut out = BigradedDims::new(tw, s_max);
    if r.is_even_polynomial() {
        let k = KoszulData::new(r.clone())?;
        let c = koszul_hochschild_complex(&k, coeff, tw, s_max)?;
        for s in 0..=s_max {
            let h = c.cohomology(s)?;
            for t in tw.degrees() {
                out.insert(s, t, h.dim(t), Method::Koszul, h.window_limited());
            }
        }
        return Ok(out);
    }
    for t in tw.degrees() {
        let ad = inner_derivations(r, coeff, t)?;
        let inner = rank(&ad);
        let der = derivations(r, coeff, t)?;
        out.insert(0, t, ad.cols() - inner, Method::Derivations, false);
        if s_max >= 1 {
            out.insert(1, t, der.dim - inner, Method::Derivations, der.window_limited);
        }
    }
    if s_max >= 2 {
        let assoc = Arc::new(r.as_associative());
        let eps = AlgebraHom::new(
            assoc,
            coeff.epsilon().target().clone(),
            coeff.epsilon().images().to_vec(),
        )?;
        let higher = cotriple_cohomology(&eps, s_max - 1, tw, settings)?;
        for ((s, t), e) in higher.entries {
            if s >= 1 {
                out.entries.insert((s + 1, t), e);
            }
        }
    }
    Ok(out)
}

/// `AQ^s(B; M)` in each shift, from the two-term cotangent complex; zero
/// above degree 1.
pub fn andre_quillen(
    b: &Arc<AlgebraPresentation>,
    coeff: &ModuleViaHom,
    s_max: usize,
    tw: DegreeWindow,
) -> Result<BigradedDims, CohomologyError> {
    let reach = b
        .generators()
        .iter()
        .map(|g| g.degree.abs())
        .chain((0..b.relations().len()).map(|k| b.relation_degree(k).abs()))
        .max()
        .unwrap_or(0);
    let r = (4 * reach).max(12);
    let cot = cotangent_complex_ci(b.clone(), DegreeWindow::new(-r, r)?)?;
    let c = cot.hom_complex(coeff, tw)?;
    let mut out = BigradedDims::new(tw, s_max);
    for s in 0..=s_max {
        let h = if s <= 1 { Some(c.cohomology(s)?) } else { None };
        for t in tw.degrees() {
            let (dim, limited) = h
                .as_ref()
                .map_or((0, cot.regularity().window_limited), |h| (h.dim(t), h.window_limited()));
            out.insert(s, t, dim, Method::Cotangent, limited);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{heisenberg, q};
    use crate::algebra::Flavor;
    use crate::resolutions::ResolutionError;

    fn w(a: i64, b: i64) -> DegreeWindow {
        DegreeWindow::new(a, b).unwrap()
    }

    fn poly(gens: &[(&str, i64)]) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::free(Flavor::Commutative, gens).unwrap())
    }

    #[test]
    fn one_generator_koszul_dims() {
        let r = poly(&[("x1", 2)]);
        let m = ModuleViaHom::new(AlgebraHom::identity(r.clone()), w(0, 30));
        let hh = hochschild(&r, &m, 3, w(-2, 8), &OracleSettings::default()).unwrap();
        for t in -2..=8 {
            let r_t = usize::from(t >= 0 && t % 2 == 0);
            assert_eq!(hh.dim(0, t), r_t);
            // HH¹ at t is R_{t+2}
            let shifted = usize::from(t >= -2 && t % 2 == 0);
            assert_eq!(hh.dim(1, t), shifted);
            assert_eq!(hh.dim(2, t), 0);
            assert_eq!(hh.get(1, t).unwrap().method, Method::Koszul);
        }
        assert_eq!(hh.dim(1, 0), 1);
    }

    #[test]
    fn three_generators_vanish_above_three() {
        let r = poly(&[("x1", 2), ("x2", 4), ("x3", 6)]);
        let m = ModuleViaHom::new(AlgebraHom::identity(r.clone()), w(0, 40));
        let hh = hochschild(&r, &m, 5, w(0, 6), &OracleSettings::default()).unwrap();
        for t in 0..=6 {
            assert_eq!(hh.dim(4, t), 0);
            assert_eq!(hh.dim(5, t), 0);
        }
        assert!(hh.dim(3, 0) > 0);
    }

    #[test]
    fn oracle_route_agrees_with_koszul() {
        // the same polynomial algebra, but presented so the fast path is refused
        let r = poly(&[("x1", 2)]);
        let m = ModuleViaHom::new(AlgebraHom::identity(r.clone()), w(0, 30));
        let fast = hochschild(&r, &m, 2, w(0, 4), &OracleSettings::default()).unwrap();
        let assoc = Arc::new(r.as_associative());
        let ma = ModuleViaHom::new(AlgebraHom::identity(assoc.clone()), w(0, 30));
        let settings = OracleSettings {
            degree_bound: 8,
            ..Default::default()
        };
        let slow = hochschild(&assoc, &ma, 2, w(0, 4), &settings).unwrap();
        for s in 0..=2 {
            for t in 0..=4 {
                assert_eq!(slow.dim(s, t), fast.dim(s, t), "s = {s}, t = {t}");
            }
        }
        assert_eq!(slow.get(2, 0).unwrap().method, Method::CotripleOracle);
    }

    #[test]
    fn hopf_andre_quillen() {
        let b = Arc::new(
            AlgebraPresentation::from_names(
                Flavor::Commutative,
                &[("e", -2)],
                &[vec![(q(1), vec!["e", "e"])]],
            )
            .unwrap(),
        );
        let y = Arc::new(AlgebraPresentation::free(Flavor::Commutative, &[("y", -3)]).unwrap());
        let m = ModuleViaHom::new(AlgebraHom::trivial(b.clone(), y), w(-20, 20));
        let aq = andre_quillen(&b, &m, 2, w(1, 6)).unwrap();
        let nonzero: Vec<(usize, i64)> = aq
            .entries
            .iter()
            .filter(|(_, e)| e.dim > 0)
            .map(|(k, _)| *k)
            .collect();
        assert_eq!(nonzero, vec![(0, 2), (1, 1), (1, 4)]);
        assert!(aq.entries.values().all(|e| e.dim <= 1 && !e.window_limited));
    }

    #[test]
    fn smooth_andre_quillen_vanishes_above_zero() {
        let b = poly(&[("x1", 2), ("x2", 4), ("x3", 6)]);
        let m = ModuleViaHom::new(AlgebraHom::identity(b.clone()), w(0, 30));
        let aq = andre_quillen(&b, &m, 2, w(0, 8)).unwrap();
        for t in 0..=8 {
            assert_eq!(aq.dim(1, t), 0);
            assert_eq!(aq.dim(2, t), 0);
        }
        // one value per generator in Y_{|g|}: 1 + 2 + 3
        assert_eq!(aq.dim(0, 0), 6);
    }

    #[test]
    fn heisenberg_is_not_regular() {
        let h = Arc::new(heisenberg());
        let y = Arc::new(AlgebraPresentation::free(Flavor::Commutative, &[("u", -2)]).unwrap());
        let m = ModuleViaHom::new(AlgebraHom::trivial(h.clone(), y), w(-10, 10));
        assert!(matches!(
            andre_quillen(&h, &m, 2, w(1, 2)),
            Err(CohomologyError::Resolution(ResolutionError::NotRegular(_)))
        ));
    }
}

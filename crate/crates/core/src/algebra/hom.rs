use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::truncated::TruncatedAlgebra;
use super::{AlgebraError, AlgebraPresentation, Monomial, Poly};
use crate::exactlin::rank_kernel_image;
use crate::graded::DegreeWindow;
use crate::{RatMatrix, Rational};

/// Map of presented algebras given by generator images.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraHom {
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<Poly>,
    base_point: bool,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<Poly>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != source.generators().len() {
            return Err(AlgebraError::ImageCount {
                got: images.len(),
                want: source.generators().len(),
            });
        }
        let mut canon = Vec::with_capacity(images.len());
        for (g, img) in source.generators().iter().zip(images) {
            let mut p = Poly::zero();
            for (m, c) in img.terms() {
                if m.iter().any(|&i| i >= target.generators().len()) {
                    return Err(AlgebraError::UnknownGenerator(format!("{m:?}")));
                }
                if target.degree_of(m) != g.degree {
                    return Err(AlgebraError::InhomogeneousImage {
                        generator: g.name.clone(),
                        degree: g.degree,
                    });
                }
                if let Some((s, m)) = target.canonical(m) {
                    p.add_term(m, c * Rational::from_integer(s.into()));
                }
            }
            canon.push(p);
        }
        Ok(Self {
            source,
            target,
            images: canon,
            base_point: false,
        })
    }

    /// Images given by generator name; unnamed generators go to zero.
    pub fn from_names(
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: &[(&str, Vec<(Rational, Vec<&str>)>)],
    ) -> Result<Self, AlgebraError> {
        let mut polys = vec![Poly::zero(); source.generators().len()];
        for (name, terms) in images {
            let g = source
                .generator_index(name)
                .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            for (c, word) in terms {
                let m = word
                    .iter()
                    .map(|n| {
                        target
                            .generator_index(n)
                            .ok_or_else(|| AlgebraError::UnknownGenerator(n.to_string()))
                    })
                    .collect::<Result<Monomial, _>>()?;
                polys[g].add_term(m, c.clone());
            }
        }
        Self::new(source, target, polys)
    }

    /// Every generator to zero; always a homomorphism since relations have
    /// no constant term.
    pub fn trivial(source: Arc<AlgebraPresentation>, target: Arc<AlgebraPresentation>) -> Self {
        let n = source.generators().len();
        Self {
            source,
            target,
            images: vec![Poly::zero(); n],
            base_point: false,
        }
    }

    pub fn identity(a: Arc<AlgebraPresentation>) -> Self {
        let images = (0..a.generators().len())
            .map(|i| Poly::monomial(vec![i], Rational::one()))
            .collect();
        Self {
            source: a.clone(),
            target: a,
            images,
            base_point: false,
        }
    }

    /// Marks this map as the base point ε of a spectral sequence.
    pub fn as_base_point(mut self) -> Self {
        self.base_point = true;
        self
    }

    pub fn is_base_point(&self) -> bool {
        self.base_point
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Image of a source word as a target polynomial.
    pub fn image_of_monomial(&self, m: &[usize]) -> Poly {
        let mut acc = Poly::monomial(Vec::new(), Rational::one());
        for &g in m {
            acc = self.target.mul_poly(&acc, &self.images[g]);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn image_of_poly(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            for (mm, cc) in self.image_of_monomial(m).terms() {
                out.add_term(mm.clone(), c * cc);
            }
        }
        out
    }
}

/// The target of ε viewed as a module over the source: `a · n = ε(a) n`.
#[derive(Debug, Clone)]
pub struct ModuleViaHom {
    eps: AlgebraHom,
    target: Arc<TruncatedAlgebra>,
}

impl ModuleViaHom {
    /// `window` bounds the internal degrees of the target that are computed.
    pub fn new(eps: AlgebraHom, window: DegreeWindow) -> Self {
        let target = Arc::new(TruncatedAlgebra::new(eps.target.clone(), window));
        Self { eps, target }
    }

    pub fn with_target(eps: AlgebraHom, target: Arc<TruncatedAlgebra>) -> Self {
        assert_eq!(*eps.target, *target.presentation(), "truncation of a different algebra");
        Self { eps, target }
    }

    pub fn epsilon(&self) -> &AlgebraHom {
        &self.eps
    }

    pub fn target(&self) -> &TruncatedAlgebra {
        &self.target
    }

    pub fn target_arc(&self) -> Arc<TruncatedAlgebra> {
        self.target.clone()
    }

    /// ε of a source word as a dense target element.
    pub fn epsilon_of(&self, m: &[usize]) -> Option<Vec<Rational>> {
        let d = self.eps.source.degree_of(m);
        self.target.reduce(d, &self.eps.image_of_monomial(m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomCheck {
    Valid,
    Invalid { witness: String },
    /// Relations whose degree leaves the window could not be checked.
    WindowLimited { unchecked: Vec<String> },
}

/// Substitutes the images into every relation and reduces in the target.
pub fn check_hom(h: &AlgebraHom, w: DegreeWindow) -> HomCheck {
    let t = TruncatedAlgebra::new(h.target.clone(), w);
    let mut unchecked = Vec::new();
    for (k, r) in h.source.relations().iter().enumerate() {
        let e = h.source.relation_degree(k);
        match t.reduce(e, &h.image_of_poly(r)) {
            None => unchecked.push(h.source.poly_label(r)),
            Some(v) if v.iter().any(|x| !x.is_zero()) => {
                return HomCheck::Invalid {
                    witness: h.source.poly_label(r),
                }
            }
            Some(_) => {}
        }
    }
    if unchecked.is_empty() {
        HomCheck::Valid
    } else {
        HomCheck::WindowLimited { unchecked }
    }
}

/// Polynomial in the hom-set parameters; keys are sorted parameter indices
/// with repetition.
type ParamPoly = BTreeMap<Vec<usize>, Rational>;

fn param_mul(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    let mut out = ParamPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            m.extend_from_slice(mb);
            m.sort_unstable();
            let slot = out.entry(m).or_insert_with(Rational::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn param_label(p: &ParamPoly, names: &[String]) -> String {
    p.iter()
        .map(|(m, c)| {
            let vars: Vec<&str> = m.iter().map(|&i| names[i].as_str()).collect();
            let mono = if vars.is_empty() { "1".to_string() } else { vars.join("*") };
            if c.is_one() {
                mono
            } else {
                format!("({c})*{mono}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintStatus {
    IdenticallyZero,
    /// Nonzero polynomial equations, reported rather than solved.
    Polynomials(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomParametrization {
    /// `generator:target basis element` for each coefficient.
    pub parameters: Vec<String>,
    /// Parameter count per source generator.
    pub per_generator: Vec<(String, usize)>,
    pub constraints: ConstraintStatus,
    pub window_limited: bool,
}

impl HomParametrization {
    pub fn free_parameter_count(&self) -> usize {
        self.parameters.len()
    }

    /// Dimension of the hom set when it is an affine space.
    pub fn affine_dimension(&self) -> Option<usize> {
        match self.constraints {
            ConstraintStatus::IdenticallyZero => Some(self.parameters.len()),
            ConstraintStatus::Polynomials(_) => None,
        }
    }
}

/// One coefficient per (generator, target basis element of the same degree);
/// constraints come from substituting generic images into the relations.
pub fn hom_parametrization(
    source: &AlgebraPresentation,
    target: &AlgebraPresentation,
    w: DegreeWindow,
) -> HomParametrization {
    let t = TruncatedAlgebra::new(Arc::new(target.clone()), w);
    let mut names = Vec::new();
    let mut per_generator = Vec::new();
    let mut generic: Vec<Option<Vec<ParamPoly>>> = Vec::new();
    let mut window_limited = false;
    for g in source.generators() {
        match t.dim(g.degree) {
            None => {
                window_limited = true;
                per_generator.push((g.name.clone(), 0));
                generic.push(None);
            }
            Some(n) => {
                let mut coords = Vec::with_capacity(n);
                for k in 0..n {
                    let p = names.len();
                    names.push(format!("{}:{}", g.name, t.label(g.degree, k)));
                    coords.push(ParamPoly::from([(vec![p], Rational::one())]));
                }
                per_generator.push((g.name.clone(), n));
                generic.push(Some(coords));
            }
        }
    }
    let mut constraints = Vec::new();
    'relations: for (k, r) in source.relations().iter().enumerate() {
        let e = source.relation_degree(k);
        let Some(n) = t.dim(e) else {
            window_limited = true;
            continue;
        };
        let mut value = vec![ParamPoly::new(); n];
        for (m, c) in r.terms() {
            // running product of generic images, as coordinates in the target
            let mut acc: Vec<ParamPoly> = vec![ParamPoly::from([(Vec::new(), c.clone())])];
            let mut deg = 0;
            for &g in m {
                let gd = source.generators()[g].degree;
                let Some(img) = &generic[g] else {
                    window_limited = true;
                    continue 'relations;
                };
                let Some(nd) = t.dim(deg + gd) else {
                    window_limited = true;
                    continue 'relations;
                };
                let mut next = vec![ParamPoly::new(); nd];
                for (i, a) in acc.iter().enumerate() {
                    if a.is_empty() {
                        continue;
                    }
                    for (j, b) in img.iter().enumerate() {
                        let ab = param_mul(a, b);
                        let prod = t.mul_basis(deg, i, gd, j).expect("degree known");
                        for (kk, s) in prod.iter() {
                            for (mono, coef) in &ab {
                                let slot = next[*kk].entry(mono.clone()).or_insert_with(Rational::zero);
                                *slot += coef * s;
                            }
                        }
                    }
                }
                for p in next.iter_mut() {
                    p.retain(|_, c| !c.is_zero());
                }
                acc = next;
                deg += gd;
            }
            for (slot, a) in value.iter_mut().zip(acc) {
                for (mono, coef) in a {
                    let s = slot.entry(mono).or_insert_with(Rational::zero);
                    *s += coef;
                }
            }
        }
        for p in value.iter_mut() {
            p.retain(|_, c| !c.is_zero());
            if !p.is_empty() {
                constraints.push(param_label(p, &names));
            }
        }
    }
    HomParametrization {
        parameters: names,
        per_generator,
        constraints: if constraints.is_empty() {
            ConstraintStatus::IdenticallyZero
        } else {
            ConstraintStatus::Polynomials(constraints)
        },
        window_limited,
    }
}

/// The linearized Leibniz map for derivations `A → Σ^{-t} Y` over ε: columns
/// are generator values in `Y_{|g|+t}`, rows are relation values in
/// `Y_{|r|+t}`. Its kernel is the derivations, its cokernel the first
/// cotangent cohomology in the complete-intersection case.
#[derive(Debug, Clone, PartialEq)]
pub struct LeibnizSystem {
    pub t: i64,
    /// (generator index, dimension of its value space)
    pub column_blocks: Vec<(usize, usize)>,
    /// (relation index, dimension of its value space); relations outside the
    /// window are absent.
    pub row_blocks: Vec<(usize, usize)>,
    pub matrix: RatMatrix,
    pub window_limited: bool,
}

fn block_offsets(blocks: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    let mut off = 0;
    blocks
        .iter()
        .map(|&(k, n)| {
            let o = off;
            off += n;
            (k, o)
        })
        .collect()
}

pub fn leibniz_system(
    a: &AlgebraPresentation,
    coeff: &ModuleViaHom,
    t: i64,
) -> Result<LeibnizSystem, AlgebraError> {
    if *coeff.eps.source != *a {
        return Err(AlgebraError::NotPolynomial(
            "coefficient module is over a different algebra".into(),
        ));
    }
    let y = coeff.target();
    let mut column_blocks = Vec::new();
    for (i, g) in a.generators().iter().enumerate() {
        let d = g.degree + t;
        let n = y.dim(d).ok_or(AlgebraError::WindowClipped(d))?;
        column_blocks.push((i, n));
    }
    let mut row_blocks = Vec::new();
    let mut window_limited = false;
    for k in 0..a.relations().len() {
        match y.dim(a.relation_degree(k) + t) {
            Some(n) => row_blocks.push((k, n)),
            None => window_limited = true,
        }
    }
    let col_off = block_offsets(&column_blocks);
    let row_off = block_offsets(&row_blocks);
    let ncols: usize = column_blocks.iter().map(|b| b.1).sum();
    let nrows: usize = row_blocks.iter().map(|b| b.1).sum();
    let mut triplets = Vec::new();
    for &(k, nr) in &row_blocks {
        if nr == 0 {
            continue;
        }
        let target_deg = a.relation_degree(k) + t;
        for (m, c) in a.relations()[k].terms() {
            for j in 0..m.len() {
                let g = m[j];
                let ncol = column_blocks[g].1;
                if ncol == 0 {
                    continue;
                }
                let (prefix, suffix) = (&m[..j], &m[j + 1..]);
                let pd = a.degree_of(prefix);
                let sd = a.degree_of(suffix);
                let vd = a.generators()[g].degree + t;
                let ep = coeff.epsilon_of(prefix).ok_or(AlgebraError::WindowClipped(pd))?;
                let es = coeff.epsilon_of(suffix).ok_or(AlgebraError::WindowClipped(sd))?;
                if ep.iter().all(Zero::is_zero) || es.iter().all(Zero::is_zero) {
                    continue;
                }
                let sign = if (t * pd).rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                for b in 0..ncol {
                    let mut unit = vec![Rational::zero(); ncol];
                    unit[b] = Rational::one();
                    let left = y
                        .mul(pd, &ep, vd, &unit)
                        .ok_or(AlgebraError::WindowClipped(pd + vd))?;
                    let v = y
                        .mul(pd + vd, &left, sd, &es)
                        .ok_or(AlgebraError::WindowClipped(target_deg))?;
                    for (r, x) in v.into_iter().enumerate() {
                        if !x.is_zero() {
                            triplets.push((row_off[&k] + r, col_off[&g] + b, &sign * x));
                        }
                    }
                }
            }
        }
    }
    Ok(LeibnizSystem {
        t,
        column_blocks,
        row_blocks,
        matrix: RatMatrix::from_triplets(nrows, ncols, triplets)?,
        window_limited,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationSpace {
    pub dim: usize,
    /// Each basis derivation as (generator name, value in the target).
    pub basis: Vec<Vec<(String, String)>>,
    pub window_limited: bool,
}

/// Derivations `A → Σ^{-t} Y` over ε: a generator `g` goes to an element of
/// `Y_{|g|+t}`, subject to the Leibniz rule on every relation.
pub fn derivations(
    a: &AlgebraPresentation,
    coeff: &ModuleViaHom,
    t: i64,
) -> Result<DerivationSpace, AlgebraError> {
    let sys = leibniz_system(a, coeff, t)?;
    let rki = rank_kernel_image(&sys.matrix);
    let offsets = block_offsets(&sys.column_blocks);
    let y = coeff.target();
    let basis = rki
        .kernel_basis
        .iter()
        .map(|v| {
            sys.column_blocks
                .iter()
                .filter(|(_, n)| *n > 0)
                .filter_map(|&(g, n)| {
                    let d = a.generators()[g].degree + t;
                    let o = offsets[&g];
                    let terms: Vec<String> = (0..n)
                        .filter(|&b| !v[o + b].is_zero())
                        .map(|b| format!("({}) {}", v[o + b], y.label(d, b)))
                        .collect();
                    (!terms.is_empty()).then(|| (a.generators()[g].name.clone(), terms.join(" + ")))
                })
                .collect()
        })
        .collect();
    Ok(DerivationSpace {
        dim: rki.kernel_basis.len(),
        basis,
        window_limited: sys.window_limited,
    })
}

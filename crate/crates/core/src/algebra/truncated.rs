use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use super::free::monomials_of_degree;
use super::{AlgebraError, AlgebraPresentation, Flavor, Monomial, Poly};
use crate::exactlin::{rank, row_reduce, SparseVec};
use crate::graded::{DegreeWindow, GradedDim};
use crate::{RatMatrix, Rational};

#[derive(Debug)]
struct DegreePart {
    basis: Vec<Monomial>,
    /// Coordinates of every canonical monomial of this degree in `basis`
    /// (commutative flavor only).
    normal_forms: HashMap<Monomial, SparseVec<Rational>>,
    /// Coordinates of `g · b_j` for a generator `g` and basis element `b_j`
    /// one generator lower (associative flavor only).
    left: HashMap<(usize, usize), SparseVec<Rational>>,
}

type ProductKey = (i64, usize, i64, usize);

/// The quotient algebra computed degree by degree over a window: a basis of
/// surviving monomials and a normal form for every monomial.
///
/// Degrees of the wrong sign are known to vanish; degrees of the right sign
/// beyond the window are unknown and every query about them says so.
#[derive(Debug)]
pub struct TruncatedAlgebra {
    pres: Arc<AlgebraPresentation>,
    window: DegreeWindow,
    parts: BTreeMap<i64, DegreePart>,
    /// Parts built from left multiplications rather than all free words.
    incremental: bool,
    products: RwLock<HashMap<ProductKey, Arc<SparseVec<Rational>>>>,
}

/// Column order for elimination: longer monomials first, so that pivots
/// (eliminated monomials) are preferentially the decomposable ones.
fn column_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| b.cmp(a))
}

impl TruncatedAlgebra {
    pub fn new(pres: Arc<AlgebraPresentation>, window: DegreeWindow) -> Self {
        let incremental = pres.flavor() == Flavor::Associative
            && pres
                .relations()
                .iter()
                .all(|r| r.terms().all(|(m, _)| !m.is_empty()));
        if incremental {
            Self::new_incremental(pres, window)
        } else {
            Self::new_from_words(pres, window)
        }
    }

    /// Every degree from the full set of free words and the ideal they span.
    fn new_from_words(pres: Arc<AlgebraPresentation>, window: DegreeWindow) -> Self {
        let window = window.hull(&DegreeWindow { t_min: 0, t_max: 0 });
        let mut mono_cache: HashMap<i64, Vec<Monomial>> = HashMap::new();
        let mut parts = BTreeMap::new();
        for d in window.degrees() {
            if d != 0 && !pres.connectivity().admits(d) {
                continue;
            }
            parts.insert(d, Self::build_part(&pres, d, &mut mono_cache));
        }
        Self {
            pres,
            window,
            parts,
            incremental: false,
            products: RwLock::new(HashMap::new()),
        }
    }

    /// Associative quotients degree by degree, outward from 0: `A_d` is
    /// `⊕_g g ⊗ A_{d−|g|}` modulo the images of `r ⊗ A_{d−|r|}`, where a
    /// relation `Σ c·g w` maps to `Σ c·g ⊗ (w·b)`. That sequence is exact for
    /// any presentation, so only lower-degree quotients are ever enumerated.
    fn new_incremental(pres: Arc<AlgebraPresentation>, window: DegreeWindow) -> Self {
        let window = window.hull(&DegreeWindow { t_min: 0, t_max: 0 });
        let mut parts: BTreeMap<i64, DegreePart> = BTreeMap::new();
        parts.insert(
            0,
            DegreePart {
                basis: vec![Vec::new()],
                normal_forms: HashMap::new(),
                left: HashMap::new(),
            },
        );
        let positive = pres.connectivity().admits(1);
        let far = if positive { window.t_max } else { -window.t_min };
        for k in 1..=far {
            let d = if positive { k } else { -k };
            let part = Self::build_incremental(&pres, &parts, d);
            parts.insert(d, part);
        }
        Self {
            pres,
            window,
            parts,
            incremental: true,
            products: RwLock::new(HashMap::new()),
        }
    }

    fn build_incremental(pres: &AlgebraPresentation, parts: &BTreeMap<i64, DegreePart>, d: i64) -> DegreePart {
        let gens = pres.generators();
        // columns: g ⊗ b_j, named by the monomial g·b_j
        let mut cols: Vec<((usize, usize), Monomial)> = Vec::new();
        for (g, gen) in gens.iter().enumerate() {
            let Some(lower) = parts.get(&(d - gen.degree)) else { continue };
            for (j, b) in lower.basis.iter().enumerate() {
                let mut m = Vec::with_capacity(b.len() + 1);
                m.push(g);
                m.extend_from_slice(b);
                cols.push(((g, j), m));
            }
        }
        cols.sort_by(|a, b| column_order(&a.1, &b.1));
        let index: HashMap<(usize, usize), usize> =
            cols.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();

        let mut rows: Vec<SparseVec<Rational>> = Vec::new();
        for (k, r) in pres.relations().iter().enumerate() {
            let rest = d - pres.relation_degree(k);
            let Some(lower) = parts.get(&rest) else { continue };
            for j in 0..lower.basis.len() {
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for (w, c) in r.terms() {
                    let mut v: SparseVec<Rational> = vec![(j, Rational::one())];
                    let mut deg = rest;
                    for &g in w[1..].iter().rev() {
                        v = left_multiply(parts, pres, g, deg, &v);
                        deg += gens[g].degree;
                    }
                    for (i, a) in v {
                        *row.entry(index[&(w[0], i)]).or_insert_with(Rational::zero) += c * a;
                    }
                }
                let row: SparseVec<Rational> = row.into_iter().filter(|(_, a)| !a.is_zero()).collect();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        let n = cols.len();
        let ideal = RatMatrix::from_rows(rows.len(), n, rows).expect("rows indexed by columns");
        let rref = row_reduce(&ideal);
        let mut basis_cols: Vec<usize> = (0..n).filter(|c| !rref.contains_key(c)).collect();
        basis_cols.sort_by(|&a, &b| cols[a].1.cmp(&cols[b].1));
        let basis_index: HashMap<usize, usize> =
            basis_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut left = HashMap::with_capacity(n);
        for (c, (key, _)) in cols.iter().enumerate() {
            let nf = match rref.get(&c) {
                None => vec![(basis_index[&c], Rational::one())],
                Some(row) => {
                    let mut v: Vec<(usize, Rational)> = row
                        .iter()
                        .filter(|(j, _)| *j != c)
                        .map(|(j, a)| (basis_index[j], -a.clone()))
                        .collect();
                    v.sort_by_key(|(i, _)| *i);
                    v
                }
            };
            left.insert(*key, nf);
        }
        DegreePart {
            basis: basis_cols.iter().map(|&c| cols[c].1.clone()).collect(),
            normal_forms: HashMap::new(),
            left,
        }
    }

    fn monomials<'a>(
        pres: &AlgebraPresentation,
        d: i64,
        cache: &'a mut HashMap<i64, Vec<Monomial>>,
    ) -> &'a Vec<Monomial> {
        cache
            .entry(d)
            .or_insert_with(|| monomials_of_degree(pres, d))
    }

    fn build_part(
        pres: &AlgebraPresentation,
        d: i64,
        cache: &mut HashMap<i64, Vec<Monomial>>,
    ) -> DegreePart {
        let mut cols = Self::monomials(pres, d, cache).clone();
        cols.sort_by(column_order);
        let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut rows: Vec<SparseVec<Rational>> = Vec::new();
        let mut push = |p: Poly| {
            let mut row: Vec<(usize, Rational)> =
                p.terms().map(|(m, c)| (index[m], c.clone())).collect();
            row.sort_by_key(|(i, _)| *i);
            if !row.is_empty() {
                rows.push(row);
            }
        };
        for (k, r) in pres.relations().iter().enumerate() {
            let e = pres.relation_degree(k);
            let rest = d - e;
            if rest != 0 && !pres.connectivity().admits(rest) {
                continue;
            }
            match pres.flavor() {
                Flavor::Commutative => {
                    for m in Self::monomials(pres, rest, cache).clone() {
                        push(pres.mul_poly(&Poly::monomial(m, Rational::one()), r));
                    }
                }
                Flavor::Associative => {
                    let step = rest.signum();
                    let splits: Vec<i64> = if rest == 0 {
                        vec![0]
                    } else {
                        (0..=rest.abs()).map(|k| k * step).collect()
                    };
                    for e1 in splits {
                        let left = Self::monomials(pres, e1, cache).clone();
                        let right = Self::monomials(pres, rest - e1, cache).clone();
                        for m1 in &left {
                            let lr = pres.mul_poly(&Poly::monomial(m1.clone(), Rational::one()), r);
                            for m2 in &right {
                                push(pres.mul_poly(
                                    &lr,
                                    &Poly::monomial(m2.clone(), Rational::one()),
                                ));
                            }
                        }
                    }
                }
            }
        }
        let n = cols.len();
        let ideal = RatMatrix::from_rows(rows.len(), n, rows).expect("rows indexed by columns");
        let rref = row_reduce(&ideal);
        let mut basis_cols: Vec<usize> = (0..n).filter(|c| !rref.contains_key(c)).collect();
        basis_cols.sort_by(|&a, &b| cols[a].cmp(&cols[b]));
        let basis_index: HashMap<usize, usize> =
            basis_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut normal_forms = HashMap::with_capacity(n);
        for (c, m) in cols.iter().enumerate() {
            let nf = match rref.get(&c) {
                None => vec![(basis_index[&c], Rational::one())],
                Some(row) => {
                    let mut v: Vec<(usize, Rational)> = row
                        .iter()
                        .filter(|(j, _)| *j != c)
                        .map(|(j, a)| (basis_index[j], -a.clone()))
                        .collect();
                    v.sort_by_key(|(i, _)| *i);
                    v
                }
            };
            normal_forms.insert(m.clone(), nf);
        }
        DegreePart {
            basis: basis_cols.iter().map(|&c| cols[c].clone()).collect(),
            normal_forms,
            left: HashMap::new(),
        }
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn presentation_arc(&self) -> Arc<AlgebraPresentation> {
        self.pres.clone()
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    /// Whether degree `d` is determined: inside the window, or zero for
    /// connectivity reasons.
    pub fn knows(&self, d: i64) -> bool {
        self.window.contains(d) || (d != 0 && !self.pres.connectivity().admits(d))
    }

    pub fn dim(&self, d: i64) -> Option<usize> {
        if !self.knows(d) {
            return None;
        }
        Some(self.parts.get(&d).map_or(0, |p| p.basis.len()))
    }

    pub fn basis(&self, d: i64) -> &[Monomial] {
        self.parts.get(&d).map_or(&[], |p| p.basis.as_slice())
    }

    pub fn label(&self, d: i64, i: usize) -> String {
        self.pres.monomial_label(&self.basis(d)[i])
    }

    /// Closed interval of degrees where the algebra can be nonzero; `None`
    /// marks a side the window cannot bound.
    ///
    /// A run of zero degrees as long as the largest generator degree means
    /// everything beyond vanishes: every longer monomial has a prefix inside
    /// the run, and that prefix lies in the ideal.
    pub fn support(&self) -> (Option<i64>, Option<i64>) {
        let gens = self.pres.generators();
        let Some(step) = gens.iter().map(|g| g.degree.abs()).max() else {
            return (Some(0), Some(0));
        };
        let positive = self.pres.connectivity().admits(1);
        let far = if positive { self.window.t_max } else { -self.window.t_min };
        let mut last_nonzero = 0;
        let mut run = 0;
        let mut bound = None;
        for k in 1..=far {
            let d = if positive { k } else { -k };
            if self.basis(d).is_empty() {
                run += 1;
                if run >= step {
                    bound = Some(last_nonzero);
                    break;
                }
            } else {
                run = 0;
                last_nonzero = d;
            }
        }
        if positive {
            (Some(0), bound)
        } else {
            (bound, Some(0))
        }
    }

    /// Coordinates of a canonical monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Option<SparseVec<Rational>> {
        let d = self.pres.degree_of(m);
        if !self.knows(d) {
            return None;
        }
        if self.incremental {
            if !self.parts.contains_key(&d) {
                return Some(Vec::new());
            }
            let mut v: SparseVec<Rational> = vec![(0, Rational::one())];
            let mut deg = 0;
            for &g in m.iter().rev() {
                v = left_multiply(&self.parts, &self.pres, g, deg, &v);
                deg += self.pres.generators()[g].degree;
            }
            return Some(v);
        }
        Some(
            self.parts
                .get(&d)
                .and_then(|p| p.normal_forms.get(m).cloned())
                .unwrap_or_default(),
        )
    }

    /// Coordinates of a homogeneous polynomial of degree `d`.
    pub fn reduce(&self, d: i64, p: &Poly) -> Option<Vec<Rational>> {
        let n = self.dim(d)?;
        let mut out = vec![Rational::zero(); n];
        for (m, c) in p.terms() {
            for (i, a) in self.reduce_monomial(m)? {
                out[i] += c * a;
            }
        }
        Some(out)
    }

    /// Product of basis elements `i` in degree `d1` and `j` in degree `d2`.
    pub fn mul_basis(&self, d1: i64, i: usize, d2: i64, j: usize) -> Option<Arc<SparseVec<Rational>>> {
        let key = (d1, i, d2, j);
        if let Some(v) = self.products.read().expect("product cache").get(&key) {
            return Some(v.clone());
        }
        if !self.knows(d1 + d2) {
            return None;
        }
        let v = match self
            .pres
            .mul_monomials(&self.basis(d1)[i], &self.basis(d2)[j])
        {
            None => Vec::new(),
            Some((s, m)) => {
                let mut v = self.reduce_monomial(&m)?;
                if s < 0 {
                    for (_, a) in v.iter_mut() {
                        *a = -a.clone();
                    }
                }
                v
            }
        };
        let v = Arc::new(v);
        self.products
            .write()
            .expect("product cache")
            .insert(key, v.clone());
        Some(v)
    }

    /// Product of dense elements of degrees `d1` and `d2`.
    pub fn mul(&self, d1: i64, a: &[Rational], d2: i64, b: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.dim(d1 + d2)?;
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mul_basis(d1, i, d2, j)?.iter() {
                    out[*k] += &xy * c;
                }
            }
        }
        Some(out)
    }

    /// The unit as a dense element of degree 0.
    pub fn one(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim(0).unwrap_or(0)];
        if let Some(x) = v.first_mut() {
            *x = Rational::one();
        }
        v
    }

    pub fn graded_dim(&self) -> GradedDim {
        let mut labels = BTreeMap::new();
        for (d, p) in &self.parts {
            if !p.basis.is_empty() {
                labels.insert(
                    *d,
                    p.basis.iter().map(|m| self.pres.monomial_label(m)).collect(),
                );
            }
        }
        GradedDim::from_labels(self.window, labels).expect("parts lie in the window")
    }
}

/// `g · v` for `v` in degree `deg`, through the stored left multiplications.
fn left_multiply(
    parts: &BTreeMap<i64, DegreePart>,
    pres: &AlgebraPresentation,
    g: usize,
    deg: i64,
    v: &[(usize, Rational)],
) -> SparseVec<Rational> {
    let Some(part) = parts.get(&(deg + pres.generators()[g].degree)) else {
        return Vec::new();
    };
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (j, a) in v {
        for (i, b) in &part.left[&(g, *j)] {
            *out.entry(*i).or_insert_with(Rational::zero) += a * b;
        }
    }
    out.into_iter().filter(|(_, a)| !a.is_zero()).collect()
}

/// Labeled basis of the quotient algebra in each degree of `w`.
pub fn monomial_basis(a: &AlgebraPresentation, w: DegreeWindow) -> GradedDim {
    let t = TruncatedAlgebra::new(Arc::new(a.clone()), w);
    let full = t.graded_dim();
    let mut labels = BTreeMap::new();
    for d in w.degrees() {
        let l: Vec<String> = (0..t.basis(d).len()).map(|i| t.label(d, i)).collect();
        if !l.is_empty() {
            labels.insert(d, l);
        }
    }
    debug_assert!(full.window().covers(&w));
    GradedDim::from_labels(w, labels).expect("labels inside w")
}

/// Dimension of the indecomposables `A⁺ / (A⁺ · A⁺)` in degree `d`.
pub fn indecomposables(a: &AlgebraPresentation, d: i64) -> Result<usize, AlgebraError> {
    if d == 0 || !a.connectivity().admits(d) {
        return Ok(0);
    }
    let w = DegreeWindow::new(d.min(0), d.max(0)).expect("ordered");
    let t = TruncatedAlgebra::new(Arc::new(a.clone()), w);
    let n = t.dim(d).expect("inside window");
    let mut rows: Vec<SparseVec<Rational>> = Vec::new();
    for d1 in w.degrees().filter(|&e| e != 0 && e != d) {
        let d2 = d - d1;
        for i in 0..t.basis(d1).len() {
            for j in 0..t.basis(d2).len() {
                let v = t.mul_basis(d1, i, d2, j).expect("inside window");
                if !v.is_empty() {
                    rows.push((*v).clone());
                }
            }
        }
    }
    let m = RatMatrix::from_rows(rows.len(), n, rows)?;
    Ok(n - rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{heisenberg, q};

    fn w(a: i64, b: i64) -> DegreeWindow {
        DegreeWindow::new(a, b).unwrap()
    }

    #[test]
    fn polynomial_degree_six() {
        let a = AlgebraPresentation::free(Flavor::Commutative, &[("x1", 2), ("x2", 4)]).unwrap();
        let b = monomial_basis(&a, w(0, 6));
        assert_eq!(b.dim(6), 2);
        assert_eq!(b.labels(6).unwrap(), &["x1^3".to_string(), "x1 x2".to_string()]);
    }

    #[test]
    fn truncated_polynomial() {
        let a = AlgebraPresentation::from_names(
            Flavor::Commutative,
            &[("e", -2)],
            &[vec![(q(1), vec!["e", "e"])]],
        )
        .unwrap();
        let b = monomial_basis(&a, w(-4, 0));
        assert_eq!((b.dim(-2), b.dim(-4)), (1, 0));
    }

    #[test]
    fn heisenberg_degree_minus_two() {
        // degree -2 monomials are xy, alpha, beta; xy = 0 is a relation
        let b = monomial_basis(&heisenberg(), w(-4, 0));
        assert_eq!(b.dim(-2), 2);
        assert_eq!(b.labels(-2).unwrap(), &["alpha".to_string(), "beta".to_string()]);
        assert_eq!((b.dim(-1), b.dim(-3), b.dim(-4)), (2, 1, 0));
    }

    #[test]
    fn indecomposable_counts() {
        assert_eq!(indecomposables(&heisenberg(), -2).unwrap(), 2);
        let p = AlgebraPresentation::free(Flavor::Commutative, &[("x1", 2), ("x2", 4)]).unwrap();
        let ind: Vec<usize> = [2, 4, 6].iter().map(|&d| indecomposables(&p, d).unwrap()).collect();
        assert_eq!(ind, vec![1, 1, 0]);
        let e = AlgebraPresentation::from_names(
            Flavor::Commutative,
            &[("e", -2)],
            &[vec![(q(1), vec!["e", "e"])]],
        )
        .unwrap();
        assert_eq!(indecomposables(&e, -2).unwrap(), 1);
        assert_eq!(indecomposables(&e, -4).unwrap(), 0);
    }

    #[test]
    fn associative_commutator_quotient_matches_polynomial() {
        let p = AlgebraPresentation::free(Flavor::Commutative, &[("x1", 2), ("x2", 4)]).unwrap();
        let a = p.as_associative();
        let bp = monomial_basis(&p, w(0, 12));
        let ba = monomial_basis(&a, w(0, 12));
        for d in 0..=12 {
            assert_eq!(bp.dim(d), ba.dim(d), "degree {d}");
        }
    }

    fn assert_same_quotient(a: AlgebraPresentation, win: DegreeWindow) {
        let a = Arc::new(a);
        let fast = TruncatedAlgebra::new_incremental(a.clone(), win);
        let slow = TruncatedAlgebra::new_from_words(a.clone(), win);
        for d in win.degrees() {
            assert_eq!(fast.basis(d), slow.basis(d), "basis in degree {d}");
            for m in monomials_of_degree(&a, d) {
                assert_eq!(fast.reduce_monomial(&m), slow.reduce_monomial(&m), "normal form of {m:?}");
            }
        }
    }

    #[test]
    fn incremental_quotient_matches_word_quotient() {
        assert_same_quotient(heisenberg().as_associative(), w(-6, 0));
        let p = AlgebraPresentation::free(Flavor::Commutative, &[("x1", 2), ("x2", 4)]).unwrap();
        assert_same_quotient(p.as_associative(), w(0, 10));
        assert_same_quotient(
            AlgebraPresentation::free(Flavor::Associative, &[("a", 1), ("b", 2)]).unwrap(),
            w(0, 6),
        );
        // a Lie-type relation with a linear term, and a cubic one
        let h = AlgebraPresentation::from_names(
            Flavor::Associative,
            &[("a", -2), ("b", -2), ("c", -4)],
            &[
                vec![(q(1), vec!["a", "b"]), (q(-1), vec!["b", "a"]), (q(-1), vec!["c"])],
                vec![(q(1), vec!["a", "c"]), (q(-1), vec!["c", "a"])],
                vec![(q(1), vec!["b", "c"]), (q(-1), vec!["c", "b"])],
                vec![(q(2), vec!["a", "a", "b"]), (q(3), vec!["b", "b", "a"])],
            ],
        )
        .unwrap();
        assert_same_quotient(h, w(-12, 0));
    }

    #[test]
    fn support_detects_nilpotence() {
        let e = AlgebraPresentation::from_names(
            Flavor::Commutative,
            &[("e", -2)],
            &[vec![(q(1), vec!["e", "e"])]],
        )
        .unwrap();
        let t = TruncatedAlgebra::new(Arc::new(e), w(-8, 0));
        assert_eq!(t.support(), (Some(-2), Some(0)));
        let p = AlgebraPresentation::free(Flavor::Commutative, &[("x", 2)]).unwrap();
        let t = TruncatedAlgebra::new(Arc::new(p), w(0, 8));
        assert_eq!(t.support(), (Some(0), None));
    }

    #[test]
    fn multiplication_with_signs() {
        let a = AlgebraPresentation::free(Flavor::Commutative, &[("x", -1), ("y", -1)]).unwrap();
        let t = TruncatedAlgebra::new(Arc::new(a), w(-2, 0));
        // y * x = -x y
        let yx = t.mul(-1, &[q(0), q(1)], -1, &[q(1), q(0)]).unwrap();
        assert_eq!(yx, vec![q(-1)]);
        assert!(t.mul(-2, &[q(1)], -1, &[q(1), q(0)]).is_none());
    }
}

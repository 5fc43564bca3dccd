//! Finitely presented graded ℚ-algebras, graded-commutative (Koszul signs)
//! or associative, and the homomorphisms, derivations and free algebras
//! built on them.
//!
//! A monomial is a word of generator indices. In the commutative flavor it
//! is kept sorted, an odd generator appears at most once, and reordering
//! picks up the Koszul sign.

mod free;
mod hom;
mod truncated;

pub use free::{free_monad_apply, monomials_of_degree};
pub use hom::{
    check_hom, derivations, hom_parametrization, leibniz_system, AlgebraHom, ConstraintStatus,
    DerivationSpace, HomCheck, HomParametrization, LeibnizSystem, ModuleViaHom,
};
pub use truncated::{indecomposables, monomial_basis, TruncatedAlgebra};

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::LinAlgError;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("DegreeZeroGenerator: generator {0} has degree 0")]
    DegreeZeroGenerator(String),
    #[error("MixedConnectivity: generator degrees must all be positive or all negative")]
    MixedConnectivity,
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("relation {0} is not homogeneous")]
    InhomogeneousRelation(usize),
    #[error("image of {generator} is not homogeneous of degree {degree}")]
    InhomogeneousImage { generator: String, degree: i64 },
    #[error("image list has {got} entries for {want} generators")]
    ImageCount { got: usize, want: usize },
    #[error("WindowClipped: degree {0} is outside the computed window")]
    WindowClipped(i64),
    #[error("NotPolynomial: {0}")]
    NotPolynomial(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Commutative,
    Associative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Positive,
    Negative,
}

impl Connectivity {
    /// Whether a nonzero degree has this sign.
    pub fn admits(self, d: i64) -> bool {
        match self {
            Connectivity::Positive => d > 0,
            Connectivity::Negative => d < 0,
        }
    }
}

pub type Monomial = Vec<usize>;

/// Linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    flavor: Flavor,
    generators: Vec<Generator>,
    relations: Vec<Poly>,
    relation_degrees: Vec<i64>,
    connectivity: Connectivity,
}

impl AlgebraPresentation {
    /// Validates generators and canonicalizes relation monomials (Koszul
    /// signs applied, odd squares dropped in the commutative flavor).
    pub fn new(
        flavor: Flavor,
        generators: Vec<Generator>,
        relations: Vec<Vec<(Rational, Monomial)>>,
    ) -> Result<Self, AlgebraError> {
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(AlgebraError::DegreeZeroGenerator(g.name.clone()));
            }
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let connectivity = if generators.iter().all(|g| g.degree > 0) {
            Connectivity::Positive
        } else if generators.iter().all(|g| g.degree < 0) {
            Connectivity::Negative
        } else {
            return Err(AlgebraError::MixedConnectivity);
        };
        let mut pres = Self {
            flavor,
            generators,
            relations: Vec::new(),
            relation_degrees: Vec::new(),
            connectivity,
        };
        for (k, rel) in relations.into_iter().enumerate() {
            let mut p = Poly::zero();
            let mut degree = None;
            for (c, word) in rel {
                if let Some(&bad) = word.iter().find(|&&i| i >= pres.generators.len()) {
                    return Err(AlgebraError::UnknownGenerator(format!("#{bad}")));
                }
                let d = pres.degree_of(&word);
                if *degree.get_or_insert(d) != d {
                    return Err(AlgebraError::InhomogeneousRelation(k));
                }
                if let Some((sign, m)) = pres.canonical(&word) {
                    p.add_term(m, c * Rational::from_integer(sign.into()));
                }
            }
            // relations that vanish identically carry no information
            if !p.is_zero() {
                pres.relation_degrees.push(degree.expect("nonzero relation has a term"));
                pres.relations.push(p);
            }
        }
        Ok(pres)
    }

    /// Convenience constructor with named generators and relations given as
    /// `(coefficient, [generator names])` terms.
    pub fn from_names(
        flavor: Flavor,
        generators: &[(&str, i64)],
        relations: &[Vec<(Rational, Vec<&str>)>],
    ) -> Result<Self, AlgebraError> {
        let gens: Vec<Generator> = generators
            .iter()
            .map(|(n, d)| Generator {
                name: n.to_string(),
                degree: *d,
            })
            .collect();
        let index: HashMap<&str, usize> =
            generators.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
        let mut rels = Vec::new();
        for r in relations {
            let mut terms = Vec::new();
            for (c, names) in r {
                let word = names
                    .iter()
                    .map(|n| {
                        index
                            .get(n)
                            .copied()
                            .ok_or_else(|| AlgebraError::UnknownGenerator(n.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                terms.push((c.clone(), word));
            }
            rels.push(terms);
        }
        Self::new(flavor, gens, rels)
    }

    /// Free algebra on the given generators.
    pub fn free(flavor: Flavor, generators: &[(&str, i64)]) -> Result<Self, AlgebraError> {
        Self::from_names(flavor, generators, &[])
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn relation_degree(&self, k: usize) -> i64 {
        self.relation_degrees[k]
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, word: &[usize]) -> i64 {
        word.iter().map(|&i| self.generators[i].degree).sum()
    }

    fn is_odd(&self, g: usize) -> bool {
        self.generators[g].degree % 2 != 0
    }

    /// Canonical form of a word with its sign, or `None` if it vanishes
    /// (a repeated odd generator in the commutative flavor).
    pub fn canonical(&self, word: &[usize]) -> Option<(i32, Monomial)> {
        match self.flavor {
            Flavor::Associative => Some((1, word.to_vec())),
            Flavor::Commutative => {
                let mut sign = 1;
                for i in 0..word.len() {
                    for j in i + 1..word.len() {
                        if word[i] > word[j] && self.is_odd(word[i]) && self.is_odd(word[j]) {
                            sign = -sign;
                        }
                    }
                }
                let mut sorted = word.to_vec();
                sorted.sort_unstable();
                if sorted
                    .windows(2)
                    .any(|w| w[0] == w[1] && self.is_odd(w[0]))
                {
                    return None;
                }
                Some((sign, sorted))
            }
        }
    }

    /// Product of two canonical monomials, with sign.
    pub fn mul_monomials(&self, a: &[usize], b: &[usize]) -> Option<(i32, Monomial)> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.canonical(&w)
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((s, m)) = self.mul_monomials(ma, mb) {
                    out.add_term(m, ca * cb * Rational::from_integer(s.into()));
                }
            }
        }
        out
    }

    pub fn monomial_label(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let mut j = i;
            while j < m.len() && m[j] == m[i] {
                j += 1;
            }
            let name = &self.generators[m[i]].name;
            parts.push(if j - i == 1 {
                name.clone()
            } else {
                format!("{name}^{}", j - i)
            });
            i = j;
        }
        parts.join(" ")
    }

    pub fn poly_label(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.terms()
            .map(|(m, c)| {
                if c.is_one() {
                    self.monomial_label(m)
                } else {
                    format!("({c}) {}", self.monomial_label(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The same algebra presented associatively: graded commutators
    /// `g_i g_j − (−1)^{|g_i||g_j|} g_j g_i` for `i < j` and `g² = 0` for odd
    /// `g` join the relations.
    pub fn as_associative(&self) -> Self {
        if self.flavor == Flavor::Associative {
            return self.clone();
        }
        let mut rels: Vec<Vec<(Rational, Monomial)>> = Vec::new();
        let n = self.generators.len();
        for i in 0..n {
            for j in i + 1..n {
                let sign = if self.is_odd(i) && self.is_odd(j) { -1 } else { 1 };
                rels.push(vec![
                    (Rational::one(), vec![i, j]),
                    (Rational::from_integer((-sign).into()), vec![j, i]),
                ]);
            }
            if self.is_odd(i) {
                rels.push(vec![(Rational::one(), vec![i, i])]);
            }
        }
        for r in &self.relations {
            rels.push(r.terms().map(|(m, c)| (c.clone(), m.clone())).collect());
        }
        Self::new(Flavor::Associative, self.generators.clone(), rels)
            .expect("same generators, homogeneous relations")
    }

    /// True for a polynomial algebra on even generators (no relations).
    pub fn is_even_polynomial(&self) -> bool {
        self.relations.is_empty()
            && self.generators.iter().all(|g| g.degree % 2 == 0)
            && self.flavor == Flavor::Commutative
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        let rels: Vec<String> = self.relations.iter().map(|r| self.poly_label(r)).collect();
        let open = match self.flavor {
            Flavor::Commutative => "Q[",
            Flavor::Associative => "Q<",
        };
        let close = match self.flavor {
            Flavor::Commutative => "]",
            Flavor::Associative => ">",
        };
        write!(f, "{open}{}{close}", gens.join(", "))?;
        if !rels.is_empty() {
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

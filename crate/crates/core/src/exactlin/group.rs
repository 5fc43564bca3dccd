use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::elim::solve;
use super::matrix::SparseMatrix;
use super::snf::{integer_kernel, smith_normal_form};
use super::LinAlgError;

/// A finitely generated abelian group in invariant-factor form
/// `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
///
/// Coordinates on the group list the torsion generators first (in order)
/// and the free generators after them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroupDescriptor {
    pub fn zero() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders(0, [BigInt::from(order)])
    }

    /// Normal form of `ℤ^free_rank ⊕ ⊕ ℤ/o_i`; an order of 0 counts as a free
    /// summand and orders of ±1 vanish.
    pub fn from_orders<I: IntoIterator<Item = BigInt>>(free_rank: usize, orders: I) -> Self {
        let orders: Vec<BigInt> = orders.into_iter().map(|o| o.abs()).collect();
        let n = orders.len();
        let diag = SparseMatrix::from_triplets(
            n,
            n,
            orders.iter().enumerate().map(|(i, o)| (i, i, o.clone())),
        )
        .expect("diagonal");
        let snf = smith_normal_form(&diag);
        let extra_free = n - snf.rank();
        let torsion = snf
            .invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("torsion order fits in u64"))
            .collect();
        Self {
            free_rank: free_rank + extra_free,
            torsion,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of coordinates (generators) in the canonical presentation.
    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Relation matrix of the canonical presentation (generators x torsion
    /// generators).
    pub fn relation_matrix(&self) -> SparseMatrix<BigInt> {
        SparseMatrix::from_triplets(
            self.generator_count(),
            self.torsion.len(),
            self.torsion
                .iter()
                .enumerate()
                .map(|(i, d)| (i, i, BigInt::from(*d))),
        )
        .expect("diagonal relations")
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|d| BigInt::from(*d)).product())
    }

    /// Whether `self` can be a subquotient of `other` by cardinality: free
    /// rank cannot grow, and finite groups cannot grow in order.
    pub fn no_larger_than(&self, other: &Self) -> bool {
        if self.free_rank != other.free_rank {
            return self.free_rank < other.free_rank;
        }
        match (self.order(), other.order()) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        }
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Result of [`subquotient`]: the group and its generators written in the
/// middle group's coordinates (torsion generators first, then free).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSubquotient {
    pub group: AbelianGroupDescriptor,
    pub generators: Vec<Vec<BigInt>>,
}

fn to_rational(m: &SparseMatrix<BigInt>) -> SparseMatrix<BigRational> {
    m.map(|x| BigRational::from_integer(x.clone()))
}

fn check_well_defined(
    map: &SparseMatrix<BigInt>,
    source: &AbelianGroupDescriptor,
    target: &AbelianGroupDescriptor,
    name: &str,
) -> Result<(), LinAlgError> {
    if map.cols() != source.generator_count() || map.rows() != target.generator_count() {
        return Err(LinAlgError::ShapeMismatch(format!(
            "{name} is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            target.generator_count(),
            source.generator_count()
        )));
    }
    // relations of the source must land in the relation lattice of the target
    let image = map.mul(&source.relation_matrix())?;
    let rel = target.relation_matrix();
    for j in 0..image.cols() {
        let col = image.column(j);
        if !in_lattice(&rel, &col) {
            return Err(LinAlgError::NotWellDefined(format!(
                "{name} sends a torsion relation outside the target relations"
            )));
        }
    }
    Ok(())
}

fn in_lattice(basis: &SparseMatrix<BigInt>, v: &[BigInt]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.cols() == 0 {
        return false;
    }
    let b: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    match solve(&to_rational(basis), &b) {
        Some(x) => x.iter().all(|c| c.is_integer()),
        None => false,
    }
}

/// `ker(g) / im(f)` for `a --f--> b --g--> c` between groups in canonical
/// presentation. Checks that both maps are well defined and `g ∘ f = 0`.
pub fn subquotient(
    a: &AbelianGroupDescriptor,
    b: &AbelianGroupDescriptor,
    c: &AbelianGroupDescriptor,
    f: &SparseMatrix<BigInt>,
    g: &SparseMatrix<BigInt>,
) -> Result<GroupSubquotient, LinAlgError> {
    check_well_defined(f, a, b, "incoming map")?;
    check_well_defined(g, b, c, "outgoing map")?;
    let nb = b.generator_count();
    let rel_c = c.relation_matrix();

    // L = {x ∈ ℤ^nb : g x ∈ im(rel_c)}
    let joint = g.hstack(&rel_c)?;
    let gens: Vec<Vec<BigInt>> = integer_kernel(&joint)
        .into_iter()
        .map(|v| v[..nb].to_vec())
        .collect();
    let lattice = lattice_basis(nb, &gens)?;

    // composite must vanish in c
    let gf = g.mul(f)?;
    for j in 0..gf.cols() {
        if !in_lattice(&rel_c, &gf.column(j)) {
            return Err(LinAlgError::CompositionNotZero { nonzero: gf.nnz() });
        }
    }

    let k = lattice.len();
    let basis = SparseMatrix::from_columns(nb, &lattice)?;
    let basis_q = to_rational(&basis);
    let rel_b = b.relation_matrix();
    let mut coords: Vec<Vec<BigInt>> = Vec::new();
    for m in [f, &rel_b] {
        for j in 0..m.cols() {
            let col: Vec<BigRational> = m
                .column(j)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            let x = solve(&basis_q, &col).ok_or_else(|| {
                LinAlgError::CompositionNotZero { nonzero: gf.nnz() }
            })?;
            coords.push(x.into_iter().map(|c| c.to_integer()).collect());
        }
    }
    let cmat = if coords.is_empty() {
        SparseMatrix::zeros(k, 0)
    } else {
        SparseMatrix::from_columns(k, &coords)?
    };
    let snf = smith_normal_form(&cmat);
    let rank = snf.rank();
    let mut generators = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in snf.invariant_factors.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.to_u64().expect("torsion order fits in u64"));
            generators.push(basis.mul_vec(&snf.left_inverse.column(i))?);
        }
    }
    for i in rank..k {
        generators.push(basis.mul_vec(&snf.left_inverse.column(i))?);
    }
    for g in generators.iter_mut() {
        if g.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in g.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Ok(GroupSubquotient {
        group: AbelianGroupDescriptor {
            free_rank: k - rank,
            torsion,
        },
        generators,
    })
}

/// A basis for the lattice spanned by `gens` inside ℤ^n.
fn lattice_basis(n: usize, gens: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, LinAlgError> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let m = SparseMatrix::from_columns(n, gens)?;
    let snf = smith_normal_form(&m);
    // image(m) = left⁻¹ · image(D)
    let mut out = Vec::new();
    for (i, d) in snf.invariant_factors.iter().enumerate() {
        let col: Vec<BigInt> = snf.left_inverse.column(i).into_iter().map(|x| x * d).collect();
        out.push(col);
    }
    Ok(out)
}

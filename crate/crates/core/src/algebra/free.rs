use std::collections::BTreeMap;

use super::{AlgebraError, AlgebraPresentation, Flavor, Generator, Monomial};
use crate::graded::{DegreeWindow, GradedDim};

/// Canonical monomials of total degree `d` in the free algebra on `a`'s
/// generators, in lexicographic order.
pub fn monomials_of_degree(a: &AlgebraPresentation, d: i64) -> Vec<Monomial> {
    let gens = a.generators();
    let mut out = Vec::new();
    if d == 0 {
        out.push(Vec::new());
        return out;
    }
    if !a.connectivity().admits(d) || gens.is_empty() {
        return out;
    }
    let mut word = Vec::new();
    extend(a, gens, d, 0, &mut word, &mut out);
    out
}

fn extend(
    a: &AlgebraPresentation,
    gens: &[Generator],
    remaining: i64,
    min_index: usize,
    word: &mut Vec<usize>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(word.clone());
        return;
    }
    let start = match a.flavor() {
        Flavor::Commutative => min_index,
        Flavor::Associative => 0,
    };
    for i in start..gens.len() {
        let g = gens[i].degree;
        // all degrees share one sign, so overshooting is final
        if (remaining - g).signum() == -remaining.signum() {
            continue;
        }
        if a.flavor() == Flavor::Commutative && g % 2 != 0 && word.last() == Some(&i) {
            continue;
        }
        word.push(i);
        extend(a, gens, remaining - g, i, word, out);
        word.pop();
    }
}

/// Windowed basis of the free algebra (unit included) on a graded space:
/// the tensor algebra for the associative flavor, the free graded-commutative
/// algebra for the commutative one.
pub fn free_monad_apply(
    flavor: Flavor,
    g: &GradedDim,
    w: DegreeWindow,
) -> Result<GradedDim, AlgebraError> {
    let mut gens = Vec::new();
    for (&d, &n) in g.dims() {
        for k in 0..n {
            let name = g
                .labels(d)
                .map(|l| l[k].clone())
                .unwrap_or_else(|| format!("g{d}_{k}"));
            gens.push(Generator { name, degree: d });
        }
    }
    let a = AlgebraPresentation::new(flavor, gens, Vec::new())?;
    let mut labels = BTreeMap::new();
    for d in w.degrees() {
        let l: Vec<String> = monomials_of_degree(&a, d)
            .iter()
            .map(|m| a.monomial_label(m))
            .collect();
        if !l.is_empty() {
            labels.insert(d, l);
        }
    }
    let out = GradedDim::from_labels(w, labels).map_err(|_| AlgebraError::WindowClipped(0))?;
    Ok(if g.window_limited() {
        out.mark_window_limited()
    } else {
        out
    })
}

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{monomials_of_degree, AlgebraPresentation, Flavor, TruncatedAlgebra};
use crate::graded::DegreeWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityClass {
    Smooth,
    CompleteIntersection,
    Etale,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub class: RegularityClass,
    pub window_limited: bool,
    /// Why the class was assigned; for `Unknown`, the first mismatch found.
    pub evidence: String,
}

/// Classifies `ℚ → A` for a commutative presentation by comparing windowed
/// Hilbert series: a complete intersection has the series of the free
/// algebra times `Π (1 − u^{|f_j|})`.
pub fn regularity_check(a: &AlgebraPresentation, w: DegreeWindow) -> Regularity {
    let verdict = |class, window_limited, evidence: &str| Regularity {
        class,
        window_limited,
        evidence: evidence.to_string(),
    };
    if a.flavor() != Flavor::Commutative {
        return verdict(RegularityClass::Unknown, false, "associative presentation");
    }
    if a.generators().is_empty() {
        return verdict(RegularityClass::Etale, false, "no generators");
    }
    if a.relations().is_empty() {
        return verdict(RegularityClass::Smooth, false, "no relations");
    }
    let rel_degrees: Vec<i64> = (0..a.relations().len()).map(|k| a.relation_degree(k)).collect();
    if let Some(d) = rel_degrees.iter().find(|d| *d % 2 != 0) {
        return verdict(
            RegularityClass::Unknown,
            true,
            &format!("relation of odd degree {d}"),
        );
    }
    let positive = a.connectivity().admits(1);
    let far = if positive { w.t_max.max(0) } else { (-w.t_min).max(0) };
    let sign = if positive { 1 } else { -1 };

    // free series, then multiply by each (1 − u^{|f|})
    let mut predicted: BTreeMap<i64, i64> = (0..=far)
        .map(|k| (k, monomials_of_degree(a, sign * k).len() as i64))
        .collect();
    for d in &rel_degrees {
        let shift = d.abs();
        let prev = predicted.clone();
        for k in shift..=far {
            *predicted.get_mut(&k).expect("in range") -= prev[&(k - shift)];
        }
    }
    let window = DegreeWindow::new(sign.min(0) * far, sign.max(0) * far).expect("ordered");
    let actual = TruncatedAlgebra::new(Arc::new(a.clone()), window);
    for k in 0..=far {
        let got = actual.dim(sign * k).expect("inside window") as i64;
        if got != predicted[&k] {
            return verdict(
                RegularityClass::Unknown,
                true,
                &format!(
                    "degree {}: dimension {got}, complete intersection predicts {}",
                    sign * k,
                    predicted[&k]
                ),
            );
        }
    }
    // one nonzero element of a polynomial ring on even generators is regular
    let proven = rel_degrees.len() == 1 && a.generators().iter().all(|g| g.degree % 2 == 0);
    verdict(
        RegularityClass::CompleteIntersection,
        !proven,
        if proven {
            "single relation in an integral domain"
        } else {
            "Hilbert series agree inside the window"
        },
    )
}

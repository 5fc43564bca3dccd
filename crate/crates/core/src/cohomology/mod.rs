//! Hochschild, André–Quillen and cyclic-group cohomology: the three ways an
//! E₂ page gets identified.

mod algebraic;
mod group;

pub use algebraic::{andre_quillen, cotriple_cohomology, hochschild, OracleSettings};
pub use group::{cyclic_group_cohomology, CyclicModule};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exactlin::LinAlgError;
use crate::graded::{DegreeWindow, GradedError};
use crate::resolutions::ResolutionError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("ActionOrderMismatch: the action does not have order {order}")]
    ActionOrderMismatch { order: u32 },
    #[error("action matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Which computation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Koszul,
    Cotangent,
    /// Derivations and inner derivations, for Hochschild degrees 0 and 1.
    Derivations,
    CotripleOracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    pub dim: usize,
    pub method: Method,
    pub window_limited: bool,
}

/// ℚ-dimensions indexed by cohomological degree `s` and shift `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedDims {
    pub shifts: DegreeWindow,
    pub s_max: usize,
    pub entries: BTreeMap<(usize, i64), DimEntry>,
}

impl BigradedDims {
    fn new(shifts: DegreeWindow, s_max: usize) -> Self {
        Self {
            shifts,
            s_max,
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, s: usize, t: i64, dim: usize, method: Method, window_limited: bool) {
        self.entries.insert(
            (s, t),
            DimEntry {
                dim,
                method,
                window_limited,
            },
        );
    }

    pub fn get(&self, s: usize, t: i64) -> Option<&DimEntry> {
        self.entries.get(&(s, t))
    }

    /// Dimension, or 0 outside the computed range.
    pub fn dim(&self, s: usize, t: i64) -> usize {
        self.get(s, t).map_or(0, |e| e.dim)
    }
}

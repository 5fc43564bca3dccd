//! Bigraded pages in the Bousfield–Kan indexing: `E_r^{s,t}` with
//! `0 ≤ s ≤ t`, differentials of bidegree `(r, r − 1)`, and only injected
//! (cited) differentials ever act.

mod json;
mod page;
mod report;

pub use page::{
    turn_page, Entry, InjectedDifferential, MarkerKind, Obstruction, Page, PageWindow, Value,
};
pub use report::{
    abutment_diagonal, collapse_bound, obstruction_report, run_pages, Abutment, AbutmentPiece,
    ClassStatus, CollapseBound, DiagonalEntry, ObstructionReport,
};

use thiserror::Error;

use crate::exactlin::LinAlgError;

/// Fixed caveat carried by every abutment and report.
pub const CONVERGENCE_CAVEAT: &str =
    "associated graded under conditional convergence — extensions unresolved";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecSeqError {
    #[error("BidegreeMismatch: d_{r} from ({s},{t}) to ({ts},{tt})")]
    BidegreeMismatch {
        r: usize,
        s: usize,
        t: i64,
        ts: usize,
        tt: i64,
    },
    #[error("differential for page {got} applied to page {page}")]
    WrongPage { page: usize, got: usize },
    #[error("OutsideWindow: ({s},{t}) is not on the page")]
    OutsideWindow { s: usize, t: i64 },
    #[error("MarkerInDifferentialPath: entry ({s},{t}) is not a computed group")]
    MarkerInDifferentialPath { s: usize, t: i64 },
    #[error("two differentials share the spot ({s},{t})")]
    DuplicateDifferential { s: usize, t: i64 },
    #[error("matrix of d_{r} from ({s},{t}) must be {rows}x{cols}")]
    MatrixShape {
        r: usize,
        s: usize,
        t: i64,
        rows: usize,
        cols: usize,
    },
    #[error("matrix of d_{r} has non-integral entries but acts on groups")]
    NonIntegral { r: usize },
    #[error("differential source and target have different kinds at ({s},{t})")]
    KindMismatch { s: usize, t: i64 },
    #[error("unknown class {0} on the hom-set entry")]
    UnknownClass(String),
    #[error("d_{r} from the hom-set lands in E^({s},{t}) = 0, so it cannot obstruct anything")]
    ObstructionIntoZero { r: usize, s: usize, t: i64 },
    #[error("entry ({s},{t}) grew from {before} to {after}")]
    NotMonotone {
        s: usize,
        t: i64,
        before: String,
        after: String,
    },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub mod algebra;
pub mod chart;
pub mod cli;
pub mod cohomology;
pub mod exactlin;
pub mod graded;
pub mod resolutions;
pub mod scenarios;
pub mod specseq;

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
pub type RatMatrix = exactlin::SparseMatrix<Rational>;
pub type IntMatrix = exactlin::SparseMatrix<Integer>;

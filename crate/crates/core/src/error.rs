use thiserror::Error;

use crate::partitions::Partition;
use crate::symfunc::{Basis, Rational};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("partition parts must be nonincreasing, got {0:?}")]
    NotNonincreasing(Vec<usize>),
    #[error("cannot parse partition from {0:?}")]
    ParsePartition(String),
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(usize, usize),
    #[error("partition ({partition}) has more than {n} parts")]
    TooManyParts { partition: Partition, n: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("basis mismatch: {0:?} vs {1:?}")]
    BasisMismatch(Basis, Basis),
    #[error("key ({key}) has weight {weight}, polynomial has degree {degree}")]
    KeyWeight {
        key: Partition,
        weight: usize,
        degree: usize,
    },
    #[error("singular basis-change system at degree {0}")]
    SingularSystem(usize),
    #[error("zero recursion denominator for ({kappa}) at ({g})")]
    ZeroDenominator { kappa: Partition, g: Partition },
    #[error("zero m_(1^f) coefficient before normalisation in row ({0})")]
    ZeroNormalizer(Partition),
    #[error("non-integer power-sum coefficient {coefficient} at ({key}) in row ({kappa})")]
    NonInteger {
        kappa: Partition,
        key: Partition,
        coefficient: Rational,
    },
    #[error("{0}")]
    ResidualDependsOnN(Box<ResidualConflict>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A residual coefficient that came out different at two dimensions.
#[derive(Debug, Clone, PartialEq, Error)]
#[error(
    "residual a'({g};{h}) at degree {f} depends on n: {first_value} at n={first_n}, {second_value} at n={second_n}"
)]
pub struct ResidualConflict {
    pub f: usize,
    pub g: Partition,
    pub h: Partition,
    pub first_n: usize,
    pub first_value: Rational,
    pub second_n: usize,
    pub second_value: Rational,
}

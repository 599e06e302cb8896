use thiserror::Error;

use crate::factorization::InfeasibleReason;
use crate::rational::Rational;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("malformed input at line {line}, column {column}: {message}")]
    MalformedInput {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cycle types differ; permutations are not conjugate")]
    CycleTypeMismatch,

    #[error("missing fixed-point count for power {0}")]
    MissingDivisor(u64),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cycle lengths out of range: need 2 <= l2 <= l1 <= n, got l1={l1}, l2={l2}, n={n}")]
    LengthOutOfRange { l1: usize, l2: usize, n: usize },

    #[error("infeasible: {0}")]
    Infeasible(InfeasibleReason),

    #[error("certificate does not multiply back to the target permutation")]
    CertificateMismatch,

    #[error("range error: {0}")]
    Range(String),

    #[error("bad cycle index {index} (permutation has {count} nontrivial cycles)")]
    BadIndex { index: usize, count: usize },

    #[error("target unreachable: cyc_inf(q) = {c_q} exceeds {m} * cyc_inf(p) = {bound}")]
    InfeasibleTarget {
        c_q: Rational,
        m: u64,
        bound: Rational,
    },

    #[error(
        "slack too small: sum margin {sum_margin}, balance margin {balance_margin}, need at least {required}"
    )]
    SlackTooSmall {
        sum_margin: Rational,
        balance_margin: Rational,
        required: Rational,
    },

    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

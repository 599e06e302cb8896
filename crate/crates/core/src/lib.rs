//! Permutation calculus for metric ultraproducts of symmetric groups.
//!
//! * [`perm`]: finite permutations, cycle decomposition, Hamming distance, conjugation.
//! * [`cycle_stats`]: integer cycle types and the fixed-point calculus of powers.
//! * [`profile`]: normalized, exact-rational cycle statistics and class predicates.
//! * [`factorization`]: products of two cycles with prescribed lengths.
//! * [`witness`]: finite-level constructions realizing class products.
//! * [`oracle`]: brute-force enumeration on small symmetric groups.
//! * [`suites`]: the verification suites shared by the CLI and the acceptance tests.

pub mod cycle_stats;
pub mod error;
pub mod factorization;
pub mod oracle;
pub mod perm;
pub mod profile;
pub mod rational;
pub mod suites;
pub mod witness;

pub use cycle_stats::CycleType;
pub use error::{Error, Result};
pub use factorization::{factorize, feasible, FactorizationCertificate, FeasibilityWitness};
pub use perm::{Cycle, CycleDecomposition, Permutation};
pub use profile::{PermSequence, SoficProfile};
pub use rational::Rational;

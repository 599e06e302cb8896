use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::rational::{self, Rational};

/// Structured summary of a single permutation. Cycles are listed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermReport {
    pub degree: usize,
    pub cycles: Vec<Vec<u32>>,
    pub fixed_point_count: usize,
    pub cyc: BTreeMap<u64, u64>,
    pub m: usize,
    pub n_cycles: usize,
    #[serde(with = "rational::serde_str")]
    pub hamming_to_id: Rational,
}

impl PermReport {
    pub fn new(p: &Permutation) -> Self {
        let dcd = p.decompose();
        let (m, n_cycles) = p.support_stats();
        PermReport {
            degree: p.degree(),
            cycles: dcd
                .cycles()
                .iter()
                .map(|c| c.points().iter().map(|a| a + 1).collect())
                .collect(),
            fixed_point_count: dcd.fixed_points().len(),
            cyc: p.cycle_type().masses().clone(),
            m,
            n_cycles,
            hamming_to_id: p.hamming_to_identity(),
        }
    }
}

//! Exhaustive ground truth on small symmetric groups.
//!
//! Nothing here is clever on purpose: every answer comes from enumeration.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::FactorizationCertificate;
use crate::perm::{Cycle, Permutation};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Number of `l`-cycles in `S_n`: `C(n, l) · (l − 1)!`.
pub fn cycle_count(n: usize, l: usize) -> u128 {
    if l == 0 || l > n {
        return 0;
    }
    let mut binom: u128 = 1;
    for k in 0..l as u128 {
        binom = binom * (n as u128 - k) / (k + 1);
    }
    (1..l as u128).fold(binom, |acc, k| acc * k)
}

/// Every `l`-cycle of `S_n` exactly once: each support set, with its smallest point first
/// and the rest in every order.
pub fn enumerate_cycles(n: usize, l: usize) -> Result<impl Iterator<Item = Cycle>> {
    if !(2 <= l && l <= n) {
        return Err(Error::Range(format!("need 2 <= l <= n, got l={l}, n={n}")));
    }
    Ok((0..n as u32).combinations(l).flat_map(|support| {
        let first = support[0];
        let rest = support[1..].to_vec();
        let k = rest.len();
        rest.into_iter().permutations(k).map(move |tail| {
            let mut points = Vec::with_capacity(tail.len() + 1);
            points.push(first);
            points.extend(tail);
            Cycle::new(points).expect("distinct points")
        })
    }))
}

/// Scans all `l1`-cycles `C1` and tests whether `C1⁻¹ ∘ σ` is an `l2`-cycle.
pub fn brute_force_two_cycle(
    sigma: &Permutation,
    l1: usize,
    l2: usize,
    budget: u128,
) -> Result<Option<FactorizationCertificate>> {
    let n = sigma.degree();
    if !(2 <= l2 && l2 <= l1 && l1 <= n) {
        return Err(Error::LengthOutOfRange { l1, l2, n });
    }
    let needed = cycle_count(n, l1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    for c1 in enumerate_cycles(n, l1)? {
        let rest = c1.as_permutation(n)?.inverse().compose(sigma)?;
        let dcd = rest.decompose();
        if let [c2] = dcd.cycles() {
            if c2.len() == l2 {
                return FactorizationCertificate::new(sigma, c1, c2.clone()).map(Some);
            }
        }
    }
    Ok(None)
}

/// One representative per conjugacy class of `S_n`.
#[derive(Debug, Clone)]
pub struct ClassTransversal {
    degree: usize,
    partitions: Vec<Vec<usize>>,
    representatives: Vec<Permutation>,
}

impl ClassTransversal {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn representatives(&self) -> &[Permutation] {
        &self.representatives
    }

    /// Partitions in the same order as the representatives, parts nonincreasing.
    pub fn partitions(&self) -> &[Vec<usize>] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Partitions of `n` into nonincreasing parts, largest first part first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Lays the parts out on consecutive intervals: `(1..λ1)(λ1+1..λ1+λ2)...`.
pub fn representative(partition: &[usize]) -> Permutation {
    let n: usize = partition.iter().sum();
    let mut images = Vec::with_capacity(n);
    let mut start = 0u32;
    for &len in partition {
        let len = len as u32;
        for k in 0..len {
            images.push(start + (k + 1) % len);
        }
        start += len;
    }
    Permutation::from_images(images).expect("interval layout is a bijection")
}

pub fn class_transversal(n: usize) -> Result<ClassTransversal> {
    if !(1..=12).contains(&n) {
        return Err(Error::Range(format!(
            "class transversal supports 1 <= n <= 12, got {n}"
        )));
    }
    let partitions = partitions(n);
    let representatives = partitions.iter().map(|p| representative(p)).collect();
    Ok(ClassTransversal {
        degree: n,
        partitions,
        representatives,
    })
}

/// One row of the exported feasibility table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityRow {
    pub n: usize,
    /// Cycle type as nonincreasing parts, e.g. `"3,1,1"`.
    #[serde(rename = "type")]
    pub cycle_type: String,
    pub l1: usize,
    pub l2: usize,
    pub feasible: bool,
}

/// Brute-force feasibility for every class of `S_n` and every `2 ≤ l2 ≤ l1 ≤ n`.
pub fn feasibility_table(n: usize, budget: u128) -> Result<Vec<FeasibilityRow>> {
    let classes = class_transversal(n)?;
    let mut rows = Vec::new();
    for (parts, sigma) in classes.partitions().iter().zip(classes.representatives()) {
        for l1 in 2..=n {
            for l2 in 2..=l1 {
                rows.push(FeasibilityRow {
                    n,
                    cycle_type: parts.iter().join(","),
                    l1,
                    l2,
                    feasible: brute_force_two_cycle(sigma, l1, l2, budget)?.is_some(),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        assert_eq!(enumerate_cycles(4, 3).unwrap().count(), 8);
        assert_eq!(enumerate_cycles(3, 2).unwrap().count(), 3);
        for n in 2..=7 {
            let expected: usize = (1..n).product();
            assert_eq!(enumerate_cycles(n, n).unwrap().count(), expected);
            for l in 2..=n {
                assert_eq!(
                    enumerate_cycles(n, l).unwrap().count() as u128,
                    cycle_count(n, l)
                );
            }
        }
        assert!(enumerate_cycles(3, 1).is_err());
        assert!(enumerate_cycles(3, 4).is_err());
    }

    #[test]
    fn enumerated_cycles_are_distinct_cycles() {
        let all: Vec<Permutation> = enumerate_cycles(5, 4)
            .unwrap()
            .map(|c| c.as_permutation(5).unwrap())
            .collect();
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        assert!(all.iter().all(|p| p.support_stats() == (4, 1)));
    }

    #[test]
    fn brute_force_examples() {
        let s = Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap();
        let found = brute_force_two_cycle(&s, 3, 3, DEFAULT_BUDGET).unwrap();
        assert!(found.unwrap().verify());
        assert!(brute_force_two_cycle(&s, 3, 2, DEFAULT_BUDGET)
            .unwrap()
            .is_none());

        let id = Permutation::identity(4);
        let cert = brute_force_two_cycle(&id, 2, 2, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(cert.c1().to_string(), "(1 2)");
        assert_eq!(cert.c2().to_string(), "(1 2)");
    }

    #[test]
    fn budget_guard() {
        let id = Permutation::identity(12);
        let err = brute_force_two_cycle(&id, 12, 12, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn transversal_sizes() {
        assert_eq!(class_transversal(4).unwrap().len(), 5);
        assert_eq!(class_transversal(7).unwrap().len(), 15);
        assert_eq!(class_transversal(12).unwrap().len(), 77);
        let one = class_transversal(1).unwrap();
        assert!(one.representatives()[0].is_identity());
        assert!(class_transversal(13).is_err());
        assert!(class_transversal(0).is_err());
    }

    #[test]
    fn transversal_types_are_distinct() {
        for n in 1..=8 {
            let t = class_transversal(n).unwrap();
            let types: std::collections::HashSet<_> =
                t.representatives().iter().map(|p| p.cycle_type()).collect();
            assert_eq!(types.len(), t.len());
        }
    }

    #[test]
    fn representative_layout_is_largest_first() {
        let p = representative(&[3, 2, 1]);
        assert_eq!(p.format_cycles(), "(1 2 3)(4 5)");
    }

    #[test]
    fn oracle_is_conjugation_invariant() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for sigma in class_transversal(6).unwrap().representatives() {
            let r = Permutation::random(6, &mut rng);
            let conj = sigma.conjugate(&r).unwrap();
            for l1 in 2..=6 {
                for l2 in 2..=l1 {
                    let a = brute_force_two_cycle(sigma, l1, l2, DEFAULT_BUDGET).unwrap();
                    let b = brute_force_two_cycle(&conj, l1, l2, DEFAULT_BUDGET).unwrap();
                    assert_eq!(a.is_some(), b.is_some(), "{sigma:?} ({l1},{l2})");
                }
            }
        }
    }
}

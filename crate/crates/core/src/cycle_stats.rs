//! Integer cycle statistics and the fixed-point calculus of powers.
//!
//! A [`CycleType`] stores *masses*: `cyc_i` is the number of points lying on cycles of
//! length `i`, i.e. `i` times the number of `i`-cycles. Fixed points count as mass at 1.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType {
    degree: usize,
    masses: BTreeMap<u64, u64>,
}

impl CycleType {
    /// Validates `i | mass_i` and `Σ mass_i == degree`. Zero entries are dropped.
    pub fn new(degree: usize, masses: BTreeMap<u64, u64>) -> Result<Self> {
        let mut total = 0u64;
        for (&len, &mass) in &masses {
            if len == 0 {
                return Err(Error::Range("cycle length 0".into()));
            }
            if mass % len != 0 {
                return Err(Error::Range(format!(
                    "mass {mass} at length {len} is not a multiple of {len}"
                )));
            }
            total += mass;
        }
        if total != degree as u64 {
            return Err(Error::Range(format!(
                "masses sum to {total}, expected degree {degree}"
            )));
        }
        let masses = masses.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(CycleType { degree, masses })
    }

    pub(crate) fn from_orbit_lengths(
        degree: usize,
        lengths: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut masses = BTreeMap::new();
        for l in lengths {
            *masses.entry(l as u64).or_insert(0) += l as u64;
        }
        CycleType { degree, masses }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn masses(&self) -> &BTreeMap<u64, u64> {
        &self.masses
    }

    /// `cyc_i`; zero when absent.
    pub fn mass(&self, len: u64) -> u64 {
        self.masses.get(&len).copied().unwrap_or(0)
    }

    /// Number of cycles of length `len`.
    pub fn cycle_count(&self, len: u64) -> u64 {
        self.mass(len) / len
    }

    /// Support size `n - cyc_1`.
    pub fn support(&self) -> u64 {
        self.degree as u64 - self.mass(1)
    }

    /// Number of nontrivial cycles.
    pub fn nontrivial_cycles(&self) -> u64 {
        self.masses
            .iter()
            .filter(|&(&l, _)| l >= 2)
            .map(|(&l, &m)| m / l)
            .sum()
    }

    /// `cyc_1(p^i) = Σ_{j | i} cyc_j(p)`.
    pub fn fixed_points_of_power(&self, i: u64) -> u64 {
        assert!(i > 0, "power must be positive");
        self.masses
            .iter()
            .filter(|&(&j, _)| i.is_multiple_of(j))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Cycle type of `p^m`: an `L`-cycle splits into `gcd(L, m)` cycles of length `L / gcd`.
    pub fn power_type(&self, m: u64) -> CycleType {
        assert!(m > 0, "power must be positive");
        let mut masses = BTreeMap::new();
        for (&len, &mass) in &self.masses {
            *masses.entry(len / len.gcd(&m)).or_insert(0) += mass;
        }
        CycleType {
            degree: self.degree,
            masses,
        }
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in increasing order.
pub fn prime_factorization(mut i: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= i {
        if i.is_multiple_of(d) {
            let mut e = 0;
            while i.is_multiple_of(d) {
                i /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if i > 1 {
        out.push((i, 1));
    }
    out
}

/// Recovers `cyc_i` from fixed-point counts of powers.
///
/// With `i = a_1^{r_1} ... a_t^{r_t}`, sums `(-1)^{|ε|} fix[a_1^{r_1-ε_1} ... a_t^{r_t-ε_t}]`
/// over `ε ∈ {0,1}^t`, where `fix[d]` is `cyc_1(p^d)`.
pub fn cyc_by_inclusion_exclusion(fix: &HashMap<u64, u64>, i: u64) -> Result<i64> {
    assert!(i > 0, "length must be positive");
    let primes = prime_factorization(i);
    let t = primes.len();
    let mut total = 0i64;
    for mask in 0u32..(1 << t) {
        let mut d = i;
        for (bit, &(a, _)) in primes.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                d /= a;
            }
        }
        let value = *fix.get(&d).ok_or(Error::MissingDivisor(d))? as i64;
        if mask.count_ones() % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn ty(n: usize, s: &str) -> CycleType {
        Permutation::parse_cycles(s, n).unwrap().cycle_type()
    }

    #[test]
    fn new_validates() {
        let ok = CycleType::new(5, [(1, 2), (3, 3)].into_iter().collect()).unwrap();
        assert_eq!(ok.nontrivial_cycles(), 1);
        assert!(CycleType::new(5, [(2, 3), (1, 2)].into_iter().collect()).is_err());
        assert!(CycleType::new(5, [(1, 4)].into_iter().collect()).is_err());
    }

    #[test]
    fn fixed_points_of_square() {
        let p = Permutation::parse_cycles("(1 2)(3 4 5)", 6).unwrap();
        let t = p.cycle_type();
        assert_eq!(t.fixed_points_of_power(2), 3);
        assert_eq!(p.power(2).fixed_point_count(), 3);
        assert_eq!(t.fixed_points_of_power(1), t.mass(1));
        let id = Permutation::identity(9).cycle_type();
        for i in 1..12 {
            assert_eq!(id.fixed_points_of_power(i), 9);
        }
    }

    #[test]
    fn inclusion_exclusion_examples() {
        // i = 2: cyc_1(p^2) - cyc_1(p)
        let p = Permutation::parse_cycles("(1 2)(3 4)(5 6 7)", 8).unwrap();
        let fix: HashMap<u64, u64> = [
            (1, p.fixed_point_count() as u64),
            (2, p.power(2).fixed_point_count() as u64),
        ]
        .into_iter()
        .collect();
        assert_eq!(cyc_by_inclusion_exclusion(&fix, 2).unwrap(), 4);

        // 6-cycle
        let fix: HashMap<u64, u64> = [(1, 0), (2, 0), (3, 0), (6, 6)].into_iter().collect();
        assert_eq!(cyc_by_inclusion_exclusion(&fix, 6).unwrap(), 6);

        let fix: HashMap<u64, u64> = [(1, 4)].into_iter().collect();
        assert_eq!(cyc_by_inclusion_exclusion(&fix, 1).unwrap(), 4);
    }

    #[test]
    fn inclusion_exclusion_reports_missing_divisor() {
        let fix: HashMap<u64, u64> = [(12, 3), (6, 1)].into_iter().collect();
        assert_eq!(
            cyc_by_inclusion_exclusion(&fix, 12),
            Err(Error::MissingDivisor(4))
        );
    }

    #[test]
    fn power_type_examples() {
        let all_transpositions = ty(6, "(1 2)(3 4)(5 6)");
        assert_eq!(
            all_transpositions.power_type(2),
            Permutation::identity(6).cycle_type()
        );
        let four = ty(4, "(1 2 3 4)");
        assert_eq!(four.power_type(2), ty(4, "(1 3)(2 4)"));
        assert_eq!(four.power_type(1), four);
    }

    #[test]
    fn factorization_by_trial_division() {
        assert_eq!(prime_factorization(1), vec![]);
        assert_eq!(prime_factorization(12), vec![(2, 2), (3, 1)]);
        assert_eq!(prime_factorization(97), vec![(97, 1)]);
        assert_eq!(prime_factorization(30), vec![(2, 1), (3, 1), (5, 1)]);
    }
}

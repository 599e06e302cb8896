//! Normalized cycle statistics of elements of a metric ultraproduct of symmetric groups.
//!
//! A [`SoficProfile`] records `cyc_i ∈ [0, 1]` for finitely many lengths `i` plus the residual
//! `cyc_∞`, all as exact rationals. Two elements are conjugate exactly when their profiles
//! agree, so every predicate below is a statement about conjugacy classes.
//!
//! Finite permutations are turned into profiles by [`SoficProfile::of_permutation`], which
//! books every cycle of length at least a threshold as "infinite" mass.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SoficProfile {
    masses: BTreeMap<u64, Rational>,
    inf_mass: Rational,
}

impl SoficProfile {
    /// Builds a profile, dropping zero masses. Entries must be nonnegative and sum (with
    /// `inf_mass`) to exactly 1.
    pub fn new(masses: BTreeMap<u64, Rational>, inf_mass: Rational) -> Result<Self> {
        let mut total = inf_mass;
        if inf_mass.is_negative() {
            return Err(Error::InvalidProfile(format!(
                "negative cyc_inf {inf_mass}"
            )));
        }
        for (&len, mass) in &masses {
            if len == 0 {
                return Err(Error::InvalidProfile("length 0".into()));
            }
            if mass.is_negative() {
                return Err(Error::InvalidProfile(format!(
                    "negative mass {mass} at {len}"
                )));
            }
            total += mass;
        }
        if total != Rational::one() {
            return Err(Error::InvalidProfile(format!(
                "masses sum to {total}, not 1"
            )));
        }
        let masses = masses.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(SoficProfile { masses, inf_mass })
    }

    /// The profile `{1: 1 - c, ∞: c}` of an element of `cyc({1,∞})`.
    pub fn one_inf(inf_mass: Rational) -> Result<Self> {
        let masses = [(1, Rational::one() - inf_mass)].into_iter().collect();
        Self::new(masses, inf_mass)
    }

    pub fn identity() -> Self {
        Self::one_inf(Rational::zero()).expect("valid")
    }

    /// Profile of a finite permutation: `cyc_i / n` for `i < inf_threshold`, the rest is
    /// booked as `cyc_∞`.
    pub fn of_permutation(p: &Permutation, inf_threshold: u64) -> Self {
        let n = p.degree();
        assert!(n > 0, "empty permutation has no profile");
        assert!(inf_threshold > 0, "threshold must be positive");
        let mut masses = BTreeMap::new();
        let mut inf_count = 0u64;
        for (&len, &mass) in p.cycle_type().masses() {
            if len >= inf_threshold {
                inf_count += mass;
            } else {
                masses.insert(len, rational::ratio(mass as i128, n as i128));
            }
        }
        SoficProfile {
            masses,
            inf_mass: rational::ratio(inf_count as i128, n as i128),
        }
    }

    pub fn masses(&self) -> &BTreeMap<u64, Rational> {
        &self.masses
    }

    pub fn mass(&self, len: u64) -> Rational {
        self.masses
            .get(&len)
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    pub fn inf_mass(&self) -> Rational {
        self.inf_mass
    }

    /// Normalized support size `1 - cyc_1`.
    pub fn m(&self) -> Rational {
        Rational::one() - self.mass(1)
    }

    /// Normalized number of nontrivial cycles `Σ_{i≥2} cyc_i / i`.
    pub fn n(&self) -> Rational {
        self.masses
            .iter()
            .filter(|&(&i, _)| i >= 2)
            .map(|(&i, &m)| m / Rational::from_integer(i as i128))
            .sum()
    }

    /// Largest finite length carrying mass.
    fn max_finite_len(&self) -> u64 {
        self.masses.keys().next_back().copied().unwrap_or(1)
    }

    /// Equal `cyc_i` at every finite `i`.
    pub fn conjugate_equiv(&self, other: &SoficProfile) -> bool {
        self.masses == other.masses
    }

    /// No mass at finite lengths `≥ 2`.
    pub fn in_cyc_1_inf(&self) -> bool {
        self.masses.keys().all(|&i| i == 1)
    }

    /// Profile of the `m`-th power: finite mass at `L` moves to `L / gcd(L, m)`,
    /// `cyc_∞` is unchanged.
    pub fn power_profile(&self, m: u64) -> SoficProfile {
        assert!(m > 0, "power must be positive");
        let mut masses = BTreeMap::new();
        for (&len, &mass) in &self.masses {
            *masses
                .entry(len / len.gcd(&m))
                .or_insert_with(Rational::zero) += mass;
        }
        SoficProfile {
            masses,
            inf_mass: self.inf_mass,
        }
    }

    /// Whether every power `p^m` stays conjugate to `p`.
    ///
    /// Only `gcd(m, L)` for the finite lengths `L` matters, so exponents up to the largest
    /// finite length cover every case.
    pub fn powers_stay_in_class(&self) -> bool {
        (2..=self.max_finite_len()).all(|m| self.power_profile(m).conjugate_equiv(self))
    }

    fn require_one_inf(&self, what: &str) -> Result<()> {
        if self.in_cyc_1_inf() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} is outside cyc({{1,inf}}): {self}"
            )))
        }
    }

    /// For `p = self`, `q` both in `cyc({1,∞})`: `q ∈ Cl(p)^m  ⇔  cyc_∞(q) ≤ m·cyc_∞(p)`.
    pub fn in_class_power(q: &SoficProfile, p: &SoficProfile, m: u64) -> Result<bool> {
        if m < 2 {
            return Err(Error::Domain(format!("power must exceed 1, got {m}")));
        }
        p.require_one_inf("p")?;
        q.require_one_inf("q")?;
        Ok(q.inf_mass <= Rational::from_integer(m as i128) * p.inf_mass)
    }

    /// `cyc({∞}) ⊂ Cl(p)^m`, equivalently `cyc_∞(p) ≥ 1/m`.
    pub fn covers_from(&self, m: u64) -> Result<bool> {
        if m < 2 {
            return Err(Error::Domain(format!("power must exceed 1, got {m}")));
        }
        self.require_one_inf("p")?;
        Ok(self.inf_mass >= rational::ratio(1, m as i128))
    }

    /// `p ∈ Cl(q1)·Cl(q2)` for `q1, q2 ∈ cyc({1,∞})` with `cyc_∞(q1) ≥ cyc_∞(q2) > 0`.
    ///
    /// `cyc_∞(q2) = 0` is rejected. The obvious extension `Cl(q1)·Cl(Id) = Cl(q1)` is not
    /// what the inequalities say at that boundary, so it is left to the caller.
    pub fn in_two_class_product(&self, q1: &SoficProfile, q2: &SoficProfile) -> Result<bool> {
        q1.require_one_inf("q1")?;
        q2.require_one_inf("q2")?;
        two_class_condition(self.m(), self.n(), q1.inf_mass, q2.inf_mass)
    }

    /// Checks a candidate automorphism image `img` of `self` against the inequalities an
    /// automorphism must satisfy.
    pub fn trace_constraints(&self, img: &SoficProfile) -> TraceReport {
        let (m, n) = (self.m(), self.n());
        let (mi, ni) = (img.m(), img.n());
        let bracket = if self.in_cyc_1_inf() && img.in_cyc_1_inf() {
            let b = |c: Rational| {
                if c.is_zero() {
                    None
                } else {
                    Some(bracket_index(c).expect("0 < c <= 1"))
                }
            };
            Some((b(self.inf_mass), b(img.inf_mass)))
        } else {
            None
        };
        TraceReport {
            sum_nonincreasing: mi + ni <= m + n,
            difference_nondecreasing: mi - ni >= m - n,
            bracket,
            n_nonincreasing: ni <= n,
            lhs: (m, n),
            rhs: (mi, ni),
        }
    }
}

/// The two inequalities `m + n ≤ c1 + c2` and `m − n ≥ c1 − c2` on raw values.
pub fn two_class_condition(m: Rational, n: Rational, c1: Rational, c2: Rational) -> Result<bool> {
    if !(c1 >= c2 && c2.is_positive() && c1 <= Rational::one()) {
        return Err(Error::Domain(format!(
            "need 1 >= cyc_inf(q1) >= cyc_inf(q2) > 0, got {c1} and {c2}"
        )));
    }
    Ok(m + n <= c1 + c2 && m - n >= c1 - c2)
}

/// The unique `m ≥ 1` with `1/m ≤ c < 1/(m−1)` (the `m = 1` bracket is `{1}`).
pub fn bracket_index(c: Rational) -> Result<u64> {
    if !c.is_positive() || c > Rational::one() {
        return Err(Error::Domain(format!("bracket needs 0 < c <= 1, got {c}")));
    }
    // 1/c ∈ (m−1, m]
    Ok(c.recip().ceil().to_integer() as u64)
}

/// Outcome of [`SoficProfile::trace_constraints`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    /// `m(img) + n(img) ≤ m(p) + n(p)`
    pub sum_nonincreasing: bool,
    /// `m(img) − n(img) ≥ m(p) − n(p)`
    pub difference_nondecreasing: bool,
    /// Bracket indices of `cyc_∞` when both lie in `cyc({1,∞})`; `None` inside marks `cyc_∞ = 0`.
    pub bracket: Option<(Option<u64>, Option<u64>)>,
    /// `n(img) ≤ n(p)`, implied by the first two.
    pub n_nonincreasing: bool,
    pub lhs: (Rational, Rational),
    pub rhs: (Rational, Rational),
}

impl TraceReport {
    pub fn bracket_holds(&self) -> bool {
        match self.bracket {
            None => true,
            Some((a, b)) => a == b,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.sum_nonincreasing && self.difference_nondecreasing && self.bracket_holds()
    }
}

impl fmt::Display for SoficProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in &self.masses {
            write!(f, "{i}:{}, ", rational::format(m))?;
        }
        write!(f, "inf:{}}}", rational::format(&self.inf_mass))
    }
}

impl std::str::FromStr for SoficProfile {
    type Err = Error;

    /// Parses `1:1/2,3:1/4,inf:1/4`. A missing `inf` entry takes the residual.
    fn from_str(s: &str) -> Result<Self> {
        let mut masses = BTreeMap::new();
        let mut inf = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidProfile(format!("expected len:mass, got {part:?}")))?;
            let value = rational::parse(value)?;
            if key.trim() == "inf" {
                inf = Some(value);
            } else {
                let len: u64 = key
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidProfile(format!("bad length {key:?}")))?;
                if masses.insert(len, value).is_some() {
                    return Err(Error::InvalidProfile(format!("length {len} given twice")));
                }
            }
        }
        let inf = inf.unwrap_or_else(|| Rational::one() - masses.values().sum::<Rational>());
        SoficProfile::new(masses, inf)
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileRecord {
    masses: BTreeMap<u64, String>,
    inf: String,
}

impl Serialize for SoficProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileRecord {
            masses: self
                .masses
                .iter()
                .map(|(&i, m)| (i, rational::format(m)))
                .collect(),
            inf: rational::format(&self.inf_mass),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SoficProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = ProfileRecord::deserialize(d)?;
        let masses = rec
            .masses
            .into_iter()
            .map(|(i, m)| rational::parse(&m).map(|m| (i, m)))
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        let inf = rational::parse(&rec.inf).map_err(D::Error::custom)?;
        SoficProfile::new(masses, inf).map_err(D::Error::custom)
    }
}

/// Finite list of permutations of nondecreasing degree standing in for `Π_{k→ω} p_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSequence {
    levels: Vec<Permutation>,
}

/// How the infinite-mass threshold scales with the level degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    /// `⌈√n⌉`
    #[default]
    Sqrt,
    Fixed(u64),
}

impl ThresholdRule {
    pub fn threshold(self, n: usize) -> u64 {
        match self {
            ThresholdRule::Sqrt => ceil_sqrt(n as u64).max(1),
            ThresholdRule::Fixed(t) => t.max(1),
        }
    }
}

pub fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Per-level profiles plus per-length trajectories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub degrees: Vec<usize>,
    pub thresholds: Vec<u64>,
    pub profiles: Vec<SoficProfile>,
    /// `i ↦ [cyc_i at level 0, level 1, ...]` for every length seen at some level.
    #[serde(serialize_with = "serialize_trajectories")]
    pub trajectories: BTreeMap<u64, Vec<Rational>>,
    #[serde(serialize_with = "serialize_rationals")]
    pub inf_trajectory: Vec<Rational>,
}

fn serialize_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

fn serialize_trajectories<S: serde::Serializer>(
    v: &BTreeMap<u64, Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(
        v.iter()
            .map(|(i, t)| (i, t.iter().map(rational::format).collect::<Vec<_>>())),
    )
}

impl PermSequence {
    /// Degrees must be nondecreasing.
    pub fn new(levels: Vec<Permutation>) -> Result<Self> {
        if let Some(w) = levels.windows(2).find(|w| w[0].degree() > w[1].degree()) {
            return Err(Error::Domain(format!(
                "degrees must be nondecreasing, found {} then {}",
                w[0].degree(),
                w[1].degree()
            )));
        }
        if levels.iter().any(|p| p.degree() == 0) {
            return Err(Error::Domain("levels must have positive degree".into()));
        }
        Ok(PermSequence { levels })
    }

    pub fn levels(&self) -> &[Permutation] {
        &self.levels
    }

    pub fn stats(&self, rule: ThresholdRule) -> SequenceReport {
        let degrees: Vec<usize> = self.levels.iter().map(Permutation::degree).collect();
        let thresholds: Vec<u64> = degrees.iter().map(|&n| rule.threshold(n)).collect();
        let profiles: Vec<SoficProfile> = self
            .levels
            .iter()
            .zip(&thresholds)
            .map(|(p, &t)| SoficProfile::of_permutation(p, t))
            .collect();
        let mut trajectories = BTreeMap::new();
        for prof in &profiles {
            for &i in prof.masses().keys() {
                trajectories.entry(i).or_insert_with(Vec::new);
            }
        }
        for (i, traj) in trajectories.iter_mut() {
            *traj = profiles.iter().map(|p| p.mass(*i)).collect();
        }
        SequenceReport {
            degrees,
            thresholds,
            inf_trajectory: profiles.iter().map(SoficProfile::inf_mass).collect(),
            profiles,
            trajectories,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LevelRecord {
    degree: usize,
    images: String,
}

impl Serialize for PermSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.levels.iter().map(|p| LevelRecord {
            degree: p.degree(),
            images: p.format_one_line(),
        }))
    }
}

impl<'de> Deserialize<'de> for PermSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let recs = Vec::<LevelRecord>::deserialize(d)?;
        let mut levels = Vec::with_capacity(recs.len());
        for rec in recs {
            let p = Permutation::parse_one_line(&rec.images).map_err(D::Error::custom)?;
            if p.degree() != rec.degree {
                return Err(D::Error::custom(format!(
                    "record declares degree {} but has {} images",
                    rec.degree,
                    p.degree()
                )));
            }
            levels.push(p);
        }
        PermSequence::new(levels).map_err(D::Error::custom)
    }
}

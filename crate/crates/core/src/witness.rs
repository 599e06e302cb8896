//! Finite-level constructions behind the class-product statements.
//!
//! Each builder produces concrete permutations of a fixed degree and then *measures* what it
//! built; reported statistics are never copied from the request.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{factorize, FactorizationCertificate};
use crate::perm::Permutation;
use crate::profile::{ceil_sqrt, SoficProfile};
use crate::rational::{self, Rational};

/// `c_{s,t}^n = (s, s+1, ..., t)` on 1-based points.
pub fn interval_cycle(s: usize, t: usize, n: usize) -> Result<Permutation> {
    if !(1 <= s && s <= t && t <= n) {
        return Err(Error::Range(format!(
            "need 1 <= s <= t <= n, got s={s}, t={t}, n={n}"
        )));
    }
    let mut images: Vec<u32> = (0..n as u32).collect();
    for (a, image) in images.iter_mut().enumerate().take(t - 1).skip(s - 1) {
        *image = a as u32 + 1;
    }
    images[t - 1] = s as u32 - 1;
    Ok(Permutation::from_images_unchecked(images))
}

/// Rewires the given orbits (each listed in cycle order) into one cycle by concatenation.
/// Changes the image of the last point of each orbit when two or more are glued.
fn glue_orbits(images: &mut [u32], orbits: &[&[u32]]) {
    let seq: Vec<u32> = orbits.iter().flat_map(|o| o.iter().copied()).collect();
    if orbits.len() < 2 {
        return;
    }
    for (k, &a) in seq.iter().enumerate() {
        images[a as usize] = seq[(k + 1) % seq.len()];
    }
}

/// Replaces the selected nontrivial cycles of `p` (indices into the canonical decomposition)
/// by one cycle on the union of their supports.
pub fn glue_cycles(p: &Permutation, selected: &[usize]) -> Result<Permutation> {
    let dcd = p.decompose();
    let count = dcd.cycles().len();
    let mut indices = selected.to_vec();
    indices.sort_unstable();
    indices.dedup();
    if let Some(&bad) = indices.iter().find(|&&i| i >= count) {
        return Err(Error::BadIndex { index: bad, count });
    }
    let orbits: Vec<&[u32]> = indices.iter().map(|&i| dcd.cycles()[i].points()).collect();
    let mut images = p.images().to_vec();
    glue_orbits(&mut images, &orbits);
    Ok(Permutation::from_images_unchecked(images))
}

/// Result of [`approximate_conjugator`].
#[derive(Debug, Clone)]
pub struct ApproximateConjugator {
    pub r: Permutation,
    /// `d_Hamm(r ∘ p ∘ r⁻¹, q)`.
    pub defect: Rational,
    /// Points on unmatched orbits, per side (equal on both sides).
    pub unmatched_mass: usize,
    /// Number of unmatched orbits of `p`, fixed points included.
    pub glued_p: usize,
    /// Number of unmatched orbits of `q`, fixed points included.
    pub glued_q: usize,
}

fn orbits_by_length(p: &Permutation) -> BTreeMap<usize, Vec<Vec<u32>>> {
    let mut groups: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    p.for_each_cycle(|c| groups.entry(c.len()).or_default().push(c.to_vec()));
    groups
}

/// Conjugates `p` close to `q` by pairing equal-length orbits and sending the leftovers of
/// `p` onto the leftovers of `q` in concatenation order.
///
/// Gluing each side's leftovers into one cycle gives two conjugate permutations, and the
/// returned `r` conjugates one glued permutation onto the other. Hence the defect is at most
/// the number of glued orbits on both sides, and also at most the unmatched mass.
pub fn approximate_conjugator(p: &Permutation, q: &Permutation) -> Result<ApproximateConjugator> {
    let n = p.degree();
    if n != q.degree() {
        return Err(Error::DegreeMismatch {
            left: n,
            right: q.degree(),
        });
    }
    let mut gp = orbits_by_length(p);
    let mut gq = orbits_by_length(q);
    let lengths: std::collections::BTreeSet<usize> = gp.keys().chain(gq.keys()).copied().collect();

    let mut images = vec![u32::MAX; n];
    let mut excess_p: Vec<Vec<u32>> = Vec::new();
    let mut excess_q: Vec<Vec<u32>> = Vec::new();
    for len in lengths {
        let a = gp.remove(&len).unwrap_or_default();
        let b = gq.remove(&len).unwrap_or_default();
        let matched = a.len().min(b.len());
        for (x, y) in a.iter().zip(&b) {
            for (&u, &v) in x.iter().zip(y) {
                images[u as usize] = v;
            }
        }
        excess_p.extend(a.into_iter().skip(matched));
        excess_q.extend(b.into_iter().skip(matched));
    }
    let seq_p: Vec<u32> = excess_p.iter().flatten().copied().collect();
    let seq_q: Vec<u32> = excess_q.iter().flatten().copied().collect();
    debug_assert_eq!(seq_p.len(), seq_q.len());
    for (&u, &v) in seq_p.iter().zip(&seq_q) {
        images[u as usize] = v;
    }
    let r = Permutation::from_images(images).expect("orbit pairing is a bijection");
    let defect = p.conjugate(&r)?.hamming(q)?;
    Ok(ApproximateConjugator {
        r,
        defect,
        unmatched_mass: seq_p.len(),
        glued_p: excess_p.len(),
        glued_q: excess_q.len(),
    })
}

/// Which construction [`build_power_class_witness`] used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerCase {
    /// `cyc_∞(q) > cyc_∞(p)`: `m` overlapping interval cycles.
    Spread,
    /// `cyc_∞(q) ≤ cyc_∞(p)`: a kept cycle plus a tail that cancels in the product.
    Cancel,
}

/// A constructed product together with its measured statistics.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub target: SoficProfile,
    /// Measured from the product of `parts` at threshold `⌈√n⌉`.
    pub achieved: SoficProfile,
    /// Largest deviation among `cyc_1`, `cyc_∞` and the finite masses `cyc_i`, `i ≥ 2`.
    pub defect: Rational,
    pub parts: Vec<Permutation>,
    pub product: Permutation,
    pub case: PowerCase,
}

/// Serialized form of a [`WitnessReport`].
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub case: PowerCase,
    pub degree: usize,
    pub target: SoficProfile,
    pub achieved: SoficProfile,
    pub defect: String,
    pub part_supports: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<String>>,
}

impl WitnessReport {
    fn measure(target: SoficProfile, parts: Vec<Permutation>, case: PowerCase) -> Result<Self> {
        let n = parts[0].degree();
        let mut product = Permutation::identity(n);
        for part in &parts {
            product = product.compose(part)?;
        }
        let achieved = SoficProfile::of_permutation(&product, ceil_sqrt(n as u64));
        let mut defect = (achieved.inf_mass() - target.inf_mass()).abs();
        defect = defect.max((achieved.mass(1) - target.mass(1)).abs());
        for (&i, &mass) in achieved.masses() {
            if i >= 2 {
                defect = defect.max((mass - target.mass(i)).abs());
            }
        }
        Ok(WitnessReport {
            target,
            achieved,
            defect,
            parts,
            product,
            case,
        })
    }

    pub fn degree(&self) -> usize {
        self.product.degree()
    }

    pub fn record(&self, include_parts: bool) -> WitnessRecord {
        WitnessRecord {
            case: self.case,
            degree: self.degree(),
            target: self.target.clone(),
            achieved: self.achieved.clone(),
            defect: rational::format(&self.defect),
            part_supports: self.parts.iter().map(|p| p.support_stats().0).collect(),
            parts: include_parts.then(|| {
                self.parts
                    .iter()
                    .map(Permutation::format_one_line)
                    .collect()
            }),
        }
    }
}

/// Writes an element of `Cl(q)` as a product of `m` elements of `Cl(p)` at degree `n`, where
/// `p, q ∈ cyc({1,∞})` have `cyc_∞` equal to `c_p`, `c_q`.
///
/// Spread case: parts are `c_{a_t, a_t + j}` with `j + 1 = ⌊c_p n⌋`, offsets spread evenly
/// from `1` to `r − j`, `r ≈ c_q n`, consecutive intervals overlapping.
/// Cancel case: parts are `c_{1,r} c_{r+1,j}` except the last, `c_{1,r} (c_{r+1,j})^{−(m−1)}`;
/// the product is `(c_{1,r})^m`. `r` is kept coprime to `m` and `j − r` to `m − 1` so every
/// power stays a single cycle.
pub fn build_power_class_witness(
    n: usize,
    c_p: Rational,
    c_q: Rational,
    m: u64,
) -> Result<WitnessReport> {
    let unit = |c: Rational, name: &str| {
        if c.is_positive() && c <= rational::one() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{name} must lie in (0, 1], got {c}")))
        }
    };
    unit(c_p, "c_p")?;
    unit(c_q, "c_q")?;
    if m < 2 {
        return Err(Error::Domain(format!("power must exceed 1, got {m}")));
    }
    let bound = Rational::from_integer(m as i128) * c_p;
    if c_q > bound {
        return Err(Error::InfeasibleTarget { c_q, m, bound });
    }
    let scaled = |c: Rational| rational::floor(&(c * Rational::from_integer(n as i128))) as usize;
    let target = SoficProfile::one_inf(c_q)?;
    let m_us = m as usize;

    if c_q > c_p {
        let part_len = scaled(c_p);
        if part_len < 2 {
            return Err(Error::Range(format!(
                "degree {n} too small for c_p = {c_p}"
            )));
        }
        let j = part_len - 1;
        let r = scaled(c_q).min(m_us * j + 1).max(part_len);
        let span = r - j - 1;
        let offsets: Vec<usize> = (0..m_us)
            .map(|t| 1 + (2 * t * span + (m_us - 1)) / (2 * (m_us - 1)))
            .collect();
        debug_assert_eq!(offsets[m_us - 1] + j, r);
        if offsets.windows(2).any(|w| w[1] > w[0] + j) {
            return Err(Error::Range("interval cycles do not overlap".into()));
        }
        let parts = offsets
            .iter()
            .map(|&a| interval_cycle(a, a + j, n))
            .collect::<Result<Vec<_>>>()?;
        return WitnessReport::measure(target, parts, PowerCase::Spread);
    }

    let (r0, j0) = (scaled(c_q), scaled(c_p));
    let coprime = |a: usize, b: usize| a.gcd(&b) == 1;
    let choice = (0..=m_us + 1)
        .flat_map(|dr| [0usize, 1].into_iter().map(move |dj| (dr, dj)))
        .filter_map(|(dr, dj)| {
            let r = r0.checked_sub(dr)?;
            let j = j0 + dj;
            (r >= 2 && j >= r && j <= n).then_some((r, j))
        })
        .find(|&(r, j)| coprime(r, m_us) && (j - r <= 1 || coprime(j - r, m_us - 1)));
    let Some((r, j)) = choice else {
        return Err(Error::Range(format!(
            "no admissible cycle lengths near ({r0}, {j0}) at degree {n}"
        )));
    };
    let keep = interval_cycle(1, r, n)?;
    let tail = if j > r {
        interval_cycle(r + 1, j, n)?
    } else {
        Permutation::identity(n)
    };
    let regular = keep.compose(&tail)?;
    let closing = keep.compose(&tail.power(-(m as i64 - 1)))?;
    let mut parts = vec![regular; m_us - 1];
    parts.push(closing);
    WitnessReport::measure(target, parts, PowerCase::Cancel)
}

/// Writes `p` as a product of an `l1`-cycle and an `l2`-cycle with `l_i / n ≈ c_i`.
///
/// Lengths are `l1 = ⌊n c1⌋ + c` and `l2 = ⌊n c2⌋ + 2` with `c ∈ {0, 1}` fixing the parity,
/// each pulled back by 2 if it would exceed `n`. Requires both class-product inequalities to hold for `p`'s own statistics with margin at
/// least `3/n`.
pub fn build_two_class_witness(
    p: &Permutation,
    c1: Rational,
    c2: Rational,
) -> Result<FactorizationCertificate> {
    let n = p.degree();
    if !(c2.is_positive() && c1 >= c2 && c1 <= rational::one()) {
        return Err(Error::Domain(format!(
            "need 1 >= c1 >= c2 > 0, got {c1} and {c2}"
        )));
    }
    let (support, cycles) = p.support_stats();
    let pm = rational::from_count(support, n);
    let pn = rational::from_count(cycles, n);
    let sum_margin = (c1 + c2) - (pm + pn);
    let balance_margin = (pm - pn) - (c1 - c2);
    let required = rational::from_count(3, n);
    if sum_margin < required || balance_margin < required {
        return Err(Error::SlackTooSmall {
            sum_margin,
            balance_margin,
            required,
        });
    }
    let nn = Rational::from_integer(n as i128);
    let base1 = rational::floor(&(nn * c1)) as usize;
    let mut l2 = rational::floor(&(nn * c2)) as usize + 2;
    if l2 > n {
        l2 -= 2;
    }
    let mut l1 = base1 + (base1 + l2 + support + cycles) % 2;
    if l1 > n {
        l1 -= 2;
    }
    // When c1 and c2 are within a few units of 1/n the rounding can invert the order.
    let (l1, l2) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
    debug_assert!(!(c1 - c2).is_zero() || l1.abs_diff(l2) <= 2);
    factorize(p, l1, l2)
}

//! Finite permutations of `{1..n}`.
//!
//! Points are stored 0-based; everything that crosses a text boundary is 1-based.
//! Composition is right-to-left: `p.compose(q)` maps `a` to `p(q(a))`.

mod notation;
mod report;

pub use report::PermReport;

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cycle_stats::CycleType;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A bijection of `{0..n}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

/// An ordered list of distinct points, read as the cycle `a0 -> a1 -> ... -> a0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    points: Vec<u32>,
}

/// Disjoint cycle decomposition in canonical order.
///
/// Every cycle starts at its smallest point and cycles are sorted by that point.
/// Fixed points are kept apart and never appear as 1-cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    degree: usize,
    cycles: Vec<Cycle>,
    fixed_points: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (pos, &img) in images.iter().enumerate() {
            let idx = img as usize;
            if idx >= n {
                return Err(Error::MalformedInput {
                    line: 1,
                    column: pos + 1,
                    message: format!("image {} out of range 1..={n}", idx + 1),
                });
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::MalformedInput {
                    line: 1,
                    column: pos + 1,
                    message: format!("duplicate image {}", idx + 1),
                });
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of degree `n` from disjoint cycles (0-based points).
    pub fn from_cycles<'a, I>(n: usize, cycles: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Cycle>,
    {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.points.iter().enumerate() {
                let idx = a as usize;
                if idx >= n {
                    return Err(Error::Range(format!(
                        "point {} exceeds degree {n}",
                        idx + 1
                    )));
                }
                if std::mem::replace(&mut used[idx], true) {
                    return Err(Error::Range(format!("point {} appears twice", idx + 1)));
                }
                images[idx] = cycle.points[(k + 1) % cycle.points.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image array.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 0-based point `a`.
    #[inline]
    pub fn apply(&self, a: u32) -> u32 {
        self.images[a as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(a, &b)| a as u32 == b)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        let images = other
            .images
            .iter()
            .map(|&b| self.images[b as usize])
            .collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (a, &b) in self.images.iter().enumerate() {
            images[b as usize] = a as u32;
        }
        Permutation { images }
    }

    /// `self^exp`; negative exponents go through the inverse.
    pub fn power(&self, exp: i64) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        self.for_each_cycle(|cycle| {
            let len = cycle.len() as i64;
            let shift = exp.rem_euclid(len) as usize;
            for (k, &a) in cycle.iter().enumerate() {
                images[a as usize] = cycle[(k + shift) % cycle.len()];
            }
        });
        Permutation { images }
    }

    /// Visits every orbit (including fixed points) as a slice starting at its minimum.
    /// Orbits are visited in increasing order of their minimum.
    pub(crate) fn for_each_cycle<F: FnMut(&[u32])>(&self, mut f: F) {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut buf = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            buf.clear();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                buf.push(a as u32);
                a = self.images[a] as usize;
            }
            f(&buf);
        }
    }

    /// Lengths of all orbits, fixed points included, in canonical order.
    pub(crate) fn orbit_lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_cycle(|c| out.push(c.len()));
        out
    }

    pub fn decompose(&self) -> CycleDecomposition {
        let mut cycles = Vec::new();
        let mut fixed_points = Vec::new();
        self.for_each_cycle(|c| {
            if c.len() == 1 {
                fixed_points.push(c[0]);
            } else {
                cycles.push(Cycle { points: c.to_vec() });
            }
        });
        CycleDecomposition {
            degree: self.degree(),
            cycles,
            fixed_points,
        }
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_orbit_lengths(self.degree(), self.orbit_lengths())
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a as u32 == b)
            .count()
    }

    /// `(support size, number of nontrivial cycles)`.
    pub fn support_stats(&self) -> (usize, usize) {
        let mut support = 0;
        let mut nontrivial = 0;
        self.for_each_cycle(|c| {
            if c.len() > 1 {
                support += c.len();
                nontrivial += 1;
            }
        });
        (support, nontrivial)
    }

    /// Normalized Hamming distance, exact.
    pub fn hamming(&self, other: &Permutation) -> Result<Rational> {
        self.check_degree(other)?;
        let n = self.degree();
        if n == 0 {
            return Ok(rational::zero());
        }
        let differ = self
            .images
            .iter()
            .zip(&other.images)
            .filter(|(a, b)| a != b)
            .count();
        Ok(rational::from_count(differ, n))
    }

    pub fn hamming_to_identity(&self) -> Rational {
        let n = self.degree();
        if n == 0 {
            return rational::zero();
        }
        rational::from_count(n - self.fixed_point_count(), n)
    }

    /// `r ∘ self ∘ r⁻¹`.
    pub fn conjugate(&self, r: &Permutation) -> Result<Permutation> {
        self.check_degree(r)?;
        let mut images = vec![0u32; self.degree()];
        for (a, &pa) in self.images.iter().enumerate() {
            images[r.images[a] as usize] = r.images[pa as usize];
        }
        Ok(Permutation { images })
    }

    /// Some `r` with `r ∘ self ∘ r⁻¹ == target`.
    ///
    /// Cycles of equal length are paired in canonical order and mapped point by point.
    pub fn conjugator(&self, target: &Permutation) -> Result<Permutation> {
        self.check_degree(target)?;
        let mut from = self.orbits_by_length();
        let mut to = target.orbits_by_length();
        if from.len() != to.len()
            || from
                .iter()
                .zip(&to)
                .any(|((la, ca), (lb, cb))| la != lb || ca.len() != cb.len())
        {
            return Err(Error::CycleTypeMismatch);
        }
        let mut images = vec![0u32; self.degree()];
        for ((_, src), (_, dst)) in from.iter_mut().zip(to.iter_mut()) {
            for (a, b) in src.iter().zip(dst.iter()) {
                for (&x, &y) in a.iter().zip(b) {
                    images[x as usize] = y;
                }
            }
        }
        let r = Permutation { images };
        if self.conjugate(&r)? != *target {
            return Err(Error::CycleTypeMismatch);
        }
        Ok(r)
    }

    fn orbits_by_length(&self) -> Vec<(usize, Vec<Vec<u32>>)> {
        let mut groups: std::collections::BTreeMap<usize, Vec<Vec<u32>>> = Default::default();
        self.for_each_cycle(|c| groups.entry(c.len()).or_default().push(c.to_vec()));
        groups.into_iter().collect()
    }

    /// Sign as `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        let (support, nontrivial) = self.support_stats();
        if (support - nontrivial) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Order of the element, `lcm` of cycle lengths.
    pub fn order(&self) -> u128 {
        self.orbit_lengths()
            .into_iter()
            .fold(1u128, |acc, l| num_integer::lcm(acc, l as u128))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.decompose())
    }
}

impl Cycle {
    /// Builds a cycle from 0-based points, rejecting repeats.
    pub fn new(points: Vec<u32>) -> Result<Self> {
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Range("cycle repeats a point".into()));
        }
        Ok(Cycle { points })
    }

    /// Builds a cycle from 1-based points.
    pub fn from_one_based(points: &[u32]) -> Result<Self> {
        if points.contains(&0) {
            return Err(Error::Range("points are 1-based".into()));
        }
        Cycle::new(points.iter().map(|p| p - 1).collect())
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_permutation(&self, n: usize) -> Result<Permutation> {
        Permutation::from_cycles(n, std::iter::once(self))
    }

    /// Rotates so that the smallest point comes first.
    pub fn canonical(&self) -> Cycle {
        let Some(pos) = self
            .points
            .iter()
            .enumerate()
            .min_by_key(|&(_, p)| *p)
            .map(|(i, _)| i)
        else {
            return self.clone();
        };
        let mut points = self.points.clone();
        points.rotate_left(pos);
        Cycle { points }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.points.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str(")")
    }
}

impl CycleDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn fixed_points(&self) -> &[u32] {
        &self.fixed_points
    }

    pub fn recompose(&self) -> Permutation {
        Permutation::from_cycles(self.degree, &self.cycles)
            .expect("canonical decomposition has disjoint in-range cycles")
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for c in &self.cycles {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn one_line(s: &str) -> Permutation {
        Permutation::parse_one_line(s).unwrap()
    }

    fn cycles(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn compose_identity_and_inverse() {
        let p = one_line("3 1 4 2");
        assert_eq!(Permutation::identity(4).compose(&p).unwrap(), p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // (1 2)∘(2 3): 1->1->2, 2->3->3, 3->2->1
        let prod = cycles(3, "(1 2)").compose(&cycles(3, "(2 3)")).unwrap();
        assert_eq!(prod, cycles(3, "(1 2 3)"));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert_eq!(err, Err(Error::DegreeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn decompose_identity_and_sample() {
        let d = Permutation::identity(5).decompose();
        assert!(d.cycles().is_empty());
        assert_eq!(d.fixed_points(), &[0, 1, 2, 3, 4]);

        let p = one_line("2 3 1 5 4");
        let d = p.decompose();
        assert_eq!(d.to_string(), "(1 2 3)(4 5)");
        assert_eq!(d.recompose(), p);
    }

    #[test]
    fn cycle_type_examples() {
        let t = cycles(6, "(1 2 3)(4 5)").cycle_type();
        assert_eq!(t.mass(1), 1);
        assert_eq!(t.mass(2), 2);
        assert_eq!(t.mass(3), 3);
        assert_eq!(Permutation::identity(7).cycle_type().mass(1), 7);
        assert_eq!(cycles(5, "(1 2 3 4 5)").cycle_type().mass(5), 5);
    }

    #[test]
    fn hamming_examples() {
        let p = one_line("2 4 1 3");
        assert_eq!(p.hamming(&p).unwrap(), ratio(0, 1));
        let t = cycles(4, "(1 2)");
        assert_eq!(t.hamming(&Permutation::identity(4)).unwrap(), ratio(1, 2));
        assert_eq!(t.hamming_to_identity(), ratio(1, 2));
    }

    #[test]
    fn support_stats_examples() {
        assert_eq!(Permutation::identity(4).support_stats(), (0, 0));
        assert_eq!(cycles(6, "(1 2 3)(4 5)").support_stats(), (5, 2));
        assert_eq!(cycles(6, "(1 2 3 4 5 6)").support_stats(), (6, 1));
    }

    #[test]
    fn conjugate_examples() {
        let p = cycles(4, "(1 2)");
        assert_eq!(p.conjugate(&Permutation::identity(4)).unwrap(), p);
        let r = cycles(4, "(1 3)(2 4)");
        assert_eq!(p.conjugate(&r).unwrap(), cycles(4, "(3 4)"));
    }

    #[test]
    fn conjugator_examples() {
        let p = cycles(4, "(1 2)");
        let r = p.conjugator(&p).unwrap();
        assert_eq!(p.conjugate(&r).unwrap(), p);

        let q = cycles(4, "(3 4)");
        let r = p.conjugator(&q).unwrap();
        assert_eq!(p.conjugate(&r).unwrap(), q);
        assert_eq!((r.apply(0), r.apply(1)), (2, 3));

        let err = cycles(3, "(1 2)").conjugator(&cycles(3, "(1 2 3)"));
        assert_eq!(err, Err(Error::CycleTypeMismatch));
    }

    #[test]
    fn power_examples() {
        let p = cycles(4, "(1 2 3 4)");
        assert_eq!(p.power(1), p);
        assert_eq!(p.power(2), cycles(4, "(1 3)(2 4)"));
        assert_eq!(p.power(-1), p.inverse());
        assert!(p.power(0).is_identity());
        let q = cycles(7, "(1 2 3)(4 5)(6 7)");
        assert_eq!(q.order(), 6);
        assert!(q.power(6).is_identity());
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn sign_matches_transposition_count() {
        assert_eq!(cycles(5, "(1 2)").sign(), -1);
        assert_eq!(cycles(5, "(1 2 3)").sign(), 1);
        assert_eq!(cycles(5, "(1 2)(3 4)").sign(), 1);
        assert_eq!(cycles(5, "(1 2 3 4)").sign(), -1);
    }
}

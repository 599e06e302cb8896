//! Writing a permutation as a product of two cycles of prescribed lengths.
//!
//! For `σ ∈ S_n` and `2 ≤ l2 ≤ l1 ≤ n`, cycles `C1, C2` of lengths `l1, l2` with
//! `σ = C1 ∘ C2` exist iff `C1 C2` is the disjoint cycle decomposition of `σ`, or
//!
//! 1. `l1 + l2 = m(σ) + n(σ) + 2s` for some `s ≥ 0`, and
//! 2. `l1 − l2 ≤ m(σ) − n(σ)`,
//!
//! where `m` is the support size and `n` the number of nontrivial cycles.
//!
//! Construction starts from the pair of lengths `(m, n)`: a cycle through the whole support
//! and a cycle through one point of each orbit. Three transposition moves then reach any
//! admissible `(l1, l2)` while keeping the product fixed:
//!
//! * *rebalance*: a point of `C1 \ C2` whose `C1`-predecessor lies in `C2` leaves `C1` and
//!   joins `C2` (`l1 − 1, l2 + 1`);
//! * *share*: a point of `C2 \ C1` joins `C1` while a point of `C1 \ C2` joins `C2`
//!   (`l1 + 1, l2 + 1`, support unchanged);
//! * *absorb*: a fixed point of `σ` joins both cycles (`l1 + 1, l2 + 1`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Cycle, Permutation};

/// Why a length pair is not realizable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum InfeasibleReason {
    /// `l1 + l2 − m − n` is negative or odd.
    Parity { sum: usize, base: usize },
    /// `l1 − l2 > m − n`.
    Balance { difference: usize, bound: usize },
}

impl InfeasibleReason {
    pub fn name(&self) -> &'static str {
        match self {
            InfeasibleReason::Parity { .. } => "parity",
            InfeasibleReason::Balance { .. } => "balance",
        }
    }
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InfeasibleReason::Parity { sum, base } => write!(
                f,
                "parity (l1+l2 = {sum}, m+n = {base}; the difference must be even and nonnegative)"
            ),
            InfeasibleReason::Balance { difference, bound } => {
                write!(f, "balance (l1-l2 = {difference} exceeds m-n = {bound})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `σ` is already the disjoint product of an `l1`-cycle and an `l2`-cycle.
    FeasibleCanonical,
    /// Both numbered conditions hold with slack `s`.
    FeasibleParity {
        s: usize,
    },
    Infeasible {
        reason: InfeasibleReason,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityWitness {
    pub verdict: Verdict,
    pub l1: usize,
    pub l2: usize,
    /// Support size of `σ`.
    pub m: usize,
    /// Number of nontrivial cycles of `σ`.
    pub n_cycles: usize,
}

impl FeasibilityWitness {
    pub fn is_feasible(&self) -> bool {
        !matches!(self.verdict, Verdict::Infeasible { .. })
    }
}

/// Two cycles whose product is the target permutation, checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCertificate {
    sigma: Permutation,
    c1: Cycle,
    c2: Cycle,
}

impl FactorizationCertificate {
    /// Checks `σ == c1 ∘ c2` by full evaluation and `2 ≤ |c2| ≤ |c1|`.
    pub fn new(sigma: &Permutation, c1: Cycle, c2: Cycle) -> Result<Self> {
        let n = sigma.degree();
        if c2.len() < 2 || c2.len() > c1.len() || c1.len() > n {
            return Err(Error::LengthOutOfRange {
                l1: c1.len(),
                l2: c2.len(),
                n,
            });
        }
        let product = c1.as_permutation(n)?.compose(&c2.as_permutation(n)?)?;
        if product != *sigma {
            return Err(Error::CertificateMismatch);
        }
        Ok(FactorizationCertificate {
            sigma: sigma.clone(),
            c1,
            c2,
        })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn c1(&self) -> &Cycle {
        &self.c1
    }

    pub fn c2(&self) -> &Cycle {
        &self.c2
    }

    pub fn degree(&self) -> usize {
        self.sigma.degree()
    }

    pub fn lengths(&self) -> (usize, usize) {
        (self.c1.len(), self.c2.len())
    }

    /// Re-evaluates the product.
    pub fn verify(&self) -> bool {
        let n = self.degree();
        match (self.c1.as_permutation(n), self.c2.as_permutation(n)) {
            (Ok(a), Ok(b)) => a.compose(&b).map(|p| p == self.sigma).unwrap_or(false),
            _ => false,
        }
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            sigma: self.sigma.format_one_line(),
            c1: self.c1.to_string(),
            c2: self.c2.to_string(),
            l1: self.c1.len(),
            l2: self.c2.len(),
            verified: self.verify(),
        }
    }
}

/// Serialized form of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub sigma: String,
    pub c1: String,
    pub c2: String,
    pub l1: usize,
    pub l2: usize,
    pub verified: bool,
}

fn check_range(sigma: &Permutation, l1: usize, l2: usize) -> Result<()> {
    let n = sigma.degree();
    if !(2 <= l2 && l2 <= l1 && l1 <= n) {
        return Err(Error::LengthOutOfRange { l1, l2, n });
    }
    Ok(())
}

/// The canonical clause: `σ` has exactly two nontrivial cycles, of lengths `{l1, l2}`.
fn canonical_pair(sigma: &Permutation, l1: usize, l2: usize) -> Option<(Cycle, Cycle)> {
    let dcd = sigma.decompose();
    match dcd.cycles() {
        [a, b] if a.len() == l1 && b.len() == l2 => Some((a.clone(), b.clone())),
        [a, b] if a.len() == l2 && b.len() == l1 => Some((b.clone(), a.clone())),
        _ => None,
    }
}

pub fn feasible(sigma: &Permutation, l1: usize, l2: usize) -> Result<FeasibilityWitness> {
    check_range(sigma, l1, l2)?;
    let (m, n_cycles) = sigma.support_stats();
    let verdict = if canonical_pair(sigma, l1, l2).is_some() {
        Verdict::FeasibleCanonical
    } else if l1 + l2 < m + n_cycles || !(l1 + l2 - m - n_cycles).is_multiple_of(2) {
        Verdict::Infeasible {
            reason: InfeasibleReason::Parity {
                sum: l1 + l2,
                base: m + n_cycles,
            },
        }
    } else if l1 - l2 > m - n_cycles {
        Verdict::Infeasible {
            reason: InfeasibleReason::Balance {
                difference: l1 - l2,
                bound: m - n_cycles,
            },
        }
    } else {
        Verdict::FeasibleParity {
            s: (l1 + l2 - m - n_cycles) / 2,
        }
    };
    Ok(FeasibilityWitness {
        verdict,
        l1,
        l2,
        m,
        n_cycles,
    })
}

pub fn factorize(sigma: &Permutation, l1: usize, l2: usize) -> Result<FactorizationCertificate> {
    let witness = feasible(sigma, l1, l2)?;
    match witness.verdict {
        Verdict::Infeasible { reason } => Err(Error::Infeasible(reason)),
        Verdict::FeasibleCanonical => {
            let (a, b) = canonical_pair(sigma, l1, l2).expect("checked");
            FactorizationCertificate::new(sigma, a, b)
        }
        Verdict::FeasibleParity { s } => {
            if witness.m == 0 {
                // σ = Id forces l1 == l2: a cycle times its inverse.
                let c: Vec<u32> = (0..l1 as u32).collect();
                let mut inv = c.clone();
                inv[1..].reverse();
                return FactorizationCertificate::new(sigma, Cycle::new(c)?, Cycle::new(inv)?);
            }
            let rebalance = ((witness.m - witness.n_cycles) - (l1 - l2)) / 2;
            let mut pair = CyclePair::base(sigma);
            pair.rebalance(rebalance);
            pair.grow(s, sigma)?;
            let (c1, c2) = pair.into_cycles();
            debug_assert_eq!((c1.len(), c2.len()), (l1, l2));
            FactorizationCertificate::new(sigma, c1, c2)
        }
    }
}

/// The `(m(σ), n(σ))` pair: a cycle through the full support and one through the last point
/// of every orbit.
pub fn base_factorization(sigma: &Permutation) -> Result<FactorizationCertificate> {
    let (_, n_cycles) = sigma.support_stats();
    if n_cycles < 2 {
        return Err(Error::Domain(format!(
            "base factorization needs at least two nontrivial cycles, found {n_cycles}"
        )));
    }
    let (c1, c2) = CyclePair::base(sigma).into_cycles();
    FactorizationCertificate::new(sigma, c1, c2)
}

const ABSENT: u32 = u32::MAX;

/// Two cycles held as doubly linked lists over the points, with `σ = C1 ∘ C2` maintained by
/// every move. `C2` may transiently be a single point (the identity).
struct CyclePair {
    succ1: Vec<u32>,
    pred1: Vec<u32>,
    succ2: Vec<u32>,
    pred2: Vec<u32>,
    /// A point in both cycles.
    anchor: u32,
    /// Points that moved from `C1` to `C2` during rebalancing.
    moved: Vec<u32>,
}

impl CyclePair {
    fn base(sigma: &Permutation) -> Self {
        let n = sigma.degree();
        let dcd = sigma.decompose();
        let cycles = dcd.cycles();
        assert!(!cycles.is_empty(), "base pair needs a nontrivial cycle");

        let big: Vec<u32> = cycles
            .iter()
            .flat_map(|c| c.points().iter().copied())
            .collect();
        // last(Z_k) -> last(Z_{k-1}), cyclically
        let small: Vec<u32> = cycles
            .iter()
            .rev()
            .map(|c| *c.points().last().expect("nonempty"))
            .collect();

        let mut pair = CyclePair {
            succ1: vec![ABSENT; n],
            pred1: vec![ABSENT; n],
            succ2: vec![ABSENT; n],
            pred2: vec![ABSENT; n],
            anchor: small[0],
            moved: Vec::new(),
        };
        link(&mut pair.succ1, &mut pair.pred1, &big);
        link(&mut pair.succ2, &mut pair.pred2, &small);
        pair
    }

    fn in1(&self, a: u32) -> bool {
        self.succ1[a as usize] != ABSENT
    }

    fn in2(&self, a: u32) -> bool {
        self.succ2[a as usize] != ABSENT
    }

    /// Applies `count` rebalancing moves, walking `C1` forward from the anchor.
    fn rebalance(&mut self, count: usize) {
        let mut z = self.anchor;
        for _ in 0..count {
            let mut y = self.succ1[z as usize];
            while self.in2(y) {
                z = y;
                y = self.succ1[z as usize];
            }
            // σ = C1 ∘ C2 = C1' ∘ (z y) ∘ C2, with (z y) ∘ C2 putting y just before z in C2.
            unlink(&mut self.succ1, &mut self.pred1, y);
            insert_before(&mut self.succ2, &mut self.pred2, z, y);
            self.moved.push(y);
        }
    }

    /// Applies `count` moves that lengthen both cycles by one: first share moves, then
    /// absorb moves using fixed points of `σ`.
    fn grow(&mut self, count: usize, sigma: &Permutation) -> Result<()> {
        let only1: Vec<u32> = {
            let mut v = Vec::new();
            let mut a = self.succ1[self.anchor as usize];
            while a != self.anchor {
                if !self.in2(a) {
                    v.push(a);
                }
                a = self.succ1[a as usize];
            }
            v
        };
        let shares = count.min(self.moved.len()).min(only1.len());
        let moved = std::mem::take(&mut self.moved);
        for (&a, &z) in moved.iter().zip(&only1).take(shares) {
            // C1 ∘ (z a) inserts a after z in C1; (z a) ∘ C2 inserts z before a in C2.
            insert_after(&mut self.succ1, &mut self.pred1, z, a);
            insert_before(&mut self.succ2, &mut self.pred2, a, z);
        }

        let absorbs = count - shares;
        let free: Vec<u32> = (0..sigma.degree() as u32)
            .filter(|&f| sigma.apply(f) == f && !self.in1(f) && !self.in2(f))
            .take(absorbs)
            .collect();
        if free.len() < absorbs {
            return Err(Error::Domain(format!(
                "not enough fixed points: need {absorbs}, have {}",
                free.len()
            )));
        }
        let y = self.anchor;
        for f in free {
            insert_after(&mut self.succ1, &mut self.pred1, y, f);
            insert_before(&mut self.succ2, &mut self.pred2, y, f);
        }
        Ok(())
    }

    fn into_cycles(self) -> (Cycle, Cycle) {
        let walk = |succ: &[u32]| {
            let mut v = vec![self.anchor];
            let mut a = succ[self.anchor as usize];
            while a != self.anchor {
                v.push(a);
                a = succ[a as usize];
            }
            Cycle::new(v)
                .expect("linked cycle visits distinct points")
                .canonical()
        };
        (walk(&self.succ1), walk(&self.succ2))
    }
}

fn link(succ: &mut [u32], pred: &mut [u32], points: &[u32]) {
    for (k, &a) in points.iter().enumerate() {
        let b = points[(k + 1) % points.len()];
        succ[a as usize] = b;
        pred[b as usize] = a;
    }
}

fn unlink(succ: &mut [u32], pred: &mut [u32], y: u32) {
    let (p, s) = (pred[y as usize], succ[y as usize]);
    succ[p as usize] = s;
    pred[s as usize] = p;
    succ[y as usize] = ABSENT;
    pred[y as usize] = ABSENT;
}

fn insert_after(succ: &mut [u32], pred: &mut [u32], at: u32, new: u32) {
    let s = succ[at as usize];
    succ[at as usize] = new;
    pred[new as usize] = at;
    succ[new as usize] = s;
    pred[s as usize] = new;
}

fn insert_before(succ: &mut [u32], pred: &mut [u32], at: u32, new: u32) {
    let p = pred[at as usize];
    insert_after(succ, pred, p, new);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn identity_cycle_times_inverse() {
        let id = Permutation::identity(6);
        let w = feasible(&id, 3, 3).unwrap();
        assert_eq!(w.verdict, Verdict::FeasibleParity { s: 3 });
        let cert = factorize(&id, 3, 3).unwrap();
        assert_eq!(cert.c1().to_string(), "(1 2 3)");
        assert_eq!(cert.c2().to_string(), "(1 3 2)");
        assert!(!feasible(&id, 3, 2).unwrap().is_feasible());
    }

    #[test]
    fn five_cycle_cases() {
        let s = cyc(5, "(1 2 3 4 5)");
        let w = feasible(&s, 3, 2).unwrap();
        assert!(matches!(
            w.verdict,
            Verdict::Infeasible {
                reason: InfeasibleReason::Parity { .. }
            }
        ));
        assert_eq!(
            feasible(&s, 3, 3).unwrap().verdict,
            Verdict::FeasibleParity { s: 0 }
        );
        let cert = factorize(&s, 3, 3).unwrap();
        assert!(cert.verify());
        assert_eq!(cert.lengths(), (3, 3));

        for (l1, l2) in [(4, 3), (5, 2)] {
            assert!(matches!(
                factorize(&s, l1, l2),
                Err(Error::Infeasible(InfeasibleReason::Parity { .. }))
            ));
        }
    }

    #[test]
    fn canonical_clause_returns_dcd() {
        let s = cyc(6, "(1 2 3)(4 5)");
        let w = feasible(&s, 3, 2).unwrap();
        assert_eq!(w.verdict, Verdict::FeasibleCanonical);
        let cert = factorize(&s, 3, 2).unwrap();
        assert_eq!(cert.c1().to_string(), "(1 2 3)");
        assert_eq!(cert.c2().to_string(), "(4 5)");
    }

    #[test]
    fn balance_violation_is_named() {
        // m = 4, n = 2: l1 − l2 = 4 > 2
        let s = cyc(6, "(1 2)(3 4)");
        let w = feasible(&s, 5, 1 + 2).unwrap();
        assert!(w.is_feasible(), "5+3 = 6+2, 2 <= 2");
        let err = factorize(&s, 6, 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Infeasible(InfeasibleReason::Balance { .. })
        ));
        assert!(err.to_string().starts_with("infeasible: balance"));
    }

    #[test]
    fn range_is_checked() {
        let s = cyc(5, "(1 2 3)");
        for (l1, l2) in [(3, 1), (2, 3), (6, 2)] {
            assert!(matches!(
                feasible(&s, l1, l2),
                Err(Error::LengthOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn base_factorization_examples() {
        for (n, text, lens) in [(4, "(1 2)(3 4)", (4, 2)), (6, "(1 2 3)(4 5)", (5, 2))] {
            let s = cyc(n, text);
            let cert = base_factorization(&s).unwrap();
            assert_eq!(cert.lengths(), lens);
            assert!(cert.verify());
        }
        let err = base_factorization(&cyc(5, "(1 2 3 4 5)")).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn certificate_rejects_wrong_product() {
        let s = cyc(4, "(1 2 3)");
        // (1 3) ∘ (2 3) = (1 3 2)
        let c1 = Cycle::from_one_based(&[1, 3]).unwrap();
        let c2 = Cycle::from_one_based(&[2, 3]).unwrap();
        assert_eq!(
            FactorizationCertificate::new(&s, c1, c2),
            Err(Error::CertificateMismatch)
        );
    }

    #[test]
    fn every_move_kind_is_exercised() {
        // rebalance + share: 6-cycle with no fixed points, (5, 4): s = 1, two rebalances
        let s = cyc(6, "(1 2 3 4 5 6)");
        let cert = factorize(&s, 5, 4).unwrap();
        assert_eq!(cert.lengths(), (5, 4));
        // absorb: transposition in S_5, (4, 3): s = 2, b = 0
        let t = cyc(5, "(1 2)");
        let cert = factorize(&t, 4, 3).unwrap();
        assert_eq!(cert.lengths(), (4, 3));
    }

    #[test]
    fn certificate_record_fields() {
        let s = cyc(5, "(1 2 3 4 5)");
        let rec = factorize(&s, 3, 3).unwrap().record();
        assert!(rec.verified);
        assert_eq!((rec.l1, rec.l2), (3, 3));
        assert_eq!(rec.sigma, "2 3 4 5 1");
    }
}

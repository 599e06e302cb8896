//! Seeded verification suites, shared by the `verify` command and the acceptance tests.
//!
//! Every suite draws sample `k` from its own ChaCha stream `(seed, k)`, so results do not
//! depend on scheduling; samples run on the rayon pool and are aggregated in index order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycle_stats::cyc_by_inclusion_exclusion;
use crate::error::{Error, Result};
use crate::factorization::{factorize, feasible};
use crate::oracle::{brute_force_two_cycle, class_transversal};
use crate::perm::Permutation;
use crate::profile::{bracket_index, SoficProfile};
use crate::rational::{self, ratio, Rational};
use crate::witness::{
    approximate_conjugator, build_power_class_witness, build_two_class_witness, PowerCase,
};

const MAX_DETAILS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hkl,
    Identities,
    Metric,
    Conjugacy,
    PowerWitness,
    TwoClass,
    Predicates,
    Conjugator,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Hkl,
        Suite::Identities,
        Suite::Metric,
        Suite::Conjugacy,
        Suite::PowerWitness,
        Suite::TwoClass,
        Suite::Predicates,
        Suite::Conjugator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hkl => "hkl",
            Suite::Identities => "identities",
            Suite::Metric => "metric",
            Suite::Conjugacy => "conjugacy",
            Suite::PowerWitness => "power-witness",
            Suite::TwoClass => "two-class",
            Suite::Predicates => "predicates",
            Suite::Conjugator => "conjugator",
        }
    }

    pub fn run(self, config: &SuiteConfig) -> Result<SuiteOutcome> {
        match self {
            Suite::Hkl => hkl(config),
            Suite::Identities => identities(config),
            Suite::Metric => metric(config),
            Suite::Conjugacy => conjugacy(config),
            Suite::PowerWitness => power_witness(config),
            Suite::TwoClass => two_class(config),
            Suite::Predicates => predicates(config),
            Suite::Conjugator => conjugator(config),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Range(format!("unknown suite '{s}' (known: {})", known.join(", ")))
            })
    }
}

/// Sizes default to the acceptance settings.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Largest degree for exhaustive class checks.
    pub max_n: usize,
    pub budget: u128,
    /// Random samples for the identity and metric suites.
    pub samples: usize,
    /// Degrees for the identity suite are drawn from `1..=max_degree`.
    pub max_degree: usize,
    pub metric_degree: usize,
    pub power_degree: usize,
    pub two_class_degree: usize,
    pub two_class_instances: usize,
    pub conjugator_degrees: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            max_n: 7,
            budget: crate::oracle::DEFAULT_BUDGET,
            samples: 10_000,
            max_degree: 10_000,
            metric_degree: 10_000,
            power_degree: 100_000,
            two_class_degree: 1_000,
            two_class_instances: 100,
            conjugator_degrees: vec![1_000, 10_000, 100_000],
        }
    }
}

impl SuiteConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checked: u64,
    pub failures: u64,
    /// The first few failure descriptions, in sample order.
    pub details: Vec<String>,
    /// Suite-specific summary lines, e.g. worst observed deviation.
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: Suite) -> Self {
        SuiteOutcome {
            suite: suite.name().to_string(),
            checked: 0,
            failures: 0,
            details: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.details.len() < MAX_DETAILS {
                self.details.push(detail());
            }
        }
    }

    fn absorb(&mut self, results: Vec<Vec<std::result::Result<(), String>>>) {
        for r in results.into_iter().flatten() {
            match r {
                Ok(()) => self.check(true, String::new),
                Err(msg) => self.check(false, || msg),
            }
        }
    }
}

pub fn run_all(suites: &[Suite], config: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    suites.iter().map(|s| s.run(config)).collect()
}

/// Random permutation of degree `n` drawn from a mix of shapes: uniform, sparse support,
/// and short cycles only.
pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut points: Vec<u32> = (0..n as u32).collect();
    points.shuffle(rng);
    let mut images: Vec<u32> = (0..n as u32).collect();
    match rng.gen_range(0..3) {
        0 => return Permutation::random(n, rng),
        1 => {
            let k = rng.gen_range(0..=n);
            let support = &points[..k];
            let mut targets = support.to_vec();
            targets.shuffle(rng);
            for (&a, &b) in support.iter().zip(&targets) {
                images[a as usize] = b;
            }
        }
        _ => {
            let mut start = 0;
            while start < n {
                let len = rng.gen_range(1..=12).min(n - start);
                let chunk = &points[start..start + len];
                for k in 0..len {
                    images[chunk[k] as usize] = chunk[(k + 1) % len];
                }
                start += len;
            }
        }
    }
    Permutation::from_images(images).expect("shuffled layout is a bijection")
}

fn hkl(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(Suite::Hkl);
    let mut triples = Vec::new();
    for n in 2..=config.max_n {
        for sigma in class_transversal(n)?.representatives() {
            for l1 in 2..=n {
                for l2 in 2..=l1 {
                    triples.push((sigma.clone(), l1, l2));
                }
            }
        }
    }
    let results: Vec<Result<Vec<std::result::Result<(), String>>>> = triples
        .par_iter()
        .map(|(sigma, l1, l2)| {
            let (l1, l2) = (*l1, *l2);
            let label = format!(
                "{} in S_{} with ({l1},{l2})",
                sigma.format_cycles(),
                sigma.degree()
            );
            let truth = brute_force_two_cycle(sigma, l1, l2, config.budget)?.is_some();
            let claimed = feasible(sigma, l1, l2)?.is_feasible();
            let mut checks = vec![if truth == claimed {
                Ok(())
            } else {
                Err(format!(
                    "{label}: predicate says {claimed}, enumeration says {truth}"
                ))
            }];
            checks.push(match (truth, factorize(sigma, l1, l2)) {
                (true, Ok(cert)) if cert.verify() && cert.lengths() == (l1, l2) => Ok(()),
                (true, Ok(_)) => Err(format!("{label}: certificate does not verify")),
                (true, Err(e)) => Err(format!("{label}: construction failed: {e}")),
                (false, Err(Error::Infeasible(_))) => Ok(()),
                (false, other) => Err(format!("{label}: expected infeasible, got {other:?}")),
            });
            Ok(checks)
        })
        .collect();
    out.absorb(results.into_iter().collect::<Result<_>>()?);
    out.notes.push(format!(
        "{} triples up to n = {}",
        triples.len(),
        config.max_n
    ));
    Ok(out)
}

fn identities(config: &SuiteConfig) -> Result<SuiteOutcome> {
    const MAX_POWER: u64 = 30;
    let mut out = SuiteOutcome::new(Suite::Identities);
    let results: Vec<Vec<std::result::Result<(), String>>> = (0..config.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = config.rng(k as u64);
            let n = rng.gen_range(1..=config.max_degree);
            let p = sample_permutation(n, &mut rng);
            let ty = p.cycle_type();
            let mut fix = HashMap::new();
            let mut checks = Vec::new();
            let mut q = Permutation::identity(n);
            for i in 1..=MAX_POWER {
                q = q.compose(&p).expect("same degree");
                let direct = q.fixed_point_count() as u64;
                fix.insert(i, direct);
                let by_divisors = ty.fixed_points_of_power(i);
                checks.push(if direct == by_divisors {
                    Ok(())
                } else {
                    Err(format!(
                        "sample {k}: cyc_1(p^{i}) = {direct}, divisor sum {by_divisors}"
                    ))
                });
            }
            for i in 1..=MAX_POWER {
                let recovered = cyc_by_inclusion_exclusion(&fix, i);
                let expected = ty.mass(i) as i64;
                checks.push(match recovered {
                    Ok(v) if v == expected => Ok(()),
                    other => Err(format!(
                        "sample {k}: cyc_{i} = {expected}, recovered {other:?}"
                    )),
                });
            }
            checks
        })
        .collect();
    out.absorb(results);
    Ok(out)
}

fn metric(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let n = config.metric_degree;
    let mut out = SuiteOutcome::new(Suite::Metric);
    let results: Vec<Vec<std::result::Result<(), String>>> = (0..config.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = config.rng(k as u64);
            let p = sample_permutation(n, &mut rng);
            let q = sample_permutation(n, &mut rng);
            let r = sample_permutation(n, &mut rng);
            let d = |a: &Permutation, b: &Permutation| a.hamming(b).expect("same degree");
            let c = |a: &Permutation, b: &Permutation| a.compose(b).expect("same degree");
            let dpq = d(&p, &q);
            let mut checks = Vec::new();
            let mut check = |ok: bool, what: &str| {
                checks.push(if ok {
                    Ok(())
                } else {
                    Err(format!("sample {k}: {what}"))
                })
            };
            check(d(&p, &p).is_zero(), "d(p,p) != 0");
            check(dpq == d(&q, &p), "asymmetric");
            check(dpq.is_zero() == (p == q), "d(p,q) = 0 iff p = q fails");
            check(d(&p, &r) <= dpq + d(&q, &r), "triangle inequality");
            check(d(&c(&r, &p), &c(&r, &q)) == dpq, "left invariance");
            check(d(&c(&p, &r), &c(&q, &r)) == dpq, "right invariance");
            check(
                c(&q.inverse(), &p).hamming_to_identity() == dpq,
                "d(p,q) != d(q^-1 p, 1)",
            );
            let moved = |a: &Permutation| a.hamming_to_identity();
            check(
                moved(&c(&p, &q)) <= moved(&p) + moved(&q),
                "1 - cyc_1(pq) exceeds (1 - cyc_1(p)) + (1 - cyc_1(q))",
            );
            checks
        })
        .collect();
    out.absorb(results);
    Ok(out)
}

fn conjugacy(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(Suite::Conjugacy);
    for n in 1..=config.max_n {
        let reps = class_transversal(n)?;
        let reps = reps.representatives();
        let mut rng = config.rng(n as u64);
        let threshold = n as u64 + 1;
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let b = b.conjugate(&Permutation::random(n, &mut rng))?;
                let by_type = a.cycle_type() == b.cycle_type();
                let by_conjugator = match a.conjugator(&b) {
                    Ok(r) => {
                        out.check(a.conjugate(&r)? == b, || {
                            format!("S_{n}: conjugator for classes {i},{j} does not conjugate")
                        });
                        true
                    }
                    Err(_) => false,
                };
                let pa = SoficProfile::of_permutation(a, threshold);
                let pb = SoficProfile::of_permutation(&b, threshold);
                let by_profile = pa == pb;
                out.check(
                    by_type == by_conjugator && by_conjugator == by_profile && by_type == (i == j),
                    || {
                        format!(
                            "S_{n}, classes {i},{j}: type {by_type}, conjugator {by_conjugator}, profile {by_profile}"
                        )
                    },
                );
            }
        }
    }
    Ok(out)
}

/// `(numerator, denominator)` of an exact fraction.
pub type Fraction = (i128, i128);

/// `(c_p, c_q, m)`; the first ten take the spread construction, the rest the cancelling one.
pub const POWER_GRID: [(Fraction, Fraction, u64); 20] = [
    ((3, 10), (1, 2), 2),
    ((1, 5), (1, 2), 3),
    ((1, 10), (7, 20), 4),
    ((1, 4), (9, 10), 4),
    ((2, 5), (4, 5), 2),
    ((1, 3), (1, 1), 3),
    ((1, 2), (1, 1), 2),
    ((3, 20), (2, 5), 3),
    ((1, 4), (3, 5), 3),
    ((7, 20), (13, 20), 2),
    ((1, 2), (1, 2), 2),
    ((3, 5), (1, 2), 2),
    ((1, 2), (3, 10), 3),
    ((9, 10), (1, 5), 2),
    ((4, 5), (1, 4), 4),
    ((1, 1), (1, 2), 3),
    ((2, 5), (2, 5), 3),
    ((7, 10), (1, 10), 5),
    ((1, 3), (1, 4), 2),
    ((3, 4), (2, 3), 4),
];

fn power_witness(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let n = config.power_degree;
    let nn = n as i128;
    let mut out = SuiteOutcome::new(Suite::PowerWitness);
    let results: Vec<Result<(String, PowerCase, Rational, Rational)>> = POWER_GRID
        .par_iter()
        .map(|&((pa, pb), (qa, qb), m)| {
            let (c_p, c_q) = (ratio(pa, pb), ratio(qa, qb));
            let rep = build_power_class_witness(n, c_p, c_q, m)?;
            let inf_dev = (rep.achieved.inf_mass() - c_q).abs();
            let part_dev = rep
                .parts
                .iter()
                .map(|p| (rational::from_count(p.support_stats().0, n) - c_p).abs())
                .max()
                .unwrap_or_else(rational::zero);
            Ok((format!("({c_p}, {c_q}, {m})"), rep.case, inf_dev, part_dev))
        })
        .collect();
    let mut worst = (rational::zero(), rational::zero());
    let mut cases = [0usize; 2];
    for (point, &(_, _, m)) in results.into_iter().zip(&POWER_GRID) {
        let (label, case, inf_dev, part_dev) = point?;
        cases[(case == PowerCase::Cancel) as usize] += 1;
        worst = (worst.0.max(inf_dev), worst.1.max(part_dev));
        out.check(inf_dev <= ratio(m as i128 + 2, nn), || {
            format!("{label}: long-cycle mass off by {inf_dev}")
        });
        out.check(part_dev <= ratio(2, nn), || {
            format!("{label}: part length off by {part_dev}")
        });
    }
    out.check(cases[0] > 0 && cases[1] > 0, || {
        format!("construction cases exercised: {cases:?}")
    });
    out.notes.push(format!(
        "worst long-cycle deviation {}, worst part deviation {}, cases spread/cancel = {}/{}",
        worst.0, worst.1, cases[0], cases[1]
    ));
    Ok(out)
}

/// A permutation of degree `n` with `(c1, c2)` strictly inside its two-class region.
pub fn two_class_instance<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> (Permutation, Rational, Rational) {
    let slack = rational::from_count(3, n);
    let nn = n as i128;
    loop {
        let p = sample_permutation(n, rng);
        let (support, cycles) = p.support_stats();
        let (pm, pn) = (
            rational::from_count(support, n),
            rational::from_count(cycles, n),
        );
        for _ in 0..200 {
            let a2 = rng.gen_range(1..=nn);
            let a1 = rng.gen_range(a2..=nn);
            let (c1, c2) = (ratio(a1, nn), ratio(a2, nn));
            if (c1 + c2) - (pm + pn) >= slack && (pm - pn) - (c1 - c2) >= slack {
                return (p, c1, c2);
            }
        }
    }
}

fn two_class(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let n = config.two_class_degree;
    let tol = ratio(5, n as i128);
    let mut out = SuiteOutcome::new(Suite::TwoClass);
    let results: Vec<Vec<std::result::Result<(), String>>> = (0..config.two_class_instances)
        .into_par_iter()
        .map(|k| {
            let mut rng = config.rng(k as u64);
            let (p, c1, c2) = two_class_instance(n, &mut rng);
            let label = format!("instance {k} (c1 = {c1}, c2 = {c2})");
            let cert = match build_two_class_witness(&p, c1, c2) {
                Ok(cert) => cert,
                Err(e) => return vec![Err(format!("{label}: {e}"))],
            };
            let (l1, l2) = cert.lengths();
            let product = cert
                .c1()
                .as_permutation(n)
                .and_then(|a| a.compose(&cert.c2().as_permutation(n)?));
            vec![
                if matches!(&product, Ok(prod) if *prod == p) {
                    Ok(())
                } else {
                    Err(format!("{label}: product differs from p"))
                },
                if (rational::from_count(l1, n) - c1).abs() <= tol
                    && (rational::from_count(l2, n) - c2).abs() <= tol
                {
                    Ok(())
                } else {
                    Err(format!("{label}: lengths ({l1}, {l2}) too far from target"))
                },
            ]
        })
        .collect();
    out.absorb(results);
    Ok(out)
}

/// Profiles with masses at lengths 1, 2, 3 and ∞ on a common denominator `d ≤ 20`.
fn profile_grid() -> Vec<SoficProfile> {
    let mut out = Vec::new();
    for d in 1..=20i128 {
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let inf = d - a - b - c;
                    let masses = [(1u64, a), (2, b), (3, c)]
                        .into_iter()
                        .map(|(len, k)| (len, ratio(k, d)))
                        .collect();
                    out.push(SoficProfile::new(masses, ratio(inf, d)).expect("sums to 1"));
                }
            }
        }
    }
    out.sort_by_cached_key(|p| p.to_string());
    out.dedup();
    out
}

fn predicates(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let _ = config;
    let mut out = SuiteOutcome::new(Suite::Predicates);
    let grid = profile_grid();
    let full = SoficProfile::one_inf(rational::one())?;
    for p in &grid {
        out.check(p.powers_stay_in_class() == p.in_cyc_1_inf(), || {
            format!("{p}: powers_stay_in_class disagrees with membership in cyc({{1,inf}})")
        });
        if p.in_cyc_1_inf() {
            for m in 2..=20u64 {
                let covers = p.covers_from(m)?;
                out.check(covers == SoficProfile::in_class_power(&full, p, m)?, || {
                    format!("{p}, m = {m}: covers_from disagrees with in_class_power")
                });
                if !p.inf_mass().is_zero() {
                    let b = bracket_index(p.inf_mass())?;
                    out.check(covers == (m >= b), || {
                        format!("{p}, m = {m}: covers_from disagrees with bracket {b}")
                    });
                }
            }
        }
    }
    for m in 1..=100i128 {
        let mut members = vec![ratio(1, m)];
        if m >= 2 {
            let upper = ratio(1, m - 1);
            members.push((ratio(1, m) + upper) / Rational::from_integer(2));
            members.push(upper - ratio(1, 1_000_000 * m * m));
            out.check(bracket_index(upper)? == m as u64 - 1, || {
                format!("1/{} lies in bracket {}", m - 1, m - 1)
            });
        }
        for c in members {
            out.check(bracket_index(c)? == m as u64, || {
                format!("{c} should lie in bracket {m}")
            });
        }
    }
    out.notes.push(format!("{} grid profiles", grid.len()));
    Ok(out)
}

/// Synthetic pairs sharing the target profile `{1: 1/4, 2: 1/4, 3: 1/4, inf: 1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugatorFamily {
    /// `q` turns `2⌊√n⌋` fixed points of `p` into transpositions.
    ShortCycles,
    /// `q` splits the long cycle of `p` in two halves.
    SplitLong,
    /// Both perturbations at once.
    Mixed,
}

impl ConjugatorFamily {
    pub const ALL: [ConjugatorFamily; 3] = [
        ConjugatorFamily::ShortCycles,
        ConjugatorFamily::SplitLong,
        ConjugatorFamily::Mixed,
    ];

    /// The pair at degree `n`, each side relabeled by an independent random permutation.
    pub fn pair<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> (Permutation, Permutation) {
        let transpositions = n / 8;
        let triples = n / 12;
        let long = n / 4;
        let perturb = crate::profile::ceil_sqrt(n as u64) as usize;
        let (short, split) = match self {
            ConjugatorFamily::ShortCycles => (perturb, false),
            ConjugatorFamily::SplitLong => (0, true),
            ConjugatorFamily::Mixed => (perturb, true),
        };
        let p = layout(n, &[(2, transpositions), (3, triples)], &[long]);
        let longs = if split {
            vec![long / 2, long - long / 2]
        } else {
            vec![long]
        };
        let q = layout(n, &[(2, transpositions + short), (3, triples)], &longs);
        let relabel = |x: Permutation, rng: &mut R| {
            x.conjugate(&Permutation::random(n, rng))
                .expect("same degree")
        };
        let p = relabel(p, rng);
        let q = relabel(q, rng);
        (p, q)
    }
}

/// Interval layout: `count` cycles of each short length, then the long cycles, then fixed
/// points.
fn layout(n: usize, short: &[(usize, usize)], long: &[usize]) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut start = 0usize;
    let lengths = short
        .iter()
        .flat_map(|&(len, count)| std::iter::repeat_n(len, count))
        .chain(long.iter().copied());
    for len in lengths {
        for k in 0..len {
            images[start + k] = (start + (k + 1) % len) as u32;
        }
        start += len;
    }
    assert!(start <= n, "layout exceeds degree");
    Permutation::from_images(images).expect("interval layout")
}

fn conjugator(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(Suite::Conjugator);
    for (f, family) in ConjugatorFamily::ALL.into_iter().enumerate() {
        let mut previous: Option<Rational> = None;
        for (k, &n) in config.conjugator_degrees.iter().enumerate() {
            let mut rng = config.rng((f * 64 + k) as u64);
            let (p, q) = family.pair(n, &mut rng);
            let a = approximate_conjugator(&p, &q)?;
            let bound = ratio(a.unmatched_mass as i128 + 3, n as i128);
            out.check(a.defect <= bound, || {
                format!("{family:?} at n = {n}: defect {} exceeds {bound}", a.defect)
            });
            if let Some(prev) = previous {
                out.check(a.defect <= prev, || {
                    format!(
                        "{family:?} at n = {n}: defect {} grew from {prev}",
                        a.defect
                    )
                });
            }
            out.notes.push(format!(
                "{family:?} n = {n}: defect {}, unmatched mass {}",
                a.defect, a.unmatched_mass
            ));
            previous = Some(a.defect);
        }
    }
    Ok(out)
}

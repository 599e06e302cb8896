use std::collections::HashMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sofic_perm::cycle_stats::cyc_by_inclusion_exclusion;
use sofic_perm::rational::ratio;
use sofic_perm::suites::sample_permutation;
use sofic_perm::{Permutation, SoficProfile};

fn perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn same_degree_pair(
    max_n: usize,
) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let one = || Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle();
            (one(), one(), one())
        })
        .prop_map(|(a, b, c)| {
            (
                Permutation::from_images(a).unwrap(),
                Permutation::from_images(b).unwrap(),
                Permutation::from_images(c).unwrap(),
            )
        })
}

fn moebius(mut k: u64) -> i64 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            k /= d;
            if k.is_multiple_of(d) {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if k > 1 {
        mu = -mu;
    }
    mu
}

fn inversions(p: &Permutation) -> usize {
    let img = p.images();
    let mut count = 0;
    for i in 0..img.len() {
        for j in i + 1..img.len() {
            if img[i] > img[j] {
                count += 1;
            }
        }
    }
    count
}

proptest! {
    #[test]
    fn group_axioms((p, q, r) in same_degree_pair(40)) {
        let n = p.degree();
        let id = Permutation::identity(n);
        prop_assert_eq!(p.compose(&q).unwrap().compose(&r).unwrap(), p.compose(&q.compose(&r).unwrap()).unwrap());
        prop_assert_eq!(p.compose(&id).unwrap(), p.clone());
        prop_assert_eq!(id.compose(&p).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.power(-3), p.inverse().power(3));
        prop_assert_eq!(p.power(5).compose(&p.power(-2)).unwrap(), p.power(3));
    }

    #[test]
    fn composition_applies_right_factor_first((p, q, _r) in same_degree_pair(30)) {
        let pq = p.compose(&q).unwrap();
        for a in 0..p.degree() as u32 {
            prop_assert_eq!(pq.apply(a), p.apply(q.apply(a)));
        }
    }

    #[test]
    fn hamming_is_bi_invariant((p, q, r) in same_degree_pair(40)) {
        let d = p.hamming(&q).unwrap();
        prop_assert_eq!(r.compose(&p).unwrap().hamming(&r.compose(&q).unwrap()).unwrap(), d);
        prop_assert_eq!(p.compose(&r).unwrap().hamming(&q.compose(&r).unwrap()).unwrap(), d);
        prop_assert_eq!(p.conjugate(&r).unwrap().hamming(&q.conjugate(&r).unwrap()).unwrap(), d);
    }

    #[test]
    fn sign_matches_inversion_parity(p in perm(30)) {
        let expected = if inversions(&p).is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(p.sign(), expected);
    }

    #[test]
    fn sign_is_a_homomorphism((p, q, _r) in same_degree_pair(30)) {
        prop_assert_eq!(p.compose(&q).unwrap().sign(), p.sign() * q.sign());
    }

    #[test]
    fn order_kills_the_permutation(p in perm(25)) {
        let order = p.order() as i64;
        prop_assert!(p.power(order).is_identity());
        for k in 1..order.min(200) {
            prop_assert!(!p.power(k).is_identity());
        }
    }

    #[test]
    fn conjugation_preserves_type_and_profile((p, _q, r) in same_degree_pair(40)) {
        let c = p.conjugate(&r).unwrap();
        prop_assert_eq!(c.cycle_type(), p.cycle_type());
        let t = p.degree() as u64 + 1;
        prop_assert_eq!(SoficProfile::of_permutation(&c, t), SoficProfile::of_permutation(&p, t));
        let back = p.conjugator(&c).unwrap();
        prop_assert_eq!(p.conjugate(&back).unwrap(), c);
    }

    #[test]
    fn recompose_round_trips(p in perm(40)) {
        prop_assert_eq!(p.decompose().recompose(), p.clone());
        prop_assert_eq!(Permutation::parse_cycles(&p.format_cycles(), p.degree()).unwrap(), p);
    }
}

#[test]
fn moebius_inversion_agrees_with_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let n = rand::Rng::gen_range(&mut rng, 1..=2000);
        let p = sample_permutation(n, &mut rng);
        let fix: HashMap<u64, u64> = (1..=60u64)
            .map(|i| (i, p.power(i as i64).fixed_point_count() as u64))
            .collect();
        let ty = p.cycle_type();
        for i in 1..=60u64 {
            // i·(number of i-cycles) = Σ_{d | i} μ(i/d) fix(p^d)
            let by_moebius: i64 = (1..=i)
                .filter(|d| i % d == 0)
                .map(|d| moebius(i / d) * fix[&d] as i64)
                .sum();
            assert_eq!(by_moebius, ty.mass(i) as i64, "i = {i}");
            assert_eq!(cyc_by_inclusion_exclusion(&fix, i).unwrap(), by_moebius);
        }
    }
}

#[test]
fn hamming_on_small_examples() {
    let p = Permutation::parse_one_line("2 1 3").unwrap();
    assert_eq!(p.hamming_to_identity(), ratio(2, 3));
    let q = Permutation::parse_one_line("1 3 2").unwrap();
    assert_eq!(p.hamming(&q).unwrap(), ratio(1, 1));
    assert!(p.hamming(&Permutation::identity(4)).is_err());
}

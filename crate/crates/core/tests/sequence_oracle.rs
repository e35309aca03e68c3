mod common;

use gfib::sequence::{
    binet_eval, classify, iterate_terms, nth_term, repeated_root_term, Case, SeqParams,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng, max_p: u64) -> (i64, i64, u64) {
    let p = common::random_prime(rng, 3, max_p);
    (
        rng.gen_range(-1_000_000..1_000_000),
        rng.gen_range(-1_000_000..1_000_000),
        p,
    )
}

#[test]
fn nth_term_matches_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..120 {
        let (a, b, p) = random_params(&mut rng, 50_000);
        let s = classify(a, b, p).unwrap();
        let raw = common::terms(a, b, p, 5002);
        let listed: Vec<u64> = iterate_terms(&s, 5001).map(|f| f.value()).collect();
        assert_eq!(listed, raw[1..5002], "({a},{b},{p})");
        for n in (0..=5000).step_by(37).chain([0, 1, 2, 5000]) {
            let t = nth_term(&s, n);
            assert_eq!(
                (t.f_n.value(), t.f_next.value()),
                (raw[n as usize], raw[n as usize + 1]),
                "({a},{b},{p}) n={n}"
            );
        }
    }
}

#[test]
fn consecutive_terms_satisfy_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let (a, b, p) = random_params(&mut rng, 1 << 30);
        let s = classify(a, b, p).unwrap();
        let t: Vec<_> = iterate_terms(&s, 10_000).collect();
        let (pa, qb) = (common::reduce(a, p) as u128, common::reduce(b, p) as u128);
        for w in t.windows(3) {
            let want =
                (pa * w[1].value() as u128 + (p as u128 - qb) * w[0].value() as u128) % p as u128;
            assert_eq!(w[2].value() as u128, want);
        }
    }
}

#[test]
fn binet_matches_in_split_and_irreducible_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut split, mut irreducible) = (0, 0);
    while split < 60 || irreducible < 60 {
        let (a, b, p) = random_params(&mut rng, 20_000);
        let s = classify(a, b, p).unwrap();
        match s.case {
            Case::SplitRoots => split += 1,
            Case::Irreducible => irreducible += 1,
            _ => {
                assert!(binet_eval(&s, 3).is_err());
                continue;
            }
        }
        let raw = common::terms(a, b, p, 400);
        for n in 0..400 {
            assert_eq!(
                binet_eval(&s, n as u64).unwrap().value(),
                raw[n],
                "({a},{b},{p}) n={n}"
            );
        }
    }
}

#[test]
fn repeated_root_formula_matches() {
    for p in common::primes(3, 400) {
        for a in 1..p.min(40) {
            // Δ = a² − 4Q ≡ 0 with Q = a²/4
            let q = (a * a % p) * p.div_ceil(2) % p * p.div_ceil(2) % p;
            let s = classify(a as i64, q as i64, p).unwrap();
            assert_eq!(s.case, Case::RepeatedRoot);
            let raw = common::terms(a as i64, q as i64, p, 5001);
            for n in 1..=5000usize {
                assert_eq!(repeated_root_term(&s, n as u64).unwrap().value(), raw[n]);
            }
        }
    }
}

#[test]
fn degenerate_q0_is_geometric() {
    for p in common::primes(3, 200) {
        for a in 0..p {
            let s = classify(a as i64, p as i64 * 3, p).unwrap();
            assert_eq!(s.case, Case::DegenerateQ0);
            let raw = common::terms(a as i64, 0, p, 60);
            for n in 0..60 {
                assert_eq!(nth_term(&s, n as u64).f_n.value(), raw[n]);
            }
        }
    }
}

fn params_strategy() -> impl Strategy<Value = SeqParams> {
    (0usize..500, any::<i64>(), any::<i64>()).prop_map(|(i, a, b)| {
        let primes = common::primes(3, 4000);
        SeqParams::reduced(a, b, primes[i % primes.len()])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // F_n = F_a F_{n+1−a} − Q F_{a−1} F_{n−a}
    #[test]
    fn addition_identity(s in params_strategy()) {
        let mut f = vec![s.zero()];
        f.extend(iterate_terms(&s, 201));
        for n in 1..=200usize {
            prop_assert_eq!(nth_term(&s, n as u64).f_n, f[n]);
            for a in 1..=n {
                let rhs = f[a] * f[n + 1 - a] - s.q_hat * f[a - 1] * f[n - a];
                prop_assert_eq!(f[n], rhs, "n={} a={}", n, a);
            }
        }
    }

    #[test]
    fn classification_follows_discriminant(s in params_strategy()) {
        let p = s.modulus;
        let q = common::reduce(s.q_coef, p);
        let d = (s.p_coef as i128 * s.p_coef as i128 - 4 * s.q_coef as i128).rem_euclid(p as i128);
        let want = if q == 0 {
            Case::DegenerateQ0
        } else {
            match common::legendre(d as i64, p) {
                1 => Case::SplitRoots,
                0 => Case::RepeatedRoot,
                _ => Case::Irreducible,
            }
        };
        prop_assert_eq!(s.case, want);
        prop_assert_eq!(s.delta.value() as i128, d);
    }
}

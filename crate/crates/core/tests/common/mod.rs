//! Brute-force oracles over plain integers. Nothing here touches the
//! library's field types.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn reduce(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `F_0, …, F_{count-1}` by the recurrence.
pub fn terms(p_coef: i64, q_coef: i64, p: u64, count: usize) -> Vec<u64> {
    let (a, b) = (reduce(p_coef, p), reduce(q_coef, p));
    let mut out = Vec::with_capacity(count);
    let (mut x, mut y) = (0u64, 1u64);
    for _ in 0..count {
        out.push(x);
        let next = (a * y + (p - b) * x) % p;
        (x, y) = (y, next);
    }
    out
}

/// Least `n > 0` with `(F_n, F_{n+1}) = (0, 1)`, or `None` if the state
/// never returns (possible only when `p | Q`).
pub fn pisano(p_coef: i64, q_coef: i64, p: u64) -> Option<u64> {
    let (a, b) = (reduce(p_coef, p), reduce(q_coef, p));
    let (mut x, mut y) = (0u64, 1u64);
    for n in 1..=p * p {
        (x, y) = (y, (a * y + (p - b) * x) % p);
        if (x, y) == (0, 1) {
            return Some(n);
        }
    }
    None
}

pub fn rank_of_apparition(p_coef: i64, q_coef: i64, p: u64) -> Option<u64> {
    let (a, b) = (reduce(p_coef, p), reduce(q_coef, p));
    let (mut x, mut y) = (0u64, 1u64);
    for n in 1..=p * p {
        (x, y) = (y, (a * y + (p - b) * x) % p);
        if x == 0 {
            return Some(n);
        }
    }
    None
}

/// Walks states until one repeats, collecting every residue seen.
pub fn complete(p_coef: i64, q_coef: i64, p: u64) -> bool {
    let (a, b) = (reduce(p_coef, p), reduce(q_coef, p));
    let mut seen = vec![false; p as usize];
    let mut states = vec![false; (p * p) as usize];
    let (mut x, mut y) = (0u64, 1u64);
    while !std::mem::replace(&mut states[(x * p + y) as usize], true) {
        seen[x as usize] = true;
        (x, y) = (y, (a * y + (p - b) * x) % p);
    }
    seen.iter().all(|&s| s)
}

pub fn is_square_mod(a: u64, p: u64) -> bool {
    (0..p).any(|x| x * x % p == a % p)
}

/// Legendre symbol by enumerating squares.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = reduce(a, p);
    if a == 0 {
        0
    } else if is_square_mod(a, p) {
        1
    } else {
        -1
    }
}

pub fn order(x: u64, p: u64) -> u64 {
    let x = x % p;
    assert_ne!(x, 0);
    let (mut acc, mut t) = (x, 1);
    while acc != 1 {
        acc = acc * x % p;
        t += 1;
    }
    t
}

pub fn is_primitive_root(x: u64, p: u64) -> bool {
    !x.is_multiple_of(p) && order(x, p) == p - 1
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// A random odd prime in `[lo, hi]`.
pub fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    loop {
        let n = rng.gen_range(lo..=hi);
        if n % 2 == 1 && is_prime(n) {
            return n;
        }
    }
}

//! Primality, factorization, and small prime enumeration for `u64`.

use serde::Serialize;

const TRIAL_BOUND: u64 = 1 << 10;

// The first twelve primes are a deterministic Miller-Rabin witness set for
// every n < 3.3e24, which covers u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic primality test for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a positive integer.
///
/// `factors` holds `(prime, exponent)` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    /// Euler's totient of `n`.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .fold(self.n, |acc, &(q, _)| acc / q * (q - 1))
    }

    /// All positive divisors of `n`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= q;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Full factorization by trial division below a small bound, then
/// Pollard rho (Brent) on what remains. Every reported prime passes
/// [`is_prime`].
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize(0) is undefined");
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;

    let push =
        |q: u64, factors: &mut Vec<(u64, u32)>| match factors.iter_mut().find(|(r, _)| *r == q) {
            Some((_, e)) => *e += 1,
            None => factors.push((q, 1)),
        };

    let mut q = 2;
    while q < TRIAL_BOUND && q * q <= rest {
        while rest.is_multiple_of(q) {
            push(q, &mut factors);
            rest /= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }

    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            push(m, &mut factors);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }

    factors.sort_unstable();
    Factorization { n, factors }
}

/// A nontrivial factor of the composite odd `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    if let Some(r) = exact_square_root(n) {
        return r;
    }
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut g = 1u64;
        let mut q = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn exact_square_root(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Floor square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Primes in `[lo, hi]` by a segmented sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = isqrt(hi);
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    let mut out = Vec::new();
    const SEGMENT: u64 = 1 << 16;
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        let mut mark = vec![true; (end - start + 1) as usize];
        for &q in &base {
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut j = first;
            while j <= end {
                mark[(j - start) as usize] = false;
                j += q;
            }
        }
        out.extend(
            mark.iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| start + i as u64),
        );
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

//! Arithmetic in `Z_p` and in the quadratic extension `K_p = Z_p(√Δ)`,
//! plus the number-theoretic helpers every other module leans on.
//!
//! Moduli are odd primes below `2^31`, so a product of two residues always
//! fits in a `u64`.

mod fp;
mod fp2;
mod prime;

pub use fp::FpElem;
pub use fp2::Fp2Elem;
pub use prime::{factorize, is_prime, isqrt, primes_in_range, Factorization};

use crate::{Error, Result};

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// Accepts `p` only if it is an odd prime below `2^31`.
pub fn check_modulus(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || p >= MAX_MODULUS || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    check_modulus(p)?;
    Ok(legendre_fp(FpElem::from_i64(a, p)))
}

/// Legendre symbol of a residue whose modulus is already known to be an odd prime.
pub fn legendre_fp(x: FpElem) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let e = x.pow((x.modulus() - 1) / 2);
    if e.is_one() {
        1
    } else {
        debug_assert_eq!(e.value(), x.modulus() - 1);
        -1
    }
}

/// Smallest quadratic nonresidue modulo `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&z| legendre_fp(FpElem::new(z, p)) == -1)
        .expect("every odd prime has a nonresidue")
}

/// Square root by Tonelli–Shanks, returning the root in `[0, p/2]`.
///
/// `None` exactly when `a` is a nonresidue.
pub fn sqrt_mod(a: FpElem) -> Option<FpElem> {
    let p = a.modulus();
    match legendre_fp(a) {
        0 => return Some(FpElem::zero(p)),
        -1 => return None,
        _ => {}
    }

    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = FpElem::new(least_nonresidue(p), p);

    let mut m = s;
    let mut c = z.pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow(q.div_ceil(2));

    while !t.is_one() {
        // least i with t^(2^i) = 1
        let mut i = 0;
        let mut t2 = t;
        while !t2.is_one() {
            t2 *= t2;
            i += 1;
        }
        debug_assert!(i < m);
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b *= b;
        }
        m = i;
        c = b * b;
        t *= c;
        r *= b;
    }
    debug_assert_eq!(r * r, a);
    Some(r.canonical_sign())
}

/// Elements of a finite multiplicative group with fast powering.
pub trait GroupElement: Copy + PartialEq {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn pow(&self, exp: u64) -> Self;
}

impl GroupElement for FpElem {
    fn is_zero(&self) -> bool {
        FpElem::is_zero(*self)
    }
    fn is_one(&self) -> bool {
        FpElem::is_one(*self)
    }
    fn pow(&self, exp: u64) -> Self {
        FpElem::pow(*self, exp)
    }
}

impl GroupElement for Fp2Elem {
    fn is_zero(&self) -> bool {
        Fp2Elem::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Fp2Elem::is_one(self)
    }
    fn pow(&self, exp: u64) -> Self {
        Fp2Elem::pow(self, exp)
    }
}

/// Multiplicative order of `x` in a group whose exponent divides
/// `group_order.n()`.
///
/// Starts from the full group order and strips each prime factor while the
/// power stays at one.
pub fn order_mod<G: GroupElement>(x: G, group_order: &Factorization) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroHasNoOrder);
    }
    let n = group_order.n();
    if !x.pow(n).is_one() {
        return Err(Error::WrongGroupOrder { group_order: n });
    }
    let mut t = n;
    for &(q, e) in group_order.factors() {
        for _ in 0..e {
            if x.pow(t / q).is_one() {
                t /= q;
            } else {
                break;
            }
        }
    }
    Ok(t)
}

/// `ord_p(x)` for a nonzero residue, factoring `p − 1` on the fly.
pub fn order_fp(x: FpElem) -> Result<u64> {
    order_mod(x, &factorize(x.modulus() - 1))
}

/// Whether `x` generates `(Z/pZ)*`.
pub fn is_primitive_root(x: FpElem) -> bool {
    is_primitive_root_with(x, &factorize(x.modulus() - 1))
}

/// As [`is_primitive_root`] with a precomputed factorization of `p − 1`.
pub fn is_primitive_root_with(x: FpElem, p_minus_1: &Factorization) -> bool {
    debug_assert_eq!(p_minus_1.n(), x.modulus() - 1);
    if x.is_zero() {
        return false;
    }
    let n = p_minus_1.n();
    p_minus_1.primes().all(|q| !x.pow(n / q).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: u64, p: u64) -> FpElem {
        FpElem::new(v, p)
    }

    fn squares(p: u64) -> Vec<u64> {
        let mut s: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 7), Ok(0));
        assert_eq!(legendre(3, 7), Ok(-1));
        assert_eq!(legendre(-15, 7), Ok(-1));
        assert_eq!(squares(7), vec![1, 2, 4]);
    }

    #[test]
    fn legendre_rejects_bad_moduli() {
        assert_eq!(legendre(1, 2), Err(Error::InvalidModulus(2)));
        assert_eq!(legendre(1, 1), Err(Error::InvalidModulus(1)));
        assert_eq!(legendre(1, 9), Err(Error::InvalidModulus(9)));
        assert_eq!(legendre(1, 1 << 31), Err(Error::InvalidModulus(1 << 31)));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in primes_in_range(3, 300) {
            let sq = squares(p);
            for a in 0..p {
                let want = if a == 0 {
                    0
                } else if sq.binary_search(&a).is_ok() {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a as i64, p).unwrap(), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(fp(0, 7)), Some(fp(0, 7)));
        assert_eq!(sqrt_mod(fp(2, 7)), Some(fp(3, 7)));
        assert_eq!(sqrt_mod(fp(3, 7)), None);
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        // includes p ≡ 1 (mod 8) so the Tonelli–Shanks loop runs several rounds
        for p in [3, 5, 13, 17, 41, 97, 113, 193, 257, 641, 65537] {
            for a in 0..p.min(3000) {
                let x = fp(a, p);
                match sqrt_mod(x) {
                    Some(r) => {
                        assert_eq!(r * r, x);
                        assert!(r.value() <= p / 2);
                    }
                    None => assert_eq!(legendre_fp(x), -1),
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_mod(fp(1, 13), &factorize(12)), Ok(1));
        assert_eq!(order_mod(fp(4, 13), &factorize(12)), Ok(6));
        assert_eq!(order_mod(fp(5, 19), &factorize(18)), Ok(9));
        assert_eq!(
            order_mod(fp(0, 13), &factorize(12)),
            Err(Error::ZeroHasNoOrder)
        );
        assert_eq!(
            order_mod(fp(2, 13), &factorize(6)),
            Err(Error::WrongGroupOrder { group_order: 6 })
        );
    }

    #[test]
    fn order_in_extension() {
        // α = (1+√6)/2 in K_7: α^{p+1} = Q = 4, ord(4) = 3, so α^24 = 1 and π(7) = 24
        let delta = fp(6, 7);
        let half = fp(2, 7).inv().unwrap();
        let alpha = Fp2Elem::new(half, half, delta);
        assert_eq!(alpha.pow(8), Fp2Elem::from_base(fp(4, 7), delta));
        assert_eq!(alpha.pow(48), Fp2Elem::one(delta));
        assert_eq!(alpha.pow(0), Fp2Elem::one(delta));
        let ord = order_mod(alpha, &factorize(48)).unwrap();
        assert_eq!(ord, 24);
    }

    #[test]
    fn primitive_roots() {
        assert!(!is_primitive_root(fp(1, 7)));
        assert!(is_primitive_root(fp(2, 5)));
        assert!(!is_primitive_root(fp(4, 13)));
        assert!(!is_primitive_root(fp(0, 13)));
    }

    fn brute_order(x: u64, p: u64) -> u64 {
        let mut acc = x % p;
        let mut t = 1;
        while acc != 1 {
            acc = acc * x % p;
            t += 1;
        }
        t
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn primitive_root_count_is_phi() {
        for p in primes_in_range(3, 200) {
            let count = (1..p).filter(|&x| is_primitive_root(fp(x, p))).count() as u64;
            let phi = (1..p).filter(|&k| gcd(k, p - 1) == 1).count() as u64;
            assert_eq!(count, phi, "p = {p}");
        }
    }

    #[test]
    fn order_matches_brute_force() {
        for p in primes_in_range(3, 400) {
            let f = factorize(p - 1);
            for x in 1..p {
                assert_eq!(order_mod(fp(x, p), &f).unwrap(), brute_order(x, p));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn extension_group_exponent(
            idx in 0usize..200, a in 0u64..1 << 31, b in 0u64..1 << 31,
        ) {
            let primes = primes_in_range(3, 5000);
            let p = primes[idx % primes.len()];
            let delta = fp(least_nonresidue(p), p);
            let x = Fp2Elem::new(fp(a, p), fp(b, p), delta);
            proptest::prop_assume!(!x.is_zero());
            proptest::prop_assert!(x.pow(p * p - 1).is_one());
            let ord = order_mod(x, &factorize(p * p - 1)).unwrap();
            proptest::prop_assert!(x.pow(ord).is_one());
            for q in factorize(ord).primes() {
                proptest::prop_assert!(!x.pow(ord / q).is_one());
            }
        }

        #[test]
        fn euler_criterion(idx in 0usize..300, a in proptest::num::i64::ANY) {
            let primes = primes_in_range(3, 100_000);
            let p = primes[idx * 31 % primes.len()];
            let x = FpElem::from_i64(a, p);
            let e = x.pow((p - 1) / 2).value();
            let l = legendre(a, p).unwrap();
            let want = match l { 0 => 0, 1 => 1, _ => p - 1 };
            proptest::prop_assert_eq!(e, want);
            let r = sqrt_mod(x);
            proptest::prop_assert_eq!(r.is_none(), l == -1);
            if let Some(r) = r {
                proptest::prop_assert_eq!(r * r, x);
            }
        }
    }
}

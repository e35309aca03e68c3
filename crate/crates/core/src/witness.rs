//! Fixed integer parameters `(P, Q)`, varying prime: which primes make
//! `[P,Q]` complete?
//!
//! [`scan_primes`] walks a prime range. For square `Q = m²` the primes of
//! interest sit in an arithmetic progression where `Δ` is forced to be a
//! nonresidue; [`build_progression`] constructs it and [`scan_progression`]
//! searches it for primes with `ord_p(−m) = p − 1`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    self, factorize, is_prime, is_primitive_root, isqrt, least_nonresidue, legendre_fp, order_fp,
    primes_in_range, FpElem, MAX_MODULUS,
};
use crate::completeness::{is_complete_fast_with, is_complete_scan, DecidedBy};
use crate::sequence::SeqParams;
use crate::{Error, Result};

/// Default number of progression terms examined before giving up.
pub const DEFAULT_PRIME_BUDGET: u64 = 1_000_000;

/// Where `(P, Q)` falls in the finite/infinite classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DichotomyClass {
    #[serde(rename = "P_zero")]
    PZero,
    #[serde(rename = "Q_zero")]
    QZero,
    #[serde(rename = "delta_zero")]
    DeltaZero,
    #[serde(rename = "delta_square")]
    DeltaSquare,
    #[serde(rename = "Q_pm1")]
    QPlusMinusOne,
    #[serde(rename = "Q_square_m")]
    QSquare,
    #[serde(rename = "Q_nonsquare")]
    QNonsquare,
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    if n > u64::MAX as i128 {
        let r = (n as f64).sqrt() as i128;
        return (r - 2..=r + 2).any(|s| s >= 0 && s * s == n);
    }
    let r = isqrt(n as u64) as i128;
    r * r == n
}

pub fn discriminant(p_coef: i64, q_coef: i64) -> i128 {
    let p = p_coef as i128;
    p * p - 4 * q_coef as i128
}

pub fn dichotomy_class(p_coef: i64, q_coef: i64) -> DichotomyClass {
    let delta = discriminant(p_coef, q_coef);
    if p_coef == 0 {
        DichotomyClass::PZero
    } else if q_coef == 0 {
        DichotomyClass::QZero
    } else if delta == 0 {
        DichotomyClass::DeltaZero
    } else if is_square_i128(delta) {
        DichotomyClass::DeltaSquare
    } else if q_coef.abs() == 1 {
        DichotomyClass::QPlusMinusOne
    } else if is_square_i128(q_coef as i128) {
        DichotomyClass::QSquare
    } else {
        DichotomyClass::QNonsquare
    }
}

/// Whether `[P,Q]` is expected to be complete modulo infinitely many
/// primes. Conditional on GRH for the last two alternatives.
pub fn predicts_infinitely_many(p_coef: i64, q_coef: i64) -> bool {
    let delta = discriminant(p_coef, q_coef);
    (p_coef != 0 && delta == 0)
        || (q_coef == 0 && p_coef.abs() != 1 && !is_square_i128(p_coef as i128))
        || (q_coef.abs() != 1 && !is_square_i128(delta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessScan {
    pub p_coef: i64,
    pub q_coef: i64,
    pub lo: u64,
    pub hi: u64,
    pub primes_scanned: u64,
    pub hits: Vec<u64>,
    pub decided_by_tally: BTreeMap<DecidedBy, u64>,
    pub dichotomy_class: DichotomyClass,
    pub predicts_infinitely_many: bool,
}

/// Decides completeness for every prime in `[lo, hi]`.
pub fn scan_primes(p_coef: i64, q_coef: i64, lo: u64, hi: u64, jobs: usize) -> Result<WitnessScan> {
    if lo < 5 || hi < lo {
        return Err(Error::Precondition(format!(
            "prime range needs 5 ≤ lo ≤ hi, got [{lo}, {hi}]"
        )));
    }
    if hi >= MAX_MODULUS {
        return Err(Error::Precondition(format!(
            "hi must be below 2^31, got {hi}"
        )));
    }
    let primes = primes_in_range(lo, hi);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let verdicts: Vec<(u64, bool, DecidedBy)> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let params = SeqParams::reduced(p_coef, q_coef, p);
                let v = is_complete_fast_with(&params, &factorize(p - 1));
                (p, v.complete, v.decided_by)
            })
            .collect()
    });

    let mut tally = BTreeMap::new();
    let mut hits = Vec::new();
    for (p, complete, by) in verdicts {
        *tally.entry(by).or_insert(0) += 1;
        if complete {
            hits.push(p);
        }
    }
    Ok(WitnessScan {
        p_coef,
        q_coef,
        lo,
        hi,
        primes_scanned: primes.len() as u64,
        hits,
        decided_by_tally: tally,
        dichotomy_class: dichotomy_class(p_coef, q_coef),
        predicts_infinitely_many: predicts_infinitely_many(p_coef, q_coef),
    })
}

/// Hits that the scan oracle does not confirm. Empty when all is well.
pub fn reverify_hits(scan: &WitnessScan) -> Vec<u64> {
    scan.hits
        .iter()
        .copied()
        .filter(|&p| !is_complete_scan(&SeqParams::reduced(scan.p_coef, scan.q_coef, p)).complete)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProgressionKind {
    /// `Δ = ±X²·p₁⋯p_l` with a nonempty kernel; progression `T mod 8p₁⋯p_l`.
    SquarefreeKernel,
    /// `Δ = −X²`; progression `3 mod 4`.
    NegativeSquare,
}

/// The progression of primes on which `Δ` is a nonresidue, for `Q = m²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionSpec {
    pub kind: ProgressionKind,
    pub p_coef: i64,
    pub q_coef: i64,
    pub m: u64,
    /// `Δ = P² − 4Q`, as a decimal string since it may exceed 64 bits.
    #[serde(serialize_with = "serialize_i128")]
    pub delta: i128,
    pub sign: i8,
    /// Square part: `|Δ| = X² · Π kernel`.
    pub x: u64,
    /// Primes with odd exponent in `|Δ|`, ascending.
    pub kernel: Vec<u64>,
    /// Chosen nonresidue mod `p₁` (or 5 when `p₁ = 2`).
    pub t1: Option<u64>,
    /// `T`.
    pub residue: u64,
    /// `8·p₁⋯p_l`, or 4 for the negative-square progression.
    pub modulus: u64,
}

fn serialize_i128<S: serde::Serializer>(v: &i128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl ProgressionSpec {
    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue
    }

    /// The congruences `(residue, modulus)` that `T` was solved from.
    pub fn congruences(&self) -> Vec<(u64, u64)> {
        match self.kind {
            ProgressionKind::NegativeSquare => vec![(3, 4)],
            ProgressionKind::SquarefreeKernel => {
                let p1 = self.kernel[0];
                let mut c = vec![
                    (5, 8),
                    (self.t1.expect("kernel progression has t1") % p1, p1),
                ];
                c.extend(self.kernel[1..].iter().map(|&q| (1, q)));
                c
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solves `x ≡ r_i (mod m_i)` for possibly non-coprime moduli. Returns
/// `(x, lcm)` with `0 ≤ x < lcm`, or `None` if inconsistent.
fn crt(congruences: &[(u64, u64)]) -> Option<(u64, u64)> {
    let (mut x, mut m) = (0i128, 1i128);
    for &(r, n) in congruences {
        let (r, n) = (r as i128, n as i128);
        let (g, inv, _) = ext_gcd(m % n, n);
        if (r - x).rem_euclid(g) != 0 {
            return None;
        }
        let step = n / g;
        let k = ((r - x) / g % step * inv.rem_euclid(step)).rem_euclid(step);
        x += m * k;
        m *= step;
        x = x.rem_euclid(m);
    }
    Some((x as u64, m as u64))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Builds the progression for `Q = m²`, `m > 1`.
pub fn build_progression(p_coef: i64, q_coef: i64) -> Result<ProgressionSpec> {
    if q_coef <= 1 || !is_square_i128(q_coef as i128) {
        return Err(Error::Precondition(format!(
            "Q = {q_coef} is not the square of an integer m > 1"
        )));
    }
    let m = isqrt(q_coef as u64);
    let delta = discriminant(p_coef, q_coef);
    if delta == 0 || is_square_i128(delta) {
        return Err(Error::Precondition(format!(
            "Δ = {delta} is a perfect square; [P,Q] is never complete for large p"
        )));
    }
    let abs = u64::try_from(delta.unsigned_abs())
        .map_err(|_| Error::Precondition(format!("|Δ| = {} exceeds 64 bits", delta.abs())))?;
    let sign: i8 = if delta < 0 { -1 } else { 1 };

    let f = factorize(abs);
    let x: u64 = f.factors().iter().map(|&(q, e)| q.pow(e / 2)).product();
    let kernel: Vec<u64> = f
        .factors()
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(q, _)| q)
        .collect();

    let base = ProgressionSpec {
        kind: ProgressionKind::NegativeSquare,
        p_coef,
        q_coef,
        m,
        delta,
        sign,
        x,
        kernel: kernel.clone(),
        t1: None,
        residue: 3,
        modulus: 4,
    };
    if kernel.is_empty() {
        // Δ = −X²; a positive square was rejected above
        debug_assert_eq!(sign, -1);
        return Ok(base);
    }

    let p1 = kernel[0];
    let t1 = if p1 == 2 { 5 } else { least_nonresidue(p1) };
    let modulus = kernel
        .iter()
        .try_fold(8u64, |acc, &q| acc.checked_mul(q))
        .ok_or_else(|| Error::Precondition("progression modulus exceeds 64 bits".into()))?;

    let mut spec = ProgressionSpec {
        kind: ProgressionKind::SquarefreeKernel,
        t1: Some(t1),
        modulus,
        residue: 0,
        ..base
    };
    let congruences = spec.congruences();
    let (t, _lcm) = crt(&congruences)
        .ok_or_else(|| Error::Invariant(format!("CRT system {congruences:?} is inconsistent")))?;
    spec.residue = t % modulus;
    if !congruences.iter().all(|&(r, n)| spec.residue % n == r % n)
        || gcd(spec.residue, modulus) != 1
    {
        return Err(Error::Invariant(format!(
            "T = {} does not solve {congruences:?} with gcd(T, {modulus}) = 1",
            spec.residue
        )));
    }
    Ok(spec)
}

/// A prime that passed the order filter but failed a follow-up check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionAnomaly {
    pub p: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionScan {
    pub primes: Vec<u64>,
    pub candidates_examined: u64,
    /// Fewer than the requested number of primes were found within budget.
    pub exhausted: bool,
    pub anomalies: Vec<ProgressionAnomaly>,
}

/// Walks the progression and keeps the first `count` primes `p > |P|` with
/// `ord_p(−m) = p − 1`, each confirmed to have `Δ` nonresidue,
/// `ord_p(Q) = (p−1)/2`, and a complete sequence.
pub fn scan_progression(spec: &ProgressionSpec, count: usize, budget: u64) -> ProgressionScan {
    let mut primes = Vec::new();
    let mut anomalies = Vec::new();
    let mut examined = 0;
    let floor = spec.p_coef.unsigned_abs().max(4);
    for k in 0..budget {
        if primes.len() >= count {
            break;
        }
        let Some(p) = k
            .checked_mul(spec.modulus)
            .and_then(|x| x.checked_add(spec.residue))
        else {
            break;
        };
        if p >= MAX_MODULUS {
            break;
        }
        examined += 1;
        if p <= floor || !is_prime(p) || spec.m.is_multiple_of(p) {
            continue;
        }
        let minus_m = -FpElem::new(spec.m, p);
        if !is_primitive_root(minus_m) {
            continue;
        }
        let delta = FpElem::new((spec.delta.rem_euclid(p as i128)) as u64, p);
        let mut problems = Vec::new();
        if legendre_fp(delta) != -1 {
            problems.push("Δ is not a nonresidue".to_string());
        }
        let params = SeqParams::reduced(spec.p_coef, spec.q_coef, p);
        match order_fp(params.q_hat) {
            Ok(o) if o == (p - 1) / 2 => {}
            Ok(o) => problems.push(format!("ord_p(Q) = {o}")),
            Err(e) => problems.push(e.to_string()),
        }
        if !is_complete_fast_with(&params, &factorize(p - 1)).complete {
            problems.push("not complete".to_string());
        }
        if problems.is_empty() {
            primes.push(p);
        } else {
            anomalies.push(ProgressionAnomaly {
                p,
                reason: problems.join("; "),
            });
        }
    }
    ProgressionScan {
        exhausted: primes.len() < count,
        primes,
        candidates_examined: examined,
        anomalies,
    }
}

/// Checks a modulus is usable before a scan.
pub fn check_prime(p: u64) -> Result<()> {
    arith::check_modulus(p)
}

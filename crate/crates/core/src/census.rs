//! Pair census for a fixed prime: which `(P, Q) ∈ {1,…,p−1}²` give a
//! complete sequence, and the auxiliary counts that bound that number.
//!
//! * `Λ_p`: complete pairs.
//! * `A_p`: primitive roots; `B_p`: residues of order `p−1` or `(p−1)/2`.
//! * `C_Q`: `P ∈ [1, p)` with `P² − 4Q` a nonresidue.
//! * `X`, `Y`: `x` a residue with `x − 1` a nonresidue, and the reverse.
//!
//! Bounds checked on every report: `½(p−3)|B_p| ≤ |Λ_p| ≤ ½(p²−1)` and
//! `|X|, |Y| ≥ (p−3)/4`. A failed bound is reported, never raised.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, factorize, legendre_fp, order_mod, Factorization, FpElem};
use crate::completeness::{is_complete_fast_with, is_complete_scan, DecidedBy};
use crate::sequence::SeqParams;
use crate::{Error, Result};

/// Largest oracle-validated prime; `Both` is the default up to here.
pub const BOTH_MODE_LIMIT: u64 = 101;

/// Censuses at or above this prime are refused.
pub const MAX_CENSUS_PRIME: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Fast,
    Oracle,
    Both,
}

impl CensusMode {
    pub fn default_for(p: u64) -> Self {
        if p <= BOTH_MODE_LIMIT {
            CensusMode::Both
        } else {
            CensusMode::Fast
        }
    }
}

/// Counts over a range of `P` rows. Merging is addition, so any partition
/// of the rows gives the same total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialCensus {
    pub lambda_count: u64,
    pub decided_by_tally: BTreeMap<DecidedBy, u64>,
    pub pairs: u64,
}

impl PartialCensus {
    pub fn merge(mut self, other: PartialCensus) -> PartialCensus {
        self.lambda_count += other.lambda_count;
        self.pairs += other.pairs;
        for (k, v) in other.decided_by_tally {
            *self.decided_by_tally.entry(k).or_insert(0) += v;
        }
        self
    }
}

fn check_census_prime(p: u64) -> Result<()> {
    arith::check_modulus(p)?;
    if p < 5 {
        return Err(Error::Precondition(format!("census needs p ≥ 5, got {p}")));
    }
    if p >= MAX_CENSUS_PRIME {
        return Err(Error::Precondition(format!(
            "census needs p < {MAX_CENSUS_PRIME}, got {p}"
        )));
    }
    Ok(())
}

/// Decides every pair with `P` in `rows` (and `Q ∈ [1, p)`).
pub fn census_rows(p: u64, mode: CensusMode, rows: Range<u64>) -> Result<PartialCensus> {
    check_census_prime(p)?;
    let p_minus_1 = factorize(p - 1);
    let mut part = PartialCensus::default();
    for big_p in rows.start.max(1)..rows.end.min(p) {
        for big_q in 1..p {
            let params = SeqParams::reduced(big_p as i64, big_q as i64, p);
            let (complete, decided_by) = match mode {
                CensusMode::Fast => {
                    let v = is_complete_fast_with(&params, &p_minus_1);
                    (v.complete, v.decided_by)
                }
                CensusMode::Oracle => (is_complete_scan(&params).complete, DecidedBy::Scan),
                CensusMode::Both => {
                    let fast = is_complete_fast_with(&params, &p_minus_1);
                    let scan = is_complete_scan(&params);
                    if fast.complete != scan.complete {
                        return Err(Error::Disagreement {
                            p_coef: big_p as i64,
                            q_coef: big_q as i64,
                            modulus: p,
                            fast: fast.complete,
                            scan: scan.complete,
                        });
                    }
                    (fast.complete, fast.decided_by)
                }
            };
            part.pairs += 1;
            part.lambda_count += complete as u64;
            *part.decided_by_tally.entry(decided_by).or_insert(0) += 1;
        }
    }
    Ok(part)
}

/// The sets `X` and `Y`, ascending.
pub fn aladov_sets(p: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    arith::check_modulus(p)?;
    let chi = |x: u64| legendre_fp(FpElem::new(x, p));
    let x = (1..p)
        .filter(|&x| chi(x) == 1 && chi(x - 1) == -1)
        .collect();
    let y = (1..p)
        .filter(|&y| chi(y - 1) == 1 && chi(y) == -1)
        .collect();
    Ok((x, y))
}

/// `C_Q` with the bookkeeping of the two-to-one map `P ↦ P²/(4Q)` onto
/// `X` (if `Q` is a residue) or `Y` (if not).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CqReport {
    pub q: u64,
    pub members: Vec<u64>,
    pub count: u64,
    pub legendre_q: i8,
    /// `|X|` when `Q` is a residue, `|Y|` otherwise.
    pub target_count: u64,
    /// `|C_Q| = 2 · target_count`.
    pub two_to_one: bool,
    /// Whether `P = 0` would also qualify, i.e. `−4Q` is a nonresidue.
    pub zero_qualifies: bool,
    /// `|{P ∈ [0, p) : P² − 4Q nonresidue}|`.
    pub full_domain_count: u64,
}

pub fn c_q_count(p: u64, q: u64) -> Result<CqReport> {
    let (x, y) = aladov_sets(p)?;
    c_q_with_sets(p, q, x.len() as u64, y.len() as u64)
}

fn c_q_with_sets(p: u64, q: u64, x_count: u64, y_count: u64) -> Result<CqReport> {
    let qh = FpElem::new(q, p);
    if qh.is_zero() {
        return Err(Error::Precondition("C_Q needs Q ≢ 0".into()));
    }
    let four_q = FpElem::new(4, p) * qh;
    let members: Vec<u64> = (1..p)
        .filter(|&big_p| {
            let x = FpElem::new(big_p, p);
            legendre_fp(x * x - four_q) == -1
        })
        .collect();
    let count = members.len() as u64;
    let legendre_q = legendre_fp(qh);
    let target_count = if legendre_q == 1 { x_count } else { y_count };
    let zero_qualifies = legendre_fp(-four_q) == -1;
    Ok(CqReport {
        q,
        members,
        count,
        legendre_q,
        target_count,
        two_to_one: count == 2 * target_count,
        zero_qualifies,
        full_domain_count: count + zero_qualifies as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub p: u64,
    pub mode: CensusMode,
    pub lambda_count: u64,
    /// `|Λ_p| / p²`, unreduced.
    pub ratio: String,
    pub ratio_numerator: u64,
    pub ratio_denominator: u64,
    pub ratio_decimal: f64,
    pub a_count: u64,
    pub b_count: u64,
    pub phi_p_minus_1: u64,
    /// `|C_Q|` for `Q = 1, …, p−1`.
    pub c_counts: Vec<u64>,
    pub x_count: u64,
    pub y_count: u64,
    /// `½(p−3)|B_p| ≤ |Λ_p|`
    pub bound_lower_ok: bool,
    /// `|Λ_p| ≤ ½(p²−1)`
    pub bound_upper_ok: bool,
    /// `|X|, |Y| ≥ (p−3)/4`
    pub aladov_ok: bool,
    /// `|C_Q| ≥ (p−3)/2` for every `Q`.
    pub c_lower_ok: bool,
    /// `|C_Q| = 2|X|` or `2|Y|` for every `Q`.
    pub two_to_one_ok: bool,
    /// `|A_p| = φ(p−1)`
    pub a_equals_phi: bool,
    /// For `p ≡ 3 (mod 4)`: squaring maps `A_p` injectively into
    /// `B_p \ A_p`, so `|B_p| ≥ 2|A_p|`. `None` otherwise.
    pub squares_of_a_ok: Option<bool>,
    pub bound_violation: bool,
    pub decided_by_tally: BTreeMap<DecidedBy, u64>,
}

/// Full census of `{1,…,p−1}²` using `jobs` worker threads.
pub fn census(p: u64, mode: CensusMode, jobs: usize) -> Result<CensusReport> {
    check_census_prime(p)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let rows: Vec<Result<PartialCensus>> = pool.install(|| {
        (1..p)
            .into_par_iter()
            .map(|big_p| census_rows(p, mode, big_p..big_p + 1))
            .collect()
    });
    let mut total = PartialCensus::default();
    for row in rows {
        total = total.merge(row?);
    }
    Ok(finish_census(p, mode, total))
}

/// Builds the report from merged pair counts.
pub fn finish_census(p: u64, mode: CensusMode, pairs: PartialCensus) -> CensusReport {
    let p_minus_1: Factorization = factorize(p - 1);
    let half = (p - 1) / 2;

    let mut a_set = vec![false; p as usize];
    let mut b_count = 0;
    for x in 1..p {
        let ord = order_mod(FpElem::new(x, p), &p_minus_1).expect("nonzero residue");
        if ord == p - 1 {
            a_set[x as usize] = true;
        }
        if ord == p - 1 || ord == half {
            b_count += 1;
        }
    }
    let a_count = a_set.iter().filter(|&&a| a).count() as u64;

    let squares_of_a_ok = (p % 4 == 3).then(|| {
        let mut hit = vec![false; p as usize];
        let mut ok = true;
        for x in (1..p).filter(|&x| a_set[x as usize]) {
            let sq = (x * x % p) as usize;
            let ord = order_mod(FpElem::new(sq as u64, p), &p_minus_1).expect("nonzero");
            ok &= !hit[sq] && !a_set[sq] && ord == half;
            hit[sq] = true;
        }
        ok && b_count >= 2 * a_count
    });

    let (x, y) = aladov_sets(p).expect("p validated");
    let (x_count, y_count) = (x.len() as u64, y.len() as u64);
    let cq: Vec<CqReport> = (1..p)
        .map(|q| c_q_with_sets(p, q, x_count, y_count).expect("Q ≠ 0"))
        .collect();
    let c_counts: Vec<u64> = cq.iter().map(|c| c.count).collect();

    let lambda = pairs.lambda_count;
    let bound_lower_ok = (p - 3) * b_count <= 2 * lambda;
    let bound_upper_ok = 2 * lambda < p * p;
    let aladov_ok = 4 * x_count >= p - 3 && 4 * y_count >= p - 3;
    let c_lower_ok = c_counts.iter().all(|&c| 2 * c >= p - 3);
    let two_to_one_ok = cq.iter().all(|c| c.two_to_one);
    let phi = p_minus_1.phi();
    let a_equals_phi = a_count == phi;

    let bound_violation = !(bound_lower_ok
        && bound_upper_ok
        && aladov_ok
        && c_lower_ok
        && two_to_one_ok
        && a_equals_phi
        && squares_of_a_ok != Some(false));

    let den = p * p;
    CensusReport {
        p,
        mode,
        lambda_count: lambda,
        ratio: format!("{lambda}/{den}"),
        ratio_numerator: lambda,
        ratio_denominator: den,
        ratio_decimal: lambda as f64 / den as f64,
        a_count,
        b_count,
        phi_p_minus_1: phi,
        c_counts,
        x_count,
        y_count,
        bound_lower_ok,
        bound_upper_ok,
        aladov_ok,
        c_lower_ok,
        two_to_one_ok,
        a_equals_phi,
        squares_of_a_ok,
        bound_violation,
        decided_by_tally: pairs.decided_by_tally,
    }
}

/// One line of the ratio table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub p: u64,
    pub lambda_count: Option<u64>,
    pub ratio: Option<String>,
    pub ratio_decimal: Option<f64>,
    /// `p ≡ 3 (mod 4)` with `(p−1)/2` prime.
    pub safe_prime: bool,
    pub bound_violation: Option<bool>,
    pub error: Option<String>,
}

/// `p ≡ 3 (mod 4)` and `(p−1)/2` prime.
pub fn is_safe_prime_family(p: u64) -> bool {
    p >= 3 && p % 4 == 3 && arith::is_prime((p - 1) / 2)
}

/// Runs a census per prime; a failing prime yields an error row and the
/// series continues. `mode = None` picks [`CensusMode::default_for`].
pub fn ratio_series(primes: &[u64], mode: Option<CensusMode>, jobs: usize) -> Vec<RatioRow> {
    primes
        .iter()
        .map(|&p| {
            let m = mode.unwrap_or_else(|| CensusMode::default_for(p));
            match census(p, m, jobs) {
                Ok(r) => RatioRow {
                    p,
                    lambda_count: Some(r.lambda_count),
                    ratio: Some(r.ratio),
                    ratio_decimal: Some(r.ratio_decimal),
                    safe_prime: is_safe_prime_family(p),
                    bound_violation: Some(r.bound_violation),
                    error: None,
                },
                Err(e) => RatioRow {
                    p,
                    lambda_count: None,
                    ratio: None,
                    ratio_decimal: None,
                    safe_prime: is_safe_prime_family(p),
                    bound_violation: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

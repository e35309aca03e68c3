//! Completeness of `[P,Q]` modulo `p`: does every residue occur among
//! `F_0, F_1, …`?
//!
//! [`is_complete_fast`] tries closed-form criteria in a fixed priority order
//! and only falls back to a scan when none applies. [`is_complete_scan`]
//! always walks the sequence and serves as the oracle for the fast path.

use serde::Serialize;

use crate::arith::{
    factorize, is_primitive_root_with, order_fp, order_mod, Factorization, Fp2Elem, FpElem,
};
use crate::periods::{pisano_period, PeriodProfile};
use crate::sequence::{Case, SeqParams};
use crate::{Error, Result};

/// Which rule produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DecidedBy {
    /// `Δ` a nonzero square: `π | p − 1`, never complete.
    CaseI,
    /// Repeated root: complete iff `P ≢ 0`.
    CaseII,
    /// `Q ≡ 1`: complete iff `P ≡ ±2`.
    TheoremQ1,
    /// `Δ` nonresidue, `P ≢ 0`, `ord_p(Q) ∈ {p−1, (p−1)/2}`: complete.
    Uniform1,
    /// `P ≡ 0`: complete iff `−Q` is a primitive root.
    SpecialP0,
    /// `Q ≡ 0`: complete iff `P` is a primitive root.
    SpecialQ0,
    /// `P ≡ Q ≡ 0`: never complete.
    DegeneratePQ0,
    /// Decided by walking the sequence.
    Scan,
}

impl DecidedBy {
    pub const ALL: [DecidedBy; 8] = [
        DecidedBy::CaseI,
        DecidedBy::CaseII,
        DecidedBy::TheoremQ1,
        DecidedBy::Uniform1,
        DecidedBy::SpecialP0,
        DecidedBy::SpecialQ0,
        DecidedBy::DegeneratePQ0,
        DecidedBy::Scan,
    ];
}

/// What a scan observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    /// Terms examined, `F_0` included.
    pub terms: u64,
    pub residues_seen: u64,
    /// Length of the cycle of `(F_n, F_{n+1})`, known when the scan ran to
    /// the end of the period instead of exiting early.
    pub period: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessVerdict {
    pub complete: bool,
    pub decided_by: DecidedBy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanStats>,
}

impl CompletenessVerdict {
    fn rule(complete: bool, decided_by: DecidedBy) -> Self {
        CompletenessVerdict {
            complete,
            decided_by,
            scan: None,
        }
    }
}

/// Walks `F_0, F_1, …` marking residues until every residue is seen, the
/// state pair `(F_n, F_{n+1})` returns to `(F_1, F_2)`, or the sequence
/// collapses to zero.
pub fn is_complete_scan(params: &SeqParams) -> CompletenessVerdict {
    let p = params.modulus;
    let mut seen = vec![false; p as usize];
    let mut unseen = p;
    let mut mark = |x: FpElem, unseen: &mut u64| {
        let slot = &mut seen[x.value() as usize];
        if !*slot {
            *slot = true;
            *unseen -= 1;
        }
    };

    mark(params.zero(), &mut unseen);
    let start = (params.one(), params.p_hat);
    let (mut cur, mut next) = start;
    let mut n: u64 = 1;
    // (F_n, F_{n+1}) has at most p² states, so the loop is bounded.
    let limit = p * p + 2;
    let mut period = None;
    loop {
        mark(cur, &mut unseen);
        if unseen == 0 {
            break;
        }
        let following = params.p_hat * next - params.q_hat * cur;
        cur = next;
        next = following;
        if (cur, next) == start {
            period = Some(n);
            break;
        }
        n += 1;
        if (cur.is_zero() && next.is_zero()) || n > limit {
            mark(cur, &mut unseen);
            break;
        }
    }

    CompletenessVerdict {
        complete: unseen == 0,
        decided_by: DecidedBy::Scan,
        scan: Some(ScanStats {
            terms: n + 1,
            residues_seen: p - unseen,
            period,
        }),
    }
}

/// Layered decision: closed-form criteria first, scan last.
///
/// Primes `p ≤ 3` always go to the scan.
pub fn is_complete_fast(params: &SeqParams) -> CompletenessVerdict {
    is_complete_fast_with(params, &factorize(params.modulus - 1))
}

/// [`is_complete_fast`] with a precomputed factorization of `p − 1`.
pub fn is_complete_fast_with(params: &SeqParams, p_minus_1: &Factorization) -> CompletenessVerdict {
    let p = params.modulus;
    debug_assert_eq!(p_minus_1.n(), p - 1);
    if p <= 3 {
        return is_complete_scan(params);
    }
    let (ph, qh) = (params.p_hat, params.q_hat);

    if ph.is_zero() && qh.is_zero() {
        return CompletenessVerdict::rule(false, DecidedBy::DegeneratePQ0);
    }
    if ph.is_zero() {
        return CompletenessVerdict::rule(
            is_primitive_root_with(-qh, p_minus_1),
            DecidedBy::SpecialP0,
        );
    }
    if qh.is_zero() {
        return CompletenessVerdict::rule(
            is_primitive_root_with(ph, p_minus_1),
            DecidedBy::SpecialQ0,
        );
    }
    match params.case {
        Case::SplitRoots => return CompletenessVerdict::rule(false, DecidedBy::CaseI),
        Case::RepeatedRoot => return CompletenessVerdict::rule(true, DecidedBy::CaseII),
        Case::Irreducible | Case::DegenerateQ0 => {}
    }
    if qh.is_one() {
        let v = ph.value();
        return CompletenessVerdict::rule(v == 2 || v == p - 2, DecidedBy::TheoremQ1);
    }
    let ord_q = order_mod(qh, p_minus_1).expect("Q ≢ 0 has an order dividing p − 1");
    if ord_q == p - 1 || ord_q == (p - 1) / 2 {
        return CompletenessVerdict::rule(true, DecidedBy::Uniform1);
    }
    is_complete_scan(params)
}

/// Which multiplicity pattern the full period showed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Uniform1Branch {
    /// Zero `p − 1` times, each nonzero residue `ρ − 1` times; forced when
    /// `p ≡ 1 (mod 4)` or `ρ` is even.
    A,
    /// Same counts as `A`, with `p ≡ 3 (mod 4)` and `ρ` odd.
    BI,
    /// Zero `(p − 1)/2` times, each nonzero residue `(ρ − 1)/2` times;
    /// only possible with `p ≡ 3 (mod 4)` and `ρ` odd.
    BII,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Uniform1Report {
    pub modulus: u64,
    pub rho: u64,
    pub pi: u64,
    pub ord_q: u64,
    pub zero_count: u64,
    /// Common count of the nonzero residues, `None` if they differ.
    pub nonzero_count: Option<u64>,
    pub branch: Option<Uniform1Branch>,
    /// Histogram shape matches a branch and the branch is admissible for
    /// `p mod 4` and the parity of `ρ`.
    pub consistent: bool,
}

/// Computes the full-period histogram and classifies it into one of the
/// multiplicity branches.
pub fn verify_uniform1(params: &SeqParams) -> Result<Uniform1Report> {
    if params.case != Case::Irreducible {
        return Err(Error::WrongCase {
            expected: "case III",
            actual: params.case,
        });
    }
    if params.p_hat.is_zero() {
        return Err(Error::Precondition("needs P ≢ 0 (mod p)".into()));
    }
    let p = params.modulus;
    let ord_q = order_fp(params.q_hat)?;
    if ord_q != p - 1 && ord_q != (p - 1) / 2 {
        return Err(Error::Precondition(format!(
            "ord_p(Q) = {ord_q} is neither p−1 nor (p−1)/2"
        )));
    }
    let profile: PeriodProfile = pisano_period(params)?;
    let hist = profile
        .histogram
        .as_ref()
        .expect("pisano_period fills the histogram");
    let zero_count = hist.get(0);
    let nonzero_count = hist.uniform_nonzero_count();
    let rho = profile.rho;
    let p3 = p % 4 == 3;

    let full = nonzero_count == Some(rho - 1) && zero_count == p - 1;
    let half = rho % 2 == 1 && nonzero_count == Some((rho - 1) / 2) && zero_count == (p - 1) / 2;

    let branch = if full {
        Some(if !p3 || rho.is_multiple_of(2) {
            Uniform1Branch::A
        } else {
            Uniform1Branch::BI
        })
    } else if half {
        Some(Uniform1Branch::BII)
    } else {
        None
    };
    let admissible = match branch {
        Some(Uniform1Branch::BII) => p3,
        Some(_) => true,
        None => false,
    };
    let consistent = admissible && zero_count == profile.pi / rho;

    Ok(Uniform1Report {
        modulus: p,
        rho,
        pi: profile.pi,
        ord_q: profile.ord_q,
        zero_count,
        nonzero_count,
        branch,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumOfSquaresReport {
    /// `r = (p + 1)/2`.
    pub r: u64,
    /// `Σ_{i=1}^{r−1} F_i²`.
    pub sum: FpElem,
    /// `−Δ⁻¹`.
    pub expected: FpElem,
    pub holds: bool,
}

/// For `Q ≡ 1` in the irreducible case with `α^{(p+1)/2} = −1`, checks
/// `Σ_{i=1}^{r−1} F_i² ≡ −1/Δ` by direct summation.
pub fn sum_of_squares_check(params: &SeqParams) -> Result<SumOfSquaresReport> {
    if !params.q_hat.is_one() {
        return Err(Error::Precondition("needs Q ≡ 1 (mod p)".into()));
    }
    if params.case != Case::Irreducible {
        return Err(Error::WrongCase {
            expected: "case III",
            actual: params.case,
        });
    }
    let p = params.modulus;
    let r = p.div_ceil(2);
    let (alpha, _) = params.roots_in_extension();
    let minus_one = Fp2Elem::from_base(-params.one(), params.delta);
    if alpha.pow(r) != minus_one {
        return Err(Error::Precondition(
            "α^{(p+1)/2} = +1; the sum-of-squares identity needs −1".into(),
        ));
    }
    let sum = params
        .terms()
        .take((r - 1) as usize)
        .fold(params.zero(), |acc, f| acc + f * f);
    let expected = -params.delta.inv().expect("Δ ≢ 0 in case III");
    Ok(SumOfSquaresReport {
        r,
        sum,
        expected,
        holds: sum == expected,
    })
}

//! Rank of apparition, Pisano period, period matrix and the full-period
//! multiplicity histogram.
//!
//! The full period is `F̂_1, …, F̂_π` (index 0 excluded). With `ρ` the rank
//! of apparition and `u = F_{ρ+1}`, every block of `ρ` consecutive terms is
//! `u` times the previous block, so `π = ρ · ord_p(u)`.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{factorize, order_fp, Fp2Elem, FpElem};
use crate::sequence::{nth_term, Case, SeqParams};
use crate::{Error, Result};

/// Above this modulus histograms are stored sparsely.
pub const DENSE_HISTOGRAM_LIMIT: u64 = 1 << 22;

/// Default cap on the number of period-matrix entries.
pub const DEFAULT_MATRIX_CAP: u64 = 1 << 26;

/// Occurrence counts of each residue over the full period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    modulus: u64,
    store: Store,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Store {
    Dense(Vec<u64>),
    Sparse(BTreeMap<u64, u64>),
}

impl Histogram {
    pub fn new(modulus: u64) -> Self {
        let store = if modulus < DENSE_HISTOGRAM_LIMIT {
            Store::Dense(vec![0; modulus as usize])
        } else {
            Store::Sparse(BTreeMap::new())
        };
        Histogram { modulus, store }
    }

    #[inline]
    pub fn record(&mut self, x: FpElem) {
        match &mut self.store {
            Store::Dense(v) => v[x.value() as usize] += 1,
            Store::Sparse(m) => *m.entry(x.value()).or_insert(0) += 1,
        }
    }

    pub fn get(&self, residue: u64) -> u64 {
        match &self.store {
            Store::Dense(v) => v.get(residue as usize).copied().unwrap_or(0),
            Store::Sparse(m) => m.get(&residue).copied().unwrap_or(0),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `(residue, count)` for residues with a nonzero count, ascending.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match &self.store {
            Store::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(r, &c)| (r as u64, c)),
            ),
            Store::Sparse(m) => Box::new(m.iter().map(|(&r, &c)| (r, c))),
        }
    }

    pub fn total(&self) -> u64 {
        self.iter().map(|(_, c)| c).sum()
    }

    /// Number of distinct residues that occur.
    pub fn support(&self) -> u64 {
        self.iter().count() as u64
    }

    /// The common count of all nonzero residues, if they share one.
    pub fn uniform_nonzero_count(&self) -> Option<u64> {
        let first = self.get(1);
        (2..self.modulus)
            .all(|r| self.get(r) == first)
            .then_some(first)
    }
}

impl Serialize for Histogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (r, c) in self.iter() {
            map.serialize_entry(&r.to_string(), &c)?;
        }
        map.end()
    }
}

/// `ρ`, `π`, `ord_p(Q)`, `u = F_{ρ+1}` and optionally the histogram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodProfile {
    pub modulus: u64,
    pub case: Case,
    pub rho: u64,
    pub pi: u64,
    pub ord_q: u64,
    pub u: FpElem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

/// Least `n > 0` with `F_n ≡ 0`.
///
/// Searched over the divisors of `p − 1` (split), `p + 1` (irreducible), in
/// increasing order; `p` itself for a repeated root.
pub fn rank_of_apparition(params: &SeqParams) -> Result<u64> {
    let p = params.modulus;
    let bound = match params.case {
        Case::RepeatedRoot => return Ok(p),
        Case::SplitRoots => p - 1,
        Case::Irreducible => p + 1,
        Case::DegenerateQ0 => {
            return Err(Error::WrongCase {
                expected: "case I, II or III",
                actual: params.case,
            })
        }
    };
    factorize(bound)
        .divisors()
        .into_iter()
        .find(|&d| nth_term(params, d).f_n.is_zero())
        .ok_or_else(|| Error::Invariant(format!("F_{bound} is not zero mod {p}")))
}

/// Profile without the `O(π)` histogram pass.
pub fn period_summary(params: &SeqParams) -> Result<PeriodProfile> {
    let rho = rank_of_apparition(params)?;
    let u = nth_term(params, rho).f_next;
    let pi = rho * order_fp(u)?;
    let ord_q = order_fp(params.q_hat)?;

    let back = nth_term(params, pi);
    if !(back.f_n.is_zero() && back.f_next.is_one()) {
        return Err(Error::Invariant(format!(
            "(F_π, F_π+1) = ({}, {}) for π = {pi}",
            back.f_n, back.f_next
        )));
    }

    Ok(PeriodProfile {
        modulus: params.modulus,
        case: params.case,
        rho,
        pi,
        ord_q,
        u,
        histogram: None,
    })
}

/// Full profile including the histogram of `F̂_1, …, F̂_π`.
pub fn pisano_period(params: &SeqParams) -> Result<PeriodProfile> {
    let mut profile = period_summary(params)?;
    let mut hist = Histogram::new(params.modulus);
    for f in params.terms().take(profile.pi as usize) {
        hist.record(f);
    }
    debug_assert_eq!(hist.total(), profile.pi);
    if hist.get(0) != profile.pi / profile.rho {
        return Err(Error::Invariant(format!(
            "zero occurs {} times, expected π/ρ = {}",
            hist.get(0),
            profile.pi / profile.rho
        )));
    }
    profile.histogram = Some(hist);
    Ok(profile)
}

/// The full period laid out as a `(π/ρ) × ρ` matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodMatrix {
    pub rows: u64,
    pub cols: u64,
    pub u: FpElem,
    entries: Vec<FpElem>,
}

impl PeriodMatrix {
    /// Zero-based `(row, col)`; entry `(i, j)` is `F̂_{iρ + j + 1}`.
    pub fn get(&self, row: u64, col: u64) -> FpElem {
        self.entries[(row * self.cols + col) as usize]
    }

    pub fn row(&self, row: u64) -> &[FpElem] {
        let start = (row * self.cols) as usize;
        &self.entries[start..start + self.cols as usize]
    }

    pub fn column(&self, col: u64) -> Vec<FpElem> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[FpElem]> {
        self.entries.chunks(self.cols as usize)
    }

    /// Last column zero, all other entries nonzero, and
    /// `entry(i, j) = u^i · entry(0, j)`.
    pub fn is_rank_one(&self) -> bool {
        let first = self.row(0);
        let mut scale = FpElem::one(self.u.modulus());
        for row in self.rows_iter() {
            for (j, (&x, &x0)) in row.iter().zip(first).enumerate() {
                let last = j as u64 == self.cols - 1;
                if last != x.is_zero() || x != scale * x0 {
                    return false;
                }
            }
            scale *= self.u;
        }
        true
    }
}

/// Materializes the period matrix, refusing above `cap` entries.
pub fn period_matrix(params: &SeqParams, cap: u64) -> Result<PeriodMatrix> {
    let profile = period_summary(params)?;
    if profile.pi > cap {
        return Err(Error::MatrixTooLarge {
            entries: profile.pi,
            cap,
        });
    }
    let entries: Vec<FpElem> = params.terms().take(profile.pi as usize).collect();
    let m = PeriodMatrix {
        rows: profile.pi / profile.rho,
        cols: profile.rho,
        u: profile.u,
        entries,
    };
    if !m.is_rank_one() {
        return Err(Error::Invariant("period matrix is not rank one".into()));
    }
    Ok(m)
}

/// Outcome of checking `α^{p+1} = β^{p+1} = Q` and the period divisibility
/// `π | (p+1)·ord_p(Q)` with its odd-quotient refinement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub alpha_pow: Fp2Elem,
    pub beta_pow: Fp2Elem,
    pub roots_pow_is_q: bool,
    pub pi: u64,
    pub ord_q: u64,
    /// `(p+1)·ord_p(Q)`.
    pub multiple: u64,
    pub divides: bool,
    pub quotient: Option<u64>,
    /// `None` when `ord_p(Q)` is odd and the clause is vacuous.
    pub odd_quotient: Option<bool>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.roots_pow_is_q && self.divides && self.odd_quotient != Some(false)
    }
}

pub fn verify_lemma1(params: &SeqParams) -> Result<Lemma1Report> {
    if params.case != Case::Irreducible {
        return Err(Error::WrongCase {
            expected: "case III",
            actual: params.case,
        });
    }
    let p = params.modulus;
    let (alpha, beta) = params.roots_in_extension();
    let alpha_pow = alpha.pow(p + 1);
    let beta_pow = beta.pow(p + 1);
    let q = Fp2Elem::from_base(params.q_hat, params.delta);
    let roots_pow_is_q = alpha_pow == q && beta_pow == q;

    let profile = period_summary(params)?;
    let multiple = (p + 1) * profile.ord_q;
    let divides = multiple.is_multiple_of(profile.pi);
    let quotient = divides.then(|| multiple / profile.pi);
    let odd_quotient = (profile.ord_q % 2 == 0).then(|| quotient.is_some_and(|k| k % 2 == 1));

    Ok(Lemma1Report {
        alpha_pow,
        beta_pow,
        roots_pow_is_q,
        pi: profile.pi,
        ord_q: profile.ord_q,
        multiple,
        divides,
        quotient,
        odd_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::classify;

    fn vals(xs: &[FpElem]) -> Vec<u64> {
        xs.iter().map(|x| x.value()).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of_apparition(&classify(1, 4, 7).unwrap()), Ok(4));
        assert_eq!(rank_of_apparition(&classify(1, 4, 13).unwrap()), Ok(7));
        assert_eq!(rank_of_apparition(&classify(12, 5, 19).unwrap()), Ok(5));
        assert_eq!(rank_of_apparition(&classify(2, 1, 11).unwrap()), Ok(11));
        assert!(matches!(
            rank_of_apparition(&classify(2, 0, 11).unwrap()),
            Err(Error::WrongCase { .. })
        ));
    }

    #[test]
    fn profile_example_7() {
        let prof = pisano_period(&classify(1, 4, 7).unwrap()).unwrap();
        assert_eq!(prof.pi, 24);
        assert_eq!(prof.ord_q, 3);
        let h = prof.histogram.unwrap();
        assert_eq!(h.get(0), 6);
        for k in 1..7 {
            assert_eq!(h.get(k), 3);
        }
    }

    #[test]
    fn profile_examples_13_19() {
        let prof = pisano_period(&classify(1, 4, 13).unwrap()).unwrap();
        assert_eq!((prof.rho, prof.pi, prof.ord_q), (7, 84, 6));
        let prof = pisano_period(&classify(12, 5, 19).unwrap()).unwrap();
        assert_eq!(
            (prof.rho, prof.pi, prof.ord_q, prof.u.value()),
            (5, 45, 9, 16)
        );
        let h = prof.histogram.unwrap();
        assert_eq!(h.uniform_nonzero_count(), Some(2));
        assert_eq!(h.get(0), 9);
    }

    #[test]
    fn matrix_13() {
        let m = period_matrix(&classify(1, 4, 13).unwrap(), DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!((m.rows, m.cols), (12, 7));
        assert_eq!(vals(m.row(0)), vec![1, 1, 10, 6, 5, 7, 0]);
        assert_eq!(vals(m.row(11)), vec![6, 6, 8, 10, 4, 3, 0]);
        assert_eq!(
            vals(&m.column(0)),
            vec![1, 11, 4, 5, 3, 7, 12, 2, 9, 8, 10, 6]
        );
        assert!(vals(&m.column(6)).iter().all(|&x| x == 0));
    }

    #[test]
    fn matrix_19() {
        let m = period_matrix(&classify(12, 5, 19).unwrap(), DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!((m.rows, m.cols), (9, 5));
        assert_eq!(vals(m.row(0)), vec![1, 12, 6, 12, 0]);
        assert_eq!(vals(&m.column(0)), vec![1, 16, 9, 11, 5, 4, 7, 17, 6]);
    }

    #[test]
    fn matrix_cap() {
        let s = classify(1, 4, 13).unwrap();
        assert_eq!(
            period_matrix(&s, 50),
            Err(Error::MatrixTooLarge {
                entries: 84,
                cap: 50
            })
        );
    }

    #[test]
    fn root_power_examples() {
        let r = verify_lemma1(&classify(1, 4, 7).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(
            (r.multiple, r.pi, r.quotient, r.odd_quotient),
            (24, 24, Some(1), None)
        );

        let r = verify_lemma1(&classify(1, 4, 13).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(
            (r.multiple, r.quotient, r.odd_quotient),
            (84, Some(1), Some(true))
        );

        let r = verify_lemma1(&classify(12, 5, 19).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(
            (r.multiple, r.pi, r.quotient, r.odd_quotient),
            (180, 45, Some(4), None)
        );

        assert!(verify_lemma1(&classify(3, 2, 7).unwrap()).is_err());
    }

    #[test]
    fn sparse_histogram_behaves_like_dense() {
        let mut h = Histogram::new(DENSE_HISTOGRAM_LIMIT + 15);
        let m = h.modulus();
        for v in [0, 5, 5, m - 1] {
            h.record(FpElem::new(v, m));
        }
        assert_eq!(h.get(5), 2);
        assert_eq!(h.total(), 4);
        assert_eq!(h.support(), 3);
        assert_eq!(
            h.iter().collect::<Vec<_>>(),
            vec![(0, 1), (5, 2), (m - 1, 1)]
        );
    }
}

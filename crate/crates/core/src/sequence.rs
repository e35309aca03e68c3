//! The sequence `[P,Q]` modulo `p`: classification, streaming iteration,
//! logarithmic-time term evaluation and Binet's formula.

use serde::Serialize;

use crate::arith::{self, legendre_fp, sqrt_mod, Fp2Elem, FpElem};
use crate::{Error, Result};

/// Quadratic character of the discriminant `Δ = P² − 4Q` modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    /// `Δ` a nonzero square: two distinct roots in `Z_p`.
    #[serde(rename = "I")]
    SplitRoots,
    /// `Δ ≡ 0`: repeated root `P/2`.
    #[serde(rename = "II")]
    RepeatedRoot,
    /// `Δ` a nonresidue: conjugate roots in `K_p`.
    #[serde(rename = "III")]
    Irreducible,
    /// `p | Q`; the sequence is geometric, `F_n = P^{n−1}`.
    DegenerateQ0,
}

/// Parameters `(P, Q, p)` reduced once, with the discriminant classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeqParams {
    pub p_coef: i64,
    pub q_coef: i64,
    pub modulus: u64,
    pub p_hat: FpElem,
    pub q_hat: FpElem,
    pub delta: FpElem,
    pub case: Case,
}

/// `(F_n, F_{n+1})` at index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermPair {
    pub n: u64,
    pub f_n: FpElem,
    pub f_next: FpElem,
}

/// Reduces `P` and `Q` modulo `p` and classifies the discriminant.
pub fn classify(p_coef: i64, q_coef: i64, modulus: u64) -> Result<SeqParams> {
    arith::check_modulus(modulus)?;
    Ok(SeqParams::reduced(p_coef, q_coef, modulus))
}

impl SeqParams {
    /// [`classify`] for a modulus the caller has already validated.
    pub fn reduced(p_coef: i64, q_coef: i64, modulus: u64) -> SeqParams {
        debug_assert!(arith::check_modulus(modulus).is_ok());
        let p_hat = FpElem::from_i64(p_coef, modulus);
        let q_hat = FpElem::from_i64(q_coef, modulus);
        let four = FpElem::new(4, modulus);
        let delta = p_hat * p_hat - four * q_hat;
        let case = if q_hat.is_zero() {
            Case::DegenerateQ0
        } else {
            match legendre_fp(delta) {
                1 => Case::SplitRoots,
                0 => Case::RepeatedRoot,
                _ => Case::Irreducible,
            }
        };
        SeqParams {
            p_coef,
            q_coef,
            modulus,
            p_hat,
            q_hat,
            delta,
            case,
        }
    }

    pub fn zero(&self) -> FpElem {
        FpElem::zero(self.modulus)
    }

    pub fn one(&self) -> FpElem {
        FpElem::one(self.modulus)
    }

    /// Infinite stream `F_1, F_2, …`.
    pub fn terms(&self) -> Terms {
        Terms {
            p_hat: self.p_hat,
            q_hat: self.q_hat,
            cur: self.zero(),
            next: self.one(),
        }
    }

    /// The characteristic roots `α = (P + √Δ)/2`, `β = (P − √Δ)/2` in `K_p`.
    ///
    /// Only meaningful in the irreducible case.
    pub fn roots_in_extension(&self) -> (Fp2Elem, Fp2Elem) {
        let half = FpElem::new(2, self.modulus).inv().expect("p is odd");
        let alpha = Fp2Elem::new(self.p_hat * half, half, self.delta);
        (alpha, alpha.conj())
    }
}

/// Streaming iterator over `F_1, F_2, …` by the two-term recurrence.
#[derive(Clone, Debug)]
pub struct Terms {
    p_hat: FpElem,
    q_hat: FpElem,
    cur: FpElem,
    next: FpElem,
}

impl Iterator for Terms {
    type Item = FpElem;

    #[inline]
    fn next(&mut self) -> Option<FpElem> {
        let following = self.p_hat * self.next - self.q_hat * self.cur;
        self.cur = self.next;
        self.next = following;
        Some(self.cur)
    }
}

/// `F_1, …, F_count`.
pub fn iterate_terms(params: &SeqParams, count: u64) -> impl Iterator<Item = FpElem> {
    params.terms().take(count as usize)
}

/// 2×2 matrix over `Z_p`, row-major.
#[derive(Clone, Copy)]
struct Mat2([FpElem; 4]);

impl Mat2 {
    fn identity(p: u64) -> Self {
        Mat2([
            FpElem::one(p),
            FpElem::zero(p),
            FpElem::zero(p),
            FpElem::one(p),
        ])
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// `(F_n, F_{n+1})` in `O(log n)` multiplications.
///
/// Uses `[[P, −Q], [1, 0]]^n`, whose first column is `(F_{n+1}, F_n)`.
pub fn nth_term(params: &SeqParams, n: u64) -> TermPair {
    let p = params.modulus;
    if params.case == Case::DegenerateQ0 {
        let (f_n, f_next) = if n == 0 {
            (FpElem::zero(p), FpElem::one(p))
        } else {
            let f_n = params.p_hat.pow(n - 1);
            (f_n, f_n * params.p_hat)
        };
        return TermPair { n, f_n, f_next };
    }
    let mut base = Mat2([params.p_hat, -params.q_hat, FpElem::one(p), FpElem::zero(p)]);
    let mut acc = Mat2::identity(p);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    TermPair {
        n,
        f_n: acc.0[2],
        f_next: acc.0[0],
    }
}

/// `F_n = (αⁿ − βⁿ)/(α − β)` evaluated with explicit roots.
///
/// Irreducible case: roots in `K_p`, the result must land in `Z_p`.
/// Split case: roots in `Z_p` via a modular square root of `Δ`.
pub fn binet_eval(params: &SeqParams, n: u64) -> Result<FpElem> {
    match params.case {
        Case::Irreducible => {
            let (alpha, beta) = params.roots_in_extension();
            let diff_inv = (alpha - beta)
                .inv()
                .expect("√Δ ≠ 0 in the irreducible case");
            let value = (alpha.pow(n) - beta.pow(n)) * diff_inv;
            if !value.in_base_field() {
                return Err(Error::Invariant(format!(
                    "Binet value {value:?} has a nonzero √Δ component"
                )));
            }
            Ok(value.a)
        }
        Case::SplitRoots => {
            let root = sqrt_mod(params.delta).expect("Δ is a residue in the split case");
            let half = FpElem::new(2, params.modulus).inv().expect("p is odd");
            let alpha = (params.p_hat + root) * half;
            let beta = (params.p_hat - root) * half;
            Ok((alpha.pow(n) - beta.pow(n)) / (alpha - beta))
        }
        actual => Err(Error::WrongCase {
            expected: "case I or III",
            actual,
        }),
    }
}

/// `F_n = n·(P/2)^{n−1}` for a repeated root.
pub fn repeated_root_term(params: &SeqParams, n: u64) -> Result<FpElem> {
    if params.case != Case::RepeatedRoot {
        return Err(Error::WrongCase {
            expected: "case II",
            actual: params.case,
        });
    }
    if params.p_hat.is_zero() {
        return Err(Error::Precondition(
            "repeated-root formula needs P ≢ 0".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Precondition(
            "repeated-root formula needs n ≥ 1".into(),
        ));
    }
    let p = params.modulus;
    let half_p = params.p_hat / FpElem::new(2, p);
    Ok(FpElem::new(n % p, p) * half_p.pow(n - 1))
}

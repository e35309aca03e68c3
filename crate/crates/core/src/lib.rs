//! Generalized Fibonacci sequences `[P,Q]` modulo primes.
//!
//! The sequence `[P,Q]` is `F_0 = 0`, `F_1 = 1`, `F_{n+1} = P·F_n − Q·F_{n−1}`.
//! This crate evaluates it modulo an odd prime `p`, computes its rank of
//! apparition and Pisano period, decides whether it is *complete* (hits every
//! residue class mod `p`), and runs pair censuses and prime scans built on
//! those decisions. Every closed-form shortcut has a brute-force counterpart
//! so the two can be checked against each other.
//!
//! Module map:
//!
//! * [`arith`]: `Z_p` and `K_p = Z_p(√Δ)` arithmetic, Legendre symbols,
//!   modular square roots, factorization, multiplicative orders.
//! * [`sequence`]: parameter classification, term iteration, `O(log n)`
//!   term evaluation, Binet evaluation.
//! * [`periods`]: rank of apparition, Pisano period, period matrix.
//! * [`completeness`]: fast and scan-based completeness verdicts.
//! * [`census`]: per-prime pair counts and the bounds they must satisfy.
//! * [`witness`]: prime scans for fixed integer parameters and the
//!   arithmetic-progression construction for square `Q`.

pub mod arith;
pub mod census;
pub mod completeness;
pub mod periods;
pub mod sequence;
pub mod witness;

mod error;

pub use error::{Error, Result};

pub use arith::{Factorization, Fp2Elem, FpElem};

pub use census::{CensusMode, CensusReport};
pub use completeness::{CompletenessVerdict, DecidedBy};
pub use periods::{PeriodMatrix, PeriodProfile};
pub use sequence::{Case, SeqParams, TermPair};
pub use witness::{DichotomyClass, ProgressionSpec, WitnessScan};

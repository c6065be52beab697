//! Continued fractions over F_p(X) and F_p((1/X)).
//!
//! Every rational function has a unique finite expansion [a0; a1, ..., an]
//! with deg(ai) >= 1 for i >= 1; the Euclidean algorithm produces it and
//! back-substitution inverts it. Convergents come from the standard
//! three-term recurrence, the approximation error obeys the exact identity
//! |x - Pj/Qj| = p^-(deg a_{j+1} + 2 deg Qj), and the folding transform
//! appends [t, -an, ..., -a1] to realize g/h + (-1)^n/(t h^2).
//!
//! Expansions of truncated Laurent data emit a partial quotient only when it
//! is provably unaffected by the unknown tail: a quotient is exact once
//! twice the accumulated quotient degree stays within the known depth.

use crate::algebra::{Magnitude, Poly, RatFun};
use crate::laurent::{Depth, DigitStream, LaurentTrunc};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfracError {
    #[error("partial quotient {index} has degree < 1")]
    QuotientDegreeTooSmall { index: usize },
    #[error("folding polynomial must have degree >= 1")]
    FoldingDegreeTooSmall,
    #[error("no partial quotient follows convergent {j}")]
    NoNextQuotient { j: usize },
    #[error("error identity violated at convergent {j}: direct {direct:?}, formula {formula:?}")]
    ErrorIdentityMismatch {
        j: usize,
        direct: Magnitude,
        formula: Magnitude,
    },
}

/// Why a truncated expansion stopped emitting quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    /// The source is exact and all of its quotients were emitted.
    Complete,
    /// Remaining quotients are not determined by the known digits.
    PrecisionExhausted,
    /// The requested quotient cap was reached first.
    TermCapReached,
}

/// A continued fraction [a0; a1, ..., an] with deg(ai) >= 1 for i >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFrac {
    a0: Poly,
    quotients: Vec<Poly>,
}

impl CFrac {
    pub fn new(a0: Poly, quotients: Vec<Poly>) -> Result<Self, CfracError> {
        for (i, q) in quotients.iter().enumerate() {
            assert_eq!(q.modulus(), a0.modulus(), "modulus mismatch in CFrac");
            if q.degree().map_or(true, |d| d < 1) {
                return Err(CfracError::QuotientDegreeTooSmall { index: i + 1 });
            }
        }
        Ok(CFrac { a0, quotients })
    }

    pub fn modulus(&self) -> u64 {
        self.a0.modulus()
    }

    pub fn integer_part(&self) -> &Poly {
        &self.a0
    }

    pub fn quotients(&self) -> &[Poly] {
        &self.quotients
    }

    /// Number of partial quotients beyond a0.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// The partial quotient a_i (a_0 is the integer part).
    pub fn quotient(&self, i: usize) -> Option<&Poly> {
        if i == 0 {
            Some(&self.a0)
        } else {
            self.quotients.get(i - 1)
        }
    }

    /// deg Q_j = sum of the first j quotient degrees.
    pub fn denominator_degree(&self, j: usize) -> i64 {
        self.quotients[..j]
            .iter()
            .map(|q| q.degree().expect("deg >= 1") as i64)
            .sum()
    }

    /// True when `self` is [a0; a1..ak] for a prefix of `other`.
    pub fn is_prefix_of(&self, other: &CFrac) -> bool {
        self.a0 == other.a0
            && self.quotients.len() <= other.quotients.len()
            && self.quotients == other.quotients[..self.quotients.len()]
    }

    /// Truncation [a0; a1..aj].
    pub fn truncate(&self, j: usize) -> CFrac {
        CFrac {
            a0: self.a0.clone(),
            quotients: self.quotients[..j].to_vec(),
        }
    }
}

/// Expand a rational function by the Euclidean algorithm. The result is the
/// unique expansion with all partial quotients of degree >= 1, and
/// `cf_eval` inverts it exactly.
pub fn cf_rational(x: &RatFun) -> CFrac {
    let mut num = x.numerator().clone();
    let mut den = x.denominator().clone();
    let (a0, r) = num.divmod(&den).expect("nonzero denominator");
    let mut quotients = Vec::new();
    num = den;
    den = r;
    while !den.is_zero() {
        let (q, r) = num.divmod(&den).expect("nonzero divisor");
        quotients.push(q);
        num = den;
        den = r;
    }
    debug_assert!(quotients
        .iter()
        .all(|q| q.degree().map_or(false, |d| d >= 1)));
    CFrac { a0, quotients }
}

/// Evaluate a finite continued fraction by back-substitution. The degree
/// invariant keeps every intermediate tail nonzero.
pub fn cf_eval(cf: &CFrac) -> RatFun {
    let mut acc: Option<RatFun> = None;
    for q in cf.quotients.iter().rev() {
        let base = RatFun::from_poly(q.clone());
        let tail = match acc {
            None => base,
            Some(prev) => base.add(&prev.inv().expect("tail has positive degree")),
        };
        acc = Some(tail);
    }
    let a0 = RatFun::from_poly(cf.a0.clone());
    match acc {
        None => a0,
        Some(tail) => a0.add(&tail.inv().expect("tail has positive degree")),
    }
}

/// Convergent rows (P_j, Q_j) from the recurrence
/// P_j = a_j P_{j-1} + P_{j-2}, Q_j = a_j Q_{j-1} + Q_{j-2}
/// seeded with P_{-1} = 1, P_0 = a_0, Q_{-1} = 0, Q_0 = 1.
///
/// Rows hold the raw recurrence polynomials, which are automatically
/// coprime; the monic-denominator canonical form appears in
/// [`ConvergentTable::value`].
#[derive(Debug, Clone)]
pub struct ConvergentTable {
    rows: Vec<(Poly, Poly)>,
}

impl ConvergentTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Raw recurrence pair (P_j, Q_j).
    pub fn row(&self, j: usize) -> Option<&(Poly, Poly)> {
        self.rows.get(j)
    }

    /// The convergent P_j/Q_j as a canonical rational function.
    pub fn value(&self, j: usize) -> Option<RatFun> {
        self.rows
            .get(j)
            .map(|(p, q)| RatFun::new(p.clone(), q.clone()).expect("Q_j nonzero"))
    }

    pub fn denominator_degree(&self, j: usize) -> Option<i64> {
        self.rows
            .get(j)
            .map(|(_, q)| q.degree().expect("Q_j nonzero") as i64)
    }
}

/// Compute the convergent table of a continued fraction.
pub fn convergents(cf: &CFrac) -> ConvergentTable {
    let p = cf.modulus();
    let mut rows = Vec::with_capacity(cf.len() + 1);
    let mut p_prev = Poly::one(p);
    let mut p_cur = cf.a0.clone();
    let mut q_prev = Poly::zero(p);
    let mut q_cur = Poly::one(p);
    rows.push((p_cur.clone(), q_cur.clone()));
    for a in &cf.quotients {
        let p_next = a.mul(&p_cur).add(&p_prev);
        let q_next = a.mul(&q_cur).add(&q_prev);
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        rows.push((p_cur.clone(), q_cur.clone()));
    }
    ConvergentTable { rows }
}

/// The error-identity magnitude |x - P_j/Q_j| = p^-(deg a_{j+1} + 2 deg Q_j)
/// read off the continued fraction alone.
pub fn convergent_error_formula(cf: &CFrac, j: usize) -> Result<Magnitude, CfracError> {
    let next = cf.quotient(j + 1).ok_or(CfracError::NoNextQuotient { j })?;
    let d_next = next.degree().expect("deg >= 1") as i64;
    let s_j = cf.denominator_degree(j);
    Ok(Magnitude::Pow(-(d_next + 2 * s_j)))
}

/// Exact approximation error |x - P_j/Q_j| for a rational x, computed by
/// direct subtraction and checked against the error-identity exponent.
pub fn approx_error(x: &RatFun, j: usize) -> Result<Magnitude, CfracError> {
    let cf = cf_rational(x);
    if j + 1 > cf.len() {
        return Err(CfracError::NoNextQuotient { j });
    }
    let table = convergents(&cf);
    let direct = x.sub(&table.value(j).expect("j in range")).abs();
    let formula = convergent_error_formula(&cf, j)?;
    if direct != formula {
        return Err(CfracError::ErrorIdentityMismatch { j, direct, formula });
    }
    Ok(direct)
}

/// The folding transform: from [a0; a1..an] for g/h and a polynomial t with
/// deg t >= 1, build [a0; a1..an, t, -an, ..., -a1], whose value is
/// g/h + (-1)^n / (t h^2) with h the raw recurrence denominator Q_n.
pub fn fold(cf: &CFrac, t: &Poly) -> Result<CFrac, CfracError> {
    assert_eq!(t.modulus(), cf.modulus(), "modulus mismatch in fold");
    if t.degree().map_or(true, |d| d < 1) {
        return Err(CfracError::FoldingDegreeTooSmall);
    }
    let mut quotients = cf.quotients.clone();
    quotients.push(t.clone());
    for a in cf.quotients.iter().rev() {
        quotients.push(a.neg());
    }
    Ok(CFrac {
        a0: cf.a0.clone(),
        quotients,
    })
}

/// Expand truncated Laurent data into a continued fraction, emitting only
/// quotients that the known digits pin down.
///
/// For a non-terminated truncation known to depth D, the quotient ending at
/// accumulated denominator degree s is emitted only while 2s <= D; every
/// emitted quotient is then a true partial quotient of any series agreeing
/// with the truncation. Terminated input is exact and expands fully.
pub fn cf_laurent(x: &LaurentTrunc, max_terms: usize) -> (CFrac, CfStatus) {
    let y = x.window_ratfun();
    let full = cf_rational(&y);
    match x.known_depth() {
        Depth::Infinite => {
            if full.len() <= max_terms {
                (full, CfStatus::Complete)
            } else {
                (full.truncate(max_terms), CfStatus::TermCapReached)
            }
        }
        Depth::Finite(depth) => {
            let mut s = 0i64;
            let mut keep = 0usize;
            for q in &full.quotients {
                let d = q.degree().expect("deg >= 1") as i64;
                if 2 * (s + d) > depth || keep == max_terms {
                    break;
                }
                s += d;
                keep += 1;
            }
            let status = if keep == max_terms && keep < full.len() {
                CfStatus::TermCapReached
            } else {
                CfStatus::PrecisionExhausted
            };
            (full.truncate(keep), status)
        }
    }
}

/// Expand an exact digit stream (a rational source) into its continued
/// fraction, capped at `max_terms` quotients.
pub fn cf_from_stream(stream: &DigitStream, max_terms: usize) -> (CFrac, CfStatus) {
    let full = cf_rational(stream.source());
    if full.len() <= max_terms {
        (full, CfStatus::Complete)
    } else {
        (full.truncate(max_terms), CfStatus::TermCapReached)
    }
}

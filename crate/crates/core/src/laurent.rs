//! Truncated formal Laurent series in F_p((1/X)) with explicit precision,
//! and exact lazy digit expansion of rational functions by long division.
//!
//! Digit index n carries the coefficient of X^(-n); negative indices encode
//! a polynomial part. A truncation knows its digits on a window and tracks
//! whether the tail beyond the window is provably all zero (`terminated`).
//! "All known digits are zero" is *not* the same as being zero: the absolute
//! value of such a series is only bounded above, and [`AbsEstimate`] keeps
//! the two states apart.

use crate::algebra::{AlgebraError, FieldElement, Magnitude, Poly, RatFun};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LaurentError {
    #[error("expansion depth must be >= 1, got {0}")]
    BadDepth(i64),
    #[error("digit {digit} out of range for F_{p}")]
    DigitOutOfRange { digit: u64, p: u64 },
    #[error("cannot invert: no known nonzero digit (unknown-zero or exact-zero series)")]
    InversionWithoutLeadingDigit,
    #[error("series has a nonzero digit at index {0} <= 0, so it is not in the unit ball")]
    NotInUnitBall(i64),
    #[error("alphabet must contain between 2 and p-1 residues of F_{p}, got {size}")]
    BadAlphabetSize { size: usize, p: u64 },
    #[error("alphabet element {digit} is not a residue of F_{p}")]
    AlphabetOutOfRange { digit: u64, p: u64 },
    #[error("digit file: {0}")]
    FileFormat(String),
    #[error("digit file supports single-symbol digits only (p <= 10), got p = {0}")]
    BaseTooLarge(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Precision depth: every digit with index <= the depth is known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Finite(i64),
    Infinite,
}

impl Depth {
    pub fn min(self, other: Depth) -> Depth {
        match (self, other) {
            (Depth::Infinite, d) | (d, Depth::Infinite) => d,
            (Depth::Finite(a), Depth::Finite(b)) => Depth::Finite(a.min(b)),
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Depth::Infinite => true,
            Depth::Finite(d) => d >= bound,
        }
    }
}

/// Exact absolute value when a nonzero digit is known; otherwise an upper
/// bound (`AtMost(p^-b)` means "either zero or at most that small").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsEstimate {
    Exact(Magnitude),
    AtMost(Magnitude),
}

/// Result of a digit-alphabet membership test up to a depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdsCheck {
    Yes,
    No { first_bad: i64 },
    Unknown,
}

/// A truncated Laurent series: digits for indices `start .. start+len`,
/// plus the promise (`terminated`) that everything beyond is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentTrunc {
    p: u64,
    start: i64,
    digits: Vec<u64>,
    terminated: bool,
}

impl LaurentTrunc {
    /// The exact zero series.
    pub fn zero(p: u64) -> Self {
        LaurentTrunc {
            p,
            start: 1,
            digits: Vec::new(),
            terminated: true,
        }
    }

    pub fn from_digits(
        p: u64,
        start: i64,
        digits: Vec<u64>,
        terminated: bool,
    ) -> Result<Self, LaurentError> {
        for &d in &digits {
            if d >= p {
                return Err(LaurentError::DigitOutOfRange { digit: d, p });
            }
        }
        Ok(LaurentTrunc {
            p,
            start,
            digits,
            terminated,
        })
    }

    /// Expand a rational function so that every digit with index <= `depth`
    /// is exact. The polynomial part (indices <= 0) is always included.
    pub fn expand(x: &RatFun, depth: i64) -> Result<Self, LaurentError> {
        if depth < 1 {
            return Err(LaurentError::BadDepth(depth));
        }
        let mut stream = DigitStream::new(x);
        Ok(stream.collect_to_depth(depth))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Index of the last stored digit (start - 1 when the window is empty).
    pub fn stored_end(&self) -> i64 {
        self.start + self.digits.len() as i64 - 1
    }

    pub fn known_depth(&self) -> Depth {
        if self.terminated {
            Depth::Infinite
        } else {
            Depth::Finite(self.stored_end())
        }
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The digit at an index, if known. Digits before `start` are zero by
    /// construction; beyond the stored window they are known (zero) only for
    /// terminated series.
    pub fn digit(&self, index: i64) -> Option<u64> {
        if index < self.start {
            Some(0)
        } else if index <= self.stored_end() {
            Some(self.digits[(index - self.start) as usize])
        } else if self.terminated {
            Some(0)
        } else {
            None
        }
    }

    pub fn digit_slice(&self) -> &[u64] {
        &self.digits
    }

    /// Index of the first known nonzero digit.
    pub fn leading_index(&self) -> Option<i64> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map(|i| self.start + i as i64)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terminated && self.leading_index().is_none()
    }

    /// Exact |x| = p^-N from the first known nonzero digit; exact 0 only for
    /// proven-zero series; otherwise an upper bound p^-(D+1).
    pub fn abs(&self) -> AbsEstimate {
        match self.leading_index() {
            Some(n) => AbsEstimate::Exact(Magnitude::Pow(-n)),
            None if self.terminated => AbsEstimate::Exact(Magnitude::Zero),
            None => AbsEstimate::AtMost(Magnitude::Pow(-(self.stored_end() + 1))),
        }
    }

    fn assert_same_p(&self, rhs: &LaurentTrunc) {
        assert_eq!(
            self.p, rhs.p,
            "modulus mismatch in Laurent arithmetic: {} vs {}",
            self.p, rhs.p
        );
    }

    /// Sum; the result is exact to min of the operand depths.
    pub fn add(&self, rhs: &LaurentTrunc) -> LaurentTrunc {
        self.add_signed(rhs, false)
    }

    /// Difference; same precision rule as `add`.
    pub fn sub(&self, rhs: &LaurentTrunc) -> LaurentTrunc {
        self.add_signed(rhs, true)
    }

    fn add_signed(&self, rhs: &LaurentTrunc, negate_rhs: bool) -> LaurentTrunc {
        self.assert_same_p(rhs);
        let p = self.p;
        let start = self.start.min(rhs.start);
        match self.known_depth().min(rhs.known_depth()) {
            Depth::Infinite => {
                let end = self.stored_end().max(rhs.stored_end());
                let digits = (start..=end)
                    .map(|i| {
                        let a = self.digit(i).unwrap_or(0);
                        let b = rhs.digit(i).unwrap_or(0);
                        let b = if negate_rhs && b != 0 { p - b } else { b };
                        (a + b) % p
                    })
                    .collect();
                LaurentTrunc {
                    p,
                    start,
                    digits,
                    terminated: true,
                }
            }
            Depth::Finite(end) => {
                let digits = (start..=end)
                    .map(|i| {
                        let a = self.digit(i).expect("within depth");
                        let b = rhs.digit(i).expect("within depth");
                        let b = if negate_rhs && b != 0 { p - b } else { b };
                        (a + b) % p
                    })
                    .collect();
                LaurentTrunc {
                    p,
                    start,
                    digits,
                    terminated: false,
                }
            }
        }
    }

    /// Lower bound on the valuation index: the first known nonzero digit, or
    /// one past the window when all known digits vanish.
    fn valuation_lower_bound(&self) -> i64 {
        self.leading_index()
            .unwrap_or_else(|| self.stored_end() + 1)
    }

    /// Product. Precision shifts by the operands' leading indices: digits up
    /// to min(D_a + N_b, D_b + N_a) are determined, with terminated operands
    /// imposing no cutoff.
    pub fn mul(&self, rhs: &LaurentTrunc) -> LaurentTrunc {
        self.assert_same_p(rhs);
        let p = self.p;
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return LaurentTrunc::zero(p);
        }
        let na = self.valuation_lower_bound();
        let nb = rhs.valuation_lower_bound();
        let start = na + nb;
        let end = match (self.known_depth(), rhs.known_depth()) {
            (Depth::Infinite, Depth::Infinite) => self.stored_end() + rhs.stored_end(),
            (Depth::Infinite, Depth::Finite(db)) => db + na,
            (Depth::Finite(da), Depth::Infinite) => da + nb,
            (Depth::Finite(da), Depth::Finite(db)) => (da + nb).min(db + na),
        };
        let terminated = self.terminated && rhs.terminated;
        if end < start {
            return LaurentTrunc {
                p,
                start,
                digits: Vec::new(),
                terminated,
            };
        }
        let mut digits = vec![0u64; (end - start + 1) as usize];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let ia = self.start + i as i64;
            for (j, &b) in rhs.digits.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let idx = ia + rhs.start + j as i64;
                if idx < start || idx > end {
                    continue;
                }
                let slot = &mut digits[(idx - start) as usize];
                *slot = (*slot + a * b) % p;
            }
        }
        LaurentTrunc {
            p,
            start,
            digits,
            terminated,
        }
    }

    /// Reciprocal. Needs a known nonzero leading digit; the result is exact
    /// to depth D - 2N where N is the valuation index of the input.
    pub fn inv(&self) -> Result<LaurentTrunc, LaurentError> {
        let n = self
            .leading_index()
            .ok_or(LaurentError::InversionWithoutLeadingDigit)?;
        let p = self.p;
        if self.terminated {
            // the input is an exact finite sum: invert it as a rational function
            let x = self.to_ratfun().expect("terminated series is rational");
            let inv = x.inv().expect("nonzero by leading digit");
            let depth = (self.stored_end() - 2 * n).max(1);
            let mut stream = DigitStream::new(&inv);
            return Ok(stream.collect_to_depth(depth));
        }
        let d = self.stored_end();
        let out_start = -n;
        let out_end = d - 2 * n;
        let lead = self.digit(n).unwrap();
        let lead_inv = FieldElement::new(lead, p)
            .expect("digit in range")
            .inv()
            .expect("nonzero")
            .value();
        // b_j solves sum_{k<=j} a_{N+k} b_{j-k} = [j == 0], with output digit
        // index out_start + j
        let len = (out_end - out_start + 1) as usize;
        let mut b = vec![0u64; len];
        b[0] = lead_inv;
        for j in 1..len {
            let mut acc = 0u64;
            for k in 1..=j {
                let a = self.digit(n + k as i64).unwrap_or(0);
                if a != 0 && b[j - k] != 0 {
                    acc = (acc + a * b[j - k]) % p;
                }
            }
            if acc != 0 {
                b[j] = (lead_inv * (p - acc)) % p;
            }
        }
        Ok(LaurentTrunc {
            p,
            start: out_start,
            digits: b,
            terminated: false,
        })
    }

    /// Exact rational value of a terminated series. Built over the common
    /// denominator X^E in one pass, so only a single reduction happens.
    pub fn to_ratfun(&self) -> Option<RatFun> {
        if !self.terminated {
            return None;
        }
        let p = self.p;
        if self.digits.is_empty() {
            return Some(RatFun::zero(p));
        }
        let end = self.stored_end();
        let shift = end.max(0);
        // digit d at index i contributes d X^(shift - i) to the numerator
        let mut coeffs = vec![0u64; (shift - self.start.min(0)) as usize + 1];
        for (k, &d) in self.digits.iter().enumerate() {
            let idx = self.start + k as i64;
            coeffs[(shift - idx) as usize] = d;
        }
        let num = Poly::new(p, &coeffs).expect("digits in range");
        let den = Poly::monomial(p, 1, shift as usize);
        Some(RatFun::new(num, den).expect("monomial denominator"))
    }

    /// The rational value of the stored window with a zero tail, regardless
    /// of termination. For non-terminated series this is the canonical
    /// representative within p^-(D+1) of the true value.
    pub fn window_ratfun(&self) -> RatFun {
        LaurentTrunc {
            terminated: true,
            ..self.clone()
        }
        .to_ratfun()
        .expect("terminated clone")
    }

    /// Test digits 1..=depth against an alphabet A of F_p residues.
    pub fn in_mds(&self, alphabet: &[u64], depth: i64) -> Result<MdsCheck, LaurentError> {
        let members = validate_alphabet(self.p, alphabet)?;
        if self.start <= 0 {
            for i in self.start..=0.min(self.stored_end()) {
                if self.digit(i) != Some(0) {
                    return Err(LaurentError::NotInUnitBall(i));
                }
            }
        }
        for i in 1..=depth {
            match self.digit(i) {
                Some(d) if members[d as usize] => continue,
                Some(_) => return Ok(MdsCheck::No { first_bad: i }),
                None => return Ok(MdsCheck::Unknown),
            }
        }
        Ok(MdsCheck::Yes)
    }
}

pub(crate) fn validate_alphabet(p: u64, alphabet: &[u64]) -> Result<Vec<bool>, LaurentError> {
    let mut members = vec![false; p as usize];
    let mut size = 0usize;
    for &d in alphabet {
        if d >= p {
            return Err(LaurentError::AlphabetOutOfRange { digit: d, p });
        }
        if !members[d as usize] {
            members[d as usize] = true;
            size += 1;
        }
    }
    if size < 2 || size as u64 >= p {
        return Err(LaurentError::BadAlphabetSize { size, p });
    }
    Ok(members)
}

/// Lazy exact digit expansion of a rational function.
///
/// Stateful and single-owner; cloning forks the long-division state, so the
/// fork and the original advance independently.
#[derive(Debug, Clone)]
pub struct DigitStream {
    src: RatFun,
    poly_part: Poly,
    rem: Poly,
    den: Poly,
    next_index: i64,
}

impl DigitStream {
    pub fn new(x: &RatFun) -> Self {
        let (q, frac) = x.split_polynomial_part();
        let next_index = match q.degree() {
            Some(d) => -(d as i64),
            None => 1,
        };
        DigitStream {
            src: x.clone(),
            poly_part: q,
            rem: frac.numerator().clone(),
            den: frac.denominator().clone(),
            next_index,
        }
    }

    pub fn source(&self) -> &RatFun {
        &self.src
    }

    /// True once every remaining digit is zero.
    pub fn remainder_is_zero(&self) -> bool {
        self.rem.is_zero()
    }

    pub fn next_index(&self) -> i64 {
        self.next_index
    }

    /// Produce the next digit in ascending index order.
    pub fn next_digit(&mut self) -> (i64, u64) {
        let idx = self.next_index;
        self.next_index += 1;
        if idx <= 0 {
            return (idx, self.poly_part.coeff((-idx) as usize));
        }
        if self.rem.is_zero() {
            return (idx, 0);
        }
        // digit = constant quotient of (rem * X) / den
        let shifted = self.rem.shift(1);
        let (q, r) = shifted.divmod(&self.den).expect("nonzero denominator");
        debug_assert!(q.degree().map_or(true, |d| d == 0));
        self.rem = r;
        (idx, q.coeff(0))
    }

    /// Membership of the stream's source in MDS(A) up to a depth, decided on
    /// a fresh expansion so the stream position is irrelevant.
    pub fn in_mds(&self, alphabet: &[u64], depth: i64) -> Result<MdsCheck, LaurentError> {
        let mut fresh = DigitStream::new(&self.src);
        fresh.collect_to_depth(depth).in_mds(alphabet, depth)
    }

    /// Pull digits from the current position through `depth` into a snapshot.
    pub fn collect_to_depth(&mut self, depth: i64) -> LaurentTrunc {
        let start = self.next_index;
        let mut digits = Vec::new();
        while self.next_index <= depth {
            let (_, d) = self.next_digit();
            digits.push(d);
        }
        LaurentTrunc {
            p: self.src.modulus(),
            start,
            digits,
            terminated: self.rem.is_zero(),
        }
    }
}

/// Serialize a truncation in the digit-file format: a header line
/// `p=<int> alphabet=<comma list> start=<int>` followed by one ASCII digit
/// symbol per coefficient.
pub fn write_digit_file<W: Write>(
    out: &mut W,
    trunc: &LaurentTrunc,
    alphabet: &[u64],
) -> Result<(), LaurentError> {
    if trunc.p > 10 {
        return Err(LaurentError::BaseTooLarge(trunc.p));
    }
    validate_alphabet(trunc.p, alphabet)?;
    let alpha = alphabet
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",");
    writeln!(
        out,
        "p={} alphabet={} start={}",
        trunc.p, alpha, trunc.start
    )?;
    let line: String = trunc
        .digits
        .iter()
        .map(|&d| char::from(b'0' + d as u8))
        .collect();
    writeln!(out, "{line}")?;
    Ok(())
}

/// Parse the digit-file format back into a (non-terminated) truncation and
/// its alphabet.
pub fn read_digit_file<R: BufRead>(input: R) -> Result<(LaurentTrunc, Vec<u64>), LaurentError> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| LaurentError::FileFormat("missing header line".into()))??;
    let mut p = None;
    let mut alphabet = None;
    let mut start = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| LaurentError::FileFormat(format!("bad header field `{field}`")))?;
        match key {
            "p" => {
                p = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| LaurentError::FileFormat(format!("bad p value `{value}`")))?,
                )
            }
            "alphabet" => {
                let parsed: Result<Vec<u64>, _> =
                    value.split(',').map(|s| s.parse::<u64>()).collect();
                alphabet = Some(
                    parsed
                        .map_err(|_| LaurentError::FileFormat(format!("bad alphabet `{value}`")))?,
                )
            }
            "start" => {
                start =
                    Some(value.parse::<i64>().map_err(|_| {
                        LaurentError::FileFormat(format!("bad start value `{value}`"))
                    })?)
            }
            other => {
                return Err(LaurentError::FileFormat(format!(
                    "unknown header field `{other}`"
                )))
            }
        }
    }
    let p = p.ok_or_else(|| LaurentError::FileFormat("header missing p".into()))?;
    let alphabet =
        alphabet.ok_or_else(|| LaurentError::FileFormat("header missing alphabet".into()))?;
    let start = start.ok_or_else(|| LaurentError::FileFormat("header missing start".into()))?;
    validate_alphabet(p, &alphabet)?;
    let mut digits = Vec::new();
    for line in lines {
        let line = line?;
        for ch in line.trim().chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| LaurentError::FileFormat(format!("bad digit symbol `{ch}`")))?
                as u64;
            if d >= p {
                return Err(LaurentError::DigitOutOfRange { digit: d, p });
            }
            digits.push(d);
        }
    }
    let trunc = LaurentTrunc::from_digits(p, start, digits, false)?;
    Ok((trunc, alphabet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    fn ratfun(p: u64, num: &[u64], den: &[u64]) -> RatFun {
        RatFun::new(Poly::new(p, num).unwrap(), Poly::new(p, den).unwrap()).unwrap()
    }

    #[test]
    fn expand_single_term() {
        // 2/X to depth 4: digits (2,0,0,0), exactly representable
        let x = ratfun(3, &[2], &[0, 1]);
        let t = LaurentTrunc::expand(&x, 4).unwrap();
        assert_eq!(t.start(), 1);
        assert_eq!(t.digit_slice(), &[2, 0, 0, 0]);
        assert!(t.is_terminated());
    }

    #[test]
    fn expand_geometric() {
        // 1/(X+1) = X^-1 - X^-2 + X^-3 - ... with -1 = 2
        let x = ratfun(3, &[1], &[1, 1]);
        let t = LaurentTrunc::expand(&x, 4).unwrap();
        assert_eq!(t.digit_slice(), &[1, 2, 1, 2]);
        assert!(!t.is_terminated());
    }

    #[test]
    fn expand_two_terms() {
        // -1/X - 1/X^3 = (2X^2 + 2)/X^3: digits (2,0,2,0)
        let x = ratfun(3, &[2, 0, 2], &[0, 0, 0, 1]);
        let t = LaurentTrunc::expand(&x, 4).unwrap();
        assert_eq!(t.digit_slice(), &[2, 0, 2, 0]);
    }

    #[test]
    fn expand_with_polynomial_part() {
        // (X^2 + 1)/X = X + X^-1: digits at indices -1 and 1
        let x = ratfun(3, &[1, 0, 1], &[0, 1]);
        let t = LaurentTrunc::expand(&x, 2).unwrap();
        assert_eq!(t.start(), -1);
        assert_eq!(t.digit_slice(), &[1, 0, 1, 0]);
        assert!(t.is_terminated());
        assert_eq!(t.to_ratfun().unwrap(), x);
    }

    #[test]
    fn abs_cases() {
        let t = LaurentTrunc::from_digits(3, 1, vec![2, 0, 0, 0], false).unwrap();
        assert_eq!(t.abs(), AbsEstimate::Exact(Magnitude::Pow(-1)));

        let z = LaurentTrunc::expand(&RatFun::zero(3), 5).unwrap();
        assert_eq!(z.abs(), AbsEstimate::Exact(Magnitude::Zero));
        assert!(z.is_exact_zero());

        let u = LaurentTrunc::from_digits(3, 1, vec![0; 5], false).unwrap();
        assert_eq!(u.abs(), AbsEstimate::AtMost(Magnitude::Pow(-6)));
    }

    #[test]
    fn add_identity_and_depth() {
        let a = LaurentTrunc::from_digits(3, 1, vec![1, 2, 1], false).unwrap();
        let z = LaurentTrunc::zero(3);
        let s = a.add(&z);
        assert_eq!(s.digit_slice(), a.digit_slice());
        assert_eq!(s.known_depth(), a.known_depth());

        // depth of a sum is the min of the operand depths
        let b = LaurentTrunc::from_digits(3, 1, vec![2, 2], false).unwrap();
        let s = a.add(&b);
        assert_eq!(s.known_depth(), Depth::Finite(2));
        assert_eq!(s.digit_slice(), &[0, 1]);
    }

    #[test]
    fn mul_single_terms() {
        // (2 X^-1) * (2 X^-1) = X^-2 since 2*2 = 1
        let a = LaurentTrunc::from_digits(3, 1, vec![2], true).unwrap();
        let s = a.mul(&a);
        assert_eq!(s.start(), 2);
        assert_eq!(s.digit_slice(), &[1]);
        assert!(s.is_terminated());
    }

    #[test]
    fn mul_precision_shift() {
        // known to depth 4 with valuation 1 on both sides: product exact to 5
        let x = ratfun(3, &[1], &[1, 1]);
        let t = LaurentTrunc::expand(&x, 4).unwrap();
        let sq = t.mul(&t);
        assert_eq!(sq.known_depth(), Depth::Finite(5));
        assert_eq!(sq.start(), 2);
        let exact = LaurentTrunc::expand(&x.mul(&x), 5).unwrap();
        for i in 1..=5 {
            assert_eq!(sq.digit(i), exact.digit(i), "digit {i}");
        }
    }

    #[test]
    fn inv_recovers_polynomial() {
        // inv of the depth-6 expansion of 1/(X+1) is X+1 with exact poly part
        let x = ratfun(3, &[1], &[1, 1]);
        let t = LaurentTrunc::expand(&x, 6).unwrap();
        let inv = t.inv().unwrap();
        assert_eq!(inv.known_depth(), Depth::Finite(4));
        let expected = LaurentTrunc::expand(&x.inv().unwrap(), 4).unwrap();
        assert_eq!(inv.start(), expected.start());
        for i in inv.start()..=4 {
            assert_eq!(inv.digit(i), expected.digit(i), "digit {i}");
        }
    }

    #[test]
    fn inv_rejects_unknown_and_zero() {
        let u = LaurentTrunc::from_digits(3, 1, vec![0; 5], false).unwrap();
        assert!(matches!(
            u.inv(),
            Err(LaurentError::InversionWithoutLeadingDigit)
        ));
        assert!(matches!(
            LaurentTrunc::zero(3).inv(),
            Err(LaurentError::InversionWithoutLeadingDigit)
        ));
    }

    #[test]
    fn in_mds_cases() {
        let a = [0u64, 2];
        let t = LaurentTrunc::from_digits(3, 1, vec![2, 0, 2, 0], false).unwrap();
        assert_eq!(t.in_mds(&a, 4).unwrap(), MdsCheck::Yes);

        let x = ratfun(3, &[1], &[1, 1]);
        let t = LaurentTrunc::expand(&x, 4).unwrap();
        assert_eq!(t.in_mds(&a, 4).unwrap(), MdsCheck::No { first_bad: 1 });

        let t = LaurentTrunc::from_digits(3, 1, vec![2, 0], false).unwrap();
        assert_eq!(t.in_mds(&a, 5).unwrap(), MdsCheck::Unknown);
    }

    #[test]
    fn in_mds_validation() {
        let t = LaurentTrunc::from_digits(3, 1, vec![2, 0], false).unwrap();
        assert!(matches!(
            t.in_mds(&[0, 5], 2),
            Err(LaurentError::AlphabetOutOfRange { digit: 5, p: 3 })
        ));
        assert!(matches!(
            t.in_mds(&[0], 2),
            Err(LaurentError::BadAlphabetSize { size: 1, p: 3 })
        ));
        assert!(matches!(
            t.in_mds(&[0, 1, 2], 2),
            Err(LaurentError::BadAlphabetSize { size: 3, p: 3 })
        ));
        let bad = LaurentTrunc::from_digits(3, -1, vec![1, 0, 2], false).unwrap();
        assert!(matches!(
            bad.in_mds(&[0, 2], 2),
            Err(LaurentError::NotInUnitBall(-1))
        ));
    }

    #[test]
    fn stream_membership() {
        // 1/(X+1) has digit 1 at index 1, outside {0, 2}
        let x = ratfun(3, &[1], &[1, 1]);
        let s = DigitStream::new(&x);
        assert_eq!(s.in_mds(&[0, 2], 4).unwrap(), MdsCheck::No { first_bad: 1 });
        // -1/X - 1/X^3 stays inside {0, 2} at any depth
        let x = ratfun(3, &[2, 0, 2], &[0, 0, 0, 1]);
        let s = DigitStream::new(&x);
        assert_eq!(s.in_mds(&[0, 2], 40).unwrap(), MdsCheck::Yes);
    }

    #[test]
    fn stream_fork_is_independent() {
        let x = ratfun(3, &[1], &[1, 1]);
        let mut s = DigitStream::new(&x);
        let _ = s.next_digit();
        let mut fork = s.clone();
        assert_eq!(s.next_digit(), fork.next_digit());
        let _ = s.next_digit();
        // fork did not advance with the original
        assert_eq!(fork.next_index(), 3);
        assert_eq!(s.next_index(), 4);
    }

    #[test]
    fn digit_file_round_trip() {
        let t = LaurentTrunc::from_digits(3, 1, vec![2, 0, 2, 0, 0, 2, 2], false).unwrap();
        let mut buf = Vec::new();
        write_digit_file(&mut buf, &t, &[0, 2]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("p=3 alphabet=0,2 start=1\n"));
        assert!(text.contains("2020022"));
        let (back, alphabet) = read_digit_file(&buf[..]).unwrap();
        assert_eq!(back.digit_slice(), t.digit_slice());
        assert_eq!(back.start(), 1);
        assert_eq!(alphabet, vec![0, 2]);
    }
}

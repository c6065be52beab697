//! Exact arithmetic over F_p, the polynomial ring F_p[X], and reduced
//! rational functions, together with the degree absolute value |P| = p^deg P.
//!
//! The modulus p is a runtime parameter carried by every value. Mixing
//! values over different moduli is a hard error: the checked [`FieldElement`]
//! operations report it, the polynomial operators panic on it.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("inverse of zero in F_{0}")]
    InverseOfZero(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
}

/// Trial-division primality check; moduli are small runtime parameters.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<(), AlgebraError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(AlgebraError::NotPrime(p))
    }
}

/// An exact magnitude: either 0 or an integer power of the base p.
///
/// The base itself is not stored; exponents are always relative to the p of
/// the values the magnitude came from. `Zero < Pow(e) < Pow(e')` for e < e'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    Pow(i64),
}

impl Magnitude {
    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Zero)
    }

    /// The exponent e with |x| = p^e, or `None` for the zero magnitude.
    pub fn exponent(&self) -> Option<i64> {
        match self {
            Magnitude::Zero => None,
            Magnitude::Pow(e) => Some(*e),
        }
    }

    /// |x·y| = |x|·|y|: exponents add, zero absorbs.
    pub fn mul(self, rhs: Magnitude) -> Magnitude {
        match (self, rhs) {
            (Magnitude::Pow(a), Magnitude::Pow(b)) => Magnitude::Pow(a + b),
            _ => Magnitude::Zero,
        }
    }

    pub fn to_f64(self, p: u64) -> f64 {
        match self {
            Magnitude::Zero => 0.0,
            Magnitude::Pow(e) => (p as f64).powi(e as i32),
        }
    }

    /// Renders as `p^e` (or `0`) with an explicit base.
    pub fn display(self, p: u64) -> String {
        match self {
            Magnitude::Zero => "0".to_string(),
            Magnitude::Pow(e) => format!("{p}^{e}"),
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Magnitude::*;
        match (self, other) {
            (Zero, Zero) => std::cmp::Ordering::Equal,
            (Zero, Pow(_)) => std::cmp::Ordering::Less,
            (Pow(_), Zero) => std::cmp::Ordering::Greater,
            (Pow(a), Pow(b)) => a.cmp(b),
        }
    }
}

/// A residue in F_p, kept in canonical range [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    /// Construct the residue of `value` mod p. Errors when p is not prime.
    pub fn new(value: u64, p: u64) -> Result<Self, AlgebraError> {
        check_prime(p)?;
        Ok(FieldElement {
            value: value % p,
            p,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, rhs: &FieldElement) -> Result<(), AlgebraError> {
        if self.p == rhs.p {
            Ok(())
        } else {
            Err(AlgebraError::ModulusMismatch(self.p, rhs.p))
        }
    }

    pub fn add(&self, rhs: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.same_modulus(rhs)?;
        Ok(FieldElement {
            value: (self.value + rhs.value) % self.p,
            p: self.p,
        })
    }

    pub fn mul(&self, rhs: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.same_modulus(rhs)?;
        Ok(FieldElement {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            value: if self.value == 0 {
                0
            } else {
                self.p - self.value
            },
            p: self.p,
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElement, AlgebraError> {
        if self.value == 0 {
            return Err(AlgebraError::InverseOfZero(self.p));
        }
        Ok(FieldElement {
            value: inv_mod(self.value, self.p),
            p: self.p,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse by Fermat: a^(p-2) mod p.
fn inv_mod(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// A dense polynomial over F_p with coefficients in ascending power of X.
///
/// Canonical form: the coefficient vector is empty for the zero polynomial
/// and otherwise ends with a nonzero leading coefficient. `degree()` returns
/// `None` for zero — there is no integer degree for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Build from coefficients (ascending power); values are reduced mod p.
    pub fn new(p: u64, coeffs: &[u64]) -> Result<Self, AlgebraError> {
        check_prime(p)?;
        let mut c: Vec<u64> = coeffs.iter().map(|&v| v % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(Poly { p, coeffs: c })
    }

    /// Internal constructor for coefficients already in range.
    fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Poly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        Poly { p, coeffs: vec![1] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Poly::from_reduced(p, vec![c % p])
    }

    /// The monomial c·X^k.
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let c = c % p;
        if c == 0 {
            return Poly::zero(p);
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly { p, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of X^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Coefficient of X^k as a field element.
    pub fn coeff_elem(&self, k: usize) -> FieldElement {
        FieldElement {
            value: self.coeff(k),
            p: self.p,
        }
    }

    pub fn coeff_vec(&self) -> Vec<u64> {
        self.coeffs.clone()
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(1)
    }

    /// |P| = p^deg P, and |0| = 0, as an exact exponent.
    pub fn abs(&self) -> Magnitude {
        match self.degree() {
            None => Magnitude::Zero,
            Some(d) => Magnitude::Pow(d as i64),
        }
    }

    fn assert_same_p(&self, rhs: &Poly) {
        assert_eq!(
            self.p, rhs.p,
            "modulus mismatch in polynomial arithmetic: {} vs {}",
            self.p, rhs.p
        );
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        self.assert_same_p(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push((self.coeff(k) + rhs.coeff(k)) % self.p);
        }
        Poly::from_reduced(self.p, out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        let out = self
            .coeffs
            .iter()
            .map(|&c| if c == 0 { 0 } else { self.p - c })
            .collect();
        Poly::from_reduced(self.p, out)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        self.assert_same_p(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Poly::from_reduced(self.p, out)
    }

    /// Scale by a constant.
    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.p;
        let out = self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        Poly::from_reduced(self.p, out)
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero(self.p);
        }
        let mut out = vec![0u64; k];
        out.extend_from_slice(&self.coeffs);
        Poly {
            p: self.p,
            coeffs: out,
        }
    }

    /// Euclidean division: self = q·rhs + r with deg r < deg rhs.
    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        self.assert_same_p(rhs);
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let db = rhs.coeffs.len() - 1;
        if self.is_zero() || self.coeffs.len() - 1 < db {
            return Ok((Poly::zero(self.p), self.clone()));
        }
        let p = self.p;
        let inv_lead = inv_mod(*rhs.coeffs.last().unwrap(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db {
            let lead = *rem.last().unwrap();
            if lead != 0 {
                let shift = rem.len() - 1 - db;
                let factor = mul_mod(lead, inv_lead, p);
                quot[shift] = factor;
                for (j, &bc) in rhs.coeffs.iter().enumerate() {
                    if bc != 0 {
                        let sub = mul_mod(factor, bc, p);
                        let slot = &mut rem[shift + j];
                        *slot = (*slot + p - sub) % p;
                    }
                }
            }
            rem.pop();
            if rem.len() <= db {
                break;
            }
        }
        Ok((Poly::from_reduced(p, quot), Poly::from_reduced(p, rem)))
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        self.assert_same_p(rhs);
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            None => a,
            Some(1) => a,
            Some(lc) => a.scale(inv_mod(lc, a.p)),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{k}")?,
                (_, _) => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}

/// A rational function in canonical form: monic denominator, gcd(num, den) = 1.
///
/// Equality is structural equality of the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Reduce num/den to canonical form. Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        num.assert_same_p(&den);
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: Poly::zero(den.p),
                den: Poly::one(den.p),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g).expect("gcd nonzero");
        let (den, _) = den.divmod(&g).expect("gcd nonzero");
        let lead = den.leading_coeff().expect("nonzero denominator");
        let (num, den) = if lead == 1 {
            (num, den)
        } else {
            let il = inv_mod(lead, den.p);
            (num.scale(il), den.scale(il))
        };
        Ok(RatFun { num, den })
    }

    pub fn from_poly(poly: Poly) -> Self {
        let p = poly.p;
        RatFun {
            num: poly,
            den: Poly::one(p),
        }
    }

    pub fn zero(p: u64) -> Self {
        RatFun {
            num: Poly::zero(p),
            den: Poly::one(p),
        }
    }

    pub fn one(p: u64) -> Self {
        RatFun {
            num: Poly::one(p),
            den: Poly::one(p),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn modulus(&self) -> u64 {
        self.num.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// |g/h| = p^(deg g − deg h), and |0| = 0.
    pub fn abs(&self) -> Magnitude {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Magnitude::Zero,
            (Some(dn), Some(dd)) => Magnitude::Pow(dn as i64 - dd as i64),
            (Some(_), None) => unreachable!("denominator is never zero"),
        }
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFun::new(num, den).expect("denominators nonzero")
    }

    pub fn sub(&self, rhs: &RatFun) -> RatFun {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("denominators nonzero")
    }

    /// Reciprocal; errors when self is zero.
    pub fn inv(&self) -> Result<RatFun, AlgebraError> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFun) -> Result<RatFun, AlgebraError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Polynomial part and fractional remainder: self = q + r/den, deg r < deg den.
    pub fn split_polynomial_part(&self) -> (Poly, RatFun) {
        let (q, r) = self.num.divmod(&self.den).expect("nonzero denominator");
        (
            q,
            RatFun::new(r, self.den.clone()).expect("nonzero denominator"),
        )
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, coeffs: &[u64]) -> Poly {
        Poly::new(p, coeffs).unwrap()
    }

    #[test]
    fn field_ops_mod_3() {
        let two = FieldElement::new(2, 3).unwrap();
        let one = FieldElement::new(1, 3).unwrap();
        assert_eq!(two.add(&two).unwrap().value(), 1);
        assert_eq!(two.inv().unwrap().value(), 2);
        assert_eq!(one.neg().value(), 2);
        assert_eq!(two.mul(&two).unwrap().value(), 1);
    }

    #[test]
    fn field_errors() {
        let a = FieldElement::new(1, 3).unwrap();
        let b = FieldElement::new(1, 5).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), AlgebraError::ModulusMismatch(3, 5));
        let z = FieldElement::new(0, 3).unwrap();
        assert_eq!(z.inv().unwrap_err(), AlgebraError::InverseOfZero(3));
        assert_eq!(
            FieldElement::new(1, 4).unwrap_err(),
            AlgebraError::NotPrime(4)
        );
    }

    #[test]
    fn poly_canonical_form() {
        let z = poly(3, &[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        let q = poly(3, &[1, 0, 1, 0]);
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.coeff_vec(), vec![1, 0, 1]);
        // values reduced mod p
        assert_eq!(poly(3, &[4, 5]).coeff_vec(), vec![1, 2]);
    }

    #[test]
    fn poly_divmod_examples() {
        // (X^2 + 1) / X = (X, 1)
        let a = poly(3, &[1, 0, 1]);
        let x = poly(3, &[0, 1]);
        let (q, r) = a.divmod(&x).unwrap();
        assert_eq!(q, poly(3, &[0, 1]));
        assert_eq!(r, poly(3, &[1]));

        // 0 / (X + 1) = (0, 0)
        let (q, r) = Poly::zero(3).divmod(&poly(3, &[1, 1])).unwrap();
        assert!(q.is_zero() && r.is_zero());

        // (X^3 + X) / (X^2 + 1) = (X, 0); verified by multiplying back
        let a = poly(3, &[0, 1, 0, 1]);
        let b = poly(3, &[1, 0, 1]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(q, poly(3, &[0, 1]));
        assert!(r.is_zero());
        assert_eq!(q.mul(&b).add(&r), a);

        assert_eq!(
            a.divmod(&Poly::zero(3)).unwrap_err(),
            AlgebraError::DivisionByZero
        );
    }

    #[test]
    fn poly_abs_examples() {
        assert_eq!(Poly::zero(3).abs(), Magnitude::Zero);
        assert_eq!(poly(3, &[1, 0, 1]).abs(), Magnitude::Pow(2));
        assert_eq!(poly(3, &[2]).abs(), Magnitude::Pow(0));
    }

    #[test]
    fn magnitude_ordering() {
        assert!(Magnitude::Zero < Magnitude::Pow(-100));
        assert!(Magnitude::Pow(-2) < Magnitude::Pow(1));
        assert_eq!(
            Magnitude::Pow(2).mul(Magnitude::Pow(-5)),
            Magnitude::Pow(-3)
        );
        assert_eq!(Magnitude::Pow(2).mul(Magnitude::Zero), Magnitude::Zero);
    }

    #[test]
    fn ratfun_reduction() {
        // (X^2 + X) / X = (X + 1)/1
        let r = RatFun::new(poly(3, &[0, 1, 1]), poly(3, &[0, 1])).unwrap();
        assert_eq!(r.numerator(), &poly(3, &[1, 1]));
        assert_eq!(r.denominator(), &Poly::one(3));

        // (2X)/2 = X/1 with monic denominator
        let r = RatFun::new(poly(3, &[0, 2]), poly(3, &[2])).unwrap();
        assert_eq!(r.numerator(), &poly(3, &[0, 1]));
        assert_eq!(r.denominator(), &Poly::one(3));

        // (-1)/X = 2/X with abs 3^-1
        let r = RatFun::new(poly(3, &[2]), poly(3, &[0, 1])).unwrap();
        assert_eq!(r.numerator(), &poly(3, &[2]));
        assert_eq!(r.denominator(), &poly(3, &[0, 1]));
        assert_eq!(r.abs(), Magnitude::Pow(-1));

        assert_eq!(
            RatFun::new(poly(3, &[1]), Poly::zero(3)).unwrap_err(),
            AlgebraError::ZeroDenominator
        );
    }

    #[test]
    fn ratfun_normalisation_is_idempotent() {
        let r = RatFun::new(poly(3, &[1, 2, 1]), poly(3, &[0, 0, 2, 1])).unwrap();
        let again = RatFun::new(r.numerator().clone(), r.denominator().clone()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn ratfun_arithmetic() {
        let a = RatFun::new(poly(3, &[2]), poly(3, &[0, 1])).unwrap(); // 2/X
        let b = RatFun::new(poly(3, &[2]), poly(3, &[0, 0, 0, 1])).unwrap(); // 2/X^3
        let s = a.add(&b); // (2X^2 + 2)/X^3
        assert_eq!(s.numerator(), &poly(3, &[2, 0, 2]));
        assert_eq!(s.denominator(), &poly(3, &[0, 0, 0, 1]));
        assert_eq!(s.sub(&b), a);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFun::one(3));
        assert!(RatFun::zero(3).inv().is_err());
    }

    #[test]
    fn absolute_value_is_multiplicative_and_ultrametric() {
        // exhaustive over all polynomials of degree <= 2 for p = 3
        let mut all = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    all.push(poly(3, &[c0, c1, c2]));
                }
            }
        }
        for a in &all {
            for b in &all {
                assert_eq!(a.mul(b).abs(), a.abs().mul(b.abs()));
                let s = a.add(b);
                let m = a.abs().max(b.abs());
                assert!(s.abs() <= m);
                if a.abs() != b.abs() {
                    assert_eq!(s.abs(), m);
                }
            }
        }
    }
}

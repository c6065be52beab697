//! Missing-digit sets MDS(A) inside the unit ball of F_p((1/X)), as exact
//! cylinder-set algebra carrying the Hausdorff-gamma measure, together with
//! the digit-restricted polynomial families used as approximation centers.
//!
//! A depth-l cylinder prescribes the first l digits and is a ball of radius
//! p^-l. An admissible cylinder (all digits in the alphabet A) meets MDS(A)
//! in a piece of measure (#A)^-l; cylinders touching a forbidden digit miss
//! the set entirely. Measures are exact rationals with (#A)-power
//! denominators — the dimension ratio gamma = log #A / log p never enters a
//! computation as a float.

use crate::algebra::Poly;
use crate::laurent::validate_alphabet;
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MdsError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("alphabet must contain between 2 and p-1 residues of F_{p}, got {size}")]
    BadAlphabetSize { size: usize, p: u64 },
    #[error("alphabet element {digit} is not a residue of F_{p}")]
    AlphabetOutOfRange { digit: u64, p: u64 },
    #[error("starred digit {digit} must be a nonzero element of the alphabet")]
    BadStarredDigit { digit: u64 },
    #[error("digit {digit} out of range for F_{p}")]
    DigitOutOfRange { digit: u64, p: u64 },
    #[error("configuration mismatch: p = {0} vs p = {1}")]
    ConfigMismatch(u64, u64),
    #[error("family size would exceed the enumeration guard ({0} elements)")]
    EnumerationTooLarge(String),
    #[error("refinement depth {k} is smaller than the cylinder depth {depth}")]
    RefinementTooShallow { k: i64, depth: i64 },
    #[error("enumeration requires N >= 1, got {0}")]
    BadFamilyIndex(i64),
    #[error("polynomial degree {deg} is not < {n}")]
    DegreeTooLarge { deg: usize, n: i64 },
}

/// Work cap for explicit enumerations (number of generated items).
const ENUMERATION_GUARD: u64 = 1 << 26;

/// The dimension ratio gamma = log(alphabet size) / log(p), stored as the
/// integer pair it is the ratio of. The float view exists for reports only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaPair {
    pub alphabet_size: u64,
    pub base: u64,
}

impl GammaPair {
    pub fn to_f64(self) -> f64 {
        (self.alphabet_size as f64).ln() / (self.base as f64).ln()
    }
}

/// A missing-digit set configuration: prime p, alphabet A, and the pinned
/// nonzero digit used by the starred families (largest element of A by
/// default).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsConfig {
    p: u64,
    alphabet: Vec<u64>,
    starred: u64,
}

impl MdsConfig {
    pub fn new(p: u64, alphabet: &[u64]) -> Result<Self, MdsError> {
        let members = Self::check_alphabet(p, alphabet)?;
        let alphabet: Vec<u64> = (0..p).filter(|&d| members[d as usize]).collect();
        let starred = *alphabet.last().expect("alphabet nonempty");
        if starred == 0 {
            return Err(MdsError::BadStarredDigit { digit: 0 });
        }
        Ok(MdsConfig {
            p,
            alphabet,
            starred,
        })
    }

    pub fn with_starred(p: u64, alphabet: &[u64], starred: u64) -> Result<Self, MdsError> {
        let mut cfg = MdsConfig::new(p, alphabet)?;
        if starred == 0 || !cfg.contains(starred) {
            return Err(MdsError::BadStarredDigit { digit: starred });
        }
        cfg.starred = starred;
        Ok(cfg)
    }

    fn check_alphabet(p: u64, alphabet: &[u64]) -> Result<Vec<bool>, MdsError> {
        if !crate::algebra::is_prime(p) {
            return Err(MdsError::NotPrime(p));
        }
        validate_alphabet(p, alphabet).map_err(|e| match e {
            crate::laurent::LaurentError::AlphabetOutOfRange { digit, p } => {
                MdsError::AlphabetOutOfRange { digit, p }
            }
            crate::laurent::LaurentError::BadAlphabetSize { size, p } => {
                MdsError::BadAlphabetSize { size, p }
            }
            _ => unreachable!("validate_alphabet reports only alphabet errors"),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Sorted, deduplicated alphabet.
    pub fn alphabet(&self) -> &[u64] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet.len() as u64
    }

    pub fn starred_digit(&self) -> u64 {
        self.starred
    }

    pub fn contains(&self, digit: u64) -> bool {
        self.alphabet.binary_search(&digit).is_ok()
    }

    pub fn gamma(&self) -> GammaPair {
        GammaPair {
            alphabet_size: self.alphabet_size(),
            base: self.p,
        }
    }

    /// (#A)^e as an exact rational, for any sign of e.
    pub fn alphabet_power(&self, e: i64) -> BigRational {
        big_pow(self.alphabet_size(), e)
    }
}

pub(crate) fn big_pow(base: u64, e: i64) -> BigRational {
    let b = BigInt::from(base);
    if e >= 0 {
        BigRational::from_integer(b.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), b.pow((-e) as u32))
    }
}

/// A digit-prefix cylinder B[a_-1, ..., a_-l]: the ball of radius p^-l of
/// elements whose first l digits are the prefix. Depth 0 is the unit ball.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder {
    digits: Vec<u64>,
}

impl Cylinder {
    pub fn new(digits: Vec<u64>) -> Self {
        Cylinder { digits }
    }

    /// The depth-0 cylinder (the whole unit ball).
    pub fn unit_ball() -> Self {
        Cylinder { digits: Vec::new() }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn depth(&self) -> i64 {
        self.digits.len() as i64
    }

    /// True when all prefix digits lie in the alphabet, i.e. the cylinder
    /// meets MDS(A).
    pub fn is_admissible(&self, cfg: &MdsConfig) -> bool {
        self.digits.iter().all(|&d| cfg.contains(d))
    }

    /// Set containment: self contains other iff other's prefix extends ours.
    pub fn contains(&self, other: &Cylinder) -> bool {
        other.digits.len() >= self.digits.len()
            && other.digits[..self.digits.len()] == self.digits[..]
    }

    fn check_digits(&self, p: u64) -> Result<(), MdsError> {
        for &d in &self.digits {
            if d >= p {
                return Err(MdsError::DigitOutOfRange { digit: d, p });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// A finite union of cylinders in unique canonical form: no cylinder
/// contains another, no complete sibling family is left unmerged, and the
/// list is sorted. Equal sets always have identical canonical forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    p: u64,
    cylinders: Vec<Cylinder>,
}

/// Prefix trie used for canonical reduction.
#[derive(Default)]
struct TrieNode {
    full: bool,
    children: BTreeMap<u64, TrieNode>,
}

impl TrieNode {
    fn insert(&mut self, digits: &[u64]) {
        if self.full {
            return;
        }
        match digits.split_first() {
            None => {
                self.full = true;
                self.children.clear();
            }
            Some((&d, rest)) => {
                self.children.entry(d).or_default().insert(rest);
            }
        }
    }

    /// Merge complete sibling families into their parent, bottom-up.
    fn coalesce(&mut self, p: u64) {
        if self.full {
            return;
        }
        for child in self.children.values_mut() {
            child.coalesce(p);
        }
        if self.children.len() as u64 == p && self.children.values().all(|c| c.full) {
            self.full = true;
            self.children.clear();
        }
    }

    fn collect(&self, prefix: &mut Vec<u64>, out: &mut Vec<Cylinder>) {
        if self.full {
            out.push(Cylinder::new(prefix.clone()));
            return;
        }
        for (&d, child) in &self.children {
            prefix.push(d);
            child.collect(prefix, out);
            prefix.pop();
        }
    }
}

impl CylinderSet {
    pub fn empty(p: u64) -> Self {
        CylinderSet {
            p,
            cylinders: Vec::new(),
        }
    }

    /// The whole unit ball as a set.
    pub fn unit_ball(p: u64) -> Self {
        CylinderSet {
            p,
            cylinders: vec![Cylinder::unit_ball()],
        }
    }

    /// Reduce an arbitrary collection to canonical form: absorb contained
    /// cylinders, merge complete sibling families, sort.
    pub fn from_cylinders(p: u64, cylinders: Vec<Cylinder>) -> Result<Self, MdsError> {
        if !crate::algebra::is_prime(p) {
            return Err(MdsError::NotPrime(p));
        }
        let mut root = TrieNode::default();
        for c in &cylinders {
            c.check_digits(p)?;
            root.insert(&c.digits);
        }
        root.coalesce(p);
        let mut out = Vec::new();
        root.collect(&mut Vec::new(), &mut out);
        Ok(CylinderSet { p, cylinders: out })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    fn check_config(&self, other_p: u64) -> Result<(), MdsError> {
        if self.p == other_p {
            Ok(())
        } else {
            Err(MdsError::ConfigMismatch(self.p, other_p))
        }
    }

    /// Exact measure of the intersection with MDS(A): each admissible
    /// depth-l cylinder contributes (#A)^-l, forbidden-digit cylinders
    /// contribute 0. This is the Hausdorff-gamma measure of the piece,
    /// since (p^-l)^gamma = (#A)^-l.
    pub fn measure(&self, cfg: &MdsConfig) -> Result<BigRational, MdsError> {
        self.check_config(cfg.modulus())?;
        let mut total = BigRational::zero();
        for c in &self.cylinders {
            if c.is_admissible(cfg) {
                total += cfg.alphabet_power(-c.depth());
            }
        }
        Ok(total)
    }

    pub fn union(&self, other: &CylinderSet) -> Result<CylinderSet, MdsError> {
        self.check_config(other.p)?;
        let mut all = self.cylinders.clone();
        all.extend(other.cylinders.iter().cloned());
        CylinderSet::from_cylinders(self.p, all)
    }

    /// Exact intersection: two cylinders meet iff one prefix extends the
    /// other, and then their intersection is the deeper one.
    pub fn intersect(&self, other: &CylinderSet) -> Result<CylinderSet, MdsError> {
        self.check_config(other.p)?;
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if a.contains(b) {
                    out.push(b.clone());
                } else if b.contains(a) {
                    out.push(a.clone());
                }
            }
        }
        CylinderSet::from_cylinders(self.p, out)
    }

    /// Set inclusion, decided on canonical forms.
    pub fn is_subset_of(&self, other: &CylinderSet) -> Result<bool, MdsError> {
        Ok(&self.intersect(other)? == self)
    }
}

/// An enumerated family of digit-restricted polynomials.
#[derive(Debug, Clone)]
pub struct PolySet {
    polys: Vec<Poly>,
}

impl PolySet {
    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// Enumerate the family of all f in F_p[X] with coefficients in A and
/// deg f < N; the starred variant also pins f(0) to the configured nonzero
/// digit. Counts are (#A)^N and (#A)^(N-1). Order is lexicographic in the
/// coefficient tuple (c_0, ..., c_{N-1}).
pub fn enum_family(n: i64, cfg: &MdsConfig, starred: bool) -> Result<PolySet, MdsError> {
    if n < 1 {
        return Err(MdsError::BadFamilyIndex(n));
    }
    let k = cfg.alphabet_size();
    let free = if starred { n - 1 } else { n };
    let count = k
        .checked_pow(free as u32)
        .filter(|&c| c <= ENUMERATION_GUARD)
        .ok_or_else(|| MdsError::EnumerationTooLarge(format!("{k}^{free}")))?;
    let n = n as usize;
    let mut polys = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0usize; n]; // indices into the alphabet
    let start_pos = if starred { 1 } else { 0 };
    loop {
        let mut cs: Vec<u64> = coeffs.iter().map(|&i| cfg.alphabet[i]).collect();
        if starred {
            cs[0] = cfg.starred;
        }
        polys.push(Poly::new(cfg.p, &cs).expect("digits in range"));
        // odometer over the free coefficient positions
        let mut pos = start_pos;
        loop {
            if pos >= n {
                debug_assert_eq!(polys.len() as u64, count);
                return Ok(PolySet { polys });
            }
            coeffs[pos] += 1;
            if coeffs[pos] < cfg.alphabet.len() {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// Digit prefix of g/X^n to a given depth: digit i is the coefficient of
/// X^(n-i) in g for i <= n, and 0 beyond (the expansion terminates).
pub fn center_prefix(g: &Poly, n: i64, depth: i64) -> Result<Vec<u64>, MdsError> {
    if let Some(d) = g.degree() {
        if d as i64 >= n {
            return Err(MdsError::DegreeTooLarge { deg: d, n });
        }
    }
    let mut digits = Vec::with_capacity(depth.max(0) as usize);
    for i in 1..=depth {
        if i <= n {
            digits.push(g.coeff((n - i) as usize));
        } else {
            digits.push(0);
        }
    }
    Ok(digits)
}

/// The cover-refinement procedure behind the measure identity: split a
/// cylinder into its p children per step, discard children whose new digit
/// leaves the alphabet, and count the depth-k survivors. Conservation
/// count * (#A)^-k = (#A)^-l0 is asserted on every call.
pub fn prop1_refine(b: &Cylinder, k: i64, cfg: &MdsConfig) -> Result<u64, MdsError> {
    b.check_digits(cfg.modulus())?;
    if k < b.depth() {
        return Err(MdsError::RefinementTooShallow {
            k,
            depth: b.depth(),
        });
    }
    if !b.is_admissible(cfg) {
        return Ok(0);
    }
    let steps = (k - b.depth()) as u32;
    cfg.alphabet_size()
        .checked_pow(steps)
        .filter(|&c| c <= ENUMERATION_GUARD)
        .ok_or_else(|| MdsError::EnumerationTooLarge(format!("{}^{steps}", cfg.alphabet_size())))?;
    // run the splitting explicitly rather than trusting the closed form
    let mut count: u64 = 1;
    for _ in 0..steps {
        let mut next = 0u64;
        for _ in 0..count {
            for d in 0..cfg.modulus() {
                if cfg.contains(d) {
                    next += 1;
                }
            }
        }
        count = next;
    }
    // measure conservation on exact rationals
    let lhs = BigRational::from_integer(BigInt::from(count)) * cfg.alphabet_power(-k);
    let rhs = cfg.alphabet_power(-b.depth());
    assert_eq!(lhs, rhs, "refinement must conserve measure");
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg3() -> MdsConfig {
        MdsConfig::new(3, &[0, 2]).unwrap()
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn config_validation() {
        let cfg = cfg3();
        assert_eq!(cfg.alphabet(), &[0, 2]);
        assert_eq!(cfg.starred_digit(), 2);
        assert_eq!(cfg.gamma().alphabet_size, 2);
        assert!((cfg.gamma().to_f64() - 0.6309297535714574).abs() < 1e-12);

        assert!(matches!(
            MdsConfig::new(4, &[0, 2]),
            Err(MdsError::NotPrime(4))
        ));
        assert!(matches!(
            MdsConfig::new(3, &[0, 1, 2]),
            Err(MdsError::BadAlphabetSize { size: 3, p: 3 })
        ));
        assert!(matches!(
            MdsConfig::new(3, &[0, 7]),
            Err(MdsError::AlphabetOutOfRange { digit: 7, p: 3 })
        ));
        assert!(matches!(
            MdsConfig::with_starred(3, &[0, 2], 1),
            Err(MdsError::BadStarredDigit { digit: 1 })
        ));
    }

    #[test]
    fn family_counts() {
        let cfg = cfg3();
        let f1 = enum_family(1, &cfg, false).unwrap();
        assert_eq!(f1.len(), 2);
        assert_eq!(f1.polys()[0], Poly::zero(3));
        assert_eq!(f1.polys()[1], Poly::constant(3, 2));

        let f1s = enum_family(1, &cfg, true).unwrap();
        assert_eq!(f1s.len(), 1);
        assert_eq!(f1s.polys()[0], Poly::constant(3, 2));

        assert_eq!(enum_family(4, &cfg, false).unwrap().len(), 16);
        assert_eq!(enum_family(4, &cfg, true).unwrap().len(), 8);
        assert!(matches!(
            enum_family(0, &cfg, false),
            Err(MdsError::BadFamilyIndex(0))
        ));

        // every starred polynomial has constant coefficient 2
        for g in enum_family(5, &cfg, true).unwrap().polys() {
            assert_eq!(g.coeff(0), 2);
        }
    }

    #[test]
    fn measures() {
        let cfg = cfg3();
        let unit = CylinderSet::unit_ball(3);
        assert_eq!(unit.measure(&cfg).unwrap(), BigRational::one());

        let s = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![2])]).unwrap();
        assert_eq!(s.measure(&cfg).unwrap(), rational(1, 2));

        let s = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![1])]).unwrap();
        assert_eq!(s.measure(&cfg).unwrap(), BigRational::zero());
    }

    #[test]
    fn set_operations() {
        let s = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![2, 0])]).unwrap();
        assert_eq!(s.union(&CylinderSet::empty(3)).unwrap(), s);

        let a = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![2])]).unwrap();
        let b = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![2, 0])]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), b);

        let c = CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![0, 0])]).unwrap();
        assert!(a.intersect(&c).unwrap().is_empty());

        assert!(b.is_subset_of(&a).unwrap());
        assert!(!a.is_subset_of(&b).unwrap());

        let mismatched = CylinderSet::empty(5);
        assert!(matches!(
            a.union(&mismatched),
            Err(MdsError::ConfigMismatch(3, 5))
        ));
    }

    #[test]
    fn reduction_is_canonical() {
        // containment collapses to the shallower prefix
        let s =
            CylinderSet::from_cylinders(3, vec![Cylinder::new(vec![2]), Cylinder::new(vec![2, 0])])
                .unwrap();
        assert_eq!(s.cylinders(), &[Cylinder::new(vec![2])]);

        // a complete sibling family merges into its parent, so set equality
        // is canonical-form equality
        let siblings = CylinderSet::from_cylinders(
            3,
            vec![
                Cylinder::new(vec![2, 0]),
                Cylinder::new(vec![2, 1]),
                Cylinder::new(vec![2, 2]),
            ],
        )
        .unwrap();
        assert_eq!(siblings.cylinders(), &[Cylinder::new(vec![2])]);

        // duplicates vanish and measure is preserved under reduction
        let cfg = cfg3();
        let dup = CylinderSet::from_cylinders(
            3,
            vec![
                Cylinder::new(vec![0, 2]),
                Cylinder::new(vec![0, 2]),
                Cylinder::new(vec![2]),
            ],
        )
        .unwrap();
        assert_eq!(dup.len(), 2);
        assert_eq!(dup.measure(&cfg).unwrap(), rational(1, 4) + rational(1, 2));
    }

    #[test]
    fn refinement_counts() {
        let cfg = cfg3();
        // splitting the unit ball to depth 3 leaves the 8 admissible cylinders
        assert_eq!(prop1_refine(&Cylinder::unit_ball(), 3, &cfg).unwrap(), 8);
        // no refinement needed at equal depth
        assert_eq!(prop1_refine(&Cylinder::new(vec![2]), 1, &cfg).unwrap(), 1);
        // a forbidden digit kills the cylinder at any depth
        assert_eq!(prop1_refine(&Cylinder::new(vec![1]), 5, &cfg).unwrap(), 0);
        assert!(matches!(
            prop1_refine(&Cylinder::new(vec![2, 0]), 1, &cfg),
            Err(MdsError::RefinementTooShallow { k: 1, depth: 2 })
        ));
    }

    #[test]
    fn center_prefix_reads_coefficients_in_reverse() {
        // g = 2 + 2X over X^3: digits (0, 2, 2), then zero padding
        let g = Poly::new(3, &[2, 2]).unwrap();
        assert_eq!(center_prefix(&g, 3, 3).unwrap(), vec![0, 2, 2]);
        assert_eq!(center_prefix(&g, 3, 5).unwrap(), vec![0, 2, 2, 0, 0]);
        assert!(center_prefix(&g, 1, 3).is_err());
    }
}

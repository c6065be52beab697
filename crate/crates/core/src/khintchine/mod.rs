//! The measure experiment suite for digit-restricted approximation sets.
//!
//! For a step function psi(p^n) = p^-e(n) in the capped regime e(n) >= n,
//! the set A_n* is the disjoint union of the depth-e(n) cylinders around the
//! expansions g/X^n, g ranging over the starred family. Every identity the
//! limsup-measure argument needs is exact and finite here and is computed by
//! two independent routes: explicit cylinder enumeration and the closed
//! forms
//!
//!   mu(A_n*)            = (#A)^(n-1-e(n))
//!   mu(B cap A_n*)      = (#A)^(n-l-1-e(n))       (admissible depth-l B)
//!   #containment counts = (#A)^(n-l-1)
//!   mu(A_m* cap A_n*)   = 0 or mu(A_m*) mu(A_n*)
//!
//! with the second-moment (Borel-Cantelli) ratio and the series partial sums
//! assembled from them.

mod psi;

pub use psi::{ceil_pow, psi_cap, theta, DimensionFunction, PsiSpec, StepPsi, TIE_GUARD};

use crate::mds::{big_pow, center_prefix, enum_family, Cylinder, CylinderSet, MdsConfig, MdsError};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KhintchineError {
    #[error("operation requires a power-of-p step function")]
    NonStepKind,
    #[error("psi is not evaluable at n = {n}")]
    PsiNotEvaluable { n: i64 },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("cap regime violated at n = {n}: e(n) = {e} < n, disjointness is unproven")]
    CapRegimeViolated { n: i64, e: i64 },
    #[error("zero padding to depth {e} > n = {n} requires 0 in the alphabet")]
    PaddingRequiresZero { n: i64, e: i64 },
    #[error("index must satisfy n >= 1, got {0}")]
    BadIndex(i64),
    #[error("ball of depth {depth} needs n > depth, got n = {n}")]
    BallTooDeep { n: i64, depth: i64 },
    #[error("need m < n, got m = {m}, n = {n}")]
    BadPair { m: i64, n: i64 },
    #[error("enumeration depth {depth} exceeds the guard {guard} (set a larger guard explicitly)")]
    DepthGuardExceeded { depth: i64, guard: i64 },
    #[error("all measures vanish; the ratio denominator is zero")]
    ZeroDenominator,
    #[error(
        "rounding refused: value is within the tie guard of a power boundary (log = {log_value})"
    )]
    TieGuard { log_value: f64 },
    #[error("exponent map decreases at n = {n}: e = {e} after {prev}")]
    NotMonotone { n: i64, e: i64, prev: i64 },
    #[error("not a dimension function: the power exponent is not positive")]
    NotADimensionFunction,
    #[error("ceil-to-power domain error: {value} is not a positive finite number")]
    CeilDomain { value: f64 },
    #[error("closed form violated: {what}: enumerated {lhs}, formula {rhs}")]
    FormulaMismatch {
        what: String,
        lhs: BigRational,
        rhs: BigRational,
    },
    #[error(transparent)]
    Mds(#[from] MdsError),
}

impl KhintchineError {
    /// Distinguishes broken internal identities from bad inputs, so callers
    /// can map them to different exit codes.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, KhintchineError::FormulaMismatch { .. })
    }
}

/// Default cap on explicit enumeration depth (about 16M prefixes at p = 3).
pub const DEFAULT_DEPTH_GUARD: i64 = 24;

/// Which of the two regimes a pairwise intersection falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// n <= e(m): the approximation sets are disjoint.
    Empty,
    /// n > e(m): the intersection measure is the exact product.
    Product,
}

/// One approximation set A_n*: its cylinders, exact measure, and the closed
/// form it must match.
#[derive(Debug, Clone)]
pub struct ApproxSetRecord {
    pub n: i64,
    /// The step exponent e(n); every cylinder has this depth.
    pub psi_exponent: i64,
    pub set: CylinderSet,
    pub measure: BigRational,
    pub formula: BigRational,
    pub matches: bool,
}

/// Monotonicity of the series terms over the sampled range; no convergence
/// claim is made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendVerdict {
    Constant,
    NonIncreasing,
    NonDecreasing,
    Mixed,
}

/// Partial sums of sum f(psi(p^n)) (p^n)^gamma.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    /// Exact per-term values when representable.
    pub terms_exact: Vec<Option<BigRational>>,
    pub terms_approx: Vec<f64>,
    /// Exact partial sum when every term is exact.
    pub partial_sum: Option<BigRational>,
    pub partial_sum_approx: f64,
    pub trend: TrendVerdict,
}

/// Experiment context: a configuration, a validated step function, and the
/// enumeration depth guard.
pub struct Experiment<'a> {
    cfg: &'a MdsConfig,
    psi: StepPsi,
    depth_guard: i64,
}

impl<'a> Experiment<'a> {
    pub fn new(cfg: &'a MdsConfig, psi: &PsiSpec) -> Result<Self, KhintchineError> {
        Ok(Experiment {
            cfg,
            psi: psi.as_steps()?.clone(),
            depth_guard: DEFAULT_DEPTH_GUARD,
        })
    }

    pub fn with_depth_guard(mut self, guard: i64) -> Self {
        self.depth_guard = guard;
        self
    }

    pub fn config(&self) -> &MdsConfig {
        self.cfg
    }

    pub fn exponent(&self, n: i64) -> Result<i64, KhintchineError> {
        self.psi.exponent(n)
    }

    /// The exponent in the capped regime, with the zero-padding requirement
    /// checked.
    fn checked_exponent(&self, n: i64) -> Result<i64, KhintchineError> {
        if n < 1 {
            return Err(KhintchineError::BadIndex(n));
        }
        let e = self.psi.exponent(n)?;
        if e < n {
            return Err(KhintchineError::CapRegimeViolated { n, e });
        }
        if e > n && !self.cfg.contains(0) {
            return Err(KhintchineError::PaddingRequiresZero { n, e });
        }
        Ok(e)
    }

    /// Build A_n* as an explicit disjoint cylinder union and check the
    /// measure against the closed form (#A)^(n-1-e(n)).
    pub fn build_astar(&self, n: i64) -> Result<ApproxSetRecord, KhintchineError> {
        let e = self.checked_exponent(n)?;
        let family = enum_family(n, self.cfg, true)?;
        let p = self.cfg.modulus();
        let mut cylinders = Vec::with_capacity(family.len());
        for g in family.polys() {
            cylinders.push(Cylinder::new(center_prefix(g, n, e)?));
        }
        let set = CylinderSet::from_cylinders(p, cylinders)?;
        // distinct centers give distinct same-depth prefixes, so reduction
        // must not lose any cylinder
        assert_eq!(
            set.len(),
            family.len(),
            "approximation balls must be disjoint"
        );
        let measure = set.measure(self.cfg)?;
        let formula = self.cfg.alphabet_power(n - 1 - e);
        let matches = measure == formula;
        Ok(ApproxSetRecord {
            n,
            psi_exponent: e,
            set,
            measure,
            formula,
            matches,
        })
    }

    /// The unstarred analogue of `build_astar`'s cylinder set (used for the
    /// containment check of the starred set in the full set).
    pub fn build_a_full(&self, n: i64) -> Result<CylinderSet, KhintchineError> {
        let e = self.checked_exponent(n)?;
        let family = enum_family(n, self.cfg, false)?;
        let mut cylinders = Vec::with_capacity(family.len());
        for g in family.polys() {
            cylinders.push(Cylinder::new(center_prefix(g, n, e)?));
        }
        Ok(CylinderSet::from_cylinders(self.cfg.modulus(), cylinders)?)
    }

    /// Count the centers g in the starred family whose approximation ball is
    /// contained in B; equals (#A)^(n-l-1) for admissible B.
    pub fn ball_count_in(&self, b: &Cylinder, n: i64) -> Result<u64, KhintchineError> {
        let e = self.checked_exponent(n)?;
        let l = b.depth();
        if n <= l {
            return Err(KhintchineError::BallTooDeep { n, depth: l });
        }
        let family = enum_family(n, self.cfg, true)?;
        let mut count = 0u64;
        for g in family.polys() {
            let prefix = center_prefix(g, n, e)?;
            if prefix[..l as usize] == *b.digits() {
                count += 1;
            }
        }
        if b.is_admissible(self.cfg) {
            let expected = self
                .cfg
                .alphabet_size()
                .checked_pow((n - l - 1) as u32)
                .expect("within enumeration guard");
            assert_eq!(
                count, expected,
                "containment count must match the closed form"
            );
        }
        Ok(count)
    }

    /// mu(B cap A_n*), computed by explicit cylinder intersection and checked
    /// against the closed form r(B)^gamma (psi(p^n) p^n)^gamma p^-gamma.
    pub fn local_measure(&self, b: &Cylinder, n: i64) -> Result<BigRational, KhintchineError> {
        let e = self.checked_exponent(n)?;
        let l = b.depth();
        if n <= l {
            return Err(KhintchineError::BallTooDeep { n, depth: l });
        }
        let record = self.build_astar(n)?;
        let b_set = CylinderSet::from_cylinders(self.cfg.modulus(), vec![b.clone()])?;
        let measure = b_set.intersect(&record.set)?.measure(self.cfg)?;
        let formula = if b.is_admissible(self.cfg) {
            self.cfg.alphabet_power(n - l - 1 - e)
        } else {
            BigRational::zero()
        };
        if measure != formula {
            return Err(KhintchineError::FormulaMismatch {
                what: format!("mu(B cap A_{n}*) for B = {b}"),
                lhs: measure,
                rhs: formula,
            });
        }
        Ok(measure)
    }

    /// mu(A_m* cap A_n*) by explicit cylinder intersection, classified into
    /// the disjoint regime (n <= e(m)) or the exact product regime, and
    /// checked against the corresponding closed form.
    pub fn pairwise_measure(
        &self,
        m: i64,
        n: i64,
    ) -> Result<(BigRational, Regime), KhintchineError> {
        if m >= n {
            return Err(KhintchineError::BadPair { m, n });
        }
        let em = self.checked_exponent(m)?;
        let en = self.checked_exponent(n)?;
        let depth = em.max(en);
        if depth > self.depth_guard {
            return Err(KhintchineError::DepthGuardExceeded {
                depth,
                guard: self.depth_guard,
            });
        }
        let rm = self.build_astar(m)?;
        let rn = self.build_astar(n)?;
        let measure = rm.set.intersect(&rn.set)?.measure(self.cfg)?;
        let (regime, expected) = if n <= em {
            (Regime::Empty, BigRational::zero())
        } else {
            (Regime::Product, &rm.measure * &rn.measure)
        };
        if measure != expected {
            return Err(KhintchineError::FormulaMismatch {
                what: format!("mu(A_{m}* cap A_{n}*)"),
                lhs: measure,
                rhs: expected,
            });
        }
        Ok((measure, regime))
    }

    /// The second-moment ratio (sum_k mu(A_k*))^2 / sum_{n,m} mu(A_n* cap A_m*)
    /// with every term from explicit enumeration.
    pub fn bc_ratio(&self, n_max: i64) -> Result<BigRational, KhintchineError> {
        if n_max < 1 {
            return Err(KhintchineError::BadIndex(n_max));
        }
        let mut measures = Vec::new();
        for k in 1..=n_max {
            measures.push(self.build_astar(k)?.measure);
        }
        let total: BigRational = measures.iter().sum();
        if total.is_zero() {
            return Err(KhintchineError::ZeroDenominator);
        }
        let mut denom: BigRational = measures.iter().sum();
        for m in 1..=n_max {
            for n in (m + 1)..=n_max {
                let (mu, _) = self.pairwise_measure(m, n)?;
                denom += BigRational::from_integer(BigInt::from(2)) * mu;
            }
        }
        Ok(&total * &total / denom)
    }

    /// The same ratio from the closed forms alone, scaling to large N:
    /// mu_k = (#A)^(k-1-e(k)) and the off-diagonal terms are mu_m mu_n
    /// exactly when n > e(m).
    pub fn bc_ratio_closed_form(&self, n_max: i64) -> Result<BigRational, KhintchineError> {
        if n_max < 1 {
            return Err(KhintchineError::BadIndex(n_max));
        }
        let base = self.cfg.alphabet_size();
        // mu_k = base^(x_k) with x_k = k - 1 - e(k) <= -1
        let mut xs = Vec::with_capacity(n_max as usize);
        for k in 1..=n_max {
            let e = self.checked_exponent(k)?;
            xs.push(k - 1 - e);
        }
        // prefix sums s[t] = sum_{k<=t} mu_k as scaled integers
        let mut prefix: Vec<PowVal> = Vec::with_capacity(n_max as usize + 1);
        prefix.push(PowVal::zero());
        for (i, &x) in xs.iter().enumerate() {
            let next = prefix[i].add(&PowVal::pow(x), base);
            prefix.push(next);
        }
        let total = prefix[n_max as usize].clone();
        if total.num.is_zero() {
            return Err(KhintchineError::ZeroDenominator);
        }
        // denominator: diagonal + 2 sum_m mu_m (S(N) - S(min(e(m), N)))
        let mut denom = total.clone();
        for m in 1..=n_max {
            let em = self.psi.exponent(m)?;
            let cut = em.min(n_max) as usize;
            let tail = prefix[n_max as usize].sub(&prefix[cut], base);
            if tail.num.is_zero() {
                continue;
            }
            // mu_m * tail, doubled
            let mut contrib = tail.scale_pow(xs[(m - 1) as usize]);
            contrib.num *= 2;
            denom = denom.add(&contrib, base);
        }
        let num = total.mul(&total, base);
        Ok(num.to_rational(base) / denom.to_rational(base))
    }

    /// Partial sums of the series sum_n f(psi(p^n)) (p^n)^gamma, exact when
    /// the term exponents are integers, float otherwise.
    pub fn series_partial(
        &self,
        f: &DimensionFunction,
        n_max: i64,
        psi: &PsiSpec,
    ) -> Result<SeriesReport, KhintchineError> {
        series_partial(f, psi, n_max, self.cfg)
    }
}

/// Free-function form of the series computation (any psi kind).
pub fn series_partial(
    f: &DimensionFunction,
    psi: &PsiSpec,
    n_max: i64,
    cfg: &MdsConfig,
) -> Result<SeriesReport, KhintchineError> {
    if n_max < 1 {
        return Err(KhintchineError::BadIndex(n_max));
    }
    let gamma = cfg.gamma();
    let p = cfg.modulus();
    let size = cfg.alphabet_size();
    let mut terms_exact = Vec::new();
    let mut terms_approx = Vec::new();
    let mut all_exact = true;
    for n in 1..=n_max {
        let exact = match psi.log_exponent_rational(n)? {
            Some(e) => f.eval_at_step(&e).map(|(a, b)| {
                // f(psi) * (p^n)^gamma = p^a * (#A)^(b + n)
                big_pow(p, a) * big_pow(size, b + n)
            }),
            None => None,
        };
        let approx = match &exact {
            Some(v) => v.to_f64().unwrap_or(f64::NAN),
            None => {
                let x = psi.log_exponent_f64(n, p)?;
                f.eval_f64(x, gamma) * (size as f64).powi(n as i32)
            }
        };
        all_exact &= exact.is_some();
        terms_exact.push(exact);
        terms_approx.push(approx);
    }
    let partial_sum = if all_exact {
        Some(terms_exact.iter().map(|t| t.clone().unwrap()).sum())
    } else {
        None
    };
    let partial_sum_approx = terms_approx.iter().sum();
    let mut nondec = true;
    let mut noninc = true;
    for w in terms_approx.windows(2) {
        if w[1] > w[0] {
            noninc = false;
        }
        if w[1] < w[0] {
            nondec = false;
        }
    }
    let trend = match (noninc, nondec) {
        (true, true) => TrendVerdict::Constant,
        (true, false) => TrendVerdict::NonIncreasing,
        (false, true) => TrendVerdict::NonDecreasing,
        (false, false) => TrendVerdict::Mixed,
    };
    Ok(SeriesReport {
        terms_exact,
        terms_approx,
        partial_sum,
        partial_sum_approx,
        trend,
    })
}

/// A number num * base^exp with integer mantissa; sums of alphabet powers
/// stay in this form so no gcd normalization happens until the end.
#[derive(Debug, Clone)]
struct PowVal {
    num: BigInt,
    exp: i64,
}

impl PowVal {
    fn zero() -> Self {
        PowVal {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    fn pow(e: i64) -> Self {
        PowVal {
            num: BigInt::one(),
            exp: e,
        }
    }

    fn scale_pow(&self, e: i64) -> Self {
        PowVal {
            num: self.num.clone(),
            exp: self.exp + e,
        }
    }

    fn add(&self, rhs: &PowVal, base: u64) -> PowVal {
        self.combine(rhs, base, false)
    }

    fn sub(&self, rhs: &PowVal, base: u64) -> PowVal {
        self.combine(rhs, base, true)
    }

    fn combine(&self, rhs: &PowVal, base: u64, negate: bool) -> PowVal {
        if self.num.is_zero() {
            let mut r = rhs.clone();
            if negate {
                r.num = -r.num;
            }
            return r;
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        let b = BigInt::from(base);
        let e = self.exp.min(rhs.exp);
        let a = &self.num * b.pow((self.exp - e) as u32);
        let mut c = &rhs.num * b.pow((rhs.exp - e) as u32);
        if negate {
            c = -c;
        }
        PowVal { num: a + c, exp: e }
    }

    fn mul(&self, rhs: &PowVal, _base: u64) -> PowVal {
        PowVal {
            num: &self.num * &rhs.num,
            exp: self.exp + rhs.exp,
        }
    }

    fn to_rational(&self, base: u64) -> BigRational {
        BigRational::from_integer(self.num.clone()) * big_pow(base, self.exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg3() -> MdsConfig {
        MdsConfig::new(3, &[0, 2]).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn identity_psi() -> PsiSpec {
        PsiSpec::affine_ceil(rat(1, 1), rat(0, 1))
    }

    #[test]
    fn build_astar_examples() {
        let cfg = cfg3();
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();

        // n = 3, e = 3: four disjoint cylinders of measure 1/8 each
        let r = exp.build_astar(3).unwrap();
        assert_eq!(r.set.len(), 4);
        assert_eq!(r.measure, rat(1, 2));
        assert!(r.matches);

        // n = 1, e = 1: the single cylinder [2]
        let r = exp.build_astar(1).unwrap();
        assert_eq!(r.set.cylinders(), &[Cylinder::new(vec![2])]);
        assert_eq!(r.measure, rat(1, 2));

        // n = 3 with e(n) = n + 1: measure 1/4
        let psi = PsiSpec::affine_ceil(rat(1, 1), rat(1, 1));
        let exp = Experiment::new(&cfg, &psi).unwrap();
        let r = exp.build_astar(3).unwrap();
        assert_eq!(r.psi_exponent, 4);
        assert_eq!(r.measure, rat(1, 4));
        assert!(r.matches);
    }

    #[test]
    fn cap_regime_is_enforced() {
        let cfg = cfg3();
        let psi = PsiSpec::affine_ceil(rat(1, 2), rat(0, 1));
        let exp = Experiment::new(&cfg, &psi).unwrap();
        assert!(matches!(
            exp.build_astar(4),
            Err(KhintchineError::CapRegimeViolated { n: 4, e: 2 })
        ));

        // padding beyond depth n needs the zero digit
        let cfg_no_zero = MdsConfig::new(5, &[1, 2]).unwrap();
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        let exp = Experiment::new(&cfg_no_zero, &psi).unwrap();
        assert!(matches!(
            exp.build_astar(2),
            Err(KhintchineError::PaddingRequiresZero { n: 2, e: 4 })
        ));
    }

    #[test]
    fn ball_counts() {
        let cfg = cfg3();
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();

        // n = 5, depth-2 ball: 2^(5-2-1) = 4
        let b = Cylinder::new(vec![2, 0]);
        assert_eq!(exp.ball_count_in(&b, 5).unwrap(), 4);

        // n = 2, B = [2]: F*(2) = {2, 2+2X} gives prefixes (0,2), (2,2)
        let b = Cylinder::new(vec![2]);
        assert_eq!(exp.ball_count_in(&b, 2).unwrap(), 1);

        // n = depth + 1 pins every free coefficient
        let b = Cylinder::new(vec![2, 0, 2]);
        assert_eq!(exp.ball_count_in(&b, 4).unwrap(), 1);

        assert!(matches!(
            exp.ball_count_in(&Cylinder::new(vec![2, 0]), 2),
            Err(KhintchineError::BallTooDeep { n: 2, depth: 2 })
        ));
    }

    #[test]
    fn local_measures() {
        let cfg = cfg3();
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();

        // B = [2], n = 3: 2^(3-1-1-3) = 1/4
        let b = Cylinder::new(vec![2]);
        assert_eq!(exp.local_measure(&b, 3).unwrap(), rat(1, 4));

        // forbidden digit: measure 0
        let b = Cylinder::new(vec![1]);
        assert_eq!(exp.local_measure(&b, 3).unwrap(), BigRational::zero());

        // depth-0 ball reduces to the global measure
        let b = Cylinder::unit_ball();
        assert_eq!(exp.local_measure(&b, 3).unwrap(), rat(1, 2));
    }

    #[test]
    fn pairwise_regimes() {
        let cfg = cfg3();

        // e(k) = k: product regime
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();
        let (mu, regime) = exp.pairwise_measure(2, 3).unwrap();
        assert_eq!(regime, Regime::Product);
        assert_eq!(mu, rat(1, 4));
        let (mu, regime) = exp.pairwise_measure(1, 2).unwrap();
        assert_eq!(regime, Regime::Product);
        assert_eq!(mu, rat(1, 4));

        // e(k) = 2k: at (m, n) = (2, 3), n <= e(m) = 4, disjoint
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        let exp = Experiment::new(&cfg, &psi).unwrap();
        let (mu, regime) = exp.pairwise_measure(2, 3).unwrap();
        assert_eq!(regime, Regime::Empty);
        assert!(mu.is_zero());

        assert!(matches!(
            exp.pairwise_measure(3, 3),
            Err(KhintchineError::BadPair { m: 3, n: 3 })
        ));
    }

    #[test]
    fn depth_guard_applies_to_pairwise() {
        let cfg = cfg3();
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        let exp = Experiment::new(&cfg, &psi).unwrap().with_depth_guard(10);
        assert!(matches!(
            exp.pairwise_measure(2, 6),
            Err(KhintchineError::DepthGuardExceeded {
                depth: 12,
                guard: 10
            })
        ));
    }

    #[test]
    fn bc_ratio_paths_agree() {
        let cfg = cfg3();
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();

        // e(k) = k: each mu = 1/2, off-diagonals 1/4, ratio N/(N+1)
        assert_eq!(exp.bc_ratio(1).unwrap(), rat(1, 2));
        assert_eq!(exp.bc_ratio(3).unwrap(), rat(3, 4));
        for n in 1..=8 {
            let enumerated = exp.bc_ratio(n).unwrap();
            let closed = exp.bc_ratio_closed_form(n).unwrap();
            assert_eq!(enumerated, closed);
            assert_eq!(enumerated, rat(n, n + 1));
        }

        // convergent case e(k) = 2k: ratio stays below 1 and both paths agree
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        let exp = Experiment::new(&cfg, &psi).unwrap();
        for n in 1..=8 {
            let enumerated = exp.bc_ratio(n).unwrap();
            let closed = exp.bc_ratio_closed_form(n).unwrap();
            assert_eq!(enumerated, closed);
            assert!(enumerated < BigRational::one());
        }
        // partial sums stay below 1/2: sum 2^-(k+1) < 1/2
        let mut total = BigRational::zero();
        for k in 1..=8 {
            total += exp.build_astar(k).unwrap().measure;
        }
        assert!(total < rat(1, 2));
    }

    #[test]
    fn series_examples() {
        let cfg = cfg3();

        // f = r^gamma, e(n) = n: every term is exactly 1
        let f = DimensionFunction::gamma_power(rat(1, 1));
        let rep = series_partial(&f, &identity_psi(), 10, &cfg).unwrap();
        assert_eq!(rep.partial_sum, Some(rat(10, 1)));
        assert_eq!(rep.trend, TrendVerdict::Constant);

        // f = r^gamma, e(n) = 2n: term 2^-n, sum 1 - 2^-N
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        let rep = series_partial(&f, &psi, 10, &cfg).unwrap();
        assert_eq!(rep.partial_sum, Some(rat(1, 1) - rat(1, 1024)));
        assert_eq!(rep.trend, TrendVerdict::NonIncreasing);

        // f = r^(2 gamma), e(n) = n: term 2^-n
        let f = DimensionFunction::gamma_power(rat(2, 1));
        let rep = series_partial(&f, &identity_psi(), 10, &cfg).unwrap();
        assert_eq!(rep.partial_sum, Some(rat(1, 1) - rat(1, 1024)));
    }

    #[test]
    fn starred_set_is_contained_in_full_set() {
        let cfg = cfg3();
        let exp = Experiment::new(&cfg, &identity_psi()).unwrap();
        for n in 1..=10 {
            let starred = exp.build_astar(n).unwrap().set;
            let full = exp.build_a_full(n).unwrap();
            assert!(starred.is_subset_of(&full).unwrap());
        }
    }
}

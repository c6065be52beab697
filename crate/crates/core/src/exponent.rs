//! Irrationality exponents: folding schedules, the iterated-folding
//! construction of missing-digit elements with prescribed approximation
//! quality, exponent estimation from convergents, and the factorial-gap
//! element.
//!
//! A schedule starts at u_1 = v_1 = 1 and picks each u_{i+1} as the unique
//! integer with 1 < p^u_{i+1} p^2v_i psi(p^v_i) <= p, then v_{i+1} =
//! u_{i+1} + 2 v_i. Folding the stage-i continued fraction with t =
//! X^u_{i+1} subtracts exactly 1/X^v_{i+1}, so the stage values telescope to
//! -sum_k X^-v_k: every digit is 0 or p-1 and the element lies in the
//! missing-digit set over {0, p-1}.

use crate::algebra::{Magnitude, Poly, RatFun};
use crate::cfrac::{convergents, fold, CFrac};
use crate::khintchine::{PsiSpec, TIE_GUARD};
use crate::laurent::{LaurentTrunc, MdsCheck};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExponentError {
    #[error("schedule needs at least one entry")]
    EmptySchedule,
    #[error("psi violates the hypothesis (x^2 psi(x) non-increasing and tending to 0): {0}")]
    HypothesisViolated(String),
    #[error("psi is too large at p^{v}: the bracket gives u = {u} < 1")]
    PsiTooLarge { v: i64, u: i64 },
    #[error("rounding refused: bracket endpoint within the tie guard of an integer (L = {0})")]
    TieGuard(f64),
    #[error("comparison of error against c psi is indeterminate at float precision")]
    IndeterminateComparison,
    #[error("requested {requested} stages but the schedule has {available} entries")]
    NotEnoughSchedule { requested: usize, available: usize },
    #[error("stage count must be between 1 and {max}, got {got}")]
    BadStageCount { got: usize, max: usize },
    #[error("c must lie strictly between 0 and 1/{p}")]
    BadConstant { p: u64 },
    #[error("need at least {need} partial quotients, got {got}")]
    TooFewQuotients { need: usize, got: usize },
    #[error("construction state needs at least 2 stages")]
    TooFewStages,
    #[error("perturbation bit {0} is outside {{1, 2}}")]
    BadPerturbBit(i64),
    #[error("perturbation needs {need} schedule entries, got {got}")]
    PerturbTooLong { need: usize, got: usize },
    #[error("depth must be >= 1, got {0}")]
    BadDepth(i64),
    #[error("psi is not evaluable here: {0}")]
    PsiNotEvaluable(String),
}

/// Hard cap on construction stages: stage n holds 2^n - 1 partial quotients.
pub const MAX_STAGES: usize = 20;

/// -log_p psi(p^s): exact rational where psi allows it, guarded float
/// otherwise.
enum LogPsi {
    Exact(BigRational),
    Float(f64),
}

fn log_psi(psi: &PsiSpec, s: i64, p: u64) -> Result<LogPsi, ExponentError> {
    match psi
        .log_exponent_rational(s)
        .map_err(|e| ExponentError::PsiNotEvaluable(e.to_string()))?
    {
        Some(r) => Ok(LogPsi::Exact(r)),
        None => {
            Ok(LogPsi::Float(psi.log_exponent_f64(s, p).map_err(|e| {
                ExponentError::PsiNotEvaluable(e.to_string())
            })?))
        }
    }
}

/// The folding schedule (u_i, v_i) with u_1 = v_1 = 1 and
/// v_{i+1} = u_{i+1} + 2 v_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingSchedule {
    p: u64,
    u: Vec<i64>,
    v: Vec<i64>,
}

impl FoldingSchedule {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> &[i64] {
        &self.u
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Build a schedule from explicit positive u values (the recursion for v
    /// is applied); used by the perturbation and by tests.
    pub fn from_u(p: u64, u: Vec<i64>) -> Result<Self, ExponentError> {
        if u.is_empty() {
            return Err(ExponentError::EmptySchedule);
        }
        let mut v = Vec::with_capacity(u.len());
        v.push(u[0]);
        for i in 1..u.len() {
            if u[i] < 1 {
                return Err(ExponentError::PsiTooLarge {
                    v: v[i - 1],
                    u: u[i],
                });
            }
            v.push(u[i] + 2 * v[i - 1]);
        }
        Ok(FoldingSchedule { p, u, v })
    }

    /// The uncountability interleave: u' = (1, u_1, b_1, u_2, b_2, ..., b_L,
    /// u_{L+1}) with each b in {1, 2}; v' is recomputed by the recursion.
    pub fn perturb(&self, bits: &[i64]) -> Result<FoldingSchedule, ExponentError> {
        for &b in bits {
            if b != 1 && b != 2 {
                return Err(ExponentError::BadPerturbBit(b));
            }
        }
        if self.u.len() < bits.len() + 1 {
            return Err(ExponentError::PerturbTooLong {
                need: bits.len() + 1,
                got: self.u.len(),
            });
        }
        let mut u = Vec::with_capacity(2 * bits.len() + 2);
        u.push(1);
        for (i, &b) in bits.iter().enumerate() {
            u.push(self.u[i]);
            u.push(b);
        }
        u.push(self.u[bits.len()]);
        FoldingSchedule::from_u(self.p, u)
    }
}

/// Compute the schedule for psi: u_{i+1} = floor(L) + 1 with
/// L = -2 v_i - log_p psi(p^v_i), the unique integer with 0 < u - L <= 1.
///
/// The hypothesis is checked exactly on the sampled grid: L must be
/// non-decreasing (monotone x^2 psi), strictly larger at the last sample
/// than at the first (x^2 psi tending to zero), and a power law must have
/// tau > 2.
pub fn schedule(psi: &PsiSpec, p: u64, count: usize) -> Result<FoldingSchedule, ExponentError> {
    if count == 0 {
        return Err(ExponentError::EmptySchedule);
    }
    if let PsiSpec::PowerLaw { tau } = psi {
        if *tau <= BigRational::from_integer(BigInt::from(2)) {
            return Err(ExponentError::HypothesisViolated(format!(
                "power law needs tau > 2, got {tau}"
            )));
        }
    }
    let mut u = vec![1i64];
    let mut v = vec![1i64];
    let mut l_values: Vec<LogPsi> = Vec::new();
    for i in 1..count {
        let vi = v[i - 1];
        let two_vi = BigRational::from_integer(BigInt::from(2 * vi));
        let l = match log_psi(psi, vi, p)? {
            // L = -2 v_i + (-log_p psi) ... log_psi returns -log_p psi(p^v)
            LogPsi::Exact(r) => LogPsi::Exact(r - two_vi),
            LogPsi::Float(x) => LogPsi::Float(x - 2.0 * vi as f64),
        };
        let next_u = match &l {
            LogPsi::Exact(r) => {
                let f = r.floor().to_integer();
                f.to_i64()
                    .ok_or_else(|| ExponentError::PsiNotEvaluable("exponent overflow".into()))?
                    + 1
            }
            LogPsi::Float(x) => {
                if (x - x.round()).abs() < TIE_GUARD {
                    return Err(ExponentError::TieGuard(*x));
                }
                x.floor() as i64 + 1
            }
        };
        if next_u < 1 {
            return Err(ExponentError::PsiTooLarge { v: vi, u: next_u });
        }
        if next_u < u[i - 1] {
            return Err(ExponentError::HypothesisViolated(format!(
                "u decreased from {} to {} at step {}",
                u[i - 1],
                next_u,
                i
            )));
        }
        u.push(next_u);
        v.push(next_u + 2 * vi);
        l_values.push(l);
    }
    // sampled-grid hypothesis checks on the bracket values
    if l_values.len() >= 2 {
        let not_monotone = |a: &LogPsi, b: &LogPsi| match (a, b) {
            (LogPsi::Exact(x), LogPsi::Exact(y)) => y < x,
            (LogPsi::Float(x), LogPsi::Float(y)) => y < x,
            _ => false,
        };
        for w in l_values.windows(2) {
            if not_monotone(&w[0], &w[1]) {
                return Err(ExponentError::HypothesisViolated(
                    "x^2 psi(x) increases between sampled points".into(),
                ));
            }
        }
        let strictly_grew = match (&l_values[0], &l_values[l_values.len() - 1]) {
            (LogPsi::Exact(x), LogPsi::Exact(y)) => y > x,
            (LogPsi::Float(x), LogPsi::Float(y)) => y > x,
            _ => true,
        };
        if !strictly_grew {
            return Err(ExponentError::HypothesisViolated(
                "x^2 psi(x) does not tend to 0 over the sampled range".into(),
            ));
        }
    }
    Ok(FoldingSchedule { p, u, v })
}

/// One construction stage: the value P_n/X^v_n, its continued fraction, and
/// the exact digit expansion to depth v_n.
#[derive(Debug, Clone)]
pub struct Stage {
    pub v: i64,
    pub value: RatFun,
    pub cf: CFrac,
    pub digits: LaurentTrunc,
}

/// The iterated-folding construction.
#[derive(Debug, Clone)]
pub struct ConstructionState {
    p: u64,
    stages: Vec<Stage>,
}

impl ConstructionState {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn final_stage(&self) -> &Stage {
        self.stages.last().expect("at least one stage")
    }
}

/// Iterate the folding transform along a schedule. Every stage is checked:
/// the denominator is exactly X^v_n, the expansion digits through depth v_n
/// lie in {0, p-1}, the values telescope by -1/X^v_n, and each stage's
/// continued fraction is a prefix of the next.
pub fn construct(
    sched: &FoldingSchedule,
    stages: usize,
) -> Result<ConstructionState, ExponentError> {
    if stages == 0 || stages > MAX_STAGES {
        return Err(ExponentError::BadStageCount {
            got: stages,
            max: MAX_STAGES,
        });
    }
    if stages > sched.len() {
        return Err(ExponentError::NotEnoughSchedule {
            requested: stages,
            available: sched.len(),
        });
    }
    let p = sched.p;
    let digit = p - 1; // -1 in F_p
    let alphabet = [0, digit];
    let mut out: Vec<Stage> = Vec::with_capacity(stages);
    for (i, (&ui, &vi)) in sched.u.iter().zip(sched.v.iter()).enumerate().take(stages) {
        let cf = if i == 0 {
            let a1 = Poly::monomial(p, digit, ui as usize);
            CFrac::new(Poly::zero(p), vec![a1]).expect("degree >= 1")
        } else {
            let t = Poly::monomial(p, 1, ui as usize);
            fold(&out[i - 1].cf, &t).expect("degree >= 1")
        };
        let value = convergents(&cf)
            .value(cf.len())
            .expect("table covers the whole expansion");
        // denominator must be the monic pure power X^v_i
        assert_eq!(
            value.denominator(),
            &Poly::monomial(p, 1, vi as usize),
            "stage denominator must be X^v"
        );
        if let Some(prev) = out.last() {
            // telescoping: value = prev - 1/X^v_i
            let step = RatFun::new(Poly::constant(p, digit), Poly::monomial(p, 1, vi as usize))
                .expect("monomial denominator");
            assert_eq!(value, prev.value.add(&step), "stage values must telescope");
            assert!(prev.cf.is_prefix_of(&cf), "stage expansions must nest");
        }
        let digits = LaurentTrunc::expand(&value, vi).expect("positive depth");
        assert!(digits.is_terminated());
        assert_eq!(
            digits.in_mds(&alphabet, vi).expect("valid alphabet"),
            MdsCheck::Yes,
            "stage digits must stay in the missing-digit alphabet"
        );
        out.push(Stage {
            v: vi,
            value,
            cf,
            digits,
        });
    }
    Ok(ConstructionState { p, stages: out })
}

/// Exact comparison p^(a/b) vs q for rational q > 0: cross-multiplied in
/// big integers after raising both sides to the b-th power.
fn cmp_pow_vs_rational(p: u64, a: &BigInt, b: &BigInt, q: &BigRational) -> std::cmp::Ordering {
    debug_assert!(b > &BigInt::zero() && q > &BigRational::zero());
    let be = b.to_u32().expect("small exponent denominator");
    let qn = q.numer().pow(be);
    let qd = q.denom().pow(be);
    let p_big = BigInt::from(p);
    if a >= &BigInt::zero() {
        let lhs = p_big.pow(a.to_u32().expect("moderate exponent")) * qd;
        lhs.cmp(&qn)
    } else {
        let rhs = qn * p_big.pow((-a).to_u32().expect("moderate exponent"));
        qd.cmp(&rhs)
    }
}

/// One per-stage verification entry: the exact error exponent and the
/// strict comparison against psi at the previous stage's scale.
#[derive(Debug, Clone)]
pub struct StageCheck {
    pub stage: usize,
    /// |limit - stage value| = p^-error_exponent, equal to v_{n+1}.
    pub error_exponent: i64,
    pub error_below_psi: bool,
}

/// One per-convergent entry: degrees, the product bound
/// |a_{j+1}| |Q_j|^2 psi(|Q_j|) <= p, and the strict lower bound
/// error > c psi(|Q_j|).
#[derive(Debug, Clone)]
pub struct ConvergentCheck {
    pub j: usize,
    pub next_quotient_degree: i64,
    pub denominator_degree: i64,
    pub product_bound_holds: bool,
    pub product_bound_attained: bool,
    pub error_exceeds_c_psi: bool,
}

#[derive(Debug, Clone)]
pub struct WindowReport {
    pub stage_checks: Vec<StageCheck>,
    pub convergent_checks: Vec<ConvergentCheck>,
    pub all_pass: bool,
}

/// Verify the two-sided approximation window for a constructed element:
/// each stage approximates the limit to exactly p^-v_{n+1} < psi(p^v_n),
/// and no convergent of the final stage approximates better than
/// c psi(|Q_j|) for c strictly inside (0, 1/p).
pub fn verify_window(
    state: &ConstructionState,
    sched: &FoldingSchedule,
    psi: &PsiSpec,
    c: &BigRational,
) -> Result<WindowReport, ExponentError> {
    let p = state.p;
    if state.stages.len() < 2 {
        return Err(ExponentError::TooFewStages);
    }
    let one_over_p = BigRational::new(BigInt::one(), BigInt::from(p));
    if !(c > &BigRational::zero() && c < &one_over_p) {
        return Err(ExponentError::BadConstant { p });
    }
    let mut all_pass = true;

    // (a) per-stage errors: |xi_{n+1} - xi_n| = p^-v_{n+1} stands in for the
    // distance to the limit, exactly, by the ultrametric (all later
    // corrections are strictly smaller)
    let mut stage_checks = Vec::new();
    for n in 0..state.stages.len() - 1 {
        let cur = &state.stages[n];
        let next = &state.stages[n + 1];
        let diff = next.value.sub(&cur.value).abs();
        let expected = Magnitude::Pow(-next.v);
        assert_eq!(diff, expected, "stage error exponent must be v_(n+1)");
        // p^-v_{n+1} < psi(p^v_n) <=> v_{n+1} > -log_p psi(p^v_n)
        let ok = match log_psi(psi, cur.v, p)? {
            LogPsi::Exact(r) => BigRational::from_integer(BigInt::from(next.v)) > r,
            LogPsi::Float(x) => {
                let d = next.v as f64 - x;
                if d.abs() < TIE_GUARD {
                    return Err(ExponentError::IndeterminateComparison);
                }
                d > 0.0
            }
        };
        all_pass &= ok;
        stage_checks.push(StageCheck {
            stage: n + 1,
            error_exponent: next.v,
            error_below_psi: ok,
        });
    }

    // (b) per-convergent lower bound on the final stage
    let final_cf = &state.final_stage().cf;
    let mut convergent_checks = Vec::new();
    for j in 1..final_cf.len() {
        let s = final_cf.denominator_degree(j);
        let d = final_cf
            .quotient(j + 1)
            .expect("j + 1 within range")
            .degree()
            .expect("deg >= 1") as i64;
        // product bound p^(d + 2s) psi(p^s) <= p and the c-comparison
        let (bound_holds, attained, exceeds) = match log_psi(psi, s, p)? {
            LogPsi::Exact(r) => {
                let lhs = BigRational::from_integer(BigInt::from(d + 2 * s)) - &r;
                let bound = lhs <= BigRational::one();
                let attained = lhs == BigRational::one();
                // p^-(d+2s) > c p^-r  <=>  p^(r - d - 2s) > c
                let e = &r - BigRational::from_integer(BigInt::from(d + 2 * s));
                let ord = cmp_pow_vs_rational(p, e.numer(), e.denom(), c);
                (bound, attained, ord == std::cmp::Ordering::Greater)
            }
            LogPsi::Float(x) => {
                let lhs = (d + 2 * s) as f64 - x;
                if (lhs - 1.0).abs() < TIE_GUARD {
                    return Err(ExponentError::IndeterminateComparison);
                }
                let cf64 = c.to_f64().expect("finite");
                let margin = (x - (d + 2 * s) as f64) - cf64.ln() / (p as f64).ln();
                if margin.abs() < TIE_GUARD {
                    return Err(ExponentError::IndeterminateComparison);
                }
                (lhs < 1.0, false, margin > 0.0)
            }
        };
        all_pass &= bound_holds && exceeds;
        convergent_checks.push(ConvergentCheck {
            j,
            next_quotient_degree: d,
            denominator_degree: s,
            product_bound_holds: bound_holds,
            product_bound_attained: attained,
            error_exceeds_c_psi: exceeds,
        });
    }
    let _ = sched;
    Ok(WindowReport {
        stage_checks,
        convergent_checks,
        all_pass,
    })
}

/// Per-convergent exponent witnesses tau_j = (deg a_{j+1} + 2 deg Q_j) /
/// deg Q_j, and their maximum. These are lower-bound witnesses from a finite
/// expansion; `max_denominator_degree` records how far the input reached.
#[derive(Debug, Clone)]
pub struct TauEstimate {
    pub per_j: Vec<(usize, BigRational)>,
    pub estimate: BigRational,
    pub max_denominator_degree: i64,
}

pub fn estimate_tau(cf: &CFrac) -> Result<TauEstimate, ExponentError> {
    if cf.len() < 2 {
        return Err(ExponentError::TooFewQuotients {
            need: 2,
            got: cf.len(),
        });
    }
    let mut per_j = Vec::new();
    let mut best: Option<BigRational> = None;
    for j in 1..cf.len() {
        let s = cf.denominator_degree(j);
        let d = cf
            .quotient(j + 1)
            .expect("within range")
            .degree()
            .expect("deg >= 1") as i64;
        let tau = BigRational::new(BigInt::from(d + 2 * s), BigInt::from(s));
        if best.as_ref().map_or(true, |b| &tau > b) {
            best = Some(tau.clone());
        }
        per_j.push((j, tau));
    }
    Ok(TauEstimate {
        per_j,
        estimate: best.expect("at least one entry"),
        max_denominator_degree: cf.denominator_degree(cf.len()),
    })
}

/// The factorial-gap element: digit p-1 at every index n! <= depth, zero
/// elsewhere; a truncation (the true element continues past the window).
pub fn liouville_element(p: u64, depth: i64) -> Result<LaurentTrunc, ExponentError> {
    if depth < 1 {
        return Err(ExponentError::BadDepth(depth));
    }
    let mut digits = vec![0u64; depth as usize];
    let mut f: i64 = 1;
    let mut n: i64 = 1;
    while f <= depth {
        digits[(f - 1) as usize] = p - 1;
        n += 1;
        f = f.saturating_mul(n);
    }
    Ok(LaurentTrunc::from_digits(p, 1, digits, false).expect("digits in range"))
}

/// First index at which the digit expansions of two constructed elements
/// differ, comparing the final stages exactly.
pub fn first_digit_difference(a: &ConstructionState, b: &ConstructionState) -> Option<i64> {
    let da = &a.final_stage().digits;
    let db = &b.final_stage().digits;
    let depth = a.final_stage().v.max(b.final_stage().v);
    (1..=depth).find(|&i| da.digit(i).unwrap_or(0) != db.digit(i).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn schedule_for_cubic_power_law() {
        let psi = PsiSpec::power_law(rat(3, 1));
        let s = schedule(&psi, 3, 5).unwrap();
        assert_eq!(s.u(), &[1, 2, 5, 14, 41]);
        assert_eq!(s.v(), &[1, 4, 13, 40, 121]);
    }

    #[test]
    fn schedule_rejects_quadratic() {
        let psi = PsiSpec::power_law(rat(2, 1));
        assert!(matches!(
            schedule(&psi, 3, 4),
            Err(ExponentError::HypothesisViolated(_))
        ));
        // steps with constant x^2 psi: e(n) = 2n
        let psi = PsiSpec::affine_ceil(rat(2, 1), rat(0, 1));
        assert!(matches!(
            schedule(&psi, 3, 4),
            Err(ExponentError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn schedule_other_exponents() {
        // tau = 5/2
        let s = schedule(&PsiSpec::power_law(rat(5, 2)), 3, 7).unwrap();
        assert_eq!(s.u(), &[1, 1, 2, 5, 11, 27, 67]);
        assert_eq!(s.v(), &[1, 3, 8, 21, 53, 133, 333]);
        // tau = 4: u_{i+1} = 2 v_i + 1
        let s = schedule(&PsiSpec::power_law(rat(4, 1)), 3, 5).unwrap();
        assert_eq!(s.u(), &[1, 3, 11, 43, 171]);
        assert_eq!(s.v(), &[1, 5, 21, 85, 341]);
        // the log-corrected function takes the guarded float path
        let s = schedule(&PsiSpec::LogCorrected, 3, 6).unwrap();
        assert_eq!(s.u()[0], 1);
        for w in s.u().windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn construct_stages() {
        let psi = PsiSpec::power_law(rat(3, 1));
        let sched = schedule(&psi, 3, 4).unwrap();

        // stage 1: [0; 2X] with value -1/X = 2/X
        let st = construct(&sched, 1).unwrap();
        let s1 = st.final_stage();
        assert_eq!(s1.cf.quotients().len(), 1);
        assert_eq!(s1.cf.quotients()[0], Poly::monomial(3, 2, 1));
        let minus_inv_x = RatFun::new(Poly::constant(3, 2), Poly::monomial(3, 1, 1)).unwrap();
        assert_eq!(s1.value, minus_inv_x);

        // stage 2: value -1/X - 1/X^4, digits 2002
        let st = construct(&sched, 2).unwrap();
        let s2 = st.final_stage();
        assert_eq!(s2.v, 4);
        assert_eq!(s2.digits.digit_slice(), &[2, 0, 0, 2]);

        // stage 3: denominator X^13, digits 2 exactly at 1, 4, 13
        let st = construct(&sched, 3).unwrap();
        let s3 = st.final_stage();
        assert_eq!(s3.v, 13);
        assert_eq!(s3.value.denominator(), &Poly::monomial(3, 1, 13));
        for i in 1..=13 {
            let expect = if i == 1 || i == 4 || i == 13 { 2 } else { 0 };
            assert_eq!(s3.digits.digit(i), Some(expect), "digit {i}");
        }
    }

    #[test]
    fn verify_window_cubic() {
        let psi = PsiSpec::power_law(rat(3, 1));
        let sched = schedule(&psi, 3, 4).unwrap();
        let st = construct(&sched, 3).unwrap();
        let report = verify_window(&st, &sched, &psi, &rat(3, 10)).unwrap();
        assert!(report.all_pass);
        // stage errors are 3^-4 < 3^-3 and 3^-13 < 3^-12
        assert_eq!(report.stage_checks[0].error_exponent, 4);
        assert_eq!(report.stage_checks[1].error_exponent, 13);
        // the block-maximal quotient attains the product bound exactly
        assert!(report
            .convergent_checks
            .iter()
            .any(|c| c.product_bound_attained));

        // c at the open endpoint is rejected
        assert!(matches!(
            verify_window(&st, &sched, &psi, &rat(1, 3)),
            Err(ExponentError::BadConstant { p: 3 })
        ));
    }

    #[test]
    fn tau_estimates_from_construction() {
        let psi = PsiSpec::power_law(rat(3, 1));
        let sched = schedule(&psi, 3, 5).unwrap();
        let st = construct(&sched, 5).unwrap();
        let est = estimate_tau(&st.final_stage().cf).unwrap();
        // per-stage witnesses (u_{n+1} + 2 v_n)/v_n = v_{n+1}/v_n at s = v_n:
        // 4, 13/4, 40/13, 121/40
        for (v_next, vn) in [(4i64, 1i64), (13, 4), (40, 13), (121, 40)] {
            let tau = est
                .per_j
                .iter()
                .find(|(j, _)| st.final_stage().cf.denominator_degree(*j) == vn)
                .map(|(_, t)| t.clone())
                .expect("stage denominators appear among convergents");
            assert_eq!(tau, rat(v_next, vn));
        }
        // the global maximum is the first-stage witness 4
        assert_eq!(est.estimate, rat(4, 1));

        // witness convergence: the bracket forces 0 < v_{n+1} - tau v_n <= 1,
        // so each per-stage witness is within 1/v_n of tau
        for (n, &vn) in sched.v()[..4].iter().enumerate() {
            let v_next = sched.v()[n + 1];
            let witness = rat(v_next, vn);
            let gap = witness - rat(3, 1);
            assert!(gap > BigRational::zero() && gap <= rat(1, vn));
        }
    }

    #[test]
    fn liouville_digits() {
        let t = liouville_element(3, 6).unwrap();
        let ones: Vec<i64> = (1..=6).filter(|&i| t.digit(i) == Some(2)).collect();
        assert_eq!(ones, vec![1, 2, 6]);

        let t = liouville_element(3, 24).unwrap();
        assert_eq!(t.digit(24), Some(2));
        assert_eq!(t.in_mds(&[0, 2], 24).unwrap(), MdsCheck::Yes);
    }

    #[test]
    fn perturbation() {
        let psi = PsiSpec::power_law(rat(3, 1));
        let sched = schedule(&psi, 3, 4).unwrap();

        // empty bits: the (1, u_1) prefix only
        let p0 = sched.perturb(&[]).unwrap();
        assert_eq!(p0.u(), &[1, 1]);

        let pa = sched.perturb(&[1, 1]).unwrap();
        let pb = sched.perturb(&[2, 1]).unwrap();
        assert_eq!(pa.u(), &[1, 1, 1, 2, 1, 5]);
        assert_eq!(pb.u(), &[1, 1, 2, 2, 1, 5]);

        let sa = construct(&pa, pa.len()).unwrap();
        let sb = construct(&pb, pb.len()).unwrap();
        let diff = first_digit_difference(&sa, &sb).expect("expansions differ");
        assert!(diff <= sa.final_stage().v.max(sb.final_stage().v));

        // digits stay in {0, 2} for every perturbation (construct asserts it)
        assert!(matches!(
            sched.perturb(&[3]),
            Err(ExponentError::BadPerturbBit(3))
        ));
    }
}

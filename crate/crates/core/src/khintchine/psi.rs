//! Approximation functions psi and dimension functions f, with the exact
//! power-of-p step forms the measure experiments require and the guarded
//! rounding used by the theta transform.
//!
//! A step function stores an integer exponent map n -> e(n) (psi(p^n) =
//! p^-e(n)); the affine-ceiling shape e(n) = ceil(a n + b) covers the
//! standard examples and the cap and theta transforms wrap it. Power-law and
//! log-corrected kinds take real values and are admitted only where the
//! exponent constructions need them.

use super::KhintchineError;
use crate::mds::GammaPair;
use num::{BigInt, BigRational, ToPrimitive, Zero};

/// Relative slack below which a rounding decision is refused as a tie.
pub const TIE_GUARD: f64 = 1e-9;

/// An approximation function on the grid {p^n}.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiSpec {
    /// psi(p^n) = p^-e(n) with an integer exponent map.
    Steps(StepPsi),
    /// psi(x) = x^-tau.
    PowerLaw { tau: BigRational },
    /// psi(x) = (x ln x)^-2.
    LogCorrected,
}

impl PsiSpec {
    pub fn affine_ceil(a: BigRational, b: BigRational) -> PsiSpec {
        PsiSpec::Steps(StepPsi::AffineCeil { a, b })
    }

    pub fn power_law(tau: BigRational) -> PsiSpec {
        PsiSpec::PowerLaw { tau }
    }

    /// The step form, when this is a step function.
    pub fn as_steps(&self) -> Result<&StepPsi, KhintchineError> {
        match self {
            PsiSpec::Steps(s) => Ok(s),
            _ => Err(KhintchineError::NonStepKind),
        }
    }

    /// -log_p psi(p^n) as an exact rational, when one exists.
    pub fn log_exponent_rational(&self, n: i64) -> Result<Option<BigRational>, KhintchineError> {
        match self {
            PsiSpec::Steps(s) => Ok(Some(BigRational::from_integer(BigInt::from(
                s.exponent(n)?,
            )))),
            PsiSpec::PowerLaw { tau } => Ok(Some(tau * BigRational::from_integer(BigInt::from(n)))),
            PsiSpec::LogCorrected => Ok(None),
        }
    }

    /// -log_p psi(p^n) as a float (for reporting and guarded paths).
    pub fn log_exponent_f64(&self, n: i64, p: u64) -> Result<f64, KhintchineError> {
        match self {
            PsiSpec::Steps(s) => Ok(s.exponent(n)? as f64),
            PsiSpec::PowerLaw { tau } => Ok(tau.to_f64().expect("finite rational") * n as f64),
            PsiSpec::LogCorrected => {
                if n < 1 {
                    return Err(KhintchineError::PsiNotEvaluable { n });
                }
                // psi(p^n) = (p^n * n ln p)^-2
                let lnp = (p as f64).ln();
                Ok(2.0 * (n as f64 + (n as f64 * lnp).ln() / lnp))
            }
        }
    }
}

/// Integer exponent maps for power-of-p step functions.
#[derive(Debug, Clone, PartialEq)]
pub enum StepPsi {
    /// e(n) = ceil(a n + b).
    AffineCeil { a: BigRational, b: BigRational },
    /// e(n) = max(n, inner(n)); the cap enforcing psi(p^n) <= p^-n.
    Capped(Box<StepPsi>),
    /// The theta transform of an inner step function by a dimension
    /// function: theta(p^n) is f(psi(p^n))^(1/gamma) rounded up to the next
    /// power of p.
    Theta {
        f: DimensionFunction,
        gamma: GammaPair,
        inner: Box<StepPsi>,
    },
}

impl StepPsi {
    /// Verify that e is non-decreasing over a queried range (psi
    /// non-increasing); invoked on demand, not on every evaluation.
    pub fn check_monotone_on(&self, from: i64, to: i64) -> Result<(), KhintchineError> {
        let mut prev = None;
        for n in from..=to {
            let e = self.exponent(n)?;
            if let Some(p) = prev {
                if e < p {
                    return Err(KhintchineError::NotMonotone { n, e, prev: p });
                }
            }
            prev = Some(e);
        }
        Ok(())
    }

    /// The exponent e(n) with psi(p^n) = p^-e(n). Exact except for the
    /// guarded float path inside theta, which can refuse a tie.
    pub fn exponent(&self, n: i64) -> Result<i64, KhintchineError> {
        match self {
            StepPsi::AffineCeil { a, b } => {
                let v = a * BigRational::from_integer(BigInt::from(n)) + b;
                let c = v.ceil().to_integer();
                c.to_i64().ok_or(KhintchineError::ExponentOverflow)
            }
            StepPsi::Capped(inner) => Ok(inner.exponent(n)?.max(n)),
            StepPsi::Theta { f, gamma, inner } => theta_exponent(f, *gamma, inner, n),
        }
    }
}

/// A dimension function f(r) = r^(lin + gam*gamma) * (ln(1/r))^log_exp.
///
/// The pure power shapes (log_exp = 0) cover both rational exponents and
/// rational multiples of the set dimension gamma; the log factor exists for
/// the log-corrected variants and forces the guarded float path.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionFunction {
    pub lin: BigRational,
    pub gam: BigRational,
    pub log_exp: i64,
}

impl DimensionFunction {
    /// f(r) = r^s with rational s.
    pub fn power(s: BigRational) -> Self {
        DimensionFunction {
            lin: s,
            gam: BigRational::zero(),
            log_exp: 0,
        }
    }

    /// f(r) = r^(t*gamma) with rational t; t = 1 is the natural measure.
    pub fn gamma_power(t: BigRational) -> Self {
        DimensionFunction {
            lin: BigRational::zero(),
            gam: t,
            log_exp: 0,
        }
    }

    /// Exponent pair of the exact value f(p^-e) = p^(-e*lin) * (#A)^(-e*gam),
    /// when both exponents land on integers. `None` when the value is not
    /// exactly representable.
    pub fn eval_at_step(&self, e: &BigRational) -> Option<(i64, i64)> {
        if self.log_exp != 0 {
            return None;
        }
        let a = e * &self.lin;
        let b = e * &self.gam;
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        Some((-a.to_integer().to_i64()?, -b.to_integer().to_i64()?))
    }

    /// Check the dimension-function properties on demand: f must vanish at
    /// 0 and be non-decreasing, which for this shape means a strictly
    /// positive total power exponent lin + gam*gamma. Decided exactly:
    /// lin + gam*gamma > 0 iff p^lin * (#A)^gam > 1 iff (with lin = a/d,
    /// gam = b/d over a common denominator d > 0) p^a * (#A)^b > 1.
    pub fn check_dimension_properties(&self, gamma: GammaPair) -> Result<(), KhintchineError> {
        let d = self.lin.denom() * self.gam.denom();
        let a = self.lin.numer() * self.gam.denom();
        let b = self.gam.numer() * self.lin.denom();
        debug_assert!(d > BigInt::zero());
        let p = BigInt::from(gamma.base);
        let k = BigInt::from(gamma.alphabet_size);
        // p^a * k^b > 1 with signed exponents: move negatives across
        let mut lhs = BigInt::from(1);
        let mut rhs = BigInt::from(1);
        let to_u32 = |x: &BigInt| x.to_u32().ok_or(KhintchineError::ExponentOverflow);
        if a >= BigInt::zero() {
            lhs *= p.pow(to_u32(&a)?);
        } else {
            rhs *= p.pow(to_u32(&(-&a))?);
        }
        if b >= BigInt::zero() {
            lhs *= k.pow(to_u32(&b)?);
        } else {
            rhs *= k.pow(to_u32(&(-&b))?);
        }
        if lhs <= rhs {
            return Err(KhintchineError::NotADimensionFunction);
        }
        Ok(())
    }

    /// Float value of f(r) for r = p^-x with the dimension pair supplied.
    pub fn eval_f64(&self, x: f64, gamma: GammaPair) -> f64 {
        let p = gamma.base;
        let lnp = (p as f64).ln();
        let lin = self.lin.to_f64().expect("finite");
        let gam = self.gam.to_f64().expect("finite");
        let g = gamma.to_f64();
        let log_factor = if self.log_exp == 0 {
            1.0
        } else {
            (x * lnp).powi(self.log_exp as i32)
        };
        (-x * (lin + gam * g) * lnp).exp() * log_factor
    }
}

/// Round a positive float up to the nearest power of p: the exponent k with
/// p^(k-1) < x <= p^k. Values whose base-p logarithm sits within the tie
/// guard of an integer are a hard error, not a silent rounding.
pub fn ceil_pow(x: f64, p: u64) -> Result<i64, KhintchineError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(KhintchineError::CeilDomain { value: x });
    }
    let t = x.ln() / (p as f64).ln();
    let nearest = t.round();
    if (t - nearest).abs() < TIE_GUARD {
        // x is indistinguishable from an exact power of p at float precision
        return Err(KhintchineError::TieGuard { log_value: t });
    }
    Ok(t.ceil() as i64)
}

/// theta(p^n) = f(psi(p^n))^(1/gamma) rounded up to the nearest power of p,
/// returned as the step exponent e with theta(p^n) = p^-e.
fn theta_exponent(
    f: &DimensionFunction,
    gamma: GammaPair,
    inner: &StepPsi,
    n: i64,
) -> Result<i64, KhintchineError> {
    let e = inner.exponent(n)?;
    // exact path: f(p^-e)^(1/gamma) = p^(-e*gam - e*lin/gamma); the lin part
    // is irrational in the exponent unless lin = 0
    if f.log_exp == 0 && f.lin.is_zero() {
        let t = -&f.gam * BigRational::from_integer(BigInt::from(e));
        // ceil of the exact exponent: p^ceil(t)
        let ceil_t = t
            .ceil()
            .to_integer()
            .to_i64()
            .ok_or(KhintchineError::ExponentOverflow)?;
        return Ok(-ceil_t);
    }
    // guarded float path
    let g = gamma.to_f64();
    let lnp = (gamma.base as f64).ln();
    let lin = f.lin.to_f64().expect("finite");
    let gam = f.gam.to_f64().expect("finite");
    let mut t = -(e as f64) * (lin / g + gam);
    if f.log_exp != 0 {
        if e <= 0 {
            return Err(KhintchineError::PsiNotEvaluable { n });
        }
        // (ln(1/psi))^log_exp = (e ln p)^log_exp contributes
        // log_exp * log_p(e ln p) / gamma to the exponent
        t += f.log_exp as f64 * ((e as f64) * lnp).ln() / lnp / g;
    }
    let nearest = t.round();
    if (t - nearest).abs() < TIE_GUARD {
        return Err(KhintchineError::TieGuard { log_value: t });
    }
    Ok(-(t.ceil() as i64))
}

/// The cap psi -> min(1/r, psi): pointwise exponent max(n, e(n)), so the
/// result satisfies psi(p^n) <= p^-n everywhere.
pub fn psi_cap(spec: &PsiSpec) -> Result<PsiSpec, KhintchineError> {
    let steps = spec.as_steps()?;
    Ok(PsiSpec::Steps(StepPsi::Capped(Box::new(steps.clone()))))
}

/// The theta transform as a step function.
pub fn theta(
    f: &DimensionFunction,
    spec: &PsiSpec,
    gamma: GammaPair,
) -> Result<PsiSpec, KhintchineError> {
    let steps = spec.as_steps()?;
    Ok(PsiSpec::Steps(StepPsi::Theta {
        f: f.clone(),
        gamma,
        inner: Box::new(steps.clone()),
    }))
}

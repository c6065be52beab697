//! Parsers for the psi / f spec strings and exact rationals.
//!
//! psi:  `ceil:a=<rat>,b=<rat>`  e(n) = ceil(a n + b), psi(p^n) = p^-e(n)
//!       `pow:tau=<rat>`         psi(x) = x^-tau
//!       `logcorr`               psi(x) = (x ln x)^-2
//! f:    `rpow:g=<rat>[,s=<rat>][,k=<int>]`  f(r) = r^(s + g*gamma) (ln 1/r)^k
//!       `gamma`                 shorthand for rpow:g=1

use ldcore::khintchine::{DimensionFunction, PsiSpec};
use num::{BigInt, BigRational};
use std::str::FromStr;

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| format!("bad rational numerator `{num}`"))?;
    let d = BigInt::from_str(den).map_err(|_| format!("bad rational denominator `{den}`"))?;
    if d == BigInt::from(0) {
        return Err("rational denominator is zero".into());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_fields(body: &str) -> Result<Vec<(String, String)>, String> {
    body.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("bad field `{kv}` (expected key=value)"))
        })
        .collect()
}

pub fn parse_psi(s: &str) -> Result<PsiSpec, String> {
    let s = s.trim();
    if s == "logcorr" {
        return Ok(PsiSpec::LogCorrected);
    }
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| format!("bad psi spec `{s}` (expected ceil:..., pow:..., or logcorr)"))?;
    let fields = parse_fields(body)?;
    match kind {
        "ceil" => {
            let mut a = None;
            let mut b = None;
            for (k, v) in fields {
                match k.as_str() {
                    "a" => a = Some(parse_rational(&v)?),
                    "b" => b = Some(parse_rational(&v)?),
                    other => return Err(format!("unknown ceil field `{other}`")),
                }
            }
            let a = a.ok_or("ceil needs a=<rat>")?;
            let b = b.ok_or("ceil needs b=<rat>")?;
            Ok(PsiSpec::affine_ceil(a, b))
        }
        "pow" => {
            let mut tau = None;
            for (k, v) in fields {
                match k.as_str() {
                    "tau" => tau = Some(parse_rational(&v)?),
                    other => return Err(format!("unknown pow field `{other}`")),
                }
            }
            Ok(PsiSpec::power_law(tau.ok_or("pow needs tau=<rat>")?))
        }
        other => Err(format!("unknown psi kind `{other}`")),
    }
}

pub fn parse_dimension_function(s: &str) -> Result<DimensionFunction, String> {
    let s = s.trim();
    if s == "gamma" {
        return Ok(DimensionFunction::gamma_power(BigRational::from_integer(
            BigInt::from(1),
        )));
    }
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| format!("bad f spec `{s}` (expected rpow:... or gamma)"))?;
    if kind != "rpow" {
        return Err(format!("unknown f kind `{kind}`"));
    }
    let mut g = None;
    let mut lin = None;
    let mut log_exp = 0i64;
    for (k, v) in parse_fields(body)? {
        match k.as_str() {
            "g" => g = Some(parse_rational(&v)?),
            "s" => lin = Some(parse_rational(&v)?),
            "k" => {
                log_exp = v
                    .parse::<i64>()
                    .map_err(|_| format!("bad log exponent `{v}`"))?
            }
            other => return Err(format!("unknown rpow field `{other}`")),
        }
    }
    Ok(DimensionFunction {
        lin: lin.unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))),
        gam: g.unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))),
        log_exp,
    })
}

pub fn parse_coeff_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad coefficient `{c}`"))
        })
        .collect()
}

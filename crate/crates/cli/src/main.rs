//! Command-line front end for exact missing-digit approximation
//! experiments.
//!
//! Exit codes: 0 success, 2 usage error, 3 precondition failure (bad input
//! data), 4 internal invariant breach (a closed form disagreed with an
//! enumeration — a bug, not a user error).

mod report;
mod speclang;

use clap::{Args, Parser, Subcommand};
use ldcore::cfrac::{cf_laurent, cf_rational, convergents, fold, CfStatus};
use ldcore::exponent::{construct, estimate_tau, schedule, verify_window};
use ldcore::khintchine::{series_partial, Experiment, KhintchineError, PsiSpec};
use ldcore::laurent::{read_digit_file, write_digit_file};
use ldcore::mds::{Cylinder, CylinderSet, MdsConfig};
use ldcore::{Poly, RatFun};
use num::{BigRational, ToPrimitive};
use report::*;
use serde::Deserialize;
use speclang::{
    format_rational, parse_coeff_list, parse_dimension_function, parse_psi, parse_rational,
};
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ldcli",
    version,
    about = "Exact experiments on missing-digit sets in F_p((1/X)): continued fractions, cylinder measures, and irrationality exponents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Report format: json, csv (khintchine records), digits (construct).
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct ConfigArgs {
    /// Prime modulus p.
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Digit alphabet as a comma list, e.g. 0,2.
    #[arg(long, default_value = "0,2")]
    alphabet: String,
}

#[derive(Subcommand)]
enum Command {
    /// Report the dimension ratio gamma = log(#A)/log(p).
    Dim {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Expand a rational function or a digit file into a continued fraction
    /// with its convergent table.
    Cf {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Numerator coefficients, ascending powers (e.g. 2,0,2).
        #[arg(long)]
        num: Option<String>,
        /// Denominator coefficients, ascending powers.
        #[arg(long)]
        den: Option<String>,
        /// Digit file to expand instead of a fraction.
        #[arg(long)]
        digits: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_terms: usize,
    },
    /// Apply the folding transform to a continued fraction.
    Fold {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// JSON array of coefficient lists (entry 0 is a0), or @file.
        #[arg(long)]
        cf: String,
        /// Folding polynomial coefficients, ascending powers.
        #[arg(long)]
        t: String,
    },
    /// Measure a cylinder set from its JSON description.
    Measure {
        /// Path to the cylinder-set JSON ("-" for stdin).
        #[arg(long)]
        input: String,
    },
    /// Run the approximation-set experiment: per-n measures, pairwise
    /// intersections, second-moment ratios, and series partial sums.
    Khintchine {
        #[command(flatten)]
        config: ConfigArgs,
        /// psi spec: ceil:a=<rat>,b=<rat> | pow:tau=<rat> | logcorr.
        #[arg(long)]
        psi: String,
        /// Dimension function spec: rpow:g=<rat>[,s=<rat>][,k=<int>] | gamma.
        #[arg(long, default_value = "gamma")]
        f: String,
        #[arg(long, default_value_t = 8)]
        nmax: i64,
        /// Report path (alias for --output).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build an element with prescribed approximation quality by iterated
    /// folding, verify its window, and emit its digits.
    Construct {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Target exponent tau (shorthand for pow:tau=...).
        #[arg(long)]
        tau: Option<String>,
        /// Full psi spec (overrides --tau).
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, default_value_t = 4)]
        stages: usize,
        /// Window constant c in (0, 1/p); defaults to 3/10 for p = 3.
        #[arg(long)]
        c: Option<String>,
        /// Write the digit stream here (laurent digit-file format).
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Report path (alias for --output).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Estimate the irrationality exponent from a digit file or a rational
    /// function.
    Exponent {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        digits: Option<PathBuf>,
        #[arg(long)]
        num: Option<String>,
        #[arg(long)]
        den: Option<String>,
        #[arg(long, default_value_t = 4096)]
        max_terms: usize,
    },
}

enum CliError {
    Usage(String),
    Precondition(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) | CliError::Invariant(m) => m,
        }
    }
}

fn precondition<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Precondition(e.to_string())
}

fn khintchine_error(e: KhintchineError) -> CliError {
    if e.is_invariant_breach() {
        CliError::Invariant(e.to_string())
    } else {
        CliError::Precondition(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ldcli: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let depth_guard = std::env::var("LD_MAX_DEPTH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .unwrap_or(ldcore::khintchine::DEFAULT_DEPTH_GUARD);
    match cli.command {
        Command::Dim { ref config } => {
            let cfg = parse_config(config)?;
            let doc = DimReport {
                metadata: metadata_for(&cfg, None, None),
                gamma: gamma_record(&cfg),
            };
            write_output(&cli, serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Cf {
            p,
            ref num,
            ref den,
            ref digits,
            max_terms,
        } => {
            let (cf, status, meta_p) = match (num, den, digits) {
                (Some(n), Some(d), None) => {
                    let x = parse_ratfun(p, n, d)?;
                    let full = cf_rational(&x);
                    (full, CfStatus::Complete, p)
                }
                (None, None, Some(path)) => {
                    let file = fs::File::open(path).map_err(precondition)?;
                    let (trunc, _alphabet) =
                        read_digit_file(std::io::BufReader::new(file)).map_err(precondition)?;
                    let (cf, status) = cf_laurent(&trunc, max_terms);
                    let p = trunc.modulus();
                    (cf, status, p)
                }
                _ => {
                    return Err(CliError::Usage(
                        "cf needs either --num and --den, or --digits".into(),
                    ))
                }
            };
            let table = convergents(&cf);
            let rows: Vec<ConvergentRecord> = (0..table.len())
                .map(|j| {
                    let (pj, qj) = table.row(j).unwrap();
                    ConvergentRecord {
                        j,
                        p: pj.coeff_vec(),
                        q: qj.coeff_vec(),
                        q_degree: table.denominator_degree(j).unwrap(),
                    }
                })
                .collect();
            let mut metadata = Metadata::new();
            metadata.p = Some(meta_p);
            let doc = CfReport {
                metadata,
                cf: cf_to_lists(&cf),
                status: status_str(status).into(),
                convergents: rows,
            };
            write_output(&cli, serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Fold { p, ref cf, ref t } => {
            let text = if let Some(path) = cf.strip_prefix('@') {
                fs::read_to_string(path).map_err(precondition)?
            } else {
                cf.clone()
            };
            let lists: Vec<Vec<u64>> = serde_json::from_str(&text)
                .map_err(|e| CliError::Precondition(format!("bad cf JSON: {e}")))?;
            let input = cf_from_lists(p, &lists).map_err(CliError::Precondition)?;
            let t_poly = Poly::new(p, &parse_coeff_list(t).map_err(CliError::Usage)?)
                .map_err(precondition)?;
            let folded = fold(&input, &t_poly).map_err(precondition)?;
            // value identity: folded = input + (-1)^n / (t Q_n^2)
            let table = convergents(&input);
            let (_, q_n) = table.row(input.len()).unwrap();
            let sign = if input.len() % 2 == 0 {
                Poly::one(p)
            } else {
                Poly::one(p).neg()
            };
            let delta = RatFun::new(sign, t_poly.mul(&q_n.mul(q_n))).map_err(precondition)?;
            let folded_value = convergents(&folded).value(folded.len()).unwrap();
            let expected = table.value(input.len()).unwrap().add(&delta);
            if folded_value != expected {
                return Err(CliError::Invariant("folding value identity failed".into()));
            }
            let mut metadata = Metadata::new();
            metadata.p = Some(p);
            let doc = FoldReport {
                metadata,
                input: lists,
                t: t_poly.coeff_vec(),
                folded: cf_to_lists(&folded),
                value_num: folded_value.numerator().coeff_vec(),
                value_den: folded_value.denominator().coeff_vec(),
                identity_checked: true,
            };
            write_output(&cli, serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Measure { ref input } => {
            let text = if input == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(precondition)?;
                s
            } else {
                fs::read_to_string(input).map_err(precondition)?
            };
            #[derive(Deserialize)]
            struct CylinderSetDoc {
                p: u64,
                alphabet: Vec<u64>,
                cylinders: Vec<Vec<u64>>,
            }
            let doc: CylinderSetDoc = serde_json::from_str(&text)
                .map_err(|e| CliError::Precondition(format!("bad cylinder-set JSON: {e}")))?;
            let cfg = MdsConfig::new(doc.p, &doc.alphabet).map_err(precondition)?;
            let set = CylinderSet::from_cylinders(
                doc.p,
                doc.cylinders.into_iter().map(Cylinder::new).collect(),
            )
            .map_err(precondition)?;
            let measure = set.measure(&cfg).map_err(precondition)?;
            let out = MeasureReport {
                metadata: metadata_for(&cfg, None, None),
                cylinder_count: set.len(),
                measure: format_rational(&measure),
                measure_approx: measure.to_f64().unwrap_or(f64::NAN),
            };
            println!("{}", format_rational(&measure));
            if cli.output.is_some() {
                write_output(&cli, serde_json::to_string_pretty(&out).unwrap())?;
            }
            Ok(())
        }
        Command::Khintchine {
            ref config,
            ref psi,
            ref f,
            nmax,
            ref report,
        } => {
            let cfg = parse_config(config)?;
            let psi_spec = parse_psi(psi).map_err(CliError::Usage)?;
            let f_spec = parse_dimension_function(f).map_err(CliError::Usage)?;
            if nmax < 1 {
                return Err(CliError::Usage(format!("--nmax must be >= 1, got {nmax}")));
            }
            let exp = Experiment::new(&cfg, &psi_spec)
                .map_err(khintchine_error)?
                .with_depth_guard(depth_guard);
            // demand the declared shape properties over the queried range
            psi_spec
                .as_steps()
                .map_err(khintchine_error)?
                .check_monotone_on(1, nmax)
                .map_err(khintchine_error)?;
            f_spec
                .check_dimension_properties(cfg.gamma())
                .map_err(khintchine_error)?;
            let mut records = Vec::new();
            for n in 1..=nmax {
                let r = exp.build_astar(n).map_err(khintchine_error)?;
                records.push(MeasureRecord {
                    n,
                    exponent: r.psi_exponent,
                    cylinder_count: r.set.len(),
                    measure: format_rational(&r.measure),
                    formula: format_rational(&r.formula),
                    matches: r.matches,
                });
            }
            let mut pairwise = Vec::new();
            for m in 1..=nmax {
                for n in (m + 1)..=nmax {
                    let (mu, regime) = exp.pairwise_measure(m, n).map_err(khintchine_error)?;
                    pairwise.push(PairwiseRecord {
                        m,
                        n,
                        measure: format_rational(&mu),
                        regime: match regime {
                            ldcore::khintchine::Regime::Empty => "empty".into(),
                            ldcore::khintchine::Regime::Product => "product".into(),
                        },
                    });
                }
            }
            let mut bc = Vec::new();
            for n in 1..=nmax {
                let ratio = exp.bc_ratio_closed_form(n).map_err(khintchine_error)?;
                let enumerated_agrees = if n <= 8 {
                    let e = exp.bc_ratio(n).map_err(khintchine_error)?;
                    Some(e == ratio)
                } else {
                    None
                };
                bc.push(BcRecord {
                    n_max: n,
                    ratio_approx: ratio.to_f64().unwrap_or(f64::NAN),
                    ratio: format_rational(&ratio),
                    enumerated_agrees,
                });
            }
            let series =
                series_partial(&f_spec, &psi_spec, nmax, &cfg).map_err(khintchine_error)?;
            let series_section = SeriesSection {
                terms: (1..=nmax)
                    .map(|n| {
                        let i = (n - 1) as usize;
                        SeriesRecord {
                            n,
                            term: series.terms_exact[i].as_ref().map(format_rational),
                            term_approx: series.terms_approx[i],
                        }
                    })
                    .collect(),
                partial_sum: series.partial_sum.as_ref().map(format_rational),
                partial_sum_approx: series.partial_sum_approx,
                trend: format!("{:?}", series.trend).to_lowercase(),
            };
            let doc = KhintchineReport {
                metadata: metadata_for(&cfg, Some(psi.clone()), Some(f.clone())),
                records,
                pairwise,
                bc_ratio: bc,
                series: series_section,
            };
            let out_path = report.clone().or_else(|| cli.output.clone());
            let body = match cli.format.as_str() {
                "json" => serde_json::to_string_pretty(&doc).unwrap(),
                "csv" => khintchine_csv(&doc),
                other => {
                    return Err(CliError::Usage(format!(
                        "format `{other}` is not supported for khintchine"
                    )))
                }
            };
            write_to(out_path, body)
        }
        Command::Construct {
            p,
            ref tau,
            ref psi,
            stages,
            ref c,
            ref emit,
            ref report,
        } => {
            let psi_spec = match (psi, tau) {
                (Some(s), _) => parse_psi(s).map_err(CliError::Usage)?,
                (None, Some(t)) => PsiSpec::power_law(parse_rational(t).map_err(CliError::Usage)?),
                (None, None) => {
                    return Err(CliError::Usage("construct needs --tau or --psi".into()))
                }
            };
            if stages < 2 {
                return Err(CliError::Usage("construct needs --stages >= 2".into()));
            }
            let c_value = match c {
                Some(s) => parse_rational(s).map_err(CliError::Usage)?,
                None if p == 3 => parse_rational("3/10").unwrap(),
                None => BigRational::new(1.into(), (p + 1).into()),
            };
            let sched = schedule(&psi_spec, p, stages).map_err(precondition)?;
            let state = construct(&sched, stages).map_err(precondition)?;
            let window =
                verify_window(&state, &sched, &psi_spec, &c_value).map_err(precondition)?;
            let est = estimate_tau(&state.final_stage().cf).map_err(precondition)?;

            let stage_records: Vec<StageRecord> = state
                .stages()
                .iter()
                .enumerate()
                .map(|(i, st)| StageRecord {
                    stage: i + 1,
                    u: sched.u()[i],
                    v: st.v,
                    digits: st
                        .digits
                        .digit_slice()
                        .iter()
                        .map(|&d| char::from(b'0' + d as u8))
                        .collect(),
                    value_num: st.value.numerator().coeff_vec(),
                    value_den: st.value.denominator().coeff_vec(),
                })
                .collect();
            let stage_errors: Vec<StageErrorRecord> = window
                .stage_checks
                .iter()
                .map(|sc| StageErrorRecord {
                    stage: sc.stage,
                    error_exponent: sc.error_exponent,
                    below_psi: sc.error_below_psi,
                })
                .collect();
            let tau_estimates: Vec<TauRecord> = state.stages()[..state.stages().len() - 1]
                .iter()
                .enumerate()
                .filter_map(|(i, st)| {
                    est.per_j
                        .iter()
                        .find(|(j, _)| state.final_stage().cf.denominator_degree(*j) == st.v)
                        .map(|(_, t)| TauRecord {
                            stage: i + 1,
                            denominator_degree: st.v,
                            tau: format_rational(t),
                            tau_approx: t.to_f64().unwrap_or(f64::NAN),
                        })
                })
                .collect();
            let doc = ConstructReport {
                metadata: {
                    let mut m = Metadata::new();
                    m.p = Some(p);
                    m.psi = Some(match psi {
                        Some(s) => s.clone(),
                        None => format!("pow:tau={}", tau.as_ref().unwrap()),
                    });
                    m
                },
                u: sched.u().to_vec(),
                v: sched.v().to_vec(),
                stages: stage_records,
                stage_errors,
                tau_estimates,
                window: WindowSection {
                    c: format_rational(&c_value),
                    all_pass: window.all_pass,
                    stages_checked: window.stage_checks.len(),
                    convergents_checked: window.convergent_checks.len(),
                    product_bound_attained: window
                        .convergent_checks
                        .iter()
                        .any(|cc| cc.product_bound_attained),
                },
            };
            if let Some(path) = emit {
                let mut file = fs::File::create(path).map_err(precondition)?;
                let alphabet = [0, p - 1];
                write_digit_file(&mut file, &state.final_stage().digits, &alphabet)
                    .map_err(precondition)?;
            }
            let out_path = report.clone().or_else(|| cli.output.clone());
            let body = match cli.format.as_str() {
                "json" => serde_json::to_string_pretty(&doc).unwrap(),
                "digits" => {
                    let mut buf = Vec::new();
                    write_digit_file(&mut buf, &state.final_stage().digits, &[0, p - 1])
                        .map_err(precondition)?;
                    String::from_utf8(buf).expect("ascii digit file")
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "format `{other}` is not supported for construct"
                    )))
                }
            };
            write_to(out_path, body)
        }
        Command::Exponent {
            p,
            ref digits,
            ref num,
            ref den,
            max_terms,
        } => {
            let (cf, status) = match (digits, num, den) {
                (Some(path), None, None) => {
                    let file = fs::File::open(path).map_err(precondition)?;
                    let (trunc, _) =
                        read_digit_file(std::io::BufReader::new(file)).map_err(precondition)?;
                    cf_laurent(&trunc, max_terms)
                }
                (None, Some(n), Some(d)) => {
                    let x = parse_ratfun(p, n, d)?;
                    (cf_rational(&x), CfStatus::Complete)
                }
                _ => {
                    return Err(CliError::Usage(
                        "exponent needs either --digits, or --num and --den".into(),
                    ))
                }
            };
            let est = estimate_tau(&cf).map_err(precondition)?;
            let per_j: Vec<TauEntry> = est
                .per_j
                .iter()
                .map(|(j, t)| TauEntry {
                    j: *j,
                    denominator_degree: cf.denominator_degree(*j),
                    next_quotient_degree: cf.quotient(j + 1).unwrap().degree().unwrap() as i64,
                    tau: format_rational(t),
                    tau_approx: t.to_f64().unwrap_or(f64::NAN),
                })
                .collect();
            let mut metadata = Metadata::new();
            metadata.p = Some(cf.modulus());
            let doc = ExponentReport {
                metadata,
                cf_status: status_str(status).into(),
                quotients_used: cf.len(),
                per_j,
                estimate: format_rational(&est.estimate),
                estimate_approx: est.estimate.to_f64().unwrap_or(f64::NAN),
                max_denominator_degree: est.max_denominator_degree,
            };
            write_output(&cli, serde_json::to_string_pretty(&doc).unwrap())
        }
    }
}

fn parse_config(config: &ConfigArgs) -> Result<MdsConfig, CliError> {
    let alphabet = parse_coeff_list(&config.alphabet).map_err(CliError::Usage)?;
    MdsConfig::new(config.p, &alphabet).map_err(precondition)
}

fn parse_ratfun(p: u64, num: &str, den: &str) -> Result<RatFun, CliError> {
    let n = Poly::new(p, &parse_coeff_list(num).map_err(CliError::Usage)?).map_err(precondition)?;
    let d = Poly::new(p, &parse_coeff_list(den).map_err(CliError::Usage)?).map_err(precondition)?;
    RatFun::new(n, d).map_err(precondition)
}

fn gamma_record(cfg: &MdsConfig) -> GammaRecord {
    let g = cfg.gamma();
    GammaRecord {
        alphabet_size: g.alphabet_size,
        base: g.base,
        approx: g.to_f64(),
    }
}

fn metadata_for(cfg: &MdsConfig, psi: Option<String>, f: Option<String>) -> Metadata {
    let mut m = Metadata::new();
    m.p = Some(cfg.modulus());
    m.alphabet = Some(cfg.alphabet().to_vec());
    m.gamma = Some(gamma_record(cfg));
    m.psi = psi;
    m.f = f;
    m
}

fn khintchine_csv(doc: &KhintchineReport) -> String {
    let mut out = String::from("n,exponent,cylinder_count,measure,formula,matches\n");
    for r in &doc.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.exponent, r.cylinder_count, r.measure, r.formula, r.matches
        ));
    }
    out
}

fn write_output(cli: &Cli, body: String) -> Result<(), CliError> {
    write_to(cli.output.clone(), body)
}

fn write_to(path: Option<PathBuf>, body: String) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(&p, body.as_bytes())
            .map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

//! Command-line front end: local reports, verification scans, root scans,
//! cusp tables, Fourier profiles and Watson constants.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use rslocal::cusps::{enumerate_cusps, scaling_matrix, ScalingMatrix};
use rslocal::exact::{parse_rational, QSqrtP};
use rslocal::fourier::fourier_profile;
use rslocal::rankin_selberg::{local_report, rh_roots};
use rslocal::report::{ser_f64, to_json};
use rslocal::rep::{RepDescriptor, RepKind, Type3Param};
use rslocal::scan::{run_scan, ScanConfig, Tolerances};
use rslocal::watson::{bound_factor, bound_factor_exact, watson_constant, watson_constant_at_half, LevelSpec};
use rslocal::{Error, Result};

#[derive(Parser)]
#[command(name = "rslocal", version, about = "Exact local Rankin-Selberg integrals, cusp data and Watson constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one local representation.
    Local {
        #[command(flatten)]
        rep: RepArgs,
        /// Number of R_{-k} coefficients listed and checked.
        #[arg(long, default_value_t = 12)]
        depth: i32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Runs every invariant over an enumeration of representations.
    Scan {
        /// Comma-separated primes; an empty list is a trivial scan.
        #[arg(long, default_value = "2,3,5,7")]
        primes: String,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Exact Type 3 parameters (default: a fixed sample per prime).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<String>>,
        /// Real s0 values for numeric Type 3 representations.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.3")]
        s0: Vec<f64>,
        #[arg(long, default_value_t = 12)]
        depth: i32,
        /// Root deviation tolerance (default 1e-8 or $RSLOCAL_TOL).
        #[arg(long)]
        rh_tol: Option<f64>,
        /// Slack in the bound comparisons.
        #[arg(long, default_value_t = 1e-9)]
        eval_tol: f64,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Roots of the unit-normalized J* and their distance from |t| = p^{-1/2}.
    Rh {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Cusps of Gamma0(q) with widths.
    Cusps {
        q: u64,
        /// Include a scaling matrix for every cusp.
        #[arg(long)]
        matrices: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Mean-square Fourier coefficients at cusps of a given denominator.
    Fourier {
        #[command(flatten)]
        rep: RepArgs,
        /// Exponent of p in the cusp denominator.
        #[arg(long)]
        c_exp: Option<u32>,
        /// Level descriptor, e.g. "2:type1,1,1;3:level1", instead of a single representation.
        #[arg(long)]
        level: Option<String>,
        /// Cusp denominator (with --level).
        #[arg(long)]
        c: Option<u64>,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Watson constant and the conductor-dependent bound factor.
    Watson {
        #[arg(long)]
        level: String,
        /// Point s, e.g. 0.5 or 0.5+2.3i.
        #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Args, Default)]
struct RepArgs {
    #[arg(long)]
    p: Option<u32>,
    /// spherical, level1, or 1..5
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "N")]
    big_n: Option<u32>,
    #[arg(long)]
    axi: Option<u32>,
    #[arg(long)]
    axisq: Option<u32>,
    #[arg(long)]
    abeta: Option<u32>,
    #[arg(long)]
    abetasq: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    s0: Option<f64>,
    /// Satake trace alpha^2 + alpha^-2 of a spherical representation.
    #[arg(long, allow_hyphen_values = true)]
    satake: Option<String>,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

fn rational(s: &str, flag: &str) -> Result<rslocal::exact::Rational> {
    parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("--{flag}: not a rational number: {s:?}")))
}

impl RepArgs {
    fn descriptor(&self) -> Result<RepDescriptor> {
        let p = need(self.p, "p")?;
        let kind = need(self.kind.as_deref(), "type")?.to_ascii_lowercase();
        let kind = match kind.trim_start_matches("type") {
            "spherical" | "0" => RepKind::Spherical {
                satake_trace: self.satake.as_deref().map(|s| rational(s, "satake")).transpose()?,
            },
            "level1" | "steinberg" => RepKind::Level1,
            "1" => {
                let a_xi = need(self.axi, "axi")?;
                RepKind::Type1 { a_xi, a_xi_sq: self.axisq.unwrap_or(a_xi) }
            }
            "2" => {
                let n = need(self.n, "n")?;
                let big_n = match self.big_n {
                    Some(v) => v,
                    None if n % 2 == 1 => n + 1,
                    None => return Err(Error::InvalidInput("--N is required for even n".into())),
                };
                RepKind::Type2 { n, big_n }
            }
            "3" => {
                let a_beta = need(self.abeta, "abeta")?;
                let b = match (&self.b, self.s0) {
                    (Some(b), None) => Type3Param::Exact(rational(b, "b")?),
                    (None, Some(s0)) => Type3Param::from_s0(p, s0),
                    (None, None) => {
                        // report descriptor errors such as a bad a_beta before the missing parameter
                        let probe = RepKind::Type3 { a_beta, b: Type3Param::Exact(rslocal::exact::int(0)) };
                        RepDescriptor::new(p, probe).validate()?;
                        return Err(Error::InvalidInput("Type 3 needs --b or --s0".into()));
                    }
                    (Some(_), Some(_)) => return Err(Error::InvalidInput("give only one of --b and --s0".into())),
                };
                RepKind::Type3 { a_beta, b }
            }
            "4" => {
                let a_beta = need(self.abeta, "abeta")?;
                RepKind::Type4 { a_beta, a_beta_sq: self.abetasq.unwrap_or(a_beta) }
            }
            "5" => RepKind::Type5 { a_beta: need(self.abeta, "abeta")? },
            other => return Err(Error::InvalidInput(format!("unknown --type {other:?}"))),
        };
        let rep = RepDescriptor::new(p, kind);
        rep.validate()?;
        Ok(rep)
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::InvalidInput(format!("--s: not a complex number: {text:?}"));
    let t = text.replace(' ', "");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse().map_err(|_| bad())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Output of one command: the rendered text and the exit code.
struct Output {
    text: String,
    code: u8,
}

fn json<T: Serialize>(v: &T, code: u8) -> Output {
    Output { text: to_json(v) + "\n", code }
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn f(x: f64) -> String {
    rslocal::report::fmt_f64(x)
}

#[derive(Serialize)]
struct CuspRow {
    c: u64,
    d: u64,
    width: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    scaling: Option<ScalingMatrix>,
}

#[derive(Serialize)]
struct FourierRow {
    k: u32,
    lambda_sq: String,
    #[serde(serialize_with = "ser_f64")]
    lambda: f64,
}

#[derive(Serialize)]
struct FourierOut {
    descriptor: RepDescriptor,
    q_exp: u32,
    c_exp: u32,
    rows: Vec<FourierRow>,
}

#[derive(Serialize)]
struct LevelFourierOut {
    q: u64,
    c: u64,
    primes: Vec<FourierOut>,
}

#[derive(Serialize)]
struct BoundOut {
    prefactor: String,
    base: u64,
    #[serde(serialize_with = "ser_f64")]
    theta: f64,
    #[serde(serialize_with = "ser_f64")]
    value: f64,
}

#[derive(Serialize)]
struct WatsonOut {
    level: LevelSpec,
    invariants: rslocal::watson::LevelInvariants,
    #[serde(serialize_with = "ser_f64")]
    s_re: f64,
    #[serde(serialize_with = "ser_f64")]
    s_im: f64,
    #[serde(serialize_with = "ser_f64")]
    constant_re: f64,
    #[serde(serialize_with = "ser_f64")]
    constant_im: f64,
    /// Exact value at s = 1/2 when every local factor is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    local_factors: Option<std::collections::BTreeMap<u32, QSqrtP>>,
    bound_factor: BoundOut,
}

fn fourier_out(rep: &RepDescriptor, c_exp: u32, kmax: u32) -> Result<FourierOut> {
    let prof = fourier_profile(rep, c_exp, kmax)?;
    let rows = prof.rows().into_iter().map(|(k, v, l)| FourierRow { k, lambda_sq: v.to_string(), lambda: l }).collect();
    Ok(FourierOut { descriptor: rep.clone(), q_exp: prof.q_exp, c_exp, rows })
}

fn fourier_rows(out: &FourierOut) -> impl Iterator<Item = Vec<String>> + '_ {
    out.rows.iter().map(move |r| {
        vec![out.descriptor.p.to_string(), out.c_exp.to_string(), r.k.to_string(), r.lambda_sq.clone(), f(r.lambda)]
    })
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Local { rep, depth, format } => {
            let report = local_report(&rep.descriptor()?, depth)?;
            let code = if report.all_passed() { 0 } else { 3 };
            Ok(match format {
                Format::Json => json(&report, code),
                Format::Csv => Output {
                    text: csv_rows(
                        &["check", "passed", "witness"],
                        report.checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.witness.clone()]),
                    ),
                    code,
                },
            })
        }
        Command::Scan { primes, n_max, b, s0, depth, rh_tol, eval_tol, jobs, output, format } => {
            let primes = primes
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse().map_err(|_| Error::InvalidInput(format!("--primes: bad entry {x:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            let type3_b_samples = b
                .map(|v| v.iter().filter(|x| !x.is_empty()).map(|x| rational(x, "b")).collect::<Result<Vec<_>>>())
                .transpose()?;
            let mut tolerances = Tolerances { eval_rel: eval_tol, ..Tolerances::default() };
            if let Some(t) = rh_tol {
                tolerances.rh_deviation = t;
            }
            let config = ScanConfig {
                primes,
                n_max,
                type3_b_samples,
                type3_s0_samples: s0,
                tolerances,
                r_depth: depth,
                jobs,
                ..ScanConfig::default()
            };
            let summary = run_scan(&config)?;
            let code = summary.exit_code as u8;
            let out = match format {
                Format::Json => json(&summary, code),
                Format::Csv => {
                    let mut rows: Vec<Vec<String>> = Vec::new();
                    for x in &summary.failures {
                        rows.push(vec!["failure".into(), x.descriptor.clone(), x.check.clone(), x.witness.clone()]);
                    }
                    for x in &summary.rh.exceptions {
                        let what = if x.expected { "expected" } else { "unexpected" };
                        rows.push(vec!["rh_exception".into(), x.descriptor.clone(), what.into(), f(x.max_deviation)]);
                    }
                    for x in &summary.lindelof.violations {
                        let what = if x.classical { "classical" } else { "non_classical" };
                        rows.push(vec!["lindelof".into(), x.descriptor.clone(), what.into(), f(x.worst_ratio)]);
                    }
                    Output { text: csv_rows(&["section", "descriptor", "detail", "value"], rows), code }
                }
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, &out.text)
                        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
                    Ok(Output { text: String::new(), code })
                }
                None => Ok(out),
            }
        }
        Command::Rh { rep, format } => {
            let scan = rh_roots(&rep.descriptor()?)?;
            Ok(match format {
                Format::Json => json(&scan, 0),
                Format::Csv => {
                    let d = &scan.descriptor;
                    let inv = d.validate()?;
                    let rows = scan.roots.iter().map(|r| {
                        vec![
                            d.p.to_string(),
                            d.kind_name().to_string(),
                            inv.n.to_string(),
                            inv.big_n.to_string(),
                            f(r.re),
                            f(r.im),
                            f(r.deviation),
                        ]
                    });
                    Output { text: csv_rows(&["p", "type", "n", "N", "root_re", "root_im", "deviation"], rows), code: 0 }
                }
            })
        }
        Command::Cusps { q, matrices, format } => {
            let rows: Vec<CuspRow> = enumerate_cusps(q)?
                .into_iter()
                .map(|c| {
                    let scaling = if matrices { Some(scaling_matrix(q, &c)?) } else { None };
                    Ok(CuspRow { c: c.c, d: c.d, width: c.width, scaling })
                })
                .collect::<Result<_>>()?;
            Ok(match format {
                Format::Json => json(&rows, 0),
                Format::Csv => {
                    let mut header = vec!["c", "d", "width"];
                    if matrices {
                        header.extend(["tau_a", "tau_b", "tau_c", "tau_d"]);
                    }
                    let body = rows.iter().map(|r| {
                        let mut v = vec![r.c.to_string(), r.d.to_string(), r.width.to_string()];
                        if let Some(m) = &r.scaling {
                            v.extend(m.tau.iter().flatten().map(|x| x.to_string()));
                        }
                        v
                    });
                    Output { text: csv_rows(&header, body), code: 0 }
                }
            })
        }
        Command::Fourier { rep, c_exp, level, c, kmax, format } => {
            let header = ["p", "c_exp", "k", "lambda_sq", "lambda"];
            if let Some(level) = level {
                let level = LevelSpec::parse(&level)?;
                let q = level.invariants()?.q;
                let c = need(c, "c")?;
                if c == 0 || q % c != 0 {
                    return Err(Error::InvalidInput(format!("{c} does not divide q = {q}")));
                }
                let primes = level
                    .reps
                    .values()
                    .map(|r| fourier_out(r, rslocal::arith::valuation(c, r.p as u64), kmax))
                    .collect::<Result<Vec<_>>>()?;
                let out = LevelFourierOut { q, c, primes };
                return Ok(match format {
                    Format::Json => json(&out, 0),
                    Format::Csv => Output { text: csv_rows(&header, out.primes.iter().flat_map(fourier_rows)), code: 0 },
                });
            }
            let out = fourier_out(&rep.descriptor()?, need(c_exp, "c-exp")?, kmax)?;
            Ok(match format {
                Format::Json => json(&out, 0),
                Format::Csv => Output { text: csv_rows(&header, fourier_rows(&out)), code: 0 },
            })
        }
        Command::Watson { level, s, theta, format } => {
            let level = LevelSpec::parse(&level)?;
            let s = parse_complex(&s)?;
            let value = watson_constant(&level, s)?;
            let (exact, local_factors) = if s == Complex64::new(0.5, 0.0) {
                let w = watson_constant_at_half(&level)?;
                (w.constant, Some(w.local_factors))
            } else {
                (None, None)
            };
            let bf = bound_factor_exact(&level)?;
            let bound = bound_factor(&level, theta)?;
            let out = WatsonOut {
                invariants: level.invariants()?,
                level,
                s_re: s.re,
                s_im: s.im,
                constant_re: value.re,
                constant_im: value.im,
                exact,
                local_factors,
                bound_factor: BoundOut { prefactor: bf.prefactor, base: bf.base, theta, value: bound },
            };
            Ok(match format {
                Format::Json => json(&out, 0),
                Format::Csv => {
                    let mut rows = vec![
                        vec!["q".to_string(), out.invariants.q.to_string()],
                        vec!["constant_re".into(), f(out.constant_re)],
                        vec!["constant_im".into(), f(out.constant_im)],
                    ];
                    if let Some(e) = &out.exact {
                        rows.push(vec!["exact".into(), e.clone()]);
                    }
                    rows.push(vec!["bound_prefactor".into(), out.bound_factor.prefactor.clone()]);
                    rows.push(vec!["bound_factor".into(), f(out.bound_factor.value)]);
                    Output { text: csv_rows(&["key", "value"], rows), code: 0 }
                }
            })
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: ErrorBody<'a>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(cli.command).unwrap_or_else(|e| {
        let code = e.exit_code();
        json(&ErrorOut { error: ErrorBody { kind: e.kind(), message: e.to_string(), exit_code: code } }, code as u8)
    });
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(out.text.as_bytes());
    ExitCode::from(out.code)
}

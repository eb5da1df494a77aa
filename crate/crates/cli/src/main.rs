//! Command-line front end for the Capelli identity verifier.

mod run;
mod suite;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use qcapelli::{Error, HeckeSymmetry, IdentityId, IdentitySpec, Mode, Options, QConfig, RatFunc, Scalar, VerificationReport};
use serde_json::{json, Value};

use run::Source;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "qcapelli", version, about = "Exact verification of quantum matrix Capelli identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify identities for one R-matrix.
    Verify(VerifyArgs),
    /// Check that an R-matrix is a skew-invertible Hecke symmetry of finite rank.
    Validate(ValidateArgs),
    /// Run a named batch of verifications (smoke or full).
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Number of threads used for parallel reduction.
    #[arg(long, env = "QCAPELLI_THREADS")]
    threads: Option<usize>,
    /// Upper bound on the number of rules a completion may produce.
    #[arg(long, env = "QCAPELLI_RULE_CAP", default_value_t = qcapelli::rewrite::DEFAULT_RULE_CAP)]
    rule_cap: usize,
    /// Largest word length (per alphabet) the rewriting systems are completed to.
    #[arg(long, env = "QCAPELLI_MAX_DEGREE", default_value_t = 6)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// dj, flip or file:PATH.
    #[arg(long, default_value = "dj")]
    rmatrix: Source,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    /// Identities to verify, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "th")]
    identity: Vec<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Replacement for the last shift (shift-scan), e.g. 0, 1, q^2.
    #[arg(long)]
    alpha: Option<String>,
    /// A rational value of q (default 3/5; 1 for the flip) or "symbolic".
    #[arg(long)]
    q: Option<String>,
    /// Several rational q values, comma separated; each is verified.
    #[arg(long, value_delimiter = ',')]
    q_samples: Vec<String>,
    /// Evaluate sandwiches and traces through a rank factorization.
    #[arg(long)]
    projected: bool,
    /// Verify at enough points to prove a polynomial identity in q.
    #[arg(long)]
    rigor: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value = "dj")]
    rmatrix: Source,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long)]
    q: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SuiteArgs {
    /// smoke or full.
    name: String,
    #[command(flatten)]
    common: Common,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) | Error::DegreeOverflow { .. } => EXIT_CAP,
        Error::Validation { .. } | Error::Convention(_) | Error::Calibration(_) | Error::Internal(_) => EXIT_FAIL,
        _ => EXIT_CONFIG,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn set_threads(threads: Option<usize>) -> Result<(), Error> {
    match threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        // read by the thread pool on first use
        Some(t) => {
            std::env::set_var("RAYON_NUM_THREADS", t.to_string());
            Ok(())
        }
        None => Ok(()),
    }
}

fn check_n(n: usize) -> Result<(), Error> {
    if n == 0 || n > qcapelli::ncalg::MAX_N {
        return Err(Error::Config(format!("--N must be in 1..={}", qcapelli::ncalg::MAX_N)));
    }
    Ok(())
}

fn options(c: &Common) -> Options {
    Options {
        rule_cap: c.rule_cap,
        max_degree: c.max_degree,
    }
}

fn record(r: &VerificationReport, opts: &Options, expected: Option<bool>) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    v["caps"] = json!({ "rule_cap": opts.rule_cap, "max_degree": opts.max_degree });
    if let Some(e) = expected {
        v["expected"] = json!(if e { "pass" } else { "fail" });
    }
    v
}

fn params_text(s: &IdentitySpec) -> String {
    let mut parts = Vec::new();
    if let Some(k) = s.k {
        parts.push(format!("k={k}"));
    }
    if let Some(p) = s.p {
        parts.push(format!("p={p}"));
    }
    if let Some(a) = &s.alpha {
        parts.push(format!("alpha={a}"));
    }
    if s.mode == Mode::Projected {
        parts.push("projected".into());
    }
    parts.iter().map(|p| format!(" {p}")).collect()
}

fn print(out: &mut impl Write, r: &VerificationReport, opts: &Options, format: Format, expected: Option<bool>) {
    let _ = match format {
        Format::Json => writeln!(out, "{}", record(r, opts, expected)),
        Format::Text => {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let expect = match expected {
                Some(false) => " (expected to fail)",
                _ => "",
            };
            let t = &r.timings_ms;
            let _ = writeln!(
                out,
                "{verdict} {} {}{} q={} [{}; build {} ms, completion {} ms, reduction {} ms]{expect}",
                r.identity,
                r.rmatrix,
                params_text(&r.params),
                r.q_points.join(","),
                r.backend,
                t.build,
                t.completion,
                t.reduction
            );
            for s in &r.residual_sample {
                let _ = writeln!(out, "    residual {s}");
            }
            for n in &r.notes {
                let _ = writeln!(out, "    note: {n}");
            }
            Ok(())
        }
    };
}

fn cmd_verify(a: VerifyArgs) -> ExitCode {
    let prepared = (|| -> Result<_, Error> {
        set_threads(a.common.threads)?;
        check_n(a.n)?;
        let ids = a
            .identity
            .iter()
            .map(|s| s.parse::<IdentityId>())
            .collect::<Result<Vec<_>, _>>()?;
        let specs: Vec<IdentitySpec> = ids
            .into_iter()
            .map(|id| IdentitySpec {
                identity: id,
                k: a.k,
                p: a.p,
                alpha: a.alpha.clone(),
                mode: if a.projected { Mode::Projected } else { Mode::Full },
            })
            .collect();
        if a.k == Some(0) {
            return Err(Error::Config("--k must be at least 1".into()));
        }
        if let Some(alpha) = &a.alpha {
            qcapelli::scalar::parse_scalar(alpha)?;
        }
        let qs = if a.rigor {
            Vec::new()
        } else {
            run::q_points(&a.rmatrix, a.q.as_deref(), &a.q_samples)?
        };
        Ok((specs, qs))
    })();
    let (specs, qs) = match prepared {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let opts = options(&a.common);
    let mut out = std::io::stdout().lock();
    let mut all_pass = true;
    for spec in &specs {
        let r = if a.rigor {
            run::verify_rigor(&a.rmatrix, a.n, spec, &opts, a.q_samples.len())
        } else {
            run::verify_points(&a.rmatrix, a.n, &qs, spec, &opts)
        };
        match r {
            Ok(r) => {
                all_pass &= r.passed();
                print(&mut out, &r, &opts, a.common.format, None);
            }
            Err(e) => return fail(e),
        }
    }
    ExitCode::from(if all_pass { 0 } else { EXIT_FAIL })
}

fn describe<S: Scalar>(h: &HeckeSymmetry<S>) -> Value {
    let v = &h.validation;
    json!({
        "rmatrix": h.name,
        "N": h.n(),
        "q": h.ctx.config().label(),
        "outcome": "pass",
        "braid": v.braid,
        "hecke": v.hecke,
        "skew_invertible": v.skew_invertible,
        "rank": v.rank,
        "image_dims": h.rank.dims,
        "c_matrix_from": v.c_from,
    })
}

fn cmd_validate(a: ValidateArgs) -> ExitCode {
    let result = (|| -> Result<Value, Error> {
        check_n(a.n)?;
        let qs = run::q_points(&a.rmatrix, a.q.as_deref(), &[])?;
        let q = &qs[0];
        Ok(if q.is_symbolic() {
            describe(&run::hecke::<RatFunc>(&a.rmatrix, a.n, q)?)
        } else {
            describe(&run::hecke::<BigRational>(&a.rmatrix, a.n, q)?)
        })
    })();
    match result {
        Ok(v) => {
            match a.format {
                Format::Json => println!("{v}"),
                Format::Text => println!(
                    "PASS {} N={} q={}: braid, Hecke and skew-invertibility hold; rank {} (image dims {}); C from {}",
                    v["rmatrix"].as_str().unwrap_or_default(),
                    v["N"],
                    v["q"].as_str().unwrap_or_default(),
                    v["rank"],
                    v["image_dims"],
                    v["c_matrix_from"].as_str().unwrap_or_default()
                ),
            }
            ExitCode::SUCCESS
        }
        Err(Error::Validation { check }) => {
            match a.format {
                Format::Json => println!("{}", json!({ "outcome": "fail", "failed_check": check })),
                Format::Text => println!("FAIL {check} check did not pass"),
            }
            ExitCode::from(EXIT_FAIL)
        }
        Err(e) => fail(e),
    }
}

fn cmd_suite(a: SuiteArgs) -> ExitCode {
    let Some(cases) = suite::cases(&a.name) else {
        return fail(Error::Config(format!(
            "unknown suite '{}', expected one of {}",
            a.name,
            suite::NAMES.join(", ")
        )));
    };
    if let Err(e) = set_threads(a.common.threads) {
        return fail(e);
    }
    let opts = options(&a.common);
    let mut out = std::io::stdout().lock();
    let (mut good, total) = (0usize, cases.len());
    for c in &cases {
        let r = if c.rigor {
            run::verify_rigor(&c.source, c.n, &c.spec, &opts, 0)
        } else {
            QConfig::parse(c.q).and_then(|q| run::verify_at(&c.source, c.n, &q, &c.spec, &opts))
        };
        match r {
            Ok(r) => {
                if r.passed() == c.expect_pass {
                    good += 1;
                }
                print(&mut out, &r, &opts, a.common.format, Some(c.expect_pass));
            }
            Err(e) => return fail(e),
        }
    }
    if a.common.format == Format::Text {
        let _ = writeln!(out, "{good}/{total} cases behaved as expected");
    }
    ExitCode::from(if good == total { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Suite(a) => cmd_suite(a),
    }
}

use std::path::PathBuf;

use num_rational::BigRational;
use qcapelli::capelli::rigor::verify_rigorous;
use qcapelli::rcatalog::{self, RMatrixFile};
use qcapelli::{verify, Error, HeckeSymmetry, IdentitySpec, Options, Outcome, QConfig, RatFunc, Result, Scalar, VerificationReport};

/// Where the R-matrix comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Dj,
    Flip,
    File(PathBuf),
}

impl std::str::FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dj" => Ok(Source::Dj),
            "flip" => Ok(Source::Flip),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Source::File(p.into())),
                _ => Err(format!("expected dj, flip or file:PATH, got '{s}'")),
            },
        }
    }
}

pub const DEFAULT_Q: &str = "3/5";

/// The q settings a run uses, resolved before any computation.
pub fn q_points(source: &Source, q: Option<&str>, samples: &[String]) -> Result<Vec<QConfig>> {
    if !samples.is_empty() {
        if q.is_some() {
            return Err(Error::Config("give either --q or --q-samples, not both".into()));
        }
        return samples.iter().map(|s| QConfig::parse(s)).collect();
    }
    let config = match (source, q) {
        (_, Some(text)) => QConfig::parse(text)?,
        (Source::Flip, None) => QConfig::classical(),
        (Source::File(path), None) => file_q(path)?,
        (Source::Dj, None) => QConfig::parse(DEFAULT_Q)?,
    };
    if matches!(source, Source::Flip) && !config.is_classical() {
        return Err(Error::Config("the flip is a Hecke symmetry only at q = 1".into()));
    }
    Ok(vec![config])
}

fn file_q(path: &PathBuf) -> Result<QConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RMatrixFile::from_json(&text)?.q_config()
}

pub fn hecke<S: Scalar>(source: &Source, n: usize, q: &QConfig) -> Result<HeckeSymmetry<S>> {
    match source {
        Source::Dj => rcatalog::dj(n, q.clone()),
        Source::Flip => rcatalog::flip(n),
        Source::File(path) => rcatalog::load(path, Some(q.clone())),
    }
}

pub fn verify_at(source: &Source, n: usize, q: &QConfig, spec: &IdentitySpec, opts: &Options) -> Result<VerificationReport> {
    if q.is_symbolic() {
        verify(hecke::<RatFunc>(source, n, q)?, spec, opts)
    } else {
        verify(hecke::<BigRational>(source, n, q)?, spec, opts)
    }
}

/// Runs `spec` at every q point and merges the results in point order.
pub fn verify_points(source: &Source, n: usize, qs: &[QConfig], spec: &IdentitySpec, opts: &Options) -> Result<VerificationReport> {
    let mut merged: Option<VerificationReport> = None;
    for q in qs {
        let r = verify_at(source, n, q, spec, opts)?;
        merged = Some(match merged {
            None => r,
            Some(mut m) => {
                let label = r.q_points.join(",");
                m.q_points.extend(r.q_points);
                if r.outcome == Outcome::Fail {
                    m.outcome = Outcome::Fail;
                }
                m.residual_terms += r.residual_terms;
                m.residual_sample
                    .extend(r.residual_sample.into_iter().map(|s| format!("q = {label}: {s}")));
                m.timings_ms.build += r.timings_ms.build;
                m.timings_ms.completion += r.timings_ms.completion;
                m.timings_ms.reduction += r.timings_ms.reduction;
                if m.backend != r.backend {
                    m.backend = format!("{}+{}", m.backend, r.backend);
                }
                for note in r.notes {
                    if !m.notes.contains(&note) {
                        m.notes.push(note);
                    }
                }
                m
            }
        });
    }
    merged.ok_or_else(|| Error::Config("no q points".into()))
}

/// Multi-point verification with a degree bound from the symbolic run.
pub fn verify_rigor(source: &Source, n: usize, spec: &IdentitySpec, opts: &Options, min_points: usize) -> Result<VerificationReport> {
    let h = match source {
        Source::Flip => return Err(Error::Config("rigor mode needs a q-dependent R-matrix".into())),
        _ => hecke::<RatFunc>(source, n, &QConfig::Symbolic)?,
    };
    verify_rigorous(&h.name, &h.r, spec, opts, min_points)
}

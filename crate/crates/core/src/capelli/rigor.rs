//! Multi-point verification upgraded to a proof.
//!
//! A coefficient of either side is `q^s n(q)/d(q)`. Cross-multiplying a
//! left and right coefficient gives a Laurent polynomial whose span bounds
//! the number of roots; if both sides agree at more points than the largest
//! span, they agree identically. Agreement at a point is only meaningful
//! when the fixed-q engine computes the specialization of the symbolic one,
//! so at each point the completed rules and both sides are compared against
//! the specialized symbolic results before the fixed check is counted.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{sides, IdentitySpec, Options, Outcome, Sides, Timings, VerificationReport};
use crate::error::{Error, Result};
use crate::ncalg::{NCPoly, Word};
use crate::rcatalog::{specialized, HeckeSymmetry};
use crate::rewrite::Reducer;
use crate::scalar::{QConfig, RatFunc};

use super::build::Engine;

/// Largest root count a nonzero cross-multiplied difference can have.
pub fn degree_bound(s: &Sides<RatFunc>) -> usize {
    let mut bound = 0i64;
    for (_, l, r) in &s.entries {
        let words: BTreeSet<&Word> = l.terms().map(|(w, _)| w).chain(r.terms().map(|(w, _)| w)).collect();
        for w in words {
            let zero = RatFunc::from_integer(0);
            let a = l.coefficient(w).unwrap_or(&zero);
            let b = r.coefficient(w).unwrap_or(&zero);
            let span = |x: &RatFunc| (x.shift(), deg(x.numerator()), deg(x.denominator()));
            let (s1, n1, d1) = span(a);
            let (s2, n2, d2) = span(b);
            let hi = (s1 + n1 + d2).max(s2 + n2 + d1);
            bound = bound.max(hi - s1.min(s2));
        }
    }
    bound as usize
}

fn deg(p: &crate::scalar::poly::Poly) -> i64 {
    p.degree().unwrap_or(0) as i64
}

/// Positive rationals other than 1, smallest height first.
pub fn sample_points() -> impl Iterator<Item = BigRational> {
    (2i64..).flat_map(|h| {
        (1..h).flat_map(move |a| {
            let b = h - a;
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            let keep = num_integer::Integer::gcd(&a, &b) == 1 && !r.is_one();
            keep.then_some(r)
        })
    })
}

fn eval_poly(p: &NCPoly<RatFunc>, q0: &BigRational) -> Result<NCPoly<BigRational>> {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        out.add_term(w.clone(), c.eval_at(q0)?);
    }
    Ok(out)
}

fn rules_agree(sym: &Reducer<RatFunc>, fixed: &Reducer<BigRational>, q0: &BigRational) -> Result<bool> {
    let (a, b) = (sym.rules().rules(), fixed.rules().rules());
    if a.len() != b.len() {
        return Ok(false);
    }
    for (x, y) in a.iter().zip(b) {
        if x.lead != y.lead || eval_poly(&x.tail, q0)? != y.tail {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sides_agree(sym: &Sides<RatFunc>, fixed: &Sides<BigRational>, q0: &BigRational) -> Result<bool> {
    for ((_, l, r), (_, fl, fr)) in sym.entries.iter().zip(&fixed.entries) {
        if &eval_poly(l, q0)? != fl || &eval_poly(r, q0)? != fr {
            return Ok(false);
        }
    }
    Ok(sym.entries.len() == fixed.entries.len())
}

/// Verifies `spec` at `degree_bound + 1` points, or at `min_points` if more.
pub fn verify_rigorous(
    name: &str,
    sym_r: &crate::qlinalg::QMatrix<RatFunc>,
    spec: &IdentitySpec,
    opts: &Options,
    min_points: usize,
) -> Result<VerificationReport> {
    spec.validate()?;
    let t = Instant::now();
    let h: HeckeSymmetry<RatFunc> = specialized(name, sym_r, QConfig::Symbolic)?;
    let need = spec.required_degree(h.rank.m);
    if need == 0 {
        return Err(Error::Config(format!("{} has no q-dependent sides", spec.identity)));
    }
    if need > opts.max_degree {
        return Err(Error::ResourceCap(format!(
            "{} needs word length {need}, above the cap {}",
            spec.identity, opts.max_degree
        )));
    }
    let sym_engine = Engine::new(h, need, opts.rule_cap)?;
    let sym_sides = sides(&sym_engine, spec)?;
    let bound = degree_bound(&sym_sides);
    let wanted = (bound + 1).max(min_points);
    let build = t.elapsed().as_millis();

    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut skipped = 0usize;
    let mut completion = sym_engine.completion_ms;
    let t = Instant::now();
    for q0 in sample_points() {
        if points.len() == wanted {
            break;
        }
        if skipped > 4 * wanted + 16 {
            return Err(Error::Internal("too many unusable sample points".into()));
        }
        let fixed_h = match specialized::<BigRational>(name, sym_r, QConfig::fixed(q0.clone())?) {
            Ok(h) => h,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let engine = match Engine::new(fixed_h, need, opts.rule_cap) {
            Ok(e) => e,
            Err(Error::BadSpecialization(_)) | Err(Error::Pole(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        completion += engine.completion_ms;
        let same_rules = rules_agree(sym_engine.alg().m_reducer(), engine.alg().m_reducer(), &q0)
            .and_then(|a| Ok(a && rules_agree(sym_engine.alg().d_reducer(), engine.alg().d_reducer(), &q0)?));
        let fixed_sides = sides(&engine, spec)?;
        match same_rules.and_then(|ok| Ok(ok && sides_agree(&sym_sides, &fixed_sides, &q0)?)) {
            Ok(true) => {}
            Ok(false) | Err(Error::Pole(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        if !fixed_sides.holds() {
            let (_, sample) = fixed_sides.residual();
            failures.extend(sample.into_iter().map(|s| format!("q = {q0}: {s}")));
        }
        points.push(q0);
    }
    let (count, mut sample) = sym_sides.residual();
    sample.extend(failures.iter().cloned());
    sample.truncate(super::SAMPLE_LIMIT);
    let pass = failures.is_empty() && points.len() == wanted;
    Ok(VerificationReport {
        identity: spec.identity,
        params: spec.clone(),
        rmatrix: name.to_string(),
        n: sym_r.n(),
        q_points: points.iter().map(|q| q.to_string()).collect(),
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        residual_terms: count,
        residual_sample: sample,
        timings_ms: Timings {
            build: build.saturating_sub(sym_engine.completion_ms),
            completion,
            reduction: t.elapsed().as_millis(),
        },
        backend: "fixed-multipoint".into(),
        notes: vec![
            format!("q-degree bound {bound}, {} points checked", points.len()),
            format!("{skipped} sample points skipped as degenerate"),
        ],
    })
}

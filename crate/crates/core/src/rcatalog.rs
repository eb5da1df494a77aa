//! Built-in Hecke symmetries and the R-matrix file loader.
//!
//! Every [`HeckeSymmetry`] is validated on construction: braid relation,
//! Hecke condition, skew-invertibility and finite rank, followed by the
//! B/C calibration of the R-trace.

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::{
    check_braid, check_hecke, r_trace_full, rank_with_tower, skew_inverse_raw, uv_factorize,
    QMatrix, RankReport, SkewInverseData, UvPair, DEFAULT_RANK_CAP,
};
use crate::scalar::{parse_scalar, QConfig, QContext, RatFunc, Scalar};

/// Outcome of each structural check, kept for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub braid: bool,
    pub hecke: bool,
    pub skew_invertible: bool,
    pub rank: usize,
    /// Which partial trace of `Ψ` became the C matrix (`"Tr_1"` or `"Tr_2"`).
    pub c_from: String,
}

/// A validated skew-invertible Hecke symmetry of finite rank.
#[derive(Clone, Debug)]
pub struct HeckeSymmetry<S> {
    pub name: String,
    pub r: QMatrix<S>,
    pub r_inv: QMatrix<S>,
    pub ctx: QContext<S>,
    pub skew: SkewInverseData<S>,
    pub rank: RankReport,
    /// `A^(1) ..= A^(m+1)`.
    pub antisym: Vec<QMatrix<S>>,
    pub uv: UvPair<S>,
    pub validation: Validation,
    /// The same matrix over `Q(q)`, when known; used to detect degenerate
    /// specializations of a fixed `q`.
    pub symbolic: Option<QMatrix<RatFunc>>,
}

impl<S: Scalar> HeckeSymmetry<S> {
    pub fn n(&self) -> usize {
        self.r.n()
    }

    pub fn c_matrix(&self) -> &QMatrix<S> {
        &self.skew.c_matrix
    }

    /// `A^(k)`; zero for `k > m`.
    pub fn antisymmetrizer(&self, k: usize) -> Result<QMatrix<S>> {
        if k >= 1 && k <= self.antisym.len() {
            return Ok(self.antisym[k - 1].clone());
        }
        crate::qlinalg::antisymmetrizer(&self.r, &self.ctx, k)
    }

    pub fn symmetrizer(&self, k: usize) -> Result<QMatrix<S>> {
        crate::qlinalg::symmetrizer(&self.r, &self.ctx, k)
    }

    /// Validates `r` and derives all supporting data.
    pub fn from_matrix(
        name: impl Into<String>,
        r: QMatrix<S>,
        ctx: QContext<S>,
        symbolic: Option<QMatrix<RatFunc>>,
    ) -> Result<Self> {
        let fail = |check: &str| Error::Validation {
            check: check.to_string(),
        };
        if r.legs() != 2 {
            return Err(Error::Dimension("an R-matrix has two legs".into()));
        }
        if !check_braid(&r) {
            return Err(fail("braid"));
        }
        if !check_hecke(&r, &ctx) {
            return Err(fail("hecke"));
        }
        let raw = skew_inverse_raw(&r).map_err(|e| match e {
            Error::NotSkewInvertible => fail("skew-invertibility"),
            other => other,
        })?;
        let (rank, antisym) = rank_with_tower(&r, &ctx, DEFAULT_RANK_CAP).map_err(|e| match e {
            Error::NotFiniteRank { .. } => fail("rank"),
            other => other,
        })?;
        let m = rank.m;
        let top = &antisym[m - 1];
        let target = ctx.qpow(-((m * m) as i64));
        let leg1_ok = r_trace_full(top, &raw.trace_leg1)? == target;
        let leg2_ok = r_trace_full(top, &raw.trace_leg2)? == target;
        let (c_matrix, b_matrix, c_from) = match (leg1_ok, leg2_ok) {
            (true, false) => (raw.trace_leg1, raw.trace_leg2, "Tr_1"),
            (false, true) => (raw.trace_leg2, raw.trace_leg1, "Tr_2"),
            (true, true) if raw.trace_leg1 == raw.trace_leg2 => {
                (raw.trace_leg1, raw.trace_leg2, "Tr_1")
            }
            (true, true) => {
                // Tie: keep the weight whose leg-2 R-trace of R is the identity.
                // This is the one making Tr(C M) central in the RE algebra.
                let id = QMatrix::identity(r.n(), 1);
                let t1 = r.weighted_partial_trace(2, &raw.trace_leg1)? == id;
                let t2 = r.weighted_partial_trace(2, &raw.trace_leg2)? == id;
                match (t1, t2) {
                    (true, false) => (raw.trace_leg1, raw.trace_leg2, "Tr_1"),
                    (false, true) => (raw.trace_leg2, raw.trace_leg1, "Tr_2"),
                    _ => {
                        return Err(Error::Calibration(
                            "both partial traces of the skew-inverse normalize the top antisymmetrizer"
                                .into(),
                        ))
                    }
                }
            }
            (false, false) => {
                return Err(Error::Calibration(format!(
                    "neither partial trace gives <A^({m})> = q^(-{})",
                    m * m
                )))
            }
        };
        let r_inv = r
            .inverse()
            .ok_or_else(|| Error::Internal("Hecke symmetry is not invertible".into()))?;
        let uv = uv_factorize(top)?;
        let validation = Validation {
            braid: true,
            hecke: true,
            skew_invertible: true,
            rank: m,
            c_from: c_from.into(),
        };
        Ok(HeckeSymmetry {
            name: name.into(),
            r,
            r_inv,
            ctx,
            skew: SkewInverseData {
                psi: raw.psi,
                b_matrix,
                c_matrix,
            },
            rank,
            antisym,
            uv,
            validation,
            symbolic,
        })
    }
}

/// The Drinfeld-Jimbo matrix over `Q(q)`. `upper` puts `q - q^{-1}` on the
/// `(ij, ij)` diagonal entries with `i < j`; otherwise on `i > j`.
pub fn dj_matrix(n: usize, upper: bool) -> QMatrix<RatFunc> {
    let q = RatFunc::q();
    let diff = &q - &RatFunc::qpow(-1);
    QMatrix::from_fn(n, 2, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        if row == col && i == j {
            q.clone()
        } else if i != j && k == j && l == i {
            RatFunc::one()
        } else if row == col && ((upper && i < j) || (!upper && i > j)) {
            diff.clone()
        } else {
            RatFunc::zero()
        }
    })
}

pub(crate) fn specialize<S: Scalar>(m: &QMatrix<RatFunc>, ctx: &QContext<S>) -> Result<QMatrix<S>> {
    let data = (0..m.dim() * m.dim())
        .map(|k| ctx.lift(m.get(k / m.dim(), k % m.dim())))
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_vec(m.n(), m.legs(), data)
}

/// The standard Hecke symmetry of `U_q(sl_N)` type.
///
/// The `q - q^{-1}` triangle is chosen by validation: the upper convention
/// is tried first, then its transpose.
pub fn dj<S: Scalar>(n: usize, config: QConfig) -> Result<HeckeSymmetry<S>> {
    if n == 0 || n > crate::ncalg::MAX_N {
        return Err(Error::Config(format!("N = {n} is outside 1..={}", crate::ncalg::MAX_N)));
    }
    let ctx = QContext::<S>::new(config)?;
    let mut last_err = None;
    for upper in [true, false] {
        let sym = dj_matrix(n, upper);
        let r = specialize(&sym, &ctx)?;
        match HeckeSymmetry::from_matrix(format!("dj({n})"), r, ctx.clone(), Some(sym)) {
            Ok(h) => return Ok(h),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("two attempts"))
}

/// Validates a symbolic matrix specialized to `config`.
pub fn specialized<S: Scalar>(
    name: impl Into<String>,
    sym: &QMatrix<RatFunc>,
    config: QConfig,
) -> Result<HeckeSymmetry<S>> {
    let ctx = QContext::<S>::new(config)?;
    let r = specialize(sym, &ctx)?;
    HeckeSymmetry::from_matrix(name, r, ctx, Some(sym.clone()))
}

/// The plain flip `P` at `q = 1`.
pub fn flip<S: Scalar>(n: usize) -> Result<HeckeSymmetry<S>> {
    if n == 0 || n > crate::ncalg::MAX_N {
        return Err(Error::Config(format!("N = {n} is outside 1..={}", crate::ncalg::MAX_N)));
    }
    let ctx = QContext::<S>::new(QConfig::classical())?;
    HeckeSymmetry::from_matrix(
        format!("flip({n})"),
        QMatrix::flip(n),
        ctx,
        None,
    )
}

/// One nonzero entry `R^{ij}_{kl} = value` (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrixEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: String,
}

/// On-disk R-matrix description (JSON).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrixFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub q: String,
    pub entries: Vec<RMatrixEntry>,
}

impl RMatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Describes a symbolic matrix; zero entries are omitted.
    pub fn from_matrix(m: &QMatrix<RatFunc>, q: &QConfig) -> Self {
        let n = m.n();
        let mut entries = Vec::new();
        for row in 0..m.dim() {
            for col in 0..m.dim() {
                let v = m.get(row, col);
                if !v.is_zero() {
                    entries.push(RMatrixEntry {
                        i: row / n + 1,
                        j: row % n + 1,
                        k: col / n + 1,
                        l: col % n + 1,
                        value: v.to_string(),
                    });
                }
            }
        }
        RMatrixFile {
            n,
            q: q.label(),
            entries,
        }
    }

    /// The matrix over `Q(q)`. Composite row `(i-1)N + j`, column `(k-1)N + l`.
    pub fn matrix(&self) -> Result<QMatrix<RatFunc>> {
        let n = self.n;
        if n == 0 || n > crate::ncalg::MAX_N {
            return Err(Error::Format(format!("N = {n} is outside 1..={}", crate::ncalg::MAX_N)));
        }
        let mut m = QMatrix::<RatFunc>::zeros(n, 2);
        for e in &self.entries {
            if [e.i, e.j, e.k, e.l].iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Format(format!(
                    "index out of range in entry ({}, {}, {}, {})",
                    e.i, e.j, e.k, e.l
                )));
            }
            let v = parse_scalar(&e.value)?;
            m.set((e.i - 1) * n + e.j - 1, (e.k - 1) * n + e.l - 1, v);
        }
        Ok(m)
    }

    pub fn q_config(&self) -> Result<QConfig> {
        QConfig::parse(&self.q)
    }
}

/// Loads and validates an R-matrix file. `q_override` replaces the file's
/// own `q` setting.
pub fn load<S: Scalar>(path: &Path, q_override: Option<QConfig>) -> Result<HeckeSymmetry<S>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_file_text(&text, &name_of(path), q_override)
}

fn name_of(path: &Path) -> String {
    format!("file:{}", path.display())
}

pub fn from_file_text<S: Scalar>(
    text: &str,
    name: &str,
    q_override: Option<QConfig>,
) -> Result<HeckeSymmetry<S>> {
    let file = RMatrixFile::from_json(text)?;
    let config = match q_override {
        Some(c) => c,
        None => file.q_config()?,
    };
    let sym = file.matrix()?;
    let ctx = QContext::<S>::new(config)?;
    let r = specialize(&sym, &ctx)?;
    HeckeSymmetry::from_matrix(name, r, ctx, Some(sym))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn fixed(n: i64, d: i64) -> QConfig {
        QConfig::fixed(Q::new(n.into(), d.into())).unwrap()
    }

    #[test]
    fn dj1_is_scalar_q() {
        let h = dj::<RatFunc>(1, QConfig::Symbolic).unwrap();
        assert_eq!(h.r.get(0, 0), &RatFunc::q());
        assert_eq!(h.rank.m, 1);
        assert_eq!(h.c_matrix().get(0, 0), &RatFunc::qpow(-1));
        assert_eq!(h.skew.psi.get(0, 0), &RatFunc::qpow(-1));
    }

    #[test]
    fn dj2_matrix_and_c() {
        let h = dj::<RatFunc>(2, QConfig::Symbolic).unwrap();
        let q = RatFunc::q();
        assert_eq!(h.r.get(1, 1), &(&q - &RatFunc::qpow(-1)));
        assert!(h.r.get(1, 2).is_one() && h.r.get(2, 1).is_one());
        assert!(h.r.get(2, 2).is_zero());
        let c = h.c_matrix();
        assert_eq!(c.get(0, 0), &RatFunc::qpow(-3));
        assert_eq!(c.get(1, 1), &RatFunc::qpow(-1));
        assert!(c.get(0, 1).is_zero() && c.get(1, 0).is_zero());
        assert_eq!(h.rank.m, 2);
    }

    #[test]
    fn dj3_has_rank_three() {
        let h = dj::<Q>(3, fixed(3, 5)).unwrap();
        assert_eq!(h.rank.m, 3);
        assert_eq!(h.rank.dims, vec![3, 3, 1, 0]);
    }

    #[test]
    fn flip_entry() {
        let h = flip::<Q>(2).unwrap();
        assert_eq!(h.r.mul(&h.r), QMatrix::identity(2, 2));
        assert_eq!(h.rank.m, 2);
        assert_eq!(h.c_matrix(), &QMatrix::identity(2, 1));
        assert!(flip::<RatFunc>(2).is_err());
    }

    #[test]
    fn file_round_trip_and_failures() {
        let file = RMatrixFile::from_matrix(&dj_matrix(2, true), &QConfig::Symbolic);
        let h = from_file_text::<RatFunc>(&file.to_json(), "mem", None).unwrap();
        assert_eq!(h.r, dj_matrix(2, true));
        let h = from_file_text::<Q>(&file.to_json(), "mem", Some(fixed(2, 1))).unwrap();
        assert_eq!(h.rank.m, 2);

        let mut bad = file.clone();
        bad.entries.retain(|e| !(e.i == 1 && e.j == 2 && e.k == 2 && e.l == 1));
        assert!(matches!(
            from_file_text::<RatFunc>(&bad.to_json(), "bad", None),
            Err(Error::Validation { ref check }) if check == "braid"
        ));

        let empty = RMatrixFile {
            n: 2,
            q: "symbolic".into(),
            entries: vec![],
        };
        assert!(matches!(
            from_file_text::<RatFunc>(&empty.to_json(), "empty", None),
            Err(Error::Validation { ref check }) if check == "hecke"
        ));
        assert!(matches!(
            from_file_text::<RatFunc>("{\"N\": 2}", "junk", None),
            Err(Error::Format(_))
        ));
    }
}

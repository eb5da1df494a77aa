//! Matrix chains in the double, evaluated in canonical form.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalg::{over_copies, Kind, NCMatrix, NCPoly};
use crate::qlinalg::{rank_factorization, QMatrix, UvPair};
use crate::rcatalog::HeckeSymmetry;
use crate::rewrite::DoubleAlgebra;
use crate::scalar::{QContext, Scalar};

/// One factor of a chain of `p`-legged matrices.
pub enum Factor<'a, S> {
    Scalar(&'a QMatrix<S>),
    Poly(&'a NCMatrix<S>),
    /// `X + α I`.
    Shifted(&'a NCMatrix<S>, S),
}

/// How `A X A` and `⟨A X⟩` are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Full matrices, left to right as written.
    #[default]
    Full,
    /// Through a rank factorization `A = U V`: `A X A = 0` iff `V X U = 0`,
    /// and `Tr(C A X) = Tr(V X C U)`.
    Projected,
}

/// The double together with its completion time.
pub struct Engine<S> {
    alg: DoubleAlgebra<S>,
    degree: usize,
    pub completion_ms: u128,
}

impl<S: Scalar> Engine<S> {
    pub fn new(h: HeckeSymmetry<S>, degree: usize, rule_cap: usize) -> Result<Self> {
        let t = std::time::Instant::now();
        let alg = DoubleAlgebra::new(h, degree, rule_cap)?;
        Ok(Engine {
            alg,
            degree: degree.max(2),
            completion_ms: t.elapsed().as_millis(),
        })
    }

    pub fn alg(&self) -> &DoubleAlgebra<S> {
        &self.alg
    }

    pub fn hecke(&self) -> &HeckeSymmetry<S> {
        self.alg.hecke()
    }

    pub fn ctx(&self) -> &QContext<S> {
        &self.hecke().ctx
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator(&self, kind: Kind) -> NCMatrix<S> {
        NCMatrix::gen_matrix(kind, self.n())
    }

    /// `L = M D`.
    pub fn l_matrix(&self) -> Result<NCMatrix<S>> {
        self.alg
            .mat_mul(&self.generator(Kind::M), &self.generator(Kind::D))
    }

    /// `X_ov1, ..., X_ovp`.
    pub fn copies(&self, x: &NCMatrix<S>, p: usize) -> Result<Vec<NCMatrix<S>>> {
        let h = self.hecke();
        over_copies(x, &h.r, &h.r_inv, p)
    }

    /// `rows · F_1 ⋯ F_r · cols`, entry `(a, b)` pairing row `a` with column `b`.
    pub fn chain(
        &self,
        rows: &[Vec<S>],
        factors: &[Factor<'_, S>],
        cols: &[Vec<S>],
    ) -> Result<Vec<Vec<NCPoly<S>>>> {
        let mut cur: Vec<Vec<NCPoly<S>>> = rows
            .iter()
            .map(|r| r.iter().map(|c| NCPoly::constant(c.clone())).collect())
            .collect();
        for f in factors {
            cur = self.apply(&cur, f)?;
        }
        Ok(cur
            .par_iter()
            .map(|row| {
                cols.iter()
                    .map(|col| {
                        let mut acc = NCPoly::zero();
                        for (x, c) in row.iter().zip(col) {
                            acc.add_scaled(x, c);
                        }
                        acc
                    })
                    .collect()
            })
            .collect())
    }

    fn apply(&self, cur: &[Vec<NCPoly<S>>], f: &Factor<'_, S>) -> Result<Vec<Vec<NCPoly<S>>>> {
        let dim = cur.first().map_or(0, Vec::len);
        let cells: Vec<(usize, usize)> = (0..cur.len())
            .flat_map(|r| (0..dim).map(move |j| (r, j)))
            .collect();
        let flat: Vec<NCPoly<S>> = cells
            .par_iter()
            .map(|&(r, j)| {
                let row = &cur[r];
                let mut acc = NCPoly::zero();
                match f {
                    Factor::Scalar(a) => {
                        for (s, x) in row.iter().enumerate() {
                            let c = a.get(s, j);
                            if !c.is_zero() && !x.is_zero() {
                                acc.add_scaled(x, c);
                            }
                        }
                    }
                    Factor::Poly(m) | Factor::Shifted(m, _) => {
                        for (s, x) in row.iter().enumerate() {
                            let y = m.get(s, j);
                            if !x.is_zero() && !y.is_zero() {
                                acc.add_scaled(&self.alg.mul(x, y)?, &S::one());
                            }
                        }
                        if let Factor::Shifted(_, alpha) = f {
                            acc.add_scaled(&row[j], alpha);
                        }
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(cur.len());
        let mut it = flat.into_iter();
        for _ in 0..cur.len() {
            out.push(it.by_ref().take(dim).collect());
        }
        Ok(out)
    }

    /// `A F_1 ⋯ F_r A`, or its projection `V F_1 ⋯ F_r U`.
    pub fn sandwiched(&self, a: &QMatrix<S>, factors: &[Factor<'_, S>], mode: Mode) -> Result<Vec<Vec<NCPoly<S>>>> {
        match mode {
            Mode::Full => self.chain(&rows_of(a), factors, &cols_of(a)),
            Mode::Projected => {
                let (u, v) = rank_factorization(a)?;
                self.chain(&v, factors, &u)
            }
        }
    }

    /// `⟨A F_1 ⋯ F_r⟩` over all legs.
    pub fn traced(&self, a: &QMatrix<S>, factors: &[Factor<'_, S>], mode: Mode) -> Result<NCPoly<S>> {
        let c = self.hecke().c_matrix();
        match mode {
            Mode::Full => {
                let id = QMatrix::identity(a.n(), a.legs());
                let x = self.chain(&rows_of(a), factors, &cols_of(&id))?;
                let m = NCMatrix::from_entries(a.n(), a.legs(), x.into_iter().flatten().collect());
                m.r_trace_full(c)
            }
            Mode::Projected => {
                let ck = power(c, a.legs());
                let (u, v) = rank_factorization(a)?;
                let cu: Vec<Vec<S>> = u
                    .iter()
                    .map(|col| {
                        (0..ck.dim())
                            .map(|i| {
                                col.iter()
                                    .enumerate()
                                    .fold(S::zero(), |acc, (j, x)| acc.add_ref(&ck.get(i, j).mul_ref(x)))
                            })
                            .collect()
                    })
                    .collect();
                let x = self.chain(&v, factors, &cu)?;
                let mut acc = NCPoly::zero();
                for (i, row) in x.iter().enumerate() {
                    acc.add_scaled(&row[i], &S::one());
                }
                Ok(acc)
            }
        }
    }

    /// `e_k(X) = ⟨A^(k) X_ov1 ⋯ X_ovk⟩`; `e_0 = 1`.
    pub fn e_k(&self, x: &NCMatrix<S>, k: usize, mode: Mode) -> Result<NCPoly<S>> {
        if k == 0 {
            return Ok(NCPoly::one());
        }
        let copies = self.copies(x, k)?;
        let a = self.hecke().antisymmetrizer(k)?;
        let f: Vec<Factor<S>> = copies.iter().map(Factor::Poly).collect();
        self.traced(&a, &f, mode)
    }

    /// The two forms of a quantum determinant: `q^{m²}⟨A^(m) X⋯⟩` and
    /// `⟨v| X⋯ |u⟩`, copies in increasing order or, if `reversed`, decreasing.
    pub fn determinant_forms(&self, x: &NCMatrix<S>, reversed: bool, uv: &UvPair<S>, mode: Mode) -> Result<(NCPoly<S>, NCPoly<S>)> {
        let m = self.hecke().rank.m;
        let mut copies = self.copies(x, m)?;
        if reversed {
            copies.reverse();
        }
        let f: Vec<Factor<S>> = copies.iter().map(Factor::Poly).collect();
        let a = self.hecke().antisymmetrizer(m)?;
        let traced = self
            .traced(&a, &f, mode)?
            .scale(&self.ctx().qpow((m * m) as i64));
        let bra_ket = self.chain(&[uv.v.clone()], &f, &[uv.u.clone()])?;
        Ok((traced, bra_ket[0][0].clone()))
    }

    /// `det_R M`, checked between its two forms.
    pub fn det_r(&self, mode: Mode) -> Result<NCPoly<S>> {
        let (a, b) = self.determinant_forms(&self.generator(Kind::M), false, &self.hecke().uv, mode)?;
        agree(a, b, "det_R M")
    }

    /// `det_{R^{-1}} D`, copies in decreasing order, checked between its two forms.
    pub fn det_rinv(&self, mode: Mode) -> Result<NCPoly<S>> {
        let (a, b) = self.determinant_forms(&self.generator(Kind::D), true, &self.hecke().uv, mode)?;
        agree(a, b, "det_{R^-1} D")
    }
}

fn agree<S: Scalar>(a: NCPoly<S>, b: NCPoly<S>, what: &str) -> Result<NCPoly<S>> {
    if a == b {
        Ok(a)
    } else {
        Err(Error::Convention(format!(
            "the R-trace and bra-ket forms of {what} differ: {a} vs {b}"
        )))
    }
}

pub(crate) fn rows_of<S: Scalar>(a: &QMatrix<S>) -> Vec<Vec<S>> {
    (0..a.dim()).map(|r| a.row(r).to_vec()).collect()
}

pub(crate) fn cols_of<S: Scalar>(a: &QMatrix<S>) -> Vec<Vec<S>> {
    (0..a.dim())
        .map(|c| (0..a.dim()).map(|r| a.get(r, c).clone()).collect())
        .collect()
}

/// `C ⊗ ⋯ ⊗ C` on `legs` legs.
pub(crate) fn power<S: Scalar>(c: &QMatrix<S>, legs: usize) -> QMatrix<S> {
    let mut out = c.clone();
    for _ in 1..legs {
        out = out.kron(c);
    }
    out
}

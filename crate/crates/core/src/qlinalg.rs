//! Exact linear algebra on tensor-legged matrices.
//!
//! A [`QMatrix`] acts on the `p`-fold tensor power of an `N`-dimensional
//! space. Basis vectors of the power are flattened with the first leg most
//! significant: legs `(i_1, ..., i_p)` (0-based here) map to
//! `sum_t i_t * N^(p-t)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{QContext, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix<S> {
    n: usize,
    legs: usize,
    dim: usize,
    data: Vec<S>,
}

/// Stride of leg `leg` (1-based) in a `legs`-legged flattening.
pub(crate) fn leg_stride(n: usize, legs: usize, leg: usize) -> usize {
    n.pow((legs - leg) as u32)
}

/// Inserts digit `x` at leg position `leg` (1-based) of an index that has
/// `legs - 1` legs, producing an index with `legs` legs.
pub(crate) fn insert_leg(n: usize, legs: usize, leg: usize, idx: usize, x: usize) -> usize {
    let stride = leg_stride(n, legs, leg);
    let hi = idx / stride;
    let lo = idx % stride;
    hi * n * stride + x * stride + lo
}

impl<S: Scalar> QMatrix<S> {
    pub fn zeros(n: usize, legs: usize) -> Self {
        let dim = n.pow(legs as u32);
        QMatrix {
            n,
            legs,
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(n: usize, legs: usize) -> Self {
        Self::from_fn(n, legs, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn from_fn(n: usize, legs: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let dim = n.pow(legs as u32);
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        QMatrix { n, legs, dim, data }
    }

    /// Row-major entries; the length must be `(N^legs)^2`.
    pub fn from_vec(n: usize, legs: usize, data: Vec<S>) -> Result<Self> {
        let dim = n.pow(legs as u32);
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(QMatrix { n, legs, dim, data })
    }

    /// The flip `P` on two legs: `e_i ⊗ e_j -> e_j ⊗ e_i`.
    pub fn flip(n: usize) -> Self {
        Self::from_fn(n, 2, |r, c| {
            if r / n == c % n && r % n == c / n {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.dim + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.n == other.n && self.legs == other.legs,
            "shape mismatch: N={} p={} vs N={} p={}",
            self.n,
            self.legs,
            other.n,
            other.legs
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        QMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub_ref(b))
            .collect();
        QMatrix { data, ..*self }
    }

    pub fn scale(&self, c: &S) -> Self {
        let data = self.data.iter().map(|a| a.mul_ref(c)).collect();
        QMatrix { data, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let dim = self.dim;
        let rows: Vec<Vec<S>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let mut out = vec![S::zero(); dim];
                for (k, a) in self.row(i).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in other.row(k).iter().enumerate() {
                        if !b.is_zero() {
                            out[j] = out[j].add_ref(&a.mul_ref(b));
                        }
                    }
                }
                out
            })
            .collect();
        QMatrix {
            data: rows.into_iter().flatten().collect(),
            ..*self
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.legs, |r, c| self.get(c, r).clone())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "kron of different base dimensions");
        let od = other.dim;
        Self::from_fn(self.n, self.legs + other.legs, |r, c| {
            let a = self.get(r / od, c / od);
            if a.is_zero() {
                return S::zero();
            }
            a.mul_ref(other.get(r % od, c % od))
        })
    }

    /// `self ⊗ I` padded to `legs` legs.
    pub fn extend(&self, legs: usize) -> Self {
        if legs == self.legs {
            return self.clone();
        }
        assert!(legs > self.legs);
        self.kron(&QMatrix::identity(self.n, legs - self.legs))
    }

    /// Exact inverse by Gauss-Jordan elimination, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.dim;
        let mut a: Vec<Vec<S>> = (0..d).map(|r| self.row(r).to_vec()).collect();
        let mut inv: Vec<Vec<S>> = (0..d)
            .map(|r| (0..d).map(|c| if r == c { S::one() } else { S::zero() }).collect())
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].try_inv().ok()?;
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = x.mul_ref(&p);
            }
            for r in 0..d {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..d {
                    if !a[col][c].is_zero() {
                        a[r][c] = a[r][c].sub_ref(&f.mul_ref(&a[col][c]));
                    }
                    if !inv[col][c].is_zero() {
                        inv[r][c] = inv[r][c].sub_ref(&f.mul_ref(&inv[col][c]));
                    }
                }
            }
        }
        Some(QMatrix {
            data: inv.into_iter().flatten().collect(),
            ..*self
        })
    }

    /// Exact rank over the scalar field.
    pub fn rank(&self) -> usize {
        let d = self.dim;
        let mut rows: Vec<Vec<S>> = (0..d)
            .map(|r| self.row(r).to_vec())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rank = 0;
        for col in 0..d {
            let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let p = rows[rank][col].try_inv().expect("nonzero pivot");
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].mul_ref(&p);
                for c in col..d {
                    if !rows[rank][c].is_zero() {
                        rows[r][c] = rows[r][c].sub_ref(&f.mul_ref(&rows[rank][c]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Ordinary partial trace over `leg` (1-based), weighted by `weight`
    /// acting on that leg: `Tr_leg(weight_leg · X)`.
    pub fn weighted_partial_trace(&self, leg: usize, weight: &QMatrix<S>) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::LegOutOfRange {
                leg,
                legs: self.legs,
            });
        }
        let n = self.n;
        let out_dim = self.dim / n;
        let mut out = QMatrix::zeros(n, self.legs - 1);
        for r in 0..out_dim {
            for c in 0..out_dim {
                let mut acc = S::zero();
                for a in 0..n {
                    for b in 0..n {
                        let w = weight.get(a, b);
                        if w.is_zero() {
                            continue;
                        }
                        let x = self.get(
                            insert_leg(n, self.legs, leg, r, b),
                            insert_leg(n, self.legs, leg, c, a),
                        );
                        if !x.is_zero() {
                            acc = acc.add_ref(&w.mul_ref(x));
                        }
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn partial_trace(&self, leg: usize) -> Result<Self> {
        self.weighted_partial_trace(leg, &QMatrix::identity(self.n, 1))
    }

    /// The scalar entry of a 0-legged matrix.
    pub fn scalar_value(&self) -> Option<&S> {
        (self.legs == 0).then(|| &self.data[0])
    }
}

/// `R_i = I^{⊗(i-1)} ⊗ R ⊗ I^{⊗(p-i-1)}` for a two-legged `R`.
pub fn embed<S: Scalar>(r: &QMatrix<S>, i: usize, p: usize) -> Result<QMatrix<S>> {
    if r.legs() != 2 {
        return Err(Error::Dimension("embed expects a two-legged matrix".into()));
    }
    if i == 0 || i + 1 > p {
        return Err(Error::LegOutOfRange { leg: i, legs: p });
    }
    let n = r.n();
    let left = QMatrix::<S>::identity(n, i - 1);
    let right = QMatrix::<S>::identity(n, p - i - 1);
    Ok(left.kron(r).kron(&right))
}

/// `R_12 R_23 R_12 == R_23 R_12 R_23`.
pub fn check_braid<S: Scalar>(r: &QMatrix<S>) -> bool {
    let (Ok(r12), Ok(r23)) = (embed(r, 1, 3), embed(r, 2, 3)) else {
        return false;
    };
    r12.mul(&r23).mul(&r12) == r23.mul(&r12).mul(&r23)
}

/// `(q I - R)(q^{-1} I + R) == 0`.
pub fn check_hecke<S: Scalar>(r: &QMatrix<S>, ctx: &QContext<S>) -> bool {
    let id = QMatrix::identity(r.n(), 2);
    let a = id.scale(ctx.q()).sub(r);
    let b = id.scale(ctx.q_inv()).add(r);
    a.mul(&b).is_zero()
}

/// `Ψ` together with its two partial traces.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewInverseData<S> {
    pub psi: QMatrix<S>,
    pub b_matrix: QMatrix<S>,
    pub c_matrix: QMatrix<S>,
}

/// Candidate data before the B/C roles are assigned.
#[derive(Clone, Debug)]
pub struct RawSkewInverse<S> {
    pub psi: QMatrix<S>,
    /// `Tr_2 Ψ`.
    pub trace_leg2: QMatrix<S>,
    /// `Tr_1 Ψ`.
    pub trace_leg1: QMatrix<S>,
}

/// Solves `Tr_2(R_12 Ψ_23) = P_13` for `Ψ`.
///
/// Writing `X[(i1,k1),(i2,j2)] = R[(i1,i2),(k1,j2)]`, the defining relation
/// reads `X · Y = Q` with `Y[(i2,j2),(i3,k3)] = Ψ[(j2,i3),(i2,k3)]` and `Q`
/// the permutation `[(i1,k1),(i3,k3)] -> δ(i1,k3) δ(k1,i3)`.
pub fn skew_inverse_raw<S: Scalar>(r: &QMatrix<S>) -> Result<RawSkewInverse<S>> {
    let n = r.n();
    let idx = |a: usize, b: usize| a * n + b;
    let x = QMatrix::from_fn(n, 2, |row, col| {
        let (i1, k1) = (row / n, row % n);
        let (i2, j2) = (col / n, col % n);
        r.get(idx(i1, i2), idx(k1, j2)).clone()
    });
    let xi = x.inverse().ok_or(Error::NotSkewInvertible)?;
    let psi = QMatrix::from_fn(n, 2, |row, col| {
        let (j2, i3) = (row / n, row % n);
        let (i2, k3) = (col / n, col % n);
        xi.get(idx(i2, j2), idx(k3, i3)).clone()
    });
    if !check_skew_inverse(r, &psi) {
        return Err(Error::Internal("skew-inverse round trip failed".into()));
    }
    Ok(RawSkewInverse {
        trace_leg2: psi.partial_trace(2)?,
        trace_leg1: psi.partial_trace(1)?,
        psi,
    })
}

/// `Tr_2(R_12 Ψ_23) == P_13`.
pub fn check_skew_inverse<S: Scalar>(r: &QMatrix<S>, psi: &QMatrix<S>) -> bool {
    let n = r.n();
    let (Ok(r12), Ok(psi23)) = (embed(r, 1, 3), embed(psi, 2, 3)) else {
        return false;
    };
    let Ok(traced) = r12.mul(&psi23).partial_trace(2) else {
        return false;
    };
    traced == QMatrix::flip(n)
}

/// `⟨X⟩` over the given legs (1-based): each traced leg is weighted by `C`.
/// Legs are contracted from the highest index down so the remaining leg
/// numbering is unaffected.
pub fn r_trace<S: Scalar>(x: &QMatrix<S>, legs: &[usize], c: &QMatrix<S>) -> Result<QMatrix<S>> {
    let mut sorted = legs.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.dedup();
    let mut out = x.clone();
    for leg in sorted {
        out = out.weighted_partial_trace(leg, c)?;
    }
    Ok(out)
}

/// R-trace over every leg, returned as a scalar.
pub fn r_trace_full<S: Scalar>(x: &QMatrix<S>, c: &QMatrix<S>) -> Result<S> {
    let legs: Vec<usize> = (1..=x.legs()).collect();
    let t = r_trace(x, &legs, c)?;
    Ok(t.scalar_value().expect("fully traced").clone())
}

fn symmetrizer_step<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    prev: &QMatrix<S>,
    k: usize,
    skew: bool,
) -> Result<QMatrix<S>> {
    let kq_inv = ctx.qnum(k).try_inv()?;
    let p = prev.extend(k);
    let rk = embed(r, k - 1, k)?;
    let (qp, coef) = if skew {
        (ctx.qpow(k as i64 - 1), ctx.qnum(k - 1).neg_ref())
    } else {
        (ctx.qpow(1 - k as i64), ctx.qnum(k - 1))
    };
    let middle = QMatrix::identity(r.n(), k).scale(&qp).add(&rk.scale(&coef));
    Ok(p.mul(&middle).mul(&p).scale(&kq_inv))
}

/// `A^(1), ..., A^(kmax)` by the q-recursion.
pub fn antisymmetrizers<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    kmax: usize,
) -> Result<Vec<QMatrix<S>>> {
    tower(r, ctx, kmax, true)
}

/// `S^(1), ..., S^(kmax)` by the q-recursion.
pub fn symmetrizers<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    kmax: usize,
) -> Result<Vec<QMatrix<S>>> {
    tower(r, ctx, kmax, false)
}

fn tower<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    kmax: usize,
    skew: bool,
) -> Result<Vec<QMatrix<S>>> {
    let mut out: Vec<QMatrix<S>> = Vec::with_capacity(kmax);
    if kmax == 0 {
        return Ok(out);
    }
    out.push(QMatrix::identity(r.n(), 1));
    for k in 2..=kmax {
        let next = symmetrizer_step(r, ctx, &out[k - 2], k, skew)?;
        out.push(next);
    }
    Ok(out)
}

pub fn antisymmetrizer<S: Scalar>(r: &QMatrix<S>, ctx: &QContext<S>, k: usize) -> Result<QMatrix<S>> {
    Ok(antisymmetrizers(r, ctx, k)?.pop().expect("k >= 1"))
}

pub fn symmetrizer<S: Scalar>(r: &QMatrix<S>, ctx: &QContext<S>, k: usize) -> Result<QMatrix<S>> {
    Ok(symmetrizers(r, ctx, k)?.pop().expect("k >= 1"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub m: usize,
    /// `dim Im A^(k)` for `k = 1 ..= m + 1`.
    pub dims: Vec<usize>,
}

pub const DEFAULT_RANK_CAP: usize = 6;

/// Smallest `m` with `dim Im A^(m) = 1` and `A^(m+1) = 0`, together with the
/// antisymmetrizer tower up to `A^(m+1)`.
pub fn rank_with_tower<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    cap: usize,
) -> Result<(RankReport, Vec<QMatrix<S>>)> {
    let mut tower = vec![QMatrix::identity(r.n(), 1)];
    let mut dims = vec![r.n()];
    for k in 2..=cap + 1 {
        let a = symmetrizer_step(r, ctx, &tower[k - 2], k, true)?;
        let d = a.rank();
        dims.push(d);
        tower.push(a);
        if d == 0 {
            if dims[k - 2] == 1 {
                return Ok((RankReport { m: k - 1, dims }, tower));
            }
            return Err(Error::NotFiniteRank { cap, dims });
        }
    }
    Err(Error::NotFiniteRank { cap, dims })
}

pub fn rank_of<S: Scalar>(r: &QMatrix<S>, ctx: &QContext<S>, cap: usize) -> Result<RankReport> {
    Ok(rank_with_tower(r, ctx, cap)?.0)
}

/// Rank-one factorization `A = |u⟩⟨v|` with `⟨v|u⟩ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UvPair<S> {
    pub u: Vec<S>,
    pub v: Vec<S>,
}

impl<S: Scalar> UvPair<S> {
    /// `(λu, λ⁻¹v)`.
    pub fn regauge(&self, lambda: &S) -> Result<Self> {
        let inv = lambda.try_inv()?;
        Ok(UvPair {
            u: self.u.iter().map(|x| x.mul_ref(lambda)).collect(),
            v: self.v.iter().map(|x| x.mul_ref(&inv)).collect(),
        })
    }

    pub fn pairing(&self) -> S {
        self.v
            .iter()
            .zip(&self.u)
            .fold(S::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
    }
}

/// Splits a rank-one idempotent. `v` is scaled so its first nonzero
/// component is 1, then `u` so that `⟨v|u⟩ = 1`.
pub fn uv_factorize<S: Scalar>(a: &QMatrix<S>) -> Result<UvPair<S>> {
    let rank = a.rank();
    if rank != 1 {
        return Err(Error::RankNotOne(rank));
    }
    let d = a.dim();
    let r0 = (0..d)
        .find(|&r| a.row(r).iter().any(|x| !x.is_zero()))
        .expect("rank one");
    let j0 = a.row(r0).iter().position(|x| !x.is_zero()).expect("nonzero row");
    let lead_inv = a.get(r0, j0).try_inv()?;
    let v: Vec<S> = a.row(r0).iter().map(|x| x.mul_ref(&lead_inv)).collect();
    let u0: Vec<S> = (0..d).map(|r| a.get(r, j0).clone()).collect();
    let pairing = v
        .iter()
        .zip(&u0)
        .fold(S::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)));
    let p_inv = pairing
        .try_inv()
        .map_err(|_| Error::Internal("rank-one matrix is nilpotent, not idempotent".into()))?;
    let u: Vec<S> = u0.iter().map(|x| x.mul_ref(&p_inv)).collect();
    let outer = QMatrix::from_fn(a.n(), a.legs(), |r, c| u[r].mul_ref(&v[c]));
    if &outer != a {
        return Err(Error::Internal("rank-one matrix is not idempotent".into()));
    }
    Ok(UvPair { u, v })
}

/// `A = U V` with `U` of full column rank and `V` of full row rank: `V` is
/// the nonzero part of the reduced row echelon form and `U` the pivot
/// columns of `A`. Returned as the columns of `U` and the rows of `V`.
pub fn rank_factorization<S: Scalar>(a: &QMatrix<S>) -> Result<(Vec<Vec<S>>, Vec<Vec<S>>)> {
    let d = a.dim();
    let mut rows: Vec<Vec<S>> = (0..d).map(|r| a.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..d {
        let Some(piv) = (rank..d).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].try_inv()?;
        rows[rank] = rows[rank].iter().map(|x| x.mul_ref(&inv)).collect();
        for r in 0..d {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..d {
                if !rows[rank][c].is_zero() {
                    rows[r][c] = rows[r][c].sub_ref(&f.mul_ref(&rows[rank][c]));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    let cols = pivots
        .iter()
        .map(|&c| (0..d).map(|r| a.get(r, c).clone()).collect())
        .collect();
    Ok((cols, rows))
}

/// Outcome of the structural checks on one member of a symmetrizer tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCheck {
    /// `"A"` or `"S"`.
    pub tower: &'static str,
    pub k: usize,
    pub idempotent: bool,
    /// `X^(k) = X^(k) X^(k-1) = X^(k-1) X^(k)`; true for `k = 1`.
    pub nested: bool,
    /// `X R_i^{±1} = R_i^{±1} X = λ^{±1} X` for `1 <= i < k`, with
    /// `λ = -q^{-1}` for `A` and `λ = q` for `S`.
    pub absorbs: bool,
}

impl TowerCheck {
    pub fn passed(&self) -> bool {
        self.idempotent && self.nested && self.absorbs
    }
}

/// Idempotency, nesting and eigenvalue absorption for both towers up to `kmax`.
pub fn check_towers<S: Scalar>(
    r: &QMatrix<S>,
    ctx: &QContext<S>,
    kmax: usize,
) -> Result<Vec<TowerCheck>> {
    let r_inv = r
        .inverse()
        .ok_or_else(|| Error::Dimension("R is not invertible".into()))?;
    let mut out = Vec::new();
    for (name, skew) in [("A", true), ("S", false)] {
        let t = tower(r, ctx, kmax, skew)?;
        let lambda = if skew {
            ctx.q_inv().neg_ref()
        } else {
            ctx.q().clone()
        };
        let lambda_inv = lambda.try_inv()?;
        for (idx, x) in t.iter().enumerate() {
            let k = idx + 1;
            let idempotent = &x.mul(x) == x;
            let nested = k == 1 || {
                let prev = t[idx - 1].extend(k);
                &x.mul(&prev) == x && &prev.mul(x) == x
            };
            let mut absorbs = true;
            for i in 1..k {
                for (m, l) in [(r, &lambda), (&r_inv, &lambda_inv)] {
                    let ri = embed(m, i, k)?;
                    let target = x.scale(l);
                    absorbs &= x.mul(&ri) == target && ri.mul(x) == target;
                }
            }
            out.push(TowerCheck {
                tower: name,
                k,
                idempotent,
                nested,
                absorbs,
            });
        }
    }
    Ok(out)
}

//! Free noncommutative polynomials in the generators `m_i^j` and `∂_i^j`,
//! and tensor-legged matrices with such entries.
//!
//! Words are compared degree first, then lexicographically letter by letter.
//! Letters order all `m` generators below all `∂` generators and, within a
//! kind, row-major by `(i, j)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::qlinalg::{embed, insert_leg, QMatrix, UvPair};
use crate::scalar::Scalar;

/// Largest supported base dimension (indices are packed into a byte).
pub const MAX_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    M,
    D,
}

/// A generator `m_i^j` or `∂_i^j`; indices are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u8);

impl Gen {
    pub fn new(kind: Kind, i: usize, j: usize) -> Self {
        debug_assert!(i <= MAX_N && j <= MAX_N);
        let k = match kind {
            Kind::M => 0,
            Kind::D => 1,
        };
        Gen((k << 6) | ((i as u8) << 3) | j as u8)
    }

    pub fn m(i: usize, j: usize) -> Self {
        Gen::new(Kind::M, i, j)
    }

    pub fn d(i: usize, j: usize) -> Self {
        Gen::new(Kind::D, i, j)
    }

    pub fn kind(self) -> Kind {
        if self.0 >> 6 == 0 {
            Kind::M
        } else {
            Kind::D
        }
    }

    pub fn i(self) -> usize {
        ((self.0 >> 3) & 7) as usize
    }

    pub fn j(self) -> usize {
        (self.0 & 7) as usize
    }

    pub fn is_m(self) -> bool {
        self.kind() == Kind::M
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.is_m() { "m" } else { "d" };
        write!(f, "{k}{}{}", self.i() + 1, self.j() + 1)
    }
}

/// A monomial: a finite sequence of generators.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[Gen; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_gens(gens: &[Gen]) -> Self {
        Word(SmallVec::from_slice(gens))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    /// `(m-letter count, ∂-letter count)`.
    pub fn degree(&self) -> (usize, usize) {
        let m = self.0.iter().filter(|g| g.is_m()).count();
        (m, self.0.len() - m)
    }

    pub fn is_normal_ordered(&self) -> bool {
        !self.0.windows(2).any(|w| !w[0].is_m() && w[1].is_m())
    }

    /// Splits a normal-ordered word into its `m` prefix and `∂` suffix.
    pub fn split_normal(&self) -> (Word, Word) {
        let cut = self.0.iter().position(|g| !g.is_m()).unwrap_or(self.0.len());
        (
            Word::from_gens(&self.0[..cut]),
            Word::from_gens(&self.0[cut..]),
        )
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A noncommutative polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Default)]
pub struct NCPoly<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> NCPoly<S> {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn term(w: Word, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(Word::from_gens(&[g]), S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &S)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, S)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&S> {
        self.terms.get(w)
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &S)> {
        self.terms.iter().next_back()
    }

    pub fn pop_leading(&mut self) -> Option<(Word, S)> {
        self.terms.pop_last()
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &NCPoly<S>, c: &S) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (w, a) in other.terms() {
            let v = if unit { a.clone() } else { a.mul_ref(c) };
            self.add_term(w.clone(), v);
        }
    }

    pub fn add(&self, other: &NCPoly<S>) -> NCPoly<S> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &NCPoly<S>) -> NCPoly<S> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one().neg_ref());
        out
    }

    pub fn neg(&self) -> NCPoly<S> {
        self.scale(&S::one().neg_ref())
    }

    pub fn scale(&self, c: &S) -> NCPoly<S> {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.mul_ref(c)))
                .collect(),
        }
    }

    /// Product in the free algebra (word concatenation).
    pub fn mul(&self, other: &NCPoly<S>) -> NCPoly<S> {
        let mut out = Self::zero();
        for (w1, a) in self.terms() {
            for (w2, b) in other.terms() {
                out.add_term(w1.concat(w2), a.mul_ref(b));
            }
        }
        out
    }

    /// Maximal letter counts by kind over all words.
    pub fn nc_degree(&self) -> (usize, usize) {
        self.terms.keys().fold((0, 0), |acc, w| {
            let d = w.degree();
            (acc.0.max(d.0), acc.1.max(d.1))
        })
    }

    /// Counit of the derivative algebra: the coefficient of the empty word.
    pub fn counit(&self) -> Result<S> {
        if self.terms.keys().any(|w| w.gens().iter().any(|g| g.is_m())) {
            return Err(Error::CounitOnCoordinates);
        }
        Ok(self
            .terms
            .get(&Word::empty())
            .cloned()
            .unwrap_or_else(S::zero))
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| w.is_normal_ordered())
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> NCPoly<T> {
        let mut out = NCPoly::zero();
        for (w, c) in self.terms() {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl<S: fmt::Debug> fmt::Debug for NCPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})*{w}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for NCPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({c})*{w}")?;
            }
        }
        Ok(())
    }
}

/// A square matrix on `p` legs with noncommutative polynomial entries,
/// flattened like [`QMatrix`].
#[derive(Clone, PartialEq, Debug)]
pub struct NCMatrix<S> {
    n: usize,
    legs: usize,
    dim: usize,
    entries: Vec<NCPoly<S>>,
}

impl<S: Scalar> NCMatrix<S> {
    pub fn zeros(n: usize, legs: usize) -> Self {
        let dim = n.pow(legs as u32);
        NCMatrix {
            n,
            legs,
            dim,
            entries: vec![NCPoly::zero(); dim * dim],
        }
    }

    pub fn from_fn(n: usize, legs: usize, f: impl Fn(usize, usize) -> NCPoly<S>) -> Self {
        let dim = n.pow(legs as u32);
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        NCMatrix {
            n,
            legs,
            dim,
            entries,
        }
    }

    pub fn from_entries(n: usize, legs: usize, entries: Vec<NCPoly<S>>) -> Self {
        let dim = n.pow(legs as u32);
        assert_eq!(entries.len(), dim * dim);
        NCMatrix {
            n,
            legs,
            dim,
            entries,
        }
    }

    /// The generating matrix `M` (entries `m_i^j`) or `D` (entries `∂_i^j`).
    pub fn gen_matrix(kind: Kind, n: usize) -> Self {
        Self::from_fn(n, 1, |i, j| NCPoly::gen(Gen::new(kind, i, j)))
    }

    pub fn from_scalar(a: &QMatrix<S>) -> Self {
        Self::from_fn(a.n(), a.legs(), |r, c| NCPoly::constant(a.get(r, c).clone()))
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

    pub fn get(&self, r: usize, c: usize) -> &NCPoly<S> {
        &self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[NCPoly<S>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<NCPoly<S>> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn nc_degree(&self) -> (usize, usize) {
        self.entries.iter().fold((0, 0), |acc, e| {
            let d = e.nc_degree();
            (acc.0.max(d.0), acc.1.max(d.1))
        })
    }

    pub fn map(&self, f: impl Fn(&NCPoly<S>) -> NCPoly<S> + Sync + Send) -> Self {
        use rayon::prelude::*;
        let entries = self.entries.par_iter().map(f).collect();
        NCMatrix {
            entries,
            ..*self
        }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&NCPoly<S>) -> Result<NCPoly<S>> + Sync + Send,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let entries = self.entries.par_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(NCMatrix {
            entries,
            ..*self
        })
    }

    fn check_shape(&self, n: usize, legs: usize) {
        assert!(
            self.n == n && self.legs == legs,
            "shape mismatch: N={} p={} vs N={n} p={legs}",
            self.n,
            self.legs
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other.n, other.legs);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        NCMatrix {
            entries,
            ..*self
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_shape(other.n, other.legs);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        NCMatrix {
            entries,
            ..*self
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let entries = self.entries.iter().map(|a| a.scale(c)).collect();
        NCMatrix {
            entries,
            ..*self
        }
    }

    /// `self + c·I`.
    pub fn add_identity(&self, c: &S) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i].add_term(Word::empty(), c.clone());
        }
        out
    }

    /// `self ⊗ I` padded to `legs` legs.
    pub fn extend(&self, legs: usize) -> Self {
        assert!(legs >= self.legs);
        let pad = self.n.pow((legs - self.legs) as u32);
        Self::from_fn(self.n, legs, |r, c| {
            if r % pad == c % pad {
                self.get(r / pad, c / pad).clone()
            } else {
                NCPoly::zero()
            }
        })
    }

    /// Product with an arbitrary entry multiplication.
    pub fn mul_with(
        &self,
        other: &Self,
        mul: impl Fn(&NCPoly<S>, &NCPoly<S>) -> NCPoly<S> + Sync + Send,
    ) -> Self {
        use rayon::prelude::*;
        self.check_shape(other.n, other.legs);
        let d = self.dim;
        let rows: Vec<Vec<NCPoly<S>>> = (0..d)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![NCPoly::zero(); d];
                for s in 0..d {
                    let a = self.get(i, s);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in row.iter_mut().enumerate() {
                        let b = other.get(s, j);
                        if !b.is_zero() {
                            let p = mul(a, b);
                            slot.add_scaled(&p, &S::one());
                        }
                    }
                }
                row
            })
            .collect();
        NCMatrix {
            entries: rows.into_iter().flatten().collect(),
            ..*self
        }
    }

    /// `(XY)_i^j = Σ_s X_i^s Y_s^j` in the free algebra.
    pub fn mat_mul(&self, other: &Self) -> Self {
        self.mul_with(other, |a, b| a.mul(b))
    }

    /// `A · X` for a scalar matrix `A`.
    pub fn scalar_mat_mul(a: &QMatrix<S>, x: &Self) -> Self {
        x.check_shape(a.n(), a.legs());
        let d = x.dim;
        Self::from_fn(x.n, x.legs, |i, j| {
            let mut acc = NCPoly::zero();
            for (s, c) in a.row(i).iter().enumerate() {
                if !c.is_zero() {
                    acc.add_scaled(x.get(s, j), c);
                }
            }
            debug_assert!(d > 0);
            acc
        })
    }

    /// `X · A` for a scalar matrix `A`.
    pub fn mat_scalar_mul(&self, a: &QMatrix<S>) -> Self {
        self.check_shape(a.n(), a.legs());
        let d = self.dim;
        Self::from_fn(self.n, self.legs, |i, j| {
            let mut acc = NCPoly::zero();
            for s in 0..d {
                let c = a.get(s, j);
                if !c.is_zero() {
                    acc.add_scaled(self.get(i, s), c);
                }
            }
            acc
        })
    }

    /// `R_i X R_i^{-1}`: the copy on leg `i + 1` from the copy on leg `i`.
    pub fn copy_up(&self, r: &QMatrix<S>, r_inv: &QMatrix<S>, i: usize) -> Result<Self> {
        let ri = embed(r, i, self.legs).map_err(|_| Error::LegOutOfRange {
            leg: i + 1,
            legs: self.legs,
        })?;
        let ri_inv = embed(r_inv, i, self.legs)?;
        Ok(Self::scalar_mat_mul(&ri, self).mat_scalar_mul(&ri_inv))
    }

    /// `R_i^{-1} X R_i`.
    pub fn copy_down(&self, r: &QMatrix<S>, r_inv: &QMatrix<S>, i: usize) -> Result<Self> {
        self.copy_up(r_inv, r, i)
    }

    /// Partial trace over `leg` (1-based) weighted by `weight` on that leg.
    pub fn weighted_partial_trace(&self, leg: usize, weight: &QMatrix<S>) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::LegOutOfRange {
                leg,
                legs: self.legs,
            });
        }
        let n = self.n;
        let out_dim = self.dim / n;
        let mut entries = Vec::with_capacity(out_dim * out_dim);
        for r in 0..out_dim {
            for c in 0..out_dim {
                let mut acc = NCPoly::zero();
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
                        acc.add_scaled(x, w);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(NCMatrix::from_entries(n, self.legs - 1, entries))
    }

    /// R-trace over all legs with weight `c` on each leg.
    pub fn r_trace_full(&self, c: &QMatrix<S>) -> Result<NCPoly<S>> {
        let mut out = self.clone();
        for leg in (1..=self.legs).rev() {
            out = out.weighted_partial_trace(leg, c)?;
        }
        Ok(out.entries.pop().expect("scalar"))
    }

    /// Ordinary trace over all legs.
    pub fn trace(&self) -> NCPoly<S> {
        let mut acc = NCPoly::zero();
        for i in 0..self.dim {
            acc.add_scaled(self.get(i, i), &S::one());
        }
        acc
    }

    /// `⟨v| X |u⟩`.
    pub fn sandwich(&self, uv: &UvPair<S>) -> NCPoly<S> {
        let mut acc = NCPoly::zero();
        for (i, vi) in uv.v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, uj) in uv.u.iter().enumerate() {
                if !uj.is_zero() {
                    acc.add_scaled(self.get(i, j), &vi.mul_ref(uj));
                }
            }
        }
        acc
    }
}


/// `X_ov1, ..., X_ovp` on `p` legs, from a one-legged `X`, via repeated
/// [`NCMatrix::copy_up`].
pub fn over_copies<S: Scalar>(
    x: &NCMatrix<S>,
    r: &QMatrix<S>,
    r_inv: &QMatrix<S>,
    p: usize,
) -> Result<Vec<NCMatrix<S>>> {
    let mut out = vec![x.extend(p)];
    for i in 1..p {
        let next = out[i - 1].copy_up(r, r_inv, i)?;
        out.push(next);
    }
    Ok(out)
}

/// `X_un1, ..., X_unp` via repeated [`NCMatrix::copy_down`].
pub fn under_copies<S: Scalar>(
    x: &NCMatrix<S>,
    r: &QMatrix<S>,
    r_inv: &QMatrix<S>,
    p: usize,
) -> Result<Vec<NCMatrix<S>>> {
    let mut out = vec![x.extend(p)];
    for i in 1..p {
        let next = out[i - 1].copy_down(r, r_inv, i)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type Q = BigRational;

    #[test]
    fn generator_order() {
        assert!(Gen::m(2, 2) < Gen::d(0, 0));
        assert!(Gen::m(0, 1) < Gen::m(1, 0));
        assert!(Gen::d(1, 0) > Gen::d(0, 2));
        let a = Word::from_gens(&[Gen::d(0, 0)]);
        let b = Word::from_gens(&[Gen::m(0, 0), Gen::m(0, 0)]);
        assert!(a < b);
    }

    #[test]
    fn generating_matrices() {
        let m = NCMatrix::<Q>::gen_matrix(Kind::M, 2);
        assert_eq!(m.get(0, 1), &NCPoly::gen(Gen::m(0, 1)));
        let d = NCMatrix::<Q>::gen_matrix(Kind::D, 2);
        assert_eq!(d.get(1, 0), &NCPoly::gen(Gen::d(1, 0)));
        let m1 = NCMatrix::<Q>::gen_matrix(Kind::M, 1);
        assert_eq!(m1.get(0, 0), &NCPoly::gen(Gen::m(0, 0)));
    }

    #[test]
    fn l_matrix_entries() {
        let m = NCMatrix::<Q>::gen_matrix(Kind::M, 2);
        let d = NCMatrix::<Q>::gen_matrix(Kind::D, 2);
        let l = m.mat_mul(&d);
        let mut expect = NCPoly::zero();
        for s in 0..2 {
            expect.add_term(Word::from_gens(&[Gen::m(0, s), Gen::d(s, 1)]), Q::one());
        }
        assert_eq!(l.get(0, 1), &expect);
        let id = NCMatrix::from_scalar(&QMatrix::<Q>::identity(2, 1));
        assert_eq!(m.mat_mul(&id), m);
    }

    #[test]
    fn counit_and_degree() {
        let one = NCPoly::<Q>::one();
        assert_eq!(one.counit().unwrap(), Q::one());
        let d = NCPoly::<Q>::gen(Gen::d(0, 0));
        assert!(d.counit().unwrap().is_zero());
        let mut x = NCPoly::constant(Q::from_integer(3.into()));
        x.add_term(Word::from_gens(&[Gen::d(0, 0), Gen::d(1, 1)]), Q::one());
        assert_eq!(x.counit().unwrap(), Q::from_integer(3.into()));
        assert_eq!(NCPoly::<Q>::gen(Gen::m(0, 0)).counit(), Err(Error::CounitOnCoordinates));
        let md = NCPoly::<Q>::term(Word::from_gens(&[Gen::m(0, 0), Gen::d(0, 0)]), Q::one());
        assert_eq!(md.nc_degree(), (1, 1));
        assert_eq!(one.nc_degree(), (0, 0));
    }

    #[test]
    fn copies_under_flip_are_plain_legs() {
        let p = QMatrix::<Q>::flip(2);
        let m = NCMatrix::<Q>::gen_matrix(Kind::M, 2);
        let copies = over_copies(&m, &p, &p, 2).unwrap();
        // M_2 = I ⊗ M
        let expect = NCMatrix::from_fn(2, 2, |r, c| {
            if r / 2 == c / 2 {
                m.get(r % 2, c % 2).clone()
            } else {
                NCPoly::zero()
            }
        });
        assert_eq!(copies[1], expect);
        let down = copies[1].copy_down(&p, &p, 1).unwrap();
        assert_eq!(down, copies[0]);
        assert!(copies[1].copy_up(&p, &p, 2).is_err());
    }
}

//! Canonical forms in the quantum double of the two RE algebras.
//!
//! A canonical element is a combination of words `u · w` where `u` is an
//! irreducible word in the `m` letters and `w` an irreducible word in the
//! `∂` letters. Two routes lead there: [`DoubleAlgebra::reduce`] normal-orders
//! in the free algebra first and reduces each segment afterwards, while
//! [`DoubleAlgebra::mul`] multiplies canonical forms directly through a
//! memoized exchange of a `∂` word past an `m` word.

use std::collections::HashMap;

use parking_lot::RwLock;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalg::{Kind, NCMatrix, NCPoly, Word};
use crate::rcatalog::HeckeSymmetry;
use crate::scalar::Scalar;

use super::exchange::{check_round_trip, derive_exchange, ExchangeTable};
use super::rules::{complete, derive_dd_rules, derive_re_rules, Reducer};

/// Which `∂ m` factor normal ordering rewrites first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

pub struct DoubleAlgebra<S> {
    h: HeckeSymmetry<S>,
    table: ExchangeTable<S>,
    m: Reducer<S>,
    d: Reducer<S>,
    swaps: RwLock<HashMap<(Word, Word), NCPoly<S>>>,
}

impl<S: Scalar> DoubleAlgebra<S> {
    /// Derives the exchange table and completes both relation sets up to
    /// word length `degree` in each alphabet.
    pub fn new(h: HeckeSymmetry<S>, degree: usize, rule_cap: usize) -> Result<Self> {
        let table = derive_exchange(&h)?;
        if !check_round_trip(&table, &h) {
            return Err(Error::Internal("exchange table does not reproduce the permutation relations".into()));
        }
        let degree = degree.max(2);
        let m = complete(derive_re_rules(&h)?, degree, rule_cap)?;
        let d = complete(derive_dd_rules(&h)?, degree, rule_cap)?;
        Ok(DoubleAlgebra {
            h,
            table,
            m: Reducer::new(m),
            d: Reducer::new(d),
            swaps: RwLock::new(HashMap::new()),
        })
    }

    pub fn hecke(&self) -> &HeckeSymmetry<S> {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn table(&self) -> &ExchangeTable<S> {
        &self.table
    }

    pub fn m_reducer(&self) -> &Reducer<S> {
        &self.m
    }

    pub fn d_reducer(&self) -> &Reducer<S> {
        &self.d
    }

    /// Moves every `∂` to the right of every `m` using the exchange table
    /// only; no relation of either algebra is applied.
    pub fn normal_order(&self, x: &NCPoly<S>, strategy: Strategy) -> NCPoly<S> {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(StdRng::seed_from_u64(seed)),
            _ => None,
        };
        let mut work = x.clone();
        let mut out = NCPoly::zero();
        while let Some((w, c)) = work.pop_leading() {
            let g = w.gens();
            let redexes: Vec<usize> = (0..g.len().saturating_sub(1))
                .filter(|&p| !g[p].is_m() && g[p + 1].is_m())
                .collect();
            if redexes.is_empty() {
                out.add_term(w, c);
                continue;
            }
            let p = match (strategy, rng.as_mut()) {
                (Strategy::Leftmost, _) => redexes[0],
                (Strategy::Rightmost, _) => redexes[redexes.len() - 1],
                (Strategy::Random(_), Some(r)) => redexes[r.gen_range(0..redexes.len())],
                (Strategy::Random(_), None) => unreachable!(),
            };
            let left = Word::from_gens(&g[..p]);
            let right = Word::from_gens(&g[p + 2..]);
            for (t, a) in self.table.rewrite(g[p], g[p + 1]).terms() {
                work.add_term(left.concat(t).concat(&right), a.mul_ref(&c));
            }
        }
        out
    }

    /// Canonical form of the normal-ordered word `mw · dw`.
    fn canonical_word(&self, mw: &Word, dw: &Word) -> Result<NCPoly<S>> {
        let a = self.m.nf_word(mw)?;
        let b = self.d.nf_word(dw)?;
        Ok(a.mul(&b))
    }

    /// Canonical form of an arbitrary element, via free normal ordering.
    pub fn reduce(&self, x: &NCPoly<S>) -> Result<NCPoly<S>> {
        self.reduce_with(x, Strategy::Leftmost)
    }

    pub fn reduce_with(&self, x: &NCPoly<S>, strategy: Strategy) -> Result<NCPoly<S>> {
        let ordered = self.normal_order(x, strategy);
        let mut out = NCPoly::zero();
        for (w, c) in ordered.terms() {
            let (mw, dw) = w.split_normal();
            out.add_scaled(&self.canonical_word(&mw, &dw)?, c);
        }
        Ok(out)
    }

    /// Canonical form of `dw · mw` for a `∂` word and an `m` word.
    fn swap(&self, dw: &Word, mw: &Word) -> Result<NCPoly<S>> {
        if dw.is_empty() || mw.is_empty() {
            return self.canonical_word(mw, dw);
        }
        let key = (dw.clone(), mw.clone());
        if let Some(p) = self.swaps.read().get(&key) {
            return Ok(p.clone());
        }
        let dg = dw.gens();
        let mg = mw.gens();
        let mut out = NCPoly::zero();
        if dg.len() > 1 {
            // ∂_0 · (rest · mw)
            let rest = Word::from_gens(&dg[1..]);
            let head = Word::from_gens(&dg[..1]);
            for (t, c) in self.swap(&rest, mw)?.terms() {
                let (tm, td) = t.split_normal();
                for (s, a) in self.swap(&head, &tm)?.terms() {
                    let (sm, sd) = s.split_normal();
                    let dpart = self.d.nf_word(&sd.concat(&td))?;
                    out.add_scaled(&NCPoly::term(sm, S::one()).mul(&dpart), &a.mul_ref(c));
                }
            }
        } else {
            // (∂ m_0) · rest
            let rest = Word::from_gens(&mg[1..]);
            for (t, c) in self.table.rewrite(dg[0], mg[0]).terms() {
                let tg = t.gens();
                if tg.is_empty() {
                    out.add_scaled(&self.m.nf_word(&rest)?, c);
                    continue;
                }
                let x = Word::from_gens(&tg[..1]);
                let u = Word::from_gens(&tg[1..]);
                for (s, a) in self.swap(&u, &rest)?.terms() {
                    let (sm, sd) = s.split_normal();
                    let mpart = self.m.nf_word(&x.concat(&sm))?;
                    out.add_scaled(&mpart.mul(&NCPoly::term(sd, S::one())), &a.mul_ref(c));
                }
            }
        }
        self.swaps.write().insert(key, out.clone());
        Ok(out)
    }

    /// Product of two canonical elements, returned in canonical form.
    pub fn mul(&self, a: &NCPoly<S>, b: &NCPoly<S>) -> Result<NCPoly<S>> {
        let mut out = NCPoly::zero();
        for (wa, ca) in a.terms() {
            let (ma, da) = wa.split_normal();
            for (wb, cb) in b.terms() {
                let (mb, db) = wb.split_normal();
                let cab = ca.mul_ref(cb);
                for (s, c) in self.swap(&da, &mb)?.terms() {
                    let (sm, sd) = s.split_normal();
                    let left = self.m.nf_word(&ma.concat(&sm))?;
                    let right = self.d.nf_word(&sd.concat(&db))?;
                    out.add_scaled(&left.mul(&right), &c.mul_ref(&cab));
                }
            }
        }
        Ok(out)
    }

    /// Matrix product with canonical entry multiplication.
    pub fn mat_mul(&self, x: &NCMatrix<S>, y: &NCMatrix<S>) -> Result<NCMatrix<S>> {
        if x.n() != y.n() || x.legs() != y.legs() {
            return Err(Error::Dimension("matrix shapes differ".into()));
        }
        let dim = x.dim();
        let rows: Vec<Vec<NCPoly<S>>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![NCPoly::zero(); dim];
                for s in 0..dim {
                    let a = x.get(i, s);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in row.iter_mut().enumerate() {
                        let b = y.get(s, j);
                        if !b.is_zero() {
                            slot.add_scaled(&self.mul(a, b)?, &S::one());
                        }
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(NCMatrix::from_entries(x.n(), x.legs(), rows.into_iter().flatten().collect()))
    }

    /// Entrywise canonical form.
    pub fn reduce_matrix(&self, x: &NCMatrix<S>) -> Result<NCMatrix<S>> {
        x.try_map(|p| self.reduce(p))
    }

    /// `a ▷ b` for `a` in the `∂` letters and `b` in the `m` letters:
    /// normal-order `a · b`, keep the words free of `∂`, reduce.
    pub fn apply_derivative(&self, a: &NCPoly<S>, b: &NCPoly<S>) -> Result<NCPoly<S>> {
        let pure = |p: &NCPoly<S>, kind: Kind| p.terms().all(|(w, _)| w.gens().iter().all(|g| g.kind() == kind));
        if !pure(a, Kind::D) || !pure(b, Kind::M) {
            return Err(Error::Config("apply_derivative expects a ∂-polynomial and an m-polynomial".into()));
        }
        let ordered = self.normal_order(&a.mul(b), Strategy::Leftmost);
        let mut kept = NCPoly::zero();
        for (w, c) in ordered.terms() {
            if w.gens().iter().all(|g| g.is_m()) {
                kept.add_term(w.clone(), c.clone());
            }
        }
        self.m.nf(&kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Gen;
    use crate::rcatalog::{dj, flip};
    use crate::rewrite::rules::DEFAULT_RULE_CAP;
    use crate::scalar::QConfig;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type Q = BigRational;

    fn q35() -> QConfig {
        QConfig::fixed(BigRational::new(3.into(), 5.into())).unwrap()
    }

    fn mono(gens: &[Gen]) -> NCPoly<Q> {
        NCPoly::term(Word::from_gens(gens), Q::one())
    }

    #[test]
    fn one_dimensional_exchange() {
        let alg = DoubleAlgebra::new(dj::<Q>(1, q35()).unwrap(), 3, DEFAULT_RULE_CAP).unwrap();
        let (d, m) = (Gen::d(0, 0), Gen::m(0, 0));
        let q = BigRational::new(3.into(), 5.into());
        let mut expect = NCPoly::constant(q.recip());
        expect.add_term(Word::from_gens(&[m, d]), (q.clone() * q.clone()).recip());
        assert_eq!(alg.normal_order(&mono(&[d, m]), Strategy::Leftmost), expect);
        assert_eq!(alg.reduce(&mono(&[d, m]).sub(&expect)).unwrap(), NCPoly::zero());
        assert_eq!(
            alg.apply_derivative(&mono(&[d]), &mono(&[m])).unwrap(),
            NCPoly::constant(q.recip())
        );
    }

    #[test]
    fn fast_product_matches_free_ordering() {
        let alg = DoubleAlgebra::new(dj::<Q>(2, q35()).unwrap(), 3, DEFAULT_RULE_CAP).unwrap();
        let a = mono(&[Gen::m(0, 1), Gen::d(1, 0), Gen::d(0, 0)]);
        let b = mono(&[Gen::m(1, 1), Gen::m(1, 0), Gen::d(0, 1)]);
        let ra = alg.reduce(&a).unwrap();
        let rb = alg.reduce(&b).unwrap();
        let fast = alg.mul(&ra, &rb).unwrap();
        for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(7)] {
            assert_eq!(alg.reduce_with(&a.mul(&b), s).unwrap(), fast);
        }
    }

    #[test]
    fn flip_is_the_weyl_algebra() {
        let alg = DoubleAlgebra::new(flip::<Q>(2).unwrap(), 2, DEFAULT_RULE_CAP).unwrap();
        for (i, j, k, l) in [(0, 1, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)] {
            let got = alg.normal_order(&mono(&[Gen::d(i, j), Gen::m(k, l)]), Strategy::Leftmost);
            let mut expect = mono(&[Gen::m(k, l), Gen::d(i, j)]);
            if i == l && k == j {
                expect.add_term(Word::empty(), Q::one());
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn derivative_of_second_copy_is_inverse_r() {
        let h = dj::<Q>(2, q35()).unwrap();
        let r_inv = h.r_inv.clone();
        let alg = DoubleAlgebra::new(h, 2, DEFAULT_RULE_CAP).unwrap();
        let n = 2;
        let d1 = NCMatrix::<Q>::gen_matrix(Kind::D, n).extend(2);
        let m1 = NCMatrix::<Q>::gen_matrix(Kind::M, n).extend(2);
        let m2 = m1.copy_up(&alg.hecke().r, &r_inv, 1).unwrap();
        // (D_1 ▷ M_2) entrywise: Σ_s (D_1)_i^s ▷ (M_2)_s^j
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = NCPoly::zero();
                for s in 0..4 {
                    acc = acc.add(&alg.apply_derivative(d1.get(i, s), m2.get(s, j)).unwrap());
                }
                let expect = r_inv.get(i, j);
                if expect.is_zero() {
                    assert!(acc.is_zero());
                } else {
                    assert_eq!(acc, NCPoly::constant(expect.clone()));
                }
            }
        }
    }
}

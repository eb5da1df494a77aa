//! The permutation relations `D_1 R M_1 = R M_1 R^{-1} D_1 R^{-1} + I`
//! solved for every product `∂_a^b m_c^d`.

use crate::error::Result;
use crate::ncalg::{Gen, Kind, NCMatrix, NCPoly, Word};
use crate::rcatalog::HeckeSymmetry;
use crate::scalar::Scalar;

/// `∂_a^b m_c^d = Σ coeff · m_x^y ∂_u^v + constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeEntry<S> {
    pub terms: Vec<((usize, usize, usize, usize), S)>,
    pub constant: S,
}

#[derive(Clone, Debug)]
pub struct ExchangeTable<S> {
    n: usize,
    entries: Vec<ExchangeEntry<S>>,
    /// The same entries as polynomials, indexed like `entries`.
    polys: Vec<NCPoly<S>>,
}

impl<S: Scalar> ExchangeTable<S> {
    fn index(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let n = self.n;
        ((a * n + b) * n + c) * n + d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry for `∂_a^b m_c^d` (0-based).
    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> &ExchangeEntry<S> {
        &self.entries[self.index(a, b, c, d)]
    }

    /// Rewrites the two-letter word `∂ · m`.
    pub fn rewrite(&self, dgen: Gen, mgen: Gen) -> &NCPoly<S> {
        debug_assert!(dgen.kind() == Kind::D && mgen.kind() == Kind::M);
        &self.polys[self.index(dgen.i(), dgen.j(), mgen.i(), mgen.j())]
    }
}

/// Builds the exchange table.
///
/// In components the permutation relation reads, for fixed `(a1, c1)`,
/// `Σ_{s,t} R[(s,a2),(t,c2)] T(a1,s,t,c1) = RHS(a1,a2,c1,c2)` where
/// `T(a,b,c,d)` stands for `∂_a^b m_c^d`. The coefficient matrix is the
/// transposed partial transpose of `R`, whose inverse has entries
/// `Ψ[(c2,t),(a2,s)]`.
pub fn derive_exchange<S: Scalar>(h: &HeckeSymmetry<S>) -> Result<ExchangeTable<S>> {
    let n = h.n();
    let r = &h.r;
    let ri = &h.r_inv;
    let psi = &h.skew.psi;
    let pair = |a: usize, b: usize| a * n + b;

    // rhs[(a1,a2,c1,c2)] as (coefficient of m_x^y ∂_z^w, constant)
    let rhs = |a1: usize, a2: usize, c1: usize, c2: usize| -> (Vec<S>, S) {
        let mut coeffs = vec![S::zero(); n * n * n * n];
        for x in 0..n {
            for x2 in 0..n {
                let r1 = r.get(pair(a1, a2), pair(x, x2));
                if r1.is_zero() {
                    continue;
                }
                for y in 0..n {
                    for z in 0..n {
                        for z2 in 0..n {
                            let r2 = ri.get(pair(y, x2), pair(z, z2));
                            if r2.is_zero() {
                                continue;
                            }
                            let r12 = r1.mul_ref(r2);
                            for w in 0..n {
                                let r3 = ri.get(pair(w, z2), pair(c1, c2));
                                if r3.is_zero() {
                                    continue;
                                }
                                let k = ((x * n + y) * n + z) * n + w;
                                coeffs[k] = coeffs[k].add_ref(&r12.mul_ref(r3));
                            }
                        }
                    }
                }
            }
        }
        let constant = if a1 == c1 && a2 == c2 { S::one() } else { S::zero() };
        (coeffs, constant)
    };

    let n4 = n * n * n * n;
    let mut entries: Vec<Option<ExchangeEntry<S>>> = vec![None; n4];
    for a1 in 0..n {
        for c1 in 0..n {
            let rhs_all: Vec<Vec<(Vec<S>, S)>> = (0..n)
                .map(|a2| (0..n).map(|c2| rhs(a1, a2, c1, c2)).collect())
                .collect();
            for s in 0..n {
                for t in 0..n {
                    let mut coeffs = vec![S::zero(); n4];
                    let mut constant = S::zero();
                    for a2 in 0..n {
                        for c2 in 0..n {
                            let k = psi.get(pair(c2, t), pair(a2, s));
                            if k.is_zero() {
                                continue;
                            }
                            let (rc, rk) = &rhs_all[a2][c2];
                            for (acc, v) in coeffs.iter_mut().zip(rc) {
                                if !v.is_zero() {
                                    *acc = acc.add_ref(&k.mul_ref(v));
                                }
                            }
                            constant = constant.add_ref(&k.mul_ref(rk));
                        }
                    }
                    let terms = coeffs
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| {
                            let w = k % n;
                            let z = (k / n) % n;
                            let y = (k / (n * n)) % n;
                            let x = k / (n * n * n);
                            ((x, y, z, w), c)
                        })
                        .collect();
                    entries[((a1 * n + s) * n + t) * n + c1] = Some(ExchangeEntry { terms, constant });
                }
            }
        }
    }
    let entries: Vec<ExchangeEntry<S>> = entries.into_iter().map(|e| e.expect("filled")).collect();
    let polys = entries
        .iter()
        .map(|e| {
            let mut p = NCPoly::constant(e.constant.clone());
            for ((x, y, z, w), c) in &e.terms {
                p.add_term(Word::from_gens(&[Gen::m(*x, *y), Gen::d(*z, *w)]), c.clone());
            }
            p
        })
        .collect();
    Ok(ExchangeTable { n, entries, polys })
}

/// Checks that `D_1 R M_1`, rewritten with the table, equals
/// `R M_1 R^{-1} D_1 R^{-1} + I` entrywise.
pub fn check_round_trip<S: Scalar>(table: &ExchangeTable<S>, h: &HeckeSymmetry<S>) -> bool {
    let n = h.n();
    let m1 = NCMatrix::<S>::gen_matrix(Kind::M, n).extend(2);
    let d1 = NCMatrix::<S>::gen_matrix(Kind::D, n).extend(2);
    let lhs = d1.mat_scalar_mul(&h.r).mat_mul(&m1);
    let lhs = lhs.map(|p| {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let g = w.gens();
            out.add_scaled(table.rewrite(g[0], g[1]), c);
        }
        out
    });
    let rhs = NCMatrix::scalar_mat_mul(&h.r, &m1)
        .mat_scalar_mul(&h.r_inv)
        .mat_mul(&d1)
        .mat_scalar_mul(&h.r_inv)
        .add_identity(&S::one());
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcatalog::{dj, flip};
    use crate::scalar::{QConfig, RatFunc};
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    #[test]
    fn scalar_case() {
        let h = dj::<RatFunc>(1, QConfig::Symbolic).unwrap();
        let t = derive_exchange(&h).unwrap();
        let e = t.entry(0, 0, 0, 0);
        assert_eq!(e.constant, RatFunc::qpow(-1));
        assert_eq!(e.terms, vec![((0, 0, 0, 0), RatFunc::qpow(-2))]);
    }

    #[test]
    fn flip_gives_leibniz_rule() {
        let h = flip::<BigRational>(3).unwrap();
        let t = derive_exchange(&h).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let e = t.entry(a, b, c, d);
                        assert_eq!(e.terms, vec![((c, d, a, b), BigRational::one())]);
                        let delta = a == d && c == b;
                        assert_eq!(e.constant.is_zero(), !delta);
                    }
                }
            }
        }
    }

    #[test]
    fn round_trips() {
        let h = dj::<RatFunc>(2, QConfig::Symbolic).unwrap();
        assert!(check_round_trip(&derive_exchange(&h).unwrap(), &h));
        let q = QConfig::fixed(BigRational::new(3.into(), 5.into())).unwrap();
        let h = dj::<BigRational>(3, q).unwrap();
        assert!(check_round_trip(&derive_exchange(&h).unwrap(), &h));
        let h = flip::<BigRational>(2).unwrap();
        assert!(check_round_trip(&derive_exchange(&h).unwrap(), &h));
    }
}

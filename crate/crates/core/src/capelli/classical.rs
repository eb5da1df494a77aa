//! The commutative Weyl algebra in `x_{ij}` and `∂/∂x_{ij}`, written from
//! scratch: elements are kept as `x^a ∂^b` monomials and multiplied by the
//! Leibniz formula.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ncalg::{Kind, NCPoly};

/// `(exponents of x, exponents of ∂)`, both indexed by `i * n + j`.
type Mono = (Vec<u8>, Vec<u8>);

#[derive(Clone, PartialEq, Eq)]
pub struct WeylPoly {
    n: usize,
    terms: BTreeMap<Mono, BigRational>,
}

fn falling(c: u8, k: u8) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(c - t))
}

fn binom(b: u8, k: u8) -> BigInt {
    falling(b, k) / falling(k, k)
}

impl WeylPoly {
    pub fn zero(n: usize) -> Self {
        WeylPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term((vec![0; n * n], vec![0; n * n]), c);
        p
    }

    pub fn x(n: usize, i: usize, j: usize) -> Self {
        let mut a = vec![0; n * n];
        a[i * n + j] = 1;
        let mut p = Self::zero(n);
        p.add_term((a, vec![0; n * n]), BigRational::one());
        p
    }

    /// `∂/∂x_{ij}`.
    pub fn d(n: usize, i: usize, j: usize) -> Self {
        let mut b = vec![0; n * n];
        b[i * n + j] = 1;
        let mut p = Self::zero(n);
        p.add_term((vec![0; n * n], b), BigRational::one());
        p
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

    fn add_term(&mut self, m: Mono, c: BigRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// `(x^a ∂^b)(x^c ∂^e) = Σ_k Π_i C(b_i,k_i) c_i!/(c_i-k_i)! x^{a+c-k} ∂^{b+e-k}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c1) in &self.terms {
            for ((c, e), c2) in &other.terms {
                let vars = a.len();
                let top: Vec<u8> = (0..vars).map(|i| b[i].min(c[i])).collect();
                let mut k = vec![0u8; vars];
                loop {
                    let mut coef = BigInt::one();
                    for i in 0..vars {
                        coef *= binom(b[i], k[i]) * falling(c[i], k[i]);
                    }
                    let x: Vec<u8> = (0..vars).map(|i| a[i] + c[i] - k[i]).collect();
                    let d: Vec<u8> = (0..vars).map(|i| b[i] + e[i] - k[i]).collect();
                    out.add_term((x, d), c1 * c2 * BigRational::from_integer(coef));
                    // next multi-index below `top`
                    let mut pos = 0;
                    while pos < vars && k[pos] == top[pos] {
                        k[pos] = 0;
                        pos += 1;
                    }
                    if pos == vars {
                        break;
                    }
                    k[pos] += 1;
                }
            }
        }
        out
    }

    /// Image of a normal-ordered engine polynomial: `m_i^j ↦ x_{ij}`,
    /// `∂_i^j ↦ ∂/∂x_{ji}`.
    pub fn from_engine(n: usize, p: &NCPoly<BigRational>) -> Option<Self> {
        let mut out = Self::zero(n);
        for (w, c) in p.terms() {
            let mut a = vec![0u8; n * n];
            let mut b = vec![0u8; n * n];
            let mut seen_d = false;
            for g in w.gens() {
                match g.kind() {
                    Kind::M if seen_d => return None,
                    Kind::M => a[g.i() * n + g.j()] += 1,
                    Kind::D => {
                        seen_d = true;
                        b[g.j() * n + g.i()] += 1;
                    }
                }
            }
            out.add_term((a, b), c.clone());
        }
        Some(out)
    }
}

impl fmt::Display for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.n;
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            for (v, &e) in a.iter().enumerate() {
                if e > 0 {
                    write!(f, "*x{}{}^{e}", v / n + 1, v % n + 1)?;
                }
            }
            for (v, &e) in b.iter().enumerate() {
                if e > 0 {
                    write!(f, "*d{}{}^{e}", v / n + 1, v % n + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type WMatrix = Vec<Vec<WeylPoly>>;

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut sign = 1;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `Σ_σ sgn σ X_{σ(1),1} X_{σ(2),2} ⋯`, factors ordered by column.
pub fn cdet(x: &WMatrix, n: usize) -> WeylPoly {
    let mut acc = WeylPoly::zero(n);
    for (perm, sign) in permutations(x.len()) {
        let mut term = WeylPoly::constant(n, BigRational::one());
        for (col, &row) in perm.iter().enumerate() {
            term = term.mul(&x[row][col]);
        }
        acc = acc.add(&term.scale(&BigRational::from_integer(sign.into())));
    }
    acc
}

/// `Σ_σ sgn σ X_{1,σ(1)} X_{2,σ(2)} ⋯`, factors ordered by row.
pub fn rdet(x: &WMatrix, n: usize) -> WeylPoly {
    let t: WMatrix = (0..x.len())
        .map(|i| (0..x.len()).map(|j| x[j][i].clone()).collect())
        .collect();
    cdet(&t, n)
}

/// Which `∂` matrix and determinant the identity is read with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `D_i^j = ∂/∂x_{ji}`, column determinant.
    ColumnDet,
    /// Same `D`, row determinant.
    RowDet,
    /// `D_i^j = ∂/∂x_{ij}`, column determinant.
    TransposedD,
}

/// Both sides of `cdet(MD + K) = det M det D` in the Weyl algebra.
pub struct ClassicalSides {
    pub lhs: WeylPoly,
    pub rhs: WeylPoly,
}

pub fn m_matrix(n: usize) -> WMatrix {
    (0..n).map(|i| (0..n).map(|j| WeylPoly::x(n, i, j)).collect()).collect()
}

pub fn d_matrix(n: usize, transposed: bool) -> WMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if transposed { WeylPoly::d(n, i, j) } else { WeylPoly::d(n, j, i) })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &WMatrix, b: &WMatrix, n: usize) -> WMatrix {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(WeylPoly::zero(n), |acc, s| acc.add(&a[i][s].mul(&b[s][j]))))
                .collect()
        })
        .collect()
}

/// `K` is the diagonal shift, `K_ii = shift[i]`.
pub fn capelli_sides(n: usize, shift: &[i64], conv: Convention) -> ClassicalSides {
    let m = m_matrix(n);
    let d = d_matrix(n, conv == Convention::TransposedD);
    let mut md = mat_mul(&m, &d, n);
    for (i, &k) in shift.iter().enumerate() {
        md[i][i] = md[i][i].add(&WeylPoly::constant(n, BigRational::from_integer(k.into())));
    }
    let det = |x: &WMatrix| match conv {
        Convention::RowDet => rdet(x, n),
        _ => cdet(x, n),
    };
    ClassicalSides {
        lhs: det(&md),
        rhs: cdet(&m, n).mul(&cdet(&d, n)),
    }
}

/// The standard shift `diag(N-1, ..., 1, 0)`.
pub fn standard_shift(n: usize) -> Vec<i64> {
    (0..n).map(|i| (n - 1 - i) as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_relation() {
        let x = WeylPoly::x(1, 0, 0);
        let d = WeylPoly::d(1, 0, 0);
        let comm = d.mul(&x).sub(&x.mul(&d));
        assert_eq!(comm, WeylPoly::constant(1, BigRational::one()));
        // ∂² x² = x²∂² + 4x∂ + 2
        let dd = d.mul(&d);
        let xx = x.mul(&x);
        let lhs = dd.mul(&xx);
        let rhs = xx
            .mul(&dd)
            .add(&x.mul(&d).scale(&BigRational::from_integer(4.into())))
            .add(&WeylPoly::constant(1, BigRational::from_integer(2.into())));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn associativity_on_samples() {
        let n = 2;
        let a = WeylPoly::x(n, 0, 1).add(&WeylPoly::d(n, 1, 0));
        let b = WeylPoly::d(n, 0, 1).mul(&WeylPoly::d(n, 0, 1));
        let c = WeylPoly::x(n, 0, 1).mul(&WeylPoly::x(n, 1, 1));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn one_variable_capelli() {
        let s = capelli_sides(1, &[0], Convention::ColumnDet);
        assert_eq!(s.lhs, s.rhs);
    }
}

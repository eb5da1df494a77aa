use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qcapelli::rcatalog::dj;
use qcapelli::scalar::parse_scalar;
use qcapelli::{DoubleAlgebra, Gen, NCMatrix, NCPoly, QConfig, QContext, QMatrix, RatFunc, Rational, Strategy as Order, Word};

fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn laurent() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..4).prop_map(|terms| {
        let terms: Vec<(i64, Rational)> = terms.into_iter().map(|(e, c)| (e, rat(c, 1))).collect();
        RatFunc::laurent(&terms)
    })
}

/// A quotient of two small Laurent polynomials.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_map(|(a, b)| match b.try_inv() {
        Ok(inv) => a * inv,
        Err(_) => a,
    })
}

fn point() -> impl Strategy<Value = Rational> {
    (1i64..9, 1i64..9).prop_map(|(n, d)| rat(n, d))
}

fn algebra() -> &'static DoubleAlgebra<Rational> {
    static ALG: OnceLock<DoubleAlgebra<Rational>> = OnceLock::new();
    ALG.get_or_init(|| {
        let h = dj::<Rational>(2, QConfig::parse("3/5").unwrap()).unwrap();
        DoubleAlgebra::new(h, 4, qcapelli::rewrite::DEFAULT_RULE_CAP).unwrap()
    })
}

fn gen() -> impl Strategy<Value = Gen> {
    (any::<bool>(), 0usize..2, 0usize..2).prop_map(|(m, i, j)| if m { Gen::m(i, j) } else { Gen::d(i, j) })
}

/// Sums of short free words; products of two stay within the completion degree.
fn element() -> impl Strategy<Value = NCPoly<Rational>> {
    prop::collection::vec((prop::collection::vec(gen(), 0..3), -3i64..=3), 1..4).prop_map(|terms| {
        let mut p = NCPoly::zero();
        for (gens, c) in terms {
            p.add_term(Word::from_gens(&gens), rat(c, 1));
        }
        p
    })
}

fn scalar_matrix() -> impl Strategy<Value = QMatrix<Rational>> {
    prop::collection::vec(-2i64..=2, 4).prop_map(|v| QMatrix::from_vec(2, 1, v.into_iter().map(|x| rat(x, 1)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), RatFunc::from_integer(0));
        if let Ok(inv) = a.try_inv() {
            prop_assert_eq!(a * inv, RatFunc::from_integer(1));
        }
    }

    #[test]
    fn q_numbers_are_bar_invariant(k in 0usize..8) {
        let ctx = QContext::<RatFunc>::new(QConfig::Symbolic).unwrap();
        let n = ctx.qnum(k);
        prop_assert_eq!(n.bar(), n.clone());
        // (k)_q (q - q^-1) = q^k - q^-k
        let lhs = n * (RatFunc::q() - RatFunc::qpow(-1));
        prop_assert_eq!(lhs, RatFunc::qpow(k as i64) - RatFunc::qpow(-(k as i64)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), q0 in point()) {
        if let (Ok(x), Ok(y)) = (a.eval_at(&q0), b.eval_at(&q0)) {
            prop_assert_eq!((a.clone() + b.clone()).eval_at(&q0).unwrap(), &x + &y);
            prop_assert_eq!((a * b).eval_at(&q0).unwrap(), x * y);
        }
    }

    #[test]
    fn display_parses_back(a in ratfunc()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn reduction_is_idempotent(x in element()) {
        let alg = algebra();
        let r = alg.reduce(&x).unwrap();
        prop_assert_eq!(alg.reduce(&r).unwrap(), r.clone());
        prop_assert!(r.is_normal_ordered());
    }

    #[test]
    fn reduction_is_multiplicative(x in element(), y in element()) {
        let alg = algebra();
        let free = alg.reduce(&x.mul(&y)).unwrap();
        let fast = alg.mul(&alg.reduce(&x).unwrap(), &alg.reduce(&y).unwrap()).unwrap();
        prop_assert_eq!(free, fast);
    }

    #[test]
    fn strategy_does_not_matter(x in element(), y in element(), seed in any::<u64>()) {
        let alg = algebra();
        let p = x.mul(&y);
        let left = alg.reduce_with(&p, Order::Leftmost).unwrap();
        prop_assert_eq!(alg.reduce_with(&p, Order::Rightmost).unwrap(), left.clone());
        prop_assert_eq!(alg.reduce_with(&p, Order::Random(seed)).unwrap(), left);
    }

    #[test]
    fn matrix_products_associate(a in scalar_matrix(), b in scalar_matrix()) {
        let alg = algebra();
        let m = NCMatrix::scalar_mat_mul(&a, &NCMatrix::gen_matrix(qcapelli::Kind::M, 2));
        let d = NCMatrix::gen_matrix(qcapelli::Kind::D, 2).mat_scalar_mul(&b);
        let left = alg.mat_mul(&alg.mat_mul(&m, &d).unwrap(), &m).unwrap();
        let right = alg.mat_mul(&m, &alg.mat_mul(&d, &m).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

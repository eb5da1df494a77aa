use num_rational::BigRational;

use super::*;
use crate::rcatalog::{dj, flip};
use crate::scalar::{QConfig, RatFunc};

fn q35() -> QConfig {
    QConfig::parse("3/5").unwrap()
}

#[test]
fn shifts_are_q_numbers() {
    let h = dj::<RatFunc>(1, QConfig::Symbolic).unwrap();
    let e = Engine::new(h, 3, DEFAULT_RULE_CAP).unwrap();
    let q = RatFunc::q();
    assert_eq!(shift(&e, 1, false), RatFunc::from_integer(0));
    assert_eq!(shift(&e, 2, false), q.clone());
    assert_eq!(shift(&e, 3, false), RatFunc::qpow(3) + q.clone());
    assert_eq!(shift(&e, 2, true), -RatFunc::qpow(-1));
}

#[test]
fn one_dimensional_identities() {
    for k in 1..=3 {
        for id in [IdentityId::Th, IdentityId::ThS, IdentityId::CapAs, IdentityId::CapS] {
            let h = dj::<RatFunc>(1, QConfig::Symbolic).unwrap();
            let r = verify(h, &IdentitySpec::new(id).k(k), &Options::default()).unwrap();
            assert!(r.passed(), "{id} k={k}: {:?}", r.residual_sample);
        }
    }
}

#[test]
fn first_level_is_tautological() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let e = Engine::new(h, 1, DEFAULT_RULE_CAP).unwrap();
    let s = matrix_identity(&e, 1, false, None, Mode::Full).unwrap();
    assert!(s.holds());
}

#[test]
fn determinants_in_one_dimension() {
    let h = dj::<RatFunc>(1, QConfig::Symbolic).unwrap();
    let e = Engine::new(h, 1, DEFAULT_RULE_CAP).unwrap();
    let m = NCPoly::gen(crate::ncalg::Gen::m(0, 0));
    let d = NCPoly::gen(crate::ncalg::Gen::d(0, 0));
    assert_eq!(e.det_r(Mode::Full).unwrap(), m);
    assert_eq!(e.det_rinv(Mode::Full).unwrap(), d);
    let e1 = e.e_k(&e.generator(Kind::M), 1, Mode::Full).unwrap();
    assert_eq!(e1, m.scale(&RatFunc::qpow(-1)));
}

#[test]
fn dj2_column_identity_at_level_two() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let r = verify(h, &IdentitySpec::new(IdentityId::Th).k(2), &Options::default()).unwrap();
    assert!(r.passed(), "{:?}", r.residual_sample);
}

#[test]
fn projected_mode_agrees() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let e = Engine::new(h, 2, DEFAULT_RULE_CAP).unwrap();
    for id in [IdentityId::Th, IdentityId::ThS, IdentityId::CapAs, IdentityId::Cap1] {
        let full = verify_with(&e, &IdentitySpec::new(id).k(2)).unwrap();
        let proj = verify_with(&e, &IdentitySpec::new(id).k(2).mode(Mode::Projected)).unwrap();
        assert!(full.passed() && proj.passed(), "{id}");
    }
    let wrong = IdentitySpec::new(IdentityId::ShiftScan).k(2).alpha("0");
    assert!(!verify_with(&e, &wrong).unwrap().passed());
    assert!(!verify_with(&e, &wrong.mode(Mode::Projected)).unwrap().passed());
}

#[test]
fn wrong_shift_fails() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let e = Engine::new(h, 2, DEFAULT_RULE_CAP).unwrap();
    for alpha in ["0", "1", "q^2"] {
        let r = verify_with(&e, &IdentitySpec::new(IdentityId::ShiftScan).k(2).alpha(alpha)).unwrap();
        assert!(!r.passed(), "alpha = {alpha}");
        assert!(r.residual_terms > 0);
    }
    let right = verify_with(&e, &IdentitySpec::new(IdentityId::ShiftScan).k(2).alpha("q")).unwrap();
    assert!(right.passed());
}

#[test]
fn flip_matches_weyl_algebra() {
    let h = flip::<BigRational>(2).unwrap();
    let e = Engine::new(h, 2, DEFAULT_RULE_CAP).unwrap();
    assert_eq!(classical_match(&e).unwrap(), (true, true));
}

#[test]
fn classical_needs_the_shift() {
    let good = verify_classical(2, &standard_shift(2));
    assert_eq!(good.convention, Some(Convention::ColumnDet));
    assert!(verify_classical(2, &[0, 0]).convention.is_none());
}

#[test]
fn exchange_general_rejects_bad_indices() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let spec = IdentitySpec::new(IdentityId::ExchangeGeneral).p(2).k(2);
    assert!(matches!(verify(h, &spec, &Options::default()), Err(Error::Config(_))));
}

#[test]
fn degree_cap_is_a_resource_error() {
    let h = dj::<BigRational>(2, q35()).unwrap();
    let opts = Options { max_degree: 2, ..Options::default() };
    let spec = IdentitySpec::new(IdentityId::Th).k(3);
    assert!(matches!(verify(h, &spec, &opts), Err(Error::ResourceCap(_))));
}

#[test]
fn identity_names_round_trip() {
    for id in IdentityId::ALL {
        assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
    }
    assert!("nope".parse::<IdentityId>().is_err());
}

#[test]
fn sample_points_are_distinct_and_admissible() {
    let pts: Vec<_> = rigor::sample_points().take(30).collect();
    let set: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
    assert_eq!(set.len(), 30);
    assert!(pts.iter().all(|q| QConfig::fixed(q.clone()).is_ok()));
}

#[test]
fn weighted_trace_is_central() {
    for h in [dj::<RatFunc>(2, QConfig::Symbolic).unwrap(), dj::<RatFunc>(3, QConfig::Symbolic).unwrap()] {
        let n = h.n();
        let e = Engine::new(h, 2, DEFAULT_RULE_CAP).unwrap();
        let e1 = e.e_k(&e.generator(Kind::M), 1, Mode::Full).unwrap();
        for i in 0..n {
            for j in 0..n {
                let m = NCPoly::gen(crate::ncalg::Gen::m(i, j));
                assert_eq!(e.alg().mul(&e1, &m).unwrap(), e.alg().mul(&m, &e1).unwrap(), "m({i},{j})");
            }
        }
    }
}

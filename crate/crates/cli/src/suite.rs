use qcapelli::{IdentityId, IdentitySpec, Mode};

use crate::run::Source;

/// One entry of a suite: what to run and whether it should pass.
pub struct Case {
    pub source: Source,
    pub n: usize,
    pub q: &'static str,
    pub spec: IdentitySpec,
    pub expect_pass: bool,
    pub rigor: bool,
}

fn case(source: Source, n: usize, q: &'static str, spec: IdentitySpec) -> Case {
    Case {
        source,
        n,
        q,
        spec,
        expect_pass: true,
        rigor: false,
    }
}

fn id(i: IdentityId) -> IdentitySpec {
    IdentitySpec::new(i)
}

pub const NAMES: [&str; 2] = ["smoke", "full"];

pub fn cases(name: &str) -> Option<Vec<Case>> {
    use IdentityId::*;
    let mut out = Vec::new();
    match name {
        "smoke" | "full" => {}
        _ => return None,
    }
    for k in 1..=3 {
        out.push(case(Source::Dj, 1, "symbolic", id(Th).k(k)));
        out.push(case(Source::Dj, 1, "symbolic", id(ThS).k(k)));
    }
    for k in 1..=2 {
        out.push(case(Source::Dj, 2, "3/5", id(Th).k(k)));
        out.push(case(Source::Dj, 2, "3/5", id(ThS).k(k)));
        out.push(case(Source::Flip, 2, "1", id(Th).k(k)));
        out.push(case(Source::Flip, 2, "1", id(ThS).k(k)));
    }
    for spec in [
        id(CapAs).k(2),
        id(CapS).k(2),
        id(Cap1),
        id(Mre),
        id(ReIdeal),
        id(HCopy).k(3),
        id(ExchangeGeneral).p(1).k(2),
        id(ExchangeGeneral).p(1).k(3),
        id(ExchangeGeneral).p(2).k(3),
        id(Consum),
    ] {
        out.push(case(Source::Dj, 2, "3/5", spec));
    }
    for alpha in ["0", "1", "q^2"] {
        let mut c = case(Source::Dj, 2, "3/5", id(ShiftScan).k(2).alpha(alpha));
        c.expect_pass = false;
        out.push(c);
    }
    out.push(case(Source::Dj, 2, "3/5", id(ShiftScan).k(2).alpha("q")));
    out.push(case(Source::Flip, 2, "1", id(Cap1)));
    out.push(case(Source::Flip, 2, "1", id(Classical)));
    if name == "smoke" {
        return Some(out);
    }
    for spec in [id(Th).k(2), id(ThS).k(2), id(Cap1), id(Mre)] {
        out.push(case(Source::Dj, 2, "symbolic", spec));
    }
    for spec in [id(Th).k(2), id(ThS).k(2), id(CapAs).k(2), id(CapS).k(2), id(Mre), id(Consum), id(Cap1)] {
        out.push(case(Source::Dj, 3, "3/5", spec));
    }
    out.push(case(Source::Dj, 3, "3/5", id(Th).k(3).mode(Mode::Projected)));
    out.push(case(Source::Flip, 3, "1", id(Classical)));
    let mut rigor = case(Source::Dj, 2, "symbolic", id(Th).k(2));
    rigor.rigor = true;
    out.push(rigor);
    Some(out)
}

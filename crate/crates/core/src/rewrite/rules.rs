//! Quadratic relations of the two generating matrices, oriented into rewrite
//! rules and completed up to a fixed word length.

use std::collections::{BTreeMap, HashMap};

use parking_lot::RwLock;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncalg::{Gen, Kind, NCMatrix, NCPoly, Word};
use crate::qlinalg::QMatrix;
use crate::rcatalog::HeckeSymmetry;
use crate::scalar::{RatFunc, Scalar};

/// Default guard on the number of rules a completion may produce.
pub const DEFAULT_RULE_CAP: usize = 20_000;

/// `lead → tail`, every word of `tail` smaller than `lead`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule<S> {
    pub lead: Word,
    pub tail: NCPoly<S>,
}

/// What one completion round did.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeLog {
    pub degree: usize,
    pub overlaps: usize,
    pub new_rules: usize,
}

#[derive(Clone, Debug)]
pub struct RuleSet<S> {
    kind: Kind,
    n: usize,
    rules: Vec<Rule<S>>,
    index: HashMap<Word, usize>,
    degree: usize,
    log: Vec<DegreeLog>,
}

impl<S: Scalar> RuleSet<S> {
    fn from_rules(kind: Kind, n: usize, rules: Vec<Rule<S>>, degree: usize) -> Self {
        let index = rules.iter().enumerate().map(|(i, r)| (r.lead.clone(), i)).collect();
        RuleSet {
            kind,
            n,
            rules,
            index,
            degree,
            log: Vec::new(),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Word length up to which the system is known to be complete.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rules(&self) -> &[Rule<S>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn log(&self) -> &[DegreeLog] {
        &self.log
    }

    fn max_lead(&self) -> usize {
        self.rules.iter().map(|r| r.lead.len()).max().unwrap_or(0)
    }

    /// Leftmost occurrence of a leading word inside `w`: `(start, rule)`.
    fn find_redex(&self, w: &Word, max_lead: usize) -> Option<(usize, usize)> {
        let g = w.gens();
        for start in 0..g.len() {
            let top = max_lead.min(g.len() - start);
            for len in 2..=top {
                if let Some(&i) = self.index.get(&Word::from_gens(&g[start..start + len])) {
                    return Some((start, i));
                }
            }
        }
        None
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        self.find_redex(w, self.max_lead()).is_some()
    }

    fn rewrite_at(&self, w: &Word, start: usize, rule: usize) -> NCPoly<S> {
        let r = &self.rules[rule];
        let g = w.gens();
        let left = Word::from_gens(&g[..start]);
        let right = Word::from_gens(&g[start + r.lead.len()..]);
        let mut out = NCPoly::zero();
        for (t, c) in r.tail.terms() {
            out.add_term(left.concat(t).concat(&right), c.clone());
        }
        out
    }

    /// Full reduction of `p` modulo the current rules.
    ///
    /// Terms are processed largest first; every rewrite replaces a word by
    /// smaller ones, so each word is visited at most once.
    pub fn reduce_poly(&self, p: &NCPoly<S>) -> NCPoly<S> {
        self.reduce_with(p, |_| None)
    }

    fn reduce_with(&self, p: &NCPoly<S>, known: impl Fn(&Word) -> Option<NCPoly<S>>) -> NCPoly<S> {
        let max_lead = self.max_lead();
        let mut work = p.clone();
        let mut out = NCPoly::zero();
        while let Some((w, c)) = work.pop_leading() {
            if let Some(nf) = known(&w) {
                out.add_scaled(&nf, &c);
                continue;
            }
            match self.find_redex(&w, max_lead) {
                None => out.add_term(w, c),
                Some((start, rule)) => work.add_scaled(&self.rewrite_at(&w, start, rule), &c),
            }
        }
        out
    }

    /// Number of irreducible words of each length `0..=max_len`.
    pub fn count_normal_words(&self, max_len: usize) -> Vec<usize> {
        let letters: Vec<Gen> = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| Gen::new(self.kind, i, j))
            .collect();
        let max_lead = self.max_lead();
        let mut counts = vec![0usize; max_len + 1];
        let mut layer = vec![Word::empty()];
        counts[0] = 1;
        for len in 1..=max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &g in &letters {
                    let mut cand = w.0.clone();
                    cand.push(g);
                    // the prefix is irreducible; only suffixes can be new redexes
                    let reducible = (2..=max_lead.min(cand.len()))
                        .any(|l| self.index.contains_key(&Word::from_gens(&cand[cand.len() - l..])));
                    if !reducible {
                        next.push(Word(cand));
                    }
                }
            }
            counts[len] = next.len();
            layer = next;
        }
        counts
    }
}

/// Reduced row echelon form of homogeneous polynomials: monic, pairwise
/// reduced, keyed by leading word.
pub fn echelon<S: Scalar>(polys: impl IntoIterator<Item = NCPoly<S>>) -> Result<BTreeMap<Word, NCPoly<S>>> {
    let mut pivots: BTreeMap<Word, NCPoly<S>> = BTreeMap::new();
    for p in polys {
        let mut work = p;
        let mut rest = NCPoly::zero();
        while let Some((w, c)) = work.pop_leading() {
            match pivots.get(&w) {
                Some(piv) => {
                    // piv is monic with lead w: replace w by w - piv
                    for (t, a) in piv.terms().rev().skip(1) {
                        work.add_term(t.clone(), a.mul_ref(&c).neg_ref());
                    }
                }
                None => rest.add_term(w, c),
            }
        }
        let Some((lead, lc)) = rest.leading().map(|(w, c)| (w.clone(), c.clone())) else {
            continue;
        };
        let new = rest.scale(&lc.try_inv()?);
        for piv in pivots.values_mut() {
            if let Some(a) = piv.coefficient(&lead).cloned() {
                piv.add_scaled(&new, &a.neg_ref());
            }
        }
        pivots.insert(lead, new);
    }
    Ok(pivots)
}

fn rules_from_pivots<S: Scalar>(pivots: BTreeMap<Word, NCPoly<S>>) -> Vec<Rule<S>> {
    pivots
        .into_iter()
        .map(|(lead, p)| {
            let mut tail = p.neg();
            tail.add_term(lead.clone(), S::one());
            debug_assert!(tail.coefficient(&lead).is_none());
            Rule { lead, tail }
        })
        .collect()
}

/// Entries of `R M_1 R M_1 - M_1 R M_1 R`.
fn re_relations<S: Scalar>(r: &QMatrix<S>, n: usize) -> Vec<NCPoly<S>> {
    let m1 = NCMatrix::<S>::gen_matrix(Kind::M, n).extend(2);
    let lhs = NCMatrix::scalar_mat_mul(r, &m1).mat_scalar_mul(r).mat_mul(&m1);
    let rhs = m1.mat_scalar_mul(r).mat_mul(&m1).mat_scalar_mul(r);
    lhs.sub(&rhs).into_entries()
}

/// Entries of `R^{-1} D_1 R^{-1} D_1 - D_1 R^{-1} D_1 R^{-1}`.
fn dd_relations<S: Scalar>(r_inv: &QMatrix<S>, n: usize) -> Vec<NCPoly<S>> {
    let d1 = NCMatrix::<S>::gen_matrix(Kind::D, n).extend(2);
    let lhs = NCMatrix::scalar_mat_mul(r_inv, &d1).mat_scalar_mul(r_inv).mat_mul(&d1);
    let rhs = d1.mat_scalar_mul(r_inv).mat_mul(&d1).mat_scalar_mul(r_inv);
    lhs.sub(&rhs).into_entries()
}

fn derive<S: Scalar>(h: &HeckeSymmetry<S>, kind: Kind) -> Result<RuleSet<S>> {
    let n = h.n();
    let rels = match kind {
        Kind::M => re_relations(&h.r, n),
        Kind::D => dd_relations(&h.r_inv, n),
    };
    let pivots = echelon(rels)?;
    if let Some(sym) = h.symbolic.as_ref().filter(|_| !h.ctx.config().is_symbolic()) {
        // A fixed q may kill a leading coefficient that is generically nonzero.
        let sym_rels = match kind {
            Kind::M => re_relations(sym, n),
            Kind::D => {
                let inv = sym
                    .inverse()
                    .ok_or_else(|| Error::Internal("symbolic R is singular".into()))?;
                dd_relations(&inv, n)
            }
        };
        let sym_pivots = echelon::<RatFunc>(sym_rels)?;
        if !sym_pivots.keys().eq(pivots.keys()) {
            return Err(Error::BadSpecialization(format!(
                "q = {} changes the leading words of the {:?} relations; resample q",
                h.ctx.config().label(),
                kind
            )));
        }
    }
    Ok(RuleSet::from_rules(kind, n, rules_from_pivots(pivots), 2))
}

/// Oriented quadratic relations of the coordinate matrix `M`.
pub fn derive_re_rules<S: Scalar>(h: &HeckeSymmetry<S>) -> Result<RuleSet<S>> {
    derive(h, Kind::M)
}

/// Oriented quadratic relations of the derivative matrix `D`.
pub fn derive_dd_rules<S: Scalar>(h: &HeckeSymmetry<S>) -> Result<RuleSet<S>> {
    derive(h, Kind::D)
}

/// Resolves every overlap whose word has length `<= d`, one length at a
/// time. All relations are homogeneous, so rules found at length `δ` never
/// affect overlaps of smaller length.
pub fn complete<S: Scalar>(mut rs: RuleSet<S>, d: usize, cap: usize) -> Result<RuleSet<S>> {
    for delta in rs.degree + 1..=d {
        let mut pairs = Vec::new();
        for (i, a) in rs.rules.iter().enumerate() {
            for (j, b) in rs.rules.iter().enumerate() {
                let (la, lb) = (a.lead.len(), b.lead.len());
                if la + lb <= delta {
                    // overlap length o = la + lb - delta must be >= 1
                    continue;
                }
                let o = la + lb - delta;
                if o >= la.min(lb) {
                    continue;
                }
                if a.lead.gens()[la - o..] == b.lead.gens()[..o] {
                    pairs.push((i, j, o));
                }
            }
        }
        let spolys: Vec<NCPoly<S>> = pairs
            .par_iter()
            .map(|&(i, j, o)| {
                let (a, b) = (&rs.rules[i], &rs.rules[j]);
                let right = Word::from_gens(&b.lead.gens()[o..]);
                let left = Word::from_gens(&a.lead.gens()[..a.lead.len() - o]);
                let s = a
                    .tail
                    .mul(&NCPoly::term(right, S::one()))
                    .sub(&NCPoly::term(left, S::one()).mul(&b.tail));
                rs.reduce_poly(&s)
            })
            .filter(|p| !p.is_zero())
            .collect();
        let new = rules_from_pivots(echelon(spolys)?);
        rs.log.push(DegreeLog {
            degree: delta,
            overlaps: pairs.len(),
            new_rules: new.len(),
        });
        for rule in new {
            rs.index.insert(rule.lead.clone(), rs.rules.len());
            rs.rules.push(rule);
        }
        rs.degree = delta;
        if rs.rules.len() > cap {
            return Err(Error::ResourceCap(format!(
                "completion of the {:?} rules produced {} rules at length {delta} (cap {cap})",
                rs.kind,
                rs.rules.len()
            )));
        }
    }
    rs.degree = rs.degree.max(d);
    Ok(rs)
}

/// A completed system with memoized normal forms, shared across threads.
#[derive(Debug)]
pub struct Reducer<S> {
    rules: RuleSet<S>,
    memo: RwLock<HashMap<Word, NCPoly<S>>>,
}

impl<S: Scalar> Reducer<S> {
    pub fn new(rules: RuleSet<S>) -> Self {
        Reducer {
            rules,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn rules(&self) -> &RuleSet<S> {
        &self.rules
    }

    fn overflow(&self, len: usize) -> Error {
        let d = self.rules.degree;
        match self.rules.kind {
            Kind::M => Error::DegreeOverflow {
                found: (len, 0),
                limit: (d, d),
            },
            Kind::D => Error::DegreeOverflow {
                found: (0, len),
                limit: (d, d),
            },
        }
    }

    /// Normal form of a single word of this alphabet.
    pub fn nf_word(&self, w: &Word) -> Result<NCPoly<S>> {
        if w.len() < 2 {
            return Ok(NCPoly::term(w.clone(), S::one()));
        }
        if let Some(p) = self.memo.read().get(w) {
            return Ok(p.clone());
        }
        if w.len() > self.rules.degree && !self.rules.is_empty() {
            return Err(self.overflow(w.len()));
        }
        let memo = self.memo.read();
        let nf = self
            .rules
            .reduce_with(&NCPoly::term(w.clone(), S::one()), |u| {
                if u == w {
                    None
                } else {
                    memo.get(u).cloned()
                }
            });
        drop(memo);
        self.memo.write().insert(w.clone(), nf.clone());
        Ok(nf)
    }

    pub fn nf(&self, p: &NCPoly<S>) -> Result<NCPoly<S>> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out.add_scaled(&self.nf_word(w)?, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcatalog::{dj, flip};
    use crate::scalar::QConfig;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q35() -> QConfig {
        QConfig::fixed(BigRational::new(3.into(), 5.into())).unwrap()
    }

    #[test]
    fn one_generator_has_no_rules() {
        let h = dj::<Q>(1, q35()).unwrap();
        assert!(derive_re_rules(&h).unwrap().is_empty());
        assert!(derive_dd_rules(&h).unwrap().is_empty());
        let done = complete(derive_re_rules(&h).unwrap(), 4, 10).unwrap();
        assert!(done.is_empty());
        assert_eq!(done.count_normal_words(3), vec![1, 1, 1, 1]);
    }

    #[test]
    fn flip_gives_commutators() {
        let h = flip::<Q>(2).unwrap();
        let rs = derive_re_rules(&h).unwrap();
        assert_eq!(rs.len(), 6);
        for r in rs.rules() {
            let g = r.lead.gens();
            assert!(g[0] > g[1]);
            let swapped = Word::from_gens(&[g[1], g[0]]);
            assert_eq!(r.tail, NCPoly::term(swapped, Q::from_integer(1.into())));
        }
        let done = complete(rs, 4, 100).unwrap();
        assert_eq!(done.len(), 6);
        assert!(done.log().iter().all(|l| l.new_rules == 0));
    }

    #[test]
    fn dj2_has_six_quadratic_relations() {
        let h = dj::<Q>(2, q35()).unwrap();
        assert_eq!(derive_re_rules(&h).unwrap().len(), 6);
        assert_eq!(derive_dd_rules(&h).unwrap().len(), 6);
    }

    #[test]
    fn dj2_completion_counts_like_polynomials() {
        let h = dj::<Q>(2, q35()).unwrap();
        for rs in [derive_re_rules(&h).unwrap(), derive_dd_rules(&h).unwrap()] {
            let done = complete(rs, 4, DEFAULT_RULE_CAP).unwrap();
            let counts = done.count_normal_words(4);
            // monomials of each degree in 4 commuting variables
            assert_eq!(counts, vec![1, 4, 10, 20, 35]);
            assert_eq!(counts.iter().sum::<usize>(), 70);
        }
    }

    #[test]
    fn rules_reduce_their_own_relations() {
        let h = dj::<Q>(2, q35()).unwrap();
        let rs = derive_re_rules(&h).unwrap();
        for rel in re_relations(&h.r, 2) {
            assert!(rs.reduce_poly(&rel).is_zero());
        }
    }

    #[test]
    fn symbolic_rules_match_fixed_leads() {
        let hs = dj::<RatFunc>(2, QConfig::Symbolic).unwrap();
        let hf = dj::<Q>(2, q35()).unwrap();
        let a: Vec<Word> = derive_re_rules(&hs).unwrap().rules().iter().map(|r| r.lead.clone()).collect();
        let b: Vec<Word> = derive_re_rules(&hf).unwrap().rules().iter().map(|r| r.lead.clone()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn reducer_rejects_long_words() {
        let h = dj::<Q>(2, q35()).unwrap();
        let red = Reducer::new(complete(derive_re_rules(&h).unwrap(), 3, DEFAULT_RULE_CAP).unwrap());
        let w = Word::from_gens(&[Gen::m(1, 1); 4]);
        assert!(matches!(red.nf_word(&w), Err(Error::DegreeOverflow { .. })));
        let w3 = Word::from_gens(&[Gen::m(1, 1), Gen::m(0, 0), Gen::m(0, 1)]);
        let once = red.nf_word(&w3).unwrap();
        assert_eq!(red.nf(&once).unwrap(), once);
    }
}

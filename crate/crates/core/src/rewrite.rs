//! One-step rewriting and an exhaustive derivation-height oracle.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::term::{LanguageSpec, RelativeTrs, Rule, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("rewrite budget exhausted")]
    FuelExhausted,
    #[error("term enumeration exceeds the cap of {0} terms")]
    EnumerationCapExceeded(usize),
}

/// All one-step reducts of `t`, without duplicates, in term order.
pub fn successors(t: &Term, rules: &[Rule]) -> Vec<Term> {
    let mut out = BTreeSet::new();
    for_each_reduct(t, rules, |u| {
        out.insert(u);
    });
    out.into_iter().collect()
}

fn for_each_reduct(t: &Term, rules: &[Rule], mut emit: impl FnMut(Term)) {
    for pos in t.fun_positions() {
        let sub = t.subterm(&pos).expect("position from the term itself");
        for r in rules {
            if let Some(sigma) = r.lhs().matches(sub) {
                emit(t.replace(&pos, r.rhs().apply(&sigma)));
            }
        }
    }
}

/// Reducts tagged with whether a strict rule produced them; a reduct
/// reachable both ways is tagged strict.
pub fn labeled_successors(t: &Term, rel: &RelativeTrs) -> Vec<(Term, bool)> {
    let strict: BTreeSet<Term> = successors(t, &rel.strict).into_iter().collect();
    let mut out: Vec<(Term, bool)> = strict.iter().map(|u| (u.clone(), true)).collect();
    for u in successors(t, &rel.weak) {
        if !strict.contains(&u) {
            out.push((u, false));
        }
    }
    out
}

/// Memoized longest-path search over the rewrite graph of `R ∪ S`,
/// counting strict edges. The memo lives as long as the oracle.
pub struct DerivationOracle<'a> {
    rel: &'a RelativeTrs,
    fuel: u64,
    memo: HashMap<Term, u64>,
}

struct Frame {
    term: Term,
    succs: Vec<(Term, bool)>,
    next: usize,
    best: u64,
}

impl<'a> DerivationOracle<'a> {
    pub fn new(rel: &'a RelativeTrs, fuel: u64) -> Self {
        DerivationOracle { rel, fuel, memo: HashMap::new() }
    }

    pub fn remaining_fuel(&self) -> u64 {
        self.fuel
    }

    /// Maximal number of strict steps in any `R ∪ S` derivation from `t`.
    /// A cycle in the explored graph is reported as `FuelExhausted`.
    pub fn height(&mut self, t: &Term) -> Result<u64, OracleError> {
        if let Some(&h) = self.memo.get(t) {
            return Ok(h);
        }
        let mut on_stack: HashSet<Term> = HashSet::new();
        let mut stack: Vec<Frame> = Vec::new();
        self.push(&mut stack, &mut on_stack, t.clone())?;
        while let Some(top) = stack.last_mut() {
            if top.next < top.succs.len() {
                let (u, strict) = top.succs[top.next].clone();
                top.next += 1;
                let bonus = u64::from(strict);
                if let Some(&h) = self.memo.get(&u) {
                    top.best = top.best.max(h + bonus);
                    continue;
                }
                if on_stack.contains(&u) {
                    return Err(OracleError::FuelExhausted);
                }
                self.push(&mut stack, &mut on_stack, u)?;
            } else {
                let done = stack.pop().expect("non-empty");
                on_stack.remove(&done.term);
                self.memo.insert(done.term.clone(), done.best);
                if let Some(parent) = stack.last_mut() {
                    let (_, strict) = &parent.succs[parent.next - 1];
                    parent.best = parent.best.max(done.best + u64::from(*strict));
                }
            }
        }
        Ok(self.memo[t])
    }

    fn push(
        &mut self,
        stack: &mut Vec<Frame>,
        on_stack: &mut HashSet<Term>,
        term: Term,
    ) -> Result<(), OracleError> {
        let succs = labeled_successors(&term, self.rel);
        let cost = succs.len() as u64 + 1;
        if cost > self.fuel {
            self.fuel = 0;
            return Err(OracleError::FuelExhausted);
        }
        self.fuel -= cost;
        on_stack.insert(term.clone());
        stack.push(Frame { term, succs, next: 0, best: 0 });
        Ok(())
    }
}

pub fn derivation_height(t: &Term, rel: &RelativeTrs, fuel: u64) -> Result<u64, OracleError> {
    DerivationOracle::new(rel, fuel).height(t)
}

/// Default cap on the number of enumerated start terms.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

/// Ground terms of size exactly `1..=n` over `symbols`, grouped by size.
pub fn terms_by_size(symbols: &[Symbol], n: usize, cap: usize) -> Result<Vec<Vec<Term>>, OracleError> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); n + 1];
    let mut total = 0usize;
    for k in 1..=n {
        let mut level = Vec::new();
        for f in symbols {
            let a = f.arity();
            if a == 0 {
                if k == 1 {
                    level.push(Term::app(f.clone(), vec![]));
                }
                continue;
            }
            if k < 1 + a {
                continue;
            }
            for sizes in compositions(k - 1, a) {
                let pools: Vec<&Vec<Term>> = sizes.iter().map(|&s| &by_size[s]).collect();
                if pools.iter().any(|p| p.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; a];
                loop {
                    let args: Vec<Term> = (0..a).map(|i| pools[i][idx[i]].clone()).collect();
                    level.push(Term::app(f.clone(), args));
                    if total + level.len() > cap {
                        return Err(OracleError::EnumerationCapExceeded(cap));
                    }
                    if !advance(&mut idx, &pools) {
                        break;
                    }
                }
            }
        }
        total += level.len();
        if total > cap {
            return Err(OracleError::EnumerationCapExceeded(cap));
        }
        by_size[k] = level;
    }
    Ok(by_size)
}

fn advance(idx: &mut [usize], pools: &[&Vec<Term>]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < pools[i].len() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Ordered ways to write `total` as `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Start terms of size at most `n` for the given language. Variables are
/// represented by one fresh constant.
pub fn start_terms(
    rel: &RelativeTrs,
    lang: LanguageSpec,
    n: usize,
    cap: usize,
) -> Result<Vec<Term>, OracleError> {
    let fresh = rel.fresh_constant();
    match lang {
        LanguageSpec::AllTerms => {
            let mut symbols: Vec<Symbol> = rel.signature.iter().cloned().collect();
            symbols.push(fresh);
            Ok(terms_by_size(&symbols, n, cap)?.into_iter().flatten().collect())
        }
        LanguageSpec::ConstructorBased => {
            let defined = rel.defined_symbols();
            let mut constructors: Vec<Symbol> =
                rel.signature.difference(&defined).cloned().collect();
            constructors.push(fresh);
            let values = terms_by_size(&constructors, n.saturating_sub(1), cap)?;
            let mut out = Vec::new();
            for f in &defined {
                let a = f.arity();
                if a == 0 {
                    if n >= 1 {
                        out.push(Term::app(f.clone(), vec![]));
                    }
                    continue;
                }
                for k in (1 + a)..=n {
                    for sizes in compositions(k - 1, a) {
                        let pools: Vec<&Vec<Term>> = sizes.iter().map(|&s| &values[s]).collect();
                        if pools.iter().any(|p| p.is_empty()) {
                            continue;
                        }
                        let mut idx = vec![0usize; a];
                        loop {
                            let args = (0..a).map(|i| pools[i][idx[i]].clone()).collect();
                            out.push(Term::app(f.clone(), args));
                            if out.len() > cap {
                                return Err(OracleError::EnumerationCapExceeded(cap));
                            }
                            if !advance(&mut idx, &pools) {
                                break;
                            }
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `max { dh(t) | t in lang, |t| <= n }` over enumerated ground terms.
pub fn complexity_sample(
    rel: &RelativeTrs,
    lang: LanguageSpec,
    n: usize,
    fuel: u64,
) -> Result<u64, OracleError> {
    complexity_sample_capped(rel, lang, n, fuel, DEFAULT_ENUMERATION_CAP)
}

pub fn complexity_sample_capped(
    rel: &RelativeTrs,
    lang: LanguageSpec,
    n: usize,
    fuel: u64,
    cap: usize,
) -> Result<u64, OracleError> {
    let terms = start_terms(rel, lang, n, cap)?;
    let mut oracle = DerivationOracle::new(rel, fuel);
    let mut best = 0;
    for t in &terms {
        best = best.max(oracle.height(t)?);
    }
    Ok(best)
}

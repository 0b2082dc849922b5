//! Seeded randomized property checks. Each check returns the number of
//! non-vacuous cases it examined, or a counterexample description.

#![allow(dead_code)]

use std::collections::BTreeSet;

use modcomp::budget::Deadline;
use modcomp::framework::{completion_mode, completion_signature};
use modcomp::interp::OrientMode;
use modcomp::matchbounds::enriched::{enriched_steps, multiset_compare, raise_steps, Labeling, MultisetMode};
use modcomp::matchbounds::{certify, complete, Completion, CompletionBudget, EnrichedSymbol, LabeledTerm};
use modcomp::rewrite::{DerivationOracle, OracleError};
use modcomp::sat::SolverConfig;
use modcomp::synth::{shift_obligations, synthesize, Obligation, RuleRef, SearchShape, ShiftKind, SynthOutcome};
use modcomp::term::{LanguageSpec, RelativeTrs, Rule, Symbol, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_2008;
pub const CASES: usize = 50;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Constants, unary and binary symbols used by the generators.
pub fn signature(binary: bool) -> Vec<Symbol> {
    let mut s = vec![Symbol::new("a", 0), Symbol::new("b", 0), Symbol::new("f", 1), Symbol::new("g", 1)];
    if binary {
        s.push(Symbol::new("h", 2));
    }
    s
}

/// Random term of depth at most `depth`; leaves are variables from `vars`
/// (if any) or constants.
pub fn term(r: &mut ChaCha8Rng, sig: &[Symbol], vars: &[&str], depth: usize) -> Term {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        let constants: Vec<&Symbol> = sig.iter().filter(|s| s.arity() == 0).collect();
        if !vars.is_empty() && (constants.is_empty() || r.gen_bool(0.6)) {
            return Term::var(vars.choose(r).unwrap());
        }
        return Term::app((*constants.choose(r).unwrap()).clone(), vec![]);
    }
    let funs: Vec<&Symbol> = sig.iter().filter(|s| s.arity() > 0).collect();
    let f = (*funs.choose(r).unwrap()).clone();
    let args = (0..f.arity()).map(|_| term(r, sig, vars, depth - 1)).collect();
    Term::app(f, args)
}

pub fn ground(r: &mut ChaCha8Rng, sig: &[Symbol], depth: usize) -> Term {
    term(r, sig, &[], depth)
}

#[derive(Clone, Copy)]
pub struct RuleShape {
    pub left_linear: bool,
    pub non_duplicating: bool,
    pub non_collapsing: bool,
    pub right_linear: bool,
}

impl RuleShape {
    pub const ANY: RuleShape = RuleShape { left_linear: false, non_duplicating: false, non_collapsing: false, right_linear: false };
    pub const LINEAR: RuleShape = RuleShape { left_linear: true, non_duplicating: true, non_collapsing: true, right_linear: true };

    fn admits(&self, rule: &Rule) -> bool {
        (!self.left_linear || rule.is_left_linear())
            && (!self.right_linear || rule.is_right_linear())
            && (!self.non_duplicating || !rule.is_duplicating())
            && (!self.non_collapsing || !rule.is_collapsing())
    }
}

pub fn rule(r: &mut ChaCha8Rng, sig: &[Symbol], shape: RuleShape) -> Rule {
    loop {
        let l = term(r, sig, &["x", "y"], 2);
        if l.is_var() {
            continue;
        }
        let rhs = term(r, sig, &["x", "y"], 2);
        if let Ok(rule) = Rule::new(l, rhs) {
            if shape.admits(&rule) {
                return rule;
            }
        }
    }
}

pub fn rules(r: &mut ChaCha8Rng, sig: &[Symbol], n: std::ops::RangeInclusive<usize>, shape: RuleShape) -> Vec<Rule> {
    let n = r.gen_range(n);
    (0..n).map(|_| rule(r, sig, shape)).collect()
}

fn relabel(r: &mut ChaCha8Rng, t: &Term, c: u32) -> LabeledTerm {
    match t {
        Term::Var(x) => LabeledTerm::Var(x.clone()),
        Term::App(f, args) => LabeledTerm::app(EnrichedSymbol::new(f.clone(), r.gen_range(0..=c)), args.iter().map(|a| relabel(r, a, c)).collect()),
    }
}

/// A labeled ground term containing an instance of `lhs`, heights in `0..=c`.
fn redex_term(r: &mut ChaCha8Rng, sig: &[Symbol], lhs: &Term, c: u32) -> LabeledTerm {
    let mut sigma = std::collections::BTreeMap::new();
    for x in lhs.vars() {
        sigma.insert(x, ground(r, sig, 2));
    }
    let mut t = lhs.apply(&sigma);
    if r.gen_bool(0.5) {
        let f = sig.iter().filter(|s| s.arity() > 0).collect::<Vec<_>>().choose(r).copied().cloned().unwrap();
        let mut args: Vec<Term> = (0..f.arity()).map(|_| ground(r, sig, 1)).collect();
        let i = r.gen_range(0..args.len());
        args[i] = t;
        t = Term::app(f, args);
    }
    relabel(r, &t, c)
}

/// Derivation heights are subadditive over a split of the strict rules,
/// and the sum can exceed the height of the union.
pub fn modular_inequality(cases: usize) -> Result<usize, String> {
    let split = |strict: &[Rule], weak: &[Rule], first: &BTreeSet<usize>| {
        let r1 = strict.iter().enumerate().filter(|(i, _)| first.contains(i)).map(|(_, r)| r.clone()).collect::<Vec<_>>();
        let r2 = strict.iter().enumerate().filter(|(i, _)| !first.contains(i)).map(|(_, r)| r.clone()).collect::<Vec<_>>();
        let whole = RelativeTrs::new(strict.to_vec(), weak.to_vec());
        let a = RelativeTrs::new(r1.clone(), r2.iter().chain(weak).cloned().collect());
        let b = RelativeTrs::new(r2, r1.iter().chain(weak).cloned().collect());
        (whole, a, b)
    };
    // {a -> b, a -> c}: each half has height 1 and so does the union.
    let ab = Rule::new(Term::constant("a"), Term::constant("b")).unwrap();
    let ac = Rule::new(Term::constant("a"), Term::constant("c")).unwrap();
    let (whole, x, y) = split(&[ab, ac], &[], &BTreeSet::from([0]));
    let t = Term::constant("a");
    let hs = [&whole, &x, &y].map(|rel| DerivationOracle::new(rel, 1000).height(&t).unwrap());
    if hs != [1, 1, 1] {
        return Err(format!("strictness instance gave heights {hs:?}"));
    }
    let mut r = rng(1);
    let sig = signature(true);
    let mut checked = 0;
    for _ in 0..cases * 40 {
        if checked >= cases {
            break;
        }
        // Exploring growing terms costs cubic time in the fuel, and
        // duplicating rules make them grow exponentially.
        let shape = RuleShape { non_duplicating: true, ..RuleShape::ANY };
        let strict = rules(&mut r, &sig, 2..=3, shape);
        let weak = rules(&mut r, &sig, 0..=1, shape);
        let first: BTreeSet<usize> = (0..strict.len()).filter(|_| r.gen_bool(0.5)).collect();
        let (whole, a, b) = split(&strict, &weak, &first);
        let t = ground(&mut r, &sig, 3);
        let h = |rel: &RelativeTrs| DerivationOracle::new(rel, 500).height(&t);
        match (h(&whole), h(&a), h(&b)) {
            (Ok(w), Ok(p), Ok(q)) => {
                if w > p + q {
                    return Err(format!("dh {w} > {p} + {q} for {t} over {whole:?}"));
                }
                if w > 0 {
                    checked += 1;
                }
            }
            (Err(OracleError::FuelExhausted), _, _) | (_, Err(OracleError::FuelExhausted), _) | (_, _, Err(OracleError::FuelExhausted)) => {}
            (x, y, z) => return Err(format!("oracle failed: {x:?} {y:?} {z:?}")),
        }
    }
    Ok(checked)
}

/// Strict enriched steps decrease the heights below `c` strictly; relative
/// steps do not increase them.
pub fn step_compatibility(cases: usize) -> Result<usize, String> {
    let mut r = rng(2);
    let sig = signature(true);
    let strict_shape = RuleShape { left_linear: true, non_duplicating: true, non_collapsing: true, right_linear: false };
    let weak_shape = RuleShape { left_linear: true, non_duplicating: true, non_collapsing: false, right_linear: false };
    let (mut strict_cases, mut weak_cases) = (0, 0);
    for _ in 0..cases * 200 {
        if strict_cases >= cases && weak_cases >= cases {
            break;
        }
        let c = r.gen_range(1..=3);
        let strict = r.gen_bool(0.5);
        let rule = rule(&mut r, &sig, if strict { strict_shape } else { weak_shape });
        let u = redex_term(&mut r, &sig, rule.lhs(), c);
        let labeling = if strict { Labeling::Match } else { Labeling::MatchRt(c) };
        let mode = if strict { MultisetMode::GtC(c) } else { MultisetMode::GeC(c) };
        let mut any = false;
        for v in enriched_steps(&u, &rule, labeling) {
            if v.max_height().is_some_and(|h| h > c) {
                continue;
            }
            any = true;
            if !multiset_compare(&u.heights(), &v.heights(), mode) {
                return Err(format!("{u} -> {v} with {rule} breaks {mode:?}"));
            }
        }
        if any {
            if strict {
                strict_cases += 1;
            } else {
                weak_cases += 1;
            }
        }
    }
    Ok(strict_cases.min(weak_cases))
}

/// Raise steps below the bound never increase the heights in the order.
pub fn raise_compatibility(cases: usize) -> Result<usize, String> {
    let mut r = rng(3);
    let sig = signature(true);
    let mut checked = 0;
    while checked < cases {
        let c = r.gen_range(1..=3);
        let t = ground(&mut r, &sig, 3);
        let u = relabel(&mut r, &t, c);
        let steps = raise_steps(&u, c);
        for v in &steps {
            if !multiset_compare(&u.heights(), &v.heights(), MultisetMode::GeC(c)) {
                return Err(format!("raise {u} -> {v} breaks the order at {c}"));
            }
        }
        checked += usize::from(!steps.is_empty());
    }
    Ok(checked)
}

fn bounded(rel: &RelativeTrs, lang: LanguageSpec, budget: &CompletionBudget) -> Option<(u32, modcomp::matchbounds::TreeAutomaton, modcomp::matchbounds::CompletionMode)> {
    let rel = completion_signature(rel, lang);
    let mode = completion_mode(&rel)?;
    match complete(&rel, lang, mode, budget) {
        Ok(Completion::Bounded { c, automaton }) => Some((c, automaton, mode)),
        _ => None,
    }
}

fn small_budget() -> CompletionBudget {
    CompletionBudget { max_transitions: 120, max_states: 60, max_height: 8, deadline: Deadline::none() }
}

/// For match-bounded systems, random lifted derivations stay below the bound
/// and are no longer than `‖t‖·(k+1)^c`, and so is the derivation height.
pub fn chain_length(cases: usize) -> Result<usize, String> {
    let mut r = rng(4);
    let sig = signature(true);
    let mut checked = 0;
    for _ in 0..cases * 100 {
        if checked >= cases {
            break;
        }
        let rs = rules(&mut r, &sig, 1..=2, RuleShape::LINEAR);
        let rel = RelativeTrs::plain(rs.clone());
        let Some((c, _, _)) = bounded(&rel, LanguageSpec::AllTerms, &small_budget()) else { continue };
        let k = rs.iter().map(|x| x.rhs().fcount()).max().unwrap_or(0) as u64;
        let t = ground(&mut r, &sig, 3);
        let limit = t.fcount() as u64 * (k + 1).pow(c);
        let mut u = LabeledTerm::lift(&t, 0);
        let mut steps = 0u64;
        loop {
            let next: Vec<LabeledTerm> = rs.iter().flat_map(|x| enriched_steps(&u, x, Labeling::Match)).collect();
            let Some(v) = next.choose(&mut r) else { break };
            steps += 1;
            if v.max_height().is_some_and(|h| h > c) || steps > limit {
                return Err(format!("lifted derivation from {t} reaches {v} after {steps} steps; bound {c}, limit {limit}"));
            }
            u = v.clone();
        }
        match DerivationOracle::new(&rel, 50_000).height(&t) {
            Ok(h) if h > limit => return Err(format!("dh({t}) = {h} exceeds {limit}")),
            Ok(_) => {}
            Err(e) => return Err(format!("match-bounded system fails the oracle on {t}: {e}")),
        }
        checked += 1;
    }
    Ok(checked)
}

fn unary_rules(r: &mut ChaCha8Rng, sig: &[Symbol], n: usize) -> Vec<Rule> {
    let word = |r: &mut ChaCha8Rng, min: usize| {
        let len = r.gen_range(min..=3);
        (0..len).fold(Term::var("x"), |t, _| Term::app(sig.choose(r).unwrap().clone(), vec![t]))
    };
    (0..n).map(|_| Rule::new(word(r, 1), word(r, 0)).unwrap()).collect()
}

fn sli_exists(rel: &RelativeTrs, bits: usize) -> Option<bool> {
    let shape = SearchShape::sli().with_bits(bits, bits);
    let obligations = [Obligation::Orient(RuleRef::all_strict(rel), OrientMode::Strict), Obligation::Orient(RuleRef::all_weak(rel), OrientMode::Weak)];
    let cfg = SolverConfig { max_conflicts: Some(50_000), ..Default::default() };
    match synthesize(rel, shape, &obligations, &cfg, &Deadline::none()).expect("verified synthesis") {
        SynthOutcome::Found(_) => Some(true),
        SynthOutcome::NoneFound => Some(false),
        SynthOutcome::Unknown => None,
    }
}

/// An SLI with `b`-bit constants orienting all rules strictly exists iff
/// both relative splits have one; the combined direction adds a bit.
pub fn sli_split_equivalence(cases: usize) -> Result<usize, String> {
    let mut r = rng(5);
    let sig = [Symbol::new("f", 1), Symbol::new("g", 1), Symbol::new("h", 1)];
    let mut checked = 0;
    let mut positive = 0;
    for _ in 0..cases * 10 {
        if checked >= cases && positive > 0 {
            break;
        }
        let n = r.gen_range(2..=4);
        let sig = &sig[..r.gen_range(1..=3)];
        let rs = unary_rules(&mut r, sig, n);
        let cut = r.gen_range(1..n);
        let (r1, r2) = (rs[..cut].to_vec(), rs[cut..].to_vec());
        let b = r.gen_range(1..=2);
        let whole = RelativeTrs::plain(rs.clone());
        let first = RelativeTrs::new(r1.clone(), r2.clone());
        let second = RelativeTrs::new(r2, r1);
        let (Some(w), Some(p), Some(q), Some(w1)) = (sli_exists(&whole, b), sli_exists(&first, b), sli_exists(&second, b), sli_exists(&whole, b + 1)) else { continue };
        if w && !(p && q) {
            return Err(format!("{b}-bit SLI for {rs:?} but a split fails"));
        }
        if p && q && !w1 {
            return Err(format!("both splits of {rs:?} have {b}-bit SLIs but no {}-bit SLI exists", b + 1));
        }
        positive += usize::from(p && q);
        checked += 1;
    }
    Ok(checked)
}

/// Every interpretation the synthesizer reports passes an independent
/// orientation check.
pub fn synthesize_then_reverify(cases: usize) -> Result<usize, String> {
    let mut r = rng(6);
    let mut checked = 0;
    let cfg = SolverConfig { max_conflicts: Some(5_000), ..Default::default() };
    for _ in 0..cases {
        let unary = r.gen_bool(0.4);
        let sig = signature(!unary);
        let strict = rules(&mut r, &sig, 1..=3, RuleShape::ANY);
        let weak = rules(&mut r, &sig, 0..=1, RuleShape::ANY);
        let rel = RelativeTrs::new(strict, weak);
        let shape = match r.gen_range(0..5) {
            0 => SearchShape::sli(),
            1 => SearchShape::tmi(1),
            2 => SearchShape::tmi(2),
            3 => SearchShape::constant_growth(2),
            _ if unary => SearchShape::ami(r.gen_range(1..=2)),
            _ => SearchShape::tmi(3).with_bits(1, 2),
        };
        let kind = if shape.constant_growth && r.gen_bool(0.5) { ShiftKind::Gap } else { ShiftKind::Pair };
        let remainder = if kind == ShiftKind::Gap { OrientMode::NcpWeak } else { OrientMode::Weak };
        let obligations = shift_obligations(&rel, kind);
        let out = synthesize(&rel, shape, &obligations, &cfg, &Deadline::none()).map_err(|e| format!("{} on {rel:?}: {e}", shape.label()))?;
        if let SynthOutcome::Found(interp) = out {
            let mut any = false;
            for x in &rel.strict {
                any |= interp.orient(x, OrientMode::Strict).unwrap();
                if !interp.orient(x, remainder).unwrap() {
                    return Err(format!("{} does not orient {x} {remainder}", shape.label()));
                }
            }
            if !any || !rel.weak.iter().all(|x| interp.orient(x, OrientMode::Weak).unwrap()) {
                return Err(format!("{} fails its obligations on {rel:?}", shape.label()));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Every automaton completion reports as bounded passes certification.
pub fn certify_completions(cases: usize) -> Result<usize, String> {
    let mut r = rng(7);
    let sig = signature(true);
    let shape = RuleShape { left_linear: false, non_duplicating: true, non_collapsing: false, right_linear: false };
    let mut checked = 0;
    for _ in 0..cases * 100 {
        if checked >= cases {
            break;
        }
        let strict = rules(&mut r, &sig, 1..=1, RuleShape { non_collapsing: true, ..shape });
        let weak = rules(&mut r, &sig, 0..=2, shape);
        let rel = RelativeTrs::new(strict, weak);
        let lang = if r.gen_bool(0.5) { LanguageSpec::AllTerms } else { LanguageSpec::ConstructorBased };
        let Some((c, automaton, mode)) = bounded(&rel, lang, &small_budget()) else { continue };
        let sub = completion_signature(&rel, lang);
        if !certify(&automaton, &sub, lang, c, mode) {
            return Err(format!("bounded completion of {rel:?} fails certification"));
        }
        checked += 1;
    }
    Ok(checked)
}

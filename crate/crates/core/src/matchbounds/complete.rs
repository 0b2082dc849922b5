//! Tree-automata completion for the enriched system
//! `match(R) ∪ matchrt(S)`, plus an independent certificate check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::automaton::{initial_automaton, raise_consistency_gaps, subsumption_gaps, AutomatonError, Lhs, State, StateTerm, TreeAutomaton};
use super::enriched::{match_label, matchrt_label, EnrichedSymbol, HeightSummary, LabeledTerm};
use crate::budget::Deadline;
use crate::term::{LanguageSpec, RelativeTrs, Symbol, Term, Var};

/// Which compatibility notion completion targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompletionMode {
    /// Plain compatibility; needs a linear system.
    Linear,
    /// Quasi-deterministic, raise-consistent compatibility; needs a
    /// non-duplicating system.
    Raise,
}

impl CompletionMode {
    pub fn name(self) -> &'static str {
        match self {
            CompletionMode::Linear => "linear",
            CompletionMode::Raise => "raise",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompletionBudget {
    pub max_transitions: usize,
    pub max_states: u32,
    pub max_height: u32,
    pub deadline: Deadline,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        CompletionBudget { max_transitions: 400, max_states: 200, max_height: 32, deadline: Deadline::none() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaveUp {
    Transitions,
    States,
    Height,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    /// The automaton is compatible and every height is at most `c`.
    Bounded { c: u32, automaton: TreeAutomaton },
    GaveUp(GaveUp),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchBoundsError {
    #[error("the signature contains no constant")]
    NoConstant,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

impl From<AutomatonError> for MatchBoundsError {
    fn from(e: AutomatonError) -> Self {
        match e {
            AutomatonError::NoConstant => MatchBoundsError::NoConstant,
        }
    }
}

/// Mode-specific side conditions on `R / S`.
pub fn check_preconditions(rel: &RelativeTrs, mode: CompletionMode) -> Result<(), MatchBoundsError> {
    if let Some(r) = rel.strict.iter().find(|r| r.is_collapsing()) {
        return Err(MatchBoundsError::PreconditionViolated(format!("collapsing strict rule {r}")));
    }
    match mode {
        CompletionMode::Linear => {
            if let Some(r) = rel.all_rules().find(|r| !r.is_left_linear() || !r.is_right_linear()) {
                return Err(MatchBoundsError::PreconditionViolated(format!("non-linear rule {r}")));
            }
        }
        CompletionMode::Raise => {
            if let Some(r) = rel.all_rules().find(|r| r.is_duplicating()) {
                return Err(MatchBoundsError::PreconditionViolated(format!("duplicating rule {r}")));
            }
        }
    }
    Ok(())
}

/// A match of a rule's left-hand side: `lσ →* target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Violation {
    rule: usize,
    sigma: BTreeMap<Var, State>,
    target: State,
    rhs: StateTerm,
}

#[derive(Clone)]
struct Partial {
    sigma: BTreeMap<Var, State>,
    min: u32,
    max: u32,
}

/// The transition relation used to match left-hand sides.
struct View {
    by_base: HashMap<Symbol, Vec<(u32, Vec<State>, State)>>,
    /// `reaches_into[t]` holds the states a transition target `t` may stand
    /// for at an argument position.
    reaches_into: HashMap<State, BTreeSet<State>>,
    /// States variables may be bound to; `None` allows all.
    allowed: Option<BTreeSet<State>>,
}

impl View {
    fn linear(a: &TreeAutomaton) -> View {
        let mut by_base: HashMap<Symbol, Vec<(u32, Vec<State>, State)>> = HashMap::new();
        let mut reaches_into = HashMap::new();
        for (l, q) in a.transitions() {
            by_base.entry(l.symbol.base.clone()).or_default().push((l.symbol.height, l.args.clone(), q));
            reaches_into.entry(q).or_insert_with(|| a.eps_closure(q));
        }
        View { by_base, reaches_into, allowed: None }
    }

    /// The deterministic relation sending each left-hand side of the
    /// epsilon-closed transitions to its designated state.
    fn raise(a: &TreeAutomaton) -> Option<View> {
        let dstar = a.delta_star();
        let designated = a.designated(&dstar);
        let mut by_base: HashMap<Symbol, Vec<(u32, Vec<State>, State)>> = HashMap::new();
        let mut allowed = BTreeSet::new();
        for (l, d) in designated {
            let p = d?;
            allowed.insert(p);
            by_base.entry(l.symbol.base.clone()).or_default().push((l.symbol.height, l.args, p));
        }
        let reaches_into = allowed.iter().map(|&p| (p, BTreeSet::from([p]))).collect();
        Some(View { by_base, reaches_into, allowed: Some(allowed) })
    }

    fn edges(&self, f: &Symbol) -> &[(u32, Vec<State>, State)] {
        self.by_base.get(f).map_or(&[], Vec::as_slice)
    }

    fn match_term(&self, pat: &Term, p: State, acc: Partial, out: &mut Vec<Partial>) {
        match pat {
            Term::Var(x) => {
                if self.allowed.as_ref().is_some_and(|s| !s.contains(&p)) {
                    return;
                }
                let mut acc = acc;
                match acc.sigma.get(x) {
                    Some(&prev) if prev != p => return,
                    Some(_) => {}
                    None => {
                        acc.sigma.insert(x.clone(), p);
                    }
                }
                out.push(acc);
            }
            Term::App(f, args) => {
                for (h, targs, t) in self.edges(f) {
                    if self.reaches_into.get(t).is_some_and(|s| s.contains(&p)) {
                        let acc2 = Partial { sigma: acc.sigma.clone(), min: acc.min.min(*h), max: acc.max.max(*h) };
                        self.match_list(args, targs, acc2, out);
                    }
                }
            }
        }
    }

    fn match_list(&self, pats: &[Term], states: &[State], acc: Partial, out: &mut Vec<Partial>) {
        let Some((first, rest)) = pats.split_first() else {
            out.push(acc);
            return;
        };
        let mut heads = Vec::new();
        self.match_term(first, states[0], acc, &mut heads);
        for h in heads {
            self.match_list(rest, &states[1..], h, out);
        }
    }

    /// All `(σ, heights, q)` with `lσ →* q` ending in a transition at the root.
    fn matches(&self, lhs: &Term) -> Vec<(BTreeMap<Var, State>, HeightSummary, State)> {
        let f = lhs.root().expect("left-hand sides are not variables");
        let mut out = Vec::new();
        for (h, targs, t) in self.edges(f) {
            let mut found = Vec::new();
            let acc = Partial { sigma: BTreeMap::new(), min: *h, max: *h };
            self.match_list(lhs.args(), targs, acc, &mut found);
            for m in found {
                out.push((m.sigma, HeightSummary { min: m.min, max: m.max, root: *h }, *t));
            }
        }
        out
    }
}

fn label(rel: &RelativeTrs, i: usize, h: HeightSummary, c: u32) -> u32 {
    if i < rel.strict.len() {
        match_label(h)
    } else {
        matchrt_label(&rel.weak[i - rel.strict.len()], h, c)
    }
}

/// Stops early, with a partial result, once `deadline` expires.
fn violations(a: &TreeAutomaton, view: &View, rel: &RelativeTrs, c: u32, deadline: &Deadline) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    for (i, rule) in rel.all_rules().enumerate() {
        if deadline.expired() {
            break;
        }
        for (sigma, h, q) in view.matches(rule.lhs()) {
            let d = label(rel, i, h, c);
            let rhs = StateTerm::instantiate(&LabeledTerm::lift(rule.rhs(), d), &sigma);
            if !a.reaches(&rhs, q) {
                out.insert(Violation { rule: i, sigma, target: q, rhs });
            }
        }
    }
    out.into_iter().collect()
}

/// Makes `t` reach `q`, reusing existing transitions where a top-level
/// transition already leads into `q`.
fn establish(a: &mut TreeAutomaton, t: &StateTerm, q: State) {
    if a.reaches(t, q) {
        return;
    }
    match t {
        StateTerm::State(p) => {
            a.add_epsilon(*p, q);
        }
        StateTerm::App(f, args) => {
            let candidates: Vec<(Vec<State>, State)> = a.with_symbol(f).to_vec();
            for (targs, target) in candidates {
                if !a.eps_closure(target).contains(&q) {
                    continue;
                }
                let fits = args.iter().zip(&targs).all(|(arg, &p)| match arg {
                    StateTerm::State(s) => a.eps_closure(*s).contains(&p),
                    StateTerm::App(..) => true,
                });
                if fits {
                    for (arg, &p) in args.iter().zip(&targs) {
                        if let StateTerm::App(..) = arg {
                            establish(a, arg, p);
                        }
                    }
                    return;
                }
            }
            let states: Vec<State> = args.iter().map(|arg| state_for(a, arg)).collect();
            a.add_transition(Lhs { symbol: f.clone(), args: states }, q);
        }
    }
}

/// A state reached by `t`, adding transitions into fresh states as needed.
fn state_for(a: &mut TreeAutomaton, t: &StateTerm) -> State {
    match t {
        StateTerm::State(p) => *p,
        StateTerm::App(f, args) => {
            let states: Vec<State> = args.iter().map(|arg| state_for(a, arg)).collect();
            let lhs = Lhs { symbol: f.clone(), args: states };
            if let Some(&q) = a.targets(&lhs).and_then(|ts| ts.iter().next()) {
                return q;
            }
            let q = a.add_state();
            a.add_transition(lhs, q);
            q
        }
    }
}

fn over_budget(a: &TreeAutomaton, budget: &CompletionBudget) -> Option<GaveUp> {
    if budget.deadline.expired() {
        Some(GaveUp::Timeout)
    } else if a.size() > budget.max_transitions {
        Some(GaveUp::Transitions)
    } else if a.num_states() > budget.max_states {
        Some(GaveUp::States)
    } else if a.max_height() > budget.max_height {
        Some(GaveUp::Height)
    } else {
        None
    }
}

/// Adds transitions until the automaton is quasi-deterministic and
/// raise-consistent.
fn close_raise(a: &mut TreeAutomaton, budget: &CompletionBudget) -> Result<(), GaveUp> {
    loop {
        let dstar = a.delta_star();
        let mut adds = raise_consistency_gaps(&dstar);
        let (subs, finals) = subsumption_gaps(a, &dstar);
        adds.extend(subs);
        let mut changed = false;
        for q in finals {
            changed |= a.set_final(q);
        }
        for (l, q) in adds {
            changed |= a.add_transition(l, q);
        }
        if !changed {
            return Ok(());
        }
        if let Some(g) = over_budget(a, budget) {
            return Err(g);
        }
    }
}

/// Completes the initial automaton for `lang` against
/// `match(strict) ∪ matchrt^c(weak)`.
pub fn complete(rel: &RelativeTrs, lang: LanguageSpec, mode: CompletionMode, budget: &CompletionBudget) -> Result<Completion, MatchBoundsError> {
    check_preconditions(rel, mode)?;
    let mut a = initial_automaton(&rel.signature, lang, rel)?;
    let mut c = 0;
    loop {
        if mode == CompletionMode::Raise {
            if let Err(g) = close_raise(&mut a, budget) {
                return Ok(Completion::GaveUp(g));
            }
        }
        let view = match mode {
            CompletionMode::Linear => View::linear(&a),
            CompletionMode::Raise => View::raise(&a).expect("closed automaton is quasi-deterministic"),
        };
        let vs = violations(&a, &view, rel, c, &budget.deadline);
        if budget.deadline.expired() {
            return Ok(Completion::GaveUp(GaveUp::Timeout));
        }
        if vs.is_empty() {
            return Ok(Completion::Bounded { c, automaton: a });
        }
        for v in vs {
            if !a.reaches(&v.rhs, v.target) {
                establish(&mut a, &v.rhs, v.target);
                if let Some(g) = over_budget(&a, budget) {
                    return Ok(Completion::GaveUp(g));
                }
            }
        }
        c = c.max(a.max_height());
    }
}

/// Independent check that `a` witnesses a match-bound of `c`: it embeds the
/// initial automaton, has heights at most `c`, satisfies the mode's
/// structural conditions and is compatible with the enriched system.
pub fn certify(a: &TreeAutomaton, rel: &RelativeTrs, lang: LanguageSpec, c: u32, mode: CompletionMode) -> bool {
    if check_preconditions(rel, mode).is_err() {
        return false;
    }
    let Ok(init) = initial_automaton(&rel.signature, lang, rel) else {
        return false;
    };
    let embedded = init.transitions().all(|(l, q)| a.targets(l).is_some_and(|ts| ts.contains(&q)))
        && init.finals().is_subset(a.finals());
    if !embedded || a.max_height() > c {
        return false;
    }
    let view = match mode {
        CompletionMode::Linear => View::linear(a),
        CompletionMode::Raise => {
            if !a.is_raise_consistent() {
                return false;
            }
            match View::raise(a) {
                Some(v) => v,
                None => return false,
            }
        }
    };
    violations(a, &view, rel, c, &Deadline::none()).is_empty()
}

/// Enriched symbols appearing in `a`.
pub fn alphabet(a: &TreeAutomaton) -> BTreeSet<EnrichedSymbol> {
    a.transitions().map(|(l, _)| l.symbol.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs_io::parse_trs;

    const REV: &str = "(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) ->= y rev'(cons(x,y),z) ->= rev'(y,cons(x,z)))";

    fn bounded(r: Result<Completion, MatchBoundsError>) -> (u32, TreeAutomaton) {
        match r.unwrap() {
            Completion::Bounded { c, automaton } => (c, automaton),
            other => panic!("expected a bound, got {other:?}"),
        }
    }

    #[test]
    fn reverse_is_bounded_by_one() {
        let rel = parse_trs(REV).unwrap();
        let (c, a) = bounded(complete(&rel, LanguageSpec::AllTerms, CompletionMode::Linear, &CompletionBudget::default()));
        assert_eq!(c, 1);
        assert!(certify(&a, &rel, LanguageSpec::AllTerms, 1, CompletionMode::Linear));
        assert!(!certify(&a, &rel, LanguageSpec::AllTerms, 0, CompletionMode::Linear));
        let lines = a.lines();
        for t in ["nil_1 -> 1", "rev'_1(0,1) -> 0", "cons_1(0,1) -> 1", "1 -> 0"] {
            assert!(lines.iter().any(|l| l == t), "missing {t} in {lines:?}");
        }
    }

    #[test]
    fn reverse_certificate_needs_the_epsilon_edge() {
        let rel = parse_trs(REV).unwrap();
        let (c, a) = bounded(complete(&rel, LanguageSpec::AllTerms, CompletionMode::Linear, &CompletionBudget::default()));
        let without = TreeAutomaton::from_parts(a.num_states(), a.finals().iter().copied(), a.transitions().map(|(l, q)| (l.clone(), q)), a.epsilons().iter().copied().filter(|&e| e != (1, 0)));
        assert!(!certify(&without, &rel, LanguageSpec::AllTerms, c, CompletionMode::Linear));
        let init = initial_automaton(&rel.signature, LanguageSpec::AllTerms, &rel).unwrap();
        assert!(!certify(&init, &rel, LanguageSpec::AllTerms, c, CompletionMode::Linear));
    }

    #[test]
    fn single_rule_bound() {
        let rel = parse_trs("(RULES a -> b)").unwrap();
        let (c, a) = bounded(complete(&rel, LanguageSpec::AllTerms, CompletionMode::Linear, &CompletionBudget::default()));
        assert_eq!(c, 1);
        assert!(certify(&a, &rel, LanguageSpec::AllTerms, c, CompletionMode::Linear));
    }

    #[test]
    fn plain_union_of_reverse_gives_up() {
        let rel = parse_trs("(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) -> y rev'(cons(x,y),z) -> rev'(y,cons(x,z)))").unwrap();
        let budget = CompletionBudget { max_transitions: 300, max_states: 100, max_height: 12, deadline: Deadline::none() };
        let r = complete(&rel, LanguageSpec::AllTerms, CompletionMode::Linear, &budget);
        assert!(matches!(r, Err(MatchBoundsError::PreconditionViolated(_))), "{r:?}");
        let rel = parse_trs("(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(cons(x,y),z) -> rev'(y,cons(x,z)) rev'(nil,y) ->= y)").unwrap();
        assert!(matches!(complete(&rel, LanguageSpec::AllTerms, CompletionMode::Linear, &budget), Ok(Completion::GaveUp(_))));
    }

    #[test]
    fn preconditions() {
        let dup = parse_trs("(VAR x)(RULES f(x) -> g(x,x) a -> b)").unwrap();
        assert!(check_preconditions(&dup, CompletionMode::Raise).is_err());
        assert!(check_preconditions(&dup, CompletionMode::Linear).is_err());
        let nonlin = parse_trs("(VAR x)(RULES f(x,x) -> g(x))").unwrap();
        assert!(check_preconditions(&nonlin, CompletionMode::Raise).is_ok());
        assert!(check_preconditions(&nonlin, CompletionMode::Linear).is_err());
        let no_const = parse_trs("(VAR x)(RULES f(g(x)) -> g(x))").unwrap();
        assert_eq!(complete(&no_const, LanguageSpec::AllTerms, CompletionMode::Linear, &CompletionBudget::default()), Err(MatchBoundsError::NoConstant));
    }

    #[test]
    fn nonleft_linear_rule_in_raise_mode() {
        let rel = parse_trs("(VAR x y)(RULES g(x,x) -> g(a,b) c ->= a c ->= b mark(a) ->= a mark(b) ->= c g(x,y) ->= f(x,y) mark(f(x,y)) ->= g(mark(x),y))").unwrap();
        let (c, a) = bounded(complete(&rel, LanguageSpec::AllTerms, CompletionMode::Raise, &CompletionBudget::default()));
        assert_eq!(c, 1);
        assert!(a.is_quasi_deterministic());
        assert!(certify(&a, &rel, LanguageSpec::AllTerms, c, CompletionMode::Raise));
    }
}

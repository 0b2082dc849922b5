//! Bottom-up tree automata over the enriched signature with explicit
//! epsilon transitions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::enriched::{EnrichedSymbol, LabeledTerm};
use crate::term::{LanguageSpec, RelativeTrs, Symbol};

pub type State = u32;

/// Left-hand side `f_c(q1,...,qn)` of a transition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lhs {
    pub symbol: EnrichedSymbol,
    pub args: Vec<State>,
}

impl fmt::Display for Lhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(State::to_string).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

/// A term whose leaves may be states.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StateTerm {
    State(State),
    App(EnrichedSymbol, Vec<StateTerm>),
}

impl StateTerm {
    /// Instantiates a labeled term, mapping variables to states.
    pub fn instantiate(t: &LabeledTerm, sigma: &BTreeMap<crate::term::Var, State>) -> StateTerm {
        match t {
            LabeledTerm::Var(x) => StateTerm::State(sigma[x]),
            LabeledTerm::App(f, args) => StateTerm::App(f.clone(), args.iter().map(|a| Self::instantiate(a, sigma)).collect()),
        }
    }
}

impl fmt::Display for StateTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateTerm::State(q) => write!(f, "{q}"),
            StateTerm::App(s, args) => {
                write!(f, "{s}")?;
                if !args.is_empty() {
                    let a: Vec<String> = args.iter().map(ToString::to_string).collect();
                    write!(f, "({})", a.join(","))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TreeAutomaton {
    num_states: u32,
    finals: BTreeSet<State>,
    transitions: BTreeMap<Lhs, BTreeSet<State>>,
    epsilons: BTreeSet<(State, State)>,
    by_symbol: HashMap<EnrichedSymbol, Vec<(Vec<State>, State)>>,
    eps_out: HashMap<State, Vec<State>>,
}

impl PartialEq for TreeAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.num_states == other.num_states
            && self.finals == other.finals
            && self.transitions == other.transitions
            && self.epsilons == other.epsilons
    }
}

impl Eq for TreeAutomaton {}

impl TreeAutomaton {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds an automaton from its components; states are `0..num_states`.
    pub fn from_parts(
        num_states: u32,
        finals: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = (Lhs, State)>,
        epsilons: impl IntoIterator<Item = (State, State)>,
    ) -> Self {
        let mut a = TreeAutomaton { num_states, ..Default::default() };
        a.finals.extend(finals);
        for (l, q) in transitions {
            a.add_transition(l, q);
        }
        for (p, q) in epsilons {
            a.add_epsilon(p, q);
        }
        a
    }

    pub fn num_states(&self) -> u32 {
        self.num_states
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&Lhs, State)> {
        self.transitions.iter().flat_map(|(l, qs)| qs.iter().map(move |&q| (l, q)))
    }

    pub fn epsilons(&self) -> &BTreeSet<(State, State)> {
        &self.epsilons
    }

    /// Transitions plus epsilon edges.
    pub fn size(&self) -> usize {
        self.transitions.values().map(BTreeSet::len).sum::<usize>() + self.epsilons.len()
    }

    pub fn max_height(&self) -> u32 {
        self.transitions.keys().map(|l| l.symbol.height).max().unwrap_or(0)
    }

    pub fn add_state(&mut self) -> State {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn set_final(&mut self, q: State) -> bool {
        self.finals.insert(q)
    }

    pub fn add_transition(&mut self, lhs: Lhs, q: State) -> bool {
        self.num_states = self.num_states.max(q + 1).max(lhs.args.iter().map(|&p| p + 1).max().unwrap_or(0));
        let new = self.transitions.entry(lhs.clone()).or_default().insert(q);
        if new {
            self.by_symbol.entry(lhs.symbol).or_default().push((lhs.args, q));
        }
        new
    }

    pub fn add_epsilon(&mut self, p: State, q: State) -> bool {
        if p == q {
            return false;
        }
        self.num_states = self.num_states.max(p + 1).max(q + 1);
        let new = self.epsilons.insert((p, q));
        if new {
            self.eps_out.entry(p).or_default().push(q);
        }
        new
    }

    pub fn targets(&self, lhs: &Lhs) -> Option<&BTreeSet<State>> {
        self.transitions.get(lhs)
    }

    /// Transitions with the given symbol as `(arguments, target)`.
    pub fn with_symbol(&self, f: &EnrichedSymbol) -> &[(Vec<State>, State)] {
        self.by_symbol.get(f).map_or(&[], Vec::as_slice)
    }

    /// States reachable from `q` by epsilon edges, including `q`.
    pub fn eps_closure(&self, q: State) -> BTreeSet<State> {
        let mut seen = BTreeSet::from([q]);
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for &r in self.eps_out.get(&p).map_or(&[][..], Vec::as_slice) {
                if seen.insert(r) {
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// All states `t` reaches.
    pub fn reach(&self, t: &StateTerm) -> BTreeSet<State> {
        match t {
            StateTerm::State(p) => self.eps_closure(*p),
            StateTerm::App(f, args) => {
                let sets: Vec<BTreeSet<State>> = args.iter().map(|a| self.reach(a)).collect();
                let mut out = BTreeSet::new();
                for (targs, q) in self.with_symbol(f) {
                    if targs.iter().zip(&sets).all(|(p, s)| s.contains(p)) && !out.contains(q) {
                        out.extend(self.eps_closure(*q));
                    }
                }
                out
            }
        }
    }

    pub fn reaches(&self, t: &StateTerm, q: State) -> bool {
        self.reach(t).contains(&q)
    }

    /// Membership of a ground enriched term.
    pub fn accepts(&self, t: &LabeledTerm) -> bool {
        fn conv(t: &LabeledTerm) -> Option<StateTerm> {
            match t {
                LabeledTerm::Var(_) => None,
                LabeledTerm::App(f, args) => {
                    Some(StateTerm::App(f.clone(), args.iter().map(conv).collect::<Option<Vec<_>>>()?))
                }
            }
        }
        conv(t).is_some_and(|st| self.reach(&st).iter().any(|q| self.finals.contains(q)))
    }

    /// Transitions with targets closed under epsilon edges.
    pub fn delta_star(&self) -> BTreeMap<Lhs, BTreeSet<State>> {
        let mut closures: HashMap<State, BTreeSet<State>> = HashMap::new();
        let mut out = BTreeMap::new();
        for (l, qs) in &self.transitions {
            let mut all = BTreeSet::new();
            for &q in qs {
                all.extend(closures.entry(q).or_insert_with(|| self.eps_closure(q)).iter().copied());
            }
            out.insert(l.clone(), all);
        }
        out
    }

    /// Designated state per left-hand side of `delta_star`: the greatest
    /// state subsuming every other possible target, if any. Greater states
    /// are younger, so the choice prefers states built for `l` over states
    /// inherited through raise-consistency.
    pub fn designated(&self, dstar: &BTreeMap<Lhs, BTreeSet<State>>) -> BTreeMap<Lhs, Option<State>> {
        let uses = argument_uses(dstar);
        dstar
            .iter()
            .map(|(l, qs)| {
                let d = qs.iter().rev().copied().find(|&p| qs.iter().all(|&q| q == p || subsumes(self, dstar, &uses, p, q)));
                (l.clone(), d)
            })
            .collect()
    }

    pub fn is_quasi_deterministic(&self) -> bool {
        let dstar = self.delta_star();
        self.designated(&dstar).values().all(Option::is_some)
    }

    pub fn is_raise_consistent(&self) -> bool {
        raise_consistency_gaps(&self.delta_star()).is_empty()
    }

    /// The automaton in text form, one transition per line.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.transitions().map(|(l, q)| format!("{l} -> {q}")).collect();
        out.extend(self.epsilons.iter().map(|(p, q)| format!("{p} -> {q}")));
        out
    }
}

impl fmt::Display for TreeAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finals: Vec<String> = self.finals.iter().map(State::to_string).collect();
        writeln!(f, "final states: {{{}}}", finals.join(","))?;
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

type Uses = HashMap<State, Vec<(Lhs, usize)>>;

fn argument_uses(dstar: &BTreeMap<Lhs, BTreeSet<State>>) -> Uses {
    let mut uses: Uses = HashMap::new();
    for l in dstar.keys() {
        for (i, &q) in l.args.iter().enumerate() {
            uses.entry(q).or_default().push((l.clone(), i));
        }
    }
    uses
}

/// `p` is final when `q` is, and every transition using `q` as an argument
/// has a counterpart using `p` at that position.
fn subsumes(a: &TreeAutomaton, dstar: &BTreeMap<Lhs, BTreeSet<State>>, uses: &Uses, p: State, q: State) -> bool {
    if a.finals.contains(&q) && !a.finals.contains(&p) {
        return false;
    }
    uses.get(&q).map_or(true, |ls| {
        ls.iter().all(|(l, i)| {
            let mut l2 = l.clone();
            l2.args[*i] = p;
            match dstar.get(&l2) {
                Some(t2) => dstar[l].is_subset(t2),
                None => false,
            }
        })
    })
}

/// Missing transitions `f_d(q⃗) -> q` for `f_c(q⃗) -> q` with `c < d` and
/// `f_d(q⃗)` a left-hand side.
pub(crate) fn raise_consistency_gaps(dstar: &BTreeMap<Lhs, BTreeSet<State>>) -> Vec<(Lhs, State)> {
    let mut by_shape: BTreeMap<(&Symbol, &Vec<State>), Vec<(u32, &BTreeSet<State>)>> = BTreeMap::new();
    for (l, qs) in dstar {
        by_shape.entry((&l.symbol.base, &l.args)).or_default().push((l.symbol.height, qs));
    }
    let mut gaps = Vec::new();
    for ((f, args), mut hs) in by_shape {
        hs.sort_by_key(|(h, _)| *h);
        for (i, (c, lower)) in hs.iter().enumerate() {
            for (d, upper) in &hs[i + 1..] {
                debug_assert!(c < d);
                for q in lower.difference(upper) {
                    let lhs = Lhs { symbol: EnrichedSymbol::new((*f).clone(), *d), args: (*args).clone() };
                    gaps.push((lhs, *q));
                }
            }
        }
    }
    gaps
}

/// Transitions that make the greatest direct target of each left-hand side
/// subsume the others.
pub(crate) fn subsumption_gaps(a: &TreeAutomaton, dstar: &BTreeMap<Lhs, BTreeSet<State>>) -> (Vec<(Lhs, State)>, Vec<State>) {
    let uses = argument_uses(dstar);
    let designated = a.designated(dstar);
    let mut adds = Vec::new();
    let mut finals = Vec::new();
    for (l, qs) in dstar {
        if designated[l].is_some() {
            continue;
        }
        let p = *a.transitions[l].iter().next_back().expect("lhs has a target");
        for &q in qs.iter().filter(|&&q| q != p) {
            if a.finals.contains(&q) && !a.finals.contains(&p) {
                finals.push(p);
            }
            for (l2, i) in uses.get(&q).map_or(&[][..], Vec::as_slice) {
                let mut l3 = l2.clone();
                l3.args[*i] = p;
                for &t in &dstar[l2] {
                    if dstar.get(&l3).map_or(true, |ts| !ts.contains(&t)) {
                        adds.push((l3.clone(), t));
                    }
                }
            }
        }
    }
    (adds, finals)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("the signature contains no constant")]
    NoConstant,
}

/// Accepts exactly the height-0 lifting of the start language.
pub fn initial_automaton(signature: &BTreeSet<Symbol>, lang: LanguageSpec, rel: &RelativeTrs) -> Result<TreeAutomaton, AutomatonError> {
    if !signature.iter().any(|f| f.arity() == 0) {
        return Err(AutomatonError::NoConstant);
    }
    let mut a = TreeAutomaton::new();
    let lift0 = |f: &Symbol| EnrichedSymbol::new(f.clone(), 0);
    match lang {
        LanguageSpec::AllTerms => {
            let q = a.add_state();
            a.set_final(q);
            for f in signature {
                a.add_transition(Lhs { symbol: lift0(f), args: vec![q; f.arity()] }, q);
            }
        }
        LanguageSpec::ConstructorBased => {
            let qc = a.add_state();
            let qf = a.add_state();
            a.set_final(qf);
            let defined = rel.defined_symbols();
            for f in signature {
                let target = if defined.contains(f) { qf } else { qc };
                a.add_transition(Lhs { symbol: lift0(f), args: vec![qc; f.arity()] }, target);
            }
        }
    }
    Ok(a)
}

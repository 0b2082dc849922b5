//! First-order terms, rules and relative rewrite systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A function symbol; `(name, arity)` identifies it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Symbol { name: Arc::from(name), arity }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Immutable term; children are shared, equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Var),
    App(Symbol, Arc<[Term]>),
}

/// Position as a path of 0-based argument indices from the root.
pub type Position = Vec<usize>;

pub type Subst = BTreeMap<Var, Term>;

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    /// Panics if `args.len()` differs from the symbol's arity.
    pub fn app(sym: Symbol, args: Vec<Term>) -> Term {
        assert_eq!(sym.arity(), args.len(), "arity violation for {}", sym);
        Term::App(sym, args.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::app(Symbol::new(name, 0), vec![])
    }

    /// Builds `f(args)` inferring the arity from `args`.
    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::app(Symbol::new(name, args.len()), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<&Symbol> {
        match self {
            Term::App(f, _) => Some(f),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Number of function-symbol occurrences.
    pub fn fcount(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::fcount).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| 1 + a.depth()).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Variable occurrence counts.
    pub fn var_counts(&self) -> BTreeMap<Var, usize> {
        let mut out = BTreeMap::new();
        self.collect_var_counts(&mut out);
        out
    }

    fn collect_var_counts(&self, out: &mut BTreeMap<Var, usize>) {
        match self {
            Term::Var(x) => *out.entry(x.clone()).or_insert(0) += 1,
            Term::App(_, args) => args.iter().for_each(|a| a.collect_var_counts(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.var_counts().into_keys().collect()
    }

    pub fn is_linear(&self) -> bool {
        self.var_counts().values().all(|&n| n == 1)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out, false);
        out
    }

    /// Positions of function symbols in pre-order.
    pub fn fun_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out, true);
        out
    }

    fn collect_positions(&self, path: &mut Position, out: &mut Vec<Position>, only_fun: bool) {
        match self {
            Term::Var(_) => {
                if !only_fun {
                    out.push(path.clone());
                }
            }
            Term::App(_, args) => {
                out.push(path.clone());
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    a.collect_positions(path, out, only_fun);
                    path.pop();
                }
            }
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm(rest),
        }
    }

    /// Returns `self[replacement]_pos`; panics on an invalid position.
    pub fn replace(&self, pos: &[usize], replacement: Term) -> Term {
        match pos.split_first() {
            None => replacement,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut new_args: Vec<Term> = args.to_vec();
                    new_args[i] = new_args[i].replace(rest, replacement);
                    Term::App(f.clone(), new_args.into())
                }
                Term::Var(_) => panic!("position below a variable"),
            },
        }
    }

    pub fn apply(&self, sigma: &Subst) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.apply(sigma)).collect())
            }
        }
    }

    /// Syntactic matching: a substitution `s` with `self.apply(s) == t`.
    /// Variables of `t` only match pattern variables.
    pub fn matches(&self, t: &Term) -> Option<Subst> {
        let mut sigma = Subst::new();
        if self.match_into(t, &mut sigma) {
            Some(sigma)
        } else {
            None
        }
    }

    fn match_into(&self, t: &Term, sigma: &mut Subst) -> bool {
        match self {
            Term::Var(x) => match sigma.get(x) {
                Some(bound) => bound == t,
                None => {
                    sigma.insert(x.clone(), t.clone());
                    true
                }
            },
            Term::App(f, pargs) => match t {
                Term::App(g, targs) if f == g => {
                    pargs.iter().zip(targs.iter()).all(|(p, a)| p.match_into(a, sigma))
                }
                _ => false,
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left-hand side of {0} is a variable")]
    VariableLhs(String),
    #[error("right-hand side of {0} has variables not in the left-hand side")]
    ExtraVariableRhs(String),
}

/// A rewrite rule; the lhs is not a variable and Var(rhs) ⊆ Var(lhs).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rule {
    lhs: Term,
    rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Rule, RuleError> {
        let text = format!("{lhs} -> {rhs}");
        if lhs.is_var() {
            return Err(RuleError::VariableLhs(text));
        }
        if !rhs.vars().is_subset(&lhs.vars()) {
            return Err(RuleError::ExtraVariableRhs(text));
        }
        Ok(Rule { lhs, rhs })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn is_left_linear(&self) -> bool {
        self.lhs.is_linear()
    }

    pub fn is_right_linear(&self) -> bool {
        self.rhs.is_linear()
    }

    pub fn is_duplicating(&self) -> bool {
        let l = self.lhs.var_counts();
        self.rhs
            .var_counts()
            .iter()
            .any(|(x, n)| *n > l.get(x).copied().unwrap_or(0))
    }

    pub fn is_collapsing(&self) -> bool {
        self.rhs.is_var()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.lhs.symbols();
        s.extend(self.rhs.symbols());
        s
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Which terms a complexity statement ranges over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum LanguageSpec {
    AllTerms,
    ConstructorBased,
}

/// `strict / weak`; only strict steps are counted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelativeTrs {
    pub strict: Vec<Rule>,
    pub weak: Vec<Rule>,
    pub signature: BTreeSet<Symbol>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropertyRecord {
    pub linear: bool,
    pub left_linear: bool,
    pub right_linear: bool,
    pub duplicating: bool,
    pub collapsing: bool,
    pub defined_symbols: BTreeSet<Symbol>,
    pub constructor_symbols: BTreeSet<Symbol>,
}

impl RelativeTrs {
    /// Duplicate rules are dropped; order of first occurrence is kept.
    pub fn new(strict: Vec<Rule>, weak: Vec<Rule>) -> Self {
        let mut signature = BTreeSet::new();
        for r in strict.iter().chain(weak.iter()) {
            signature.extend(r.symbols());
        }
        RelativeTrs { strict: dedup(strict), weak: dedup(weak), signature }
    }

    pub fn plain(rules: Vec<Rule>) -> Self {
        Self::new(rules, vec![])
    }

    pub fn with_signature(mut self, extra: impl IntoIterator<Item = Symbol>) -> Self {
        self.signature.extend(extra);
        self
    }

    pub fn all_rules(&self) -> impl Iterator<Item = &Rule> {
        self.strict.iter().chain(self.weak.iter())
    }

    pub fn classify(&self) -> PropertyRecord {
        let rules: Vec<&Rule> = self.all_rules().collect();
        let left_linear = rules.iter().all(|r| r.is_left_linear());
        let right_linear = rules.iter().all(|r| r.is_right_linear());
        let defined: BTreeSet<Symbol> =
            rules.iter().filter_map(|r| r.lhs().root().cloned()).collect();
        let constructors = self.signature.difference(&defined).cloned().collect();
        PropertyRecord {
            linear: left_linear && right_linear,
            left_linear,
            right_linear,
            duplicating: rules.iter().any(|r| r.is_duplicating()),
            collapsing: rules.iter().any(|r| r.is_collapsing()),
            defined_symbols: defined,
            constructor_symbols: constructors,
        }
    }

    pub fn defined_symbols(&self) -> BTreeSet<Symbol> {
        self.all_rules().filter_map(|r| r.lhs().root().cloned()).collect()
    }

    pub fn max_arity(&self) -> usize {
        self.signature.iter().map(Symbol::arity).max().unwrap_or(0)
    }

    /// A constant whose name cannot come out of the parser.
    pub fn fresh_constant(&self) -> Symbol {
        let mut name = String::from("$c");
        while self.signature.iter().any(|s| s.name() == name) {
            name.push('\'');
        }
        Symbol::new(&name, 0)
    }

    /// Moves the strict rules selected by `shift` into the weak part.
    pub fn shift(&self, shift: &BTreeSet<usize>) -> RelativeTrs {
        let mut strict = Vec::new();
        let mut moved = Vec::new();
        for (i, r) in self.strict.iter().enumerate() {
            if shift.contains(&i) {
                moved.push(r.clone());
            } else {
                strict.push(r.clone());
            }
        }
        let mut weak = moved;
        weak.extend(self.weak.iter().cloned());
        RelativeTrs { strict, weak: dedup(weak), signature: self.signature.clone() }
    }
}

fn dedup(rules: Vec<Rule>) -> Vec<Rule> {
    let mut seen = BTreeSet::new();
    rules.into_iter().filter(|r| seen.insert(r.clone())).collect()
}

impl fmt::Display for RelativeTrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.strict {
            writeln!(f, "{r}")?;
        }
        for r in &self.weak {
            writeln!(f, "{} ->= {}", r.lhs(), r.rhs())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn size_and_fcount() {
        let t = Term::fun("f", vec![x(), Term::constant("a")]);
        assert_eq!(t.size(), 3);
        assert_eq!(t.fcount(), 2);
    }

    #[test]
    fn rule_invariants() {
        assert!(matches!(Rule::new(x(), Term::constant("a")), Err(RuleError::VariableLhs(_))));
        let r = Rule::new(Term::constant("a"), x());
        assert!(matches!(r, Err(RuleError::ExtraVariableRhs(_))));
    }

    #[test]
    fn classify_examples() {
        let f = Rule::new(Term::fun("f", vec![x(), x()]), Term::fun("g", vec![x()])).unwrap();
        let p = RelativeTrs::plain(vec![f]).classify();
        assert!(!p.duplicating && !p.left_linear && !p.collapsing);

        let g = Rule::new(
            Term::fun("g", vec![x(), x()]),
            Term::fun("g", vec![Term::constant("a"), Term::constant("b")]),
        )
        .unwrap();
        let p = RelativeTrs::plain(vec![g]).classify();
        assert!(!p.left_linear && !p.duplicating);

        let c = Rule::new(
            Term::fun("c", vec![Term::fun("L", vec![x()])]),
            Term::fun("R", vec![x()]),
        )
        .unwrap();
        let p = RelativeTrs::plain(vec![c]).classify();
        assert!(p.linear && !p.collapsing);
        assert_eq!(p.defined_symbols, [Symbol::new("c", 1)].into_iter().collect());
    }

    #[test]
    fn replace_and_subterm() {
        let t = Term::fun("f", vec![Term::fun("g", vec![x()]), Term::constant("a")]);
        assert_eq!(t.subterm(&[0, 0]), Some(&x()));
        let u = t.replace(&[1], Term::constant("b"));
        assert_eq!(u.to_string(), "f(g(x),b)");
        assert_eq!(t.positions().len(), 4);
        assert_eq!(t.fun_positions().len(), 3);
    }

    #[test]
    fn matching_respects_nonlinearity() {
        let p = Term::fun("g", vec![x(), x()]);
        let a = Term::constant("a");
        let b = Term::constant("b");
        assert!(p.matches(&Term::fun("g", vec![a.clone(), a.clone()])).is_some());
        assert!(p.matches(&Term::fun("g", vec![a, b])).is_none());
    }
}

//! Height-annotated terms, the match / match-RT labelings, raise steps and
//! the multiset orders on heights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::term::{Rule, Symbol, Term, Var};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EnrichedSymbol {
    pub base: Symbol,
    pub height: u32,
}

impl EnrichedSymbol {
    pub fn new(base: Symbol, height: u32) -> Self {
        EnrichedSymbol { base, height }
    }
}

impl fmt::Display for EnrichedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.base, self.height)
    }
}

/// A term over the enriched signature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LabeledTerm {
    Var(Var),
    App(EnrichedSymbol, Arc<[LabeledTerm]>),
}

impl LabeledTerm {
    pub fn app(sym: EnrichedSymbol, args: Vec<LabeledTerm>) -> Self {
        assert_eq!(sym.base.arity(), args.len(), "arity of {}", sym.base);
        LabeledTerm::App(sym, args.into())
    }

    /// Every function symbol at height `c`.
    pub fn lift(t: &Term, c: u32) -> Self {
        match t {
            Term::Var(x) => LabeledTerm::Var(x.clone()),
            Term::App(f, args) => {
                LabeledTerm::App(EnrichedSymbol::new(f.clone(), c), args.iter().map(|a| Self::lift(a, c)).collect())
            }
        }
    }

    pub fn base(&self) -> Term {
        match self {
            LabeledTerm::Var(x) => Term::Var(x.clone()),
            LabeledTerm::App(f, args) => Term::app(f.base.clone(), args.iter().map(LabeledTerm::base).collect()),
        }
    }

    pub fn args(&self) -> &[LabeledTerm] {
        match self {
            LabeledTerm::Var(_) => &[],
            LabeledTerm::App(_, a) => a,
        }
    }

    /// The multiset of heights of all function symbols, sorted.
    pub fn heights(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_heights(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_heights(&self, out: &mut Vec<u32>) {
        if let LabeledTerm::App(f, args) = self {
            out.push(f.height);
            for a in args.iter() {
                a.collect_heights(out);
            }
        }
    }

    pub fn max_height(&self) -> Option<u32> {
        self.heights().last().copied()
    }

    pub fn fcount(&self) -> usize {
        match self {
            LabeledTerm::Var(_) => 0,
            LabeledTerm::App(_, args) => 1 + args.iter().map(LabeledTerm::fcount).sum::<usize>(),
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&LabeledTerm> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm(rest),
        }
    }

    pub fn replace(&self, pos: &[usize], by: LabeledTerm) -> LabeledTerm {
        match pos.split_first() {
            None => by,
            Some((&i, rest)) => match self {
                LabeledTerm::App(f, args) => {
                    let mut v = args.to_vec();
                    v[i] = v[i].replace(rest, by);
                    LabeledTerm::App(f.clone(), v.into())
                }
                LabeledTerm::Var(_) => panic!("position below a variable"),
            },
        }
    }

    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for (i, a) in self.args().iter().enumerate() {
            for mut p in a.positions() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    pub fn apply(&self, sigma: &BTreeMap<Var, LabeledTerm>) -> LabeledTerm {
        match self {
            LabeledTerm::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            LabeledTerm::App(f, args) => LabeledTerm::App(f.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
        }
    }
}

impl fmt::Display for LabeledTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledTerm::Var(x) => write!(f, "{x}"),
            LabeledTerm::App(s, args) => {
                write!(f, "{s}")?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Pointwise maximum of heights; `None` when the bases differ.
pub fn join(a: &LabeledTerm, b: &LabeledTerm) -> Option<LabeledTerm> {
    match (a, b) {
        (LabeledTerm::Var(x), LabeledTerm::Var(y)) if x == y => Some(a.clone()),
        (LabeledTerm::App(f, xs), LabeledTerm::App(g, ys)) if f.base == g.base => {
            let args = xs.iter().zip(ys.iter()).map(|(x, y)| join(x, y)).collect::<Option<Vec<_>>>()?;
            Some(LabeledTerm::App(EnrichedSymbol::new(f.base.clone(), f.height.max(g.height)), args.into()))
        }
        _ => None,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnrichedRule {
    pub lhs: LabeledTerm,
    pub rhs: LabeledTerm,
}

impl fmt::Display for EnrichedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Heights of the function symbols of an enriched left-hand side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HeightSummary {
    pub min: u32,
    pub max: u32,
    pub root: u32,
}

impl HeightSummary {
    pub fn of(lhs: &LabeledTerm) -> Self {
        let hs = lhs.heights();
        let root = match lhs {
            LabeledTerm::App(f, _) => f.height,
            LabeledTerm::Var(_) => panic!("variable left-hand side"),
        };
        HeightSummary { min: hs[0], max: *hs.last().unwrap(), root }
    }

    pub fn uniform(&self) -> bool {
        self.min == self.max
    }
}

/// Right-hand side height for a strict rule: one above the minimum.
pub fn match_label(h: HeightSummary) -> u32 {
    1 + h.min
}

/// Right-hand side height for a relative rule under bound `c`.
pub fn matchrt_label(rule: &Rule, h: HeightSummary, c: u32) -> u32 {
    if rule.lhs().fcount() >= rule.rhs().fcount() && h.uniform() {
        c.min(h.root)
    } else {
        c.min(1 + h.min)
    }
}

fn check_base(rule: &Rule, lhs: &LabeledTerm) {
    assert_eq!(&lhs.base(), rule.lhs(), "labeled left-hand side does not match the rule");
}

pub fn match_rule(rule: &Rule, lhs: &LabeledTerm) -> EnrichedRule {
    check_base(rule, lhs);
    let d = match_label(HeightSummary::of(lhs));
    EnrichedRule { lhs: lhs.clone(), rhs: LabeledTerm::lift(rule.rhs(), d) }
}

pub fn matchrt_rule(rule: &Rule, lhs: &LabeledTerm, c: u32) -> EnrichedRule {
    check_base(rule, lhs);
    let d = matchrt_label(rule, HeightSummary::of(lhs), c);
    EnrichedRule { lhs: lhs.clone(), rhs: LabeledTerm::lift(rule.rhs(), d) }
}

/// How the right-hand side height of an enriched step is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeling {
    Match,
    MatchRt(u32),
}

/// Matches `pattern` against `u` modulo heights: function positions must
/// agree on base symbols, and the instances of a non-linear variable must
/// agree on their bases. Returns the enriched left-hand side and the joined
/// substitution.
fn enriched_match(pattern: &Term, u: &LabeledTerm) -> Option<(LabeledTerm, BTreeMap<Var, LabeledTerm>)> {
    let mut sigma: BTreeMap<Var, LabeledTerm> = BTreeMap::new();
    let lhs = enriched_match_into(pattern, u, &mut sigma)?;
    Some((lhs, sigma))
}

fn enriched_match_into(p: &Term, u: &LabeledTerm, sigma: &mut BTreeMap<Var, LabeledTerm>) -> Option<LabeledTerm> {
    match (p, u) {
        (Term::Var(x), _) => {
            let joined = match sigma.get(x) {
                Some(prev) => join(prev, u)?,
                None => u.clone(),
            };
            sigma.insert(x.clone(), joined);
            Some(LabeledTerm::Var(x.clone()))
        }
        (Term::App(f, ps), LabeledTerm::App(g, us)) if *f == g.base => {
            let args = ps.iter().zip(us.iter()).map(|(p, u)| enriched_match_into(p, u, sigma)).collect::<Option<Vec<_>>>()?;
            Some(LabeledTerm::App(g.clone(), args.into()))
        }
        _ => None,
    }
}

/// All one-step rewrites of `u` with `rule` in the enriched system, using
/// the raise-join for non-linear variables.
pub fn enriched_steps(u: &LabeledTerm, rule: &Rule, labeling: Labeling) -> Vec<LabeledTerm> {
    let mut out = BTreeSet::new();
    for pos in u.positions() {
        let sub = u.subterm(&pos).expect("position of u");
        if let Some((lhs, sigma)) = enriched_match(rule.lhs(), sub) {
            let h = HeightSummary::of(&lhs);
            let d = match labeling {
                Labeling::Match => match_label(h),
                Labeling::MatchRt(c) => matchrt_label(rule, h, c),
            };
            let rhs = LabeledTerm::lift(rule.rhs(), d).apply(&sigma);
            out.insert(u.replace(&pos, rhs));
        }
    }
    out.into_iter().collect()
}

/// All single raise steps that keep every height at most `c`.
pub fn raise_steps(u: &LabeledTerm, c: u32) -> Vec<LabeledTerm> {
    let mut out = Vec::new();
    for pos in u.positions() {
        if let Some(LabeledTerm::App(f, args)) = u.subterm(&pos) {
            if f.height < c {
                let g = EnrichedSymbol::new(f.base.clone(), f.height + 1);
                out.push(u.replace(&pos, LabeledTerm::App(g, args.clone())));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultisetMode {
    Gt,
    Ge,
    /// Both sides without the value `c`.
    GtC(u32),
    GeC(u32),
}

fn counts(m: &[u32]) -> BTreeMap<u32, usize> {
    let mut c = BTreeMap::new();
    for &x in m {
        *c.entry(x).or_insert(0) += 1;
    }
    c
}

pub fn drop_value(m: &[u32], c: u32) -> Vec<u32> {
    m.iter().copied().filter(|&x| x != c).collect()
}

/// `a ≻ b` holds when `b` arises from `a` by replacing a non-empty
/// sub-multiset by elements each larger than some removed element.
pub fn multiset_compare(a: &[u32], b: &[u32], mode: MultisetMode) -> bool {
    match mode {
        MultisetMode::GtC(c) => multiset_gt(&drop_value(a, c), &drop_value(b, c)),
        MultisetMode::GeC(c) => {
            let (a, b) = (drop_value(a, c), drop_value(b, c));
            counts(&a) == counts(&b) || multiset_gt(&a, &b)
        }
        MultisetMode::Gt => multiset_gt(a, b),
        MultisetMode::Ge => counts(a) == counts(b) || multiset_gt(a, b),
    }
}

fn multiset_gt(a: &[u32], b: &[u32]) -> bool {
    let (ca, cb) = (counts(a), counts(b));
    if ca == cb {
        return false;
    }
    // Every value gained in b is dominated by a smaller value lost from a.
    cb.iter().all(|(&y, &nb)| {
        let na = ca.get(&y).copied().unwrap_or(0);
        nb <= na || ca.iter().any(|(&x, &n)| x < y && n > cb.get(&x).copied().unwrap_or(0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs_io::{parse_rule, parse_term};

    fn vars() -> BTreeSet<String> {
        ["x", "y", "z"].iter().map(|v| v.to_string()).collect()
    }

    fn lt(text: &str) -> LabeledTerm {
        // f_3(x) style: heights are written as suffixes.
        let t = parse_term(&text.replace('_', "#"), &vars()).unwrap();
        relabel(&t)
    }

    fn relabel(t: &Term) -> LabeledTerm {
        match t {
            Term::Var(x) => LabeledTerm::Var(x.clone()),
            Term::App(f, args) => {
                let (name, h) = f.name().rsplit_once('#').expect("height suffix");
                let sym = EnrichedSymbol::new(Symbol::new(name, f.arity()), h.parse().unwrap());
                LabeledTerm::App(sym, args.iter().map(relabel).collect())
            }
        }
    }

    fn rule(text: &str) -> Rule {
        parse_rule(text, &vars()).unwrap().0
    }

    #[test]
    fn match_labels() {
        let r = rule("rev(x) -> rev'(x,nil)");
        assert_eq!(match_rule(&r, &lt("rev_0(x)")).rhs, lt("rev'_1(x,nil_1)"));
        assert_eq!(match_rule(&r, &lt("rev_2(x)")).rhs, lt("rev'_3(x,nil_3)"));
        let r = rule("f(g(x)) -> g(x)");
        assert_eq!(match_rule(&r, &lt("f_0(g_1(x))")).rhs, lt("g_1(x)"));
    }

    #[test]
    fn matchrt_labels() {
        let r3 = rule("rev'(cons(x,y),z) -> rev'(y,cons(x,z))");
        assert_eq!(matchrt_rule(&r3, &lt("rev'_0(cons_0(x,y),z)"), 1).rhs, lt("rev'_0(y,cons_0(x,z))"));
        assert_eq!(matchrt_rule(&r3, &lt("rev'_0(cons_1(x,y),z)"), 1).rhs, lt("rev'_1(y,cons_1(x,z))"));
        assert_eq!(matchrt_rule(&r3, &lt("rev'_2(cons_1(x,y),z)"), 1).rhs, lt("rev'_1(y,cons_1(x,z))"));
        let r2 = rule("rev'(nil,y) -> y");
        assert_eq!(matchrt_rule(&r2, &lt("rev'_0(nil_1,y)"), 1).rhs, LabeledTerm::Var(Var::new("y")));
    }

    #[test]
    fn multiset_examples() {
        assert!(multiset_compare(&[0], &[], MultisetMode::Gt));
        assert!(multiset_compare(&[0, 0], &[0, 1, 1, 1], MultisetMode::Gt));
        assert!(!multiset_compare(&[1], &[0], MultisetMode::Gt));
        assert_eq!(drop_value(&[0, 1, 2, 2], 2), vec![0, 1]);
        assert!(multiset_compare(&[0, 1, 2, 2], &[0, 1, 2], MultisetMode::GeC(2)));
        assert!(!multiset_compare(&[0, 1, 2, 2], &[0, 1, 2], MultisetMode::GtC(2)));
    }

    #[test]
    fn join_takes_pointwise_maximum() {
        assert_eq!(join(&lt("f_0(a_2)"), &lt("f_1(a_0)")), Some(lt("f_1(a_2)")));
        assert_eq!(join(&lt("f_0(a_2)"), &lt("f_1(b_0)")), None);
    }

    #[test]
    fn nonlinear_step_joins_arguments() {
        let r = rule("g(x,x) -> g(a,b)");
        let steps = enriched_steps(&lt("g_0(a_1,a_0)"), &r, Labeling::Match);
        assert_eq!(steps, vec![lt("g_1(a_1,b_1)")]);
        let r = rule("f(x,x) -> h(x)");
        assert_eq!(enriched_steps(&lt("f_0(a_1,a_0)"), &r, Labeling::Match), vec![lt("h_1(a_1)")]);
        assert!(enriched_steps(&lt("f_0(a_1,b_0)"), &r, Labeling::Match).is_empty());
    }
}

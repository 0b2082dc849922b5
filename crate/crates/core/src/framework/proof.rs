use std::collections::BTreeSet;
use std::fmt;

use super::bound::Bound;
use crate::interp::{LinearInterpretation, OrientMode};
use crate::matchbounds::{certify, CompletionMode, TreeAutomaton};
use crate::term::{LanguageSpec, RelativeTrs};

/// A relative TRS together with the start terms it is measured over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpProblem {
    pub rel: RelativeTrs,
    pub lang: LanguageSpec,
}

impl CpProblem {
    pub fn new(rel: RelativeTrs, lang: LanguageSpec) -> Self {
        CpProblem { rel, lang }
    }

    /// Moves the selected strict rules into the weak part.
    pub fn shift(&self, rules: &BTreeSet<usize>) -> CpProblem {
        CpProblem { rel: self.rel.shift(rules), lang: self.lang }
    }

    pub fn is_solved(&self) -> bool {
        self.rel.strict.is_empty()
    }
}

impl fmt::Display for CpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strict: Vec<String> = self.rel.strict.iter().map(ToString::to_string).collect();
        let weak: Vec<String> = self.rel.weak.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}} / {{{}}}", strict.join(", "), weak.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Processor {
    /// Shifts rules oriented strictly by a compatible interpretation.
    Pair,
    /// Shifts rules via a constant-growth interpretation, the rest riding
    /// along on their non-constant parts.
    Gap,
    /// Shifts one rule whose relative match-bound is certified.
    MatchBounds,
    Split,
}

impl Processor {
    pub fn name(self) -> &'static str {
        match self {
            Processor::Pair => "pair",
            Processor::Gap => "gap",
            Processor::MatchBounds => "match-bounds",
            Processor::Split => "split",
        }
    }

    pub fn from_name(name: &str) -> Option<Processor> {
        [Processor::Pair, Processor::Gap, Processor::MatchBounds, Processor::Split].into_iter().find(|p| p.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Interpretation {
        label: String,
        interp: LinearInterpretation,
    },
    /// Certificate for `{r} / (rest)` over the given signature.
    Automaton {
        c: u32,
        mode: CompletionMode,
        rel: RelativeTrs,
        automaton: TreeAutomaton,
    },
    Split {
        first: BTreeSet<usize>,
        second: BTreeSet<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub processor: Processor,
    pub witness: Witness,
    pub cost: Bound,
    /// Indices into the node's strict rules that move to the weak part.
    pub shifted: BTreeSet<usize>,
    pub note: Option<String>,
    pub children: Vec<ProofNode>,
}

impl Step {
    pub fn label(&self) -> String {
        match &self.witness {
            Witness::Interpretation { label, .. } => label.clone(),
            Witness::Automaton { c, .. } => format!("match-bound {c}"),
            Witness::Split { .. } => "split".into(),
        }
    }
}

/// A proof tree; a node without a step is a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub problem: CpProblem,
    pub step: Option<Step>,
}

impl ProofNode {
    pub fn leaf(problem: CpProblem) -> Self {
        ProofNode { problem, step: None }
    }

    /// Every leaf has an empty strict part.
    pub fn is_closed(&self) -> bool {
        match &self.step {
            None => self.problem.is_solved(),
            Some(s) => s.children.iter().all(ProofNode::is_closed),
        }
    }

    /// Sum of all step costs; `Unknown` when a leaf is open.
    pub fn total_bound(&self) -> Bound {
        match &self.step {
            None if self.problem.is_solved() => Bound::Const,
            None => Bound::Unknown,
            Some(s) => s.children.iter().fold(s.cost, |b, c| b.combine(c.total_bound())),
        }
    }

    /// All steps in pre-order.
    pub fn steps(&self) -> Vec<&Step> {
        let mut out = Vec::new();
        fn walk<'a>(n: &'a ProofNode, out: &mut Vec<&'a Step>) {
            if let Some(s) = &n.step {
                out.push(s);
                for c in &s.children {
                    walk(c, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Re-validates every step against its problem: witnesses orient or
    /// certify what the step claims and children are the claimed problems.
    pub fn recheck(&self) -> Result<(), String> {
        let Some(step) = &self.step else { return Ok(()) };
        recheck_step(&self.problem, step)?;
        step.children.iter().try_for_each(ProofNode::recheck)
    }
}

fn orient(interp: &LinearInterpretation, r: &crate::term::Rule, mode: OrientMode) -> Result<bool, String> {
    interp.orient(r, mode).map_err(|e| e.to_string())
}

fn recheck_step(p: &CpProblem, s: &Step) -> Result<(), String> {
    let fail = |m: String| Err(format!("{} step: {m}", s.processor.name()));
    if s.shifted.iter().any(|&i| i >= p.rel.strict.len()) {
        return fail("shifted rule out of range".into());
    }
    match (&s.processor, &s.witness) {
        (Processor::Split, Witness::Split { first, second }) => {
            let all: BTreeSet<usize> = (0..p.rel.strict.len()).collect();
            if !first.is_disjoint(second) || &(first | second) != &all {
                return fail("not a partition".into());
            }
            let expected = [p.shift(second), p.shift(first)];
            if s.children.len() != 2 || s.children.iter().zip(&expected).any(|(c, e)| &c.problem != e) {
                return fail("children differ from the partition".into());
            }
            if s.cost != Bound::Const {
                return fail("cost of a split is constant".into());
            }
            Ok(())
        }
        (Processor::Pair | Processor::Gap, Witness::Interpretation { interp, .. }) => {
            if s.shifted.is_empty() {
                return fail("no rule shifted".into());
            }
            interp.validate().map_err(|e| e.to_string())?;
            let remainder = if s.processor == Processor::Gap { OrientMode::NcpWeak } else { OrientMode::Weak };
            for (i, r) in p.rel.strict.iter().enumerate() {
                let mode = if s.shifted.contains(&i) { OrientMode::Strict } else { remainder };
                if !orient(interp, r, mode)? {
                    return fail(format!("rule {r} is not oriented {mode}"));
                }
            }
            for r in &p.rel.weak {
                if !orient(interp, r, OrientMode::Weak)? {
                    return fail(format!("rule {r} is not oriented weakly"));
                }
            }
            let expected_cost = if s.processor == Processor::Gap {
                if !interp.constant_growth() {
                    return fail("interpretation lacks constant growth".into());
                }
                Bound::Poly(1)
            } else {
                Bound::poly(interp.degree().map_err(|e| e.to_string())? as u32)
            };
            if s.cost < expected_cost {
                return fail(format!("cost {} below the certified {}", s.cost, expected_cost));
            }
            check_single_child(p, s)
        }
        (Processor::MatchBounds, Witness::Automaton { c, mode, rel, automaton }) => {
            let [i] = s.shifted.iter().copied().collect::<Vec<_>>()[..] else {
                return fail("exactly one rule is shifted".into());
            };
            let expected = match_problem(&p.rel, i);
            if rel.strict != expected.strict || rel.weak != expected.weak || !p.rel.signature.is_subset(&rel.signature) {
                return fail("certificate is for a different problem".into());
            }
            if !certify(automaton, rel, p.lang, *c, *mode) {
                return fail("automaton does not certify the bound".into());
            }
            if s.cost < Bound::Poly(1) {
                return fail("cost below linear".into());
            }
            check_single_child(p, s)
        }
        _ => fail("witness does not fit the processor".into()),
    }
}

fn check_single_child(p: &CpProblem, s: &Step) -> Result<(), String> {
    match &s.children[..] {
        [c] if c.problem == p.shift(&s.shifted) => Ok(()),
        _ => Err(format!("{} step: child differs from the shifted problem", s.processor.name())),
    }
}

/// `{r_i} / (R \ {r_i} ∪ S)`.
pub fn match_problem(rel: &RelativeTrs, i: usize) -> RelativeTrs {
    let strict = vec![rel.strict[i].clone()];
    let mut weak: Vec<_> = rel.strict.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
    weak.extend(rel.weak.iter().cloned());
    RelativeTrs::new(strict, weak).with_signature(rel.signature.iter().cloned())
}

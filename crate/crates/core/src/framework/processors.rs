use std::collections::BTreeSet;

use super::bound::Bound;
use super::proof::{match_problem, CpProblem, ProofNode, Processor, Step, Witness};
use crate::budget::Deadline;
use crate::matchbounds::{certify, check_preconditions, complete, Completion, CompletionBudget, CompletionMode, MatchBoundsError};
use crate::sat::SolverConfig;
use crate::semiring::ValueKind;
use crate::synth::{synthesize_shift, SearchShape, ShiftKind, SynthError, SynthOutcome};
use crate::term::{LanguageSpec, RelativeTrs};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameworkError {
    #[error("internal invariant failure: {0}")]
    Internal(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
}

impl From<SynthError> for FrameworkError {
    fn from(e: SynthError) -> Self {
        FrameworkError::Internal(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Applied(Step),
    Inapplicable(String),
}

impl Outcome {
    pub fn step(self) -> Option<Step> {
        match self {
            Outcome::Applied(s) => Some(s),
            Outcome::Inapplicable(_) => None,
        }
    }
}

fn interpretation_step(p: &CpProblem, processor: Processor, shape: &SearchShape, shift: crate::synth::Shift, cost: Bound, note: Option<String>) -> Step {
    let child = ProofNode::leaf(p.shift(&shift.strict));
    Step {
        processor,
        witness: Witness::Interpretation { label: shape.label(), interp: shift.interp },
        cost,
        shifted: shift.strict,
        note,
        children: vec![child],
    }
}

/// Orients at least one strict rule strictly and everything else weakly;
/// the strictly oriented rules move to the weak part at the cost of the
/// interpretation's degree.
pub fn pair_processor(p: &CpProblem, shape: SearchShape, solver: &SolverConfig, deadline: &Deadline) -> Result<Outcome, FrameworkError> {
    if p.is_solved() {
        return Ok(Outcome::Inapplicable("no strict rules".into()));
    }
    if shape.kind == ValueKind::Arctic && p.rel.max_arity() > 1 {
        return Ok(Outcome::Inapplicable("arctic interpretations need unary symbols".into()));
    }
    match synthesize_shift(&p.rel, shape, ShiftKind::Pair, &[], solver, deadline)? {
        SynthOutcome::Found(shift) => {
            let cost = Bound::poly(shift.interp.degree().map_err(|e| FrameworkError::Internal(e.to_string()))? as u32);
            Ok(Outcome::Applied(interpretation_step(p, Processor::Pair, &shape, shift, cost, None)))
        }
        SynthOutcome::NoneFound => Ok(Outcome::Inapplicable(format!("no {} found", shape.label()))),
        SynthOutcome::Unknown => Ok(Outcome::Inapplicable(format!("{} search ran out of budget", shape.label()))),
    }
}

pub const GAP_NOTE: &str = "cost bounds the shifted rules; the remaining rules are bounded by the child";

/// Constant-growth interpretation with the shifted rules strict, the weak
/// rules weak and the remaining strict rules weak on non-constant parts.
/// `blocked` lists strict sets that must not be chosen again.
pub fn gap_processor(p: &CpProblem, shape: SearchShape, blocked: &[BTreeSet<usize>], solver: &SolverConfig, deadline: &Deadline) -> Result<Outcome, FrameworkError> {
    if p.is_solved() {
        return Ok(Outcome::Inapplicable("no strict rules".into()));
    }
    if !shape.constant_growth || shape.kind != ValueKind::Natural {
        return Err(FrameworkError::Internal("gap processor needs a constant-growth shape".into()));
    }
    match synthesize_shift(&p.rel, shape, ShiftKind::Gap, blocked, solver, deadline)? {
        SynthOutcome::Found(shift) => Ok(Outcome::Applied(interpretation_step(p, Processor::Gap, &shape, shift, Bound::Poly(1), Some(GAP_NOTE.into())))),
        SynthOutcome::NoneFound => Ok(Outcome::Inapplicable(format!("no gap {} found", shape.label()))),
        SynthOutcome::Unknown => Ok(Outcome::Inapplicable(format!("gap {} search ran out of budget", shape.label()))),
    }
}

/// The signature completion runs over: a fresh constant is added when the
/// signature has none, and always for constructor-based start terms.
pub fn completion_signature(rel: &RelativeTrs, lang: LanguageSpec) -> RelativeTrs {
    let has_constant = rel.signature.iter().any(|f| f.arity() == 0);
    if lang == LanguageSpec::ConstructorBased || !has_constant {
        rel.clone().with_signature([rel.fresh_constant()])
    } else {
        rel.clone()
    }
}

pub fn completion_mode(rel: &RelativeTrs) -> Option<CompletionMode> {
    if check_preconditions(rel, CompletionMode::Linear).is_ok() {
        Some(CompletionMode::Linear)
    } else if check_preconditions(rel, CompletionMode::Raise).is_ok() {
        Some(CompletionMode::Raise)
    } else {
        None
    }
}

/// Certifies a match-bound for strict rule `i` relative to all other rules.
pub fn matchbounds_processor(p: &CpProblem, i: usize, limits: &CompletionBudget, deadline: &Deadline) -> Result<Outcome, FrameworkError> {
    if i >= p.rel.strict.len() {
        return Ok(Outcome::Inapplicable("no such strict rule".into()));
    }
    let sub = completion_signature(&match_problem(&p.rel, i), p.lang);
    let Some(mode) = completion_mode(&sub) else {
        return Ok(Outcome::Inapplicable("collapsing strict rule or duplicating system".into()));
    };
    let budget = CompletionBudget { deadline: deadline.min_with(limits.deadline.instant()), ..limits.clone() };
    match complete(&sub, p.lang, mode, &budget) {
        Ok(Completion::Bounded { c, automaton }) => {
            if !certify(&automaton, &sub, p.lang, c, mode) {
                return Err(FrameworkError::Internal(format!("completed automaton for rule {} fails certification", p.rel.strict[i])));
            }
            let shifted = BTreeSet::from([i]);
            Ok(Outcome::Applied(Step {
                processor: Processor::MatchBounds,
                witness: Witness::Automaton { c, mode, rel: sub, automaton },
                cost: Bound::Poly(1),
                children: vec![ProofNode::leaf(p.shift(&shifted))],
                shifted,
                note: None,
            }))
        }
        Ok(Completion::GaveUp(g)) => Ok(Outcome::Inapplicable(format!("completion gave up ({g:?})"))),
        Err(MatchBoundsError::NoConstant) => Err(FrameworkError::Internal("completion signature lacks a constant".into())),
        Err(e) => Ok(Outcome::Inapplicable(e.to_string())),
    }
}

/// Splits the strict rules into `first` and `second`; the children are
/// `first / (second ∪ S)` and `second / (first ∪ S)`.
pub fn split_processor(p: &CpProblem, first: &BTreeSet<usize>, second: &BTreeSet<usize>) -> Result<Step, FrameworkError> {
    let n = p.rel.strict.len();
    if first.iter().chain(second).any(|&i| i >= n) {
        return Err(FrameworkError::BadPartition("rule index out of range".into()));
    }
    if !first.is_disjoint(second) || first.len() + second.len() != n {
        return Err(FrameworkError::BadPartition("parts must be disjoint and cover the strict rules".into()));
    }
    Ok(Step {
        processor: Processor::Split,
        witness: Witness::Split { first: first.clone(), second: second.clone() },
        cost: Bound::Const,
        shifted: BTreeSet::new(),
        note: None,
        children: vec![ProofNode::leaf(p.shift(second)), ProofNode::leaf(p.shift(first))],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs_io::parse_trs;

    fn problem(text: &str) -> CpProblem {
        CpProblem::new(parse_trs(text).unwrap(), LanguageSpec::AllTerms)
    }

    const EX16: &str = "(VAR x y)(RULES c -> a c -> b mark(a) -> a mark(b) -> c g(x,y) -> f(x,y) g(x,x) -> g(a,b) mark(f(x,y)) -> g(mark(x),y))";

    #[test]
    fn gap_then_match_then_tmi_on_luc06() {
        let p = problem(EX16);
        let cfg = SolverConfig::default();
        let gap = gap_processor(&p, SearchShape::sli(), &[], &cfg, &Deadline::none()).unwrap().step().unwrap();
        assert_eq!(gap.shifted, (0..5).collect());
        let child = gap.children[0].problem.clone();
        assert_eq!(child.rel.strict.len(), 2);
        let m = matchbounds_processor(&child, 0, &CompletionBudget::default(), &Deadline::none()).unwrap().step().unwrap();
        assert_eq!(m.cost, Bound::Poly(1));
        let last = m.children[0].problem.clone();
        assert_eq!(last.rel.strict.len(), 1);
        let tmi = pair_processor(&last, SearchShape::tmi(2), &cfg, &Deadline::none()).unwrap().step().unwrap();
        assert_eq!(tmi.cost, Bound::Poly(2));
        assert!(tmi.children[0].problem.is_solved());
        for s in [&gap, &m, &tmi] {
            let node = ProofNode { problem: if s == &gap { p.clone() } else if s == &m { child.clone() } else { last.clone() }, step: Some(s.clone()) };
            node.recheck().unwrap();
        }
    }

    #[test]
    fn pair_on_relative_example() {
        let p = problem("(VAR x)(RULES f(f(x)) -> f(g(f(x))) f(x) ->= x)");
        let s = pair_processor(&p, SearchShape::ami(2), &SolverConfig::default(), &Deadline::none()).unwrap().step().unwrap();
        assert_eq!(s.cost, Bound::Poly(1));
        assert!(s.children[0].problem.is_solved());
        let empty = problem("(VAR x)(RULES f(x) ->= x)");
        assert!(matches!(pair_processor(&empty, SearchShape::tmi(1), &SolverConfig::default(), &Deadline::none()).unwrap(), Outcome::Inapplicable(_)));
    }

    #[test]
    fn matchbounds_rejects_duplicating_rules() {
        let p = problem("(VAR x)(RULES f(x) -> g(x,x))");
        assert!(matches!(matchbounds_processor(&p, 0, &CompletionBudget::default(), &Deadline::none()).unwrap(), Outcome::Inapplicable(_)));
    }

    #[test]
    fn splits() {
        let p = problem("(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) -> y rev'(cons(x,y),z) -> rev'(y,append(cons(x,nil),z)) append(nil,y) -> y append(cons(x,y),z) -> cons(x,append(y,z)))");
        let s = split_processor(&p, &BTreeSet::from([1, 3]), &BTreeSet::from([0, 2, 4])).unwrap();
        assert_eq!(s.children[0].problem.rel.strict.len(), 2);
        assert_eq!(s.children[1].problem.rel.strict.len(), 3);
        let degenerate = split_processor(&p, &BTreeSet::new(), &(0..5).collect()).unwrap();
        assert!(degenerate.children[0].problem.is_solved());
        assert_eq!(degenerate.children[1].problem.rel.strict, p.rel.strict);
        assert!(matches!(split_processor(&p, &BTreeSet::from([0]), &BTreeSet::from([0, 1, 2, 3, 4])), Err(FrameworkError::BadPartition(_))));
        ProofNode { problem: p, step: Some(s) }.recheck().unwrap();
    }
}

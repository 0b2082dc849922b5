use std::collections::{BTreeSet, HashSet};
use std::thread;

use super::bound::Bound;
use super::processors::{gap_processor, matchbounds_processor, pair_processor, split_processor, FrameworkError, Outcome};
use super::proof::{CpProblem, ProofNode, Processor, Step};
use crate::budget::Deadline;
use crate::matchbounds::CompletionBudget;
use crate::sat::SolverConfig;
use crate::synth::{SearchShape, DEFAULT_COEFF_BITS, DEFAULT_CONST_BITS};

/// One processor invocation of the portfolio.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    MatchBounds { rule: usize },
    Gap(SearchShape),
    Pair(SearchShape),
}

impl Method {
    fn rank(&self) -> u8 {
        match self {
            Method::MatchBounds { .. } => 0,
            Method::Gap(_) => 1,
            Method::Pair(_) => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Methods {
    pub match_bounds: bool,
    pub gap: bool,
    pub tmi: bool,
    pub ami: bool,
}

impl Default for Methods {
    fn default() -> Self {
        Methods { match_bounds: true, gap: true, tmi: true, ami: true }
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    /// Matrix dimensions tried by the interpretation processors.
    pub dims: Vec<usize>,
    pub coeff_bits: usize,
    pub const_bits: usize,
    pub arctic_bits: usize,
    /// Solver settings per synthesis call; the conflict limit keeps runs
    /// reproducible.
    pub solver: SolverConfig,
    pub completion: CompletionBudget,
    pub methods: Methods,
    /// Runs the portfolio on the calling thread.
    pub deterministic: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            dims: vec![1, 2, 3],
            coeff_bits: DEFAULT_COEFF_BITS,
            const_bits: DEFAULT_CONST_BITS,
            arctic_bits: DEFAULT_COEFF_BITS,
            solver: SolverConfig { seed: 0, max_conflicts: Some(50_000), external: None },
            completion: CompletionBudget::default(),
            methods: Methods::default(),
            deterministic: false,
        }
    }
}

impl AnalysisConfig {
    /// Portfolio tiers; a later tier runs only when every earlier one fails.
    pub fn tiers(&self, p: &CpProblem) -> Vec<Vec<Method>> {
        let m = &self.methods;
        let nat = |s: SearchShape| s.with_bits(self.coeff_bits, self.const_bits);
        let mut first = Vec::new();
        if m.match_bounds {
            first.extend((0..p.rel.strict.len()).map(|rule| Method::MatchBounds { rule }));
        }
        if m.gap {
            first.push(Method::Gap(nat(SearchShape::sli())));
            first.extend(self.dims.iter().filter(|&&d| d >= 2).map(|&d| Method::Gap(nat(SearchShape::constant_growth(d)))));
        }
        if m.tmi && self.dims.contains(&1) {
            first.push(Method::Pair(nat(SearchShape::sli())));
        }
        if m.ami && p.rel.max_arity() <= 1 {
            first.extend(self.dims.iter().map(|&d| Method::Pair(SearchShape::ami(d).with_bits(self.arctic_bits, self.arctic_bits))));
        }
        let mut tiers = vec![first];
        if m.tmi {
            let mut dims: Vec<usize> = self.dims.iter().copied().filter(|&d| d >= 2).collect();
            dims.sort_unstable();
            dims.dedup();
            tiers.extend(dims.into_iter().map(|d| vec![Method::Pair(nat(SearchShape::tmi(d)))]));
        }
        tiers.retain(|t| !t.is_empty());
        tiers
    }
}

fn run(p: &CpProblem, m: &Method, cfg: &AnalysisConfig, blocked: &[BTreeSet<usize>], deadline: &Deadline) -> Result<Outcome, FrameworkError> {
    match m {
        Method::MatchBounds { rule } => matchbounds_processor(p, *rule, &cfg.completion, deadline),
        Method::Gap(shape) => gap_processor(p, *shape, blocked, &cfg.solver, deadline),
        Method::Pair(shape) => pair_processor(p, *shape, &cfg.solver, deadline),
    }
}

/// Runs one tier and returns the preferred success: lowest cost, then most
/// rules shifted, then match-bounds before gap before pair, then tier order.
fn best_of_tier(p: &CpProblem, tier: &[Method], cfg: &AnalysisConfig, deadline: &Deadline) -> Result<Option<(Method, Step)>, FrameworkError> {
    let outcomes: Vec<Result<Outcome, FrameworkError>> = if cfg.deterministic || tier.len() == 1 {
        tier.iter().map(|m| run(p, m, cfg, &[], deadline)).collect()
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = tier.iter().map(|m| s.spawn(move || run(p, m, cfg, &[], deadline))).collect();
            handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(FrameworkError::Internal("processor panicked".into())))).collect()
        })
    };
    let mut best: Option<(usize, Method, Step)> = None;
    for (i, (m, o)) in tier.iter().zip(outcomes).enumerate() {
        let Outcome::Applied(step) = o? else { continue };
        let key = |(j, m, s): (usize, &Method, &Step)| (s.cost, std::cmp::Reverse(s.shifted.len()), m.rank(), j);
        if best.as_ref().map_or(true, |(j, bm, bs)| key((i, m, &step)) < key((*j, bm, bs))) {
            best = Some((i, *m, step));
        }
    }
    Ok(best.map(|(_, m, s)| (m, s)))
}

/// Builds a proof by applying the portfolio until every leaf is solved or
/// no processor applies. The result may be open.
pub fn analyze(p: &CpProblem, cfg: &AnalysisConfig, deadline: &Deadline) -> Result<ProofNode, FrameworkError> {
    if p.is_solved() || deadline.expired() {
        return Ok(ProofNode::leaf(p.clone()));
    }
    for tier in cfg.tiers(p) {
        let Some((method, step)) = best_of_tier(p, &tier, cfg, deadline)? else {
            if deadline.expired() {
                break;
            }
            continue;
        };
        let node = attach(p, step, cfg, deadline)?;
        if node.is_closed() {
            return Ok(node);
        }
        if let Method::Gap(shape) = method {
            let blocked = [node.step.as_ref().expect("attached step").shifted.clone()];
            if let Outcome::Applied(retry) = gap_processor(p, shape, &blocked, &cfg.solver, deadline)? {
                let alt = attach(p, retry, cfg, deadline)?;
                if alt.is_closed() {
                    return Ok(alt);
                }
            }
        }
        return Ok(node);
    }
    Ok(ProofNode::leaf(p.clone()))
}

/// Proves the children of `step` and hangs them below `p`.
fn attach(p: &CpProblem, mut step: Step, cfg: &AnalysisConfig, deadline: &Deadline) -> Result<ProofNode, FrameworkError> {
    let children = std::mem::take(&mut step.children);
    for c in children {
        step.children.push(analyze(&c.problem, cfg, deadline)?);
    }
    Ok(ProofNode { problem: p.clone(), step: Some(step) })
}

fn step_key(n: &ProofNode) -> String {
    let s = n.step.as_ref().expect("step");
    format!("{}|{:?}|{}|{:?}", n.problem, s.shifted, s.processor.name(), s.cost)
}

/// Path to the costliest untried non-split step with cost above linear.
fn costliest(n: &ProofNode, tried: &HashSet<String>, path: &mut Vec<usize>, best: &mut Option<(Bound, Vec<usize>)>) {
    let Some(s) = &n.step else { return };
    if s.processor != Processor::Split && s.cost > Bound::Poly(1) && !tried.contains(&step_key(n)) && best.as_ref().map_or(true, |(b, _)| s.cost > *b) {
        *best = Some((s.cost, path.clone()));
    }
    for (i, c) in s.children.iter().enumerate() {
        path.push(i);
        costliest(c, tried, path, best);
        path.pop();
    }
}

fn node_at<'a>(n: &'a mut ProofNode, path: &[usize]) -> &'a mut ProofNode {
    match path.split_first() {
        None => n,
        Some((&i, rest)) => node_at(&mut n.step.as_mut().expect("path follows steps").children[i], rest),
    }
}

/// Replaces costly steps by a split into the old child and a cheaper proof
/// for the shifted rules. The total bound never increases.
pub fn tighten(proof: &ProofNode, cfg: &AnalysisConfig, deadline: &Deadline) -> Result<ProofNode, FrameworkError> {
    let mut proof = proof.clone();
    if !proof.is_closed() {
        return Ok(proof);
    }
    let mut tried = HashSet::new();
    while !deadline.expired() {
        let mut best = None;
        costliest(&proof, &tried, &mut Vec::new(), &mut best);
        let Some((cost, path)) = best else { break };
        let node = node_at(&mut proof, &path);
        tried.insert(step_key(node));
        let step = node.step.as_ref().expect("step");
        let shifted = step.shifted.clone();
        let rest: BTreeSet<usize> = (0..node.problem.rel.strict.len()).filter(|i| !shifted.contains(i)).collect();
        let mut split = split_processor(&node.problem, &rest, &shifted)?;
        let replacement = analyze(&split.children[1].problem, cfg, deadline)?;
        if !replacement.is_closed() || replacement.total_bound() >= cost {
            continue;
        }
        let old_child = step.children.iter().find(|c| c.problem == split.children[0].problem).cloned();
        let Some(old_child) = old_child else { continue };
        split.children = vec![old_child, replacement];
        node.step = Some(split);
    }
    Ok(proof)
}

/// Full pipeline: analysis, then tightening when requested.
pub fn prove(p: &CpProblem, cfg: &AnalysisConfig, tighten_proof: bool, deadline: &Deadline) -> Result<ProofNode, FrameworkError> {
    let proof = analyze(p, cfg, deadline)?;
    if tighten_proof {
        tighten(&proof, cfg, deadline)
    } else {
        Ok(proof)
    }
}

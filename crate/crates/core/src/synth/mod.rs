//! Interpretation synthesis: unknown matrix entries become bit-vectors,
//! orientation obligations become circuits, and SAT models decode back into
//! interpretations that are re-checked before they are returned.

pub mod circuit;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::budget::Deadline;
use crate::interp::{evaluate_in, LinearForm, LinearInterpretation, MatrixInterpretation, OrientMode, SymbolInterp};
use crate::sat::{solve, Cnf, Lit, SolveResult, SolverConfig};
use crate::semiring::{Arctic, Matrix, ValueKind, Vector};
use crate::term::{RelativeTrs, Rule, Symbol, Var};

use circuit::{ArcticBits, ArcticBitsRing, BitVec, Circuit, NatBits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("arctic interpretations support arity at most 1, {0} has more")]
    ArityUnsupported(String),
    #[error("search shape admits no interpretation: {0}")]
    ShapeUnsatisfiableStatically(String),
    #[error("decoded interpretation fails the independent check: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchShape {
    pub kind: ValueKind,
    pub dim: usize,
    pub coeff_bits: usize,
    pub const_bits: usize,
    pub triangular: bool,
    /// Diagonal entries below the first are fixed to 0.
    pub constant_growth: bool,
    pub arctic_allow_minus_inf: bool,
}

pub const DEFAULT_COEFF_BITS: usize = 2;
pub const DEFAULT_CONST_BITS: usize = 3;

impl SearchShape {
    pub fn tmi(dim: usize) -> Self {
        SearchShape {
            kind: ValueKind::Natural,
            dim,
            coeff_bits: DEFAULT_COEFF_BITS,
            const_bits: DEFAULT_CONST_BITS,
            triangular: true,
            constant_growth: false,
            arctic_allow_minus_inf: false,
        }
    }

    pub fn constant_growth(dim: usize) -> Self {
        SearchShape { constant_growth: true, ..Self::tmi(dim) }
    }

    /// Dimension 1 with all coefficients fixed to 1.
    pub fn sli() -> Self {
        Self::constant_growth(1)
    }

    pub fn ami(dim: usize) -> Self {
        SearchShape {
            kind: ValueKind::Arctic,
            dim,
            coeff_bits: DEFAULT_COEFF_BITS,
            const_bits: DEFAULT_COEFF_BITS,
            triangular: false,
            constant_growth: false,
            arctic_allow_minus_inf: true,
        }
    }

    pub fn with_bits(mut self, coeff_bits: usize, const_bits: usize) -> Self {
        self.coeff_bits = coeff_bits;
        self.const_bits = const_bits;
        self
    }

    pub fn is_sli(&self) -> bool {
        self.kind == ValueKind::Natural && self.dim == 1 && self.triangular
    }

    /// Degree of the bound certified by a compatible interpretation.
    pub fn degree(&self) -> usize {
        match self.kind {
            ValueKind::Natural => self.dim,
            ValueKind::Arctic => 1,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            _ if self.is_sli() => "SLI".into(),
            ValueKind::Natural if self.constant_growth => format!("TMI dim {} constant growth", self.dim),
            ValueKind::Natural if self.triangular => format!("TMI dim {}", self.dim),
            ValueKind::Natural => format!("matrix dim {}", self.dim),
            ValueKind::Arctic => format!("AMI dim {}", self.dim),
        }
    }

    fn check(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::ShapeUnsatisfiableStatically(m.into()));
        if self.dim == 0 {
            return bad("dimension 0");
        }
        if self.coeff_bits == 0 || self.const_bits == 0 {
            return bad("zero-width entries");
        }
        if self.constant_growth && !self.triangular {
            return bad("constant growth requires triangular shape");
        }
        if self.kind == ValueKind::Arctic && self.triangular {
            return bad("arctic interpretations are not triangular");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleRef {
    Strict(usize),
    Weak(usize),
}

impl RuleRef {
    pub fn get<'r>(&self, rel: &'r RelativeTrs) -> &'r Rule {
        match *self {
            RuleRef::Strict(i) => &rel.strict[i],
            RuleRef::Weak(i) => &rel.weak[i],
        }
    }

    pub fn all_strict(rel: &RelativeTrs) -> Vec<RuleRef> {
        (0..rel.strict.len()).map(RuleRef::Strict).collect()
    }

    pub fn all_weak(rel: &RelativeTrs) -> Vec<RuleRef> {
        (0..rel.weak.len()).map(RuleRef::Weak).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obligation {
    Orient(Vec<RuleRef>, OrientMode),
    AtLeastOneStrict(Vec<RuleRef>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynthOutcome<T> {
    Found(T),
    NoneFound,
    /// Solver budget or deadline exhausted.
    Unknown,
}

enum Unknowns {
    Natural(BTreeMap<Symbol, SymbolInterp<BitVec>>),
    Arctic(BTreeMap<Symbol, SymbolInterp<ArcticBits>>),
}

/// A circuit over the unknown entries of one search shape.
pub struct Encoding<'a> {
    rel: &'a RelativeTrs,
    shape: SearchShape,
    circuit: Circuit,
    unknowns: Unknowns,
    oriented: HashMap<(RuleRef, OrientMode), Lit>,
}

impl<'a> Encoding<'a> {
    pub fn new(rel: &'a RelativeTrs, shape: SearchShape) -> Result<Self, SynthError> {
        shape.check()?;
        let mut circuit = Circuit::new();
        let d = shape.dim;
        let unknowns = match shape.kind {
            ValueKind::Natural => {
                let mut map = BTreeMap::new();
                for f in &rel.signature {
                    let mut args = Vec::new();
                    for _ in 0..f.arity() {
                        args.push(nat_matrix_unknown(&mut circuit, &shape));
                    }
                    let constant = Vector((0..d).map(|_| circuit.bv_fresh(shape.const_bits)).collect());
                    map.insert(f.clone(), SymbolInterp { args, constant });
                }
                Unknowns::Natural(map)
            }
            ValueKind::Arctic => {
                if let Some(f) = rel.signature.iter().find(|f| f.arity() > 1) {
                    return Err(SynthError::ArityUnsupported(f.to_string()));
                }
                let mut map = BTreeMap::new();
                for f in &rel.signature {
                    let si = if f.arity() == 1 {
                        let m = Matrix::from_rows(
                            (0..d)
                                .map(|i| (0..d).map(|j| arctic_unknown(&mut circuit, &shape, i == 0 && j == 0)).collect())
                                .collect(),
                        );
                        let minus_inf = ArcticBits { inf: circuit.tru(), mag: BitVec::default() };
                        SymbolInterp { args: vec![m], constant: Vector(vec![minus_inf; d]) }
                    } else {
                        let constant = Vector((0..d).map(|i| arctic_unknown(&mut circuit, &shape, i == 0)).collect());
                        SymbolInterp { args: vec![], constant }
                    };
                    map.insert(f.clone(), si);
                }
                Unknowns::Arctic(map)
            }
        };
        Ok(Encoding { rel, shape, circuit, unknowns, oriented: HashMap::new() })
    }

    pub fn shape(&self) -> &SearchShape {
        &self.shape
    }

    pub fn cnf(&self) -> &Cnf {
        self.circuit.cnf()
    }

    /// Literal that holds iff the rule is oriented in `mode`.
    pub fn orient_lit(&mut self, r: RuleRef, mode: OrientMode) -> Lit {
        if let Some(&l) = self.oriented.get(&(r, mode)) {
            return l;
        }
        let rule = r.get(self.rel);
        let d = self.shape.dim;
        let lit = match &self.unknowns {
            Unknowns::Natural(map) => {
                let mut ring = NatBits(&mut self.circuit);
                let l = evaluate_in(&mut ring, d, map, rule.lhs()).expect("signature covers the rules");
                let rr = evaluate_in(&mut ring, d, map, rule.rhs()).expect("signature covers the rules");
                compare_nat(&mut self.circuit, &l, &rr, mode)
            }
            Unknowns::Arctic(map) => {
                let mut ring = ArcticBitsRing(&mut self.circuit);
                let l = evaluate_in(&mut ring, d, map, rule.lhs()).expect("signature covers the rules");
                let rr = evaluate_in(&mut ring, d, map, rule.rhs()).expect("signature covers the rules");
                compare_arctic(&mut self.circuit, &l, &rr, d, mode)
            }
        };
        self.oriented.insert((r, mode), lit);
        lit
    }

    pub fn require(&mut self, ob: &Obligation) {
        match ob {
            Obligation::Orient(rules, mode) => {
                for &r in rules {
                    let l = self.orient_lit(r, *mode);
                    self.circuit.assert(l);
                }
            }
            Obligation::AtLeastOneStrict(rules) => {
                let c = rules.iter().map(|&r| self.orient_lit(r, OrientMode::Strict)).collect();
                self.circuit.add_clause(c);
            }
        }
    }

    /// Forbids models whose strict set within `scope` equals `set`.
    pub fn block_strict_set(&mut self, scope: &[RuleRef], set: &BTreeSet<RuleRef>) {
        let c = scope
            .iter()
            .map(|&r| {
                let l = self.orient_lit(r, OrientMode::Strict);
                if set.contains(&r) {
                    !l
                } else {
                    l
                }
            })
            .collect();
        self.circuit.add_clause(c);
    }

    pub fn add_clause(&mut self, c: Vec<Lit>) {
        self.circuit.add_clause(c);
    }

    pub fn decode(&self, model: &[bool]) -> LinearInterpretation {
        let c = &self.circuit;
        match &self.unknowns {
            Unknowns::Natural(map) => {
                let symbols = map
                    .iter()
                    .map(|(f, si)| {
                        let args = si.args.iter().map(|m| m.map(|v| c.eval_bv(v, model))).collect();
                        (f.clone(), SymbolInterp { args, constant: si.constant.map(|v| c.eval_bv(v, model)) })
                    })
                    .collect();
                LinearInterpretation::Natural(MatrixInterpretation {
                    dim: self.shape.dim,
                    triangular: self.shape.triangular,
                    symbols,
                })
            }
            Unknowns::Arctic(map) => {
                let val = |a: &ArcticBits| {
                    if c.eval(a.inf, model) {
                        Arctic::MinusInf
                    } else {
                        Arctic::Finite(c.eval_bv(&a.mag, model))
                    }
                };
                let symbols = map
                    .iter()
                    .map(|(f, si)| {
                        let args = si.args.iter().map(|m| m.map(val)).collect();
                        (f.clone(), SymbolInterp { args, constant: si.constant.map(val) })
                    })
                    .collect();
                LinearInterpretation::Arctic(MatrixInterpretation { dim: self.shape.dim, triangular: false, symbols })
            }
        }
    }

    /// Solves the current constraints; no re-verification.
    pub fn solve(&self, cfg: &SolverConfig, deadline: &Deadline) -> SynthOutcome<LinearInterpretation> {
        self.solve_with(&[], cfg, deadline)
    }

    fn solve_with(&self, extra: &[Vec<Lit>], cfg: &SolverConfig, deadline: &Deadline) -> SynthOutcome<LinearInterpretation> {
        let result = if extra.is_empty() {
            solve(self.cnf(), cfg, deadline)
        } else {
            let mut cnf = self.cnf().clone();
            for c in extra {
                cnf.add_clause(c.clone());
            }
            solve(&cnf, cfg, deadline)
        };
        match result {
            SolveResult::Sat(model) => SynthOutcome::Found(self.decode(&model)),
            SolveResult::Unsat => SynthOutcome::NoneFound,
            SolveResult::Unknown => SynthOutcome::Unknown,
        }
    }
}

fn nat_matrix_unknown(c: &mut Circuit, shape: &SearchShape) -> Matrix<BitVec> {
    let d = shape.dim;
    let one = BitVec(vec![c.tru()]);
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let e = if shape.triangular {
                match i.cmp(&j) {
                    std::cmp::Ordering::Greater => BitVec::default(),
                    std::cmp::Ordering::Equal if i == 0 => one.clone(),
                    std::cmp::Ordering::Equal if shape.constant_growth => BitVec::default(),
                    std::cmp::Ordering::Equal => c.bv_fresh(1),
                    std::cmp::Ordering::Less => c.bv_fresh(shape.coeff_bits),
                }
            } else {
                let v = c.bv_fresh(shape.coeff_bits);
                if i == 0 && j == 0 {
                    let nz = c.bv_nonzero(&v);
                    c.assert(nz);
                }
                v
            };
            row.push(e);
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

fn arctic_unknown(c: &mut Circuit, shape: &SearchShape, finite: bool) -> ArcticBits {
    let inf = if finite || !shape.arctic_allow_minus_inf { c.fls() } else { c.fresh() };
    ArcticBits { inf, mag: c.bv_fresh(shape.coeff_bits) }
}

fn compare_nat(c: &mut Circuit, l: &LinearForm<BitVec>, r: &LinearForm<BitVec>, mode: OrientMode) -> Lit {
    let zero = BitVec::default();
    let vars: BTreeSet<&Var> = l.coeffs.keys().chain(r.coeffs.keys()).collect();
    let mut conj = Vec::new();
    for x in vars {
        match (l.coeffs.get(x), r.coeffs.get(x)) {
            (_, None) => {}
            (None, Some(b)) => {
                for e in b.entries() {
                    conj.push(c.bv_ge(&zero, e));
                }
            }
            (Some(a), Some(b)) => {
                for (ea, eb) in a.entries().iter().zip(b.entries()) {
                    conj.push(c.bv_ge(ea, eb));
                }
            }
        }
    }
    if mode != OrientMode::NcpWeak {
        for (ea, eb) in l.constant.0.iter().zip(&r.constant.0) {
            conj.push(c.bv_ge(ea, eb));
        }
    }
    if mode == OrientMode::Strict {
        conj.push(c.bv_gt(&l.constant.0[0], &r.constant.0[0]));
    }
    c.and_all(&conj)
}

fn compare_arctic(c: &mut Circuit, l: &LinearForm<ArcticBits>, r: &LinearForm<ArcticBits>, dim: usize, mode: OrientMode) -> Lit {
    let minus_inf = ArcticBits { inf: c.tru(), mag: BitVec::default() };
    let zero = vec![minus_inf; dim * dim];
    let strict = mode == OrientMode::Strict;
    let cmp = |c: &mut Circuit, a: &ArcticBits, b: &ArcticBits| if strict { c.arc_gt(a, b) } else { c.arc_ge(a, b) };
    let vars: BTreeSet<&Var> = l.coeffs.keys().chain(r.coeffs.keys()).collect();
    let mut conj = Vec::new();
    for x in vars {
        let a = l.coeffs.get(x).map_or(&zero[..], |m| m.entries());
        let b = r.coeffs.get(x).map_or(&zero[..], |m| m.entries());
        for (ea, eb) in a.iter().zip(b) {
            conj.push(cmp(c, ea, eb));
        }
    }
    if mode != OrientMode::NcpWeak {
        for (ea, eb) in l.constant.0.iter().zip(&r.constant.0) {
            conj.push(cmp(c, ea, eb));
        }
    }
    c.and_all(&conj)
}

pub fn encode<'a>(rel: &'a RelativeTrs, shape: SearchShape, obligations: &[Obligation]) -> Result<Encoding<'a>, SynthError> {
    let mut enc = Encoding::new(rel, shape)?;
    for ob in obligations {
        enc.require(ob);
    }
    Ok(enc)
}

/// Checks an interpretation against obligations with the concrete orientation
/// procedure.
pub fn verify(interp: &LinearInterpretation, rel: &RelativeTrs, obligations: &[Obligation]) -> Result<(), SynthError> {
    let fail = |m: String| SynthError::VerificationFailed(m);
    interp.validate().map_err(|e| fail(e.to_string()))?;
    let orient = |r: RuleRef, mode| interp.orient(r.get(rel), mode).map_err(|e| fail(e.to_string()));
    for ob in obligations {
        match ob {
            Obligation::Orient(rules, mode) => {
                for &r in rules {
                    if !orient(r, *mode)? {
                        return Err(fail(format!("rule {} is not oriented {mode}", r.get(rel))));
                    }
                }
            }
            Obligation::AtLeastOneStrict(rules) => {
                let mut any = false;
                for &r in rules {
                    any |= orient(r, OrientMode::Strict)?;
                }
                if !any {
                    return Err(fail("no rule of the selection is oriented strictly".into()));
                }
            }
        }
    }
    Ok(())
}

/// Encodes, solves and re-verifies.
pub fn synthesize(
    rel: &RelativeTrs,
    shape: SearchShape,
    obligations: &[Obligation],
    cfg: &SolverConfig,
    deadline: &Deadline,
) -> Result<SynthOutcome<LinearInterpretation>, SynthError> {
    let enc = encode(rel, shape, obligations)?;
    let out = enc.solve(cfg, deadline);
    if let SynthOutcome::Found(interp) = &out {
        verify(interp, rel, obligations)?;
        if shape.constant_growth && !interp.constant_growth() {
            return Err(SynthError::VerificationFailed("interpretation lacks constant growth".into()));
        }
    }
    Ok(out)
}

/// Which side condition the rules outside the strict set must meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    /// Remaining strict rules weakly oriented.
    Pair,
    /// Remaining strict rules oriented on their non-constant parts only.
    Gap,
}

/// An interpretation together with the strict rules it orients strictly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub interp: LinearInterpretation,
    pub strict: BTreeSet<usize>,
}

pub fn shift_obligations(rel: &RelativeTrs, kind: ShiftKind) -> Vec<Obligation> {
    let remainder = match kind {
        ShiftKind::Pair => OrientMode::Weak,
        ShiftKind::Gap => OrientMode::NcpWeak,
    };
    vec![
        Obligation::Orient(RuleRef::all_strict(rel), remainder),
        Obligation::Orient(RuleRef::all_weak(rel), OrientMode::Weak),
        Obligation::AtLeastOneStrict(RuleRef::all_strict(rel)),
    ]
}

/// Conflict limit of each solver call that tries to enlarge the strict set.
pub const GROW_CONFLICTS: u64 = 20_000;

/// Finds an interpretation orienting at least one strict rule strictly under
/// the side conditions of `kind`, avoiding the strict sets in `blocked`, then
/// grows the strict set greedily until no larger one exists.
pub fn synthesize_shift(
    rel: &RelativeTrs,
    shape: SearchShape,
    kind: ShiftKind,
    blocked: &[BTreeSet<usize>],
    cfg: &SolverConfig,
    deadline: &Deadline,
) -> Result<SynthOutcome<Shift>, SynthError> {
    if rel.strict.is_empty() {
        return Ok(SynthOutcome::NoneFound);
    }
    let obligations = shift_obligations(rel, kind);
    let mut enc = encode(rel, shape, &obligations)?;
    let scope = RuleRef::all_strict(rel);
    for b in blocked {
        let set = b.iter().map(|&i| RuleRef::Strict(i)).collect();
        enc.block_strict_set(&scope, &set);
    }
    let strict_lits: Vec<Lit> = scope.iter().map(|&r| enc.orient_lit(r, OrientMode::Strict)).collect();
    let mut best = match enc.solve(cfg, deadline) {
        SynthOutcome::Found(i) => i,
        SynthOutcome::NoneFound => return Ok(SynthOutcome::NoneFound),
        SynthOutcome::Unknown => return Ok(SynthOutcome::Unknown),
    };
    let grow_cfg = SolverConfig { max_conflicts: Some(cfg.max_conflicts.map_or(GROW_CONFLICTS, |m| m.min(GROW_CONFLICTS))), ..cfg.clone() };
    loop {
        verify(&best, rel, &obligations)?;
        if shape.constant_growth && !best.constant_growth() {
            return Err(SynthError::VerificationFailed("interpretation lacks constant growth".into()));
        }
        let strict = strict_set(&best, rel)?;
        if strict.len() == rel.strict.len() || deadline.expired() {
            return Ok(SynthOutcome::Found(Shift { interp: best, strict }));
        }
        let mut extra: Vec<Vec<Lit>> = strict.iter().map(|&i| vec![strict_lits[i]]).collect();
        extra.push((0..rel.strict.len()).filter(|i| !strict.contains(i)).map(|i| strict_lits[i]).collect());
        match enc.solve_with(&extra, &grow_cfg, deadline) {
            SynthOutcome::Found(i) => best = i,
            _ => return Ok(SynthOutcome::Found(Shift { interp: best, strict })),
        }
    }
}

fn strict_set(interp: &LinearInterpretation, rel: &RelativeTrs) -> Result<BTreeSet<usize>, SynthError> {
    let mut out = BTreeSet::new();
    for (i, r) in rel.strict.iter().enumerate() {
        if interp.orient(r, OrientMode::Strict).map_err(|e| SynthError::VerificationFailed(e.to_string()))? {
            out.insert(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs_io::parse_trs;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn all_strict(rel: &RelativeTrs) -> Vec<Obligation> {
        vec![
            Obligation::Orient(RuleRef::all_strict(rel), OrientMode::Strict),
            Obligation::Orient(RuleRef::all_weak(rel), OrientMode::Weak),
        ]
    }

    #[test]
    fn sli_for_a_single_rule() {
        let rel = parse_trs("(RULES a -> b)").unwrap();
        let out = synthesize(&rel, SearchShape::sli().with_bits(2, 2), &all_strict(&rel), &cfg(), &Deadline::none()).unwrap();
        assert!(matches!(out, SynthOutcome::Found(ref i) if i.is_sli()));
    }

    #[test]
    fn no_sli_for_size_increasing_rule() {
        let rel = parse_trs("(VAR x)(RULES f(f(x)) -> f(g(f(x))))").unwrap();
        for bits in 1..=4 {
            let shape = SearchShape::sli().with_bits(bits, bits);
            let out = synthesize(&rel, shape, &all_strict(&rel), &cfg(), &Deadline::none()).unwrap();
            assert_eq!(out, SynthOutcome::NoneFound, "bits {bits}");
        }
    }

    #[test]
    fn tmi_and_ami_for_relative_pair() {
        let rel = parse_trs("(VAR x)(RULES f(f(x)) -> f(g(f(x))) f(x) ->= x)").unwrap();
        for shape in [SearchShape::tmi(2), SearchShape::ami(2)] {
            let out = synthesize(&rel, shape, &all_strict(&rel), &cfg(), &Deadline::none()).unwrap();
            assert!(matches!(out, SynthOutcome::Found(_)), "{}", shape.label());
        }
    }

    #[test]
    fn arctic_rejects_binary_symbols() {
        let rel = parse_trs("(VAR x y)(RULES f(x,y) -> x)").unwrap();
        assert!(matches!(Encoding::new(&rel, SearchShape::ami(1)), Err(SynthError::ArityUnsupported(_))));
    }

    #[test]
    fn static_shape_errors() {
        let rel = parse_trs("(RULES a -> b)").unwrap();
        let mut s = SearchShape::tmi(0);
        assert!(matches!(Encoding::new(&rel, s), Err(SynthError::ShapeUnsatisfiableStatically(_))));
        s = SearchShape::tmi(2);
        s.triangular = false;
        s.constant_growth = true;
        assert!(matches!(Encoding::new(&rel, s), Err(SynthError::ShapeUnsatisfiableStatically(_))));
    }

    #[test]
    fn gap_shift_on_luc06_orients_first_five() {
        let rel = parse_trs(
            "(VAR x y)(RULES c -> a c -> b mark(a) -> a mark(b) -> c g(x,y) -> f(x,y) \
             g(x,x) -> g(a,b) mark(f(x,y)) -> g(mark(x),y))",
        )
        .unwrap();
        let out = synthesize_shift(&rel, SearchShape::sli(), ShiftKind::Gap, &[], &cfg(), &Deadline::none()).unwrap();
        let SynthOutcome::Found(s) = out else { panic!("no SLI found") };
        assert_eq!(s.strict, (0..5).collect());
    }
}

//! Linear matrix interpretations over the natural and arctic semirings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::semiring::{
    compare_matrices, compare_vectors, shape_check, Arctic, CompareMode, Matrix, Nat, Semiring, Shape,
    Value, ValueKind, Vector,
};
use crate::term::{RelativeTrs, Rule, Symbol, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("symbol {0} has no interpretation")]
    MissingSymbol(String),
    #[error("arctic interpretations support arity at most 1, {0} has more")]
    ArityUnsupported(String),
    #[error("interpretation violates its invariants: {0}")]
    InvariantViolation(String),
}

/// `f(x1..xn) = F1·x1 + ... + Fn·xn + f`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolInterp<T> {
    pub args: Vec<Matrix<T>>,
    pub constant: Vector<T>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixInterpretation<V> {
    pub dim: usize,
    /// Claims all argument matrices are upper triangular (natural only).
    pub triangular: bool,
    pub symbols: BTreeMap<Symbol, SymbolInterp<V>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinearInterpretation {
    Natural(MatrixInterpretation<Nat>),
    Arctic(MatrixInterpretation<Arctic>),
}

/// `Σ coeffs[x]·x ⊕ constant`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm<T> {
    pub coeffs: BTreeMap<Var, Matrix<T>>,
    pub constant: Vector<T>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum OrientMode {
    Strict,
    Weak,
    NcpWeak,
}

impl fmt::Display for OrientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrientMode::Strict => "strict",
            OrientMode::Weak => "weak",
            OrientMode::NcpWeak => "ncp-weak",
        })
    }
}

/// Symbolic evaluation in any semiring context.
pub fn evaluate_in<R: Semiring>(
    ring: &mut R,
    dim: usize,
    symbols: &BTreeMap<Symbol, SymbolInterp<R::Elem>>,
    t: &Term,
) -> Result<LinearForm<R::Elem>, InterpError> {
    match t {
        Term::Var(x) => {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(x.clone(), Matrix::identity_in(ring, dim));
            Ok(LinearForm { coeffs, constant: Vector::zero_in(ring, dim) })
        }
        Term::App(f, args) => {
            let fi = symbols.get(f).ok_or_else(|| InterpError::MissingSymbol(f.to_string()))?;
            let mut coeffs: BTreeMap<Var, Matrix<R::Elem>> = BTreeMap::new();
            let mut constant = fi.constant.clone();
            for (a, m) in args.iter().zip(&fi.args) {
                let sub = evaluate_in(ring, dim, symbols, a)?;
                for (x, c) in &sub.coeffs {
                    let p = m.mul_in(ring, c).expect("square matrices of one dimension");
                    let sum = match coeffs.remove(x) {
                        Some(old) => old.add_in(ring, &p).expect("same shape"),
                        None => p,
                    };
                    coeffs.insert(x.clone(), sum);
                }
                let v = m.mul_vec_in(ring, &sub.constant).expect("matching dimension");
                constant = constant.add_in(ring, &v).expect("same length");
            }
            Ok(LinearForm { coeffs, constant })
        }
    }
}

impl<V: Value> MatrixInterpretation<V> {
    pub fn evaluate(&self, t: &Term) -> Result<LinearForm<V>, InterpError> {
        if V::KIND == ValueKind::Arctic {
            if let Some(f) = t.symbols().into_iter().find(|f| f.arity() > 1) {
                return Err(InterpError::ArityUnsupported(f.to_string()));
            }
        }
        evaluate_in(&mut V::Ring::default(), self.dim, &self.symbols, t)
    }

    pub fn orient(&self, rule: &Rule, mode: OrientMode) -> Result<bool, InterpError> {
        let l = self.evaluate(rule.lhs())?;
        let r = self.evaluate(rule.rhs())?;
        Ok(compare_forms(&l, &r, self.dim, mode))
    }
}

/// Compares two forms; variables missing on one side count as the zero
/// matrix of the semiring.
pub fn compare_forms<V: Value>(l: &LinearForm<V>, r: &LinearForm<V>, dim: usize, mode: OrientMode) -> bool {
    let zero = Matrix::zero_in(&mut V::Ring::default(), dim, dim);
    let vars: BTreeSet<&Var> = l.coeffs.keys().chain(r.coeffs.keys()).collect();
    let entry_mode = match (V::KIND, mode) {
        (ValueKind::Arctic, OrientMode::Strict) => CompareMode::StrictArcticPointwise,
        _ => CompareMode::WeakPointwise,
    };
    let coeffs_ok = vars.iter().all(|x| {
        let a = l.coeffs.get(*x).unwrap_or(&zero);
        let b = r.coeffs.get(*x).unwrap_or(&zero);
        compare_matrices(a, b, entry_mode).expect("same shape")
    });
    if !coeffs_ok {
        return false;
    }
    match mode {
        OrientMode::NcpWeak => true,
        OrientMode::Weak => compare_vectors(&l.constant, &r.constant, entry_mode).expect("same length"),
        OrientMode::Strict => match V::KIND {
            ValueKind::Arctic => compare_vectors(&l.constant, &r.constant, entry_mode).expect("same length"),
            ValueKind::Natural => {
                compare_vectors(&l.constant, &r.constant, CompareMode::WeakPointwise).expect("same length")
                    && l.constant.0[0].as_natural() > r.constant.0[0].as_natural()
            }
        },
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PairClassification {
    Compatible { strict_rules: Vec<usize>, degree: usize },
    Incompatible { reason: String },
}

impl LinearInterpretation {
    pub fn kind(&self) -> ValueKind {
        match self {
            LinearInterpretation::Natural(_) => ValueKind::Natural,
            LinearInterpretation::Arctic(_) => ValueKind::Arctic,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LinearInterpretation::Natural(m) => m.dim,
            LinearInterpretation::Arctic(m) => m.dim,
        }
    }

    pub fn orient(&self, rule: &Rule, mode: OrientMode) -> Result<bool, InterpError> {
        match self {
            LinearInterpretation::Natural(m) => m.orient(rule, mode),
            LinearInterpretation::Arctic(m) => m.orient(rule, mode),
        }
    }

    /// A strongly linear interpretation: dimension 1, all coefficients 1.
    pub fn is_sli(&self) -> bool {
        match self {
            LinearInterpretation::Natural(m) => {
                m.dim == 1 && m.symbols.values().all(|s| s.args.iter().all(|a| a.get(0, 0).is_one()))
            }
            LinearInterpretation::Arctic(_) => false,
        }
    }

    /// Checks the kind's invariants.
    pub fn validate(&self) -> Result<(), InterpError> {
        let bad = |what: String| Err(InterpError::InvariantViolation(what));
        match self {
            LinearInterpretation::Natural(m) => {
                for (f, si) in &m.symbols {
                    check_dims(f, si, m.dim)?;
                    for a in &si.args {
                        if !shape_check(a, Shape::FirstEntryPositive) {
                            return bad(format!("matrix of {f} is not monotone"));
                        }
                        if m.triangular && !shape_check(a, Shape::UpperTriangular) {
                            return bad(format!("matrix of {f} is not upper triangular"));
                        }
                    }
                }
                Ok(())
            }
            LinearInterpretation::Arctic(m) => {
                for (f, si) in &m.symbols {
                    check_dims(f, si, m.dim)?;
                    if f.arity() > 1 {
                        return Err(InterpError::ArityUnsupported(f.to_string()));
                    }
                    if let Some(a) = si.args.first() {
                        if !shape_check(a, Shape::ArcticFiniteTopLeft) {
                            return bad(format!("matrix of {f} has -inf in its top-left entry"));
                        }
                        if !si.constant.0.iter().all(Arctic::is_minus_inf) {
                            return bad(format!("unary symbol {f} has a constant part"));
                        }
                    } else if si.constant.0[0].is_minus_inf() {
                        return bad(format!("constant {f} has -inf as its first entry"));
                    }
                }
                Ok(())
            }
        }
    }

    /// Polynomial degree certified by a compatible interpretation.
    pub fn degree(&self) -> Result<usize, InterpError> {
        self.validate()?;
        match self {
            LinearInterpretation::Natural(m) if m.triangular || self.is_sli() => Ok(m.dim),
            LinearInterpretation::Natural(_) => Err(InterpError::InvariantViolation(
                "natural matrix interpretation without triangular shape".into(),
            )),
            LinearInterpretation::Arctic(_) => Ok(1),
        }
    }

    /// Every strict rule strict and every weak rule weak.
    pub fn classify_pair(&self, rel: &RelativeTrs) -> Result<PairClassification, InterpError> {
        let degree = self.degree()?;
        for (i, r) in rel.strict.iter().enumerate() {
            if !self.orient(r, OrientMode::Strict)? {
                return Ok(PairClassification::Incompatible {
                    reason: format!("strict rule {} ({r}) is not oriented strictly", i + 1),
                });
            }
        }
        for (i, r) in rel.weak.iter().enumerate() {
            if !self.orient(r, OrientMode::Weak)? {
                return Ok(PairClassification::Incompatible {
                    reason: format!("weak rule {} ({r}) is not oriented weakly", i + 1),
                });
            }
        }
        Ok(PairClassification::Compatible { strict_rules: (0..rel.strict.len()).collect(), degree })
    }

    /// The strict rules oriented strictly, provided that set is non-empty
    /// and all remaining rules are oriented weakly.
    pub fn classify_partial(&self, rel: &RelativeTrs) -> Result<PairClassification, InterpError> {
        let degree = self.degree()?;
        let mut shifted = Vec::new();
        for (i, r) in rel.strict.iter().enumerate() {
            if self.orient(r, OrientMode::Strict)? {
                shifted.push(i);
            } else if !self.orient(r, OrientMode::Weak)? {
                return Ok(PairClassification::Incompatible {
                    reason: format!("strict rule {} ({r}) is not oriented weakly", i + 1),
                });
            }
        }
        for (i, r) in rel.weak.iter().enumerate() {
            if !self.orient(r, OrientMode::Weak)? {
                return Ok(PairClassification::Incompatible {
                    reason: format!("weak rule {} ({r}) is not oriented weakly", i + 1),
                });
            }
        }
        if shifted.is_empty() {
            return Ok(PairClassification::Incompatible { reason: "no rule is oriented strictly".into() });
        }
        Ok(PairClassification::Compatible { strict_rules: shifted, degree })
    }

    /// Sufficient condition for constant growth: every argument matrix is
    /// upper triangular with a zero diagonal below the first entry.
    pub fn constant_growth(&self) -> bool {
        match self {
            LinearInterpretation::Natural(m) => m.symbols.values().flat_map(|s| &s.args).all(|a| {
                shape_check(a, Shape::UpperTriangular) && (1..a.rows()).all(|i| a.get(i, i).is_zero())
            }),
            LinearInterpretation::Arctic(_) => false,
        }
    }
}

fn check_dims<V: Clone>(f: &Symbol, si: &SymbolInterp<V>, dim: usize) -> Result<(), InterpError> {
    let ok = si.args.len() == f.arity()
        && si.constant.len() == dim
        && si.args.iter().all(|a| a.rows() == dim && a.cols() == dim);
    if ok {
        Ok(())
    } else {
        Err(InterpError::InvariantViolation(format!("shape of the interpretation of {f}")))
    }
}

fn write_symbol<V: fmt::Display>(f: &mut fmt::Formatter<'_>, sym: &Symbol, si: &SymbolInterp<V>, arctic: bool) -> fmt::Result {
    let (plus, times) = if arctic { (" (+) ", "(x)") } else { (" + ", "*") };
    write!(f, "{sym}")?;
    if sym.arity() > 0 {
        f.write_str("(")?;
        for i in 1..=sym.arity() {
            if i > 1 {
                f.write_str(",")?;
            }
            write!(f, "x{i}")?;
        }
        f.write_str(")")?;
    }
    f.write_str(" = ")?;
    let mut parts: Vec<String> = si.args.iter().enumerate().map(|(i, m)| format!("{m}{times}x{}", i + 1)).collect();
    if !(arctic && sym.arity() > 0) {
        parts.push(si.constant.to_string());
    }
    f.write_str(&parts.join(plus))
}

impl fmt::Display for LinearInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearInterpretation::Natural(m) => {
                for (i, (sym, si)) in m.symbols.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write_symbol(f, sym, si, false)?;
                }
            }
            LinearInterpretation::Arctic(m) => {
                for (i, (sym, si)) in m.symbols.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write_symbol(f, sym, si, true)?;
                }
            }
        }
        Ok(())
    }
}

/// Convenience builder for hand-written interpretations.
#[derive(Default)]
pub struct InterpBuilder<V> {
    dim: usize,
    symbols: BTreeMap<Symbol, SymbolInterp<V>>,
}

impl<V: Value> InterpBuilder<V> {
    pub fn new(dim: usize) -> Self {
        InterpBuilder { dim, symbols: BTreeMap::new() }
    }

    pub fn symbol(mut self, name: &str, args: Vec<Matrix<V>>, constant: Vector<V>) -> Self {
        self.symbols.insert(Symbol::new(name, args.len()), SymbolInterp { args, constant });
        self
    }

    pub fn build(self, triangular: bool) -> MatrixInterpretation<V> {
        MatrixInterpretation { dim: self.dim, triangular, symbols: self.symbols }
    }
}

impl InterpBuilder<Nat> {
    pub fn natural(self, triangular: bool) -> LinearInterpretation {
        LinearInterpretation::Natural(self.build(triangular))
    }
}

impl InterpBuilder<Arctic> {
    pub fn arctic(self) -> LinearInterpretation {
        LinearInterpretation::Arctic(self.build(false))
    }
}

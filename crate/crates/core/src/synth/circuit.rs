//! Boolean circuits over CNF literals with constant folding and structural
//! hashing, plus unsigned bit-vector and arctic arithmetic on top of them.
//! Every gate is Tseitin-encoded as it is created.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::sat::{Cnf, Lit};
use crate::semiring::Semiring;

pub struct Circuit {
    cnf: Cnf,
    tru: Lit,
    ands: HashMap<(Lit, Lit), Lit>,
    xors: HashMap<(Lit, Lit), Lit>,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        let mut cnf = Cnf::new();
        let v = cnf.fresh_var();
        let tru = Lit::pos(v);
        cnf.add_clause(vec![tru]);
        Circuit { cnf, tru, ands: HashMap::new(), xors: HashMap::new() }
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn into_cnf(self) -> Cnf {
        self.cnf
    }

    pub fn tru(&self) -> Lit {
        self.tru
    }

    pub fn fls(&self) -> Lit {
        !self.tru
    }

    pub fn constant(&self, b: bool) -> Lit {
        if b {
            self.tru
        } else {
            !self.tru
        }
    }

    /// `Some(b)` when `l` is the constant `b`.
    pub fn const_value(&self, l: Lit) -> Option<bool> {
        if l == self.tru {
            Some(true)
        } else if l == !self.tru {
            Some(false)
        } else {
            None
        }
    }

    pub fn fresh(&mut self) -> Lit {
        Lit::pos(self.cnf.fresh_var())
    }

    pub fn assert(&mut self, l: Lit) {
        self.cnf.add_clause(vec![l]);
    }

    pub fn add_clause(&mut self, c: Vec<Lit>) {
        self.cnf.add_clause(c);
    }

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let (t, f) = (self.tru, !self.tru);
        if a == f || b == f || a == !b {
            return f;
        }
        if a == t || a == b {
            return b;
        }
        if b == t {
            return a;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&g) = self.ands.get(&key) {
            return g;
        }
        let g = self.fresh();
        self.cnf.add_clause(vec![!g, a]);
        self.cnf.add_clause(vec![!g, b]);
        self.cnf.add_clause(vec![g, !a, !b]);
        self.ands.insert(key, g);
        g
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let (t, f) = (self.tru, !self.tru);
        if a == f {
            return b;
        }
        if b == f {
            return a;
        }
        if a == t {
            return !b;
        }
        if b == t {
            return !a;
        }
        if a == b {
            return f;
        }
        if a == !b {
            return t;
        }
        // xor(¬a, b) = ¬xor(a, b): cache on positive literals only.
        let flip = a.is_negated() ^ b.is_negated();
        let (pa, pb) = (Lit::pos(a.var()), Lit::pos(b.var()));
        let key = if pa < pb { (pa, pb) } else { (pb, pa) };
        let g = match self.xors.get(&key) {
            Some(&g) => g,
            None => {
                let g = self.fresh();
                let (x, y) = key;
                self.cnf.add_clause(vec![!g, x, y]);
                self.cnf.add_clause(vec![!g, !x, !y]);
                self.cnf.add_clause(vec![g, !x, y]);
                self.cnf.add_clause(vec![g, x, !y]);
                self.xors.insert(key, g);
                g
            }
        };
        if flip {
            !g
        } else {
            g
        }
    }

    /// `c ? a : b`.
    pub fn mux(&mut self, c: Lit, a: Lit, b: Lit) -> Lit {
        match self.const_value(c) {
            Some(true) => return a,
            Some(false) => return b,
            None => {}
        }
        if a == b {
            return a;
        }
        let x = self.and(c, a);
        let y = self.and(!c, b);
        self.or(x, y)
    }

    pub fn and_all(&mut self, ls: &[Lit]) -> Lit {
        ls.iter().fold(self.tru, |acc, &l| self.and(acc, l))
    }

    pub fn or_all(&mut self, ls: &[Lit]) -> Lit {
        ls.iter().fold(!self.tru, |acc, &l| self.or(acc, l))
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or(!a, b)
    }

    // Bit vectors, least significant bit first.

    pub fn bv_const(&self, n: &BigUint) -> BitVec {
        let bits = (0..n.bits()).map(|i| self.constant(n.bit(i))).collect();
        BitVec(bits)
    }

    pub fn bv_fresh(&mut self, width: usize) -> BitVec {
        BitVec((0..width).map(|_| self.fresh()).collect())
    }

    fn trim(&self, mut v: Vec<Lit>) -> BitVec {
        while v.last() == Some(&self.fls()) {
            v.pop();
        }
        BitVec(v)
    }

    fn bit(&self, v: &BitVec, i: usize) -> Lit {
        v.0.get(i).copied().unwrap_or(self.fls())
    }

    pub fn bv_add(&mut self, a: &BitVec, b: &BitVec) -> BitVec {
        let w = a.width().max(b.width());
        let mut carry = self.fls();
        let mut out = Vec::with_capacity(w + 1);
        for i in 0..w {
            let (x, y) = (self.bit(a, i), self.bit(b, i));
            let xy = self.xor(x, y);
            out.push(self.xor(xy, carry));
            let both = self.and(x, y);
            let prop = self.and(xy, carry);
            carry = self.or(both, prop);
        }
        out.push(carry);
        self.trim(out)
    }

    pub fn bv_mul(&mut self, a: &BitVec, b: &BitVec) -> BitVec {
        let mut acc = BitVec(Vec::new());
        for (i, &bi) in b.0.iter().enumerate() {
            if bi == self.fls() {
                continue;
            }
            let mut partial = vec![self.fls(); i];
            for &aj in &a.0 {
                partial.push(self.and(aj, bi));
            }
            let partial = self.trim(partial);
            acc = self.bv_add(&acc, &partial);
        }
        acc
    }

    fn bv_compare(&mut self, a: &BitVec, b: &BitVec, strict: bool) -> Lit {
        let w = a.width().max(b.width());
        let mut res = self.constant(!strict);
        for i in 0..w {
            let (x, y) = (self.bit(a, i), self.bit(b, i));
            let gt_here = self.and(x, !y);
            let differ = self.xor(x, y);
            let keep = self.and(!differ, res);
            res = self.or(gt_here, keep);
        }
        res
    }

    pub fn bv_ge(&mut self, a: &BitVec, b: &BitVec) -> Lit {
        self.bv_compare(a, b, false)
    }

    pub fn bv_gt(&mut self, a: &BitVec, b: &BitVec) -> Lit {
        self.bv_compare(a, b, true)
    }

    pub fn bv_mux(&mut self, c: Lit, a: &BitVec, b: &BitVec) -> BitVec {
        let w = a.width().max(b.width());
        let bits = (0..w)
            .map(|i| {
                let (x, y) = (self.bit(a, i), self.bit(b, i));
                self.mux(c, x, y)
            })
            .collect();
        self.trim(bits)
    }

    pub fn bv_max(&mut self, a: &BitVec, b: &BitVec) -> BitVec {
        let c = self.bv_ge(a, b);
        self.bv_mux(c, a, b)
    }

    pub fn bv_nonzero(&mut self, a: &BitVec) -> Lit {
        let bits = a.0.clone();
        self.or_all(&bits)
    }

    // Arctic values: an explicit −∞ flag plus a magnitude that is
    // meaningless while the flag is set.

    pub fn arc_max(&mut self, a: &ArcticBits, b: &ArcticBits) -> ArcticBits {
        let inf = self.and(a.inf, b.inf);
        let m = self.bv_max(&a.mag, &b.mag);
        let m = self.bv_mux(b.inf, &a.mag, &m);
        let mag = self.bv_mux(a.inf, &b.mag, &m);
        ArcticBits { inf, mag }
    }

    pub fn arc_plus(&mut self, a: &ArcticBits, b: &ArcticBits) -> ArcticBits {
        let inf = self.or(a.inf, b.inf);
        let mag = self.bv_add(&a.mag, &b.mag);
        ArcticBits { inf, mag }
    }

    /// `a ≥ b` or `b = −∞`.
    pub fn arc_ge(&mut self, a: &ArcticBits, b: &ArcticBits) -> Lit {
        let ge = self.bv_ge(&a.mag, &b.mag);
        let fin = self.and(!a.inf, ge);
        self.or(b.inf, fin)
    }

    /// `a > b` or `b = −∞`.
    pub fn arc_gt(&mut self, a: &ArcticBits, b: &ArcticBits) -> Lit {
        let gt = self.bv_gt(&a.mag, &b.mag);
        let fin = self.and(!a.inf, gt);
        self.or(b.inf, fin)
    }

    /// Value of a literal under a model of the circuit's CNF.
    pub fn eval(&self, l: Lit, model: &[bool]) -> bool {
        model[l.var() as usize] != l.is_negated()
    }

    pub fn eval_bv(&self, v: &BitVec, model: &[bool]) -> BigUint {
        let mut n = BigUint::default();
        for (i, &l) in v.0.iter().enumerate() {
            if self.eval(l, model) {
                n.set_bit(i as u64, true);
            }
        }
        n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BitVec(pub Vec<Lit>);

impl BitVec {
    pub fn width(&self) -> usize {
        self.0.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcticBits {
    pub inf: Lit,
    pub mag: BitVec,
}

/// Natural-number semiring over bit-vectors.
pub struct NatBits<'c>(pub &'c mut Circuit);

impl Semiring for NatBits<'_> {
    type Elem = BitVec;
    fn zero(&mut self) -> BitVec {
        BitVec(Vec::new())
    }
    fn one(&mut self) -> BitVec {
        BitVec(vec![self.0.tru()])
    }
    fn add(&mut self, a: &BitVec, b: &BitVec) -> BitVec {
        self.0.bv_add(a, b)
    }
    fn mul(&mut self, a: &BitVec, b: &BitVec) -> BitVec {
        self.0.bv_mul(a, b)
    }
}

/// Max-plus semiring over flagged bit-vectors.
pub struct ArcticBitsRing<'c>(pub &'c mut Circuit);

impl Semiring for ArcticBitsRing<'_> {
    type Elem = ArcticBits;
    fn zero(&mut self) -> ArcticBits {
        ArcticBits { inf: self.0.tru(), mag: BitVec(Vec::new()) }
    }
    fn one(&mut self) -> ArcticBits {
        ArcticBits { inf: self.0.fls(), mag: BitVec(Vec::new()) }
    }
    fn add(&mut self, a: &ArcticBits, b: &ArcticBits) -> ArcticBits {
        self.0.arc_max(a, b)
    }
    fn mul(&mut self, a: &ArcticBits, b: &ArcticBits) -> ArcticBits {
        self.0.arc_plus(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Deadline;
    use crate::sat::{Solver, SolveResult};

    fn model_of(c: &Circuit) -> Vec<bool> {
        match Solver::new(c.cnf(), 0).solve(None, &Deadline::none()) {
            SolveResult::Sat(m) => m,
            other => panic!("expected a model, got {other:?}"),
        }
    }

    #[test]
    fn arithmetic_matches_integers() {
        for a in 0u32..12 {
            for b in 0u32..12 {
                let mut c = Circuit::new();
                let x = c.bv_fresh(4);
                let y = c.bv_fresh(4);
                let ka = c.bv_const(&BigUint::from(a));
                let kb = c.bv_const(&BigUint::from(b));
                for (v, k) in [(&x, &ka), (&y, &kb)] {
                    let ge = c.bv_ge(v, k);
                    let le = c.bv_ge(k, v);
                    let eq = c.and(ge, le);
                    c.assert(eq);
                }
                let s = c.bv_add(&x, &y);
                let p = c.bv_mul(&x, &y);
                let mx = c.bv_max(&x, &y);
                let gt = c.bv_gt(&x, &y);
                let m = model_of(&c);
                assert_eq!(c.eval_bv(&s, &m), BigUint::from(a + b));
                assert_eq!(c.eval_bv(&p, &m), BigUint::from(a * b));
                assert_eq!(c.eval_bv(&mx, &m), BigUint::from(a.max(b)));
                assert_eq!(c.eval(gt, &m), a > b);
            }
        }
    }

    #[test]
    fn constant_folding_creates_no_clauses() {
        let mut c = Circuit::new();
        let a = c.bv_const(&BigUint::from(5u32));
        let b = c.bv_const(&BigUint::from(3u32));
        let before = c.cnf().clauses.len();
        let s = c.bv_add(&a, &b);
        let g = c.bv_gt(&a, &b);
        assert_eq!(c.cnf().clauses.len(), before);
        assert_eq!(c.const_value(g), Some(true));
        assert_eq!(s.0.iter().map(|&l| c.const_value(l).unwrap()).collect::<Vec<_>>(), vec![false, false, false, true]);
    }
}

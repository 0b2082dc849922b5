//! Natural and arctic (max-plus) semirings, matrices and vectors over them.
//!
//! Operations take the semiring as an explicit context so the same matrix
//! code runs on concrete values and on symbolic bit-vector encodings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Nat = BigUint;

/// `MinusInf` is the additive zero and absorbs under `+`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Arctic {
    MinusInf,
    Finite(BigUint),
}

impl Arctic {
    pub fn fin(n: u64) -> Arctic {
        Arctic::Finite(BigUint::from(n))
    }

    pub fn is_minus_inf(&self) -> bool {
        matches!(self, Arctic::MinusInf)
    }
}

impl PartialOrd for Arctic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arctic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Arctic::MinusInf, Arctic::MinusInf) => Ordering::Equal,
            (Arctic::MinusInf, _) => Ordering::Less,
            (_, Arctic::MinusInf) => Ordering::Greater,
            (Arctic::Finite(a), Arctic::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Arctic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arctic::MinusInf => f.write_str("-inf"),
            Arctic::Finite(n) => write!(f, "{n}"),
        }
    }
}

pub trait Semiring {
    type Elem: Clone;
    fn zero(&mut self) -> Self::Elem;
    fn one(&mut self) -> Self::Elem;
    fn add(&mut self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&mut self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

#[derive(Default, Clone, Copy, Debug)]
pub struct Natural;

impl Semiring for Natural {
    type Elem = Nat;
    fn zero(&mut self) -> Nat {
        Nat::zero()
    }
    fn one(&mut self) -> Nat {
        Nat::one()
    }
    fn add(&mut self, a: &Nat, b: &Nat) -> Nat {
        a + b
    }
    fn mul(&mut self, a: &Nat, b: &Nat) -> Nat {
        a * b
    }
}

#[derive(Default, Clone, Copy, Debug)]
pub struct MaxPlus;

impl Semiring for MaxPlus {
    type Elem = Arctic;
    fn zero(&mut self) -> Arctic {
        Arctic::MinusInf
    }
    fn one(&mut self) -> Arctic {
        Arctic::fin(0)
    }
    fn add(&mut self, a: &Arctic, b: &Arctic) -> Arctic {
        a.max(b).clone()
    }
    fn mul(&mut self, a: &Arctic, b: &Arctic) -> Arctic {
        match (a, b) {
            (Arctic::Finite(x), Arctic::Finite(y)) => Arctic::Finite(x + y),
            _ => Arctic::MinusInf,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ValueKind {
    Natural,
    Arctic,
}

/// A concrete coefficient domain with its orders.
pub trait Value: Clone + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ring: Semiring<Elem = Self> + Default;
    const KIND: ValueKind;
    fn weak_ge(&self, other: &Self) -> bool;
    /// `None` where the domain has no strict entrywise order in use.
    fn strict_gt(&self, other: &Self) -> Option<bool>;
    fn as_natural(&self) -> Option<&Nat>;
    fn is_minus_inf(&self) -> bool;
}

impl Value for Nat {
    type Ring = Natural;
    const KIND: ValueKind = ValueKind::Natural;
    fn weak_ge(&self, other: &Self) -> bool {
        self >= other
    }
    fn strict_gt(&self, _other: &Self) -> Option<bool> {
        None
    }
    fn as_natural(&self) -> Option<&Nat> {
        Some(self)
    }
    fn is_minus_inf(&self) -> bool {
        false
    }
}

impl Value for Arctic {
    type Ring = MaxPlus;
    const KIND: ValueKind = ValueKind::Arctic;
    /// `x ≥ y` or `y = −∞`.
    fn weak_ge(&self, other: &Self) -> bool {
        other.is_minus_inf() || self >= other
    }
    /// `x > y`, or `y = −∞` (so `−∞ > −∞` holds).
    fn strict_gt(&self, other: &Self) -> Option<bool> {
        Some(other.is_minus_inf() || self > other)
    }
    fn as_natural(&self) -> Option<&Nat> {
        match self {
            Arctic::Finite(n) => Some(n),
            Arctic::MinusInf => None,
        }
    }
    fn is_minus_inf(&self) -> bool {
        Arctic::is_minus_inf(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("strict pointwise comparison is only defined for arctic values")]
    StrictOnNatural,
}

/// Row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(<[T]>::to_vec).take(self.rows).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn zero_in<R: Semiring<Elem = T>>(ring: &mut R, rows: usize, cols: usize) -> Self {
        let z = ring.zero();
        Self::filled(rows, cols, z)
    }

    pub fn identity_in<R: Semiring<Elem = T>>(ring: &mut R, d: usize) -> Self {
        let mut m = Self::zero_in(ring, d, d);
        for i in 0..d {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn mul_in<R: Semiring<Elem = T>>(&self, ring: &mut R, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let p = ring.mul(self.get(i, k), other.get(k, j));
                    acc = ring.add(&acc, &p);
                }
                data.push(acc);
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn add_in<R: Semiring<Elem = T>>(&self, ring: &mut R, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul_vec_in<R: Semiring<Elem = T>>(&self, ring: &mut R, v: &Vector<T>) -> Result<Vector<T>, LinalgError> {
        if self.cols != v.0.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.0.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                let p = ring.mul(self.get(i, k), &v.0[k]);
                acc = ring.add(&acc, &p);
            }
            out.push(acc);
        }
        Ok(Vector(out))
    }
}

impl<T: Clone> Vector<T> {
    pub fn zero_in<R: Semiring<Elem = T>>(ring: &mut R, d: usize) -> Self {
        let z = ring.zero();
        Vector(vec![z; d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_in<R: Semiring<Elem = T>>(&self, ring: &mut R, other: &Self) -> Result<Self, LinalgError> {
        if self.len() != other.len() {
            return Err(LinalgError::DimensionMismatch("vector sum".into()));
        }
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| ring.add(a, b)).collect()))
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Vector<U> {
        Vector(self.0.iter().map(f).collect())
    }
}

pub fn mat_mul<V: Value>(a: &Matrix<V>, b: &Matrix<V>) -> Result<Matrix<V>, LinalgError> {
    a.mul_in(&mut V::Ring::default(), b)
}

pub fn mat_vec<V: Value>(a: &Matrix<V>, v: &Vector<V>) -> Result<Vector<V>, LinalgError> {
    a.mul_vec_in(&mut V::Ring::default(), v)
}

pub fn identity<V: Value>(d: usize) -> Matrix<V> {
    Matrix::identity_in(&mut V::Ring::default(), d)
}

pub fn zero_matrix<V: Value>(d: usize) -> Matrix<V> {
    Matrix::zero_in(&mut V::Ring::default(), d, d)
}

pub fn zero_vector<V: Value>(d: usize) -> Vector<V> {
    Vector::zero_in(&mut V::Ring::default(), d)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CompareMode {
    WeakPointwise,
    StrictArcticPointwise,
}

fn compare_entries<V: Value>(a: &[V], b: &[V], mode: CompareMode) -> Result<bool, LinalgError> {
    match mode {
        CompareMode::WeakPointwise => Ok(a.iter().zip(b).all(|(x, y)| x.weak_ge(y))),
        CompareMode::StrictArcticPointwise => {
            if V::KIND != ValueKind::Arctic {
                return Err(LinalgError::StrictOnNatural);
            }
            Ok(a.iter().zip(b).all(|(x, y)| x.strict_gt(y) == Some(true)))
        }
    }
}

pub fn compare_matrices<V: Value>(a: &Matrix<V>, b: &Matrix<V>, mode: CompareMode) -> Result<bool, LinalgError> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(LinalgError::DimensionMismatch("comparison of matrices".into()));
    }
    compare_entries(&a.data, &b.data, mode)
}

pub fn compare_vectors<V: Value>(a: &Vector<V>, b: &Vector<V>, mode: CompareMode) -> Result<bool, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::DimensionMismatch("comparison of vectors".into()));
    }
    compare_entries(&a.0, &b.0, mode)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    /// Square, diagonal entries at most 1, zero below the diagonal.
    UpperTriangular,
    /// Entry (1,1) at least 1.
    FirstEntryPositive,
    /// Entry (1,1) different from −∞.
    ArcticFiniteTopLeft,
}

pub fn shape_check<V: Value>(m: &Matrix<V>, shape: Shape) -> bool {
    if m.rows == 0 || m.cols == 0 {
        return false;
    }
    match shape {
        Shape::UpperTriangular => {
            if !m.is_square() || V::KIND != ValueKind::Natural {
                return false;
            }
            (0..m.rows).all(|i| {
                (0..m.cols).all(|j| {
                    let v = m.get(i, j).as_natural().expect("natural entry");
                    match i.cmp(&j) {
                        Ordering::Greater => v.is_zero(),
                        Ordering::Equal => *v <= Nat::one(),
                        Ordering::Less => true,
                    }
                })
            })
        }
        Shape::FirstEntryPositive => m.get(0, 0).as_natural().is_some_and(|v| !v.is_zero()),
        Shape::ArcticFiniteTopLeft => !m.get(0, 0).is_minus_inf(),
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Builds a natural matrix from small literals.
pub fn nat_matrix(rows: &[&[u64]]) -> Matrix<Nat> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Nat::from(v)).collect()).collect())
}

pub fn nat_vector(v: &[u64]) -> Vector<Nat> {
    Vector(v.iter().map(|&x| Nat::from(x)).collect())
}

/// Builds an arctic matrix; `None` stands for −∞.
pub fn arctic_matrix(rows: &[&[Option<u64>]]) -> Matrix<Arctic> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| v.map_or(Arctic::MinusInf, Arctic::fin)).collect())
            .collect(),
    )
}

pub fn arctic_vector(v: &[Option<u64>]) -> Vector<Arctic> {
    Vector(v.iter().map(|x| x.map_or(Arctic::MinusInf, Arctic::fin)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEG: Option<u64> = None;

    #[test]
    fn arctic_square() {
        let f = arctic_matrix(&[&[Some(1), Some(3)], &[Some(0), Some(3)]]);
        let ff = mat_mul(&f, &f).unwrap();
        assert_eq!(ff, arctic_matrix(&[&[Some(3), Some(6)], &[Some(3), Some(6)]]));
        let id = identity::<Arctic>(2);
        assert_eq!(id, arctic_matrix(&[&[Some(0), NEG], &[NEG, Some(0)]]));
        assert_eq!(mat_mul(&f, &id).unwrap(), f);
    }

    #[test]
    fn natural_identity() {
        let a = nat_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(mat_mul(&identity(2), &a).unwrap(), a);
        let b = nat_matrix(&[&[1, 2, 3]]);
        assert!(matches!(mat_mul(&a, &b), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn comparisons() {
        let a = arctic_matrix(&[&[Some(3), Some(6)], &[Some(3), Some(6)]]);
        let b = arctic_matrix(&[&[Some(2), Some(5)], &[Some(1), Some(4)]]);
        assert_eq!(compare_matrices(&a, &b, CompareMode::StrictArcticPointwise), Ok(true));
        let m = arctic_matrix(&[&[NEG]]);
        assert_eq!(compare_matrices(&m, &m, CompareMode::StrictArcticPointwise), Ok(true));
        let x = nat_matrix(&[&[1, 0]]);
        let y = nat_matrix(&[&[1, 1]]);
        assert_eq!(compare_matrices(&x, &y, CompareMode::WeakPointwise), Ok(false));
        assert_eq!(
            compare_matrices(&x, &y, CompareMode::StrictArcticPointwise),
            Err(LinalgError::StrictOnNatural)
        );
    }

    #[test]
    fn shapes() {
        assert!(shape_check(&nat_matrix(&[&[1, 1], &[0, 1]]), Shape::UpperTriangular));
        assert!(!shape_check(&nat_matrix(&[&[1, 0], &[1, 1]]), Shape::UpperTriangular));
        assert!(!shape_check(&nat_matrix(&[&[2, 0], &[0, 1]]), Shape::UpperTriangular));
        let g = arctic_matrix(&[&[Some(0), Some(1)], &[NEG, NEG]]);
        assert!(shape_check(&g, Shape::ArcticFiniteTopLeft));
        assert!(!shape_check(&nat_matrix(&[&[0]]), Shape::FirstEntryPositive));
    }
}

//! Exact matrices over ℚ and prime fields.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field. Every matrix in one computation shares one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Input(alloc::format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::F(v.rem_euclid(p as i64) as u32, p),
        }
    }

    /// Parses `3`, `-2`, `1/2`. Over F_p a fraction is read as a quotient of residues.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Input(alloc::format!("bad field element `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Q(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let red = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    u32::try_from(r).unwrap_or(0)
                };
                let d = Scalar::F(red(&den), p);
                let inv = d.inv().ok_or_else(bad)?;
                Ok(Scalar::F(red(&num), p).mul(&inv))
            }
        }
    }

    /// All elements, for finite fields.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..p).map(|v| Scalar::F(v, p)).collect()),
        }
    }

    pub fn size(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(p as u64),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// A field element. `F(v, p)` is the residue `v` modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F(u32, u32),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::F(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::F(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::F(_, p) => FieldSpec::Prime(*p),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::F(a, p), Scalar::F(b, _)) => {
                Scalar::F(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::F(a, p), Scalar::F(b, _)) => {
                Scalar::F(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::F(0, p) => Scalar::F(0, *p),
            Scalar::F(a, p) => Scalar::F(p - a, *p),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(a) => Some(Scalar::Q(a.recip())),
            Scalar::F(a, p) => {
                let (p64, mut base, mut e, mut acc) = (*p as u64, *a as u64, *p as u64 - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p64;
                    }
                    base = base * base % p64;
                    e >>= 1;
                }
                Some(Scalar::F(acc as u32, *p))
            }
        }
    }

    /// Rational height `max(|num|, |den|)`; residues report themselves.
    pub fn height(&self) -> BigInt {
        match self {
            Scalar::Q(q) => q.numer().abs().max(q.denom().abs()),
            Scalar::F(v, _) => BigInt::from(*v),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::F(v, _) => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}
impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}
impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Dense row-major matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols, "entry count");
        Matrix { rows, cols, field, data: vals.iter().map(|&v| field.from_i64(v)).collect() }
    }

    pub fn from_scalars(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(Error::Input("entry from another field".into()));
        }
        Ok(Matrix { rows, cols, field, data })
    }

    /// Column vector.
    pub fn column(field: FieldSpec, entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        Matrix { rows: n, cols: 1, field, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j { v.is_one() } else { v.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        self.with_data(data)
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Matrix {
        self.with_data(self.data.iter().map(Scalar::neg).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.with_data(self.data.iter().map(|a| a.mul(c)).collect())
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horizontal concatenation; all parts share the row count `rows`.
    pub fn hstack(field: FieldSpec, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack rows");
            out.put(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(field: FieldSpec, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack cols");
            out.put(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn block_diag(field: FieldSpec, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.put(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    /// Writes `m` into `self` with top-left corner at `(r, c)`.
    pub fn put(&mut self, r: usize, c: usize, m: &Matrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r + i, c + j, m.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r + i, c + j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Row-major flattening into a column vector.
    pub fn flatten(&self) -> Matrix {
        Matrix::column(self.field, self.data.clone())
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Matrix {
        assert_eq!(rows * cols, self.data.len(), "reshape size");
        Matrix { rows, cols, field: self.field, data: self.data.clone() }
    }

    /// Reduced row echelon form; the pivot in each column is the first nonzero row at or below the current one.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the null space.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, self.field.one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, reduced.get(row, f).neg());
            }
        }
        k
    }

    /// Rows form a basis of the left null space `{y : y·self = 0}`.
    pub fn left_kernel_basis(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    /// The pivot columns of `self`, which form a basis of its column space.
    pub fn column_space(&self) -> Matrix {
        let r = self.rref();
        self.select_cols(&r.pivots)
    }

    /// Some `x` with `self·x = b`, or `None` when `b` leaves the column space.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != b.rows {
            return Err(Error::Dimension(alloc::format!(
                "solve: {} rows against {} rows",
                self.rows, b.rows
            )));
        }
        let aug = Matrix::hstack(self.field, self.rows, &[self, b]);
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, reduced.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// `solve` together with `kernel_basis(self)`, describing the full solution set.
    pub fn solve_affine(&self, b: &Matrix) -> Result<(Option<Matrix>, Matrix)> {
        Ok((self.solve(b)?, self.kernel_basis()))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows)).ok()??;
        if self.rank() == self.rows { Some(x) } else { None }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        self.rows == self.cols && self.pow(self.rows).is_zero()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Whether the columns of `other` lie in the column space of `self`.
    pub fn spans(&self, other: &Matrix) -> bool {
        if other.cols == 0 {
            return true;
        }
        matches!(self.solve(other), Ok(Some(_)))
    }

    pub fn to_rows_string(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rref_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = Matrix::identity(f5, 2).rref();
        assert_eq!((r.pivots.clone(), r.rank), (vec![0, 1], 2));
        assert!(r.reduced.is_identity());

        let z = Matrix::zeros(q(), 3, 4).rref();
        assert_eq!((z.pivots.len(), z.rank), (0, 0));
        assert!(z.reduced.is_zero());

        let m = Matrix::from_i64(q(), 2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(m.rank, 1);
        assert_eq!(m.pivots, vec![0]);
        assert_eq!(m.reduced, Matrix::from_i64(q(), 2, 2, &[1, 2, 0, 0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(q(), 2).kernel_basis().cols(), 0);
        assert!(Matrix::zeros(q(), 2, 3).kernel_basis().is_identity());
        let m = Matrix::from_i64(q(), 1, 2, &[1, 2]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k, Matrix::from_i64(q(), 2, 1, &[-2, 1]));
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(q(), 2, 1, &[3, -1]);
        assert_eq!(Matrix::identity(q(), 2).solve(&b).unwrap(), Some(b.clone()));
        let a = Matrix::from_i64(q(), 2, 1, &[1, 0]);
        assert_eq!(a.solve(&Matrix::from_i64(q(), 2, 1, &[0, 1])).unwrap(), None);
        let x = Matrix::from_i64(q(), 1, 1, &[2]).solve(&Matrix::from_i64(q(), 1, 1, &[1])).unwrap().unwrap();
        assert_eq!(x.get(0, 0), &q().parse("1/2").unwrap());
        assert!(Matrix::identity(q(), 2).solve(&Matrix::zeros(q(), 3, 1)).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(FieldSpec::prime(8).is_err());
        let three = f7.from_i64(3);
        assert_eq!(three.inv().unwrap().mul(&three), f7.one());
        assert_eq!(f7.parse("1/3").unwrap(), f7.from_i64(5));
        assert_eq!(f7.from_i64(-1), f7.from_i64(6));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(q(), 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_i64(q(), 2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }
}

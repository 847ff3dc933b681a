//! Exact dense linear algebra over the rationals or a prime field.
//!
//! Entries are stored as `BigRational`. Under `FieldConfig::Prime(p)` every
//! stored value is an integer in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("value {value} is not defined in characteristic {p}")]
    Characteristic { value: String, p: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse field {0:?}, expected q or fp:<P>")]
    ParseField(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FieldConfig {
    #[default]
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rationals => write!(f, "q"),
            FieldConfig::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldConfig {
    type Err = LinalgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldConfig::Rationals);
        }
        let p = s
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| LinalgError::ParseField(s.to_string()))?;
        FieldConfig::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn parse_scalar(s: &str) -> Result<Scalar, LinalgError> {
    let err = || LinalgError::ParseScalar(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| err())?;
            let b: BigInt = b.trim().parse().map_err(|_| err())?;
            if b.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| err())?)),
    }
}

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

impl FieldConfig {
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldConfig::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldConfig::Rationals => 0,
            FieldConfig::Prime(p) => *p,
        }
    }

    fn modp(v: &BigInt, p: u64) -> BigInt {
        v.mod_floor(&BigInt::from(p))
    }

    fn inv_mod(v: &BigInt, p: u64) -> Option<BigInt> {
        let pb = BigInt::from(p);
        let e = v.extended_gcd(&pb);
        if e.gcd.is_one() {
            Some(e.x.mod_floor(&pb))
        } else {
            None
        }
    }

    /// Brings a rational constant into the field.
    pub fn embed(&self, v: &Scalar) -> Result<Scalar, LinalgError> {
        match *self {
            FieldConfig::Rationals => Ok(v.clone()),
            FieldConfig::Prime(p) => {
                let num = Self::modp(v.numer(), p);
                let den = Self::modp(v.denom(), p);
                let inv =
                    Self::inv_mod(&den, p).ok_or_else(|| LinalgError::Characteristic { value: v.to_string(), p })?;
                Ok(BigRational::from_integer(Self::modp(&(num * inv), p)))
            }
        }
    }

    fn reduce(&self, v: Scalar) -> Scalar {
        match *self {
            FieldConfig::Rationals => v,
            FieldConfig::Prime(p) => BigRational::from_integer(Self::modp(&v.to_integer(), p)),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match *self {
            FieldConfig::Rationals => a.recip(),
            FieldConfig::Prime(p) => {
                BigRational::from_integer(Self::inv_mod(&a.to_integer(), p).expect("nonzero element"))
            }
        }
    }

    /// Small integer as a field element.
    pub fn int(&self, v: i64) -> Scalar {
        self.reduce(int(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape(format!("expected {rows}x{cols} entries")));
        }
        Ok(Matrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    /// Integer literal rows; the shape is taken from the data.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged integer matrix");
        Matrix { rows: r, cols: c, data: rows.iter().flat_map(|x| x.iter().map(|&v| int(v))).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Re-reads every entry through `field`.
    pub fn embed(&self, field: &FieldConfig) -> Result<Matrix, LinalgError> {
        let data = self.data.iter().map(|v| field.embed(v)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, field: &FieldConfig) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = field.add(out.get(r, c), &field.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix, field: &FieldConfig) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| field.add(a, b))
    }

    pub fn sub(&self, other: &Matrix, field: &FieldConfig) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| field.sub(a, b))
    }

    pub fn scale(&self, s: &Scalar, field: &FieldConfig) -> Matrix {
        let data = self.data.iter().map(|v| field.mul(v, s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: &FieldConfig) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = field.inv(m.get(row, col));
            for c in col..m.cols {
                let v = field.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &FieldConfig) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self, field: &FieldConfig) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar], field: &FieldConfig) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let (red, pivots) = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols).clone();
        }
        Some(x)
    }
}

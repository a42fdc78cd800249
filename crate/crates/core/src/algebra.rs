//! Exact arithmetic over an odd prime field and dense matrices/vectors on top of it.
//!
//! Elements are stored as raw `u64` residues inside [`Matrix`] and [`Vector`]; the owning
//! [`PrimeField`] performs the arithmetic. [`FieldElement`] is the standalone scalar handed
//! across the public API.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors in increasing order, by trial division.
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The field of integers modulo an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            field: *self,
        }
    }

    pub fn from_i64(&self, value: i64) -> FieldElement {
        self.elem(value.rem_euclid(self.p as i64) as u64)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub(crate) fn pow(&self, a: u64, exp: u64) -> u64 {
        pow_mod(a, exp, self.p)
    }

    pub(crate) fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::ZeroInverse);
        }
        Ok(pow_mod(a, self.p - 2, self.p))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.elem(rng.gen_range(0..self.p))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.elem(rng.gen_range(1..self.p))
    }

    /// Smallest generator of the multiplicative group.
    pub fn generator(&self) -> FieldElement {
        let order = self.p - 1;
        let factors = prime_factors(order);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .map(|g| self.elem(g))
            .unwrap_or_else(|| self.one())
    }

    /// All solutions of `x^m = 1`, listed as `1, z, z^2, ...` with `z = g^((p-1)/m)` for the
    /// smallest generator `g`.
    pub fn roots_of_unity(&self, m: u64) -> Result<Vec<FieldElement>> {
        let order = self.p - 1;
        if m == 0 || !order.is_multiple_of(m) {
            return Err(Error::OrderMismatch { m, order });
        }
        let z = self.pow(self.generator().value, order / m);
        let mut out = Vec::with_capacity(m as usize);
        let mut x = 1;
        for _ in 0..m {
            out.push(self.elem(x));
            x = self.mul(x, z);
        }
        Ok(out)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue in `[0, p)` tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.field.elem(self.field.pow(self.value, exp))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, rhs.field);
        self.field.elem(self.field.add(self.value, rhs.value))
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, rhs.field);
        self.field.elem(self.field.sub(self.value, rhs.value))
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, rhs.field);
        self.field.elem(self.field.mul(self.value, rhs.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.elem(self.field.neg(self.value))
    }
}

/// Inverse of a nonzero field element.
pub fn field_inv(x: FieldElement) -> Result<FieldElement> {
    x.inv()
}

/// A column vector over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: PrimeField,
    data: Vec<u64>,
}

impl Vector {
    /// Builds a vector, reducing every entry modulo `p`.
    pub fn new(field: PrimeField, entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimMismatch("vector must have positive dimension".into()));
        }
        let data = entries.into_iter().map(|x| x % field.p).collect();
        Ok(Vector { field, data })
    }

    pub fn from_i64(field: PrimeField, entries: &[i64]) -> Result<Self> {
        Self::new(field, entries.iter().map(|&x| field.from_i64(x).value).collect())
    }

    pub fn zeros(field: PrimeField, dim: usize) -> Self {
        Vector {
            field,
            data: vec![0; dim],
        }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, dim: usize, rng: &mut R) -> Self {
        Vector {
            field,
            data: (0..dim).map(|_| rng.gen_range(0..field.p)).collect(),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(field: PrimeField, dim: usize, rng: &mut R) -> Self {
        loop {
            let v = Self::random(field, dim, rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.field.elem(self.data[i])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, c: FieldElement) -> Vector {
        let f = self.field;
        Vector {
            field: f,
            data: self.data.iter().map(|&x| f.mul(x, c.value)).collect(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, reducing each modulo `p`.
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimMismatch("matrix must have positive dimensions".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let data = entries.into_iter().map(|x| x % field.p).collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from signed rows; entries are reduced into `[0, p)`.
    pub fn from_rows(field: PrimeField, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| field.from_i64(x).value))
            .collect();
        Self::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(0..field.p)).collect(),
        }
    }

    /// Rejection-samples an invertible `n x n` matrix.
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
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

    /// Row-major entries.
    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.elem(self.data[r * self.cols + c])
    }

    #[inline]
    pub(crate) fn raw(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        debug_assert_eq!(x.field, self.field);
        self.data[r * self.cols + c] = x.value;
    }

    pub(crate) fn set_raw(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.field.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.raw(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.raw(k, c)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.field != v.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != v.dim() {
            return Err(Error::DimMismatch(format!(
                "cannot apply {}x{} matrix to vector of dimension {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let f = self.field;
        let data = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(&v.data)
                    .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect();
        Ok(Vector { field: f, data })
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Gaussian elimination, pivoting on the first nonzero entry of each column.
    pub fn det(&self) -> Result<FieldElement> {
        self.require_square()?;
        let f = self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return Ok(f.zero());
            };
            if piv != col {
                for c in 0..n {
                    m.swap(piv * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv)?;
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    m[r * n + c] = f.sub(m[r * n + c], f.mul(factor, m[col * n + c]));
                }
            }
        }
        Ok(f.elem(det))
    }

    pub fn is_invertible(&self) -> bool {
        self.det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// Inverse by Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let f = self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.raw(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(f, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&aug.data[r * 2 * n + n..(r + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Reduces to reduced row echelon form using only the first `limit` columns as pivot
    /// candidates. Returns the pivot columns in order.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..limit.min(cols) {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + col] != 0) else {
                continue;
            };
            if piv != r {
                for c in 0..cols {
                    self.data.swap(piv * cols + c, r * cols + c);
                }
            }
            let pinv = f.inv(self.data[r * cols + col]).expect("pivot is nonzero");
            for c in col..cols {
                self.data[r * cols + c] = f.mul(self.data[r * cols + c], pinv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + col];
                if factor == 0 {
                    continue;
                }
                for c in col..cols {
                    let sub = f.mul(factor, self.data[r * cols + c]);
                    self.data[i * cols + c] = f.sub(self.data[i * cols + c], sub);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel `{x : A x = 0}`.
    ///
    /// The basis vectors, stacked as rows, form a matrix in reduced row echelon form, so each
    /// vector has leading coefficient 1 and the output is independent of elimination order.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = self.field;
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis.data[k * self.cols + fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                basis.data[k * self.cols + pc] = f.neg(reduced.raw(r, fc));
            }
        }
        let (canon, _) = basis.rref();
        (0..canon.rows)
            .map(|r| Vector {
                field: f,
                data: canon.row(r).to_vec(),
            })
            .collect()
    }

    /// Square matrix power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Result<Matrix> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            exp >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.mul(b)
}

pub fn mat_det(a: &Matrix) -> Result<FieldElement> {
    a.det()
}

pub fn mat_inv(a: &Matrix) -> Result<Matrix> {
    a.inverse()
}

pub fn nullspace(a: &Matrix) -> Vec<Vector> {
    a.nullspace()
}

pub fn random_invertible<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Matrix {
    Matrix::random_invertible(field, n, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 21] {
            assert_eq!(PrimeField::new(p), Err(Error::InvalidModulus(p)));
        }
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), naive, "n = {n}");
        }
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn inverses() {
        assert_eq!(field_inv(f(5).elem(1)).unwrap().value(), 1);
        assert_eq!(field_inv(f(5).elem(2)).unwrap().value(), 3);
        assert_eq!(field_inv(f(7).elem(4)).unwrap().value(), 2);
        assert_eq!(field_inv(f(7).zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn roots_of_unity_examples() {
        let vals = |m, p| -> Vec<u64> { f(p).roots_of_unity(m).unwrap().iter().map(|x| x.value()).collect() };
        assert_eq!(vals(1, 5), vec![1]);
        assert_eq!(vals(4, 5), vec![1, 2, 4, 3]);
        assert_eq!(f(5).roots_of_unity(3), Err(Error::OrderMismatch { m: 3, order: 4 }));
        assert!(f(5).roots_of_unity(0).is_err());
    }

    #[test]
    fn roots_of_unity_are_distinct_solutions() {
        for p in [3u64, 5, 7, 11, 13, 31, 97] {
            let field = f(p);
            for m in (1..p).filter(|m| (p - 1) % m == 0) {
                let roots = field.roots_of_unity(m).unwrap();
                assert_eq!(roots.len() as u64, m);
                let mut seen: Vec<u64> = roots.iter().map(|x| x.value()).collect();
                assert!(roots.iter().all(|x| x.pow(m).value() == 1));
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len() as u64, m);
            }
        }
    }

    #[test]
    fn mat_mul_examples() {
        let f5 = f(5);
        let a = Matrix::from_rows(f5, &[&[1, 4], &[0, 1]]).unwrap();
        let b = Matrix::from_rows(f5, &[&[0, 1], &[1, 1]]).unwrap();
        let expected = Matrix::from_rows(f5, &[&[4, 0], &[1, 1]]).unwrap();
        assert_eq!(mat_mul(&a, &b).unwrap(), expected);
        assert_eq!(mat_mul(&Matrix::identity(f5, 2), &b).unwrap(), b);

        let wide = Matrix::zeros(f5, 2, 3);
        assert!(matches!(mat_mul(&wide, &a), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn det_examples() {
        let f5 = f(5);
        assert_eq!(mat_det(&Matrix::identity(f5, 3)).unwrap().value(), 1);
        let m = Matrix::from_rows(f5, &[&[2, 1], &[1, 1]]).unwrap();
        assert_eq!(mat_det(&m).unwrap().value(), 1);
        let s = Matrix::from_rows(f5, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(mat_det(&s).unwrap().value(), 0);
        assert_eq!(
            mat_det(&Matrix::zeros(f5, 2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn det_needs_row_swap() {
        let f7 = f(7);
        let m = Matrix::from_rows(f7, &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(m.det().unwrap(), f7.from_i64(-1));
    }

    #[test]
    fn inverse_examples() {
        let f5 = f(5);
        assert_eq!(mat_inv(&Matrix::identity(f5, 3)).unwrap(), Matrix::identity(f5, 3));
        let m = Matrix::from_rows(f5, &[&[1, 1], &[0, 1]]).unwrap();
        let expected = Matrix::from_rows(f5, &[&[1, 4], &[0, 1]]).unwrap();
        assert_eq!(mat_inv(&m).unwrap(), expected);
        let s = Matrix::from_rows(f5, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(mat_inv(&s), Err(Error::Singular));
    }

    #[test]
    fn nullspace_examples() {
        let f5 = f(5);
        assert_eq!(nullspace(&Matrix::zeros(f5, 2, 2)).len(), 2);
        let row = Matrix::from_rows(f5, &[&[1, 4]]).unwrap();
        assert_eq!(nullspace(&row), vec![Vector::new(f5, vec![1, 1]).unwrap()]);
        assert!(nullspace(&Matrix::identity(f5, 3)).is_empty());
    }

    #[test]
    fn random_invertible_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f3 = f(3);
        for _ in 0..20 {
            let m = random_invertible(1, f3, &mut rng);
            assert!(m.entries() == [1] || m.entries() == [2]);
        }
        let f13 = f(13);
        for _ in 0..100 {
            assert!(!random_invertible(4, f13, &mut rng).det().unwrap().is_zero());
        }
        let a = random_invertible(3, f13, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_invertible(3, f13, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..120 {
            let field = f([5, 7, 13][trial % 3]);
            let n = 1 + trial % 4;
            let a = Matrix::random(field, n, n, &mut rng);
            let b = Matrix::random(field, n, n, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![3u64, 5, 7, 13]), 1usize..5, 1usize..6).prop_flat_map(|(p, rows, cols)| {
            prop::collection::vec(0..p, rows * cols).prop_map(move |data| Matrix::new(f(p), rows, cols, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_independent_kernel_elements(a in arb_matrix()) {
            let basis = a.nullspace();
            prop_assert_eq!(basis.len() + a.rank(), a.cols());
            for x in &basis {
                prop_assert!(a.mul_vec(x).unwrap().is_zero());
            }
            if !basis.is_empty() {
                let data = basis.iter().flat_map(|v| v.entries().to_vec()).collect();
                let stacked = Matrix::new(a.field(), basis.len(), a.cols(), data).unwrap();
                prop_assert_eq!(stacked.rank(), basis.len());
            }
        }

        #[test]
        fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..6) {
            let field = f(11);
            let a = random_invertible(n, field, &mut ChaCha8Rng::seed_from_u64(seed));
            let inv = a.inverse().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(field, n));
            prop_assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(field, n));
        }
    }
}

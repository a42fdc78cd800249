//! Sparse multivariate polynomials over a prime field, keyed by exponent vector.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FieldElement, Matrix, PrimeField, Vector};
use crate::error::{Error, Result};

/// Exponent vector of a monomial; entry `i` is the power of variable `x_{i+1}`.
pub type Exponent = Vec<u32>;

/// A polynomial stored as a map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Exponent, u64>,
}

impl SparsePoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        SparsePoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c.value());
        p
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn monomial(field: PrimeField, exponent: Exponent, c: FieldElement) -> Self {
        let mut p = Self::zero(field, exponent.len());
        p.add_term(exponent, c.value());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, u64)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimMismatch(format!(
                    "exponent of length {} in a polynomial with {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(e, c % field.modulus());
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let s = f.add(*slot.get(), c);
                if s == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, FieldElement)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, self.field.elem(c)))
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.field.elem(self.terms.get(e).copied().unwrap_or(0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(-self.field.one())
    }

    pub fn scale(&self, c: FieldElement) -> SparsePoly {
        let f = self.field;
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(e, &x)| (e.clone(), f.mul(x, c.value())))
                .collect()
        };
        SparsePoly {
            field: f,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = SparsePoly::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.field, self.nvars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Evaluates at a point given as raw residues.
    pub fn eval_raw(&self, point: &[u64]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "point of dimension {} for a polynomial in {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = self.field;
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(t, f.pow(x, k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        Ok(f.elem(acc))
    }

    pub fn eval(&self, v: &Vector) -> Result<FieldElement> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.eval_raw(v.entries())
    }

    /// Substitutes `images[i]` for variable `x_{i+1}`. All images must share a ring, which
    /// becomes the ring of the result.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<SparsePoly> {
        if images.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let Some(first) = images.first() else {
            // no variables: the polynomial is a constant in a 0-variable ring
            return Ok(self.clone());
        };
        for img in images {
            first.check_compatible(img)?;
            if img.field != self.field {
                return Err(Error::FieldMismatch);
            }
        }
        let target_vars = first.nvars;
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, &k) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        // powers[i][k] = images[i]^k
        let powers: Vec<Vec<SparsePoly>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &top)| {
                let mut row = vec![SparsePoly::one(self.field, target_vars)];
                for k in 1..=top as usize {
                    let next = row[k - 1].mul(img).expect("same ring");
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = SparsePoly::zero(self.field, target_vars);
        for (e, &c) in &self.terms {
            let mut t = SparsePoly::constant(self.field, target_vars, self.field.elem(c));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize])?;
                }
            }
            for (te, tc) in t.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// The polynomial `v -> self(h v)`.
    pub fn substitute_linear(&self, h: &Matrix) -> Result<SparsePoly> {
        if !h.is_square() || h.rows() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "{}x{} matrix substituted into a polynomial in {} variables",
                h.rows(),
                h.cols(),
                self.nvars
            )));
        }
        if h.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let images: Vec<SparsePoly> = (0..self.nvars)
            .map(|i| {
                let terms = (0..self.nvars).filter(|&j| h.raw(i, j) != 0).map(|j| {
                    let mut e = vec![0; self.nvars];
                    e[j] = 1;
                    (e, h.raw(i, j))
                });
                SparsePoly::from_terms(self.field, self.nvars, terms).expect("lengths match")
            })
            .collect();
        self.compose(&images)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Exponent, &u64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.0.iter().sum(), b.0.iter().sum());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, &c)) in terms.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{x}", i + 1)
                    }
                })
                .collect();
            match (c, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

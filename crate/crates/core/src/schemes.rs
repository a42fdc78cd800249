//! The three example groups and their representations on the ambient space `F^N`.
//!
//! * `Ex1`: monomial matrices `P * diag(c_1..c_n)` with every `c_i` an `m`-th root of unity,
//!   acting on `F^n`.
//! * `Ex2`: `SL_n` acting on symmetric `n x n` matrices by `v -> s v s^T`, `N = n(n+1)/2`.
//! * `Ex3`: `GL_n` acting diagonally on `2n` copies of `F^n`, `N = 2n^2`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Matrix, PrimeField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Ex1,
    Ex2,
    Ex3,
}

impl SchemeId {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Ex1 => "ex1",
            SchemeId::Ex2 => "ex2",
            SchemeId::Ex3 => "ex3",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(SchemeId::Ex1),
            "ex2" => Ok(SchemeId::Ex2),
            "ex3" => Ok(SchemeId::Ex3),
            other => Err(Error::InvalidParams(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Two partitions `I1 | J1` and `I2 | J2` of the `2n` block indices into halves.
///
/// Indices are stored zero-based and sorted; the textual form is one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partitions {
    pub i1: Vec<usize>,
    pub j1: Vec<usize>,
    pub i2: Vec<usize>,
    pub j2: Vec<usize>,
}

impl Partitions {
    /// `I1 = {1..n}`, `J1 = {n+1..2n}`, `I2 = {1..n-1, n+1}`, `J2 = {n, n+2..2n}` (one-based).
    pub fn default_for(n: usize) -> Self {
        let i1 = (0..n).collect();
        let j1 = (n..2 * n).collect();
        let i2 = (0..n - 1).chain(std::iter::once(n)).collect();
        let j2 = std::iter::once(n - 1).chain(n + 1..2 * n).collect();
        Partitions { i1, j1, i2, j2 }
    }

    pub fn new(
        n: usize,
        mut i1: Vec<usize>,
        mut j1: Vec<usize>,
        mut i2: Vec<usize>,
        mut j2: Vec<usize>,
    ) -> Result<Self> {
        for set in [&mut i1, &mut j1, &mut i2, &mut j2] {
            set.sort_unstable();
        }
        let p = Partitions { i1, j1, i2, j2 };
        p.validate(n)?;
        Ok(p)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (name, set) in [("I1", &self.i1), ("J1", &self.j1), ("I2", &self.i2), ("J2", &self.j2)] {
            if set.len() != n {
                return Err(Error::InvalidParams(format!("{name} must have {n} elements")));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParams(format!("{name} must be strictly increasing")));
            }
            if set.iter().any(|&i| i >= 2 * n) {
                return Err(Error::InvalidParams(format!("{name} has an index above {}", 2 * n)));
            }
        }
        for (a, b) in [(&self.i1, &self.j1), (&self.i2, &self.j2)] {
            let mut all: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            all.sort_unstable();
            if all != (0..2 * n).collect::<Vec<_>>() {
                return Err(Error::InvalidParams("each pair must partition {1..2n}".into()));
            }
        }
        Ok(())
    }

    /// Parses `"I1;J1;I2;J2"` with comma-separated one-based indices, e.g. `"1,2;3,4;1,3;2,4"`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let sets: Vec<Vec<usize>> = spec
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|t| match t.trim().parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(Error::InvalidParams(format!("bad partition index '{t}'"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let [i1, j1, i2, j2]: [Vec<usize>; 4] = sets
            .try_into()
            .map_err(|_| Error::InvalidParams("partition spec needs four ';'-separated sets".into()))?;
        Self::new(n, i1, j1, i2, j2)
    }

    pub fn to_spec(&self) -> String {
        [&self.i1, &self.j1, &self.i2, &self.j2]
            .iter()
            .map(|s| s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Parameters selecting a scheme instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub scheme: SchemeId,
    pub n: usize,
    pub field: PrimeField,
    /// Root-of-unity order, `Ex1` only.
    pub m: Option<u64>,
    /// Block partitions, `Ex3` only.
    pub partitions: Option<Partitions>,
}

impl SchemeParams {
    pub fn ex1(n: usize, p: u64, m: u64) -> Result<Self> {
        let params = SchemeParams {
            scheme: SchemeId::Ex1,
            n,
            field: PrimeField::new(p)?,
            m: Some(m),
            partitions: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn ex2(n: usize, p: u64) -> Result<Self> {
        let params = SchemeParams {
            scheme: SchemeId::Ex2,
            n,
            field: PrimeField::new(p)?,
            m: None,
            partitions: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// `Ex3` with the given partitions, or the default pair when `None`.
    pub fn ex3(n: usize, p: u64, partitions: Option<Partitions>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        let partitions = partitions.unwrap_or_else(|| Partitions::default_for(n));
        let params = SchemeParams {
            scheme: SchemeId::Ex3,
            n,
            field: PrimeField::new(p)?,
            m: None,
            partitions: Some(partitions),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        match self.scheme {
            SchemeId::Ex1 => {
                let m = self.m.ok_or_else(|| Error::InvalidParams("ex1 requires m".into()))?;
                let order = self.field.modulus() - 1;
                if m == 0 || !order.is_multiple_of(m) {
                    return Err(Error::InvalidParams(format!("m = {m} must divide p - 1 = {order}")));
                }
                if self.partitions.is_some() {
                    return Err(Error::InvalidParams("partitions apply to ex3 only".into()));
                }
            }
            SchemeId::Ex2 => {
                if self.m.is_some() || self.partitions.is_some() {
                    return Err(Error::InvalidParams("ex2 takes neither m nor partitions".into()));
                }
            }
            SchemeId::Ex3 => {
                if self.m.is_some() {
                    return Err(Error::InvalidParams("m applies to ex1 only".into()));
                }
                self.partitions
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParams("ex3 requires partitions".into()))?
                    .validate(self.n)?;
            }
        }
        Ok(())
    }

    /// Dimension `N` of the space the group acts on.
    pub fn ambient_dim(&self) -> usize {
        match self.scheme {
            SchemeId::Ex1 => self.n,
            SchemeId::Ex2 => self.n * (self.n + 1) / 2,
            SchemeId::Ex3 => 2 * self.n * self.n,
        }
    }
}

/// Position of the symmetric coordinate `(i, j)`, `i <= j`, in the order
/// `(0,0), (0,1), .., (0,n-1), (1,1), .., (n-1,n-1)`.
pub fn sym_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows before i hold n, n-1, .., n-i+1 coordinates
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Matrix of `v -> s v s^T` on symmetric matrices, in the basis `E_ii`, `E_ij + E_ji` (`i < j`)
/// ordered as in [`sym_index`].
pub fn symmetric_square_rep(s: &Matrix) -> Result<Matrix> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let f = s.field();
    let n = s.rows();
    let dim = n * (n + 1) / 2;
    let mut rep = Matrix::zeros(f, dim, dim);
    for i in 0..n {
        for j in i..n {
            let col = sym_index(i, j, n);
            for r in 0..n {
                for c in r..n {
                    let x = if i == j {
                        f.mul(s.raw(r, i), s.raw(c, i))
                    } else {
                        f.add(f.mul(s.raw(r, i), s.raw(c, j)), f.mul(s.raw(r, j), s.raw(c, i)))
                    };
                    rep.set_raw(sym_index(r, c, n), col, x);
                }
            }
        }
    }
    Ok(rep)
}

/// Block-diagonal matrix with `copies` copies of `m`; block `k` acts on coordinates
/// `k*n .. (k+1)*n`.
pub fn direct_sum_rep(m: &Matrix, copies: usize) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut rep = Matrix::zeros(m.field(), n * copies, n * copies);
    for k in 0..copies {
        for r in 0..n {
            for c in 0..n {
                rep.set_raw(k * n + r, k * n + c, m.raw(r, c));
            }
        }
    }
    Ok(rep)
}

/// Random element of `SL_n` as a product of `3n^2` random transvections `I + t E_ij`.
pub fn sample_special_linear<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Matrix {
    let mut s = Matrix::identity(field, n);
    if n < 2 {
        return s;
    }
    for _ in 0..3 * n * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let t = field.random_nonzero(rng).value();
        // left-multiplying by I + t E_ij adds t * row j to row i
        for c in 0..n {
            let x = field.add(s.raw(i, c), field.mul(t, s.raw(j, c)));
            s.set_raw(i, c, x);
        }
    }
    s
}

/// Random monomial matrix `P * diag(c)` with `c_i` drawn from the `m`-th roots of unity.
fn sample_monomial<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Result<Matrix> {
    let n = params.n;
    let m = params.m.ok_or_else(|| Error::InvalidParams("ex1 requires m".into()))?;
    let roots = params.field.roots_of_unity(m)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut g = Matrix::zeros(params.field, n, n);
    for (j, &row) in perm.iter().enumerate() {
        let c = roots[rng.gen_range(0..roots.len())];
        g.set(row, j, c);
    }
    Ok(g)
}

/// Random element of the scheme's group `G`, in its `N x N` ambient representation.
pub fn sample_group_element<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Result<Matrix> {
    params.validate()?;
    match params.scheme {
        SchemeId::Ex1 => sample_monomial(params, rng),
        SchemeId::Ex2 => symmetric_square_rep(&sample_special_linear(params.n, params.field, rng)),
        SchemeId::Ex3 => {
            let m = Matrix::random_invertible(params.field, params.n, rng);
            direct_sum_rep(&m, 2 * params.n)
        }
    }
}

/// A generating set of the full `Ex1` group: adjacent transpositions plus `diag(z, 1, .., 1)`
/// with `z` a primitive `m`-th root of unity.
pub fn ex1_generators(params: &SchemeParams) -> Result<Vec<Matrix>> {
    if params.scheme != SchemeId::Ex1 {
        return Err(Error::InvalidParams("generating set is only defined for ex1".into()));
    }
    params.validate()?;
    let n = params.n;
    let f = params.field;
    let mut gens = Vec::with_capacity(n);
    for i in 0..n.saturating_sub(1) {
        let mut t = Matrix::identity(f, n);
        t.set_raw(i, i, 0);
        t.set_raw(i + 1, i + 1, 0);
        t.set_raw(i, i + 1, 1);
        t.set_raw(i + 1, i, 1);
        gens.push(t);
    }
    let roots = f.roots_of_unity(params.m.unwrap_or(1))?;
    let mut d = Matrix::identity(f, n);
    d.set(0, 0, roots[roots.len().min(2) - 1]);
    gens.push(d);
    Ok(gens)
}

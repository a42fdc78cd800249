//! Toy-scale cryptanalysis of the invariant scheme.
//!
//! * Invariant recovery: solve the linear system whose unknowns are the coefficients of a
//!   homogeneous degree-`d` polynomial fixed by every public generator.
//! * Conjugation search: assemble the polynomial system `w(b v) = w(b h_i v)` in the entries
//!   of `b` and solve it by exhaustive enumeration.
//! * Vector transporter search: breadth-first search over generator words.
//! * Reynolds averaging over an explicitly enumerated finite group.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::algebra::{Matrix, PrimeField, Vector};
use crate::cryptosystem::{Ciphertext, PublicKey};
use crate::error::{Error, Result};
use crate::invariants::InvariantDescriptor;
use crate::poly::{Exponent, SparsePoly};

/// Largest candidate count `conjugation_bruteforce` will enumerate.
pub const CONJUGATION_SEARCH_LIMIT: u128 = 10_000_000;

/// The degree-`d` monomials in `nvars` variables, lexicographically decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    monomials: Vec<Exponent>,
}

impl MonomialBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn index(&self) -> HashMap<&[u32], usize> {
        self.monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i))
            .collect()
    }
}

pub fn enumerate_monomials(nvars: usize, d: u32) -> MonomialBasis {
    fn rec(prefix: &mut Exponent, remaining: u32, slots: usize, out: &mut Vec<Exponent>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(prefix, remaining - k, slots - 1, out);
            prefix.pop();
        }
    }
    let mut monomials = Vec::new();
    if nvars > 0 {
        rec(&mut Vec::with_capacity(nvars), d, nvars, &mut monomials);
    }
    MonomialBasis {
        nvars,
        degree: d,
        monomials,
    }
}

/// The polynomial `v -> poly(h v)`.
pub fn substitute_linear(poly: &SparsePoly, h: &Matrix) -> Result<SparsePoly> {
    poly.substitute_linear(h)
}

fn check_generators(generators: &[Matrix], field: PrimeField) -> Result<Option<usize>> {
    let Some(first) = generators.first() else {
        return Ok(None);
    };
    let n = first.rows();
    for h in generators {
        if !h.is_square() || h.rows() != n {
            return Err(Error::DimMismatch("generators must be square and of equal size".into()));
        }
        if h.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(Some(n))
}

/// Coefficient matrix of the linear system for degree-`d` invariants.
///
/// Column `j` stands for the candidate monomial `alpha_j`; the row for generator `i` and target
/// monomial `beta` holds the coefficient of `beta` in `alpha_j(h_i v) - alpha_j(v)`. The matrix
/// has `k * C(N+d-1, d)` rows.
pub fn assemble_invariant_system(generators: &[Matrix], d: u32, field: PrimeField) -> Result<Matrix> {
    let nvars = check_generators(generators, field)?
        .ok_or_else(|| Error::InvalidParams("at least one generator is required".into()))?;
    let basis = enumerate_monomials(nvars, d);
    let index = basis.index();
    let size = basis.len();
    let mut system = Matrix::zeros(field, generators.len() * size, size);
    for (gi, h) in generators.iter().enumerate() {
        for (col, alpha) in basis.monomials.iter().enumerate() {
            let mono = SparsePoly::monomial(field, alpha.clone(), field.one());
            let diff = mono.substitute_linear(h)?.sub(&mono)?;
            for (beta, c) in diff.terms() {
                system.set(gi * size + index[beta.as_slice()], col, c);
            }
        }
    }
    Ok(system)
}

/// Basis of the homogeneous degree-`d` polynomials fixed by every generator, as the kernel of
/// [`assemble_invariant_system`].
pub fn invariant_nullspace(generators: &[Matrix], d: u32, field: PrimeField) -> Result<Vec<SparsePoly>> {
    let Some(nvars) = check_generators(generators, field)? else {
        return Err(Error::InvalidParams("at least one generator is required".into()));
    };
    let basis = enumerate_monomials(nvars, d);
    let system = assemble_invariant_system(generators, d, field)?;
    let kernel = system.nullspace();
    kernel
        .iter()
        .map(|coeffs| {
            let terms = basis.monomials.iter().cloned().zip(coeffs.entries().iter().copied());
            SparsePoly::from_terms(field, nvars, terms)
        })
        .collect()
}

/// First basis invariant of degree `d` (in canonical echelon order) taking different values on
/// `v0` and `v1`.
pub fn find_separating_invariant(public: &PublicKey, d: u32) -> Result<SparsePoly> {
    let field = public.params().field;
    for w in invariant_nullspace(public.generators(), d, field)? {
        if w.eval(public.v0())? != w.eval(public.v1())? {
            return Ok(w);
        }
    }
    Err(Error::NoSeparatingInvariant(d))
}

/// Decrypts with any function separating `v0` from `v1` that is constant on orbits.
pub fn decrypt_with_invariant(w: &SparsePoly, public: &PublicKey, ct: &Ciphertext) -> Result<Vec<bool>> {
    ct.check_params(public.params())?;
    let w0 = w.eval(public.v0())?;
    let w1 = w.eval(public.v1())?;
    if w0 == w1 {
        return Err(Error::NoSeparatingInvariant(w.degree().unwrap_or(0)));
    }
    ct.blocks()
        .iter()
        .enumerate()
        .map(|(block, u)| {
            let t = w.eval(u)?;
            if t == w0 {
                Ok(false)
            } else if t == w1 {
                Ok(true)
            } else {
                Err(Error::InvalidCiphertext { block })
            }
        })
        .collect()
}

/// Recovers the plaintext from public data alone via a degree-`d` invariant of the public
/// generators.
pub fn attack_distinguish(public: &PublicKey, ct: &Ciphertext, d: u32) -> Result<Vec<bool>> {
    let w = find_separating_invariant(public, d)?;
    decrypt_with_invariant(&w, public, ct)
}

/// Polynomial equations in the `N^2` entries of an unknown matrix `b` (row-major, variable
/// `r*N + c` is `b[r][c]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    dim: usize,
    equations: Vec<SparsePoly>,
}

impl PolySystem {
    /// Side length `N` of the unknown matrix.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_unknowns(&self) -> usize {
        self.dim * self.dim
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    /// Value of every equation at `b`.
    pub fn residual(&self, b: &Matrix) -> Result<Vec<u64>> {
        if b.rows() != self.dim || b.cols() != self.dim {
            return Err(Error::DimMismatch(format!("expected a {0}x{0} matrix", self.dim)));
        }
        self.equations
            .iter()
            .map(|e| e.eval_raw(b.entries()).map(|x| x.value()))
            .collect()
    }

    pub fn is_satisfied_by(&self, b: &Matrix) -> Result<bool> {
        for e in &self.equations {
            if !e.eval_raw(b.entries())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Assembles `w(b v) - w(b h_i v) = 0` coefficient-wise in `v`: one equation per generator
/// and per degree-`d` monomial in `v`, where `d` is the degree of `w`.
pub fn build_conjugation_system(public: &PublicKey, desc: &InvariantDescriptor) -> Result<PolySystem> {
    let w = desc.polynomial()?;
    let d = w
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidParams("invariant must be homogeneous".into()))?;
    let field = desc.field;
    let n = desc.ambient_dim();
    if public.params().ambient_dim() != n || public.params().field != field {
        return Err(Error::ParamsMismatch("descriptor does not match the public key".into()));
    }
    // joint ring: b entries first (n*n variables), then the n coordinates of v
    let nb = n * n;
    let total = nb + n;
    let bv = |r: usize, c: usize| -> Exponent {
        let mut e = vec![0; total];
        e[r * n + c] += 1;
        e
    };
    let with_v = |mut e: Exponent, j: usize| -> Exponent {
        e[nb + j] += 1;
        e
    };
    // (b v)_i = sum_j b_ij v_j
    let plain: Vec<SparsePoly> = (0..n)
        .map(|i| SparsePoly::from_terms(field, total, (0..n).map(|j| (with_v(bv(i, j), j), 1))))
        .collect::<Result<_>>()?;
    let w_plain = w.compose(&plain)?;
    let basis = enumerate_monomials(n, d);

    let mut equations = Vec::with_capacity(public.generators().len() * basis.len());
    for h in public.generators() {
        // (b h v)_i = sum_j (sum_k b_ik h_kj) v_j
        let moved: Vec<SparsePoly> = (0..n)
            .map(|i| {
                let terms = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).filter_map(|(j, k)| {
                    let c = h.raw(k, j);
                    (c != 0).then(|| (with_v(bv(i, k), j), c))
                });
                SparsePoly::from_terms(field, total, terms)
            })
            .collect::<Result<_>>()?;
        let diff = w_plain.sub(&w.compose(&moved)?)?;
        let mut by_v: HashMap<Vec<u32>, Vec<(Exponent, u64)>> = HashMap::new();
        for (e, c) in diff.terms() {
            by_v.entry(e[nb..].to_vec())
                .or_default()
                .push((e[..nb].to_vec(), c.value()));
        }
        for beta in basis.monomials() {
            let terms = by_v.remove(beta).unwrap_or_default();
            equations.push(SparsePoly::from_terms(field, nb, terms)?);
        }
    }
    Ok(PolySystem { dim: n, equations })
}

/// Every invertible `b` satisfying all equations, by exhaustive enumeration of `F^(N x N)`.
pub fn conjugation_bruteforce(system: &PolySystem, field: PrimeField, dim: usize) -> Result<Vec<Matrix>> {
    if dim != system.dim {
        return Err(Error::DimMismatch(format!(
            "system is for {0}x{0} matrices, not {dim}x{dim}",
            system.dim
        )));
    }
    let p = field.modulus() as u128;
    let cells = (dim * dim) as u32;
    let space = p.checked_pow(cells).unwrap_or(u128::MAX);
    if space > CONJUGATION_SEARCH_LIMIT {
        return Err(Error::SearchSpaceTooLarge(space));
    }
    let mut found = Vec::new();
    let mut entries = vec![0u64; dim * dim];
    for _ in 0..space {
        let b = Matrix::new(field, dim, dim, entries.clone())?;
        if b.is_invertible() && system.is_satisfied_by(&b)? {
            found.push(b);
        }
        // odometer increment, last entry fastest
        for x in entries.iter_mut().rev() {
            *x += 1;
            if (*x as u128) < p {
                break;
            }
            *x = 0;
        }
    }
    Ok(found)
}

/// One letter of a generator word: `h_index` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WordStep {
    pub generator: usize,
    pub inverse: bool,
}

/// A word `s_1 .. s_l` with `s_1 .. s_l v_bit = u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transport {
    pub bit: bool,
    pub word: Vec<WordStep>,
}

/// Breadth-first search for a word of length at most `maxlen` in the generators and their
/// inverses carrying `v0` or `v1` to `u`. States are deduplicated by vector value.
pub fn transporter_bruteforce(public: &PublicKey, u: &Vector, maxlen: usize) -> Result<Option<Transport>> {
    let dim = public.params().ambient_dim();
    if u.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "vector of dimension {}, expected {dim}",
            u.dim()
        )));
    }
    let mut steps: Vec<(WordStep, Matrix)> = Vec::new();
    for (i, h) in public.generators().iter().enumerate() {
        steps.push((
            WordStep {
                generator: i,
                inverse: false,
            },
            h.clone(),
        ));
        steps.push((
            WordStep {
                generator: i,
                inverse: true,
            },
            h.inverse()?,
        ));
    }

    // parent links: state -> (previous state, step taken) ; roots map to their bit
    let mut parent: HashMap<Vector, (Vector, WordStep)> = HashMap::new();
    let mut root: HashMap<Vector, bool> = HashMap::new();
    let mut frontier = VecDeque::new();
    for bit in [false, true] {
        let v = public.plaintext_vector(bit).clone();
        if root.contains_key(&v) {
            continue;
        }
        root.insert(v.clone(), bit);
        frontier.push_back((v, 0usize));
    }

    let rebuild = |mut state: Vector, parent: &HashMap<Vector, (Vector, WordStep)>, root: &HashMap<Vector, bool>| {
        let mut word = Vec::new();
        while let Some((prev, step)) = parent.get(&state) {
            word.push(*step);
            state = prev.clone();
        }
        Transport {
            bit: root[&state],
            word,
        }
    };

    let mut seen: HashSet<Vector> = root.keys().cloned().collect();
    while let Some((state, depth)) = frontier.pop_front() {
        if &state == u {
            return Ok(Some(rebuild(state, &parent, &root)));
        }
        if depth == maxlen {
            continue;
        }
        for (step, m) in &steps {
            let next = m.mul_vec(&state)?;
            if seen.insert(next.clone()) {
                parent.insert(next.clone(), (state.clone(), *step));
                frontier.push_back((next, depth + 1));
            }
        }
    }
    Ok(None)
}

/// Applies a transporter word to a vector: `s_1 .. s_l v`.
pub fn apply_word(public: &PublicKey, word: &[WordStep], v: &Vector) -> Result<Vector> {
    let mut out = v.clone();
    for step in word.iter().rev() {
        let h = public
            .generators()
            .get(step.generator)
            .ok_or_else(|| Error::InvalidParams(format!("generator index {} out of range", step.generator)))?;
        out = if step.inverse {
            h.inverse()?.mul_vec(&out)?
        } else {
            h.mul_vec(&out)?
        };
    }
    Ok(out)
}

/// Closure of `generators` under multiplication, in breadth-first discovery order.
pub fn enumerate_group(generators: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidParams("at least one generator is required".into()));
    };
    check_generators(generators, first.field())?;
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            order.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    if order.len() > cap {
        return Err(Error::GroupTooLarge(cap));
    }
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.mul(g)?;
            if seen.insert(y.clone()) {
                order.push(y.clone());
                if order.len() > cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// `|G|^-1 sum_g seed(g v)` over an enumerated finite group.
pub fn reynolds_average(group: &[Matrix], seed: &SparsePoly) -> Result<SparsePoly> {
    let field = seed.field();
    let order = group.len();
    if order == 0 {
        return Err(Error::InvalidParams("group must be nonempty".into()));
    }
    let inv = field
        .elem((order as u64) % field.modulus())
        .inv()
        .map_err(|_| Error::OrderNotInvertible {
            order,
            p: field.modulus(),
        })?;
    let mut acc = SparsePoly::zero(field, seed.nvars());
    for g in group {
        acc = acc.add(&seed.substitute_linear(g)?)?;
    }
    Ok(acc.scale(inv))
}

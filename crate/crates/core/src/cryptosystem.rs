//! Key generation, encryption and decryption for the invariant-based scheme.
//!
//! The secret key is an invertible matrix `a` such that the invariant `w` separates `a v0`
//! from `a v1`. The public key publishes `v0`, `v1` and conjugated group elements
//! `h_i = a^-1 g_i a`. A bit `b` is encrypted as `h_{i_1} .. h_{i_l} v_b` for a random word;
//! since `w(a h v) = w(g a v) = w(a v)`, evaluating `w(a u)` recovers the bit.

use rand::Rng;

use crate::algebra::{FieldElement, Matrix, PrimeField, Vector};
use crate::error::{Error, Result};
use crate::invariants::{eval_invariant, InvariantDescriptor, InvariantValue};
use crate::schemes::{sample_group_element, SchemeId, SchemeParams};

pub const DEFAULT_GENERATORS: usize = 8;
pub const DEFAULT_WORD_LENGTH: usize = 16;
/// Secret-matrix rejections tolerated before keygen reports degenerate parameters.
pub const KEYGEN_MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: SchemeParams,
    v0: Vector,
    v1: Vector,
    generators: Vec<Matrix>,
}

fn check_plaintext_vectors(params: &SchemeParams, v0: &Vector, v1: &Vector) -> Result<()> {
    let dim = params.ambient_dim();
    for (name, v) in [("v0", v0), ("v1", v1)] {
        if v.dim() != dim {
            return Err(Error::DimMismatch(format!(
                "{name} has dimension {}, expected {dim}",
                v.dim()
            )));
        }
        if v.field() != params.field {
            return Err(Error::FieldMismatch);
        }
        if v.is_zero() {
            return Err(Error::InvariantViolation(format!("{name} must be nonzero")));
        }
    }
    if v0 == v1 {
        return Err(Error::InvariantViolation("v0 and v1 must differ".into()));
    }
    Ok(())
}

impl PublicKey {
    /// Assembles a public key, checking every structural invariant.
    pub fn new(params: SchemeParams, v0: Vector, v1: Vector, generators: Vec<Matrix>) -> Result<Self> {
        params.validate()?;
        check_plaintext_vectors(&params, &v0, &v1)?;
        if generators.is_empty() {
            return Err(Error::InvariantViolation(
                "public key needs at least one generator".into(),
            ));
        }
        let dim = params.ambient_dim();
        for (i, h) in generators.iter().enumerate() {
            if h.rows() != dim || h.cols() != dim {
                return Err(Error::DimMismatch(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    h.rows(),
                    h.cols()
                )));
            }
            if h.field() != params.field {
                return Err(Error::FieldMismatch);
            }
            if !h.is_invertible() {
                return Err(Error::InvariantViolation(format!("generator {i} is singular")));
            }
        }
        Ok(PublicKey {
            params,
            v0,
            v1,
            generators,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn v0(&self) -> &Vector {
        &self.v0
    }

    pub fn v1(&self) -> &Vector {
        &self.v1
    }

    pub fn plaintext_vector(&self, bit: bool) -> &Vector {
        if bit {
            &self.v1
        } else {
            &self.v0
        }
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    params: SchemeParams,
    a: Matrix,
    v0: Vector,
    v1: Vector,
    w0: FieldElement,
    w1: FieldElement,
}

/// `Some((w(a v0), w(a v1)))` when both are defined and distinct.
pub fn separating_values(
    desc: &InvariantDescriptor,
    a: &Matrix,
    v0: &Vector,
    v1: &Vector,
) -> Result<Option<(FieldElement, FieldElement)>> {
    let w0 = eval_invariant(desc, &a.mul_vec(v0)?)?;
    let w1 = eval_invariant(desc, &a.mul_vec(v1)?)?;
    Ok(match (w0, w1) {
        (InvariantValue::Defined(x), InvariantValue::Defined(y)) if x != y => Some((x, y)),
        _ => None,
    })
}

impl SecretKey {
    /// Builds a secret key from `a`, computing the cached invariant values.
    ///
    /// Fails with `KeyRejected` when `w(a v0)` and `w(a v1)` are not both defined and distinct.
    pub fn new(params: SchemeParams, a: Matrix, v0: Vector, v1: Vector) -> Result<Self> {
        params.validate()?;
        check_plaintext_vectors(&params, &v0, &v1)?;
        let dim = params.ambient_dim();
        if a.rows() != dim || a.cols() != dim {
            return Err(Error::DimMismatch(format!(
                "secret matrix is {}x{}, expected {dim}x{dim}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_invertible() {
            return Err(Error::Singular);
        }
        let desc = InvariantDescriptor::from(&params);
        let (w0, w1) = separating_values(&desc, &a, &v0, &v1)?.ok_or(Error::KeyRejected)?;
        Ok(SecretKey {
            params,
            a,
            v0,
            v1,
            w0,
            w1,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn v0(&self) -> &Vector {
        &self.v0
    }

    pub fn v1(&self) -> &Vector {
        &self.v1
    }

    /// Cached `w(a v0)`.
    pub fn w0(&self) -> FieldElement {
        self.w0
    }

    /// Cached `w(a v1)`.
    pub fn w1(&self) -> FieldElement {
        self.w1
    }

    pub fn descriptor(&self) -> InvariantDescriptor {
        InvariantDescriptor::from(&self.params)
    }
}

/// Builds a key pair from an explicit secret matrix and group elements `g_i`, publishing
/// `h_i = a^-1 g_i a`.
pub fn keypair_from_parts(
    params: SchemeParams,
    a: Matrix,
    v0: Vector,
    v1: Vector,
    group_elements: &[Matrix],
) -> Result<(PublicKey, SecretKey)> {
    let sec = SecretKey::new(params.clone(), a, v0.clone(), v1.clone())?;
    let a_inv = sec.a.inverse()?;
    let generators = group_elements
        .iter()
        .map(|g| a_inv.mul(g)?.mul(&sec.a))
        .collect::<Result<Vec<_>>>()?;
    let public = PublicKey::new(params, v0, v1, generators)?;
    Ok((public, sec))
}

/// Generates a key pair with `k` public generators and random plaintext vectors.
pub fn keygen<R: Rng + ?Sized>(params: &SchemeParams, k: usize, rng: &mut R) -> Result<(PublicKey, SecretKey)> {
    keygen_with_vectors(params, k, None, rng)
}

/// Like [`keygen`], but with caller-chosen `v0`, `v1` when `vectors` is given.
///
/// Without fixed vectors, each attempt draws fresh `v0`, `v1` together with a fresh `a`.
pub fn keygen_with_vectors<R: Rng + ?Sized>(
    params: &SchemeParams,
    k: usize,
    vectors: Option<(Vector, Vector)>,
    rng: &mut R,
) -> Result<(PublicKey, SecretKey)> {
    params.validate()?;
    if k == 0 {
        return Err(Error::InvalidParams("at least one generator is required".into()));
    }
    if let Some((v0, v1)) = &vectors {
        check_plaintext_vectors(params, v0, v1)?;
    }
    let dim = params.ambient_dim();
    let field = params.field;
    let group_elements = (0..k)
        .map(|_| sample_group_element(params, rng))
        .collect::<Result<Vec<_>>>()?;
    let desc = InvariantDescriptor::from(params);

    for _ in 0..KEYGEN_MAX_REJECTIONS {
        let (v0, v1) = match &vectors {
            Some(pair) => pair.clone(),
            None => loop {
                let v0 = Vector::random_nonzero(field, dim, rng);
                let v1 = Vector::random_nonzero(field, dim, rng);
                if v0 != v1 {
                    break (v0, v1);
                }
            },
        };
        let a = Matrix::random_invertible(field, dim, rng);
        if separating_values(&desc, &a, &v0, &v1)?.is_some() {
            return keypair_from_parts(params.clone(), a, v0, v1, &group_elements);
        }
    }
    Err(Error::KeygenExhausted(KEYGEN_MAX_REJECTIONS))
}

/// `h_{word[0]} .. h_{word[l-1]} v_bit`, applied right to left as matrix-vector products.
pub fn encrypt_bit_with_word(public: &PublicKey, bit: bool, word: &[usize]) -> Result<Vector> {
    let mut u = public.plaintext_vector(bit).clone();
    for &i in word.iter().rev() {
        let h = public
            .generators
            .get(i)
            .ok_or_else(|| Error::InvalidParams(format!("generator index {i} out of range")))?;
        u = h.mul_vec(&u)?;
    }
    Ok(u)
}

/// Encrypts one bit with a uniformly random word of length `l` in the public generators.
pub fn encrypt_bit<R: Rng + ?Sized>(public: &PublicKey, bit: bool, l: usize, rng: &mut R) -> Result<Vector> {
    if l == 0 {
        return Err(Error::InvalidParams("word length must be at least 1".into()));
    }
    let k = public.generators.len();
    let word: Vec<usize> = (0..l).map(|_| rng.gen_range(0..k)).collect();
    encrypt_bit_with_word(public, bit, &word)
}

/// One ambient vector per plaintext bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    scheme: SchemeId,
    field: PrimeField,
    dim: usize,
    blocks: Vec<Vector>,
}

impl Ciphertext {
    pub fn new(scheme: SchemeId, field: PrimeField, dim: usize, blocks: Vec<Vector>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.dim() != dim {
                return Err(Error::DimMismatch(format!(
                    "block {i} has dimension {}, expected {dim}",
                    b.dim()
                )));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Ciphertext {
            scheme,
            field,
            dim,
            blocks,
        })
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Vector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Checks that this ciphertext was produced under `params`.
    pub fn check_params(&self, params: &SchemeParams) -> Result<()> {
        if self.scheme != params.scheme {
            return Err(Error::ParamsMismatch(format!(
                "ciphertext scheme {} vs key scheme {}",
                self.scheme, params.scheme
            )));
        }
        if self.field != params.field {
            return Err(Error::ParamsMismatch(format!(
                "ciphertext modulus {} vs key modulus {}",
                self.field.modulus(),
                params.field.modulus()
            )));
        }
        if self.dim != params.ambient_dim() {
            return Err(Error::ParamsMismatch(format!(
                "ciphertext dimension {} vs key dimension {}",
                self.dim,
                params.ambient_dim()
            )));
        }
        Ok(())
    }
}

pub fn encrypt<R: Rng + ?Sized>(public: &PublicKey, bits: &[bool], l: usize, rng: &mut R) -> Result<Ciphertext> {
    if bits.is_empty() {
        return Err(Error::EmptyMessage);
    }
    let blocks = bits
        .iter()
        .map(|&b| encrypt_bit(public, b, l, rng))
        .collect::<Result<Vec<_>>>()?;
    Ciphertext::new(
        public.params.scheme,
        public.params.field,
        public.params.ambient_dim(),
        blocks,
    )
}

/// Recovers one bit by comparing `w(a u)` with the cached values.
pub fn decrypt_bit(sec: &SecretKey, u: &Vector) -> Result<bool> {
    let t = eval_invariant(&sec.descriptor(), &sec.a.mul_vec(u)?)?;
    match t {
        InvariantValue::Defined(x) if x == sec.w0 => Ok(false),
        InvariantValue::Defined(x) if x == sec.w1 => Ok(true),
        _ => Err(Error::InvalidCiphertext { block: 0 }),
    }
}

pub fn decrypt(sec: &SecretKey, ct: &Ciphertext) -> Result<Vec<bool>> {
    ct.check_params(&sec.params)?;
    ct.blocks
        .iter()
        .enumerate()
        .map(|(i, u)| {
            decrypt_bit(sec, u).map_err(|e| match e {
                Error::InvalidCiphertext { .. } => Error::InvalidCiphertext { block: i },
                other => other,
            })
        })
        .collect()
}

/// Parses an ASCII string of `0`/`1` characters, ignoring surrounding whitespace.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse {
                context: "message".into(),
                message: format!("unexpected character '{other}'"),
            }),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

//! Goldwasser-Micali quadratic-residuosity encryption.
//!
//! Bit 0 is sent as a random square `g^2 mod n`, bit 1 as `g^2 a mod n` for a fixed
//! nonresidue `a` with Jacobi symbol 1. Only the holder of `p`, `q` can tell the two apart.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub const MILLER_RABIN_ROUNDS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmPublicKey {
    pub n: BigUint,
    pub a: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmSecretKey {
    pub p: BigUint,
    pub q: BigUint,
}

/// A bit string encrypted under one public key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmCiphertext {
    pub n: BigUint,
    pub blocks: Vec<BigUint>,
}

impl GmPublicKey {
    /// Checks what can be checked without the factorization: `n` odd, `a` a unit with
    /// Jacobi symbol 1.
    pub fn new(n: BigUint, a: BigUint) -> Result<Self> {
        if a >= n || a.is_zero() {
            return Err(Error::InvariantViolation("a must lie in [1, n)".into()));
        }
        if jacobi(&a, &n)? != 1 {
            return Err(Error::InvariantViolation("a must have Jacobi symbol 1 modulo n".into()));
        }
        Ok(GmPublicKey { n, a })
    }
}

impl GmSecretKey {
    pub fn new<R: Rng + ?Sized>(p: BigUint, q: BigUint, rng: &mut R) -> Result<Self> {
        let two = BigUint::from(2u32);
        for x in [&p, &q] {
            if x <= &two || x.is_even() {
                return Err(Error::InvalidPrimes(format!("{x} is not an odd prime")));
            }
            if !is_probable_prime(x, MILLER_RABIN_ROUNDS, rng) {
                return Err(Error::InvalidPrimes(format!("{x} is composite")));
            }
        }
        if p == q {
            return Err(Error::InvalidPrimes("p and q must differ".into()));
        }
        Ok(GmSecretKey { p, q })
    }

    pub fn modulus(&self) -> BigUint {
        &self.p * &self.q
    }
}

/// Jacobi symbol `(x / n)` for odd `n`, by binary reciprocity.
pub fn jacobi(x: &BigUint, n: &BigUint) -> Result<i8> {
    if n.is_even() {
        return Err(Error::EvenModulus);
    }
    let mut a = x % n;
    let mut m = n.clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let m8 = (&m % 8u32).to_u32().unwrap_or(0);
            if twos % 2 == 1 && (m8 == 3 || m8 == 5) {
                sign = -sign;
            }
        }
        if (&a % 4u32) == BigUint::from(3u32) && (&m % 4u32) == BigUint::from(3u32) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut m);
        a %= &m;
    }
    Ok(if m.is_one() { sign } else { 0 })
}

/// Uniform integer in `[0, bound)` by rejection on byte strings.
pub fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "bound must be positive");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64) * 8 - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        // clear the top bits beyond the bound's length
        buf[0] &= 0xffu8 >> excess;
        let x = BigUint::from_bytes_be(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// Miller-Rabin with `rounds` random bases.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    if n < &two {
        return false;
    }
    if n == &two || n == &three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for small in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if n == &s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let span = n - 3u32; // bases drawn from [2, n-2]
    'round: for _ in 0..rounds {
        let a = random_below(&span, rng) + 2u32;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// Random prime with exactly `bits` bits (top bit set), `bits >= 3`.
pub fn random_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    assert!(bits >= 3, "need at least 3 bits for an odd prime");
    let top = BigUint::one() << (bits - 1);
    loop {
        let mut candidate = random_below(&top, rng) | &top;
        candidate |= BigUint::one();
        if is_probable_prime(&candidate, MILLER_RABIN_ROUNDS, rng) {
            return candidate;
        }
    }
}

/// Euler criterion: `x` is a nonzero square modulo the odd prime `p`.
pub fn is_quadratic_residue(x: &BigUint, p: &BigUint) -> bool {
    let r = x % p;
    if r.is_zero() {
        return false;
    }
    let e = (p - 1u32) >> 1;
    r.modpow(&e, p).is_one()
}

/// `a` is a nonresidue modulo both secret primes.
pub fn is_valid_nonresidue(a: &BigUint, sec: &GmSecretKey) -> bool {
    !(a % &sec.p).is_zero()
        && !(a % &sec.q).is_zero()
        && !is_quadratic_residue(a, &sec.p)
        && !is_quadratic_residue(a, &sec.q)
}

pub fn gm_keygen<R: Rng + ?Sized>(p: BigUint, q: BigUint, rng: &mut R) -> Result<(GmPublicKey, GmSecretKey)> {
    let sec = GmSecretKey::new(p, q, rng)?;
    let n = sec.modulus();
    let a = loop {
        let a = random_below(&n, rng);
        if is_valid_nonresidue(&a, &sec) {
            break a;
        }
    };
    let public = GmPublicKey::new(n, a)?;
    Ok((public, sec))
}

/// Random unit modulo `n`.
pub fn random_unit<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    loop {
        let g = random_below(n, rng);
        if !g.is_zero() && g.gcd(n).is_one() {
            return g;
        }
    }
}

/// Encryption with caller-chosen randomness `g`.
pub fn gm_encrypt_with(bit: bool, public: &GmPublicKey, g: &BigUint) -> BigUint {
    let sq = (g * g) % &public.n;
    if bit {
        (sq * &public.a) % &public.n
    } else {
        sq
    }
}

pub fn gm_encrypt<R: Rng + ?Sized>(bit: bool, public: &GmPublicKey, rng: &mut R) -> BigUint {
    let g = random_unit(&public.n, rng);
    gm_encrypt_with(bit, public, &g)
}

pub fn gm_encrypt_bits<R: Rng + ?Sized>(bits: &[bool], public: &GmPublicKey, rng: &mut R) -> Result<GmCiphertext> {
    if bits.is_empty() {
        return Err(Error::EmptyMessage);
    }
    let blocks = bits.iter().map(|&b| gm_encrypt(b, public, rng)).collect();
    Ok(GmCiphertext {
        n: public.n.clone(),
        blocks,
    })
}

pub fn gm_decrypt_bits(ct: &GmCiphertext, sec: &GmSecretKey) -> Result<Vec<bool>> {
    if ct.n != sec.modulus() {
        return Err(Error::ParamsMismatch(format!(
            "ciphertext modulus {} does not match the key",
            ct.n
        )));
    }
    ct.blocks.iter().map(|c| gm_decrypt(c, sec)).collect()
}

pub fn gm_decrypt(c: &BigUint, sec: &GmSecretKey) -> Result<bool> {
    let n = sec.modulus();
    if !c.gcd(&n).is_one() {
        return Err(Error::NotAUnit);
    }
    Ok(!is_quadratic_residue(c, &sec.p))
}

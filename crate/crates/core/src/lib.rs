//! Probabilistic public-key encryption from invariants of matrix groups over prime fields.
//!
//! A secret invertible matrix `a` conjugates a group `G` with a known invariant `w`; the
//! public key carries conjugated group elements and two plaintext vectors that `w(a .)`
//! separates. The crate also ships toy-scale attacks on the construction and a
//! Goldwasser-Micali baseline.

pub mod algebra;
pub mod attacks;
pub mod cryptosystem;
pub mod error;
pub mod format;
pub mod gm;
pub mod invariants;
pub mod poly;
pub mod schemes;

pub use algebra::{FieldElement, Matrix, PrimeField, Vector};
pub use cryptosystem::{decrypt, decrypt_bit, encrypt, encrypt_bit, keygen, Ciphertext, PublicKey, SecretKey};
pub use error::{Error, Result};
pub use format::Document;
pub use invariants::{eval_invariant, InvariantDescriptor, InvariantValue};
pub use poly::SparsePoly;
pub use schemes::{Partitions, SchemeId, SchemeParams};

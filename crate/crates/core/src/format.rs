//! Text file formats for keys and ciphertexts.
//!
//! Every document is a JSON object carrying `format_version` (currently 1) and a `kind` tag.
//! Integers are written as decimal strings, matrices as arrays of rows and vectors as flat
//! arrays. Parsing re-checks every invariant of the decoded object, so a file that parses is
//! usable as-is.

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, PrimeField, Vector};
use crate::cryptosystem::{Ciphertext, PublicKey, SecretKey};
use crate::error::{Error, Result};
use crate::gm::{GmCiphertext, GmPublicKey, GmSecretKey};
use crate::schemes::{Partitions, SchemeId, SchemeParams};

pub const FORMAT_VERSION: u32 = 1;

/// A value with a canonical text encoding.
pub trait Document: Sized {
    fn to_document(&self) -> String;
    fn from_document(text: &str) -> Result<Self>;
}

type Row = Vec<String>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    scheme: String,
    n: String,
    p: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partitions: Option<Vec<Row>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PublicKeyDoc {
    format_version: u32,
    kind: String,
    params: ParamsDoc,
    v0: Row,
    v1: Row,
    generators: Vec<Vec<Row>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SecretKeyDoc {
    format_version: u32,
    kind: String,
    params: ParamsDoc,
    a: Vec<Row>,
    v0: Row,
    v1: Row,
    w0: String,
    w1: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CiphertextDoc {
    format_version: u32,
    kind: String,
    scheme: String,
    p: String,
    #[serde(rename = "N")]
    dim: String,
    blocks: Vec<Row>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmPublicKeyDoc {
    format_version: u32,
    kind: String,
    n: String,
    a: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmSecretKeyDoc {
    format_version: u32,
    kind: String,
    p: String,
    q: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmCiphertextDoc {
    format_version: u32,
    kind: String,
    n: String,
    blocks: Row,
}

const KIND_PUBLIC: &str = "invariant-public-key";
const KIND_SECRET: &str = "invariant-secret-key";
const KIND_CIPHERTEXT: &str = "invariant-ciphertext";
const KIND_GM_PUBLIC: &str = "gm-public-key";
const KIND_GM_SECRET: &str = "gm-secret-key";
const KIND_GM_CIPHERTEXT: &str = "gm-ciphertext";

fn parse_error(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

/// Library errors raised while rebuilding a decoded object are invariant violations.
fn violation(e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::InvariantViolation(_) => e,
        other => Error::InvariantViolation(other.to_string()),
    }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn encode<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

fn check_header(version: u32, kind: &str, expected: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(parse_error("format_version", format!("unsupported version {version}")));
    }
    if kind != expected {
        return Err(parse_error("kind", format!("expected '{expected}', found '{kind}'")));
    }
    Ok(())
}

fn int<T: std::str::FromStr>(s: &str, context: &str) -> Result<T> {
    let digits = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let canonical = s == "0" || !s.starts_with('0');
    if !digits || !canonical {
        return Err(parse_error(
            context,
            format!("'{s}' is not a canonical decimal integer"),
        ));
    }
    s.parse()
        .map_err(|_| parse_error(context, format!("'{s}' is out of range")))
}

fn big(s: &str, context: &str) -> Result<BigUint> {
    int::<BigUint>(s, context)
}

fn residues(row: &[String], field: PrimeField, context: &str) -> Result<Vec<u64>> {
    row.iter()
        .enumerate()
        .map(|(i, s)| {
            let ctx = format!("{context}[{i}]");
            let x: u64 = int(s, &ctx)?;
            if x >= field.modulus() {
                return Err(Error::InvariantViolation(format!(
                    "{ctx} = {x} is not reduced modulo {}",
                    field.modulus()
                )));
            }
            Ok(x)
        })
        .collect()
}

fn vector_doc(v: &Vector) -> Row {
    v.entries().iter().map(u64::to_string).collect()
}

fn matrix_doc(m: &Matrix) -> Vec<Row> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(u64::to_string).collect())
        .collect()
}

fn vector_from(row: &[String], field: PrimeField, context: &str) -> Result<Vector> {
    Vector::new(field, residues(row, field, context)?).map_err(violation)
}

fn matrix_from(rows: &[Row], field: PrimeField, context: &str) -> Result<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len() * cols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvariantViolation(format!(
                "{context} row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        data.extend(residues(row, field, &format!("{context}[{r}]"))?);
    }
    Matrix::new(field, rows.len(), cols, data).map_err(violation)
}

fn params_doc(p: &SchemeParams) -> ParamsDoc {
    ParamsDoc {
        scheme: p.scheme.as_str().to_string(),
        n: p.n.to_string(),
        p: p.field.modulus().to_string(),
        m: p.m.map(|m| m.to_string()),
        partitions: p.partitions.as_ref().map(|parts| {
            [&parts.i1, &parts.j1, &parts.i2, &parts.j2]
                .iter()
                .map(|set| set.iter().map(|i| (i + 1).to_string()).collect())
                .collect()
        }),
    }
}

fn params_from(doc: &ParamsDoc) -> Result<SchemeParams> {
    let scheme: SchemeId = doc
        .scheme
        .parse()
        .map_err(|e: Error| parse_error("params.scheme", e.to_string()))?;
    let n: usize = int(&doc.n, "params.n")?;
    let p: u64 = int(&doc.p, "params.p")?;
    let field = PrimeField::new(p).map_err(violation)?;
    let m = doc.m.as_deref().map(|m| int::<u64>(m, "params.m")).transpose()?;
    let partitions = match &doc.partitions {
        None => None,
        Some(sets) => {
            let sets: Vec<Vec<usize>> = sets
                .iter()
                .enumerate()
                .map(|(k, set)| {
                    set.iter()
                        .enumerate()
                        .map(|(i, s)| {
                            let x: usize = int(s, &format!("params.partitions[{k}][{i}]"))?;
                            x.checked_sub(1)
                                .ok_or_else(|| Error::InvariantViolation("partition indices start at 1".into()))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            let [i1, j1, i2, j2]: [Vec<usize>; 4] = sets
                .try_into()
                .map_err(|_| Error::InvariantViolation("partitions must list exactly four sets".into()))?;
            Some(Partitions { i1, j1, i2, j2 })
        }
    };
    let params = SchemeParams {
        scheme,
        n,
        field,
        m,
        partitions,
    };
    params.validate().map_err(violation)?;
    Ok(params)
}

impl Document for PublicKey {
    fn to_document(&self) -> String {
        encode(&PublicKeyDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_PUBLIC.into(),
            params: params_doc(self.params()),
            v0: vector_doc(self.v0()),
            v1: vector_doc(self.v1()),
            generators: self.generators().iter().map(matrix_doc).collect(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: PublicKeyDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_PUBLIC)?;
        let params = params_from(&doc.params)?;
        let f = params.field;
        let v0 = vector_from(&doc.v0, f, "v0")?;
        let v1 = vector_from(&doc.v1, f, "v1")?;
        let generators = doc
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| matrix_from(g, f, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        PublicKey::new(params, v0, v1, generators).map_err(violation)
    }
}

impl Document for SecretKey {
    fn to_document(&self) -> String {
        encode(&SecretKeyDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_SECRET.into(),
            params: params_doc(self.params()),
            a: matrix_doc(self.matrix()),
            v0: vector_doc(self.v0()),
            v1: vector_doc(self.v1()),
            w0: self.w0().value().to_string(),
            w1: self.w1().value().to_string(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: SecretKeyDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_SECRET)?;
        let params = params_from(&doc.params)?;
        let f = params.field;
        let a = matrix_from(&doc.a, f, "a")?;
        let v0 = vector_from(&doc.v0, f, "v0")?;
        let v1 = vector_from(&doc.v1, f, "v1")?;
        let w0: u64 = int(&doc.w0, "w0")?;
        let w1: u64 = int(&doc.w1, "w1")?;
        let sec = SecretKey::new(params, a, v0, v1).map_err(violation)?;
        if sec.w0().value() != w0 || sec.w1().value() != w1 {
            return Err(Error::InvariantViolation(format!(
                "cached invariant values ({w0}, {w1}) differ from recomputed ({}, {})",
                sec.w0(),
                sec.w1()
            )));
        }
        Ok(sec)
    }
}

impl Document for Ciphertext {
    fn to_document(&self) -> String {
        encode(&CiphertextDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_CIPHERTEXT.into(),
            scheme: self.scheme().as_str().into(),
            p: self.field().modulus().to_string(),
            dim: self.dim().to_string(),
            blocks: self.blocks().iter().map(vector_doc).collect(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: CiphertextDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_CIPHERTEXT)?;
        let scheme: SchemeId = doc
            .scheme
            .parse()
            .map_err(|e: Error| parse_error("scheme", e.to_string()))?;
        let field = PrimeField::new(int(&doc.p, "p")?).map_err(violation)?;
        let dim: usize = int(&doc.dim, "N")?;
        if doc.blocks.is_empty() {
            return Err(Error::InvariantViolation("ciphertext has no blocks".into()));
        }
        let blocks = doc
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| vector_from(b, field, &format!("blocks[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ciphertext::new(scheme, field, dim, blocks).map_err(violation)
    }
}

impl Document for GmPublicKey {
    fn to_document(&self) -> String {
        encode(&GmPublicKeyDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_GM_PUBLIC.into(),
            n: self.n.to_string(),
            a: self.a.to_string(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: GmPublicKeyDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_GM_PUBLIC)?;
        GmPublicKey::new(big(&doc.n, "n")?, big(&doc.a, "a")?).map_err(violation)
    }
}

impl Document for GmSecretKey {
    fn to_document(&self) -> String {
        encode(&GmSecretKeyDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_GM_SECRET.into(),
            p: self.p.to_string(),
            q: self.q.to_string(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: GmSecretKeyDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_GM_SECRET)?;
        // fixed seed: primality witnesses only, parsing stays deterministic
        let mut rng = StdRng::seed_from_u64(0);
        GmSecretKey::new(big(&doc.p, "p")?, big(&doc.q, "q")?, &mut rng).map_err(violation)
    }
}

impl Document for GmCiphertext {
    fn to_document(&self) -> String {
        encode(&GmCiphertextDoc {
            format_version: FORMAT_VERSION,
            kind: KIND_GM_CIPHERTEXT.into(),
            n: self.n.to_string(),
            blocks: self.blocks.iter().map(BigUint::to_string).collect(),
        })
    }

    fn from_document(text: &str) -> Result<Self> {
        let doc: GmCiphertextDoc = decode(text)?;
        check_header(doc.format_version, &doc.kind, KIND_GM_CIPHERTEXT)?;
        let n = big(&doc.n, "n")?;
        if doc.blocks.is_empty() {
            return Err(Error::InvariantViolation("ciphertext has no blocks".into()));
        }
        let blocks = doc
            .blocks
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let c = big(s, &format!("blocks[{i}]"))?;
                if c >= n {
                    return Err(Error::InvariantViolation(format!(
                        "blocks[{i}] is not reduced modulo n"
                    )));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GmCiphertext { n, blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cryptosystem::{encrypt, keygen};
    use crate::gm::gm_keygen;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn ex1_pair(seed: u64) -> (PublicKey, SecretKey) {
        keygen(
            &SchemeParams::ex1(2, 5, 4).unwrap(),
            3,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
        .unwrap()
    }

    #[test]
    fn public_key_roundtrip() {
        let (public, sec) = ex1_pair(1);
        let text = public.to_document();
        assert_eq!(PublicKey::from_document(&text).unwrap(), public);
        assert_eq!(SecretKey::from_document(&sec.to_document()).unwrap(), sec);
        assert!(text.contains("\"format_version\": 1"));
    }

    #[test]
    fn ex3_partitions_roundtrip() {
        let parts = Partitions::parse("1,3;2,4;1,4;2,3", 2).unwrap();
        let params = SchemeParams::ex3(2, 13, Some(parts)).unwrap();
        let (public, sec) = keygen(&params, 2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(PublicKey::from_document(&public.to_document()).unwrap(), public);
        assert_eq!(SecretKey::from_document(&sec.to_document()).unwrap(), sec);
    }

    #[test]
    fn rejects_empty_generator_list() {
        let (public, _) = ex1_pair(2);
        let mut doc: serde_json::Value = serde_json::from_str(&public.to_document()).unwrap();
        doc["generators"] = serde_json::json!([]);
        let err = PublicKey::from_document(&doc.to_string()).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)), "{err}");
    }

    #[test]
    fn rejects_composite_modulus() {
        let (public, _) = ex1_pair(2);
        let text = public.to_document().replace("\"p\": \"5\"", "\"p\": \"9\"");
        let err = PublicKey::from_document(&text).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)), "{err}");
    }

    #[test]
    fn rejects_malformed_text_with_position() {
        let err = PublicKey::from_document("{\n  \"format_version\": 1,\n  oops").unwrap_err();
        match err {
            Error::Parse { context, .. } => assert!(context.starts_with("line 3"), "{context}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_bad_integers_with_field_context() {
        let (public, _) = ex1_pair(4);
        let mut doc: serde_json::Value = serde_json::from_str(&public.to_document()).unwrap();
        doc["v0"][1] = serde_json::json!("-1");
        match PublicKey::from_document(&doc.to_string()).unwrap_err() {
            Error::Parse { context, .. } => assert_eq!(context, "v0[1]"),
            other => panic!("unexpected {other}"),
        }
        doc["v0"][1] = serde_json::json!("7");
        assert!(matches!(
            PublicKey::from_document(&doc.to_string()),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn rejects_wrong_kind_and_version() {
        let (public, sec) = ex1_pair(5);
        assert!(matches!(
            SecretKey::from_document(&public.to_document()),
            Err(Error::Parse { .. })
        ));
        let text = sec
            .to_document()
            .replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(SecretKey::from_document(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_stale_secret_cache() {
        let (_, sec) = ex1_pair(6);
        let mut doc: serde_json::Value = serde_json::from_str(&sec.to_document()).unwrap();
        let w0 = sec.w0().value();
        let other = (0..5).find(|&x| x != w0 && x != sec.w1().value()).unwrap();
        doc["w0"] = serde_json::json!(other.to_string());
        assert!(matches!(
            SecretKey::from_document(&doc.to_string()),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn ciphertext_roundtrip() {
        let (public, _) = ex1_pair(7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ct = encrypt(&public, &[true, false, true], 4, &mut rng).unwrap();
        let text = ct.to_document();
        assert!(text.contains("\"N\": \"2\""));
        assert_eq!(Ciphertext::from_document(&text).unwrap(), ct);
    }

    #[test]
    fn gm_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (public, sec) = gm_keygen(BigUint::from(10007u32), BigUint::from(10009u32), &mut rng).unwrap();
        assert_eq!(GmPublicKey::from_document(&public.to_document()).unwrap(), public);
        assert_eq!(GmSecretKey::from_document(&sec.to_document()).unwrap(), sec);
        let ct = crate::gm::gm_encrypt_bits(&[true, false], &public, &mut rng).unwrap();
        assert_eq!(GmCiphertext::from_document(&ct.to_document()).unwrap(), ct);
        let bad = sec.to_document().replace("10007", "10001");
        assert!(matches!(
            GmSecretKey::from_document(&bad),
            Err(Error::InvariantViolation(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn serialization_is_canonical(seed in any::<u64>(), scheme in 0usize..3) {
            let params = match scheme {
                0 => SchemeParams::ex1(3, 13, 4).unwrap(),
                1 => SchemeParams::ex2(2, 7).unwrap(),
                _ => SchemeParams::ex3(2, 7, None).unwrap(),
            };
            let (public, sec) = keygen(&params, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let text = public.to_document();
            prop_assert_eq!(PublicKey::from_document(&text).unwrap().to_document(), text);
            let text = sec.to_document();
            prop_assert_eq!(SecretKey::from_document(&text).unwrap().to_document(), text);
        }
    }
}

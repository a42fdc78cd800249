//! Evaluation of the scheme invariants on ambient vectors.

use crate::algebra::{FieldElement, Matrix, PrimeField, Vector};
use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::schemes::{sym_index, Partitions, SchemeId, SchemeParams};

/// Which invariant to evaluate, with the parameters it depends on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantDescriptor {
    pub scheme: SchemeId,
    pub n: usize,
    pub field: PrimeField,
    pub m: Option<u64>,
    pub partitions: Option<Partitions>,
}

impl From<&SchemeParams> for InvariantDescriptor {
    fn from(p: &SchemeParams) -> Self {
        InvariantDescriptor {
            scheme: p.scheme,
            n: p.n,
            field: p.field,
            m: p.m,
            partitions: p.partitions.clone(),
        }
    }
}

impl InvariantDescriptor {
    pub fn ambient_dim(&self) -> usize {
        match self.scheme {
            SchemeId::Ex1 => self.n,
            SchemeId::Ex2 => self.n * (self.n + 1) / 2,
            SchemeId::Ex3 => 2 * self.n * self.n,
        }
    }

    /// Degree of the polynomial invariant (`m` for `Ex1`, `n` for `Ex2`); `None` for the
    /// rational `Ex3` invariant.
    pub fn degree(&self) -> Option<u32> {
        match self.scheme {
            SchemeId::Ex1 => self.m.map(|m| m as u32),
            SchemeId::Ex2 => Some(self.n as u32),
            SchemeId::Ex3 => None,
        }
    }

    /// The invariant as an explicit polynomial in the `N` ambient coordinates.
    pub fn polynomial(&self) -> Result<SparsePoly> {
        let f = self.field;
        let dim = self.ambient_dim();
        match self.scheme {
            SchemeId::Ex1 => {
                let m = self.m.ok_or_else(|| Error::InvalidParams("ex1 requires m".into()))? as u32;
                let terms = (0..dim).map(|i| {
                    let mut e = vec![0; dim];
                    e[i] = m;
                    (e, 1)
                });
                SparsePoly::from_terms(f, dim, terms)
            }
            SchemeId::Ex2 => {
                // Leibniz expansion of det(S) with S_ij = S_ji = x_{sym(i,j)}
                let n = self.n;
                let mut terms = Vec::new();
                for (perm, sign) in permutations(n) {
                    let mut e = vec![0u32; dim];
                    for (i, &j) in perm.iter().enumerate() {
                        e[sym_index(i, j, n)] += 1;
                    }
                    let c = if sign { 1 } else { f.modulus() - 1 };
                    terms.push((e, c));
                }
                SparsePoly::from_terms(f, dim, terms)
            }
            SchemeId::Ex3 => Err(Error::RationalInvariantUnsupported),
        }
    }
}

/// All permutations of `0..n` with their parity (`true` = even).
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], even: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), even));
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            // inversions added by placing j: unused values smaller than j
            let inversions = (0..j).filter(|&k| !used[k]).count();
            used[j] = true;
            prefix.push(j);
            rec(prefix, used, even ^ (inversions % 2 == 1), out);
            prefix.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], true, &mut out);
    out
}

/// Value of a possibly rational invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantValue {
    Defined(FieldElement),
    Undefined,
}

impl InvariantValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, InvariantValue::Defined(_))
    }

    pub fn value(&self) -> Option<FieldElement> {
        match *self {
            InvariantValue::Defined(x) => Some(x),
            InvariantValue::Undefined => None,
        }
    }
}

fn check_dim(v: &Vector, expected: usize) -> Result<()> {
    if v.dim() != expected {
        return Err(Error::DimMismatch(format!(
            "expected a vector of dimension {expected}, got {}",
            v.dim()
        )));
    }
    Ok(())
}

/// `sum_i v_i^m`.
pub fn eval_power_sum(v: &Vector, m: u64) -> FieldElement {
    let f = v.field();
    let s = v.entries().iter().fold(0, |acc, &x| f.add(acc, f.pow(x, m)));
    f.elem(s)
}

/// The symmetric matrix whose `(i, j)` and `(j, i)` entries are the `(i, j)` coordinate.
pub fn symmetric_from_coords(v: &Vector, n: usize) -> Result<Matrix> {
    check_dim(v, n * (n + 1) / 2)?;
    let mut s = Matrix::zeros(v.field(), n, n);
    for i in 0..n {
        for j in i..n {
            let x = v.get(sym_index(i, j, n));
            s.set(i, j, x);
            s.set(j, i, x);
        }
    }
    Ok(s)
}

/// Determinant of the symmetric matrix encoded by `v`.
pub fn eval_det_sym(v: &Vector, n: usize) -> Result<FieldElement> {
    symmetric_from_coords(v, n)?.det()
}

/// Determinant of the block vectors selected by `indices`, stacked as columns in order.
fn block_det(v: &Vector, indices: &[usize], n: usize) -> Result<FieldElement> {
    let mut m = Matrix::zeros(v.field(), n, n);
    for (col, &k) in indices.iter().enumerate() {
        for r in 0..n {
            m.set(r, col, v.get(k * n + r));
        }
    }
    m.det()
}

/// `det_I1 det_J1 / (det_I2 det_J2)` over the `2n` blocks of `v`, undefined when the
/// denominator vanishes.
pub fn eval_det_ratio(v: &Vector, partitions: &Partitions, n: usize) -> Result<InvariantValue> {
    check_dim(v, 2 * n * n)?;
    partitions.validate(n)?;
    let den = block_det(v, &partitions.i2, n)? * block_det(v, &partitions.j2, n)?;
    if den.is_zero() {
        return Ok(InvariantValue::Undefined);
    }
    let num = block_det(v, &partitions.i1, n)? * block_det(v, &partitions.j1, n)?;
    Ok(InvariantValue::Defined(num * den.inv()?))
}

/// Evaluates the scheme invariant on `v`.
pub fn eval_invariant(desc: &InvariantDescriptor, v: &Vector) -> Result<InvariantValue> {
    check_dim(v, desc.ambient_dim())?;
    if v.field() != desc.field {
        return Err(Error::FieldMismatch);
    }
    match desc.scheme {
        SchemeId::Ex1 => {
            let m = desc.m.ok_or_else(|| Error::InvalidParams("ex1 requires m".into()))?;
            Ok(InvariantValue::Defined(eval_power_sum(v, m)))
        }
        SchemeId::Ex2 => Ok(InvariantValue::Defined(eval_det_sym(v, desc.n)?)),
        SchemeId::Ex3 => {
            let parts = desc
                .partitions
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("ex3 requires partitions".into()))?;
            eval_det_ratio(v, parts, desc.n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{direct_sum_rep, sample_group_element, sample_special_linear, symmetric_square_rep};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn vec_of(p: u64, xs: &[i64]) -> Vector {
        Vector::from_i64(field(p), xs).unwrap()
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(eval_power_sum(&vec_of(5, &[0, 0]), 4).value(), 0);
        assert_eq!(eval_power_sum(&vec_of(5, &[1, 2]), 4).value(), 2);
    }

    #[test]
    fn det_sym_examples() {
        assert_eq!(eval_det_sym(&vec_of(5, &[1, 0, 1]), 2).unwrap().value(), 1);
        assert_eq!(eval_det_sym(&vec_of(5, &[2, 1, 1]), 2).unwrap().value(), 1);
        assert!(matches!(
            eval_det_sym(&vec_of(5, &[2, 1]), 2),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn det_ratio_worked_example() {
        let parts = Partitions::parse("1,2;3,4;1,3;2,4", 2).unwrap();
        let v = vec_of(7, &[1, 0, 0, 1, 1, 1, 1, 2]);
        assert_eq!(
            eval_det_ratio(&v, &parts, 2).unwrap(),
            InvariantValue::Defined(field(7).elem(6))
        );

        let m = Matrix::from_rows(field(7), &[&[1, 1], &[0, 1]]).unwrap();
        let moved = direct_sum_rep(&m, 4).unwrap().mul_vec(&v).unwrap();
        assert_eq!(moved, vec_of(7, &[1, 0, 1, 1, 2, 1, 3, 2]));
        assert_eq!(
            eval_det_ratio(&moved, &parts, 2).unwrap(),
            InvariantValue::Defined(field(7).elem(6))
        );
    }

    #[test]
    fn det_ratio_undefined_on_repeated_column() {
        let parts = Partitions::default_for(2);
        // p2 = p4 makes det_J2 vanish
        let v = vec_of(7, &[1, 0, 3, 5, 1, 1, 3, 5]);
        assert_eq!(eval_det_ratio(&v, &parts, 2).unwrap(), InvariantValue::Undefined);
        assert!(eval_det_ratio(&vec_of(7, &[1, 2, 3]), &parts, 2).is_err());
    }

    #[test]
    fn dispatch() {
        let ex1 = InvariantDescriptor::from(&SchemeParams::ex1(2, 5, 4).unwrap());
        assert_eq!(
            eval_invariant(&ex1, &vec_of(5, &[1, 2])).unwrap(),
            InvariantValue::Defined(field(5).elem(2))
        );
        let ex2 = InvariantDescriptor::from(&SchemeParams::ex2(2, 5).unwrap());
        assert_eq!(
            eval_invariant(&ex2, &vec_of(5, &[1, 0, 1])).unwrap(),
            InvariantValue::Defined(field(5).one())
        );
        let ex3 = InvariantDescriptor::from(&SchemeParams::ex3(2, 7, None).unwrap());
        assert_eq!(
            eval_invariant(&ex3, &Vector::zeros(field(7), 8)).unwrap(),
            InvariantValue::Undefined
        );
        assert!(matches!(
            eval_invariant(&ex3, &vec_of(7, &[1, 2])),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn polynomial_forms_match_evaluators() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for params in [
            SchemeParams::ex1(3, 13, 4).unwrap(),
            SchemeParams::ex2(2, 13).unwrap(),
            SchemeParams::ex2(3, 13).unwrap(),
            SchemeParams::ex2(4, 7).unwrap(),
        ] {
            let desc = InvariantDescriptor::from(&params);
            let w = desc.polynomial().unwrap();
            assert_eq!(w.homogeneous_degree(), desc.degree());
            for _ in 0..50 {
                let v = Vector::random(params.field, params.ambient_dim(), &mut rng);
                assert_eq!(Some(w.eval(&v).unwrap()), eval_invariant(&desc, &v).unwrap().value());
            }
        }
        let ex3 = InvariantDescriptor::from(&SchemeParams::ex3(2, 7, None).unwrap());
        assert_eq!(ex3.polynomial(), Err(Error::RationalInvariantUnsupported));
    }

    #[test]
    fn permutation_parity() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, even)| *even).count(), 3);
        assert!(perms.contains(&(vec![1, 0, 2], false)));
        assert!(perms.contains(&(vec![1, 2, 0], true)));
    }

    #[test]
    fn invariance_under_sampled_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for params in [
            SchemeParams::ex1(2, 5, 4).unwrap(),
            SchemeParams::ex1(3, 13, 4).unwrap(),
            SchemeParams::ex2(2, 13).unwrap(),
            SchemeParams::ex2(3, 5).unwrap(),
            SchemeParams::ex3(2, 7, None).unwrap(),
            SchemeParams::ex3(2, 13, None).unwrap(),
        ] {
            let desc = InvariantDescriptor::from(&params);
            for _ in 0..100 {
                let g = sample_group_element(&params, &mut rng).unwrap();
                let v = Vector::random(params.field, params.ambient_dim(), &mut rng);
                let before = eval_invariant(&desc, &v).unwrap();
                let after = eval_invariant(&desc, &g.mul_vec(&v).unwrap()).unwrap();
                assert_eq!(before, after, "{:?}", params.scheme);
            }
        }
    }

    #[test]
    fn det_sym_invariant_under_special_linear() {
        let f13 = field(13);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let s = sample_special_linear(3, f13, &mut rng);
            let v = Vector::random(f13, 6, &mut rng);
            let moved = symmetric_square_rep(&s).unwrap().mul_vec(&v).unwrap();
            assert_eq!(eval_det_sym(&moved, 3).unwrap(), eval_det_sym(&v, 3).unwrap());
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cases = [
            (SchemeParams::ex1(3, 13, 4).unwrap(), 4u64),
            (SchemeParams::ex2(3, 13).unwrap(), 3),
            (SchemeParams::ex3(2, 13, None).unwrap(), 0),
        ];
        for (params, degree) in cases {
            let desc = InvariantDescriptor::from(&params);
            for _ in 0..50 {
                let v = Vector::random(params.field, params.ambient_dim(), &mut rng);
                let lambda = params.field.random_nonzero(&mut rng);
                let lhs = eval_invariant(&desc, &v.scale(lambda)).unwrap();
                let rhs = match eval_invariant(&desc, &v).unwrap() {
                    InvariantValue::Defined(x) => InvariantValue::Defined(lambda.pow(degree) * x),
                    InvariantValue::Undefined => InvariantValue::Undefined,
                };
                assert_eq!(lhs, rhs);
            }
        }
    }
}

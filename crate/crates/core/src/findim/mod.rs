//! Finite-dimensional unital associative algebras over the rationals.

mod hochschild;
mod presentation;
mod radical;

pub use hochschild::{hochschild_cohomology_dims, HOCHSCHILD_COCHAIN_CAP};
pub use presentation::{from_presentation, from_presentation_with_precedence, NcPoly, Word};
pub use radical::{minimal_polynomial, radical_and_blocks, rational_roots, Blocks, RadicalReport};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Echelon, QMatrix, SparseVec};
use crate::{parse_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("unit axiom fails on basis element {0}")]
    UnitAxiom(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(
        "rewriting did not close below the degree bound; irreducible words per length: {growth:?}"
    )]
    NotFiniteWithinBound { growth: Vec<usize> },
    #[error("budget exceeded: {0}")]
    Budget(String),
}

/// Basis, structure constants `e_i e_j = sum_k c[i][j][k] e_k`, and unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDimAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<Q>>,
    unit: Vec<Q>,
}

/// Verdict of [`check_frobenius`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusVerdict {
    Ok,
    Degenerate,
    NonInvariant { i: usize, j: usize, k: usize },
}

impl FinDimAlgebra {
    /// `table[i * dim + j]` holds the coordinates of `e_i e_j`.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<Q>>,
        unit: Vec<Q>,
    ) -> Result<FinDimAlgebra, AlgebraError> {
        let d = labels.len();
        if table.len() != d * d || table.iter().any(|r| r.len() != d) || unit.len() != d {
            return Err(AlgebraError::Shape(format!(
                "expected {d}x{d} products of length {d} and a unit of length {d}"
            )));
        }
        let a = FinDimAlgebra {
            labels,
            table,
            unit,
        };
        a.verify()?;
        Ok(a)
    }

    /// Builds from a sparse list of `(i, j, k, value)`.
    pub fn from_constants(
        labels: Vec<String>,
        constants: &[(usize, usize, usize, Q)],
        unit: Vec<Q>,
    ) -> Result<FinDimAlgebra, AlgebraError> {
        let d = labels.len();
        let mut table = vec![vec![Q::zero(); d]; d * d];
        for (i, j, k, v) in constants {
            if *i >= d || *j >= d || *k >= d {
                return Err(AlgebraError::Shape(format!(
                    "constant index ({i}, {j}, {k}) out of range"
                )));
            }
            table[i * d + j][*k] += v;
        }
        FinDimAlgebra::new(labels, table, unit)
    }

    /// The algebra with no elements besides zero.
    pub fn zero() -> FinDimAlgebra {
        FinDimAlgebra {
            labels: Vec::new(),
            table: Vec::new(),
            unit: Vec::new(),
        }
    }

    /// `Q^{n x n}` with matrix units `E_ij` as basis.
    pub fn matrix_algebra(n: usize) -> FinDimAlgebra {
        let d = n * n;
        let labels = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
            .collect();
        let mut table = vec![vec![Q::zero(); d]; d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[(i * n + j) * d + (j * n + l)][i * n + l] = Q::one();
                }
            }
        }
        let mut unit = vec![Q::zero(); d];
        for i in 0..n {
            unit[i * n + i] = Q::one();
        }
        FinDimAlgebra {
            labels,
            table,
            unit,
        }
    }

    /// `Q[a]/(a^k)` with basis `1, a, ..., a^{k-1}`.
    pub fn truncated_polynomial(k: usize) -> FinDimAlgebra {
        let labels = (0..k)
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{e}"),
            })
            .collect();
        let mut table = vec![vec![Q::zero(); k]; k * k];
        for i in 0..k {
            for j in 0..k {
                if i + j < k {
                    table[i * k + j][i + j] = Q::one();
                }
            }
        }
        let mut unit = vec![Q::zero(); k];
        if k > 0 {
            unit[0] = Q::one();
        }
        FinDimAlgebra {
            labels,
            table,
            unit,
        }
    }

    fn verify(&self) -> Result<(), AlgebraError> {
        let d = self.dim();
        for i in 0..d {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(AlgebraError::UnitAxiom(i));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.product(i, j);
                for k in 0..d {
                    let left = self.mul_by_basis_right(ij, k);
                    let jk = self.product(j, k);
                    let right = self.mul_by_basis_left(i, jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    /// Coordinates of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    fn mul_by_basis_right(&self, x: &[Q], k: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (l, c) in x.iter().enumerate() {
            if !c.is_zero() {
                for (o, p) in out.iter_mut().zip(self.product(l, k)) {
                    if !p.is_zero() {
                        *o += c * p;
                    }
                }
            }
        }
        out
    }

    fn mul_by_basis_left(&self, i: usize, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (l, c) in x.iter().enumerate() {
            if !c.is_zero() {
                for (o, p) in out.iter_mut().zip(self.product(i, l)) {
                    if !p.is_zero() {
                        *o += c * p;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, p) in out.iter_mut().zip(self.product(i, j)) {
                    if !p.is_zero() {
                        *o += &ab * p;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_matrix(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim())
            .map(|j| self.mul(x, &self.basis_vector(j)))
            .collect();
        QMatrix::from_cols(&cols, self.dim())
    }

    /// Matrix of `y -> y x`.
    pub fn right_matrix(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim())
            .map(|j| self.mul(&self.basis_vector(j), x))
            .collect();
        QMatrix::from_cols(&cols, self.dim())
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Re-expresses the algebra in a new basis given by coordinate vectors.
    pub fn change_basis(
        &self,
        vectors: &[Vec<Q>],
        labels: Vec<String>,
    ) -> Result<FinDimAlgebra, AlgebraError> {
        let d = self.dim();
        if vectors.len() != d || labels.len() != d {
            return Err(AlgebraError::Shape(
                "a new basis needs exactly dim vectors and labels".into(),
            ));
        }
        let p = QMatrix::from_cols(vectors, d);
        let inv = p
            .inverse()
            .ok_or_else(|| AlgebraError::Shape("vectors are not a basis".into()))?;
        let mut table = Vec::with_capacity(d * d);
        for u in vectors {
            for v in vectors {
                table.push(inv.mul_vec(&self.mul(u, v)));
            }
        }
        FinDimAlgebra::new(labels, table, inv.mul_vec(&self.unit))
    }

    /// Canonical text form (TOML).
    pub fn to_toml(&self) -> String {
        let d = self.dim();
        let mut constants = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, v) in self.product(i, j).iter().enumerate() {
                    if !v.is_zero() {
                        constants.push(ConstantRecord {
                            i,
                            j,
                            k,
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        let rec = AlgebraRecord {
            labels: self.labels.clone(),
            unit: self.unit.iter().map(|q| q.to_string()).collect(),
            constants,
        };
        toml::to_string(&rec).expect("algebra records always serialize")
    }

    pub fn from_toml(text: &str) -> Result<FinDimAlgebra, AlgebraError> {
        let rec: AlgebraRecord =
            toml::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let value = |s: &str| {
            parse_rational(s).ok_or_else(|| AlgebraError::Parse(format!("`{s}` is not a rational")))
        };
        let unit = rec
            .unit
            .iter()
            .map(|s| value(s))
            .collect::<Result<Vec<_>, _>>()?;
        let constants = rec
            .constants
            .iter()
            .map(|c| Ok((c.i, c.j, c.k, value(&c.value)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        FinDimAlgebra::from_constants(rec.labels, &constants, unit)
    }

    /// Renders a coordinate vector with the basis labels.
    pub fn render(&self, v: &[Q]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| {
                if c.is_one() {
                    l.clone()
                } else {
                    format!("{c}*{l}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ConstantRecord {
    i: usize,
    j: usize,
    k: usize,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraRecord {
    labels: Vec<String>,
    unit: Vec<String>,
    #[serde(default)]
    constants: Vec<ConstantRecord>,
}

pub(crate) fn to_sparse(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Dimension of `A/[A, A]` and the basis indices chosen as coset representatives.
pub fn hh0(a: &FinDimAlgebra) -> (usize, Vec<usize>) {
    let d = a.dim();
    let mut span = Echelon::new();
    for i in 0..d {
        for j in i + 1..d {
            let c: Vec<Q> = a
                .product(i, j)
                .iter()
                .zip(a.product(j, i))
                .map(|(x, y)| x - y)
                .collect();
            let _ = span.insert(to_sparse(&c), SparseVec::new());
        }
    }
    let mut reps = Vec::new();
    for i in 0..d {
        if span
            .insert(to_sparse(&a.basis_vector(i)), SparseVec::new())
            .is_ok()
        {
            reps.push(i);
        }
    }
    (reps.len(), reps)
}

/// Basis of the center.
pub fn center(a: &FinDimAlgebra) -> Vec<Vec<Q>> {
    let d = a.dim();
    let mut stacked = QMatrix::zeros(0, d);
    for i in 0..d {
        let e = a.basis_vector(i);
        let l = a.right_matrix(&e);
        let m = a.left_matrix(&e);
        let diff = QMatrix::from_rows(
            (0..d)
                .map(|r| (0..d).map(|c| &l[(r, c)] - &m[(r, c)]).collect())
                .collect(),
        );
        stacked = stacked.vstack(&diff);
    }
    if d == 0 {
        return Vec::new();
    }
    stacked.kernel()
}

/// Left socle `{x : r x = 0 for all r in the radical}`.
pub fn socle_algebra(a: &FinDimAlgebra) -> Vec<Vec<Q>> {
    let d = a.dim();
    if d == 0 {
        return Vec::new();
    }
    let report = radical_and_blocks(a);
    let mut stacked = QMatrix::zeros(0, d);
    for r in &report.radical {
        stacked = stacked.vstack(&a.left_matrix(r));
    }
    if report.radical.is_empty() {
        return (0..d).map(|i| a.basis_vector(i)).collect();
    }
    stacked.kernel()
}

/// Checks that `pairing` is invertible and `s(xy, z) = s(x, yz)` on basis triples.
pub fn check_frobenius(a: &FinDimAlgebra, pairing: &QMatrix) -> FrobeniusVerdict {
    let d = a.dim();
    if pairing.rows() != d || pairing.cols() != d || (d > 0 && pairing.rank() < d) {
        return FrobeniusVerdict::Degenerate;
    }
    let form = |x: &[Q], k: usize| -> Q {
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| c * &pairing[(l, k)])
            .sum()
    };
    let form_left = |i: usize, y: &[Q]| -> Q {
        y.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| c * &pairing[(i, l)])
            .sum()
    };
    for i in 0..d {
        for j in 0..d {
            let ij = a.product(i, j);
            for k in 0..d {
                if form(ij, k) != form_left(i, a.product(j, k)) {
                    return FrobeniusVerdict::NonInvariant { i, j, k };
                }
            }
        }
    }
    FrobeniusVerdict::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    fn dual_numbers() -> FinDimAlgebra {
        FinDimAlgebra::truncated_polynomial(2)
    }

    #[test]
    fn construction_checks_axioms() {
        let labels = vec!["1".to_string(), "e".to_string()];
        let bad = FinDimAlgebra::from_constants(
            labels.clone(),
            &[(0, 0, 0, q(1)), (0, 1, 1, q(1))],
            vec![q(1), q(0)],
        );
        assert_eq!(bad.unwrap_err(), AlgebraError::UnitAxiom(1));
        let ok = FinDimAlgebra::from_constants(
            labels.clone(),
            &[(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
            vec![q(1), q(0)],
        )
        .unwrap();
        assert_eq!(
            ok,
            dual_numbers()
                .change_basis(&[vec![q(1), q(0)], vec![q(0), q(1)]], labels)
                .unwrap()
        );
        assert!(matches!(
            FinDimAlgebra::new(vec!["1".into()], vec![], vec![q(1)]),
            Err(AlgebraError::Shape(_))
        ));
        // e*e = 1 + e is commutative and unital but e*(e*e) vs (e*e)*e are equal; break associativity with a 3-dim table
        let l3: Vec<String> = ["1", "u", "v"].iter().map(|s| s.to_string()).collect();
        let mut consts = vec![
            (0, 0, 0, q(1)),
            (0, 1, 1, q(1)),
            (1, 0, 1, q(1)),
            (0, 2, 2, q(1)),
            (2, 0, 2, q(1)),
        ];
        consts.push((1, 1, 2, q(1)));
        consts.push((1, 2, 1, q(1)));
        let err = FinDimAlgebra::from_constants(l3, &consts, vec![q(1), q(0), q(0)]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotAssociative { .. }));
    }

    #[test]
    fn toml_round_trip() {
        let a = FinDimAlgebra::matrix_algebra(2);
        let text = a.to_toml();
        let b = FinDimAlgebra::from_toml(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_toml(), text);
        let half = FinDimAlgebra::from_constants(vec!["1".into()], &[(0, 0, 0, q(1))], vec![q(1)])
            .unwrap();
        assert_eq!(FinDimAlgebra::from_toml(&half.to_toml()).unwrap(), half);
        assert!(matches!(
            FinDimAlgebra::from_toml("labels = 3"),
            Err(AlgebraError::Parse(_))
        ));
    }

    #[test]
    fn hh0_counts() {
        assert_eq!(hh0(&dual_numbers()).0, 2);
        assert_eq!(hh0(&FinDimAlgebra::matrix_algebra(2)).0, 1);
        for k in 1..5 {
            assert_eq!(hh0(&FinDimAlgebra::truncated_polynomial(k)).0, k);
        }
        assert_eq!(center(&FinDimAlgebra::matrix_algebra(2)).len(), 1);
    }

    #[test]
    fn socles() {
        for k in 1..5 {
            let a = FinDimAlgebra::truncated_polynomial(k);
            let s = socle_algebra(&a);
            assert_eq!(s.len(), 1);
            assert_eq!(
                QMatrix::from_rows(vec![s[0].clone(), a.basis_vector(k - 1)]).rank(),
                1
            );
        }
        assert_eq!(socle_algebra(&FinDimAlgebra::matrix_algebra(2)).len(), 4);
    }

    #[test]
    fn frobenius_verdicts() {
        let a = FinDimAlgebra::truncated_polynomial(3);
        // s(a^i, a^j) = [i + j = 2]
        let mut g = QMatrix::zeros(3, 3);
        for i in 0..3 {
            g[(i, 2 - i)] = q(1);
        }
        assert_eq!(check_frobenius(&a, &g), FrobeniusVerdict::Ok);
        assert_eq!(
            check_frobenius(&a, &QMatrix::zeros(3, 3)),
            FrobeniusVerdict::Degenerate
        );
        let mut h = QMatrix::identity(3);
        h[(0, 1)] = qf(1, 2);
        assert!(matches!(
            check_frobenius(&a, &h),
            FrobeniusVerdict::NonInvariant { .. }
        ));
    }
}

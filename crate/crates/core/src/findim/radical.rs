use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{center, to_sparse, FinDimAlgebra};
use crate::linalg::{Echelon, QMatrix, SparseVec};
use crate::Q;

/// Sizes `j` of the matrix blocks `Mat_j(Q)` of the semisimple quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Blocks {
    Split(Vec<usize>),
    NotSplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalReport {
    /// Basis of the Jacobson radical.
    pub radical: Vec<Vec<Q>>,
    pub blocks: Blocks,
}

/// Jacobson radical as the kernel of the trace form `Tr(L_{xy})`, and the
/// block structure of the quotient by it.
pub fn radical_and_blocks(a: &FinDimAlgebra) -> RadicalReport {
    let d = a.dim();
    if d == 0 {
        return RadicalReport {
            radical: Vec::new(),
            blocks: Blocks::Split(Vec::new()),
        };
    }
    let traces: Vec<Q> = (0..d)
        .map(|k| (0..d).map(|l| a.product(k, l)[l].clone()).sum())
        .collect();
    let mut gram = QMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            gram[(i, j)] = a
                .product(i, j)
                .iter()
                .zip(&traces)
                .map(|(c, t)| c * t)
                .sum();
        }
    }
    let radical = gram.kernel();
    let quotient = quotient_by(a, &radical);
    RadicalReport {
        radical,
        blocks: semisimple_blocks(&quotient),
    }
}

/// `A / I` for a two-sided ideal `I` given by a basis.
fn quotient_by(a: &FinDimAlgebra, ideal: &[Vec<Q>]) -> FinDimAlgebra {
    let d = a.dim();
    let mut span = Echelon::new();
    for v in ideal {
        let _ = span.insert(to_sparse(v), SparseVec::new());
    }
    let mut complement = Vec::new();
    for i in 0..d {
        if span
            .insert(to_sparse(&a.basis_vector(i)), SparseVec::new())
            .is_ok()
        {
            complement.push(i);
        }
    }
    let mut cols: Vec<Vec<Q>> = complement.iter().map(|&i| a.basis_vector(i)).collect();
    cols.extend(ideal.iter().cloned());
    let inv = QMatrix::from_cols(&cols, d)
        .inverse()
        .expect("complement and ideal span the algebra");
    let m = complement.len();
    let project = |v: &[Q]| -> Vec<Q> { inv.mul_vec(v)[..m].to_vec() };
    let mut table = Vec::with_capacity(m * m);
    for &i in &complement {
        for &j in &complement {
            table.push(project(a.product(i, j)));
        }
    }
    let labels = complement.iter().map(|&i| a.labels()[i].clone()).collect();
    FinDimAlgebra::new(labels, table, project(a.unit()))
        .expect("quotient by an ideal is an algebra")
}

/// Subalgebra spanned by independent `vectors`, with its own unit.
fn subalgebra(a: &FinDimAlgebra, vectors: &[Vec<Q>], unit: &[Q]) -> Option<FinDimAlgebra> {
    let d = a.dim();
    let m = vectors.len();
    let basis = QMatrix::from_cols(vectors, d);
    let coords = |v: &[Q]| basis.solve(v);
    let mut table = Vec::with_capacity(m * m);
    for u in vectors {
        for v in vectors {
            table.push(coords(&a.mul(u, v))?);
        }
    }
    let labels = (0..m).map(|i| format!("b{i}")).collect();
    FinDimAlgebra::new(labels, table, coords(unit)?).ok()
}

fn semisimple_blocks(s: &FinDimAlgebra) -> Blocks {
    if s.dim() == 0 {
        return Blocks::Split(Vec::new());
    }
    let z = center(s);
    let idempotents = if z.len() == 1 {
        vec![s.unit().to_vec()]
    } else {
        match central_idempotents(s, &z) {
            Some(e) => e,
            None => return Blocks::NotSplit,
        }
    };
    let mut sizes = Vec::new();
    for e in &idempotents {
        let l = s.left_matrix(e);
        let (rref, pivots) = l.transpose().rref();
        let vectors: Vec<Vec<Q>> = (0..pivots.len()).map(|r| rref.row(r)).collect();
        let Some(block) = subalgebra(s, &vectors, e) else {
            return Blocks::NotSplit;
        };
        let n = block.dim();
        let j = n.sqrt();
        if j * j != n || !block_is_split(&block, j) {
            return Blocks::NotSplit;
        }
        sizes.push(j);
    }
    sizes.sort_unstable();
    Blocks::Split(sizes)
}

/// Primitive idempotents of a center that is a product of copies of `Q`.
fn central_idempotents(s: &FinDimAlgebra, z: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let m = z.len();
    for c in 1..=20i64 {
        let mut elt = vec![Q::zero(); s.dim()];
        let mut w = Q::one();
        for v in z {
            for (e, x) in elt.iter_mut().zip(v) {
                *e += &w * x;
            }
            w *= Q::from_integer(BigInt::from(c));
        }
        let mp = minimal_polynomial(&s.left_matrix(&elt));
        if mp.len() - 1 != m {
            continue;
        }
        let roots = rational_roots(&mp);
        if roots.len() != m {
            return None;
        }
        let mut out = Vec::with_capacity(m);
        for (k, lk) in roots.iter().enumerate() {
            let mut e = s.unit().to_vec();
            for (l, ll) in roots.iter().enumerate() {
                if l == k {
                    continue;
                }
                let factor: Vec<Q> = elt
                    .iter()
                    .zip(s.unit())
                    .map(|(x, u)| (x - ll * u) / (lk - ll))
                    .collect();
                e = s.mul(&e, &factor);
            }
            out.push(e);
        }
        return Some(out);
    }
    None
}

/// Some element has `j` distinct rational eigenvalues.
fn block_is_split(b: &FinDimAlgebra, j: usize) -> bool {
    if j <= 1 {
        return true;
    }
    let n = b.dim();
    let mut candidates: Vec<Vec<Q>> = (0..n).map(|i| b.basis_vector(i)).collect();
    for i in 0..n {
        for k in 0..n {
            if i != k {
                let mut v = b.basis_vector(i);
                v[k] = Q::from_integer(2.into());
                candidates.push(v);
            }
        }
    }
    for c in 1..=10i64 {
        let mut v = vec![Q::zero(); n];
        let mut w = Q::one();
        for x in v.iter_mut() {
            *x = w.clone();
            w *= Q::from_integer(c.into());
        }
        candidates.push(v);
    }
    candidates.iter().any(|v| {
        let mp = minimal_polynomial(&b.left_matrix(v));
        // on Mat_j acting on itself, eigenvalue multiplicities are multiples of j
        let roots = rational_roots(&mp);
        roots.len() >= j
    })
}

/// Monic minimal polynomial of a square matrix, coefficients in ascending degree.
pub fn minimal_polynomial(m: &QMatrix) -> Vec<Q> {
    let n = m.rows();
    let flatten = |a: &QMatrix| -> SparseVec {
        let mut v = SparseVec::new();
        for i in 0..n {
            for j in 0..n {
                if !a[(i, j)].is_zero() {
                    v.insert(i * n + j, a[(i, j)].clone());
                }
            }
        }
        v
    };
    let mut ech = Echelon::new();
    let mut power = QMatrix::identity(n);
    for k in 0..=n {
        let mut tag = SparseVec::new();
        tag.insert(k, Q::one());
        if let Err(rel) = ech.insert(flatten(&power), tag) {
            let lead = rel[&k].clone();
            return (0..=k)
                .map(|i| rel.get(&i).cloned().unwrap_or_else(Q::zero) / &lead)
                .collect();
        }
        power = power.mul(m);
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

/// Distinct rational roots of a polynomial given by ascending coefficients.
pub fn rational_roots(coeffs: &[Q]) -> Vec<Q> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    if ints.len() <= 1 {
        return roots;
    }
    if ints[0].is_zero() {
        roots.push(Q::zero());
        let shift = ints.iter().take_while(|c| c.is_zero()).count();
        ints.drain(..shift);
    }
    let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
        return roots;
    };
    let eval = |p: &BigInt, q: &BigInt| -> bool {
        // q^deg * f(p/q) = sum c_i p^i q^(deg - i)
        let deg = ints.len() - 1;
        let mut acc = BigInt::zero();
        for (i, c) in ints.iter().enumerate() {
            acc += c * p.pow(i as u32) * q.pow((deg - i) as u32);
        }
        acc.is_zero()
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let pp = BigInt::from(p) * sign;
                if eval(&pp, &BigInt::from(q)) {
                    roots.push(Q::new(pp, BigInt::from(q)));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

use num_traits::Zero;

use super::{AlgebraError, FinDimAlgebra};
use crate::linalg::{Echelon, SparseVec};
use crate::Q;

/// Largest cochain space dimension the solver will build.
pub const HOCHSCHILD_COCHAIN_CAP: usize = 200_000;

/// Dimensions of `HH^0, ..., HH^max_degree` from the normalized cochain
/// complex `Hom(Abar^{(x)n}, A)` with `Abar = A / Q 1`.
pub fn hochschild_cohomology_dims(
    a: &FinDimAlgebra,
    max_degree: usize,
) -> Result<Vec<usize>, AlgebraError> {
    let d = a.dim();
    if d == 0 {
        return Ok(vec![0; max_degree + 1]);
    }
    let a = unit_first(a)?;
    let cochain_dim = |n: usize| -> Option<usize> { (d - 1).checked_pow(n as u32)?.checked_mul(d) };
    for n in 0..=max_degree + 1 {
        match cochain_dim(n) {
            Some(c) if c <= HOCHSCHILD_COCHAIN_CAP => {}
            _ => {
                return Err(AlgebraError::Budget(format!(
                    "cochain space in degree {n} exceeds {HOCHSCHILD_COCHAIN_CAP}"
                )))
            }
        }
    }
    let ranks: Vec<usize> = (0..=max_degree).map(|n| differential_rank(&a, n)).collect();
    Ok((0..=max_degree)
        .map(|n| {
            let incoming = if n == 0 { 0 } else { ranks[n - 1] };
            cochain_dim(n).unwrap() - ranks[n] - incoming
        })
        .collect())
}

/// Same algebra in a basis whose first vector is the unit.
fn unit_first(a: &FinDimAlgebra) -> Result<FinDimAlgebra, AlgebraError> {
    let d = a.dim();
    let unit = a.unit();
    if (0..d).all(|i| {
        unit[i]
            == if i == 0 {
                Q::from_integer(1.into())
            } else {
                Q::zero()
            }
    }) {
        return Ok(a.clone());
    }
    let p = unit
        .iter()
        .position(|c| !c.is_zero())
        .expect("a nonzero algebra has a nonzero unit");
    let mut vectors = vec![unit.to_vec()];
    let mut labels = vec!["1".to_string()];
    for i in (0..d).filter(|&i| i != p) {
        vectors.push(a.basis_vector(i));
        labels.push(a.labels()[i].clone());
    }
    a.change_basis(&vectors, labels)
}

/// Index of a cochain coordinate: tuple over `1..d` (base `d - 1` digits) and output `k`.
fn encode(tuple: &[usize], k: usize, d: usize) -> usize {
    let mut idx = 0;
    for &t in tuple {
        idx = idx * (d - 1) + (t - 1);
    }
    idx * d + k
}

fn tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..d).map(move |x| {
                    let mut v = t.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn differential_rank(a: &FinDimAlgebra, n: usize) -> usize {
    let d = a.dim();
    if d == 1 {
        return 0;
    }
    let mut ech = Echelon::new();
    for t in tuples(n, d) {
        for k in 0..d {
            let col = coboundary_column(a, &t, k);
            let _ = ech.insert(col, SparseVec::new());
        }
    }
    ech.rank()
}

fn add_to(v: &mut SparseVec, idx: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(idx).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&idx);
    }
}

/// `delta f` for the cochain `f(e_t) = e_k`, zero on other tuples.
fn coboundary_column(a: &FinDimAlgebra, t: &[usize], k: usize) -> SparseVec {
    let d = a.dim();
    let n = t.len();
    let mut out = SparseVec::new();
    let sign = |i: usize| {
        if i.is_multiple_of(2) {
            Q::from_integer(1.into())
        } else {
            Q::from_integer((-1).into())
        }
    };
    // a_1 f(a_2, ..., a_{n+1})
    for s1 in 1..d {
        let mut s = vec![s1];
        s.extend_from_slice(t);
        for (l, c) in a.product(s1, k).iter().enumerate() {
            add_to(&mut out, encode(&s, l, d), c.clone());
        }
    }
    // (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
    for last in 1..d {
        let mut s = t.to_vec();
        s.push(last);
        for (l, c) in a.product(k, last).iter().enumerate() {
            add_to(&mut out, encode(&s, l, d), sign(n + 1) * c);
        }
    }
    // (-1)^i f(..., a_i a_{i+1}, ...)
    for i in 1..=n {
        for x in 1..d {
            for y in 1..d {
                let c = &a.product(x, y)[t[i - 1]];
                if c.is_zero() {
                    continue;
                }
                let mut s = t[..i - 1].to_vec();
                s.push(x);
                s.push(y);
                s.extend_from_slice(&t[i..]);
                add_to(&mut out, encode(&s, k, d), sign(i) * c);
            }
        }
    }
    out
}

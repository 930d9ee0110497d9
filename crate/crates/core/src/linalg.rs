//! Exact linear algebra over the rationals.
//!
//! [`QMatrix`] is a small dense matrix with Gauss–Jordan elimination.
//! [`Echelon`] is an incremental sparse row-echelon form that remembers, for
//! every stored row, which tracked input vectors it was built from; that is
//! what the homotopy and contraction-algebra solvers use to produce witnesses.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Q;

pub type SparseVec = BTreeMap<usize, Q>;

/// `a += c * b`, dropping cancelled entries.
pub fn axpy(a: &mut SparseVec, c: &Q, b: &SparseVec) {
    for (k, v) in b {
        let e = a.entry(*k).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> QMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        QMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Q>], nrows: usize) -> QMatrix {
        let mut m = QMatrix::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
struct Row {
    entries: SparseVec,
    tag: SparseVec,
}

/// Incremental sparse row-echelon form with provenance tags.
///
/// Every stored row has a leading coefficient of one at its pivot column and
/// satisfies `row = sum_k tag[k] * input_k`, where `input_k` are the vectors
/// that were inserted with a nonzero tag. Vectors inserted with an empty tag
/// act as an untracked subspace that is quotiented out.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot_of: HashMap<usize, usize>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after removing the row space.
    pub residual: SparseVec,
    /// Tag combination of the rows that were subtracted.
    pub combination: SparseVec,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Reduces `v`; afterwards `v = residual + sum(rows used)`.
    pub fn reduce(&self, mut v: SparseVec) -> Reduction {
        let mut combination = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.pivot_of.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, coeff)) = next else { break };
            let row = &self.rows[self.pivot_of[&c]];
            axpy(&mut v, &-coeff.clone(), &row.entries);
            axpy(&mut combination, &coeff, &row.tag);
            cursor = c + 1;
        }
        Reduction {
            residual: v,
            combination,
        }
    }

    /// Inserts `v` with provenance `tag`. Returns the pivot column if `v` was
    /// independent of the current rows, otherwise the combination expressing it.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> Result<usize, SparseVec> {
        let Reduction {
            residual,
            combination,
        } = self.reduce(v);
        let mut tag = tag;
        axpy(&mut tag, &-Q::one(), &combination);
        let Some((&pivot, lead)) = residual.iter().next() else {
            // v - combination = 0, i.e. `tag` is now a relation among the inputs
            return Err(tag);
        };
        let inv = lead.recip();
        let entries: SparseVec = residual.iter().map(|(k, x)| (*k, x * &inv)).collect();
        let tag: SparseVec = tag.iter().map(|(k, x)| (*k, x * &inv)).collect();
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(Row { entries, tag });
        Ok(pivot)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).residual.is_empty()
    }
}

/// Exact rank of a set of vectors by fraction-free elimination.
///
/// Vectors are scaled to primitive integer rows; elimination runs in `i128`
/// and falls back to [`Echelon`] if any intermediate value overflows.
pub fn rank_of(vectors: &[SparseVec]) -> usize {
    match int_rank(vectors) {
        Some(r) => r,
        None => {
            let mut e = Echelon::new();
            for v in vectors {
                let _ = e.insert(v.clone(), SparseVec::new());
            }
            e.rank()
        }
    }
}

type IntRow = Vec<(usize, i128)>;

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integer row proportional to `v`, primitive with positive leading entry.
fn to_int_row(v: &SparseVec) -> Option<IntRow> {
    let mut lcm = BigInt::one();
    for c in v.values() {
        lcm = lcm.lcm(c.denom());
    }
    let row: Option<IntRow> = v
        .iter()
        .map(|(k, c)| {
            i128::try_from(c.numer() * (&lcm / c.denom()))
                .ok()
                .map(|x| (*k, x))
        })
        .collect();
    row.map(normalize)
}

fn normalize(mut row: IntRow) -> IntRow {
    let g = row.iter().fold(0i128, |g, (_, x)| gcd_i128(g, *x));
    let sign = if row.first().is_some_and(|(_, x)| *x < 0) {
        -1
    } else {
        1
    };
    if g > 1 || sign < 0 {
        for (_, x) in &mut row {
            *x = *x / g * sign;
        }
    }
    row
}

/// `a * v - b * p`, or `None` on overflow.
fn combine_rows(a: i128, v: &IntRow, b: i128, p: &IntRow) -> Option<IntRow> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let (k, x) = match (v.get(i), p.get(j)) {
            (Some(&(kv, xv)), Some(&(kp, xp))) if kv == kp => {
                i += 1;
                j += 1;
                (kv, a.checked_mul(xv)?.checked_sub(b.checked_mul(xp)?)?)
            }
            (Some(&(kv, xv)), Some(&(kp, _))) if kv < kp => {
                i += 1;
                (kv, a.checked_mul(xv)?)
            }
            (Some(&(kv, xv)), None) => {
                i += 1;
                (kv, a.checked_mul(xv)?)
            }
            (_, Some(&(kp, xp))) => {
                j += 1;
                (kp, b.checked_mul(xp)?.checked_neg()?)
            }
            (None, None) => unreachable!(),
        };
        if x != 0 {
            out.push((k, x));
        }
    }
    Some(out)
}

fn int_rank(vectors: &[SparseVec]) -> Option<usize> {
    let mut pivots: HashMap<usize, IntRow> = HashMap::new();
    // sparse rows first limits fill-in
    let mut order: Vec<&SparseVec> = vectors.iter().collect();
    order.sort_by_key(|v| v.len());
    for v in order {
        let mut row = to_int_row(v)?;
        while let Some(&(c, x)) = row.first() {
            let Some(p) = pivots.get(&c) else { break };
            let g = gcd_i128(p[0].1, x);
            row = normalize(combine_rows(p[0].1 / g, &row, x / g, p)?);
        }
        if let Some(&(c, _)) = row.first() {
            pivots.insert(c, row);
        }
    }
    Some(pivots.len())
}

const RANK_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(RANK_PRIME)) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, RANK_PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn to_mod(c: &Q) -> Option<u64> {
    let p = BigInt::from(RANK_PRIME);
    let d = c.denom().mod_floor(&p);
    if d.is_zero() {
        return None;
    }
    let n = u64::try_from(c.numer().mod_floor(&p)).ok()?;
    Some(mul_mod(n, inv_mod(u64::try_from(d).ok()?)))
}

/// Rank modulo the prime `2^61 - 1`; never exceeds the rank over the rationals.
/// `None` if a denominator vanishes modulo the prime.
pub fn rank_mod_prime_lower_bound(vectors: &[SparseVec]) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut order: Vec<&SparseVec> = vectors.iter().collect();
    order.sort_by_key(|v| v.len());
    for v in order {
        let mut row: Vec<(usize, u64)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            let x = to_mod(c)?;
            if x != 0 {
                row.push((*k, x));
            }
        }
        while let Some(&(c, x)) = row.first() {
            let Some(p) = pivots.get(&c) else { break };
            // pivot rows are monic
            let neg = RANK_PRIME - x;
            let mut out = Vec::with_capacity(row.len() + p.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < p.len() {
                let (k, y) = match (row.get(i), p.get(j)) {
                    (Some(&(kr, yr)), Some(&(kp, yp))) if kr == kp => {
                        i += 1;
                        j += 1;
                        (kr, (yr + mul_mod(neg, yp)) % RANK_PRIME)
                    }
                    (Some(&(kr, yr)), Some(&(kp, _))) if kr < kp => {
                        i += 1;
                        (kr, yr)
                    }
                    (Some(&(kr, yr)), None) => {
                        i += 1;
                        (kr, yr)
                    }
                    (_, Some(&(kp, yp))) => {
                        j += 1;
                        (kp, mul_mod(neg, yp))
                    }
                    (None, None) => unreachable!(),
                };
                if y != 0 {
                    out.push((k, y));
                }
            }
            row = out;
        }
        if let Some(&(c, x)) = row.first() {
            let inv = inv_mod(x);
            pivots.insert(
                c,
                row.into_iter().map(|(k, y)| (k, mul_mod(y, inv))).collect(),
            );
        }
    }
    Some(pivots.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn dense_rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let x = a.solve(&[q(6), q(12), q(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(6), q(12), q(2)]);
        assert!(a.solve(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn dense_det_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), q(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), q(-1));
        assert_eq!(m(&[&[3]]).inverse().unwrap()[(0, 0)], qf(1, 3));
    }

    #[test]
    fn echelon_tracks_provenance() {
        let mut e = Echelon::new();
        let v = |xs: &[(usize, i64)]| xs.iter().map(|&(k, x)| (k, q(x))).collect::<SparseVec>();
        assert!(e.insert(v(&[(0, 1), (1, 1)]), v(&[(0, 1)])).is_ok());
        assert!(e.insert(v(&[(1, 2), (2, 1)]), v(&[(1, 1)])).is_ok());
        // (1,3,1) = g0 + g1
        let rel = e
            .insert(v(&[(0, 1), (1, 3), (2, 1)]), v(&[(2, 1)]))
            .unwrap_err();
        assert_eq!(rel, v(&[(0, -1), (1, -1), (2, 1)]));
        let red = e.reduce(v(&[(0, 2), (1, 2)]));
        assert!(red.residual.is_empty());
        assert_eq!(red.combination, v(&[(0, 2)]));
        // untracked rows are quotiented without contributing to the combination
        let mut f = Echelon::new();
        f.insert(v(&[(0, 1)]), SparseVec::new()).unwrap();
        f.insert(v(&[(0, 1), (1, 1)]), v(&[(7, 1)])).unwrap();
        let red = f.reduce(v(&[(0, 5), (1, 2)]));
        assert!(red.residual.is_empty());
        assert_eq!(red.combination, v(&[(7, 2)]));
    }

    #[test]
    fn integer_rank_falls_back_on_overflow() {
        let big = Q::from_integer(BigInt::from(10).pow(40));
        let v = |xs: Vec<(usize, Q)>| xs.into_iter().collect::<SparseVec>();
        let rows = vec![
            v(vec![(0, big.clone()), (1, q(1))]),
            v(vec![(0, q(1)), (1, big.clone())]),
            v(vec![(0, qf(1, 3))]),
        ];
        assert!(int_rank(&rows).is_none());
        assert_eq!(rank_of(&rows), 2);
    }

    proptest::proptest! {
        #[test]
        fn integer_rank_matches_dense(entries in proptest::collection::vec(-3i64..=3, 20), extra in -5i64..5) {
            let mut rows: Vec<Vec<Q>> = entries.chunks(5).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            // a dependent row with rational coefficients
            let dep: Vec<Q> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a * qf(extra, 7) + b * qf(1, 2)).collect();
            rows.push(dep);
            let dense = QMatrix::from_rows(rows.clone()).rank();
            let sparse: Vec<SparseVec> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect())
                .collect();
            proptest::prop_assert_eq!(rank_of(&sparse), dense);
            proptest::prop_assert_eq!(rank_mod_prime_lower_bound(&sparse), Some(dense));
        }
    }
}

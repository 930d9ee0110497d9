//! Truncated integer power series and the Gopakumar–Vafa product formula
//!
//! `1 + sum_j DT_j t^j = prod_j (1 - (-1)^j t^j)^(j n_j)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{parse_poly, MonomialOrder, ParseError, RingSpec};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("constant term must be 1, found {0}")]
    ConstantTerm(BigInt),
    #[error("n_{index} = {value} is not an integer")]
    NonIntegral { index: usize, value: Q },
    #[error("coefficient of t^{degree} is not an integer: {value}")]
    NonIntegerCoefficient { degree: u32, value: Q },
    #[error("n_{0} does not fit in 64 bits")]
    Overflow(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Coefficients `c_0..c_T` of a series known modulo `t^(T+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSeries {
    coefficients: Vec<BigInt>,
}

impl IntSeries {
    /// Pads with zeros or truncates to order `order`.
    pub fn new(mut coefficients: Vec<BigInt>, order: usize) -> IntSeries {
        coefficients.resize(order + 1, BigInt::zero());
        IntSeries { coefficients }
    }

    pub fn one(order: usize) -> IntSeries {
        IntSeries::new(vec![BigInt::one()], order)
    }

    /// Parses a polynomial in the single variable `t`; terms above `order` are dropped.
    pub fn parse(text: &str, order: usize) -> Result<IntSeries, SeriesError> {
        let ring = series_ring();
        let p = parse_poly(text, &ring)?;
        let mut coefficients = vec![BigInt::zero(); order + 1];
        for (m, c) in p.terms() {
            let degree = m.degree();
            if !c.is_integer() {
                return Err(SeriesError::NonIntegerCoefficient {
                    degree,
                    value: c.clone(),
                });
            }
            if let Some(slot) = coefficients.get_mut(degree as usize) {
                *slot = c.to_integer();
            }
        }
        Ok(IntSeries { coefficients })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, j: usize) -> BigInt {
        self.coefficients.get(j).cloned().unwrap_or_default()
    }

    /// Largest `j` with `c_j != 0`.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        IntSeries { coefficients: out }
    }

    /// `(1 + c t^j)^m` for any integer `m`.
    pub fn binomial_factor(c: i64, j: usize, m: i64, order: usize) -> IntSeries {
        let mut out = vec![BigInt::zero(); order + 1];
        let c = BigInt::from(c);
        let m = BigInt::from(m);
        // binom(m, i) c^i by the ratio (m - i + 1) c / i
        let mut term = BigInt::one();
        let mut i = 0usize;
        while i * j <= order {
            out[i * j] = term.clone();
            if j == 0 {
                break;
            }
            term = term * (&m - BigInt::from(i)) * &c / BigInt::from(i + 1);
            if term.is_zero() {
                break;
            }
            i += 1;
        }
        IntSeries { coefficients: out }
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn series_ring() -> Arc<RingSpec> {
    RingSpec::new(&["t"], MonomialOrder::GlobalDegRevLex)
        .expect("a single variable is a valid ring")
}

/// Sign `e_j` with `1 - (-1)^j t^j = 1 + e_j t^j`.
fn factor_sign(j: usize) -> i64 {
    if j.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// `prod_j (1 - (-1)^j t^j)^(j n_j)` modulo `t^(order+1)`, with `n[0] = n_1`.
pub fn gv_expand(n: &[i64], order: usize) -> IntSeries {
    let mut out = IntSeries::one(order);
    for (idx, &nj) in n.iter().enumerate() {
        let j = idx + 1;
        if nj == 0 || j > order {
            continue;
        }
        out = out.mul(&IntSeries::binomial_factor(
            factor_sign(j),
            j,
            j as i64 * nj,
            order,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GvInversion {
    /// `n_1, n_2, ...` with trailing zeros removed.
    pub n: Vec<i64>,
    pub warnings: Vec<String>,
}

/// Recovers `n_j` for `j <= order` from the formal logarithm of `s`.
pub fn gv_invert(s: &IntSeries) -> Result<GvInversion, SeriesError> {
    if !s.coefficient(0).is_one() {
        return Err(SeriesError::ConstantTerm(s.coefficient(0)));
    }
    let order = s.order();
    let log = formal_log(s);
    let mut n: Vec<Q> = Vec::with_capacity(order);
    for k in 1..=order {
        // l_k = sum_{j | k} j^2 n_j / k * (-1)^(k/j + 1) e_j^(k/j)
        let mut rest = log[k].clone();
        for j in (1..k).filter(|j| k % j == 0) {
            let m = (k / j) as u32;
            let sign = (-1i64).pow(m + 1) * factor_sign(j).pow(m);
            rest -= &n[j - 1] * Q::new(BigInt::from((j * j) as i64 * sign), BigInt::from(k));
        }
        let nk = rest / Q::from_integer(BigInt::from(k as i64 * factor_sign(k)));
        if !nk.is_integer() {
            return Err(SeriesError::NonIntegral {
                index: k,
                value: nk,
            });
        }
        n.push(nk);
    }
    let mut out = Vec::with_capacity(n.len());
    let mut warnings = Vec::new();
    for (idx, v) in n.iter().enumerate() {
        let v = v
            .to_integer()
            .to_i64()
            .ok_or(SeriesError::Overflow(idx + 1))?;
        if v < 0 {
            warnings.push(format!("n_{} = {v} is negative", idx + 1));
        }
        out.push(v);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(GvInversion { n: out, warnings })
}

/// `log s` modulo `t^(order+1)` via `s' = s (log s)'`; requires `c_0 = 1`.
fn formal_log(s: &IntSeries) -> Vec<Q> {
    let order = s.order();
    let c: Vec<Q> = s
        .coefficients
        .iter()
        .map(|x| Q::from_integer(x.clone()))
        .collect();
    // d_k = coefficient of t^(k-1) in (log s)', solved from k c_k = sum_{i=1..k} d_i c_{k-i}
    let mut d = vec![Q::zero(); order + 1];
    for k in 1..=order {
        let mut v = Q::from_integer(BigInt::from(k)) * &c[k];
        for i in 1..k {
            v -= &d[i] * &c[k - i];
        }
        d[k] = v;
    }
    let mut log = vec![Q::zero(); order + 1];
    for k in 1..=order {
        log[k] = &d[k] / Q::from_integer(BigInt::from(k));
    }
    log
}

/// `sum_j j^2 n_j`.
pub fn dim_from_gv(n: &[i64]) -> i64 {
    n.iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) * (i + 1)) as i64 * v)
        .sum()
}

/// `sum_j n_j`, the expected dimension of `HH_0`.
pub fn hh0_from_gv(n: &[i64]) -> i64 {
    n.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionCheck {
    pub dim: i64,
    /// Degree of the expanded product, if it is a polynomial within the truncation.
    pub degree: Option<usize>,
    pub top_coefficient: BigInt,
}

impl DimensionCheck {
    /// Degree equals `dim` and the top coefficient is a unit.
    pub fn is_consistent(&self) -> bool {
        self.degree.map(|d| d as i64) == Some(self.dim) && self.top_coefficient.abs().is_one()
    }
}

/// `dim_from_gv` together with the degree and top coefficient of `gv_expand(n)`.
pub fn dim_check(n: &[i64]) -> DimensionCheck {
    let dim = dim_from_gv(n);
    let order = dim.max(0) as usize + 2;
    let s = gv_expand(n, order);
    let degree = s.degree().filter(|&d| d + 2 <= order);
    let top_coefficient = degree.map(|d| s.coefficient(d)).unwrap_or_default();
    DimensionCheck {
        dim,
        degree,
        top_coefficient,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Pascal's triangle, independent of the ratio recurrence.
    fn pascal(k: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..k {
            let mut next = vec![BigInt::one()];
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            next.push(BigInt::one());
            row = next;
        }
        row
    }

    /// Repeated multiplication by the polynomial factors.
    fn naive_expand(n: &[i64], order: usize) -> IntSeries {
        let mut out = IntSeries::one(order);
        for (idx, &nj) in n.iter().enumerate() {
            let j = idx + 1;
            let mut factor = vec![BigInt::zero(); j + 1];
            factor[0] = BigInt::one();
            factor[j] = BigInt::from(if j % 2 == 0 { -1 } else { 1 });
            let factor = IntSeries::new(factor, order);
            for _ in 0..j as i64 * nj {
                out = out.mul(&factor);
            }
        }
        out
    }

    #[test]
    fn parse_and_display() {
        let s = IntSeries::parse("1 + 3*t + 3*t^2 + t^3", 5).unwrap();
        assert_eq!(s.to_string(), "[1, 3, 3, 1, 0, 0]");
        assert_eq!(s.degree(), Some(3));
        assert_eq!(
            IntSeries::parse("(1+t)^4", 2).unwrap().coefficients(),
            ints(&[1, 4, 6])
        );
        assert!(matches!(
            IntSeries::parse("1 + 1/2*t", 3),
            Err(SeriesError::NonIntegerCoefficient { .. })
        ));
        assert!(IntSeries::parse("1 + s", 3).is_err());
    }

    #[test]
    fn cubic_binomial() {
        let s = gv_expand(&[3], 6);
        assert_eq!(s.coefficients(), ints(&[1, 3, 3, 1, 0, 0, 0]));
        assert_eq!(
            gv_invert(&IntSeries::parse("(1+t)^3", 8).unwrap())
                .unwrap()
                .n,
            vec![3]
        );
    }

    #[test]
    fn laufer_series() {
        let s = gv_expand(&[5, 1], 12);
        assert_eq!(s, naive_expand(&[5, 1], 12));
        assert_eq!(s.degree(), Some(9));
        assert_eq!(s.coefficient(9), BigInt::one());
        assert_eq!(s.coefficient(1), BigInt::from(5));
        assert_eq!(
            s.coefficients(),
            ints(&[1, 5, 8, 0, -14, -14, 0, 8, 5, 1, 0, 0, 0])
        );
        let inv = gv_invert(&s).unwrap();
        assert_eq!(inv.n, vec![5, 1]);
        assert!(inv.warnings.is_empty());
        assert_eq!(dim_from_gv(&[5, 1]), 9);
        assert_eq!(hh0_from_gv(&[5, 1]), 6);
        assert!(dim_check(&[5, 1]).is_consistent());
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(gv_expand(&[], 4), IntSeries::one(4));
        assert!(gv_invert(&IntSeries::one(4)).unwrap().n.is_empty());
        assert_eq!(dim_from_gv(&[]), 0);
        assert!(dim_check(&[]).is_consistent());
    }

    #[test]
    fn invert_errors_and_warnings() {
        assert!(matches!(
            gv_invert(&IntSeries::parse("2 + t", 3).unwrap()),
            Err(SeriesError::ConstantTerm(_))
        ));
        // 1 + t^2 needs 2 n_2 e_2 = 1
        assert!(matches!(
            gv_invert(&IntSeries::parse("1 + t^2", 4).unwrap()),
            Err(SeriesError::NonIntegral { index: 2, .. })
        ));
        let inv = gv_invert(&gv_expand(&[-2, 1], 8)).unwrap();
        assert_eq!(inv.n, vec![-2, 1]);
        assert_eq!(inv.warnings.len(), 1);
    }

    #[test]
    fn binomial_rows() {
        for k in 0..=12usize {
            assert_eq!(
                gv_expand(&[k as i64], k + 3).coefficients()[..=k],
                pascal(k)[..]
            );
            assert!(dim_check(&[k as i64]).is_consistent());
            assert_eq!(dim_from_gv(&[k as i64]), k as i64);
        }
    }

    proptest! {
        #[test]
        fn round_trip(n in proptest::collection::vec(0i64..4, 0..4)) {
            let order = dim_from_gv(&n) as usize + 2;
            let s = gv_expand(&n, order);
            prop_assert_eq!(&s, &naive_expand(&n, order));
            let mut trimmed = n.clone();
            while trimmed.last() == Some(&0) {
                trimmed.pop();
            }
            prop_assert_eq!(gv_invert(&s).unwrap().n, trimmed);
            let check = dim_check(&n);
            prop_assert!(check.is_consistent());
        }

        #[test]
        fn signed_round_trip(n in proptest::collection::vec(-3i64..4, 0..4), order in 0usize..10) {
            let s = gv_expand(&n, order);
            let mut expected: Vec<i64> = n.iter().take(order).copied().collect();
            while expected.last() == Some(&0) {
                expected.pop();
            }
            prop_assert_eq!(gv_invert(&s).unwrap().n, expected);
        }
    }
}

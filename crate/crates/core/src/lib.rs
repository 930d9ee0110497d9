//! Exact computer algebra for isolated hypersurface singularities.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse multivariate polynomials over the rationals, monomial
//!   orderings and the expression parser.
//! - [`stdbasis`]: Buchberger (global ordering) and Mora (local ordering)
//!   standard bases, normal forms, cofactor certificates and quotient bases.
//! - [`milnor`]: Milnor algebras, Grothendieck residues via the
//!   transformation law, the residue pairing and quasi-homogeneity.
//! - [`mf`]: matrix factorizations, Chern characters, the boundary-bulk map,
//!   Euler pairings, homotopy decisions and contraction algebras.
//! - [`findim`]: finite-dimensional algebras, noncommutative presentations,
//!   radicals, socles, HH₀ and Hochschild cohomology.
//! - [`series`]: truncated integer power series for the Gopakumar–Vafa
//!   product formula.

pub mod findim;
pub mod linalg;
pub mod mf;
pub mod milnor;
pub mod poly;
pub mod series;
pub mod stdbasis;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

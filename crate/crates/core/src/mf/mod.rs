//! Matrix factorizations of a potential and their morphisms.
//!
//! A factorization has free modules `F0`, `F1` of equal rank `r` and maps
//! `delta1: F1 -> F0`, `delta0: F0 -> F1` with `delta0 delta1 = delta1 delta0 = W`.
//! As a single odd endomorphism of `F0 + F1`, rows and columns ordered
//! `(F0, F1)`, the differential is `[[0, delta1], [delta0, 0]]`.

mod jets;
mod trace;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::findim::AlgebraError;
use crate::milnor::MilnorError;
use crate::poly::parse::{parse_expr, ExprTarget};
use crate::poly::{
    parse_poly, MonomialOrder, ParseError, ParseErrorKind, Poly, PolyMatrix, RingSpec,
};
use crate::Q;

pub use jets::{
    contraction_algebra, contraction_algebra_with_options, homotopic, ContractionAlgebraResult,
    Grading, HomotopyVerdict, JetOptions, DEFAULT_JET_ORDER,
};
pub use trace::{
    boundary_bulk, boundary_bulk_with_ordering, chern_character, derivative_product, euler_pairing,
    frobenius_pairing, supertrace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("inputs live over different variables")]
    RingMismatch,
    #[error("factorizations have different potentials")]
    PotentialMismatch,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("expected an {0} morphism")]
    Parity(Parity),
    #[error("Euler pairing {0} is not an integer")]
    NonIntegerEuler(Q),
    #[error("jet computation did not stabilize: dimensions {dims:?}, Euler pairing {chi}")]
    NotStabilized { dims: Vec<(u32, usize)>, chi: i64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    potential: Poly,
    delta1: PolyMatrix,
    delta0: PolyMatrix,
}

/// Which composition identity an entry violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// `delta0 * delta1 = W`
    Delta0Delta1,
    /// `delta1 * delta0 = W`
    Delta1Delta0,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: Composition,
    pub row: usize,
    pub col: usize,
    /// Entry of the composition minus `W` times the identity.
    pub residual: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl MatrixFactorization {
    /// Checks shapes and rings; the composition identities are checked by [`MatrixFactorization::validate`].
    pub fn new(
        potential: Poly,
        delta1: PolyMatrix,
        delta0: PolyMatrix,
    ) -> Result<MatrixFactorization, MfError> {
        let r = delta1.rows();
        if !delta1.is_square() || !delta0.is_square() || delta0.rows() != r {
            return Err(MfError::Shape(format!(
                "delta1 is {}x{}, delta0 is {}x{}",
                delta1.rows(),
                delta1.cols(),
                delta0.rows(),
                delta0.cols()
            )));
        }
        let vars = potential.ring().variables();
        if delta1.ring().variables() != vars || delta0.ring().variables() != vars {
            return Err(MfError::RingMismatch);
        }
        let ring = potential.ring().clone();
        Ok(MatrixFactorization {
            delta1: delta1.map(|p| p.with_ring(&ring)),
            delta0: delta0.map(|p| p.with_ring(&ring)),
            potential,
        })
    }

    /// The rank-zero factorization.
    pub fn zero(potential: Poly) -> MatrixFactorization {
        let ring = potential.ring().clone();
        MatrixFactorization {
            delta1: PolyMatrix::zeros(&ring, 0, 0),
            delta0: PolyMatrix::zeros(&ring, 0, 0),
            potential,
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        self.potential.ring()
    }

    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    pub fn rank(&self) -> usize {
        self.delta1.rows()
    }

    /// `F1 -> F0`.
    pub fn delta1(&self) -> &PolyMatrix {
        &self.delta1
    }

    /// `F0 -> F1`.
    pub fn delta0(&self) -> &PolyMatrix {
        &self.delta0
    }

    /// The odd differential `[[0, delta1], [delta0, 0]]` on `F0 + F1`.
    pub fn delta(&self) -> PolyMatrix {
        let r = self.rank();
        let mut d = PolyMatrix::zeros(self.ring(), 2 * r, 2 * r);
        d.set_block(0, r, &self.delta1);
        d.set_block(r, 0, &self.delta0);
        d
    }

    pub fn validate(&self) -> ValidationReport {
        let r = self.rank();
        let w = PolyMatrix::scalar(self.ring(), r, &self.potential);
        let mut violations = Vec::new();
        for (identity, prod) in [
            (Composition::Delta0Delta1, &self.delta0 * &self.delta1),
            (Composition::Delta1Delta0, &self.delta1 * &self.delta0),
        ] {
            let diff = &prod - &w;
            for i in 0..r {
                for j in 0..r {
                    if !diff.get(i, j).is_zero() {
                        violations.push(Violation {
                            identity,
                            row: i,
                            col: j,
                            residual: diff.get(i, j).clone(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn direct_sum(&self, other: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
        self.check_same_potential(other)?;
        Ok(MatrixFactorization {
            potential: self.potential.clone(),
            delta1: self
                .delta1
                .direct_sum(&other.delta1.map(|p| p.with_ring(self.ring()))),
            delta0: self
                .delta0
                .direct_sum(&other.delta0.map(|p| p.with_ring(self.ring()))),
        })
    }

    fn check_same_potential(&self, other: &MatrixFactorization) -> Result<(), MfError> {
        if self.ring().variables() != other.ring().variables() {
            return Err(MfError::RingMismatch);
        }
        if self.potential != other.potential.with_ring(self.ring()) {
            return Err(MfError::PotentialMismatch);
        }
        Ok(())
    }

    /// Canonical text form.
    pub fn to_toml(&self) -> String {
        let rows = |m: &PolyMatrix| m.row_strings();
        let rec = MfRecord {
            vars: self.ring().variables().to_vec(),
            order: self.ring().order().name().to_string(),
            potential: self.potential.to_string(),
            rank: self.rank(),
            delta1: rows(&self.delta1),
            delta0: rows(&self.delta0),
        };
        toml::to_string(&rec).expect("factorization records always serialize")
    }

    pub fn from_toml(text: &str) -> Result<MatrixFactorization, MfError> {
        let rec: MfRecord = toml::from_str(text).map_err(|e| MfError::Format(e.to_string()))?;
        let order =
            MonomialOrder::from_str(&rec.order).map_err(|e| MfError::Format(e.to_string()))?;
        let ring = RingSpec::new(&rec.vars, order).map_err(|e| MfError::Format(e.to_string()))?;
        let potential = parse_poly(&rec.potential, &ring)
            .map_err(|e| MfError::Format(format!("potential: {e}")))?;
        let matrix = |name: &str, rows: &[Vec<String>]| -> Result<PolyMatrix, MfError> {
            if rows.len() != rec.rank || rows.iter().any(|r| r.len() != rec.rank) {
                return Err(MfError::Format(format!("{name} must be {0}x{0}", rec.rank)));
            }
            if rec.rank == 0 {
                return Ok(PolyMatrix::zeros(&ring, 0, 0));
            }
            PolyMatrix::parse(&ring, rows).map_err(|e| MfError::Format(format!("{name}: {e}")))
        };
        let delta1 = matrix("delta1", &rec.delta1)?;
        let delta0 = matrix("delta0", &rec.delta0)?;
        MatrixFactorization::new(potential, delta1, delta0)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MfRecord {
    vars: Vec<String>,
    order: String,
    potential: String,
    rank: usize,
    delta1: Vec<Vec<String>>,
    delta0: Vec<Vec<String>>,
}

/// Built-in families in the variables `x, y, z, w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `W = x^2 - y^{2k} + zw`
    CA1,
    /// `W = x^2 + y^3 + wz^2 + w^{2k+1} y`
    Laufer,
}

impl FromStr for Family {
    type Err = MfError;

    fn from_str(s: &str) -> Result<Family, MfError> {
        match s.to_ascii_lowercase().as_str() {
            "ca1" => Ok(Family::CA1),
            "laufer" => Ok(Family::Laufer),
            _ => Err(MfError::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::CA1 => "ca1",
            Family::Laufer => "laufer",
        })
    }
}

fn family_ring() -> Arc<RingSpec> {
    RingSpec::new(&["x", "y", "z", "w"], MonomialOrder::GlobalDegRevLex)
        .expect("fixed variable names are valid")
}

fn parse_fixed(ring: &Arc<RingSpec>, s: &str) -> Poly {
    parse_poly(s, ring).expect("built-in expressions parse")
}

fn matrix_fixed(ring: &Arc<RingSpec>, rows: &[&[String]]) -> PolyMatrix {
    PolyMatrix::from_rows(
        ring,
        rows.iter()
            .map(|r| r.iter().map(|s| parse_fixed(ring, s)).collect())
            .collect(),
    )
}

pub fn builtin_potential(family: Family, k: u32) -> Result<Poly, MfError> {
    if k == 0 {
        return Err(MfError::InvalidParameter("k must be at least 1".into()));
    }
    let ring = family_ring();
    Ok(match family {
        Family::CA1 => parse_fixed(&ring, &format!("x^2 - y^{} + z*w", 2 * k)),
        Family::Laufer => parse_fixed(&ring, &format!("x^2 + y^3 + w*z^2 + w^{}*y", 2 * k + 1)),
    })
}

pub fn builtin_family(family: Family, k: u32) -> Result<MatrixFactorization, MfError> {
    let w = builtin_potential(family, k)?;
    let ring = w.ring().clone();
    let s = |t: &str| {
        t.replace("{k}", &k.to_string())
            .replace("{k1}", &(k + 1).to_string())
    };
    let rows = |m: &[&[&str]]| -> Vec<Vec<String>> {
        m.iter().map(|r| r.iter().map(|t| s(t)).collect()).collect()
    };
    let (psi, phi) = match family {
        Family::CA1 => (
            rows(&[&["w", "-x - y^{k}"], &["x - y^{k}", "z"]]),
            rows(&[&["z", "x + y^{k}"], &["-x + y^{k}", "w"]]),
        ),
        Family::Laufer => (
            rows(&[
                &["x", "y", "z", "w^{k}"],
                &["-y^2", "x", "-y*w^{k}", "z"],
                &["-w*z", "w^{k1}", "x", "-y"],
                &["-y*w^{k1}", "-w*z", "y^2", "x"],
            ]),
            rows(&[
                &["x", "-y", "-z", "-w^{k}"],
                &["y^2", "x", "y*w^{k}", "-z"],
                &["w*z", "-w^{k1}", "x", "y"],
                &["y*w^{k1}", "w*z", "-y^2", "x"],
            ]),
        ),
    };
    let as_refs = |m: &Vec<Vec<String>>| -> PolyMatrix {
        let r: Vec<&[String]> = m.iter().map(|r| r.as_slice()).collect();
        matrix_fixed(&ring, &r)
    };
    MatrixFactorization::new(w, as_refs(&psi), as_refs(&phi))
}

/// The even endomorphisms `a`, `b` of the Laufer factorization, the same matrix on `F0` and `F1`.
pub fn laufer_generators(k: u32) -> Result<(MfMorphism, MfMorphism), MfError> {
    builtin_potential(Family::Laufer, k)?;
    let ring = family_ring();
    let m = |rows: [[&str; 4]; 4]| -> PolyMatrix {
        PolyMatrix::from_rows(
            &ring,
            rows.iter()
                .map(|r| r.iter().map(|s| parse_fixed(&ring, s)).collect())
                .collect(),
        )
    };
    let a = m([
        ["0", "1", "0", "0"],
        ["-y", "0", "0", "0"],
        ["0", "0", "0", "1"],
        ["0", "0", "-y", "0"],
    ]);
    let b = m([
        ["0", "0", "1", "0"],
        ["0", "0", "0", "-1"],
        ["-w", "0", "0", "0"],
        ["0", "w", "0", "0"],
    ]);
    Ok((
        MfMorphism::even(a.clone(), a)?,
        MfMorphism::even(b.clone(), b)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A morphism `F0 + F1 -> G0 + G1`.
///
/// Even: `first = alpha0: F0 -> G0`, `second = alpha1: F1 -> G1`.
/// Odd: `first = beta: F0 -> G1`, `second = beta': F1 -> G0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfMorphism {
    parity: Parity,
    first: PolyMatrix,
    second: PolyMatrix,
}

impl MfMorphism {
    pub fn even(alpha0: PolyMatrix, alpha1: PolyMatrix) -> Result<MfMorphism, MfError> {
        MfMorphism::new(Parity::Even, alpha0, alpha1)
    }

    pub fn odd(beta: PolyMatrix, beta_prime: PolyMatrix) -> Result<MfMorphism, MfError> {
        MfMorphism::new(Parity::Odd, beta, beta_prime)
    }

    fn new(parity: Parity, first: PolyMatrix, second: PolyMatrix) -> Result<MfMorphism, MfError> {
        if first.rows() != second.rows() || first.cols() != second.cols() {
            return Err(MfError::Shape(format!(
                "blocks are {}x{} and {}x{}",
                first.rows(),
                first.cols(),
                second.rows(),
                second.cols()
            )));
        }
        if first.ring().variables() != second.ring().variables() {
            return Err(MfError::RingMismatch);
        }
        let second = second.map(|p| p.with_ring(first.ring()));
        Ok(MfMorphism {
            parity,
            first,
            second,
        })
    }

    pub fn identity(e: &MatrixFactorization) -> MfMorphism {
        let id = PolyMatrix::identity(e.ring(), e.rank());
        MfMorphism {
            parity: Parity::Even,
            first: id.clone(),
            second: id,
        }
    }

    pub fn zero(
        parity: Parity,
        source: &MatrixFactorization,
        target: &MatrixFactorization,
    ) -> MfMorphism {
        let z = PolyMatrix::zeros(source.ring(), target.rank(), source.rank());
        MfMorphism {
            parity,
            first: z.clone(),
            second: z,
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn first(&self) -> &PolyMatrix {
        &self.first
    }

    pub fn second(&self) -> &PolyMatrix {
        &self.second
    }

    pub fn source_rank(&self) -> usize {
        self.first.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.first.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    /// The `2 r_target x 2 r_source` block matrix, rows `(G0, G1)` and columns `(F0, F1)`.
    pub fn block_matrix(&self) -> PolyMatrix {
        let (rt, rs) = (self.target_rank(), self.source_rank());
        let mut m = PolyMatrix::zeros(self.first.ring(), 2 * rt, 2 * rs);
        match self.parity {
            Parity::Even => {
                m.set_block(0, 0, &self.first);
                m.set_block(rt, rs, &self.second);
            }
            Parity::Odd => {
                m.set_block(rt, 0, &self.first);
                m.set_block(0, rs, &self.second);
            }
        }
        m
    }

    /// Reads the blocks of the given parity, failing if the other blocks are nonzero.
    pub fn from_block_matrix(parity: Parity, m: &PolyMatrix) -> Result<MfMorphism, MfError> {
        if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
            return Err(MfError::Shape(
                "block matrix must have even dimensions".into(),
            ));
        }
        let (rt, rs) = (m.rows() / 2, m.cols() / 2);
        let (g0f0, g1f1) = (m.block(0, 0, rt, rs), m.block(rt, rs, rt, rs));
        let (g1f0, g0f1) = (m.block(rt, 0, rt, rs), m.block(0, rs, rt, rs));
        let (first, second, rest) = match parity {
            Parity::Even => (g0f0, g1f1, [g1f0, g0f1]),
            Parity::Odd => (g1f0, g0f1, [g0f0, g1f1]),
        };
        if rest.iter().any(|b| !b.is_zero()) {
            return Err(MfError::Parity(parity));
        }
        MfMorphism::new(parity, first, second)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &MfMorphism) -> Result<MfMorphism, MfError> {
        if self.source_rank() != other.target_rank() {
            return Err(MfError::Shape("morphisms do not compose".into()));
        }
        let m = &self.block_matrix() * &other.block_matrix();
        MfMorphism::from_block_matrix(self.parity.add(other.parity), &m)
    }

    pub fn add(&self, other: &MfMorphism) -> Result<MfMorphism, MfError> {
        self.check_compatible(other)?;
        MfMorphism::new(
            self.parity,
            &self.first + &other.first,
            &self.second + &other.second,
        )
    }

    pub fn sub(&self, other: &MfMorphism) -> Result<MfMorphism, MfError> {
        self.check_compatible(other)?;
        MfMorphism::new(
            self.parity,
            &self.first - &other.first,
            &self.second - &other.second,
        )
    }

    pub fn scale(&self, c: &Q) -> MfMorphism {
        MfMorphism {
            parity: self.parity,
            first: self.first.scale(c),
            second: self.second.scale(c),
        }
    }

    pub fn pow(&self, e: u32) -> Result<MfMorphism, MfError> {
        if self.source_rank() != self.target_rank() || self.parity != Parity::Even {
            return Err(MfError::Shape("powers need an even endomorphism".into()));
        }
        let ring = self.first.ring();
        let id = PolyMatrix::identity(ring, self.source_rank());
        let mut out = MfMorphism {
            parity: Parity::Even,
            first: id.clone(),
            second: id,
        };
        for _ in 0..e {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &MfMorphism) -> Result<(), MfError> {
        if self.parity != other.parity {
            return Err(MfError::Parity(self.parity));
        }
        if self.first.rows() != other.first.rows() || self.first.cols() != other.first.cols() {
            return Err(MfError::Shape("morphisms have different shapes".into()));
        }
        Ok(())
    }
}

/// Outcome of [`morphism_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismCheck {
    /// `delta_G M - (-1)^{|M|} M delta_F`.
    pub residual: PolyMatrix,
}

impl MorphismCheck {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Graded commutator of `m` with the differentials of `source` and `target`.
pub fn morphism_check(
    source: &MatrixFactorization,
    target: &MatrixFactorization,
    m: &MfMorphism,
) -> Result<MorphismCheck, MfError> {
    source.check_same_potential(target)?;
    if m.source_rank() != source.rank() || m.target_rank() != target.rank() {
        return Err(MfError::Shape(format!(
            "morphism is {}x{}, factorizations have ranks {} and {}",
            m.target_rank(),
            m.source_rank(),
            source.rank(),
            target.rank()
        )));
    }
    let block = m.block_matrix().map(|p| p.with_ring(source.ring()));
    let left = &target.delta().map(|p| p.with_ring(source.ring())) * &block;
    let right = &block * &source.delta();
    let residual = match m.parity {
        Parity::Even => &left - &right,
        Parity::Odd => &left + &right,
    };
    Ok(MorphismCheck { residual })
}

/// `delta H + H delta` for an odd endomorphism `H`.
pub fn boundary_of(e: &MatrixFactorization, h: &MfMorphism) -> Result<MfMorphism, MfError> {
    if h.parity != Parity::Odd {
        return Err(MfError::Parity(Parity::Odd));
    }
    let d = e.delta();
    let hb = h.block_matrix();
    MfMorphism::from_block_matrix(Parity::Even, &(&(&d * &hb) + &(&hb * &d)))
}

struct EndoTarget<'a> {
    e: &'a MatrixFactorization,
    generators: &'a [(&'a str, MfMorphism)],
}

impl ExprTarget for EndoTarget<'_> {
    type Value = MfMorphism;

    fn number(&self, q: Q) -> MfMorphism {
        MfMorphism::identity(self.e).scale(&q)
    }

    fn variable(&self, name: &str, position: usize) -> Result<MfMorphism, ParseError> {
        match self.generators.iter().find(|(n, _)| *n == name) {
            Some((_, m)) => Ok(m.clone()),
            None => Err(ParseError {
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
                position,
            }),
        }
    }

    // generators are checked to be even endomorphisms, so these cannot fail
    fn add(&self, a: MfMorphism, b: MfMorphism) -> MfMorphism {
        a.add(&b).expect("even endomorphisms add")
    }

    fn sub(&self, a: MfMorphism, b: MfMorphism) -> MfMorphism {
        a.sub(&b).expect("even endomorphisms subtract")
    }

    fn mul(&self, a: MfMorphism, b: MfMorphism) -> MfMorphism {
        a.compose(&b).expect("even endomorphisms compose")
    }

    fn neg(&self, a: MfMorphism) -> MfMorphism {
        a.scale(&-Q::from_integer(1.into()))
    }

    fn pow(&self, a: MfMorphism, e: u32) -> MfMorphism {
        a.pow(e).expect("even endomorphisms have powers")
    }
}

/// Evaluates a noncommutative expression in named even endomorphisms of `e`;
/// `a*b` is `a` after `b` and numbers are multiples of the identity.
pub fn evaluate_endomorphism(
    e: &MatrixFactorization,
    text: &str,
    generators: &[(&str, MfMorphism)],
) -> Result<MfMorphism, MfError> {
    let mut owned = Vec::with_capacity(generators.len());
    for (name, m) in generators {
        if m.parity() != Parity::Even {
            return Err(MfError::Parity(Parity::Even));
        }
        if m.source_rank() != e.rank() || m.target_rank() != e.rank() {
            return Err(MfError::Shape(format!("`{name}` is not an endomorphism")));
        }
        if m.first().ring().variables() != e.ring().variables() {
            return Err(MfError::RingMismatch);
        }
        let m = MfMorphism::even(
            m.first().map(|p| p.with_ring(e.ring())),
            m.second().map(|p| p.with_ring(e.ring())),
        )?;
        owned.push((*name, m));
    }
    let target = EndoTarget {
        e,
        generators: &owned,
    };
    let expr = parse_expr(text).map_err(|err| MfError::Format(format!("`{text}`: {err}")))?;
    expr.eval(&target)
        .map_err(|err| MfError::Format(format!("`{text}`: {err}")))
}

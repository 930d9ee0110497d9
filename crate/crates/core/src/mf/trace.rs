//! Supertraces, the Chern character and the boundary-bulk map.
//!
//! `tau(alpha) = str(d_n delta ... d_1 delta alpha)` reduced into the Milnor
//! algebra, with `d_n` leftmost and `str = tr_F0 - tr_F1`.

use num_traits::Zero;

use super::{MatrixFactorization, MfError, MfMorphism, Parity};
use crate::milnor::{grothendieck_residue, residue_pairing, MilnorAlgebra};
use crate::poly::{Poly, PolyMatrix};
use crate::Q;

/// Trace over the first `rank` rows minus trace over the rest.
pub fn supertrace(m: &PolyMatrix, rank: usize) -> Result<Poly, MfError> {
    if !m.is_square() || m.rows() != 2 * rank {
        return Err(MfError::Shape(format!(
            "supertrace of a {}x{} matrix with rank {rank}",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = Poly::zero(m.ring());
    for i in 0..rank {
        out = out + m.get(i, i) - m.get(rank + i, rank + i);
    }
    Ok(out)
}

/// `d_{o_k} delta ... d_{o_1} delta` for `ordering = [o_1, ..., o_k]`.
pub fn derivative_product(
    e: &MatrixFactorization,
    ordering: &[usize],
) -> Result<PolyMatrix, MfError> {
    let d = e.delta();
    let mut out = PolyMatrix::identity(e.ring(), 2 * e.rank());
    for &v in ordering {
        out = &d
            .derivative(v)
            .map_err(|err| MfError::Shape(err.to_string()))?
            * &out;
    }
    Ok(out)
}

fn check_inputs(e: &MatrixFactorization, ma: &MilnorAlgebra) -> Result<(), MfError> {
    if e.ring().variables() != ma.ring().variables() {
        return Err(MfError::RingMismatch);
    }
    if e.potential().with_ring(ma.ring()) != *ma.potential() {
        return Err(MfError::PotentialMismatch);
    }
    Ok(())
}

fn check_endomorphism(e: &MatrixFactorization, m: &MfMorphism) -> Result<(), MfError> {
    if m.parity() != Parity::Even {
        return Err(MfError::Parity(Parity::Even));
    }
    if m.source_rank() != e.rank() || m.target_rank() != e.rank() {
        return Err(MfError::Shape("expected an endomorphism".into()));
    }
    Ok(())
}

/// Boundary-bulk image of an even endomorphism, as coordinates in the Milnor basis.
pub fn boundary_bulk(
    e: &MatrixFactorization,
    m: &MfMorphism,
    ma: &MilnorAlgebra,
) -> Result<Vec<Q>, MfError> {
    let ordering: Vec<usize> = (0..e.ring().nvars()).collect();
    boundary_bulk_with_ordering(e, m, ma, &ordering)
}

/// As [`boundary_bulk`] with the derivatives applied in the given order.
pub fn boundary_bulk_with_ordering(
    e: &MatrixFactorization,
    m: &MfMorphism,
    ma: &MilnorAlgebra,
    ordering: &[usize],
) -> Result<Vec<Q>, MfError> {
    check_inputs(e, ma)?;
    check_endomorphism(e, m)?;
    if e.rank() == 0 {
        return Ok(vec![Q::zero(); ma.mu()]);
    }
    let k = derivative_product(e, ordering)?;
    let block = m.block_matrix().map(|p| p.with_ring(e.ring()));
    let s = supertrace(&(&k * &block), e.rank())?;
    Ok(ma.reduce(&s)?)
}

pub fn chern_character(e: &MatrixFactorization, ma: &MilnorAlgebra) -> Result<Vec<Q>, MfError> {
    boundary_bulk(e, &MfMorphism::identity(e), ma)
}

/// `<ch(E), ch(F)>` under the residue pairing; must be an integer.
pub fn euler_pairing(
    e: &MatrixFactorization,
    f: &MatrixFactorization,
    ma: &MilnorAlgebra,
) -> Result<i64, MfError> {
    let ce = ma.from_coordinates(&chern_character(e, ma)?);
    let cf = ma.from_coordinates(&chern_character(f, ma)?);
    let chi = residue_pairing(&ce, &cf, ma)?;
    if !chi.is_integer() {
        return Err(MfError::NonIntegerEuler(chi));
    }
    let n = chi.to_integer();
    i64::try_from(n.clone()).map_err(|_| MfError::Budget(format!("Euler pairing {n} overflows")))
}

/// `Res(tau(alpha beta))`.
pub fn frobenius_pairing(
    e: &MatrixFactorization,
    alpha: &MfMorphism,
    beta: &MfMorphism,
    ma: &MilnorAlgebra,
) -> Result<Q, MfError> {
    let tau = boundary_bulk(e, &alpha.compose(beta)?, ma)?;
    Ok(grothendieck_residue(&ma.from_coordinates(&tau), ma)?)
}

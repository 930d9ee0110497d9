//! Milnor algebras and the Grothendieck residue.
//!
//! The Milnor algebra of `W` is the quotient of the local ring at the origin
//! by the Jacobian ideal. When the affine critical locus is the origin alone
//! the affine and local quotients coincide and we work with a global
//! degree-reverse-lexicographic basis, which also yields honest polynomial
//! certificates. Otherwise the quotient is computed with a local ordering
//! and residues are refused.
//!
//! Residues use the transformation law: if `c_i x_i^{a_i} = sum_j T_ij dW/dx_j`
//! then `Res(f) = coeff(f det T, prod x_i^{a_i - 1}) / prod c_i`.

use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, PolyMatrix, RingSpec};
use crate::stdbasis::{std_basis, Budget, IdealBasis, QuotientBasis, StdBasisError};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("the potential must have no constant or linear terms")]
    NotSingular,
    #[error("the singularity at the origin is not isolated")]
    NotIsolated,
    #[error("the origin is not the only critical point; residues are refused")]
    NotOriginOnly,
    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("variables of the input do not match the algebra")]
    RingMismatch,
    #[error(transparent)]
    StdBasis(#[from] StdBasisError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Pure-power certificate: `scalars[i] * x_i^{exponents[i]} = sum_j matrix[i][j] * dW/dx_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCertificate {
    pub exponents: Vec<u32>,
    pub scalars: Vec<Q>,
    pub matrix: PolyMatrix,
}

#[derive(Debug, Clone)]
pub struct MilnorAlgebra {
    potential: Poly,
    jacobian: IdealBasis,
    basis: Vec<Monomial>,
    hessian_class: Vec<Q>,
    origin_only: bool,
    global_dimension: Option<usize>,
    local_dimension: usize,
    certificate: Option<ResidueCertificate>,
}

/// Result of [`is_quasihomogeneous`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiHomogeneity {
    /// `W` lies in its Jacobian ideal.
    pub in_jacobian: bool,
    /// Positive weights making every monomial of `W` weight one, when found.
    pub weights: Option<Vec<Q>>,
}

impl MilnorAlgebra {
    /// The potential, in the ring of the chosen route.
    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        self.jacobian.ring()
    }

    pub fn jacobian(&self) -> &IdealBasis {
        &self.jacobian
    }

    /// Standard monomials spanning the algebra.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Milnor number.
    pub fn mu(&self) -> usize {
        self.basis.len()
    }

    pub fn hessian_class(&self) -> &[Q] {
        &self.hessian_class
    }

    /// Affine and local quotient dimensions agree.
    pub fn origin_only(&self) -> bool {
        self.origin_only
    }

    pub fn global_dimension(&self) -> Option<usize> {
        self.global_dimension
    }

    pub fn local_dimension(&self) -> usize {
        self.local_dimension
    }

    /// Minimal pure-power certificate, present iff `origin_only`.
    pub fn certificate(&self) -> Option<&ResidueCertificate> {
        self.certificate.as_ref()
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|m| Poly::monomial(self.ring(), m.clone()).to_string())
            .collect()
    }

    /// Moves `f` into this algebra's ring.
    pub fn embed(&self, f: &Poly) -> Result<Poly, MilnorError> {
        if f.ring().variables() != self.ring().variables() {
            return Err(MilnorError::RingMismatch);
        }
        Ok(f.with_ring(self.ring()))
    }

    /// Normal form supported on [`MilnorAlgebra::basis`].
    pub fn reduce_poly(&self, f: &Poly) -> Result<Poly, MilnorError> {
        Ok(self.jacobian.normal_form(&self.embed(f)?)?)
    }

    /// Coordinates of the normal form of `f` in the standard basis.
    pub fn reduce(&self, f: &Poly) -> Result<Vec<Q>, MilnorError> {
        let nf = self.reduce_poly(f)?;
        let mut v = vec![Q::zero(); self.basis.len()];
        for (m, c) in nf.terms() {
            let i = self.basis.iter().position(|b| b == m).ok_or_else(|| {
                MilnorError::Internal(format!("normal form term {m:?} is not standard"))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, v: &[Q]) -> Poly {
        Poly::from_terms(
            self.ring(),
            self.basis.iter().cloned().zip(v.iter().cloned()),
        )
    }

    /// Matrix of multiplication by `f`: column `j` holds the coordinates of `f * basis[j]`.
    pub fn mult_matrix(&self, f: &Poly) -> Result<QMatrix, MilnorError> {
        let f = self.embed(f)?;
        let cols = self
            .basis
            .iter()
            .map(|m| self.reduce(&f.mul_term(m, &Q::one())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QMatrix::from_cols(&cols, self.mu()))
    }
}

/// Builds the Milnor algebra of `W` with the default budget.
pub fn milnor_algebra(w: &Poly) -> Result<MilnorAlgebra, MilnorError> {
    milnor_algebra_with_budget(w, &Budget::default())
}

pub fn milnor_algebra_with_budget(w: &Poly, budget: &Budget) -> Result<MilnorAlgebra, MilnorError> {
    if w.terms().iter().any(|(m, _)| m.degree() <= 1) {
        return Err(MilnorError::NotSingular);
    }
    let n = w.ring().nvars();
    let global = w.ring().with_order(MonomialOrder::GlobalDegRevLex);
    let local = w.ring().with_order(MonomialOrder::LocalNegDegRevLex);

    let wl = w.with_ring(&local);
    let partials_l = (0..n)
        .map(|i| wl.derivative(i))
        .collect::<Result<Vec<_>, _>>()?;
    if partials_l.iter().any(Poly::is_zero) {
        return Err(MilnorError::NotIsolated);
    }
    let local_basis = std_basis(&partials_l, &local, false, budget)?;
    let QuotientBasis::Finite(local_monomials) = local_basis.quotient_basis() else {
        return Err(MilnorError::NotIsolated);
    };

    let wg = w.with_ring(&global);
    let partials_g = (0..n)
        .map(|i| wg.derivative(i))
        .collect::<Result<Vec<_>, _>>()?;
    let global_basis = match std_basis(&partials_g, &global, true, budget) {
        Ok(b) => Some(b),
        Err(StdBasisError::Budget(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let global_monomials = global_basis
        .as_ref()
        .and_then(|b| b.quotient_basis().finite());
    let global_dimension = global_monomials.as_ref().map(Vec::len);
    let origin_only = global_dimension == Some(local_monomials.len());

    let (potential, jacobian, basis) = if origin_only {
        (wg, global_basis.unwrap(), global_monomials.unwrap())
    } else {
        (wl, local_basis, local_monomials)
    };
    let mut ma = MilnorAlgebra {
        potential,
        jacobian,
        hessian_class: Vec::new(),
        local_dimension: basis.len(),
        basis,
        origin_only,
        global_dimension,
        certificate: None,
    };

    let hess = hessian(&ma.potential)?;
    ma.hessian_class = ma.reduce(&hess)?;
    if ma.hessian_class.iter().all(Zero::is_zero) {
        return Err(MilnorError::Internal("the Hessian class vanishes".into()));
    }
    if origin_only {
        let exps = minimal_pure_powers(&ma)?;
        ma.certificate = Some(lift_pure_powers(&ma, &exps)?);
    }
    Ok(ma)
}

/// Determinant of the matrix of second partial derivatives.
pub fn hessian(w: &Poly) -> Result<Poly, PolyError> {
    let n = w.ring().nvars();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let di = w.derivative(i)?;
        rows.push(
            (0..n)
                .map(|j| di.derivative(j))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(PolyMatrix::from_rows(w.ring(), rows).det())
}

fn minimal_pure_powers(ma: &MilnorAlgebra) -> Result<Vec<u32>, MilnorError> {
    let n = ma.ring().nvars();
    let cap = ma.mu() as u32 + 1;
    (0..n)
        .map(|i| {
            let mut p = Poly::var(ma.ring(), i);
            for a in 1..=cap {
                if ma.jacobian.normal_form(&p)?.is_zero() {
                    return Ok(a);
                }
                p = &p * &Poly::var(ma.ring(), i);
            }
            Err(MilnorError::Internal(format!(
                "no power of variable {i} up to {cap} lies in the Jacobian ideal"
            )))
        })
        .collect()
}

fn lift_pure_powers(ma: &MilnorAlgebra, exps: &[u32]) -> Result<ResidueCertificate, MilnorError> {
    let n = ma.ring().nvars();
    let rows = (0..n)
        .map(|i| {
            let p = Poly::monomial(ma.ring(), Monomial::var(n, i, exps[i]));
            ma.jacobian.lift_certificate(&p).map_err(|e| match e {
                StdBasisError::NotMember => MilnorError::CertificateUnavailable(format!(
                    "x_{i}^{} is not in the Jacobian ideal",
                    exps[i]
                )),
                e => e.into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResidueCertificate {
        exponents: exps.to_vec(),
        scalars: vec![Q::one(); n],
        matrix: PolyMatrix::from_rows(ma.ring(), rows),
    })
}

/// Certificate for the pure powers `x_i^{exps[i]}`, each at least the minimal exponent.
pub fn certificate_for_exponents(
    ma: &MilnorAlgebra,
    exps: &[u32],
) -> Result<ResidueCertificate, MilnorError> {
    if !ma.origin_only {
        return Err(MilnorError::NotOriginOnly);
    }
    if exps.len() != ma.ring().nvars() {
        return Err(MilnorError::InvalidCertificate(
            "one exponent per variable is required".into(),
        ));
    }
    lift_pure_powers(ma, exps)
}

/// Coefficient of `m` in `f * g` without forming the product.
pub fn coefficient_of_product(f: &Poly, g: &Poly, m: &Monomial) -> Q {
    let mut acc = Q::zero();
    for (a, c) in f.terms() {
        if let Some(rest) = m.div(a) {
            let d = g.coefficient(&rest);
            if !d.is_zero() {
                acc += c * d;
            }
        }
    }
    acc
}

/// Residue of `f` through an explicit certificate, which is verified first.
pub fn residue_with_certificate(
    f: &Poly,
    ma: &MilnorAlgebra,
    cert: &ResidueCertificate,
) -> Result<Q, MilnorError> {
    let f = ma.embed(f)?;
    let n = ma.ring().nvars();
    let t = &cert.matrix;
    if t.rows() != n || t.cols() != n || cert.exponents.len() != n || cert.scalars.len() != n {
        return Err(MilnorError::InvalidCertificate(
            "shape does not match the number of variables".into(),
        ));
    }
    if cert.scalars.iter().any(Zero::is_zero) {
        return Err(MilnorError::InvalidCertificate("zero scalar".into()));
    }
    let t = t.map(|p| p.with_ring(ma.ring()));
    let w = &ma.potential;
    let grad = (0..n)
        .map(|j| w.derivative(j))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        let mut lhs = Poly::zero(ma.ring());
        for (j, g) in grad.iter().enumerate() {
            lhs = lhs + t.get(i, j) * g;
        }
        let rhs = Poly::term(
            ma.ring(),
            Monomial::var(n, i, cert.exponents[i]),
            cert.scalars[i].clone(),
        );
        if lhs != rhs {
            return Err(MilnorError::InvalidCertificate(format!(
                "row {i} does not reproduce its pure power"
            )));
        }
    }
    let target = Monomial::new(cert.exponents.iter().map(|a| a - 1).collect());
    let det = t.det();
    let denom = cert.scalars.iter().fold(Q::one(), |acc, c| acc * c);
    Ok(coefficient_of_product(&f, &det, &target) / denom)
}

/// Grothendieck residue of `f` via the minimal pure-power certificate.
pub fn grothendieck_residue(f: &Poly, ma: &MilnorAlgebra) -> Result<Q, MilnorError> {
    let cert = ma.certificate.as_ref().ok_or(MilnorError::NotOriginOnly)?;
    residue_with_certificate(f, ma, cert)
}

/// `(-1)^{n(n-1)/2}`.
pub fn pairing_sign(nvars: usize) -> Q {
    if (nvars * nvars.saturating_sub(1) / 2).is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `(-1)^{n(n-1)/2} Res(f g)`.
pub fn residue_pairing(f: &Poly, g: &Poly, ma: &MilnorAlgebra) -> Result<Q, MilnorError> {
    let fg = &ma.embed(f)? * &ma.embed(g)?;
    Ok(pairing_sign(ma.ring().nvars()) * grothendieck_residue(&fg, ma)?)
}

/// Residue pairing on the standard basis.
pub fn gram_matrix(ma: &MilnorAlgebra) -> Result<QMatrix, MilnorError> {
    let mu = ma.mu();
    let mut g = QMatrix::zeros(mu, mu);
    for i in 0..mu {
        for j in i..mu {
            let v = residue_pairing(
                &Poly::monomial(ma.ring(), ma.basis[i].clone()),
                &Poly::monomial(ma.ring(), ma.basis[j].clone()),
                ma,
            )?;
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Multiplication by `W` on the algebra.
pub fn mult_by_w_matrix(ma: &MilnorAlgebra) -> Result<QMatrix, MilnorError> {
    ma.mult_matrix(&ma.potential.clone())
}

/// Generator of the socle, scaled so that its last nonzero coordinate is one.
pub fn socle_milnor(ma: &MilnorAlgebra) -> Result<Vec<Q>, MilnorError> {
    let n = ma.ring().nvars();
    let mut stacked = QMatrix::zeros(0, ma.mu());
    for i in 0..n {
        stacked = stacked.vstack(&ma.mult_matrix(&Poly::var(ma.ring(), i))?);
    }
    let kernel = stacked.kernel();
    if kernel.len() != 1 {
        return Err(MilnorError::Internal(format!(
            "socle has dimension {}",
            kernel.len()
        )));
    }
    let mut v = kernel.into_iter().next().unwrap();
    let last = v.iter().rev().find(|c| !c.is_zero()).unwrap().clone();
    for c in &mut v {
        *c = &*c / &last;
    }
    Ok(v)
}

/// Membership of `W` in its Jacobian ideal, plus positive weights when solvable.
pub fn is_quasihomogeneous(w: &Poly) -> Result<QuasiHomogeneity, MilnorError> {
    let ma = milnor_algebra(w)?;
    let in_jacobian = ma.jacobian.contains(&ma.potential)?;
    Ok(QuasiHomogeneity {
        in_jacobian,
        weights: solve_weights(w),
    })
}

/// Positive rational weights with `sum_j a_j w_j = 1` for every exponent vector of `w`.
pub fn solve_weights(w: &Poly) -> Option<Vec<Q>> {
    let n = w.ring().nvars();
    let rows: Vec<Vec<Q>> = w
        .terms()
        .iter()
        .map(|(m, _)| {
            let mut r: Vec<Q> = m
                .exponents()
                .iter()
                .map(|&e| Q::from_integer(e.into()))
                .collect();
            r.push(Q::one());
            r
        })
        .collect();
    let (rref, pivots) = QMatrix::from_rows(rows).rref();
    if pivots.contains(&n) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    // free weights are tried from 1/2, 1/3, ... until all weights are positive
    let candidates: Vec<Q> = (2..=12).map(|d| Q::new(1.into(), d.into())).collect();
    let mut choice = vec![0usize; free.len()];
    loop {
        let mut weights = vec![Q::zero(); n];
        for (k, &j) in free.iter().enumerate() {
            weights[j] = candidates[choice[k]].clone();
        }
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = rref[(r, n)].clone();
            for &j in &free {
                v -= &rref[(r, j)] * &weights[j];
            }
            weights[p] = v;
        }
        if weights.iter().all(|c| *c > Q::zero()) {
            return Some(weights);
        }
        let mut k = 0;
        loop {
            if k == free.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::{q, qf};
    use proptest::prelude::*;

    fn ring() -> Arc<RingSpec> {
        RingSpec::new(&["x", "y", "z", "w"], MonomialOrder::GlobalDegRevLex).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &ring()).unwrap()
    }

    fn ca1(k: u32) -> Poly {
        p(&format!("x^2 - y^{} + z*w", 2 * k))
    }

    fn laufer(k: u32) -> Poly {
        p(&format!("x^2 + y^3 + w*z^2 + w^{}*y", 2 * k + 1))
    }

    #[test]
    fn quadric() {
        let ma = milnor_algebra(&p("x^2 + y^2 + z^2 + w^2")).unwrap();
        assert_eq!(ma.mu(), 1);
        assert!(ma.origin_only());
        assert_eq!(socle_milnor(&ma).unwrap(), vec![q(1)]);
        let half = milnor_algebra(&p("1/2*x^2 + 1/2*y^2 + 1/2*z^2 + 1/2*w^2")).unwrap();
        assert_eq!(half.certificate().unwrap().exponents, vec![1, 1, 1, 1]);
        assert_eq!(grothendieck_residue(&p("1"), &half).unwrap(), q(1));
        assert!(mult_by_w_matrix(&ma).unwrap().is_zero());
    }

    #[test]
    fn ca1_family() {
        for k in 1..=4u32 {
            let ma = milnor_algebra(&ca1(k)).unwrap();
            assert_eq!(ma.mu(), (2 * k - 1) as usize);
            let expect: Vec<String> = (0..2 * k - 1)
                .map(|e| Poly::monomial(ma.ring(), Monomial::var(4, 1, e)).to_string())
                .collect();
            assert_eq!(ma.basis_strings(), expect);
            let socle = socle_milnor(&ma).unwrap();
            assert_eq!(ma.from_coordinates(&socle), p(&format!("y^{}", 2 * k - 2)));
            let res = grothendieck_residue(&p(&format!("y^{}", 2 * k - 2)), &ma).unwrap();
            assert_eq!(res, qf(1, 4 * k as i64));
            let yk = p(&format!("y^{}", k - 1));
            assert_eq!(residue_pairing(&yk, &yk, &ma).unwrap(), qf(1, 4 * k as i64));
            let hess = hessian(ma.potential()).unwrap();
            assert_eq!(grothendieck_residue(&hess, &ma).unwrap(), q(ma.mu() as i64));
            assert!(mult_by_w_matrix(&ma).unwrap().is_zero());
        }
    }

    #[test]
    fn laufer_k1() {
        let ma = milnor_algebra(&laufer(1)).unwrap();
        assert_eq!(ma.mu(), 11);
        assert!(ma.origin_only());
        assert_eq!(ma.certificate().unwrap().exponents, vec![1, 3, 3, 6]);
        assert_eq!(grothendieck_residue(&p("y^2*w^2"), &ma).unwrap(), qf(1, 36));
        assert_eq!(
            ma.reduce(&p("y*z^2")).unwrap(),
            ma.reduce(&p("-3*y^2*w^2")).unwrap()
        );
        assert!(ma.reduce(&p("w^3")).unwrap().iter().any(|c| !c.is_zero()));
        assert_eq!(ma.reduce_poly(&p("w^3")).unwrap(), p("-3*y^2"));
        let listed = [
            "1", "y", "y^2", "y^2*w", "y*z", "y*z^2", "y*w", "z", "z^2", "w", "w^2",
        ];
        let rows: Vec<Vec<Q>> = listed.iter().map(|s| ma.reduce(&p(s)).unwrap()).collect();
        assert_eq!(QMatrix::from_rows(rows).rank(), 11);
        let socle = socle_milnor(&ma).unwrap();
        let target = ma.reduce(&p("y^2*w^2")).unwrap();
        assert_eq!(QMatrix::from_rows(vec![socle, target]).rank(), 1);
        assert!(gram_matrix(&ma).unwrap().inverse().is_some());
        assert!(mult_by_w_matrix(&ma).unwrap().is_zero());
        let hess = hessian(ma.potential()).unwrap();
        assert_eq!(grothendieck_residue(&hess, &ma).unwrap(), q(11));
    }

    #[test]
    fn printed_change_of_variables_matrix() {
        for k in 1..=2i64 {
            let ma = milnor_algebra(&laufer(k as u32)).unwrap();
            let c = 2 * k + 1;
            let t = PolyMatrix::parse(
                &ring(),
                &[
                    vec!["1".to_string(), "0".into(), "0".into(), "0".into()],
                    vec![
                        "0".into(),
                        "y".into(),
                        format!("1/{}*z", 2 * c),
                        format!("-1/{c}*w"),
                    ],
                    vec![
                        "0".into(),
                        "0".into(),
                        format!("-w^{}*y", 2 * k - 1),
                        format!("2/{c}*z"),
                    ],
                    vec![
                        "0".into(),
                        format!("{c}/3*w^{}", 2 * k + 1),
                        "1/2*y*z".into(),
                        "-y*w".into(),
                    ],
                ],
            )
            .unwrap();
            let cert = ResidueCertificate {
                exponents: vec![1, 3, 3, (4 * k + 2) as u32],
                scalars: vec![q(2), q(3), qf(2, c), qf(c, 3)],
                matrix: t.clone(),
            };
            let printed = p(&format!(
                "y*(y^2*w^{} - 1/{c}*y*z^2) + {c}/3*w^{}*(1/{}*z^2 - 1/{c}*w^{}*y)",
                2 * k,
                2 * k + 1,
                c * c,
                2 * k
            ));
            assert_eq!(t.det(), printed);
            let f = p(&format!("y^2*w^{}", 2 * k));
            let ours = grothendieck_residue(&f, &ma).unwrap();
            assert_eq!(residue_with_certificate(&f, &ma, &cert).unwrap(), ours);
            assert_eq!(ours * q(4 * (6 * k + 3) * (6 * k + 3)), q(6 * k + 3));
        }
    }

    #[test]
    fn refuses_without_origin_only() {
        // x^2 - x^3 + y^2 + z^2 + w^2 also has a critical point at x = 2/3
        let ma = milnor_algebra(&p("x^2 - x^3 + y^2 + z^2 + w^2")).unwrap();
        assert!(!ma.origin_only());
        assert_eq!(ma.mu(), 1);
        assert_eq!(ma.global_dimension(), Some(2));
        assert_eq!(
            grothendieck_residue(&p("1"), &ma),
            Err(MilnorError::NotOriginOnly)
        );
        assert_eq!(
            milnor_algebra(&p("x + y^2")).unwrap_err(),
            MilnorError::NotSingular
        );
        assert_eq!(
            milnor_algebra(&p("x^2 + y^2 + z^2")).unwrap_err(),
            MilnorError::NotIsolated
        );
        assert_eq!(
            milnor_algebra(&p("x^2*y + z^2 + w^2")).unwrap_err(),
            MilnorError::NotIsolated
        );
    }

    #[test]
    fn quasihomogeneity() {
        for k in 1..=2i64 {
            let qh = is_quasihomogeneous(&laufer(k as u32)).unwrap();
            assert!(qh.in_jacobian);
            let w = qh.weights.unwrap();
            let expect = [qf(6 * k + 3, 4), qf(2 * k + 1, 2), qf(6 * k + 1, 4), q(1)];
            let scale = &w[3];
            for (a, b) in w.iter().zip(&expect) {
                assert_eq!(a / scale, *b);
            }
        }
        let qh = is_quasihomogeneous(&ca1(2)).unwrap();
        assert!(qh.in_jacobian);
        assert!(qh.weights.unwrap().iter().all(|c| *c > q(0)));
        let non = p("x^5 + y^5 + x^3*y^3 + z^2 + w^2");
        let ma = milnor_algebra(&non).unwrap();
        assert_eq!(ma.mu(), 16);
        let qh = is_quasihomogeneous(&non).unwrap();
        assert!(!qh.in_jacobian);
        assert!(qh.weights.is_none());
    }

    #[test]
    fn certificate_rechoice() {
        let ma = milnor_algebra(&laufer(1)).unwrap();
        let bigger = certificate_for_exponents(&ma, &[2, 3, 4, 6]).unwrap();
        for f in ["y^2*w^2", "y*z^2", "1", "x*y + w^5", "y*w"] {
            let f = p(f);
            assert_eq!(
                residue_with_certificate(&f, &ma, &bigger).unwrap(),
                grothendieck_residue(&f, &ma).unwrap()
            );
        }
        let mut broken = bigger.clone();
        broken.exponents[0] = 3;
        assert!(matches!(
            residue_with_certificate(&p("1"), &ma, &broken),
            Err(MilnorError::InvalidCertificate(_))
        ));
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..5).prop_map(
            |terms| {
                Poly::from_terms(
                    &ring(),
                    terms
                        .into_iter()
                        .map(|((a, b, c, d), n)| (Monomial::new(vec![a, b, c, d]), q(n))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reduction_is_multiplicative(f in small_poly(), g in small_poly()) {
            let ma = milnor_algebra(&laufer(1)).unwrap();
            let lhs = ma.reduce(&(&f * &g)).unwrap();
            let rhs = ma.reduce(&(&ma.reduce_poly(&f).unwrap() * &ma.reduce_poly(&g).unwrap())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn residue_kills_the_jacobian(c in prop::collection::vec(small_poly(), 4)) {
            let ma = milnor_algebra(&laufer(1)).unwrap();
            let mut f = Poly::zero(ma.ring());
            for (i, ci) in c.iter().enumerate() {
                f = f + ci * &ma.potential().derivative(i).unwrap();
            }
            prop_assert!(grothendieck_residue(&f, &ma).unwrap().is_zero());
        }
    }
}

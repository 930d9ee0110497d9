use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, RingSpec};
use crate::Q;

/// A polynomial in a [`RingSpec`].
///
/// Terms are kept sorted by the ring's ordering, leading term first, and
/// never carry a zero coefficient, so structural equality is mathematical
/// equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Arc<RingSpec>,
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero(ring: &Arc<RingSpec>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Q) -> Poly {
        Poly::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<RingSpec>) -> Poly {
        Poly::constant(ring, Q::one())
    }

    pub fn var(ring: &Arc<RingSpec>, index: usize) -> Poly {
        Poly::term(ring, Monomial::var(ring.nvars(), index, 1), Q::one())
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial) -> Poly {
        Poly::term(ring, m, Q::one())
    }

    pub fn term(ring: &Arc<RingSpec>, m: Monomial, c: Q) -> Poly {
        assert_eq!(
            m.nvars(),
            ring.nvars(),
            "monomial arity does not match ring"
        );
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly {
            ring: ring.clone(),
            terms: vec![(m, c)],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(ring: &Arc<RingSpec>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                ring.nvars(),
                "monomial arity does not match ring"
            );
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        Poly::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<RingSpec>, acc: HashMap<Monomial, Q>) -> Poly {
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms must already be sorted by the ring ordering and nonzero.
    pub(crate) fn from_sorted(ring: &Arc<RingSpec>, terms: Vec<(Monomial, Q)>) -> Poly {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Everything but the leading term.
    pub fn tail(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().skip(1).cloned().collect(),
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Q> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Highest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    /// Lowest total degree of a term; 0 for the zero polynomial.
    pub fn low_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .min()
            .unwrap_or(0)
    }

    /// Total degree minus degree of the leading monomial.
    pub fn ecart(&self) -> u32 {
        match self.leading_monomial() {
            Some(lm) => self.total_degree() - lm.degree(),
            None => 0,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn same_ring(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    /// Re-sorts the terms for a ring with the same variables but a different ordering.
    pub fn with_ring(&self, ring: &Arc<RingSpec>) -> Poly {
        assert_eq!(
            ring.variables(),
            self.ring.variables(),
            "variable lists differ"
        );
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => order.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        Poly::from_map(&self.ring, acc)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        result
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the term `c * m`; the ordering is compatible with
    /// multiplication, so no re-sorting is needed.
    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, index: usize) -> Result<Poly, PolyError> {
        let n = self.ring.nvars();
        if index >= n {
            return Err(PolyError::VariableOutOfRange { index, nvars: n });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[index] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[index];
                e[index] -= 1;
                (Monomial::new(e), c * Q::from_integer(k.into()))
            });
        Ok(Poly::from_terms(&self.ring, terms))
    }

    /// Evaluates the ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(PolyError::ImageCount {
                expected: n,
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => {
                return Err(PolyError::ImageCount {
                    expected: n,
                    got: 0,
                })
            }
        };
        if images
            .iter()
            .any(|p| !(Arc::ptr_eq(&p.ring, &target) || *p.ring == *target))
        {
            return Err(PolyError::RingMismatch);
        }
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(&target), p.clone()])
            .collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().product(&images[i]);
                    powers[i].push(next);
                }
                t = t.product(&powers[i][e as usize]);
            }
            out = out.merge(&t, false);
        }
        Ok(out)
    }

    /// Drops every term of total degree `>= degree`.
    pub fn truncate_degree(&self, degree: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < degree)
                .cloned()
                .collect(),
        }
    }

    /// Keeps the terms of total degree exactly `degree`.
    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    /// Canonical form: leading term first, `" + "`/`" - "` separators,
    /// `*` between factors, `x^3` for powers and `p/q` coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.variables();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&m.render(names))?;
            } else {
                write!(f, "{a}*{}", m.render(names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs)
                    .expect("polynomial arithmetic across different rings")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self)
                    .$try(&rhs)
                    .expect("polynomial arithmetic across different rings")
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self)
                    .$try(rhs)
                    .expect("polynomial arithmetic across different rings")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, MonomialOrder};
    use crate::{q, qf};

    fn ring() -> Arc<RingSpec> {
        RingSpec::new(&["x", "y", "z", "w"], MonomialOrder::GlobalDegRevLex).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &ring()).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        assert_eq!(p("x + y") * p("x - y"), p("x^2 - y^2"));
        assert_eq!(p("x + 1").pow(0), p("1"));
        assert_eq!(p("x + 1").pow(3), p("x^3 + 3*x^2 + 3*x + 1"));
        assert!((p("x") - p("x")).is_zero());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let other = RingSpec::new(&["x", "y"], MonomialOrder::GlobalDegRevLex).unwrap();
        let a = p("x");
        let b = parse_poly("x", &other).unwrap();
        assert_eq!(a.try_add(&b), Err(PolyError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn derivatives_of_the_potentials() {
        let w = p("x^2 - y^4 + z*w");
        assert_eq!(w.derivative(0).unwrap(), p("2*x"));
        let laufer = p("x^2 + y^3 + w*z^2 + w^3*y");
        assert_eq!(laufer.derivative(1).unwrap(), p("3*y^2 + w^3"));
        assert!(p("7").derivative(0).unwrap().is_zero());
        assert_eq!(
            p("x").derivative(4),
            Err(PolyError::VariableOutOfRange { index: 4, nvars: 4 })
        );
    }

    #[test]
    fn substitution() {
        let f = p("x^2");
        let imgs = vec![p("x + y"), p("y"), p("z"), p("w")];
        assert_eq!(f.substitute(&imgs).unwrap(), p("x^2 + 2*x*y + y^2"));
        let id: Vec<Poly> = (0..4).map(|i| Poly::var(&ring(), i)).collect();
        let g = p("x^3*w - 1/2*y*z + 4");
        assert_eq!(g.substitute(&id).unwrap(), g);
        // x -> x, y -> -y, z <-> w fixes the cA1 potential
        let w = p("x^2 - y^2 + z*w");
        let sym = vec![p("x"), p("-y"), p("w"), p("z")];
        assert_eq!(w.substitute(&sym).unwrap(), w);
        assert_eq!(
            f.substitute(&imgs[..2]),
            Err(PolyError::ImageCount {
                expected: 4,
                got: 2
            })
        );
    }

    #[test]
    fn coefficient_lookup() {
        let f = p("3*x*y + 2");
        assert_eq!(f.coefficient(&Monomial::new(vec![1, 1, 0, 0])), q(3));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 0, 1, 0])), q(0));
        assert_eq!(f.constant_term(), q(2));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("y^2 - x^2 + 2").to_string(), "-x^2 + y^2 + 2");
        assert_eq!(p("1/2*x*y - 3/4").to_string(), "1/2*x*y - 3/4");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("-z").to_string(), "-z");
        assert_eq!(p("x").scale(&qf(-2, 3)).to_string(), "-2/3*x");
    }

    #[test]
    fn local_ordering_puts_low_degree_first() {
        let local = ring().with_order(MonomialOrder::LocalNegDegRevLex);
        let f = parse_poly("x^3 + y + x*y", &local).unwrap();
        assert_eq!(f.to_string(), "y + x*y + x^3");
        assert_eq!(f.ecart(), 2);
    }
}

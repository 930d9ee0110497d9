//! Standard bases of polynomial ideals.
//!
//! Under a global ordering this is Buchberger's algorithm (normal selection
//! strategy, product and chain criteria) and every basis element can carry a
//! cofactor row over the input generators. Under a local ordering it is
//! Mora's tangent cone algorithm with the ecart-driven normal form; the
//! result describes the ideal in the localization at the origin.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, RingSpec};
use crate::Q;

/// Resource caps for a standard basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest total degree of an S-pair lcm that may be formed.
    pub max_degree: u32,
    /// Largest number of S-pair reductions.
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 40,
            max_pairs: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StdBasisError {
    #[error("the generator list is empty")]
    NoGenerators,
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("polynomial is not a member of the ideal")]
    NotMember,
    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Answer of [`IdealBasis::quotient_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    InfiniteDimensional,
}

impl QuotientBasis {
    pub fn finite(self) -> Option<Vec<Monomial>> {
        match self {
            QuotientBasis::Finite(v) => Some(v),
            QuotientBasis::InfiniteDimensional => None,
        }
    }
}

/// Exact normal forms in a finite-dimensional local quotient.
///
/// If every monomial of degree `corner` is a leading monomial, then
/// `m^corner` lies in the localized ideal, so the local quotient equals the
/// affine quotient by `I + m^corner`. We reduce there with a global basis and
/// change coordinates back to the local standard monomials.
#[derive(Debug, Clone)]
struct LocalReducer {
    corner: u32,
    augmented: Box<IdealBasis>,
    global_monomials: Vec<Monomial>,
    local_monomials: Vec<Monomial>,
    /// Rows: global standard monomials; columns: local standard monomials.
    to_local: QMatrix,
}

/// A computed standard basis together with its input.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    ring: Arc<RingSpec>,
    generators: Vec<Poly>,
    std: Vec<Poly>,
    certs: Option<Vec<Vec<Poly>>>,
    budget: Budget,
    /// Built on first use; only local orderings with finite quotients get one.
    local: OnceLock<Result<Option<LocalReducer>, StdBasisError>>,
}

#[derive(Clone)]
struct Tracked {
    p: Poly,
    cof: Vec<Poly>,
}

impl IdealBasis {
    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// The standard basis: monic, minimal, and (global orderings) reduced.
    pub fn std(&self) -> &[Poly] {
        &self.std
    }

    /// Cofactor rows: `std[i] = sum_j certs[i][j] * generators[j]`.
    pub fn certificates(&self) -> Option<&[Vec<Poly>]> {
        self.certs.as_deref()
    }

    pub fn is_local(&self) -> bool {
        self.ring.order().is_local()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.std
            .iter()
            .filter_map(|p| p.leading_monomial().cloned())
            .collect()
    }

    /// Canonical text: one polynomial per line.
    pub fn to_text(&self) -> String {
        self.std.iter().map(|p| format!("{p}\n")).collect()
    }

    /// Normal form of `f`.
    ///
    /// Global orderings: the remainder of full division, so no term is
    /// divisible by a leading monomial. Local orderings with a
    /// finite-dimensional quotient: the unique representative supported on
    /// the local standard monomials. Otherwise Mora's weak normal form, which
    /// is zero exactly for members of the localized ideal.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly, StdBasisError> {
        self.check_ring(f)?;
        if !self.is_local() {
            return Ok(reduce(f, &self.std, None).0);
        }
        match self.local_reducer()? {
            Some(lr) => Ok(lr.normal_form(f, &self.ring)),
            None => mora_normal_form(f, &self.std, &self.budget),
        }
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, StdBasisError> {
        self.check_ring(f)?;
        if self.is_local() {
            return Ok(mora_normal_form(f, &self.std, &self.budget)?.is_zero());
        }
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Cofactors `c` with `f = sum_j c[j] * generators[j]`, replay-checked.
    pub fn lift_certificate(&self, f: &Poly) -> Result<Vec<Poly>, StdBasisError> {
        self.check_ring(f)?;
        if self.is_local() {
            return Err(StdBasisError::CertificateUnavailable(
                "local-ordering bases only determine membership up to a unit".into(),
            ));
        }
        let Some(certs) = &self.certs else {
            return Err(StdBasisError::CertificateUnavailable(
                "basis was computed without certificates".into(),
            ));
        };
        let (rem, quotients) = reduce(f, &self.std, Some(self.std.len()));
        if !rem.is_zero() {
            return Err(StdBasisError::NotMember);
        }
        let mut cof = vec![Poly::zero(&self.ring); self.generators.len()];
        for (i, q) in quotients.into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (j, c) in certs[i].iter().enumerate() {
                if !c.is_zero() {
                    cof[j] = &cof[j] + &(&q * c);
                }
            }
        }
        let replay = combine(&cof, &self.generators, &self.ring);
        if replay != *f {
            return Err(StdBasisError::Internal(
                "certificate does not replay".into(),
            ));
        }
        Ok(cof)
    }

    /// Standard monomials of the quotient, sorted by degree-reverse-lexicographic order ascending.
    pub fn quotient_basis(&self) -> QuotientBasis {
        match standard_monomials(&self.leading_monomials(), self.ring.nvars()) {
            Some(v) => QuotientBasis::Finite(v),
            None => QuotientBasis::InfiniteDimensional,
        }
    }

    /// For a finite local quotient, the degree `N` with `m^N` inside the ideal.
    pub fn local_corner(&self) -> Result<Option<u32>, StdBasisError> {
        Ok(self.local_reducer()?.map(|l| l.corner))
    }

    fn local_reducer(&self) -> Result<Option<&LocalReducer>, StdBasisError> {
        if !self.is_local() {
            return Ok(None);
        }
        match self
            .local
            .get_or_init(|| build_local_reducer(self, &self.budget))
        {
            Ok(r) => Ok(r.as_ref()),
            Err(e) => Err(e.clone()),
        }
    }

    fn check_ring(&self, f: &Poly) -> Result<(), StdBasisError> {
        if **f.ring() == *self.ring {
            Ok(())
        } else {
            Err(StdBasisError::Poly(PolyError::RingMismatch))
        }
    }
}

impl LocalReducer {
    fn normal_form(&self, f: &Poly, ring: &Arc<RingSpec>) -> Poly {
        let g = f
            .with_ring(self.augmented.ring())
            .truncate_degree(self.corner);
        let nf = reduce(&g, &self.augmented.std, None).0;
        let idx: HashMap<&Monomial, usize> = self
            .global_monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut coords = vec![Q::zero(); self.global_monomials.len()];
        for (m, c) in nf.terms() {
            coords[idx[m]] = c.clone();
        }
        let local = self.to_local.transpose().mul_vec(&coords);
        Poly::from_terms(ring, self.local_monomials.iter().cloned().zip(local))
    }
}

fn combine(cof: &[Poly], gens: &[Poly], ring: &Arc<RingSpec>) -> Poly {
    let mut acc = Poly::zero(ring);
    for (c, g) in cof.iter().zip(gens) {
        if !c.is_zero() {
            acc = acc + c * g;
        }
    }
    acc
}

/// Monomials divisible by no element of `lms`, or `None` if infinitely many.
pub fn standard_monomials(lms: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    let mut bounds = vec![u32::MAX; nvars];
    for m in lms {
        if m.is_one() {
            return Some(Vec::new());
        }
        if let Some(i) = m.pure_power_of() {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if bounds.contains(&u32::MAX) {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let m = Monomial::new(cur.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the box [0, bounds)
        let mut k = 0;
        loop {
            if k == nvars {
                let order = MonomialOrder::GlobalDegRevLex;
                out.sort_by(|a, b| order.cmp(a, b));
                return Some(out);
            }
            cur[k] += 1;
            if cur[k] < bounds[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Full division of `f` by `divisors` (first divisor in list order wins).
/// Returns the remainder and, when `track` is `Some(n)`, the `n` quotients.
fn reduce(f: &Poly, divisors: &[Poly], track: Option<usize>) -> (Poly, Vec<Poly>) {
    let ring = f.ring().clone();
    let mut quotients: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); track.unwrap_or(0)];
    let mut rem: Vec<(Monomial, Q)> = Vec::new();
    let mut h = f.clone();
    while let Some((lm, lc)) = h.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = divisors
            .iter()
            .enumerate()
            .find(|(_, g)| g.leading_monomial().is_some_and(|l| l.divides(&lm)));
        match hit {
            Some((i, g)) => {
                let (glm, glc) = g.leading_term().unwrap();
                let t = lm.div(glm).unwrap();
                let c = &lc / glc;
                h = &h - &g.mul_term(&t, &c);
                if track.is_some() {
                    quotients[i].push((t, c));
                }
            }
            None => {
                rem.push((lm, lc));
                h = h.tail();
            }
        }
    }
    let quotients = quotients
        .into_iter()
        .map(|q| Poly::from_terms(&ring, q))
        .collect();
    (Poly::from_sorted(&ring, rem), quotients)
}

fn spoly(f: &Poly, g: &Poly) -> (Poly, Monomial, Q, Monomial, Q) {
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let l = fm.lcm(gm);
    let tf = l.div(fm).unwrap();
    let tg = l.div(gm).unwrap();
    let cf = fc.recip();
    let cg = gc.recip();
    let s = &f.mul_term(&tf, &cf) - &g.mul_term(&tg, &cg);
    (s, tf, cf, tg, cg)
}

/// Mora's normal form: `u*f - h` lies in the ideal for some unit `u`, and the
/// leading monomial of `h` is divisible by no leading monomial of `basis`.
pub fn mora_normal_form(f: &Poly, basis: &[Poly], budget: &Budget) -> Result<Poly, StdBasisError> {
    let mut h = f.clone();
    let mut t: Vec<Poly> = basis.to_vec();
    let mut steps = 0usize;
    while let Some(lm) = h.leading_monomial().cloned() {
        let best = t
            .iter()
            .enumerate()
            .filter(|(_, g)| g.leading_monomial().is_some_and(|l| l.divides(&lm)))
            .min_by_key(|(i, g)| (g.ecart(), *i))
            .map(|(i, _)| i);
        let Some(i) = best else { break };
        steps += 1;
        if steps > budget.max_pairs {
            return Err(StdBasisError::Budget(
                "Mora normal form did not terminate within the step budget".into(),
            ));
        }
        let g = t[i].clone();
        if g.ecart() > h.ecart() {
            t.push(h.clone());
        }
        let (glm, glc) = g.leading_term().unwrap();
        let c = h.leading_coefficient().unwrap() / glc;
        h = &h - &g.mul_term(&lm.div(glm).unwrap(), &c);
        if h.total_degree() > budget.max_degree.saturating_mul(4) {
            return Err(StdBasisError::Budget(
                "Mora normal form exceeded the degree budget".into(),
            ));
        }
    }
    Ok(h)
}

/// Computes a standard basis of the ideal generated by `gens`.
///
/// The algorithm is chosen by the ring's ordering. Certificates are only
/// available for global orderings and are ignored otherwise.
pub fn std_basis(
    gens: &[Poly],
    ring: &Arc<RingSpec>,
    with_certificates: bool,
    budget: &Budget,
) -> Result<IdealBasis, StdBasisError> {
    if gens.is_empty() {
        return Err(StdBasisError::NoGenerators);
    }
    for (i, g) in gens.iter().enumerate() {
        if **g.ring() != **ring {
            return Err(StdBasisError::Poly(PolyError::RingMismatch));
        }
        if g.is_zero() {
            return Err(StdBasisError::ZeroGenerator(i));
        }
    }
    if ring.order().is_local() {
        let std = mora(gens, budget)?;
        Ok(IdealBasis {
            ring: ring.clone(),
            generators: gens.to_vec(),
            std,
            certs: None,
            budget: *budget,
            local: OnceLock::new(),
        })
    } else {
        let (std, certs) = buchberger(gens, with_certificates, budget)?;
        Ok(IdealBasis {
            ring: ring.clone(),
            generators: gens.to_vec(),
            std,
            certs,
            budget: *budget,
            local: OnceLock::new(),
        })
    }
}

fn build_local_reducer(
    basis: &IdealBasis,
    budget: &Budget,
) -> Result<Option<LocalReducer>, StdBasisError> {
    let QuotientBasis::Finite(local_monomials) = basis.quotient_basis() else {
        return Ok(None);
    };
    let corner = local_monomials
        .iter()
        .map(Monomial::degree)
        .max()
        .map_or(0, |d| d + 1);
    let global = basis.ring.with_order(MonomialOrder::GlobalDegRevLex);
    let n = basis.ring.nvars();
    let mut gens: Vec<Poly> = basis
        .generators
        .iter()
        .map(|g| g.with_ring(&global))
        .collect();
    gens.extend(
        Monomial::all_of_degree(n, corner)
            .into_iter()
            .map(|m| Poly::monomial(&global, m)),
    );
    let (std, _) = buchberger(&gens, false, budget)?;
    let augmented = IdealBasis {
        ring: global.clone(),
        generators: gens,
        std,
        certs: None,
        budget: *budget,
        local: OnceLock::new(),
    };
    let global_monomials = augmented
        .quotient_basis()
        .finite()
        .ok_or_else(|| StdBasisError::Internal("augmented ideal has infinite colength".into()))?;
    if global_monomials.len() != local_monomials.len() {
        return Err(StdBasisError::Internal(format!(
            "local quotient has dimension {} but its truncation has {}",
            local_monomials.len(),
            global_monomials.len()
        )));
    }
    let gidx: HashMap<&Monomial, usize> = global_monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    // column j: global coordinates of local standard monomial j
    let mut change = QMatrix::zeros(global_monomials.len(), local_monomials.len());
    for (j, m) in local_monomials.iter().enumerate() {
        let nf = reduce(&Poly::monomial(&global, m.clone()), &augmented.std, None).0;
        for (t, c) in nf.terms() {
            change[(gidx[t], j)] = c.clone();
        }
    }
    let inv = change
        .inverse()
        .ok_or_else(|| StdBasisError::Internal("local standard monomials are dependent".into()))?;
    Ok(Some(LocalReducer {
        corner,
        augmented: Box::new(augmented),
        global_monomials,
        local_monomials,
        // coordinates: local = inv * global, stored transposed for mul_vec on rows
        to_local: inv.transpose(),
    }))
}

#[allow(clippy::type_complexity)]
fn buchberger(
    gens: &[Poly],
    track: bool,
    budget: &Budget,
) -> Result<(Vec<Poly>, Option<Vec<Vec<Poly>>>), StdBasisError> {
    let ring = gens[0].ring().clone();
    let order = ring.order();
    let m = gens.len();
    let mut basis: Vec<Tracked> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: BTreeSet<(Vec<i64>, usize, usize)> = BTreeSet::new();
    let mut polys: Vec<Poly> = Vec::new();

    let unit_row = |j: usize, c: Q| -> Vec<Poly> {
        if !track {
            return Vec::new();
        }
        let mut row = vec![Poly::zero(&ring); m];
        row[j] = Poly::constant(&ring, c);
        row
    };
    for (j, g) in gens.iter().enumerate() {
        let lc = g.leading_coefficient().unwrap().recip();
        let t = Tracked {
            p: g.scale(&lc),
            cof: unit_row(j, lc),
        };
        let k = basis.len();
        polys.push(t.p.clone());
        basis.push(t);
        for i in 0..k {
            pending.insert((i, k));
            queue.insert((order.sort_key(&lcm_of(&basis, (i, k))), k, i));
        }
    }

    let mut reductions = 0usize;
    // normal strategy: smallest lcm first, then smallest indices
    while let Some((_, j, i)) = queue.pop_first() {
        pending.remove(&(i, j));
        let lmi = basis[i].p.leading_monomial().unwrap().clone();
        let lmj = basis[j].p.leading_monomial().unwrap().clone();
        if lmi.is_coprime(&lmj) {
            continue;
        }
        let l = lmi.lcm(&lmj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].p.leading_monomial().unwrap().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if l.degree() > budget.max_degree {
            return Err(StdBasisError::Budget(format!(
                "S-pair of degree {} exceeds the degree cap {}",
                l.degree(),
                budget.max_degree
            )));
        }
        reductions += 1;
        if reductions > budget.max_pairs {
            return Err(StdBasisError::Budget(format!(
                "more than {} S-pair reductions",
                budget.max_pairs
            )));
        }
        let (s, tf, cf, tg, cg) = spoly(&basis[i].p, &basis[j].p);
        let (h, quotients) = reduce(&s, &polys, if track { Some(polys.len()) } else { None });
        if h.is_zero() {
            continue;
        }
        let mut cof = Vec::new();
        if track {
            cof = (0..m)
                .map(|c| {
                    let mut acc =
                        &basis[i].cof[c].mul_term(&tf, &cf) - &basis[j].cof[c].mul_term(&tg, &cg);
                    for (k, q) in quotients.iter().enumerate() {
                        if !q.is_zero() && !basis[k].cof[c].is_zero() {
                            acc = &acc - &(q * &basis[k].cof[c]);
                        }
                    }
                    acc
                })
                .collect();
        }
        let lc = h.leading_coefficient().unwrap().recip();
        let t = Tracked {
            p: h.scale(&lc),
            cof: cof.iter().map(|c| c.scale(&lc)).collect(),
        };
        let k = basis.len();
        polys.push(t.p.clone());
        basis.push(t);
        for i in 0..k {
            pending.insert((i, k));
            queue.insert((order.sort_key(&lcm_of(&basis, (i, k))), k, i));
        }
    }

    let reduced = interreduce(basis, track);
    let polys: Vec<Poly> = reduced.iter().map(|t| t.p.clone()).collect();
    verify_spairs(&polys)?;
    let certs = if track {
        Some(reduced.into_iter().map(|t| t.cof).collect())
    } else {
        None
    };
    Ok((polys, certs))
}

fn lcm_of(basis: &[Tracked], (i, j): (usize, usize)) -> Monomial {
    basis[i]
        .p
        .leading_monomial()
        .unwrap()
        .lcm(basis[j].p.leading_monomial().unwrap())
}

/// Minimal, reduced, monic basis sorted by leading monomial ascending.
fn interreduce(basis: Vec<Tracked>, track: bool) -> Vec<Tracked> {
    let order = basis[0].p.ring().order();
    let mut keep: Vec<Tracked> = Vec::new();
    for (idx, t) in basis.iter().enumerate() {
        let lm = t.p.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(o, u)| {
            let ul = u.p.leading_monomial().unwrap();
            o != idx && ul.divides(lm) && (ul != lm || o < idx)
        });
        if !redundant {
            keep.push(t.clone());
        }
    }
    keep.sort_by(|a, b| {
        order.cmp(
            a.p.leading_monomial().unwrap(),
            b.p.leading_monomial().unwrap(),
        )
    });
    let n = keep.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, t)| t.p.clone())
            .collect();
        let (r, quotients) = reduce(
            &keep[i].p,
            &others,
            if track { Some(others.len()) } else { None },
        );
        let mut cof = keep[i].cof.clone();
        if track {
            let other_idx: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            for (q, &j) in quotients.iter().zip(&other_idx) {
                if q.is_zero() {
                    continue;
                }
                for (c, oc) in cof.iter_mut().zip(&keep[j].cof) {
                    if !oc.is_zero() {
                        *c = &*c - &(q * oc);
                    }
                }
            }
        }
        let lc = r.leading_coefficient().unwrap().recip();
        out.push(Tracked {
            p: r.scale(&lc),
            cof: cof.iter().map(|c| c.scale(&lc)).collect(),
        });
    }
    out
}

fn verify_spairs(std: &[Poly]) -> Result<(), StdBasisError> {
    for i in 0..std.len() {
        for j in i + 1..std.len() {
            let (a, b) = (
                std[i].leading_monomial().unwrap(),
                std[j].leading_monomial().unwrap(),
            );
            if a.is_coprime(b) {
                continue;
            }
            let s = spoly(&std[i], &std[j]).0;
            if !reduce(&s, std, None).0.is_zero() {
                return Err(StdBasisError::Internal(format!(
                    "S-pair ({i}, {j}) does not reduce to zero"
                )));
            }
        }
    }
    Ok(())
}

fn mora(gens: &[Poly], budget: &Budget) -> Result<Vec<Poly>, StdBasisError> {
    let mut s: Vec<Poly> = gens.iter().map(Poly::monic).collect();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for j in 0..s.len() {
        for i in 0..j {
            pending.push((i, j));
        }
    }
    let mut reductions = 0usize;
    while !pending.is_empty() {
        let pos = (0..pending.len())
            .min_by(|&a, &b| {
                let (ia, ja) = pending[a];
                let (ib, jb) = pending[b];
                let la = s[ia]
                    .leading_monomial()
                    .unwrap()
                    .lcm(s[ja].leading_monomial().unwrap());
                let lb = s[ib]
                    .leading_monomial()
                    .unwrap()
                    .lcm(s[jb].leading_monomial().unwrap());
                la.degree().cmp(&lb.degree()).then((ja, ia).cmp(&(jb, ib)))
            })
            .unwrap();
        let (i, j) = pending.swap_remove(pos);
        let l = s[i]
            .leading_monomial()
            .unwrap()
            .lcm(s[j].leading_monomial().unwrap());
        if l.degree() > budget.max_degree {
            return Err(StdBasisError::Budget(format!(
                "S-pair of degree {} exceeds the degree cap {}",
                l.degree(),
                budget.max_degree
            )));
        }
        reductions += 1;
        if reductions > budget.max_pairs {
            return Err(StdBasisError::Budget(format!(
                "more than {} S-pair reductions",
                budget.max_pairs
            )));
        }
        let sp = spoly(&s[i], &s[j]).0;
        let h = mora_normal_form(&sp, &s, budget)?;
        if !h.is_zero() {
            let k = s.len();
            for i in 0..k {
                pending.push((i, k));
            }
            s.push(h.monic());
        }
    }
    // minimalize
    let mut keep: Vec<Poly> = Vec::new();
    for (idx, p) in s.iter().enumerate() {
        let lm = p.leading_monomial().unwrap();
        let redundant = s.iter().enumerate().any(|(o, u)| {
            let ul = u.leading_monomial().unwrap();
            o != idx && ul.divides(lm) && (ul != lm || o < idx)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    let order = gens[0].ring().order();
    keep.sort_by(|a, b| {
        order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .reverse()
    });
    for i in 0..keep.len() {
        for j in i + 1..keep.len() {
            let sp = spoly(&keep[i], &keep[j]).0;
            if !mora_normal_form(&sp, &keep, budget)?.is_zero() {
                return Err(StdBasisError::Internal(format!(
                    "local S-pair ({i}, {j}) does not reduce to zero"
                )));
            }
        }
    }
    Ok(keep)
}

/// Whether `f` lies in the ideal spanned by `gens` over the rationals after
/// multiplying by monomials up to total degree `bound`. Brute force; used
/// as an oracle for small cases.
pub fn membership_by_linear_algebra(f: &Poly, gens: &[Poly], bound: u32) -> bool {
    let n = f.ring().nvars();
    let ring = f.ring();
    let mut cols: Vec<Poly> = Vec::new();
    for g in gens {
        for d in 0..=bound.saturating_sub(g.total_degree()) {
            for m in Monomial::all_of_degree(n, d) {
                cols.push(g.mul_term(&m, &Q::one()));
            }
        }
    }
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for p in cols.iter().chain(std::iter::once(f)) {
        for (m, _) in p.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let mut a = QMatrix::zeros(index.len(), cols.len());
    for (j, p) in cols.iter().enumerate() {
        for (m, c) in p.terms() {
            a[(index[m], j)] = c.clone();
        }
    }
    let mut b = vec![Q::zero(); index.len()];
    for (m, c) in f.terms() {
        b[index[m]] = c.clone();
    }
    let _ = ring;
    a.solve(&b).is_some()
}

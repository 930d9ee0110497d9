//! Jet-truncated homotopy computations.
//!
//! Even endomorphisms and odd homotopies are expanded in monomials of total
//! degree below a jet order `D`. When the factorization is weighted
//! homogeneous the linear systems split into weight strata, solved
//! independently. Within a stratum, `Z` is the kernel of the graded
//! commutator with `delta` and `B` the image of `H -> delta H + H delta`;
//! the contraction algebra is read off from `Z / (Z meet B)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{boundary_of, euler_pairing, MatrixFactorization, MfError, MfMorphism, Parity};
use crate::findim::FinDimAlgebra;
use crate::linalg::{rank_mod_prime_lower_bound, rank_of, Echelon, QMatrix, SparseVec};
use crate::milnor::MilnorAlgebra;
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::Q;

pub const DEFAULT_JET_ORDER: u32 = 8;

/// Integer weights making every entry of the differential homogeneous:
/// `delta1[i][j]` has weight `f0[i] - f1[j]`, `delta0[j][i]` has weight
/// `f1[j] - f0[i] + potential`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub variables: Vec<i64>,
    pub f0: Vec<i64>,
    pub f1: Vec<i64>,
    pub potential: i64,
}

impl Grading {
    /// All weights zero: a single stratum.
    pub fn trivial(e: &MatrixFactorization) -> Grading {
        Grading {
            variables: vec![0; e.ring().nvars()],
            f0: vec![0; e.rank()],
            f1: vec![0; e.rank()],
            potential: 0,
        }
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        m.exponents()
            .iter()
            .zip(&self.variables)
            .map(|(&e, &w)| i64::from(e) * w)
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.potential == 0
    }

    pub fn is_homogeneous(&self, e: &MatrixFactorization) -> bool {
        let r = e.rank();
        let homog = |p: &Poly, w: i64| p.terms().iter().all(|(m, _)| self.weight(m) == w);
        homog(e.potential(), self.potential)
            && (0..r).all(|i| {
                (0..r).all(|j| {
                    homog(e.delta1().get(i, j), self.f0[i] - self.f1[j])
                        && homog(
                            e.delta0().get(j, i),
                            self.f1[j] - self.f0[i] + self.potential,
                        )
                })
            })
    }

    /// Solves for a grading with positive variable weights, if one exists.
    pub fn find(e: &MatrixFactorization) -> Option<Grading> {
        let (n, r) = (e.ring().nvars(), e.rank());
        // columns: potential, f0, f1, variables, right-hand side
        let (c_f0, c_f1, c_var, c_rhs) = (1, 1 + r, 1 + 2 * r, 1 + 2 * r + n);
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let monomial_row = |m: &Monomial| {
            let mut row = vec![Q::zero(); c_rhs + 1];
            for (k, &x) in m.exponents().iter().enumerate() {
                row[c_var + k] = Q::from_integer(x.into());
            }
            row
        };
        for (m, _) in e.potential().terms() {
            let mut row = monomial_row(m);
            row[0] = -Q::one();
            rows.push(row);
        }
        for i in 0..r {
            for j in 0..r {
                for (m, _) in e.delta1().get(i, j).terms() {
                    let mut row = monomial_row(m);
                    row[c_f0 + i] -= Q::one();
                    row[c_f1 + j] += Q::one();
                    rows.push(row);
                }
                for (m, _) in e.delta0().get(j, i).terms() {
                    let mut row = monomial_row(m);
                    row[c_f1 + j] -= Q::one();
                    row[c_f0 + i] += Q::one();
                    row[0] = -Q::one();
                    rows.push(row);
                }
            }
        }
        let mut norm = vec![Q::zero(); c_rhs + 1];
        norm[0] = Q::one();
        norm[c_rhs] = Q::one();
        rows.push(norm);
        if r > 0 {
            let mut norm = vec![Q::zero(); c_rhs + 1];
            norm[c_f0] = Q::one();
            rows.push(norm);
        }
        let (rref, pivots) = QMatrix::from_rows(rows).rref();
        if pivots.contains(&c_rhs) {
            return None;
        }
        let free: Vec<usize> = (0..c_rhs).filter(|j| !pivots.contains(j)).collect();
        let free_vars: Vec<usize> = free.iter().copied().filter(|&j| j >= c_var).collect();
        // free weights are tried from 1/2, ..., 1/12; free shifts are zero
        let candidates: Vec<Q> = (2..=12).map(|d| Q::new(1.into(), d.into())).collect();
        let mut choice = vec![0usize; free_vars.len()];
        for _ in 0..100_000 {
            let mut x = vec![Q::zero(); c_rhs];
            for (k, &j) in free_vars.iter().enumerate() {
                x[j] = candidates[choice[k]].clone();
            }
            for (row, &p) in pivots.iter().enumerate() {
                let mut v = rref[(row, c_rhs)].clone();
                for &j in &free {
                    v -= &rref[(row, j)] * &x[j];
                }
                x[p] = v;
            }
            if x[c_var..].iter().all(|w| w.is_positive()) {
                let l = x
                    .iter()
                    .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let int = |v: &Q| -> Option<i64> {
                    i64::try_from((v * Q::from_integer(l.clone())).to_integer()).ok()
                };
                let all: Option<Vec<i64>> = x.iter().map(int).collect();
                let all = all?;
                let g = Grading {
                    potential: all[0],
                    f0: all[c_f0..c_f1].to_vec(),
                    f1: all[c_f1..c_var].to_vec(),
                    variables: all[c_var..].to_vec(),
                };
                return g.is_homogeneous(e).then_some(g);
            }
            let mut k = 0;
            loop {
                if k == free_vars.len() {
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
        None
    }
}

/// Key of a matrix coefficient: block, row, column, monomial.
type Key = (u8, usize, usize, Monomial);

/// Lazily numbered coordinates.
#[derive(Default)]
struct Coords {
    index: HashMap<Key, usize>,
    keys: Vec<Key>,
}

impl Coords {
    fn get(&mut self, key: Key) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let next = self.keys.len();
        self.keys.push(key.clone());
        self.index.insert(key, next);
        next
    }
}

fn add_at(v: &mut SparseVec, idx: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(idx).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&idx);
    }
}

/// Monomials of total degree below the window, grouped by weight.
struct MonomialTable {
    by_weight: HashMap<i64, Vec<Monomial>>,
}

impl MonomialTable {
    fn new(g: &Grading, nvars: usize, window: u32) -> MonomialTable {
        let mut by_weight: HashMap<i64, Vec<Monomial>> = HashMap::new();
        for deg in 0..window {
            for m in Monomial::all_of_degree(nvars, deg) {
                by_weight.entry(g.weight(&m)).or_default().push(m);
            }
        }
        MonomialTable { by_weight }
    }

    fn get(&self, w: i64) -> &[Monomial] {
        self.by_weight.get(&w).map(Vec::as_slice).unwrap_or(&[])
    }

    fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_weight.keys().copied()
    }
}

struct Jet<'a> {
    e: &'a MatrixFactorization,
    g: &'a Grading,
    table: MonomialTable,
    window: u32,
    max_unknowns: usize,
}

impl<'a> Jet<'a> {
    fn new(
        e: &'a MatrixFactorization,
        g: &'a Grading,
        window: u32,
        max_unknowns: usize,
    ) -> Jet<'a> {
        Jet {
            e,
            g,
            table: MonomialTable::new(g, e.ring().nvars(), window),
            window,
            max_unknowns,
        }
    }

    fn r(&self) -> usize {
        self.e.rank()
    }

    /// Weight of the even entry `(block, i, j)` in stratum `s`.
    fn even_shift(&self, block: u8, i: usize, j: usize) -> i64 {
        match block {
            0 => self.g.f0[i] - self.g.f0[j],
            _ => self.g.f1[i] - self.g.f1[j],
        }
    }

    /// Weight of the odd entry in stratum `s`: block 0 is `h0[j][i]: F0 -> F1`, block 1 is `h1[i][j]: F1 -> F0`.
    fn odd_shift(&self, block: u8, row: usize, col: usize) -> i64 {
        match block {
            0 => self.g.f1[row] - self.g.f0[col],
            _ => self.g.f0[row] - self.g.f1[col] - self.g.potential,
        }
    }

    fn unknowns(
        &self,
        s: i64,
        shift: impl Fn(u8, usize, usize) -> i64,
    ) -> Result<Vec<Key>, MfError> {
        let r = self.r();
        let mut out = Vec::new();
        for block in 0..2u8 {
            for i in 0..r {
                for j in 0..r {
                    for m in self.table.get(s + shift(block, i, j)) {
                        out.push((block, i, j, m.clone()));
                    }
                }
            }
        }
        if out.len() > self.max_unknowns {
            return Err(MfError::Budget(format!(
                "{} unknowns in stratum {s}",
                out.len()
            )));
        }
        Ok(out)
    }

    fn even_unknowns(&self, s: i64) -> Result<Vec<Key>, MfError> {
        self.unknowns(s, |b, i, j| self.even_shift(b, i, j))
    }

    fn odd_unknowns(&self, s: i64) -> Result<Vec<Key>, MfError> {
        self.unknowns(s, |b, i, j| self.odd_shift(b, i, j))
    }

    /// Strata in which some even entry has a monomial inside the window.
    fn strata(&self) -> BTreeSet<i64> {
        let r = self.r();
        let mut shifts = BTreeSet::new();
        for b in 0..2u8 {
            for i in 0..r {
                for j in 0..r {
                    shifts.insert(self.even_shift(b, i, j));
                }
            }
        }
        self.table
            .weights()
            .flat_map(|w| shifts.iter().map(move |sh| w - sh))
            .collect()
    }

    fn stratum_of_even(&self, block: u8, i: usize, j: usize, m: &Monomial) -> i64 {
        self.g.weight(m) - self.even_shift(block, i, j)
    }

    /// `m * p` added into entry `(block, i, j)` with sign.
    fn add_product(
        v: &mut SparseVec,
        coords: &mut Coords,
        at: (u8, usize, usize),
        m: &Monomial,
        p: &Poly,
        sign: &Q,
    ) {
        for (pm, c) in p.terms() {
            add_at(v, coords.get((at.0, at.1, at.2, m.mul(pm))), sign * c);
        }
    }

    /// Coefficients of `(alpha0 delta1 - delta1 alpha1, alpha1 delta0 - delta0 alpha0)` for one unknown.
    fn commutator_image(&self, key: &Key, coords: &mut Coords) -> SparseVec {
        let (d1, d0) = (self.e.delta1(), self.e.delta0());
        let (one, minus) = (Q::one(), -Q::one());
        let mut v = SparseVec::new();
        let (block, i, j, m) = key;
        for c in 0..self.r() {
            if *block == 0 {
                Self::add_product(&mut v, coords, (0, *i, c), m, d1.get(*j, c), &one);
                Self::add_product(&mut v, coords, (1, c, *j), m, d0.get(c, *i), &minus);
            } else {
                Self::add_product(&mut v, coords, (0, c, *j), m, d1.get(c, *i), &minus);
                Self::add_product(&mut v, coords, (1, *i, c), m, d0.get(*j, c), &one);
            }
        }
        v
    }

    /// Coefficients of `(delta1 h0 + h1 delta0, delta0 h1 + h0 delta1)` for one unknown.
    fn boundary_image(&self, key: &Key, coords: &mut Coords) -> SparseVec {
        let (d1, d0) = (self.e.delta1(), self.e.delta0());
        let one = Q::one();
        let mut v = SparseVec::new();
        let (block, row, col, m) = key;
        for c in 0..self.r() {
            if *block == 0 {
                // h0[row][col] = m maps F0_col -> F1_row
                Self::add_product(&mut v, coords, (0, c, *col), m, d1.get(c, *row), &one);
                Self::add_product(&mut v, coords, (1, *row, c), m, d1.get(*col, c), &one);
            } else {
                // h1[row][col] = m maps F1_col -> F0_row
                Self::add_product(&mut v, coords, (0, *row, c), m, d0.get(*col, c), &one);
                Self::add_product(&mut v, coords, (1, c, *col), m, d0.get(c, *row), &one);
            }
        }
        v
    }

    fn even_coords(m: &MfMorphism, coords: &mut Coords) -> SparseVec {
        let mut v = SparseVec::new();
        for (block, mat) in [(0u8, m.first()), (1u8, m.second())] {
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    for (mon, c) in mat.get(i, j).terms() {
                        add_at(&mut v, coords.get((block, i, j, mon.clone())), c.clone());
                    }
                }
            }
        }
        v
    }

    fn assemble(&self, parity: Parity, keys: &[Key], coeffs: &SparseVec) -> MfMorphism {
        let ring = self.e.ring();
        let r = self.r();
        let mut blocks = [PolyMatrix::zeros(ring, r, r), PolyMatrix::zeros(ring, r, r)];
        let mut entries: BTreeMap<(u8, usize, usize), Vec<(Monomial, Q)>> = BTreeMap::new();
        for (&u, c) in coeffs {
            let (b, i, j, m) = &keys[u];
            entries
                .entry((*b, *i, *j))
                .or_default()
                .push((m.clone(), c.clone()));
        }
        for ((b, i, j), terms) in entries {
            blocks[b as usize].set(i, j, Poly::from_terms(ring, terms));
        }
        let [first, second] = blocks;
        match parity {
            Parity::Even => MfMorphism::even(first, second),
            Parity::Odd => MfMorphism::odd(first, second),
        }
        .expect("blocks share a shape")
    }

    /// Inserts the boundaries of every homotopy unknown in stratum `s`.
    fn boundary_echelon(
        &self,
        s: i64,
        coords: &mut Coords,
        tracked: bool,
    ) -> Result<(Echelon, Vec<Key>), MfError> {
        let keys = self.odd_unknowns(s)?;
        let mut ech = Echelon::new();
        for (u, key) in keys.iter().enumerate() {
            let img = self.boundary_image(key, coords);
            let tag = if tracked {
                SparseVec::from([(u, Q::one())])
            } else {
                SparseVec::new()
            };
            let _ = ech.insert(img, tag);
        }
        Ok((ech, keys))
    }

    /// `dim Z - dim (Z meet B)` from ranks alone: a boundary lies in the
    /// window iff its out-of-window part vanishes.
    fn stratum_dim(&self, s: i64) -> Result<usize, MfError> {
        let keys = self.even_unknowns(s)?;
        if keys.is_empty() {
            return Ok(0);
        }
        let mut residual_coords = Coords::default();
        let commutators: Vec<SparseVec> = keys
            .iter()
            .map(|k| self.commutator_image(k, &mut residual_coords))
            .collect();
        let mut coords = Coords::default();
        let boundaries: Vec<SparseVec> = self
            .odd_unknowns(s)?
            .iter()
            .map(|k| self.boundary_image(k, &mut coords))
            .collect();
        let outside: Vec<SparseVec> = boundaries
            .iter()
            .map(|b| {
                b.iter()
                    .filter(|(i, _)| coords.keys[**i].3.degree() >= self.window)
                    .map(|(i, c)| (*i, c.clone()))
                    .collect()
            })
            .collect();
        // modular ranks bound the rational ones from below, so a zero bound is exact
        let outside_rank = rank_of(&outside);
        let lower = |v: &[SparseVec]| rank_mod_prime_lower_bound(v).unwrap_or(0);
        let bound =
            (keys.len() + outside_rank).saturating_sub(lower(&commutators) + lower(&boundaries));
        if bound == 0 {
            return Ok(0);
        }
        Ok(keys.len() + outside_rank - rank_of(&commutators) - rank_of(&boundaries))
    }

    /// Representatives of `Z / (Z meet B)` in stratum `s`.
    fn stratum_hom(&self, s: i64) -> Result<Vec<MfMorphism>, MfError> {
        let keys = self.even_unknowns(s)?;
        if keys.is_empty() {
            return Ok(Vec::new());
        }
        let mut residual_coords = Coords::default();
        let mut kernel = Echelon::new();
        let mut cycles = Vec::new();
        if s == 0 {
            cycles.push(MfMorphism::identity(self.e));
        }
        for (u, key) in keys.iter().enumerate() {
            let img = self.commutator_image(key, &mut residual_coords);
            if let Err(relation) = kernel.insert(img, SparseVec::from([(u, Q::one())])) {
                cycles.push(self.assemble(Parity::Even, &keys, &relation));
            }
        }
        let mut coords = Coords::default();
        let (mut ech, _) = self.boundary_echelon(s, &mut coords, false)?;
        let mut reps = Vec::new();
        for (k, c) in cycles.into_iter().enumerate() {
            let v = Self::even_coords(&c, &mut coords);
            if ech.insert(v, SparseVec::from([(k, Q::one())])).is_ok() {
                reps.push(c);
            }
        }
        Ok(reps)
    }

    /// All strata, in increasing order, with their representatives.
    fn hom_space(&self) -> Result<Vec<(i64, Vec<MfMorphism>)>, MfError> {
        let strata: Vec<i64> = self.strata().into_iter().collect();
        let results: Vec<Result<(i64, Vec<MfMorphism>), MfError>> = strata
            .par_iter()
            .map(|&s| {
                self.stratum_dim(s)
                    .and_then(|d| {
                        if d == 0 {
                            Ok(Vec::new())
                        } else {
                            self.stratum_hom(s)
                        }
                    })
                    .map(|reps| (s, reps))
            })
            .collect();
        let mut out = Vec::new();
        for res in results {
            let (s, reps) = res?;
            if !reps.is_empty() {
                out.push((s, reps));
            }
        }
        Ok(out)
    }

    /// Splits an even endomorphism by stratum.
    fn split(&self, m: &MfMorphism) -> BTreeMap<i64, MfMorphism> {
        let ring = self.e.ring();
        let r = self.r();
        let mut parts: BTreeMap<i64, [PolyMatrix; 2]> = BTreeMap::new();
        for (block, mat) in [(0u8, m.first()), (1u8, m.second())] {
            for i in 0..r {
                for j in 0..r {
                    for (mon, c) in mat.get(i, j).terms() {
                        let s = self.stratum_of_even(block, i, j, mon);
                        let entry = parts.entry(s).or_insert_with(|| {
                            [PolyMatrix::zeros(ring, r, r), PolyMatrix::zeros(ring, r, r)]
                        });
                        let cur = entry[block as usize].get(i, j).clone();
                        entry[block as usize].set(
                            i,
                            j,
                            cur + Poly::term(ring, mon.clone(), c.clone()),
                        );
                    }
                }
            }
        }
        parts
            .into_iter()
            .map(|(s, [a, b])| (s, MfMorphism::even(a, b).expect("blocks share a shape")))
            .collect()
    }

    /// An odd `H` with `delta H + H delta = m` inside the window, if one exists.
    fn solve_homotopy(&self, m: &MfMorphism) -> Result<Option<MfMorphism>, MfError> {
        let mut total = MfMorphism::zero(Parity::Odd, self.e, self.e);
        for (s, part) in self.split(m) {
            let mut coords = Coords::default();
            let (ech, keys) = self.boundary_echelon(s, &mut coords, true)?;
            let target = Self::even_coords(&part, &mut coords);
            let red = ech.reduce(target);
            if !red.residual.is_empty() {
                return Ok(None);
            }
            total = total.add(&self.assemble(Parity::Odd, &keys, &red.combination))?;
        }
        Ok(Some(total))
    }
}

/// Three-valued answer of [`homotopic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyVerdict {
    /// `m = delta H + H delta` with the replay-verified witness `H`, entries of degree below `jet_order`.
    Yes { witness: MfMorphism, jet_order: u32 },
    /// No witness with entries of degree below `D` or `D + 2`.
    NoUpTo(u32),
    /// No witness below `D`, but one below `D + 2`.
    Inconclusive { witness: MfMorphism, jet_order: u32 },
}

/// Decides whether an even endomorphism is null-homotopic within jet order `d`.
pub fn homotopic(
    e: &MatrixFactorization,
    m: &MfMorphism,
    d: u32,
) -> Result<HomotopyVerdict, MfError> {
    if m.parity() != Parity::Even {
        return Err(MfError::Parity(Parity::Even));
    }
    if m.source_rank() != e.rank() || m.target_rank() != e.rank() {
        return Err(MfError::Shape("expected an endomorphism".into()));
    }
    if e.ring().variables() != m.first().ring().variables() {
        return Err(MfError::RingMismatch);
    }
    let m = MfMorphism::even(
        m.first().map(|p| p.with_ring(e.ring())),
        m.second().map(|p| p.with_ring(e.ring())),
    )?;
    let g = grading_for(e);
    for window in [d, d + 2] {
        let jet = Jet::new(e, &g, window, usize::MAX);
        if let Some(h) = jet.solve_homotopy(&m)? {
            if boundary_of(e, &h)? != m {
                return Err(MfError::Budget("homotopy witness failed replay".into()));
            }
            return Ok(if window == d {
                HomotopyVerdict::Yes {
                    witness: h,
                    jet_order: window,
                }
            } else {
                HomotopyVerdict::Inconclusive {
                    witness: h,
                    jet_order: window,
                }
            });
        }
    }
    Ok(HomotopyVerdict::NoUpTo(d))
}

fn grading_for(e: &MatrixFactorization) -> Grading {
    Grading::find(e).unwrap_or_else(|| Grading::trivial(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetOptions {
    pub jet_order: u32,
    /// Extra windows, two degrees apart, tried when a product does not reduce.
    pub growth_steps: u32,
    pub max_unknowns: usize,
}

impl Default for JetOptions {
    fn default() -> JetOptions {
        JetOptions {
            jet_order: DEFAULT_JET_ORDER,
            growth_steps: 3,
            max_unknowns: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContractionAlgebraResult {
    pub algebra: FinDimAlgebra,
    /// Even endomorphisms representing the basis of `algebra`, in order.
    pub representatives: Vec<MfMorphism>,
    /// Stratum of each representative.
    pub strata: Vec<i64>,
    /// Window from which the representatives were taken.
    pub jet_order_used: u32,
    /// Dimension agrees at `D` and `D + 2` and equals the Euler pairing.
    pub stabilized: bool,
    pub chi: i64,
    /// Dimension of the jet-truncated endomorphism space per window.
    pub dims: Vec<(u32, usize)>,
    pub grading: Grading,
}

pub fn contraction_algebra(
    e: &MatrixFactorization,
    ma: &MilnorAlgebra,
    d: u32,
) -> Result<ContractionAlgebraResult, MfError> {
    contraction_algebra_with_options(
        e,
        ma,
        &JetOptions {
            jet_order: d,
            ..JetOptions::default()
        },
    )
}

pub fn contraction_algebra_with_options(
    e: &MatrixFactorization,
    ma: &MilnorAlgebra,
    opts: &JetOptions,
) -> Result<ContractionAlgebraResult, MfError> {
    let d = opts.jet_order;
    let g = grading_for(e);
    if e.rank() == 0 {
        return Ok(ContractionAlgebraResult {
            algebra: FinDimAlgebra::zero(),
            representatives: Vec::new(),
            strata: Vec::new(),
            jet_order_used: d,
            stabilized: true,
            chi: 0,
            dims: vec![(d, 0), (d + 2, 0)],
            grading: g,
        });
    }
    let chi = euler_pairing(e, e, ma)?;
    let small = Jet::new(e, &g, d, opts.max_unknowns).hom_space()?;
    let large_jet = Jet::new(e, &g, d + 2, opts.max_unknowns);
    let large = large_jet.hom_space()?;
    let count = |h: &[(i64, Vec<MfMorphism>)]| h.iter().map(|(_, r)| r.len()).sum::<usize>();
    let dims = vec![(d, count(&small)), (d + 2, count(&large))];
    let stabilized = dims[0].1 == dims[1].1 && i64::try_from(dims[0].1).ok() == Some(chi);

    let mut reps = Vec::new();
    let mut strata = Vec::new();
    for (s, rs) in &large {
        for r in rs {
            reps.push(r.clone());
            strata.push(*s);
        }
    }
    let not_stabilized = || MfError::NotStabilized {
        dims: dims.clone(),
        chi,
    };
    let algebra = structure_constants(e, &g, &reps, &strata, d + 2, opts).and_then(
        |(labels, table, unit)| FinDimAlgebra::new(labels, table, unit).map_err(MfError::from),
    );
    let algebra = match algebra {
        Ok(a) => a,
        Err(MfError::Budget(msg)) => return Err(MfError::Budget(msg)),
        Err(_) => return Err(not_stabilized()),
    };
    Ok(ContractionAlgebraResult {
        algebra,
        representatives: reps,
        strata,
        jet_order_used: d + 2,
        stabilized,
        chi,
        dims,
        grading: g,
    })
}

/// Reduces products modulo boundaries onto the representatives of one stratum.
struct Reducer {
    coords: Coords,
    ech: Echelon,
}

impl Reducer {
    fn build(
        jet: &Jet<'_>,
        s: i64,
        reps: &[(usize, &MfMorphism)],
    ) -> Result<Option<Reducer>, MfError> {
        let mut coords = Coords::default();
        let (mut ech, _) = jet.boundary_echelon(s, &mut coords, false)?;
        for (k, r) in reps {
            let v = Jet::even_coords(r, &mut coords);
            if ech.insert(v, SparseVec::from([(*k, Q::one())])).is_err() {
                return Ok(None);
            }
        }
        Ok(Some(Reducer { coords, ech }))
    }

    fn reduce(&mut self, m: &MfMorphism) -> Option<SparseVec> {
        let v = Jet::even_coords(m, &mut self.coords);
        let red = self.ech.reduce(v);
        red.residual.is_empty().then_some(red.combination)
    }
}

type Table = (Vec<String>, Vec<Vec<Q>>, Vec<Q>);

fn structure_constants(
    e: &MatrixFactorization,
    g: &Grading,
    reps: &[MfMorphism],
    strata: &[i64],
    window: u32,
    opts: &JetOptions,
) -> Result<Table, MfError> {
    let dim = reps.len();
    let jets: Vec<Jet<'_>> = (0..=opts.growth_steps)
        .map(|t| Jet::new(e, g, window + 2 * t, opts.max_unknowns))
        .collect();
    let mut reducers: HashMap<(i64, usize), Option<Reducer>> = HashMap::new();
    let mut coordinates = |m: &MfMorphism, s: i64| -> Result<Vec<Q>, MfError> {
        let mut v = vec![Q::zero(); dim];
        if m.is_zero() {
            return Ok(v);
        }
        for (t, jet) in jets.iter().enumerate() {
            if let std::collections::hash_map::Entry::Vacant(e) = reducers.entry((s, t)) {
                let own: Vec<(usize, &MfMorphism)> = (0..dim)
                    .filter(|&k| strata[k] == s)
                    .map(|k| (k, &reps[k]))
                    .collect();
                e.insert(Reducer::build(jet, s, &own)?);
            }
            if let Some(Some(red)) = reducers.get_mut(&(s, t)) {
                if let Some(comb) = red.reduce(m) {
                    for (k, c) in comb {
                        v[k] = c;
                    }
                    return Ok(v);
                }
            }
        }
        Err(MfError::NotStabilized {
            dims: Vec::new(),
            chi: 0,
        })
    };
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let p = reps[i].compose(&reps[j])?;
            table.push(coordinates(&p, strata[i] + strata[j])?);
        }
    }
    let unit = coordinates(&MfMorphism::identity(e), 0)?;
    let labels = (0..dim).map(|k| format!("e{k}")).collect();
    Ok((labels, table, unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::{hh0, radical_and_blocks, socle_algebra, Blocks};
    use crate::mf::{builtin_family, laufer_generators, Family};
    use crate::milnor::milnor_algebra;

    #[test]
    fn gradings() {
        let e = builtin_family(Family::Laufer, 1).unwrap();
        let g = Grading::find(&e).unwrap();
        assert!(g.is_homogeneous(&e));
        let ratio: Vec<Q> = g
            .variables
            .iter()
            .map(|&w| Q::new(w.into(), g.variables[3].into()))
            .collect();
        assert_eq!(
            ratio,
            vec![
                Q::new(9.into(), 4.into()),
                Q::new(3.into(), 2.into()),
                Q::new(7.into(), 4.into()),
                Q::one()
            ]
        );
        let c = builtin_family(Family::CA1, 2).unwrap();
        let g = Grading::find(&c).unwrap();
        assert!(g.is_homogeneous(&c) && g.variables.iter().all(|&w| w > 0));
        assert!(Grading::trivial(&c).is_homogeneous(&c));
    }

    #[test]
    fn identity_is_not_null_homotopic() {
        let e = builtin_family(Family::CA1, 1).unwrap();
        assert_eq!(
            homotopic(&e, &MfMorphism::identity(&e), 8).unwrap(),
            HomotopyVerdict::NoUpTo(8)
        );
        let zero = MfMorphism::zero(Parity::Even, &e, &e);
        match homotopic(&e, &zero, 8).unwrap() {
            HomotopyVerdict::Yes { witness, .. } => assert!(witness.is_zero()),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn laufer_relation_is_null_homotopic() {
        let e = builtin_family(Family::Laufer, 1).unwrap();
        let (a, b) = laufer_generators(1).unwrap();
        let m = a.pow(2).unwrap().sub(&b.pow(3).unwrap()).unwrap();
        assert!(!m.is_zero());
        match homotopic(&e, &m, 8).unwrap() {
            HomotopyVerdict::Yes { witness, jet_order } => {
                assert_eq!(jet_order, 8);
                assert_eq!(boundary_of(&e, &witness).unwrap(), m);
            }
            v => panic!("unexpected {v:?}"),
        }
        assert_eq!(homotopic(&e, &a, 8).unwrap(), HomotopyVerdict::NoUpTo(8));
    }

    #[test]
    fn ca1_contraction_algebras() {
        for k in 1..=2u32 {
            let e = builtin_family(Family::CA1, k).unwrap();
            let ma = milnor_algebra(e.potential()).unwrap();
            let res = contraction_algebra(&e, &ma, 8).unwrap();
            assert!(res.stabilized, "k={k}: {:?}", res.dims);
            assert_eq!(res.algebra.dim(), k as usize);
            let rad = radical_and_blocks(&res.algebra);
            assert_eq!(rad.radical.len(), k as usize - 1);
            assert_eq!(rad.blocks, Blocks::Split(vec![1]));
            assert!(res.algebra.is_commutative());
        }
    }

    #[test]
    fn laufer_contraction_algebra() {
        let e = builtin_family(Family::Laufer, 1).unwrap();
        let ma = milnor_algebra(e.potential()).unwrap();
        let res = contraction_algebra(&e, &ma, 8).unwrap();
        assert!(res.stabilized, "{:?}", res.dims);
        let a = &res.algebra;
        assert_eq!(a.dim(), 9);
        assert_eq!(hh0(a).0, 6);
        let rad = radical_and_blocks(a);
        assert_eq!(rad.radical.len(), 8);
        assert_eq!(rad.blocks, Blocks::Split(vec![1]));
        assert_eq!(socle_algebra(a).len(), 1);
    }

    #[test]
    fn zero_factorization() {
        let w = crate::mf::builtin_potential(Family::CA1, 1).unwrap();
        let ma = milnor_algebra(&w).unwrap();
        let res = contraction_algebra(&MatrixFactorization::zero(w), &ma, 8).unwrap();
        assert_eq!(res.algebra.dim(), 0);
        assert!(res.stabilized);
    }
}

//! Algebras from noncommutative presentations by rewriting.
//!
//! Words are compared degree-lexicographically, letters by precedence rank.
//! Each relation is oriented so that its largest word rewrites to the rest;
//! critical pairs are completed up to a word-length bound.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use super::{AlgebraError, FinDimAlgebra};
use crate::poly::parse::{parse_expr, ExprTarget};
use crate::poly::{ParseError, ParseErrorKind};
use crate::Q;

/// A word in the generators, letters given by precedence rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    fn find(&self, sub: &[usize]) -> Option<usize> {
        if sub.len() > self.0.len() {
            return None;
        }
        (0..=self.0.len() - sub.len()).find(|&i| &self.0[i..i + sub.len()] == sub)
    }
}

/// Element of the free algebra; the leading word is the largest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Q>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn word(w: Word, c: Q) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Word, &Q)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn add(mut self, other: &NcPoly, scale: &Q) -> NcPoly {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
        self
    }

    fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `left * self * right` for words.
    fn sandwich(&self, left: &[usize], right: &[usize]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut v = left.to_vec();
            v.extend_from_slice(&w.0);
            v.extend_from_slice(right);
            out.add_term(Word(v), c.clone());
        }
        out
    }
}

struct NcTarget<'a> {
    /// `ranks[name]` gives the letter of a generator.
    names: &'a [String],
    ranks: &'a [usize],
}

impl ExprTarget for NcTarget<'_> {
    type Value = NcPoly;

    fn number(&self, q: Q) -> NcPoly {
        NcPoly::word(Word(Vec::new()), q)
    }

    fn variable(&self, name: &str, position: usize) -> Result<NcPoly, ParseError> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok(NcPoly::word(Word(vec![self.ranks[i]]), Q::one())),
            None => Err(ParseError {
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
                position,
            }),
        }
    }

    fn add(&self, a: NcPoly, b: NcPoly) -> NcPoly {
        a.add(&b, &Q::one())
    }

    fn sub(&self, a: NcPoly, b: NcPoly) -> NcPoly {
        a.add(&b, &-Q::one())
    }

    fn mul(&self, a: NcPoly, b: NcPoly) -> NcPoly {
        a.mul(&b)
    }

    fn neg(&self, a: NcPoly) -> NcPoly {
        NcPoly::zero().add(&a, &-Q::one())
    }

    fn pow(&self, a: NcPoly, e: u32) -> NcPoly {
        let mut out = NcPoly::word(Word(Vec::new()), Q::one());
        for _ in 0..e {
            out = out.mul(&a);
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Rule {
    lead: Vec<usize>,
    tail: NcPoly,
}

impl Rule {
    fn as_poly(&self) -> NcPoly {
        NcPoly::word(Word(self.lead.clone()), Q::one()).add(&self.tail, &-Q::one())
    }
}

fn reduce(p: &NcPoly, rules: &[Rule]) -> NcPoly {
    let mut p = p.clone();
    'outer: loop {
        for (w, c) in p.terms.iter().rev() {
            for r in rules {
                if let Some(pos) = w.find(&r.lead) {
                    let (c, w) = (c.clone(), w.clone());
                    p.terms.remove(&w);
                    let replacement = r.tail.sandwich(&w.0[..pos], &w.0[pos + r.lead.len()..]);
                    p = p.add(&replacement, &c);
                    continue 'outer;
                }
            }
        }
        return p;
    }
}

fn make_rule(p: &NcPoly) -> Rule {
    let (lead, lc) = p.leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    let inv = -lc.recip();
    let mut tail = NcPoly::zero();
    for (w, c) in &p.terms {
        if *w != lead {
            tail.add_term(w.clone(), c * &inv);
        }
    }
    Rule { lead: lead.0, tail }
}

type Overlap = (Vec<usize>, Vec<usize>, usize);

/// Overlaps `lead1 = u o`, `lead2 = o v` with `o` of length `k`.
fn overlaps(rules: &[Rule]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            let max = r1.lead.len().min(r2.lead.len());
            for k in 1..max {
                if r1.lead[r1.lead.len() - k..] == r2.lead[..k] {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn overlap_difference(r1: &Rule, r2: &Rule, k: usize, rules: &[Rule]) -> NcPoly {
    let v = &r2.lead[k..];
    let u = &r1.lead[..r1.lead.len() - k];
    let left = r1.tail.sandwich(&[], v);
    let right = r2.tail.sandwich(u, &[]);
    reduce(&left.add(&right, &-Q::one()), rules)
}

fn insert_rule(rules: &mut Vec<Rule>, queue: &mut Vec<NcPoly>, p: NcPoly) {
    let r = reduce(&p, rules);
    if r.is_zero() {
        return;
    }
    let new = make_rule(&r);
    let mut kept = Vec::with_capacity(rules.len() + 1);
    for old in rules.drain(..) {
        if Word(old.lead.clone()).find(&new.lead).is_some() {
            queue.push(old.as_poly());
        } else {
            kept.push(old);
        }
    }
    kept.push(new);
    // keep tails reduced
    for i in 0..kept.len() {
        let others: Vec<Rule> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        kept[i].tail = reduce(&kept[i].tail, &others);
    }
    *rules = kept;
}

/// Builds the algebra `Q<gens>/(relations)` with precedence equal to input order.
pub fn from_presentation(
    gens: &[&str],
    relations: &[&str],
    degree_bound: usize,
) -> Result<FinDimAlgebra, AlgebraError> {
    from_presentation_with_precedence(gens, relations, degree_bound, gens)
}

/// As [`from_presentation`]; `precedence` lists the generators from smallest to largest.
pub fn from_presentation_with_precedence(
    gens: &[&str],
    relations: &[&str],
    degree_bound: usize,
    precedence: &[&str],
) -> Result<FinDimAlgebra, AlgebraError> {
    let names: Vec<String> = gens.iter().map(|s| s.trim().to_string()).collect();
    let mut seen = HashSet::new();
    if names.is_empty() || names.iter().any(|n| !seen.insert(n.clone())) {
        return Err(AlgebraError::Parse(
            "generator names must be nonempty and distinct".into(),
        ));
    }
    if precedence.len() != names.len() {
        return Err(AlgebraError::Parse(
            "precedence must list every generator once".into(),
        ));
    }
    let ranks = names
        .iter()
        .map(|n| {
            precedence
                .iter()
                .position(|p| p.trim() == n)
                .ok_or_else(|| {
                    AlgebraError::Parse(format!("generator `{n}` missing from precedence"))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut letters = vec![String::new(); names.len()];
    for (n, &r) in names.iter().zip(&ranks) {
        letters[r] = n.clone();
    }
    let target = NcTarget {
        names: &names,
        ranks: &ranks,
    };
    let mut queue = Vec::new();
    for rel in relations {
        let expr =
            parse_expr(rel).map_err(|e| AlgebraError::Parse(format!("relation `{rel}`: {e}")))?;
        let p = expr
            .eval(&target)
            .map_err(|e| AlgebraError::Parse(format!("relation `{rel}`: {e}")))?;
        if let Some((w, _)) = p.leading() {
            if w.0.len() > degree_bound {
                return Err(AlgebraError::NotFiniteWithinBound { growth: Vec::new() });
            }
        }
        queue.push(p);
    }
    queue.reverse();

    let mut rules: Vec<Rule> = Vec::new();
    let mut processed: HashSet<Overlap> = HashSet::new();
    loop {
        while let Some(p) = queue.pop() {
            insert_rule(&mut rules, &mut queue, p);
        }
        let mut added = false;
        for (i, j, k) in overlaps(&rules) {
            let (r1, r2) = (&rules[i], &rules[j]);
            if r1.lead.len() + r2.lead.len() - k > degree_bound {
                continue;
            }
            let key = (r1.lead.clone(), r2.lead.clone(), k);
            if !processed.insert(key) {
                continue;
            }
            let d = overlap_difference(r1, r2, k, &rules);
            if !d.is_zero() {
                queue.push(d);
                added = true;
            }
        }
        if !added && queue.is_empty() {
            break;
        }
    }

    let growth_and_words = irreducible_words(&rules, letters.len(), degree_bound);
    let (growth, words) = growth_and_words;
    let Some(words) = words else {
        return Err(AlgebraError::NotFiniteWithinBound { growth });
    };
    for (i, j, k) in overlaps(&rules) {
        if !overlap_difference(&rules[i], &rules[j], k, &rules).is_zero() {
            return Err(AlgebraError::NotFiniteWithinBound { growth });
        }
    }
    if words.is_empty() {
        return Ok(FinDimAlgebra::zero());
    }

    let index: BTreeMap<Word, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let d = words.len();
    let mut table = Vec::with_capacity(d * d);
    for u in &words {
        for v in &words {
            let prod = reduce(&NcPoly::word(u.concat(v), Q::one()), &rules);
            let mut row = vec![Q::zero(); d];
            for (w, c) in prod.terms() {
                row[index[w]] = c.clone();
            }
            table.push(row);
        }
    }
    let labels = words.iter().map(|w| render_word(w, &letters)).collect();
    let mut unit = vec![Q::zero(); d];
    unit[0] = Q::one();
    FinDimAlgebra::new(labels, table, unit)
}

/// Irreducible words by length; `None` if some length up to the bound is still populated.
fn irreducible_words(
    rules: &[Rule],
    nletters: usize,
    bound: usize,
) -> (Vec<usize>, Option<Vec<Word>>) {
    if rules.iter().any(|r| r.lead.is_empty()) {
        return (vec![0], Some(Vec::new()));
    }
    let mut level = vec![Vec::new()];
    let mut all: Vec<Word> = Vec::new();
    let mut growth = Vec::new();
    for len in 0..=bound {
        growth.push(level.len());
        if level.is_empty() {
            all.sort();
            return (growth, Some(all));
        }
        all.extend(level.iter().cloned().map(Word));
        if len == bound {
            break;
        }
        let mut next = Vec::new();
        for w in &level {
            for l in 0..nletters {
                let mut v: Vec<usize> = w.clone();
                v.push(l);
                if !rules.iter().any(|r| v.ends_with(&r.lead)) {
                    next.push(v);
                }
            }
        }
        level = next;
    }
    (growth, None)
}

fn render_word(w: &Word, letters: &[String]) -> String {
    if w.0.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.0.len() {
        let mut j = i;
        while j < w.0.len() && w.0[j] == w.0[i] {
            j += 1;
        }
        let name = &letters[w.0[i]];
        parts.push(if j - i == 1 {
            name.clone()
        } else {
            format!("{name}^{}", j - i)
        });
        i = j;
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::hh0;

    fn laufer(k: usize) -> FinDimAlgebra {
        let rel = format!("a^2 - b^{}", 2 * k + 1);
        from_presentation(&["a", "b"], &["a*b + b*a", &rel], 4 * (6 * k + 3)).unwrap()
    }

    #[test]
    fn truncated_polynomials() {
        for k in 1..6 {
            let rel = format!("a^{k}");
            let a = from_presentation(&["a"], &[&rel], 4 * k).unwrap();
            assert_eq!(a, FinDimAlgebra::truncated_polynomial(k));
        }
    }

    #[test]
    fn laufer_dimensions() {
        let a = laufer(1);
        assert_eq!(a.dim(), 9);
        assert_eq!(
            a.labels(),
            &["1", "a", "b", "a^2", "a*b", "b^2", "a^2*b", "a*b^2", "a^2*b^2"]
        );
        let (n, reps) = hh0(&a);
        assert_eq!(n, 6);
        let labels: Vec<&str> = reps.iter().map(|&i| a.labels()[i].as_str()).collect();
        assert_eq!(labels, vec!["1", "a", "b", "a^2", "b^2", "a^2*b^2"]);
        assert_eq!(laufer(2).dim(), 15);
        assert_eq!(laufer(3).dim(), 21);
    }

    #[test]
    fn precedence_changes_orientation_not_dimension() {
        let a = from_presentation_with_precedence(
            &["a", "b"],
            &["a*b + b*a", "a^2 - b^3"],
            36,
            &["b", "a"],
        )
        .unwrap();
        assert_eq!(a.dim(), 9);
        assert!(a.labels().contains(&"b*a".to_string()));
    }

    #[test]
    fn infinite_and_degenerate_presentations() {
        let err = from_presentation(&["a", "b"], &["a*b - b*a"], 6).unwrap_err();
        match err {
            AlgebraError::NotFiniteWithinBound { growth } => {
                assert_eq!(growth, vec![1, 2, 3, 4, 5, 6, 7])
            }
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(
            from_presentation(&["a"], &["a - 1", "a - 2"], 4)
                .unwrap()
                .dim(),
            0
        );
        assert!(matches!(
            from_presentation(&["a"], &["a*c"], 4),
            Err(AlgebraError::Parse(_))
        ));
        assert!(matches!(
            from_presentation(&["a", "a"], &[], 4),
            Err(AlgebraError::Parse(_))
        ));
    }

    #[test]
    fn quaternion_like_relations_close() {
        // i^2 = -1, j^2 = -1, ij = -ji gives the quaternions
        let a = from_presentation(&["i", "j"], &["i^2 + 1", "j^2 + 1", "i*j + j*i"], 8).unwrap();
        assert_eq!(a.dim(), 4);
    }
}

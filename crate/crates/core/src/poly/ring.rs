use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use super::Monomial;

/// Monomial ordering attached to a ring.
///
/// `GlobalDegRevLex` is the usual graded reverse lexicographic order.
/// `LocalNegDegRevLex` is its local counterpart: the leading term of a
/// polynomial is the one of *lowest* total degree, ties broken by reverse
/// lexicographic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GlobalDegRevLex,
    LocalNegDegRevLex,
}

impl MonomialOrder {
    /// `Greater` means `a` is the more leading of the two.
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        let (da, db) = (a.degree(), b.degree());
        let by_degree = match self {
            MonomialOrder::GlobalDegRevLex => da.cmp(&db),
            MonomialOrder::LocalNegDegRevLex => db.cmp(&da),
        };
        by_degree.then_with(|| revlex(a, b))
    }

    /// Key whose lexicographic order agrees with [`MonomialOrder::cmp`].
    pub fn sort_key(self, m: &Monomial) -> Vec<i64> {
        let d = i64::from(m.degree());
        let mut key = Vec::with_capacity(m.nvars() + 1);
        key.push(if self.is_local() { -d } else { d });
        key.extend(m.exponents().iter().rev().map(|&e| -i64::from(e)));
        key
    }

    pub fn is_local(self) -> bool {
        matches!(self, MonomialOrder::LocalNegDegRevLex)
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::GlobalDegRevLex => "global-degrevlex",
            MonomialOrder::LocalNegDegRevLex => "local-negdegrevlex",
        }
    }
}

// a > b iff the last nonzero entry of a - b is negative
fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exponents().iter().zip(b.exponents()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonomialOrder {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global-degrevlex" | "degrevlex" | "dp" => Ok(MonomialOrder::GlobalDegRevLex),
            "local-negdegrevlex" | "negdegrevlex" | "ds" => Ok(MonomialOrder::LocalNegDegRevLex),
            other => Err(RingError::UnknownOrder(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("a ring needs at least one variable")]
    NoVariables,
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("unknown monomial ordering `{0}`")]
    UnknownOrder(String),
}

/// Variables and ordering of a polynomial ring over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    variables: Vec<String>,
    order: MonomialOrder,
}

impl RingSpec {
    pub fn new<S: AsRef<str>>(
        variables: &[S],
        order: MonomialOrder,
    ) -> Result<Arc<RingSpec>, RingError> {
        if variables.is_empty() {
            return Err(RingError::NoVariables);
        }
        let mut names: Vec<String> = Vec::with_capacity(variables.len());
        for v in variables {
            let v = v.as_ref();
            if !valid_name(v) {
                return Err(RingError::InvalidName(v.to_string()));
            }
            if names.iter().any(|n| n == v) {
                return Err(RingError::DuplicateName(v.to_string()));
            }
            names.push(v.to_string());
        }
        Ok(Arc::new(RingSpec {
            variables: names,
            order,
        }))
    }

    /// Parses a comma separated variable list such as `x,y,z,w`.
    pub fn parse(vars: &str, order: MonomialOrder) -> Result<Arc<RingSpec>, RingError> {
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        if names.len() == 1 && names[0].is_empty() {
            return Err(RingError::NoVariables);
        }
        RingSpec::new(&names, order)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Same variables, different ordering.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<RingSpec> {
        Arc::new(RingSpec {
            variables: self.variables.clone(),
            order,
        })
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn rejects_bad_rings() {
        assert_eq!(
            RingSpec::new::<&str>(&[], MonomialOrder::GlobalDegRevLex).unwrap_err(),
            RingError::NoVariables
        );
        assert!(matches!(
            RingSpec::new(&["x", "x"], MonomialOrder::GlobalDegRevLex),
            Err(RingError::DuplicateName(_))
        ));
        assert!(matches!(
            RingSpec::new(&["1x"], MonomialOrder::GlobalDegRevLex),
            Err(RingError::InvalidName(_))
        ));
        assert!(RingSpec::new(&["_a1", "B"], MonomialOrder::GlobalDegRevLex).is_ok());
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonomialOrder::GlobalDegRevLex;
        // x^2 > xy > y^2 > xz > yz > z^2
        let chain = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn local_order_prefers_low_degree() {
        let o = MonomialOrder::LocalNegDegRevLex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[3, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn sort_key_agrees_with_cmp() {
        for o in [
            MonomialOrder::GlobalDegRevLex,
            MonomialOrder::LocalNegDegRevLex,
        ] {
            let all: Vec<Monomial> = (0..4).flat_map(|d| Monomial::all_of_degree(3, d)).collect();
            for a in &all {
                for b in &all {
                    assert_eq!(o.sort_key(a).cmp(&o.sort_key(b)), o.cmp(a, b));
                }
            }
        }
    }
}

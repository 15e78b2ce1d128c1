//! Points of finite spaces and the spaces themselves.
//!
//! Product spaces are explicit binary products with declared nesting:
//! `(X × Y) × Z` and `X × (Y × Z)` are *different* spaces related by an
//! explicit associator, never identified silently.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// An element of a finite space: a labelled atom, an exact number, or a pair.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Value {
    Atom(String),
    Num(Rational),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn atom(label: impl Into<String>) -> Self {
        Value::Atom(label.into())
    }

    pub fn num(r: Rational) -> Self {
        Value::Num(r)
    }

    pub fn int(n: i64) -> Self {
        Value::Num(rational::int(n))
    }

    pub fn pair(left: Value, right: Value) -> Self {
        Value::Pair(Box::new(left), Box::new(right))
    }

    /// The canonical point of the unit space.
    pub fn unit() -> Self {
        Value::Atom("()".to_string())
    }

    pub fn as_pair(&self) -> Result<(&Value, &Value)> {
        match self {
            Value::Pair(l, r) => Ok((l, r)),
            other => Err(Error::Domain(format!("expected a pair, got {other}"))),
        }
    }

    pub fn as_num(&self) -> Result<&Rational> {
        match self {
            Value::Num(r) => Ok(r),
            other => Err(Error::Domain(format!("expected a number, got {other}"))),
        }
    }

    /// Stable text form, also used as a JSON map key.
    pub fn text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => write!(f, "{a}"),
            Value::Num(r) => write!(f, "{}", rational::to_string(r)),
            Value::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// A finite space. Either an explicit list of elements or a declared binary
/// product of two smaller spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FiniteSet {
    Elements(Vec<Value>),
    Product(Box<FiniteSet>, Box<FiniteSet>),
}

impl FiniteSet {
    /// Build from an explicit element list. Rejects duplicates.
    pub fn new(elements: Vec<Value>) -> Result<Self> {
        let mut seen = elements.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != elements.len() {
            return Err(Error::Construction(
                "duplicate element in finite set".to_string(),
            ));
        }
        Ok(FiniteSet::Elements(elements))
    }

    pub fn atoms<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FiniteSet::Elements(labels.into_iter().map(Value::atom).collect())
    }

    pub fn numbers<I: IntoIterator<Item = Rational>>(values: I) -> Result<Self> {
        let mut elems: Vec<Value> = values.into_iter().map(Value::Num).collect();
        elems.sort();
        elems.dedup();
        FiniteSet::new(elems)
    }

    /// The one-element unit space `{()}`.
    pub fn unit() -> Self {
        FiniteSet::Elements(vec![Value::unit()])
    }

    pub fn product(left: &FiniteSet, right: &FiniteSet) -> Self {
        FiniteSet::Product(Box::new(left.clone()), Box::new(right.clone()))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, FiniteSet::Elements(es) if es.len() == 1 && es[0] == Value::unit())
    }

    /// The declared factors, or an error for non-product spaces.
    pub fn factors(&self) -> Result<(&FiniteSet, &FiniteSet)> {
        match self {
            FiniteSet::Product(l, r) => Ok((l, r)),
            FiniteSet::Elements(_) => Err(Error::mismatch(
                "space",
                "expected a declared binary product space",
            )),
        }
    }

    /// All elements in a fixed order (products enumerate left-major).
    pub fn elements(&self) -> Vec<Value> {
        match self {
            FiniteSet::Elements(es) => es.clone(),
            FiniteSet::Product(l, r) => {
                let rs = r.elements();
                l.elements()
                    .into_iter()
                    .flat_map(|lv| {
                        rs.iter()
                            .map(move |rv| Value::pair(lv.clone(), rv.clone()))
                    })
                    .collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FiniteSet::Elements(es) => es.len(),
            FiniteSet::Product(l, r) => l.len() * r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self {
            FiniteSet::Elements(es) => es.contains(v),
            FiniteSet::Product(l, r) => match v {
                Value::Pair(a, b) => l.contains(a) && r.contains(b),
                _ => false,
            },
        }
    }

    /// Short description for error messages.
    pub fn describe(&self) -> String {
        match self {
            FiniteSet::Elements(es) => {
                let names: Vec<String> = es.iter().take(4).map(|v| v.text()).collect();
                if es.len() > 4 {
                    format!("{{{},…}} ({} elements)", names.join(","), es.len())
                } else {
                    format!("{{{}}}", names.join(","))
                }
            }
            FiniteSet::Product(l, r) => format!("{}×{}", l.describe(), r.describe()),
        }
    }
}

/// All ways of picking one item per factor, in odometer order (last factor
/// varies fastest). An empty factor list yields the single empty pick.
pub fn cartesian_product<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for factor in factors {
        let mut next = Vec::with_capacity(out.len() * factor.len());
        for prefix in &out {
            for item in factor {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

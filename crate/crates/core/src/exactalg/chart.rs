use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of pairwise distinct variable names.
///
/// Every polynomial and rational function lives on a chart; the declared
/// order fixes the graded-lex term order. Cloning is cheap.
#[derive(Clone)]
pub struct Chart {
    inner: Arc<ChartInner>,
}

struct ChartInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Chart {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvalidChart("empty variable name".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidChart(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Chart {
            inner: Arc::new(ChartInner { names, index }),
        })
    }

    /// Convenience constructor for literal name lists known to be distinct.
    pub fn of(names: &[&str]) -> Self {
        Chart::new(names.iter().copied()).expect("chart names must be distinct")
    }

    pub fn empty() -> Self {
        Chart::of(&[])
    }

    pub fn dim(&self) -> usize {
        self.inner.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.inner.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.inner.index.contains_key(name)
    }

    pub fn ptr_eq(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Chart with `self`'s variables first, then the names of `other` not already present.
    pub fn union(&self, other: &Chart) -> Chart {
        if self == other {
            return self.clone();
        }
        let extra: Vec<&String> = other
            .names()
            .iter()
            .filter(|n| !self.contains(n))
            .collect();
        if extra.is_empty() {
            return self.clone();
        }
        let names = self.names().iter().chain(extra).cloned();
        Chart::new(names).expect("union of distinct names is distinct")
    }

    /// Index map from `self` into `target`, failing on a missing name.
    pub fn embedding_into(&self, target: &Chart) -> Result<Vec<u32>> {
        self.names()
            .iter()
            .map(|n| target.require(n).map(|i| i as u32))
            .collect()
    }

    /// True if `self`'s variables are, in order, the first variables of `other`.
    pub fn is_prefix_of(&self, other: &Chart) -> bool {
        self.dim() <= other.dim() && self.names() == &other.names()[..self.dim()]
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.inner.names == other.inner.names
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self.names().join(","))
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert!(Chart::new(["x", "y", "x"]).is_err());
    }

    #[test]
    fn union_keeps_left_order() {
        let a = Chart::of(&["x", "p", "q"]);
        let b = Chart::of(&["q", "u", "x", "v"]);
        let u = a.union(&b);
        assert_eq!(u.names(), &["x", "p", "q", "u", "v"]);
        assert!(a.is_prefix_of(&u));
        assert_eq!(b.embedding_into(&u).unwrap(), vec![2, 3, 0, 4]);
    }
}

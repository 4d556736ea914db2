use std::cmp::Ordering;

use smallvec::SmallVec;

/// Sparse exponent vector: `(variable index, exponent)` pairs sorted by index,
/// with no zero exponents stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut m = Monomial::one();
        if exp > 0 {
            m.0.push((index as u32, exp));
        }
        m
    }

    /// Builds a monomial from arbitrary pairs; duplicates are summed, zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(u32, u32); 4]> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(i, e)| (i as u32, e))
            .collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Total degree restricted to variables with index `< bound`.
    pub fn degree_below(&self, bound: usize) -> u32 {
        self.0
            .iter()
            .take_while(|&&(i, _)| (i as usize) < bound)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        let idx = index as u32;
        match self.0.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(i, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < i {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == i {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((i, e - d)),
                }
            } else {
                out.push((i, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    /// Removes variable `index`, returning the rest and the removed exponent.
    pub fn split_var(&self, index: usize) -> (Monomial, u32) {
        let idx = index as u32;
        let mut out = self.clone();
        match out.0.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(pos) => {
                let (_, e) = out.0.remove(pos);
                (out, e)
            }
            Err(_) => (out, 0),
        }
    }

    pub fn with_exponent(&self, index: usize, exp: u32) -> Monomial {
        let (mut rest, _) = self.split_var(index);
        if exp > 0 {
            let idx = index as u32;
            let pos = rest.0.partition_point(|&(i, _)| i < idx);
            rest.0.insert(pos, (idx, exp));
        }
        rest
    }

    /// Renames variables through `map` (old index -> new index).
    pub fn remap(&self, map: &[u32]) -> Monomial {
        let mut v: SmallVec<[(u32, u32); 4]> =
            self.0.iter().map(|&(i, e)| (map[i as usize], e)).collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        Monomial(v)
    }

    /// Lexicographic comparison by declared variable order (earlier variable
    /// with the larger exponent wins).
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut k = 0;
        loop {
            match (a.get(k), b.get(k)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ia, ea)), Some(&(ib, eb))) => {
                    if ia != ib {
                        return if ia < ib {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
            k += 1;
        }
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Chart, Monomial, Rational};
use crate::error::Result;

/// Sparse multivariate polynomial with rational coefficients on a [`Chart`].
///
/// Terms are kept in a map ordered by graded-lex; zero coefficients are never stored,
/// so equality on the same chart is plain map equality.
#[derive(Clone)]
pub struct Polynomial {
    chart: Chart,
    terms: BTreeMap<Monomial, Rational>,
}

/// Anything a polynomial can be evaluated into (polynomials, rational
/// functions, truncated series).
pub trait EvalTarget: Clone {
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale_ref(&self, c: &Rational) -> Self;
    /// The constant `c` in the same ambient structure as `like`.
    fn constant_like(like: &Self, c: &Rational) -> Self;
}

impl Polynomial {
    pub fn zero(chart: &Chart) -> Self {
        Polynomial {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        Polynomial::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        Polynomial::term(chart, Monomial::one(), c)
    }

    pub fn from_int(chart: &Chart, c: i64) -> Self {
        Polynomial::constant(chart, Rational::from_integer(c.into()))
    }

    pub fn term(chart: &Chart, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            chart: chart.clone(),
            terms,
        }
    }

    pub fn var(chart: &Chart, index: usize) -> Self {
        assert!(index < chart.dim(), "variable index out of range");
        Polynomial::term(chart, Monomial::var(index, 1), Rational::one())
    }

    pub fn var_named(chart: &Chart, name: &str) -> Result<Self> {
        Ok(Polynomial::var(chart, chart.require(name)?))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(chart: &Chart, it: I) -> Self {
        let mut p = Polynomial::zero(chart);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` stands for the zero polynomial's degree −∞.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).min().unwrap_or(0)
    }

    /// Greatest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn support_vars(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(i, _)| i))
            .collect()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// True if every term has the same total degree (zero counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Re-expresses the polynomial on `target`, which must contain every chart variable.
    pub fn embed(&self, target: &Chart) -> Result<Polynomial> {
        if self.chart == *target {
            return Ok(Polynomial {
                chart: target.clone(),
                terms: self.terms.clone(),
            });
        }
        if self.chart.is_prefix_of(target) {
            return Ok(Polynomial {
                chart: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let support = self.support_vars();
        let mut map = vec![0u32; self.chart.dim()];
        for &v in &support {
            map[v] = target.require(self.chart.name(v))? as u32;
        }
        Ok(Polynomial {
            chart: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.remap(&map), c.clone()))
                .collect(),
        })
    }

    /// Both operands on a common chart (the union, left order first).
    pub(crate) fn aligned<'a>(
        a: &'a Polynomial,
        b: &'a Polynomial,
    ) -> (Cow<'a, Polynomial>, Cow<'a, Polynomial>) {
        if a.chart == b.chart {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let u = a.chart.union(&b.chart);
        let ea = a.embed(&u).expect("union contains every name");
        let eb = b.embed(&u).expect("union contains every name");
        (Cow::Owned(ea), Cow::Owned(eb))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.chart);
        }
        Polynomial {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.chart);
        }
        Polynomial {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.chart);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                out.terms
                    .insert(m.with_exponent(var, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Termwise antiderivative in `var` with zero integration constant.
    pub fn antiderivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.exponent(var) + 1;
            out.terms
                .insert(m.with_exponent(var, e), c / Rational::from_integer(e.into()));
        }
        out
    }

    /// Exact value at a point given densely (one value per chart variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter() {
                t *= num_traits::pow(point[i].clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Evaluates the polynomial with each variable replaced by `values[i]`.
    ///
    /// `None` entries are not allowed for variables that occur.
    pub fn evaluate<T: EvalTarget>(&self, values: &[Option<&T>], unit: &T) -> T {
        let mut powers: Vec<Vec<T>> = vec![Vec::new(); self.chart.dim()];
        for m in self.terms.keys() {
            for (i, e) in m.iter() {
                let base = values[i].expect("value supplied for every occurring variable");
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(base.clone());
                }
                while cache.len() < e as usize {
                    let next = cache.last().unwrap().mul_ref(base);
                    cache.push(next);
                }
            }
        }
        let mut acc = T::constant_like(unit, &Rational::zero());
        for (m, c) in &self.terms {
            let mut t: Option<T> = None;
            for (i, e) in m.iter() {
                let p = &powers[i][e as usize - 1];
                t = Some(match t {
                    None => p.clone(),
                    Some(t) => t.mul_ref(p),
                });
            }
            let t = match t {
                None => T::constant_like(unit, c),
                Some(t) => t.scale_ref(c),
            };
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Coefficients with respect to `var`: `result[d]` multiplies `var^d`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut maps: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(var);
            maps[e as usize].insert(rest, c.clone());
        }
        maps.into_iter()
            .map(|terms| Polynomial {
                chart: self.chart.clone(),
                terms,
            })
            .collect()
    }

    /// Coefficient of `var^deg_var(self)`.
    pub fn leading_coeff_in(&self, var: usize) -> Polynomial {
        let d = self.degree_in(var);
        let mut out = Polynomial::zero(&self.chart);
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(var);
            if e == d {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients
    /// (zero for the zero polynomial).
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::zero();
        }
        Rational::new(num, den)
    }

    /// Integer primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Rescaled so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        let (a, b) = Polynomial::aligned(self, divisor);
        let (a, b) = (a.as_ref(), b.as_ref());
        if let Some(c) = b.constant_value() {
            return Some(a.scale(&c.recip()));
        }
        let (lm, lc) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = a.terms.clone();
        let mut quot = Polynomial::zero(&a.chart);
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = &c * &lc_inv;
            for (bm, bc) in &b.terms {
                let key = bm.mul(&qm);
                let delta = bc * &qc;
                use std::collections::btree_map::Entry;
                match rem.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Drops every term whose monomial fails `keep`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let (a, b) = Polynomial::aligned(self, other);
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), if negate { -c.clone() } else { c.clone() });
        }
        out
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        self.mul_truncated(other, |_| true)
    }

    /// Product restricted to the monomials accepted by `keep`.
    pub fn mul_truncated<F: Fn(&Monomial) -> bool>(&self, other: &Polynomial, keep: F) -> Polynomial {
        let (a, b) = Polynomial::aligned(self, other);
        let (a, b) = (a.as_ref(), b.as_ref());
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero(&a.chart);
        }
        let mut acc: std::collections::HashMap<Monomial, Rational> =
            std::collections::HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let v = ca * cb;
                acc.entry(m)
                    .and_modify(|x| *x += &v)
                    .or_insert(v);
            }
        }
        Polynomial {
            chart: a.chart.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn fmt_with_chart(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (i, e) in m.iter() {
                let name = self.chart.name(i);
                if e == 1 {
                    factors.push(name.to_string());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.chart == other.chart {
            return self.terms == other.terms;
        }
        let (a, b) = Polynomial::aligned(self, other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_chart(f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]", self)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl EvalTarget for Polynomial {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_ref(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn constant_like(like: &Self, c: &Rational) -> Self {
        Polynomial::constant(&like.chart, c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_and_display() {
        let ch = Chart::of(&["x", "y"]);
        let x = Polynomial::var(&ch, 0);
        let y = Polynomial::var(&ch, 1);
        let p = &(&x * &x) - &y.scale(&q(3, 2));
        assert_eq!(p.to_string(), "x^2 - 3/2*y");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Polynomial::zero(&ch).degree(), None);
        assert_eq!((&p - &p), Polynomial::zero(&ch));
    }

    #[test]
    fn exact_division() {
        let ch = Chart::of(&["x", "y"]);
        let x = Polynomial::var(&ch, 0);
        let y = Polynomial::var(&ch, 1);
        let a = &x + &y;
        let b = &x - &y;
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!((&prod + &Polynomial::one(&ch)).div_exact(&a), None);
    }

    #[test]
    fn content_and_primitive() {
        let ch = Chart::of(&["x"]);
        let x = Polynomial::var(&ch, 0);
        let p = &x.scale(&q(-4, 3)) + &Polynomial::constant(&ch, q(2, 9));
        assert_eq!(p.content(), q(2, 9));
        assert_eq!(p.primitive().to_string(), "6*x - 1");
    }

    #[test]
    fn embed_across_charts() {
        let a = Chart::of(&["y"]);
        let b = Chart::of(&["x", "y"]);
        let y = Polynomial::var(&a, 0);
        let e = y.embed(&b).unwrap();
        assert_eq!(e.support_vars().into_iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(y, e);
        assert!(Polynomial::var(&b, 0).embed(&a).is_err());
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::gcd::{content_in, gcd};
use super::{Chart, EvalTarget, Polynomial, Rational};
use crate::error::{Error, Result};

/// Quotient of polynomials in lowest terms.
///
/// Canonical form: `gcd(num, den) = 1`, `den` has coprime integer coefficients and a
/// positive leading coefficient. Zero is `0/1`.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic with an explicit division-by-zero error.
pub fn rf_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = Polynomial::aligned(&num, &den);
        let (num, den) = (num.into_owned(), den.into_owned());
        if num.is_zero() {
            return Ok(RationalFunction::zero(num.chart()));
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            Ok(Self::normalized(num, den))
        } else {
            Ok(Self::normalized(
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            ))
        }
    }

    /// Scales a coprime pair into canonical form.
    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero(num.chart());
        }
        let mut c = den.content();
        if den.leading_coefficient().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return RationalFunction { num, den };
        }
        let inv = c.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero(chart: &Chart) -> Self {
        RationalFunction {
            num: Polynomial::zero(chart),
            den: Polynomial::one(chart),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        RationalFunction::from_poly(Polynomial::one(chart))
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(chart, c))
    }

    pub fn from_int(chart: &Chart, c: i64) -> Self {
        RationalFunction::from_poly(Polynomial::from_int(chart, c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.chart());
        RationalFunction { num: p, den }
    }

    pub fn var(chart: &Chart, index: usize) -> Self {
        RationalFunction::from_poly(Polynomial::var(chart, index))
    }

    pub fn var_named(chart: &Chart, name: &str) -> Result<Self> {
        Ok(RationalFunction::var(chart, chart.require(name)?))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn chart(&self) -> &Chart {
        self.num.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.den.is_constant() {
            return None;
        }
        let n = self.num.constant_value()?;
        Some(n / self.den.constant_term())
    }

    pub fn support_vars(&self) -> std::collections::BTreeSet<usize> {
        let mut s = self.num.support_vars();
        s.extend(self.den.support_vars());
        s
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    pub fn embed(&self, target: &Chart) -> Result<Self> {
        Ok(RationalFunction {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    fn aligned_pair(a: &RationalFunction, b: &RationalFunction) -> (RationalFunction, RationalFunction) {
        if a.chart() == b.chart() {
            return (a.clone(), b.clone());
        }
        let u = a.chart().union(b.chart());
        (a.embed(&u).expect("union"), b.embed(&u).expect("union"))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero(self.chart());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        self * &RationalFunction::from_poly(p.clone())
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Partial derivative in chart variable `var`.
    pub fn diff(&self, var: usize) -> Self {
        if !self.involves(var) {
            return RationalFunction::zero(self.chart());
        }
        if self.den.is_constant() {
            return RationalFunction::normalized(self.num.derivative(var), self.den.clone());
        }
        // den = D0·D1 with D0 free of `var` and every factor of D1 involving it. Then
        // f' = (N'D1 − N D1') / (D0 D1²). Since gcd(N, D1) = 1 the numerator meets D1 in
        // exactly gcd(D1, D1'), which avoids a gcd against the (larger) numerator.
        // Factors of D0 can cancel to any extent and are reduced separately.
        let d0 = content_in(&self.den, var);
        let d1 = self.den.div_exact(&d0).expect("content divides");
        let d1v = d1.derivative(var);
        let num = &(&self.num.derivative(var) * &d1) - &(&self.num * &d1v);
        if num.is_zero() {
            return RationalFunction::zero(self.chart());
        }
        let g1 = gcd(&d1, &d1v);
        let num = num.div_exact(&g1).expect("gcd(D1, D1') divides the numerator");
        let g0 = gcd(&num, &d0);
        let num = num.div_exact(&g0).expect("gcd divides");
        let den = &d0.div_exact(&g0).expect("gcd divides") * &(&d1 * &d1).div_exact(&g1).expect("gcd divides");
        RationalFunction::normalized(num, den)
    }

    /// Partial derivative by name; a variable outside the chart gives zero.
    pub fn partial(&self, name: &str) -> Self {
        match self.chart().index_of(name) {
            Some(i) => self.diff(i),
            None => RationalFunction::zero(self.chart()),
        }
    }

    /// Partial derivative by variable name; the name must belong to the chart.
    pub fn diff_named(&self, name: &str) -> Result<Self> {
        Ok(self.diff(self.chart().require(name)?))
    }

    /// Simultaneous substitution of variables by rational functions.
    ///
    /// The result lives on the union of the binding charts, followed by any
    /// unsubstituted variable still occurring in `self`.
    pub fn substitute(&self, bindings: &[(&str, &RationalFunction)]) -> Result<Self> {
        let chart = self.chart();
        let mut by_index: Vec<Option<&RationalFunction>> = vec![None; chart.dim()];
        for (name, val) in bindings {
            let i = chart.require(name)?;
            by_index[i] = Some(*val);
        }
        let support = self.support_vars();
        let mut target: Option<Chart> = None;
        for b in by_index.iter().flatten() {
            target = Some(match target {
                None => b.chart().clone(),
                Some(t) => t.union(b.chart()),
            });
        }
        let mut target = target.unwrap_or_else(|| chart.clone());
        let leftover: Vec<&str> = support
            .iter()
            .filter(|&&i| by_index[i].is_none())
            .map(|&i| chart.name(i))
            .filter(|n| !target.contains(n))
            .collect();
        if !leftover.is_empty() {
            target = target.union(&Chart::new(leftover.iter().copied())?);
        }
        let mut values: Vec<Option<RationalFunction>> = vec![None; chart.dim()];
        for &i in &support {
            values[i] = Some(match by_index[i] {
                Some(b) => b.embed(&target)?,
                None => RationalFunction::var_named(&target, chart.name(i))?,
            });
        }
        let refs: Vec<Option<&RationalFunction>> = values.iter().map(Option::as_ref).collect();
        let unit = RationalFunction::one(&target);
        let n = self.num.evaluate(&refs, &unit);
        let d = self.den.evaluate(&refs, &unit);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.checked_div(&d)
    }

    /// Exact value at a point; every occurring variable must be bound.
    pub fn eval(&self, point: &HashMap<String, Rational>) -> Result<Rational> {
        let chart = self.chart();
        let mut dense = vec![Rational::zero(); chart.dim()];
        for i in self.support_vars() {
            let name = chart.name(i);
            dense[i] = point
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        }
        self.eval_dense(&dense)
    }

    pub fn eval_dense(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self}")));
        }
        Ok(self.num.eval(point) / d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        // Canonical forms make equality structural on a shared chart; across
        // charts the sign normalization may differ, so cross-multiply.
        if self.chart() == other.chart() {
            self.num == other.num && self.den == other.den
        } else {
            &self.num * &other.den == &other.num * &self.den
        }
    }
}

impl Eq for RationalFunction {}

fn wrap(p: &Polynomial) -> String {
    let s = p.to_string();
    if p.len() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den = self.den.to_string();
        let den_atom = self.den.len() == 1 && !den.contains(['*', '^', '/']);
        if den_atom {
            write!(f, "{}/{}", wrap(&self.num), den)
        } else {
            write!(f, "{}/({})", wrap(&self.num), den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{self}]")
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.chart() != rhs.chart() {
            let (a, b) = RationalFunction::aligned_pair(self, rhs);
            return &a + &b;
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return RationalFunction::new(num, self.den.clone()).expect("nonzero denominator");
        }
        // Henrici: any cancellation comes from g = gcd(d1, d2).
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &d1 * &rhs.den;
        if num.is_zero() {
            return RationalFunction::zero(self.chart());
        }
        if g.is_one() {
            return RationalFunction::normalized(num, den);
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            RationalFunction::normalized(num, den)
        } else {
            RationalFunction::normalized(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.chart() != rhs.chart() {
            let (a, b) = RationalFunction::aligned_pair(self, rhs);
            return &a * &b;
        }
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.chart());
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on a zero divisor; use [`RationalFunction::checked_div`] otherwise.
    fn div(self, rhs: &'a RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl EvalTarget for RationalFunction {
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
        RationalFunction::constant(like.chart(), c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch() -> Chart {
        Chart::of(&["x", "y", "a"])
    }

    fn x() -> RationalFunction {
        RationalFunction::var(&ch(), 0)
    }

    fn int(c: i64) -> RationalFunction {
        RationalFunction::from_int(&ch(), c)
    }

    #[test]
    fn additive_inverse() {
        let f = &x() / &(&x() - &int(1));
        let g = -&f;
        assert!((&f + &g).is_zero());
    }

    #[test]
    fn normalization_cancels() {
        let num = &(&x() * &x()) - &int(1);
        let f = &num / &(&x() + &int(1));
        assert_eq!(&f * &int(1), &x() - &int(1));
        assert!(f.is_polynomial());
    }

    #[test]
    fn division() {
        let inv_x = int(1).checked_div(&x()).unwrap();
        let inv_x2 = int(1).checked_div(&(&x() * &x())).unwrap();
        assert_eq!(inv_x.checked_div(&inv_x2).unwrap(), x());
        assert!(matches!(x().checked_div(&int(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn sign_convention() {
        // 1/(1 - x) is stored as -1/(x - 1).
        let f = &int(1) / &(&int(1) - &x());
        assert!(f.denom().leading_coefficient().is_positive());
        assert_eq!(f.to_string(), "-1/(x - 1)");
        // x/2 keeps an integer-primitive denominator.
        let h = &x() / &int(2);
        assert!(h.denom().is_one());
    }

    #[test]
    fn derivatives() {
        let f = &(&x() * &x()) * &RationalFunction::var(&ch(), 1);
        assert_eq!(f.diff(0), &(&int(2) * &x()) * &RationalFunction::var(&ch(), 1));
        let g = int(1).checked_div(&x()).unwrap();
        assert!(g.diff_named("a").unwrap().is_zero());
        assert!(matches!(g.diff_named("zz"), Err(Error::UnknownVariable(_))));
        assert_eq!(g.diff(0), -&int(1).checked_div(&(&x() * &x())).unwrap());
    }

    #[test]
    fn substitution() {
        let u = Chart::of(&["u"]);
        let p = Chart::of(&["p"]);
        let f = RationalFunction::var(&u, 0).pow(2).unwrap();
        let r = f.substitute(&[("u", &RationalFunction::var(&p, 0))]).unwrap();
        assert_eq!(r, RationalFunction::var(&p, 0).pow(2).unwrap());

        let vch = Chart::of(&["v"]);
        let xch = Chart::of(&["x"]);
        let g = RationalFunction::var(&vch, 0).recip().unwrap();
        let one_over_x = RationalFunction::var(&xch, 0).recip().unwrap();
        assert_eq!(g.substitute(&[("v", &one_over_x)]).unwrap(), RationalFunction::var(&xch, 0));

        let xy = Chart::of(&["x", "y"]);
        let s = &RationalFunction::var(&xy, 0) + &RationalFunction::var(&xy, 1);
        let same = s.substitute(&[("x", &RationalFunction::var(&xy, 0))]).unwrap();
        assert_eq!(same, s);

        let bad = RationalFunction::var(&xch, 0).recip().unwrap();
        assert!(matches!(
            bad.substitute(&[("x", &RationalFunction::zero(&xch))]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn evaluation() {
        let f = int(1).checked_div(&(&x() * &(&x() - &int(1)))).unwrap();
        let mut pt = HashMap::new();
        pt.insert("x".to_string(), Rational::from_integer(2.into()));
        assert_eq!(f.eval(&pt).unwrap(), Rational::new(1.into(), 2.into()));
        pt.insert("x".to_string(), Rational::zero());
        assert!(matches!(f.eval(&pt), Err(Error::Pole(_))));
        assert!((&x() - &x()).eval(&HashMap::new()).unwrap().is_zero());
    }

    #[test]
    fn derivative_cancels_factors_free_of_the_variable() {
        let ch = Chart::of(&["x", "y", "z"]);
        let v = |i| RationalFunction::var(&ch, i);
        let one = RationalFunction::one(&ch);
        // d/dz of (4x²z + …)/(x(y+1)²): the factor x cancels once more than gcd(num, den) shows.
        let f = &(&(&v(0) * &v(0)).scale(&Rational::from_integer(4.into())) * &v(2)) / &(&v(0) * &(&(&v(1) + &one) * &(&v(1) + &one)));
        let d = f.diff(2);
        assert_eq!(d.to_string(), "4*x/(y^2 + 2*y + 1)");
        let again = RationalFunction::new(d.numer().clone(), d.denom().clone()).unwrap();
        assert_eq!(again.to_string(), d.to_string());
    }
}

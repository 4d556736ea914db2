use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Chart, EvalTarget, Monomial, Polynomial, Rational, RationalFunction};

/// Truncation rule of a series ring.
///
/// Chart indices `0..nxi` are the displacement variables, index `nxi` is the
/// formal time when `time` is set; any later index is a free symbol that is
/// never truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub nxi: usize,
    pub time: bool,
    pub k: u32,
    pub tn: u32,
}

impl Truncation {
    pub fn new(nxi: usize, k: u32, torder: Option<u32>) -> Self {
        Truncation {
            nxi,
            time: torder.is_some(),
            k,
            tn: torder.unwrap_or(0),
        }
    }

    pub fn torder(&self) -> Option<u32> {
        self.time.then_some(self.tn)
    }

    pub fn keeps(&self, m: &Monomial) -> bool {
        m.degree_below(self.nxi) <= self.k && (!self.time || m.exponent(self.nxi) <= self.tn)
    }

    pub fn with_k(self, k: u32) -> Self {
        Truncation { k, ..self }
    }

    pub fn with_tn(self, tn: u32) -> Self {
        Truncation { tn, ..self }
    }

    /// Index of the time variable.
    pub fn t_index(&self) -> Option<usize> {
        self.time.then_some(self.nxi)
    }
}

/// Element of `Q[symbols][ξ, t] / (ξ-degree > k, t-degree > tn)`.
#[derive(Clone)]
pub struct Series {
    tr: Truncation,
    poly: Polynomial,
}

impl Series {
    pub fn new(tr: Truncation, poly: Polynomial) -> Self {
        let poly = poly.filter_terms(|m| tr.keeps(m));
        Series { tr, poly }
    }

    pub fn zero(tr: Truncation, chart: &Chart) -> Self {
        Series {
            tr,
            poly: Polynomial::zero(chart),
        }
    }

    pub fn constant(tr: Truncation, chart: &Chart, c: Rational) -> Self {
        Series {
            tr,
            poly: Polynomial::constant(chart, c),
        }
    }

    /// Chart variable `i` (a displacement, the time, or a symbol).
    pub fn var(tr: Truncation, chart: &Chart, i: usize) -> Self {
        Series::new(tr, Polynomial::var(chart, i))
    }

    pub fn truncation(&self) -> Truncation {
        self.tr
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn chart(&self) -> &Chart {
        self.poly.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.poly.coefficient(m)
    }

    pub fn constant_term(&self) -> Rational {
        self.poly.constant_term()
    }

    /// The part of ξ-degree zero (a polynomial in time and symbols).
    pub fn xi_constant_part(&self) -> Polynomial {
        let n = self.tr.nxi;
        self.poly.filter_terms(|m| m.degree_below(n) == 0)
    }

    pub fn add(&self, other: &Series) -> Series {
        Series {
            tr: self.tr,
            poly: &self.poly + &other.poly,
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        Series {
            tr: self.tr,
            poly: &self.poly - &other.poly,
        }
    }

    pub fn neg(&self) -> Series {
        Series {
            tr: self.tr,
            poly: -&self.poly,
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            tr: self.tr,
            poly: self.poly.scale(c),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let tr = self.tr;
        Series {
            tr,
            poly: self.poly.mul_truncated(&other.poly, |m| tr.keeps(m)),
        }
    }

    /// Re-truncates to a coarser rule (or moves onto a chart containing this one).
    pub fn retruncate(&self, tr: Truncation) -> Series {
        Series::new(tr, self.poly.clone())
    }

    pub fn embed(&self, tr: Truncation, chart: &Chart) -> Result<Series> {
        Ok(Series::new(tr, self.poly.embed(chart)?))
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational and
    /// every other monomial must carry a displacement or time factor.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::IrregularPoint("series with vanishing constant term".into()));
        }
        let tr = self.tr;
        let rest = self.poly.filter_terms(|m| !m.is_one());
        let nilpotent = rest.terms().all(|(m, _)| {
            m.degree_below(tr.nxi) > 0 || tr.t_index().is_some_and(|t| m.exponent(t) > 0)
        });
        if !nilpotent {
            return Err(Error::IrregularPoint("series constant part is not a number".into()));
        }
        let inv0 = c0.recip();
        let u = Series::new(tr, rest.scale(&-&inv0));
        let mut acc = Series::constant(tr, self.chart(), Rational::one());
        let mut power = acc.clone();
        for _ in 0..(tr.k + tr.tn + 1) {
            power = power.mul(&u);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }

    /// `∂/∂ξ_i`, one displacement order lower.
    pub fn d_xi(&self, i: usize) -> Series {
        let tr = self.tr.with_k(self.tr.k.saturating_sub(1));
        Series::new(tr, self.poly.derivative(i))
    }

    pub fn d_dt(&self) -> Series {
        let t = self.tr.t_index().expect("series has a time variable");
        Series::new(self.tr, self.poly.derivative(t))
    }

    /// `∫_0^t`, truncated at the time order.
    pub fn integrate_dt(&self) -> Series {
        let t = self.tr.t_index().expect("series has a time variable");
        Series::new(self.tr, self.poly.antiderivative(t))
    }

    /// Substitutes `t -> -t`.
    pub fn reverse_time(&self) -> Series {
        let Some(t) = self.tr.t_index() else {
            return self.clone();
        };
        let poly = Polynomial::from_terms(
            self.chart(),
            self.poly.terms().map(|(m, c)| {
                if m.exponent(t) % 2 == 1 {
                    (m.clone(), -c)
                } else {
                    (m.clone(), c.clone())
                }
            }),
        );
        Series { tr: self.tr, poly }
    }

    /// The `t = 0` slice.
    pub fn at_time_zero(&self) -> Series {
        match self.tr.t_index() {
            None => self.clone(),
            Some(t) => Series::new(self.tr, self.poly.filter_terms(|m| m.exponent(t) == 0)),
        }
    }

    /// Evaluates `f` with each chart variable named in `names` replaced by the
    /// matching entry of `args`.
    pub fn eval_rf(f: &RationalFunction, names: &Chart, args: &[Series]) -> Result<Series> {
        let fc = f.chart();
        let mut vals: Vec<Option<&Series>> = vec![None; fc.dim()];
        for v in f.support_vars() {
            let name = fc.name(v);
            let i = names
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            vals[v] = Some(&args[i]);
        }
        let unit = &args[0];
        let num = f.numer().evaluate(&vals, unit);
        if f.denom().is_one() {
            return Ok(num);
        }
        let den = f.denom().evaluate(&vals, unit);
        Ok(num.mul(&den.inverse()?))
    }
}

impl EvalTarget for Series {
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_ref(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn constant_like(like: &Self, c: &Rational) -> Self {
        Series::constant(like.tr, like.chart(), c.clone())
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[k={}, {}]", self.tr.k, self.poly)
    }
}

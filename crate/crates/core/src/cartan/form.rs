use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::VectorField;
use crate::error::{Error, Result};
use crate::exactalg::{Chart, RationalFunction};

/// Strictly increasing tuple of chart indices.
pub type Tuple = Vec<u32>;

/// Sorts `idx`, returning the tuple and whether the permutation was odd;
/// `None` when an index repeats.
pub fn sort_with_sign(mut idx: Vec<u32>) -> Option<(Tuple, bool)> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, odd))
}

/// A rational differential form of fixed degree, stored on increasing tuples.
#[derive(Clone)]
pub struct DifferentialForm {
    chart: Chart,
    degree: usize,
    coeffs: BTreeMap<Tuple, RationalFunction>,
}

impl DifferentialForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DifferentialForm {
            chart: chart.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A degree-0 form.
    pub fn function(chart: &Chart, f: RationalFunction) -> Self {
        let mut w = DifferentialForm::zero(chart, 0);
        w.insert(Vec::new(), f);
        w
    }

    pub fn dx(chart: &Chart, i: usize) -> Self {
        let mut w = DifferentialForm::zero(chart, 1);
        w.insert(vec![i as u32], RationalFunction::one(chart));
        w
    }

    pub fn d_named(chart: &Chart, name: &str) -> Result<Self> {
        Ok(DifferentialForm::dx(chart, chart.require(name)?))
    }

    /// `f dx_1 ∧ … ∧ dx_m` on the whole chart.
    pub fn volume(chart: &Chart, f: RationalFunction) -> Self {
        let mut w = DifferentialForm::zero(chart, chart.dim());
        w.insert((0..chart.dim() as u32).collect(), f);
        w
    }

    /// Sums `c · dx_{i_1} ∧ … ∧ dx_{i_k}` over arbitrary index lists.
    pub fn from_terms<I>(chart: &Chart, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, RationalFunction)>,
    {
        let mut w = DifferentialForm::zero(chart, degree);
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::InvalidArgument(format!("index tuple {idx:?} for degree {degree}")));
            }
            w.accumulate(idx.into_iter().map(|i| i as u32).collect(), &c);
        }
        Ok(w)
    }

    fn insert(&mut self, t: Tuple, c: RationalFunction) {
        if !c.is_zero() {
            self.coeffs.insert(t, c);
        }
    }

    /// Adds `c · dx_idx` with the sign of the sorting permutation.
    fn accumulate(&mut self, idx: Vec<u32>, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let Some((t, odd)) = sort_with_sign(idx) else {
            return;
        };
        let c = if odd { -c } else { c.clone() };
        match self.coeffs.remove(&t) {
            None => {
                self.coeffs.insert(t, c);
            }
            Some(old) => {
                let s = &old + &c;
                self.insert(t, s);
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &RationalFunction)> {
        self.coeffs.iter()
    }

    /// Coefficient on an increasing tuple.
    pub fn coefficient(&self, idx: &[usize]) -> RationalFunction {
        let t: Tuple = idx.iter().map(|&i| i as u32).collect();
        self.coeffs
            .get(&t)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.chart))
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (t, c) in &other.coeffs {
            out.accumulate(t.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.scale(&RationalFunction::from_int(&self.chart, -1)))
    }

    pub fn scale(&self, f: &RationalFunction) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.chart, self.degree);
        for (t, c) in &self.coeffs {
            out.insert(t.clone(), c * f);
        }
        out
    }

    fn compatible(&self, other: &DifferentialForm) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("{} vs {}", self.chart, other.chart)));
        }
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!(
                "degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// Coefficients compared as rational functions (charts of coefficients may differ).
    pub fn equals(&self, other: &DifferentialForm) -> bool {
        self.chart == other.chart
            && self.degree == other.degree
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .all(|(t, c)| other.coeffs.get(t).is_some_and(|d| d == c))
    }
}

impl PartialEq for DifferentialForm {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
    if a.chart != b.chart {
        return Err(Error::ChartMismatch(format!("{} vs {}", a.chart, b.chart)));
    }
    let mut out = DifferentialForm::zero(&a.chart, a.degree + b.degree);
    for (ta, ca) in &a.coeffs {
        for (tb, cb) in &b.coeffs {
            let mut idx = ta.clone();
            idx.extend_from_slice(tb);
            out.accumulate(idx, &(ca * cb));
        }
    }
    Ok(out)
}

pub fn exterior_derivative(w: &DifferentialForm) -> DifferentialForm {
    let mut out = DifferentialForm::zero(&w.chart, w.degree + 1);
    for (t, c) in &w.coeffs {
        for j in 0..w.chart.dim() as u32 {
            if t.contains(&j) {
                continue;
            }
            let d = c.partial(w.chart.name(j as usize));
            let mut idx = vec![j];
            idx.extend_from_slice(t);
            out.accumulate(idx, &d);
        }
    }
    out
}

pub fn interior_product(v: &VectorField, w: &DifferentialForm) -> Result<DifferentialForm> {
    if v.chart() != &w.chart {
        return Err(Error::ChartMismatch(format!("{} vs {}", v.chart(), w.chart)));
    }
    if w.degree == 0 {
        return Err(Error::DegreeZeroForm);
    }
    let mut out = DifferentialForm::zero(&w.chart, w.degree - 1);
    for (t, c) in &w.coeffs {
        for (r, &i) in t.iter().enumerate() {
            let vi = v.component(i as usize);
            if vi.is_zero() {
                continue;
            }
            let mut rest = t.clone();
            rest.remove(r);
            let term = vi * c;
            let term = if r % 2 == 1 { -&term } else { term };
            out.accumulate(rest, &term);
        }
    }
    Ok(out)
}

/// Lie derivative from the component formula
/// `L_v(f dx_J) = v(f) dx_J + f Σ_r dx_{j_1} ∧ … ∧ d(v_{j_r}) ∧ … ∧ dx_{j_k}`.
pub fn lie_derivative(v: &VectorField, w: &DifferentialForm) -> Result<DifferentialForm> {
    if v.chart() != &w.chart {
        return Err(Error::ChartMismatch(format!("{} vs {}", v.chart(), w.chart)));
    }
    let chart = &w.chart;
    let mut out = DifferentialForm::zero(chart, w.degree);
    for (t, c) in &w.coeffs {
        out.accumulate(t.clone(), &v.apply(c));
        for (r, &j) in t.iter().enumerate() {
            let vj = v.component(j as usize);
            if vj.is_zero() {
                continue;
            }
            for i in 0..chart.dim() {
                let d = vj.partial(chart.name(i));
                if d.is_zero() {
                    continue;
                }
                let mut idx = t.clone();
                idx[r] = i as u32;
                out.accumulate(idx, &(&d * c));
            }
        }
    }
    Ok(out)
}

/// `i_v dω + d i_v ω`; for degree 0 this is `i_v dω`.
pub fn lie_derivative_cartan(v: &VectorField, w: &DifferentialForm) -> Result<DifferentialForm> {
    let first = interior_product(v, &exterior_derivative(w))?;
    if w.degree == 0 {
        return Ok(first);
    }
    first.add(&exterior_derivative(&interior_product(v, w)?))
}

/// The ideal generated by the differentials of some chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientContext {
    chart: Chart,
    dropped: BTreeSet<u32>,
}

impl QuotientContext {
    pub fn new(chart: &Chart, dropped: &[&str]) -> Result<Self> {
        let dropped = dropped
            .iter()
            .map(|n| chart.require(n).map(|i| i as u32))
            .collect::<Result<_>>()?;
        Ok(QuotientContext {
            chart: chart.clone(),
            dropped,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dropped(&self) -> impl Iterator<Item = &str> + '_ {
        self.dropped.iter().map(|&i| self.chart.name(i as usize))
    }

    pub fn is_dropped(&self, i: usize) -> bool {
        self.dropped.contains(&(i as u32))
    }
}

/// Projection killing every term that contains a dropped differential.
pub fn reduce_mod(w: &DifferentialForm, ctx: &QuotientContext) -> Result<DifferentialForm> {
    if w.chart != ctx.chart {
        return Err(Error::ChartMismatch(format!("{} vs {}", w.chart, ctx.chart)));
    }
    let mut out = DifferentialForm::zero(&w.chart, w.degree);
    for (t, c) in &w.coeffs {
        if !t.iter().any(|i| ctx.dropped.contains(i)) {
            out.coeffs.insert(t.clone(), c.clone());
        }
    }
    Ok(out)
}

/// `div_ω v = L_v ω / ω` for a top-degree ω.
pub fn divergence(v: &VectorField, w: &DifferentialForm) -> Result<RationalFunction> {
    let chart = &w.chart;
    if w.degree != chart.dim() {
        return Err(Error::InvalidArgument(format!(
            "divergence needs a top-degree form, got degree {}",
            w.degree
        )));
    }
    let top: Vec<usize> = (0..chart.dim()).collect();
    let f = w.coefficient(&top);
    if f.is_zero() {
        return Err(Error::ZeroVolumeForm);
    }
    let l = lie_derivative(v, w)?.coefficient(&top);
    l.checked_div(&f)
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(t, c)| {
                if t.is_empty() {
                    return c.to_string();
                }
                let basis: Vec<String> = t
                    .iter()
                    .map(|&i| format!("d{}", self.chart.name(i as usize)))
                    .collect();
                if c.is_one() {
                    basis.join("^")
                } else {
                    format!("({c})*{}", basis.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form{}[{self}]", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(ch: &Chart, name: &str) -> RationalFunction {
        RationalFunction::var_named(ch, name).unwrap()
    }

    #[test]
    fn wedge_signs() {
        let ch = Chart::of(&["p", "q"]);
        let (p, q) = (rf(&ch, "p"), rf(&ch, "q"));
        let dp = DifferentialForm::dx(&ch, 0);
        let dq = DifferentialForm::dx(&ch, 1);
        let w = wedge(&dp, &dq).unwrap();
        assert!(w.coefficient(&[0, 1]).is_one());
        assert!(wedge(&dp, &dp).unwrap().is_zero());
        let lhs = wedge(&dq.scale(&p), &dp.scale(&q)).unwrap();
        assert_eq!(lhs.coefficient(&[0, 1]), -&(&p * &q));
    }

    #[test]
    fn exterior_derivative_examples() {
        let ch = Chart::of(&["x", "y"]);
        let xdy = DifferentialForm::dx(&ch, 1).scale(&rf(&ch, "x"));
        let d = exterior_derivative(&xdy);
        assert!(d.coefficient(&[0, 1]).is_one());
        assert!(exterior_derivative(&DifferentialForm::dx(&ch, 0)).is_zero());
    }

    #[test]
    fn interior_and_lie() {
        let ch = Chart::of(&["x", "p", "q"]);
        let dpdq = wedge(&DifferentialForm::dx(&ch, 1), &DifferentialForm::dx(&ch, 2)).unwrap();
        let ip = interior_product(&VectorField::coordinate(&ch, 1), &dpdq).unwrap();
        assert_eq!(ip, DifferentialForm::dx(&ch, 2));
        assert!(interior_product(&VectorField::coordinate(&ch, 0), &dpdq)
            .unwrap()
            .is_zero());
        assert!(lie_derivative(&VectorField::coordinate(&ch, 0), &dpdq)
            .unwrap()
            .is_zero());

        let c1 = Chart::of(&["x"]);
        let xdx = VectorField::new(&c1, vec![rf(&c1, "x")]).unwrap();
        let dx = DifferentialForm::dx(&c1, 0);
        assert_eq!(lie_derivative(&xdx, &dx).unwrap(), dx);
        assert_eq!(lie_derivative_cartan(&xdx, &dx).unwrap(), dx);
    }

    #[test]
    fn reduction() {
        let ch = Chart::of(&["x", "p", "q", "a", "b", "c", "e"]);
        let ctx = QuotientContext::new(&ch, &["x", "a", "b", "c", "e"]).unwrap();
        let d = |i| DifferentialForm::dx(&ch, i);
        assert!(reduce_mod(&wedge(&d(0), &d(1)).unwrap(), &ctx).unwrap().is_zero());
        let dpdq = wedge(&d(1), &d(2)).unwrap();
        assert_eq!(reduce_mod(&dpdq, &ctx).unwrap(), dpdq);
    }

    #[test]
    fn divergence_examples() {
        let ch = Chart::of(&["x", "y"]);
        let e = VectorField::new(&ch, vec![rf(&ch, "x"), rf(&ch, "y")]).unwrap();
        let vol = DifferentialForm::volume(&ch, RationalFunction::one(&ch));
        assert_eq!(divergence(&e, &vol).unwrap(), RationalFunction::from_int(&ch, 2));
        let zero = DifferentialForm::zero(&ch, 2);
        assert!(matches!(divergence(&e, &zero), Err(Error::ZeroVolumeForm)));
    }

    #[test]
    fn euler_scaled_divergence() {
        // div(R E) = (k + m) R for R homogeneous of degree k+1 in x2, x3 and E = x2∂2 + x3∂3;
        // here m = 3, k = 1, R = x2^2.
        let ch = Chart::of(&["x1", "x2", "x3"]);
        let x2 = rf(&ch, "x2");
        let r = &x2 * &x2;
        let v = VectorField::from_named(&ch, &[("x2", &r * &x2), ("x3", &r * &rf(&ch, "x3"))]).unwrap();
        let vol = DifferentialForm::volume(&ch, RationalFunction::one(&ch));
        assert_eq!(divergence(&v, &vol).unwrap(), r.scale(&crate::exactalg::qi(4)));
    }
}

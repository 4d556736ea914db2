use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Chart, RationalFunction};
use crate::par;

/// A rational vector field `Σ v_i ∂/∂x_i` on a chart.
///
/// Components may involve names outside the chart; those are treated as constants.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<RationalFunction>,
}

impl VectorField {
    pub fn new(chart: &Chart, comps: Vec<RationalFunction>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::ChartMismatch(format!(
                "{} components on a chart of dimension {}",
                comps.len(),
                chart.dim()
            )));
        }
        Ok(VectorField {
            chart: chart.clone(),
            comps,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField {
            chart: chart.clone(),
            comps: vec![RationalFunction::zero(chart); chart.dim()],
        }
    }

    /// The coordinate field `∂/∂x_i`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.comps[i] = RationalFunction::one(chart);
        v
    }

    /// Builds a field from named components; unnamed components are zero.
    pub fn from_named(chart: &Chart, comps: &[(&str, RationalFunction)]) -> Result<Self> {
        let mut v = VectorField::zero(chart);
        for (name, c) in comps {
            v.comps[chart.require(name)?] = c.clone();
        }
        Ok(v)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &RationalFunction {
        &self.comps[i]
    }

    pub fn component_named(&self, name: &str) -> Result<&RationalFunction> {
        Ok(&self.comps[self.chart.require(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RationalFunction::is_zero)
    }

    /// The derivation `v(f) = Σ v_i ∂f/∂x_i`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(f.chart());
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(self.chart.name(i));
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.same_chart(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        VectorField::new(&self.chart, comps)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.same_chart(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        VectorField::new(&self.chart, comps)
    }

    /// Pointwise product `f·v`.
    pub fn scale(&self, f: &RationalFunction) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub(crate) fn same_chart(&self, other: &VectorField) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("{} vs {}", self.chart, other.chart)));
        }
        Ok(())
    }
}

/// `[v, w]` with components `v(w_i) − w(v_i)`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    v.same_chart(w)?;
    let comps = par::map_range(v.chart.dim(), |i| {
        &v.apply(&w.comps[i]) - &w.apply(&v.comps[i])
    });
    VectorField::new(&v.chart, comps)
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self.chart.name(i);
            if c.is_one() {
                parts.push(format!("d/d{name}"));
            } else {
                parts.push(format!("({c})*d/d{name}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{self}]")
    }
}

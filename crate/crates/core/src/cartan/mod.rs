//! Coordinate differential geometry on an affine chart.

mod field;
mod form;

pub use crate::exactalg::Chart;
pub use field::{lie_bracket, VectorField};
pub use form::{
    divergence, exterior_derivative, interior_product, lie_derivative, lie_derivative_cartan,
    reduce_mod, sort_with_sign, wedge, DifferentialForm, QuotientContext, Tuple,
};

use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;
use crate::par;

/// `f ∘ map`, where `map[i]` replaces the i-th chart coordinate.
pub fn compose_with(f: &RationalFunction, chart: &Chart, map: &[RationalFunction]) -> Result<RationalFunction> {
    let bindings: Vec<(&str, &RationalFunction)> = (0..chart.dim())
        .filter(|&i| f.chart().contains(chart.name(i)))
        .map(|i| (chart.name(i), &map[i]))
        .collect();
    if bindings.is_empty() {
        return Ok(f.clone());
    }
    f.substitute(&bindings)
}

fn is_identity(chart: &Chart, outer: &[RationalFunction], inner: &[RationalFunction]) -> Result<bool> {
    for (i, o) in outer.iter().enumerate() {
        let c = compose_with(o, chart, inner)?;
        if c != RationalFunction::var(chart, i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transports `v` along an invertible rational change of coordinates.
///
/// `map` and `inverse` list one image per chart coordinate; both compositions
/// are checked to be the identity before anything is computed.
pub fn pushforward(v: &VectorField, map: &[RationalFunction], inverse: &[RationalFunction]) -> Result<VectorField> {
    let chart = v.chart();
    if map.len() != chart.dim() || inverse.len() != chart.dim() {
        return Err(Error::ChartMismatch("map arity differs from chart dimension".into()));
    }
    if !is_identity(chart, map, inverse)? || !is_identity(chart, inverse, map)? {
        return Err(Error::CompositionCheckFailed(
            "map and inverse do not compose to the identity".into(),
        ));
    }
    let comps = par::map_range(chart.dim(), |i| compose_with(&v.apply(&map[i]), chart, inverse));
    VectorField::new(chart, comps.into_iter().collect::<Result<_>>()?)
}

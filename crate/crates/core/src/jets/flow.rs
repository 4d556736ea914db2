use num_traits::One;

use super::map::{expand_at, TruncatedMapJet};
use super::series::Series;
use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// Jet of the flow `Φ_t` of `v` at `point`: space order `k`, time order `n`.
///
/// Picard iteration `Φ ← id + ∫_0^t v(Φ)`; pass `i` only needs `v(Φ)` to time order `i`.
pub fn flow_jet(v: &VectorField, point: &[Rational], k: u32, n: u32) -> Result<TruncatedMapJet> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("flow jets need k ≥ 1 and N ≥ 1".into()));
    }
    let base = v.chart();
    if point.len() != base.dim() {
        return Err(Error::ChartMismatch("base point arity differs from chart dimension".into()));
    }
    for c in v.components() {
        expand_at(c, base, point, 0, None)?;
    }
    let id = TruncatedMapJet::identity(base, point, k, Some(n));
    let tr = id.truncation();
    let mut phi: Vec<Series> = id.components().to_vec();
    for i in 0..n {
        let tri = tr.with_tn(i);
        let low: Vec<Series> = phi.iter().map(|c| c.retruncate(tri)).collect();
        let mut next = Vec::with_capacity(phi.len());
        for (j, c) in v.components().iter().enumerate() {
            let start = id.components()[j].clone();
            if c.is_zero() {
                next.push(start);
                continue;
            }
            let vj = Series::eval_rf(c, base, &low)?.retruncate(tr);
            next.push(start.add(&vj.integrate_dt()));
        }
        phi = next;
    }
    Ok(TruncatedMapJet::from_parts(base, point, tr, phi))
}

/// Lie series `Σ_{n ≤ N} t^n/n! · X^n(x_j)` expanded at `point`; an independent
/// route to the flow jet, practical for small fields.
pub fn lie_series_flow(v: &VectorField, point: &[Rational], k: u32, n: u32) -> Result<TruncatedMapJet> {
    let base = v.chart();
    let id = TruncatedMapJet::identity(base, point, k, Some(n));
    let tr = id.truncation();
    let chart = id.chart();
    let t = Series::var(tr, &chart, base.dim());
    let mut comps = Vec::with_capacity(base.dim());
    for j in 0..base.dim() {
        let mut f = crate::exactalg::RationalFunction::var(base, j);
        let mut acc = Series::zero(tr, &chart);
        let mut tpow = Series::constant(tr, &chart, Rational::one());
        let mut fact = Rational::one();
        for i in 0..=n {
            if i > 0 {
                f = v.apply(&f);
                fact *= Rational::from_integer(i.into());
                tpow = tpow.mul(&t);
            }
            if f.is_zero() {
                break;
            }
            let s = expand_at(&f, base, point, k, Some(n))?;
            acc = acc.add(&s.mul(&tpow).scale(&fact.recip()));
        }
        comps.push(acc);
    }
    Ok(TruncatedMapJet::from_parts(base, point, tr, comps))
}

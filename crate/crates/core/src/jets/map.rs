use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::series::{Series, Truncation};
use crate::cartan::{sort_with_sign, DifferentialForm, QuotientContext, Tuple, VectorField};
use crate::error::{Error, Result};
use crate::exactalg::{linalg, Chart, Monomial, Polynomial, Rational, RationalFunction};
use crate::par;

/// Name of the time variable in displacement charts.
pub const TIME: &str = "τ";

/// Displacement chart `ξ_x, ξ_y, …` over a base chart, followed by `τ` when timed.
pub fn displacement_chart(base: &Chart, time: bool) -> Chart {
    let mut names: Vec<String> = base.names().iter().map(|n| format!("ξ_{n}")).collect();
    if time {
        names.push(TIME.to_string());
    }
    Chart::new(names).expect("distinct names")
}

/// Taylor expansion of `f` at `point` (ξ-order `k`, constant in time).
pub fn expand_at(
    f: &RationalFunction,
    base: &Chart,
    point: &[Rational],
    k: u32,
    torder: Option<u32>,
) -> Result<Series> {
    let tr = Truncation::new(base.dim(), k, torder);
    let chart = displacement_chart(base, tr.time);
    let args = identity_args(base, point, tr, &chart);
    Series::eval_rf(f, base, &args).map_err(|e| match e {
        Error::IrregularPoint(_) => Error::IrregularPoint(format!("{f} is singular at {point:?}")),
        other => other,
    })
}

fn identity_args(base: &Chart, point: &[Rational], tr: Truncation, chart: &Chart) -> Vec<Series> {
    (0..base.dim())
        .map(|j| Series::var(tr, chart, j).add(&Series::constant(tr, chart, point[j].clone())))
        .collect()
}

/// Truncated Taylor data of a local map between pointed charts, possibly
/// depending polynomially on a formal time.
///
/// Component `j` is a series in the displacements `ξ = x − source`; its
/// ξ-constant part is the target coordinate (a polynomial in time).
#[derive(Clone)]
pub struct TruncatedMapJet {
    base: Chart,
    source: Vec<Rational>,
    tr: Truncation,
    comps: Vec<Series>,
}

impl TruncatedMapJet {
    pub fn identity(base: &Chart, source: &[Rational], k: u32, torder: Option<u32>) -> Self {
        let tr = Truncation::new(base.dim(), k, torder);
        let chart = displacement_chart(base, tr.time);
        TruncatedMapJet {
            base: base.clone(),
            source: source.to_vec(),
            tr,
            comps: identity_args(base, source, tr, &chart),
        }
    }

    /// The jet at `source` of a rational map given by one image per coordinate.
    pub fn from_map(base: &Chart, source: &[Rational], k: u32, map: &[RationalFunction]) -> Result<Self> {
        if map.len() != base.dim() || source.len() != base.dim() {
            return Err(Error::ChartMismatch("map arity differs from chart dimension".into()));
        }
        let comps = map
            .iter()
            .map(|f| expand_at(f, base, source, k, None))
            .collect::<Result<_>>()?;
        Ok(TruncatedMapJet {
            base: base.clone(),
            source: source.to_vec(),
            tr: Truncation::new(base.dim(), k, None),
            comps,
        })
    }

    /// Builds a jet from component polynomials on the displacement chart.
    pub fn from_series(base: &Chart, source: &[Rational], k: u32, torder: Option<u32>, comps: Vec<Polynomial>) -> Result<Self> {
        let tr = Truncation::new(base.dim(), k, torder);
        let chart = displacement_chart(base, tr.time);
        if comps.len() != base.dim() {
            return Err(Error::ChartMismatch("component count differs from chart dimension".into()));
        }
        let comps = comps
            .into_iter()
            .map(|p| Ok(Series::new(tr, p.embed(&chart)?)))
            .collect::<Result<_>>()?;
        Ok(TruncatedMapJet {
            base: base.clone(),
            source: source.to_vec(),
            tr,
            comps,
        })
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn source(&self) -> &[Rational] {
        &self.source
    }

    pub fn order(&self) -> u32 {
        self.tr.k
    }

    pub fn torder(&self) -> Option<u32> {
        self.tr.torder()
    }

    pub fn truncation(&self) -> Truncation {
        self.tr
    }

    pub fn components(&self) -> &[Series] {
        &self.comps
    }

    pub fn chart(&self) -> Chart {
        displacement_chart(&self.base, self.tr.time)
    }

    /// Target at time zero.
    pub fn target_point(&self) -> Vec<Rational> {
        self.comps.iter().map(Series::constant_term).collect()
    }

    /// Whether the target depends on time.
    pub fn is_moving(&self) -> bool {
        self.comps
            .iter()
            .any(|c| c.xi_constant_part().terms().any(|(m, _)| !m.is_one()))
    }

    /// Linear part at time zero: `J[i][j] = ∂φ_i/∂ξ_j`.
    pub fn jacobian0(&self) -> Vec<Vec<Rational>> {
        self.comps
            .iter()
            .map(|c| (0..self.base.dim()).map(|j| c.coefficient(&Monomial::var(j, 1))).collect())
            .collect()
    }

    /// Projection to a lower order.
    pub fn truncate(&self, k: u32) -> Self {
        let tr = self.tr.with_k(k.min(self.tr.k));
        TruncatedMapJet {
            tr,
            comps: self.comps.iter().map(|c| c.retruncate(tr)).collect(),
            ..self.clone()
        }
    }

    /// `φ` with `t` replaced by `−t`.
    pub fn reverse_time(&self) -> Self {
        TruncatedMapJet {
            comps: self.comps.iter().map(Series::reverse_time).collect(),
            ..self.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        let id = TruncatedMapJet::identity(&self.base, &self.source, self.tr.k, self.tr.torder());
        self.comps == id.comps
    }

    /// `f ∘ φ` as a series at the source.
    pub fn eval_rf(&self, f: &RationalFunction) -> Result<Series> {
        Series::eval_rf(f, &self.base, &self.comps)
    }

    pub(crate) fn from_parts(base: &Chart, source: &[Rational], tr: Truncation, comps: Vec<Series>) -> Self {
        TruncatedMapJet {
            base: base.clone(),
            source: source.to_vec(),
            tr,
            comps,
        }
    }

    fn lifted(&self, tr: Truncation) -> Result<Vec<Series>> {
        let chart = displacement_chart(&self.base, tr.time);
        self.comps.iter().map(|c| c.embed(tr, &chart)).collect()
    }

    /// `∂φ_i/∂ξ_j`, one order lower.
    pub fn jacobian(&self) -> Vec<Vec<Series>> {
        self.comps
            .iter()
            .map(|c| (0..self.base.dim()).map(|j| c.d_xi(j)).collect())
            .collect()
    }

    pub fn pullback_form(&self, w: &DifferentialForm) -> Result<FormJet> {
        jet_pullback_form(self, w)
    }

    pub fn pushforward_field(&self, v: &VectorField) -> Result<FieldJet> {
        jet_pushforward_field(self, v)
    }
}

impl PartialEq for TruncatedMapJet {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.source == other.source
            && self.tr == other.tr
            && self.comps == other.comps
    }
}

impl fmt::Display for TruncatedMapJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.comps.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> {}", self.base.name(j), c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedMapJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[k={}, src={:?}: {self}]", self.tr.k, self.source)
    }
}

fn joint_time(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::OrderMismatch(format!("time orders {x} and {y}"))),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

/// Substitutes series into the components of `outer`, truncating at `tr`.
fn substitute(outer: &[Series], args: &[Series], time: Option<&Series>, tr: Truncation) -> Vec<Series> {
    let m = args.len();
    par::map(outer, |c| {
        let mut vals: Vec<Option<&Series>> = args.iter().map(Some).collect();
        if c.truncation().time {
            vals.push(time);
        }
        debug_assert_eq!(vals.len(), c.chart().dim());
        let unit = &args[0];
        let r = c.poly().evaluate(&vals, unit);
        debug_assert!(m == 0 || r.chart() == unit.chart());
        r.retruncate(tr)
    })
}

/// `g ∘ f`. The target of `f` at time zero must be the source of `g`.
///
/// When the target of `f` moves with time, every displacement monomial of `g`
/// feeds lower orders through powers of time, so `g` must carry `N` extra
/// orders; the result has the order of `f`.
pub fn jet_compose(g: &TruncatedMapJet, f: &TruncatedMapJet) -> Result<TruncatedMapJet> {
    if g.base != f.base {
        return Err(Error::ChartMismatch(format!("{} vs {}", g.base, f.base)));
    }
    let torder = joint_time(g.torder(), f.torder())?;
    let target = f.target_point();
    if target != g.source {
        return Err(Error::PointMismatch(format!(
            "target {target:?} is not the source {:?}",
            g.source
        )));
    }
    let need = if f.is_moving() { f.order() + torder.unwrap_or(0) } else { f.order() };
    let orders_ok = if f.is_moving() { g.order() >= need } else { g.order() == f.order() };
    if !orders_ok {
        return Err(Error::OrderMismatch(format!(
            "outer order {} with inner order {} (needs {need})",
            g.order(),
            f.order()
        )));
    }
    let m = f.base.dim();
    let tr = Truncation::new(m, f.order(), torder);
    let chart = displacement_chart(&f.base, tr.time);
    let args: Vec<Series> = f
        .lifted(tr)?
        .into_iter()
        .zip(&g.source)
        .map(|(c, s)| c.sub(&Series::constant(tr, &chart, s.clone())))
        .collect();
    let time = tr.time.then(|| Series::var(tr, &chart, m));
    let comps = substitute(&g.lifted(g.tr.with_k(g.tr.k))?, &args, time.as_ref(), tr);
    Ok(TruncatedMapJet {
        base: f.base.clone(),
        source: f.source.clone(),
        tr,
        comps,
    })
}

/// Inverse jet, based at the time-zero target.
///
/// Solved by the fixed-point iteration `g ← g + A⁻¹(η − (f(g) − y₀))` with `A` the
/// time-zero linear part; a moving target costs `N` orders.
pub fn jet_invert(f: &TruncatedMapJet) -> Result<TruncatedMapJet> {
    let m = f.base.dim();
    let a_inv = linalg::inverse(&f.jacobian0()).ok_or(Error::SingularJacobian)?;
    let tn = f.tr.tn;
    let k = if f.is_moving() {
        f.order().checked_sub(tn).filter(|&k| k >= 1).ok_or_else(|| {
            Error::OrderMismatch(format!("order {} cannot absorb time order {tn}", f.order()))
        })?
    } else {
        f.order()
    };
    let tr = f.tr.with_k(k);
    let chart = displacement_chart(&f.base, tr.time);
    let y0 = f.target_point();
    let eta: Vec<Series> = (0..m).map(|j| Series::var(tr, &chart, j)).collect();
    let time = tr.time.then(|| Series::var(tr, &chart, m));
    let apply = |v: &[Series]| -> Vec<Series> {
        (0..m)
            .map(|i| {
                let mut acc = Series::zero(tr, &chart);
                for (j, vj) in v.iter().enumerate() {
                    if !a_inv[i][j].is_zero() {
                        acc = acc.add(&vj.scale(&a_inv[i][j]));
                    }
                }
                acc
            })
            .collect()
    };
    let mut g = apply(&eta);
    let fc = f.lifted(f.tr)?;
    for _ in 0..(k + tn + 1) {
        let image = substitute(&fc, &g, time.as_ref(), tr);
        let defect: Vec<Series> = image
            .iter()
            .zip(&y0)
            .zip(&eta)
            .map(|((im, y), e)| e.sub(&im.sub(&Series::constant(tr, &chart, y.clone()))))
            .collect();
        if defect.iter().all(Series::is_zero) {
            break;
        }
        let step = apply(&defect);
        g = g.iter().zip(&step).map(|(a, b)| a.add(b)).collect();
    }
    let comps = g
        .iter()
        .zip(&f.source)
        .map(|(c, s)| c.add(&Series::constant(tr, &chart, s.clone())))
        .collect();
    Ok(TruncatedMapJet {
        base: f.base.clone(),
        source: y0,
        tr,
        comps,
    })
}

/// A differential form with truncated series coefficients at a point.
#[derive(Clone)]
pub struct FormJet {
    pub base: Chart,
    pub point: Vec<Rational>,
    pub degree: usize,
    pub tr: Truncation,
    pub coeffs: BTreeMap<Tuple, Series>,
}

impl FormJet {
    /// Taylor expansion of a form at a point.
    pub fn expand(w: &DifferentialForm, point: &[Rational], k: u32, torder: Option<u32>) -> Result<Self> {
        let base = w.chart();
        let tr = Truncation::new(base.dim(), k, torder);
        let mut coeffs = BTreeMap::new();
        for (t, c) in w.terms() {
            let s = expand_at(c, base, point, k, torder)?;
            if !s.is_zero() {
                coeffs.insert(t.clone(), s);
            }
        }
        Ok(FormJet {
            base: base.clone(),
            point: point.to_vec(),
            degree: w.degree(),
            tr,
            coeffs,
        })
    }

    pub fn sub(&self, other: &FormJet) -> FormJet {
        let mut coeffs = self.coeffs.clone();
        let chart = displacement_chart(&self.base, self.tr.time);
        for (t, c) in &other.coeffs {
            let c = c.embed(self.tr, &chart).expect("same base");
            let d = match coeffs.remove(t) {
                Some(a) => a.sub(&c),
                None => c.neg(),
            };
            if !d.is_zero() {
                coeffs.insert(t.clone(), d);
            }
        }
        FormJet {
            coeffs,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Series::is_zero)
    }

    /// Coefficient on an arbitrary index list, with the sign of its sorting.
    pub fn coefficient(&self, idx: &[usize]) -> Option<Series> {
        let (t, odd) = sort_with_sign(idx.iter().map(|&i| i as u32).collect())?;
        let c = self.coeffs.get(&t)?.clone();
        Some(if odd { c.neg() } else { c })
    }

    /// Drops every term whose source tuple contains a dropped differential.
    pub fn reduce_mod(&self, ctx: &QuotientContext) -> FormJet {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(t, _)| !t.iter().any(|&i| ctx.is_dropped(i as usize)))
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();
        FormJet {
            coeffs,
            ..self.clone()
        }
    }
}

impl fmt::Display for FormJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(t, c)| {
                let basis: Vec<String> = t
                    .iter()
                    .map(|&i| format!("d{}", self.base.name(i as usize)))
                    .collect();
                format!("({c})*{}", basis.join("^"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A vector field with truncated series components at a point.
#[derive(Clone)]
pub struct FieldJet {
    pub base: Chart,
    pub point: Vec<Rational>,
    pub tr: Truncation,
    pub comps: Vec<Series>,
}

impl FieldJet {
    pub fn expand(v: &VectorField, point: &[Rational], k: u32, torder: Option<u32>) -> Result<Self> {
        let base = v.chart();
        let comps = v
            .components()
            .iter()
            .map(|c| expand_at(c, base, point, k, torder))
            .collect::<Result<_>>()?;
        Ok(FieldJet {
            base: base.clone(),
            point: point.to_vec(),
            tr: Truncation::new(base.dim(), k, torder),
            comps,
        })
    }

    pub fn sub(&self, other: &FieldJet) -> FieldJet {
        let chart = displacement_chart(&self.base, self.tr.time);
        FieldJet {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(&b.embed(self.tr, &chart).expect("same base")))
                .collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Series::is_zero)
    }
}

impl fmt::Display for FieldJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({c})*d/d{}", self.base.name(j)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Determinant of a small matrix of series by cofactor expansion.
fn series_det(a: &[Vec<Series>]) -> Series {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = a[0][0].sub(&a[0][0]);
    for c in 0..n {
        if a[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Series>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = a[0][c].mul(&series_det(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn increasing_tuples(m: usize, d: usize) -> Vec<Tuple> {
    fn rec(m: u32, d: usize, start: u32, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, d, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m as u32, d, 0, &mut Vec::new(), &mut out);
    out
}

/// `φ*ω` at the source, to order `k − 1`: coefficients `Σ_I ω_I(φ) det(∂φ_I/∂ξ_J)`.
pub fn jet_pullback_form(f: &TruncatedMapJet, w: &DifferentialForm) -> Result<FormJet> {
    if w.chart() != &f.base {
        return Err(Error::ChartMismatch(format!("{} vs {}", w.chart(), f.base)));
    }
    if f.order() == 0 {
        return Err(Error::OrderMismatch("pullback needs order at least 1".into()));
    }
    let k = f.order() - 1;
    let tr = f.tr.with_k(k);
    let low = f.truncate(k);
    let jac = f.jacobian();
    let d = w.degree();
    let terms: Vec<(&Tuple, &RationalFunction)> = w.terms().collect();
    let pulled: Vec<Result<(Tuple, Series)>> = par::map(&terms, |(t, c)| Ok(((*t).clone(), low.eval_rf(c)?)));
    let pulled: Vec<(Tuple, Series)> = pulled.into_iter().collect::<Result<_>>()?;
    let targets = increasing_tuples(f.base.dim(), d);
    let coeffs: Vec<(Tuple, Series)> = par::map(&targets, |cols| {
        let chart = displacement_chart(&f.base, tr.time);
        let mut acc = Series::zero(tr, &chart);
        for (rows, c) in &pulled {
            let term = if d == 0 {
                c.clone()
            } else {
                let minor: Vec<Vec<Series>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| jac[i as usize][j as usize].clone()).collect())
                    .collect();
                let det = series_det(&minor);
                if det.is_zero() {
                    continue;
                }
                c.mul(&det)
            };
            acc = acc.add(&term);
        }
        (cols.clone(), acc)
    });
    Ok(FormJet {
        base: f.base.clone(),
        point: f.source.clone(),
        degree: d,
        tr,
        coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    })
}

/// `Dφ · v` at the source, to order `k − 1` (the field `φ_* v` read at `φ(x)`).
pub fn transported_field_at_source(f: &TruncatedMapJet, v: &VectorField) -> Result<Vec<Series>> {
    if v.chart() != &f.base {
        return Err(Error::ChartMismatch(format!("{} vs {}", v.chart(), f.base)));
    }
    if f.order() == 0 {
        return Err(Error::OrderMismatch("pushforward needs order at least 1".into()));
    }
    let k = f.order() - 1;
    let vs = FieldJet::expand(v, &f.source, k, f.torder())?;
    let jac = f.jacobian();
    let m = f.base.dim();
    Ok((0..m)
        .map(|i| {
            let mut acc = vs.comps[0].sub(&vs.comps[0]);
            for j in 0..m {
                if !vs.comps[j].is_zero() {
                    acc = acc.add(&jac[i][j].mul(&vs.comps[j]));
                }
            }
            acc
        })
        .collect())
}

/// `φ_* v` at the time-zero target.
///
/// Order `k − 1`, or `k − 1 − N` when the target moves.
pub fn jet_pushforward_field(f: &TruncatedMapJet, v: &VectorField) -> Result<FieldJet> {
    let w = transported_field_at_source(f, v)?;
    let g = jet_invert(f)?;
    let loss = if f.is_moving() { f.tr.tn } else { 0 };
    let k = (f.order() - 1).checked_sub(loss).ok_or_else(|| {
        Error::OrderMismatch(format!("order {} cannot absorb time order {loss}", f.order()))
    })?;
    let tr = f.tr.with_k(k);
    let chart = displacement_chart(&f.base, tr.time);
    let m = f.base.dim();
    let args: Vec<Series> = g
        .comps
        .iter()
        .zip(&f.source)
        .map(|(c, s)| c.retruncate(tr).sub(&Series::constant(tr, &chart, s.clone())))
        .collect();
    let time = tr.time.then(|| Series::var(tr, &chart, m));
    let comps = substitute(&w, &args, time.as_ref(), tr);
    Ok(FieldJet {
        base: f.base.clone(),
        point: g.source.clone(),
        tr,
        comps,
    })
}

/// `φ^* v = (Dφ)⁻¹ · v∘φ` at the source, to order `k − 1`.
pub fn jet_pullback_field(f: &TruncatedMapJet, v: &VectorField) -> Result<FieldJet> {
    if v.chart() != &f.base {
        return Err(Error::ChartMismatch(format!("{} vs {}", v.chart(), f.base)));
    }
    let k = f
        .order()
        .checked_sub(1)
        .ok_or_else(|| Error::OrderMismatch("pullback needs order at least 1".into()))?;
    let tr = f.tr.with_k(k);
    let m = f.base.dim();
    let low = f.truncate(k);
    let vphi: Vec<Series> = v
        .components()
        .iter()
        .map(|c| low.eval_rf(c))
        .collect::<Result<_>>()?;
    // Invert Dφ = A(1 + A⁻¹ R) by a Neumann series; R has no constant part.
    let a_inv = linalg::inverse(&f.jacobian0()).ok_or(Error::SingularJacobian)?;
    let jac = f.jacobian();
    let chart = displacement_chart(&f.base, tr.time);
    let scaled = |v: &[Series]| -> Vec<Series> {
        (0..m)
            .map(|i| {
                let mut acc = Series::zero(tr, &chart);
                for (j, vj) in v.iter().enumerate() {
                    if !a_inv[i][j].is_zero() {
                        acc = acc.add(&vj.scale(&a_inv[i][j]));
                    }
                }
                acc
            })
            .collect()
    };
    let rest = |v: &[Series]| -> Vec<Series> {
        (0..m)
            .map(|i| {
                let mut acc = Series::zero(tr, &chart);
                for (j, vj) in v.iter().enumerate() {
                    let r = jac[i][j].sub(&Series::constant(tr, &chart, jac[i][j].constant_term()));
                    if !r.is_zero() {
                        acc = acc.add(&r.mul(vj));
                    }
                }
                acc
            })
            .collect()
    };
    let mut term = scaled(&vphi);
    let mut acc = term.clone();
    for _ in 0..(k + tr.tn + 1) {
        term = scaled(&rest(&term)).into_iter().map(|s| s.neg()).collect();
        if term.iter().all(Series::is_zero) {
            break;
        }
        acc = acc.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
    }
    Ok(FieldJet {
        base: f.base.clone(),
        point: f.source.clone(),
        tr,
        comps: acc,
    })
}

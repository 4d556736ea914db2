//! D-groupoids given by defining data, and membership of truncated jets.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{
    lie_bracket, lie_derivative, reduce_mod, DifferentialForm, QuotientContext, VectorField,
};
use crate::error::{Error, Result};
use crate::exactalg::{Chart, RationalFunction};
use crate::jets::{
    expand_at, frame_action, jet_order, transported_field_at_source, FormJet, FrameAction, Series,
    TruncatedMapJet,
};
use crate::par;

/// One defining condition of a groupoid.
#[derive(Clone, Debug)]
pub enum Datum {
    /// `w ∘ φ = w`.
    Fixed(RationalFunction),
    /// `φ*ω = ω`.
    Form(DifferentialForm),
    /// `φ*ω ≡ ω` modulo the dropped coordinate differentials.
    QuotientForm(DifferentialForm, QuotientContext),
    /// `φ_* v = v`.
    Field(VectorField),
    /// A differential invariant in jet variables over the chart, fixed by the
    /// frame action.
    Invariant(RationalFunction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatumKind {
    Fixed,
    Form,
    QuotientForm,
    Field,
    Invariant,
}

impl DatumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DatumKind::Fixed => "fixed",
            DatumKind::Form => "form",
            DatumKind::QuotientForm => "quotient-form",
            DatumKind::Field => "field",
            DatumKind::Invariant => "invariant",
        }
    }
}

impl Datum {
    pub fn kind(&self) -> DatumKind {
        match self {
            Datum::Fixed(_) => DatumKind::Fixed,
            Datum::Form(_) => DatumKind::Form,
            Datum::QuotientForm(..) => DatumKind::QuotientForm,
            Datum::Field(_) => DatumKind::Field,
            Datum::Invariant(_) => DatumKind::Invariant,
        }
    }

    /// The base-chart functions that must be regular at both ends of a jet.
    fn functions(&self) -> Vec<&RationalFunction> {
        match self {
            Datum::Fixed(f) => vec![f],
            Datum::Form(w) | Datum::QuotientForm(w, _) => w.terms().map(|(_, c)| c).collect(),
            Datum::Field(v) => v.components().iter().collect(),
            Datum::Invariant(_) => Vec::new(),
        }
    }
}

/// Labeled defining data on one chart; order of insertion is report order.
#[derive(Clone, Debug)]
pub struct GroupoidSpec {
    chart: Chart,
    data: Vec<(String, Datum)>,
}

impl GroupoidSpec {
    pub fn new(chart: &Chart) -> Self {
        GroupoidSpec {
            chart: chart.clone(),
            data: Vec::new(),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn data(&self) -> &[(String, Datum)] {
        &self.data
    }

    pub fn count(&self, kind: DatumKind) -> usize {
        self.data.iter().filter(|(_, d)| d.kind() == kind).count()
    }

    /// Adds a datum after checking that it lives on the spec chart.
    pub fn push(&mut self, label: impl Into<String>, datum: Datum) -> Result<()> {
        let ok = match &datum {
            // Fixed functions may use a sub-chart; they are read by name.
            Datum::Fixed(f) => f
                .support_vars()
                .iter()
                .all(|&v| self.chart.contains(f.chart().name(v))),
            Datum::Form(w) => w.chart() == &self.chart,
            Datum::QuotientForm(w, ctx) => w.chart() == &self.chart && ctx.chart() == &self.chart,
            Datum::Field(v) => v.chart() == &self.chart,
            Datum::Invariant(_) => true,
        };
        if !ok {
            return Err(Error::ChartMismatch(format!(
                "datum is not on the chart {}",
                self.chart
            )));
        }
        self.data.push((label.into(), datum));
        Ok(())
    }

    pub fn with(mut self, label: impl Into<String>, datum: Datum) -> Result<Self> {
        self.push(label, datum)?;
        Ok(self)
    }
}

/// Outcome for one datum.
#[derive(Clone, Debug)]
pub struct Residual {
    pub id: String,
    pub kind: DatumKind,
    /// Displacement order to which the residual was computed.
    pub order: u32,
    pub expr: String,
    pub vanished: bool,
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub verdict: bool,
    pub residuals: Vec<Residual>,
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", if self.verdict { "member" } else { "not a member" })?;
        for r in &self.residuals {
            let status = if r.vanished { "ok" } else { "FAIL" };
            writeln!(f, "  [{status}] {} ({}, order {}): {}", r.id, r.kind.as_str(), r.order, r.expr)?;
        }
        Ok(())
    }
}

fn series_vector_string(parts: &[Series], names: &Chart) -> String {
    let terms: Vec<String> = parts
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(i, s)| format!("({s})*d/d{}", names.name(i)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Whether `φ` satisfies every datum of `spec`.
///
/// All residuals are taken at the source of `φ`, so a target moving with time
/// costs no orders: fixed functions to order `k`, forms and fields to `k − 1`.
pub fn membership(spec: &GroupoidSpec, phi: &TruncatedMapJet) -> Result<MembershipReport> {
    if phi.base() != &spec.chart {
        return Err(Error::ChartMismatch(format!("{} vs {}", phi.base(), spec.chart)));
    }
    if phi.order() == 0 {
        return Err(Error::OrderMismatch("membership needs order at least 1".into()));
    }
    let source = phi.source().to_vec();
    let target = phi.target_point();
    for (_, d) in &spec.data {
        for f in d.functions() {
            for pt in [&source, &target] {
                expand_at(f, &spec.chart, pt, 0, None)?;
            }
        }
    }
    let k = phi.order();
    let torder = phi.torder();
    // One frame action per invariant order, shared by all invariants of that order.
    let mut frames: BTreeMap<u32, FrameAction> = BTreeMap::new();
    for (_, d) in &spec.data {
        if let Datum::Invariant(inv) = d {
            let r = jet_order(&spec.chart, inv);
            if !frames.contains_key(&r) {
                frames.insert(r, frame_action(phi, r)?);
            }
        }
    }
    let results = par::map(&spec.data, |(id, d)| -> Result<Residual> {
        let (order, expr, vanished) = match d {
            Datum::Fixed(w) => {
                let r = phi.eval_rf(w)?.sub(&expand_at(w, &spec.chart, &source, k, torder)?);
                (k, r.to_string(), r.is_zero())
            }
            Datum::Form(w) => {
                let r = phi.pullback_form(w)?.sub(&FormJet::expand(w, &source, k - 1, torder)?);
                (k - 1, r.to_string(), r.is_zero())
            }
            Datum::QuotientForm(w, ctx) => {
                let lhs = phi.pullback_form(w)?.reduce_mod(ctx);
                let rhs = FormJet::expand(w, &source, k - 1, torder)?.reduce_mod(ctx);
                let r = lhs.sub(&rhs);
                (k - 1, r.to_string(), r.is_zero())
            }
            Datum::Field(v) => {
                let pushed = transported_field_at_source(phi, v)?;
                let low = phi.truncate(k - 1);
                let diff: Vec<Series> = v
                    .components()
                    .iter()
                    .zip(&pushed)
                    .map(|(c, p)| Ok(p.sub(&low.eval_rf(c)?)))
                    .collect::<Result<_>>()?;
                let zero = diff.iter().all(Series::is_zero);
                (k - 1, series_vector_string(&diff, &spec.chart), zero)
            }
            Datum::Invariant(inv) => {
                let (r, ok) = frames[&jet_order(&spec.chart, inv)].residual(inv)?;
                let shown = if ok { "0".to_string() } else { r.to_string() };
                (k, shown, ok)
            }
        };
        Ok(Residual {
            id: id.clone(),
            kind: d.kind(),
            order,
            expr,
            vanished,
        })
    });
    let residuals: Vec<Residual> = results.into_iter().collect::<Result<_>>()?;
    Ok(MembershipReport {
        verdict: residuals.iter().all(|r| r.vanished),
        residuals,
    })
}

/// Exact residuals of the Lie-algebra conditions for a vector field.
#[derive(Clone, Debug)]
pub struct InfinitesimalReport {
    pub verdict: bool,
    /// `(label, residual)` in the order: fixed functions, bracket, volume.
    pub residuals: Vec<(String, String, bool)>,
}

/// `v·w = 0` for every fixed `w`, `[v, X] = 0` and `Lie_v ω ≡ 0` modulo `ctx`.
pub fn infinitesimal_membership(
    v: &VectorField,
    fixed: &[RationalFunction],
    volume: &DifferentialForm,
    ctx: &QuotientContext,
    frame_field: &VectorField,
) -> Result<InfinitesimalReport> {
    let chart = v.chart();
    if frame_field.chart() != chart || volume.chart() != chart || ctx.chart() != chart {
        return Err(Error::ChartMismatch("infinitesimal data on different charts".into()));
    }
    let mut residuals = Vec::new();
    for (i, w) in fixed.iter().enumerate() {
        let r = v.apply(w);
        residuals.push((format!("fixed[{i}] {w}"), r.to_string(), r.is_zero()));
    }
    let b = lie_bracket(v, frame_field)?;
    residuals.push(("bracket".into(), b.to_string(), b.is_zero()));
    let l = reduce_mod(&lie_derivative(v, volume)?, ctx)?;
    residuals.push(("volume".into(), l.to_string(), l.is_zero()));
    Ok(InfinitesimalReport {
        verdict: residuals.iter().all(|r| r.2),
        residuals,
    })
}

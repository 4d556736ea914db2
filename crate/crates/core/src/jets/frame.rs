use std::collections::HashMap;

use super::jetchart::{jet_order, multi_factorial, JetChart};
use super::map::{TruncatedMapJet, TIME};
use super::series::{Series, Truncation};
use crate::error::{Error, Result};
use crate::exactalg::{Chart, Monomial, Polynomial, Rational, RationalFunction};

/// Action of a map jet on frames: `φ · ψ = φ ∘ ψ` for the generic order-`r` frame
/// `ψ(ε) = p + Σ x_{j:α} ε^α / α!` at the source `p`.
///
/// `source` holds the jet coordinates of `ψ` (base values and free symbols),
/// `image` those of `φ ∘ ψ`; both are keyed by jet variable name.
pub struct FrameAction {
    pub chart: Chart,
    pub tr: Truncation,
    pub source: HashMap<String, RationalFunction>,
    pub image: HashMap<String, RationalFunction>,
}

pub fn frame_action(phi: &TruncatedMapJet, r: u32) -> Result<FrameAction> {
    if r > phi.order() {
        return Err(Error::OrderMismatch(format!(
            "frame order {r} exceeds jet order {}",
            phi.order()
        )));
    }
    let base = phi.base();
    let m = base.dim();
    let jc = JetChart::new(base, r);
    let tr = Truncation::new(m, r, phi.torder());
    let mut names: Vec<String> = (1..=m).map(|i| format!("ε{i}")).collect();
    if tr.time {
        names.push(TIME.to_string());
    }
    let sym0 = names.len();
    names.extend(jc.chart().names()[m..].iter().cloned());
    let chart = Chart::new(names)?;

    let mut psi: Vec<Polynomial> = vec![Polynomial::zero(&chart); m];
    for (idx, (j, alpha)) in jc.entries().iter().enumerate().skip(m) {
        let mono = Monomial::from_pairs(alpha.iter().map(|&a| (a as usize, 1)).chain([(sym0 + idx - m, 1)]));
        let c = Rational::new(1.into(), multi_factorial(alpha).into());
        psi[*j].add_term(mono, c);
    }
    let psi: Vec<Series> = psi.into_iter().map(|p| Series::new(tr, p)).collect();
    let time = tr.time.then(|| Series::var(tr, &chart, m));

    let mut source = HashMap::new();
    let mut image = HashMap::new();
    for (idx, name) in jc.chart().names().iter().enumerate() {
        let value = if idx < m {
            RationalFunction::constant(&chart, phi.source()[idx].clone())
        } else {
            RationalFunction::var(&chart, sym0 + idx - m)
        };
        source.insert(name.clone(), value);
    }
    for (j, comp) in phi.components().iter().enumerate() {
        let mut vals: Vec<Option<&Series>> = psi.iter().map(Some).collect();
        if comp.truncation().time {
            vals.push(time.as_ref());
        }
        let y = comp.poly().evaluate(&vals, &psi[0]).retruncate(tr);
        let mut groups: HashMap<Vec<u8>, Vec<(Monomial, Rational)>> = HashMap::new();
        for (mono, c) in y.poly().terms() {
            let mut alpha = Vec::new();
            let mut rest = Vec::new();
            for (i, e) in mono.iter() {
                if i < m {
                    alpha.extend(std::iter::repeat(i as u8).take(e as usize));
                } else {
                    rest.push((i, e));
                }
            }
            groups
                .entry(alpha)
                .or_default()
                .push((Monomial::from_pairs(rest), c.clone()));
        }
        for (jj, alpha) in jc.entries() {
            if *jj != j {
                continue;
            }
            let terms = groups.remove(alpha).unwrap_or_default();
            let f = Rational::from_integer(multi_factorial(alpha).into());
            let p = Polynomial::from_terms(&chart, terms).scale(&f);
            image.insert(
                super::jetchart::var_name(base, j, alpha),
                RationalFunction::from_poly(p),
            );
        }
    }
    Ok(FrameAction {
        chart,
        tr,
        source,
        image,
    })
}

impl FrameAction {
    fn bind(&self, f: &RationalFunction, values: &HashMap<String, RationalFunction>) -> Result<RationalFunction> {
        let names: Vec<&str> = f
            .support_vars()
            .into_iter()
            .map(|v| f.chart().name(v))
            .filter(|n| values.contains_key(*n))
            .collect();
        let bindings: Vec<(&str, &RationalFunction)> = names.iter().map(|n| (*n, &values[*n])).collect();
        if bindings.is_empty() {
            return Ok(f.clone());
        }
        f.substitute(&bindings)
    }

    /// `I(φ·ψ) − I(ψ)` and whether it vanishes (modulo `t^{N+1}` for timed jets).
    pub fn residual(&self, inv: &RationalFunction) -> Result<(RationalFunction, bool)> {
        let after = self.bind(inv, &self.image)?;
        let before = self.bind(inv, &self.source)?;
        let r = &after - &before;
        let vanished = match self.tr.t_index() {
            None => r.is_zero(),
            Some(_) => {
                let t = r.chart().index_of(TIME);
                match t {
                    None => r.is_zero(),
                    Some(t) => {
                        let den0 = r.denom().filter_terms(|m| m.exponent(t) == 0);
                        if den0.is_zero() {
                            return Err(Error::IrregularPoint(format!("{inv} is singular on the frame image")));
                        }
                        r.numer().terms().all(|(m, _)| m.exponent(t) > self.tr.tn)
                    }
                }
            }
        };
        Ok((r, vanished))
    }
}

/// Checks `I ∘ φ^(r) = I` for a differential invariant `I` of jet order `r`.
pub fn invariant_residual(phi: &TruncatedMapJet, inv: &RationalFunction) -> Result<(RationalFunction, bool)> {
    let r = jet_order(phi.base(), inv);
    frame_action(phi, r)?.residual(inv)
}

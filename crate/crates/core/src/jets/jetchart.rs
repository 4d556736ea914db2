use std::collections::HashMap;

use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::exactalg::{Chart, Polynomial, RationalFunction};
use crate::par;

/// Multi-index as a sorted multiset of parameter indices (0-based).
pub type MultiIndex = Vec<u8>;

/// Sorted multisets of size `d` drawn from `0..m`, in lexicographic order.
pub fn multi_indices(m: usize, d: usize) -> Vec<MultiIndex> {
    fn rec(m: usize, d: usize, start: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i as u8);
            rec(m, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, d, 0, &mut Vec::new(), &mut out);
    out
}

/// `α!` for a multiset.
pub fn multi_factorial(alpha: &[u8]) -> u64 {
    let mut f = 1u64;
    let mut run = 0u64;
    for (i, a) in alpha.iter().enumerate() {
        run = if i > 0 && alpha[i - 1] == *a { run + 1 } else { 1 };
        f *= run;
    }
    f
}

/// Jet coordinates `x_{j:α}` over a base chart, for `|α| ≤ order`.
///
/// Names are `x` for `α = 0` and `x:e1e2` for `δ_1 δ_2 x`; the order-k chart
/// is a prefix of the order-(k+1) chart.
#[derive(Clone, Debug)]
pub struct JetChart {
    base: Chart,
    order: u32,
    chart: Chart,
    entries: Vec<(usize, MultiIndex)>,
}

impl JetChart {
    pub fn new(base: &Chart, order: u32) -> Self {
        let m = base.dim();
        let mut entries: Vec<(usize, MultiIndex)> = (0..m).map(|j| (j, Vec::new())).collect();
        for d in 1..=order as usize {
            for alpha in multi_indices(m, d) {
                for j in 0..m {
                    entries.push((j, alpha.clone()));
                }
            }
        }
        let names: Vec<String> = entries.iter().map(|(j, a)| var_name(base, *j, a)).collect();
        let chart = Chart::new(names).expect("jet names are distinct");
        JetChart {
            base: base.clone(),
            order,
            chart,
            entries,
        }
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `m·(C(m+k, m) − 1)`, the number of jet variables of positive order.
    pub fn jet_var_count(&self) -> usize {
        self.entries.len() - self.base.dim()
    }

    pub fn entries(&self) -> &[(usize, MultiIndex)] {
        &self.entries
    }

    pub fn index(&self, j: usize, alpha: &[u8]) -> Option<usize> {
        self.chart.index_of(&var_name(&self.base, j, alpha))
    }

    pub fn var(&self, j: usize, alpha: &[u8]) -> RationalFunction {
        let i = self.index(j, alpha).expect("jet variable within order");
        RationalFunction::var(&self.chart, i)
    }
}

pub fn var_name(base: &Chart, j: usize, alpha: &[u8]) -> String {
    let mut s = base.name(j).to_string();
    if !alpha.is_empty() {
        s.push(':');
        for a in alpha {
            s.push('e');
            s.push_str(&(a + 1).to_string());
        }
    }
    s
}

/// Splits a jet name into base index and multi-index.
pub fn parse_var_name(base: &Chart, name: &str) -> Option<(usize, MultiIndex)> {
    let Some((head, tail)) = name.rsplit_once(':') else {
        return base.index_of(name).map(|j| (j, Vec::new()));
    };
    let j = base.index_of(head)?;
    let mut alpha = Vec::new();
    for part in tail.split('e').skip(1) {
        let n: usize = part.parse().ok()?;
        if n == 0 || n > base.dim() {
            return None;
        }
        alpha.push((n - 1) as u8);
    }
    if alpha.is_empty() || !tail.starts_with('e') {
        return None;
    }
    alpha.sort_unstable();
    if var_name(base, j, &alpha) != name {
        return None;
    }
    Some((j, alpha))
}

/// Highest `|α|` among the jet variables occurring in `f`.
pub fn jet_order(base: &Chart, f: &RationalFunction) -> u32 {
    f.support_vars()
        .into_iter()
        .filter_map(|v| parse_var_name(base, f.chart().name(v)))
        .map(|(_, a)| a.len() as u32)
        .max()
        .unwrap_or(0)
}

/// `δ_i f = Σ x_{j:α+ε_i} ∂f/∂x_{j:α}`; the result lives one order higher.
///
/// Names of `f` that are not jet variables over `base` are constants.
pub fn total_derivative(base: &Chart, f: &RationalFunction, i: usize) -> RationalFunction {
    let r = jet_order(base, f);
    let jc = JetChart::new(base, r + 1);
    let target = jc.chart().union(f.chart());
    let f = f.embed(&target).expect("union contains the chart");
    let mut acc = RationalFunction::zero(&target);
    for v in f.support_vars() {
        let Some((j, mut alpha)) = parse_var_name(base, target.name(v)) else {
            continue;
        };
        let d = f.diff(v);
        if d.is_zero() {
            continue;
        }
        alpha.push(i as u8);
        alpha.sort_unstable();
        let w = target.index_of(&var_name(base, j, &alpha)).expect("jet variable within order");
        acc = &acc + &d.mul_poly(&Polynomial::var(&target, w));
    }
    acc
}

/// `δ^α f`, applying the total derivatives in the order listed.
pub fn total_derivative_multi(base: &Chart, f: &RationalFunction, alpha: &[u8]) -> RationalFunction {
    alpha
        .iter()
        .fold(f.clone(), |g, &i| total_derivative(base, &g, i as usize))
}

/// `X^(k) = Σ_{i, |α| ≤ k} (δ^α v_i) ∂/∂x_{i:α}` on the order-k jet chart.
pub fn prolong(v: &VectorField, k: u32) -> VectorField {
    let base = v.chart();
    let jc = JetChart::new(base, k);
    let mut known: HashMap<(usize, MultiIndex), RationalFunction> = HashMap::new();
    for j in 0..base.dim() {
        known.insert((j, Vec::new()), v.component(j).clone());
    }
    for d in 1..=k as usize {
        let level: Vec<(usize, MultiIndex)> = jc
            .entries()
            .iter()
            .filter(|(_, a)| a.len() == d)
            .cloned()
            .collect();
        let comps = par::map(&level, |(j, alpha)| {
            let parent = &known[&(*j, alpha[..d - 1].to_vec())];
            total_derivative(base, parent, alpha[d - 1] as usize)
        });
        for (key, c) in level.into_iter().zip(comps) {
            known.insert(key, c);
        }
    }
    let comps = jc
        .entries()
        .iter()
        .map(|key| known.remove(key).expect("computed"))
        .collect();
    VectorField::new(jc.chart(), comps).expect("one component per jet variable")
}

/// Whether `X^(k) f = 0`; the prolongation order is raised to the jet order of `f` if needed.
pub fn check_invariant(v: &VectorField, f: &RationalFunction, k: u32) -> bool {
    let k = k.max(jet_order(v.chart(), f));
    prolong(v, k).apply(f).is_zero()
}

/// `λ = det(x_{i:ε_j}) · f(x)`, the frame invariant of the volume form `f dx_1 ∧ … ∧ dx_m`.
pub fn frame_volume_invariant(f: &RationalFunction, chart: &Chart) -> Result<RationalFunction> {
    if f.is_zero() {
        return Err(Error::ZeroFunction("volume density".into()));
    }
    let jc = JetChart::new(chart, 1);
    let m = chart.dim();
    let matrix: Vec<Vec<Polynomial>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| Polynomial::var(jc.chart(), jc.index(i, &[j as u8]).expect("order one")))
                .collect()
        })
        .collect();
    let det = determinant(&matrix);
    Ok(f * &RationalFunction::from_poly(det))
}

/// Cofactor expansion along the first row; entries share a chart.
pub fn determinant(a: &[Vec<Polynomial>]) -> Polynomial {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = Polynomial::zero(a[0][0].chart());
    for c in 0..n {
        if a[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &a[0][c] * &determinant(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_counts() {
        let base = Chart::of(&["x", "y"]);
        let jc = JetChart::new(&base, 2);
        assert_eq!(jc.jet_var_count(), 2 * (6 - 1));
        assert_eq!(var_name(&base, 0, &[0, 1]), "x:e1e2");
        assert_eq!(parse_var_name(&base, "y:e1e1"), Some((1, vec![0, 0])));
        assert_eq!(parse_var_name(&base, "y:e2e1"), None);
        assert_eq!(parse_var_name(&base, "y:e3"), None);
        assert!(JetChart::new(&base, 1).chart().is_prefix_of(jc.chart()));
        assert_eq!(multi_factorial(&[0, 0, 1]), 2);
        assert_eq!(multi_factorial(&[1, 1, 1]), 6);
    }

    #[test]
    fn total_derivative_examples() {
        let base = Chart::of(&["x"]);
        let x = RationalFunction::var(&base, 0);
        let d = total_derivative(&base, &x, 0);
        assert_eq!(d.to_string(), "x:e1");
        let c = RationalFunction::from_int(&base, 5);
        assert!(total_derivative(&base, &c, 0).is_zero());
        let jc = JetChart::new(&base, 1);
        let f = &jc.var(0, &[]) * &jc.var(0, &[0]);
        let jc2 = JetChart::new(&base, 2);
        let x1 = jc2.var(0, &[0]);
        let expected = &(&x1 * &x1) + &(&jc2.var(0, &[]) * &jc2.var(0, &[0, 0]));
        assert_eq!(total_derivative(&base, &f, 0), expected);
    }

    #[test]
    fn prolong_examples() {
        let base = Chart::of(&["x"]);
        let x = RationalFunction::var(&base, 0);
        let v = VectorField::new(&base, vec![&x * &x]).unwrap();
        let p = prolong(&v, 1);
        let jc = JetChart::new(&base, 1);
        let expected = (&jc.var(0, &[]) * &jc.var(0, &[0])).scale(&crate::exactalg::qi(2));
        assert_eq!(p.component(1), &expected);

        let dx = VectorField::coordinate(&base, 0);
        let p = prolong(&dx, 3);
        assert!(p.components()[1..].iter().all(RationalFunction::is_zero));
        assert!(!check_invariant(&dx, &x, 0));
    }

    #[test]
    fn volume_invariant() {
        let c1 = Chart::of(&["x"]);
        let one = RationalFunction::one(&c1);
        assert_eq!(frame_volume_invariant(&one, &c1).unwrap().to_string(), "x:e1");
        let inv_x = RationalFunction::var(&c1, 0).recip().unwrap();
        assert_eq!(frame_volume_invariant(&inv_x, &c1).unwrap().to_string(), "x:e1/x");
        let c2 = Chart::of(&["x", "y"]);
        let l = frame_volume_invariant(&RationalFunction::one(&c2), &c2).unwrap();
        let jc = JetChart::new(&c2, 1);
        let det = &(&jc.var(0, &[0]) * &jc.var(1, &[1])) - &(&jc.var(0, &[1]) * &jc.var(1, &[0]));
        assert_eq!(l, det);
        assert!(frame_volume_invariant(&RationalFunction::zero(&c1), &c1).is_err());
    }
}

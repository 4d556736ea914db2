//! The sixth Painlevé equation as a rational vector field on seven variables.

use num_integer::Integer;
use num_traits::Zero;

use crate::cartan::{
    exterior_derivative, interior_product, lie_derivative, reduce_mod, DifferentialForm,
    QuotientContext, VectorField,
};
use crate::error::{Error, Result};
use crate::exactalg::{q, qi, Chart, Rational, RationalFunction};
use crate::groupoid::{Datum, GroupoidSpec};
use crate::jets::TruncatedMapJet;
use crate::{par, Check};

pub const CHART7: [&str; 7] = ["x", "p", "q", "a", "b", "c", "e"];
pub const ALT_CHART7: [&str; 7] = ["x", "u", "v", "a", "b", "c", "e"];
pub const PARAMETERS: [&str; 4] = ["a", "b", "c", "e"];
/// Coordinates of the base `B` of `π`.
pub const PI_BASE: [&str; 5] = ["x", "a", "b", "c", "e"];

/// Default flow base point `(x, p, q, a, b, c, e)`, away from `x ∈ {0, 1}`.
pub fn default_base() -> Vec<Rational> {
    [2, 3, 1, 1, 1, 1, 1].iter().map(|&n| qi(n)).collect()
}

/// How the four parameter slots of the second chart are read from the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParameterPairing {
    /// Slot `i` receives `s_{perm[i]}² / 2`, where `s = (a, b, c, e)`.
    Squared([usize; 4]),
    /// Slot `i` receives `s_i` unchanged.
    Identity,
}

impl ParameterPairing {
    /// The displayed tuple: `(a, b, c, e) ↦ (c²/2, a²/2, b²/2, e²/2)`.
    pub const PRINTED: ParameterPairing = ParameterPairing::Squared([2, 0, 1, 3]);

    pub fn describe(&self) -> String {
        match self {
            ParameterPairing::Identity => "identity".into(),
            ParameterPairing::Squared(p) => {
                let s: Vec<String> = p.iter().map(|&i| format!("{}^2/2", PARAMETERS[i])).collect();
                format!("({})", s.join(", "))
            }
        }
    }
}

/// Both vector fields, the Hamiltonian and the conjugating map.
#[derive(Clone, Debug)]
pub struct PviModel {
    pub chart: Chart,
    pub alt: Chart,
    pub h: RationalFunction,
    /// `F` on the second chart.
    pub f: RationalFunction,
    pub x_field: VectorField,
    pub y_field: VectorField,
}

fn var(ch: &Chart, name: &str) -> RationalFunction {
    RationalFunction::var_named(ch, name).expect("model variable")
}

fn c(ch: &Chart, n: i64, d: i64) -> RationalFunction {
    RationalFunction::constant(ch, q(n, d))
}

fn hamiltonian(ch: &Chart) -> RationalFunction {
    let [x, p, qq, a, b, cc, e] = CHART7.map(|n| var(ch, n));
    let one = RationalFunction::one(ch);
    let pm1 = &p - &one;
    let pmx = &p - &x;
    let quartic = &(&(&p * &pm1) * &pmx) * &(&qq * &qq);
    let linear = &(&(&a * &(&pm1 * &pmx)) + &(&b * &(&p * &pmx))) + &(&(&e - &one) * &(&p * &pm1));
    let s = &(&(&a + &b) + &e) - &one;
    let constant = &(&(&(&s * &s) - &(&cc * &cc)) * &c(ch, 1, 4)) * &pmx;
    let bracket = &(&quartic - &(&linear * &qq)) + &constant;
    &bracket / &(&x * &(&x - &one))
}

fn painleve_f(ch: &Chart) -> RationalFunction {
    let [x, u, v, a, b, cc, e] = ALT_CHART7.map(|n| var(ch, n));
    let one = RationalFunction::one(ch);
    let inv = |f: &RationalFunction| f.recip().expect("nonzero");
    let um1 = &u - &one;
    let umx = &u - &x;
    let xm1 = &x - &one;
    let half = c(ch, 1, 2);
    let first = &(&half * &(&(&inv(&u) + &inv(&um1)) + &inv(&umx))) * &(&v * &v);
    let second = &(&(&inv(&x) + &inv(&xm1)) + &inv(&umx)) * &v;
    let lead = &(&(&u * &um1) * &umx) / &(&(&x * &x) * &(&xm1 * &xm1));
    let sq = |f: &RationalFunction| f * f;
    let bracket = &(&(&(&sq(&cc) * &half) - &(&(&sq(&a) * &half) * &(&x / &sq(&u))))
        + &(&(&sq(&b) * &half) * &(&xm1 / &sq(&um1))))
        + &(&(&(&(&one - &sq(&e)) * &half) * &(&x * &xm1)) / &sq(&umx));
    &(&first - &second) + &(&lead * &bracket)
}

/// Builds both fields; `X = ∂x + H_q ∂p − H_p ∂q` and `Y = ∂x + v ∂u + F ∂v`.
pub fn build_model() -> PviModel {
    let chart = Chart::of(&CHART7);
    let alt = Chart::of(&ALT_CHART7);
    let h = hamiltonian(&chart);
    let f = painleve_f(&alt);
    let zero = RationalFunction::zero(&chart);
    let x_field = VectorField::new(
        &chart,
        vec![
            RationalFunction::one(&chart),
            h.partial("q"),
            -&h.partial("p"),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero,
        ],
    )
    .expect("seven components");
    let zero = RationalFunction::zero(&alt);
    let y_field = VectorField::new(
        &alt,
        vec![
            RationalFunction::one(&alt),
            var(&alt, "v"),
            f.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero,
        ],
    )
    .expect("seven components");
    PviModel {
        chart,
        alt,
        h,
        f,
        x_field,
        y_field,
    }
}

impl PviModel {
    pub fn var(&self, name: &str) -> RationalFunction {
        var(&self.chart, name)
    }

    /// Images of the second-chart coordinates under the conjugating map.
    pub fn conj(&self, pairing: ParameterPairing) -> Vec<RationalFunction> {
        let mut out = vec![self.var("x"), self.var("p"), self.h.partial("q")];
        for slot in 0..4 {
            out.push(match pairing {
                ParameterPairing::Identity => self.var(PARAMETERS[slot]),
                ParameterPairing::Squared(perm) => {
                    let s = self.var(PARAMETERS[perm[slot]]);
                    (&s * &s).scale(&q(1, 2))
                }
            });
        }
        out
    }

    /// Re-derives the structural identities of the model.
    pub fn verify(&self) -> Vec<Check> {
        let x = &self.x_field;
        let hq = self.h.partial("q");
        let hp = self.h.partial("p");
        let mut out = vec![
            Check::new("X_x = 1", x.component(0), x.component(0).is_one()),
            Check::new("X_p - H_q", x.component(1) - &hq, x.component(1) == &hq),
            Check::new("X_q + H_p", x.component(2) + &hp, x.component(2) == &-&hp),
        ];
        let lead = self.quartic_coefficient();
        let expected = {
            let [_, p, _, _, _, _, _] = CHART7.map(|n| self.var(n));
            let one = RationalFunction::one(&self.chart);
            &(&p * &(&p - &one)) * &(&p - &self.var("x"))
        };
        out.push(Check::new("[q^2] x(x-1)H", &lead - &expected, lead == expected));
        out
    }

    /// Coefficient of `q²` in `x(x−1)H`.
    pub fn quartic_coefficient(&self) -> RationalFunction {
        let one = RationalFunction::one(&self.chart);
        let x = self.var("x");
        let g = &(&x * &(&x - &one)) * &self.h;
        g.partial("q").partial("q").scale(&q(1, 2))
    }

    pub fn dx(&self) -> DifferentialForm {
        DifferentialForm::dx(&self.chart, 0)
    }

    pub fn dp_dq(&self) -> DifferentialForm {
        DifferentialForm::from_terms(&self.chart, 2, [(vec![1, 2], RationalFunction::one(&self.chart))])
            .expect("valid indices")
    }

    pub fn base_context(&self) -> QuotientContext {
        QuotientContext::new(&self.chart, &PI_BASE).expect("model names")
    }
}

/// `Lie_X dx = 0`, `X·s = 0` for the parameters, the Cartan form of
/// `Lie_X(dp∧dq)` and its vanishing modulo `dx, da, db, dc, de`.
pub fn field_invariants(m: &PviModel) -> Result<Vec<Check>> {
    let x = &m.x_field;
    let mut out = Vec::new();
    let l = lie_derivative(x, &m.dx())?;
    out.push(Check::new("Lie_X(dx)", &l, l.is_zero()));
    out.push(Check::new("X.x - 1", &(&x.apply(&m.var("x")) - &RationalFunction::one(&m.chart)), x.apply(&m.var("x")).is_one()));
    for s in PARAMETERS {
        let r = x.apply(&m.var(s));
        out.push(Check::new(format!("X.{s}"), &r, r.is_zero()));
    }
    let w = m.dp_dq();
    let lw = lie_derivative(x, &w)?;
    let cartan = exterior_derivative(&interior_product(x, &w)?);
    let diff = lw.sub(&cartan)?;
    out.push(Check::new("Lie_X(dp^dq) - d i_X(dp^dq)", &diff, diff.is_zero()));
    let red = reduce_mod(&lw, &m.base_context())?;
    out.push(Check::new("Lie_X(dp^dq) mod dx,da,db,dc,de", &red, red.is_zero()));
    Ok(out)
}

/// `X·(w∘conj) − (Y·w)∘conj` for each coordinate `w` of the second chart.
pub fn check_conjugation(m: &PviModel, pairing: ParameterPairing) -> Result<Vec<Check>> {
    let images = m.conj(pairing);
    let bindings: Vec<(&str, &RationalFunction)> = ALT_CHART7.iter().copied().zip(images.iter()).collect();
    let idx: Vec<usize> = (0..7).collect();
    let res = par::map(&idx, |&i| -> Result<Check> {
        let lhs = m.x_field.apply(&images[i]);
        let yw = m.y_field.component(i);
        let rhs = if yw.support_vars().is_empty() {
            yw.clone()
        } else {
            yw.substitute(&bindings)?
        };
        let r = &lhs - &rhs;
        Ok(Check::new(ALT_CHART7[i], &r, r.is_zero()))
    });
    res.into_iter().collect()
}

/// Fixed `a, b, c, e`, preserved `dx` and `X`, and `dp∧dq` modulo the base.
pub fn malgrange_spec(m: &PviModel) -> GroupoidSpec {
    let mut spec = GroupoidSpec::new(&m.chart);
    for s in PARAMETERS {
        spec.push(s, Datum::Fixed(m.var(s))).expect("model chart");
    }
    spec.push("dx", Datum::Form(m.dx())).expect("model chart");
    spec.push("X", Datum::Field(m.x_field.clone())).expect("model chart");
    spec.push("dp^dq mod dx,da,db,dc,de", Datum::QuotientForm(m.dp_dq(), m.base_context()))
        .expect("model chart");
    spec
}

/// All four in `½ + ℤ`, or all four in `ℤ` with even sum.
pub fn picard_predicate(params: &[Rational; 4]) -> bool {
    let two = Rational::from_integer(2.into());
    let half_integer = params.iter().all(|s| {
        let d = s * &two;
        d.is_integer() && d.to_integer().is_odd()
    });
    let integer = params.iter().all(Rational::is_integer);
    let even = params
        .iter()
        .fold(Rational::zero(), |acc, s| acc + s)
        .to_integer()
        .is_even();
    half_integer || (integer && even)
}

/// The groupoid of one fiber with frozen parameters on the chart `(x, p, q)`:
/// preserved `dx`, preserved `X` and `dp∧dq` modulo `dx`.
pub fn fiber_spec(m: &PviModel, params: &[Rational; 4]) -> Result<GroupoidSpec> {
    if picard_predicate(params) {
        return Err(Error::PicardParameters(format!("{params:?}")));
    }
    let fiber = Chart::of(&CHART7[..3]);
    let vals: Vec<RationalFunction> = params
        .iter()
        .map(|s| RationalFunction::constant(&fiber, s.clone()))
        .collect();
    let mut bindings: Vec<(&str, &RationalFunction)> = PARAMETERS.iter().copied().zip(vals.iter()).collect();
    let coords: Vec<RationalFunction> = (0..3).map(|i| RationalFunction::var(&fiber, i)).collect();
    for (i, n) in CHART7[..3].iter().enumerate() {
        bindings.push((n, &coords[i]));
    }
    let comps = m.x_field.components()[..3]
        .iter()
        .map(|c| c.substitute(&bindings)?.embed(&fiber))
        .collect::<Result<Vec<_>>>()?;
    let x = VectorField::new(&fiber, comps)?;
    let dpdq = DifferentialForm::from_terms(&fiber, 2, [(vec![1, 2], RationalFunction::one(&fiber))])?;
    GroupoidSpec::new(&fiber)
        .with("dx", Datum::Form(DifferentialForm::dx(&fiber, 0)))?
        .with("X", Datum::Field(x))?
        .with("dp^dq mod dx", Datum::QuotientForm(dpdq, QuotientContext::new(&fiber, &["x"])?))
}

/// Flow jet of `X` at `base`, space order `k` and time order `n`.
pub fn flow_jet(m: &PviModel, base: &[Rational], k: u32, n: u32) -> Result<TruncatedMapJet> {
    crate::jets::flow_jet(&m.x_field, base, k, n)
}

/// A claimed symmetry of the family: a birational map with an integer
/// translation of the parameters.
#[derive(Clone, Debug)]
pub struct BacklundFixture {
    pub name: String,
    /// Images of `(x, p, q, a, b, c, e)` on the model chart.
    pub forward: Vec<RationalFunction>,
    pub shift: [i64; 4],
    pub inverse: Option<Vec<RationalFunction>>,
}

impl BacklundFixture {
    pub fn identity(m: &PviModel) -> Self {
        BacklundFixture {
            name: "identity".into(),
            forward: CHART7.iter().map(|n| m.var(n)).collect(),
            shift: [0; 4],
            inverse: None,
        }
    }
}

/// Results of the three conditions, plus the inverse when supplied.
#[derive(Clone, Debug)]
pub struct BacklundReport {
    pub x_fixed: Check,
    pub translation: Vec<Check>,
    pub transport: Vec<Check>,
    pub inverse: Option<Vec<Check>>,
}

impl BacklundReport {
    pub fn verdict(&self) -> bool {
        self.x_fixed.ok
            && self.translation.iter().all(|c| c.ok)
            && self.transport.iter().all(|c| c.ok)
            && self.inverse.as_ref().is_none_or(|v| v.iter().all(|c| c.ok))
    }
}

fn singular(name: &str, e: Error) -> Error {
    match e {
        Error::ZeroDenominator | Error::DivisionByZero => {
            Error::SingularFixture(format!("{name}: substitution is identically singular"))
        }
        other => other,
    }
}

/// Checks `x∘fx = x`, the claimed parameter translation, and
/// `X·(w∘fx) = (X·w)∘fx` for every coordinate `w`.
pub fn verify_backlund(m: &PviModel, fx: &BacklundFixture) -> Result<BacklundReport> {
    if fx.forward.len() != 7 {
        return Err(Error::InvalidArgument(format!("{}: expected 7 forward maps", fx.name)));
    }
    let forward: Vec<RationalFunction> = fx
        .forward
        .iter()
        .map(|f| f.embed(&m.chart.union(f.chart())))
        .collect::<Result<_>>()?;
    if forward.iter().any(|f| f.chart() != &m.chart) {
        return Err(Error::ChartMismatch(format!("{}: maps use names outside the model chart", fx.name)));
    }
    let x_res = &forward[0] - &m.var("x");
    let x_fixed = Check::new("x o fx - x", &x_res, x_res.is_zero());
    let translation = PARAMETERS
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let r = &(&forward[3 + i] - &m.var(s)) - &RationalFunction::from_int(&m.chart, fx.shift[i]);
            Check::new(format!("{s} o fx - {s} - ({})", fx.shift[i]), &r, r.is_zero())
        })
        .collect();
    let bindings: Vec<(&str, &RationalFunction)> = CHART7.iter().copied().zip(forward.iter()).collect();
    let idx: Vec<usize> = (0..7).collect();
    let transport = par::map(&idx, |&i| -> Result<Check> {
        let lhs = m.x_field.apply(&forward[i]);
        let xw = m.x_field.component(i);
        let rhs = if xw.support_vars().is_empty() {
            xw.clone()
        } else {
            xw.substitute(&bindings).map_err(|e| singular(&fx.name, e))?
        };
        let r = &lhs - &rhs;
        Ok(Check::new(format!("transport {}", CHART7[i]), &r, r.is_zero()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let inverse = match &fx.inverse {
        None => None,
        Some(inv) => Some(compose_checks(m, &forward, inv, &fx.name)?),
    };
    Ok(BacklundReport {
        x_fixed,
        translation,
        transport,
        inverse,
    })
}

fn compose_checks(
    m: &PviModel,
    forward: &[RationalFunction],
    inverse: &[RationalFunction],
    name: &str,
) -> Result<Vec<Check>> {
    if inverse.len() != 7 {
        return Err(Error::InvalidArgument(format!("{name}: expected 7 inverse maps")));
    }
    let fb: Vec<(&str, &RationalFunction)> = CHART7.iter().copied().zip(forward.iter()).collect();
    let mut out = Vec::new();
    for (i, g) in inverse.iter().enumerate() {
        let r = &g.substitute(&fb).map_err(|e| singular(name, e))? - &m.var(CHART7[i]);
        out.push(Check::new(format!("inverse o fx on {}", CHART7[i]), &r, r.is_zero()));
    }
    Ok(out)
}

/// The Picard test tuples with their expected classification.
pub fn picard_examples() -> Vec<([Rational; 4], bool)> {
    vec![
        ([q(1, 2), q(1, 2), q(1, 2), q(1, 2)], true),
        ([qi(0), qi(0), qi(1), qi(1)], true),
        ([q(1, 12), q(1, 12), q(1, 12), q(11, 12)], false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_identities() {
        let m = build_model();
        assert!(m.verify().iter().all(|c| c.ok));
        assert!(m.x_field.apply(&m.var("x")).is_one());
        assert!(m.x_field.apply(&m.var("a")).is_zero());
    }

    #[test]
    fn conjugation_pairings() {
        let m = build_model();
        let id = check_conjugation(&m, ParameterPairing::Identity).unwrap();
        assert!(id.iter().all(|c| c.ok), "{id:?}");
        let printed = check_conjugation(&m, ParameterPairing::PRINTED).unwrap();
        assert!(printed[0].ok && printed[1].ok);
        assert!(printed[3..].iter().all(|c| c.ok));
        assert!(!printed[2].ok);
    }

    #[test]
    fn no_squared_pairing_conjugates() {
        let m = build_model();
        let mut perms = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if a == b || a == c || b == c || a + b + c < 3 {
                        continue;
                    }
                    let d = 6 - a - b - c;
                    if d < 4 && d != a && d != b && d != c {
                        perms.push([a, b, c, d]);
                    }
                }
            }
        }
        assert_eq!(perms.len(), 24);
        for p in perms {
            let r = check_conjugation(&m, ParameterPairing::Squared(p)).unwrap();
            assert!(!r[2].ok, "{p:?}");
        }
    }

    #[test]
    fn picard() {
        for (t, expected) in picard_examples() {
            assert_eq!(picard_predicate(&t), expected);
        }
        assert!(!picard_predicate(&[qi(0), qi(0), qi(0), qi(1)]));
        assert!(!picard_predicate(&[q(1, 2), q(1, 2), q(1, 2), qi(1)]));
    }

    #[test]
    fn malgrange_shape() {
        let m = build_model();
        let spec = malgrange_spec(&m);
        use crate::groupoid::DatumKind::*;
        assert_eq!(
            [Fixed, Form, Field, QuotientForm].map(|k| spec.count(k)),
            [4, 1, 1, 1]
        );
        let cl = fiber_spec(&m, &[q(1, 12), q(1, 12), q(1, 12), q(11, 12)]).unwrap();
        assert_eq!(cl.count(Fixed), 0);
        assert_eq!(cl.chart().dim(), 3);
        let picard = [q(1, 2), q(1, 2), q(1, 2), q(1, 2)];
        assert!(matches!(fiber_spec(&m, &picard), Err(Error::PicardParameters(_))));
    }
}

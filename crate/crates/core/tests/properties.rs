//! Algebraic identities on randomized small instances.

use proptest::prelude::*;

use jetcert::cartan::{
    compose_with, exterior_derivative, interior_product, lie_bracket, lie_derivative, reduce_mod, wedge,
    DifferentialForm, QuotientContext, VectorField,
};
use jetcert::exactalg::{qi, Chart, Monomial, Polynomial, RationalFunction};
use jetcert::groupoid::{membership, Datum, GroupoidSpec};
use jetcert::jets::{jet_compose, jet_invert, prolong, total_derivative, FormJet, JetChart, TruncatedMapJet};
use jetcert::symbols::{graded_bracket, h_basis, h_dimension, transvection_solve, universe, HomogeneousField};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

/// Up to four terms, exponents at most `max_exp` per variable.
fn poly_terms(n: usize, max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -4i64..=4), 1..=4)
}

fn poly(chart: &Chart, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(chart, terms.iter().map(|(e, c)| (Monomial::from_dense(e), qi(*c))))
}

fn rf(chart: &Chart, num: &[(Vec<u32>, i64)], den: &[(Vec<u32>, i64)]) -> RationalFunction {
    let d = poly(chart, den);
    let d = if d.is_zero() { Polynomial::one(chart) } else { d };
    RationalFunction::new(poly(chart, num), d).expect("nonzero denominator")
}

fn field(chart: &Chart, comps: &[Vec<(Vec<u32>, i64)>]) -> VectorField {
    VectorField::new(chart, comps.iter().map(|t| RationalFunction::from_poly(poly(chart, t))).collect()).unwrap()
}

fn xyz() -> Chart {
    Chart::of(&["x", "y", "z"])
}

fn xy() -> Chart {
    Chart::of(&["x", "y"])
}

// ---------- exact arithmetic ----------

proptest! {
    #![proptest_config(config())]

    #[test]
    fn field_axioms(a in poly_terms(3, 2), b in poly_terms(3, 2), c in poly_terms(3, 1), d in poly_terms(3, 1)) {
        let ch = xyz();
        let f = rf(&ch, &a, &c);
        let g = rf(&ch, &b, &d);
        let h = rf(&ch, &c, &a);
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        if !f.is_zero() {
            prop_assert!((&f * &f.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn leibniz_and_schwarz(a in poly_terms(3, 2), b in poly_terms(3, 2), c in poly_terms(3, 1)) {
        let ch = xyz();
        let f = rf(&ch, &a, &c);
        let g = rf(&ch, &b, &a);
        for i in 0..3 {
            prop_assert_eq!((&f * &g).diff(i), &(&f.diff(i) * &g) + &(&f * &g.diff(i)));
            for j in 0..3 {
                prop_assert_eq!(f.diff(i).diff(j), f.diff(j).diff(i));
            }
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        a in poly_terms(2, 2),
        s in poly_terms(2, 1),
        t in poly_terms(2, 1),
        px in -3i64..=3,
        py in -3i64..=3,
    ) {
        let ch = xy();
        let f = RationalFunction::from_poly(poly(&ch, &a));
        let (u, v) = (RationalFunction::from_poly(poly(&ch, &s)), RationalFunction::from_poly(poly(&ch, &t)));
        let composite = f.substitute(&[("x", &u), ("y", &v)]).unwrap();
        let pt = [qi(px), qi(py)];
        let inner = [u.eval_dense(&pt).unwrap(), v.eval_dense(&pt).unwrap()];
        prop_assert_eq!(composite.eval_dense(&pt).unwrap(), f.eval_dense(&inner).unwrap());
        // Simultaneous: swapping x and y twice is the identity.
        let (x, y) = (RationalFunction::var(&ch, 0), RationalFunction::var(&ch, 1));
        let swapped = f.substitute(&[("x", &y), ("y", &x)]).unwrap();
        prop_assert_eq!(swapped.substitute(&[("x", &y), ("y", &x)]).unwrap(), f);
    }
}

// ---------- Cartan calculus ----------

fn one_form(ch: &Chart, cs: &[Vec<(Vec<u32>, i64)>]) -> DifferentialForm {
    let terms = cs.iter().enumerate().map(|(i, t)| (vec![i], RationalFunction::from_poly(poly(ch, t))));
    DifferentialForm::from_terms(ch, 1, terms).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn jacobi_identity(
        u in prop::collection::vec(poly_terms(3, 2), 3),
        v in prop::collection::vec(poly_terms(3, 2), 3),
        w in prop::collection::vec(poly_terms(3, 2), 3),
    ) {
        let ch = xyz();
        let (u, v, w) = (field(&ch, &u), field(&ch, &v), field(&ch, &w));
        let br = |a: &VectorField, b: &VectorField| lie_bracket(a, b).unwrap();
        let sum = br(&u, &br(&v, &w)).add(&br(&v, &br(&w, &u))).unwrap().add(&br(&w, &br(&u, &v))).unwrap();
        prop_assert!(sum.is_zero());
        prop_assert!(br(&u, &v).add(&br(&v, &u)).unwrap().is_zero());
    }

    #[test]
    fn cartan_formula_and_d_squared(
        v in prop::collection::vec(poly_terms(3, 2), 3),
        a in prop::collection::vec(poly_terms(3, 2), 3),
        b in prop::collection::vec(poly_terms(3, 1), 3),
    ) {
        let ch = xyz();
        let v = field(&ch, &v);
        let alpha = one_form(&ch, &a);
        let two = wedge(&alpha, &one_form(&ch, &b)).unwrap();
        for w in [&alpha, &two] {
            let via_cartan = exterior_derivative(&interior_product(&v, w).unwrap())
                .add(&interior_product(&v, &exterior_derivative(w)).unwrap())
                .unwrap();
            prop_assert_eq!(lie_derivative(&v, w).unwrap(), via_cartan);
            prop_assert!(exterior_derivative(&exterior_derivative(w)).is_zero());
        }
    }

    #[test]
    fn reduce_mod_is_idempotent(a in prop::collection::vec(poly_terms(3, 2), 3), b in prop::collection::vec(poly_terms(3, 2), 3)) {
        let ch = xyz();
        let w = wedge(&one_form(&ch, &a), &one_form(&ch, &b)).unwrap();
        for dropped in [vec![], vec!["x"], vec!["x", "z"]] {
            let ctx = QuotientContext::new(&ch, &dropped).unwrap();
            let once = reduce_mod(&w, &ctx).unwrap();
            prop_assert_eq!(reduce_mod(&once, &ctx).unwrap(), once.clone());
            prop_assert!(reduce_mod(&w.sub(&once).unwrap(), &ctx).unwrap().is_zero());
        }
    }
}

// ---------- jets ----------

fn jet_function(base: &Chart, terms: &[(Vec<u32>, i64)]) -> RationalFunction {
    let jc = JetChart::new(base, 1);
    RationalFunction::from_poly(poly(jc.chart(), terms))
}

/// `(a x + P(y), y)` followed by `(x, y + Q(x))`; the Jacobian determinant is the constant `a`.
fn near_identity(ch: &Chart, a: i64, p: &[(Vec<u32>, i64)], q: &[(Vec<u32>, i64)]) -> Vec<RationalFunction> {
    let (x, y) = (RationalFunction::var(ch, 0), RationalFunction::var(ch, 1));
    let in_y: Vec<(Vec<u32>, i64)> = p.iter().map(|(e, c)| (vec![0, e[1]], *c)).collect();
    let in_x: Vec<(Vec<u32>, i64)> = q.iter().map(|(e, c)| (vec![e[0], 0], *c)).collect();
    let first = [&x.scale(&qi(a)) + &RationalFunction::from_poly(poly(ch, &in_y)), y.clone()];
    let second = [x.clone(), &y + &RationalFunction::from_poly(poly(ch, &in_x))];
    second.iter().map(|c| compose_with(c, ch, &first).unwrap()).collect()
}

/// `F^* w` for a 1-form, computed from the coordinate formula.
fn exact_pullback(ch: &Chart, map: &[RationalFunction], w: &DifferentialForm) -> DifferentialForm {
    let mut acc = DifferentialForm::zero(ch, 1);
    for (i, f) in map.iter().enumerate() {
        let coef = compose_with(&w.coefficient(&[i]), ch, map).unwrap();
        let df = exterior_derivative(&DifferentialForm::function(ch, f.clone()));
        acc = acc.add(&df.scale(&coef)).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn total_derivatives_commute(t in poly_terms(6, 2)) {
        let base = xy();
        let f = jet_function(&base, &t);
        let a = total_derivative(&base, &total_derivative(&base, &f, 0), 1);
        let b = total_derivative(&base, &total_derivative(&base, &f, 1), 0);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn prolongation_commutes_with_total_derivatives(v in prop::collection::vec(poly_terms(2, 2), 2), t in poly_terms(6, 2)) {
        let base = xy();
        let v = field(&base, &v);
        let f = jet_function(&base, &t);
        for i in 0..2 {
            let lhs = prolong(&v, 2).apply(&total_derivative(&base, &f, i));
            let rhs = total_derivative(&base, &prolong(&v, 1).apply(&f), i);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn prolongation_respects_brackets(v in prop::collection::vec(poly_terms(2, 2), 2), w in prop::collection::vec(poly_terms(2, 2), 2)) {
        let base = xy();
        let (v, w) = (field(&base, &v), field(&base, &w));
        let lhs = prolong(&lie_bracket(&v, &w).unwrap(), 2);
        let rhs = lie_bracket(&prolong(&v, 2), &prolong(&w, 2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_with_inverse_is_identity(
        a in prop_oneof![Just(-2i64), Just(1), Just(3)],
        p in poly_terms(2, 2),
        q in poly_terms(2, 2),
        px in -2i64..=2,
        py in -2i64..=2,
        k in 1u32..=3,
    ) {
        let ch = xy();
        let map = near_identity(&ch, a, &p, &q);
        let f = TruncatedMapJet::from_map(&ch, &[qi(px), qi(py)], k, &map).unwrap();
        let g = jet_invert(&f).unwrap();
        prop_assert!(jet_compose(&g, &f).unwrap().is_identity());
        prop_assert!(jet_compose(&f, &g).unwrap().is_identity());
    }

    #[test]
    fn pullback_is_functorial(
        p in poly_terms(2, 2),
        q in poly_terms(2, 2),
        r in poly_terms(2, 2),
        s in poly_terms(2, 2),
        w in prop::collection::vec(poly_terms(2, 2), 2),
        px in -2i64..=2,
        py in -2i64..=2,
    ) {
        let ch = xy();
        let k = 3;
        let f = near_identity(&ch, 1, &p, &q);
        let g = near_identity(&ch, 2, &r, &s);
        let w = one_form(&ch, &w);
        let src = [qi(px), qi(py)];
        let jf = TruncatedMapJet::from_map(&ch, &src, k, &f).unwrap();
        let jg = TruncatedMapJet::from_map(&ch, &jf.target_point(), k, &g).unwrap();
        let oracle = exact_pullback(&ch, &f, &exact_pullback(&ch, &g, &w));
        let expanded = FormJet::expand(&oracle, &src, k - 1, None).unwrap();
        prop_assert!(jf.pullback_form(&exact_pullback(&ch, &g, &w)).unwrap().sub(&expanded).is_zero());
        let composite = jet_compose(&jg, &jf).unwrap();
        prop_assert!(composite.pullback_form(&w).unwrap().sub(&expanded).is_zero());
    }
}

// ---------- groupoid membership ----------

fn area_spec(ch: &Chart) -> GroupoidSpec {
    GroupoidSpec::new(ch)
        .with("dx^dy", Datum::Form(DifferentialForm::volume(ch, RationalFunction::one(ch))))
        .unwrap()
}

/// Exactly area preserving.
fn area_map(ch: &Chart, p: &[(Vec<u32>, i64)], q: &[(Vec<u32>, i64)]) -> Vec<RationalFunction> {
    near_identity(ch, 1, p, q)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn identity_is_a_member(px in -3i64..=3, py in -3i64..=3, k in 1u32..=3) {
        let ch = xy();
        let id = TruncatedMapJet::identity(&ch, &[qi(px), qi(py)], k, None);
        prop_assert!(membership(&area_spec(&ch), &id).unwrap().verdict);
    }

    #[test]
    fn membership_is_closed_under_composition(
        p in poly_terms(2, 2), q in poly_terms(2, 2), r in poly_terms(2, 2), s in poly_terms(2, 2),
        px in -2i64..=2, py in -2i64..=2,
    ) {
        let ch = xy();
        let spec = area_spec(&ch);
        let jf = TruncatedMapJet::from_map(&ch, &[qi(px), qi(py)], 3, &area_map(&ch, &p, &q)).unwrap();
        let jg = TruncatedMapJet::from_map(&ch, &jf.target_point(), 3, &area_map(&ch, &r, &s)).unwrap();
        prop_assert!(membership(&spec, &jf).unwrap().verdict);
        prop_assert!(membership(&spec, &jg).unwrap().verdict);
        prop_assert!(membership(&spec, &jet_compose(&jg, &jf).unwrap()).unwrap().verdict);
    }

    #[test]
    fn membership_is_monotone_in_the_order(
        p in poly_terms(2, 2), q in poly_terms(2, 2), c in prop_oneof![Just(0i64), Just(1), Just(-3)],
        px in -2i64..=2, py in -2i64..=2,
    ) {
        let ch = xy();
        let spec = area_spec(&ch);
        // Bending the first component by (1 + c x) generally breaks area preservation.
        let map = area_map(&ch, &p, &q);
        let x = RationalFunction::var(&ch, 0);
        let stretch = &RationalFunction::one(&ch) + &x.scale(&qi(c));
        let bent = vec![&map[0] * &stretch, map[1].clone()];
        let phi = TruncatedMapJet::from_map(&ch, &[qi(px), qi(py)], 3, &bent).unwrap();
        let verdicts: Vec<bool> = (1..=3).map(|j| membership(&spec, &phi.truncate(j)).unwrap().verdict).collect();
        // Passing at order j implies passing at every lower order.
        for j in 1..3 {
            prop_assert!(!verdicts[j] || verdicts[j - 1], "{:?}", verdicts);
        }
        if c == 0 {
            prop_assert!(verdicts.iter().all(|&v| v));
        }
    }
}

// ---------- symbols ----------

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn h_dimension_matches_the_count_of_divergence_free_fields() {
    for m in 2..=4 {
        for k in 0..=3i64 {
            let d = k as usize + 1;
            let fields = m * binom(d + m - 1, m - 1);
            let divergences = binom(d - 1 + m - 1, m - 1);
            assert_eq!(h_dimension(m, k), fields - divergences, "m={m} k={k}");
            if m <= 3 {
                assert_eq!(h_basis(m, k).unwrap().dimension(), fields - divergences);
            }
        }
    }
}

#[test]
fn transvection_solves_every_basis_element() {
    for m in 2..=3 {
        for k in 0..=2 {
            for x in h_basis(m, k).unwrap().basis {
                let ch = x.chart().clone();
                let d1 = HomogeneousField::coordinate(&ch, m, 0, Polynomial::one(&ch)).unwrap();
                let y = transvection_solve(&x).unwrap();
                assert_eq!(graded_bracket(&d1, &y).unwrap(), x);
                assert!(y.divergence().is_zero());
            }
        }
    }
}

/// Two components, each a list of (power of x1, coefficient); x2 takes the rest of the x-degree.
fn homogeneous(d: u32) -> impl Strategy<Value = Vec<Vec<(u32, i64)>>> {
    prop::collection::vec(prop::collection::vec((0..=d, -3i64..=3), 1..=3), 2)
}

fn build_homogeneous(ch: &Chart, d: u32, l: u32, comps: &[Vec<(u32, i64)>]) -> HomogeneousField {
    let polys = comps
        .iter()
        .map(|terms| Polynomial::from_terms(ch, terms.iter().map(|(a, c)| (Monomial::from_dense(&[*a, d - a, l]), qi(*c)))))
        .collect();
    HomogeneousField::new(ch, 2, polys).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn graded_bracket_laws(
        (du, lu) in (1u32..=3, 0u32..=1),
        (dv, lv) in (1u32..=3, 0u32..=1),
        (dw, lw) in (1u32..=2, 0u32..=1),
        cu in homogeneous(3), cv in homogeneous(3), cw in homogeneous(2),
    ) {
        let ch = universe(2, 1);
        let clamp = |c: &[Vec<(u32, i64)>], d: u32| -> Vec<Vec<(u32, i64)>> {
            c.iter().map(|t| t.iter().map(|(a, k)| ((*a).min(d), *k)).collect()).collect()
        };
        let u = build_homogeneous(&ch, du, lu, &clamp(&cu, du));
        let v = build_homogeneous(&ch, dv, lv, &clamp(&cv, dv));
        let w = build_homogeneous(&ch, dw, lw, &clamp(&cw, dw));
        let br = |a: &HomogeneousField, b: &HomogeneousField| graded_bracket(a, b).unwrap();
        prop_assert!(br(&u, &v).add(&br(&v, &u)).unwrap().is_zero());
        let jac = br(&u, &br(&v, &w)).add(&br(&v, &br(&w, &u))).unwrap().add(&br(&w, &br(&u, &v))).unwrap();
        prop_assert!(jac.is_zero());
        let uv = br(&u, &v);
        if let (Some((ku, su)), Some((kv, sv)), Some((k, s))) = (u.bidegree(), v.bidegree(), uv.bidegree()) {
            prop_assert_eq!((k, s), (ku + kv, su + sv));
        }
    }

    #[test]
    fn transvection_is_linear(coefs in prop::collection::vec(-3i64..=3, 1..=8), k in 0i64..=2) {
        let space = h_basis(2, k).unwrap();
        let ch = space.basis[0].chart().clone();
        let mut x = HomogeneousField::zero(&ch, 2);
        let mut y = HomogeneousField::zero(&ch, 2);
        for (b, c) in space.basis.iter().zip(&coefs) {
            x = x.add(&b.scale(&qi(*c))).unwrap();
            y = y.add(&transvection_solve(b).unwrap().scale(&qi(*c))).unwrap();
        }
        prop_assert_eq!(transvection_solve(&x).unwrap(), y.clone());
        let d1 = HomogeneousField::coordinate(&ch, 2, 0, Polynomial::one(&ch)).unwrap();
        prop_assert_eq!(graded_bracket(&d1, &y).unwrap(), x);
    }
}

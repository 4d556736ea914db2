use std::time::Instant;

use jetcert::exactalg::{q, qi, RationalFunction};
use jetcert::groupoid::membership;
use jetcert::jets::jet_compose;
use jetcert::painleve::*;
use jetcert::Error;

fn v(m: &PviModel, n: &str) -> RationalFunction {
    m.var(n)
}

/// Okamoto's generating reflections, in the coordinates of the model.
fn reflections(m: &PviModel) -> Vec<(&'static str, Vec<RationalFunction>)> {
    let [x, p, qq, a, b, c, e] = CHART7.map(|n| v(m, n));
    let one = RationalFunction::one(&m.chart);
    let base = || vec![x.clone(), p.clone(), qq.clone(), a.clone(), b.clone(), c.clone(), e.clone()];
    let mut s0 = base();
    s0[2] = &qq - &(&e / &(&p - &x));
    s0[6] = -&e;
    let mut s1 = base();
    s1[5] = -&c;
    let mut s3 = base();
    s3[2] = &qq - &(&b / &(&p - &one));
    s3[4] = -&b;
    let mut s4 = base();
    s4[2] = &qq - &(&a / &p);
    s4[3] = -&a;
    let shift = (&(&(&(&a + &b) + &c) + &e) - &one).scale(&q(-1, 2));
    let mut s2 = base();
    s2[1] = &p + &(&shift / &qq);
    for i in 3..7 {
        s2[i] = &s2[i] + &shift;
    }
    vec![("s0", s0), ("s1", s1), ("s2", s2), ("s3", s3), ("s4", s4)]
}

#[test]
fn field_invariants_hold_exactly() {
    let m = build_model();
    let checks = field_invariants(&m).unwrap();
    assert_eq!(checks.len(), 8);
    for c in checks {
        assert!(c.ok, "{} = {}", c.id, c.residual);
    }
}

#[test]
fn quartic_part_of_hamiltonian() {
    let m = build_model();
    let p = v(&m, "p");
    let one = RationalFunction::one(&m.chart);
    let expected = &(&p * &(&p - &one)) * &(&p - &v(&m, "x"));
    assert_eq!(m.quartic_coefficient(), expected);
}

#[test]
fn flow_jet_is_in_the_malgrange_groupoid() {
    let m = build_model();
    let spec = malgrange_spec(&m);
    let start = Instant::now();
    for (k, n) in [(1, 1), (2, 2), (1, 4), (2, 4)] {
        let phi = flow_jet(&m, &default_base(), k, n).unwrap();
        assert!(phi.is_moving());
        let report = membership(&spec, &phi).unwrap();
        assert!(report.verdict, "k={k} N={n}\n{report}");
    }
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn flow_fails_a_perturbed_spec() {
    // dp is not preserved by the flow; the residual is the time derivative term.
    let m = build_model();
    let spec = jetcert::groupoid::GroupoidSpec::new(&m.chart)
        .with("dp", jetcert::groupoid::Datum::Form(jetcert::cartan::DifferentialForm::dx(&m.chart, 1)))
        .unwrap();
    let phi = flow_jet(&m, &default_base(), 1, 1).unwrap();
    assert!(!membership(&spec, &phi).unwrap().verdict);
}

#[test]
fn flow_reversal_is_inverse() {
    let m = build_model();
    let (k, n) = (1, 2);
    let fwd = flow_jet(&m, &default_base(), k, n).unwrap();
    let back = flow_jet(&m, &default_base(), k + n, n).unwrap().reverse_time();
    assert!(jet_compose(&back, &fwd).unwrap().is_identity());
}

#[test]
fn flow_rejects_singular_fibers() {
    let m = build_model();
    let mut base = default_base();
    base[0] = qi(1);
    assert!(matches!(flow_jet(&m, &base, 1, 1), Err(Error::IrregularPoint(_))));
}

#[test]
fn reflections_transport_the_field_but_are_not_translations() {
    let m = build_model();
    for (name, forward) in reflections(&m) {
        let fx = BacklundFixture {
            name: name.into(),
            forward,
            shift: [0; 4],
            inverse: None,
        };
        let r = verify_backlund(&m, &fx).unwrap();
        assert!(r.x_fixed.ok, "{name}");
        assert!(r.transport.iter().all(|c| c.ok), "{name}: {:?}", r.transport);
        let translated = r.translation.iter().all(|c| c.ok);
        // Each reflection flips one parameter's sign or shifts all four by a
        // parameter-dependent amount; no integer translation does either.
        assert!(!translated, "{name}");
        assert!(!r.verdict());
    }
}

#[test]
fn reflections_are_involutions() {
    let m = build_model();
    for (name, forward) in reflections(&m) {
        let fx = BacklundFixture {
            name: name.into(),
            forward: forward.clone(),
            shift: [0; 4],
            inverse: Some(forward),
        };
        let r = verify_backlund(&m, &fx).unwrap();
        assert!(r.inverse.unwrap().iter().all(|c| c.ok), "{name}");
    }
}

#[test]
fn parameter_shift_alone_is_not_a_symmetry() {
    let m = build_model();
    let mut fx = BacklundFixture::identity(&m);
    assert!(verify_backlund(&m, &fx).unwrap().verdict());
    fx.forward[3] = &v(&m, "a") + &RationalFunction::one(&m.chart);
    fx.shift = [1, 0, 0, 0];
    let r = verify_backlund(&m, &fx).unwrap();
    assert!(r.x_fixed.ok);
    assert!(r.translation.iter().all(|c| c.ok));
    assert!(!r.transport.iter().all(|c| c.ok));
    assert!(!r.verdict());
}

#[test]
fn singular_fixture_is_an_error() {
    let m = build_model();
    let mut fx = BacklundFixture::identity(&m);
    fx.forward[0] = RationalFunction::one(&m.chart);
    assert!(matches!(verify_backlund(&m, &fx), Err(Error::SingularFixture(_))));
}

#[test]
fn algebraic_solution_parameters_are_not_picard() {
    let theta = [q(1, 12), q(1, 12), q(1, 12), q(11, 12)];
    assert!(!picard_predicate(&theta));
    let m = build_model();
    let spec = fiber_spec(&m, &theta).unwrap();
    let phi = jetcert::jets::TruncatedMapJet::identity(spec.chart(), &[qi(2), qi(3), qi(1)], 2, None);
    assert!(membership(&spec, &phi).unwrap().verdict);
}

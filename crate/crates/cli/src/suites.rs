//! The named check suites.

use std::fmt;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jetcert::cartan::{lie_bracket, DifferentialForm, VectorField};
use jetcert::exactalg::{q, qi, Chart, Polynomial, Rational, RationalFunction};
use jetcert::groupoid::{membership, Datum, GroupoidSpec, MembershipReport};
use jetcert::jets::{
    check_invariant, frame_volume_invariant, prolong, total_derivative, JetChart, TruncatedMapJet,
};
use jetcert::painleve::{
    build_model, check_conjugation, default_base, flow_jet, malgrange_spec, field_invariants,
    verify_backlund, ParameterPairing, CHART7,
};
use jetcert::symbols::{
    bracket_surjectivity_check, graded_bracket, h_basis, transvection_solve, HomogeneousField,
};

use crate::fixture::{fixture_paths, load_fixture};
use crate::report::{SuiteReport, Table};

pub const SUITES: [&str; 10] = [
    "pvi-invariants",
    "pvi-conjugation",
    "pvi-flow-membership",
    "airy",
    "volume-groupoid",
    "integrable",
    "kiso-transvection",
    "kiso-surjectivity",
    "jets-core",
    "backlund-fixtures",
];

pub const DEFAULT_FIXTURES: &str = "fixtures/backlund";
/// Seed of the randomized jets-core instances.
pub const JETS_CORE_SEED: u64 = 0x6a65_7463;
pub const JETS_CORE_INSTANCES: usize = 50;

/// Command-line options; `None` means the suite default.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: Option<u32>,
    pub torder: Option<u32>,
    /// `name=value` pairs separated by commas.
    pub base: Option<String>,
    pub m: Option<usize>,
    pub q: Option<usize>,
    pub kmax: Option<i64>,
    pub fixtures: Option<PathBuf>,
}

/// Invalid options, unreadable inputs or an algebra error; distinct from a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteError(pub String);

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SuiteError {}

impl From<jetcert::Error> for SuiteError {
    fn from(e: jetcert::Error) -> Self {
        SuiteError(e.to_string())
    }
}

type SuiteResult = Result<SuiteReport, SuiteError>;

pub fn run_suite(name: &str, opts: &Options) -> SuiteResult {
    match name {
        "pvi-invariants" => pvi_invariants(),
        "pvi-conjugation" => pvi_conjugation(),
        "pvi-flow-membership" => pvi_flow_membership(opts),
        "airy" => airy(),
        "volume-groupoid" => volume_groupoid(opts),
        "integrable" => integrable(opts),
        "kiso-transvection" => kiso_transvection(opts),
        "kiso-surjectivity" => kiso_surjectivity(opts),
        "jets-core" => jets_core(),
        "backlund-fixtures" => backlund_fixtures(opts),
        other => Err(SuiteError(format!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")))),
    }
}

/// Values for `names` from `"n=v,..."`, falling back to `defaults`.
pub fn parse_base(text: Option<&str>, names: &[&str], defaults: &[Rational]) -> Result<Vec<Rational>, SuiteError> {
    let mut out = defaults.to_vec();
    let Some(text) = text else {
        return Ok(out);
    };
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (n, v) = part
            .split_once('=')
            .ok_or_else(|| SuiteError(format!("base entry '{part}' is not name=value")))?;
        let i = names
            .iter()
            .position(|x| *x == n.trim())
            .ok_or_else(|| SuiteError(format!("base names unknown coordinate '{}'", n.trim())))?;
        out[i] = v
            .trim()
            .parse::<Rational>()
            .map_err(|_| SuiteError(format!("base value '{}' is not a rational number", v.trim())))?;
    }
    Ok(out)
}

fn point_text(names: &[&str], values: &[Rational]) -> String {
    names
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn positive_order(o: Option<u32>, default: u32, what: &str) -> Result<u32, SuiteError> {
    match o.unwrap_or(default) {
        0 => Err(SuiteError(format!("{what} must be at least 1"))),
        k => Ok(k),
    }
}

fn push_membership(r: &mut SuiteReport, prefix: &str, m: &MembershipReport) {
    for res in &m.residuals {
        r.push(
            format!("{prefix}{} [{}, order {}]", res.id, res.kind.as_str(), res.order),
            res.vanished,
            &res.expr,
        );
    }
}

fn failing_summary(m: &MembershipReport) -> String {
    let bad: Vec<String> = m
        .residuals
        .iter()
        .filter(|r| !r.vanished)
        .map(|r| format!("{}: {}", r.id, r.expr))
        .collect();
    if bad.is_empty() {
        "0".into()
    } else {
        bad.join("; ")
    }
}

fn pvi_invariants() -> SuiteResult {
    let m = build_model();
    let mut r = SuiteReport::new("pvi-invariants");
    r.extend(m.verify());
    r.extend(field_invariants(&m)?);
    Ok(r)
}

fn pvi_conjugation() -> SuiteResult {
    let m = build_model();
    let mut r = SuiteReport::new("pvi-conjugation");
    r.param("pairing", ParameterPairing::Identity.describe());
    for c in check_conjugation(&m, ParameterPairing::Identity)? {
        r.push(format!("X.(w o conj) - (Y.w) o conj, w = {}", c.id), c.ok, c.residual);
    }
    // The squared pairing as displayed breaks only the v equation; the report pins that down.
    let printed = check_conjugation(&m, ParameterPairing::PRINTED)?;
    let failing: Vec<&str> = printed.iter().filter(|c| !c.ok).map(|c| c.id.as_str()).collect();
    r.push(
        format!("{} differs only in v", ParameterPairing::PRINTED.describe()),
        failing == ["v"],
        format!("nonzero residuals: {}", failing.join(" ")),
    );
    Ok(r)
}

fn pvi_flow_membership(opts: &Options) -> SuiteResult {
    let k = positive_order(opts.order, 2, "--order")?;
    let n = positive_order(opts.torder, 4, "--torder")?;
    let base = parse_base(opts.base.as_deref(), &CHART7, &default_base())?;
    let m = build_model();
    let mut r = SuiteReport::new("pvi-flow-membership");
    r.param("order", k);
    r.param("torder", n);
    r.param("base", point_text(&CHART7, &base));
    let phi = flow_jet(&m, &base, k, n)?;
    let report = membership(&malgrange_spec(&m), &phi)?;
    push_membership(&mut r, "", &report);
    Ok(r)
}

/// The Airy fundamental system on `x, u11, u12, u21, u22`.
pub fn airy_field() -> VectorField {
    let ch = Chart::of(&["x", "u11", "u12", "u21", "u22"]);
    let v = |i| RationalFunction::var(&ch, i);
    let comps = vec![RationalFunction::one(&ch), v(3), v(4), &v(0) * &v(1), &v(0) * &v(2)];
    VectorField::new(&ch, comps).expect("five components")
}

fn airy() -> SuiteResult {
    let field = airy_field();
    let ch = field.chart().clone();
    let v = |i| RationalFunction::var(&ch, i);
    let delta = &(&v(1) * &v(4)) - &(&v(2) * &v(3));
    let mut r = SuiteReport::new("airy");
    let x0 = prolong(&field, 0).apply(&delta);
    r.push("X.Delta", x0.is_zero(), &x0);
    r.push("Delta invariant (order 0)", check_invariant(&field, &delta, 0), &delta);
    let pr1 = prolong(&field, 1);
    for j in 0..ch.dim() {
        let dj = total_derivative(&ch, &delta, j);
        let res = pr1.apply(&dj);
        r.push(format!("delta_{} Delta invariant (order 1)", j + 1), res.is_zero(), &res);
    }
    let u11 = v(1);
    let res = field.apply(&u11);
    r.push("u11 is not invariant", !res.is_zero(), &res);
    Ok(r)
}

fn volume_groupoid(opts: &Options) -> SuiteResult {
    let k = positive_order(opts.order, 2, "--order")?;
    let mut r = SuiteReport::new("volume-groupoid");
    r.param("order", k);

    let plane = Chart::of(&["x", "y"]);
    let (x, y) = (RationalFunction::var(&plane, 0), RationalFunction::var(&plane, 1));
    let one = RationalFunction::one(&plane);
    let lambda = frame_volume_invariant(&one, &plane)?;
    let spec = GroupoidSpec::new(&plane)
        .with("dx^dy", Datum::Form(DifferentialForm::volume(&plane, one.clone())))?
        .with("lambda", Datum::Invariant(lambda))?;
    let p = [qi(1), qi(-2)];
    // det [[2, 3], [1, 2]] = 1
    let shear = TruncatedMapJet::from_map(&plane, &p, k, &[&x.scale(&qi(2)) + &y.scale(&qi(3)), &x + &y.scale(&qi(2))])?;
    let s = membership(&spec, &shear)?;
    r.push("det 1 linear jet accepted", s.verdict, failing_summary(&s));
    let stretch = TruncatedMapJet::from_map(&plane, &p, k, &[x.scale(&qi(2)), y.clone()])?;
    let s = membership(&spec, &stretch)?;
    r.push("det 2 linear jet rejected", !s.verdict, failing_summary(&s));
    let form_and_lambda_agree = s.residuals.iter().all(|res| !res.vanished);
    r.push("form and frame invariant agree on rejection", form_and_lambda_agree, failing_summary(&s));

    let line = Chart::of(&["x"]);
    let t = RationalFunction::var(&line, 0);
    let f = t.recip()?;
    let spec = GroupoidSpec::new(&line)
        .with("dx/x", Datum::Form(DifferentialForm::volume(&line, f.clone())))?
        .with("lambda", Datum::Invariant(frame_volume_invariant(&f, &line)?))?;
    let double = TruncatedMapJet::from_map(&line, &[qi(1)], k, &[t.scale(&qi(2))])?;
    let s = membership(&spec, &double)?;
    r.push("y = 2x preserves dx/x", s.verdict, failing_summary(&s));
    let shift = TruncatedMapJet::from_map(&line, &[qi(1)], k, &[&t + &RationalFunction::one(&line)])?;
    let s = membership(&spec, &shift)?;
    r.push("y = x + 1 does not preserve dx/x", !s.verdict, failing_summary(&s));
    Ok(r)
}

fn integrable(opts: &Options) -> SuiteResult {
    let m = opts.m.unwrap_or(7);
    if m < 1 {
        return Err(SuiteError("--m must be at least 1".into()));
    }
    let k = positive_order(opts.order, 2, "--order")?;
    let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let ch = Chart::new(names.iter().cloned())?;
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let default: Vec<Rational> = (1..=m as i64).map(qi).collect();
    let p = parse_base(opts.base.as_deref(), &name_refs, &default)?;
    let mut r = SuiteReport::new("integrable");
    r.param("m", m);
    r.param("order", k);
    r.param("base", point_text(&name_refs, &p));

    let dx1 = VectorField::coordinate(&ch, 0);
    let pr = prolong(&dx1, k);
    let higher: Vec<String> = pr.components()[m..]
        .iter()
        .zip(&pr.chart().names()[m..])
        .filter(|(c, _)| !c.is_zero())
        .map(|(_, n)| n.clone())
        .collect();
    r.push(
        format!("prolongation of d/dx1 to order {k} has zero higher components"),
        higher.is_empty(),
        if higher.is_empty() { "0".into() } else { higher.join(" ") },
    );

    let jc = JetChart::new(&ch, 1);
    let mut spec = GroupoidSpec::new(&ch);
    for (j, alpha) in jc.entries().iter().skip(m) {
        let inv = jc.var(*j, alpha);
        spec.push(inv.to_string(), Datum::Invariant(inv))?;
    }
    for i in 1..m {
        spec.push(names[i].clone(), Datum::Fixed(RationalFunction::var(&ch, i)))?;
    }
    let coords: Vec<RationalFunction> = (0..m).map(|i| RationalFunction::var(&ch, i)).collect();
    let with_first = |f: RationalFunction| {
        let mut map = coords.clone();
        map[0] = f;
        map
    };
    let x1 = &coords[0];
    for lam in [qi(1), q(-3, 2), qi(5)] {
        let map = with_first(x1 + &RationalFunction::constant(&ch, lam.clone()));
        let phi = TruncatedMapJet::from_map(&ch, &p, k, &map)?;
        let s = membership(&spec, &phi)?;
        let shown = if lam < qi(0) { format!("- {}", -lam) } else { format!("+ {lam}") };
        r.push(format!("translation x1 -> x1 {shown} passes"), s.verdict, failing_summary(&s));
    }
    let one = RationalFunction::one(&ch);
    let mut others: Vec<(String, Vec<RationalFunction>)> = vec![
        ("x1 -> 2*x1".into(), with_first(x1.scale(&qi(2)))),
        ("x1 -> x1 + x1^2".into(), with_first(x1 + &(x1 * x1))),
    ];
    if m >= 2 {
        others.push(("x1 -> x1 + x2".into(), with_first(x1 + &coords[1])));
        let mut moved = coords.clone();
        moved[1] = &coords[1] + &one;
        others.push(("x2 -> x2 + 1".into(), moved));
    }
    for (label, map) in others {
        let phi = TruncatedMapJet::from_map(&ch, &p, k, &map)?;
        let s = membership(&spec, &phi)?;
        r.push(format!("non-translation {label} fails"), !s.verdict, failing_summary(&s));
    }
    Ok(r)
}

fn dimension_range(opt: Option<usize>, default: &[usize], min: usize, flag: &str) -> Result<Vec<usize>, SuiteError> {
    match opt {
        None => Ok(default.to_vec()),
        Some(v) if v < min => Err(SuiteError(format!("{flag} must be at least {min}"))),
        Some(v) => Ok(vec![v]),
    }
}

fn kmax(opts: &Options) -> Result<i64, SuiteError> {
    match opts.kmax.unwrap_or(2) {
        k if k < 0 => Err(SuiteError("--kmax must be non-negative".into())),
        k => Ok(k),
    }
}

fn kiso_transvection(opts: &Options) -> SuiteResult {
    let ms = dimension_range(opts.m, &[2, 3], 2, "--m")?;
    let kmax = kmax(opts)?;
    let mut r = SuiteReport::new("kiso-transvection");
    r.param("m", ms.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    r.param("kmax", kmax);
    for &m in &ms {
        for k in 0..=kmax {
            let space = h_basis(m, k)?;
            let ch = space.basis.first().map(|b| b.chart().clone());
            let Some(ch) = ch else { continue };
            let d1 = HomogeneousField::coordinate(&ch, m, 0, Polynomial::one(&ch))?;
            for (i, x) in space.basis.iter().enumerate() {
                let y = transvection_solve(x)?;
                let bracket = graded_bracket(&d1, &y)?;
                let diff = bracket.add(&x.scale(&qi(-1)))?;
                r.push(format!("m={m} k={k} #{i}: [d1, Y] = X"), diff.is_zero(), &diff);
                let div = y.divergence();
                r.push(format!("m={m} k={k} #{i}: div Y = 0"), div.is_zero(), &div);
            }
        }
    }
    Ok(r)
}

fn kiso_surjectivity(opts: &Options) -> SuiteResult {
    let ms = dimension_range(opts.m, &[2, 3], 2, "--m")?;
    let qs = dimension_range(opts.q, &[1, 2], 1, "--q")?;
    let kmax = kmax(opts)?;
    let mut r = SuiteReport::new("kiso-surjectivity");
    r.param("m", ms.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    r.param("q", qs.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    r.param("kmax", kmax);
    let mut table = Table {
        headers: ["m", "q", "k", "l", "target_dim", "rank", "surjective"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for &m in &ms {
        for &qq in &qs {
            for k in 0..=kmax {
                for l in 0..=k as u32 {
                    let s = bracket_surjectivity_check(m, qq, k, l)?;
                    table.rows.push(vec![
                        m.to_string(),
                        qq.to_string(),
                        k.to_string(),
                        l.to_string(),
                        s.target_dim.to_string(),
                        s.rank.to_string(),
                        s.surjective.to_string(),
                    ]);
                    r.push(
                        format!("m={m} q={qq} k={k} l={l} surjective"),
                        s.surjective,
                        format!("rank {} of {}", s.rank, s.target_dim),
                    );
                }
            }
        }
    }
    r.table = Some(table);
    Ok(r)
}

/// A random polynomial of degree at most `deg` in the listed variables, with small integer coefficients.
fn random_poly(rng: &mut ChaCha8Rng, vars: &[RationalFunction], deg: u32, one: &RationalFunction) -> RationalFunction {
    let mut acc = one.scale(&qi(0));
    for _ in 0..rng.gen_range(1..=4) {
        let mut term = one.scale(&qi(rng.gen_range(-3..=3)));
        for _ in 0..rng.gen_range(0..=deg) {
            term = &term * &vars[rng.gen_range(0..vars.len())];
        }
        acc = &acc + &term;
    }
    acc
}

fn random_field(rng: &mut ChaCha8Rng, ch: &Chart) -> VectorField {
    let one = RationalFunction::one(ch);
    let vars: Vec<RationalFunction> = (0..ch.dim()).map(|i| RationalFunction::var(ch, i)).collect();
    let comps = (0..ch.dim()).map(|_| random_poly(rng, &vars, 2, &one)).collect();
    VectorField::new(ch, comps).expect("one component per coordinate")
}

fn jets_core() -> SuiteResult {
    let base = Chart::of(&["x", "y"]);
    let jc1 = JetChart::new(&base, 1);
    let one = RationalFunction::one(jc1.chart());
    let jet_vars: Vec<RationalFunction> = (0..jc1.chart().dim()).map(|i| RationalFunction::var(jc1.chart(), i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(JETS_CORE_SEED);
    let mut r = SuiteReport::new("jets-core");
    r.param("seed", JETS_CORE_SEED);
    r.param("instances", JETS_CORE_INSTANCES);

    let mut bad = Vec::new();
    for n in 0..JETS_CORE_INSTANCES {
        let f = random_poly(&mut rng, &jet_vars, 3, &one);
        let a = total_derivative(&base, &total_derivative(&base, &f, 0), 1);
        let b = total_derivative(&base, &total_derivative(&base, &f, 1), 0);
        if a != b {
            bad.push(n);
        }
    }
    r.push("delta_1 delta_2 = delta_2 delta_1", bad.is_empty(), format!("failing instances: {bad:?}"));

    let mut bad = Vec::new();
    for n in 0..JETS_CORE_INSTANCES {
        let v = random_field(&mut rng, &base);
        let f = random_poly(&mut rng, &jet_vars, 2, &one);
        let i = rng.gen_range(0..base.dim());
        let lhs = prolong(&v, 2).apply(&total_derivative(&base, &f, i));
        let rhs = total_derivative(&base, &prolong(&v, 1).apply(&f), i);
        if lhs != rhs {
            bad.push(n);
        }
    }
    r.push("X^(k+1) delta_i = delta_i X^(k)", bad.is_empty(), format!("failing instances: {bad:?}"));

    let mut bad = Vec::new();
    for n in 0..JETS_CORE_INSTANCES {
        let v = random_field(&mut rng, &base);
        let w = random_field(&mut rng, &base);
        let lhs = prolong(&lie_bracket(&v, &w)?, 1);
        let rhs = lie_bracket(&prolong(&v, 1), &prolong(&w, 1))?;
        if lhs != rhs {
            bad.push(n);
        }
    }
    r.push("[X, Y]^(1) = [X^(1), Y^(1)]", bad.is_empty(), format!("failing instances: {bad:?}"));
    Ok(r)
}

fn backlund_fixtures(opts: &Options) -> SuiteResult {
    let dir = opts.fixtures.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_FIXTURES));
    let paths = fixture_paths(&dir).map_err(|e| SuiteError(e.to_string()))?;
    if paths.is_empty() {
        return Err(SuiteError(format!("no .fixture files in {}", dir.display())));
    }
    let m = build_model();
    let mut r = SuiteReport::new("backlund-fixtures");
    r.param("fixtures", dir.display());
    for path in paths {
        let loaded = load_fixture(&path, &m).map_err(|e| SuiteError(e.to_string()))?;
        let fx = &loaded.fixture;
        let expect = if loaded.expect_pass { "pass" } else { "fail" };
        let (verdict, residual) = match verify_backlund(&m, fx) {
            Ok(rep) => {
                let checks = std::iter::once(&rep.x_fixed)
                    .chain(&rep.translation)
                    .chain(&rep.transport)
                    .chain(rep.inverse.iter().flatten());
                let bad: Vec<String> = checks.filter(|c| !c.ok).map(|c| format!("{}: {}", c.id, c.residual)).collect();
                let text = if bad.is_empty() { "0".into() } else { bad.join("; ") };
                (rep.verdict(), text)
            }
            Err(jetcert::Error::SingularFixture(msg)) => (false, msg),
            Err(e) => return Err(e.into()),
        };
        r.push(format!("{} (expect {expect})", fx.name), verdict == loaded.expect_pass, residual);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_parsing() {
        let b = parse_base(Some("x=5/2, q=-1"), &CHART7, &default_base()).unwrap();
        assert_eq!(b[0], q(5, 2));
        assert_eq!(b[2], qi(-1));
        assert_eq!(b[1], qi(3));
        assert!(parse_base(Some("z=1"), &CHART7, &default_base()).is_err());
        assert!(parse_base(Some("x=two"), &CHART7, &default_base()).is_err());
        assert!(parse_base(Some("x"), &CHART7, &default_base()).is_err());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &Options::default()).is_err());
    }

    #[test]
    fn zero_order_is_rejected() {
        let opts = Options {
            order: Some(0),
            ..Options::default()
        };
        assert!(run_suite("volume-groupoid", &opts).is_err());
    }
}

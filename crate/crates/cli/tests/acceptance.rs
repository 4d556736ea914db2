//! End-to-end acceptance: every criterion runs through the built binary, prints
//! one PASS/FAIL line, and the test fails if any line is FAIL.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use jetcert::exactalg::Rational;
use jetcert::painleve::{picard_examples, picard_predicate};
use num_bigint::BigInt;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/backlund")
}

/// Parsed `--machine` output of one run.
struct Run {
    raw: Vec<u8>,
    exit: i32,
    fields: BTreeMap<String, String>,
    elapsed: Duration,
}

impl Run {
    fn get(&self, key: &str) -> &str {
        self.fields.get(key).map(String::as_str).unwrap_or("")
    }

    fn checks(&self) -> Vec<(String, bool)> {
        let total: usize = self.get("total").parse().unwrap_or(0);
        (0..total)
            .map(|i| {
                (
                    self.get(&format!("check.{i}.id")).to_string(),
                    self.get(&format!("check.{i}.status")) == "pass",
                )
            })
            .collect()
    }

    fn all_pass(&self) -> bool {
        self.exit == 0 && !self.checks().is_empty() && self.checks().iter().all(|(_, ok)| *ok)
    }

    fn passes(&self, id: &str) -> bool {
        self.checks().iter().any(|(c, ok)| c == id && *ok)
    }

    fn failing(&self) -> Vec<String> {
        self.checks().into_iter().filter(|(_, ok)| !ok).map(|(c, _)| c).collect()
    }
}

fn run(suite: &str, extra: &[&str]) -> Run {
    let start = Instant::now();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jetcert"));
    cmd.arg(suite).args(["--machine", "--no-timestamp"]).args(extra);
    if suite == "backlund-fixtures" {
        cmd.arg("--fixtures").arg(fixtures_dir());
    }
    let out = cmd.output().expect("jetcert runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout.clone()).expect("utf-8 output");
    let fields = text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Run {
        raw: out.stdout,
        exit: out.status.code().unwrap_or(-1),
        fields,
        elapsed,
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(r: &Run, limit: Duration) -> Result<(), String> {
    if r.elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {:?}, limit {:?}", r.elapsed, limit))
    }
}

fn suite_outcome(r: &Run, limit: Duration, extra: impl FnOnce(&Run) -> Result<(), String>) -> Outcome {
    let verdict = if !r.all_pass() {
        Err(format!("exit {}, failing: {:?}", r.exit, r.failing()))
    } else {
        within(r, limit).and_then(|_| extra(r))
    };
    match verdict {
        Ok(()) => Outcome {
            pass: true,
            detail: format!("{} checks in {:.2?}", r.checks().len(), r.elapsed),
        },
        Err(e) => Outcome { pass: false, detail: e },
    }
}

fn secs(n: u64) -> Duration {
    Duration::from_secs(n)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Divergence-free homogeneous fields of coefficient degree k+1 in m variables:
/// all fields minus the surjective divergence onto degree-k polynomials.
fn h_dim(m: usize, k: usize) -> usize {
    m * binomial(m + k, m - 1) - binomial(m + k - 1, m - 1)
}

/// Picard set by hand from numerators and denominators.
fn picard_oracle(t: [(i64, i64); 4]) -> bool {
    let half = t.iter().all(|&(n, d)| (2 * n) % d == 0 && ((2 * n) / d).rem_euclid(2) == 1);
    let int = t.iter().all(|&(n, d)| n % d == 0);
    let sum: i64 = t.iter().map(|&(n, d)| if n % d == 0 { n / d } else { 1 }).sum();
    half || (int && sum.rem_euclid(2) == 0)
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn criterion_1() -> Outcome {
    let r = run("pvi-invariants", &[]);
    suite_outcome(&r, secs(5), |r| {
        for id in ["Lie_X(dx)", "X.a", "X.b", "X.c", "X.e", "Lie_X(dp^dq) mod dx,da,db,dc,de"] {
            if !r.passes(id) {
                return Err(format!("missing passing check '{id}'"));
            }
        }
        Ok(())
    })
}

fn criterion_2() -> Outcome {
    let r = run("pvi-conjugation", &[]);
    suite_outcome(&r, secs(30), |r| {
        let residuals = r
            .checks()
            .iter()
            .enumerate()
            .filter(|(_, (id, _))| id.starts_with("X.(w o conj)"))
            .filter(|(i, _)| r.get(&format!("check.{i}.residual")) == "0")
            .count();
        if residuals == 7 {
            Ok(())
        } else {
            Err(format!("{residuals} of 7 conjugation residuals are zero"))
        }
    })
}

fn criterion_3() -> Outcome {
    let r = run("pvi-flow-membership", &["--order", "2", "--torder", "4", "--base", "x=2,p=3,q=1,a=1,b=1,c=1,e=1"]);
    suite_outcome(&r, secs(300), |r| {
        if r.checks().len() == 7 {
            Ok(())
        } else {
            Err(format!("expected 7 defining data, got {}", r.checks().len()))
        }
    })
}

fn criterion_4() -> Outcome {
    let r = run("airy", &[]);
    suite_outcome(&r, secs(5), |r| {
        let deltas = (1..=5).filter(|j| r.passes(&format!("delta_{j} Delta invariant (order 1)"))).count();
        if r.passes("Delta invariant (order 0)") && deltas == 5 && r.passes("u11 is not invariant") {
            Ok(())
        } else {
            Err(format!("Delta or its {deltas} of 5 total derivatives not confirmed"))
        }
    })
}

fn criterion_5() -> Outcome {
    let r = run("volume-groupoid", &[]);
    suite_outcome(&r, secs(5), |r| {
        for id in ["det 1 linear jet accepted", "det 2 linear jet rejected", "y = 2x preserves dx/x"] {
            if !r.passes(id) {
                return Err(format!("missing passing check '{id}'"));
            }
        }
        Ok(())
    })
}

fn criterion_6() -> Outcome {
    let r = run("integrable", &[]);
    suite_outcome(&r, secs(5), |r| {
        let translations = r.checks().iter().filter(|(id, ok)| id.starts_with("translation") && *ok).count();
        let others = r.checks().iter().filter(|(id, ok)| id.starts_with("non-translation") && *ok).count();
        if translations >= 2 && others >= 2 {
            Ok(())
        } else {
            Err(format!("{translations} translations, {others} non-translations"))
        }
    })
}

fn criterion_7() -> Outcome {
    let r = run("jets-core", &[]);
    suite_outcome(&r, secs(60), |r| {
        let instances: usize = r.get("param.instances").parse().unwrap_or(0);
        if instances >= 50 && r.checks().len() == 3 {
            Ok(())
        } else {
            Err(format!("{instances} instances over {} properties", r.checks().len()))
        }
    })
}

fn criterion_8() -> Outcome {
    let r = run("kiso-transvection", &["--kmax", "2"]);
    suite_outcome(&r, secs(60), |r| {
        let expected: usize = [2, 3].iter().flat_map(|&m| (0..=2).map(move |k| 2 * h_dim(m, k))).sum();
        if r.checks().len() == expected {
            Ok(())
        } else {
            Err(format!("{} checks, expected {expected} from the basis dimensions", r.checks().len()))
        }
    })
}

fn criterion_9() -> Outcome {
    let r = run("kiso-surjectivity", &["--kmax", "2"]);
    suite_outcome(&r, secs(300), |r| {
        let rows = (0..)
            .take_while(|i| r.fields.contains_key(&format!("row.{i}.m")))
            .filter(|i| {
                let f = |h: &str| r.get(&format!("row.{i}.{h}")).to_string();
                f("surjective") == "true" && f("rank") == f("target_dim")
            })
            .count();
        // m ∈ {2,3}, q ∈ {1,2}, and six (k, l) pairs with l ≤ k ≤ 2.
        if rows == 24 {
            Ok(())
        } else {
            Err(format!("{rows} of 24 rows surjective by rank"))
        }
    })
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let cited = [
        ([(1, 2), (1, 2), (1, 2), (1, 2)], true),
        ([(0, 1), (0, 1), (1, 1), (1, 1)], true),
        ([(1, 12), (1, 12), (1, 12), (11, 12)], false),
    ];
    let mut bad = Vec::new();
    for (t, expected) in cited {
        let params = t.map(|(n, d)| rational(n, d));
        if picard_predicate(&params) != expected || picard_oracle(t) != expected {
            bad.push(format!("{t:?}"));
        }
    }
    let shipped: Vec<_> = picard_examples().into_iter().map(|(t, v)| (t.to_vec(), v)).collect();
    let listed: Vec<_> = cited
        .iter()
        .map(|(t, v)| (t.iter().map(|&(n, d)| rational(n, d)).collect::<Vec<_>>(), *v))
        .collect();
    if shipped != listed {
        bad.push("shipped examples differ from the cited tuples".into());
    }
    let elapsed = start.elapsed();
    if elapsed > secs(1) {
        bad.push(format!("took {elapsed:?}"));
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("3 tuples in {elapsed:.2?}") } else { bad.join("; ") },
    }
}

fn criterion_11() -> Outcome {
    let mut differing = Vec::new();
    for suite in jetcert_cli::SUITES {
        let (a, b) = (run(suite, &[]), run(suite, &[]));
        if a.raw != b.raw || a.exit != b.exit || a.raw.is_empty() {
            differing.push(suite);
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("{} suites byte-identical on rerun", jetcert_cli::SUITES.len())
        } else {
            format!("differs: {differing:?}")
        },
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("PVI invariants", criterion_1),
        ("conjugation residuals", criterion_2),
        ("flow jet membership", criterion_3),
        ("Airy invariant", criterion_4),
        ("volume groupoid", criterion_5),
        ("integrable translations", criterion_6),
        ("jet-core properties", criterion_7),
        ("transvection", criterion_8),
        ("bracket surjectivity", criterion_9),
        ("Picard predicate", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let line = format!("{} {:>2} {name}: {}\n", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        // Written past the test harness's capture so the verdicts always show.
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

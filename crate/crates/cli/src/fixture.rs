//! Bäcklund fixture files.
//!
//! ```text
//! # comment
//! name = s1-shift
//! expect = fail            # optional; default pass
//! x = x
//! p = p
//! q = q - 1/p
//! a = a + 1
//! b = b
//! c = c
//! e = e
//! shift = 1 0 0 0
//! inverse q = q + 1/p      # optional; all seven or none
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use jetcert::exactalg::RationalFunction;
use jetcert::painleve::{BacklundFixture, PviModel, CHART7};

use crate::parser::{parse_expression, ParseError};

#[derive(Debug)]
pub enum FixtureError {
    Io(PathBuf, String),
    Parse { path: PathBuf, err: ParseError },
    Syntax { path: PathBuf, line: usize, msg: String },
    Arity { path: PathBuf, msg: String },
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            FixtureError::Parse { path, err } => write!(f, "{}:{err}", path.display()),
            FixtureError::Syntax { path, line, msg } => write!(f, "{}:{line}: {msg}", path.display()),
            FixtureError::Arity { path, msg } => write!(f, "{}: arity error: {msg}", path.display()),
        }
    }
}

impl std::error::Error for FixtureError {}

/// A fixture with the verdict its author expects.
#[derive(Clone, Debug)]
pub struct LoadedFixture {
    pub fixture: BacklundFixture,
    pub expect_pass: bool,
}

pub fn load_fixture(path: &Path, model: &PviModel) -> Result<LoadedFixture, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(|e| FixtureError::Io(path.to_path_buf(), e.to_string()))?;
    parse_fixture(&text, path, model)
}

pub fn parse_fixture(text: &str, path: &Path, model: &PviModel) -> Result<LoadedFixture, FixtureError> {
    let syntax = |line: usize, msg: String| FixtureError::Syntax {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut name = None;
    let mut expect_pass = true;
    let mut forward: HashMap<String, RationalFunction> = HashMap::new();
    let mut inverse: HashMap<String, RationalFunction> = HashMap::new();
    let mut shift: Option<Vec<i64>> = None;
    let mut map_lines = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(syntax(line_no, "expected 'key = value'".into()));
        };
        let key = line[..eq].trim();
        let value = &line[eq + 1..];
        let value_col = eq + 2;
        let expr = |v: &str| {
            parse_expression(v, &model.chart).map_err(|err| FixtureError::Parse {
                path: path.to_path_buf(),
                err: err.offset(line_no - 1, value_col - 1),
            })
        };
        let mut words = key.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("name"), None, _) => name = Some(value.trim().to_string()),
            (Some("expect"), None, _) => {
                expect_pass = match value.trim() {
                    "pass" => true,
                    "fail" => false,
                    other => return Err(syntax(line_no, format!("expect must be pass or fail, got '{other}'"))),
                }
            }
            (Some("shift"), None, _) => {
                let parts = value
                    .split_whitespace()
                    .map(|w| w.parse::<i64>().map_err(|_| syntax(line_no, format!("bad shift '{w}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                shift = Some(parts);
            }
            (Some("inverse"), Some(var), None) if CHART7.contains(&var) => {
                if inverse.insert(var.to_string(), expr(value)?).is_some() {
                    return Err(syntax(line_no, format!("duplicate inverse for '{var}'")));
                }
            }
            (Some(var), None, _) if CHART7.contains(&var) => {
                map_lines += 1;
                if forward.insert(var.to_string(), expr(value)?).is_some() {
                    return Err(syntax(line_no, format!("duplicate map for '{var}'")));
                }
            }
            _ => return Err(syntax(line_no, format!("unknown key '{key}'"))),
        }
    }
    let arity = |msg: String| FixtureError::Arity {
        path: path.to_path_buf(),
        msg,
    };
    if map_lines != 7 || forward.len() != 7 {
        return Err(arity(format!("expected 7 forward maps, found {map_lines}")));
    }
    let shift = shift.ok_or_else(|| arity("missing shift".into()))?;
    let shift: [i64; 4] = shift
        .as_slice()
        .try_into()
        .map_err(|_| arity(format!("expected 4 shifts, found {}", shift.len())))?;
    if !inverse.is_empty() && inverse.len() != 7 {
        return Err(arity(format!("expected 7 inverse maps, found {}", inverse.len())));
    }
    let ordered = |m: &mut HashMap<String, RationalFunction>| -> Vec<RationalFunction> {
        CHART7.iter().map(|v| m.remove(*v).expect("all present")).collect()
    };
    let fixture = BacklundFixture {
        name: name.unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()),
        forward: ordered(&mut forward),
        shift,
        inverse: (!inverse.is_empty()).then(|| ordered(&mut inverse)),
    };
    Ok(LoadedFixture { fixture, expect_pass })
}

/// Fixture files (`*.fixture`) of a directory, sorted by name.
pub fn fixture_paths(dir: &Path) -> Result<Vec<PathBuf>, FixtureError> {
    let rd = std::fs::read_dir(dir).map_err(|e| FixtureError::Io(dir.to_path_buf(), e.to_string()))?;
    let mut out: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fixture"))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetcert::painleve::build_model;

    const IDENTITY: &str = "name = identity\nx = x\np = p\nq = q\na = a\nb = b\nc = c\ne = e\nshift = 0 0 0 0\n";

    #[test]
    fn identity_fixture() {
        let m = build_model();
        let f = parse_fixture(IDENTITY, Path::new("id.fixture"), &m).unwrap();
        assert!(f.expect_pass);
        assert_eq!(f.fixture.forward, BacklundFixture::identity(&m).forward);
        assert!(jetcert::painleve::verify_backlund(&m, &f.fixture).unwrap().verdict());
    }

    #[test]
    fn arity_errors() {
        let m = build_model();
        let six = IDENTITY.replace("e = e\n", "");
        assert!(matches!(parse_fixture(&six, Path::new("six"), &m), Err(FixtureError::Arity { .. })));
        let three = IDENTITY.replace("0 0 0 0", "0 0 0");
        assert!(matches!(parse_fixture(&three, Path::new("s"), &m), Err(FixtureError::Arity { .. })));
    }

    #[test]
    fn parse_error_location() {
        let m = build_model();
        let bad = IDENTITY.replace("q = q\n", "q = q + * p\n");
        match parse_fixture(&bad, Path::new("bad"), &m) {
            Err(FixtureError::Parse { err: ParseError::Syntax { line, col, .. }, .. }) => {
                assert_eq!((line, col), (4, 9));
            }
            other => panic!("{other:?}"),
        }
        let unknown = IDENTITY.replace("name = identity\n", "name = identity\nz = 1\n");
        assert!(matches!(parse_fixture(&unknown, Path::new("u"), &m), Err(FixtureError::Syntax { line: 2, .. })));
    }
}

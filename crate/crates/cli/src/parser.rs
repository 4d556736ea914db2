//! Surface syntax for rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! IDENT  := [A-Za-z_][A-Za-z0-9_]* (':' ('e' INT)+)?
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`; exponents are
//! integers and chained powers need parentheses.

use std::fmt;

use jetcert::exactalg::{Chart, RationalFunction};
use jetcert::jets::{jet_order, JetChart};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, col: usize, msg: String },
    UnknownIdentifier { line: usize, col: usize, name: String },
    Algebra { line: usize, col: usize, msg: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, msg } => write!(f, "{line}:{col}: syntax error: {msg}"),
            ParseError::UnknownIdentifier { line, col, name } => {
                write!(f, "{line}:{col}: unknown identifier '{name}'")
            }
            ParseError::Algebra { line, col, msg } => write!(f, "{line}:{col}: {msg}"),
        }
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    /// Shifts the reported position for text embedded at `line`, `col` of a file.
    pub fn offset(self, dl: usize, dc: usize) -> Self {
        let shift = |line: usize, col: usize| (line + dl, if line == 1 { col + dc } else { col });
        match self {
            ParseError::Syntax { line, col, msg } => {
                let (line, col) = shift(line, col);
                ParseError::Syntax { line, col, msg }
            }
            ParseError::UnknownIdentifier { line, col, name } => {
                let (line, col) = shift(line, col);
                ParseError::UnknownIdentifier { line, col, name }
            }
            ParseError::Algebra { line, col, msg } => {
                let (line, col) = shift(line, col);
                ParseError::Algebra { line, col, msg }
            }
        }
    }
}

/// Syntax tree of an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i < chars.len() && chars[i] == ':' {
                i += 1;
                let tail = i;
                while i + 1 < chars.len() && chars[i] == 'e' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i == tail {
                    return Err(ParseError::Syntax {
                        line: l0,
                        col: c0 + (i - start),
                        msg: "expected 'e<k>' after ':' in a jet variable".into(),
                    });
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError::Syntax {
            line: l0,
            col: c0,
            msg: format!("unexpected character '{c}'"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym('/') {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let neg = self.is_sym('-');
        if neg {
            self.bump();
        }
        let Tok::Int(n) = self.peek().tok.clone() else {
            return self.err("exponent must be an integer literal");
        };
        let Ok(mut e) = i32::try_from(n) else {
            return self.err("exponent out of range");
        };
        self.bump();
        if neg {
            e = -e;
        }
        if self.is_sym('^') {
            return self.err("chained exponents need parentheses");
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Ident(s))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.is_sym(')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// Parses text into a syntax tree.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Identifiers used by a tree, with their first position.
fn identifiers(text: &str) -> Result<Vec<(String, usize, usize)>, ParseError> {
    Ok(lex(text)?
        .into_iter()
        .filter_map(|t| match t.tok {
            Tok::Ident(s) => Some((s, t.line, t.col)),
            _ => None,
        })
        .collect())
}

fn eval(e: &Expr, chart: &Chart) -> Result<RationalFunction, String> {
    Ok(match e {
        Expr::Int(n) => RationalFunction::constant(chart, n.clone().into()),
        Expr::Ident(s) => RationalFunction::var_named(chart, s).map_err(|e| e.to_string())?,
        Expr::Neg(a) => -&eval(a, chart)?,
        Expr::Add(a, b) => &eval(a, chart)? + &eval(b, chart)?,
        Expr::Sub(a, b) => &eval(a, chart)? - &eval(b, chart)?,
        Expr::Mul(a, b) => &eval(a, chart)? * &eval(b, chart)?,
        Expr::Div(a, b) => eval(a, chart)?
            .checked_div(&eval(b, chart)?)
            .map_err(|_| "division by zero".to_string())?,
        Expr::Pow(a, n) => eval(a, chart)?.pow(*n).map_err(|_| "zero to a negative power".to_string())?,
    })
}

/// Parses `text` into a canonical rational function on `chart`.
pub fn parse_expression(text: &str, chart: &Chart) -> Result<RationalFunction, ParseError> {
    let tree = parse(text)?;
    for (name, line, col) in identifiers(text)? {
        if !chart.contains(&name) {
            return Err(ParseError::UnknownIdentifier { line, col, name });
        }
    }
    eval(&tree, chart).map_err(|msg| ParseError::Algebra { line: 1, col: 1, msg })
}

/// Parses an expression in jet variables over `base`; the chart is the jet
/// chart of the highest order that occurs.
pub fn parse_jet_expression(text: &str, base: &Chart) -> Result<RationalFunction, ParseError> {
    let mut order = 0;
    for (name, line, col) in identifiers(text)? {
        match jetcert::jets::parse_var_name(base, &name) {
            Some((_, alpha)) => order = order.max(alpha.len() as u32),
            None => return Err(ParseError::UnknownIdentifier { line, col, name }),
        }
    }
    let jc = JetChart::new(base, order);
    let f = parse_expression(text, jc.chart())?;
    debug_assert!(jet_order(base, &f) <= order);
    Ok(f)
}

//! Document grammar: a header of settings, then bindings and assertions,
//! one per line.
//!
//! ```text
//! order 8
//! vars x, y
//! X = x*y d/dx - y^2 d/dy
//! f = exp(X)
//! assert f == (x + x*y, y - y^2)
//! ```

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(char),
    Syntax {
        found: String,
        expected: Vec<String>,
    },
    Arity {
        func: String,
        expected: String,
        got: usize,
    },
    Undefined(String),
    Header(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Lexical(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::Syntax { found, expected } => {
                write!(
                    f,
                    "unexpected {found}, expected one of: {}",
                    expected.join(", ")
                )
            }
            ParseErrorKind::Arity {
                func,
                expected,
                got,
            } => {
                write!(f, "{func} takes {expected} argument(s), got {got}")
            }
            ParseErrorKind::Undefined(n) => write!(f, "undefined name {n:?}"),
            ParseErrorKind::Header(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "name {s:?}"),
            Tok::Sym(s) => write!(f, "{s:?}"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 13] = [
    "==", "!=", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", "=",
];

fn lex(text: &str) -> PResult<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        if c == '\n' {
            if depth == 0 {
                push(&mut out, Tok::Newline);
            }
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            i += s.len();
            col += s.len();
            push(&mut out, Tok::Num(s.parse().expect("digits")));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_alphanumeric() || **c == '_')
                .collect();
            i += s.chars().count();
            col += s.chars().count();
            push(&mut out, Tok::Ident(s));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = SYMBOLS
            .iter()
            .find(|s| two.starts_with(**s))
            .ok_or(ParseError {
                line,
                col,
                kind: ParseErrorKind::Lexical(c),
            })?;
        match *sym {
            "(" | "[" => depth += 1,
            ")" | "]" => depth = depth.saturating_sub(1),
            _ => {}
        }
        i += sym.len();
        col += sym.len();
        push(&mut out, Tok::Sym(sym));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Literal {
    True,
    False,
    Proved,
    Refuted,
    Inconclusive,
    Identity,
    NotTangent,
}

impl Literal {
    const ALL: [(&'static str, Literal); 7] = [
        ("true", Literal::True),
        ("false", Literal::False),
        ("proved", Literal::Proved),
        ("refuted", Literal::Refuted),
        ("inconclusive", Literal::Inconclusive),
        ("identity", Literal::Identity),
        ("not_tangent", Literal::NotTangent),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, l)| *l == self)
            .expect("listed")
            .0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    /// Coordinate function, by index.
    Var(usize),
    /// A bound name.
    Name(String),
    Imag,
    /// `d/dx`
    Partial(usize),
    /// `dx`
    Differential(usize),
    /// `R`
    Radial,
    Lit(Literal),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tuple(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

/// Builtins with their argument counts (`usize::MAX` for variadic).
pub const BUILTINS: &[(&str, usize, usize)] = &[
    ("exp", 1, 2),
    ("log", 1, 1),
    ("compose", 2, 2),
    ("inverse", 1, 1),
    ("push", 2, 2),
    ("pull", 2, 2),
    ("d", 1, 1),
    ("homothety", 1, 1),
    ("truncate", 2, 2),
    ("unit_power", 2, 3),
    ("group", 1, usize::MAX),
    ("abelian", 1, 1),
    ("quasi_abelian", 1, 1),
    ("derived", 2, 2),
    ("lower_central", 2, 2),
    ("projective_equivalence", 1, 1),
    ("uniform_order_equivalence", 1, 1),
    ("metabelian_criterion", 2, 2),
    ("closed", 1, 1),
    ("dicritic", 1, 1),
    ("regular_dicritic", 1, 1),
    ("residue", 2, 2),
    ("invariant", 2, 2),
    ("projective_factor", 2, 2),
    ("flow_time", 2, 2),
    ("tangency", 1, 1),
    ("apply", 2, 2),
    ("first_integral", 2, 2),
    ("dual_form", 3, 3),
    ("lie_length", 1, usize::MAX),
];

fn builtin(name: &str) -> Option<(usize, usize)> {
    BUILTINS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, a, b)| (a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementKind {
    Let(String, Expr),
    Assert(Expr, Option<(Cmp, Expr)>),
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub kind: StatementKind,
    pub line: usize,
}

impl PartialEq for Statement {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub order: Option<u32>,
    pub dim: Option<usize>,
    pub vars: Option<Vec<String>>,
    pub word_bound: Option<usize>,
    pub depth: Option<usize>,
    pub cap: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub settings: Settings,
    pub statements: Vec<Statement>,
}

impl Document {
    pub fn vars(&self) -> Vec<String> {
        match (&self.settings.vars, self.settings.dim) {
            (Some(v), _) => v.clone(),
            (None, Some(n)) => vars_for(n),
            (None, None) => default_vars(),
        }
    }
}

pub fn default_vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

/// `z1, …, zn`, or `x, y` for two variables.
pub fn vars_for(n: usize) -> Vec<String> {
    if n == 2 {
        default_vars()
    } else {
        (1..=n).map(|i| format!("z{i}")).collect()
    }
}

const SETTINGS: [&str; 6] = ["order", "dim", "vars", "word_bound", "depth", "cap"];

fn is_reserved(name: &str, vars: &[String]) -> bool {
    matches!(name, "i" | "R" | "d" | "assert")
        || SETTINGS.contains(&name)
        || Literal::ALL.iter().any(|(n, _)| *n == name)
        || builtin(name).is_some()
        || vars.iter().any(|v| v == name || format!("d{v}") == name)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    vars: Vec<String>,
    names: HashSet<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError { line, col, kind })
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        self.err(ParseErrorKind::Syntax {
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if *self.peek() == Tok::Sym(Self::intern(sym)) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn intern(sym: &str) -> &'static str {
        SYMBOLS.iter().find(|s| **s == sym).expect("known symbol")
    }

    fn expect(&mut self, sym: &str) -> PResult<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.unexpected(&[&format!("{sym:?}")])
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => self.unexpected(&["end of line"]),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn number(&mut self) -> PResult<BigInt> {
        match self.bump() {
            Tok::Num(n) => Ok(n),
            _ => {
                self.pos -= 1;
                self.unexpected(&["number"])
            }
        }
    }

    fn small(&mut self) -> PResult<usize> {
        let (line, col) = self.here();
        let n = self.number()?;
        usize::try_from(n).map_err(|_| ParseError {
            line,
            col,
            kind: ParseErrorKind::Header("setting out of range".into()),
        })
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        self.skip_newlines();
        while let Tok::Ident(s) = self.peek().clone() {
            if !SETTINGS.contains(&s.as_str()) {
                break;
            }
            self.bump();
            match s.as_str() {
                "order" => {
                    let n = self.small()?;
                    if n == 0 || n > 64 {
                        return self.err(ParseErrorKind::Header(
                            "order must be between 1 and 64".into(),
                        ));
                    }
                    doc.settings.order = Some(n as u32);
                }
                "vars" => {
                    let mut vs = Vec::new();
                    loop {
                        match self.bump() {
                            Tok::Ident(v) if !is_reserved(&v, &[]) && !vs.contains(&v) => {
                                vs.push(v)
                            }
                            _ => {
                                self.pos -= 1;
                                return self.unexpected(&["a fresh variable name"]);
                            }
                        }
                        if !self.eat(",") {
                            break;
                        }
                    }
                    if doc.settings.dim.is_some_and(|n| n != vs.len()) {
                        return self.err(ParseErrorKind::Header("vars do not match dim".into()));
                    }
                    self.vars = vs.clone();
                    doc.settings.vars = Some(vs);
                }
                "dim" => {
                    let n = self.small()?;
                    if n == 0 || n > 8 || doc.settings.vars.as_ref().is_some_and(|v| v.len() != n) {
                        return self.err(ParseErrorKind::Header(
                            "dim must be between 1 and 8 and match vars".into(),
                        ));
                    }
                    doc.settings.dim = Some(n);
                    if doc.settings.vars.is_none() {
                        self.vars = vars_for(n);
                    }
                }
                "word_bound" => doc.settings.word_bound = Some(self.small()?),
                "depth" => doc.settings.depth = Some(self.small()?),
                _ => doc.settings.cap = Some(self.small()?),
            }
            self.end_of_statement()?;
            self.skip_newlines();
        }
        if *self.peek() != Tok::Eof && doc.settings.order.is_none() {
            return self.err(ParseErrorKind::Header(
                "the header must declare the jet order (`order N`)".into(),
            ));
        }
        while *self.peek() != Tok::Eof {
            doc.statements.push(self.statement()?);
            self.skip_newlines();
        }
        Ok(doc)
    }

    fn statement(&mut self) -> PResult<Statement> {
        let (line, _) = self.here();
        let kind = match self.peek().clone() {
            Tok::Ident(s) if s == "assert" => {
                self.bump();
                let lhs = self.expr()?;
                let cmp = if self.eat("==") {
                    Some((Cmp::Eq, self.expr()?))
                } else if self.eat("!=") {
                    Some((Cmp::Ne, self.expr()?))
                } else {
                    None
                };
                StatementKind::Assert(lhs, cmp)
            }
            Tok::Ident(s) if *self.peek_at(1) == Tok::Sym("=") => {
                if is_reserved(&s, &self.vars) {
                    return self.unexpected(&["a binding name (not reserved)"]);
                }
                self.bump();
                self.bump();
                let e = self.expr()?;
                self.names.insert(s.clone());
                StatementKind::Let(s, e)
            }
            Tok::Ident(s) if SETTINGS.contains(&s.as_str()) => {
                return self.err(ParseErrorKind::Header(format!(
                    "setting {s:?} must appear in the header"
                )));
            }
            _ => return self.unexpected(&["binding", "\"assert\""]),
        };
        self.end_of_statement()?;
        Ok(Statement { kind, line })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    /// Whether the next token starts `d/dx`, `dx` or `R`.
    fn at_differential_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if s == "d" => *self.peek_at(1) == Tok::Sym("/"),
            Tok::Ident(s) if s == "R" => true,
            Tok::Ident(s) => self.vars.iter().any(|v| format!("d{v}") == *s),
            _ => false,
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else if self.at_differential_atom() {
                BinOp::Mul
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat("^") {
            let neg = self.eat("-");
            let (line, col) = self.here();
            let n = self.number()?;
            let e = i64::try_from(n).map_err(|_| ParseError {
                line,
                col,
                kind: ParseErrorKind::Syntax {
                    found: "huge exponent".into(),
                    expected: vec!["small integer".into()],
                },
            })?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn args(&mut self, close: &str) -> PResult<(Vec<Expr>, bool)> {
        let mut out = Vec::new();
        let mut trailing = false;
        if self.eat(close) {
            return Ok((out, false));
        }
        loop {
            out.push(self.expr()?);
            if self.eat(",") {
                if self.eat(close) {
                    trailing = true;
                    break;
                }
            } else {
                self.expect(close)?;
                break;
            }
        }
        Ok((out, trailing))
    }

    fn primary(&mut self) -> PResult<Expr> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Sym("(") => {
                let (items, trailing) = self.args(")")?;
                match items.len() {
                    0 => {
                        self.pos -= 1;
                        self.unexpected(&["expression"])
                    }
                    1 if !trailing => Ok(items.into_iter().next().expect("one")),
                    _ => Ok(Expr::Tuple(items)),
                }
            }
            Tok::Sym("[") => {
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect("]")?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Tok::Ident(s) => self.ident(s, line, col),
            _ => {
                self.pos -= 1;
                self.unexpected(&["number", "name", "\"(\"", "\"[\""])
            }
        }
    }

    fn ident(&mut self, s: String, line: usize, col: usize) -> PResult<Expr> {
        if let Some((_, l)) = Literal::ALL.iter().find(|(n, _)| *n == s) {
            return Ok(Expr::Lit(*l));
        }
        if s == "d" && self.eat("/") {
            return match self.bump() {
                Tok::Ident(dv) => match self.vars.iter().position(|v| format!("d{v}") == dv) {
                    Some(i) => Ok(Expr::Partial(i)),
                    None => {
                        self.pos -= 1;
                        self.unexpected(&["d<variable>"])
                    }
                },
                _ => {
                    self.pos -= 1;
                    self.unexpected(&["d<variable>"])
                }
            };
        }
        if let Some(i) = self.vars.iter().position(|v| *v == s) {
            return Ok(Expr::Var(i));
        }
        if let Some(i) = self.vars.iter().position(|v| format!("d{v}") == s) {
            return Ok(Expr::Differential(i));
        }
        match s.as_str() {
            "i" => return Ok(Expr::Imag),
            "R" => return Ok(Expr::Radial),
            _ => {}
        }
        if let Some((lo, hi)) = builtin(&s) {
            if !self.eat("(") {
                return self.unexpected(&["\"(\""]);
            }
            let (args, _) = self.args(")")?;
            if args.len() < lo || args.len() > hi {
                let expected = match (lo, hi) {
                    (a, b) if a == b => a.to_string(),
                    (a, usize::MAX) => format!("at least {a}"),
                    (a, b) => format!("{a} to {b}"),
                };
                return Err(ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::Arity {
                        func: s,
                        expected,
                        got: args.len(),
                    },
                });
            }
            return Ok(Expr::Call(s, args));
        }
        if self.names.contains(&s) {
            return Ok(Expr::Name(s));
        }
        Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::Undefined(s),
        })
    }
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        vars: default_vars(),
        names: HashSet::new(),
    };
    p.document()
}

/// Parses a single expression over the given variables and bound names.
pub fn parse_expr(
    text: &str,
    vars: &[String],
    names: &HashSet<String>,
) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        vars: vars.to_vec(),
        names: names.clone(),
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected(&["end of input"]);
    }
    Ok(e)
}

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => SUM,
        Expr::Bin(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => 4,
        _ => ATOM,
    }
}

fn is_differential_atom(e: &Expr) -> bool {
    matches!(e, Expr::Partial(_) | Expr::Differential(_) | Expr::Radial)
}

/// Canonical text; `parse_expr(&print_expr(e, vars), vars, _) == e`.
pub fn print_expr(e: &Expr, vars: &[String]) -> String {
    let wrap = |e: &Expr, min: u8| {
        let s = print_expr(e, vars);
        if prec(e) < min {
            format!("({s})")
        } else {
            s
        }
    };
    let list = |xs: &[Expr]| {
        xs.iter()
            .map(|x| print_expr(x, vars))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match e {
        Expr::Num(n) => n.to_string(),
        Expr::Var(i) => vars[*i].clone(),
        Expr::Name(n) => n.clone(),
        Expr::Imag => "i".into(),
        Expr::Partial(i) => format!("d/d{}", vars[*i]),
        Expr::Differential(i) => format!("d{}", vars[*i]),
        Expr::Radial => "R".into(),
        Expr::Lit(l) => l.name().into(),
        Expr::Neg(a) => format!("-{}", wrap(a, UNARY)),
        Expr::Bin(op, a, b) => {
            let p = prec(e);
            let l = wrap(a, p);
            let r = wrap(b, p + 1);
            match op {
                BinOp::Add => format!("{l} + {r}"),
                BinOp::Sub => format!("{l} - {r}"),
                BinOp::Mul if is_differential_atom(b) => format!("{l} {r}"),
                BinOp::Mul => format!("{l}*{r}"),
                BinOp::Div => format!("{l}/{r}"),
            }
        }
        Expr::Pow(a, k) => format!("{}^{k}", wrap(a, ATOM)),
        Expr::Tuple(xs) if xs.len() == 1 => format!("({},)", list(xs)),
        Expr::Tuple(xs) => format!("({})", list(xs)),
        Expr::Bracket(a, b) => format!("[{}, {}]", print_expr(a, vars), print_expr(b, vars)),
        Expr::Call(f, xs) => format!("{f}({})", list(xs)),
    }
}

pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    let s = &doc.settings;
    if let Some(n) = s.order {
        out += &format!("order {n}\n");
    }
    if let Some(n) = s.dim {
        out += &format!("dim {n}\n");
    }
    if let Some(v) = &s.vars {
        out += &format!("vars {}\n", v.join(", "));
    }
    if let Some(l) = s.word_bound {
        out += &format!("word_bound {l}\n");
    }
    if let Some(d) = s.depth {
        out += &format!("depth {d}\n");
    }
    if let Some(c) = s.cap {
        out += &format!("cap {c}\n");
    }
    let vars = doc.vars();
    for st in &doc.statements {
        match &st.kind {
            StatementKind::Let(n, e) => out += &format!("{n} = {}\n", print_expr(e, &vars)),
            StatementKind::Assert(e, None) => out += &format!("assert {}\n", print_expr(e, &vars)),
            StatementKind::Assert(a, Some((c, b))) => {
                let op = if *c == Cmp::Eq { "==" } else { "!=" };
                out += &format!(
                    "assert {} {op} {}\n",
                    print_expr(a, &vars),
                    print_expr(b, &vars)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(s: &str) -> Expr {
        parse_expr(s, &default_vars(), &HashSet::new()).unwrap()
    }

    #[test]
    fn fields_and_forms() {
        let e = expr("x*y d/dx - y^2 d/dy");
        assert_eq!(print_expr(&e, &default_vars()), "x*y d/dx - y^2 d/dy");
        let w = expr("3 dx/x + d(1/(x*y))");
        assert_eq!(print_expr(&w, &default_vars()), "3 dx/x + d(1/(x*y))");
        let r = expr("(x + y) R");
        assert_eq!(print_expr(&r, &default_vars()), "(x + y) R");
    }

    #[test]
    fn round_trips() {
        for s in [
            "x - (y - x)",
            "-(x + y)^2",
            "(1/2+i)*x",
            "x^-1",
            "(x,)",
            "[exp(x^2 d/dy), (2*x, 4*y)]",
            "x - -y",
            "a/(b*c)",
        ] {
            let names = HashSet::from(["a".to_string(), "b".to_string(), "c".to_string()]);
            let e = parse_expr(s, &default_vars(), &names).unwrap();
            let p = print_expr(&e, &default_vars());
            assert_eq!(
                parse_expr(&p, &default_vars(), &names).unwrap(),
                e,
                "{s} -> {p}"
            );
        }
    }

    #[test]
    fn positioned_errors() {
        let e = parse_document("order 5\nX = x $ y\n").unwrap_err();
        assert_eq!(
            (e.line, e.col, e.kind.clone()),
            (2, 7, ParseErrorKind::Lexical('$'))
        );
        let e = parse_document("order 5\nX = x +\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
        assert_eq!(e.line, 2);
        let e = parse_document("order 5\nX = exp(x, y, x)\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { .. }));
        let e = parse_document("order 5\nX = Y\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Undefined("Y".into()));
        let e = parse_document("X = x\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Header(_)));
        assert_eq!(parse_document("").unwrap(), Document::default());
    }

    #[test]
    fn documents() {
        let text =
            "order 6\nvars u, v\n# comment\nX = u d/du + (u*v\n  + v^2) d/dv\nassert [X, X] == 0\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.statements.len(), 2);
        let printed = print_document(&doc);
        assert_eq!(
            printed,
            "order 6\nvars u, v\nX = u d/du + (u*v + v^2) d/dv\nassert [X, X] == 0\n"
        );
        assert_eq!(parse_document(&printed).unwrap(), doc);
    }
}

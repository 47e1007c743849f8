//! Recursive-descent parser for observables, λ-scalars and differential
//! operators.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' int)?          // `lam^-k` also allowed
//! atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `*` is the pointwise product. `/` only divides by an invertible
//! λ-scalar. Built-ins: `i`, `lam`, `gauss(γ)`, `exp_star(H, β)`, `conj(f)`
//! and `comp(k, f)` with 1-based `k`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::coeffs::{Chart, Mono, Observable};
use crate::error::{Error, Result};
use crate::oper::DiffOp;
use crate::scalar::{cq_real, Cq, Rational, Scalar};
use crate::series::LambdaSeries;
use crate::star::{star_exp, StarAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let start = k;
        if c.is_ascii_digit() || (c == '.' && chars.get(k + 1).is_some_and(|d| d.is_ascii_digit())) {
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            let value = decimal(&text).ok_or(Error::Syntax { line, col, expected: "a number".into() })?;
            out.push((Tok::Num(value), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), pos));
        } else if "+-*/^(),".contains(c) {
            k += 1;
            out.push((Tok::Sym(c), pos));
        } else {
            return Err(Error::Syntax { line, col, expected: format!("a token, found `{c}`") });
        }
        col += k - start;
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

/// `12`, `0.25` and `3.` as exact rationals.
fn decimal(text: &str) -> Option<Rational> {
    let (int_part, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') {
        return None;
    }
    let digits = format!("{int_part}{frac}");
    let n: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    Some(Rational::new(n, num_traits::pow(BigInt::from(10), frac.len())))
}

/// Parsed expression, before it is given a chart.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i32),
    Call(String, Vec<Expr>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let Pos { line, col } = self.pos();
        Err(Error::Syntax { line, col, expected: expected.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Tok::Sym('/') {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let is_lam = matches!(&base, Expr::Ident(s, _) if s == "lam");
        let negative = is_lam && self.eat('-');
        let k = match self.peek() {
            Tok::Num(r) if r.is_integer() => r.to_integer().to_i32(),
            _ => None,
        };
        let Some(k) = k else {
            return self.fail(if is_lam { "an integer exponent" } else { "a nonnegative integer exponent" });
        };
        self.at += 1;
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(r) => {
                self.at += 1;
                Ok(Expr::Num(r))
            }
            Tok::Ident(name) => {
                self.at += 1;
                if !self.eat('(') {
                    return Ok(Expr::Ident(name, pos));
                }
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(Expr::Call(name, args, pos))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.fail("a number, variable, function call or `(`"),
        }
    }
}

/// Parse text into an expression tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

/// Evaluation environment: the chart, the λ-window and, for `exp_star`, the
/// star algebra.
#[derive(Clone, Debug)]
pub struct Context<'a> {
    pub chart: Chart,
    pub trunc: i32,
    pub alg: Option<&'a StarAlgebra>,
    /// Accept derivative symbols `dq1`, `dp1`, ….
    pub derivatives: bool,
}

impl<'a> Context<'a> {
    pub fn new(chart: &Chart, trunc: i32) -> Self {
        Context { chart: chart.clone(), trunc, alg: None, derivatives: false }
    }

    pub fn of(alg: &'a StarAlgebra) -> Self {
        Context { chart: alg.chart().clone(), trunc: alg.trunc(), alg: Some(alg), derivatives: false }
    }

    /// Index of a chart variable; a bare `q`, `p`, `z`, `zbar` or `ybar`
    /// names the first one when `n = 1`.
    fn var(&self, name: &str) -> Option<usize> {
        self.chart.var_index(name).or_else(|| {
            if self.chart.n == 1 {
                self.chart.var_index(&format!("{name}1"))
            } else {
                None
            }
        })
    }
}

/// Commuting polynomial in derivative symbols with observable coefficients.
/// A plain observable is the entry at the empty multi-index.
#[derive(Clone, Debug)]
struct Sym {
    terms: BTreeMap<Mono, Observable<Cq>>,
}

impl Sym {
    fn obs(ctx: &Context, f: Observable<Cq>) -> Sym {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Mono::one(ctx.chart.nvars()), f);
        }
        Sym { terms }
    }

    fn into_obs(self, ctx: &Context, what: &str, pos: Pos) -> Result<Observable<Cq>> {
        let one = Mono::one(ctx.chart.nvars());
        if self.terms.keys().any(|m| *m != one) {
            return Err(Error::Syntax { line: pos.line, col: pos.col, expected: format!("{what} without derivatives") });
        }
        Ok(self.terms.into_values().next().unwrap_or_else(|| Observable::zero(&ctx.chart, ctx.trunc)))
    }

    fn add(mut self, other: Sym, sign: bool) -> Result<Sym> {
        for (m, f) in other.terms {
            let f = if sign { f } else { f.neg() };
            let sum = match self.terms.remove(&m) {
                Some(g) => g.checked_add(&f)?,
                None => f,
            };
            if !sum.is_zero() {
                self.terms.insert(m, sum);
            }
        }
        Ok(self)
    }

    fn mul(&self, other: &Sym) -> Result<Sym> {
        let mut out = Sym { terms: BTreeMap::new() };
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let piece = Sym { terms: BTreeMap::from([(a.mul(b), f.checked_pointwise(g)?)]) };
                out = out.add(piece, true)?;
            }
        }
        Ok(out)
    }

    fn map(&self, f: impl Fn(&Observable<Cq>) -> Observable<Cq>) -> Sym {
        Sym { terms: self.terms.iter().map(|(m, g)| (m.clone(), f(g))).filter(|(_, g)| !g.is_zero()).collect() }
    }
}

fn syntax(pos: Pos, expected: impl Into<String>) -> Error {
    Error::Syntax { line: pos.line, col: pos.col, expected: expected.into() }
}

fn expr_pos(e: &Expr) -> Pos {
    match e {
        Expr::Ident(_, p) | Expr::Call(_, _, p) | Expr::Div(_, _, p) => *p,
        Expr::Neg(a) | Expr::Pow(a, _) => expr_pos(a),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => expr_pos(a),
        Expr::Num(_) => Pos { line: 1, col: 1 },
    }
}

fn eval(e: &Expr, ctx: &Context) -> Result<Sym> {
    let (chart, t) = (&ctx.chart, ctx.trunc);
    match e {
        Expr::Num(r) => Ok(Sym::obs(ctx, Observable::scalar(chart, t, cq_real(r.clone())))),
        Expr::Ident(name, _) => ident(name, ctx),
        Expr::Neg(a) => Ok(eval(a, ctx)?.map(|f| f.neg())),
        Expr::Add(a, b) => eval(a, ctx)?.add(eval(b, ctx)?, true),
        Expr::Sub(a, b) => eval(a, ctx)?.add(eval(b, ctx)?, false),
        Expr::Mul(a, b) => eval(a, ctx)?.mul(&eval(b, ctx)?),
        Expr::Div(a, b, pos) => {
            let d = eval(b, ctx)?.into_obs(ctx, "a divisor", *pos)?;
            let s = d.as_lambda_scalar().ok_or_else(|| syntax(*pos, "a λ-scalar divisor"))?;
            let inv = s.inverse().map_err(|_| syntax(*pos, "an invertible divisor"))?;
            Ok(eval(a, ctx)?.map(|f| f.scale_series(&inv)))
        }
        Expr::Pow(a, k) => {
            if matches!(&**a, Expr::Ident(s, _) if s == "lam") {
                return Ok(Sym::obs(ctx, Observable::one(chart, t).shift(*k)));
            }
            let base = eval(a, ctx)?;
            let mut acc = Sym::obs(ctx, Observable::one(chart, t));
            for _ in 0..*k {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
        Expr::Call(name, args, pos) => call(name, args, *pos, ctx),
    }
}

fn ident(name: &str, ctx: &Context) -> Result<Sym> {
    let (chart, t) = (&ctx.chart, ctx.trunc);
    match name {
        "i" => return Ok(Sym::obs(ctx, Observable::scalar(chart, t, Cq::imag_unit()))),
        "lam" => return Ok(Sym::obs(ctx, Observable::one(chart, t).shift(1))),
        _ => {}
    }
    if let Some(v) = ctx.var(name) {
        return Ok(Sym::obs(ctx, Observable::var(chart, t, v)));
    }
    if ctx.derivatives {
        if let Some(v) = name.strip_prefix('d').and_then(|rest| ctx.var(rest)) {
            let m = Mono::var(chart.nvars(), v);
            return Ok(Sym { terms: BTreeMap::from([(m, Observable::one(chart, t))]) });
        }
    }
    Err(Error::UnknownVariable(name.to_string()))
}

fn arity(name: &str, args: &[Expr], n: usize, pos: Pos) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(syntax(pos, format!("{n} argument(s) to `{name}`")))
    }
}

fn constant(e: &Expr, ctx: &Context, what: &str) -> Result<Rational> {
    let pos = expr_pos(e);
    let f = eval(e, ctx)?.into_obs(ctx, what, pos)?;
    let s = f.as_lambda_scalar().ok_or_else(|| syntax(pos, format!("a constant {what}")))?;
    if s.is_zero() {
        return Ok(Rational::zero());
    }
    match s.coeff(0) {
        Some(c) if s.len() == 1 && c.im.is_zero() => Ok(c.re.clone()),
        _ => Err(syntax(pos, format!("a real constant {what}"))),
    }
}

fn call(name: &str, args: &[Expr], pos: Pos, ctx: &Context) -> Result<Sym> {
    let (chart, t) = (&ctx.chart, ctx.trunc);
    match name {
        "gauss" => {
            arity(name, args, 1, pos)?;
            let gamma = constant(&args[0], ctx, "Gaussian exponent")?;
            Ok(Sym::obs(ctx, Observable::gauss(chart, t, gamma)))
        }
        "conj" => {
            arity(name, args, 1, pos)?;
            Ok(eval(&args[0], ctx)?.map(|f| f.conj()))
        }
        "comp" => {
            arity(name, args, 2, pos)?;
            let k = constant(&args[0], ctx, "component index")?;
            let k = k
                .is_integer()
                .then(|| k.to_integer().to_usize())
                .flatten()
                .filter(|&k| k >= 1 && k <= chart.components)
                .ok_or_else(|| syntax(expr_pos(&args[0]), format!("a component in 1..={}", chart.components)))?;
            let keep = BTreeSet::from([k - 1]);
            Ok(eval(&args[1], ctx)?.map(|f| f.restrict(&keep)))
        }
        "exp_star" => {
            arity(name, args, 2, pos)?;
            let alg = ctx.alg.ok_or_else(|| syntax(pos, "a star product for `exp_star`"))?;
            let h = eval(&args[0], ctx)?.into_obs(ctx, "a Hamiltonian", expr_pos(&args[0]))?;
            let b = eval(&args[1], ctx)?.into_obs(ctx, "an inverse temperature", expr_pos(&args[1]))?;
            let beta = b.as_lambda_scalar().ok_or_else(|| syntax(expr_pos(&args[1]), "a λ-scalar β"))?;
            Ok(Sym::obs(ctx, star_exp(alg, &h, &beta)?))
        }
        other => Err(syntax(pos, format!("a known function, not `{other}`"))),
    }
}

/// Evaluate an expression tree to an observable.
pub fn eval_observable(e: &Expr, ctx: &Context) -> Result<Observable<Cq>> {
    eval(e, ctx)?.into_obs(ctx, "an observable", expr_pos(e))
}

/// Parse an observable on `chart`, truncated at `λ^trunc`.
pub fn parse_observable(src: &str, chart: &Chart, trunc: i32) -> Result<Observable<Cq>> {
    eval_observable(&parse_expr(src)?, &Context::new(chart, trunc))
}

/// Parse an observable of a star algebra; `exp_star` is available.
pub fn parse_in(alg: &StarAlgebra, src: &str) -> Result<Observable<Cq>> {
    eval_observable(&parse_expr(src)?, &Context::of(alg))
}

/// Parse a λ-scalar such as `1/2 + i*lam`.
pub fn parse_series(src: &str, trunc: i32) -> Result<LambdaSeries<Cq>> {
    let chart = Chart::config(1);
    let e = parse_expr(src)?;
    let f = eval_observable(&e, &Context::new(&chart, trunc))?;
    f.as_lambda_scalar().ok_or_else(|| syntax(expr_pos(&e), "a λ-scalar"))
}

/// Parse a constant rational such as `3/2` or `-0.5`.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let s = parse_series(src, 0)?;
    if s.is_zero() {
        return Ok(Rational::zero());
    }
    match s.coeff(0) {
        Some(c) if s.len() == 1 && c.im.is_zero() => Ok(c.re.clone()),
        _ => Err(Error::Invalid(format!("`{src}` is not a real constant"))),
    }
}

/// Parse a differential operator written with symbols `dq1`, `dp1`, … and
/// coefficients to their left, e.g. `q1*dp1 + 1/2*i*lam*dq1^2`.
pub fn parse_diffop(src: &str, chart: &Chart, trunc: i32) -> Result<DiffOp<Cq>> {
    if chart.components != 1 {
        return Err(Error::UnsupportedChart(format!("differential operators on {chart}")));
    }
    let ctx = Context { derivatives: true, ..Context::new(chart, trunc) };
    let sym = eval(&parse_expr(src)?, &ctx)?;
    Ok(DiffOp::from_terms(
        chart.nvars(),
        trunc,
        sym.terms.into_iter().map(|(m, f)| (m, f.into_parts().remove(0))),
    ))
}


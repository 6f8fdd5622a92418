//! Infix expressions for the calculator and the function analyser.
//!
//! The calculator grammar is numbers, `+ - * /`, unary minus and
//! parentheses. Function expressions additionally allow one variable, `^`,
//! the constants `pi` and `e`, and a handful of one-argument functions.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ExprError {
    /// Character offset in text input, or token index in button input.
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError { pos, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grammar {
    Calculator,
    /// Function grammar over the named variable.
    Function(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sqrt,
    Exp,
    Ln,
    Log10,
    Abs,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "asin" => Func::Asin,
            "acos" => Func::Acos,
            "atan" => Func::Atan,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "log" => Func::Log10,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Asin => v.asin(),
            Func::Acos => v.acos(),
            Func::Atan => v.atan(),
            Func::Sqrt => v.sqrt(),
            Func::Exp => v.exp(),
            Func::Ln => v.ln(),
            Func::Log10 => v.log10(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates with IEEE-754 semantics; domain errors yield NaN or
    /// infinities rather than failing.
    pub fn eval(&self, var: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => var,
            Expr::Neg(e) => -e.eval(var),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(var), b.eval(var));
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    '^' => a.powf(b),
                    _ => unreachable!("parser only builds known operators"),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(var)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {op} {b})"),
            Expr::Call(func, e) => write!(f, "{func:?}({e})"),
        }
    }
}

fn normalise_op(c: char) -> Option<char> {
    Some(match c {
        '+' => '+',
        '-' | '−' => '-',
        '*' | '×' => '*',
        '/' | '÷' => '/',
        '^' => '^',
        _ => return None,
    })
}

fn lex_text(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let v = lit.parse::<f64>().or_else(|_| err(start, format!("bad number {lit:?}")))?;
            out.push((Tok::Num(v), start));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if c == '(' {
            out.push((Tok::LParen, i));
            i += 1;
        } else if c == ')' {
            out.push((Tok::RParen, i));
            i += 1;
        } else if let Some(op) = normalise_op(c) {
            out.push((Tok::Op(op), i));
            i += 1;
        } else {
            return err(i, format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

/// Lexes calculator button labels: consecutive digit and point buttons form
/// one literal. Positions are label indices.
fn lex_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        let l = labels[i].as_ref();
        let is_num = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '.');
        if is_num(l) {
            let start = i;
            let mut lit = String::new();
            while i < labels.len() && is_num(labels[i].as_ref()) {
                lit.push_str(labels[i].as_ref());
                i += 1;
            }
            let v = lit.parse::<f64>().or_else(|_| err(start, format!("bad number {lit:?}")))?;
            out.push((Tok::Num(v), start));
            continue;
        }
        let mut cs = l.chars();
        let tok = match (cs.next(), cs.next()) {
            (Some('('), None) => Tok::LParen,
            (Some(')'), None) => Tok::RParen,
            (Some(c), None) => match normalise_op(c) {
                Some('^') | None => return err(i, format!("unexpected token {l:?}")),
                Some(op) => Tok::Op(op),
            },
            _ => return err(i, format!("unexpected token {l:?}")),
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    grammar: Grammar,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek() {
            let op = *op;
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek() {
            let op = *op;
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            if self.grammar == Grammar::Calculator {
                return err(self.pos(), "'^' is not available");
            }
            self.at += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return err(pos, "unexpected end of expression");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close(pos)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let Grammar::Function(var) = self.grammar else {
                    return err(pos, format!("unexpected name {name:?}"));
                };
                if name == var {
                    return Ok(Expr::Var);
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => return Ok(Expr::Num(std::f64::consts::E)),
                    _ => {}
                }
                let Some(func) = Func::lookup(&name) else {
                    return err(pos, format!("unknown name {name:?}"));
                };
                if self.peek() != Some(&Tok::LParen) {
                    return err(self.pos(), format!("expected '(' after {name}"));
                }
                let open = self.pos();
                self.at += 1;
                let arg = self.expr()?;
                self.close(open)?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::RParen => err(pos, "unexpected ')'"),
            Tok::Op(op) => err(pos, format!("unexpected operator '{op}'")),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ExprError> {
        if self.peek() == Some(&Tok::RParen) {
            self.at += 1;
            Ok(())
        } else {
            err(self.pos(), format!("unclosed '(' opened at {open}"))
        }
    }

    fn finish(mut self) -> Result<Expr, ExprError> {
        let e = self.expr()?;
        if self.at < self.toks.len() {
            return err(self.pos(), "unexpected trailing input");
        }
        Ok(e)
    }
}

pub fn parse(text: &str, grammar: Grammar) -> Result<Expr, ExprError> {
    let toks = lex_text(text)?;
    Parser { toks, at: 0, end: text.chars().count(), grammar }.finish()
}

/// Evaluates a calculator token sequence (button labels such as `"7"`, `"+"`,
/// `"("`). Division by zero follows IEEE-754 and yields an infinity.
pub fn eval_expression<S: AsRef<str>>(tokens: &[S]) -> Result<f64, ExprError> {
    let toks = lex_labels(tokens)?;
    let expr = Parser { toks, at: 0, end: tokens.len(), grammar: Grammar::Calculator }.finish()?;
    Ok(expr.eval(0.0))
}

/// Display text for a calculator result.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v == f64::INFINITY {
        "∞".into()
    } else if v == f64::NEG_INFINITY {
        "-∞".into()
    } else if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

//! ASCII expression language for vertex-algebra elements.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := integer | 'c' | '(' expr ')' | 'vac' | 'L' | 'W' | 'U(i,j)'
//!          | 'd(k, expr)' | 'no(expr, expr, ...)' | 'circ(n, expr, expr)'
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. `no(a1, ..., ak)` is `:a1 (:a2 ... ak:):`. Scalars are rational
//! functions of `c`; a scalar standing alone denotes a multiple of `vac`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{Element, ExprTree, Generator};
use crate::scalar::{CRat, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l0, c0) = (line, col);
        if ch == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if ch.is_whitespace() {
            chars.next();
            col += 1;
        } else if ch == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, col: c0 });
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if "+-*/^(),".contains(ch) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(ch), line: l0, col: c0 });
        } else {
            return Err(SyntaxError::Syntax { line, col, msg: format!("unexpected character `{ch}`") });
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Val {
    Scalar(CRat),
    Tree(ExprTree),
}

impl Val {
    fn into_tree(self) -> ExprTree {
        match self {
            Val::Scalar(k) => ExprTree::scale(k, ExprTree::Vacuum),
            Val::Tree(t) => t,
        }
    }
}

fn scaled(k: CRat, t: ExprTree) -> ExprTree {
    match t {
        ExprTree::Scale(j, inner) => ExprTree::Scale(&k * &j, inner),
        t => ExprTree::scale(k, t),
    }
}

fn summed(a: ExprTree, b: ExprTree) -> ExprTree {
    let mut xs = match a {
        ExprTree::Sum(xs) => xs,
        a => vec![a],
    };
    match b {
        ExprTree::Sum(ys) => xs.extend(ys),
        b => xs.push(b),
    }
    ExprTree::Sum(xs)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.err(&t, format!("expected `{c}`"))
        }
    }

    fn index(&mut self) -> Result<u32, SyntaxError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => match n.to_u32() {
                Some(n) => Ok(n),
                None => self.err(&t, "index out of range"),
            },
            _ => self.err(&t, "expected a non-negative integer"),
        }
    }

    fn tree_arg(&mut self) -> Result<ExprTree, SyntaxError> {
        Ok(self.expr()?.into_tree())
    }

    fn expr(&mut self) -> Result<Val, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            let neg = if self.at_sym('+') {
                false
            } else if self.at_sym('-') {
                true
            } else {
                return Ok(acc);
            };
            self.next();
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(if neg { &a - &b } else { &a + &b }),
                (a, b) => {
                    let b = b.into_tree();
                    let b = if neg { scaled(CRat::from_int(-1), b) } else { b };
                    Val::Tree(summed(a.into_tree(), b))
                }
            };
        }
    }

    fn term(&mut self) -> Result<Val, SyntaxError> {
        let mut acc = self.unary()?;
        loop {
            let op = self.peek().clone();
            if !(self.at_sym('*') || self.at_sym('/')) {
                return Ok(acc);
            }
            self.next();
            let rhs = self.unary()?;
            acc = match (op.tok.clone(), acc, rhs) {
                (Tok::Sym('*'), Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(&a * &b),
                (Tok::Sym('*'), Val::Scalar(k), Val::Tree(t)) | (Tok::Sym('*'), Val::Tree(t), Val::Scalar(k)) => {
                    Val::Tree(scaled(k, t))
                }
                (Tok::Sym('*'), _, _) => return self.err(&op, "product of two fields; use no(...) or circ(...)"),
                (_, a, Val::Scalar(b)) => {
                    let Ok(inv) = b.recip() else { return self.err(&op, "division by zero") };
                    match a {
                        Val::Scalar(a) => Val::Scalar(&a * &inv),
                        Val::Tree(t) => Val::Tree(scaled(inv, t)),
                    }
                }
                _ => return self.err(&op, "division by a field"),
            };
        }
    }

    fn unary(&mut self) -> Result<Val, SyntaxError> {
        if self.at_sym('-') {
            self.next();
            return Ok(match self.unary()? {
                Val::Scalar(k) => Val::Scalar(-&k),
                Val::Tree(t) => Val::Tree(scaled(CRat::from_int(-1), t)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, SyntaxError> {
        let base = self.primary()?;
        if !self.at_sym('^') {
            return Ok(base);
        }
        let op = self.next();
        let exp = self.unary()?;
        let e = match &exp {
            Val::Scalar(k) => k.as_rat().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i32()),
            Val::Tree(_) => None,
        };
        match (base, e) {
            (Val::Scalar(b), Some(e)) => match b.pow(e) {
                Ok(v) => Ok(Val::Scalar(v)),
                Err(_) => self.err(&op, "division by zero"),
            },
            (Val::Tree(_), _) => self.err(&op, "power of a field"),
            (_, None) => self.err(&op, "exponent must be an integer"),
        }
    }

    fn primary(&mut self) -> Result<Val, SyntaxError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(Val::Scalar(CRat::from_rat(BigRat::from_integer(n.clone())))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "c" => Ok(Val::Scalar(CRat::c())),
                "vac" => Ok(Val::Tree(ExprTree::Vacuum)),
                "L" => Ok(Val::Tree(ExprTree::Atom(Generator::L))),
                "W" => Ok(Val::Tree(ExprTree::Atom(Generator::W))),
                "U" => {
                    self.expect('(')?;
                    let i = self.index()?;
                    self.expect(',')?;
                    let j = self.index()?;
                    self.expect(')')?;
                    Ok(Val::Tree(ExprTree::u(i, j)))
                }
                "d" => {
                    self.expect('(')?;
                    let k = self.index()?;
                    self.expect(',')?;
                    let x = self.tree_arg()?;
                    self.expect(')')?;
                    Ok(Val::Tree(ExprTree::Derive(k, Box::new(x))))
                }
                "circ" => {
                    self.expect('(')?;
                    let n = self.index()?;
                    self.expect(',')?;
                    let a = self.tree_arg()?;
                    self.expect(',')?;
                    let b = self.tree_arg()?;
                    self.expect(')')?;
                    Ok(Val::Tree(ExprTree::circ(n, a, b)))
                }
                "no" => {
                    self.expect('(')?;
                    let mut items = vec![self.tree_arg()?];
                    while self.at_sym(',') {
                        self.next();
                        items.push(self.tree_arg()?);
                    }
                    self.expect(')')?;
                    if items.len() < 2 {
                        return self.err(&t, "no(...) needs at least two arguments");
                    }
                    Ok(Val::Tree(ExprTree::nop_chain(items)))
                }
                _ => Err(SyntaxError::UnknownSymbol { line: t.line, col: t.col, name: name.clone() }),
            },
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Sym(ch) => self.err(&t, format!("unexpected `{ch}`")),
        }
    }
}

/// Parses an expression. A bare scalar `k` becomes `k·vac`.
pub fn parse_expr(text: &str) -> Result<ExprTree, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let v = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "trailing input");
    }
    Ok(v.into_tree())
}

/// Parses a scalar: a rational function of `c`.
pub fn parse_scalar(text: &str) -> Result<CRat, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let v = p.expr()?;
    let t = p.peek().clone();
    match (v, &t.tok) {
        (Val::Scalar(k), Tok::End) => Ok(k),
        (Val::Tree(_), _) => Err(SyntaxError::Syntax { line: 1, col: 1, msg: "expected a scalar".into() }),
        _ => p.err(&t, "trailing input"),
    }
}

/// Grammar form of a tree; `parse_expr(&print_tree(t))` builds `t` back up to
/// the flattening of nested sums and scalings.
pub fn print_tree(t: &ExprTree) -> String {
    Printed(t).to_string()
}

/// Grammar form of an element. Same as its `Display`.
pub fn print_element(e: &Element) -> String {
    e.to_string()
}

struct Printed<'a>(&'a ExprTree);

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ExprTree::Vacuum => write!(f, "vac"),
            ExprTree::Atom(g) => write!(f, "{}", g.name()),
            ExprTree::Derive(k, x) => write!(f, "d({k},{})", Printed(x)),
            ExprTree::Nop(a, b) => {
                write!(f, "no({}", Printed(a))?;
                let mut rest: &ExprTree = b;
                while let ExprTree::Nop(x, y) = rest {
                    write!(f, ",{}", Printed(x))?;
                    rest = y;
                }
                write!(f, ",{})", Printed(rest))
            }
            ExprTree::Circ(n, a, b) => write!(f, "circ({n},{},{})", Printed(a), Printed(b)),
            ExprTree::Scale(k, x) => match &**x {
                ExprTree::Sum(_) => write!(f, "({k})*({})", Printed(x)),
                _ => write!(f, "({k})*{}", Printed(x)),
            },
            ExprTree::Sum(xs) if xs.is_empty() => write!(f, "0*vac"),
            ExprTree::Sum(xs) => {
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    match x {
                        ExprTree::Sum(_) => write!(f, "({})", Printed(x))?,
                        _ => write!(f, "{}", Printed(x))?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CPoly;

    #[test]
    fn atoms_and_products() {
        assert_eq!(parse_expr("no(L,L)").unwrap(), ExprTree::nop(ExprTree::atom(Generator::L), ExprTree::atom(Generator::L)));
        assert_eq!(parse_expr("circ(1, U(0,0), U(8,0))").unwrap(), ExprTree::circ(1, ExprTree::u(0, 0), ExprTree::u(8, 0)));
        assert_eq!(parse_expr(" d( 2 ,W ) ").unwrap(), ExprTree::Derive(2, Box::new(ExprTree::atom(Generator::W))));
        let chain = parse_expr("no(L,W,L)").unwrap();
        let want = ExprTree::nop(ExprTree::atom(Generator::L), ExprTree::nop(ExprTree::atom(Generator::W), ExprTree::atom(Generator::L)));
        assert_eq!(chain, want);
    }

    #[test]
    fn scalars() {
        let d = CRat::from_poly(CPoly::linear(22, 5));
        assert_eq!(parse_scalar("32/(22+5*c)").unwrap(), CRat::from_int(32).checked_div(&d).unwrap());
        assert!(parse_scalar("(22 + 5 c)").is_err());
        assert_eq!(parse_scalar("c^2 - (c-1)*(c+1)").unwrap(), CRat::one());
        assert_eq!(parse_scalar("(22+5*c)^-2").unwrap(), d.pow(-2).unwrap());
        assert_eq!(parse_scalar("-3/6").unwrap(), CRat::from_rat(crate::scalar::rat(-1, 2)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_expr("no(L,\n  X)"),
            Err(SyntaxError::UnknownSymbol { line: 2, col: 3, name: "X".into() })
        );
        assert!(matches!(parse_expr("no(L L)"), Err(SyntaxError::Syntax { line: 1, col: 6, .. })));
        assert!(matches!(parse_expr("L*W"), Err(SyntaxError::Syntax { .. })));
        assert!(matches!(parse_expr("1/(c-c)"), Err(SyntaxError::Syntax { .. })));
        assert!(matches!(parse_expr("no(L)"), Err(SyntaxError::Syntax { .. })));
    }

    #[test]
    fn comments_and_signs() {
        let t = parse_expr("# header\nL - 2*W # trailing\n").unwrap();
        let want = ExprTree::Sum(vec![
            ExprTree::atom(Generator::L),
            ExprTree::scale(CRat::from_int(-2), ExprTree::atom(Generator::W)),
        ]);
        assert_eq!(t, want);
    }

    #[test]
    fn printer_round_trip() {
        for s in ["no(d(2,L),L,W)", "circ(3,W,no(L,W))", "(3/2)*d(1,W) + (-1)*L", "(c)*(L + W)"] {
            let t = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&print_tree(&t)).unwrap(), t, "{s}");
        }
    }
}

//! Reader and writer for a small OpenQASM 2 subset: optional header and
//! include, one `qreg`, at most one `creg`, gate statements from the fixed
//! gate set and `measure` statements.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw_line) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw_line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<f64>()
                    .map_err(|_| syntax(line, column, format!("malformed number `{s}`")))?;
                out.push(Token { tok: Tok::Num(v), line, column });
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(syntax(line, column, "unterminated string"));
                }
                out.push(Token {
                    tok: Tok::Str(chars[start..i].iter().collect()),
                    line,
                    column,
                });
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line, column });
                i += 2;
            } else if "[](),;+-*/".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line, column });
                i += 1;
            } else {
                return Err(syntax(line, column, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

struct Register {
    name: String,
    size: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.eof)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(syntax(l, c, message))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, s: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(c), .. }) if *c == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: char) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn expect_uint(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Token { tok: Tok::Num(v), .. }) if v.fract() == 0.0 && *v >= 0.0 => {
                let v = *v as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected non-negative integer"),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        loop {
            if self.eat_sym('*') {
                v *= self.factor()?;
            } else if self.eat_sym('/') {
                let d = self.factor()?;
                if d == 0.0 {
                    return self.err("division by zero in angle");
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        if self.eat_sym('-') {
            return Ok(-self.factor()?);
        }
        if self.eat_sym('+') {
            return self.factor();
        }
        if self.eat_sym('(') {
            let v = self.expr()?;
            self.expect_sym(')')?;
            return Ok(v);
        }
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Ident(s)) if s == "pi" => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            _ => self.err("expected angle expression"),
        }
    }

    /// `name[index]` or a bare `name`; returns the index if present.
    fn argument(&mut self, reg: &Register) -> Result<(Option<usize>, (usize, usize))> {
        let at = self.here();
        let name = self.expect_ident()?;
        if name != reg.name {
            return Err(syntax(at.0, at.1, format!("unknown register `{name}`")));
        }
        if self.eat_sym('[') {
            let idx_at = self.here();
            let idx = self.expect_uint()?;
            self.expect_sym(']')?;
            if idx >= reg.size {
                return Err(Error::WidthMismatch(format!(
                    "{name}[{idx}] out of range for size {} at {}:{}",
                    reg.size, idx_at.0, idx_at.1
                )));
            }
            Ok((Some(idx), at))
        } else {
            Ok((None, at))
        }
    }
}

/// Parses the supported QASM subset into a [`Circuit`], keeping source order.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let toks = lex(text)?;
    let eof = toks.last().map(|t| (t.line, t.column + 1)).unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, eof };
    let mut qreg: Option<Register> = None;
    let mut creg: Option<Register> = None;
    let mut circuit: Option<Circuit> = None;

    while let Some(tok) = p.next() {
        let (line, column) = (tok.line, tok.column);
        let word = match tok.tok {
            Tok::Ident(w) => w,
            _ => return Err(syntax(line, column, "expected statement")),
        };
        match word.as_str() {
            "OPENQASM" => {
                match p.next() {
                    Some(Token { tok: Tok::Num(_), .. }) => {}
                    _ => return Err(syntax(line, column, "expected version after OPENQASM")),
                }
                p.expect_sym(';')?;
            }
            "include" => {
                match p.next() {
                    Some(Token { tok: Tok::Str(_), .. }) => {}
                    _ => return Err(syntax(line, column, "expected file name after include")),
                }
                p.expect_sym(';')?;
            }
            "qreg" | "creg" => {
                let name = p.expect_ident()?;
                p.expect_sym('[')?;
                let size = p.expect_uint()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                let slot = if word == "qreg" { &mut qreg } else { &mut creg };
                if slot.is_some() {
                    return Err(syntax(line, column, format!("only one {word} is supported")));
                }
                if word == "qreg" {
                    circuit = Some(Circuit::new(size).map_err(|_| syntax(line, column, "qreg size must be at least 1"))?);
                }
                *slot = Some(Register { name, size });
            }
            "measure" => {
                let (Some(q), Some(c)) = (qreg.as_ref(), circuit.as_mut()) else {
                    return Err(syntax(line, column, "measure before qreg declaration"));
                };
                let Some(cr) = creg.as_ref() else {
                    return Err(syntax(line, column, "measure without creg declaration"));
                };
                let (qi, _) = p.argument(q)?;
                if !matches!(p.next(), Some(Token { tok: Tok::Arrow, .. })) {
                    return Err(syntax(line, column, "expected `->` in measure"));
                }
                let (ci, cat) = p.argument(cr)?;
                p.expect_sym(';')?;
                match (qi, ci) {
                    (Some(a), Some(b)) if a == b => c.push(Gate::measure(a))?,
                    (Some(a), Some(b)) => {
                        return Err(syntax(
                            cat.0,
                            cat.1,
                            format!("measure {}[{a}] must target {}[{a}], got [{b}]", q.name, cr.name),
                        ))
                    }
                    (None, None) => {
                        if cr.size < q.size {
                            return Err(Error::WidthMismatch(format!(
                                "creg {} has {} bits for {} qubits",
                                cr.name, cr.size, q.size
                            )));
                        }
                        for i in 0..q.size {
                            c.push(Gate::measure(i))?;
                        }
                    }
                    _ => return Err(syntax(line, column, "measure mixes register and bit arguments")),
                }
            }
            name => {
                let kind: GateKind = name.parse().map_err(|n| Error::UnsupportedGate {
                    name: n,
                    line,
                    column,
                })?;
                let (Some(q), Some(c)) = (qreg.as_ref(), circuit.as_mut()) else {
                    return Err(syntax(line, column, "gate before qreg declaration"));
                };
                let angle = if p.eat_sym('(') {
                    let v = p.expr()?;
                    p.expect_sym(')')?;
                    Some(v)
                } else {
                    None
                };
                let mut qubits = Vec::new();
                loop {
                    let (idx, at) = p.argument(q)?;
                    match idx {
                        Some(i) => qubits.push(i),
                        None => return Err(syntax(at.0, at.1, "gate arguments must be indexed qubits")),
                    }
                    if !p.eat_sym(',') {
                        break;
                    }
                }
                p.expect_sym(';')?;
                let gate = Gate::new(kind, qubits, angle).map_err(|e| syntax(line, column, e.to_string()))?;
                c.push(gate).map_err(|e| syntax(line, column, e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| syntax(eof.0, eof.1, "missing qreg declaration"))
}

/// Writes a circuit in the subset accepted by [`parse_qasm`].
pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.width());
    let _ = writeln!(out, "creg c[{}];", c.width());
    for g in c.gates() {
        match g.kind {
            GateKind::Measure => {
                let _ = writeln!(out, "measure q[{0}] -> c[{0}];", g.qubits[0]);
            }
            k => {
                out.push_str(k.name());
                if let Some(a) = g.angle {
                    // `{:?}` is the shortest representation that round-trips.
                    let _ = write!(out, "({a:?})");
                }
                let args: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(out, " {};", args.join(","));
            }
        }
    }
    out
}

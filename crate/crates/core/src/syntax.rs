//! Text and JSON representations of formulas and sequents.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! imp    := or ( "->" imp )?
//! or     := and ( "|" or )?
//! and    := prefix ( "&" and )?
//! prefix := ( "~" | "[]" | "<>" ) prefix | atom
//! atom   := "F" | "T" | IDENT | "(" imp ")"
//! seq    := list "=>" list          list := ( imp ( "," imp )* )?
//! ```
//!
//! The lexer also accepts the Unicode symbols `⊥ ⊤ ¬ □ ◇ ∧ ∨ → ⇒`.

use serde_json::Value;
use thiserror::Error;

use crate::formula::{Dialect, Formula, Kind, Var};
use crate::sequent::{FMultiset, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Bot,
    Top,
    Ident(String),
    Neg,
    Box,
    Dia,
    And,
    Or,
    Imp,
    Turnstile,
    Comma,
    LParen,
    RParen,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Bot => "`F`".into(),
        Tok::Top => "`T`".into(),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Neg => "`~`".into(),
        Tok::Box => "`[]`".into(),
        Tok::Dia => "`<>`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Turnstile => "`=>`".into(),
        Tok::Comma => "`,`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let two = |s: &str| rest.starts_with(s);
        let (tok, len) = if two("->") {
            (Tok::Imp, 2)
        } else if two("=>") {
            (Tok::Turnstile, 2)
        } else if two("[]") {
            (Tok::Box, 2)
        } else if two("<>") {
            (Tok::Dia, 2)
        } else if c.is_ascii_lowercase() {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            (Tok::Ident(rest[..end].to_string()), end)
        } else {
            let tok = match c {
                'F' | '⊥' => Tok::Bot,
                'T' | '⊤' => Tok::Top,
                '~' | '¬' => Tok::Neg,
                '□' => Tok::Box,
                '◇' => Tok::Dia,
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '→' => Tok::Imp,
                '⇒' => Tok::Turnstile,
                ',' => Tok::Comma,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(ParseError::new(i, format!("unexpected character {c:?}"))),
            };
            if matches!(tok, Tok::Bot | Tok::Top) {
                // `F`/`T` must not run into an identifier tail, e.g. `Foo`.
                if let Some(next) = bytes.get(i + 1) {
                    if next.is_ascii_alphanumeric() || *next == b'_' {
                        return Err(ParseError::new(i, "unknown token"));
                    }
                }
            }
            (tok, c.len_utf8())
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dialect: Option<Dialect>,
}

impl Parser {
    fn new(text: &str, dialect: Option<Dialect>) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            dialect,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.offset(), format!("expected {what}, found {}", describe(t))),
            None => ParseError::new(self.end, format!("expected {what}, found end of input")),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.and()?;
        if self.eat(&Tok::Or) {
            let rhs = self.or()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.prefix()?;
        if self.eat(&Tok::And) {
            let rhs = self.and()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Neg) => {
                self.pos += 1;
                Ok(Formula::neg(self.prefix()?))
            }
            Some(Tok::Box) => {
                self.pos += 1;
                Ok(Formula::boxed(self.prefix()?))
            }
            Some(Tok::Dia) => {
                if self.dialect == Some(Dialect::Intuitionistic) {
                    return Err(ParseError::new(at, "`<>` is not part of the intuitionistic language"));
                }
                self.pos += 1;
                Ok(Formula::dia(self.prefix()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let f = match self.peek() {
            Some(Tok::Bot) => Formula::bot(),
            Some(Tok::Top) => Formula::top(),
            Some(Tok::Ident(name)) => Formula::var(Var::new(name).expect("lexer yields identifiers")),
            Some(Tok::LParen) => {
                let open = self.offset();
                self.pos += 1;
                let inner = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return Err(match self.peek() {
                        None => ParseError::new(open, "unbalanced parenthesis"),
                        Some(_) => self.unexpected("`)`"),
                    });
                }
                return Ok(inner);
            }
            _ => return Err(self.unexpected("a formula")),
        };
        self.pos += 1;
        Ok(f)
    }

    fn list(&mut self, stop: Option<&Tok>) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == stop {
            return Ok(out);
        }
        loop {
            out.push(self.imp()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::RParen) => Err(ParseError::new(self.offset(), "unbalanced parenthesis")),
            Some(t) => Err(ParseError::new(
                self.offset(),
                format!("trailing input starting at {}", describe(t)),
            )),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_in(text, None)
}

/// Like [`parse_formula`], but rejects `<>` when `dialect` is intuitionistic.
pub fn parse_formula_in(text: &str, dialect: Option<Dialect>) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, dialect)?;
    let f = p.imp()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    parse_sequent_in(text, None)
}

pub fn parse_sequent_in(text: &str, dialect: Option<Dialect>) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text, dialect)?;
    let left = p.list(Some(&Tok::Turnstile))?;
    if !p.eat(&Tok::Turnstile) {
        return Err(p.unexpected("`,` or `=>`"));
    }
    let right = p.list(None)?;
    p.finish()?;
    Ok(Sequent::new(FMultiset::from_iter(left), FMultiset::from_iter(right)))
}

/// How much sugar the printer reconstructs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// The raw tree: only `F`, identifiers, `&`, `|`, `->`, `[]`.
    Ascii,
    /// Also prints `⊥ → ⊥` as `T`, `φ → ⊥` as `~φ`, and `□(φ → ⊥) → ⊥` as `<>φ`.
    Resugared,
}

const LEVEL_IMP: u8 = 1;
const LEVEL_OR: u8 = 2;
const LEVEL_AND: u8 = 3;
const LEVEL_PREFIX: u8 = 4;

pub fn print_formula(f: &Formula, style: Style) -> String {
    let mut out = String::new();
    write_formula(f, style, LEVEL_IMP, &mut out);
    out
}

fn write_formula(f: &Formula, style: Style, min_level: u8, out: &mut String) {
    enum Shape<'a> {
        Atom(String),
        Prefix(&'static str, &'a Formula),
        Infix(&'static str, u8, &'a Formula, &'a Formula),
    }
    let shape = match (style, f.kind()) {
        (Style::Resugared, _) if f.is_top() => Shape::Atom("T".into()),
        (Style::Resugared, _) if f.as_dia().is_some() => Shape::Prefix("<>", f.as_dia().unwrap()),
        (Style::Resugared, _) if f.as_neg().is_some() => Shape::Prefix("~", f.as_neg().unwrap()),
        (_, Kind::Bot) => Shape::Atom("F".into()),
        (_, Kind::Var(v)) => Shape::Atom(v.to_string()),
        (_, Kind::Box(a)) => Shape::Prefix("[]", a),
        (_, Kind::And(a, b)) => Shape::Infix(" & ", LEVEL_AND, a, b),
        (_, Kind::Or(a, b)) => Shape::Infix(" | ", LEVEL_OR, a, b),
        (_, Kind::Imp(a, b)) => Shape::Infix(" -> ", LEVEL_IMP, a, b),
    };
    match shape {
        Shape::Atom(s) => out.push_str(&s),
        Shape::Prefix(op, a) => {
            out.push_str(op);
            write_formula(a, style, LEVEL_PREFIX, out);
        }
        Shape::Infix(op, level, a, b) => {
            let paren = level < min_level;
            if paren {
                out.push('(');
            }
            // Right-associative: the left operand must bind strictly tighter.
            write_formula(a, style, level + 1, out);
            out.push_str(op);
            write_formula(b, style, level, out);
            if paren {
                out.push(')');
            }
        }
    }
}

fn print_list(m: &FMultiset, style: Style) -> String {
    m.iter_occurrences()
        .map(|f| print_formula(f, style))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_sequent(s: &Sequent, style: Style) -> String {
    let mut out = String::new();
    if !s.left.is_empty() {
        out.push_str(&print_list(&s.left, style));
        out.push(' ');
    }
    out.push_str("=>");
    if !s.right.is_empty() {
        out.push(' ');
        out.push_str(&print_list(&s.right, style));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid JSON at {path}: {message}")]
pub struct DecodeError {
    pub path: String,
    pub message: String,
}

fn decode_err(path: &str, message: impl Into<String>) -> DecodeError {
    DecodeError {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn formula_to_json(f: &Formula) -> String {
    let mut out = String::new();
    write_json(f, &mut out);
    out
}

fn write_json(f: &Formula, out: &mut String) {
    match f.kind() {
        Kind::Bot => out.push_str(r#"{"k":"bot"}"#),
        Kind::Var(v) => {
            out.push_str(r#"{"k":"var","v":"#);
            out.push_str(&serde_json::to_string(v.as_str()).expect("string encodes"));
            out.push('}');
        }
        Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
            let tag = match f.kind() {
                Kind::And(..) => "and",
                Kind::Or(..) => "or",
                _ => "imp",
            };
            out.push_str(r#"{"k":""#);
            out.push_str(tag);
            out.push_str(r#"","l":"#);
            write_json(a, out);
            out.push_str(r#","r":"#);
            write_json(b, out);
            out.push('}');
        }
        Kind::Box(a) => {
            out.push_str(r#"{"k":"box","a":"#);
            write_json(a, out);
            out.push('}');
        }
    }
}

pub fn sequent_to_json(s: &Sequent) -> String {
    let side = |m: &FMultiset| m.iter_occurrences().map(formula_to_json).collect::<Vec<_>>().join(",");
    format!(r#"{{"left":[{}],"right":[{}]}}"#, side(&s.left), side(&s.right))
}

pub fn formula_from_json(text: &str) -> Result<Formula, DecodeError> {
    let v: Value = serde_json::from_str(text).map_err(|e| decode_err("$", e.to_string()))?;
    formula_from_value(&v, "$")
}

pub fn sequent_from_json(text: &str) -> Result<Sequent, DecodeError> {
    let v: Value = serde_json::from_str(text).map_err(|e| decode_err("$", e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| decode_err("$", "expected an object"))?;
    check_keys(obj, &["left", "right"], "$")?;
    let side = |key: &str| -> Result<FMultiset, DecodeError> {
        let path = format!("$.{key}");
        let arr = obj
            .get(key)
            .ok_or_else(|| decode_err(&path, "missing field"))?
            .as_array()
            .ok_or_else(|| decode_err(&path, "expected an array"))?;
        arr.iter()
            .enumerate()
            .map(|(i, item)| formula_from_value(item, &format!("{path}[{i}]")))
            .collect()
    };
    Ok(Sequent::new(side("left")?, side("right")?))
}

fn check_keys(obj: &serde_json::Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), DecodeError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(decode_err(path, format!("unknown key {key:?}")));
        }
    }
    Ok(())
}

fn formula_from_value(v: &Value, path: &str) -> Result<Formula, DecodeError> {
    let obj = v.as_object().ok_or_else(|| decode_err(path, "expected an object"))?;
    let tag = obj
        .get("k")
        .ok_or_else(|| decode_err(path, "missing field \"k\""))?
        .as_str()
        .ok_or_else(|| decode_err(&format!("{path}.k"), "expected a string"))?;
    let child = |key: &str| -> Result<Formula, DecodeError> {
        let sub = format!("{path}.{key}");
        let v = obj.get(key).ok_or_else(|| decode_err(&sub, "missing field"))?;
        formula_from_value(v, &sub)
    };
    match tag {
        "bot" => {
            check_keys(obj, &["k"], path)?;
            Ok(Formula::bot())
        }
        "var" => {
            check_keys(obj, &["k", "v"], path)?;
            let sub = format!("{path}.v");
            let name = obj
                .get("v")
                .ok_or_else(|| decode_err(&sub, "missing field"))?
                .as_str()
                .ok_or_else(|| decode_err(&sub, "expected a string"))?;
            let var = Var::new(name).ok_or_else(|| decode_err(&sub, format!("invalid variable name {name:?}")))?;
            Ok(Formula::var(var))
        }
        "and" | "or" | "imp" => {
            check_keys(obj, &["k", "l", "r"], path)?;
            let (l, r) = (child("l")?, child("r")?);
            Ok(match tag {
                "and" => Formula::and(l, r),
                "or" => Formula::or(l, r),
                _ => Formula::imp(l, r),
            })
        }
        "box" => {
            check_keys(obj, &["k", "a"], path)?;
            Ok(Formula::boxed(child("a")?))
        }
        other => Err(decode_err(
            &format!("{path}.k"),
            format!("unknown formula kind {other:?}"),
        )),
    }
}

//! Text formats for derivations.
//!
//! A natural deduction derivation is a parenthesized tree. Leaves are
//! `(hyp <label> "<formula>")`; inner nodes are
//! `(<rule> <child>... [discharges: <label>...] [addr: <n>] [side: "<formula>"])`
//! with one child per line, indented by two spaces per level, and the options
//! on the line of the last child. A Hilbert proof is one line per step:
//! `<n>. "<formula>" <justification>`.

use std::fmt::Write as _;

use crate::formula::{parse_any, render};

use super::hilbert::{AxiomKind, HilbertLine, HilbertProof, Justification};
use super::{Derivation, ProofError, Rule, Step};

/// Render a derivation in the tree format.
pub fn render_proof(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(d: &Derivation, indent: usize, out: &mut String) {
    match d {
        Derivation::Hyp { label, formula } => {
            let _ = write!(out, "(hyp {label} \"{}\")", render(formula));
        }
        Derivation::Step(s) => {
            out.push('(');
            out.push_str(s.rule.token());
            for p in &s.premises {
                out.push('\n');
                out.push_str(&" ".repeat(indent + 2));
                write_node(p, indent + 2, out);
            }
            if !s.discharges.is_empty() {
                out.push_str(" discharges:");
                for l in &s.discharges {
                    out.push(' ');
                    out.push_str(l);
                }
            }
            if let Some(a) = s.addr {
                let _ = write!(out, " addr: {a}");
            }
            if let Some(f) = &s.side {
                let _ = write!(out, " side: \"{}\"", render(f));
            }
            out.push(')');
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn syntax(line: usize, reason: impl Into<String>) -> ProofError {
    ProofError::Syntax {
        line,
        reason: reason.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ProofError> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            '(' => toks.push((Tok::Open, line)),
            ')' => toks.push((Tok::Close, line)),
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(syntax(line, "unterminated formula string"))
                        }
                        Some(c) => s.push(c),
                    }
                }
                toks.push((Tok::Str(s), line));
            }
            _ => {
                let mut w = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' || n == '"' {
                        break;
                    }
                    w.push(n);
                    chars.next();
                }
                toks.push((Tok::Word(w), line));
            }
        }
    }
    Ok(toks)
}

struct TreeParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl TreeParser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn formula(&mut self) -> Result<crate::formula::Formula, ProofError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Str(s)) => {
                parse_any(&s).map_err(|e| syntax(line, format!("bad formula \"{s}\": {e}")))
            }
            _ => Err(syntax(line, "expected a quoted formula")),
        }
    }

    fn node(&mut self) -> Result<Derivation, ProofError> {
        let line = self.line();
        if self.next() != Some(Tok::Open) {
            return Err(syntax(line, "expected '('"));
        }
        let head = match self.next() {
            Some(Tok::Word(w)) => w,
            _ => return Err(syntax(line, "expected a rule name or 'hyp'")),
        };
        if head == "hyp" {
            let label = match self.next() {
                Some(Tok::Word(w)) if !w.ends_with(':') => w,
                _ => return Err(syntax(line, "expected a hypothesis label")),
            };
            let formula = self.formula()?;
            if self.next() != Some(Tok::Close) {
                return Err(syntax(self.line(), "expected ')' after a hypothesis"));
            }
            return Ok(Derivation::Hyp { label, formula });
        }
        let rule =
            Rule::from_token(&head).ok_or_else(|| syntax(line, format!("unknown rule {head}")))?;
        let mut step = Step {
            rule,
            premises: Vec::new(),
            discharges: Vec::new(),
            addr: None,
            side: None,
        };
        while self.peek() == Some(&Tok::Open) {
            step.premises.push(self.node()?);
        }
        let mut seen = Vec::new();
        loop {
            let line = self.line();
            match self.next() {
                Some(Tok::Close) => break,
                Some(Tok::Word(key)) => {
                    if seen.contains(&key) {
                        return Err(syntax(line, format!("option {key} given twice")));
                    }
                    match key.as_str() {
                        "discharges:" => {
                            while let Some(Tok::Word(w)) = self.peek() {
                                if w.ends_with(':') {
                                    break;
                                }
                                step.discharges.push(w.clone());
                                self.pos += 1;
                            }
                        }
                        "addr:" => match self.next() {
                            Some(Tok::Word(n)) => {
                                step.addr = Some(
                                    n.parse()
                                        .map_err(|_| syntax(line, format!("bad address {n}")))?,
                                )
                            }
                            _ => return Err(syntax(line, "expected an address")),
                        },
                        "side:" => step.side = Some(self.formula()?),
                        other => return Err(syntax(line, format!("unknown option {other}"))),
                    }
                    seen.push(key);
                }
                _ => return Err(syntax(line, "expected a child, an option or ')'")),
            }
        }
        Ok(Derivation::Step(Box::new(step)))
    }
}

/// Parse a derivation in the tree format.
pub fn parse_proof(text: &str) -> Result<Derivation, ProofError> {
    let mut p = TreeParser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let d = p.node()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.line(), "trailing input after the derivation"));
    }
    Ok(d)
}

/// Render a Hilbert proof, one numbered line per step.
pub fn render_hilbert(p: &HilbertProof) -> String {
    let mut out = String::new();
    for (k, l) in p.lines.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. \"{}\" {}",
            k + 1,
            render(&l.formula),
            l.justification
        );
    }
    out
}

/// Parse a Hilbert proof. Line numbers must run 1, 2, 3, ...; blank lines
/// and lines starting with `#` are skipped.
pub fn parse_hilbert(text: &str) -> Result<HilbertProof, ProofError> {
    let mut proof = HilbertProof::default();
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (num, rest) = line
            .split_once('.')
            .ok_or_else(|| syntax(ln, "expected '<n>.'"))?;
        let n: usize = num
            .trim()
            .parse()
            .map_err(|_| syntax(ln, format!("bad line number {num}")))?;
        if n != proof.lines.len() + 1 {
            return Err(syntax(
                ln,
                format!("expected step {}, found {n}", proof.lines.len() + 1),
            ));
        }
        let rest = rest.trim_start();
        let body = rest
            .strip_prefix('"')
            .ok_or_else(|| syntax(ln, "expected a quoted formula"))?;
        let (ftext, just) = body
            .split_once('"')
            .ok_or_else(|| syntax(ln, "unterminated formula string"))?;
        let formula = parse_any(ftext).map_err(|e| syntax(ln, format!("bad formula: {e}")))?;
        let words: Vec<&str> = just.split_whitespace().collect();
        let justification = match words.as_slice() {
            ["HYP"] => Justification::Hyp,
            ["MP", i, j] => {
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| syntax(ln, format!("bad line reference {s}")))
                };
                Justification::Mp(parse(i)?, parse(j)?)
            }
            [w] => Justification::Axiom(
                AxiomKind::from_token(w)
                    .ok_or_else(|| syntax(ln, format!("unknown justification {w}")))?,
            ),
            _ => return Err(syntax(ln, format!("bad justification '{}'", just.trim()))),
        };
        proof.lines.push(HilbertLine {
            formula,
            justification,
        });
    }
    Ok(proof)
}

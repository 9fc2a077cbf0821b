//! Formula syntax: the AST, language fragments, a text parser and printer,
//! and symbol-position occurrence addressing.
//!
//! Concrete syntax (whitespace-insensitive), loosest binding first:
//!
//! ```text
//! formula := impl
//! impl    := idisj ("->" impl)?          right-associative
//! idisj   := tensor ("|" tensor)*        intuitionistic disjunction
//! tensor  := conj ("+" conj)*            tensor disjunction
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | atom
//! atom    := var | "bot" | "=(" var ("," var)* ")" | "(" formula ")"
//! var     := "p" [0-9]+
//! ```
//!
//! `~p3` is a negated variable. `~` in front of anything else abbreviates
//! `... -> bot`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index `i` of the propositional variable `p_i`.
pub type VarId = u32;

/// A formula of propositional downward closed team logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(VarId),
    NegVar(VarId),
    Bot,
    /// `=(args..., target)`; empty `args` is the constancy atom.
    Dep {
        args: Vec<VarId>,
        target: VarId,
    },
    And(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    IDisj(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
}

/// The sublanguages of PT0 considered by the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    Cpl,
    Pt0,
    Pd,
    PdV,
    Pid,
    InqL,
}

impl Fragment {
    pub const ALL: [Fragment; 6] = [
        Fragment::Cpl,
        Fragment::Pt0,
        Fragment::Pd,
        Fragment::PdV,
        Fragment::Pid,
        Fragment::InqL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fragment::Cpl => "CPL",
            Fragment::Pt0 => "PT0",
            Fragment::Pd => "PD",
            Fragment::PdV => "PDv",
            Fragment::Pid => "PID",
            Fragment::InqL => "InqL",
        }
    }

    /// Case-insensitive lookup; accepts `pdv`, `pd_or` and `pdor` for PDv.
    pub fn from_name(s: &str) -> Option<Fragment> {
        match s.to_ascii_lowercase().as_str() {
            "cpl" => Some(Fragment::Cpl),
            "pt0" => Some(Fragment::Pt0),
            "pd" => Some(Fragment::Pd),
            "pdv" | "pd_or" | "pdor" => Some(Fragment::PdV),
            "pid" => Some(Fragment::Pid),
            "inql" => Some(Fragment::InqL),
            _ => None,
        }
    }

    fn allows(self, kind: NodeKind) -> bool {
        use NodeKind::*;
        match self {
            Fragment::Pt0 => true,
            Fragment::Pd => matches!(kind, Var | NegVar | Bot | Dep | And | Tensor),
            Fragment::PdV => matches!(kind, Var | NegVar | Bot | And | Tensor | IDisj),
            Fragment::Pid => matches!(kind, Var | Bot | Dep | And | IDisj | Impl),
            Fragment::InqL => matches!(kind, Var | Bot | And | IDisj | Impl),
            Fragment::Cpl => matches!(kind, Var | NegVar | Bot | And | Tensor | Impl),
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum NodeKind {
    Var,
    NegVar,
    Bot,
    Dep,
    And,
    Tensor,
    IDisj,
    Impl,
}

impl NodeKind {
    fn describe(self) -> &'static str {
        match self {
            NodeKind::Var => "propositional variable",
            NodeKind::NegVar => "negated variable",
            NodeKind::Bot => "bot",
            NodeKind::Dep => "dependence atom",
            NodeKind::And => "conjunction &",
            NodeKind::Tensor => "tensor disjunction +",
            NodeKind::IDisj => "intuitionistic disjunction |",
            NodeKind::Impl => "implication ->",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {position}: expected {}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
    },
    #[error("{construct} is not allowed in fragment {fragment}")]
    FragmentViolation {
        construct: String,
        fragment: Fragment,
    },
    #[error("address {0} does not start a subformula")]
    BadAddress(usize),
}

/// One-based index of the first symbol of a subformula occurrence.
pub type OccurrenceAddress = usize;

/// Child selector used in structural paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A root-to-node path through binary connectives.
pub type Path = Vec<Side>;

impl Formula {
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Formula::Tensor(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::IDisj(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Impl(Box::new(l), Box::new(r))
    }

    pub fn dep(args: Vec<VarId>, target: VarId) -> Formula {
        Formula::Dep { args, target }
    }

    pub fn constancy(target: VarId) -> Formula {
        Formula::Dep {
            args: Vec::new(),
            target,
        }
    }

    /// `p_i` when `value` holds, `¬p_i` otherwise (the paper's `p_i^{s(i)}`).
    pub fn literal(var: VarId, value: bool) -> Formula {
        if value {
            Formula::Var(var)
        } else {
            Formula::NegVar(var)
        }
    }

    /// Negation: a negated variable for `p_i`, `φ -> bot` for anything else.
    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::Var(i) => Formula::NegVar(i),
            other => Formula::implies(other, Formula::Bot),
        }
    }

    /// Negation written with implication only, as the InqL/PID languages need.
    pub fn neg_impl(f: Formula) -> Formula {
        Formula::implies(f, Formula::Bot)
    }

    /// Left-associated conjunction; `None` for an empty list.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-associated tensor; `None` for an empty list.
    pub fn big_tensor(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::tensor)
    }

    /// Left-associated intuitionistic disjunction; `None` for an empty list.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    fn kind(&self) -> NodeKind {
        match self {
            Formula::Var(_) => NodeKind::Var,
            Formula::NegVar(_) => NodeKind::NegVar,
            Formula::Bot => NodeKind::Bot,
            Formula::Dep { .. } => NodeKind::Dep,
            Formula::And(..) => NodeKind::And,
            Formula::Tensor(..) => NodeKind::Tensor,
            Formula::IDisj(..) => NodeKind::IDisj,
            Formula::Impl(..) => NodeKind::Impl,
        }
    }

    /// Both children of a binary node.
    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r)
            | Formula::Tensor(l, r)
            | Formula::IDisj(l, r)
            | Formula::Impl(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.children().is_none()
    }

    pub fn is_dep(&self) -> bool {
        matches!(self, Formula::Dep { .. })
    }

    /// A formula is classical when it is built from literals and ⊥ with ∧, ⊗ and →.
    pub fn is_classical(&self) -> bool {
        in_fragment(self, Fragment::Cpl)
    }

    /// Height of the syntax tree, counting an atom as depth 1.
    pub fn depth(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.size() + r.size(),
        }
    }

    /// The subformula reached by following `path`.
    pub fn at_path(&self, path: &[Side]) -> Option<&Formula> {
        let mut cur = self;
        for side in path {
            let (l, r) = cur.children()?;
            cur = match side {
                Side::Left => l,
                Side::Right => r,
            };
        }
        Some(cur)
    }

    /// A copy with the node at `path` replaced by `b`.
    pub fn replace_path(&self, path: &[Side], b: Formula) -> Option<Formula> {
        let Some((first, rest)) = path.split_first() else {
            return Some(b);
        };
        let (l, r) = self.children()?;
        let (l, r) = match first {
            Side::Left => (l.replace_path(rest, b)?, r.clone()),
            Side::Right => (l.clone(), r.replace_path(rest, b)?),
        };
        Some(self.rebuild(l, r))
    }

    /// Same connective as `self` applied to new children. Panics on atoms.
    pub fn rebuild(&self, l: Formula, r: Formula) -> Formula {
        match self {
            Formula::And(..) => Formula::and(l, r),
            Formula::Tensor(..) => Formula::tensor(l, r),
            Formula::IDisj(..) => Formula::or(l, r),
            Formula::Impl(..) => Formula::implies(l, r),
            _ => panic!("rebuild called on an atomic formula"),
        }
    }

    /// Paths of all dependence-atom occurrences, left to right.
    pub fn dep_paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        collect_dep_paths(self, &mut Vec::new(), &mut out);
        out
    }
}

fn collect_dep_paths(f: &Formula, prefix: &mut Path, out: &mut Vec<Path>) {
    match f {
        Formula::Dep { .. } => out.push(prefix.clone()),
        _ => {
            if let Some((l, r)) = f.children() {
                prefix.push(Side::Left);
                collect_dep_paths(l, prefix, out);
                prefix.pop();
                prefix.push(Side::Right);
                collect_dep_paths(r, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// True iff every node of `f` is licensed by `g`.
pub fn in_fragment(f: &Formula, g: Fragment) -> bool {
    first_violation(f, g).is_none()
}

/// The first node (preorder) that `g` does not license, if any.
pub fn first_violation(f: &Formula, g: Fragment) -> Option<FormulaError> {
    if !g.allows(f.kind()) {
        return Some(FormulaError::FragmentViolation {
            construct: f.kind().describe().to_string(),
            fragment: g,
        });
    }
    let (l, r) = f.children()?;
    first_violation(l, g).or_else(|| first_violation(r, g))
}

/// The set of variables occurring in `f`, including dependence-atom arguments.
pub fn vars(f: &Formula) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    collect_vars(f, &mut out);
    out
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<VarId>) {
    match f {
        Formula::Var(i) | Formula::NegVar(i) => {
            out.insert(*i);
        }
        Formula::Bot => {}
        Formula::Dep { args, target } => {
            out.extend(args.iter().copied());
            out.insert(*target);
        }
        _ => {
            let (l, r) = f.children().expect("binary node");
            collect_vars(l, out);
            collect_vars(r, out);
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

const PREC_IMPL: u8 = 0;
const PREC_IDISJ: u8 = 1;
const PREC_TENSOR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_ATOM: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Impl(..) => PREC_IMPL,
        Formula::IDisj(..) => PREC_IDISJ,
        Formula::Tensor(..) => PREC_TENSOR,
        Formula::And(..) => PREC_AND,
        _ => PREC_ATOM,
    }
}

/// Canonical text with the fewest parentheses the grammar needs.
pub fn render(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, &mut s);
    s
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Var(i) => out.push_str(&format!("p{i}")),
        Formula::NegVar(i) => out.push_str(&format!("~p{i}")),
        Formula::Bot => out.push_str("bot"),
        Formula::Dep { args, target } => {
            out.push_str("=(");
            for a in args {
                out.push_str(&format!("p{a},"));
            }
            out.push_str(&format!("p{target})"));
        }
        Formula::Impl(l, r) => {
            // Right-associative: only a left implication needs brackets.
            write_child(l, prec(l) == PREC_IMPL, out);
            out.push_str(" -> ");
            write_child(r, false, out);
        }
        _ => {
            let (l, r) = f.children().expect("binary node");
            let (p, op) = match f {
                Formula::IDisj(..) => (PREC_IDISJ, " | "),
                Formula::Tensor(..) => (PREC_TENSOR, " + "),
                _ => (PREC_AND, " & "),
            };
            write_child(l, prec(l) < p, out);
            out.push_str(op);
            write_child(r, prec(r) <= p, out);
        }
    }
}

fn write_child(f: &Formula, paren: bool, out: &mut String) {
    if paren {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse `text` and require the result to lie in `fragment`.
pub fn parse(text: &str, fragment: Fragment) -> Result<Formula, FormulaError> {
    let f = parse_any(text)?;
    match first_violation(&f, fragment) {
        Some(e) => Err(e),
        None => Ok(f),
    }
}

/// Parse without a fragment restriction (the PT0 language).
pub fn parse_any(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(&["end of input", "a binary connective"]));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, expected: &[&str]) -> FormulaError {
        FormulaError::Syntax {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.idisj()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn idisj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.tensor()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.tensor()?);
        }
        Ok(acc)
    }

    fn tensor(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.conj()?;
        while self.eat("+") {
            acc = Formula::tensor(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat("~") {
            let inner = self.unary()?;
            return Ok(Formula::negate(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        if self.eat("=(") {
            let mut vs = vec![self.var()?];
            while self.eat(",") {
                vs.push(self.var()?);
            }
            if !self.eat(")") {
                return Err(self.err(&["','", "')'"]));
            }
            let target = vs.pop().expect("at least one variable");
            return Ok(Formula::Dep { args: vs, target });
        }
        if self.eat("(") {
            let f = self.formula()?;
            if !self.eat(")") {
                return Err(self.err(&["')'"]));
            }
            return Ok(f);
        }
        if self.src[self.pos..].starts_with(b"bot") {
            let after = self.src.get(self.pos + 3);
            if !after.is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                self.pos += 3;
                return Ok(Formula::Bot);
            }
        }
        if self.src.get(self.pos) == Some(&b'p') {
            return Ok(Formula::Var(self.var()?));
        }
        Err(self.err(&["a variable", "'bot'", "'=('", "'('", "'~'"]))
    }

    fn var(&mut self) -> Result<VarId, FormulaError> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'p') {
            return Err(self.err(&["a variable p<n>"]));
        }
        let start = self.pos + 1;
        let mut end = start;
        while end < self.src.len() && self.src[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            self.pos = start;
            return Err(self.err(&["variable index digits"]));
        }
        let digits = std::str::from_utf8(&self.src[start..end]).expect("ascii digits");
        let idx = digits.parse::<VarId>().map_err(|_| FormulaError::Syntax {
            position: start,
            expected: vec!["a variable index that fits in 32 bits".into()],
        })?;
        self.pos = end;
        Ok(idx)
    }
}

// ---------------------------------------------------------------------------
// Occurrence addressing
// ---------------------------------------------------------------------------
//
// Symbols are numbered left to right over the formula written with every
// binary subformula (other than the whole formula) enclosed in brackets.
// Counted symbols: each variable, ⊥, ¬, =, (, ), ∧, ⊗, ∨, →. Commas are not
// counted. `φ → ⊥` is written out in full, so it contributes an arrow and ⊥.
// A parenthesised subformula is addressed by the symbol after its `(`.
//
// Several nested subformulas can share a first symbol (a binary node and its
// leftmost descendants). Addresses therefore name the outermost subformula
// starting at a symbol, while `atom_at` picks the atom starting there.

fn symbol_count(f: &Formula, bracketed: bool) -> usize {
    let inner = match f {
        Formula::Var(_) | Formula::Bot => 1,
        Formula::NegVar(_) => 2,
        Formula::Dep { args, .. } => args.len() + 4,
        _ => {
            let (l, r) = f.children().expect("binary node");
            symbol_count(l, true) + 1 + symbol_count(r, true)
        }
    };
    if bracketed && !f.is_atomic() {
        inner + 2
    } else {
        inner
    }
}

/// Total number of counted symbols in `f`.
pub fn symbol_length(f: &Formula) -> usize {
    symbol_count(f, false)
}

fn walk_occurrences<'a>(
    f: &'a Formula,
    start: usize,
    path: &mut Path,
    out: &mut Vec<(OccurrenceAddress, Path, &'a Formula)>,
) {
    out.push((start, path.clone(), f));
    if let Some((l, r)) = f.children() {
        let l_open = usize::from(!l.is_atomic());
        let l_start = start + l_open;
        path.push(Side::Left);
        walk_occurrences(l, l_start, path, out);
        path.pop();
        let after_l = start + symbol_count(l, true);
        let r_start = after_l + 1 + usize::from(!r.is_atomic());
        path.push(Side::Right);
        walk_occurrences(r, r_start, path, out);
        path.pop();
    }
}

/// Every subformula occurrence with its address and structural path, in
/// preorder (addresses are non-decreasing).
pub fn occurrence_paths(f: &Formula) -> Vec<(OccurrenceAddress, Path, &Formula)> {
    let mut out = Vec::new();
    walk_occurrences(f, 1, &mut Vec::new(), &mut out);
    out
}

/// Every subformula occurrence paired with its address, in preorder.
pub fn occurrences(f: &Formula) -> Vec<(OccurrenceAddress, Formula)> {
    occurrence_paths(f)
        .into_iter()
        .map(|(a, _, g)| (a, g.clone()))
        .collect()
}

/// Address of the node at `path`.
pub fn address_of_path(f: &Formula, path: &[Side]) -> Option<OccurrenceAddress> {
    occurrence_paths(f)
        .into_iter()
        .find(|(_, p, _)| p.as_slice() == path)
        .map(|(a, _, _)| a)
}

/// Path of the outermost subformula starting at address `a`.
pub fn path_at(f: &Formula, a: OccurrenceAddress) -> Result<Path, FormulaError> {
    occurrence_paths(f)
        .into_iter()
        .find(|(addr, _, _)| *addr == a)
        .map(|(_, p, _)| p)
        .ok_or(FormulaError::BadAddress(a))
}

/// Path of the atom occurrence starting at address `a`.
pub fn atom_path_at(f: &Formula, a: OccurrenceAddress) -> Result<Path, FormulaError> {
    occurrence_paths(f)
        .into_iter()
        .find(|(addr, _, g)| *addr == a && g.is_atomic())
        .map(|(_, p, _)| p)
        .ok_or(FormulaError::BadAddress(a))
}

/// The outermost subformula starting at address `a`.
pub fn subformula_at(f: &Formula, a: OccurrenceAddress) -> Result<&Formula, FormulaError> {
    let p = path_at(f, a)?;
    Ok(f.at_path(&p).expect("path from occurrence walk"))
}

/// The atom occurrence starting at address `a`.
pub fn atom_at(f: &Formula, a: OccurrenceAddress) -> Result<&Formula, FormulaError> {
    let p = atom_path_at(f, a)?;
    Ok(f.at_path(&p).expect("path from occurrence walk"))
}

/// Replace the outermost subformula starting at `a` by `b`.
pub fn replace_at(f: &Formula, a: OccurrenceAddress, b: Formula) -> Result<Formula, FormulaError> {
    let p = path_at(f, a)?;
    Ok(f.replace_path(&p, b).expect("path from occurrence walk"))
}

/// Replace the atom occurrence starting at `a` by `b`.
pub fn replace_atom_at(
    f: &Formula,
    a: OccurrenceAddress,
    b: Formula,
) -> Result<Formula, FormulaError> {
    let p = atom_path_at(f, a)?;
    Ok(f.replace_path(&p, b).expect("path from occurrence walk"))
}

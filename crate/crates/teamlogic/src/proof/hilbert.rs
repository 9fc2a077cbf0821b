//! Hilbert systems for InqL and PID.
//!
//! Lines are justified as hypotheses, axioms, or by modus ponens from two
//! earlier lines. `¬φ` abbreviates `φ -> bot`; a negated variable `~p_i` in
//! a line is read as `p_i -> bot` before checking.
//!
//! The intuitionistic axiom schemas, with `A`, `B`, `C` ranging over all
//! formulas:
//!
//! 1. `A -> (B -> A)`
//! 2. `(A -> (B -> C)) -> ((A -> B) -> (A -> C))`
//! 3. `A & B -> A`
//! 4. `A & B -> B`
//! 5. `A -> (B -> A & B)`
//! 6. `A -> A | B`
//! 7. `B -> A | B`
//! 8. `(A -> C) -> ((B -> C) -> (A | B -> C))`
//! 9. `bot -> A`
//! 10. `(A -> B) -> ((A -> ¬B) -> ¬A)`
//!
//! `ND_k` instances are `(¬A -> ¬B1 | ... | ¬Bk) -> (¬A -> ¬B1) | ... | (¬A -> ¬Bk)`
//! for `k ≥ 1`, both disjunctions associated to the left. Double negation
//! elimination is accepted only as `¬¬p_i -> p_i` for a variable. The two
//! dependence axioms are `(=(p_i) -> p_i | ¬p_i) & (p_i | ¬p_i -> =(p_i))` and
//! `(α -> β) & (β -> α)` with `α = =(p_{i1},...,p_{ik},p_j)` and
//! `β = =(p_{i1}) & ... & =(p_{ik}) -> =(p_j)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{first_violation, Formula};

use super::{Judgment, ProofError, ProofSystem};

/// Axiom families a line may cite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    Ipl,
    Nd,
    Dne,
    Pid4,
    Pid5,
}

impl AxiomKind {
    pub fn token(self) -> &'static str {
        match self {
            AxiomKind::Ipl => "AX-IPL",
            AxiomKind::Nd => "AX-ND",
            AxiomKind::Dne => "AX-DNE",
            AxiomKind::Pid4 => "AX-PID4",
            AxiomKind::Pid5 => "AX-PID5",
        }
    }

    pub fn from_token(s: &str) -> Option<AxiomKind> {
        [
            AxiomKind::Ipl,
            AxiomKind::Nd,
            AxiomKind::Dne,
            AxiomKind::Pid4,
            AxiomKind::Pid5,
        ]
        .into_iter()
        .find(|k| k.token() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Justification {
    Hyp,
    Axiom(AxiomKind),
    /// Modus ponens from two earlier lines, numbered from 1.
    Mp(usize, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Hyp => f.write_str("HYP"),
            Justification::Axiom(k) => f.write_str(k.token()),
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HilbertProof {
    pub lines: Vec<HilbertLine>,
}

impl HilbertProof {
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(HilbertLine {
            formula,
            justification,
        });
        self.lines.len()
    }
}

/// Replace every negated variable `~p_i` by `p_i -> bot`.
fn expand_negations(f: &Formula) -> Formula {
    match f {
        Formula::NegVar(i) => Formula::neg_impl(Formula::Var(*i)),
        _ => match f.children() {
            Some((l, r)) => f.rebuild(expand_negations(l), expand_negations(r)),
            None => f.clone(),
        },
    }
}

#[derive(Debug)]
enum Pat {
    Meta(usize),
    Bot,
    Impl(Box<Pat>, Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    Or(Box<Pat>, Box<Pat>),
}

fn m(i: usize) -> Pat {
    Pat::Meta(i)
}
fn imp(a: Pat, b: Pat) -> Pat {
    Pat::Impl(Box::new(a), Box::new(b))
}
fn and(a: Pat, b: Pat) -> Pat {
    Pat::And(Box::new(a), Box::new(b))
}
fn or(a: Pat, b: Pat) -> Pat {
    Pat::Or(Box::new(a), Box::new(b))
}
fn not(a: Pat) -> Pat {
    imp(a, Pat::Bot)
}

fn ipl_schemas() -> Vec<Pat> {
    let (a, b, c) = (0, 1, 2);
    vec![
        imp(m(a), imp(m(b), m(a))),
        imp(
            imp(m(a), imp(m(b), m(c))),
            imp(imp(m(a), m(b)), imp(m(a), m(c))),
        ),
        imp(and(m(a), m(b)), m(a)),
        imp(and(m(a), m(b)), m(b)),
        imp(m(a), imp(m(b), and(m(a), m(b)))),
        imp(m(a), or(m(a), m(b))),
        imp(m(b), or(m(a), m(b))),
        imp(
            imp(m(a), m(c)),
            imp(imp(m(b), m(c)), imp(or(m(a), m(b)), m(c))),
        ),
        imp(Pat::Bot, m(a)),
        imp(imp(m(a), m(b)), imp(imp(m(a), not(m(b))), not(m(a)))),
    ]
}

fn matches<'a>(p: &Pat, f: &'a Formula, env: &mut [Option<&'a Formula>; 3]) -> bool {
    match (p, f) {
        (Pat::Meta(i), _) => match env[*i] {
            Some(g) => g == f,
            None => {
                env[*i] = Some(f);
                true
            }
        },
        (Pat::Bot, Formula::Bot) => true,
        (Pat::Impl(a, b), Formula::Impl(l, r))
        | (Pat::And(a, b), Formula::And(l, r))
        | (Pat::Or(a, b), Formula::IDisj(l, r)) => matches(a, l, env) && matches(b, r, env),
        _ => false,
    }
}

fn is_ipl_instance(f: &Formula) -> bool {
    ipl_schemas().iter().any(|p| matches(p, f, &mut [None; 3]))
}

fn flatten_or(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::IDisj(l, r) => {
            let mut v = flatten_or(l);
            v.push(r);
            v
        }
        _ => vec![f],
    }
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Impl(a, b) if **b == Formula::Bot => Some(a),
        _ => None,
    }
}

fn is_nd_instance(f: &Formula) -> bool {
    let Formula::Impl(lhs, rhs) = f else {
        return false;
    };
    let Formula::Impl(na, disj) = &**lhs else {
        return false;
    };
    if negated(na).is_none() {
        return false;
    }
    let left: Vec<&Formula> = flatten_or(disj);
    let right: Vec<&Formula> = flatten_or(rhs);
    if left.len() != right.len() {
        return false;
    }
    left.iter().zip(&right).all(|(nb, item)| {
        negated(nb).is_some() && matches!(item, Formula::Impl(x, y) if **x == **na && **y == **nb)
    })
}

fn is_dne_instance(f: &Formula) -> bool {
    match f {
        Formula::Impl(l, r) => match (&**r, negated(l).and_then(negated)) {
            (Formula::Var(i), Some(Formula::Var(j))) => i == j,
            _ => false,
        },
        _ => false,
    }
}

fn iff_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(x, y) = f else { return None };
    let (Formula::Impl(a, b), Formula::Impl(b2, a2)) = (&**x, &**y) else {
        return None;
    };
    (a == a2 && b == b2).then_some((a, b))
}

fn is_pid4_instance(f: &Formula) -> bool {
    let Some((a, b)) = iff_parts(f) else {
        return false;
    };
    let Formula::Dep { args, target } = a else {
        return false;
    };
    args.is_empty()
        && *b
            == Formula::or(
                Formula::Var(*target),
                Formula::neg_impl(Formula::Var(*target)),
            )
}

fn is_pid5_instance(f: &Formula) -> bool {
    let Some((a, b)) = iff_parts(f) else {
        return false;
    };
    let Formula::Dep { args, target } = a else {
        return false;
    };
    if args.is_empty() {
        return false;
    }
    let ante = Formula::big_and(args.iter().map(|i| Formula::constancy(*i))).expect("k ≥ 1");
    *b == Formula::implies(ante, Formula::constancy(*target))
}

/// Check a Hilbert proof. The context is the set of hypothesis lines and the
/// conclusion the last line.
pub fn check_hilbert(p: &HilbertProof, sys: ProofSystem) -> Result<Judgment, ProofError> {
    if !sys.is_hilbert() {
        return Err(ProofError::WrongSystem(format!(
            "{sys:?} is not a Hilbert system"
        )));
    }
    let line_err = |n: usize, reason: String| ProofError::RuleViolation {
        node: format!("line {n}"),
        reason,
    };
    if p.lines.is_empty() {
        return Err(line_err(0, "the proof has no lines".into()));
    }
    let mut seen: Vec<Formula> = Vec::with_capacity(p.lines.len());
    let mut context = BTreeSet::new();
    for (k, line) in p.lines.iter().enumerate() {
        let n = k + 1;
        let f = expand_negations(&line.formula);
        if first_violation(&f, sys.fragment()).is_some() {
            return Err(ProofError::FragmentViolation {
                node: format!("line {n}"),
                formula: f,
                fragment: sys.fragment(),
            });
        }
        match line.justification {
            Justification::Hyp => {
                context.insert(f.clone());
            }
            Justification::Axiom(kind) => {
                let ok = match kind {
                    AxiomKind::Ipl => is_ipl_instance(&f),
                    AxiomKind::Nd => is_nd_instance(&f),
                    AxiomKind::Dne => is_dne_instance(&f),
                    AxiomKind::Pid4 | AxiomKind::Pid5 if sys != ProofSystem::HPid => {
                        return Err(line_err(
                            n,
                            format!("{} is not an axiom of H_InqL", kind.token()),
                        ));
                    }
                    AxiomKind::Pid4 => is_pid4_instance(&f),
                    AxiomKind::Pid5 => is_pid5_instance(&f),
                };
                if !ok {
                    return Err(line_err(
                        n,
                        format!("{f} is not an instance of {}", kind.token()),
                    ));
                }
            }
            Justification::Mp(i, j) => {
                if i == 0 || j == 0 || i >= n || j >= n {
                    return Err(line_err(
                        n,
                        format!(
                            "MP cites lines {i} and {j}; only 1..{} are available",
                            n - 1
                        ),
                    ));
                }
                let (a, b) = (&seen[i - 1], &seen[j - 1]);
                let fits = |imp: &Formula, ante: &Formula| matches!(imp, Formula::Impl(x, y) if **x == *ante && **y == f);
                if !fits(a, b) && !fits(b, a) {
                    return Err(line_err(
                        n,
                        format!("{f} does not follow from lines {i} and {j} by MP"),
                    ));
                }
            }
        }
        seen.push(f);
    }
    Ok(Judgment {
        context,
        conclusion: seen.pop().expect("nonempty"),
    })
}

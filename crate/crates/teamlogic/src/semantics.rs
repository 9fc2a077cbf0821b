//! Team semantics: satisfaction, flatness, denotations and support.

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::formula::{vars, Formula, VarId};
use crate::team::{
    all_teams_bounded, mask_members, submasks, IndexSet, Team, TeamError, TeamFamily,
    DEFAULT_TEAM_GUARD,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("formula mentions p{0}, which is outside the team's domain")]
    Domain(VarId),
    #[error("probability is undefined on the empty team")]
    EmptyTeam,
    #[error(transparent)]
    Team(#[from] TeamError),
}

/// How the tensor clause searches for a split of the team.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Only complementary splits `Y ∪ (X∖Y)`.
    #[default]
    Fast,
    /// Every cover `Y ∪ Z = X`.
    Oracle,
}

#[derive(Clone, Debug)]
enum Node {
    /// Satisfied iff the team avoids these valuations.
    Avoid(u64),
    Bot,
    Dep {
        args: Vec<usize>,
        target: usize,
    },
    And(usize, usize),
    Tensor(usize, usize),
    IDisj(usize, usize),
    Impl(usize, usize),
}

/// A formula compiled against a fixed domain, with a memo table of
/// `(subformula, team)` results that persists across queries.
pub struct Evaluator {
    nodes: Vec<Node>,
    root: usize,
    domain: IndexSet,
    mode: Mode,
    memo: HashMap<(usize, u64), bool>,
}

impl Evaluator {
    pub fn new(f: &Formula, domain: &IndexSet, mode: Mode) -> Result<Evaluator, SemanticsError> {
        if let Some(v) = vars(f).into_iter().find(|v| !domain.contains(*v)) {
            return Err(SemanticsError::Domain(v));
        }
        let mut ev = Evaluator {
            nodes: Vec::new(),
            root: 0,
            domain: domain.clone(),
            mode,
            memo: HashMap::new(),
        };
        ev.root = ev.compile(f);
        Ok(ev)
    }

    fn value_mask(&self, v: VarId, value: bool) -> u64 {
        let pos = self.domain.position(v).expect("checked domain");
        let mut m = 0u64;
        for i in 0..self.domain.valuation_count() {
            if self.domain.bit(i, pos) == value {
                m |= 1 << i;
            }
        }
        m
    }

    fn compile(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::Var(v) => Node::Avoid(self.value_mask(*v, false)),
            Formula::NegVar(v) => Node::Avoid(self.value_mask(*v, true)),
            Formula::Bot => Node::Bot,
            Formula::Dep { args, target } => Node::Dep {
                args: args
                    .iter()
                    .map(|a| self.domain.position(*a).unwrap())
                    .collect(),
                target: self.domain.position(*target).unwrap(),
            },
            Formula::And(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::And(l, r)
            }
            Formula::Tensor(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::Tensor(l, r)
            }
            Formula::IDisj(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::IDisj(l, r)
            }
            Formula::Impl(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::Impl(l, r)
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Satisfaction on the team with this bitmask over the evaluator's domain.
    pub fn eval_mask(&mut self, mask: u64) -> bool {
        self.eval_node(self.root, mask)
    }

    pub fn eval(&mut self, team: &Team) -> Result<bool, SemanticsError> {
        if team.domain() != &self.domain {
            return Err(SemanticsError::Team(TeamError::BadDomain(format!(
                "team on {} given to an evaluator over {}",
                team.domain(),
                self.domain
            ))));
        }
        Ok(self.eval_mask(team.mask()))
    }

    fn eval_node(&mut self, id: usize, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        match &self.nodes[id] {
            Node::Avoid(bad) => mask & bad == 0,
            Node::Bot => false,
            Node::Dep { args, target } => {
                let (args, target) = (args.clone(), *target);
                self.dep_holds(&args, target, mask)
            }
            &Node::And(l, r) => self.eval_node(l, mask) && self.eval_node(r, mask),
            &Node::IDisj(l, r) => self.eval_node(l, mask) || self.eval_node(r, mask),
            &Node::Tensor(l, r) => {
                if let Some(v) = self.memo.get(&(id, mask)) {
                    return *v;
                }
                let v = match self.mode {
                    Mode::Fast => {
                        submasks(mask).any(|y| self.eval_node(l, y) && self.eval_node(r, mask & !y))
                    }
                    Mode::Oracle => {
                        let ys: Vec<u64> = submasks(mask).collect();
                        ys.iter().any(|&y| {
                            self.eval_node(l, y)
                                && submasks(mask).any(|z| y | z == mask && self.eval_node(r, z))
                        })
                    }
                };
                self.memo.insert((id, mask), v);
                v
            }
            &Node::Impl(l, r) => {
                if let Some(v) = self.memo.get(&(id, mask)) {
                    return *v;
                }
                let v = submasks(mask).all(|y| !self.eval_node(l, y) || self.eval_node(r, y));
                self.memo.insert((id, mask), v);
                v
            }
        }
    }

    fn dep_holds(&self, args: &[usize], target: usize, mask: u64) -> bool {
        let mut seen: HashMap<Vec<bool>, bool> = HashMap::new();
        for i in mask_members(mask) {
            let key: Vec<bool> = args.iter().map(|p| self.domain.bit(i, *p)).collect();
            let t = self.domain.bit(i, target);
            if *seen.entry(key).or_insert(t) != t {
                return false;
            }
        }
        true
    }
}

/// `X ⊨ f`, with the tensor clause searched according to `mode`.
pub fn eval(f: &Formula, x: &Team, mode: Mode) -> Result<bool, SemanticsError> {
    Evaluator::new(f, x.domain(), mode)?.eval(x)
}

/// Classical truth of a classical formula under a single valuation.
///
/// Returns `None` for formulas that are not classical.
pub fn classical_truth(f: &Formula, lookup: &dyn Fn(VarId) -> bool) -> Option<bool> {
    Some(match f {
        Formula::Var(v) => lookup(*v),
        Formula::NegVar(v) => !lookup(*v),
        Formula::Bot => false,
        Formula::And(l, r) => classical_truth(l, lookup)? && classical_truth(r, lookup)?,
        Formula::Tensor(l, r) => classical_truth(l, lookup)? || classical_truth(r, lookup)?,
        Formula::Impl(l, r) => !classical_truth(l, lookup)? || classical_truth(r, lookup)?,
        Formula::Dep { .. } | Formula::IDisj(..) => return None,
    })
}

fn domain_of(f: &Formula) -> IndexSet {
    IndexSet::from(vars(f))
}

/// True iff `X ⊨ f ⟺ every singleton of X satisfies f`, for all teams on vars(f).
pub fn is_flat(f: &Formula) -> Result<bool, SemanticsError> {
    let n = domain_of(f);
    let mut ev = Evaluator::new(f, &n, Mode::Fast)?;
    for t in all_teams_bounded(&n, DEFAULT_TEAM_GUARD)? {
        let whole = ev.eval_mask(t.mask());
        let pointwise = mask_members(t.mask()).all(|i| ev.eval_mask(1 << i));
        if whole != pointwise {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The family of all teams on `n` that satisfy `f`.
pub fn denotation(f: &Formula, n: &IndexSet) -> Result<TeamFamily, SemanticsError> {
    let mut ev = Evaluator::new(f, n, Mode::Fast)?;
    let teams: Vec<Team> = all_teams_bounded(n, DEFAULT_TEAM_GUARD)?
        .filter(|t| ev.eval_mask(t.mask()))
        .collect();
    Ok(TeamFamily::new(n.clone(), teams)?)
}

/// The support `|f|_X = {s ∈ X : {s} ⊨ f}`.
pub fn support_set(f: &Formula, x: &Team) -> Result<Team, SemanticsError> {
    let mut ev = Evaluator::new(f, x.domain(), Mode::Fast)?;
    let mask = mask_members(x.mask())
        .filter(|i| ev.eval_mask(1 << i))
        .fold(0u64, |m, i| m | 1 << i);
    Ok(Team::from_mask(x.domain().clone(), mask)?)
}

/// The support together with the probability `[f]_X = ||f|_X| / |X|`.
pub fn support(f: &Formula, x: &Team) -> Result<(Team, Ratio<u64>), SemanticsError> {
    if x.is_empty() {
        return Err(SemanticsError::EmptyTeam);
    }
    let s = support_set(f, x)?;
    let p = Ratio::new(s.len() as u64, x.len() as u64);
    Ok((s, p))
}

//! Reference implementations shared by the integration tests.
//!
//! Nothing here calls the library's evaluator. Teams are plain lists of rows
//! over an explicit variable list, tensor is checked over every cover of the
//! team, and formulas are generated independently of the parser.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use teamlogic::formula::{Formula, VarId};

pub type Row = Vec<bool>;

/// The five rows `s1..s5` over `p1..p5`.
pub fn table_one() -> (Vec<VarId>, Vec<Row>) {
    let rows = [
        [1, 1, 1, 0, 1],
        [1, 0, 1, 0, 0],
        [1, 1, 1, 1, 1],
        [1, 0, 1, 1, 0],
        [1, 0, 0, 1, 1],
    ];
    (
        vec![1, 2, 3, 4, 5],
        rows.iter()
            .map(|r| r.iter().map(|b| *b == 1).collect())
            .collect(),
    )
}

/// Every row over `n` variables, in binary counting order.
pub fn all_rows(n: usize) -> Vec<Row> {
    (0..1usize << n)
        .map(|i| (0..n).map(|p| i >> (n - 1 - p) & 1 == 1).collect())
        .collect()
}

/// All subsets of `rows`.
pub fn subsets(rows: &[Row]) -> Vec<Vec<Row>> {
    (0..1usize << rows.len())
        .map(|m| {
            rows.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect()
        })
        .collect()
}

fn value(dom: &[VarId], row: &Row, v: VarId) -> bool {
    row[dom
        .iter()
        .position(|d| *d == v)
        .expect("variable in domain")]
}

/// `X ⊨ f` straight from the clauses, with `⊗` over all covers `Y ∪ Z = X`.
pub fn holds(f: &Formula, dom: &[VarId], team: &[Row]) -> bool {
    match f {
        Formula::Var(v) => team.iter().all(|r| value(dom, r, *v)),
        Formula::NegVar(v) => team.iter().all(|r| !value(dom, r, *v)),
        Formula::Bot => team.is_empty(),
        Formula::Dep { args, target } => team.iter().all(|s| {
            team.iter().all(|t| {
                !args.iter().all(|a| value(dom, s, *a) == value(dom, t, *a))
                    || value(dom, s, *target) == value(dom, t, *target)
            })
        }),
        Formula::And(l, r) => holds(l, dom, team) && holds(r, dom, team),
        Formula::IDisj(l, r) => holds(l, dom, team) || holds(r, dom, team),
        Formula::Tensor(l, r) => {
            let parts = subsets(team);
            parts.iter().any(|y| {
                holds(l, dom, y)
                    && parts.iter().any(|z| {
                        team.iter().all(|s| y.contains(s) || z.contains(s)) && holds(r, dom, z)
                    })
            })
        }
        Formula::Impl(l, r) => subsets(team)
            .iter()
            .all(|y| !holds(l, dom, y) || holds(r, dom, y)),
    }
}

/// Truth of a classical formula at one row, by the usual truth tables.
pub fn classical(f: &Formula, dom: &[VarId], row: &Row) -> bool {
    match f {
        Formula::Var(v) => value(dom, row, *v),
        Formula::NegVar(v) => !value(dom, row, *v),
        Formula::Bot => false,
        Formula::And(l, r) => classical(l, dom, row) && classical(r, dom, row),
        Formula::Tensor(l, r) => classical(l, dom, row) || classical(r, dom, row),
        Formula::Impl(l, r) => !classical(l, dom, row) || classical(r, dom, row),
        other => panic!("{other} is not classical"),
    }
}

/// Binary connectives a generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conn {
    And,
    Tensor,
    Or,
    Impl,
}

impl Conn {
    pub fn build(self, l: Formula, r: Formula) -> Formula {
        match self {
            Conn::And => Formula::and(l, r),
            Conn::Tensor => Formula::tensor(l, r),
            Conn::Or => Formula::or(l, r),
            Conn::Impl => Formula::implies(l, r),
        }
    }
}

/// Atoms and connectives of a language, for generation.
#[derive(Clone, Debug)]
pub struct Language {
    pub atoms: Vec<Formula>,
    pub conns: Vec<Conn>,
}

impl Language {
    pub fn new(vars: &[VarId], negvars: bool, deps: bool, conns: &[Conn]) -> Language {
        let mut atoms = vec![Formula::Bot];
        for v in vars {
            atoms.push(Formula::Var(*v));
            if negvars {
                atoms.push(Formula::NegVar(*v));
            }
        }
        if deps {
            for t in vars {
                atoms.push(Formula::constancy(*t));
                for a in vars {
                    if a != t {
                        atoms.push(Formula::dep(vec![*a], *t));
                    }
                }
            }
        }
        Language {
            atoms,
            conns: conns.to_vec(),
        }
    }

    pub fn pt0(vars: &[VarId]) -> Language {
        Language::new(
            vars,
            true,
            true,
            &[Conn::And, Conn::Tensor, Conn::Or, Conn::Impl],
        )
    }

    pub fn pdv(vars: &[VarId]) -> Language {
        Language::new(vars, true, false, &[Conn::And, Conn::Tensor, Conn::Or])
    }

    pub fn pd(vars: &[VarId]) -> Language {
        Language::new(vars, true, true, &[Conn::And, Conn::Tensor])
    }

    pub fn cpl(vars: &[VarId]) -> Language {
        Language::new(vars, true, false, &[Conn::And, Conn::Tensor, Conn::Impl])
    }

    /// Every formula of depth at most `depth`, an atom having depth 1.
    pub fn all_up_to(&self, depth: usize) -> Vec<Formula> {
        let mut out = self.atoms.clone();
        for _ in 1..depth {
            let prev = out.clone();
            out = self.atoms.clone();
            for c in &self.conns {
                for l in &prev {
                    for r in &prev {
                        out.push(c.build(l.clone(), r.clone()));
                    }
                }
            }
        }
        out
    }

    /// A random formula of depth at most `depth`.
    pub fn random(&self, rng: &mut ChaCha8Rng, depth: usize) -> Formula {
        if depth <= 1 || rng.gen_bool(0.3) {
            return self.atoms.choose(rng).unwrap().clone();
        }
        let c = *self.conns.choose(rng).unwrap();
        c.build(self.random(rng, depth - 1), self.random(rng, depth - 1))
    }
}

/// Number of nonempty downward-closed families of teams on two variables,
/// by testing each of the `2^16` sets of teams directly.
pub fn count_downward_closed_two_vars() -> usize {
    (0u32..1 << 16)
        .filter(|fam| {
            *fam != 0
                && (0..16u32).all(|x| {
                    fam >> x & 1 == 0 || (0..16u32).all(|y| y & !x != 0 || fam >> y & 1 == 1)
                })
        })
        .count()
}

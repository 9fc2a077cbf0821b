//! Proof objects and the proof kernel.
//!
//! Natural deduction derivations are trees whose leaves are labelled
//! hypotheses. Rules that close hypotheses list the closed labels in
//! `discharges`. A label may label several leaves, provided they carry the
//! same formula. The judgment of a checked derivation is the set of formulas
//! of its open leaves together with its conclusion.
//!
//! Per-rule conventions for the extra node fields:
//!
//! | rule | `side` | `discharges` | `addr` |
//! |------|--------|--------------|--------|
//! | `EM0` | the variable `p_i` | none | none |
//! | `∨I_l`, `⊗I_l` | right operand | none | none |
//! | `∨I_r`, `⊗I_r` | left operand | none | none |
//! | `∨E`, `⊗E⁻`, `DepE0` | none | left case, right case | none |
//! | `⊗Sub` | none | the `ψ` hypothesis | none |
//! | `DepIk` | the concluded atom | one per argument, in order | none |
//! | `SE` | none | `p_i` case, `¬p_i` case | position of `=(p_i)` |

mod build;
mod hilbert;
mod library;
mod nd;
mod synth;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, FormulaError, Fragment};
use crate::semantics::SemanticsError;

pub use hilbert::{check_hilbert, AxiomKind, HilbertLine, HilbertProof, Justification};
pub use library::{derive_named, NamedDerivation, NamedParams, NAMED_RULES};
pub use nd::check_nd;
pub use synth::{
    synth_entailment_pd, synth_entailment_pdv, synth_entailment_pdv_all, SYNTH_VAR_LIMIT,
};
pub use text::{parse_hilbert, parse_proof, render_hilbert, render_proof};

/// The four deduction systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofSystem {
    HInqL,
    HPid,
    NdPdV,
    NdPd,
}

impl ProofSystem {
    pub fn fragment(self) -> Fragment {
        match self {
            ProofSystem::HInqL => Fragment::InqL,
            ProofSystem::HPid => Fragment::Pid,
            ProofSystem::NdPdV => Fragment::PdV,
            ProofSystem::NdPd => Fragment::Pd,
        }
    }

    pub fn from_name(s: &str) -> Option<ProofSystem> {
        match s.to_ascii_lowercase().as_str() {
            "inql" | "h_inql" => Some(ProofSystem::HInqL),
            "pid" | "h_pid" => Some(ProofSystem::HPid),
            "pdv" | "nd_pdv" => Some(ProofSystem::NdPdV),
            "pd" | "nd_pd" => Some(ProofSystem::NdPd),
            _ => None,
        }
    }

    pub fn is_hilbert(self) -> bool {
        matches!(self, ProofSystem::HInqL | ProofSystem::HPid)
    }
}

/// Natural deduction rule names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Em0,
    AndI,
    AndEl,
    AndEr,
    OrIl,
    OrIr,
    OrE,
    TensorIl,
    TensorIr,
    TensorEMinus,
    TensorSub,
    ComTensor,
    AssTensor,
    BotI,
    BotE,
    DstrTensorOr,
    DepI0,
    DepIk,
    DepE0,
    DepEk,
    Se,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::Em0,
        Rule::AndI,
        Rule::AndEl,
        Rule::AndEr,
        Rule::OrIl,
        Rule::OrIr,
        Rule::OrE,
        Rule::TensorIl,
        Rule::TensorIr,
        Rule::TensorEMinus,
        Rule::TensorSub,
        Rule::ComTensor,
        Rule::AssTensor,
        Rule::BotI,
        Rule::BotE,
        Rule::DstrTensorOr,
        Rule::DepI0,
        Rule::DepIk,
        Rule::DepE0,
        Rule::DepEk,
        Rule::Se,
    ];

    /// The token used in the text format.
    pub fn token(self) -> &'static str {
        match self {
            Rule::Em0 => "EM0",
            Rule::AndI => "∧I",
            Rule::AndEl => "∧E_l",
            Rule::AndEr => "∧E_r",
            Rule::OrIl => "∨I_l",
            Rule::OrIr => "∨I_r",
            Rule::OrE => "∨E",
            Rule::TensorIl => "⊗I_l",
            Rule::TensorIr => "⊗I_r",
            Rule::TensorEMinus => "⊗E⁻",
            Rule::TensorSub => "⊗Sub",
            Rule::ComTensor => "Com⊗",
            Rule::AssTensor => "Ass⊗",
            Rule::BotI => "⊥I",
            Rule::BotE => "⊥E",
            Rule::DstrTensorOr => "Dstr⊗∨",
            Rule::DepI0 => "DepI0",
            Rule::DepIk => "DepIk",
            Rule::DepE0 => "DepE0",
            Rule::DepEk => "DepEk",
            Rule::Se => "SE",
        }
    }

    /// ASCII spelling accepted by the parser as an alternative token.
    pub fn ascii(self) -> &'static str {
        match self {
            Rule::Em0 => "EM0",
            Rule::AndI => "AndI",
            Rule::AndEl => "AndE_l",
            Rule::AndEr => "AndE_r",
            Rule::OrIl => "OrI_l",
            Rule::OrIr => "OrI_r",
            Rule::OrE => "OrE",
            Rule::TensorIl => "TensorI_l",
            Rule::TensorIr => "TensorI_r",
            Rule::TensorEMinus => "TensorE-",
            Rule::TensorSub => "TensorSub",
            Rule::ComTensor => "ComTensor",
            Rule::AssTensor => "AssTensor",
            Rule::BotI => "BotI",
            Rule::BotE => "BotE",
            Rule::DstrTensorOr => "DstrTensorOr",
            Rule::DepI0 => "DepI0",
            Rule::DepIk => "DepIk",
            Rule::DepE0 => "DepE0",
            Rule::DepEk => "DepEk",
            Rule::Se => "SE",
        }
    }

    pub fn from_token(s: &str) -> Option<Rule> {
        Rule::ALL
            .into_iter()
            .find(|r| r.token() == s || r.ascii() == s)
    }

    /// Whether the rule belongs to the given natural deduction system.
    pub fn in_system(self, sys: ProofSystem) -> bool {
        let dep_rule = matches!(
            self,
            Rule::DepI0 | Rule::DepIk | Rule::DepE0 | Rule::DepEk | Rule::Se
        );
        let or_rule = matches!(
            self,
            Rule::OrIl | Rule::OrIr | Rule::OrE | Rule::DstrTensorOr
        );
        match sys {
            ProofSystem::NdPdV => !dep_rule,
            ProofSystem::NdPd => !or_rule,
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A natural deduction derivation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Hyp { label: String, formula: Formula },
    Step(Box<Step>),
}

/// An inference node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    pub discharges: Vec<String>,
    pub addr: Option<usize>,
    pub side: Option<Formula>,
}

impl Derivation {
    pub fn hyp(label: impl Into<String>, formula: Formula) -> Derivation {
        Derivation::Hyp {
            label: label.into(),
            formula,
        }
    }

    pub fn step(rule: Rule, premises: Vec<Derivation>) -> Derivation {
        Derivation::Step(Box::new(Step {
            rule,
            premises,
            discharges: Vec::new(),
            addr: None,
            side: None,
        }))
    }

    pub fn with_discharges(mut self, labels: Vec<String>) -> Derivation {
        if let Derivation::Step(s) = &mut self {
            s.discharges = labels;
        }
        self
    }

    pub fn with_side(mut self, side: Formula) -> Derivation {
        if let Derivation::Step(s) = &mut self {
            s.side = Some(side);
        }
        self
    }

    pub fn with_addr(mut self, addr: usize) -> Derivation {
        if let Derivation::Step(s) = &mut self {
            s.addr = Some(addr);
        }
        self
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            Derivation::Hyp { .. } => 1,
            Derivation::Step(s) => 1 + s.premises.iter().map(Derivation::size).sum::<usize>(),
        }
    }

    /// Rules used anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<Rule> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            if let Derivation::Step(s) = d {
                out.insert(s.rule);
                stack.extend(s.premises.iter());
            }
        }
        out
    }
}

/// `Γ ⊢ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub context: BTreeSet<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}} ⊢ {}", ctx.join(", "), self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("rule violation at {node}: {reason}")]
    RuleViolation { node: String, reason: String },
    #[error("side condition violated at {node}: {reason}")]
    SideConditionViolated { node: String, reason: String },
    #[error("bad discharge at {node}: {reason}")]
    BadDischarge { node: String, reason: String },
    #[error("bad address at {node}: {reason}")]
    BadAddress { node: String, reason: String },
    #[error("fragment violation at {node}: {formula} is not a {fragment} formula")]
    FragmentViolation {
        node: String,
        formula: Formula,
        fragment: Fragment,
    },
    #[error("proof text error at line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("{0} is not a natural deduction system")]
    WrongSystem(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("the premises do not entail the conclusion")]
    NotEntailed,
    #[error("{size} variables exceed the synthesis limit of {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

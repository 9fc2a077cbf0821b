//! Normal forms and expressive completeness.
//!
//! `Θ_X` is the tensor of the literal conjunctions of the members of `X`,
//! `Ψ_X` the double negation of their intuitionistic disjunction; both hold
//! exactly on the subteams of `X`. `α_m` bounds team size by `m`, and
//! `Ξ_Y = α_{|Y|-1} ⊗ Θ_{2^N∖Y}` holds exactly on teams that do not contain
//! `Y`. Inside `Θ_X` and `Ψ_X` the members of `X` appear in descending
//! valuation order, so the all-ones valuation comes first.

use thiserror::Error;

use crate::formula::{in_fragment, vars, Formula, Fragment};
use crate::semantics::{denotation, SemanticsError};
use crate::team::{is_downward_closed, mask_members, IndexSet, Team, TeamFamily, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("the family is not nonempty and downward closed")]
    NotDownwardClosed,
    #[error("Ξ_Y needs a nonempty team Y")]
    EmptyY,
    #[error("no formula over an empty variable set defines this family")]
    EmptyIndexSet,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Which defining formula to build for a team.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefiningStyle {
    Theta,
    Psi,
}

/// Shape of the normal form produced by [`synthesize`] and [`normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormStyle {
    /// `⋁_{X∈K} Θ_X`, a PDv formula.
    TensorDnf,
    /// `⋁_{X∈K} Ψ_X`, an InqL formula.
    NegNegDnf,
    /// `⋀_{Y∉K} Ξ_Y`, a PD formula.
    DepCnf,
}

impl NormalFormStyle {
    pub fn fragment(self) -> Fragment {
        match self {
            NormalFormStyle::TensorDnf => Fragment::PdV,
            NormalFormStyle::NegNegDnf => Fragment::InqL,
            NormalFormStyle::DepCnf => Fragment::Pd,
        }
    }
}

/// Literal conjunction `p_{i1}^{s(i1)} ∧ ... ∧ p_{in}^{s(in)}` over the
/// valuation's domain; `None` on the empty domain.
pub fn literal_conjunction(s: &Valuation) -> Option<Formula> {
    let dom = s.domain().vars().to_vec();
    Formula::big_and(
        dom.into_iter()
            .zip(s.bits())
            .map(|(v, b)| Formula::literal(v, b)),
    )
}

/// Same, with `¬p` written as `p -> bot` (the InqL form).
fn literal_conjunction_impl(s: &Valuation) -> Option<Formula> {
    let dom = s.domain().vars().to_vec();
    Formula::big_and(dom.into_iter().zip(s.bits()).map(|(v, b)| {
        if b {
            Formula::Var(v)
        } else {
            Formula::neg_impl(Formula::Var(v))
        }
    }))
}

/// Members of the team `mask` over `n`, in descending valuation order.
pub fn members_desc(n: &IndexSet, mask: u64) -> Vec<Valuation> {
    let mut idx: Vec<usize> = mask_members(mask).collect();
    idx.reverse();
    idx.into_iter()
        .map(|i| Valuation::from_index(n.clone(), i))
        .collect()
}

/// `Θ_X` for the team with bitmask `mask` over `n`.
pub fn theta_mask(n: &IndexSet, mask: u64) -> Result<Formula, NormalFormError> {
    if mask == 0 {
        return Ok(Formula::Bot);
    }
    let clauses = members_desc(n, mask)
        .iter()
        .map(literal_conjunction)
        .collect::<Option<Vec<_>>>()
        .ok_or(NormalFormError::EmptyIndexSet)?;
    Ok(Formula::big_tensor(clauses).expect("nonempty team"))
}

/// `Ψ_X` for the team with bitmask `mask` over `n`.
pub fn psi_mask(n: &IndexSet, mask: u64) -> Result<Formula, NormalFormError> {
    if mask == 0 {
        return Ok(Formula::Bot);
    }
    let clauses = members_desc(n, mask)
        .iter()
        .map(literal_conjunction_impl)
        .collect::<Option<Vec<_>>>()
        .ok_or(NormalFormError::EmptyIndexSet)?;
    let disj = Formula::big_or(clauses).expect("nonempty team");
    Ok(Formula::neg_impl(Formula::neg_impl(disj)))
}

/// `Θ_X` or `Ψ_X`: a formula satisfied by exactly the subteams of `x`.
pub fn defining_formula(x: &Team, style: DefiningStyle) -> Result<Formula, NormalFormError> {
    match style {
        DefiningStyle::Theta => theta_mask(x.domain(), x.mask()),
        DefiningStyle::Psi => psi_mask(x.domain(), x.mask()),
    }
}

/// `α_1 = =(p_{i1}) ∧ ... ∧ =(p_{in})`.
fn alpha_one(n: &IndexSet) -> Result<Formula, NormalFormError> {
    Formula::big_and(n.vars().iter().map(|v| Formula::constancy(*v)))
        .ok_or(NormalFormError::EmptyIndexSet)
}

/// `α_m`: satisfied exactly by teams with at most `m` members.
pub fn alpha_card(m: usize, n: &IndexSet) -> Result<Formula, NormalFormError> {
    if m == 0 {
        return Ok(Formula::Bot);
    }
    let a1 = alpha_one(n)?;
    Ok(Formula::big_tensor(std::iter::repeat_n(a1, m)).expect("m ≥ 1"))
}

/// `Ξ_Y = α_{|Y|-1} ⊗ Θ_{2^N∖Y}` written as one left-associated tensor chain.
/// Satisfied exactly by the teams that do not include `Y`.
pub fn xi(y: &Team) -> Result<Formula, NormalFormError> {
    xi_mask(y.domain(), y.mask())
}

pub fn xi_mask(n: &IndexSet, y: u64) -> Result<Formula, NormalFormError> {
    if y == 0 {
        return Err(NormalFormError::EmptyY);
    }
    let k = y.count_ones() as usize - 1;
    let mut items = if k == 0 {
        vec![Formula::Bot]
    } else {
        vec![alpha_one(n)?; k]
    };
    let rest = n.full_mask() & !y;
    if rest == 0 {
        items.push(Formula::Bot);
    } else {
        for s in members_desc(n, rest) {
            items.push(literal_conjunction(&s).ok_or(NormalFormError::EmptyIndexSet)?);
        }
    }
    Ok(Formula::big_tensor(items).expect("nonempty chain"))
}

/// A formula of the requested style whose denotation over `n` is `k`.
///
/// With `maximal`, the disjunctive styles use only the ⊆-maximal members of
/// `k` and the conjunctive style only the ⊆-minimal non-members.
pub fn synthesize(
    k: &TeamFamily,
    style: NormalFormStyle,
    maximal: bool,
) -> Result<Formula, NormalFormError> {
    if !is_downward_closed(k) {
        return Err(NormalFormError::NotDownwardClosed);
    }
    let n = k.domain();
    if k.masks().iter().all(|m| *m == 0) {
        return Ok(Formula::Bot);
    }
    match style {
        NormalFormStyle::TensorDnf | NormalFormStyle::NegNegDnf => {
            let members: Vec<u64> = if maximal {
                k.maximal_masks()
            } else {
                k.masks().iter().copied().collect()
            };
            let parts = members
                .iter()
                .map(|m| match style {
                    NormalFormStyle::TensorDnf => theta_mask(n, *m),
                    _ => psi_mask(n, *m),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::big_or(parts).expect("nonempty family"))
        }
        NormalFormStyle::DepCnf => {
            let mut outside: Vec<u64> = (1..=n.full_mask())
                .filter(|m| !k.masks().contains(m))
                .collect();
            if maximal {
                let all = outside.clone();
                outside.retain(|m| !all.iter().any(|o| o != m && o & !m == 0));
            }
            if outside.is_empty() {
                return alpha_card(n.valuation_count(), n);
            }
            let parts = outside
                .iter()
                .map(|y| xi_mask(n, *y))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::big_and(parts).expect("nonempty list"))
        }
    }
}

/// An equivalent formula in the requested normal form, over vars(f).
pub fn normalize(
    f: &Formula,
    style: NormalFormStyle,
    maximal: bool,
) -> Result<Formula, NormalFormError> {
    let n = IndexSet::from(vars(f));
    let k = denotation(f, &n)?;
    let out = synthesize(&k, style, maximal)?;
    debug_assert!(in_fragment(&out, style.fragment()));
    Ok(out)
}

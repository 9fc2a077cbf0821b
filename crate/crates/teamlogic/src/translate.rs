//! Translations of dependence atoms into other connectives, and the
//! realization machinery that replaces atoms by classical formulas.
//!
//! For an atom `=(p_{i1},...,p_{ik},p_j)` let `K` be the set of its argument
//! variables. A realizing function `f: 2^K → 2` picks a value of `p_j` for
//! each argument valuation, and `α*_f = ⊗_{s∈2^K}(c_s ∧ p_j^{f(s)})` where
//! `c_s` is the literal conjunction of `s`. The star form `α*` puts `=(p_j)`
//! in place of the chosen literal. Argument valuations are listed in
//! descending order, matching the clause order of `Θ_X`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{atom_path_at, Formula, OccurrenceAddress, Path, VarId};
use crate::normalform::{literal_conjunction, members_desc};
use crate::team::{IndexSet, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("occurrence sequence does not match the formula: {0}")]
    MismatchedSequence(String),
}

/// How [`translate_atom`] rewrites a dependence atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomStyle {
    /// `⊗_s (c_s ∧ (p_j ∨ ¬p_j))`.
    TensorLem,
    /// `⋁_f α*_f`.
    RealizationDisjunction,
    /// `(=(p_{i1}) ∧ ... ∧ =(p_{ik})) → =(p_j)`.
    Implication,
}

/// A function from valuations on `args` to {0,1}. `table[i]` is the value on
/// the valuation with canonical index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealizingFunction {
    pub args: IndexSet,
    pub table: Vec<bool>,
}

impl RealizingFunction {
    pub fn value(&self, s: &Valuation) -> bool {
        self.table[s.index()]
    }
}

/// Ordered `(address, atom)` pairs naming dependence-atom occurrences.
pub type OccurrenceSequence = Vec<(OccurrenceAddress, Formula)>;

/// One realizing function per entry of an occurrence sequence.
pub type RealizingSequence = Vec<RealizingFunction>;

fn dep_parts(a: &Formula) -> (&[VarId], VarId) {
    match a {
        Formula::Dep { args, target } => (args, *target),
        _ => panic!("expected a dependence atom, got {a}"),
    }
}

/// The argument set `K` of a dependence atom.
pub fn atom_domain(a: &Formula) -> IndexSet {
    IndexSet::new(dep_parts(a).0.iter().copied())
}

/// All `2^{2^|K|}` realizing functions on `k`. The first is constantly 1 and
/// the last constantly 0; in between, functions are ordered by their value
/// table read as a binary number with valuation 0 as the lowest bit,
/// descending.
pub fn realizing_functions(k: &IndexSet) -> Vec<RealizingFunction> {
    let rows = k.valuation_count();
    let count = 1u64 << rows;
    (0..count)
        .rev()
        .map(|code| RealizingFunction {
            args: k.clone(),
            table: (0..rows).map(|i| code >> i & 1 == 1).collect(),
        })
        .collect()
}

/// `α*_f` for the atom `a`.
pub fn realization(a: &Formula, f: &RealizingFunction) -> Formula {
    let (_, target) = dep_parts(a);
    let k = atom_domain(a);
    assert_eq!(k, f.args, "realizing function over the wrong arguments");
    let items = members_desc(&k, k.full_mask()).into_iter().map(|s| {
        let lit = Formula::literal(target, f.value(&s));
        match literal_conjunction(&s) {
            Some(c) => Formula::and(c, lit),
            None => lit,
        }
    });
    Formula::big_tensor(items).expect("2^K is nonempty")
}

/// `α*`: the argument case split with `=(p_j)` in each branch. A constancy
/// atom is its own star form.
pub fn star_atom(a: &Formula) -> Formula {
    let (args, target) = dep_parts(a);
    if args.is_empty() {
        return a.clone();
    }
    let k = atom_domain(a);
    let items = members_desc(&k, k.full_mask()).into_iter().map(|s| {
        Formula::and(
            literal_conjunction(&s).expect("K nonempty"),
            Formula::constancy(target),
        )
    });
    Formula::big_tensor(items).expect("2^K is nonempty")
}

/// Rewrite a single dependence atom in the given style.
pub fn translate_atom(a: &Formula, style: AtomStyle) -> Formula {
    let (args, target) = dep_parts(a);
    let k = atom_domain(a);
    let lem = || Formula::or(Formula::Var(target), Formula::NegVar(target));
    match style {
        AtomStyle::TensorLem => {
            if args.is_empty() {
                return lem();
            }
            let items = members_desc(&k, k.full_mask())
                .into_iter()
                .map(|s| Formula::and(literal_conjunction(&s).expect("K nonempty"), lem()));
            Formula::big_tensor(items).expect("2^K is nonempty")
        }
        AtomStyle::RealizationDisjunction => {
            Formula::big_or(realizing_functions(&k).iter().map(|f| realization(a, f)))
                .expect("functions exist")
        }
        AtomStyle::Implication => {
            if args.is_empty() {
                return a.clone();
            }
            let ante =
                Formula::big_and(args.iter().map(|i| Formula::constancy(*i))).expect("k ≥ 1");
            Formula::implies(ante, Formula::constancy(target))
        }
    }
}

/// Rewrite every dependence atom of `f` with [`translate_atom`].
pub fn translate_atoms(f: &Formula, style: AtomStyle) -> Formula {
    match f {
        Formula::Dep { .. } => translate_atom(f, style),
        _ => match f.children() {
            Some((l, r)) => f.rebuild(translate_atoms(l, style), translate_atoms(r, style)),
            None => f.clone(),
        },
    }
}

/// Remove every dependence atom: many-argument atoms via the implication
/// form, then constancy atoms as `p ∨ ¬p`.
pub fn eliminate_dep(f: &Formula) -> Formula {
    match f {
        Formula::Dep { args, target } => {
            let lem = |v: VarId| Formula::or(Formula::Var(v), Formula::NegVar(v));
            if args.is_empty() {
                lem(*target)
            } else {
                let ante = Formula::big_and(args.iter().map(|i| lem(*i))).expect("k ≥ 1");
                Formula::implies(ante, lem(*target))
            }
        }
        _ => match f.children() {
            Some((l, r)) => f.rebuild(eliminate_dep(l), eliminate_dep(r)),
            None => f.clone(),
        },
    }
}

/// Every dependence-atom occurrence of `f`, left to right.
pub fn complete_occurrences(f: &Formula) -> OccurrenceSequence {
    crate::formula::occurrence_paths(f)
        .into_iter()
        .filter(|(_, _, g)| g.is_dep())
        .map(|(a, _, g)| (a, g.clone()))
        .collect()
}

fn resolve(f: &Formula, o: &OccurrenceSequence) -> Result<Vec<Path>, TranslateError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (addr, atom) in o {
        let path = atom_path_at(f, *addr).map_err(|_| {
            TranslateError::MismatchedSequence(format!("no atom starts at address {addr}"))
        })?;
        let found = f.at_path(&path).expect("resolved path");
        if found != atom || !atom.is_dep() {
            return Err(TranslateError::MismatchedSequence(format!(
                "address {addr} holds {found}, not the dependence atom {atom}"
            )));
        }
        if !seen.insert(*addr) {
            return Err(TranslateError::MismatchedSequence(format!(
                "address {addr} listed twice"
            )));
        }
        out.push(path);
    }
    Ok(out)
}

/// Replace each listed occurrence by its realization under the matching
/// function of `omega`.
pub fn realize(
    f: &Formula,
    o: &OccurrenceSequence,
    omega: &RealizingSequence,
) -> Result<Formula, TranslateError> {
    if o.len() != omega.len() {
        return Err(TranslateError::MismatchedSequence(format!(
            "{} occurrences but {} realizing functions",
            o.len(),
            omega.len()
        )));
    }
    let paths = resolve(f, o)?;
    let mut out = f.clone();
    for ((path, (_, atom)), func) in paths.iter().zip(o).zip(omega) {
        if atom_domain(atom) != func.args {
            return Err(TranslateError::MismatchedSequence(format!(
                "function over {} given for {atom}",
                func.args
            )));
        }
        out = out
            .replace_path(path, realization(atom, func))
            .expect("valid path");
    }
    Ok(out)
}

/// Replace each listed occurrence by its star form.
pub fn star_translate(f: &Formula, o: &OccurrenceSequence) -> Result<Formula, TranslateError> {
    let paths = resolve(f, o)?;
    let mut out = f.clone();
    for (path, (_, atom)) in paths.iter().zip(o) {
        out = out.replace_path(path, star_atom(atom)).expect("valid path");
    }
    Ok(out)
}

/// All realizing sequences over `o`, with the first occurrence varying slowest.
pub fn realizing_sequences(o: &OccurrenceSequence) -> Vec<RealizingSequence> {
    let mut acc: Vec<RealizingSequence> = vec![Vec::new()];
    for (_, atom) in o {
        let fs = realizing_functions(&atom_domain(atom));
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                fs.iter().map(move |f| {
                    let mut p = prefix.clone();
                    p.push(f.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

//! The natural deduction checker for PDv and PD.

use std::collections::BTreeMap;

use crate::formula::{atom_at, first_violation, replace_atom_at, Formula};

use super::{Derivation, Judgment, ProofError, ProofSystem, Rule, Step};

type Open = BTreeMap<String, Formula>;

struct Checked {
    conclusion: Formula,
    open: Open,
}

/// Check a derivation in `ND_PDv` or `ND_PD` and return its judgment.
pub fn check_nd(d: &Derivation, sys: ProofSystem) -> Result<Judgment, ProofError> {
    if sys.is_hilbert() {
        return Err(ProofError::WrongSystem(format!("{sys:?}")));
    }
    let mut path = vec![];
    let c = check(d, sys, &mut path)?;
    Ok(Judgment {
        context: c.open.into_values().collect(),
        conclusion: c.conclusion,
    })
}

fn node_name(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

fn violation(path: &[usize], reason: impl Into<String>) -> ProofError {
    ProofError::RuleViolation {
        node: node_name(path),
        reason: reason.into(),
    }
}

fn in_fragment(f: &Formula, sys: ProofSystem, path: &[usize]) -> Result<(), ProofError> {
    match first_violation(f, sys.fragment()) {
        None => Ok(()),
        Some(_) => Err(ProofError::FragmentViolation {
            node: node_name(path),
            formula: f.clone(),
            fragment: sys.fragment(),
        }),
    }
}

fn merge(into: &mut Open, from: Open, path: &[usize]) -> Result<(), ProofError> {
    for (label, f) in from {
        match into.get(&label) {
            Some(g) if *g != f => {
                return Err(ProofError::BadDischarge {
                    node: node_name(path),
                    reason: format!("label {label} names both {g} and {f}"),
                })
            }
            Some(_) => {}
            None => {
                into.insert(label, f);
            }
        }
    }
    Ok(())
}

/// Close `label` in `open`, checking that it names `expected`. Vacuous
/// discharge is accepted only when `vacuous_ok`.
fn discharge(
    open: &mut Open,
    label: &str,
    expected: &Formula,
    vacuous_ok: bool,
    path: &[usize],
) -> Result<(), ProofError> {
    match open.remove(label) {
        Some(f) if f == *expected => Ok(()),
        Some(f) => Err(ProofError::BadDischarge {
            node: node_name(path),
            reason: format!("label {label} names {f} but the rule discharges {expected}"),
        }),
        None if vacuous_ok => Ok(()),
        None => Err(ProofError::BadDischarge {
            node: node_name(path),
            reason: format!("label {label} does not occur open in the discharging subderivation"),
        }),
    }
}

fn check(d: &Derivation, sys: ProofSystem, path: &mut Vec<usize>) -> Result<Checked, ProofError> {
    match d {
        Derivation::Hyp { label, formula } => {
            in_fragment(formula, sys, path)?;
            let mut open = Open::new();
            open.insert(label.clone(), formula.clone());
            Ok(Checked {
                conclusion: formula.clone(),
                open,
            })
        }
        Derivation::Step(step) => {
            if !step.rule.in_system(sys) {
                return Err(violation(
                    path,
                    format!("rule {} is not part of {sys:?}", step.rule),
                ));
            }
            let mut kids = Vec::with_capacity(step.premises.len());
            for (i, p) in step.premises.iter().enumerate() {
                path.push(i);
                kids.push(check(p, sys, path)?);
                path.pop();
            }
            if let Some(side) = &step.side {
                in_fragment(side, sys, path)?;
            }
            let out = apply(step, kids, path)?;
            in_fragment(&out.conclusion, sys, path)?;
            Ok(out)
        }
    }
}

fn expect_shape(
    step: &Step,
    premises: usize,
    discharges: usize,
    side: bool,
    addr: bool,
    path: &[usize],
) -> Result<(), ProofError> {
    if step.premises.len() != premises {
        return Err(violation(
            path,
            format!(
                "{} takes {premises} premises, got {}",
                step.rule,
                step.premises.len()
            ),
        ));
    }
    if step.discharges.len() != discharges {
        return Err(ProofError::BadDischarge {
            node: node_name(path),
            reason: format!(
                "{} discharges {discharges} labels, got {}",
                step.rule,
                step.discharges.len()
            ),
        });
    }
    if step.side.is_some() != side {
        return Err(violation(
            path,
            if side {
                format!("{} needs a side formula", step.rule)
            } else {
                format!("{} takes no side formula", step.rule)
            },
        ));
    }
    if step.addr.is_some() != addr {
        return Err(ProofError::BadAddress {
            node: node_name(path),
            reason: if addr {
                "SE needs an address".into()
            } else {
                format!("{} takes no address", step.rule)
            },
        });
    }
    Ok(())
}

/// Merge the open hypotheses of every premise into one context.
fn collect(kids: Vec<Checked>, path: &[usize]) -> Result<(Vec<Formula>, Open), ProofError> {
    let mut open = Open::new();
    let mut concl = Vec::with_capacity(kids.len());
    for k in kids {
        merge(&mut open, k.open, path)?;
        concl.push(k.conclusion);
    }
    Ok((concl, open))
}

fn done(conclusion: Formula, open: Open) -> Result<Checked, ProofError> {
    Ok(Checked { conclusion, open })
}

/// Shared shape of `∨E`, `⊗E⁻`, `DepE0` and `SE`: a major premise and two
/// case subderivations concluding the same formula.
fn case_split(
    step: &Step,
    mut kids: Vec<Checked>,
    left: &Formula,
    right: &Formula,
    path: &[usize],
) -> Result<Checked, ProofError> {
    let c2 = kids.pop().expect("three premises");
    let c1 = kids.pop().expect("three premises");
    let major = kids.pop().expect("three premises");
    if c1.conclusion != c2.conclusion {
        return Err(violation(
            path,
            format!("the cases conclude {} and {}", c1.conclusion, c2.conclusion),
        ));
    }
    let (mut o1, mut o2) = (c1.open, c2.open);
    discharge(&mut o1, &step.discharges[0], left, false, path)?;
    discharge(&mut o2, &step.discharges[1], right, false, path)?;
    let mut open = major.open;
    merge(&mut open, o1, path)?;
    merge(&mut open, o2, path)?;
    done(c1.conclusion, open)
}

fn apply(step: &Step, kids: Vec<Checked>, path: &[usize]) -> Result<Checked, ProofError> {
    use Formula as F;
    let shape = |p, d, s, a| expect_shape(step, p, d, s, a, path);
    let side = step.side.clone();
    match step.rule {
        Rule::Em0 => {
            shape(0, 0, true, false)?;
            match side.expect("checked") {
                F::Var(i) => done(F::tensor(F::Var(i), F::NegVar(i)), Open::new()),
                other => Err(violation(
                    path,
                    format!("EM0 is stated for a variable, not {other}"),
                )),
            }
        }
        Rule::AndI => {
            shape(2, 0, false, false)?;
            let (mut c, open) = collect(kids, path)?;
            let r = c.pop().unwrap();
            let l = c.pop().unwrap();
            done(F::and(l, r), open)
        }
        Rule::AndEl | Rule::AndEr => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::And(l, r) => done(
                    if step.rule == Rule::AndEl {
                        (**l).clone()
                    } else {
                        (**r).clone()
                    },
                    open,
                ),
                other => Err(violation(
                    path,
                    format!("{} needs a conjunction, got {other}", step.rule),
                )),
            }
        }
        Rule::OrIl | Rule::OrIr | Rule::TensorIl | Rule::TensorIr => {
            shape(1, 0, true, false)?;
            let (mut c, open) = collect(kids, path)?;
            let p = c.pop().unwrap();
            let s = side.unwrap();
            let (l, r) = match step.rule {
                Rule::OrIl | Rule::TensorIl => (p, s),
                _ => (s, p),
            };
            let out = match step.rule {
                Rule::OrIl | Rule::OrIr => F::or(l, r),
                _ => F::tensor(l, r),
            };
            done(out, open)
        }
        Rule::OrE | Rule::TensorEMinus => {
            shape(3, 2, false, false)?;
            let (l, r) = match (&kids[0].conclusion, step.rule) {
                (F::IDisj(l, r), Rule::OrE) | (F::Tensor(l, r), Rule::TensorEMinus) => {
                    ((**l).clone(), (**r).clone())
                }
                (other, rule) => {
                    return Err(violation(path, format!("{rule} cannot eliminate {other}")));
                }
            };
            if step.rule == Rule::TensorEMinus && !kids[1].conclusion.is_classical() {
                return Err(ProofError::SideConditionViolated {
                    node: node_name(path),
                    reason: format!(
                        "⊗E⁻ concludes {}, which is not classical",
                        kids[1].conclusion
                    ),
                });
            }
            case_split(step, kids, &l, &r, path)
        }
        Rule::TensorSub => {
            shape(2, 1, false, false)?;
            let mut kids = kids;
            let body = kids.pop().unwrap();
            let major = kids.pop().unwrap();
            let (phi, psi) = match &major.conclusion {
                F::Tensor(l, r) => ((**l).clone(), (**r).clone()),
                other => return Err(violation(path, format!("⊗Sub needs a tensor, got {other}"))),
            };
            let mut bo = body.open;
            discharge(&mut bo, &step.discharges[0], &psi, false, path)?;
            let mut open = major.open;
            merge(&mut open, bo, path)?;
            done(F::tensor(phi, body.conclusion), open)
        }
        Rule::ComTensor => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::Tensor(l, r) => done(F::tensor((**r).clone(), (**l).clone()), open),
                other => Err(violation(path, format!("Com⊗ needs a tensor, got {other}"))),
            }
        }
        Rule::AssTensor => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::Tensor(a, bc) => match &**bc {
                    F::Tensor(b, cc) => done(
                        F::tensor(F::tensor((**a).clone(), (**b).clone()), (**cc).clone()),
                        open,
                    ),
                    _ => Err(violation(path, format!("Ass⊗ needs φ⊗(ψ⊗χ), got {}", c[0]))),
                },
                other => Err(violation(path, format!("Ass⊗ needs φ⊗(ψ⊗χ), got {other}"))),
            }
        }
        Rule::BotI => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::And(l, r) => match (&**l, &**r) {
                    (F::Var(i), F::NegVar(j)) if i == j => done(F::Bot, open),
                    _ => Err(violation(path, format!("⊥I needs p_i∧¬p_i, got {}", c[0]))),
                },
                other => Err(violation(path, format!("⊥I needs p_i∧¬p_i, got {other}"))),
            }
        }
        Rule::BotE => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::Tensor(l, r) if **r == F::Bot => done((**l).clone(), open),
                other => Err(violation(path, format!("⊥E needs φ⊗⊥, got {other}"))),
            }
        }
        Rule::DstrTensorOr => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::Tensor(phi, r) => match &**r {
                    F::IDisj(psi, chi) => done(
                        F::or(
                            F::tensor((**phi).clone(), (**psi).clone()),
                            F::tensor((**phi).clone(), (**chi).clone()),
                        ),
                        open,
                    ),
                    _ => Err(violation(
                        path,
                        format!("Dstr⊗∨ needs φ⊗(ψ∨χ), got {}", c[0]),
                    )),
                },
                other => Err(violation(
                    path,
                    format!("Dstr⊗∨ needs φ⊗(ψ∨χ), got {other}"),
                )),
            }
        }
        Rule::DepI0 => {
            shape(1, 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            match &c[0] {
                F::Var(i) | F::NegVar(i) => done(F::constancy(*i), open),
                other => Err(violation(
                    path,
                    format!("DepI0 needs a literal, got {other}"),
                )),
            }
        }
        Rule::DepIk => {
            let k = match &step.side {
                Some(F::Dep { args, .. }) if !args.is_empty() => args.len(),
                Some(other) => {
                    return Err(violation(
                        path,
                        format!("DepIk concludes a dependence atom with arguments, not {other}"),
                    ))
                }
                None => {
                    return Err(violation(
                        path,
                        "DepIk needs the concluded atom as its side formula",
                    ))
                }
            };
            shape(1, k, true, false)?;
            let Some(F::Dep { args, target }) = side else {
                unreachable!()
            };
            let body = kids.into_iter().next().unwrap();
            if body.conclusion != F::constancy(target) {
                return Err(violation(
                    path,
                    format!(
                        "DepIk needs a derivation of =(p{target}), got {}",
                        body.conclusion
                    ),
                ));
            }
            let mut open = body.open;
            for (label, a) in step.discharges.iter().zip(&args) {
                discharge(&mut open, label, &F::constancy(*a), true, path)?;
            }
            done(F::Dep { args, target }, open)
        }
        Rule::DepE0 => {
            shape(3, 2, false, false)?;
            let i = match &kids[0].conclusion {
                F::Dep { args, target } if args.is_empty() => *target,
                other => {
                    return Err(violation(
                        path,
                        format!("DepE0 needs a constancy atom, got {other}"),
                    ))
                }
            };
            case_split(step, kids, &F::Var(i), &F::NegVar(i), path)
        }
        Rule::DepEk => {
            let (args, target) = match kids.first().map(|k| &k.conclusion) {
                Some(F::Dep { args, target }) if !args.is_empty() => (args.clone(), *target),
                Some(other) => {
                    return Err(violation(
                        path,
                        format!("DepEk needs a dependence atom with arguments, got {other}"),
                    ))
                }
                None => return Err(violation(path, "DepEk needs premises")),
            };
            shape(1 + args.len(), 0, false, false)?;
            let (c, open) = collect(kids, path)?;
            let mut have = Vec::new();
            for g in &c[1..] {
                match g {
                    F::Dep { args: a, target: t } if a.is_empty() => have.push(*t),
                    other => {
                        return Err(violation(
                            path,
                            format!("DepEk needs constancy atoms, got {other}"),
                        ))
                    }
                }
            }
            let mut want = args.clone();
            want.sort_unstable();
            want.dedup();
            have.sort_unstable();
            have.dedup();
            if want != have {
                return Err(violation(
                    path,
                    "the constancy premises do not match the atom's arguments",
                ));
            }
            done(F::constancy(target), open)
        }
        Rule::Se => {
            shape(3, 2, false, true)?;
            let m = step.addr.unwrap();
            let phi = kids[0].conclusion.clone();
            let bad = |reason: String| ProofError::BadAddress {
                node: node_name(path),
                reason,
            };
            let i = match atom_at(&phi, m) {
                Ok(F::Dep { args, target }) if args.is_empty() => *target,
                Ok(other) => {
                    return Err(bad(format!(
                        "address {m} of {phi} holds {other}, not a constancy atom"
                    )))
                }
                Err(_) => return Err(bad(format!("address {m} names no atom of {phi}"))),
            };
            let pos = replace_atom_at(&phi, m, F::Var(i)).expect("address checked");
            let neg = replace_atom_at(&phi, m, F::NegVar(i)).expect("address checked");
            case_split(step, kids, &pos, &neg, path)
        }
    }
}

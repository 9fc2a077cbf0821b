//! Derivations of the standard derived rules and of Armstrong's axioms.

use crate::formula::{Formula, VarId};

use super::build::{Builder, Pf};
use super::{check_nd, Derivation, Judgment, ProofError, ProofSystem};

/// Names accepted by [`derive_named`].
pub const NAMED_RULES: [&str; 21] = [
    "ex_falso",
    "com_and",
    "ass_and",
    "com_or",
    "ass_or",
    "dstr_and_or_a",
    "dstr_and_or_b",
    "dstr_and_or_c",
    "dstr_and_or_d",
    "dstr_tensor_and",
    "dstr_and_tensor",
    "dstr_or_tensor",
    "dstr_tensor_or_tensor",
    "dstr_star_tensor_and",
    "dstr_star_and_tensor",
    "and_sub",
    "armstrong_i",
    "armstrong_ii",
    "armstrong_iii",
    "armstrong_iv",
    "armstrong_v",
];

/// Instantiation of the metavariables of a derived rule. Formula rules use
/// `phi`, `psi` and `chi` (`phi` plays `α` in the starred rules); Armstrong's
/// axioms use `x`, `y` and `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedParams {
    pub phi: Formula,
    pub psi: Formula,
    pub chi: Formula,
    pub x: VarId,
    pub y: VarId,
    pub z: VarId,
}

impl Default for NamedParams {
    fn default() -> Self {
        NamedParams {
            phi: Formula::Var(1),
            psi: Formula::Var(2),
            chi: Formula::Var(3),
            x: 1,
            y: 2,
            z: 3,
        }
    }
}

/// A checked derivation of a named rule.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedDerivation {
    pub name: &'static str,
    pub system: ProofSystem,
    pub derivation: Derivation,
    pub judgment: Judgment,
}

fn uses_or(name: &str) -> bool {
    name.contains("_or") || name.starts_with("dstr_and_or")
}

fn has_dep(f: &Formula) -> bool {
    match f {
        Formula::Dep { .. } => true,
        _ => f.children().is_some_and(|(l, r)| has_dep(l) || has_dep(r)),
    }
}

/// Build and check the derivation of a named rule.
pub fn derive_named(name: &str, params: &NamedParams) -> Result<NamedDerivation, ProofError> {
    let name = *NAMED_RULES
        .iter()
        .find(|n| **n == name)
        .ok_or_else(|| ProofError::BadParams(format!("unknown rule {name}")))?;
    let NamedParams {
        phi,
        psi,
        chi,
        x,
        y,
        z,
    } = params.clone();
    if name.starts_with("dstr_star") && !phi.is_classical() {
        return Err(ProofError::BadParams(format!(
            "{name} needs a classical α, got {phi}"
        )));
    }
    let system = if name.starts_with("armstrong")
        || (!uses_or(name) && [&phi, &psi, &chi].into_iter().any(has_dep))
    {
        ProofSystem::NdPd
    } else {
        ProofSystem::NdPdV
    };
    let mut b = Builder::new();
    let b = &mut b;
    let and = Formula::and;
    let or = Formula::or;
    let tensor = Formula::tensor;
    let pf: Pf = match name {
        "ex_falso" => {
            let h = b.hyp("g0", Formula::Bot);
            b.ex_falso(h, phi)
        }
        "com_and" => {
            let h = b.hyp("g0", and(phi, psi));
            let r = b.and_r(h.clone());
            let l = b.and_l(h);
            b.and_i(r, l)
        }
        "ass_and" => {
            let h = b.hyp("g0", and(and(phi, psi), chi));
            let l = b.and_l(h.clone());
            let a = b.and_l(l.clone());
            let m = b.and_r(l);
            let c = b.and_r(h);
            let r = b.and_i(m, c);
            b.and_i(a, r)
        }
        "com_or" => {
            let h = b.hyp("g0", or(phi.clone(), psi.clone()));
            b.or_e(h, |b, a| b.or_ir(psi, a), |b, c| b.or_il(c, phi))
        }
        "ass_or" => {
            let h = b.hyp("g0", or(or(phi.clone(), psi.clone()), chi.clone()));
            let right = or(psi.clone(), chi.clone());
            b.or_e(
                h,
                |b, l| {
                    b.or_e(
                        l,
                        |b, a| b.or_il(a, right.clone()),
                        |b, m| {
                            let m = b.or_il(m, chi.clone());
                            b.or_ir(phi.clone(), m)
                        },
                    )
                },
                |b, c| {
                    let c = b.or_ir(psi.clone(), c);
                    b.or_ir(phi.clone(), c)
                },
            )
        }
        "dstr_and_or_a" => {
            let h = b.hyp("g0", and(phi.clone(), or(psi.clone(), chi.clone())));
            let d = b.and_r(h.clone());
            let h2 = h.clone();
            b.or_e(
                d,
                |b, l| {
                    let a = b.and_l(h);
                    let c = b.and_i(a, l);
                    b.or_il(c, and(phi.clone(), chi.clone()))
                },
                |b, r| {
                    let a = b.and_l(h2);
                    let c = b.and_i(a, r);
                    b.or_ir(and(phi.clone(), psi.clone()), c)
                },
            )
        }
        "dstr_and_or_b" => {
            let h = b.hyp(
                "g0",
                or(and(phi.clone(), psi.clone()), and(phi.clone(), chi.clone())),
            );
            b.or_e(
                h,
                |b, l| {
                    let a = b.and_l(l.clone());
                    let p = b.and_r(l);
                    let d = b.or_il(p, chi.clone());
                    b.and_i(a, d)
                },
                |b, r| {
                    let a = b.and_l(r.clone());
                    let c = b.and_r(r);
                    let d = b.or_ir(psi.clone(), c);
                    b.and_i(a, d)
                },
            )
        }
        "dstr_and_or_c" => {
            let h = b.hyp("g0", or(phi.clone(), and(psi.clone(), chi.clone())));
            b.or_e(
                h,
                |b, a| {
                    let l = b.or_il(a.clone(), psi.clone());
                    let r = b.or_il(a, chi.clone());
                    b.and_i(l, r)
                },
                |b, m| {
                    let p = b.and_l(m.clone());
                    let l = b.or_ir(phi.clone(), p);
                    let c = b.and_r(m);
                    let r = b.or_ir(phi.clone(), c);
                    b.and_i(l, r)
                },
            )
        }
        "dstr_and_or_d" => {
            let h = b.hyp(
                "g0",
                and(or(phi.clone(), psi.clone()), or(phi.clone(), chi.clone())),
            );
            let first = b.and_l(h.clone());
            let target_r = and(psi.clone(), chi.clone());
            b.or_e(
                first,
                |b, a| b.or_il(a, target_r.clone()),
                |b, p| {
                    let second = b.and_r(h);
                    b.or_e(
                        second,
                        |b, a| b.or_il(a, target_r.clone()),
                        |b, c| {
                            let m = b.and_i(p, c);
                            b.or_ir(phi.clone(), m)
                        },
                    )
                },
            )
        }
        "dstr_tensor_and" => {
            let h = b.hyp("g0", tensor(phi, and(psi, chi)));
            let l = b.map_right(h.clone(), |b, m| b.and_l(m));
            let r = b.map_right(h, |b, m| b.and_r(m));
            b.and_i(l, r)
        }
        "dstr_and_tensor" => {
            let h = b.hyp("g0", and(phi, tensor(psi, chi)));
            b.dstr_and_tensor(h)
        }
        "dstr_or_tensor" => {
            let h = b.hyp("g0", or(phi.clone(), tensor(psi.clone(), chi.clone())));
            b.or_e(
                h,
                |b, a| {
                    let t = b.t_il(a, phi.clone());
                    let t = b.map_left(t, |b, l| b.or_il(l, psi.clone()));
                    b.map_right(t, |b, r| b.or_il(r, chi.clone()))
                },
                |b, t| {
                    let t = b.map_left(t, |b, l| b.or_ir(phi.clone(), l));
                    b.map_right(t, |b, r| b.or_ir(phi.clone(), r))
                },
            )
        }
        "dstr_tensor_or_tensor" => {
            let h = b.hyp(
                "g0",
                or(tensor(phi.clone(), psi.clone()), tensor(phi, chi.clone())),
            );
            b.or_e(
                h,
                |b, l| b.map_right(l, |b, m| b.or_il(m, chi.clone())),
                |b, r| b.map_right(r, |b, m| b.or_ir(psi.clone(), m)),
            )
        }
        "dstr_star_tensor_and" => {
            let alpha = phi;
            let h = b.hyp("g0", and(tensor(alpha.clone(), psi), tensor(alpha, chi)));
            let d = b.dstr_and_tensor(h);
            let d = b.map_left(d, |b, l| b.and_r(l));
            let d = b.map_right(d, |b, y| {
                let c = b.and_r(y.clone());
                let t = b.and_l(y);
                let swapped = b.and_i(c, t);
                let e = b.dstr_and_tensor(swapped);
                let e = b.map_left(e, |b, l| b.and_r(l));
                b.map_right(e, |b, w| {
                    let p = b.and_r(w.clone());
                    let c = b.and_l(w);
                    b.and_i(p, c)
                })
            });
            let d = b.ass(d);
            b.map_left(d, |b, aa| b.contract(aa))
        }
        "dstr_star_and_tensor" => {
            let alpha = phi;
            let h = b.hyp("g0", tensor(and(alpha.clone(), psi), and(alpha, chi)));
            let a = b.map_left(h.clone(), |b, l| b.and_l(l));
            let a = b.map_right(a, |b, r| b.and_l(r));
            let a = b.contract(a);
            let t = b.map_left(h, |b, l| b.and_r(l));
            let t = b.map_right(t, |b, r| b.and_r(r));
            b.and_i(a, t)
        }
        "and_sub" => {
            let h = b.hyp("g0", and(phi, psi));
            let l = b.and_l(h.clone());
            let l = b.t_il(l, chi);
            let r = b.and_r(h);
            b.and_i(l, r)
        }
        "armstrong_i" => b.dep_ik(Formula::dep(vec![x], x), |_, hyps| hyps[0].clone()),
        "armstrong_ii" => {
            let g = b.hyp("g0", Formula::dep(vec![x, y], z));
            b.dep_ik(Formula::dep(vec![y, x], z), |b, hyps| {
                let (cy, cx) = (
                    hyps[0].clone(),
                    hyps.get(1).cloned().unwrap_or_else(|| hyps[0].clone()),
                );
                b.dep_ek(g, vec![cx, cy])
            })
        }
        "armstrong_iii" => {
            let g = b.hyp("g0", Formula::dep(vec![x, x], y));
            b.dep_ik(Formula::dep(vec![x], y), |b, hyps| {
                b.dep_ek(g, vec![hyps[0].clone(), hyps[0].clone()])
            })
        }
        "armstrong_iv" => {
            let g = b.hyp("g0", Formula::dep(vec![y], z));
            b.dep_ik(Formula::dep(vec![x, y], z), |b, hyps| {
                let cy = hyps.last().unwrap().clone();
                b.dep_ek(g, vec![cy])
            })
        }
        "armstrong_v" => {
            let g1 = b.hyp("g0", Formula::dep(vec![x], y));
            let g2 = b.hyp("g1", Formula::dep(vec![y], z));
            b.dep_ik(Formula::dep(vec![x], z), |b, hyps| {
                let cy = b.dep_ek(g1, vec![hyps[0].clone()]);
                b.dep_ek(g2, vec![cy])
            })
        }
        _ => unreachable!("every listed name has a derivation"),
    };
    let judgment = check_nd(&pf.d, system)?;
    Ok(NamedDerivation {
        name,
        system,
        derivation: pf.d,
        judgment,
    })
}

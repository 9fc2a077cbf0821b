//! Derivation synthesis for valid entailments in PDv and PD.
//!
//! Both constructions work over the variable set `N` of the whole entailment
//! and go through the classical normal form `Θ_X` of teams `X ⊆ 2^N`.
//!
//! For PDv, every formula is provably equivalent to a disjunction of `Θ`s:
//! `down` derives that disjunction from a formula and `up` recovers the
//! formula from any of its disjuncts. An entailment `ψ ⊨ φ` is then proved
//! disjunct by disjunct, sending `Θ_X` to the first `Θ_Y` of `φ` with `X ⊆ Y`.
//!
//! For PD, dependence atoms with arguments are first unfolded into their
//! star forms, and strong elimination splits every remaining constancy atom
//! into its two literals. Each resulting classical case is normalized, sent to
//! the first realization of `φ` that contains it, and lifted back to `φ`.

use crate::decide::entails;
use crate::formula::{first_violation, occurrence_paths, vars, Formula, Fragment, VarId};
use crate::normalform::members_desc;
use crate::team::{IndexSet, Valuation};
use crate::translate::{atom_domain, star_atom};

use super::build::{classical_mask, tensor_leaves, theta, Builder, Pf};
use super::{Derivation, ProofError};

/// Largest number of variables synthesis accepts.
pub const SYNTH_VAR_LIMIT: usize = 3;

fn prepare(premises: &[Formula], phi: &Formula, frag: Fragment) -> Result<IndexSet, ProofError> {
    for f in premises.iter().chain([phi]) {
        if let Some(e) = first_violation(f, frag) {
            return Err(e.into());
        }
    }
    let mut all = vars(phi);
    for g in premises {
        all.extend(vars(g));
    }
    if all.len() > SYNTH_VAR_LIMIT {
        return Err(ProofError::SizeGuard {
            size: all.len(),
            limit: SYNTH_VAR_LIMIT,
        });
    }
    if !entails(premises, phi)? {
        return Err(ProofError::NotEntailed);
    }
    if all.is_empty() {
        all.insert(1);
    }
    Ok(IndexSet::new(all))
}

// PDv.

/// Teams whose `Θ`s form a disjunctive normal form of `f`.
fn nf(f: &Formula, n: &IndexSet) -> Vec<u64> {
    if f.is_classical() {
        return vec![classical_mask(f, n)];
    }
    match f {
        Formula::IDisj(a, b) => {
            let mut v = nf(a, n);
            v.extend(nf(b, n));
            v
        }
        Formula::Tensor(a, b) => {
            let (la, lb) = (nf(a, n), nf(b, n));
            la.iter()
                .flat_map(|x| lb.iter().map(move |y| x | y))
                .collect()
        }
        Formula::And(a, b) => {
            let (la, lb) = (nf(a, n), nf(b, n));
            la.iter()
                .flat_map(|x| lb.iter().map(move |y| x & y))
                .collect()
        }
        other => panic!("{other} is not a PDv formula"),
    }
}

fn disjunction(list: &[u64], n: &IndexSet) -> Formula {
    Formula::big_or(list.iter().map(|x| theta(n, *x))).expect("nonempty list")
}

/// `Θ_{list[k]} / ⋁_{X∈list} Θ_X`.
fn inject(b: &mut Builder, pf: Pf, k: usize, list: &[u64], n: &IndexSet) -> Pf {
    let last = list.len() - 1;
    if last == 0 {
        return pf;
    }
    if k == last {
        b.or_ir(disjunction(&list[..last], n), pf)
    } else {
        let inner = inject(b, pf, k, &list[..last], n);
        b.or_il(inner, theta(n, list[last]))
    }
}

/// Case analysis over the disjuncts of `⋁_{X∈list} Θ_X`.
fn disj_cases(
    b: &mut Builder,
    pf: Pf,
    list: &[u64],
    f: &dyn Fn(&mut Builder, usize, Pf) -> Pf,
) -> Pf {
    let last = list.len() - 1;
    if last == 0 {
        return f(b, 0, pf);
    }
    b.or_e(
        pf,
        |b, h| disj_cases(b, h, &list[..last], f),
        |b, h| f(b, last, h),
    )
}

/// Case analysis over the pairs of disjuncts in `(⋁Θ_X)⊗(⋁Θ_Y)`.
#[allow(clippy::too_many_arguments)]
fn tensor_cases(
    b: &mut Builder,
    pf: Pf,
    lp: &[u64],
    lq: &[u64],
    i0: usize,
    j0: usize,
    f: &dyn Fn(&mut Builder, usize, usize, Pf) -> Pf,
) -> Pf {
    if lq.len() > 1 {
        let m = lq.len() - 1;
        let d = b.dstr_t_or(pf);
        b.or_e(
            d,
            |b, h| tensor_cases(b, h, lp, &lq[..m], i0, j0, f),
            |b, h| tensor_cases(b, h, lp, &lq[m..], i0, j0 + m, f),
        )
    } else if lp.len() > 1 {
        let m = lp.len() - 1;
        let c = b.com(pf);
        let d = b.dstr_t_or(c);
        b.or_e(
            d,
            |b, h| {
                let h = b.com(h);
                tensor_cases(b, h, &lp[..m], lq, i0, j0, f)
            },
            |b, h| {
                let h = b.com(h);
                tensor_cases(b, h, &lp[m..], lq, i0 + m, j0, f)
            },
        )
    } else {
        f(b, i0, j0, pf)
    }
}

/// `φ / ⋁_{X∈nf(φ)} Θ_X`.
fn down(b: &mut Builder, pf: Pf, n: &IndexSet) -> Pf {
    if pf.c.is_classical() {
        return b.cdnf(pf, n);
    }
    match pf.c.clone() {
        Formula::IDisj(x, y) => {
            let (la, lb) = (nf(&x, n), nf(&y, n));
            let all: Vec<u64> = la.iter().chain(&lb).copied().collect();
            let off = la.len();
            b.or_e(
                pf,
                |b, h| {
                    let d = down(b, h, n);
                    disj_cases(b, d, &la, &|b, k, t| inject(b, t, k, &all, n))
                },
                |b, h| {
                    let d = down(b, h, n);
                    disj_cases(b, d, &lb, &|b, k, t| inject(b, t, off + k, &all, n))
                },
            )
        }
        Formula::Tensor(x, y) => {
            let (la, lb) = (nf(&x, n), nf(&y, n));
            let all = nf(&pf.c, n);
            let pf = b.map_left(pf, |b, h| down(b, h, n));
            let pf = b.map_right(pf, |b, h| down(b, h, n));
            tensor_cases(b, pf, &la, &lb, 0, 0, &|b, i, j, t| {
                let m = b.merge(t, n, la[i], lb[j]);
                inject(b, m, i * lb.len() + j, &all, n)
            })
        }
        Formula::And(x, y) => {
            let (la, lb) = (nf(&x, n), nf(&y, n));
            let all = nf(&pf.c, n);
            b.share(pf, |b, p| {
                let l = b.and_l(p.clone());
                let da = down(b, l, n);
                let r = b.and_r(p);
                let db = down(b, r, n);
                b.share(db, |b, db| {
                    disj_cases(b, da, &la, &|b, i, ti| {
                        b.share(ti, |b, ti| {
                            disj_cases(b, db.clone(), &lb, &|b, j, tj| {
                                let both = b.and_i(ti.clone(), tj);
                                let t = b.cdnf(both, n);
                                inject(b, t, i * lb.len() + j, &all, n)
                            })
                        })
                    })
                })
            })
        }
        other => panic!("{other} is not a PDv formula"),
    }
}

/// `Θ_X / φ` for `X = nf(φ)[k]`.
fn up(b: &mut Builder, pf: Pf, phi: &Formula, k: usize, n: &IndexSet) -> Pf {
    if phi.is_classical() {
        let x = nf(phi, n)[k];
        return b.classical_up(pf, n, x, phi);
    }
    match phi {
        Formula::IDisj(a, c) => {
            let la = nf(a, n).len();
            if k < la {
                let l = up(b, pf, a, k, n);
                b.or_il(l, (**c).clone())
            } else {
                let r = up(b, pf, c, k - la, n);
                b.or_ir((**a).clone(), r)
            }
        }
        Formula::Tensor(a, c) => {
            let (la, lb) = (nf(a, n), nf(c, n));
            let (i, j) = (k / lb.len(), k % lb.len());
            let (x, y) = (la[i], lb[j]);
            let split = if x == 0 {
                b.t_ir(Formula::Bot, pf)
            } else if y & !x == 0 {
                b.t_il(pf, Formula::Bot)
            } else {
                b.rearrange_to(pf, &Formula::tensor(theta(n, x), theta(n, y & !x)))
            };
            let split = b.map_right(split, |b, h| b.weaken(h, n, y & !x, y));
            let split = b.map_left(split, |b, h| up(b, h, a, i, n));
            b.map_right(split, |b, h| up(b, h, c, j, n))
        }
        Formula::And(a, c) => {
            let (la, lb) = (nf(a, n), nf(c, n));
            let (i, j) = (k / lb.len(), k % lb.len());
            let (x, y) = (la[i], lb[j]);
            b.share(pf, |b, t| {
                let l = b.weaken(t.clone(), n, x & y, x);
                let l = up(b, l, a, i, n);
                let r = b.weaken(t, n, x & y, y);
                let r = up(b, r, c, j, n);
                b.and_i(l, r)
            })
        }
        other => panic!("{other} is not a PDv formula"),
    }
}

/// A derivation of `{ψ} ⊢ φ` in the natural deduction system of PDv.
pub fn synth_entailment_pdv(psi: &Formula, phi: &Formula) -> Result<Derivation, ProofError> {
    synth_entailment_pdv_all(std::slice::from_ref(psi), phi)
}

/// [`synth_entailment_pdv`] for a finite premise list, combined by `∧I`.
/// With no premises the derivation starts from an `EM0` node.
pub fn synth_entailment_pdv_all(
    gamma: &[Formula],
    phi: &Formula,
) -> Result<Derivation, ProofError> {
    let n = prepare(gamma, phi, Fragment::PdV)?;
    if gamma.len() == 1 && gamma[0] == *phi {
        return Ok(Derivation::hyp("g0", phi.clone()));
    }
    let mut b = Builder::new();
    let hyps: Vec<Pf> = gamma
        .iter()
        .enumerate()
        .map(|(i, g)| b.hyp(&format!("g{i}"), g.clone()))
        .collect();
    let h = match hyps.into_iter().reduce(|acc, h| b.and_i(acc, h)) {
        Some(p) => p,
        None => b.em0(n.vars()[0]),
    };
    let psi = h.c.clone();
    let (lpsi, lphi) = (nf(&psi, &n), nf(phi, &n));
    let d = down(&mut b, h, &n);
    let out = disj_cases(&mut b, d, &lpsi, &|b, k, t| {
        let x = lpsi[k];
        let g = lphi
            .iter()
            .position(|y| x & !y == 0)
            .expect("entailment gives a containing disjunct");
        let w = b.weaken(t, &n, x, lphi[g]);
        up(b, w, phi, g, &n)
    });
    Ok(out.d)
}

// PD.

fn has_multi_arg_atom(f: &Formula) -> bool {
    match f {
        Formula::Dep { args, .. } => !args.is_empty(),
        _ => f
            .children()
            .is_some_and(|(l, r)| has_multi_arg_atom(l) || has_multi_arg_atom(r)),
    }
}

fn star_formula(f: &Formula) -> Formula {
    match f {
        Formula::Dep { args, .. } if !args.is_empty() => star_atom(f),
        _ => match f.children() {
            Some((l, r)) => f.rebuild(star_formula(l), star_formula(r)),
            None => f.clone(),
        },
    }
}

/// `α / α*` for a dependence atom with arguments.
fn atom_star(b: &mut Builder, pf: Pf) -> Pf {
    let Formula::Dep { args, .. } = pf.c.clone() else {
        unreachable!()
    };
    let k = atom_domain(&pf.c);
    let split = b.case_split(pf, &k);
    let members = members_desc(&k, k.full_mask());
    let mut idx = 0;
    b.map_tree(split, &mut |b, leaf| {
        let s = members[idx].clone();
        idx += 1;
        let args = args.clone();
        b.share(leaf, move |b, x| {
            let atom = b.and_l(x.clone());
            let c = b.and_r(x);
            let consts = args
                .iter()
                .map(|v| {
                    let lit = b.project(c.clone(), &Formula::literal(*v, s.get(*v).unwrap()));
                    b.dep_i0(lit)
                })
                .collect();
            let e = b.dep_ek(atom, consts);
            b.and_i(c, e)
        })
    })
}

/// `ψ / ψ*`: every dependence atom with arguments replaced by its star form.
fn star_derive(b: &mut Builder, pf: Pf) -> Pf {
    if !has_multi_arg_atom(&pf.c) {
        return pf;
    }
    match &pf.c {
        Formula::Dep { .. } => atom_star(b, pf),
        Formula::And(..) => b.share(pf, |b, x| {
            let l = b.and_l(x.clone());
            let l = star_derive(b, l);
            let r = b.and_r(x);
            let r = star_derive(b, r);
            b.and_i(l, r)
        }),
        Formula::Tensor(..) => {
            let pf = b.map_left(pf, star_derive);
            b.map_right(pf, star_derive)
        }
        other => panic!("{other} is not a PD formula"),
    }
}

/// Repeated strong elimination on the first constancy atom until every case
/// is classical.
fn se_tree(b: &mut Builder, pf: Pf, leaf: &dyn Fn(&mut Builder, Pf) -> Pf) -> Pf {
    let addr = occurrence_paths(&pf.c)
        .into_iter()
        .find(|(_, _, g)| matches!(g, Formula::Dep { args, .. } if args.is_empty()))
        .map(|(a, _, _)| a);
    match addr {
        None => leaf(b, pf),
        Some(m) => b.se(
            pf,
            m,
            |b, h| se_tree(b, h, leaf),
            |b, h| se_tree(b, h, leaf),
        ),
    }
}

/// The classical realizations of `f*`: each constancy atom replaced by one of
/// its literals, the first occurrence varying slowest and `p_i` before `¬p_i`.
fn realizations(star: &Formula) -> Vec<Formula> {
    let paths = star.dep_paths();
    let mut out = vec![star.clone()];
    for p in &paths {
        let Some(Formula::Dep { target, .. }) = star.at_path(p) else {
            unreachable!()
        };
        out = out
            .into_iter()
            .flat_map(|g| {
                [true, false].map(|v| {
                    g.replace_path(p, Formula::literal(*target, v))
                        .expect("valid path")
                })
            })
            .collect();
    }
    out
}

/// `α*_f / α` for a dependence atom `α` with arguments.
fn depezk(b: &mut Builder, pf: Pf, alpha: &Formula) -> Pf {
    let Formula::Dep { target, .. } = alpha else {
        unreachable!()
    };
    let target = *target;
    let k = atom_domain(alpha);
    let alpha = alpha.clone();
    b.share(pf, move |b, x| {
        b.dep_ik(alpha.clone(), |b, hyps| {
            // `dep_ik` lists hypotheses by first appearance among the arguments.
            let Formula::Dep { args, .. } = &alpha else {
                unreachable!()
            };
            let mut order: Vec<VarId> = Vec::new();
            for a in args {
                if !order.contains(a) {
                    order.push(*a);
                }
            }
            let sorted: Vec<Pf> = k
                .vars()
                .iter()
                .map(|v| hyps[order.iter().position(|o| o == v).unwrap()].clone())
                .collect();
            split_constants(b, &sorted, Vec::new(), &k, &x, target)
        })
    })
}

fn split_constants(
    b: &mut Builder,
    consts: &[Pf],
    lits: Vec<Pf>,
    k: &IndexSet,
    x: &Pf,
    target: VarId,
) -> Pf {
    let Some((first, rest)) = consts.split_first() else {
        return realized_value(b, lits, k, x.clone(), target);
    };
    let l2 = lits.clone();
    b.dep_e0(
        first.clone(),
        |b, h| {
            let mut l = lits;
            l.push(h);
            split_constants(b, rest, l, k, x, target)
        },
        |b, h| {
            let mut l = l2;
            l.push(h);
            split_constants(b, rest, l, k, x, target)
        },
    )
}

/// Under the argument literals `c_t`, `α*_f` yields the literal `p_j^{f(t)}`
/// and hence `=(p_j)`.
fn realized_value(b: &mut Builder, lits: Vec<Pf>, k: &IndexSet, x: Pf, target: VarId) -> Pf {
    let bits: Vec<bool> = lits
        .iter()
        .map(|l| matches!(l.c, Formula::Var(_)))
        .collect();
    let t = Valuation::from_bits(k.clone(), &bits);
    let mut it = lits.into_iter();
    let first = it.next().expect("nonempty argument set");
    let ct = it.fold(first, |acc, l| b.and_i(acc, l));
    let both = b.and_i(ct, x);
    let spread = b.dstr_and_chain(both);
    let members = members_desc(k, k.full_mask());
    let mut idx = 0;
    let mapped = b.map_tree(spread, &mut |b, leaf| {
        let s = members[idx].clone();
        idx += 1;
        if s == t {
            let r = b.and_r(leaf);
            return b.and_r(r);
        }
        let v = *k.vars().iter().find(|v| s.get(**v) != t.get(**v)).unwrap();
        let tv = t.get(v).unwrap();
        b.share(leaf, move |b, y| {
            let ct = b.and_l(y.clone());
            let lt = b.project(ct, &Formula::literal(v, tv));
            let r = b.and_r(y);
            let cs = b.and_l(r);
            let ls = b.project(cs, &Formula::literal(v, !tv));
            let pair = if tv { b.and_i(lt, ls) } else { b.and_i(ls, lt) };
            b.bot_i(pair)
        })
    });
    let lit = b.drop_bots(mapped);
    debug_assert!(matches!(lit.c, Formula::Var(j) | Formula::NegVar(j) if j == target));
    b.dep_i0(lit)
}

/// `φ*_Δ / φ` for a realization of `φ`.
fn si_derive(b: &mut Builder, pf: Pf, phi: &Formula) -> Pf {
    if pf.c == *phi {
        return pf;
    }
    match phi {
        Formula::Dep { args, .. } if args.is_empty() => b.dep_i0(pf),
        Formula::Dep { .. } => depezk(b, pf, phi),
        Formula::And(l, r) => b.share(pf, |b, x| {
            let a = b.and_l(x.clone());
            let a = si_derive(b, a, l);
            let c = b.and_r(x);
            let c = si_derive(b, c, r);
            b.and_i(a, c)
        }),
        Formula::Tensor(l, r) => {
            let pf = b.map_left(pf, |b, h| si_derive(b, h, l));
            b.map_right(pf, |b, h| si_derive(b, h, r))
        }
        other => panic!("si_derive: {} does not realize {other}", pf.c),
    }
}

/// A derivation of `Γ ⊢ φ` in the natural deduction system of PD.
pub fn synth_entailment_pd(gamma: &[Formula], phi: &Formula) -> Result<Derivation, ProofError> {
    let n = prepare(gamma, phi, Fragment::Pd)?;
    if gamma.len() == 1 && gamma[0] == *phi {
        return Ok(Derivation::hyp("g0", phi.clone()));
    }
    let mut b = Builder::new();
    let hyps: Vec<Pf> = gamma
        .iter()
        .enumerate()
        .map(|(i, g)| b.hyp(&format!("g{i}"), g.clone()))
        .collect();
    let psi = match hyps.into_iter().reduce(|acc, h| b.and_i(acc, h)) {
        Some(p) => p,
        None => b.em0(n.vars()[0]),
    };
    let star = star_derive(&mut b, psi);
    let targets: Vec<(Formula, u64)> = realizations(&star_formula(phi))
        .into_iter()
        .map(|r| {
            let m = classical_mask(&r, &n);
            (r, m)
        })
        .collect();
    let out = se_tree(&mut b, star, &|b, leaf| {
        let x = classical_mask(&leaf.c, &n);
        let t = b.cdnf(leaf, &n);
        let (r, y) = targets
            .iter()
            .find(|(_, y)| x & !y == 0)
            .expect("entailment gives a containing realization");
        let w = b.weaken(t, &n, x, *y);
        let u = b.classical_up(w, &n, *y, r);
        si_derive(b, u, phi)
    });
    debug_assert_eq!(tensor_leaves(&out.c).len(), tensor_leaves(phi).len());
    Ok(out.d)
}

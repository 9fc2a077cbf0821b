//! Derivation combinators used by the library and the synthesizers.
//!
//! A [`Pf`] pairs a derivation with its conclusion, so constructions can
//! inspect what they have proved without re-running the checker. Every
//! combinator mirrors one rule of the checker or a short, fixed pattern of
//! rules. Misuse is a programming error and panics.

use std::collections::HashSet;

use crate::formula::{Formula, VarId};
use crate::normalform::{literal_conjunction, members_desc};
use crate::semantics::classical_truth;
use crate::team::{IndexSet, Valuation};

use super::{Derivation, Rule};

#[derive(Clone, Debug)]
pub(crate) struct Pf {
    pub d: Derivation,
    pub c: Formula,
}

/// A tensor tree shape; leaves are the maximal non-tensor subformulas.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn of(f: &Formula) -> Shape {
        match f {
            Formula::Tensor(l, r) => Shape::Node(Box::new(Shape::of(l)), Box::new(Shape::of(r))),
            _ => Shape::Leaf,
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

/// The maximal non-tensor subformulas of `f`, left to right.
pub(crate) fn tensor_leaves(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Tensor(l, r) => {
            let mut v = tensor_leaves(l);
            v.extend(tensor_leaves(r));
            v
        }
        _ => vec![f],
    }
}

/// `Θ_X` as a formula, for a team mask over `n`.
pub(crate) fn theta(n: &IndexSet, mask: u64) -> Formula {
    crate::normalform::theta_mask(n, mask).expect("nonempty index set")
}

pub(crate) fn clause(s: &Valuation) -> Formula {
    literal_conjunction(s).expect("nonempty index set")
}

/// Valuations of `n` satisfying the classical formula `f`, as a mask.
pub(crate) fn classical_mask(f: &Formula, n: &IndexSet) -> u64 {
    let mut m = 0;
    for i in 0..n.valuation_count() {
        let s = Valuation::from_index(n.clone(), i);
        if truth(f, &s) {
            m |= 1 << i;
        }
    }
    m
}

fn truth(f: &Formula, s: &Valuation) -> bool {
    classical_truth(f, &|v| s.get(v).expect("variable in domain")).expect("classical formula")
}

pub(crate) struct Builder {
    next: usize,
    used: HashSet<String>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder {
            next: 0,
            used: HashSet::new(),
        }
    }

    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("h{}", self.next)
    }

    fn note(&mut self, p: &Pf) {
        if let Derivation::Hyp { label, .. } = &p.d {
            self.used.insert(label.clone());
        }
    }

    fn node(&mut self, rule: Rule, premises: Vec<Pf>, c: Formula) -> Pf {
        for p in &premises {
            self.note(p);
        }
        Pf {
            d: Derivation::step(rule, premises.into_iter().map(|p| p.d).collect()),
            c,
        }
    }

    pub fn hyp(&mut self, label: &str, f: Formula) -> Pf {
        Pf {
            d: Derivation::hyp(label, f.clone()),
            c: f,
        }
    }

    /// Open a fresh hypothesis, run `body` on it, and return the label with
    /// a result that is guaranteed to use the hypothesis.
    fn bind(&mut self, f: Formula, body: impl FnOnce(&mut Builder, Pf) -> Pf) -> (String, Pf) {
        let label = self.fresh();
        let h = self.hyp(&label, f);
        let out = body(self, h.clone());
        let direct = matches!(&out.d, Derivation::Hyp { label: l, .. } if *l == label);
        if direct || self.used.contains(&label) {
            (label, out)
        } else {
            let c = out.c.clone();
            let both = self.and_i(h, out);
            (label, self.node(Rule::AndEr, vec![both], c))
        }
    }

    // Primitive rules.

    pub fn em0(&mut self, i: VarId) -> Pf {
        let mut p = self.node(
            Rule::Em0,
            vec![],
            Formula::tensor(Formula::Var(i), Formula::NegVar(i)),
        );
        p.d = p.d.with_side(Formula::Var(i));
        p
    }

    pub fn and_i(&mut self, a: Pf, b: Pf) -> Pf {
        let c = Formula::and(a.c.clone(), b.c.clone());
        self.node(Rule::AndI, vec![a, b], c)
    }

    pub fn and_l(&mut self, a: Pf) -> Pf {
        let Formula::And(l, _) = &a.c else {
            panic!("∧E_l on {}", a.c)
        };
        let c = (**l).clone();
        self.node(Rule::AndEl, vec![a], c)
    }

    pub fn and_r(&mut self, a: Pf) -> Pf {
        let Formula::And(_, r) = &a.c else {
            panic!("∧E_r on {}", a.c)
        };
        let c = (**r).clone();
        self.node(Rule::AndEr, vec![a], c)
    }

    pub fn or_il(&mut self, a: Pf, right: Formula) -> Pf {
        let c = Formula::or(a.c.clone(), right.clone());
        let mut p = self.node(Rule::OrIl, vec![a], c);
        p.d = p.d.with_side(right);
        p
    }

    pub fn or_ir(&mut self, left: Formula, a: Pf) -> Pf {
        let c = Formula::or(left.clone(), a.c.clone());
        let mut p = self.node(Rule::OrIr, vec![a], c);
        p.d = p.d.with_side(left);
        p
    }

    pub fn t_il(&mut self, a: Pf, right: Formula) -> Pf {
        let c = Formula::tensor(a.c.clone(), right.clone());
        let mut p = self.node(Rule::TensorIl, vec![a], c);
        p.d = p.d.with_side(right);
        p
    }

    pub fn t_ir(&mut self, left: Formula, a: Pf) -> Pf {
        let c = Formula::tensor(left.clone(), a.c.clone());
        let mut p = self.node(Rule::TensorIr, vec![a], c);
        p.d = p.d.with_side(left);
        p
    }

    fn cases(
        &mut self,
        rule: Rule,
        major: Pf,
        left: Formula,
        right: Formula,
        f1: impl FnOnce(&mut Builder, Pf) -> Pf,
        f2: impl FnOnce(&mut Builder, Pf) -> Pf,
    ) -> Pf {
        let (l1, d1) = self.bind(left, f1);
        let (l2, d2) = self.bind(right, f2);
        assert_eq!(d1.c, d2.c, "{rule}: cases disagree");
        let c = d1.c.clone();
        let mut p = self.node(rule, vec![major, d1, d2], c);
        p.d = p.d.with_discharges(vec![l1, l2]);
        p
    }

    pub fn or_e(
        &mut self,
        major: Pf,
        f1: impl FnOnce(&mut Builder, Pf) -> Pf,
        f2: impl FnOnce(&mut Builder, Pf) -> Pf,
    ) -> Pf {
        let Formula::IDisj(l, r) = &major.c else {
            panic!("∨E on {}", major.c)
        };
        let (l, r) = ((**l).clone(), (**r).clone());
        self.cases(Rule::OrE, major, l, r, f1, f2)
    }

    pub fn t_e(
        &mut self,
        major: Pf,
        f1: impl FnOnce(&mut Builder, Pf) -> Pf,
        f2: impl FnOnce(&mut Builder, Pf) -> Pf,
    ) -> Pf {
        let Formula::Tensor(l, r) = &major.c else {
            panic!("⊗E⁻ on {}", major.c)
        };
        let (l, r) = ((**l).clone(), (**r).clone());
        self.cases(Rule::TensorEMinus, major, l, r, f1, f2)
    }

    pub fn dep_e0(
        &mut self,
        major: Pf,
        f1: impl FnOnce(&mut Builder, Pf) -> Pf,
        f2: impl FnOnce(&mut Builder, Pf) -> Pf,
    ) -> Pf {
        let Formula::Dep { args, target } = &major.c else {
            panic!("DepE0 on {}", major.c)
        };
        assert!(args.is_empty());
        let i = *target;
        self.cases(
            Rule::DepE0,
            major,
            Formula::Var(i),
            Formula::NegVar(i),
            f1,
            f2,
        )
    }

    pub fn se(
        &mut self,
        major: Pf,
        addr: usize,
        f1: impl FnOnce(&mut Builder, Pf) -> Pf,
        f2: impl FnOnce(&mut Builder, Pf) -> Pf,
    ) -> Pf {
        let Ok(Formula::Dep { target, .. }) = crate::formula::atom_at(&major.c, addr) else {
            panic!("SE at {addr} of {}", major.c)
        };
        let i = *target;
        let pos = crate::formula::replace_atom_at(&major.c, addr, Formula::Var(i)).unwrap();
        let neg = crate::formula::replace_atom_at(&major.c, addr, Formula::NegVar(i)).unwrap();
        let mut p = self.cases(Rule::Se, major, pos, neg, f1, f2);
        p.d = p.d.with_addr(addr);
        p
    }

    /// `⊗Sub`: from `φ⊗ψ` and `[ψ]…χ` infer `φ⊗χ`.
    pub fn map_right(&mut self, major: Pf, f: impl FnOnce(&mut Builder, Pf) -> Pf) -> Pf {
        let Formula::Tensor(l, r) = &major.c else {
            panic!("⊗Sub on {}", major.c)
        };
        let (phi, psi) = ((**l).clone(), (**r).clone());
        let (label, body) = self.bind(psi, f);
        if matches!(&body.d, Derivation::Hyp { label: l, .. } if *l == label) {
            return major;
        }
        let c = Formula::tensor(phi, body.c.clone());
        let mut p = self.node(Rule::TensorSub, vec![major, body], c);
        p.d = p.d.with_discharges(vec![label]);
        p
    }

    pub fn map_left(&mut self, major: Pf, f: impl FnOnce(&mut Builder, Pf) -> Pf) -> Pf {
        let swapped = self.com(major);
        let mapped = self.map_right(swapped, f);
        self.com(mapped)
    }

    pub fn com(&mut self, a: Pf) -> Pf {
        let Formula::Tensor(l, r) = &a.c else {
            panic!("Com⊗ on {}", a.c)
        };
        let c = Formula::tensor((**r).clone(), (**l).clone());
        self.node(Rule::ComTensor, vec![a], c)
    }

    /// `φ⊗(ψ⊗χ) / (φ⊗ψ)⊗χ`.
    pub fn ass(&mut self, a: Pf) -> Pf {
        let Formula::Tensor(x, yz) = &a.c else {
            panic!("Ass⊗ on {}", a.c)
        };
        let Formula::Tensor(y, z) = &**yz else {
            panic!("Ass⊗ on {}", a.c)
        };
        let c = Formula::tensor(Formula::tensor((**x).clone(), (**y).clone()), (**z).clone());
        self.node(Rule::AssTensor, vec![a], c)
    }

    /// `(φ⊗ψ)⊗χ / φ⊗(ψ⊗χ)`, through three commutations and two associations.
    pub fn ass_r(&mut self, a: Pf) -> Pf {
        let a = self.com(a);
        let a = self.ass(a);
        let a = self.com(a);
        let a = self.ass(a);
        self.com(a)
    }

    pub fn bot_i(&mut self, a: Pf) -> Pf {
        self.node(Rule::BotI, vec![a], Formula::Bot)
    }

    pub fn bot_e(&mut self, a: Pf) -> Pf {
        let Formula::Tensor(l, r) = &a.c else {
            panic!("⊥E on {}", a.c)
        };
        assert_eq!(**r, Formula::Bot);
        let c = (**l).clone();
        self.node(Rule::BotE, vec![a], c)
    }

    pub fn dstr_t_or(&mut self, a: Pf) -> Pf {
        let Formula::Tensor(phi, r) = &a.c else {
            panic!("Dstr⊗∨ on {}", a.c)
        };
        let Formula::IDisj(psi, chi) = &**r else {
            panic!("Dstr⊗∨ on {}", a.c)
        };
        let c = Formula::or(
            Formula::tensor((**phi).clone(), (**psi).clone()),
            Formula::tensor((**phi).clone(), (**chi).clone()),
        );
        self.node(Rule::DstrTensorOr, vec![a], c)
    }

    pub fn dep_i0(&mut self, a: Pf) -> Pf {
        let (Formula::Var(i) | Formula::NegVar(i)) = a.c else {
            panic!("DepI0 on {}", a.c)
        };
        self.node(Rule::DepI0, vec![a], Formula::constancy(i))
    }

    pub fn dep_ek(&mut self, atom: Pf, consts: Vec<Pf>) -> Pf {
        let Formula::Dep { target, .. } = &atom.c else {
            panic!("DepEk on {}", atom.c)
        };
        let c = Formula::constancy(*target);
        let mut ps = vec![atom];
        ps.extend(consts);
        self.node(Rule::DepEk, ps, c)
    }

    /// `DepIk` concluding `atom`; `body` receives one hypothesis `=(p_i)` per
    /// distinct argument, in the order of first appearance.
    pub fn dep_ik(&mut self, atom: Formula, body: impl FnOnce(&mut Builder, Vec<Pf>) -> Pf) -> Pf {
        let Formula::Dep { args, .. } = &atom else {
            panic!("DepIk for {atom}")
        };
        let mut distinct: Vec<VarId> = Vec::new();
        for a in args {
            if !distinct.contains(a) {
                distinct.push(*a);
            }
        }
        let labels: Vec<String> = distinct.iter().map(|_| self.fresh()).collect();
        let hyps: Vec<Pf> = distinct
            .iter()
            .zip(&labels)
            .map(|(v, l)| self.hyp(l, Formula::constancy(*v)))
            .collect();
        let out = body(self, hyps);
        let discharges = args
            .iter()
            .map(|a| labels[distinct.iter().position(|v| v == a).unwrap()].clone())
            .collect();
        let mut p = self.node(Rule::DepIk, vec![out], atom.clone());
        p.d = p.d.with_side(atom).with_discharges(discharges);
        p
    }

    // Derived patterns.

    /// Use `pf` several times inside `body` without copying it: a
    /// derivation larger than a few nodes is bound to a hypothesis through
    /// `⊥⊗A`, `⊗Sub`, `Com⊗` and `⊥E`.
    pub fn share(&mut self, pf: Pf, body: impl FnOnce(&mut Builder, Pf) -> Pf) -> Pf {
        if pf.d.size() <= 3 {
            return body(self, pf);
        }
        let wrapped = self.t_ir(Formula::Bot, pf);
        let mapped = self.map_right(wrapped, body);
        let swapped = self.com(mapped);
        self.bot_e(swapped)
    }

    /// `⊥ / φ`, via `⊥ / φ⊗⊥ / φ`.
    pub fn ex_falso(&mut self, bot: Pf, phi: Formula) -> Pf {
        assert_eq!(bot.c, Formula::Bot);
        let t = self.t_ir(phi, bot);
        self.bot_e(t)
    }

    /// `α⊗α / α` for classical `α`.
    pub fn contract(&mut self, pf: Pf) -> Pf {
        self.t_e(pf, |_, h| h, |_, h| h)
    }

    /// `φ∧(ψ⊗χ) / (φ∧ψ)⊗(φ∧χ)`.
    pub fn dstr_and_tensor(&mut self, pf: Pf) -> Pf {
        self.share(pf, |b, x| {
            let x2 = x.clone();
            let t = b.and_r(x.clone());
            let t = b.map_right(t, |b, h| {
                let phi = b.and_l(x2);
                b.and_i(phi, h)
            });
            b.map_left(t, |b, h| {
                let phi = b.and_l(x);
                b.and_i(phi, h)
            })
        })
    }

    /// Apply `f` to every leaf of the tensor tree concluded by `pf`, left to right.
    pub fn map_tree(&mut self, pf: Pf, f: &mut dyn FnMut(&mut Builder, Pf) -> Pf) -> Pf {
        if let Formula::Tensor(..) = pf.c {
            let pf = self.map_left(pf, |b, h| b.map_tree(h, f));
            self.map_right(pf, |b, h| b.map_tree(h, f))
        } else {
            f(self, pf)
        }
    }

    /// `γ∧T / ⊗(γ∧leaf)` with the tensor structure of `T` kept.
    pub fn dstr_and_chain(&mut self, pf: Pf) -> Pf {
        let Formula::And(_, r) = &pf.c else {
            panic!("dstr_and_chain on {}", pf.c)
        };
        if !matches!(**r, Formula::Tensor(..)) {
            return pf;
        }
        let t = self.dstr_and_tensor(pf);
        let t = self.map_left(t, |b, h| b.dstr_and_chain(h));
        self.map_right(t, |b, h| b.dstr_and_chain(h))
    }

    /// Project a conjunct equal to `target` out of a tree of conjunctions.
    pub fn project(&mut self, pf: Pf, target: &Formula) -> Pf {
        fn contains(f: &Formula, t: &Formula) -> bool {
            f == t || matches!(f, Formula::And(l, r) if contains(l, t) || contains(r, t))
        }
        if pf.c == *target {
            return pf;
        }
        let Formula::And(l, _) = &pf.c else {
            panic!("{target} is not a conjunct of {}", pf.c)
        };
        if contains(l, target) {
            let p = self.and_l(pf);
            self.project(p, target)
        } else {
            let p = self.and_r(pf);
            self.project(p, target)
        }
    }

    // Rearranging tensor trees.

    fn chain_right(&mut self, pf: Pf, shape: &Shape) -> Pf {
        let Shape::Node(a, b) = shape else { return pf };
        let pf = if let Shape::Node(..) = **b {
            let b = (**b).clone();
            self.map_right(pf, move |bl, h| bl.chain_right(h, &b))
        } else {
            pf
        };
        let pf = if let Shape::Node(..) = **a {
            let a2 = (**a).clone();
            self.map_left(pf, move |bl, h| bl.chain_right(h, &a2))
        } else {
            pf
        };
        self.append(pf, a.leaves())
    }

    /// `(a1⊗(…⊗ak))⊗C / a1⊗(…⊗(ak⊗C))`.
    fn append(&mut self, pf: Pf, k: usize) -> Pf {
        if k == 1 {
            return pf;
        }
        let pf = self.ass_r(pf);
        self.map_right(pf, |b, h| b.append(h, k - 1))
    }

    /// Split a right chain into a right chain of its first `k` leaves tensored
    /// with a right chain of the rest.
    fn split(&mut self, pf: Pf, k: usize) -> Pf {
        if k == 1 {
            return pf;
        }
        let pf = self.map_right(pf, |b, h| b.split(h, k - 1));
        self.ass(pf)
    }

    fn unchain_right(&mut self, pf: Pf, shape: &Shape) -> Pf {
        let Shape::Node(a, b) = shape else { return pf };
        let pf = self.split(pf, a.leaves());
        let pf = if let Shape::Node(..) = **a {
            let a2 = (**a).clone();
            self.map_left(pf, move |bl, h| bl.unchain_right(h, &a2))
        } else {
            pf
        };
        if let Shape::Node(..) = **b {
            let b2 = (**b).clone();
            self.map_right(pf, move |bl, h| bl.unchain_right(h, &b2))
        } else {
            pf
        }
    }

    /// Swap leaves `k` and `k+1` of a right chain with `n` leaves.
    fn swap_at(&mut self, pf: Pf, k: usize, n: usize) -> Pf {
        if k > 0 {
            return self.map_right(pf, |b, h| b.swap_at(h, k - 1, n - 1));
        }
        if n == 2 {
            return self.com(pf);
        }
        let pf = self.ass(pf);
        let pf = self.map_left(pf, |b, h| b.com(h));
        self.ass_r(pf)
    }

    /// Reorder and regroup the tensor leaves of `pf` to conclude `target`.
    /// Both sides must have the same multiset of leaves.
    pub fn rearrange_to(&mut self, pf: Pf, target: &Formula) -> Pf {
        if pf.c == *target {
            return pf;
        }
        let src: Vec<Formula> = tensor_leaves(&pf.c).into_iter().cloned().collect();
        let tgt: Vec<&Formula> = tensor_leaves(target);
        assert_eq!(src.len(), tgt.len(), "rearranging {} into {target}", pf.c);
        let mut taken = vec![false; src.len()];
        let order: Vec<usize> = tgt
            .iter()
            .map(|t| {
                let i = (0..src.len())
                    .find(|&i| !taken[i] && src[i] == **t)
                    .unwrap_or_else(|| panic!("{t} is not a leaf of {}", pf.c));
                taken[i] = true;
                i
            })
            .collect();
        let n = src.len();
        let shape = Shape::of(&pf.c);
        let mut pf = self.chain_right(pf, &shape);
        let mut cur: Vec<usize> = (0..n).collect();
        for (pos, want) in order.iter().enumerate() {
            let j = (pos..n)
                .find(|&j| cur[j] == *want)
                .expect("permutation");
            for k in (pos..j).rev() {
                pf = self.swap_at(pf, k, n);
                cur.swap(k, k + 1);
            }
        }
        let out = self.unchain_right(pf, &Shape::of(target));
        debug_assert_eq!(out.c, *target);
        out
    }

    /// Remove `⊥` leaves from a tensor tree: the result is the left chain of
    /// the remaining leaves in their original order, or `⊥` if none remain.
    pub fn drop_bots(&mut self, pf: Pf) -> Pf {
        let leaves: Vec<Formula> = tensor_leaves(&pf.c).into_iter().cloned().collect();
        let bots = leaves.iter().filter(|f| **f == Formula::Bot).count();
        let rest: Vec<Formula> = leaves.into_iter().filter(|f| *f != Formula::Bot).collect();
        let (head, strip) = match Formula::big_tensor(rest) {
            Some(h) => (h, bots),
            None => (Formula::Bot, bots - 1),
        };
        let target = (0..strip).fold(head, |acc, _| Formula::tensor(acc, Formula::Bot));
        let mut pf = self.rearrange_to(pf, &target);
        for _ in 0..strip {
            pf = self.bot_e(pf);
        }
        pf
    }

    // Classical reasoning over a fixed index set.

    /// `⊢ Θ_{2^M}`: the full case split over `m`, clauses in descending order.
    pub fn full_split(&mut self, m: &[VarId]) -> Pf {
        let (last, init) = m.split_last().expect("nonempty variable list");
        let em = self.em0(*last);
        if init.is_empty() {
            return em;
        }
        let prev = self.full_split(init);
        let last = *last;
        let mapped = self.map_tree(prev, &mut |b, c| {
            let e = b.em0(last);
            let both = b.and_i(c, e);
            b.dstr_and_tensor(both)
        });
        let n = IndexSet::new(m.iter().copied());
        let target = theta(&n, n.full_mask());
        self.rearrange_to(mapped, &target)
    }

    /// `γ / ⊗_{s∈2^N} (γ∧c_s)`, valuations in descending order.
    pub fn case_split(&mut self, gamma: Pf, n: &IndexSet) -> Pf {
        let split = self.full_split(n.vars());
        let both = self.and_i(gamma, split);
        self.dstr_and_chain(both)
    }

    /// From `α` under the clause `c_s`, with `s ⊭ α`, derive `⊥`.
    pub fn refute(&mut self, alpha: Pf, cs: Pf, s: &Valuation) -> Pf {
        match alpha.c.clone() {
            Formula::Bot => alpha,
            Formula::Var(i) => {
                let neg = self.project(cs, &Formula::NegVar(i));
                let both = self.and_i(alpha, neg);
                self.bot_i(both)
            }
            Formula::NegVar(i) => {
                let pos = self.project(cs, &Formula::Var(i));
                let both = self.and_i(pos, alpha);
                self.bot_i(both)
            }
            Formula::And(l, _) => {
                if truth(&l, s) {
                    let a = self.and_r(alpha);
                    self.refute(a, cs, s)
                } else {
                    let a = self.and_l(alpha);
                    self.refute(a, cs, s)
                }
            }
            Formula::Tensor(..) => {
                let s1 = s.clone();
                let s2 = s.clone();
                self.share(cs, move |b, c| {
                    let c2 = c.clone();
                    b.t_e(
                        alpha,
                        move |b, h| b.refute(h, c, &s1),
                        move |b, h| b.refute(h, c2, &s2),
                    )
                })
            }
            other => panic!("refute on the non-classical {other}"),
        }
    }

    /// From the clause `c_s`, with `s ⊨ α`, derive `α`.
    pub fn prove_true(&mut self, cs: Pf, s: &Valuation, alpha: &Formula) -> Pf {
        match alpha {
            Formula::Var(_) | Formula::NegVar(_) => self.project(cs, alpha),
            Formula::And(l, r) => {
                let (l, r) = ((**l).clone(), (**r).clone());
                let s = s.clone();
                self.share(cs, move |b, c| {
                    let a = b.prove_true(c.clone(), &s, &l);
                    let bb = b.prove_true(c, &s, &r);
                    b.and_i(a, bb)
                })
            }
            Formula::Tensor(l, r) => {
                if truth(l, s) {
                    let a = self.prove_true(cs, s, l);
                    self.t_il(a, (**r).clone())
                } else {
                    let a = self.prove_true(cs, s, r);
                    self.t_ir((**l).clone(), a)
                }
            }
            other => panic!("prove_true: {other} is not true under {}", s.bitstring()),
        }
    }

    /// `α / Θ_{X_α}` over `n`, for classical `α` with vars(α) ⊆ n.
    pub fn cdnf(&mut self, alpha: Pf, n: &IndexSet) -> Pf {
        let split = self.case_split(alpha, n);
        let members = members_desc(n, n.full_mask());
        let mut k = 0;
        let mapped = self.map_tree(split, &mut |b, leaf| {
            let s = &members[k];
            k += 1;
            let Formula::And(a, _) = &leaf.c else {
                unreachable!()
            };
            if truth(a, s) {
                b.and_r(leaf)
            } else {
                let s = s.clone();
                b.share(leaf, move |b, x| {
                    let a = b.and_l(x.clone());
                    let c = b.and_r(x);
                    b.refute(a, c, &s)
                })
            }
        });
        self.drop_bots(mapped)
    }

    /// `Θ_Y / α` when every member of `Y` satisfies the classical `α`.
    pub fn classical_up(&mut self, pf: Pf, n: &IndexSet, mask: u64, alpha: &Formula) -> Pf {
        if mask == 0 {
            return self.ex_falso(pf, alpha.clone());
        }
        let members = members_desc(n, mask);
        self.up_chain(pf, &members, alpha)
    }

    fn up_chain(&mut self, pf: Pf, members: &[Valuation], alpha: &Formula) -> Pf {
        let (last, init) = members.split_last().expect("nonempty");
        if init.is_empty() {
            return self.prove_true(pf, last, alpha);
        }
        let last = last.clone();
        self.t_e(
            pf,
            |b, h| b.up_chain(h, init, alpha),
            move |b, h| b.prove_true(h, &last, alpha),
        )
    }

    /// `Θ_X / Θ_Y` for `X ⊆ Y`.
    pub fn weaken(&mut self, pf: Pf, n: &IndexSet, x: u64, y: u64) -> Pf {
        assert_eq!(x & !y, 0, "weaken needs X ⊆ Y");
        if x == y {
            return pf;
        }
        let target = theta(n, y);
        if x == 0 {
            return self.ex_falso(pf, target);
        }
        let mut acc = pf;
        for s in members_desc(n, y & !x) {
            acc = self.t_il(acc, clause(&s));
        }
        self.rearrange_to(acc, &target)
    }

    /// `Θ_X⊗Θ_Y / Θ_{X∪Y}`.
    pub fn merge(&mut self, pf: Pf, n: &IndexSet, x: u64, y: u64) -> Pf {
        if y == 0 {
            return self.bot_e(pf);
        }
        if x == 0 {
            let c = self.com(pf);
            return self.bot_e(c);
        }
        let groups: Vec<Formula> = members_desc(n, x | y)
            .iter()
            .map(|s| {
                let c = clause(s);
                let bit = 1u64 << s.index();
                if x & bit != 0 && y & bit != 0 {
                    Formula::tensor(c.clone(), c)
                } else {
                    c
                }
            })
            .collect();
        let dup: Vec<bool> = members_desc(n, x | y)
            .iter()
            .map(|s| x & y & (1 << s.index()) != 0)
            .collect();
        let target = Formula::big_tensor(groups).expect("nonempty");
        let arranged = self.rearrange_to(pf, &target);
        self.map_groups(arranged, &dup)
    }

    /// Contract the groups of a left chain flagged in `dup`.
    fn map_groups(&mut self, pf: Pf, dup: &[bool]) -> Pf {
        let (last, init) = dup.split_last().expect("nonempty");
        if init.is_empty() {
            return if *last { self.contract(pf) } else { pf };
        }
        let pf = self.map_left(pf, |b, h| b.map_groups(h, init));
        if *last {
            self.map_right(pf, |b, h| b.contract(h))
        } else {
            pf
        }
    }
}

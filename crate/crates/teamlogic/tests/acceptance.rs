//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line and
//! the test fails if any criterion does.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_rows, classical, count_downward_closed_two_vars, holds, table_one, Language};
use teamlogic::decide::{entails, is_valid};
use teamlogic::formula::{in_fragment, parse_any, render, vars, Formula, Fragment, Side, VarId};
use teamlogic::normalform::{
    alpha_card, normalize, psi_mask, synthesize, theta_mask, xi_mask, NormalFormStyle,
};
use teamlogic::proof::{
    check_hilbert, check_nd, derive_named, parse_hilbert, parse_proof, render_hilbert,
    render_proof, synth_entailment_pd, synth_entailment_pdv, AxiomKind, Derivation, HilbertProof,
    Justification, NamedParams, ProofSystem, NAMED_RULES,
};
use teamlogic::semantics::{eval, is_flat, support, Evaluator, Mode};
use teamlogic::team::{downward_closed_families, IndexSet, Team, TeamFamily};
use teamlogic::translate::{translate_atom, AtomStyle};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str) -> Formula {
    parse_any(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows_of(n: &IndexSet, mask: u64) -> Vec<Vec<bool>> {
    let rows = all_rows(n.len());
    rows.into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, r)| r)
        .collect()
}

fn table_one_goldens() -> Outcome {
    let (dom, rows) = table_one();
    let n = IndexSet::new(dom.clone());
    let x = Team::from_rows(n.clone(), &rows).map_err(|e| e.to_string())?;
    for mode in [Mode::Fast, Mode::Oracle] {
        ensure(eval(&p("=(p2,p3,p5)"), &x, mode) == Ok(true), || {
            format!("=(p2,p3,p5) under {mode:?}")
        })?;
        ensure(eval(&p("=(p3,p4,p5)"), &x, mode) == Ok(false), || {
            format!("=(p3,p4,p5) under {mode:?}")
        })?;
    }
    ensure(holds(&p("=(p2,p3,p5)"), &dom, &rows), || {
        "reference evaluator disagrees on =(p2,p3,p5)".into()
    })?;
    ensure(!holds(&p("=(p3,p4,p5)"), &dom, &rows), || {
        "reference evaluator disagrees on =(p3,p4,p5)".into()
    })?;
    let (sup, prob) = support(&p("p2"), &x).map_err(|e| e.to_string())?;
    let expected = Team::from_rows(n, &[rows[0].clone(), rows[2].clone()]).unwrap();
    ensure(sup == expected, || {
        format!("|p2|_X has mask {:#b}", sup.mask())
    })?;
    ensure(*prob.numer() == 2 && *prob.denom() == 5, || {
        format!("[p2]_X = {prob}")
    })?;
    Ok("=(p2,p3,p5) holds, =(p3,p4,p5) fails, |p2|_X = {s1,s3}, [p2]_X = 2/5".into())
}

fn core_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pt0 = Language::pt0(&[1, 2, 3]);
    let cpl = Language::cpl(&[1, 2, 3]);
    let mut formulas: Vec<Formula> = (0..1000).map(|_| pt0.random(&mut rng, 4)).collect();
    formulas.extend((0..200).map(|_| cpl.random(&mut rng, 4)));
    let n = IndexSet::new([1, 2, 3]);
    let big = IndexSet::new([1, 2, 3, 4]);
    let rows = all_rows(3);
    let mut classical_count = 0;
    for (k, f) in formulas.iter().enumerate() {
        let mut ev = Evaluator::new(f, &n, Mode::Fast).unwrap();
        let truth: Vec<bool> = (0..256u64).map(|m| ev.eval_mask(m)).collect();
        ensure(truth[0], || format!("{f} fails on the empty team"))?;
        for x in 0..256u64 {
            if truth[x as usize] {
                for y in 0..256u64 {
                    ensure(y & !x != 0 || truth[y as usize], || {
                        format!("{f}: downward closure, {x:#x} ⊇ {y:#x}")
                    })?;
                }
            }
        }
        let own = IndexSet::from(vars(f));
        let mut own_ev = Evaluator::new(f, &own, Mode::Fast).unwrap();
        for x in 0..256u64 {
            let t = Team::from_mask(n.clone(), x).unwrap();
            let r = t.restrict(&own).unwrap();
            ensure(own_ev.eval_mask(r.mask()) == truth[x as usize], || {
                format!("{f}: locality on {x:#x}")
            })?;
        }
        let mut big_ev = Evaluator::new(f, &big, Mode::Fast).unwrap();
        for _ in 0..32 {
            let x: u64 = rng.gen_range(0..1 << 16);
            let t = Team::from_mask(big.clone(), x).unwrap();
            let r = t.restrict(&n).unwrap();
            ensure(big_ev.eval_mask(x) == truth[r.mask() as usize], || {
                format!("{f}: extension on {x:#x}")
            })?;
        }
        if k % 10 == 0 {
            for _ in 0..4 {
                let x: u64 = rng.gen_range(0..256);
                ensure(
                    holds(f, &[1, 2, 3], &rows_of(&n, x)) == truth[x as usize],
                    || format!("{f}: reference evaluator disagrees on {x:#x}"),
                )?;
            }
        }
        if f.is_classical() {
            classical_count += 1;
            ensure(is_flat(f) == Ok(true), || {
                format!("classical {f} reported not flat")
            })?;
            for x in 0..256u64 {
                let pointwise = (0..8).filter(|i| x >> i & 1 == 1).all(|i| truth[1 << i]);
                ensure(pointwise == truth[x as usize], || {
                    format!("classical {f} not flat on {x:#x}")
                })?;
            }
            for (i, row) in rows.iter().enumerate() {
                ensure(truth[1 << i] == classical(f, &[1, 2, 3], row), || {
                    format!("{f}: singleton {i} disagrees with classical truth")
                })?;
            }
        }
    }
    Ok(format!(
        "{} formulas ({classical_count} classical), zero violations",
        formulas.len()
    ))
}

fn tensor_oracle_equivalence() -> Outcome {
    let lang = Language::pt0(&[1, 2]);
    let all = lang.all_up_to(3);
    let n = IndexSet::new([1, 2]);
    for f in &all {
        let mut fast = Evaluator::new(f, &n, Mode::Fast).unwrap();
        let mut oracle = Evaluator::new(f, &n, Mode::Oracle).unwrap();
        for m in 0..16u64 {
            ensure(fast.eval_mask(m) == oracle.eval_mask(m), || {
                format!("{f} on {m:#x}")
            })?;
        }
    }
    let shallow = lang.all_up_to(2);
    for f in &shallow {
        let mut fast = Evaluator::new(f, &n, Mode::Fast).unwrap();
        for m in 0..16u64 {
            ensure(
                fast.eval_mask(m) == holds(f, &[1, 2], &rows_of(&n, m)),
                || format!("{f} on {m:#x} against the reference evaluator"),
            )?;
        }
    }
    Ok(format!(
        "{} formulas × 16 teams agree; {} also match the reference",
        all.len(),
        shallow.len()
    ))
}

fn translation_lemmas() -> Outcome {
    let n = IndexSet::new([1, 2, 3]);
    let mut arg_lists: Vec<Vec<VarId>> = vec![vec![]];
    for a in 1..=3 {
        arg_lists.push(vec![a]);
        for b in 1..=3 {
            arg_lists.push(vec![a, b]);
        }
    }
    let mut count = 0;
    for args in &arg_lists {
        for target in 1..=3 {
            let atom = Formula::dep(args.clone(), target);
            let reference: Vec<bool> = (0..256u64)
                .map(|m| holds(&atom, &[1, 2, 3], &rows_of(&n, m)))
                .collect();
            for style in [
                AtomStyle::TensorLem,
                AtomStyle::RealizationDisjunction,
                AtomStyle::Implication,
            ] {
                let t = translate_atom(&atom, style);
                let mut ev = Evaluator::new(&t, &n, Mode::Fast).unwrap();
                for m in 0..256u64 {
                    ensure(ev.eval_mask(m) == reference[m as usize], || {
                        format!("{atom} as {t} on {m:#x}")
                    })?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} atoms × 3 styles × 256 teams"))
}

fn normal_form_lemmas() -> Outcome {
    let n = IndexSet::new([1, 2]);
    for x in 0..16u64 {
        let theta = theta_mask(&n, x).unwrap();
        let psi = psi_mask(&n, x).unwrap();
        let mut te = Evaluator::new(&theta, &n, Mode::Fast).unwrap();
        let mut pe = Evaluator::new(&psi, &n, Mode::Fast).unwrap();
        for y in 0..16u64 {
            let sub = y & !x == 0;
            ensure(te.eval_mask(y) == sub && pe.eval_mask(y) == sub, || {
                format!("Θ/Ψ of {x:#x} on {y:#x}")
            })?;
        }
    }
    for m in 0..=4usize {
        let a = alpha_card(m, &n).unwrap();
        let mut ev = Evaluator::new(&a, &n, Mode::Fast).unwrap();
        for x in 0..16u64 {
            ensure(ev.eval_mask(x) == (x.count_ones() as usize <= m), || {
                format!("α_{m} on {x:#x}")
            })?;
        }
    }
    for y in 1..16u64 {
        let xi = xi_mask(&n, y).unwrap();
        let mut ev = Evaluator::new(&xi, &n, Mode::Fast).unwrap();
        for x in 0..16u64 {
            ensure(ev.eval_mask(x) == (y & !x != 0), || {
                format!("Ξ_{y:#x} on {x:#x}")
            })?;
        }
    }
    Ok("256 (X,Y) pairs for Θ and Ψ, α_0..α_4 and all 15 Ξ_Y on 16 teams".into())
}

fn expressive_completeness() -> Outcome {
    let brute = count_downward_closed_two_vars();
    ensure(brute == 167, || format!("brute-force count is {brute}"))?;
    let n = IndexSet::new([1, 2]);
    let families = downward_closed_families(&n).map_err(|e| e.to_string())?;
    ensure(families.len() == brute, || {
        format!("library enumerates {} families", families.len())
    })?;
    for k in &families {
        for style in [
            NormalFormStyle::TensorDnf,
            NormalFormStyle::NegNegDnf,
            NormalFormStyle::DepCnf,
        ] {
            for maximal in [false, true] {
                let f = synthesize(k, style, maximal).map_err(|e| e.to_string())?;
                ensure(in_fragment(&f, style.fragment()), || {
                    format!("{f} outside {}", style.fragment())
                })?;
                let mut ev = Evaluator::new(&f, &n, Mode::Fast).unwrap();
                let got: BTreeSet<u64> = (0..16u64).filter(|m| ev.eval_mask(*m)).collect();
                ensure(got == *k.masks(), || {
                    format!("{style:?} maximal={maximal}: {f}")
                })?;
            }
        }
    }
    Ok(format!(
        "{brute} families (2^16 brute force), 3 styles, with and without the maximal flag"
    ))
}

fn counterexample_suite() -> Outcome {
    for i in 1..=3 {
        let pi = Formula::Var(i);
        ensure(
            entails(&[Formula::tensor(pi.clone(), pi.clone())], &pi) == Ok(true),
            || format!("p{i}+p{i} ⊨ p{i}"),
        )?;
    }
    ensure(
        entails(&[p("=(p1) + =(p1)")], &p("=(p1)")) == Ok(false),
        || "=(p1)+=(p1) ⊨ =(p1)".into(),
    )?;
    ensure(
        entails(&[p("(p1|~p1) + (p1|~p1)")], &p("p1|~p1")) == Ok(false),
        || "(p1|~p1)+(p1|~p1)".into(),
    )?;
    ensure(
        is_valid(&p("((p1 -> bot) -> bot) -> p1")) == Ok(true),
        || "¬¬p1→p1".into(),
    )?;
    ensure(
        is_valid(&p("(((p1|~p1) -> bot) -> bot) -> (p1|~p1)")) == Ok(false),
        || "¬¬(p1∨¬p1)".into(),
    )?;
    let n = IndexSet::new([1]);
    let witness = Team::full(n.clone()).unwrap();
    let dom = [1];
    let witness_rows = vec![vec![true], vec![false]];
    let laws = [
        ("((p1|~p1)+p1) & ((p1|~p1)+~p1)", "(p1|~p1) + (p1&~p1)"),
        ("((p1|~p1)&p1) + ((p1|~p1)&~p1)", "(p1|~p1) & (p1+~p1)"),
        ("(p1|~p1) + (p1|~p1)", "p1 | (~p1+~p1)"),
    ];
    for (prem, concl) in laws {
        let (a, b) = (p(prem), p(concl));
        ensure(entails(std::slice::from_ref(&a), &b) == Ok(false), || {
            format!("{prem} ⊨ {concl}")
        })?;
        for mode in [Mode::Fast, Mode::Oracle] {
            ensure(
                eval(&a, &witness, mode) == Ok(true) && eval(&b, &witness, mode) == Ok(false),
                || format!("{{s1,s2}} does not separate {prem} from {concl}"),
            )?;
        }
        ensure(
            holds(&a, &dom, &witness_rows) && !holds(&b, &dom, &witness_rows),
            || format!("reference evaluator: {{s1,s2}} does not separate {prem} from {concl}"),
        )?;
    }
    Ok("all 8 verdicts match; the three distributive laws fail on {s1,s2}".into())
}

fn expected_endpoints(name: &str) -> (Vec<&'static str>, &'static str) {
    match name {
        "ex_falso" => (vec!["bot"], "p1"),
        "com_and" => (vec!["p1 & p2"], "p2 & p1"),
        "ass_and" => (vec!["(p1 & p2) & p3"], "p1 & (p2 & p3)"),
        "com_or" => (vec!["p1 | p2"], "p2 | p1"),
        "ass_or" => (vec!["(p1 | p2) | p3"], "p1 | (p2 | p3)"),
        "dstr_and_or_a" => (vec!["p1 & (p2 | p3)"], "(p1 & p2) | (p1 & p3)"),
        "dstr_and_or_b" => (vec!["(p1 & p2) | (p1 & p3)"], "p1 & (p2 | p3)"),
        "dstr_and_or_c" => (vec!["p1 | (p2 & p3)"], "(p1 | p2) & (p1 | p3)"),
        "dstr_and_or_d" => (vec!["(p1 | p2) & (p1 | p3)"], "p1 | (p2 & p3)"),
        "dstr_tensor_and" => (vec!["p1 + (p2 & p3)"], "(p1 + p2) & (p1 + p3)"),
        "dstr_and_tensor" => (vec!["p1 & (p2 + p3)"], "(p1 & p2) + (p1 & p3)"),
        "dstr_or_tensor" => (vec!["p1 | (p2 + p3)"], "(p1 | p2) + (p1 | p3)"),
        "dstr_tensor_or_tensor" => (vec!["(p1 + p2) | (p1 + p3)"], "p1 + (p2 | p3)"),
        "dstr_star_tensor_and" => (vec!["(p1 + p2) & (p1 + p3)"], "p1 + (p2 & p3)"),
        "dstr_star_and_tensor" => (vec!["(p1 & p2) + (p1 & p3)"], "p1 & (p2 + p3)"),
        "and_sub" => (vec!["p1 & p2"], "(p1 + p3) & p2"),
        "armstrong_i" => (vec![], "=(p1,p1)"),
        "armstrong_ii" => (vec!["=(p1,p2,p3)"], "=(p2,p1,p3)"),
        "armstrong_iii" => (vec!["=(p1,p1,p2)"], "=(p1,p2)"),
        "armstrong_iv" => (vec!["=(p2,p3)"], "=(p1,p2,p3)"),
        "armstrong_v" => (vec!["=(p1,p2)", "=(p2,p3)"], "=(p1,p3)"),
        other => panic!("no endpoints recorded for {other}"),
    }
}

fn proof_kernel_goldens() -> Outcome {
    let alt = NamedParams {
        phi: p("p1 & ~p2"),
        psi: p("=(p2) + bot"),
        chi: p("~p1"),
        x: 3,
        y: 1,
        z: 2,
    };
    let alt_pdv = NamedParams {
        psi: p("p2 | ~p2"),
        ..alt.clone()
    };
    let mut checked = 0;
    let mut derived = 0;
    for name in NAMED_RULES {
        let d = derive_named(name, &NamedParams::default()).map_err(|e| format!("{name}: {e}"))?;
        let (ctx, concl) = expected_endpoints(name);
        let ctx: BTreeSet<Formula> = ctx.into_iter().map(p).collect();
        ensure(
            d.judgment.context == ctx && d.judgment.conclusion == p(concl),
            || format!("{name}: got {}", d.judgment),
        )?;
        if !name.starts_with("armstrong") {
            derived += 1;
        }
        let again = check_nd(
            &parse_proof(&render_proof(&d.derivation)).unwrap(),
            d.system,
        )
        .map_err(|e| format!("{name} after a text round trip: {e}"))?;
        ensure(again == d.judgment, || {
            format!("{name}: judgment changed after a text round trip")
        })?;
        for params in [&alt, &alt_pdv] {
            match derive_named(name, params) {
                Ok(other) => {
                    let ctx: Vec<Formula> = other.judgment.context.iter().cloned().collect();
                    ensure(
                        entails(&ctx, &other.judgment.conclusion) == Ok(true),
                        || format!("{name}: {} is not a valid entailment", other.judgment),
                    )?;
                    checked += 1;
                }
                Err(e) => {
                    ensure(!name.starts_with("armstrong") && params == &alt, || {
                        format!("{name}: {e}")
                    })?;
                }
            }
        }
        let ctx: Vec<Formula> = d.judgment.context.iter().cloned().collect();
        ensure(entails(&ctx, &d.judgment.conclusion) == Ok(true), || {
            format!("{name}: {} is not a valid entailment", d.judgment)
        })?;
        checked += 1;
    }
    ensure(derived >= 15, || format!("only {derived} derived rules"))?;
    let star = NamedParams {
        phi: p("=(p1)"),
        ..NamedParams::default()
    };
    ensure(derive_named("dstr_star_tensor_and", &star).is_err(), || {
        "starred rule accepted =(p1)".into()
    })?;
    Ok(format!("5 Armstrong derivations and {derived} derived rules check; {checked} judgments re-verified"))
}

fn check_pdv(psi: &Formula, phi: &Formula) -> Result<Derivation, String> {
    let d = synth_entailment_pdv(psi, phi).map_err(|e| format!("{psi} ⊢ {phi}: {e}"))?;
    let j = check_nd(&d, ProofSystem::NdPdV).map_err(|e| format!("{psi} ⊢ {phi}: {e}"))?;
    ensure(
        j.context == BTreeSet::from([psi.clone()]) && j.conclusion == *phi,
        || format!("{psi} ⊢ {phi}: judgment {j}"),
    )?;
    Ok(d)
}

fn pdv_synthesis() -> Outcome {
    let formulas = Language::pdv(&[1]).all_up_to(2);
    ensure(formulas.len() == 30, || {
        format!("{} formulas of depth ≤ 2", formulas.len())
    })?;
    let mut exhaustive = 0;
    for psi in &formulas {
        for phi in &formulas {
            if entails(std::slice::from_ref(psi), phi) == Ok(true) {
                check_pdv(psi, phi)?;
                exhaustive += 1;
            }
        }
    }
    let lang = Language::pdv(&[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sampled = 0;
    let mut tries = 0;
    while sampled < 100 {
        tries += 1;
        ensure(tries < 100_000, || {
            "could not sample 100 entailing pairs".into()
        })?;
        let psi = lang.random(&mut rng, 3);
        let phi = lang.random(&mut rng, 3);
        if psi == phi || entails(std::slice::from_ref(&psi), &phi) != Ok(true) {
            continue;
        }
        check_pdv(&psi, &phi)?;
        sampled += 1;
    }
    Ok(format!(
        "{exhaustive} entailing pairs of the 900 over {{p1}} and {sampled} sampled over {{p1,p2}}"
    ))
}

fn dep_is_nested(f: &Formula) -> bool {
    f.dep_paths().iter().any(|path: &Vec<Side>| path.len() >= 2)
}

const PD_INSTANCES: &[(&[&str], &str)] = &[
    (&["=(p1,p2)", "=(p2,p3)"], "=(p1,p3)"),
    (&["p1"], "=(p1)"),
    (&["~p1"], "=(p1)"),
    (&["=(p1)"], "=(p2,p1)"),
    (&["=(p1,p2)", "=(p1)"], "=(p2)"),
    (&["=(p1,p1,p2)"], "=(p1,p2)"),
    (&[], "=(p1,p1)"),
    (&[], "p1 + ~p1"),
    (&["p1 & p2"], "=(p1,p2)"),
    (&["=(p1) & =(p2)"], "=(p1,p2)"),
    (&["=(p1) & =(p2)"], "=(p1) + =(p2)"),
    (&["=(p1,p2) & =(p2,p1)"], "=(p2,p1) & =(p1,p2)"),
    (&["=(p1) & ~p2"], "=(p1,p2) & =(p2,p1)"),
    (&["p1 + (p2 & =(p1))"], "p1 + =(p1)"),
    (&["(=(p1) & p2) + (=(p1) & ~p2)"], "=(p2,p1)"),
    (&["(p1 & =(p2)) + (~p1 & =(p2))"], "=(p1,p2)"),
    (&["=(p1,p2)"], "(p1 & =(p2)) + (~p1 & =(p2))"),
    (&["(p1 & =(p2,p1)) + ~p1"], "=(p2,p1) + ~p1"),
    (&["p1 & (=(p2) + bot)"], "=(p1) & =(p2)"),
    (&["(=(p1) + =(p1)) & p2"], "=(p1) + =(p1)"),
    (&["p2 & (=(p1) + (p1 & ~p1))"], "=(p1) & p2"),
    (&["(=(p1,p2) & p1) + (=(p1,p2) & ~p1)"], "=(p1,p2)"),
    (&["=(p2) & (p1 + ~p1)"], "(p1 & =(p2)) + (~p1 & =(p2))"),
    (&["(p1 + p2) & =(p1)"], "(=(p1) & p1) + (=(p1) & p2)"),
    (&["(=(p1) & =(p2)) + bot"], "=(p2,p1)"),
    (&["p1 & =(p2)"], "(=(p2) & p1) + (=(p1,p2) & ~p1)"),
];

fn check_pd(gamma: &[Formula], phi: &Formula) -> Result<Derivation, String> {
    let show = || format!("{gamma:?} ⊢ {phi}");
    let d = synth_entailment_pd(gamma, phi).map_err(|e| format!("{}: {e}", show()))?;
    let j = check_nd(&d, ProofSystem::NdPd).map_err(|e| format!("{}: {e}", show()))?;
    let ctx: BTreeSet<Formula> = gamma.iter().cloned().collect();
    ensure(j.context == ctx && j.conclusion == *phi, || {
        format!("{}: judgment {j}", show())
    })?;
    ensure(entails(gamma, phi) == Ok(true), || {
        format!("{}: not a valid entailment", show())
    })?;
    Ok(d)
}

fn pd_synthesis() -> Outcome {
    let mut instances: Vec<(Vec<Formula>, Formula)> = PD_INSTANCES
        .iter()
        .map(|(g, f)| (g.iter().map(|s| p(s)).collect(), p(f)))
        .collect();
    let lang = Language::pd(&[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    while instances.len() < 50 {
        let gamma: Vec<Formula> = (0..rng.gen_range(1..=2))
            .map(|_| lang.random(&mut rng, 3))
            .collect();
        let phi = lang.random(&mut rng, 3);
        if gamma.contains(&phi) || entails(&gamma, &phi) != Ok(true) {
            continue;
        }
        instances.push((gamma, phi));
    }
    let mut nested = 0;
    let mut transitivity = false;
    for (gamma, phi) in &instances {
        for f in gamma.iter().chain([phi]) {
            ensure(in_fragment(f, Fragment::Pd), || {
                format!("{f} is not a PD formula")
            })?;
        }
        check_pd(gamma, phi)?;
        if gamma.iter().chain([phi]).any(dep_is_nested) {
            nested += 1;
        }
        transitivity |= gamma == &[p("=(p1,p2)"), p("=(p2,p3)")] && *phi == p("=(p1,p3)");
    }
    ensure(transitivity, || "transitivity instance missing".into())?;
    ensure(nested >= 10, || format!("only {nested} nested instances"))?;
    Ok(format!(
        "{} instances, {nested} with nested dependence atoms, transitivity included",
        instances.len()
    ))
}

fn round_trip_and_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lang = Language::pt0(&[1, 2, 3, 12]);
    for _ in 0..500 {
        let f = lang.random(&mut rng, 5);
        let text = render(&f);
        let back = parse_any(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == f, || format!("{text} reparses as {back:?}"))?;
        ensure(render(&back) == text, || {
            format!("{text} is not byte-stable")
        })?;
    }
    let cases: Vec<Derivation> = vec![
        check_pdv(&p("(p1 | ~p1) & (p2 + ~p2)"), &p("(p1 & (p2 + ~p2)) | ~p1"))?,
        check_pd(&[p("=(p1,p2)"), p("p1 + p2")], &p("=(p1,p2) + =(p2)"))?,
        derive_named("armstrong_ii", &NamedParams::default())
            .unwrap()
            .derivation,
    ];
    for d in &cases {
        let text = render_proof(d);
        let back = parse_proof(&text).map_err(|e| e.to_string())?;
        ensure(back == *d, || {
            "derivation changed after a text round trip".into()
        })?;
        ensure(render_proof(&back) == text, || {
            "derivation text is not byte-stable".into()
        })?;
    }
    let mut h = HilbertProof::default();
    h.push(p("((p1 -> bot) -> bot)"), Justification::Hyp);
    h.push(
        p("((p1 -> bot) -> bot) -> p1"),
        Justification::Axiom(AxiomKind::Dne),
    );
    h.push(p("p1"), Justification::Mp(2, 1));
    let text = render_hilbert(&h);
    let back = parse_hilbert(&text).map_err(|e| e.to_string())?;
    ensure(back == h && render_hilbert(&back) == text, || {
        "Hilbert proof round trip".into()
    })?;
    ensure(check_hilbert(&back, ProofSystem::HInqL).is_ok(), || {
        "Hilbert proof no longer checks".into()
    })?;
    let n = IndexSet::new([1, 2]);
    let fam = TeamFamily::from_masks(n.clone(), [0, 1, 2, 3, 8]).unwrap();
    let json = fam.to_json();
    ensure(TeamFamily::from_json(&json).as_ref() == Ok(&fam), || {
        "family JSON round trip".into()
    })?;
    let team = Team::from_mask(n, 0b1010).unwrap();
    let csv = team.to_csv();
    ensure(Team::from_csv(csv.as_bytes()).as_ref() == Ok(&team), || {
        "team CSV round trip".into()
    })?;
    for f in ["=(p1,p2) + ~p1", "(p1 | p2) & =(p2)", "p1 -> =(p2)"] {
        for style in [
            NormalFormStyle::TensorDnf,
            NormalFormStyle::NegNegDnf,
            NormalFormStyle::DepCnf,
        ] {
            let a = normalize(&p(f), style, false).map_err(|e| e.to_string())?;
            let b = normalize(&p(f), style, false).map_err(|e| e.to_string())?;
            ensure(render(&a) == render(&b), || {
                format!("normalize({f}) is not deterministic")
            })?;
        }
    }
    let a = render_proof(&check_pd(&[p("=(p1,p2)"), p("=(p2,p3)")], &p("=(p1,p3)"))?);
    let b = render_proof(&check_pd(&[p("=(p1,p2)"), p("=(p2,p3)")], &p("=(p1,p3)"))?);
    ensure(a == b, || "PD synthesis is not deterministic".into())?;
    let a = render_proof(&check_pdv(&p("p1 | p2"), &p("p1 + p2"))?);
    let b = render_proof(&check_pdv(&p("p1 | p2"), &p("p1 + p2"))?);
    ensure(a == b, || "PDv synthesis is not deterministic".into())?;
    Ok("500 formulas, 3 derivations, a Hilbert proof, team and family files; repeated runs identical".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("Table-1 goldens", table_one_goldens),
        ("core property suite", core_properties),
        ("tensor oracle equivalence", tensor_oracle_equivalence),
        ("translation lemmas", translation_lemmas),
        ("normal-form lemmas", normal_form_lemmas),
        ("expressive completeness", expressive_completeness),
        ("counterexample suite", counterexample_suite),
        ("proof kernel goldens", proof_kernel_goldens),
        ("PDv completeness synthesis", pdv_synthesis),
        ("PD completeness synthesis", pd_synthesis),
        ("round trip and determinism", round_trip_and_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

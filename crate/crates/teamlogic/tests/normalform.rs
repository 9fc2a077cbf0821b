mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{holds, Language};
use teamlogic::decide::{entails, equivalent};
use teamlogic::formula::{in_fragment, parse_any, Formula};
use teamlogic::normalform::{
    alpha_card, defining_formula, normalize, psi_mask, synthesize, theta_mask, xi, xi_mask,
    DefiningStyle, NormalFormError, NormalFormStyle,
};
use teamlogic::semantics::{denotation, Evaluator, Mode};
use teamlogic::team::{IndexSet, Team, TeamFamily};

const STYLES: [NormalFormStyle; 3] = [
    NormalFormStyle::TensorDnf,
    NormalFormStyle::NegNegDnf,
    NormalFormStyle::DepCnf,
];

fn p(s: &str) -> Formula {
    parse_any(s).unwrap()
}

fn truth(f: &Formula, n: &IndexSet) -> Vec<bool> {
    let mut ev = Evaluator::new(f, n, Mode::Fast).unwrap();
    (0..=n.full_mask()).map(|m| ev.eval_mask(m)).collect()
}

#[test]
fn defining_formulas() {
    let n = IndexSet::new([1, 2]);
    let x4 = Team::from_rows(n.clone(), &[vec![false, true], vec![false, false]]).unwrap();
    let theta = defining_formula(&x4, DefiningStyle::Theta).unwrap();
    assert_eq!(theta, p("(~p1 & p2) + (~p1 & ~p2)"));
    let psi = defining_formula(&x4, DefiningStyle::Psi).unwrap();
    assert!(in_fragment(&psi, teamlogic::Fragment::InqL));
    let empty = Team::empty(n.clone()).unwrap();
    assert_eq!(
        defining_formula(&empty, DefiningStyle::Theta).unwrap(),
        Formula::Bot
    );
    assert_eq!(
        defining_formula(&empty, DefiningStyle::Psi).unwrap(),
        Formula::Bot
    );
    let t = truth(&theta, &n);
    let s = truth(&psi, &n);
    for y in 0..16u64 {
        let sub = y & !x4.mask() == 0;
        assert_eq!(t[y as usize], sub);
        assert_eq!(s[y as usize], sub);
    }
}

#[test]
fn defining_law_sampled_on_three_variables() {
    let n = IndexSet::new([1, 2, 3]);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..24 {
        let x: u64 = rng.gen_range(0..256);
        let theta = truth(&theta_mask(&n, x).unwrap(), &n);
        let psi = truth(&psi_mask(&n, x).unwrap(), &n);
        for y in 0..256u64 {
            assert_eq!(theta[y as usize], y & !x == 0);
            assert_eq!(psi[y as usize], y & !x == 0);
        }
    }
}

#[test]
fn cardinality_formulas() {
    let n = IndexSet::new([1, 2]);
    assert_eq!(alpha_card(0, &n).unwrap(), Formula::Bot);
    assert_eq!(alpha_card(1, &n).unwrap(), p("=(p1) & =(p2)"));
    let a2 = truth(&alpha_card(2, &n).unwrap(), &n);
    for x in 0..16u64 {
        assert_eq!(a2[x as usize], x.count_ones() <= 2);
    }
}

#[test]
fn forbidden_team_formulas() {
    let n = IndexSet::new([1, 2]);
    let y = Team::from_rows(n.clone(), &[vec![false, true], vec![true, false]]).unwrap();
    let f = xi(&y).unwrap();
    assert_eq!(f, p("(=(p1) & =(p2)) + (p1 & p2) + (~p1 & ~p2)"));
    let t = truth(&f, &n);
    for x in 0..16u64 {
        assert_eq!(t[x as usize], y.mask() & !x != 0);
    }
    let full = truth(&xi_mask(&n, 15).unwrap(), &n);
    for x in 0..16u64 {
        assert_eq!(full[x as usize], x.count_ones() < 4);
    }
    assert_eq!(xi_mask(&n, 0), Err(NormalFormError::EmptyY));
}

#[test]
fn synthesis_examples() {
    let n1 = IndexSet::new([1]);
    let bottom = TeamFamily::from_masks(n1.clone(), [0]).unwrap();
    for style in STYLES {
        for maximal in [false, true] {
            assert_eq!(synthesize(&bottom, style, maximal).unwrap(), Formula::Bot);
        }
    }
    let everything = TeamFamily::from_masks(n1.clone(), 0..4).unwrap();
    for style in STYLES {
        let f = synthesize(&everything, style, false).unwrap();
        assert!(truth(&f, &n1).iter().all(|b| *b), "{f}");
    }
    let constancy = denotation(&p("=(p1)"), &n1).unwrap();
    assert_eq!(
        synthesize(&constancy, NormalFormStyle::TensorDnf, true).unwrap(),
        p("~p1 | p1")
    );
    let not_closed = TeamFamily::from_masks(n1.clone(), [0, 3]).unwrap();
    assert_eq!(
        synthesize(&not_closed, NormalFormStyle::DepCnf, false),
        Err(NormalFormError::NotDownwardClosed)
    );
}

#[test]
fn normalization_examples() {
    let f = normalize(&p("=(p1)"), NormalFormStyle::TensorDnf, false).unwrap();
    assert_eq!(f.to_string().matches('|').count(), 2);
    assert_eq!(
        normalize(&p("=(p1)"), NormalFormStyle::TensorDnf, true).unwrap(),
        p("~p1 | p1")
    );
    for style in STYLES {
        assert_eq!(normalize(&p("bot"), style, false).unwrap(), Formula::Bot);
    }
    let cpl = Language::cpl(&[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = IndexSet::new([1, 2]);
    for _ in 0..60 {
        let g = cpl.random(&mut rng, 3);
        for style in STYLES {
            let h = normalize(&g, style, false).unwrap();
            assert!(in_fragment(&h, style.fragment()));
            assert_eq!(equivalent(&g, &h), Ok(true), "{g} vs {h}");
            let wide = Formula::and(h.clone(), p("p1 | ~p1 + p2"));
            let gw = Formula::and(g.clone(), p("p1 | ~p1 + p2"));
            assert_eq!(truth(&wide, &n), truth(&gw, &n));
        }
    }
}

#[test]
fn normal_forms_preserve_denotation_on_random_formulas() {
    let lang = Language::pt0(&[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..120 {
        let f = lang.random(&mut rng, 4);
        for style in STYLES {
            for maximal in [false, true] {
                let g = normalize(&f, style, maximal).unwrap();
                assert!(in_fragment(&g, style.fragment()));
                assert_eq!(
                    equivalent(&f, &g),
                    Ok(true),
                    "{f} vs {g} ({style:?}, maximal={maximal})"
                );
            }
        }
    }
}

/// Downward closure of a set of generator masks.
fn closure(gens: &[u64]) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for g in gens {
        for y in 0..=*g {
            if y & !g == 0 {
                out.insert(y);
            }
        }
    }
    out
}

#[test]
fn disjunction_of_thetas_entailment_criterion() {
    let n = IndexSet::new([1, 2]);
    let dom = [1u32, 2];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..150 {
        let xs: Vec<u64> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(0..16))
            .collect();
        let ys: Vec<u64> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(0..16))
            .collect();
        let lhs = Formula::big_or(xs.iter().map(|x| theta_mask(&n, *x).unwrap())).unwrap();
        let rhs = Formula::big_or(ys.iter().map(|y| theta_mask(&n, *y).unwrap())).unwrap();
        let criterion = xs.iter().all(|x| ys.iter().any(|y| x & !y == 0));
        assert_eq!(
            entails(std::slice::from_ref(&lhs), &rhs),
            Ok(criterion),
            "{xs:?} {ys:?}"
        );
        let fam = TeamFamily::from_masks(n.clone(), closure(&xs)).unwrap();
        let rows = common::all_rows(2);
        for x in 0..16u64 {
            let team: Vec<Vec<bool>> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| x >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            assert_eq!(holds(&lhs, &dom, &team), fam.masks().contains(&x));
        }
    }
}

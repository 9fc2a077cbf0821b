mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::Language;
use teamlogic::formula::{
    in_fragment, occurrences, parse, parse_any, render, replace_at, subformula_at, symbol_length,
    vars, Formula, FormulaError, Fragment,
};

fn p(s: &str) -> Formula {
    parse_any(s).unwrap()
}

fn worked_example() -> Formula {
    p("=(p1,p2) + (~p3 & =(p1,p2))")
}

#[test]
fn parse_maps_atoms_and_negation() {
    assert_eq!(
        parse("=(p2,p3,p5)", Fragment::Pd).unwrap(),
        Formula::dep(vec![2, 3], 5)
    );
    assert_eq!(parse("=(p7)", Fragment::Pd).unwrap(), Formula::constancy(7));
    assert_eq!(parse("~p4", Fragment::Pd).unwrap(), Formula::NegVar(4));
    assert_eq!(
        parse_any("~=(p1)").unwrap(),
        Formula::implies(Formula::constancy(1), Formula::Bot)
    );
    assert_eq!(
        parse_any("~~p1").unwrap(),
        Formula::implies(Formula::NegVar(1), Formula::Bot)
    );
}

#[test]
fn parse_reports_fragment_violations() {
    match parse("p1 | ~p1", Fragment::Pd) {
        Err(FormulaError::FragmentViolation { fragment, .. }) => assert_eq!(fragment, Fragment::Pd),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse("=(p1,p2)", Fragment::InqL),
        Err(FormulaError::FragmentViolation { .. })
    ));
    assert!(matches!(
        parse("~=(p1)", Fragment::Pd),
        Err(FormulaError::FragmentViolation { .. })
    ));
}

#[test]
fn syntax_errors_carry_a_position() {
    for (text, at) in [("p1 &", 4), ("=(p1,)", 5), ("(p1 + p2", 8), ("q1", 0)] {
        match parse_any(text) {
            Err(FormulaError::Syntax { position, expected }) => {
                assert_eq!(position, at, "{text}");
                assert!(!expected.is_empty());
            }
            other => panic!("{text}: unexpected {other:?}"),
        }
    }
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(
        p("p1 & p2 + p3 | p4 -> p5"),
        p("(((p1 & p2) + p3) | p4) -> p5")
    );
    assert_eq!(p("p1 -> p2 -> p3"), p("p1 -> (p2 -> p3)"));
    assert_eq!(p("  p1&p2  "), p("p1 & p2"));
}

#[test]
fn render_examples() {
    assert_eq!(render(&Formula::dep(vec![2, 3], 5)), "=(p2,p3,p5)");
    assert_eq!(
        render(&Formula::implies(Formula::Var(1), Formula::Bot)),
        "p1 -> bot"
    );
    assert_eq!(render(&Formula::NegVar(1)), "~p1");
    let f = Formula::tensor(Formula::and(Formula::Var(1), Formula::Var(2)), Formula::Bot);
    assert_eq!(render(&f), "p1 & p2 + bot");
}

#[test]
fn fragment_membership() {
    assert!(!in_fragment(&Formula::constancy(1), Fragment::InqL));
    assert!(in_fragment(&p("p1 & (p2 + ~p3)"), Fragment::Cpl));
    assert!(!in_fragment(&p("(p1 & p2) -> bot"), Fragment::Pd));
    assert!(in_fragment(&p("=(p1,p2) -> p1 | bot"), Fragment::Pid));
    assert!(!in_fragment(&p("~p1"), Fragment::Pid));
    assert!(in_fragment(&p("p1 | ~p1 + bot"), Fragment::PdV));
}

#[test]
fn fragment_inclusions_hold_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lang = Language::pt0(&[1, 2]);
    for _ in 0..2000 {
        let f = lang.random(&mut rng, 4);
        assert!(in_fragment(&f, Fragment::Pt0));
        if in_fragment(&f, Fragment::InqL) {
            assert!(in_fragment(&f, Fragment::Pid));
        }
        if in_fragment(&f, Fragment::Cpl) {
            assert!(f.is_classical());
        }
    }
}

#[test]
fn vars_examples() {
    assert_eq!(
        vars(&Formula::dep(vec![2, 3], 5))
            .into_iter()
            .collect::<Vec<_>>(),
        vec![2, 3, 5]
    );
    assert!(vars(&Formula::Bot).is_empty());
    assert_eq!(
        vars(&p("p1 + ~p1")).into_iter().collect::<Vec<_>>(),
        vec![1]
    );
}

#[test]
fn worked_example_addresses() {
    let f = worked_example();
    assert_eq!(symbol_length(&f), 16);
    let occ = occurrences(&f);
    assert_eq!(occ[0], (1, f.clone()));
    let atoms: Vec<usize> = occ
        .iter()
        .filter(|(_, g)| *g == p("=(p1,p2)"))
        .map(|(a, _)| *a)
        .collect();
    assert_eq!(atoms, vec![1, 11]);
    assert!(occ.contains(&(8, p("~p3 & =(p1,p2)"))));
    assert_eq!(occurrences(&Formula::Var(1)), vec![(1, Formula::Var(1))]);
}

#[test]
fn replace_touches_one_occurrence() {
    let f = worked_example();
    let beta = p("p4 + p5");
    assert_eq!(
        replace_at(&f, 11, beta.clone()).unwrap(),
        p("=(p1,p2) + (~p3 & (p4 + p5))")
    );
    assert_eq!(replace_at(&Formula::Var(1), 1, beta.clone()).unwrap(), beta);
    assert_eq!(
        replace_at(&Formula::Var(1), 2, beta),
        Err(FormulaError::BadAddress(2))
    );
}

#[test]
fn random_formulas_round_trip_and_addresses_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lang = Language::pt0(&[1, 2, 10]);
    for _ in 0..1000 {
        let f = lang.random(&mut rng, 5);
        let text = render(&f);
        assert_eq!(parse_any(&text).unwrap(), f, "{text}");
        let squeezed = text.replace(' ', "");
        assert_eq!(render(&parse_any(&squeezed).unwrap()), text);
        let occ = occurrences(&f);
        assert_eq!(occ[0], (1, f.clone()));
        assert!(occ.windows(2).all(|w| w[0].0 <= w[1].0));
        for (a, _) in &occ {
            let sub = subformula_at(&f, *a).unwrap().clone();
            assert_eq!(replace_at(&f, *a, sub).unwrap(), f);
        }
    }
}

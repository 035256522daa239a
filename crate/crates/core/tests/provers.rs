use rand::rngs::StdRng;
use rand::SeedableRng;

use uipcalc_core::oracle::{enumerate_formulas, enumerate_sequents, random_sequent, semantic_check, Budget};
use uipcalc_core::provers::{validate, Decision, Prover};
use uipcalc_core::syntax::{parse_formula, parse_sequent};
use uipcalc_core::{FMultiset, Formula, Logic, Sequent, Var};

fn vars() -> Vec<Var> {
    vec![Var::new("p").unwrap(), Var::new("q").unwrap()]
}

fn classical_sequents(weight: u32, max_left: usize) -> Vec<Sequent> {
    let fs = enumerate_formulas(&vars(), weight, uipcalc_core::Dialect::Classical);
    enumerate_sequents(&fs, max_left, true)
}

fn intuitionistic_sequents(logic: Logic, weight: u32, max_left: usize) -> Vec<Sequent> {
    let fs = Budget::new(&["p", "q"], weight).formulas(logic);
    enumerate_sequents(&fs, max_left, false)
}

fn sequents(logic: Logic) -> Vec<Sequent> {
    if logic.is_classical() {
        classical_sequents(3, 2)
    } else {
        let mut all = intuitionistic_sequents(logic, 4, 1);
        all.extend(
            intuitionistic_sequents(logic, 3, 2)
                .into_iter()
                .filter(|s| s.left.len() == 2),
        );
        all
    }
}

fn proves(logic: Logic, text: &str) -> bool {
    Prover::new(logic).proves_formula(&parse_formula(text).unwrap())
}

#[test]
fn derivations_validate_and_match_the_fast_path() {
    for logic in Logic::ALL {
        let mut slow = Prover::new(logic);
        let mut fast = Prover::new(logic);
        let mut provable = 0;
        let all = sequents(logic);
        for s in &all {
            let verdict = fast.provable(s).unwrap();
            match slow.decide(s).unwrap() {
                Decision::Provable(d) => {
                    provable += 1;
                    assert!(verdict, "{logic}: fast path refutes {s}");
                    assert!(validate(logic, &d), "{logic}: invalid derivation for {s}");
                    assert_eq!(d.conclusion, *s);
                }
                Decision::Refuted => assert!(!verdict, "{logic}: fast path proves {s}"),
            }
        }
        assert!(provable > 0 && provable < all.len(), "{logic}: degenerate budget");
    }
}

#[test]
fn invertible_cut_off_keeps_verdicts() {
    for logic in [Logic::IL, Logic::ISL] {
        let mut cut = Prover::new(logic);
        let mut full = Prover::exhaustive(logic);
        for s in intuitionistic_sequents(logic, 4, 1) {
            assert_eq!(cut.provable(&s).unwrap(), full.provable(&s).unwrap(), "{logic}: {s}");
        }
    }
}

#[test]
fn pruned_searches_agree_with_plain_backtracking() {
    let mut rng = StdRng::seed_from_u64(7);
    let vars = vars();
    for logic in [Logic::IL, Logic::ISL] {
        let mut fast = Prover::new(logic);
        let mut slow = Prover::new(logic);
        let mut plain = Prover::exhaustive(logic);
        let mut provable = 0;
        for _ in 0..1500 {
            let s = random_sequent(&mut rng, &vars, 7, 3, uipcalc_core::Dialect::Intuitionistic);
            if logic == Logic::IL && s.formulas().any(Formula::has_box) {
                continue;
            }
            let expected = plain.decide(&s).unwrap().is_provable();
            provable += usize::from(expected);
            assert_eq!(slow.decide(&s).unwrap().is_provable(), expected, "{logic}: {s}");
            assert_eq!(fast.provable(&s).unwrap(), expected, "{logic}: {s}");
        }
        assert!(provable > 0, "{logic}: no provable samples");
    }
}

#[test]
fn gl_extends_k() {
    let mut k = Prover::new(Logic::K);
    let mut gl = Prover::new(Logic::GL);
    for s in classical_sequents(3, 2) {
        if k.provable(&s).unwrap() {
            assert!(gl.provable(&s).unwrap(), "{s}");
        }
    }
}

#[test]
fn weakening_is_admissible() {
    let extras: Vec<Formula> = ["p", "q", "[]p", "F", "p -> q"]
        .iter()
        .map(|t| parse_formula(t).unwrap())
        .collect();
    for logic in Logic::ALL {
        let mut prover = Prover::new(logic);
        for s in sequents(logic).into_iter().filter(|s| s.left.len() <= 1) {
            if !prover.provable(&s).unwrap() {
                continue;
            }
            for x in &extras {
                if logic == Logic::IL && x.has_box() {
                    continue;
                }
                let t = Sequent::new(s.left.with(x.clone()), s.right.clone());
                assert!(prover.provable(&t).unwrap(), "{logic}: {t}");
            }
        }
    }
}

#[test]
fn unboxing_a_left_formula_keeps_isl_provability() {
    let mut prover = Prover::new(Logic::ISL);
    for s in intuitionistic_sequents(Logic::ISL, 4, 2) {
        if !prover.provable(&s).unwrap() {
            continue;
        }
        for phi in s.left.distinct() {
            let t = Sequent::new(s.left.without(phi).with(phi.unbox()), s.right.clone());
            assert!(prover.provable(&t).unwrap(), "{s} but not {t}");
        }
    }
}

#[test]
fn hilbert_axioms() {
    for logic in [Logic::K, Logic::GL] {
        assert!(proves(logic, "[](p -> q) -> []p -> []q"));
        assert!(proves(logic, "(p -> q -> F) -> F -> p"));
        assert!(proves(logic, "((p -> q) -> p) -> p"));
        assert!(!proves(logic, "[]p -> p"));
    }
    assert!(proves(Logic::GL, "[]p -> [][]p"));
    assert!(proves(Logic::GL, "[]([]p -> p) -> []p"));
    assert!(!proves(Logic::K, "[]p -> [][]p"));
    assert!(!proves(Logic::K, "[]([]p -> p) -> []p"));

    for logic in [Logic::IL, Logic::ISL] {
        assert!(proves(logic, "p & q -> q & p"));
        assert!(proves(logic, "p | q -> q | p"));
        assert!(proves(logic, "~~(p | ~p)"));
        assert!(!proves(logic, "p | ~p"));
        assert!(!proves(logic, "~~p -> p"));
        assert!(!proves(logic, "((p -> q) -> p) -> p"));
    }
    assert!(proves(Logic::ISL, "p -> []p"));
    assert!(proves(Logic::ISL, "([]p -> p) -> p"));
    assert!(proves(Logic::ISL, "[](p -> q) -> []p -> []q"));
    assert!(!proves(Logic::ISL, "[]p -> p"));
    assert!(!proves(Logic::ISL, "[]F"));
}

#[test]
fn classical_provers_are_sound_for_small_trees() {
    for logic in [Logic::K, Logic::GL] {
        let mut prover = Prover::new(logic);
        for s in classical_sequents(3, 1) {
            if prover.provable(&s).unwrap() {
                for (depth, branching) in [(1, 2), (2, 1)] {
                    let r = semantic_check(logic, &s, depth, branching);
                    assert!(!r.is_countermodel(), "{logic}: {s} has countermodel {r:?}");
                }
            }
        }
    }
}

#[test]
fn shallow_k_refutations_have_countermodels() {
    let mut prover = Prover::new(Logic::K);
    for s in classical_sequents(4, 1) {
        if s.modal_depth() <= 1 && !prover.provable(&s).unwrap() {
            assert!(semantic_check(Logic::K, &s, 1, 2).is_countermodel(), "{s}");
        }
    }
}

#[test]
fn contract_errors() {
    let two_right = parse_sequent("=> p, q").unwrap();
    assert!(Prover::new(Logic::ISL).decide(&two_right).is_err());
    let sugared = Sequent::new(FMultiset::new(), FMultiset::singleton(parse_formula("p & q").unwrap()));
    assert!(Prover::new(Logic::K).decide(&sugared).is_err());
    assert!(!Prover::new(Logic::K).proves(&sugared).unwrap());
}

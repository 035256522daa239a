use std::collections::BTreeSet;

use uipcalc_core::calculus::canopy;
use uipcalc_core::interpolation::{GlResidue, Interpolator, Quantifier};
use uipcalc_core::oracle::{enumerate_sequents, Budget};
use uipcalc_core::provers::Prover;
use uipcalc_core::sequent::{contract, is_critical};
use uipcalc_core::{FMultiset, Formula, Logic, Sequent, Var};

fn p() -> Var {
    Var::new("p").unwrap()
}

fn budget(logic: Logic, weight: u32, max_left: usize) -> (Vec<Formula>, Vec<Sequent>) {
    let fs = Budget::new(&["p", "q"], weight).formulas(logic);
    let seqs = enumerate_sequents(&fs, max_left, logic.is_classical());
    let seqs = if logic.is_classical() {
        seqs.into_iter().map(|s| s.desugar_classical()).collect()
    } else {
        seqs
    };
    (fs, seqs)
}

fn equivalent(prover: &mut Prover, a: &Formula, b: &Formula) -> bool {
    prover.proves_formula(&Formula::imp(a.clone(), b.clone()))
        && prover.proves_formula(&Formula::imp(b.clone(), a.clone()))
}

#[test]
fn interpolants_are_p_free_and_implied() {
    for logic in Logic::ALL {
        let mut ip = Interpolator::new(logic, p());
        let (_, seqs) = budget(logic, 3, 1);
        let lefts: BTreeSet<FMultiset> = seqs.iter().map(|s| s.left.clone()).collect();
        for s in &seqs {
            let a = ip.a(s).unwrap();
            assert!(!a.mentions(&p()), "{logic}: A of {s} is {a}");
            let obligation = Sequent::new(s.left.with(a), s.right.clone());
            assert!(Prover::new(logic).proves(&obligation).unwrap(), "{logic}: {obligation}");
        }
        for g in lefts {
            let e = ip.e(&g).unwrap();
            assert!(!e.mentions(&p()), "{logic}: E of {g:?} is {e}");
            let obligation = Sequent::new(g, FMultiset::singleton(e));
            assert!(Prover::new(logic).proves(&obligation).unwrap(), "{logic}: {obligation}");
        }
    }
}

#[test]
fn n_gl_is_p_free() {
    let mut ip = Interpolator::new(Logic::GL, p());
    let (_, seqs) = budget(Logic::GL, 3, 2);
    for s in seqs.iter().filter(|s| is_critical(s)) {
        let (_, inner) = s.left.split_boxed();
        let residue = Sequent::new(inner.sum(&inner.map(|x| Formula::boxed(x.clone()))), FMultiset::new());
        for t in canopy(&contract(&residue)).iter_occurrences() {
            let n = ip.n_gl(s, t).unwrap();
            assert!(!n.mentions(&p()), "N({s}, {t}) = {n}");
        }
    }
}

#[test]
fn classical_e_is_negated_a() {
    for logic in [Logic::K, Logic::GL] {
        let mut ip = Interpolator::new(logic, p());
        let (_, seqs) = budget(logic, 3, 2);
        for s in seqs.iter().filter(|s| s.right.is_empty()) {
            assert_eq!(ip.e(&s.left).unwrap(), Formula::neg(ip.a(s).unwrap()), "{s}");
        }
    }
}

#[test]
fn gl_interpolants_are_robust_under_contraction() {
    let mut ip = Interpolator::new(Logic::GL, p());
    let mut gls = Prover::new(Logic::GL);
    let (fs, _) = budget(Logic::GL, 3, 0);
    for phi in fs.iter().map(Formula::desugar_classical) {
        for right in [vec![], vec![Formula::var(Var::new("q").unwrap())]] {
            let doubled = Sequent::from_parts([phi.clone(), phi.clone()], right.clone());
            let single = contract(&doubled);
            let (a, b) = (ip.a(&doubled).unwrap(), ip.a(&single).unwrap());
            assert!(equivalent(&mut gls, &a, &b), "{doubled}");
        }
    }
}

#[test]
fn full_left_residue_breaks_implication() {
    // With Γ kept in the ◇ residue, `⇒ ¬q` gets the disjunct ◇¬q, which
    // does not imply ¬q.
    let s = Sequent::from_parts([], [Formula::neg(Formula::var(Var::new("q").unwrap()))]);
    let obligation = |ip: &mut Interpolator| Sequent::new(s.left.with(ip.a(&s).unwrap()), s.right.clone());
    let mut unboxed = Interpolator::new(Logic::GL, p());
    let mut full = Interpolator::new(Logic::GL, p()).with_gl_residue(GlResidue::FullLeft);
    assert!(Prover::new(Logic::GL).proves(&obligation(&mut unboxed)).unwrap());
    assert!(!Prover::new(Logic::GL).proves(&obligation(&mut full)).unwrap());
}

#[test]
fn quantifier_lemma_one() {
    for logic in Logic::ALL {
        let mut ip = Interpolator::new(logic, p());
        let mut prover = Prover::new(logic);
        let (fs, _) = budget(logic, 3, 0);
        let sample: Vec<&Formula> = fs.iter().step_by(3).collect();
        for phi in &sample {
            let ex = ip.quantify(Quantifier::Exists, phi).unwrap();
            for psi in &sample {
                let all = ip
                    .quantify(Quantifier::Forall, &Formula::imp((*phi).clone(), (*psi).clone()))
                    .unwrap();
                let guarded = Formula::imp(ex.clone(), all.clone());
                assert!(equivalent(&mut prover, &all, &guarded), "{logic}: {phi}, {psi}");
            }
        }
    }
}

#[test]
fn a5_variant_keeps_the_obligations() {
    let mut ip = Interpolator::new(Logic::ISL, p()).keep_p_in_a5(true);
    let (_, seqs) = budget(Logic::ISL, 3, 1);
    for s in &seqs {
        let a = ip.a(s).unwrap();
        assert!(!a.mentions(&p()));
        let obligation = Sequent::new(s.left.with(a), s.right.clone());
        assert!(Prover::new(Logic::ISL).proves(&obligation).unwrap(), "{obligation}");
    }
}

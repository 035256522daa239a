//! Uniform interpolants: `A_p`/`E_p` for K and GL by recursion along the
//! KS/GLS strategy, and for IL/iSL by the Pitts-style table over G4iSLt.
//!
//! Outputs are raw: disjunctions and conjunctions are folded exactly as the
//! constructions dictate, with no simplification. Use [`simplify`] for a
//! readable (equivalent) form.

use std::collections::{BTreeSet, HashMap};

use crate::calculus::{canopy, glr_premises, kr_premises};
use crate::error::ContractError;
use crate::formula::{Formula, Kind, Var};
use crate::sequent::{
    closes_by_axiom, contract, is_critical, theta, unbox, usable_boxes, CallMeasure, FMultiset, Sequent,
};
use crate::Logic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// `A_p` of the target.
    A,
    /// `E_p` of the target's left side (or of `{φ}` for a formula).
    E,
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Formula(Formula),
    Sequent(Sequent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolantRequest {
    pub logic: Logic,
    pub var: Var,
    pub target: Target,
    pub quantifier: Quantifier,
}

/// Which sequent the `◇` disjunct of the GL construction saturates, for
/// `s = Γ, □Γ′ ⇒ Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GlResidue {
    /// `Γ′, □Γ′ ⇒`, what is left of `s` after (GLR).
    #[default]
    Unboxed,
    /// `Γ, □Γ′ ⇒`.
    FullLeft,
}

/// True in debug builds or when `UIPCALC_DEBUG_ASSERTS=1`.
pub fn measure_checks_default() -> bool {
    cfg!(debug_assertions) || std::env::var("UIPCALC_DEBUG_ASSERTS").is_ok_and(|v| v == "1")
}

/// Computes interpolants for one logic and one variable, memoising every
/// intermediate call.
pub struct Interpolator {
    logic: Logic,
    p: Var,
    checks: bool,
    panic_on_violation: bool,
    violations: Vec<String>,
    residue: GlResidue,
    keep_p_in_a5: bool,
    classical: HashMap<Sequent, Formula>,
    e_memo: HashMap<FMultiset, Formula>,
    a_memo: HashMap<Sequent, Formula>,
}

impl Interpolator {
    pub fn new(logic: Logic, p: Var) -> Interpolator {
        Interpolator {
            logic,
            p,
            checks: measure_checks_default(),
            panic_on_violation: true,
            violations: Vec::new(),
            residue: GlResidue::default(),
            keep_p_in_a5: false,
            classical: HashMap::new(),
            e_memo: HashMap::new(),
            a_memo: HashMap::new(),
        }
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn var(&self) -> &Var {
        &self.p
    }

    pub fn with_measure_checks(mut self, on: bool) -> Self {
        self.checks = on;
        self
    }

    /// Collect measure violations instead of panicking on the first one.
    pub fn record_violations(mut self) -> Self {
        self.checks = true;
        self.panic_on_violation = false;
        self
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn with_gl_residue(mut self, residue: GlResidue) -> Self {
        self.residue = residue;
        self.classical.clear();
        self
    }

    /// Row `Γ, p, p→ψ ⇒ φ` recurses on `Γ, p, ψ ⇒ φ` instead of `Γ, ψ ⇒ φ`.
    pub fn keep_p_in_a5(mut self, on: bool) -> Self {
        self.keep_p_in_a5 = on;
        self.a_memo.clear();
        self.e_memo.clear();
        self
    }

    fn violation(&mut self, msg: String) {
        if self.panic_on_violation {
            panic!("termination measure violated: {msg}");
        }
        self.violations.push(msg);
    }

    fn check_input(&self, s: &Sequent) -> Result<(), ContractError> {
        if self.logic.is_classical() {
            if !s.is_classical_core() {
                return Err(ContractError::NotDesugared);
            }
        } else if self.logic == Logic::IL && s.formulas().any(Formula::has_box) {
            return Err(ContractError::Dialect("IL formulas cannot contain □".into()));
        }
        Ok(())
    }

    /// `A_p(s)`. Classical logics take any desugared sequent; IL and iSL need
    /// exactly one formula on the right.
    pub fn a(&mut self, s: &Sequent) -> Result<Formula, ContractError> {
        self.check_input(s)?;
        Ok(match self.logic {
            Logic::K => self.a_k(s),
            Logic::GL => self.a_gl(s),
            Logic::IL | Logic::ISL => {
                s.goal()?;
                self.a_int(s)
            }
        })
    }

    /// `E_p(Γ)`; classically `¬A_p(Γ ⇒)`.
    pub fn e(&mut self, gamma: &FMultiset) -> Result<Formula, ContractError> {
        let s = Sequent::new(gamma.clone(), FMultiset::new());
        self.check_input(&s)?;
        Ok(match self.logic {
            Logic::K => Formula::neg(self.a_k(&s)),
            Logic::GL => Formula::neg(self.a_gl(&s)),
            Logic::IL | Logic::ISL => self.e_int(gamma),
        })
    }

    /// The auxiliary `N_p(s, t)` of the GL construction.
    pub fn n_gl(&mut self, s: &Sequent, t: &Sequent) -> Result<Formula, ContractError> {
        if self.logic != Logic::GL {
            return Err(ContractError::Dialect("N_p is only defined for GL".into()));
        }
        self.check_input(s)?;
        self.check_input(t)?;
        Ok(self.n_gl_rec(s, t))
    }

    fn var_disjuncts(&self, s: &Sequent) -> (Formula, Formula) {
        let pos = Formula::big_or(
            s.right
                .top_vars()
                .filter(|v| **v != self.p)
                .map(|v| Formula::var(v.clone()))
                .collect::<Vec<_>>(),
        );
        let neg = Formula::big_or(
            s.left
                .top_vars()
                .filter(|v| **v != self.p)
                .map(|v| Formula::neg(Formula::var(v.clone())))
                .collect::<Vec<_>>(),
        );
        (pos, neg)
    }

    fn a_k(&mut self, s: &Sequent) -> Formula {
        if let Some(f) = self.classical.get(s) {
            return f.clone();
        }
        let result = if s.is_empty() {
            Formula::bot()
        } else if !is_critical(s) {
            let leaves: Vec<Sequent> = canopy(s).iter_occurrences().cloned().collect();
            let parts: Vec<Formula> = leaves.iter().map(|t| self.a_k(t)).collect();
            Formula::big_and(parts)
        } else if closes_by_axiom(s, Logic::K) {
            Formula::top()
        } else {
            let (pos, neg) = self.var_disjuncts(s);
            let prems: Vec<Sequent> = kr_premises(s).iter_occurrences().cloned().collect();
            let boxes: Vec<Formula> = prems.iter().map(|t| Formula::boxed(self.a_k(t))).collect();
            let (_, inner) = s.left.split_boxed();
            let rest = self.a_k(&Sequent::new(inner, FMultiset::new()));
            Formula::big_or([pos, neg, Formula::big_or(boxes), Formula::dia(rest)])
        };
        self.classical.insert(s.clone(), result.clone());
        result
    }

    fn check_theta(&mut self, callee: &Sequent, caller: &Sequent) {
        if self.checks && theta(callee) >= theta(caller) {
            self.violation(format!("GL call {callee:?} from {caller:?}"));
        }
    }

    fn a_gl(&mut self, s: &Sequent) -> Formula {
        if let Some(f) = self.classical.get(s) {
            return f.clone();
        }
        let result = if s.is_empty() {
            Formula::bot()
        } else if closes_by_axiom(s, Logic::GL) {
            Formula::top()
        } else if !is_critical(s) {
            let leaves: Vec<Sequent> = canopy(&contract(s)).iter_occurrences().cloned().collect();
            let mut parts = Vec::with_capacity(leaves.len());
            for t in &leaves {
                self.check_theta(t, s);
                parts.push(self.a_gl(t));
            }
            Formula::big_and(parts)
        } else {
            let (pos, neg) = self.var_disjuncts(s);
            let boxes = self.gl_box_disjuncts(s);
            let (plain, inner) = s.left.split_boxed();
            let reboxed = inner.map(|f| Formula::boxed(f.clone()));
            let left = match self.residue {
                GlResidue::Unboxed => inner.sum(&reboxed),
                GlResidue::FullLeft => plain.sum(&reboxed),
            };
            let residue = contract(&Sequent::new(left, FMultiset::new()));
            let leaves: Vec<Sequent> = canopy(&residue).iter_occurrences().cloned().collect();
            let ns: Vec<Formula> = leaves.iter().map(|t| self.n_gl_rec(s, t)).collect();
            Formula::big_or([pos, neg, boxes, Formula::dia(Formula::big_and(ns))])
        };
        self.classical.insert(s.clone(), result.clone());
        result
    }

    /// `⋁ □A(t′)` over `GP` of the contracted sequent.
    fn gl_box_disjuncts(&mut self, s: &Sequent) -> Formula {
        let prems: Vec<Sequent> = glr_premises(&contract(s)).iter_occurrences().cloned().collect();
        let mut boxes = Vec::with_capacity(prems.len());
        for t in &prems {
            self.check_theta(t, s);
            boxes.push(Formula::boxed(self.a_gl(t)));
        }
        Formula::big_or(boxes)
    }

    fn n_gl_rec(&mut self, s: &Sequent, t: &Sequent) -> Formula {
        if closes_by_axiom(t, Logic::GL) {
            Formula::top()
        } else if usable_boxes(t) < usable_boxes(s) {
            self.check_theta(t, s);
            self.a_gl(t)
        } else {
            let (pos, neg) = self.var_disjuncts(t);
            let boxes = self.gl_box_disjuncts(t);
            Formula::big_or([pos, neg, boxes])
        }
    }

    fn modal(&self) -> bool {
        self.logic == Logic::ISL
    }

    fn check_call(&mut self, callee: CallMeasure, caller: &CallMeasure) {
        if self.checks && !callee.less(caller) {
            self.violation(format!("{callee:?} from {caller:?}"));
        }
    }

    fn e_call(&mut self, gamma: FMultiset, caller: &CallMeasure) -> Formula {
        self.check_call(CallMeasure::E(gamma.clone()), caller);
        self.e_int(&gamma)
    }

    fn a_call(&mut self, left: FMultiset, goal: Formula, caller: &CallMeasure) -> Formula {
        let s = Sequent::intuitionistic(left, goal);
        self.check_call(CallMeasure::A(s.clone()), caller);
        self.a_int(&s)
    }

    /// `□(E(Σ) → A(Σ ⇒ δ))`, shared by the rows for `□δ` on the right and
    /// `□δ₁ → δ₂` on the left.
    fn boxed_step(&mut self, sigma: FMultiset, delta: &Formula, caller: &CallMeasure) -> Formula {
        let e = self.e_call(sigma.clone(), caller);
        let a = self.a_call(sigma, delta.clone(), caller);
        Formula::boxed(Formula::imp(e, a))
    }

    fn e_int(&mut self, gamma: &FMultiset) -> Formula {
        if let Some(f) = self.e_memo.get(gamma) {
            return f.clone();
        }
        let me = CallMeasure::E(gamma.clone());
        let mut out = BTreeSet::new();
        for f in gamma.distinct() {
            let rest = gamma.without(f);
            match f.kind() {
                Kind::Bot => {
                    out.insert(Formula::bot());
                }
                Kind::Var(q) if *q != self.p => {
                    let e = self.e_call(rest, &me);
                    out.insert(Formula::and(e, f.clone()));
                }
                Kind::Var(_) => {}
                Kind::And(a, b) => {
                    out.insert(self.e_call(rest.with(a.clone()).with(b.clone()), &me));
                }
                Kind::Or(a, b) => {
                    let l = self.e_call(rest.with(a.clone()), &me);
                    let r = self.e_call(rest.with(b.clone()), &me);
                    out.insert(Formula::or(l, r));
                }
                Kind::Box(d) => {
                    if self.modal() {
                        let inner = self.e_call(unbox(&rest).with(d.clone()), &me);
                        out.insert(Formula::boxed(inner));
                    }
                }
                Kind::Imp(a, c) => {
                    if let Some(x) = self.e_imp_row(&rest, a, c, &me) {
                        out.insert(x);
                    }
                }
            }
        }
        let result = Formula::big_and(out);
        self.e_memo.insert(gamma.clone(), result.clone());
        result
    }

    /// Left rows for `a → c` with context `rest`.
    fn e_imp_row(&mut self, rest: &FMultiset, a: &Formula, c: &Formula, me: &CallMeasure) -> Option<Formula> {
        Some(match a.kind() {
            Kind::Var(q) if *q != self.p => Formula::imp(a.clone(), self.e_call(rest.with(c.clone()), me)),
            Kind::Var(_) => {
                if !rest.contains(a) {
                    return None;
                }
                self.e_call(rest.with(c.clone()), me)
            }
            Kind::Bot => return None,
            Kind::And(d1, d2) => {
                let curried = Formula::imp(d1.clone(), Formula::imp(d2.clone(), c.clone()));
                self.e_call(rest.with(curried), me)
            }
            Kind::Or(d1, d2) => {
                let l = Formula::imp(d1.clone(), c.clone());
                let r = Formula::imp(d2.clone(), c.clone());
                self.e_call(rest.with(l).with(r), me)
            }
            Kind::Imp(_, d2) => {
                let ctx = rest.with(Formula::imp(d2.clone(), c.clone()));
                let e = self.e_call(ctx.clone(), me);
                let aa = self.a_call(ctx, a.clone(), me);
                let tail = self.e_call(rest.with(c.clone()), me);
                Formula::imp(Formula::imp(e, aa), tail)
            }
            Kind::Box(d1) => {
                if !self.modal() {
                    return None;
                }
                let sigma = unbox(rest).with(c.clone()).with(a.clone());
                let head = self.boxed_step(sigma, d1, me);
                let tail = self.e_call(rest.with(c.clone()), me);
                Formula::imp(head, tail)
            }
        })
    }

    fn a_int(&mut self, s: &Sequent) -> Formula {
        if let Some(f) = self.a_memo.get(s) {
            return f.clone();
        }
        let me = CallMeasure::A(s.clone());
        let gamma = &s.left;
        let phi = s.goal().expect("checked on entry").clone();
        let mut out = BTreeSet::new();
        for f in gamma.distinct() {
            let rest = gamma.without(f);
            match f.kind() {
                Kind::Var(q) if *q != self.p => {
                    out.insert(self.a_call(rest, phi.clone(), &me));
                }
                Kind::And(a, b) => {
                    out.insert(self.a_call(rest.with(a.clone()).with(b.clone()), phi.clone(), &me));
                }
                Kind::Or(a, b) => {
                    let mut half = |x: &Formula| {
                        let ctx = rest.with(x.clone());
                        let e = self.e_call(ctx.clone(), &me);
                        let a = self.a_call(ctx, phi.clone(), &me);
                        Formula::imp(e, a)
                    };
                    let l = half(a);
                    let r = half(b);
                    out.insert(Formula::and(l, r));
                }
                Kind::Imp(a, c) => {
                    if let Some(x) = self.a_imp_row(&rest, a, c, &phi, &me) {
                        out.insert(x);
                    }
                }
                Kind::Bot | Kind::Var(_) | Kind::Box(_) => {}
            }
        }
        match phi.kind() {
            Kind::Var(q) if *q != self.p => {
                out.insert(phi.clone());
            }
            Kind::Var(_) => {
                if gamma.contains(&phi) {
                    out.insert(Formula::top());
                }
            }
            Kind::Bot => {}
            Kind::And(a, b) => {
                let l = self.a_call(gamma.clone(), a.clone(), &me);
                let r = self.a_call(gamma.clone(), b.clone(), &me);
                out.insert(Formula::and(l, r));
            }
            Kind::Or(a, b) => {
                let l = self.a_call(gamma.clone(), a.clone(), &me);
                let r = self.a_call(gamma.clone(), b.clone(), &me);
                out.insert(Formula::or(l, r));
            }
            Kind::Imp(a, b) => {
                let ctx = gamma.with(a.clone());
                let e = self.e_call(ctx.clone(), &me);
                let aa = self.a_call(ctx, b.clone(), &me);
                out.insert(Formula::imp(e, aa));
            }
            Kind::Box(d) => {
                if self.modal() {
                    let sigma = unbox(gamma).with(phi.clone());
                    out.insert(self.boxed_step(sigma, d, &me));
                }
            }
        }
        let result = Formula::big_or(out);
        self.a_memo.insert(s.clone(), result.clone());
        result
    }

    fn a_imp_row(
        &mut self,
        rest: &FMultiset,
        a: &Formula,
        c: &Formula,
        phi: &Formula,
        me: &CallMeasure,
    ) -> Option<Formula> {
        Some(match a.kind() {
            Kind::Var(q) if *q != self.p => {
                let tail = self.a_call(rest.with(c.clone()), phi.clone(), me);
                Formula::and(a.clone(), tail)
            }
            Kind::Var(_) => {
                if !rest.contains(a) {
                    return None;
                }
                let ctx = if self.keep_p_in_a5 {
                    rest.clone()
                } else {
                    rest.without(a)
                };
                self.a_call(ctx.with(c.clone()), phi.clone(), me)
            }
            Kind::Bot => return None,
            Kind::And(d1, d2) => {
                let curried = Formula::imp(d1.clone(), Formula::imp(d2.clone(), c.clone()));
                self.a_call(rest.with(curried), phi.clone(), me)
            }
            Kind::Or(d1, d2) => {
                let l = Formula::imp(d1.clone(), c.clone());
                let r = Formula::imp(d2.clone(), c.clone());
                self.a_call(rest.with(l).with(r), phi.clone(), me)
            }
            Kind::Imp(d1, d2) => {
                let ctx = rest.with(Formula::imp(d2.clone(), c.clone()));
                let e = self.e_call(ctx.clone(), me);
                let aa = self.a_call(ctx, Formula::imp(d1.clone(), d2.clone()), me);
                let tail = self.a_call(rest.with(c.clone()), phi.clone(), me);
                Formula::and(Formula::imp(e, aa), tail)
            }
            Kind::Box(d1) => {
                if !self.modal() {
                    return None;
                }
                let sigma = unbox(rest).with(c.clone()).with(a.clone());
                let head = self.boxed_step(sigma, d1, me);
                let tail = self.a_call(rest.with(c.clone()), phi.clone(), me);
                Formula::and(head, tail)
            }
        })
    }

    /// `∀pφ` or `∃pφ`. Classical input is desugared first.
    pub fn quantify(&mut self, q: Quantifier, phi: &Formula) -> Result<Formula, ContractError> {
        let phi = self.prepare(phi);
        let empty = FMultiset::new();
        match (q, self.logic.is_classical()) {
            (Quantifier::Forall | Quantifier::A, _) => self.a(&Sequent::new(empty, FMultiset::singleton(phi))),
            (Quantifier::Exists, true) => {
                let s = Sequent::new(empty, FMultiset::singleton(Formula::neg(phi)));
                Ok(Formula::neg(self.a(&s)?))
            }
            (Quantifier::Exists | Quantifier::E, false) | (Quantifier::E, true) => self.e(&FMultiset::singleton(phi)),
        }
    }

    /// `∀p(⋀Γ → φ)` as `E_p(Γ) → A_p(Γ ⇒ φ)`; intuitionistic only.
    pub fn sequent_universal(&mut self, s: &Sequent) -> Result<Formula, ContractError> {
        if self.logic.is_classical() {
            return Err(ContractError::Dialect(
                "the E → A form is for IL and iSL; use A for classical sequents".into(),
            ));
        }
        let a = self.a(s)?;
        let e = self.e(&s.left)?;
        Ok(Formula::imp(e, a))
    }

    fn prepare(&self, f: &Formula) -> Formula {
        if self.logic.is_classical() {
            f.desugar_classical()
        } else {
            f.clone()
        }
    }

    fn prepare_sequent(&self, s: &Sequent) -> Sequent {
        if self.logic.is_classical() {
            s.desugar_classical()
        } else {
            s.clone()
        }
    }
}

/// Runs one request with a fresh interpolator.
pub fn compute(req: &InterpolantRequest) -> Result<Formula, ContractError> {
    let mut ip = Interpolator::new(req.logic, req.var.clone());
    compute_with(&mut ip, req.quantifier, &req.target)
}

pub fn compute_with(ip: &mut Interpolator, q: Quantifier, target: &Target) -> Result<Formula, ContractError> {
    match target {
        Target::Formula(f) => ip.quantify(q, f),
        Target::Sequent(s) => {
            let s = ip.prepare_sequent(s);
            match q {
                Quantifier::A => ip.a(&s),
                Quantifier::E => ip.e(&s.left),
                Quantifier::Forall if ip.logic.is_classical() => ip.a(&s),
                Quantifier::Forall => ip.sequent_universal(&s),
                Quantifier::Exists => Err(ContractError::Request("∃p takes a formula, not a sequent".into())),
            }
        }
    }
}

pub fn a_k(p: &Var, s: &Sequent) -> Result<Formula, ContractError> {
    Interpolator::new(Logic::K, p.clone()).a(s)
}

pub fn a_gl(p: &Var, s: &Sequent) -> Result<Formula, ContractError> {
    Interpolator::new(Logic::GL, p.clone()).a(s)
}

pub fn n_gl(p: &Var, s: &Sequent, t: &Sequent) -> Result<Formula, ContractError> {
    Interpolator::new(Logic::GL, p.clone()).n_gl(s, t)
}

pub fn e_classical(logic: Logic, p: &Var, gamma: &FMultiset) -> Result<Formula, ContractError> {
    if !logic.is_classical() {
        return Err(ContractError::Dialect(format!("{logic} is not classical")));
    }
    Interpolator::new(logic, p.clone()).e(gamma)
}

pub fn e_isl(logic: Logic, p: &Var, gamma: &FMultiset) -> Result<Formula, ContractError> {
    if logic.is_classical() {
        return Err(ContractError::Dialect(format!("{logic} is not intuitionistic")));
    }
    Interpolator::new(logic, p.clone()).e(gamma)
}

pub fn a_isl(logic: Logic, p: &Var, s: &Sequent) -> Result<Formula, ContractError> {
    if logic.is_classical() {
        return Err(ContractError::Dialect(format!("{logic} is not intuitionistic")));
    }
    Interpolator::new(logic, p.clone()).a(s)
}

pub fn quantify(logic: Logic, q: Quantifier, p: &Var, phi: &Formula) -> Result<Formula, ContractError> {
    Interpolator::new(logic, p.clone()).quantify(q, phi)
}

/// Bottom-up unit, annihilator and idempotence rewrites for `∧`/`∨` with
/// `⊤`/`⊥`, plus `φ → ⊤ ↦ ⊤` and `⊥ → φ ↦ ⊤`. Every rewrite is
/// intuitionistically valid.
pub fn simplify(f: &Formula) -> Formula {
    match f.kind() {
        Kind::Bot | Kind::Var(_) => f.clone(),
        Kind::Box(a) => Formula::boxed(simplify(a)),
        Kind::And(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_bot() || b.is_bot() {
                Formula::bot()
            } else if a.is_top() || a == b {
                b
            } else if b.is_top() {
                a
            } else {
                Formula::and(a, b)
            }
        }
        Kind::Or(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_top() || b.is_top() {
                Formula::top()
            } else if a.is_bot() || a == b {
                b
            } else if b.is_bot() {
                a
            } else {
                Formula::or(a, b)
            }
        }
        Kind::Imp(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_bot() || b.is_top() {
                Formula::top()
            } else {
                Formula::imp(a, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, print_formula, Style};

    fn p() -> Var {
        Var::new("p").unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn ms(items: &[&str]) -> FMultiset {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn a_k_cases() {
        assert_eq!(a_k(&p(), &Sequent::default()).unwrap(), Formula::bot());
        assert_eq!(a_k(&p(), &seq("p => p")).unwrap(), Formula::top());
        let raw = a_k(&p(), &seq("p => q")).unwrap();
        let expected = Formula::or(
            f("q"),
            Formula::or(
                Formula::bot(),
                Formula::or(Formula::bot(), Formula::dia(Formula::bot())),
            ),
        );
        assert_eq!(raw, expected);
        assert_eq!(print_formula(&raw, Style::Resugared), "q | F | F | <>F");
    }

    #[test]
    fn a_k_rejects_sugar() {
        assert_eq!(a_k(&p(), &seq("p & q =>")), Err(ContractError::NotDesugared));
    }

    #[test]
    fn e_classical_cases() {
        let e = e_classical(Logic::K, &p(), &ms(&["p"])).unwrap();
        let inner = Formula::big_or([
            Formula::bot(),
            Formula::bot(),
            Formula::bot(),
            Formula::dia(Formula::bot()),
        ]);
        assert_eq!(e, Formula::neg(inner));
        assert_eq!(
            e_classical(Logic::K, &p(), &ms(&["F"])).unwrap(),
            Formula::neg(Formula::top())
        );
        assert_eq!(
            e_classical(Logic::GL, &p(), &FMultiset::new()).unwrap(),
            Formula::neg(Formula::bot())
        );
    }

    #[test]
    fn a_gl_and_n_gl() {
        assert_eq!(a_gl(&p(), &seq("[]q => []q")).unwrap(), Formula::top());
        let s = seq("=> []q, r");
        assert_eq!(n_gl(&p(), &s, &seq("F =>")).unwrap(), Formula::top());
        // β(t) = 0 < β(s) = 1
        let t = seq("=> r");
        assert_eq!(n_gl(&p(), &s, &t).unwrap(), a_gl(&p(), &t).unwrap());
        // β(t) = β(s) = 0: truncated disjunction without the ◇ part
        let s = seq("[]q => r");
        assert_eq!(n_gl(&p(), &s, &t).unwrap(), f("r | F | F"));
    }

    #[test]
    fn isl_table_examples() {
        let e = |g: &[&str]| e_isl(Logic::ISL, &p(), &ms(g)).unwrap();
        let a = |s: &str| a_isl(Logic::ISL, &p(), &seq(s)).unwrap();
        assert_eq!(e(&[]), Formula::top());
        assert_eq!(e(&["p"]), Formula::top());
        assert_eq!(a("=> p"), Formula::bot());
        assert_eq!(a("p => p"), Formula::top());
        assert_eq!(e(&["p & q"]), Formula::and(Formula::top(), f("q")));
        assert_eq!(e(&["[]p"]), Formula::boxed(Formula::top()));
        assert_eq!(
            a("=> []p"),
            Formula::boxed(Formula::imp(Formula::boxed(Formula::top()), Formula::bot()))
        );
    }

    #[test]
    fn quantifier_examples() {
        assert_eq!(
            quantify(Logic::ISL, Quantifier::Exists, &p(), &f("p")).unwrap(),
            Formula::top()
        );
        assert_eq!(
            quantify(Logic::ISL, Quantifier::Forall, &p(), &f("p")).unwrap(),
            Formula::bot()
        );
        let k = quantify(Logic::K, Quantifier::Exists, &p(), &f("p")).unwrap();
        assert!(!k.mentions(&p()));
    }

    #[test]
    fn il_rejects_boxes() {
        assert!(matches!(
            a_isl(Logic::IL, &p(), &seq("=> []p")),
            Err(ContractError::Dialect(_))
        ));
        assert!(matches!(
            a_isl(Logic::ISL, &p(), &seq("=> p, q")),
            Err(ContractError::RightNotSingleton(2))
        ));
    }

    #[test]
    fn e9_contributes_once() {
        let e = e_isl(Logic::ISL, &p(), &ms(&["[]q", "[]r"])).unwrap();
        let boxes = count_top_conjuncts(&e, |c| c.is_boxed());
        assert_eq!(boxes, 1, "{e}");
    }

    fn count_top_conjuncts(f: &Formula, pred: impl Fn(&Formula) -> bool + Copy) -> usize {
        match f.kind() {
            Kind::And(a, b) => count_top_conjuncts(a, pred) + count_top_conjuncts(b, pred),
            _ => usize::from(pred(f)),
        }
    }

    #[test]
    fn exists_on_sequent_is_rejected() {
        let req = InterpolantRequest {
            logic: Logic::ISL,
            var: p(),
            target: Target::Sequent(seq("p => q")),
            quantifier: Quantifier::Exists,
        };
        assert!(matches!(compute(&req), Err(ContractError::Request(_))));
    }

    #[test]
    fn simplify_examples() {
        let raw = a_k(&p(), &seq("p => q")).unwrap();
        assert_eq!(simplify(&raw), Formula::or(f("q"), Formula::dia(Formula::bot())));
        assert_eq!(simplify(&Formula::and(Formula::top(), f("q"))), f("q"));
        assert_eq!(simplify(&f("p -> p")), f("p -> p"));
        assert_eq!(simplify(&f("q | q")), f("q"));
        assert_eq!(simplify(&f("F -> q")), Formula::top());
    }

    #[test]
    fn multiset_invariance() {
        let a1 = a_isl(Logic::ISL, &p(), &seq("q, p -> q, r => q & r")).unwrap();
        let a2 = a_isl(Logic::ISL, &p(), &seq("r, q, p -> q => q & r")).unwrap();
        assert_eq!(a1, a2);
    }
}

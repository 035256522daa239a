//! Terminating backward proof search for KS, GLS, G4iP and G4iSLt.
//!
//! KS and GLS follow the saturate / close / modal-step strategy: invertible
//! (→L)/(→R) steps first, then the axioms (with (IdB) for GLS), then one
//! (KR)/(GLR) premise at a time. G4iP and G4iSLt search all rule
//! applications in the order produced by [`crate::calculus`]. No loop check
//! is needed: every step strictly decreases a well-founded measure.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::calculus::{
    glr_premises, imp_left, imp_right, intuitionistic_applications, kr_premises, saturation_step, RuleTag,
};
use crate::error::ContractError;
use crate::formula::{Formula, Kind};
use crate::sequent::{closes_by_axiom, contract, is_critical, unbox, FMultiset, Sequent};
use crate::syntax::{print_sequent, Style};
use crate::Logic;

/// A derivation tree; each node is a rule instance whose premises are the
/// conclusions of its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: RuleTag,
    pub conclusion: Sequent,
    pub premises: Vec<Arc<Derivation>>,
}

impl Derivation {
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|d| d.height()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|d| d.node_count()).sum::<usize>()
    }

    /// Indented dump, conclusion first, premises nested below.
    pub fn render(&self, style: Style) -> String {
        let mut out = String::new();
        self.render_into(style, 0, &mut out);
        out
    }

    fn render_into(&self, style: Style, depth: usize, out: &mut String) {
        let _ = writeln!(
            out,
            "{:indent$}{}  [{}]",
            "",
            print_sequent(&self.conclusion, style),
            self.rule,
            indent = depth * 2
        );
        for p in &self.premises {
            p.render_into(style, depth + 1, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Provable(Arc<Derivation>),
    Refuted,
}

impl Decision {
    pub fn is_provable(&self) -> bool {
        matches!(self, Decision::Provable(_))
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            Decision::Provable(d) => Some(d),
            Decision::Refuted => None,
        }
    }
}

/// Checks the input shape a calculus expects.
pub fn check_input(logic: Logic, s: &Sequent) -> Result<(), ContractError> {
    if logic.is_classical() {
        if !s.is_classical_core() {
            return Err(ContractError::NotDesugared);
        }
    } else {
        s.goal()?;
    }
    Ok(())
}

/// The sequents one strategy step can move to. For classical logics these
/// are the premises of the saturation step, nothing for an initial sequent,
/// and otherwise the alternative (KR)/(GLR) premises. For intuitionistic
/// logics, all premises of all rule applications.
pub fn strategy_successors(logic: Logic, s: &Sequent) -> Result<Vec<Sequent>, ContractError> {
    check_input(logic, s)?;
    if logic.is_classical() {
        if let Some(app) = saturation_step(s) {
            return Ok(app.premises);
        }
        if closes_by_axiom(s, logic) {
            return Ok(Vec::new());
        }
        let prems = if logic == Logic::K {
            kr_premises(s)
        } else {
            glr_premises(s)
        };
        Ok(prems.distinct().cloned().collect())
    } else {
        Ok(intuitionistic_applications(logic, s)?
            .into_iter()
            .flat_map(|a| a.premises)
            .collect())
    }
}

/// Entries kept in the provability table before it is flushed.
const TRUTH_TABLE_LIMIT: usize = 1 << 20;

/// A memoising prover for one logic. The memo tables live as long as the
/// prover, so reuse one instance for many related queries.
///
/// [`Prover::decide`] returns derivations built from rule instances only.
/// [`Prover::provable`] and friends answer yes/no with a leaner search that
/// additionally uses admissible contraction and generalised identity for KS
/// and GLS; both give the same verdicts.
pub struct Prover {
    logic: Logic,
    memo: HashMap<Sequent, Option<Arc<Derivation>>>,
    truth: HashMap<Sequent, bool>,
    normal: HashMap<Formula, Formula>,
    invertible_cut_off: bool,
}

impl Prover {
    pub fn new(logic: Logic) -> Prover {
        Prover {
            logic,
            memo: HashMap::new(),
            truth: HashMap::new(),
            normal: HashMap::new(),
            invertible_cut_off: true,
        }
    }

    /// Disables the short cut that stops the intuitionistic search after a
    /// failed invertible rule; provability is unaffected.
    pub fn exhaustive(logic: Logic) -> Prover {
        Prover {
            invertible_cut_off: false,
            ..Prover::new(logic)
        }
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn decide(&mut self, s: &Sequent) -> Result<Decision, ContractError> {
        check_input(self.logic, s)?;
        Ok(match self.search(s) {
            Some(d) => Decision::Provable(d),
            None => Decision::Refuted,
        })
    }

    pub fn provable(&mut self, s: &Sequent) -> Result<bool, ContractError> {
        check_input(self.logic, s)?;
        Ok(self.holds(s))
    }

    /// Provability of `⇒ φ`, desugaring first for classical logics.
    pub fn proves_formula(&mut self, f: &Formula) -> bool {
        let f = if self.logic.is_classical() {
            f.desugar_classical()
        } else {
            f.clone()
        };
        let s = Sequent::new(FMultiset::new(), FMultiset::singleton(f));
        self.holds(&s)
    }

    /// Provability of a sequent, desugaring first for classical logics.
    pub fn proves(&mut self, s: &Sequent) -> Result<bool, ContractError> {
        if self.logic.is_classical() {
            let s = s.desugar_classical();
            self.provable(&s)
        } else {
            self.provable(s)
        }
    }

    fn search(&mut self, s: &Sequent) -> Option<Arc<Derivation>> {
        if let Some(hit) = self.memo.get(s) {
            return hit.clone();
        }
        let result = if self.logic.is_classical() {
            self.search_classical(s)
        } else {
            self.search_intuitionistic(s)
        };
        self.memo.insert(s.clone(), result.clone());
        result
    }

    fn node(rule: RuleTag, s: &Sequent, premises: Vec<Arc<Derivation>>) -> Option<Arc<Derivation>> {
        Some(Arc::new(Derivation {
            rule,
            conclusion: s.clone(),
            premises,
        }))
    }

    fn search_classical(&mut self, s: &Sequent) -> Option<Arc<Derivation>> {
        // The axioms carry arbitrary contexts, so a branch can close before
        // it is saturated. This only prunes; verdicts match the plain strategy.
        if let Some(rule) = axiom_rule(s, self.logic) {
            return Self::node(rule, s, Vec::new());
        }
        if let Some(app) = saturation_step(s) {
            let mut subs = Vec::with_capacity(app.premises.len());
            for prem in &app.premises {
                subs.push(self.search(prem)?);
            }
            return Self::node(app.rule, s, subs);
        }
        let (rule, prems) = if self.logic == Logic::K {
            (RuleTag::KR, kr_premises(s))
        } else {
            (RuleTag::GLR, glr_premises(s))
        };
        for prem in prems.distinct() {
            if let Some(d) = self.search(prem) {
                return Self::node(rule, s, vec![d]);
            }
        }
        None
    }

    fn holds(&mut self, s: &Sequent) -> bool {
        if self.truth.len() > TRUTH_TABLE_LIMIT {
            self.truth.clear();
        }
        if self.logic.is_classical() {
            self.holds_classical(&contract(s))
        } else {
            if self.normal.len() > TRUTH_TABLE_LIMIT {
                self.normal.clear();
            }
            let left: FMultiset = s.left.iter_occurrences().map(|f| self.normalize(f)).collect();
            let goal = self.normalize(s.goal().expect("checked on entry"));
            self.holds_intuitionistic(&Sequent::intuitionistic(left, goal))
        }
    }

    /// `s` is fully contracted.
    fn holds_classical(&mut self, s: &Sequent) -> bool {
        if let Some(&b) = self.truth.get(s) {
            return b;
        }
        let result = if closes_by_axiom(s, self.logic) || s.left.distinct().any(|f| s.right.contains(f)) {
            true
        } else if let Some(premises) = cheap_saturation(s) {
            premises.iter().all(|p| self.holds_classical(&contract(p)))
        } else {
            let prems = if self.logic == Logic::K {
                kr_premises(s)
            } else {
                glr_premises(s)
            };
            let prems: Vec<Sequent> = prems.distinct().map(contract).collect();
            prems.iter().any(|p| self.holds_classical(p))
        };
        self.truth.insert(s.clone(), result);
        result
    }

    /// Rewrites `f` to an equivalent formula in IL and iSL: ∧/∨ chains are
    /// flattened, deduplicated and put in canonical order, constants are
    /// folded, `□⊤` becomes `⊤`, and implications that hold by identity
    /// become `⊤`.
    fn normalize(&mut self, f: &Formula) -> Formula {
        if let Some(g) = self.normal.get(f) {
            return g.clone();
        }
        let g = match f.kind() {
            Kind::Bot | Kind::Var(_) => f.clone(),
            Kind::Box(a) => {
                let a = self.normalize(a);
                if a.is_top() {
                    Formula::top()
                } else {
                    Formula::boxed(a)
                }
            }
            Kind::And(a, b) => {
                let mut parts = BTreeSet::new();
                for x in [self.normalize(a), self.normalize(b)] {
                    flatten(&x, true, &mut parts);
                }
                parts.retain(|x| !x.is_top());
                if parts.iter().any(Formula::is_bot) {
                    Formula::bot()
                } else {
                    Formula::big_and(parts)
                }
            }
            Kind::Or(a, b) => {
                let mut parts = BTreeSet::new();
                for x in [self.normalize(a), self.normalize(b)] {
                    flatten(&x, false, &mut parts);
                }
                parts.retain(|x| !x.is_bot());
                if parts.iter().any(Formula::is_top) {
                    Formula::top()
                } else {
                    Formula::big_or(parts)
                }
            }
            Kind::Imp(a, b) => {
                let (a, b) = (self.normalize(a), self.normalize(b));
                if a.is_bot() || b.is_top() || a == b || in_chain(&a, &b, true) || in_chain(&b, &a, false) {
                    Formula::top()
                } else if a.is_top() {
                    b
                } else {
                    Formula::imp(a, b)
                }
            }
        };
        self.normal.insert(f.clone(), g.clone());
        g
    }

    /// Left contraction and generalised identity are admissible in G4iP and
    /// G4iSLt. Invertible rules are tried before the others, and a failed
    /// last premise of (→→L) or (□→L) refutes the sequent outright.
    fn holds_intuitionistic(&mut self, s: &Sequent) -> bool {
        let s = &contract(s);
        if let Some(&b) = self.truth.get(s) {
            return b;
        }
        let goal = s.goal().expect("checked on entry");
        if s.left.contains(goal) || s.left.contains(&Formula::bot()) {
            self.truth.insert(s.clone(), true);
            return true;
        }
        let mut apps = intuitionistic_applications(self.logic, s).expect("checked on entry");
        apps.sort_by_key(|app| (!app.rule.is_invertible(), app.premises.len()));
        let mut result = false;
        'apps: for app in apps {
            let last_first = app.rule.last_premise_invertible();
            for (k, prem) in app.premises.iter().rev().enumerate() {
                let prem = if last_first { prem } else { &app.premises[k] };
                if !self.holds_intuitionistic(prem) {
                    let inverted = app.rule.is_invertible() || (last_first && k == 0);
                    if self.invertible_cut_off && inverted {
                        break 'apps;
                    }
                    continue 'apps;
                }
            }
            result = true;
            break;
        }
        self.truth.insert(s.clone(), result);
        result
    }

    fn search_intuitionistic(&mut self, s: &Sequent) -> Option<Arc<Derivation>> {
        let apps = intuitionistic_applications(self.logic, s).expect("checked on entry");
        'apps: for app in apps {
            let last_first = app.rule.last_premise_invertible();
            let mut subs = Vec::with_capacity(app.premises.len());
            for (k, prem) in app.premises.iter().rev().enumerate() {
                let prem = if last_first { prem } else { &app.premises[k] };
                match self.search(prem) {
                    Some(d) => subs.push(d),
                    None if self.invertible_cut_off && (app.rule.is_invertible() || (last_first && k == 0)) => {
                        return None
                    }
                    None => continue 'apps,
                }
            }
            if last_first {
                subs.reverse();
            }
            return Self::node(app.rule, s, subs);
        }
        None
    }
}

/// The members of an ∧-chain (`conj`) or ∨-chain.
fn flatten(f: &Formula, conj: bool, out: &mut BTreeSet<Formula>) {
    match (f.kind(), conj) {
        (Kind::And(a, b), true) | (Kind::Or(a, b), false) => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        _ => {
            out.insert(f.clone());
        }
    }
}

/// Whether `x` is a member of the ∧-chain (`conj`) or ∨-chain `chain`.
fn in_chain(chain: &Formula, x: &Formula, conj: bool) -> bool {
    match (chain.kind(), conj) {
        (Kind::And(a, b), true) | (Kind::Or(a, b), false) => in_chain(a, x, conj) || in_chain(b, x, conj),
        _ => chain == x,
    }
}

/// Premises of a (→R)/(→L) step, preferring steps with a premise that closes
/// at once. (→L) and (→R) are invertible, so the choice does not matter for
/// provability.
fn cheap_saturation(s: &Sequent) -> Option<Vec<Sequent>> {
    if let Some(imp) = s.right.distinct().find(|f| f.is_imp()) {
        return imp_right(s, imp).map(|app| app.premises);
    }
    let mut imps = s.left.distinct().filter(|f| f.is_imp());
    let first = imps.next()?;
    let closes = |f: &Formula| {
        let (a, b) = f.as_imp().expect("implication");
        b.is_bot() || s.right.contains(b) || s.left.contains(a)
    };
    let pick = std::iter::once(first).chain(imps).find(|f| closes(f)).unwrap_or(first);
    imp_left(s, pick).map(|app| app.premises)
}

/// Which axiom closes a classical sequent, in rule-rank order.
fn axiom_rule(s: &Sequent, logic: Logic) -> Option<RuleTag> {
    if s.left.top_vars().any(|v| s.right.contains(&Formula::var(v.clone()))) {
        return Some(RuleTag::IdP);
    }
    if s.left.contains(&Formula::bot()) {
        return Some(RuleTag::BotL);
    }
    if logic == Logic::GL && s.left.distinct().any(|f| f.is_boxed() && s.right.contains(f)) {
        return Some(RuleTag::IdB);
    }
    None
}

/// One-shot decision with a fresh prover.
pub fn decide(logic: Logic, s: &Sequent) -> Result<Decision, ContractError> {
    Prover::new(logic).decide(s)
}

/// Checks that every node instantiates a rule of the calculus and that the
/// premise conclusions match the rule's premises.
pub fn validate(logic: Logic, d: &Derivation) -> bool {
    let found: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
    let node_ok = if logic.is_classical() {
        valid_classical_node(logic, d.rule, &d.conclusion, &found)
    } else {
        match intuitionistic_applications(logic, &d.conclusion) {
            Ok(apps) => apps.iter().any(|app| {
                app.rule == d.rule
                    && app.premises.len() == found.len()
                    && app.premises.iter().zip(&found).all(|(a, b)| a == *b)
            }),
            Err(_) => false,
        }
    };
    node_ok && d.premises.iter().all(|p| validate(logic, p))
}

fn valid_classical_node(logic: Logic, rule: RuleTag, s: &Sequent, premises: &[&Sequent]) -> bool {
    let same =
        |expected: &[Sequent]| expected.len() == premises.len() && expected.iter().zip(premises).all(|(a, b)| a == *b);
    match rule {
        RuleTag::IdP => {
            premises.is_empty()
                && s.left
                    .distinct()
                    .any(|f| matches!(f.kind(), Kind::Var(_)) && s.right.contains(f))
        }
        RuleTag::BotL => premises.is_empty() && s.left.contains(&Formula::bot()),
        RuleTag::IdB => {
            logic == Logic::GL && premises.is_empty() && s.left.distinct().any(|f| f.is_boxed() && s.right.contains(f))
        }
        RuleTag::ImpR => s
            .right
            .distinct()
            .filter_map(|f| imp_right(s, f))
            .any(|app| same(&app.premises)),
        RuleTag::ImpL => s
            .left
            .distinct()
            .filter_map(|f| imp_left(s, f))
            .any(|app| same(&app.premises)),
        RuleTag::KR if logic == Logic::K => premises.len() == 1 && kr_premises(s).contains(premises[0]),
        RuleTag::GLR if logic == Logic::GL => premises.len() == 1 && glr_premises(s).contains(premises[0]),
        _ => false,
    }
}

/// `Γ ⇒ Δ` with every formula of `Γ` unboxed once (used by property tests of
/// the `□⁻¹` closure).
pub fn unbox_left(s: &Sequent) -> Sequent {
    Sequent::new(unbox(&s.left), s.right.clone())
}

/// True when the classical sequent is critical and closes by an axiom.
pub fn is_closed_leaf(logic: Logic, s: &Sequent) -> bool {
    is_critical(s) && axiom_rule(s, logic).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn proves(logic: Logic, s: &str) -> bool {
        let s = seq(s);
        let s = if logic.is_classical() { s.desugar_classical() } else { s };
        let d = decide(logic, &s).unwrap();
        if let Decision::Provable(der) = &d {
            assert!(validate(logic, der), "invalid derivation for {s:?}");
            assert_eq!(der.conclusion, s);
        }
        d.is_provable()
    }

    #[test]
    fn k_axiom() {
        assert!(proves(Logic::K, "=> [](p -> q) -> []p -> []q"));
        assert!(proves(Logic::GL, "=> [](p -> q) -> []p -> []q"));
    }

    #[test]
    fn gl_axiom() {
        assert!(proves(Logic::GL, "=> []([]p -> p) -> []p"));
        assert!(!proves(Logic::K, "=> []([]p -> p) -> []p"));
    }

    #[test]
    fn strong_lob() {
        assert!(proves(Logic::ISL, "=> ([]p -> p) -> p"));
        assert!(!proves(Logic::IL, "=> ([]p -> p) -> p"));
        assert!(proves(Logic::ISL, "p => []p"));
        assert!(proves(Logic::ISL, "=> [](p -> q) -> []p -> []q"));
    }

    #[test]
    fn unprovable_atom() {
        for logic in Logic::ALL {
            assert!(!proves(logic, "=> p"));
        }
    }

    #[test]
    fn intuitionistic_basics() {
        assert!(proves(Logic::IL, "=> p -> p"));
        assert!(proves(Logic::IL, "p & q => q & p"));
        assert!(proves(Logic::IL, "p | q => q | p"));
        assert!(!proves(Logic::IL, "=> p | ~p"));
        assert!(proves(Logic::IL, "=> ~~(p | ~p)"));
        assert!(!proves(Logic::IL, "=> ((p -> q) -> p) -> p"));
        assert!(proves(Logic::K, "=> ((p -> q) -> p) -> p"));
    }

    #[test]
    fn contract_errors() {
        assert!(decide(Logic::ISL, &seq("p => q, r")).is_err());
        assert!(decide(Logic::IL, &seq("p =>")).is_err());
        assert_eq!(decide(Logic::K, &seq("p & q => p")), Err(ContractError::NotDesugared));
    }

    #[test]
    fn validator_rejects_bad_premises() {
        let s = seq("p -> q => p -> q");
        let Decision::Provable(d) = decide(Logic::K, &s).unwrap() else {
            panic!("provable")
        };
        assert!(validate(Logic::K, &d));
        let mut broken = (*d).clone();
        let mut bad_child = (*broken.premises[0]).clone();
        bad_child.conclusion = seq("p => r");
        broken.premises[0] = Arc::new(bad_child);
        assert!(!validate(Logic::K, &broken));

        let leaf = Derivation {
            rule: RuleTag::IdP,
            conclusion: seq("p => p"),
            premises: vec![],
        };
        assert!(validate(Logic::K, &leaf));
        assert!(validate(Logic::ISL, &leaf));
        let idb = Derivation {
            rule: RuleTag::IdB,
            conclusion: seq("[]p => []p"),
            premises: vec![],
        };
        assert!(validate(Logic::GL, &idb));
        assert!(!validate(Logic::K, &idb));
    }

    #[test]
    fn proves_formula_desugars() {
        let mut k = Prover::new(Logic::K);
        assert!(k.proves_formula(&parse_formula("p & q -> q | p").unwrap()));
    }
}

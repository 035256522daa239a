//! Backward rule application for KS, GLS and G4iSLt.

use std::fmt;

use crate::error::ContractError;
use crate::formula::{Formula, Kind};
use crate::sequent::{unbox, FMultiset, Multiset, Sequent};
use crate::Logic;

/// Rule names across all calculi. Declaration order is the rank used to
/// order rule applications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    IdP,
    BotL,
    ImpR,
    ImpL,
    KR,
    GLR,
    IdB,
    AndL,
    AndR,
    OrL,
    OrR1,
    OrR2,
    AndImpL,
    OrImpL,
    AtomImpL,
    ImpImpL,
    BoxR,
    BoxImpL,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::IdP => "IdP",
            RuleTag::BotL => "BotL",
            RuleTag::ImpR => "ImpR",
            RuleTag::ImpL => "ImpL",
            RuleTag::KR => "KR",
            RuleTag::GLR => "GLR",
            RuleTag::IdB => "IdB",
            RuleTag::AndL => "AndL",
            RuleTag::AndR => "AndR",
            RuleTag::OrL => "OrL",
            RuleTag::OrR1 => "OrR1",
            RuleTag::OrR2 => "OrR2",
            RuleTag::AndImpL => "AndImpL",
            RuleTag::OrImpL => "OrImpL",
            RuleTag::AtomImpL => "AtomImpL",
            RuleTag::ImpImpL => "ImpImpL",
            RuleTag::BoxR => "BoxR",
            RuleTag::BoxImpL => "BoxImpL",
        }
    }

    /// Rules whose premises are provable whenever the conclusion is, so a
    /// failed attempt refutes the conclusion outright.
    pub fn is_invertible(self) -> bool {
        matches!(
            self,
            RuleTag::IdP
                | RuleTag::BotL
                | RuleTag::ImpR
                | RuleTag::ImpL
                | RuleTag::AndL
                | RuleTag::AndR
                | RuleTag::OrL
                | RuleTag::AndImpL
                | RuleTag::OrImpL
                | RuleTag::AtomImpL
        )
    }
}

impl RuleTag {
    /// Rules whose last premise `Γ, δ ⇒ χ` follows from the conclusion
    /// because `δ` implies the principal formula.
    pub fn last_premise_invertible(self) -> bool {
        matches!(self, RuleTag::ImpImpL | RuleTag::BoxImpL)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One backward application of a rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApp {
    pub rule: RuleTag,
    pub principal: Vec<Formula>,
    pub premises: Vec<Sequent>,
}

impl RuleApp {
    fn new(rule: RuleTag, principal: Vec<Formula>, premises: Vec<Sequent>) -> RuleApp {
        RuleApp {
            rule,
            principal,
            premises,
        }
    }
}

/// Classical (→R) on one occurrence of `imp` in the right side.
pub fn imp_right(s: &Sequent, imp: &Formula) -> Option<RuleApp> {
    let (a, b) = imp.as_imp()?;
    if !s.right.contains(imp) {
        return None;
    }
    let premise = Sequent::new(s.left.with(a.clone()), s.right.without(imp).with(b.clone()));
    Some(RuleApp::new(RuleTag::ImpR, vec![imp.clone()], vec![premise]))
}

/// Classical (→L) on one occurrence of `imp` in the left side.
pub fn imp_left(s: &Sequent, imp: &Formula) -> Option<RuleApp> {
    let (a, b) = imp.as_imp()?;
    if !s.left.contains(imp) {
        return None;
    }
    let rest = s.left.without(imp);
    let first = Sequent::new(rest.clone(), s.right.with(a.clone()));
    let second = Sequent::new(rest.with(b.clone()), s.right.clone());
    Some(RuleApp::new(RuleTag::ImpL, vec![imp.clone()], vec![first, second]))
}

/// The saturation step taken on a non-critical sequent: the canonically least
/// top-level implication, right side before left. `None` when `s` is critical.
pub fn saturation_step(s: &Sequent) -> Option<RuleApp> {
    if let Some(imp) = s.right.distinct().find(|f| f.is_imp()) {
        return imp_right(s, imp);
    }
    let imp = s.left.distinct().find(|f| f.is_imp())?;
    imp_left(s, imp)
}

/// `Can(s)`: the critical leaves reached by saturating with (→L)/(→R).
pub fn canopy(s: &Sequent) -> Multiset<Sequent> {
    let mut leaves = Multiset::new();
    let mut stack = vec![s.clone()];
    while let Some(cur) = stack.pop() {
        match saturation_step(&cur) {
            Some(app) => stack.extend(app.premises),
            None => leaves.insert(cur),
        }
    }
    leaves
}

fn boxed_right_args(s: &Sequent) -> impl Iterator<Item = &Formula> + '_ {
    s.right.iter_occurrences().filter_map(Formula::as_box)
}

/// `KP(s)`: one `Γ′ ⇒ ψ` per occurrence of `□ψ` on the right, where `□Γ′`
/// is the boxed part of the left side.
pub fn kr_premises(s: &Sequent) -> Multiset<Sequent> {
    let (_, inner) = s.left.split_boxed();
    boxed_right_args(s)
        .map(|psi| Sequent::new(inner.clone(), FMultiset::singleton(psi.clone())))
        .collect()
}

/// `GP(s)`: one `Γ′, □Γ′, □ψ ⇒ ψ` per occurrence of `□ψ` on the right.
pub fn glr_premises(s: &Sequent) -> Multiset<Sequent> {
    let (_, inner) = s.left.split_boxed();
    let boxed: FMultiset = inner.map(|f| Formula::boxed(f.clone()));
    let context = inner.sum(&boxed);
    boxed_right_args(s)
        .map(|psi| {
            Sequent::new(
                context.with(Formula::boxed(psi.clone())),
                FMultiset::singleton(psi.clone()),
            )
        })
        .collect()
}

/// Every backward-applicable instance of every G4iSLt rule, ordered by rule
/// rank and then by the canonical order of the principal formula.
pub fn isl_applications(s: &Sequent) -> Result<Vec<RuleApp>, ContractError> {
    applications(s, true)
}

/// The G4iP rules only (G4iSLt without (□R) and (□→L)).
pub fn g4ip_applications(s: &Sequent) -> Result<Vec<RuleApp>, ContractError> {
    applications(s, false)
}

pub fn intuitionistic_applications(logic: Logic, s: &Sequent) -> Result<Vec<RuleApp>, ContractError> {
    match logic {
        Logic::IL => g4ip_applications(s),
        Logic::ISL => isl_applications(s),
        other => Err(ContractError::Dialect(format!(
            "{} is not an intuitionistic calculus",
            other.calculus_name()
        ))),
    }
}

fn applications(s: &Sequent, modal: bool) -> Result<Vec<RuleApp>, ContractError> {
    let goal = s.goal()?.clone();
    let gamma = &s.left;
    let mut apps = Vec::new();
    let seq = |left: FMultiset, right: Formula| Sequent::intuitionistic(left, right);

    if let Kind::Var(v) = goal.kind() {
        if gamma.contains(&goal) {
            apps.push(RuleApp::new(RuleTag::IdP, vec![Formula::var(v.clone())], vec![]));
        }
    }
    let bot = Formula::bot();
    if gamma.contains(&bot) {
        apps.push(RuleApp::new(RuleTag::BotL, vec![bot], vec![]));
    }
    if let Kind::Imp(a, b) = goal.kind() {
        apps.push(RuleApp::new(
            RuleTag::ImpR,
            vec![goal.clone()],
            vec![seq(gamma.with(a.clone()), b.clone())],
        ));
    }
    for f in gamma.distinct() {
        if let Kind::And(a, b) = f.kind() {
            let rest = gamma.without(f);
            let mut left = rest.with(a.clone());
            left.insert(b.clone());
            apps.push(RuleApp::new(
                RuleTag::AndL,
                vec![f.clone()],
                vec![seq(left, goal.clone())],
            ));
        }
    }
    if let Kind::And(a, b) = goal.kind() {
        apps.push(RuleApp::new(
            RuleTag::AndR,
            vec![goal.clone()],
            vec![seq(gamma.clone(), a.clone()), seq(gamma.clone(), b.clone())],
        ));
    }
    for f in gamma.distinct() {
        if let Kind::Or(a, b) = f.kind() {
            let rest = gamma.without(f);
            apps.push(RuleApp::new(
                RuleTag::OrL,
                vec![f.clone()],
                vec![
                    seq(rest.with(a.clone()), goal.clone()),
                    seq(rest.with(b.clone()), goal.clone()),
                ],
            ));
        }
    }
    if let Kind::Or(a, b) = goal.kind() {
        apps.push(RuleApp::new(
            RuleTag::OrR1,
            vec![goal.clone()],
            vec![seq(gamma.clone(), a.clone())],
        ));
        apps.push(RuleApp::new(
            RuleTag::OrR2,
            vec![goal.clone()],
            vec![seq(gamma.clone(), b.clone())],
        ));
    }

    // Left implication rules, grouped by tag.
    let mut and_imp = Vec::new();
    let mut or_imp = Vec::new();
    let mut atom_imp = Vec::new();
    let mut imp_imp = Vec::new();
    let mut box_imp = Vec::new();
    for f in gamma.distinct() {
        let Some((ante, cons)) = f.as_imp() else {
            continue;
        };
        let rest = gamma.without(f);
        match ante.kind() {
            Kind::And(d1, d2) => {
                let curried = Formula::imp(d1.clone(), Formula::imp(d2.clone(), cons.clone()));
                and_imp.push(RuleApp::new(
                    RuleTag::AndImpL,
                    vec![f.clone()],
                    vec![seq(rest.with(curried), goal.clone())],
                ));
            }
            Kind::Or(d1, d2) => {
                let mut left = rest.with(Formula::imp(d1.clone(), cons.clone()));
                left.insert(Formula::imp(d2.clone(), cons.clone()));
                or_imp.push(RuleApp::new(
                    RuleTag::OrImpL,
                    vec![f.clone()],
                    vec![seq(left, goal.clone())],
                ));
            }
            Kind::Var(_) if rest.contains(ante) => {
                atom_imp.push(RuleApp::new(
                    RuleTag::AtomImpL,
                    vec![ante.clone(), f.clone()],
                    vec![seq(rest.with(cons.clone()), goal.clone())],
                ));
            }
            Kind::Imp(_, d2) => {
                let shortened = Formula::imp(d2.clone(), cons.clone());
                imp_imp.push(RuleApp::new(
                    RuleTag::ImpImpL,
                    vec![f.clone()],
                    vec![
                        seq(rest.with(shortened), ante.clone()),
                        seq(rest.with(cons.clone()), goal.clone()),
                    ],
                ));
            }
            Kind::Box(d1) if modal => {
                let mut left = unbox(&rest);
                left.insert(ante.clone());
                left.insert(cons.clone());
                box_imp.push(RuleApp::new(
                    RuleTag::BoxImpL,
                    vec![f.clone()],
                    vec![seq(left, d1.clone()), seq(rest.with(cons.clone()), goal.clone())],
                ));
            }
            _ => {}
        }
    }
    apps.extend(and_imp);
    apps.extend(or_imp);
    apps.extend(atom_imp);
    apps.extend(imp_imp);
    if modal {
        if let Kind::Box(a) = goal.kind() {
            apps.push(RuleApp::new(
                RuleTag::BoxR,
                vec![goal.clone()],
                vec![seq(unbox(gamma).with(goal.clone()), a.clone())],
            ));
        }
    }
    apps.extend(box_imp);
    Ok(apps)
}

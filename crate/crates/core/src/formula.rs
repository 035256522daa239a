//! Modal formulas shared by the classical and intuitionistic languages.
//!
//! A [`Formula`] is an immutable, reference-counted tree over `⊥`, variables,
//! `∧`, `∨`, `→` and `□`. Negation, `⊤` and `◇` are never nodes of their own:
//! they are built by the sugar constructors ([`Formula::neg`], [`Formula::top`],
//! [`Formula::dia`]) and recognised again by the printer.
//!
//! Every node caches its weight, so the canonical order (weight first) is
//! cheap to evaluate even on large interpolants.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Which of the two object languages a pipeline works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// `∧`/`∨` are abbreviations for implication patterns.
    Classical,
    /// `∧`/`∨` are primitive connectives.
    Intuitionistic,
}

/// Propositional variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Builds a variable, returning `None` unless `name` matches
    /// `[a-z][a-zA-Z0-9_]*`.
    pub fn new(name: &str) -> Option<Var> {
        if is_identifier(name) {
            Some(Var(Arc::from(name)))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The node shapes of a formula tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Bot,
    Var(Var),
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Box(Formula),
}

impl Kind {
    fn rank(&self) -> u8 {
        match self {
            Kind::Bot => 0,
            Kind::Var(_) => 1,
            Kind::And(..) => 2,
            Kind::Or(..) => 3,
            Kind::Imp(..) => 4,
            Kind::Box(_) => 5,
        }
    }
}

struct Node {
    kind: Kind,
    weight: u32,
    digest: u64,
}

/// An immutable modal formula.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn make(kind: Kind) -> Formula {
        let weight = match &kind {
            Kind::Bot | Kind::Var(_) => 1,
            Kind::And(a, b) => 2 + a.weight() + b.weight(),
            Kind::Or(a, b) => 3 + a.weight() + b.weight(),
            Kind::Imp(a, b) => 1 + a.weight() + b.weight(),
            Kind::Box(a) => 1 + a.weight(),
        };
        let mut h = DefaultHasher::new();
        kind.rank().hash(&mut h);
        match &kind {
            Kind::Bot => {}
            Kind::Var(v) => v.hash(&mut h),
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.0.digest.hash(&mut h);
                b.0.digest.hash(&mut h);
            }
            Kind::Box(a) => a.0.digest.hash(&mut h),
        }
        let digest = h.finish();
        Formula(Arc::new(Node { kind, weight, digest }))
    }

    pub fn bot() -> Formula {
        Formula::make(Kind::Bot)
    }

    pub fn var(v: Var) -> Formula {
        Formula::make(Kind::Var(v))
    }

    /// Panics if `name` is not a well-formed identifier; meant for literals
    /// in code and tests.
    pub fn atom(name: &str) -> Formula {
        Formula::var(Var::new(name).unwrap_or_else(|| panic!("bad variable name {name:?}")))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Imp(a, b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::make(Kind::Box(a))
    }

    /// `¬φ := φ → ⊥`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::bot())
    }

    /// `⊤ := ⊥ → ⊥`
    pub fn top() -> Formula {
        Formula::imp(Formula::bot(), Formula::bot())
    }

    /// `◇φ := □(φ → ⊥) → ⊥`
    pub fn dia(a: Formula) -> Formula {
        Formula::neg(Formula::boxed(Formula::neg(a)))
    }

    /// Right-nested conjunction; `⊤` for no arguments, the argument itself for one.
    pub fn big_and<I>(items: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::top(),
            Some(last) => it.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Right-nested disjunction; `⊥` for no arguments, the argument itself for one.
    pub fn big_or<I>(items: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::bot(),
            Some(last) => it.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Symbol-weighted size: `∧` counts 2, `∨` counts 3, every other symbol 1.
    pub fn weight(&self) -> u32 {
        self.0.weight
    }

    pub fn is_bot(&self) -> bool {
        matches!(self.kind(), Kind::Bot)
    }

    pub fn is_top(&self) -> bool {
        matches!(self.kind(), Kind::Imp(a, b) if a.is_bot() && b.is_bot())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.kind() {
            Kind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self, v: &Var) -> bool {
        self.as_var() == Some(v)
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self.kind() {
            Kind::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<&Formula> {
        match self.kind() {
            Kind::Box(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_imp(&self) -> bool {
        matches!(self.kind(), Kind::Imp(..))
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self.kind(), Kind::Box(_))
    }

    /// `φ` when this formula is `φ → ⊥`.
    pub fn as_neg(&self) -> Option<&Formula> {
        match self.kind() {
            Kind::Imp(a, b) if b.is_bot() => Some(a),
            _ => None,
        }
    }

    /// `φ` when this formula is the `◇φ` pattern `□(φ → ⊥) → ⊥`.
    pub fn as_dia(&self) -> Option<&Formula> {
        self.as_neg()?.as_box()?.as_neg()
    }

    /// Strips one box; the formula itself when it is not boxed.
    pub fn unbox(&self) -> Formula {
        match self.kind() {
            Kind::Box(a) => a.clone(),
            _ => self.clone(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self.kind() {
            Kind::Bot => {}
            Kind::Var(v) => {
                out.insert(v.clone());
            }
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Kind::Box(a) => a.collect_vars(out),
        }
    }

    pub fn mentions(&self, v: &Var) -> bool {
        match self.kind() {
            Kind::Bot => false,
            Kind::Var(w) => w == v,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.mentions(v) || b.mentions(v),
            Kind::Box(a) => a.mentions(v),
        }
    }

    /// All subtrees, the formula itself included.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self.kind() {
            Kind::Bot | Kind::Var(_) => {}
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Kind::Box(a) => a.collect_subformulas(out),
        }
    }

    /// Number of `→` symbols.
    pub fn imp_count(&self) -> usize {
        match self.kind() {
            Kind::Bot | Kind::Var(_) => 0,
            Kind::And(a, b) | Kind::Or(a, b) => a.imp_count() + b.imp_count(),
            Kind::Imp(a, b) => 1 + a.imp_count() + b.imp_count(),
            Kind::Box(a) => a.imp_count(),
        }
    }

    /// Total number of symbols, each counted once.
    pub fn size(&self) -> usize {
        match self.kind() {
            Kind::Bot | Kind::Var(_) => 1,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => 1 + a.size() + b.size(),
            Kind::Box(a) => 1 + a.size(),
        }
    }

    /// Nesting depth of `□`.
    pub fn modal_depth(&self) -> usize {
        match self.kind() {
            Kind::Bot | Kind::Var(_) => 0,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.modal_depth().max(b.modal_depth()),
            Kind::Box(a) => 1 + a.modal_depth(),
        }
    }

    pub fn has_box(&self) -> bool {
        match self.kind() {
            Kind::Bot | Kind::Var(_) => false,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.has_box() || b.has_box(),
            Kind::Box(_) => true,
        }
    }

    /// True when no `∧`/`∨` node occurs.
    pub fn is_classical_core(&self) -> bool {
        match self.kind() {
            Kind::Bot | Kind::Var(_) => true,
            Kind::And(..) | Kind::Or(..) => false,
            Kind::Imp(a, b) => a.is_classical_core() && b.is_classical_core(),
            Kind::Box(a) => a.is_classical_core(),
        }
    }

    /// Rewrites every `∧`/`∨` into its classical implication pattern, bottom-up.
    pub fn desugar_classical(&self) -> Formula {
        if self.is_classical_core() {
            return self.clone();
        }
        match self.kind() {
            Kind::Bot | Kind::Var(_) => self.clone(),
            // φ ∧ ψ := (φ → (ψ → ⊥)) → ⊥
            Kind::And(a, b) => Formula::neg(Formula::imp(a.desugar_classical(), Formula::neg(b.desugar_classical()))),
            // φ ∨ ψ := (φ → ⊥) → ψ
            Kind::Or(a, b) => Formula::imp(Formula::neg(a.desugar_classical()), b.desugar_classical()),
            Kind::Imp(a, b) => Formula::imp(a.desugar_classical(), b.desugar_classical()),
            Kind::Box(a) => Formula::boxed(a.desugar_classical()),
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.digest == other.0.digest && self.weight() == other.weight() && self.kind() == other.kind())
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.digest)
    }
}

/// Canonical order: weight, then node rank `⊥ < var < ∧ < ∨ < → < □`, then
/// variable name or children left to right.
impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.kind().rank().cmp(&other.kind().rank()))
            .then_with(|| match (self.kind(), other.kind()) {
                (Kind::Var(a), Kind::Var(b)) => a.cmp(b),
                (Kind::And(a1, b1), Kind::And(a2, b2))
                | (Kind::Or(a1, b1), Kind::Or(a2, b2))
                | (Kind::Imp(a1, b1), Kind::Imp(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
                (Kind::Box(a), Kind::Box(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self, crate::syntax::Style::Ascii))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self, crate::syntax::Style::Resugared))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn weights() {
        assert_eq!(p().weight(), 1);
        assert_eq!(Formula::bot().weight(), 1);
        assert_eq!(Formula::and(p(), q()).weight(), 4);
        assert_eq!(Formula::or(p(), q()).weight(), 5);
        assert_eq!(Formula::boxed(Formula::bot()).weight(), 2);
    }

    #[test]
    fn variables() {
        assert!(Formula::bot().vars().is_empty());
        let f = Formula::imp(p(), Formula::boxed(q()));
        let names: Vec<_> = f.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["p", "q"]);
        assert_eq!(Formula::and(p(), p()).vars().len(), 1);
    }

    #[test]
    fn subformula_sets() {
        assert_eq!(p().subformulas(), BTreeSet::from([p()]));
        let bp = Formula::boxed(p());
        assert_eq!(bp.subformulas(), BTreeSet::from([bp.clone(), p()]));
        let f = Formula::imp(bp.clone(), p());
        assert_eq!(f.subformulas(), BTreeSet::from([f.clone(), bp, p()]));
    }

    #[test]
    fn sugar_constructors() {
        assert_eq!(Formula::big_and(Vec::new()), Formula::top());
        assert_eq!(Formula::big_or(Vec::new()), Formula::bot());
        assert_eq!(Formula::big_or(vec![q()]), q());
        assert_eq!(
            Formula::big_or(vec![p(), q(), Formula::bot()]),
            Formula::or(p(), Formula::or(q(), Formula::bot()))
        );
        assert_eq!(
            Formula::and(p(), q()).desugar_classical(),
            Formula::imp(Formula::imp(p(), Formula::imp(q(), Formula::bot())), Formula::bot())
        );
        assert_eq!(
            Formula::or(p(), q()).desugar_classical(),
            Formula::imp(Formula::imp(p(), Formula::bot()), q())
        );
        assert_eq!(
            Formula::dia(Formula::bot()),
            Formula::imp(
                Formula::boxed(Formula::imp(Formula::bot(), Formula::bot())),
                Formula::bot()
            )
        );
        assert_eq!(Formula::dia(p()).as_dia(), Some(&p()));
        assert!(Formula::top().is_top());
    }

    #[test]
    fn identifiers() {
        assert!(Var::new("p").is_some());
        assert!(Var::new("x_1Y").is_some());
        assert!(Var::new("P").is_none());
        assert!(Var::new("").is_none());
        assert!(Var::new("1p").is_none());
    }

    #[test]
    fn canonical_order_basics() {
        assert!(Formula::bot() < p());
        assert!(p() < q());
        assert!(q() < Formula::boxed(Formula::bot()));
        assert!(Formula::and(p(), q()) < Formula::boxed(Formula::boxed(Formula::boxed(p()))));
    }
}

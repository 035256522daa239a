//! Counted multisets, sequents, and the termination measures used by the
//! calculi and interpolant constructions.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::ContractError;
use crate::formula::{Formula, Kind, Var};
use crate::syntax::{print_sequent, Style};
use crate::Logic;

/// A finite multiset with canonical (sorted) iteration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, usize>,
    len: usize,
}

pub type FMultiset = Multiset<Formula>;

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            counts: BTreeMap::new(),
            len: 0,
        }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        let mut m = Self::new();
        m.insert(x);
        m
    }

    pub fn insert(&mut self, x: T) {
        self.insert_n(x, 1);
    }

    pub fn insert_n(&mut self, x: T, n: usize) {
        if n > 0 {
            *self.counts.entry(x).or_insert(0) += n;
            self.len += n;
        }
    }

    /// Removes one occurrence; false if there was none.
    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.counts.get_mut(x) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(x);
                }
                self.len -= 1;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, x: &T) -> usize {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.counts.contains_key(x)
    }

    /// Number of occurrences.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Distinct elements with their counts, in canonical order.
    pub fn iter(&self) -> btree_map::Iter<'_, T, usize> {
        self.counts.iter()
    }

    pub fn distinct(&self) -> impl DoubleEndedIterator<Item = &T> + '_ {
        self.counts.keys()
    }

    /// Every occurrence, repeated according to its count.
    pub fn iter_occurrences(&self) -> impl DoubleEndedIterator<Item = &T> + '_ {
        self.counts.iter().flat_map(|(x, &n)| std::iter::repeat_n(x, n))
    }

    pub fn with(&self, x: T) -> Self {
        let mut m = self.clone();
        m.insert(x);
        m
    }

    /// This multiset with one occurrence of `x` removed.
    pub fn without(&self, x: &T) -> Self {
        let mut m = self.clone();
        m.remove_one(x);
        m
    }

    /// Multiset sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (x, &n) in other.iter() {
            m.insert_n(x.clone(), n);
        }
        m
    }

    /// Every count set to one.
    pub fn dedup(&self) -> Self {
        self.distinct().cloned().collect()
    }

    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> Multiset<U> {
        let mut m = Multiset::new();
        for (x, &n) in self.iter() {
            m.insert_n(f(x), n);
        }
        m
    }

    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.iter().all(|(x, &n)| other.count(x) >= n)
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

impl FMultiset {
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for f in self.distinct() {
            f.collect_vars(&mut out);
        }
        out
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.distinct().any(|f| f.mentions(v))
    }

    pub fn has_imp(&self) -> bool {
        self.distinct().any(Formula::is_imp)
    }

    /// Total weight of all occurrences.
    pub fn weight(&self) -> u64 {
        self.iter().map(|(f, &n)| f.weight() as u64 * n as u64).sum()
    }

    /// Splits into (non-boxed occurrences, arguments of the boxed occurrences).
    pub fn split_boxed(&self) -> (FMultiset, FMultiset) {
        let mut plain = FMultiset::new();
        let mut boxed = FMultiset::new();
        for (f, &n) in self.iter() {
            match f.as_box() {
                Some(a) => boxed.insert_n(a.clone(), n),
                None => plain.insert_n(f.clone(), n),
            }
        }
        (plain, boxed)
    }

    /// Distinct variables occurring as top-level members.
    pub fn top_vars(&self) -> impl Iterator<Item = &Var> + '_ {
        self.distinct().filter_map(Formula::as_var)
    }
}

/// Elementwise `□⁻¹`, preserving multiplicities.
pub fn unbox(m: &FMultiset) -> FMultiset {
    m.map(Formula::unbox)
}

/// `Γ ⇒ Δ`. Intuitionistic operations additionally require `|Δ| = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequent {
    pub left: FMultiset,
    pub right: FMultiset,
}

impl Sequent {
    pub fn new(left: FMultiset, right: FMultiset) -> Sequent {
        Sequent { left, right }
    }

    pub fn from_parts<L, R>(left: L, right: R) -> Sequent
    where
        L: IntoIterator<Item = Formula>,
        R: IntoIterator<Item = Formula>,
    {
        Sequent::new(left.into_iter().collect(), right.into_iter().collect())
    }

    /// `Γ ⇒ φ`.
    pub fn intuitionistic(left: FMultiset, right: Formula) -> Sequent {
        Sequent::new(left, FMultiset::singleton(right))
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// The single right formula, or a contract error.
    pub fn goal(&self) -> Result<&Formula, ContractError> {
        if self.right.len() == 1 {
            Ok(self.right.distinct().next().expect("one element"))
        } else {
            Err(ContractError::RightNotSingleton(self.right.len()))
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.left.distinct().chain(self.right.distinct())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.left.vars();
        out.extend(self.right.vars());
        out
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.left.mentions(v) || self.right.mentions(v)
    }

    pub fn is_classical_core(&self) -> bool {
        self.formulas().all(Formula::is_classical_core)
    }

    pub fn desugar_classical(&self) -> Sequent {
        Sequent::new(
            self.left.map(Formula::desugar_classical),
            self.right.map(Formula::desugar_classical),
        )
    }

    /// Total number of symbols.
    pub fn size(&self) -> usize {
        self.left
            .iter()
            .chain(self.right.iter())
            .map(|(f, &n)| f.size() * n)
            .sum()
    }

    pub fn modal_depth(&self) -> usize {
        self.formulas().map(Formula::modal_depth).max().unwrap_or(0)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sequent(self, Style::Ascii))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sequent(self, Style::Resugared))
    }
}

/// Full contraction: every count set to one on both sides.
pub fn contract(s: &Sequent) -> Sequent {
    Sequent::new(s.left.dedup(), s.right.dedup())
}

/// No top-level implication on either side.
pub fn is_critical(s: &Sequent) -> bool {
    !s.left.has_imp() && !s.right.has_imp()
}

/// Axiom check without the criticality precondition: `⊥` on the left, a
/// shared variable, or (for GL) a shared boxed formula.
pub(crate) fn closes_by_axiom(s: &Sequent, logic: Logic) -> bool {
    if s.left.contains(&Formula::bot()) {
        return true;
    }
    s.left.distinct().any(|f| {
        let shared = matches!(f.kind(), Kind::Var(_)) || (logic == Logic::GL && f.is_boxed());
        shared && s.right.contains(f)
    })
}

/// Initiality of a critical sequent in KS (`logic = K`) or GLS (`logic = GL`,
/// where a boxed formula on both sides also closes the sequent).
pub fn is_initial(s: &Sequent, logic: Logic) -> Result<bool, ContractError> {
    if !logic.is_classical() {
        return Err(ContractError::Dialect(format!(
            "initiality is defined for KS and GLS, not {}",
            logic.calculus_name()
        )));
    }
    if !is_critical(s) {
        return Err(ContractError::NotCritical);
    }
    Ok(closes_by_axiom(s, logic))
}

/// Termination measure of the GLS strategy. The derived order is
/// lexicographic with `usable_boxes` first: (→L)/(→R) lower `imp_count` and
/// never raise `usable_boxes`, while (GLR) lowers `usable_boxes` but may
/// duplicate implications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta {
    pub usable_boxes: usize,
    pub imp_count: usize,
}

/// Boxed subformulas of the sequent that are not boxed members of the left side.
pub fn usable_boxes(s: &Sequent) -> usize {
    let mut subs = BTreeSet::new();
    for f in s.formulas() {
        f.collect_subformulas(&mut subs);
    }
    subs.iter().filter(|f| f.is_boxed() && !s.left.contains(f)).count()
}

pub fn theta(s: &Sequent) -> Theta {
    let imp_count = s
        .left
        .iter()
        .chain(s.right.iter())
        .map(|(f, &n)| f.imp_count() * n)
        .sum();
    Theta {
        usable_boxes: usable_boxes(s),
        imp_count,
    }
}

pub fn theta_less(a: Theta, b: Theta) -> bool {
    a < b
}

/// Dershowitz–Manna extension of `φ ≺ ψ iff weight(φ) < weight(ψ)`:
/// `a < b` iff `a ≠ b` and every element `a` has in excess is dominated by
/// some element `b` has in excess.
pub fn weight_ms_less(a: &FMultiset, b: &FMultiset) -> bool {
    if a == b {
        return false;
    }
    let b_excess: Vec<u32> = b
        .iter()
        .filter(|(x, &n)| n > a.count(x))
        .map(|(x, _)| x.weight())
        .collect();
    let heaviest = b_excess.iter().copied().max();
    a.iter()
        .filter(|(x, &n)| n > b.count(x))
        .all(|(x, _)| heaviest.is_some_and(|w| x.weight() < w))
}

/// `Γ ⊎ {φ, φ}` for `Γ ⇒ φ`.
pub fn isl_measure(s: &Sequent) -> Result<FMultiset, ContractError> {
    let goal = s.goal()?;
    let mut m = s.left.clone();
    m.insert_n(goal.clone(), 2);
    Ok(m)
}

/// The sequent order used for G4iSLt: compare `Γ, φ, φ` under [`weight_ms_less`].
pub fn isl_less(a: &Sequent, b: &Sequent) -> Result<bool, ContractError> {
    Ok(weight_ms_less(&isl_measure(a)?, &isl_measure(b)?))
}

/// Measure of an interpolant call: `E(Γ)` is measured by `Γ`, `A(Γ ⇒ φ)` by
/// `Γ ⊎ {φ, φ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CallMeasure {
    E(FMultiset),
    A(Sequent),
}

impl CallMeasure {
    pub fn multiset(&self) -> FMultiset {
        match self {
            CallMeasure::E(g) => g.clone(),
            CallMeasure::A(s) => isl_measure(s).expect("A-calls carry one goal"),
        }
    }

    pub fn less(&self, other: &CallMeasure) -> bool {
        weight_ms_less(&self.multiset(), &other.multiset())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }
    fn ms(items: &[&str]) -> FMultiset {
        items.iter().map(|s| f(s)).collect()
    }
    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn unboxing() {
        assert_eq!(unbox(&ms(&["[]p", "q"])), ms(&["p", "q"]));
        assert_eq!(unbox(&ms(&[])), ms(&[]));
        let m = unbox(&ms(&["[]p", "p"]));
        assert_eq!(m.count(&f("p")), 2);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn contraction() {
        assert_eq!(contract(&seq("p->q, p->q =>")), seq("p->q =>"));
        let s = seq("p, []q => r");
        assert_eq!(contract(&s), s);
        let s = seq("p, p, q => q, q");
        assert_eq!(contract(&contract(&s)), contract(&s));
    }

    #[test]
    fn criticality() {
        assert!(is_critical(&seq("p => q")));
        assert!(!is_critical(&seq("p -> q =>")));
        assert!(is_critical(&seq("[](p -> q) =>")));
    }

    #[test]
    fn initiality() {
        assert!(is_initial(&seq("F, p =>"), Logic::K).unwrap());
        assert!(is_initial(&seq("[]p => []p"), Logic::GL).unwrap());
        assert!(!is_initial(&seq("[]p => []p"), Logic::K).unwrap());
        assert!(!is_initial(&seq("p => q"), Logic::K).unwrap());
        assert!(!is_initial(&seq("p => q"), Logic::GL).unwrap());
        assert_eq!(
            is_initial(&seq("p -> q => p"), Logic::K),
            Err(ContractError::NotCritical)
        );
        assert!(is_initial(&seq("p => p"), Logic::ISL).is_err());
    }

    #[test]
    fn theta_values() {
        let t = |s: &str| theta(&seq(s));
        assert_eq!(
            t("[]p => []p"),
            Theta {
                usable_boxes: 0,
                imp_count: 0
            }
        );
        assert_eq!(
            t("=> []p"),
            Theta {
                usable_boxes: 1,
                imp_count: 0
            }
        );
        assert_eq!(
            t("p -> q => [][]r"),
            Theta {
                usable_boxes: 2,
                imp_count: 1
            }
        );
        assert_eq!(
            usable_boxes(&seq("[]p, []p => []p, q")),
            usable_boxes(&contract(&seq("[]p, []p => []p, q")))
        );
    }

    #[test]
    fn theta_lexicographic() {
        let lo = Theta {
            usable_boxes: 0,
            imp_count: 1,
        };
        let hi = Theta {
            usable_boxes: 1,
            imp_count: 0,
        };
        assert!(theta_less(lo, hi));
        assert!(!theta_less(hi, lo));
        assert!(!theta_less(lo, lo));
    }

    #[test]
    fn dershowitz_manna() {
        // Without doubling the right side, (□R) is not a descent.
        assert!(!weight_ms_less(&ms(&["[]F", "F"]), &ms(&["[]F"])));
        assert!(weight_ms_less(&ms(&["F", "F", "F"]), &ms(&["[]F"])));
        assert!(!weight_ms_less(&ms(&["p"]), &ms(&["q"])));
        assert!(weight_ms_less(&ms(&[]), &ms(&["q"])));
        assert!(!weight_ms_less(&ms(&["q"]), &ms(&["q"])));
    }

    #[test]
    fn isl_sequent_order() {
        let premise = Sequent::intuitionistic(ms(&["[]F"]), f("F"));
        let conclusion = seq("=> []F");
        assert!(isl_less(&premise, &conclusion).unwrap());
        assert!(!isl_less(&conclusion, &premise).unwrap());
        assert_eq!(
            isl_less(&seq("=> p, q"), &conclusion),
            Err(ContractError::RightNotSingleton(2))
        );
    }
}

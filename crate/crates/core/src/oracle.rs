//! Brute-force checking machinery: exhaustive formula and sequent
//! enumeration, bounded Kripke tree semantics for K and GL, and the
//! uniformity harness that pits interpolants against the provers.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::formula::{Dialect, Formula, Kind, Var};
use crate::interpolation::{Interpolator, Quantifier};
use crate::provers::Prover;
use crate::sequent::{FMultiset, Sequent};
use crate::syntax::{print_formula, Style};
use crate::Logic;

/// All formulas over `vars` with weight at most `max_weight`, sorted in the
/// canonical order. The classical dialect only uses `⊥`, variables, `→` and
/// `□`; the intuitionistic one adds `∧` and `∨`.
pub fn enumerate_formulas(vars: &[Var], max_weight: u32, dialect: Dialect) -> Vec<Formula> {
    let max = max_weight as usize;
    let mut by_weight: Vec<Vec<Formula>> = vec![Vec::new(); max + 1];
    if max >= 1 {
        by_weight[1].push(Formula::bot());
        let distinct: BTreeSet<&Var> = vars.iter().collect();
        by_weight[1].extend(distinct.into_iter().map(|v| Formula::var(v.clone())));
    }
    for w in 2..=max {
        let mut level = Vec::new();
        level.extend(by_weight[w - 1].iter().map(|f| Formula::boxed(f.clone())));
        let mut binary = |extra: usize, make: fn(Formula, Formula) -> Formula| {
            if w < extra + 2 {
                return;
            }
            for wa in 1..=w - extra - 1 {
                let wb = w - extra - wa;
                for a in &by_weight[wa] {
                    for b in &by_weight[wb] {
                        level.push(make(a.clone(), b.clone()));
                    }
                }
            }
        };
        binary(1, Formula::imp);
        if dialect == Dialect::Intuitionistic {
            binary(2, Formula::and);
            binary(3, Formula::or);
        }
        by_weight[w] = level;
    }
    let mut all: Vec<Formula> = by_weight.into_iter().flatten().collect();
    all.sort();
    all
}

/// Every sequent whose left side is a multiset of at most `max_left` of the
/// given formulas. The right side is empty or a single formula when
/// `allow_empty_right`, otherwise exactly one formula.
pub fn enumerate_sequents(formulas: &[Formula], max_left: usize, allow_empty_right: bool) -> Vec<Sequent> {
    let mut lefts: Vec<FMultiset> = vec![FMultiset::new()];
    let mut frontier: Vec<(FMultiset, usize)> = vec![(FMultiset::new(), 0)];
    for _ in 0..max_left {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, f) in formulas.iter().enumerate().skip(*start) {
                let grown = m.with(f.clone());
                lefts.push(grown.clone());
                next.push((grown, i));
            }
        }
        frontier = next;
    }
    let mut rights: Vec<FMultiset> = formulas.iter().map(|f| FMultiset::singleton(f.clone())).collect();
    if allow_empty_right {
        rights.insert(0, FMultiset::new());
    }
    lefts
        .iter()
        .flat_map(|l| rights.iter().map(move |r| Sequent::new(l.clone(), r.clone())))
        .collect()
}

/// A random formula of weight at most `max_weight` (at least 1) over `vars`.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[Var], max_weight: u32, dialect: Dialect) -> Formula {
    let leaf = |rng: &mut R| {
        let i = rng.gen_range(0..=vars.len());
        if i == vars.len() {
            Formula::bot()
        } else {
            Formula::var(vars[i].clone())
        }
    };
    if max_weight <= 1 {
        return leaf(rng);
    }
    let ops: &[u32] = if dialect == Dialect::Intuitionistic {
        &[0, 1, 2, 3, 4]
    } else {
        &[0, 1, 4]
    };
    match ops[rng.gen_range(0..ops.len())] {
        0 => leaf(rng),
        4 => Formula::boxed(random_formula(rng, vars, max_weight - 1, dialect)),
        extra if max_weight >= extra + 2 => {
            let budget = max_weight - extra;
            let wa = rng.gen_range(1..budget);
            let a = random_formula(rng, vars, wa, dialect);
            let b = random_formula(rng, vars, budget - a.weight(), dialect);
            match extra {
                1 => Formula::imp(a, b),
                2 => Formula::and(a, b),
                _ => Formula::or(a, b),
            }
        }
        _ => leaf(rng),
    }
}

/// A random sequent with up to `max_left` left formulas and exactly one goal.
pub fn random_sequent<R: Rng>(
    rng: &mut R,
    vars: &[Var],
    max_weight: u32,
    max_left: usize,
    dialect: Dialect,
) -> Sequent {
    let n = rng.gen_range(0..=max_left);
    let left: FMultiset = (0..n).map(|_| random_formula(rng, vars, max_weight, dialect)).collect();
    let goal = random_formula(rng, vars, max_weight, dialect);
    Sequent::intuitionistic(left, goal)
}

/// A finite rooted tree model. Node 0 is the root; valuations list the
/// variables true at each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeTree {
    pub vars: Vec<Var>,
    pub valuation: Vec<BTreeSet<Var>>,
    pub children: Vec<Vec<usize>>,
}

impl KripkeTree {
    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    fn descendants(&self, n: usize, out: &mut Vec<usize>) {
        for &c in &self.children[n] {
            out.push(c);
            self.descendants(c, out);
        }
    }

    /// Successors of `n`: children for K, all strict descendants for GL.
    pub fn successors(&self, logic: Logic, n: usize) -> Vec<usize> {
        if logic == Logic::GL {
            let mut out = Vec::new();
            self.descendants(n, &mut out);
            out
        } else {
            self.children[n].clone()
        }
    }

    pub fn holds(&self, logic: Logic, n: usize, f: &Formula) -> bool {
        match f.kind() {
            Kind::Bot => false,
            Kind::Var(v) => self.valuation[n].contains(v),
            Kind::And(a, b) => self.holds(logic, n, a) && self.holds(logic, n, b),
            Kind::Or(a, b) => self.holds(logic, n, a) || self.holds(logic, n, b),
            Kind::Imp(a, b) => !self.holds(logic, n, a) || self.holds(logic, n, b),
            Kind::Box(a) => self.successors(logic, n).into_iter().all(|m| self.holds(logic, m, a)),
        }
    }

    /// All of the left side true and all of the right side false at `n`.
    pub fn refutes(&self, logic: Logic, n: usize, s: &Sequent) -> bool {
        s.left.distinct().all(|f| self.holds(logic, n, f)) && s.right.distinct().all(|f| !self.holds(logic, n, f))
    }
}

impl fmt::Display for KripkeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn node(t: &KripkeTree, n: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let vals: Vec<&str> = t.valuation[n].iter().map(Var::as_str).collect();
            write!(f, "{n}{{{}}}", vals.join(","))?;
            if !t.children[n].is_empty() {
                f.write_str("[")?;
                for (i, &c) in t.children[n].iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    node(t, c, f)?;
                }
                f.write_str("]")?;
            }
            Ok(())
        }
        if self.is_empty() {
            return f.write_str("<empty>");
        }
        node(self, 0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticResult {
    NoCounterexampleFound,
    Countermodel(KripkeTree, usize),
}

impl SemanticResult {
    pub fn is_countermodel(&self) -> bool {
        matches!(self, SemanticResult::Countermodel(..))
    }
}

/// Tree shape with a valuation bitmask per node; children are kept in
/// non-decreasing index order so each unordered tree appears once.
struct Shape {
    val: u32,
    children: Vec<Arc<Shape>>,
}

fn shapes(depth: usize, branching: usize, nvals: u32) -> Vec<Arc<Shape>> {
    let subtrees: Vec<Arc<Shape>> = if depth == 0 {
        Vec::new()
    } else {
        shapes(depth - 1, branching, nvals)
    };
    let mut child_lists: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..branching {
        let mut next = Vec::new();
        for list in &frontier {
            let start = list.last().copied().unwrap_or(0);
            for i in start..subtrees.len() {
                let mut grown = list.clone();
                grown.push(i);
                child_lists.push(grown.clone());
                next.push(grown);
            }
        }
        frontier = next;
    }
    let mut out = Vec::new();
    for val in 0..nvals {
        for list in &child_lists {
            out.push(Arc::new(Shape {
                val,
                children: list.iter().map(|&i| subtrees[i].clone()).collect(),
            }));
        }
    }
    out
}

fn flatten(shape: &Shape, vars: &[Var]) -> KripkeTree {
    let mut tree = KripkeTree {
        vars: vars.to_vec(),
        valuation: Vec::new(),
        children: Vec::new(),
    };
    fn go(shape: &Shape, vars: &[Var], tree: &mut KripkeTree) -> usize {
        let id = tree.valuation.len();
        let val = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| shape.val & (1 << i) != 0)
            .map(|(_, v)| v.clone())
            .collect();
        tree.valuation.push(val);
        tree.children.push(Vec::new());
        for c in &shape.children {
            let cid = go(c, vars, tree);
            tree.children[id].push(cid);
        }
        id
    }
    go(shape, vars, &mut tree);
    tree
}

/// Searches all rooted trees of depth at most `depth` and at most `branching`
/// children per node, over the variables of `s`, for a node refuting `s`.
/// Accessibility is the child relation for K and its transitive closure for
/// GL. Any other logic is treated as K.
pub fn semantic_check(logic: Logic, s: &Sequent, depth: usize, branching: usize) -> SemanticResult {
    let vars: Vec<Var> = s.vars().into_iter().collect();
    assert!(vars.len() < 16, "too many variables for exhaustive models");
    for shape in shapes(depth, branching, 1 << vars.len()) {
        let tree = flatten(&shape, &vars);
        for n in 0..tree.len() {
            if tree.refutes(logic, n, s) {
                return SemanticResult::Countermodel(tree, n);
            }
        }
    }
    SemanticResult::NoCounterexampleFound
}

/// Which formulas the harness ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub vars: Vec<Var>,
    pub max_weight: u32,
}

impl Budget {
    pub fn new(vars: &[&str], max_weight: u32) -> Budget {
        Budget {
            vars: vars.iter().map(|v| Var::new(v).expect("identifier")).collect(),
            max_weight,
        }
    }

    /// The formulas a logic's harness enumerates: the classical core for K
    /// and GL, box-free formulas for IL, everything for iSL.
    pub fn formulas(&self, logic: Logic) -> Vec<Formula> {
        let mut fs = enumerate_formulas(&self.vars, self.max_weight, logic.dialect());
        if logic == Logic::IL {
            fs.retain(|f| !f.has_box());
        }
        fs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniformityCheck {
    /// `⊢ φ → ψ` but not `⊢ ∃pφ → ψ`.
    Exists,
    /// `⊢ ψ → φ` but not `⊢ ψ → ∀pφ`.
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: UniformityCheck,
    pub phi: Formula,
    pub psi: Formula,
    pub interpolant: Formula,
    pub transcript: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniformityReport {
    pub logic: Option<Logic>,
    pub var: Option<Var>,
    pub formulas: usize,
    pub pairs: usize,
    pub premises_provable: usize,
    pub violations: Vec<Violation>,
}

impl UniformityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// One JSON object per violation followed by a summary object.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let obj = json!({
                "type": "violation",
                "logic": self.logic.map(|l| l.name()),
                "var": self.var.as_ref().map(Var::as_str),
                "check": match v.check {
                    UniformityCheck::Exists => "exists",
                    UniformityCheck::Forall => "forall",
                },
                "phi": print_formula(&v.phi, Style::Ascii),
                "psi": print_formula(&v.psi, Style::Ascii),
                "interpolant": print_formula(&v.interpolant, Style::Ascii),
                "transcript": v.transcript,
            });
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        out.push_str(&self.summary_json().to_string());
        out.push('\n');
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "type": "summary",
            "logic": self.logic.map(|l| l.name()),
            "var": self.var.as_ref().map(Var::as_str),
            "formulas": self.formulas,
            "pairs": self.pairs,
            "premises_provable": self.premises_provable,
            "violations": self.violations.len(),
        })
    }
}

fn formula_provable(prover: &mut Prover, f: &Formula) -> bool {
    prover.proves_formula(f)
}

/// Checks both uniformity obligations for every `φ` in the budget and every
/// `p`-free `ψ` in the budget.
pub fn uniformity_harness(logic: Logic, p: &Var, budget: &Budget) -> UniformityReport {
    let phis = budget.formulas(logic);
    let psis: Vec<Formula> = phis.iter().filter(|f| !f.mentions(p)).cloned().collect();
    let mut ip = Interpolator::new(logic, p.clone());
    let quantified: Vec<(Formula, Formula)> = phis
        .iter()
        .map(|phi| {
            let ex = ip
                .quantify(Quantifier::Exists, phi)
                .expect("enumerated input fits the logic");
            let all = ip
                .quantify(Quantifier::Forall, phi)
                .expect("enumerated input fits the logic");
            (ex, all)
        })
        .collect();

    let rows: Vec<(usize, Vec<Violation>)> = phis
        .par_iter()
        .zip(quantified.par_iter())
        .map_init(
            || Prover::new(logic),
            |prover, (phi, (ex, all))| {
                let mut premises = 0;
                let mut found = Vec::new();
                for psi in &psis {
                    if formula_provable(prover, &Formula::imp(phi.clone(), psi.clone())) {
                        premises += 1;
                        if !formula_provable(prover, &Formula::imp(ex.clone(), psi.clone())) {
                            found.push(violation(UniformityCheck::Exists, phi, psi, ex));
                        }
                    }
                    if formula_provable(prover, &Formula::imp(psi.clone(), phi.clone())) {
                        premises += 1;
                        if !formula_provable(prover, &Formula::imp(psi.clone(), all.clone())) {
                            found.push(violation(UniformityCheck::Forall, phi, psi, all));
                        }
                    }
                }
                (premises, found)
            },
        )
        .collect();

    let mut report = UniformityReport {
        logic: Some(logic),
        var: Some(p.clone()),
        formulas: phis.len(),
        pairs: phis.len() * psis.len(),
        ..UniformityReport::default()
    };
    for (premises, found) in rows {
        report.premises_provable += premises;
        report.violations.extend(found);
    }
    report
}

fn violation(check: UniformityCheck, phi: &Formula, psi: &Formula, q: &Formula) -> Violation {
    let (premise, conclusion) = match check {
        UniformityCheck::Exists => (
            Formula::imp(phi.clone(), psi.clone()),
            Formula::imp(q.clone(), psi.clone()),
        ),
        UniformityCheck::Forall => (
            Formula::imp(psi.clone(), phi.clone()),
            Formula::imp(psi.clone(), q.clone()),
        ),
    };
    Violation {
        check,
        phi: phi.clone(),
        psi: psi.clone(),
        interpolant: q.clone(),
        transcript: format!(
            "proved {}; failed {}",
            print_formula(&premise, Style::Ascii),
            print_formula(&conclusion, Style::Ascii)
        ),
    }
}

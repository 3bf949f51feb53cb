//! Budgeted consequence closure, goal-directed proof search, and the
//! consistency probes.
//!
//! Search never claims more than it shows: every positive answer carries a
//! proof that passes the kernel, and running out of budget is reported as
//! such, never as consistency.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::axioms::{find_member, AxiomSet};
use crate::derived;
use crate::formula::{Formula, Term, Var};
use crate::kernel::{check_proof, Justification, Proof};
use crate::named::u27;
use crate::semantics::{countermodel, AtomTable, DEFAULT_ATOM_CAP};
use crate::transform::push_explosion;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Formula insertions (closure) or emitted proof steps (search).
    pub max_steps: u64,
    /// Formulas with more connectives than this are never indexed.
    pub max_depth: usize,
    pub deterministic: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_depth: 40,
            deterministic: true,
        }
    }
}

impl Budget {
    pub fn steps(max_steps: u64) -> Self {
        Budget {
            max_steps,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetReport {
    pub steps: u64,
    pub max_steps: u64,
    pub exhausted: bool,
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} steps", self.steps, self.max_steps)?;
        if self.exhausted {
            write!(f, ", budget exhausted")?;
        }
        Ok(())
    }
}

/// Where a premise comes from: a hypothesis, or an axiom set (or schema) label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Hyp,
    Axiom(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub formula: Formula,
    pub source: Source,
}

fn push_premise(p: &mut Proof, prem: &Premise) -> usize {
    match &prem.source {
        Source::Hyp => p.push_hyp(prem.formula.clone()),
        Source::Axiom(label) => p.push_axiom(prem.formula.clone(), label),
    }
}

fn collect_subformulas(fs: &[Formula]) -> Vec<Formula> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in fs {
        for g in f.subformulas() {
            if seen.insert(g.clone()) {
                out.push(g.clone());
            }
        }
    }
    out
}

fn collect_terms(fs: &[Formula]) -> Vec<Term> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in fs {
        for t in f.terms() {
            for s in t.subterms() {
                if seen.insert(s.clone()) {
                    out.push(s.clone());
                }
            }
        }
    }
    out
}

/// `phi11` instances `(Ax)phi -> phi(x/t)` whose instantiation chain ends in
/// one of `targets`.
fn instantiation_chains(u: &Formula, targets: &HashSet<Formula>, terms: &[Term], depth: usize, out: &mut Vec<Formula>) -> bool {
    let Formula::Forall(x, body) = u else {
        return false;
    };
    if depth == 0 {
        return false;
    }
    let mut any = false;
    let mut tried = HashSet::new();
    let candidates = terms.iter().cloned().chain(std::iter::once(Term::Var(*x)));
    for t in candidates {
        let Ok(r) = body.substitute(*x, &t) else { continue };
        if !tried.insert(r.clone()) {
            continue;
        }
        let hit = targets.contains(&r) || instantiation_chains(&r, targets, terms, depth - 1, out);
        if hit {
            out.push(Formula::implies(u.clone(), r));
            any = true;
        }
    }
    any
}

/// Hypotheses plus the axiom instances relevant to `x` and `goals`: finite
/// members, pool-driven members of schema-generated sets, and `phi11`
/// instances reaching a subformula of the workload.
pub fn premise_pool(x: &[Formula], goals: &[Formula], axioms: &[AxiomSet]) -> Vec<Premise> {
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut out = Vec::new();
    for f in x {
        if seen.insert(f.clone()) {
            out.push(Premise {
                formula: f.clone(),
                source: Source::Hyp,
            });
        }
    }
    let workload: Vec<Formula> = x.iter().chain(goals).cloned().collect();
    let pool = collect_subformulas(&workload);
    for set in axioms {
        for f in set.relevant_instances(&pool) {
            if seen.insert(f.clone()) {
                out.push(Premise {
                    formula: f,
                    source: Source::Axiom(set.name().to_string()),
                });
            }
        }
    }
    if axioms.iter().any(AxiomSet::includes_logical) {
        let targets: HashSet<Formula> = pool.iter().cloned().collect();
        let terms = collect_terms(&pool);
        let sources: Vec<Formula> = out.iter().map(|p| p.formula.clone()).collect();
        let mut chains = Vec::new();
        for u in collect_subformulas(&sources) {
            if matches!(u, Formula::Forall(..)) {
                instantiation_chains(&u, &targets, &terms, 4, &mut chains);
            }
        }
        for f in chains {
            if seen.insert(f.clone()) {
                out.push(Premise {
                    formula: f,
                    source: Source::Axiom("phi11".into()),
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    Dne,
    NegImpAnte,
    NegImpConseq,
    AndLeft,
    AndRight,
    NegOrLeft,
    NegOrRight,
    Mt,
}

#[derive(Clone, Debug)]
enum Derivation {
    Premise(Source),
    Mp(usize, usize),
    Gen(usize, Var),
    Rule(Rule, Vec<usize>),
}

#[derive(Clone, Debug)]
struct Entry {
    formula: Formula,
    derivation: Derivation,
}

/// A budget-bounded under-approximation of the consequence set.
#[derive(Clone, Debug)]
pub struct ClosureState {
    entries: Vec<Entry>,
    index: HashMap<Formula, usize>,
    frontier: VecDeque<usize>,
    by_antecedent: HashMap<Formula, Vec<usize>>,
    by_consequent: HashMap<Formula, Vec<usize>>,
    gen_vars: Vec<Var>,
    steps: u64,
    budget: Budget,
    exhausted: bool,
}

impl ClosureState {
    fn new(budget: Budget, gen_vars: Vec<Var>) -> Self {
        ClosureState {
            entries: Vec::new(),
            index: HashMap::new(),
            frontier: VecDeque::new(),
            by_antecedent: HashMap::new(),
            by_consequent: HashMap::new(),
            gen_vars,
            steps: 0,
            budget,
            exhausted: false,
        }
    }

    /// Indexes `f`. Hypotheses are always admitted; anything else costs a step.
    fn insert(&mut self, f: Formula, d: Derivation) -> bool {
        if self.index.contains_key(&f) {
            return false;
        }
        let is_hyp = matches!(d, Derivation::Premise(Source::Hyp));
        if !is_hyp {
            if f.connective_count() > self.budget.max_depth {
                return false;
            }
            if self.steps >= self.budget.max_steps {
                self.exhausted = true;
                return false;
            }
            self.steps += 1;
        }
        let id = self.entries.len();
        if let Formula::Implies(a, b) = &f {
            self.by_antecedent.entry((**a).clone()).or_default().push(id);
            self.by_consequent.entry((**b).clone()).or_default().push(id);
        }
        self.index.insert(f.clone(), id);
        self.entries.push(Entry { formula: f, derivation: d });
        self.frontier.push_back(id);
        true
    }

    fn expand(&mut self, id: usize) {
        let f = self.entries[id].formula.clone();
        let mut new: Vec<(Formula, Derivation)> = Vec::new();
        // f as minor premise
        if let Some(majors) = self.by_antecedent.get(&f) {
            for &m in majors {
                let c = self.entries[m].formula.as_implication().expect("implication").1.clone();
                new.push((c, Derivation::Mp(id, m)));
            }
        }
        match &f {
            Formula::Implies(a, b) => {
                if let Some(&i) = self.index.get(&**a) {
                    new.push(((**b).clone(), Derivation::Mp(i, id)));
                }
                if let Some(&j) = self.index.get(&Formula::not((**b).clone())) {
                    new.push((Formula::not((**a).clone()), Derivation::Rule(Rule::Mt, vec![id, j])));
                }
            }
            Formula::And(a, b) => {
                new.push(((**a).clone(), Derivation::Rule(Rule::AndLeft, vec![id])));
                new.push(((**b).clone(), Derivation::Rule(Rule::AndRight, vec![id])));
            }
            Formula::Not(inner) => {
                if let Some(majors) = self.by_consequent.get(&**inner) {
                    for &m in majors {
                        let c = self.entries[m].formula.as_implication().expect("implication").0.clone();
                        new.push((Formula::not(c), Derivation::Rule(Rule::Mt, vec![m, id])));
                    }
                }
                match &**inner {
                    Formula::Not(a) => new.push(((**a).clone(), Derivation::Rule(Rule::Dne, vec![id]))),
                    Formula::Implies(a, b) => {
                        new.push(((**a).clone(), Derivation::Rule(Rule::NegImpAnte, vec![id])));
                        new.push((Formula::not((**b).clone()), Derivation::Rule(Rule::NegImpConseq, vec![id])));
                    }
                    Formula::Or(a, b) => {
                        new.push((Formula::not((**a).clone()), Derivation::Rule(Rule::NegOrLeft, vec![id])));
                        new.push((Formula::not((**b).clone()), Derivation::Rule(Rule::NegOrRight, vec![id])));
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        for x in self.gen_vars.clone() {
            if f.has_free(x) {
                new.push((Formula::forall(x, f.clone()), Derivation::Gen(id, x)));
            }
        }
        for (g, d) in new {
            self.insert(g, d);
        }
    }

    fn run(&mut self, stop: Option<&Formula>) {
        while let Some(id) = self.frontier.pop_front() {
            if self.exhausted || stop.is_some_and(|g| self.index.contains_key(g)) {
                self.frontier.push_front(id);
                return;
            }
            self.expand(id);
        }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Indexed formulas in derivation order.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|e| &e.formula)
    }

    /// 0-based derivation index of `f`.
    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn report(&self) -> BudgetReport {
        BudgetReport {
            steps: self.steps,
            max_steps: self.budget.max_steps,
            exhausted: self.exhausted,
        }
    }

    /// Whether the closure reached a fixpoint within budget.
    pub fn saturated(&self) -> bool {
        !self.exhausted && self.frontier.is_empty()
    }

    /// One formula per line, prefixed by its 1-based derivation index.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            s.push_str(&format!("{}. {}\n", i + 1, e.formula));
        }
        s
    }

    /// Reconstructs a kernel proof of an indexed formula.
    pub fn proof_of(&self, f: &Formula) -> Option<Proof> {
        let root = *self.index.get(f)?;
        let mut needed = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !needed.insert(id) {
                continue;
            }
            match &self.entries[id].derivation {
                Derivation::Premise(_) => {}
                Derivation::Mp(i, j) => stack.extend([*i, *j]),
                Derivation::Gen(i, _) => stack.push(*i),
                Derivation::Rule(_, ps) => stack.extend(ps.iter().copied()),
            }
        }
        let mut p = Proof::new();
        let mut map: HashMap<usize, usize> = HashMap::new();
        for id in needed {
            let e = &self.entries[id];
            let k = match &e.derivation {
                Derivation::Premise(src) => push_premise(
                    &mut p,
                    &Premise {
                        formula: e.formula.clone(),
                        source: src.clone(),
                    },
                ),
                Derivation::Mp(i, j) => p.push(e.formula.clone(), Justification::Mp(map[i], map[j])),
                Derivation::Gen(i, x) => p.push(e.formula.clone(), Justification::Gen(map[i], *x)),
                Derivation::Rule(rule, ps) => {
                    let a = map[&ps[0]];
                    match rule {
                        Rule::Dne => derived::dne(&mut p, a),
                        Rule::NegImpAnte => derived::neg_imp_ante(&mut p, a),
                        Rule::NegImpConseq => derived::neg_imp_conseq(&mut p, a),
                        Rule::AndLeft => derived::and_left(&mut p, a),
                        Rule::AndRight => derived::and_right(&mut p, a),
                        Rule::NegOrLeft => derived::neg_or_left(&mut p, a),
                        Rule::NegOrRight => derived::neg_or_right(&mut p, a),
                        Rule::Mt => derived::mt(&mut p, a, map[&ps[1]]),
                    }
                }
            };
            map.insert(id, k);
        }
        derived::reiterate(&mut p, map[&root]);
        Some(p)
    }
}

fn gen_vars(x: &[Formula], goals: &[Formula]) -> Vec<Var> {
    let free_in_x: BTreeSet<Var> = x.iter().flat_map(|f| f.free_vars()).collect();
    let all: BTreeSet<Var> = x.iter().chain(goals).flat_map(|f| f.all_vars()).collect();
    all.difference(&free_in_x).copied().collect()
}

fn closure_with(x: &[Formula], goals: &[Formula], axioms: &[AxiomSet], budget: Budget, stop: Option<&Formula>) -> ClosureState {
    let vars = if axioms.iter().any(AxiomSet::includes_logical) {
        gen_vars(x, goals)
    } else {
        Vec::new()
    };
    let mut st = ClosureState::new(budget, vars);
    for prem in premise_pool(x, goals, axioms) {
        st.insert(prem.formula, Derivation::Premise(prem.source));
    }
    st.run(stop);
    st
}

/// Forward chaining from `x` with MP, restricted gen, and derived
/// elimination rules, seeded with the relevant axiom instances.
pub fn bounded_closure(x: &[Formula], axioms: &[AxiomSet], budget: Budget) -> ClosureState {
    closure_with(x, &[], axioms, budget, None)
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Proof, BudgetReport),
    Exhausted(BudgetReport),
}

impl SearchOutcome {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            SearchOutcome::Found(p, _) => Some(p),
            SearchOutcome::Exhausted(_) => None,
        }
    }

    pub fn report(&self) -> BudgetReport {
        match self {
            SearchOutcome::Found(_, r) | SearchOutcome::Exhausted(r) => *r,
        }
    }
}

fn is_connective(f: &Formula) -> bool {
    matches!(f, Formula::Not(_) | Formula::Implies(..) | Formula::And(..) | Formula::Or(..))
}

fn atoms_of(f: &Formula, out: &mut BTreeSet<Formula>) {
    match f {
        Formula::Not(a) => atoms_of(a, out),
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
        _ => {
            out.insert(f.clone());
        }
    }
}

/// Propositional entailment with `<->` opaque. `None` when over the atom cap.
fn entails(premises: &[&Formula], goal: &Formula) -> Option<bool> {
    let mut table = AtomTable::with_opaque_iff();
    let hyps: Vec<_> = premises.iter().map(|f| table.skeleton_of(f)).collect();
    let g = table.skeleton_of(goal);
    countermodel(&hyps, &g, table.len(), DEFAULT_ATOM_CAP).ok().map(|c| c.is_none())
}

/// A small subset of `premises` that propositionally entails `goal`.
fn select_premises(premises: &[Premise], goal: &Formula) -> Option<Vec<usize>> {
    let atom_sets: Vec<BTreeSet<Formula>> = premises
        .iter()
        .map(|p| {
            let mut s = BTreeSet::new();
            atoms_of(&p.formula, &mut s);
            s
        })
        .collect();
    let mut reach = BTreeSet::new();
    atoms_of(goal, &mut reach);
    let mut chosen: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..premises.len()).collect();
    loop {
        let fs: Vec<&Formula> = chosen.iter().map(|&i| &premises[i].formula).collect();
        if entails(&fs, goal)? {
            break;
        }
        if remaining.is_empty() {
            return None;
        }
        let (mut layer, rest): (Vec<usize>, Vec<usize>) =
            remaining.iter().partition(|&&i| !atom_sets[i].is_disjoint(&reach));
        remaining = rest;
        if layer.is_empty() {
            layer.push(remaining.remove(0));
        }
        for &i in &layer {
            reach.extend(atom_sets[i].iter().cloned());
        }
        if reach.len() > DEFAULT_ATOM_CAP {
            return None;
        }
        chosen.extend(layer);
    }
    let mut k = chosen.len();
    while k > 0 {
        k -= 1;
        let trial: Vec<&Formula> = chosen
            .iter()
            .enumerate()
            .filter(|(n, _)| *n != k)
            .map(|(_, &i)| &premises[i].formula)
            .collect();
        if entails(&trial, goal) == Some(true) {
            chosen.remove(k);
        }
    }
    Some(chosen)
}

/// Case-splitting prover over propositional skeletons, emitting Hilbert
/// proofs built from the derived rules.
struct Splitter<'a> {
    premises: Vec<&'a Premise>,
    goal: &'a Formula,
    atoms: Vec<Formula>,
    atom_index: HashMap<Formula, usize>,
    work: u64,
    limit: u64,
}

type Assignment = Vec<Option<bool>>;

impl<'a> Splitter<'a> {
    fn value(&self, f: &Formula, asg: &Assignment) -> Option<bool> {
        match f {
            Formula::Not(a) => self.value(a, asg).map(|v| !v),
            Formula::Implies(a, b) => match (self.value(a, asg), self.value(b, asg)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Formula::And(a, b) => match (self.value(a, asg), self.value(b, asg)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Formula::Or(a, b) => match (self.value(a, asg), self.value(b, asg)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            _ => asg[self.atom_index[f]],
        }
    }

    /// Derives `f` (if true) or `~f` (if false) from the literal hypotheses.
    fn derive_value(&self, p: &mut Proof, memo: &mut HashMap<Formula, usize>, f: &Formula, asg: &Assignment) -> usize {
        if let Some(&k) = memo.get(f) {
            return k;
        }
        let v = self.value(f, asg).expect("determinate value");
        let k = match f {
            _ if !is_connective(f) => {
                let lit = if v { f.clone() } else { Formula::not(f.clone()) };
                p.push_hyp(lit)
            }
            Formula::Not(a) => {
                let ka = self.derive_value(p, memo, a, asg);
                if v {
                    ka
                } else {
                    derived::dni(p, ka)
                }
            }
            Formula::Implies(a, b) => {
                if self.value(b, asg) == Some(true) {
                    let kb = self.derive_value(p, memo, b, asg);
                    crate::transform::push_weaken(p, kb, a)
                } else if self.value(a, asg) == Some(false) {
                    let ka = self.derive_value(p, memo, a, asg);
                    derived::imp_from_neg_ante(p, ka, b)
                } else {
                    let ka = self.derive_value(p, memo, a, asg);
                    let kb = self.derive_value(p, memo, b, asg);
                    derived::neg_imp_intro(p, ka, kb)
                }
            }
            Formula::And(a, b) => {
                if self.value(a, asg) == Some(false) {
                    let ka = self.derive_value(p, memo, a, asg);
                    derived::neg_and_intro_left(p, ka, b)
                } else if self.value(b, asg) == Some(false) {
                    let kb = self.derive_value(p, memo, b, asg);
                    derived::neg_and_intro_right(p, a, kb)
                } else {
                    let ka = self.derive_value(p, memo, a, asg);
                    let kb = self.derive_value(p, memo, b, asg);
                    derived::and_intro(p, ka, kb)
                }
            }
            Formula::Or(a, b) => {
                if self.value(a, asg) == Some(true) {
                    let ka = self.derive_value(p, memo, a, asg);
                    derived::or_intro_left(p, ka, b)
                } else if self.value(b, asg) == Some(true) {
                    let kb = self.derive_value(p, memo, b, asg);
                    derived::or_intro_right(p, a, kb)
                } else {
                    let ka = self.derive_value(p, memo, a, asg);
                    let kb = self.derive_value(p, memo, b, asg);
                    derived::neg_or_intro(p, ka, kb)
                }
            }
            _ => unreachable!("non-connective handled above"),
        };
        memo.insert(f.clone(), k);
        k
    }

    fn pick_atom(&self, asg: &Assignment) -> Option<usize> {
        let mut score = vec![0usize; self.atoms.len()];
        let open = std::iter::once(self.goal).chain(self.premises.iter().map(|p| &p.formula));
        for f in open {
            if self.value(f, asg).is_some() {
                continue;
            }
            let mut s = BTreeSet::new();
            atoms_of(f, &mut s);
            for a in s {
                let i = self.atom_index[&a];
                if asg[i].is_none() {
                    score[i] += 1;
                }
            }
        }
        (0..self.atoms.len())
            .filter(|&i| asg[i].is_none())
            .max_by_key(|&i| (score[i], std::cmp::Reverse(i)))
    }

    /// A proof of the goal from the premises and the literal hypotheses of `asg`.
    fn solve(&mut self, asg: &mut Assignment) -> Option<Proof> {
        if self.work > self.limit {
            return None;
        }
        if self.value(self.goal, asg) == Some(true) {
            let mut p = Proof::new();
            let mut memo = HashMap::new();
            let k = self.derive_value(&mut p, &mut memo, self.goal, asg);
            derived::reiterate(&mut p, k);
            self.work += p.len() as u64;
            return Some(p);
        }
        if let Some(prem) = self.premises.iter().find(|p| self.value(&p.formula, asg) == Some(false)) {
            let mut p = Proof::new();
            let mut memo = HashMap::new();
            let i = push_premise(&mut p, prem);
            let j = self.derive_value(&mut p, &mut memo, &prem.formula, asg);
            push_explosion(&mut p, i, j, self.goal);
            self.work += p.len() as u64;
            return Some(p);
        }
        let a = self.pick_atom(asg)?;
        asg[a] = Some(true);
        let pos = self.solve(asg);
        asg[a] = Some(false);
        let neg = pos.as_ref().and_then(|_| self.solve(asg));
        asg[a] = None;
        let (pos, neg) = (pos?, neg?);
        let atom = self.atoms[a].clone();
        let d1 = derived::discharge_lazy(&pos, &atom);
        let d2 = derived::discharge_lazy(&neg, &Formula::not(atom));
        let mut p = Proof::new();
        let i = p.embed(&d1, &|_| None);
        let known: HashMap<Formula, usize> = p.steps.iter().map(|s| (s.formula.clone(), s.index)).collect();
        let j = p.embed(&d2, &|f| known.get(f).copied());
        let k = derived::cases(&mut p, i, j);
        derived::reiterate(&mut p, k);
        self.work += p.len() as u64;
        Some(p)
    }
}

fn split_prove(premises: &[Premise], goal: &Formula, limit: u64) -> (Option<Proof>, u64) {
    let Some(chosen) = select_premises(premises, goal) else {
        return (None, 0);
    };
    let chosen: Vec<&Premise> = chosen.iter().map(|&i| &premises[i]).collect();
    let mut set = BTreeSet::new();
    atoms_of(goal, &mut set);
    for p in &chosen {
        atoms_of(&p.formula, &mut set);
    }
    let atoms: Vec<Formula> = set.into_iter().collect();
    let atom_index = atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let mut s = Splitter {
        premises: chosen.clone(),
        goal,
        atoms,
        atom_index,
        work: 0,
        limit,
    };
    let mut asg = vec![None; s.atoms.len()];
    let Some(sub) = s.solve(&mut asg) else {
        return (None, s.work);
    };
    // literal hypotheses are all discharged; the remaining ones are premises
    let mut p = Proof::new();
    let premise_steps: HashMap<&Formula, &Premise> = chosen.iter().map(|p| (&p.formula, *p)).collect();
    let mut map = Vec::with_capacity(sub.len());
    for st in &sub.steps {
        let k = match &st.justification {
            Justification::Hyp(_) => match premise_steps.get(&st.formula) {
                Some(prem) => push_premise(&mut p, prem),
                None => p.push_hyp(st.formula.clone()),
            },
            Justification::Axiom { .. } => p.push(st.formula.clone(), st.justification.clone()),
            Justification::Mp(i, j) => p.push(st.formula.clone(), Justification::Mp(map[i - 1], map[j - 1])),
            Justification::Gen(i, x) => p.push(st.formula.clone(), Justification::Gen(map[i - 1], *x)),
        };
        map.push(k);
    }
    (Some(p), s.work)
}

/// Searches for a kernel proof of `goal` from `x`.
///
/// Trivial memberships are answered first, then a propositional case-split
/// prover runs over the relevant premises, then forward closure.
pub fn prove(goal: &Formula, x: &[Formula], axioms: &[AxiomSet], budget: Budget) -> SearchOutcome {
    let report = |steps: u64, exhausted: bool| BudgetReport {
        steps,
        max_steps: budget.max_steps,
        exhausted,
    };
    if x.contains(goal) {
        let mut p = Proof::new();
        p.push_hyp(goal.clone());
        return SearchOutcome::Found(p, report(0, false));
    }
    if let Some(set) = find_member(axioms, goal) {
        let mut p = Proof::new();
        p.push_axiom(goal.clone(), set.name());
        return SearchOutcome::Found(p, report(1, false));
    }
    let premises = premise_pool(x, std::slice::from_ref(goal), axioms);
    let mut spent = 0;
    if axioms.iter().any(AxiomSet::includes_logical) {
        let (found, work) = split_prove(&premises, goal, budget.max_steps);
        spent += work;
        if let Some(p) = found {
            debug_assert!(check_proof(&p, axioms).ok, "split prover emitted a bad proof");
            return SearchOutcome::Found(p, report(spent, false));
        }
    }
    let rest = Budget {
        max_steps: budget.max_steps.saturating_sub(spent),
        ..budget
    };
    let st = closure_with(x, std::slice::from_ref(goal), axioms, rest, Some(goal));
    spent += st.report().steps;
    match st.proof_of(goal) {
        Some(p) => SearchOutcome::Found(p, report(spent, false)),
        None => SearchOutcome::Exhausted(report(spent, st.report().exhausted || spent >= budget.max_steps)),
    }
}

#[derive(Clone, Debug)]
pub enum ConsistencyVerdict {
    ContradictionFound {
        formula: Formula,
        proof: Proof,
        negation_proof: Proof,
    },
    NoContradictionWithinBudget(BudgetReport),
    TargetDerived(Proof),
    TargetNotDerivedWithinBudget(BudgetReport),
}

/// Looks for some `a` with both `a` and `~a` in the bounded closure.
pub fn check_traditional_consistency(x: &[Formula], axioms: &[AxiomSet], budget: Budget) -> ConsistencyVerdict {
    let st = bounded_closure(x, axioms, budget);
    for f in st.formulas() {
        if let Formula::Not(a) = f {
            if st.contains(a) {
                return ConsistencyVerdict::ContradictionFound {
                    formula: (**a).clone(),
                    proof: st.proof_of(a).expect("indexed"),
                    negation_proof: st.proof_of(f).expect("indexed"),
                };
            }
        }
    }
    ConsistencyVerdict::NoContradictionWithinBudget(st.report())
}

/// Probes whether `target` (default `u27`) is derivable from `x`.
pub fn check_absolute_consistency(
    x: &[Formula],
    axioms: &[AxiomSet],
    target: Option<&Formula>,
    budget: Budget,
) -> ConsistencyVerdict {
    let target = target.cloned().unwrap_or_else(u27);
    match prove(&target, x, axioms, budget) {
        SearchOutcome::Found(p, _) => ConsistencyVerdict::TargetDerived(p),
        SearchOutcome::Exhausted(r) => ConsistencyVerdict::TargetNotDerivedWithinBudget(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::axiom_set;
    use crate::named::*;
    use crate::parse_formula;

    fn sets(names: &[&str]) -> Vec<AxiomSet> {
        names.iter().map(|n| axiom_set(n, &Params::default()).unwrap()).collect()
    }

    fn imp(a: Formula, b: Formula) -> Formula {
        Formula::implies(a, b)
    }

    fn found(o: &SearchOutcome, axioms: &[AxiomSet], goal: &Formula) -> Proof {
        let p = o.proof().unwrap_or_else(|| panic!("not found: {:?}", o.report())).clone();
        let r = check_proof(&p, axioms);
        assert!(r.ok, "{:?}", r.failure);
        assert_eq!(p.conclusion(), Some(goal));
        p
    }

    #[test]
    fn closure_basic_mp() {
        let x = vec![psi(7), imp(psi(7), psi(1))];
        let st = bounded_closure(&x, &[], Budget::steps(10));
        assert!(st.contains(&psi(1)));
        assert!(st.contains(&psi(7)));
        let p = st.proof_of(&psi(1)).unwrap();
        assert!(check_proof(&p, &[]).ok);
    }

    #[test]
    fn closure_extracts_from_negated_implication() {
        let l12 = sets(&["L12"]);
        let x = vec![Formula::not(imp(psi(7), psi(1)))];
        let st = bounded_closure(&x, &l12, Budget::steps(100_000));
        for g in [psi(7), Formula::not(psi(1))] {
            assert!(st.contains(&g), "{g}");
            let p = st.proof_of(&g).unwrap();
            assert!(check_proof(&p, &l12).ok);
        }
    }

    #[test]
    fn closure_contains_hyps_at_zero_budget() {
        let x = vec![psi(7), psi(1)];
        let st = bounded_closure(&x, &sets(&["L12", "Xp"]), Budget::steps(0));
        assert!(st.contains(&psi(7)) && st.contains(&psi(1)));
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn prove_examples() {
        let l12 = sets(&["L12"]);
        let g = imp(psi(7), psi(7));
        found(&prove(&g, &[], &l12, Budget::default()), &l12, &g);

        let x = vec![gamma2p(), o0()];
        found(&prove(&u27(), &x, &l12, Budget::default()), &l12, &u27());

        let out = prove(&psi(1), &[Formula::not(psi(1))], &l12, Budget::steps(10_000));
        assert!(out.proof().is_none());

        let x = vec![Formula::not(imp(psi(7), psi(1)))];
        found(&prove(&psi(7), &x, &l12, Budget::default()), &l12, &psi(7));
        found(&prove(&Formula::not(psi(1)), &x, &l12, Budget::default()), &l12, &Formula::not(psi(1)));
    }

    #[test]
    fn prove_needs_case_split() {
        let l12 = sets(&["L12"]);
        let (p, q, r) = (psi(1), psi(7), psi(12));
        // (p -> r), (~p -> r) |- r, and excluded middle
        let x = vec![imp(p.clone(), r.clone()), imp(Formula::not(p.clone()), r.clone())];
        found(&prove(&r, &x, &l12, Budget::default()), &l12, &r);
        let em = Formula::or(q.clone(), Formula::not(q.clone()));
        found(&prove(&em, &[], &l12, Budget::default()), &l12, &em);
        let g = Formula::and(p.clone(), q.clone());
        let x = vec![Formula::not(Formula::or(Formula::not(p), Formula::not(q)))];
        found(&prove(&g, &x, &l12, Budget::default()), &l12, &g);
    }

    #[test]
    fn prove_with_instantiation() {
        let ax = sets(&["L12", "Xp"]);
        let g = parse_formula("~(1 = 1 + 1)").unwrap();
        found(&prove(&g, &[], &ax, Budget::default()), &ax, &g);
    }

    #[test]
    fn consistency_probes() {
        let l12 = sets(&["L12"]);
        let x = vec![psi(1), Formula::not(psi(1))];
        match check_traditional_consistency(&x, &l12, Budget::steps(1000)) {
            ConsistencyVerdict::ContradictionFound { formula, proof, negation_proof } => {
                assert_eq!(formula, psi(1));
                assert!(check_proof(&proof, &l12).ok && check_proof(&negation_proof, &l12).ok);
            }
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            check_traditional_consistency(&[psi(7)], &l12, Budget::steps(1000)),
            ConsistencyVerdict::NoContradictionWithinBudget(_)
        ));
        let x2 = vec![Formula::not(imp(psi(7), psi(1))), imp(psi(7), psi(1))];
        assert!(matches!(
            check_traditional_consistency(&x2, &l12, Budget::steps(1000)),
            ConsistencyVerdict::ContradictionFound { .. }
        ));
        match check_absolute_consistency(&x, &l12, None, Budget::default()) {
            ConsistencyVerdict::TargetDerived(p) => {
                assert!(check_proof(&p, &l12).ok);
                assert_eq!(p.conclusion(), Some(&u27()));
            }
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            check_absolute_consistency(&[], &l12, None, Budget::steps(10_000)),
            ConsistencyVerdict::TargetNotDerivedWithinBudget(_)
        ));
        match check_absolute_consistency(&[u27()], &l12, None, Budget::default()) {
            ConsistencyVerdict::TargetDerived(p) => assert_eq!(p.len(), 1),
            v => panic!("{v:?}"),
        }
    }
}

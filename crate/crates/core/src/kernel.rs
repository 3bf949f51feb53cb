//! Proof objects and the step checker.

use std::collections::BTreeSet;
use std::fmt;

use crate::axioms::{find_member, AxiomSet};
use crate::formula::{Formula, Var};
use crate::schema::{instantiate, match_schema, side_condition_violation, Binding, Schema, SchemaError, SchemaId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hyp(String),
    /// `set` is an axiom-set name or a schema name such as `phi4`.
    Axiom { set: String, binding: Option<Binding> },
    /// Step `j` must be `step i -> this`.
    Mp(usize, usize),
    Gen(usize, Var),
}

impl Justification {
    pub fn axiom(set: impl Into<String>) -> Self {
        Justification::Axiom {
            set: set.into(),
            binding: None,
        }
    }

    pub fn hyp(id: impl Into<String>) -> Self {
        Justification::Hyp(id.into())
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Hyp(id) => write!(f, "hyp {id}"),
            Justification::Axiom { set, .. } => write!(f, "axiom {set}"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Gen(i, x) => write!(f, "gen {i} {x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    /// 1-based position in the proof.
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub id: String,
    pub formula: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub hyps: Vec<Hypothesis>,
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn new() -> Self {
        Self::default()
    }

    /// A proof with hypotheses `h1`, `h2`, ... for the given formulas.
    pub fn with_hyps(hyps: impl IntoIterator<Item = Formula>) -> Self {
        let mut p = Proof::new();
        for f in hyps {
            p.ensure_hyp(&f);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Formula at a 1-based index.
    pub fn formula(&self, index: usize) -> &Formula {
        &self.steps[index - 1].formula
    }

    pub fn hyp(&self, id: &str) -> Option<&Formula> {
        self.hyps.iter().find(|h| h.id == id).map(|h| &h.formula)
    }

    pub fn hyp_formulas(&self) -> Vec<Formula> {
        self.hyps.iter().map(|h| h.formula.clone()).collect()
    }

    /// Declares a hypothesis under `id`. Returns false if the id is taken.
    pub fn add_hyp(&mut self, id: impl Into<String>, f: Formula) -> bool {
        let id = id.into();
        if self.hyp(&id).is_some() {
            return false;
        }
        self.hyps.push(Hypothesis { id, formula: f });
        true
    }

    /// Id of a hypothesis with formula `f`, declaring a fresh one if needed.
    pub fn ensure_hyp(&mut self, f: &Formula) -> String {
        if let Some(h) = self.hyps.iter().find(|h| h.formula == *f) {
            return h.id.clone();
        }
        let mut n = self.hyps.len() + 1;
        while self.hyp(&format!("h{n}")).is_some() {
            n += 1;
        }
        let id = format!("h{n}");
        self.hyps.push(Hypothesis {
            id: id.clone(),
            formula: f.clone(),
        });
        id
    }

    /// Appends a step and returns its 1-based index.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        let index = self.steps.len() + 1;
        self.steps.push(ProofStep {
            index,
            formula,
            justification,
        });
        index
    }

    pub fn push_axiom(&mut self, formula: Formula, set: &str) -> usize {
        self.push(formula, Justification::axiom(set))
    }

    pub fn push_hyp(&mut self, formula: Formula) -> usize {
        let id = self.ensure_hyp(&formula);
        self.push(formula, Justification::Hyp(id))
    }

    /// Pushes the conclusion of `mp i j`, where step `j` is `step i -> c`.
    pub fn push_mp(&mut self, i: usize, j: usize) -> usize {
        let c = match self.formula(j).as_implication() {
            Some((_, c)) => c.clone(),
            None => panic!("mp target step {j} is not an implication"),
        };
        self.push(c, Justification::Mp(i, j))
    }

    pub fn push_gen(&mut self, i: usize, x: Var) -> usize {
        let f = Formula::forall(x, self.formula(i).clone());
        self.push(f, Justification::Gen(i, x))
    }

    /// Copies the steps of `sub` onto this proof. A step whose formula
    /// `resolve` maps to an existing index is not copied; unresolved
    /// hypotheses of `sub` become hypotheses here. Returns the index of
    /// `sub`'s conclusion.
    pub fn embed(&mut self, sub: &Proof, resolve: &dyn Fn(&Formula) -> Option<usize>) -> usize {
        let mut map: Vec<usize> = Vec::with_capacity(sub.steps.len());
        for s in &sub.steps {
            if let Some(k) = resolve(&s.formula) {
                map.push(k);
                continue;
            }
            let k = match &s.justification {
                Justification::Hyp(_) => self.push_hyp(s.formula.clone()),
                Justification::Axiom { .. } => self.push(s.formula.clone(), s.justification.clone()),
                Justification::Mp(i, j) => self.push(s.formula.clone(), Justification::Mp(map[i - 1], map[j - 1])),
                Justification::Gen(i, x) => self.push(s.formula.clone(), Justification::Gen(map[i - 1], *x)),
            };
            map.push(k);
        }
        *map.last().expect("embedding an empty proof")
    }

    /// Copies the steps of `other` onto the end of this proof, merging
    /// hypotheses by formula. Returns the new index of each copied step.
    pub fn append(&mut self, other: &Proof) -> Vec<usize> {
        let offset = self.steps.len();
        let mut map = Vec::with_capacity(other.steps.len());
        for s in &other.steps {
            let j = match &s.justification {
                Justification::Hyp(id) => {
                    let f = other.hyp(id).cloned().unwrap_or_else(|| s.formula.clone());
                    Justification::Hyp(self.ensure_hyp(&f))
                }
                Justification::Axiom { .. } => s.justification.clone(),
                Justification::Mp(i, j) => Justification::Mp(i + offset, j + offset),
                Justification::Gen(i, x) => Justification::Gen(i + offset, *x),
            };
            map.push(self.push(s.formula.clone(), j));
        }
        map
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    BadMp,
    BadGen,
    NotAxiom,
    SideCondition,
    DanglingRef,
    GenOnFreeHypVar,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::BadMp => "bad-mp",
            Reason::BadGen => "bad-gen",
            Reason::NotAxiom => "not-axiom",
            Reason::SideCondition => "side-condition",
            Reason::DanglingRef => "dangling-ref",
            Reason::GenOnFreeHypVar => "gen-on-free-hyp-var",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub step: usize,
    pub reason: Reason,
    pub detail: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {} ({})", self.step, self.reason, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub ok: bool,
    pub failure: Option<CheckFailure>,
    /// Gen steps over a variable free in an upstream hypothesis (default mode only).
    pub flagged: Vec<usize>,
}

impl CheckResult {
    fn fail(step: usize, reason: Reason, detail: impl Into<String>) -> Self {
        CheckResult {
            ok: false,
            failure: Some(CheckFailure {
                step,
                reason,
                detail: detail.into(),
            }),
            flagged: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Reject, rather than flag, generalization over a variable free in a
    /// hypothesis the step depends on.
    pub strict: bool,
}

impl CheckOptions {
    pub fn strict() -> Self {
        CheckOptions { strict: true }
    }
}

pub fn check_proof(p: &Proof, axioms: &[AxiomSet]) -> CheckResult {
    check_proof_with(p, axioms, CheckOptions::default())
}

fn check_axiom(f: &Formula, set: &str, binding: Option<&Binding>, axioms: &[AxiomSet]) -> Result<(), (Reason, String)> {
    let not_axiom = |why: String| Err((Reason::NotAxiom, why));
    let schema_id = set.parse::<SchemaId>().ok();
    if let Some(b) = binding {
        let Some(id) = schema_id else {
            return not_axiom(format!("binding given for non-schema `{set}`"));
        };
        match instantiate(&Schema::get(id), b) {
            Ok(g) if g == *f => {}
            Ok(_) => return not_axiom(format!("binding does not instantiate {id} to this formula")),
            Err(SchemaError::SideCondition(m)) => return Err((Reason::SideCondition, m)),
            Err(e) => return not_axiom(e.to_string()),
        }
    }
    let member = match schema_id {
        Some(id) => match_schema(f, &Schema::get(id)).is_some() && find_member(axioms, f).is_some(),
        None => match axioms.iter().find(|s| s.name() == set) {
            Some(s) => s.contains(f),
            None => return not_axiom(format!("axiom set `{set}` not available")),
        },
    };
    if member {
        return Ok(());
    }
    let logical_allowed = match schema_id {
        Some(id) => SchemaId::LOGICAL.contains(&id),
        None => axioms.iter().any(|s| s.name() == set && s.includes_logical()),
    };
    if logical_allowed {
        if let Some((id, cond)) = side_condition_violation(f) {
            if schema_id.is_none_or(|s| s == id) {
                return Err((Reason::SideCondition, format!("{cond} ({id})")));
            }
        }
    }
    not_axiom(format!("not a member of {set}"))
}

pub fn check_proof_with(p: &Proof, axioms: &[AxiomSet], opts: CheckOptions) -> CheckResult {
    // hypothesis indices each step depends on
    let mut deps: Vec<BTreeSet<usize>> = Vec::with_capacity(p.steps.len());
    let mut flagged = Vec::new();
    for (pos, s) in p.steps.iter().enumerate() {
        let n = pos + 1;
        if s.index != n {
            return CheckResult::fail(n, Reason::DanglingRef, format!("step numbered {} at position {n}", s.index));
        }
        let earlier = |i: usize| (1..n).contains(&i);
        let dep = match &s.justification {
            Justification::Hyp(id) => {
                let Some(h) = p.hyps.iter().position(|h| h.id == *id) else {
                    return CheckResult::fail(n, Reason::DanglingRef, format!("no hypothesis `{id}`"));
                };
                if p.hyps[h].formula != s.formula {
                    return CheckResult::fail(n, Reason::DanglingRef, format!("formula differs from hypothesis `{id}`"));
                }
                BTreeSet::from([h])
            }
            Justification::Axiom { set, binding } => {
                if let Err((reason, detail)) = check_axiom(&s.formula, set, binding.as_ref(), axioms) {
                    return CheckResult::fail(n, reason, detail);
                }
                BTreeSet::new()
            }
            Justification::Mp(i, j) => {
                if !earlier(*i) || !earlier(*j) {
                    return CheckResult::fail(n, Reason::DanglingRef, format!("mp {i} {j} refers forward"));
                }
                let expected = Formula::implies(p.formula(*i).clone(), s.formula.clone());
                if *p.formula(*j) != expected {
                    return CheckResult::fail(n, Reason::BadMp, format!("step {j} is not step {i} -> this"));
                }
                deps[i - 1].union(&deps[j - 1]).copied().collect()
            }
            Justification::Gen(i, x) => {
                if !earlier(*i) {
                    return CheckResult::fail(n, Reason::DanglingRef, format!("gen {i} refers forward"));
                }
                if s.formula != Formula::forall(*x, p.formula(*i).clone()) {
                    return CheckResult::fail(n, Reason::BadGen, format!("not ({x}) applied to step {i}"));
                }
                if deps[i - 1].iter().any(|h| p.hyps[*h].formula.has_free(*x)) {
                    if opts.strict {
                        return CheckResult::fail(
                            n,
                            Reason::GenOnFreeHypVar,
                            format!("{x} is free in a hypothesis used by step {i}"),
                        );
                    }
                    flagged.push(n);
                }
                deps[i - 1].clone()
            }
        };
        deps.push(dep);
    }
    CheckResult {
        ok: true,
        failure: None,
        flagged,
    }
}

/// Hypotheses that some step actually uses, by id.
pub fn used_hyps(p: &Proof) -> BTreeSet<String> {
    p.steps
        .iter()
        .filter_map(|s| match &s.justification {
            Justification::Hyp(id) => Some(id.clone()),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::axiom_set;
    use crate::named::{psi, Params};
    use crate::parser::parse_formula;

    fn l12() -> Vec<AxiomSet> {
        vec![axiom_set("L12", &Params::default()).unwrap()]
    }

    fn reason(r: &CheckResult) -> Option<Reason> {
        r.failure.as_ref().map(|f| f.reason)
    }

    #[test]
    fn accepts_simple_mp() {
        let mut p = Proof::new();
        p.add_hyp("a", psi(7));
        p.push(psi(7), Justification::hyp("a"));
        p.push_axiom(Formula::implies(psi(7), Formula::implies(psi(1), psi(7))), "phi4");
        p.push_mp(1, 2);
        let r = check_proof(&p, &l12());
        assert!(r.ok, "{:?}", r.failure);
        assert_eq!(p.conclusion(), Some(&Formula::implies(psi(1), psi(7))));
    }

    #[test]
    fn rejects_bad_mp() {
        let mut p = Proof::new();
        p.add_hyp("a", psi(1));
        p.push(psi(1), Justification::hyp("a"));
        p.push(psi(7), Justification::Mp(1, 1));
        let r = check_proof(&p, &l12());
        assert!(!r.ok);
        assert_eq!(r.failure.as_ref().unwrap().step, 2);
        assert_eq!(reason(&r), Some(Reason::BadMp));
    }

    #[test]
    fn gen_over_hypothesis_variable() {
        let open = parse_formula("x1 = x1").unwrap();
        let mut p = Proof::new();
        p.add_hyp("a", open.clone());
        p.push(open.clone(), Justification::hyp("a"));
        p.push(Formula::forall(Var::x(1), open), Justification::Gen(1, Var::x(1)));
        let strict = check_proof_with(&p, &l12(), CheckOptions::strict());
        assert_eq!(reason(&strict), Some(Reason::GenOnFreeHypVar));
        let lax = check_proof(&p, &l12());
        assert!(lax.ok);
        assert_eq!(lax.flagged, vec![2]);
    }

    #[test]
    fn failure_codes() {
        let mut p = Proof::new();
        p.push_axiom(psi(1), "L12");
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::NotAxiom));

        let mut p = Proof::new();
        p.push(psi(1), Justification::hyp("missing"));
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::DanglingRef));

        let mut p = Proof::new();
        p.push(psi(1), Justification::Mp(2, 3));
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::DanglingRef));

        let capture = parse_formula("(Ax1)(Ex2)(x1 = x2) -> (Ex2)(x2 = x2)").unwrap();
        let mut p = Proof::new();
        p.push_axiom(capture, "L12");
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::SideCondition));

        let mut p = Proof::new();
        p.push_axiom(psi(1), "L12");
        p.push(Formula::forall(Var::x(2), psi(7)), Justification::Gen(1, Var::x(2)));
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::NotAxiom));
    }

    #[test]
    fn bad_gen() {
        let mut p = Proof::new();
        p.add_hyp("a", psi(1));
        p.push(psi(1), Justification::hyp("a"));
        p.push(Formula::forall(Var::x(2), psi(7)), Justification::Gen(1, Var::x(2)));
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::BadGen));
    }

    #[test]
    fn schema_label_with_binding() {
        use crate::schema::MetaVar;
        let f = Formula::implies(psi(7), Formula::implies(psi(1), psi(7)));
        let b = Binding::new().with(MetaVar::Alpha, psi(7)).with(MetaVar::Beta, psi(1));
        let mut p = Proof::new();
        p.push(
            f.clone(),
            Justification::Axiom {
                set: "phi4".into(),
                binding: Some(b),
            },
        );
        assert!(check_proof(&p, &l12()).ok);
        let mut p = Proof::new();
        p.push_axiom(f, "phi1");
        assert_eq!(reason(&check_proof(&p, &l12())), Some(Reason::NotAxiom));
    }

    #[test]
    fn append_remaps() {
        let mut a = Proof::new();
        a.push_hyp(psi(1));
        let mut b = Proof::new();
        b.push_hyp(psi(7));
        b.push_axiom(Formula::implies(psi(7), Formula::implies(psi(1), psi(7))), "phi4");
        b.push_mp(1, 2);
        let map = a.append(&b);
        assert_eq!(map, vec![2, 3, 4]);
        assert_eq!(a.steps[3].justification, Justification::Mp(2, 3));
        assert_eq!(a.hyps.len(), 2);
        assert!(check_proof(&a, &l12()).ok);
    }
}

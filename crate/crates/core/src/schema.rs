//! Axiom schemata: templates over metavariables with side conditions.
//!
//! The logical schemata `phi1`..`phi12` and the two induction schemata
//! (`psi13` over the positive naturals, `q10` over the naturals with `0`)
//! are expressed in one small pattern language so that instantiation and
//! matching share a single definition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Formula, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaVar {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Phi,
    Psi,
}

impl fmt::Display for MetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetaVar::Alpha => "alpha",
            MetaVar::Beta => "beta",
            MetaVar::Gamma => "gamma",
            MetaVar::Delta => "delta",
            MetaVar::Phi => "phi",
            MetaVar::Psi => "psi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi5,
    Phi6,
    Phi7,
    Phi8,
    Phi9,
    Phi10,
    Phi11,
    Phi12,
    Psi13,
    Q10,
}

impl SchemaId {
    /// The logical schemata, in order.
    pub const LOGICAL: [SchemaId; 12] = [
        SchemaId::Phi1,
        SchemaId::Phi2,
        SchemaId::Phi3,
        SchemaId::Phi4,
        SchemaId::Phi5,
        SchemaId::Phi6,
        SchemaId::Phi7,
        SchemaId::Phi8,
        SchemaId::Phi9,
        SchemaId::Phi10,
        SchemaId::Phi11,
        SchemaId::Phi12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Phi1 => "phi1",
            SchemaId::Phi2 => "phi2",
            SchemaId::Phi3 => "phi3",
            SchemaId::Phi4 => "phi4",
            SchemaId::Phi5 => "phi5",
            SchemaId::Phi6 => "phi6",
            SchemaId::Phi7 => "phi7",
            SchemaId::Phi8 => "phi8",
            SchemaId::Phi9 => "phi9",
            SchemaId::Phi10 => "phi10",
            SchemaId::Phi11 => "phi11",
            SchemaId::Phi12 => "phi12",
            SchemaId::Psi13 => "psi13",
            SchemaId::Q10 => "q10",
        }
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = SchemaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::LOGICAL
            .iter()
            .chain(&[SchemaId::Psi13, SchemaId::Q10])
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| SchemaError::UnknownSchema(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("binding is missing {0}")]
    PartialBinding(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    /// The variable metavariable is free for the term metavariable in `phi`.
    FreeFor,
    /// The variable metavariable does not occur free in `phi`.
    NotFree,
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::FreeFor => write!(f, "x free for t in phi"),
            SideCondition::NotFree => write!(f, "x not free in phi"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarPat {
    Meta,
    Fixed(Var),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TermPat {
    Meta,
    Zero,
    One,
    PlusOne(VarPat),
    Succ(VarPat),
}

#[derive(Clone, Debug)]
enum Pat {
    F(MetaVar),
    Not(Box<Pat>),
    Imp(Box<Pat>, Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    Or(Box<Pat>, Box<Pat>),
    All(VarPat, Box<Pat>),
    /// `phi(x/t)`
    Subst(MetaVar, VarPat, TermPat),
}

fn imp(a: Pat, b: Pat) -> Pat {
    Pat::Imp(Box::new(a), Box::new(b))
}

fn and(a: Pat, b: Pat) -> Pat {
    Pat::And(Box::new(a), Box::new(b))
}

fn or(a: Pat, b: Pat) -> Pat {
    Pat::Or(Box::new(a), Box::new(b))
}

fn not(a: Pat) -> Pat {
    Pat::Not(Box::new(a))
}

fn all(x: VarPat, a: Pat) -> Pat {
    Pat::All(x, Box::new(a))
}

/// Assignment of metavariables to formulas, and of the term and variable
/// metavariables where the schema has them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    pub formulas: BTreeMap<MetaVar, Formula>,
    pub term: Option<Term>,
    pub var: Option<Var>,
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, m: MetaVar, f: Formula) -> Self {
        self.formulas.insert(m, f);
        self
    }

    pub fn with_term(mut self, t: Term) -> Self {
        self.term = Some(t);
        self
    }

    pub fn with_var(mut self, x: Var) -> Self {
        self.var = Some(x);
        self
    }

    pub fn get(&self, m: MetaVar) -> Option<&Formula> {
        self.formulas.get(&m)
    }
}

#[derive(Clone, Debug)]
pub struct Schema {
    id: SchemaId,
    template: Pat,
    side_conditions: Vec<SideCondition>,
}

impl Schema {
    pub fn get(id: SchemaId) -> Schema {
        use MetaVar::*;
        let a = || Pat::F(Alpha);
        let b = || Pat::F(Beta);
        let c = || Pat::F(Gamma);
        let d = || Pat::F(Delta);
        let p = || Pat::F(Phi);
        let q = || Pat::F(Psi);
        let x = VarPat::Meta;
        let x1 = VarPat::Fixed(Var::x(1));
        let (template, side_conditions) = match id {
            SchemaId::Phi1 => (imp(imp(a(), imp(b(), c())), imp(imp(a(), b()), imp(a(), c()))), vec![]),
            SchemaId::Phi2 => (imp(imp(not(a()), a()), a()), vec![]),
            SchemaId::Phi3 => (imp(not(a()), imp(a(), b())), vec![]),
            SchemaId::Phi4 => (imp(a(), imp(b(), a())), vec![]),
            SchemaId::Phi5 => (imp(and(a(), b()), a()), vec![]),
            SchemaId::Phi6 => (imp(and(a(), b()), b()), vec![]),
            SchemaId::Phi7 => (imp(a(), imp(b(), and(a(), b()))), vec![]),
            SchemaId::Phi8 => (imp(a(), or(a(), b())), vec![]),
            SchemaId::Phi9 => (imp(b(), or(a(), b())), vec![]),
            SchemaId::Phi10 => (imp(imp(a(), b()), imp(imp(d(), b()), imp(or(a(), d()), b()))), vec![]),
            SchemaId::Phi11 => (
                imp(all(x, p()), Pat::Subst(Phi, x, TermPat::Meta)),
                vec![SideCondition::FreeFor],
            ),
            SchemaId::Phi12 => (
                imp(all(x, imp(p(), q())), imp(p(), all(x, q()))),
                vec![SideCondition::NotFree],
            ),
            SchemaId::Psi13 => (
                imp(
                    and(
                        Pat::Subst(Phi, x1, TermPat::One),
                        all(x1, imp(p(), Pat::Subst(Phi, x1, TermPat::PlusOne(x1)))),
                    ),
                    all(x1, p()),
                ),
                vec![],
            ),
            SchemaId::Q10 => (
                imp(
                    and(
                        Pat::Subst(Phi, x, TermPat::Zero),
                        all(x, imp(p(), Pat::Subst(Phi, x, TermPat::Succ(x)))),
                    ),
                    all(x, p()),
                ),
                vec![],
            ),
        };
        Schema {
            id,
            template,
            side_conditions,
        }
    }

    pub fn id(&self) -> SchemaId {
        self.id
    }

    pub fn side_conditions(&self) -> &[SideCondition] {
        &self.side_conditions
    }

    fn uses_var_meta(&self) -> bool {
        fn walk(p: &Pat) -> bool {
            match p {
                Pat::F(_) => false,
                Pat::Not(a) => walk(a),
                Pat::Imp(a, b) | Pat::And(a, b) | Pat::Or(a, b) => walk(a) || walk(b),
                Pat::All(x, a) => *x == VarPat::Meta || walk(a),
                Pat::Subst(_, x, _) => *x == VarPat::Meta,
            }
        }
        walk(&self.template)
    }

    fn uses_term_meta(&self) -> bool {
        fn walk(p: &Pat) -> bool {
            match p {
                Pat::F(_) => false,
                Pat::Not(a) | Pat::All(_, a) => walk(a),
                Pat::Imp(a, b) | Pat::And(a, b) | Pat::Or(a, b) => walk(a) || walk(b),
                Pat::Subst(_, _, t) => *t == TermPat::Meta,
            }
        }
        walk(&self.template)
    }

    /// Formula metavariables occurring in the template, in order.
    pub fn metavars(&self) -> Vec<MetaVar> {
        fn walk(p: &Pat, out: &mut Vec<MetaVar>) {
            match p {
                Pat::F(m) | Pat::Subst(m, _, _) => {
                    if !out.contains(m) {
                        out.push(*m);
                    }
                }
                Pat::Not(a) | Pat::All(_, a) => walk(a, out),
                Pat::Imp(a, b) | Pat::And(a, b) | Pat::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.template, &mut out);
        out
    }

    fn check_side_conditions(&self, b: &Binding) -> Result<(), SchemaError> {
        self.side_conditions.iter().try_for_each(|sc| self.check_one(*sc, b))
    }

    fn check_one(&self, sc: SideCondition, b: &Binding) -> Result<(), SchemaError> {
        let (Some(x), Some(phi)) = (b.var, b.get(MetaVar::Phi)) else {
            return Err(SchemaError::PartialBinding("x or phi".into()));
        };
        let ok = match sc {
            SideCondition::FreeFor => {
                let t = b.term.as_ref().ok_or_else(|| SchemaError::PartialBinding("t".into()))?;
                phi.free_for(x, t)
            }
            SideCondition::NotFree => !phi.has_free(x),
        };
        if ok {
            Ok(())
        } else {
            Err(SchemaError::SideCondition(format!("{} ({})", sc, self.id)))
        }
    }
}

fn resolve_var(x: VarPat, b: &Binding) -> Option<Var> {
    match x {
        VarPat::Fixed(v) => Some(v),
        VarPat::Meta => b.var,
    }
}

fn build_term(t: TermPat, b: &Binding) -> Option<Term> {
    Some(match t {
        TermPat::Meta => b.term.clone()?,
        TermPat::Zero => Term::zero(),
        TermPat::One => Term::one(),
        TermPat::PlusOne(x) => Term::add(Term::Var(resolve_var(x, b)?), Term::one()),
        TermPat::Succ(x) => Term::succ(Term::Var(resolve_var(x, b)?)),
    })
}

fn build(p: &Pat, b: &Binding) -> Result<Formula, SchemaError> {
    let missing = |what: String| SchemaError::PartialBinding(what);
    Ok(match p {
        Pat::F(m) => b.get(*m).cloned().ok_or_else(|| missing(m.to_string()))?,
        Pat::Not(a) => Formula::not(build(a, b)?),
        Pat::Imp(a, c) => Formula::implies(build(a, b)?, build(c, b)?),
        Pat::And(a, c) => Formula::and(build(a, b)?, build(c, b)?),
        Pat::Or(a, c) => Formula::or(build(a, b)?, build(c, b)?),
        Pat::All(x, a) => Formula::forall(resolve_var(*x, b).ok_or_else(|| missing("x".into()))?, build(a, b)?),
        Pat::Subst(m, x, t) => {
            let phi = b.get(*m).ok_or_else(|| missing(m.to_string()))?;
            let x = resolve_var(*x, b).ok_or_else(|| missing("x".into()))?;
            let t = build_term(*t, b).ok_or_else(|| missing("t".into()))?;
            phi.substitute(x, &t)
                .map_err(|e| SchemaError::SideCondition(e.to_string()))?
        }
    })
}

pub fn instantiate(schema: &Schema, b: &Binding) -> Result<Formula, SchemaError> {
    for m in schema.metavars() {
        if b.get(m).is_none() {
            return Err(SchemaError::PartialBinding(m.to_string()));
        }
    }
    if schema.uses_var_meta() && b.var.is_none() {
        return Err(SchemaError::PartialBinding("x".into()));
    }
    if schema.uses_term_meta() && b.term.is_none() {
        return Err(SchemaError::PartialBinding("t".into()));
    }
    schema.check_side_conditions(b)?;
    build(&schema.template, b)
}

struct Deferred<'f> {
    meta: MetaVar,
    var: VarPat,
    term: TermPat,
    target: &'f Formula,
}

fn match_pat<'f>(p: &Pat, f: &'f Formula, b: &mut Binding, deferred: &mut Vec<Deferred<'f>>) -> bool {
    match (p, f) {
        (Pat::F(m), _) => match b.formulas.get(m) {
            Some(existing) => existing == f,
            None => {
                b.formulas.insert(*m, f.clone());
                true
            }
        },
        (Pat::Not(pa), Formula::Not(fa)) => match_pat(pa, fa, b, deferred),
        (Pat::Imp(pa, pb), Formula::Implies(fa, fb))
        | (Pat::And(pa, pb), Formula::And(fa, fb))
        | (Pat::Or(pa, pb), Formula::Or(fa, fb)) => match_pat(pa, fa, b, deferred) && match_pat(pb, fb, b, deferred),
        (Pat::All(x, pa), Formula::Forall(y, fa)) => {
            let ok = match x {
                VarPat::Fixed(v) => v == y,
                VarPat::Meta => match b.var {
                    Some(v) => v == *y,
                    None => {
                        b.var = Some(*y);
                        true
                    }
                },
            };
            ok && match_pat(pa, fa, b, deferred)
        }
        (Pat::Subst(m, x, t), _) => {
            deferred.push(Deferred {
                meta: *m,
                var: *x,
                term: *t,
                target: f,
            });
            true
        }
        _ => false,
    }
}

/// First term sitting where `phi` has a free `x`, aligned against `target`.
fn infer_term(phi: &Formula, x: Var, target: &Formula) -> Option<Term> {
    fn in_term(a: &Term, t: &Term, x: Var) -> Option<Term> {
        match (a, t) {
            (Term::Var(v), _) if *v == x => Some(t.clone()),
            (Term::Succ(a1), Term::Succ(t1)) => in_term(a1, t1, x),
            (Term::Add(a1, a2), Term::Add(t1, t2)) | (Term::Mul(a1, a2), Term::Mul(t1, t2)) => {
                in_term(a1, t1, x).or_else(|| in_term(a2, t2, x))
            }
            _ => None,
        }
    }
    match (phi, target) {
        (Formula::Atom(p, a1, a2), Formula::Atom(q, t1, t2)) if p == q => {
            in_term(a1, t1, x).or_else(|| in_term(a2, t2, x))
        }
        (Formula::Not(a), Formula::Not(t)) => infer_term(a, x, t),
        (Formula::Implies(a1, a2), Formula::Implies(t1, t2))
        | (Formula::And(a1, a2), Formula::And(t1, t2))
        | (Formula::Or(a1, a2), Formula::Or(t1, t2))
        | (Formula::Iff(a1, a2), Formula::Iff(t1, t2)) => {
            infer_term(a1, x, t1).or_else(|| infer_term(a2, x, t2))
        }
        (Formula::Forall(y, a), Formula::Forall(z, t)) | (Formula::Exists(y, a), Formula::Exists(z, t))
            if y == z && *y != x =>
        {
            infer_term(a, x, t)
        }
        _ => None,
    }
}

/// Recovers a binding with `instantiate(schema, b) == candidate`, if one exists.
///
/// Metavariables are assigned leftmost-outermost. Where the term metavariable
/// is unconstrained (no free occurrence of `x`), it is set to `x` itself.
pub fn match_schema(candidate: &Formula, schema: &Schema) -> Option<Binding> {
    match_impl(candidate, schema, true)
}

/// Reports the side condition that keeps `candidate` out of `phi11` or
/// `phi12` when it has the schema's shape under unchecked substitution.
pub fn side_condition_violation(candidate: &Formula) -> Option<(SchemaId, SideCondition)> {
    [SchemaId::Phi11, SchemaId::Phi12].into_iter().find_map(|id| {
        let schema = Schema::get(id);
        if match_impl(candidate, &schema, true).is_some() {
            return None;
        }
        let b = match_impl(candidate, &schema, false)?;
        schema
            .side_conditions()
            .iter()
            .copied()
            .find(|c| schema.check_one(*c, &b).is_err())
            .map(|c| (id, c))
    })
}

fn match_impl(candidate: &Formula, schema: &Schema, checked: bool) -> Option<Binding> {
    let mut b = Binding::new();
    let mut deferred = Vec::new();
    if !match_pat(&schema.template, candidate, &mut b, &mut deferred) {
        return None;
    }
    for d in deferred {
        let phi = b.get(d.meta)?.clone();
        let x = resolve_var(d.var, &b)?;
        if d.term == TermPat::Meta && b.term.is_none() {
            let t = infer_term(&phi, x, d.target).unwrap_or(Term::Var(x));
            b.term = Some(t);
        }
        let t = build_term(d.term, &b)?;
        let image = if checked { phi.substitute(x, &t).ok()? } else { phi.replace_free(x, &t) };
        if image != *d.target {
            return None;
        }
    }
    if schema.uses_var_meta() && b.var.is_none() {
        return None;
    }
    if checked {
        schema.check_side_conditions(&b).ok()?;
    }
    Some(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InductionFlavor {
    /// Base `1`, step `x1 + 1`, fixed variable `x1`.
    Psi13,
    /// Base `0`, step `S(x)`, any variable.
    Q10,
}

/// Returns the induction matrix when `candidate` is an instance of the
/// requested induction schema.
pub fn recognize_induction(candidate: &Formula, flavor: InductionFlavor) -> Option<Formula> {
    let id = match flavor {
        InductionFlavor::Psi13 => SchemaId::Psi13,
        InductionFlavor::Q10 => SchemaId::Q10,
    };
    let b = match_schema(candidate, &Schema::get(id))?;
    b.get(MetaVar::Phi).cloned()
}

/// Builds the induction instance for `matrix` over `x` (ignored for `Psi13`, which always uses `x1`).
pub fn induction_instance(matrix: &Formula, flavor: InductionFlavor, x: Var) -> Result<Formula, SchemaError> {
    let (id, b) = match flavor {
        InductionFlavor::Psi13 => (SchemaId::Psi13, Binding::new().with(MetaVar::Phi, matrix.clone())),
        InductionFlavor::Q10 => (
            SchemaId::Q10,
            Binding::new().with(MetaVar::Phi, matrix.clone()).with_var(x),
        ),
    };
    instantiate(&Schema::get(id), &b)
}

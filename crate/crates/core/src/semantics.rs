//! Two-valued semantics over propositional skeletons, and a truncated
//! standard-model evaluator for arithmetic sentences.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Const, Formula, Pred, Term, Var};

/// Default cap on the number of atoms in a valuation sweep.
pub const DEFAULT_ATOM_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("valuation covers {given} atoms but the skeleton has {needed}")]
    PartialValuation { given: usize, needed: usize },
    #[error("{atoms} atoms exceed the sweep cap of {cap}")]
    AtomCap { atoms: usize, cap: usize },
    #[error("eval_arith needs a sentence; free variables in {0}")]
    NotASentence(Formula),
    #[error("universe bound must be at least 1")]
    EmptyUniverse,
}

/// Propositional formula over numbered atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, val: &dyn Fn(usize) -> bool) -> bool {
        match self {
            Prop::Atom(i) => val(*i),
            Prop::Not(a) => !a.eval(val),
            Prop::Implies(a, b) => !a.eval(val) || b.eval(val),
            Prop::And(a, b) => a.eval(val) && b.eval(val),
            Prop::Or(a, b) => a.eval(val) || b.eval(val),
            Prop::Iff(a, b) => a.eval(val) == b.eval(val),
        }
    }

    fn eval_mask(&self, mask: u64) -> bool {
        self.eval(&|i| mask >> i & 1 == 1)
    }

    pub fn connective_count(&self) -> usize {
        match self {
            Prop::Atom(_) => 0,
            Prop::Not(a) => 1 + a.connective_count(),
            Prop::Implies(a, b) | Prop::And(a, b) | Prop::Or(a, b) | Prop::Iff(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    /// One past the largest atom index.
    pub fn atom_span(&self) -> usize {
        match self {
            Prop::Atom(i) => i + 1,
            Prop::Not(a) => a.atom_span(),
            Prop::Implies(a, b) | Prop::And(a, b) | Prop::Or(a, b) | Prop::Iff(a, b) => {
                a.atom_span().max(b.atom_span())
            }
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(i) => write!(f, "p{i}"),
            Prop::Not(a) => write!(f, "~{a}"),
            Prop::Implies(a, b) => write!(f, "({a} -> {b})"),
            Prop::And(a, b) => write!(f, "({a} /\\ {b})"),
            Prop::Or(a, b) => write!(f, "({a} \\/ {b})"),
            Prop::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}

/// Maps maximal non-propositional subformulas to atom indices. One table can
/// be shared across several formulas so identical subformulas share an atom.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: Vec<Formula>,
    index: HashMap<Formula, usize>,
    opaque_iff: bool,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table that also treats `<->` as opaque, matching what the
    /// Hilbert axioms can actually reason about.
    pub fn with_opaque_iff() -> Self {
        AtomTable {
            opaque_iff: true,
            ..Self::default()
        }
    }

    pub fn atoms(&self) -> &[Formula] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn atom(&mut self, f: &Formula) -> Prop {
        if let Some(&i) = self.index.get(f) {
            return Prop::Atom(i);
        }
        let i = self.atoms.len();
        self.atoms.push(f.clone());
        self.index.insert(f.clone(), i);
        Prop::Atom(i)
    }

    pub fn skeleton_of(&mut self, f: &Formula) -> Prop {
        match f {
            Formula::Atom(..) | Formula::Forall(..) | Formula::Exists(..) => self.atom(f),
            Formula::Iff(..) if self.opaque_iff => self.atom(f),
            Formula::Not(a) => Prop::Not(Box::new(self.skeleton_of(a))),
            Formula::Implies(a, b) => Prop::Implies(Box::new(self.skeleton_of(a)), Box::new(self.skeleton_of(b))),
            Formula::And(a, b) => Prop::And(Box::new(self.skeleton_of(a)), Box::new(self.skeleton_of(b))),
            Formula::Or(a, b) => Prop::Or(Box::new(self.skeleton_of(a)), Box::new(self.skeleton_of(b))),
            Formula::Iff(a, b) => Prop::Iff(Box::new(self.skeleton_of(a)), Box::new(self.skeleton_of(b))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub prop: Prop,
    pub atoms: Vec<Formula>,
}

impl Skeleton {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prop)
    }
}

pub fn skeletonize(f: &Formula) -> Skeleton {
    let mut table = AtomTable::new();
    let prop = table.skeleton_of(f);
    Skeleton {
        prop,
        atoms: table.atoms,
    }
}

pub fn eval_matrix2(s: &Skeleton, valuation: &[bool]) -> Result<bool, SemanticsError> {
    if valuation.len() < s.atom_count() {
        return Err(SemanticsError::PartialValuation {
            given: valuation.len(),
            needed: s.atom_count(),
        });
    }
    Ok(s.prop.eval(&|i| valuation[i]))
}

pub fn is_tautology(s: &Skeleton) -> Result<bool, SemanticsError> {
    is_tautology_capped(s, DEFAULT_ATOM_CAP)
}

pub fn is_tautology_capped(s: &Skeleton, cap: usize) -> Result<bool, SemanticsError> {
    Ok(countermodel(&[], &s.prop, s.atom_count(), cap)?.is_none())
}

/// A valuation under which `goal` is false, if any.
pub fn falsifying_valuation(s: &Skeleton) -> Result<Option<Vec<bool>>, SemanticsError> {
    countermodel(&[], &s.prop, s.atom_count(), DEFAULT_ATOM_CAP)
}

/// Searches for a valuation satisfying every hypothesis and falsifying `goal`.
/// `None` means the hypotheses entail the goal.
pub fn countermodel(hyps: &[Prop], goal: &Prop, atoms: usize, cap: usize) -> Result<Option<Vec<bool>>, SemanticsError> {
    if atoms > cap || atoms > 63 {
        return Err(SemanticsError::AtomCap { atoms, cap });
    }
    for mask in 0..(1u64 << atoms) {
        if hyps.iter().all(|h| h.eval_mask(mask)) && !goal.eval_mask(mask) {
            return Ok(Some((0..atoms).map(|i| mask >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// Some valuation satisfying every formula, if one exists.
pub fn satisfying_valuation(props: &[Prop], atoms: usize, cap: usize) -> Result<Option<Vec<bool>>, SemanticsError> {
    if atoms > cap || atoms > 63 {
        return Err(SemanticsError::AtomCap { atoms, cap });
    }
    for mask in 0..(1u64 << atoms) {
        if props.iter().all(|p| p.eval_mask(mask)) {
            return Ok(Some((0..atoms).map(|i| mask >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

impl ThreeValued {
    fn from_bool(b: bool) -> Self {
        if b {
            ThreeValued::True
        } else {
            ThreeValued::False
        }
    }

    fn not(self) -> Self {
        match self {
            ThreeValued::True => ThreeValued::False,
            ThreeValued::False => ThreeValued::True,
            ThreeValued::Unknown => ThreeValued::Unknown,
        }
    }

    fn and(self, o: Self) -> Self {
        use ThreeValued::*;
        match (self, o) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    fn or(self, o: Self) -> Self {
        self.not().and(o.not()).not()
    }

    fn iff(self, o: Self) -> Self {
        use ThreeValued::*;
        match (self, o) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (a, b) => ThreeValued::from_bool(a == b),
        }
    }
}

impl fmt::Display for ThreeValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeValued::True => "TRUE",
            ThreeValued::False => "FALSE",
            ThreeValued::Unknown => "UNKNOWN",
        })
    }
}

/// Which standard model the quantifiers are truncated from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// `{0, 1, 2, ...}`, the intended model of the `Q` axioms.
    Naturals,
    /// `{1, 2, ...}`, the intended model of the `psi` axioms.
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedModelConfig {
    pub bound: u64,
    pub universe: Universe,
}

impl BoundedModelConfig {
    pub fn new(bound: u64) -> Self {
        BoundedModelConfig {
            bound,
            universe: Universe::Naturals,
        }
    }

    pub fn positive(bound: u64) -> Self {
        BoundedModelConfig {
            bound,
            universe: Universe::Positive,
        }
    }

    fn lower(&self) -> u64 {
        match self.universe {
            Universe::Naturals => 0,
            Universe::Positive => 1,
        }
    }
}

/// Evaluates a sentence with quantifiers ranging over `lower..=bound`.
///
/// Only verdicts the truncation can certify for the full model are reported:
/// a witnessed existential is true, a refuted universal is false, and
/// everything else is unknown. Connectives follow strong Kleene logic.
pub fn eval_arith(f: &Formula, cfg: &BoundedModelConfig) -> Result<ThreeValued, SemanticsError> {
    if cfg.bound < 1 {
        return Err(SemanticsError::EmptyUniverse);
    }
    if !f.is_sentence() {
        return Err(SemanticsError::NotASentence(f.clone()));
    }
    let mut env = Vec::new();
    Ok(eval_in(f, cfg, &mut env))
}

fn eval_term(t: &Term, env: &[(Var, u128)]) -> Option<u128> {
    match t {
        Term::Var(v) => env.iter().rev().find(|(w, _)| w == v).map(|(_, n)| *n),
        Term::Const(Const::Zero) => Some(0),
        Term::Const(Const::One) => Some(1),
        Term::Succ(a) => eval_term(a, env)?.checked_add(1),
        Term::Add(a, b) => eval_term(a, env)?.checked_add(eval_term(b, env)?),
        Term::Mul(a, b) => eval_term(a, env)?.checked_mul(eval_term(b, env)?),
    }
}

fn eval_in(f: &Formula, cfg: &BoundedModelConfig, env: &mut Vec<(Var, u128)>) -> ThreeValued {
    match f {
        Formula::Atom(p, a, b) => match (eval_term(a, env), eval_term(b, env)) {
            (Some(x), Some(y)) => ThreeValued::from_bool(match p {
                Pred::Eq => x == y,
                Pred::Lt => x < y,
            }),
            _ => ThreeValued::Unknown,
        },
        Formula::Not(a) => eval_in(a, cfg, env).not(),
        Formula::Implies(a, b) => eval_in(a, cfg, env).not().or(eval_in(b, cfg, env)),
        Formula::And(a, b) => eval_in(a, cfg, env).and(eval_in(b, cfg, env)),
        Formula::Or(a, b) => eval_in(a, cfg, env).or(eval_in(b, cfg, env)),
        Formula::Iff(a, b) => eval_in(a, cfg, env).iff(eval_in(b, cfg, env)),
        Formula::Forall(x, body) => {
            for n in cfg.lower()..=cfg.bound {
                env.push((*x, n as u128));
                let v = eval_in(body, cfg, env);
                env.pop();
                if v == ThreeValued::False {
                    return ThreeValued::False;
                }
            }
            ThreeValued::Unknown
        }
        Formula::Exists(x, body) => {
            for n in cfg.lower()..=cfg.bound {
                env.push((*x, n as u128));
                let v = eval_in(body, cfg, env);
                env.pop();
                if v == ThreeValued::True {
                    return ThreeValued::True;
                }
            }
            ThreeValued::Unknown
        }
    }
}

//! Terms and formulas over the arithmetic signature.
//!
//! The signature is fixed: constants `0` and `1`, the successor `S`, binary
//! `+` and `*`, and the binary predicates `=` and `<`. Arities are encoded in
//! the constructors, so an ill-formed application cannot be built.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An individual variable `x<k>` with `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Option<Var> {
        (id > 0).then_some(Var(id))
    }

    /// Panics on id 0; for literals in code.
    pub fn x(id: u32) -> Var {
        Var::new(id).expect("variable ids start at 1")
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Finite set of variables, iterated in ascending id order.
pub type VarSet = BTreeSet<Var>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Zero,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Succ,
    Add,
    Mul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    Eq,
    Lt,
}

/// Read-only view of the fixed arithmetic signature.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolTable;

impl SymbolTable {
    pub fn constants(&self) -> [Const; 2] {
        [Const::Zero, Const::One]
    }

    pub fn functions(&self) -> [(Func, usize); 3] {
        [(Func::Add, 2), (Func::Mul, 2), (Func::Succ, 1)]
    }

    pub fn predicates(&self) -> [(Pred, usize); 2] {
        [(Pred::Eq, 2), (Pred::Lt, 2)]
    }

    pub fn function_arity(&self, f: Func) -> usize {
        match f {
            Func::Succ => 1,
            Func::Add | Func::Mul => 2,
        }
    }

    pub fn predicate_arity(&self, _p: Pred) -> usize {
        2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const(Const),
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(id: u32) -> Term {
        Term::Var(Var::x(id))
    }

    pub fn zero() -> Term {
        Term::Const(Const::Zero)
    }

    pub fn one() -> Term {
        Term::Const(Const::One)
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    /// The function symbol and argument list, or `None` for variables and constants.
    pub fn application(&self) -> Option<(Func, Vec<&Term>)> {
        match self {
            Term::Succ(a) => Some((Func::Succ, vec![a])),
            Term::Add(a, b) => Some((Func::Add, vec![a, b])),
            Term::Mul(a, b) => Some((Func::Mul, vec![a, b])),
            _ => None,
        }
    }

    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Const(_) => {}
            Term::Succ(a) => a.collect_vars(out),
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, x: Var) -> bool {
        match self {
            Term::Var(v) => *v == x,
            Term::Const(_) => false,
            Term::Succ(a) => a.contains_var(x),
            Term::Add(a, b) | Term::Mul(a, b) => a.contains_var(x) || b.contains_var(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn replace(&self, x: Var, t: &Term) -> Term {
        match self {
            Term::Var(v) if *v == x => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Succ(a) => Term::succ(a.replace(x, t)),
            Term::Add(a, b) => Term::add(a.replace(x, t), b.replace(x, t)),
            Term::Mul(a, b) => Term::mul(a.replace(x, t), b.replace(x, t)),
        }
    }

    /// Every subterm, outermost first.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::Succ(a) => out.extend(a.subterms()),
            Term::Add(a, b) | Term::Mul(a, b) => {
                out.extend(a.subterms());
                out.extend(b.subterms());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Pred, Term, Term),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("{var} is not free for {term} in {formula}: substitution would capture")]
    Capture {
        var: Var,
        term: Term,
        formula: Formula,
    },
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Pred::Eq, a, b)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Atom(Pred::Lt, a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(x: Var, f: Formula) -> Formula {
        Formula::Forall(x, Box::new(f))
    }

    pub fn exists(x: Var, f: Formula) -> Formula {
        Formula::Exists(x, Box::new(f))
    }

    /// `a -> b` split into its parts.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Not(a) => Some(a),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut VarSet) {
        match self {
            Formula::Atom(_, a, b) => {
                for v in a.vars().into_iter().chain(b.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(*x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: Var) -> bool {
        match self {
            Formula::Atom(_, a, b) => a.contains_var(x) || b.contains_var(x),
            Formula::Not(a) => a.has_free(x),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.has_free(x) || b.has_free(x)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => *y != x && body.has_free(x),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True iff no free occurrence of `x` sits under a quantifier binding a
    /// variable of `t`.
    pub fn free_for(&self, x: Var, t: &Term) -> bool {
        let tv = t.vars();
        if tv.is_empty() {
            return true;
        }
        self.free_for_under(x, &tv, false)
    }

    fn free_for_under(&self, x: Var, tv: &VarSet, captured: bool) -> bool {
        match self {
            Formula::Atom(_, a, b) => !(captured && (a.contains_var(x) || b.contains_var(x))),
            Formula::Not(a) => a.free_for_under(x, tv, captured),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.free_for_under(x, tv, captured) && b.free_for_under(x, tv, captured)
            }
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                if *y == x {
                    // no free occurrence of x below this point
                    true
                } else {
                    body.free_for_under(x, tv, captured || tv.contains(y))
                }
            }
        }
    }

    /// Replaces the free occurrences of `x` by `t`. Refuses on capture; never renames.
    pub fn substitute(&self, x: Var, t: &Term) -> Result<Formula, SubstError> {
        if !self.free_for(x, t) {
            return Err(SubstError::Capture {
                var: x,
                term: t.clone(),
                formula: self.clone(),
            });
        }
        Ok(self.replace_free(x, t))
    }

    /// Replaces free occurrences of `x` by `t` with no capture check.
    pub(crate) fn replace_free(&self, x: Var, t: &Term) -> Formula {
        match self {
            Formula::Atom(p, a, b) => Formula::Atom(*p, a.replace(x, t), b.replace(x, t)),
            Formula::Not(a) => Formula::not(a.replace_free(x, t)),
            Formula::Implies(a, b) => Formula::implies(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::And(a, b) => Formula::and(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Or(a, b) => Formula::or(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Iff(a, b) => Formula::iff(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Forall(y, _) | Formula::Exists(y, _) if *y == x => self.clone(),
            Formula::Forall(y, body) => Formula::forall(*y, body.replace_free(x, t)),
            Formula::Exists(y, body) => Formula::exists(*y, body.replace_free(x, t)),
        }
    }

    /// Prefixes universal quantifiers over the free variables, lowest id outermost.
    pub fn universal_closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Formula::forall(v, acc))
    }

    /// Number of logical connectives and quantifiers.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.connective_count(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    /// All subformulas, outermost first; duplicates kept.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.push_subformulas(&mut out);
        out
    }

    fn push_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        out.push(self);
        match self {
            Formula::Atom(..) => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.push_subformulas(out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.push_subformulas(out);
                b.push_subformulas(out);
            }
        }
    }

    /// Every term occurring in an atom, outermost subterms first.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        for f in self.subformulas() {
            if let Formula::Atom(_, a, b) = f {
                out.extend(a.subterms());
                out.extend(b.subterms());
            }
        }
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.subformulas()
            .iter()
            .all(|f| !matches!(f, Formula::Forall(..) | Formula::Exists(..)))
    }

    /// Every variable that occurs, free or bound.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        for f in self.subformulas() {
            match f {
                Formula::Atom(_, a, b) => {
                    out.extend(a.vars());
                    out.extend(b.vars());
                }
                Formula::Forall(x, _) | Formula::Exists(x, _) => {
                    out.insert(*x);
                }
                _ => {}
            }
        }
        out
    }
}

// Rendering. Precedence, loosest first: `->` (right-assoc), `<->`, `\/`, `/\`,
// then the prefix forms `~` and quantifiers. Terms: `+` below `*`, both left-assoc.

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) => 1,
        Term::Mul(..) => 2,
        _ => 3,
    }
}

fn write_term_at(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if term_prec(t) < min {
        write!(f, "(")?;
        write_term_at(f, t, 0)?;
        return write!(f, ")");
    }
    match t {
        Term::Var(v) => write!(f, "{v}"),
        Term::Const(Const::Zero) => write!(f, "0"),
        Term::Const(Const::One) => write!(f, "1"),
        Term::Succ(a) => {
            write!(f, "S(")?;
            write_term_at(f, a, 0)?;
            write!(f, ")")
        }
        Term::Add(a, b) => {
            write_term_at(f, a, 1)?;
            write!(f, " + ")?;
            write_term_at(f, b, 2)
        }
        Term::Mul(a, b) => {
            write_term_at(f, a, 2)?;
            write!(f, " * ")?;
            write_term_at(f, b, 3)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term_at(f, self, 0)
    }
}

fn formula_prec(g: &Formula) -> u8 {
    match g {
        Formula::Implies(..) => 1,
        Formula::Iff(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) | Formula::Forall(..) | Formula::Exists(..) => 5,
        Formula::Atom(..) => 6,
    }
}

fn write_formula_at(f: &mut fmt::Formatter<'_>, g: &Formula, min: u8) -> fmt::Result {
    if formula_prec(g) < min {
        write!(f, "(")?;
        write_formula_at(f, g, 0)?;
        return write!(f, ")");
    }
    match g {
        Formula::Atom(p, a, b) => {
            let op = match p {
                Pred::Eq => "=",
                Pred::Lt => "<",
            };
            write!(f, "{a} {op} {b}")
        }
        Formula::Not(a) => {
            write!(f, "~")?;
            write_prefix_body(f, a)
        }
        Formula::Forall(x, a) => {
            write!(f, "(A{x})")?;
            write_prefix_body(f, a)
        }
        Formula::Exists(x, a) => {
            write!(f, "(E{x})")?;
            write_prefix_body(f, a)
        }
        Formula::Implies(a, b) => {
            write_formula_at(f, a, 2)?;
            write!(f, " -> ")?;
            write_formula_at(f, b, 1)
        }
        Formula::Iff(a, b) => {
            write_formula_at(f, a, 2)?;
            write!(f, " <-> ")?;
            write_formula_at(f, b, 3)
        }
        Formula::Or(a, b) => {
            write_formula_at(f, a, 3)?;
            write!(f, " \\/ ")?;
            write_formula_at(f, b, 4)
        }
        Formula::And(a, b) => {
            write_formula_at(f, a, 4)?;
            write!(f, " /\\ ")?;
            write_formula_at(f, b, 5)
        }
    }
}

// Atoms and binary formulas under a prefix operator are always parenthesized.
fn write_prefix_body(f: &mut fmt::Formatter<'_>, body: &Formula) -> fmt::Result {
    match body {
        Formula::Not(..) | Formula::Forall(..) | Formula::Exists(..) => write_formula_at(f, body, 5),
        _ => {
            write!(f, "(")?;
            write_formula_at(f, body, 0)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula_at(f, self, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Term {
        Term::var(i)
    }

    #[test]
    fn free_vars_basic() {
        let psi1 = Formula::forall(Var::x(1), Formula::eq(v(1), v(1)));
        assert!(psi1.free_vars().is_empty());
        let f = Formula::eq(v(1), v(2));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![Var::x(1), Var::x(2)]);
        let g = Formula::forall(Var::x(1), Formula::eq(v(1), v(2)));
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec![Var::x(2)]);
    }

    #[test]
    fn free_for_cases() {
        let captured = Formula::forall(Var::x(2), Formula::eq(v(1), v(2)));
        assert!(!captured.free_for(Var::x(1), &v(2)));
        assert!(captured.free_for(Var::x(1), &Term::one()));
        assert!(Formula::eq(v(1), v(1)).free_for(Var::x(1), &v(2)));
        // x1 has no free occurrence under the binder of x1
        let shadow = Formula::forall(Var::x(2), Formula::forall(Var::x(1), Formula::eq(v(1), v(2))));
        assert!(shadow.free_for(Var::x(1), &v(2)));
    }

    #[test]
    fn substitution() {
        let f = Formula::eq(v(1), v(1));
        assert_eq!(f.substitute(Var::x(1), &Term::one()).unwrap(), Formula::eq(Term::one(), Term::one()));
        let closed = Formula::forall(Var::x(1), f.clone());
        assert_eq!(closed.substitute(Var::x(1), &Term::one()).unwrap(), closed);
        let g = Formula::eq(Term::add(v(1), v(3)), v(2));
        let got = g.substitute(Var::x(3), &Term::succ(v(1))).unwrap();
        assert_eq!(got, Formula::eq(Term::add(v(1), Term::succ(v(1))), v(2)));
        let captured = Formula::forall(Var::x(2), Formula::eq(v(1), v(2)));
        assert!(matches!(
            captured.substitute(Var::x(1), &v(2)),
            Err(SubstError::Capture { .. })
        ));
    }

    #[test]
    fn closure_order() {
        let f = Formula::lt(v(1), v(2));
        assert_eq!(f.universal_closure().to_string(), "(Ax1)(Ax2)(x1 < x2)");
        let g = Formula::eq(v(1), v(1));
        assert_eq!(g.universal_closure().to_string(), "(Ax1)(x1 = x1)");
        let c = g.universal_closure();
        assert_eq!(c.universal_closure(), c);
    }

    #[test]
    fn render_terms() {
        assert_eq!(Term::mul(v(1), Term::add(v(2), Term::one())).to_string(), "x1 * (x2 + 1)");
        assert_eq!(Term::add(Term::succ(v(1)), v(2)).to_string(), "S(x1) + x2");
        assert_eq!(
            Term::add(v(1), Term::add(v(2), Term::one())).to_string(),
            "x1 + (x2 + 1)"
        );
        assert_eq!(Term::add(Term::add(v(1), v(2)), Term::one()).to_string(), "x1 + x2 + 1");
    }

    #[test]
    fn render_formulas() {
        let p = Formula::eq(v(1), v(1));
        let q = Formula::lt(Term::one(), Term::one());
        let imp = Formula::implies(Formula::implies(p.clone(), q.clone()), p.clone());
        assert_eq!(imp.to_string(), "(x1 = x1 -> 1 < 1) -> x1 = x1");
        assert_eq!(Formula::not(q.clone()).to_string(), "~(1 < 1)");
        let conj = Formula::implies(Formula::and(p.clone(), q.clone()), p.clone());
        assert_eq!(conj.to_string(), "x1 = x1 /\\ 1 < 1 -> x1 = x1");
    }
}

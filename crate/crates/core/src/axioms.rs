//! Named axiom sets and their membership tests.
//!
//! Finite sets are stored extensionally. Schema-generated sets answer
//! membership by matching against their generating schemata, and can
//! propose the instances that are relevant to a given pool of formulas.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Var};
use crate::named::{self, NamedError, Params};
use crate::schema::{induction_instance, match_schema, InductionFlavor, Schema, SchemaId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomSetError {
    #[error("unknown axiom set `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Named(#[from] NamedError),
}

/// Every name accepted by [`axiom_set`].
pub const SET_NAMES: &[&str] = &[
    "L12",
    "L2r",
    "Xp",
    "Yp",
    "XpPrime",
    "YpPrime",
    "L11",
    "LT1",
    "PrefixedL2r",
    "NPsi3dot",
    "NPsi3ddot",
];

#[derive(Clone, Debug)]
enum Rule {
    /// Instances of `phi1`..`phi12`.
    Logical,
    /// Logical instances and the universal closures of the open ones.
    LogicalClosed,
    Finite(Vec<Formula>),
    Induction(InductionFlavor),
    /// `p1 -> (... -> (pk -> w))` for `w` in `L2r - L12`.
    Prefixed(Vec<Formula>),
    Union(Vec<Rule>),
}

/// Decidable membership test for one named axiom set.
#[derive(Clone, Debug)]
pub struct AxiomSet {
    name: String,
    rule: Rule,
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Which logical schema a formula instantiates, if any.
pub fn logical_schema_of(f: &Formula) -> Option<SchemaId> {
    // cheap shape filter before matching
    if !matches!(f, Formula::Implies(..)) {
        return None;
    }
    SchemaId::LOGICAL
        .iter()
        .copied()
        .find(|id| match_schema(f, &Schema::get(*id)).is_some())
}

pub fn is_logical(f: &Formula) -> bool {
    logical_schema_of(f).is_some()
}

/// Universal closure of an open logical instance (members of `L2r - L12`).
pub fn is_closed_logical(f: &Formula) -> bool {
    let mut g = f;
    while let Formula::Forall(_, body) = g {
        g = body;
        if !g.is_sentence() && is_logical(g) && g.universal_closure() == *f {
            return true;
        }
    }
    false
}

impl Rule {
    fn contains(&self, f: &Formula) -> bool {
        match self {
            Rule::Logical => is_logical(f),
            Rule::LogicalClosed => is_logical(f) || is_closed_logical(f),
            Rule::Finite(members) => members.contains(f),
            Rule::Induction(flavor) => crate::schema::recognize_induction(f, *flavor).is_some(),
            Rule::Prefixed(prefixes) => {
                let mut g = f;
                for p in prefixes {
                    match g.as_implication() {
                        Some((a, rest)) if a == p => g = rest,
                        _ => return false,
                    }
                }
                !is_logical(g) && is_closed_logical(g)
            }
            Rule::Union(rules) => rules.iter().any(|r| r.contains(f)),
        }
    }

    fn finite_members(&self) -> Option<Vec<Formula>> {
        match self {
            Rule::Finite(m) => Some(m.clone()),
            Rule::Union(rules) => {
                let mut out = Vec::new();
                for r in rules {
                    out.extend(r.finite_members()?);
                }
                Some(out)
            }
            _ => None,
        }
    }

    fn includes_logical(&self) -> bool {
        match self {
            Rule::Logical | Rule::LogicalClosed => true,
            Rule::Union(rules) => rules.iter().any(Rule::includes_logical),
            _ => false,
        }
    }

    fn relevant(&self, pool: &[Formula], out: &mut Vec<Formula>) {
        match self {
            Rule::Logical => {}
            Rule::LogicalClosed => out.extend(pool.iter().filter(|f| is_closed_logical(f)).cloned()),
            Rule::Finite(m) => out.extend(m.iter().cloned()),
            Rule::Induction(flavor) => {
                for f in pool {
                    if let Formula::Forall(x, body) = f {
                        if *flavor == InductionFlavor::Psi13 && *x != Var::x(1) {
                            continue;
                        }
                        if let Ok(inst) = induction_instance(body, *flavor, *x) {
                            out.push(inst);
                        }
                    }
                }
            }
            Rule::Prefixed(prefixes) => {
                for f in pool {
                    if is_closed_logical(f) {
                        out.push(named::prefix_chain(prefixes, f));
                    }
                }
            }
            Rule::Union(rules) => rules.iter().for_each(|r| r.relevant(pool, out)),
        }
    }
}

impl AxiomSet {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.rule.contains(f)
    }

    /// The members, when the set is finite.
    pub fn finite_members(&self) -> Option<Vec<Formula>> {
        self.rule.finite_members()
    }

    /// The finite part of the set: all members if finite, else the finite
    /// components of a union.
    pub fn finite_core(&self) -> Vec<Formula> {
        fn walk(r: &Rule, out: &mut Vec<Formula>) {
            match r {
                Rule::Finite(m) => out.extend(m.iter().cloned()),
                Rule::Union(rs) => rs.iter().for_each(|r| walk(r, out)),
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(&self.rule, &mut out);
        out
    }

    /// Whether every instance of `phi1`..`phi12` is a member.
    pub fn includes_logical(&self) -> bool {
        self.rule.includes_logical()
    }

    /// Members of the set built from formulas in `pool`: the finite members,
    /// prefixed closures of pool formulas, induction instances for pool
    /// universals. Logical instances are not listed here.
    pub fn relevant_instances(&self, pool: &[Formula]) -> Vec<Formula> {
        let mut out = Vec::new();
        self.rule.relevant(pool, &mut out);
        out
    }

    /// Union with an explicit finite set.
    pub fn union_finite(name: impl Into<String>, parts: Vec<AxiomSet>, extra: Vec<Formula>) -> AxiomSet {
        let mut rules: Vec<Rule> = parts.into_iter().map(|p| p.rule).collect();
        if !extra.is_empty() {
            rules.push(Rule::Finite(extra));
        }
        AxiomSet {
            name: name.into(),
            rule: Rule::Union(rules),
        }
    }
}

/// Looks up a named set. `params` supplies `beta0` for `LT1` and `NPsi3ddot`.
pub fn axiom_set(name: &str, params: &Params) -> Result<AxiomSet, AxiomSetError> {
    let prefixed_l11 = || Rule::Prefixed(vec![named::psi(1), named::psi(7), named::psi(12)]);
    let rule = match name {
        "L12" => Rule::Logical,
        "L2r" => Rule::LogicalClosed,
        "Xp" => Rule::Finite(named::xp()),
        "Yp" => Rule::Induction(InductionFlavor::Psi13),
        "XpPrime" => Rule::Finite(named::xp_prime()),
        "YpPrime" => Rule::Induction(InductionFlavor::Q10),
        "L11" => Rule::Union(vec![Rule::Logical, prefixed_l11()]),
        "LT1" => Rule::Union(vec![
            Rule::Logical,
            Rule::Prefixed(vec![named::beta0(&params.beta_conjuncts)?]),
        ]),
        "PrefixedL2r" => Rule::Prefixed(vec![
            named::psi(7),
            named::o0(),
            named::u27(),
            Formula::not(named::psi(1)),
        ]),
        "NPsi3dot" => Rule::Finite(named::n_psi3_dot()),
        "NPsi3ddot" => Rule::Finite(named::n_psi3_ddot(&named::beta1(&params.beta_conjuncts)?)),
        _ => return Err(AxiomSetError::Unknown(name.to_string())),
    };
    Ok(AxiomSet {
        name: name.to_string(),
        rule,
    })
}

/// Parses a comma-separated list of set names.
pub fn axiom_sets(names: &str, params: &Params) -> Result<Vec<AxiomSet>, AxiomSetError> {
    names
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|n| axiom_set(n, params))
        .collect()
}

/// First set in `sets` containing `f`.
pub fn find_member<'a>(sets: &'a [AxiomSet], f: &Formula) -> Option<&'a AxiomSet> {
    sets.iter().find(|s| s.contains(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::*;
    use crate::parser::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn set(name: &str) -> AxiomSet {
        axiom_set(name, &Params::default()).unwrap()
    }

    /// An open phi4 instance closed universally: in L2r but not L12.
    fn omega() -> Formula {
        f("(Ax1)(x1 = x1 -> (1 = 1 -> x1 = x1))")
    }

    #[test]
    fn finite_sets() {
        assert!(set("Xp").contains(&psi(7)));
        assert!(!set("Xp").contains(&q(1)));
        assert!(set("XpPrime").contains(&q(7)));
        assert!(!set("NPsi3dot").contains(&o6()));
        assert!(set("NPsi3dot").contains(&gamma2p()));
        assert_eq!(set("NPsi3ddot").finite_members().unwrap().len(), 4);
        assert_eq!(set("Xp").finite_members().unwrap().len(), 12);
    }

    #[test]
    fn logical_sets() {
        let inst = Formula::implies(psi(1), Formula::implies(psi(7), psi(1)));
        assert_eq!(logical_schema_of(&inst), Some(SchemaId::Phi4));
        assert!(set("L12").contains(&inst));
        assert!(set("L2r").contains(&inst));
        assert!(!set("L12").contains(&omega()));
        assert!(set("L2r").contains(&omega()));
        assert!(is_closed_logical(&omega()));
        // a partial closure is not a member
        assert!(!set("L2r").contains(&f("(Ax2)(x1 = x1 -> (x2 = x2 -> x1 = x1))")));
        assert!(!set("L2r").contains(&psi(1)));
    }

    #[test]
    fn prefixed_sets() {
        let l11_extra = prefix_chain(&[psi(1), psi(7), psi(12)], &omega());
        assert!(set("L11").contains(&l11_extra));
        assert!(!set("L12").contains(&l11_extra));
        let bad = prefix_chain(&[psi(1), psi(7), psi(12)], &psi(2));
        assert!(!set("L11").contains(&bad));
        let pre = prefix_chain(&[psi(7), o0(), u27(), Formula::not(psi(1))], &omega());
        assert!(set("PrefixedL2r").contains(&pre));
        assert_eq!(set("PrefixedL2r").relevant_instances(&[omega(), psi(1)]), vec![pre]);
        let lt = Formula::implies(beta0(&[psi(2)]).unwrap(), omega());
        assert!(set("LT1").contains(&lt));
    }

    #[test]
    fn induction_sets() {
        let inst = induction_instance(&f("x1 = x1"), InductionFlavor::Psi13, Var::x(1)).unwrap();
        assert!(set("Yp").contains(&inst));
        assert!(!set("YpPrime").contains(&inst));
        assert_eq!(set("Yp").relevant_instances(&[psi(1)]), vec![inst]);
    }

    #[test]
    fn names() {
        for n in SET_NAMES {
            assert!(axiom_set(n, &Params::default()).is_ok());
        }
        assert!(matches!(axiom_set("L3", &Params::default()), Err(AxiomSetError::Unknown(_))));
        assert_eq!(axiom_sets("L12, Xp,NPsi3dot", &Params::default()).unwrap().len(), 3);
    }
}

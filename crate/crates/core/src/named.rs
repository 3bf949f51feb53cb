//! The specific arithmetic axioms and the constructed formulas used by the
//! consistency argument (`O0`, `u27`, `gamma*`, `xi`, `beta0`, ...).

use thiserror::Error;

use crate::formula::Formula;
use crate::parser::{parse_formula_with, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NamedError {
    #[error("unknown formula name `{0}`")]
    Unknown(String),
    #[error("beta0 needs at least one conjunct")]
    EmptyConjunction,
    #[error("in definition of `{name}`: {source}")]
    Parse { name: String, source: ParseError },
}

const PSI: [&str; 12] = [
    "(Ax1)(x1 = x1)",
    "(Ax1)(Ax2)(x1 = x2 -> x2 = x1)",
    "(Ax1)(Ax2)(Ax3)(x1 = x2 -> (x2 = x3 -> x1 = x3))",
    "(Ax1)(Ax2)(Ax3)(Ax4)(x1 = x2 -> (x3 = x4 -> x1 + x3 = x2 + x4))",
    "(Ax1)(Ax2)(Ax3)(Ax4)(x1 = x2 -> (x3 = x4 -> x1 * x3 = x2 * x4))",
    "(Ax1)(Ax2)(Ax3)(Ax4)(x1 = x2 -> (x3 = x4 -> (x1 < x3 -> x2 < x4)))",
    "(Ax1)~(1 = x1 + 1)",
    "(Ax1)(Ax2)(x1 + 1 = x2 + 1 -> x1 = x2)",
    "(Ax1)(Ax2)(x1 + (x2 + 1) = x1 + x2 + 1)",
    "(Ax1)(x1 * 1 = x1)",
    "(Ax1)(Ax2)(x1 * (x2 + 1) = x1 * x2 + x1)",
    // the printed inner quantifier of psi12 is read as existential
    "(Ax1)(Ax2)(x1 < x2 <-> (Ex3)(x1 + x3 = x2))",
];

// x, y of the printed axioms are x1, x2 here; the printed inner quantifiers
// of Q4, Q7, Q8 are read as existential.
const Q: [&str; 9] = [
    "(Ax1)(x1 + 0 = x1)",
    "(Ax1)(Ax2)(x1 * S(x2) = x1 * x2 + x1)",
    "(Ax1)(Ax2)(S(x1) = S(x2) -> x1 = x2)",
    "(Ax1)(Ex2)(x2 = S(x1))",
    "(Ax1)(Ax2)(x1 + S(x2) = S(x1 + x2))",
    "(Ax1)(x1 * 0 = 0)",
    "~(Ex1)(S(x1) + 1 = 1)",
    "(Ax1)(Ax2)((Ex3)(S(x3) + x1 = x2) <-> x1 < x2)",
    "(Ax1)~(S(x1) = 0)",
];

fn lit(name: &str, text: &str) -> Formula {
    parse_formula_with(text, &|_| None)
        .unwrap_or_else(|e| panic!("built-in formula {name} does not parse: {e}"))
}

/// `psi<n>` for `n` in `1..=12`.
pub fn psi(n: usize) -> Formula {
    assert!((1..=12).contains(&n), "psi{n} does not exist");
    lit("psi", PSI[n - 1])
}

/// `Q<n>` for `n` in `1..=9`.
pub fn q(n: usize) -> Formula {
    assert!((1..=9).contains(&n), "Q{n} does not exist");
    lit("Q", Q[n - 1])
}

pub fn xp() -> Vec<Formula> {
    (1..=12).map(psi).collect()
}

pub fn xp_prime() -> Vec<Formula> {
    (1..=9).map(q).collect()
}

/// `alpha -> delta`.
pub fn prefix_formula(alpha: &Formula, delta: &Formula) -> Formula {
    Formula::implies(alpha.clone(), delta.clone())
}

/// `a1 -> (a2 -> (... -> base))`.
pub fn prefix_chain(prefixes: &[Formula], base: &Formula) -> Formula {
    prefixes
        .iter()
        .rev()
        .fold(base.clone(), |acc, p| prefix_formula(p, &acc))
}

pub fn o0() -> Formula {
    Formula::iff(psi(7), Formula::not(Formula::not(psi(1))))
}

pub fn u27() -> Formula {
    lit("u27", "~(1 < 1)")
}

pub fn o6() -> Formula {
    Formula::implies(o0(), Formula::implies(psi(7), psi(1)))
}

pub fn alpha2x() -> Formula {
    Formula::implies(psi(1), psi(7))
}

pub fn gamma2p() -> Formula {
    Formula::implies(o0(), u27())
}

pub fn gamma0p() -> Formula {
    Formula::implies(Formula::implies(psi(7), psi(1)), psi(12))
}

pub fn gamma0() -> Formula {
    Formula::implies(u27(), gamma0p())
}

pub fn gamma4p() -> Formula {
    Formula::implies(gamma0p(), o0())
}

pub fn xi() -> Formula {
    prefix_chain(&[psi(7), psi(1)], &psi(12))
}

/// `c1 /\ ... /\ ck /\ psi1 /\ psi7 /\ psi12`, left-nested.
pub fn beta0(conjuncts: &[Formula]) -> Result<Formula, NamedError> {
    let mut it = conjuncts.iter().cloned().chain([psi(1), psi(7), psi(12)]);
    if conjuncts.is_empty() {
        return Err(NamedError::EmptyConjunction);
    }
    let first = it.next().expect("non-empty");
    Ok(it.fold(first, Formula::and))
}

pub fn beta1(conjuncts: &[Formula]) -> Result<Formula, NamedError> {
    Ok(prefix_chain(&[psi(1), psi(7), psi(12)], &beta0(conjuncts)?))
}

/// `psi7 -> delta`.
pub fn delta00(delta: &Formula) -> Formula {
    prefix_formula(&psi(7), delta)
}

/// The double-prefix reading `psi7 -> (psi7 -> delta)`.
pub fn delta00_double(delta: &Formula) -> Formula {
    prefix_formula(&psi(7), &delta00(delta))
}

/// The members of the finite set `NPsi3dot`.
pub fn n_psi3_dot() -> Vec<Formula> {
    vec![Formula::implies(o0(), gamma0()), gamma2p(), gamma4p()]
}

/// The members of `NPsi3ddot`, which depends on `beta1`.
pub fn n_psi3_ddot(beta1: &Formula) -> Vec<Formula> {
    vec![
        prefix_chain(&[o0(), u27()], beta1),
        Formula::implies(o0(), gamma0()),
        gamma2p(),
        gamma4p(),
    ]
}

/// Free parameters of the constructions: the witness `alpha'`, the sentence
/// `delta`, and the extra conjuncts of `beta0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub alpha_p: Formula,
    pub delta: Formula,
    pub beta_conjuncts: Vec<Formula>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            alpha_p: u27(),
            delta: psi(1),
            beta_conjuncts: vec![psi(2)],
        }
    }
}

pub const NAMES: &[&str] = &[
    "O0", "u27", "O6", "alpha2x", "gamma2p", "gamma0p", "gamma0", "gamma4p", "xi", "beta0", "beta1", "delta",
    "delta00", "delta00dd", "alpha_p",
];

impl Params {
    /// Resolves a formula name: `psi1`..`psi12`, `Q1`..`Q9`, or one of [`NAMES`].
    pub fn named_formula(&self, name: &str) -> Result<Formula, NamedError> {
        if let Some(n) = name.strip_prefix("psi").and_then(|n| n.parse::<usize>().ok()) {
            if (1..=12).contains(&n) {
                return Ok(psi(n));
            }
        }
        if let Some(n) = name.strip_prefix('Q').and_then(|n| n.parse::<usize>().ok()) {
            if (1..=9).contains(&n) {
                return Ok(q(n));
            }
        }
        Ok(match name {
            "O0" => o0(),
            "u27" => u27(),
            "O6" => o6(),
            "alpha2x" => alpha2x(),
            "gamma2p" => gamma2p(),
            "gamma0p" => gamma0p(),
            "gamma0" => gamma0(),
            "gamma4p" => gamma4p(),
            "xi" => xi(),
            "beta0" => beta0(&self.beta_conjuncts)?,
            "beta1" => beta1(&self.beta_conjuncts)?,
            "delta" => self.delta.clone(),
            "delta00" => delta00(&self.delta),
            "delta00dd" => delta00_double(&self.delta),
            "alpha_p" => self.alpha_p.clone(),
            _ => return Err(NamedError::Unknown(name.to_string())),
        })
    }

    /// Parses formula text in which the names above may appear as atoms.
    pub fn parse(&self, text: &str) -> Result<Formula, ParseError> {
        parse_formula_with(text, &|n| self.named_formula(n).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn constructions() {
        assert_eq!(o0(), Formula::iff(psi(7), Formula::not(Formula::not(psi(1)))));
        assert_eq!(gamma2p(), Formula::implies(o0(), u27()));
        assert_eq!(delta00(&psi(1)), Formula::implies(psi(7), psi(1)));
        assert_eq!(u27(), f("~(1 < 1)"));
        assert_eq!(psi(7), f("(Ax1)~(1 = x1 + 1)"));
        assert_eq!(o6(), Formula::implies(o0(), Formula::implies(psi(7), psi(1))));
    }

    #[test]
    fn prefixing() {
        assert_eq!(prefix_formula(&psi(7), &psi(1)), Formula::implies(psi(7), psi(1)));
        assert_eq!(prefix_formula(&psi(7), &psi(7)), Formula::implies(psi(7), psi(7)));
        let beta = psi(2);
        let chained = prefix_chain(&[psi(7), o0(), u27(), Formula::not(psi(1))], &beta);
        let expected = Formula::implies(
            psi(7),
            Formula::implies(o0(), Formula::implies(u27(), Formula::implies(Formula::not(psi(1)), beta))),
        );
        assert_eq!(chained, expected);
    }

    #[test]
    fn beta_formulas() {
        assert_eq!(beta0(&[]), Err(NamedError::EmptyConjunction));
        let b0 = beta0(&[psi(2)]).unwrap();
        assert_eq!(
            b0,
            Formula::and(Formula::and(Formula::and(psi(2), psi(1)), psi(7)), psi(12))
        );
        assert_eq!(beta1(&[psi(2)]).unwrap(), prefix_chain(&[psi(1), psi(7), psi(12)], &b0));
    }

    #[test]
    fn axioms_are_sentences() {
        for a in xp().into_iter().chain(xp_prime()).chain(n_psi3_dot()) {
            assert!(a.is_sentence(), "{a}");
        }
        for a in n_psi3_ddot(&beta1(&[psi(2)]).unwrap()) {
            assert!(a.is_sentence(), "{a}");
        }
    }

    #[test]
    fn names_resolve() {
        let p = Params::default();
        for n in NAMES {
            assert!(p.named_formula(n).is_ok(), "{n}");
        }
        assert_eq!(p.named_formula("psi13"), Err(NamedError::Unknown("psi13".into())));
        assert_eq!(p.parse("alpha_p -> psi7").unwrap(), Formula::implies(u27(), psi(7)));
        assert_eq!(p.named_formula("xi").unwrap(), Formula::implies(psi(7), Formula::implies(psi(1), psi(12))));
    }
}

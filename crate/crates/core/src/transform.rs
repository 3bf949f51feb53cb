//! Proof transforms: deduction theorem, reductio and explosion.

use thiserror::Error;

use crate::axioms::AxiomSet;
use crate::formula::Formula;
use crate::kernel::{check_proof, CheckFailure, Justification, Proof};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("discharged formula is not a sentence: {0}")]
    NotASentence(Formula),
    #[error("input proof does not check: {0}")]
    Check(CheckFailure),
    #[error("input proof is empty")]
    Empty,
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn precheck(p: &Proof, axioms: &[AxiomSet]) -> Result<(), TransformError> {
    if p.is_empty() {
        return Err(TransformError::Empty);
    }
    let r = check_proof(p, axioms);
    match r.failure {
        Some(f) => Err(TransformError::Check(f)),
        None => Ok(()),
    }
}

/// Appends the 5-step derivation of `a -> a`; returns its last index.
pub fn push_identity(p: &mut Proof, a: &Formula) -> usize {
    let aa = imp(a, a);
    let s1 = p.push_axiom(imp(a, &imp(&aa, a)), "phi4");
    let s2 = p.push_axiom(imp(&imp(a, &imp(&aa, a)), &imp(&imp(a, &aa), &aa)), "phi1");
    let s3 = p.push_mp(s1, s2);
    let s4 = p.push_axiom(imp(a, &aa), "phi4");
    p.push_mp(s4, s3)
}

/// From step `i` proving `b`, derives `a -> b`.
pub fn push_weaken(p: &mut Proof, i: usize, a: &Formula) -> usize {
    let b = p.formula(i).clone();
    let k = p.push_axiom(imp(&b, &imp(a, &b)), "phi4");
    p.push_mp(i, k)
}

/// From `a -> (b -> c)` at `i` and `a -> b` at `j`, derives `a -> c`.
pub fn push_distribute(p: &mut Proof, i: usize, j: usize) -> usize {
    let (a, bc) = p.formula(i).as_implication().expect("a -> (b -> c)");
    let (b, c) = bc.as_implication().expect("b -> c");
    let (a, b, c) = (a.clone(), b.clone(), c.clone());
    let ax = p.push_axiom(imp(&imp(&a, &imp(&b, &c)), &imp(&imp(&a, &b), &imp(&a, &c))), "phi1");
    let k = p.push_mp(i, ax);
    p.push_mp(j, k)
}

/// From `a -> b` at `i` and `b -> c` at `j`, derives `a -> c`.
pub fn push_syllogism(p: &mut Proof, i: usize, j: usize) -> usize {
    let a = p.formula(i).as_implication().expect("a -> b").0.clone();
    let lifted = push_weaken(p, j, &a);
    push_distribute(p, lifted, i)
}

/// Turns a proof of `beta` from `X + {alpha}` into a proof of
/// `alpha -> beta` from `X`. Every hypothesis equal to `alpha` is discharged.
pub fn deduction_transform(p: &Proof, alpha: &Formula, axioms: &[AxiomSet]) -> Result<Proof, TransformError> {
    if !alpha.is_sentence() {
        return Err(TransformError::NotASentence(alpha.clone()));
    }
    precheck(p, axioms)?;
    Ok(discharge(p, alpha))
}

/// The per-step construction behind [`deduction_transform`], without the
/// preconditions. Sound whenever `alpha` has no free variable that a gen
/// step in `p` generalizes.
pub(crate) fn discharge(p: &Proof, alpha: &Formula) -> Proof {
    let mut out = Proof::new();
    for h in &p.hyps {
        if h.formula != *alpha {
            out.add_hyp(h.id.clone(), h.formula.clone());
        }
    }
    let mut identity: Option<usize> = None;
    // map[k] = index in `out` of `alpha -> step k`
    let mut map: Vec<usize> = Vec::with_capacity(p.steps.len());
    let n = p.steps.len();
    for (pos, s) in p.steps.iter().enumerate() {
        let lifted = match &s.justification {
            // the conclusion has to be the last step, so the final use is not shared
            Justification::Hyp(id) if p.hyp(id) == Some(alpha) && pos + 1 == n => push_identity(&mut out, alpha),
            Justification::Hyp(id) if p.hyp(id) == Some(alpha) => {
                *identity.get_or_insert_with(|| push_identity(&mut out, alpha))
            }
            Justification::Hyp(_) | Justification::Axiom { .. } => {
                let k = out.push(s.formula.clone(), s.justification.clone());
                push_weaken(&mut out, k, alpha)
            }
            Justification::Mp(i, j) => push_distribute(&mut out, map[j - 1], map[i - 1]),
            Justification::Gen(i, x) => {
                let g = out.push_gen(map[i - 1], *x);
                let body = p.formula(*i).clone();
                let ax = out.push_axiom(
                    imp(&Formula::forall(*x, imp(alpha, &body)), &imp(alpha, &Formula::forall(*x, body))),
                    "phi12",
                );
                out.push_mp(g, ax)
            }
        };
        map.push(lifted);
    }
    out
}

/// Appends the fixed tail that turns `a -> b` (step `i`) and `a -> ~b`
/// (step `j`) into `~a`; returns its last index.
pub fn push_reductio_tail(p: &mut Proof, i: usize, j: usize) -> usize {
    let (a, b) = p.formula(i).as_implication().expect("a -> b");
    let (a, b) = (a.clone(), b.clone());
    let na = not(&a);
    let nna = not(&na);
    // ~b -> (b -> ~a)
    let t1 = p.push_axiom(imp(&not(&b), &imp(&b, &na)), "phi3");
    let a_b_na = push_syllogism(p, j, t1);
    let a_na = push_distribute(p, a_b_na, i);
    // ~~a -> (~a -> a), (~a -> a) -> a
    let t2 = p.push_axiom(imp(&nna, &imp(&na, &a)), "phi3");
    let t3 = p.push_axiom(imp(&imp(&na, &a), &a), "phi2");
    let nna_a = push_syllogism(p, t2, t3);
    let nna_na = push_syllogism(p, nna_a, a_na);
    let t4 = p.push_axiom(imp(&imp(&nna, &na), &na), "phi2");
    p.push_mp(nna_na, t4)
}

/// From proofs of `beta` and `~beta` out of `X + {alpha}`, a proof of `~alpha` from `X`.
pub fn reductio(p_beta: &Proof, p_not_beta: &Proof, alpha: &Formula, axioms: &[AxiomSet]) -> Result<Proof, TransformError> {
    let d1 = deduction_transform(p_beta, alpha, axioms)?;
    let d2 = deduction_transform(p_not_beta, alpha, axioms)?;
    let mut out = d1;
    let i = out.len();
    let j = *out.append(&d2).last().expect("non-empty");
    push_reductio_tail(&mut out, i, j);
    Ok(out)
}

/// Appends `~b -> (b -> g)` and two mps, given `b` at `i` and `~b` at `j`.
pub fn push_explosion(p: &mut Proof, i: usize, j: usize, goal: &Formula) -> usize {
    let b = p.formula(i).clone();
    let ax = p.push_axiom(imp(&not(&b), &imp(&b, goal)), "phi3");
    let k = p.push_mp(j, ax);
    p.push_mp(i, k)
}

/// From proofs of `beta` and `~beta` out of `X`, a proof of `goal` from `X`.
pub fn explosion(p_beta: &Proof, p_not_beta: &Proof, goal: &Formula, axioms: &[AxiomSet]) -> Result<Proof, TransformError> {
    precheck(p_beta, axioms)?;
    precheck(p_not_beta, axioms)?;
    let mut out = p_beta.clone();
    let i = out.len();
    let j = *out.append(p_not_beta).last().expect("non-empty");
    push_explosion(&mut out, i, j, goal);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::axiom_set;
    use crate::kernel::check_proof;
    use crate::named::{psi, u27, Params};

    fn l12() -> Vec<AxiomSet> {
        vec![axiom_set("L12", &Params::default()).unwrap()]
    }

    fn assert_checks(p: &Proof) {
        let r = check_proof(p, &l12());
        assert!(r.ok, "{:?}\n{p:#?}", r.failure);
    }

    #[test]
    fn identity_case() {
        let p = Proof::with_hyps([psi(7)]);
        let mut p = p;
        p.push_hyp(psi(7));
        let d = deduction_transform(&p, &psi(7), &l12()).unwrap();
        assert_checks(&d);
        assert!(d.hyps.is_empty());
        assert_eq!(d.conclusion(), Some(&imp(&psi(7), &psi(7))));
        assert_eq!(d.len(), 5);
    }

    #[test]
    fn axiom_case() {
        let w = imp(&psi(1), &imp(&psi(2), &psi(1)));
        let mut p = Proof::new();
        p.push_axiom(w.clone(), "phi4");
        let d = deduction_transform(&p, &psi(7), &l12()).unwrap();
        assert_checks(&d);
        assert_eq!(d.conclusion(), Some(&imp(&psi(7), &w)));
    }

    #[test]
    fn mp_case() {
        let mut p = Proof::new();
        p.push_hyp(psi(7));
        p.push_axiom(imp(&psi(7), &imp(&psi(1), &psi(7))), "phi4");
        p.push_mp(1, 2);
        let d = deduction_transform(&p, &psi(7), &l12()).unwrap();
        assert_checks(&d);
        assert!(d.hyps.is_empty());
        assert_eq!(d.conclusion(), Some(&imp(&psi(7), &imp(&psi(1), &psi(7)))));
    }

    #[test]
    fn open_alpha_rejected() {
        let mut p = Proof::new();
        p.push_hyp(psi(7));
        let open = crate::parse_formula("x1 = x1").unwrap();
        assert!(matches!(
            deduction_transform(&p, &open, &l12()),
            Err(TransformError::NotASentence(_))
        ));
    }

    #[test]
    fn reductio_and_explosion() {
        // beta = alpha: pb is the hypothesis itself, pnb uses ~alpha from X
        let a = psi(7);
        let mut pb = Proof::new();
        pb.push_hyp(a.clone());
        let mut pnb = Proof::new();
        pnb.push_hyp(not(&a));
        let r = reductio(&pb, &pnb, &a, &l12()).unwrap();
        assert_checks(&r);
        assert_eq!(r.conclusion(), Some(&not(&a)));
        assert_eq!(r.hyp_formulas(), vec![not(&a)]);

        let mut p1 = Proof::new();
        p1.push_hyp(psi(1));
        let mut p2 = Proof::new();
        p2.push_hyp(not(&psi(1)));
        let e = explosion(&p1, &p2, &u27(), &l12()).unwrap();
        assert_checks(&e);
        assert_eq!(e.conclusion(), Some(&u27()));
        assert_eq!(e.hyps.len(), 2);
        let e = explosion(&p1, &p2, &psi(1), &l12()).unwrap();
        assert_eq!(e.conclusion(), Some(&psi(1)));
    }

    #[test]
    fn failing_input_propagates() {
        let mut bad = Proof::new();
        bad.push_axiom(psi(1), "L12");
        assert!(matches!(deduction_transform(&bad, &psi(7), &l12()), Err(TransformError::Check(_))));
        assert!(matches!(explosion(&bad, &bad, &psi(7), &l12()), Err(TransformError::Check(_))));
    }
}

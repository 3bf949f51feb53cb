//! Derived inference rules, each expanded into a fixed run of Hilbert steps
//! over `phi1`..`phi10`. Every function appends to a proof and returns the
//! index of the derived step.

use crate::formula::Formula;
use crate::kernel::{Justification, Proof};
use crate::transform::{push_distribute, push_identity, push_reductio_tail, push_syllogism, push_weaken};

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn parts(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
        _ => panic!("expected a binary connective, got {f}"),
    }
}

fn negated(f: &Formula) -> &Formula {
    f.as_negation().unwrap_or_else(|| panic!("expected a negation, got {f}"))
}

/// Re-derives step `i` as the last step.
pub fn reiterate(p: &mut Proof, i: usize) -> usize {
    if i == p.len() {
        return i;
    }
    let f = p.formula(i).clone();
    let id = push_identity(p, &f);
    p.push_mp(i, id)
}

/// `~~a |- a`
pub fn dne(p: &mut Proof, i: usize) -> usize {
    let na = negated(p.formula(i)).clone();
    let a = negated(&na).clone();
    let t = p.push_axiom(imp(&not(&na), &imp(&na, &a)), "phi3");
    let k = p.push_mp(i, t);
    let t = p.push_axiom(imp(&imp(&na, &a), &a), "phi2");
    p.push_mp(k, t)
}

/// `a |- ~~a`
pub fn dni(p: &mut Proof, i: usize) -> usize {
    let na = not(p.formula(i));
    let w = push_weaken(p, i, &na);
    let id = push_identity(p, &na);
    push_reductio_tail(p, w, id)
}

/// `c -> d, ~d |- ~c`
pub fn mt(p: &mut Proof, i: usize, j: usize) -> usize {
    let c = parts(p.formula(i)).0;
    let w = push_weaken(p, j, &c);
    push_reductio_tail(p, i, w)
}

/// `~(a -> b) |- a`
pub fn neg_imp_ante(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(negated(p.formula(i)));
    let t = p.push_axiom(imp(&not(&a), &imp(&a, &b)), "phi3");
    let nna = mt(p, t, i);
    dne(p, nna)
}

/// `~(a -> b) |- ~b`
pub fn neg_imp_conseq(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(negated(p.formula(i)));
    let t = p.push_axiom(imp(&b, &imp(&a, &b)), "phi4");
    mt(p, t, i)
}

/// `a /\ b |- a`
pub fn and_left(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(p.formula(i));
    let t = p.push_axiom(imp(&Formula::and(a.clone(), b), &a), "phi5");
    p.push_mp(i, t)
}

/// `a /\ b |- b`
pub fn and_right(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(p.formula(i));
    let t = p.push_axiom(imp(&Formula::and(a, b.clone()), &b), "phi6");
    p.push_mp(i, t)
}

/// `~(a \/ b) |- ~a`
pub fn neg_or_left(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(negated(p.formula(i)));
    let t = p.push_axiom(imp(&a, &Formula::or(a.clone(), b)), "phi8");
    mt(p, t, i)
}

/// `~(a \/ b) |- ~b`
pub fn neg_or_right(p: &mut Proof, i: usize) -> usize {
    let (a, b) = parts(negated(p.formula(i)));
    let t = p.push_axiom(imp(&b, &Formula::or(a, b.clone())), "phi9");
    mt(p, t, i)
}

/// `~a |- a -> b`
pub fn imp_from_neg_ante(p: &mut Proof, i: usize, b: &Formula) -> usize {
    let a = negated(p.formula(i)).clone();
    let t = p.push_axiom(imp(&not(&a), &imp(&a, b)), "phi3");
    p.push_mp(i, t)
}

/// `a, ~b |- ~(a -> b)`
pub fn neg_imp_intro(p: &mut Proof, i: usize, j: usize) -> usize {
    let a = p.formula(i).clone();
    let b = negated(p.formula(j)).clone();
    let x = imp(&a, &b);
    let id = push_identity(p, &x);
    let wa = push_weaken(p, i, &x);
    let xb = push_distribute(p, id, wa);
    let xnb = push_weaken(p, j, &x);
    push_reductio_tail(p, xb, xnb)
}

/// `a, b |- a /\ b`
pub fn and_intro(p: &mut Proof, i: usize, j: usize) -> usize {
    let (a, b) = (p.formula(i).clone(), p.formula(j).clone());
    let t = p.push_axiom(imp(&a, &imp(&b, &Formula::and(a.clone(), b.clone()))), "phi7");
    let k = p.push_mp(i, t);
    p.push_mp(j, k)
}

/// `~a |- ~(a /\ b)`
pub fn neg_and_intro_left(p: &mut Proof, i: usize, b: &Formula) -> usize {
    let a = negated(p.formula(i)).clone();
    let x = Formula::and(a.clone(), b.clone());
    let t = p.push_axiom(imp(&x, &a), "phi5");
    let w = push_weaken(p, i, &x);
    push_reductio_tail(p, t, w)
}

/// `~b |- ~(a /\ b)`
pub fn neg_and_intro_right(p: &mut Proof, a: &Formula, j: usize) -> usize {
    let b = negated(p.formula(j)).clone();
    let x = Formula::and(a.clone(), b.clone());
    let t = p.push_axiom(imp(&x, &b), "phi6");
    let w = push_weaken(p, j, &x);
    push_reductio_tail(p, t, w)
}

/// `a |- a \/ b`
pub fn or_intro_left(p: &mut Proof, i: usize, b: &Formula) -> usize {
    let a = p.formula(i).clone();
    let t = p.push_axiom(imp(&a, &Formula::or(a.clone(), b.clone())), "phi8");
    p.push_mp(i, t)
}

/// `b |- a \/ b`
pub fn or_intro_right(p: &mut Proof, a: &Formula, j: usize) -> usize {
    let b = p.formula(j).clone();
    let t = p.push_axiom(imp(&b, &Formula::or(a.clone(), b.clone())), "phi9");
    p.push_mp(j, t)
}

/// `~a, ~b |- ~(a \/ b)`
pub fn neg_or_intro(p: &mut Proof, i: usize, j: usize) -> usize {
    let a = negated(p.formula(i)).clone();
    let b = negated(p.formula(j)).clone();
    let x = Formula::or(a.clone(), b.clone());
    let nx = not(&x);
    let an = imp_from_neg_ante(p, i, &nx);
    let bn = imp_from_neg_ante(p, j, &nx);
    let t = p.push_axiom(imp(&imp(&a, &nx), &imp(&imp(&b, &nx), &imp(&x, &nx))), "phi10");
    let k = p.push_mp(an, t);
    let xn = p.push_mp(bn, k);
    let id = push_identity(p, &x);
    push_reductio_tail(p, id, xn)
}

/// `a -> g |- ~g -> ~a`
pub fn contrapose(p: &mut Proof, i: usize) -> usize {
    let ag = p.formula(i).clone();
    let g = parts(&ag).1;
    let ng = not(&g);
    let mut sub = Proof::new();
    let h1 = sub.push_hyp(ag.clone());
    let h2 = sub.push_hyp(ng.clone());
    mt(&mut sub, h1, h2);
    let d = discharge_lazy(&sub, &ng);
    p.embed(&d, &|f| (*f == ag).then_some(i))
}

/// `a -> g, ~a -> g |- g`
pub fn cases(p: &mut Proof, i: usize, j: usize) -> usize {
    let g = parts(p.formula(i)).1;
    let ng_na = contrapose(p, i);
    let ng_g = push_syllogism(p, ng_na, j);
    let t = p.push_axiom(imp(&imp(&not(&g), &g), &g), "phi2");
    p.push_mp(ng_g, t)
}

/// Discharges `alpha`, lifting only the steps that depend on it.
///
/// Sound when no gen step generalizes a variable free in `alpha`.
pub fn discharge_lazy(p: &Proof, alpha: &Formula) -> Proof {
    let mut out = Proof::new();
    for h in &p.hyps {
        if h.formula != *alpha {
            out.add_hyp(h.id.clone(), h.formula.clone());
        }
    }
    let n = p.len();
    let mut plain: Vec<Option<usize>> = vec![None; n];
    let mut lifted: Vec<Option<usize>> = vec![None; n];
    let mut identity: Option<usize> = None;

    fn lift(out: &mut Proof, plain: &[Option<usize>], lifted: &mut [Option<usize>], k: usize, alpha: &Formula) -> usize {
        if let Some(l) = lifted[k] {
            return l;
        }
        let l = push_weaken(out, plain[k].expect("plain copy"), alpha);
        lifted[k] = Some(l);
        l
    }

    for (k, s) in p.steps.iter().enumerate() {
        match &s.justification {
            Justification::Hyp(id) if p.hyp(id) == Some(alpha) => {
                lifted[k] = Some(*identity.get_or_insert_with(|| push_identity(&mut out, alpha)));
            }
            Justification::Hyp(_) | Justification::Axiom { .. } => {
                plain[k] = Some(out.push(s.formula.clone(), s.justification.clone()));
            }
            Justification::Mp(i, j) => {
                let (i, j) = (i - 1, j - 1);
                if let (Some(pi), Some(pj)) = (plain[i], plain[j]) {
                    plain[k] = Some(out.push(s.formula.clone(), Justification::Mp(pi, pj)));
                } else {
                    let li = lift(&mut out, &plain, &mut lifted, i, alpha);
                    let lj = lift(&mut out, &plain, &mut lifted, j, alpha);
                    lifted[k] = Some(push_distribute(&mut out, lj, li));
                }
            }
            Justification::Gen(i, x) => {
                let i = i - 1;
                if let Some(pi) = plain[i] {
                    plain[k] = Some(out.push(s.formula.clone(), Justification::Gen(pi, *x)));
                } else {
                    let g = out.push_gen(lifted[i].expect("lifted"), *x);
                    let body = p.steps[i].formula.clone();
                    let ax = out.push_axiom(
                        imp(&Formula::forall(*x, imp(alpha, &body)), &imp(alpha, &Formula::forall(*x, body))),
                        "phi12",
                    );
                    lifted[k] = Some(out.push_mp(g, ax));
                }
            }
        }
    }
    let last = lift(&mut out, &plain, &mut lifted, n - 1, alpha);
    reiterate(&mut out, last);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{axiom_set, AxiomSet};
    use crate::kernel::check_proof;
    use crate::named::{psi, Params};

    fn l12() -> Vec<AxiomSet> {
        vec![axiom_set("L12", &Params::default()).unwrap()]
    }

    fn check(p: &Proof, expect: &Formula) {
        let r = check_proof(p, &l12());
        assert!(r.ok, "{:?}", r.failure);
        assert_eq!(p.conclusion(), Some(expect));
    }

    fn a() -> Formula {
        psi(1)
    }
    fn b() -> Formula {
        psi(7)
    }

    #[test]
    fn eliminations() {
        let mut p = Proof::new();
        let h = p.push_hyp(not(&not(&a())));
        dne(&mut p, h);
        check(&p, &a());

        let mut p = Proof::new();
        let h = p.push_hyp(not(&imp(&a(), &b())));
        neg_imp_ante(&mut p, h);
        check(&p, &a());
        neg_imp_conseq(&mut p, h);
        check(&p, &not(&b()));

        let mut p = Proof::new();
        let h = p.push_hyp(not(&Formula::or(a(), b())));
        neg_or_left(&mut p, h);
        check(&p, &not(&a()));
        neg_or_right(&mut p, h);
        check(&p, &not(&b()));

        let mut p = Proof::new();
        let h = p.push_hyp(Formula::and(a(), b()));
        and_left(&mut p, h);
        check(&p, &a());
        and_right(&mut p, h);
        check(&p, &b());

        let mut p = Proof::new();
        let i = p.push_hyp(imp(&a(), &b()));
        let j = p.push_hyp(not(&b()));
        mt(&mut p, i, j);
        check(&p, &not(&a()));
    }

    #[test]
    fn introductions() {
        let mut p = Proof::new();
        let i = p.push_hyp(a());
        let j = p.push_hyp(not(&b()));
        dni(&mut p, i);
        check(&p, &not(&not(&a())));
        neg_imp_intro(&mut p, i, j);
        check(&p, &not(&imp(&a(), &b())));
        neg_and_intro_right(&mut p, &a(), j);
        check(&p, &not(&Formula::and(a(), b())));
        let k = p.push_hyp(not(&a()));
        neg_and_intro_left(&mut p, k, &b());
        check(&p, &not(&Formula::and(a(), b())));
        neg_or_intro(&mut p, k, j);
        check(&p, &not(&Formula::or(a(), b())));
        imp_from_neg_ante(&mut p, k, &b());
        check(&p, &imp(&a(), &b()));
        or_intro_left(&mut p, i, &b());
        check(&p, &Formula::or(a(), b()));
        or_intro_right(&mut p, &b(), i);
        check(&p, &Formula::or(b(), a()));
        let m = p.push_hyp(b());
        and_intro(&mut p, i, m);
        check(&p, &Formula::and(a(), b()));
    }

    #[test]
    fn case_split() {
        let g = psi(12);
        let mut p = Proof::new();
        let i = p.push_hyp(imp(&a(), &g));
        let j = p.push_hyp(imp(&not(&a()), &g));
        cases(&mut p, i, j);
        check(&p, &g);
        assert_eq!(p.hyps.len(), 2);
    }

    #[test]
    fn lazy_discharge() {
        let mut p = Proof::new();
        let h = p.push_hyp(a());
        let k = p.push_hyp(imp(&a(), &b()));
        p.push_mp(h, k);
        let d = discharge_lazy(&p, &a());
        check(&d, &imp(&a(), &b()));
        assert_eq!(d.hyp_formulas(), vec![imp(&a(), &b())]);

        // conclusion independent of the discharged formula
        let mut p = Proof::new();
        p.push_hyp(a());
        p.push_hyp(b());
        let d = discharge_lazy(&p, &a());
        check(&d, &imp(&a(), &b()));

        // conclusion is the discharged formula, used earlier too
        let mut p = Proof::new();
        p.push_hyp(a());
        p.push_hyp(a());
        let d = discharge_lazy(&p, &a());
        check(&d, &imp(&a(), &a()));
    }
}

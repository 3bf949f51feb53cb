//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use hilbert_core::kernel::Proof;
use hilbert_core::schema::{instantiate, Binding, MetaVar, Schema, SchemaId};
use hilbert_core::{Formula, Term, Var};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn term(r: &mut StdRng, depth: u32, vars: &[u32]) -> Term {
    let leaf = depth == 0 || r.gen_bool(0.4);
    if leaf {
        return match r.gen_range(0..3) {
            0 if !vars.is_empty() => Term::var(*vars.choose(r).unwrap()),
            1 => Term::zero(),
            _ => Term::one(),
        };
    }
    match r.gen_range(0..3) {
        0 => Term::succ(term(r, depth - 1, vars)),
        1 => Term::add(term(r, depth - 1, vars), term(r, depth - 1, vars)),
        _ => Term::mul(term(r, depth - 1, vars), term(r, depth - 1, vars)),
    }
}

pub fn atom(r: &mut StdRng, vars: &[u32]) -> Formula {
    let (a, b) = (term(r, 1, vars), term(r, 1, vars));
    if r.gen_bool(0.5) {
        Formula::eq(a, b)
    } else {
        Formula::lt(a, b)
    }
}

/// A random formula. Quantifiers bind `x1`..`x3` when `quantified`.
pub fn formula(r: &mut StdRng, depth: u32, vars: &[u32], quantified: bool) -> Formula {
    if depth == 0 || r.gen_bool(0.25) {
        return atom(r, vars);
    }
    let d = depth - 1;
    match r.gen_range(0..if quantified { 7 } else { 5 }) {
        0 => Formula::not(formula(r, d, vars, quantified)),
        1 => Formula::implies(formula(r, d, vars, quantified), formula(r, d, vars, quantified)),
        2 => Formula::and(formula(r, d, vars, quantified), formula(r, d, vars, quantified)),
        3 => Formula::or(formula(r, d, vars, quantified), formula(r, d, vars, quantified)),
        4 => Formula::iff(formula(r, d, vars, quantified), formula(r, d, vars, quantified)),
        5 => Formula::forall(Var::x(r.gen_range(1..=3)), formula(r, d, vars, quantified)),
        _ => Formula::exists(Var::x(r.gen_range(1..=3)), formula(r, d, vars, quantified)),
    }
}

pub fn sentence(r: &mut StdRng, depth: u32, quantified: bool) -> Formula {
    formula(r, depth, &[1, 2], quantified).universal_closure()
}

/// Closed quantifier-free formula drawn from a small fixed atom pool, so
/// that atoms recur across formulas.
pub fn qf_sentence(r: &mut StdRng, depth: u32) -> Formula {
    let pool = [
        Formula::eq(Term::zero(), Term::zero()),
        Formula::eq(Term::one(), Term::zero()),
        Formula::lt(Term::zero(), Term::one()),
        Formula::lt(Term::one(), Term::one()),
    ];
    fn go(r: &mut StdRng, depth: u32, pool: &[Formula]) -> Formula {
        if depth == 0 || r.gen_bool(0.3) {
            return pool.choose(r).unwrap().clone();
        }
        let d = depth - 1;
        match r.gen_range(0..4) {
            0 => Formula::not(go(r, d, pool)),
            1 => Formula::implies(go(r, d, pool), go(r, d, pool)),
            2 => Formula::and(go(r, d, pool), go(r, d, pool)),
            _ => Formula::or(go(r, d, pool), go(r, d, pool)),
        }
    }
    go(r, depth, &pool)
}

const PROP_SCHEMATA: [SchemaId; 10] = [
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
];

pub fn prop_schema(r: &mut StdRng) -> SchemaId {
    *PROP_SCHEMATA.choose(r).unwrap()
}

/// Instantiates a propositional schema with formulas drawn from `pick`.
pub fn prop_instance(r: &mut StdRng, id: SchemaId, pick: &mut dyn FnMut(&mut StdRng) -> Formula) -> Formula {
    let s = Schema::get(id);
    let mut b = Binding::new();
    for m in s.metavars() {
        b = b.with(m, pick(r));
    }
    instantiate(&s, &b).expect("propositional schemata have no side conditions")
}

/// A `phi11` or `phi12` instance whose side condition holds, or `None` when
/// the random choice violates it.
pub fn quant_instance(r: &mut StdRng) -> Option<Formula> {
    let x = Var::x(r.gen_range(1..=3));
    if r.gen_bool(0.5) {
        let s = Schema::get(SchemaId::Phi11);
        let b = Binding::new()
            .with(MetaVar::Phi, formula(r, 3, &[1, 2, 3], true))
            .with_var(x)
            .with_term(term(r, 2, &[1, 2, 3]));
        instantiate(&s, &b).ok()
    } else {
        let s = Schema::get(SchemaId::Phi12);
        let b = Binding::new()
            .with(MetaVar::Phi, formula(r, 2, &[1, 2, 3], true))
            .with(MetaVar::Psi, formula(r, 2, &[1, 2, 3], true))
            .with_var(x);
        instantiate(&s, &b).ok()
    }
}

/// A random proof from `hyps` using `phi1`..`phi10`, MP and (optionally) gen.
/// About half the axiom instances reuse an earlier step as antecedent so MP
/// has something to fire on.
pub fn random_proof(r: &mut StdRng, hyps: &[Formula], len: usize, make: &dyn Fn(&mut StdRng) -> Formula, gen: bool) -> Proof {
    let mut p = Proof::new();
    for h in hyps {
        p.ensure_hyp(h);
    }
    while p.len() < len {
        let choice = r.gen_range(0..10);
        if choice < 2 && !hyps.is_empty() {
            p.push_hyp(hyps.choose(r).unwrap().clone());
            continue;
        }
        if choice < 6 && !p.is_empty() {
            let pairs: Vec<(usize, usize)> = (1..=p.len())
                .flat_map(|i| (1..=p.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| matches!(p.formula(j).as_implication(), Some((a, _)) if a == p.formula(i)))
                .collect();
            if let Some(&(i, j)) = pairs.choose(r) {
                p.push_mp(i, j);
                continue;
            }
        }
        if choice == 9 && gen && !p.is_empty() {
            let i = r.gen_range(1..=p.len());
            p.push_gen(i, Var::x(r.gen_range(1..=3)));
            continue;
        }
        let id = prop_schema(r);
        let existing: Vec<Formula> = p.steps.iter().map(|s| s.formula.clone()).collect();
        let (f, label) = if !existing.is_empty() && r.gen_bool(0.5) {
            let a = existing.choose(r).unwrap().clone();
            let b = make(r);
            (Formula::implies(a.clone(), Formula::implies(b, a)), "phi4")
        } else {
            let f = prop_instance(r, id, &mut |r| {
                if !existing.is_empty() && r.gen_bool(0.3) {
                    existing.choose(r).unwrap().clone()
                } else {
                    make(r)
                }
            });
            (f, id.name())
        };
        p.push_axiom(f, label);
    }
    p
}

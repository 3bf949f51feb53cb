//! Browser bindings: tautology test, proof check, bounded evaluation.
//! Every entry point takes text and returns display text.

use wasm_bindgen::prelude::*;

use hilbert_core::axioms::{axiom_sets, SET_NAMES};
use hilbert_core::kernel::check_proof;
use hilbert_core::named::Params;
use hilbert_core::script::{parse_formula_list, parse_proof};
use hilbert_core::semantics::{eval_arith, falsifying_valuation, skeletonize, BoundedModelConfig};

/// One `TAUT` or `NONTAUT <valuation>` line per input formula.
#[wasm_bindgen]
pub fn taut(text: &str) -> String {
    let formulas = match parse_formula_list(text, &Params::default()) {
        Ok(fs) => fs,
        Err(e) => return format!("error: {e}"),
    };
    let mut out = Vec::new();
    for f in formulas {
        let s = skeletonize(&f);
        out.push(match falsifying_valuation(&s) {
            Ok(None) => "TAUT".to_string(),
            Ok(Some(v)) => {
                let cells: Vec<String> = s
                    .atoms
                    .iter()
                    .zip(v)
                    .map(|(a, b)| format!("[{a}]={}", if b { "T" } else { "F" }))
                    .collect();
                format!("NONTAUT {}", cells.join(", "))
            }
            Err(e) => format!("error: {e}"),
        });
    }
    out.join("\n")
}

/// Checks a proof file against `axioms` (comma-separated; empty means all).
#[wasm_bindgen]
pub fn check(proof: &str, axioms: &str) -> String {
    let (p, params) = match parse_proof(proof) {
        Ok(x) => x,
        Err(e) => return format!("error: {e}"),
    };
    let names = if axioms.trim().is_empty() { SET_NAMES.join(",") } else { axioms.to_string() };
    let sets = match axiom_sets(&names, &params) {
        Ok(s) => s,
        Err(e) => return format!("error: {e}"),
    };
    let r = check_proof(&p, &sets);
    let mut lines: Vec<String> = r
        .flagged
        .iter()
        .map(|s| format!("warning: step {s}: gen over a variable free in a used hypothesis"))
        .collect();
    lines.push(match r.failure {
        None => format!("ok: {} steps", p.len()),
        Some(f) => format!("FAIL {f}"),
    });
    lines.join("\n")
}

/// `TRUE`, `FALSE` or `UNKNOWN` with quantifiers truncated at `bound`.
#[wasm_bindgen]
pub fn eval(formula: &str, bound: u32, positive: bool) -> String {
    let f = match Params::default().parse(formula) {
        Ok(f) => f,
        Err(e) => return format!("error: {e}"),
    };
    let cfg = if positive {
        BoundedModelConfig::positive(bound.into())
    } else {
        BoundedModelConfig::new(bound.into())
    };
    match eval_arith(&f, &cfg) {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taut_lines() {
        let out = taut("psi1 -> psi1\npsi1 -> psi7");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "TAUT");
        assert!(lines[1].starts_with("NONTAUT [(Ax1)(x1 = x1)]=T"));
        assert!(taut("psi1 ->").starts_with("error"));
    }

    #[test]
    fn check_results() {
        let proof = "hyp a psi7\n1. psi7 ; hyp a\n2. psi7 -> (psi1 -> psi7) ; axiom phi4\n3. psi1 -> psi7 ; mp 1 2\n";
        assert_eq!(check(proof, "L12"), "ok: 3 steps");
        assert!(check("1. psi7 ; axiom L12\n", "").starts_with("FAIL step 1"));
        assert!(check(proof, "Nope").starts_with("error"));
    }

    #[test]
    fn eval_results() {
        assert_eq!(eval("1 + 1 = S(1)", 5, false), "TRUE");
        assert_eq!(eval("(Ax1)(x1 < x1 + 1)", 20, false), "UNKNOWN");
        assert_eq!(eval("(Ax1)~(x1 = 0)", 20, false), "FALSE");
        assert_eq!(eval("(Ax1)~(x1 = 0)", 20, true), "UNKNOWN");
    }
}

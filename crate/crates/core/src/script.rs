//! The line-oriented proof file format.
//!
//! ```text
//! # comment
//! set delta psi1
//! hyp h1 (Ax1)~(1 = x1 + 1)
//! 1. (Ax1)~(1 = x1 + 1) ; hyp h1
//! 2. psi7 -> (psi1 -> psi7) ; axiom phi4
//! 3. psi1 -> psi7 ; mp 1 2
//! ```
//!
//! Formula text may use the named formulas (`psi7`, `O0`, `delta00`, ...);
//! `set` lines bind the parameters those names depend on.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Formula, Var};
use crate::kernel::{Justification, Proof};
use crate::named::Params;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError {
        line,
        message: message.into(),
    }
}

/// Applies a `set <name> <formula>` header to `params`.
///
/// `beta0` takes conjuncts separated by `;`.
pub fn apply_set(params: &mut Params, name: &str, text: &str) -> Result<(), String> {
    let parse = |t: &str| params.parse(t).map_err(|e| e.to_string());
    match name {
        "alpha_p" => params.alpha_p = parse(text)?,
        "delta" => params.delta = parse(text)?,
        "beta0" => {
            let conj = text.split(';').map(|t| parse(t.trim())).collect::<Result<Vec<_>, _>>()?;
            if conj.is_empty() {
                return Err("beta0 needs at least one conjunct".into());
            }
            params.beta_conjuncts = conj;
        }
        _ => return Err(format!("unknown parameter `{name}`")),
    }
    Ok(())
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

fn parse_var(s: &str) -> Option<Var> {
    s.strip_prefix('x')?.parse::<u32>().ok().and_then(Var::new)
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let index = |w: &str| w.parse::<usize>().map_err(|_| format!("bad step index `{w}`"));
    match words.as_slice() {
        ["hyp", id] => Ok(Justification::hyp(*id)),
        ["axiom", set] => Ok(Justification::axiom(*set)),
        ["mp", i, j] => Ok(Justification::Mp(index(i)?, index(j)?)),
        ["gen", i, x] => Ok(Justification::Gen(
            index(i)?,
            parse_var(x).ok_or_else(|| format!("bad variable `{x}`"))?,
        )),
        _ => Err(format!("bad justification `{}`", text.trim())),
    }
}

/// Parses a proof file. Returns the proof and the parameters its `set` lines define.
pub fn parse_proof(text: &str) -> Result<(Proof, Params), ScriptError> {
    let mut params = Params::default();
    let mut proof = Proof::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = split_word(line);
        match head {
            "set" => {
                let (name, body) = split_word(rest);
                apply_set(&mut params, name, body).map_err(|m| err(line_no, m))?;
            }
            "hyp" => {
                let (id, body) = split_word(rest);
                if id.is_empty() || body.is_empty() {
                    return Err(err(line_no, "expected `hyp <id> <formula>`"));
                }
                let f = params.parse(body).map_err(|e| err(line_no, e.to_string()))?;
                if !proof.add_hyp(id, f) {
                    return Err(err(line_no, format!("duplicate hypothesis id `{id}`")));
                }
            }
            _ => {
                let Some(num) = head.strip_suffix('.') else {
                    return Err(err(line_no, format!("unexpected `{head}`")));
                };
                let index: usize = num.parse().map_err(|_| err(line_no, format!("bad step number `{num}`")))?;
                if index != proof.len() + 1 {
                    return Err(err(line_no, format!("step {index} out of sequence")));
                }
                let Some((ftext, jtext)) = rest.rsplit_once(';') else {
                    return Err(err(line_no, "missing `; <justification>`"));
                };
                let f = params.parse(ftext.trim()).map_err(|e| err(line_no, e.to_string()))?;
                let j = parse_justification(jtext).map_err(|m| err(line_no, m))?;
                proof.push(f, j);
            }
        }
    }
    Ok((proof, params))
}

/// Renders a proof in the file format. Formulas are written out in full.
pub fn write_proof(p: &Proof) -> String {
    let mut s = String::new();
    for h in &p.hyps {
        let _ = writeln!(s, "hyp {} {}", h.id, h.formula);
    }
    for st in &p.steps {
        let _ = writeln!(s, "{}. {} ; {}", st.index, st.formula, st.justification);
    }
    s
}

/// One formula per non-empty, non-comment line.
pub fn parse_formula_list(text: &str, params: &Params) -> Result<Vec<Formula>, ScriptError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(params.parse(line).map_err(|e| err(n + 1, e.to_string()))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::axiom_set;
    use crate::kernel::check_proof;
    use crate::named::{psi, u27};

    const SAMPLE: &str = "\
# psi7 gives psi1 -> psi7
hyp a psi7
1. psi7 ; hyp a
2. psi7 -> (psi1 -> psi7) ; axiom phi4
3. psi1 -> psi7 ; mp 1 2
";

    #[test]
    fn parse_and_check() {
        let (p, _) = parse_proof(SAMPLE).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.hyp("a"), Some(&psi(7)));
        let l12 = axiom_set("L12", &Params::default()).unwrap();
        assert!(check_proof(&p, &[l12]).ok);
    }

    #[test]
    fn round_trip() {
        let (p, _) = parse_proof(SAMPLE).unwrap();
        let text = write_proof(&p);
        let (q, _) = parse_proof(&text).unwrap();
        assert_eq!(p, q);
        assert!(text.contains("3. (Ax1)(x1 = x1) -> (Ax1)~(1 = x1 + 1) ; mp 1 2"));
    }

    #[test]
    fn gen_and_set_lines() {
        let text = "set delta u27\nhyp h x1 = x1\n1. x1 = x1 ; hyp h\n2. (Ax1)(x1 = x1) ; gen 1 x1\n3. delta ; hyp h\n";
        let (p, params) = parse_proof(text).unwrap();
        assert_eq!(params.delta, u27());
        assert_eq!(p.steps[1].justification, Justification::Gen(1, Var::x(1)));
        assert_eq!(p.steps[2].formula, u27());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_proof("hyp a psi7\n\n2. psi7 ; hyp a\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_proof("1. psi7 ; frob 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_proof("1. psi7 -> ; hyp a\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_proof("set gamma psi1\n").unwrap_err();
        assert!(e.message.contains("gamma"));
    }

    #[test]
    fn formula_lists() {
        let fs = parse_formula_list("psi1\n# skip\n\n~psi7\n", &Params::default()).unwrap();
        assert_eq!(fs, vec![psi(1), Formula::not(psi(7))]);
    }
}

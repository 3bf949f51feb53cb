//! Audit scripts: derivability claims against named hypothesis sets, judged
//! VERIFIED (with a kernel certificate), REFUTED (with a propositional
//! countermodel) or UNRESOLVED (budget spent).
//!
//! ```text
//! # comment
//! set delta psi1
//! claim L/(1)/psi7 | hyps L12, ~(psi7 -> delta) | goal psi7 | locus step (1)
//! claim L/(2)/pair | hyps L12, psi1, ~psi1 | goal psi1 | shape contradiction
//! claim S/psi1     | hyps | goal psi1 | shape model 50 positive
//! ```
//!
//! A hypothesis item is an axiom set name or a formula. A claim without a
//! `shape` is a membership claim. A contradiction claim asks for both the
//! goal and its negation. A model claim evaluates the goal in the truncated
//! standard model.

use std::fmt::{self, Write as _};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::axioms::{axiom_set, axiom_sets, find_member, AxiomSet, SET_NAMES};
use crate::engine::{premise_pool, prove, Budget, BudgetReport, SearchOutcome};
use crate::formula::Formula;
use crate::kernel::{check_proof, Proof};
use crate::named::Params;
use crate::script::{apply_set, parse_proof, write_proof, ScriptError};
use crate::semantics::{eval_arith, AtomTable, BoundedModelConfig, Prop, ThreeValued, Universe};

fn err(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Membership,
    Contradiction,
    Model { bound: u64, universe: Universe },
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Membership => f.write_str("membership"),
            Shape::Contradiction => f.write_str("contradiction"),
            Shape::Model { bound, universe } => write!(f, "model {bound} {}", universe_name(*universe)),
        }
    }
}

fn universe_name(u: Universe) -> &'static str {
    match u {
        Universe::Naturals => "naturals",
        Universe::Positive => "positive",
    }
}

#[derive(Clone, Debug)]
pub struct AuditClaim {
    pub id: String,
    /// The hypothesis expression as written.
    pub hyps_text: String,
    pub set_names: Vec<String>,
    pub sets: Vec<AxiomSet>,
    pub hyps: Vec<Formula>,
    pub goal: Formula,
    pub locus: String,
    pub shape: Shape,
    pub params: Params,
}

fn parse_shape(text: &str) -> Result<Shape, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["membership"] => Ok(Shape::Membership),
        ["contradiction"] => Ok(Shape::Contradiction),
        ["model", n, u] => {
            let bound = n.parse().map_err(|_| format!("bad bound `{n}`"))?;
            let universe = match *u {
                "naturals" => Universe::Naturals,
                "positive" => Universe::Positive,
                _ => return Err(format!("unknown universe `{u}`")),
            };
            Ok(Shape::Model { bound, universe })
        }
        _ => Err(format!("bad shape `{text}`")),
    }
}

fn parse_claim(line: &str, params: &Params) -> Result<AuditClaim, String> {
    let mut parts = line.split('|').map(str::trim);
    let id = parts.next().and_then(|h| h.strip_prefix("claim")).map(str::trim).unwrap_or("");
    if id.is_empty() || id.contains(char::is_whitespace) {
        return Err("expected `claim <id>`".into());
    }
    let (mut hyps, mut goal, mut locus, mut shape) = (None, None, String::new(), Shape::Membership);
    for part in parts {
        let (key, body) = match part.find(char::is_whitespace) {
            Some(i) => (&part[..i], part[i..].trim()),
            None => (part, ""),
        };
        match key {
            "hyps" => hyps = Some(body.to_string()),
            "goal" => goal = Some(params.parse(body).map_err(|e| format!("goal: {e}"))?),
            "locus" => locus = body.to_string(),
            "shape" => shape = parse_shape(body)?,
            _ => return Err(format!("unknown field `{key}`")),
        }
    }
    let hyps_text = hyps.ok_or("missing `hyps`")?;
    let goal = goal.ok_or("missing `goal`")?;
    let mut set_names = Vec::new();
    let mut formulas = Vec::new();
    for item in hyps_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if SET_NAMES.contains(&item) {
            set_names.push(item.to_string());
        } else {
            formulas.push(params.parse(item).map_err(|e| format!("hypothesis `{item}`: {e}"))?);
        }
    }
    let sets = set_names
        .iter()
        .map(|n| axiom_set(n, params))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if let Shape::Model { .. } = shape {
        if !goal.is_sentence() {
            return Err("model claims need a sentence".into());
        }
    }
    Ok(AuditClaim {
        id: id.to_string(),
        hyps_text,
        set_names,
        sets,
        hyps: formulas,
        goal,
        locus,
        shape,
        params: params.clone(),
    })
}

/// Parses script text. `set` lines affect the claims after them.
pub fn parse_script(text: &str) -> Result<Vec<AuditClaim>, ScriptError> {
    let mut params = Params::default();
    let mut claims: Vec<AuditClaim> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("set ") {
            let rest = rest.trim();
            let (name, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            apply_set(&mut params, name, body.trim()).map_err(|m| err(line_no, m))?;
        } else if line.starts_with("claim") {
            let c = parse_claim(line, &params).map_err(|m| err(line_no, m))?;
            if claims.iter().any(|d| d.id == c.id) {
                return Err(err(line_no, format!("duplicate claim id `{}`", c.id)));
            }
            claims.push(c);
        } else {
            return Err(err(line_no, format!("unexpected `{line}`")));
        }
    }
    Ok(claims)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{0}: {1}")]
    Io(String, io::Error),
    #[error("{0}: {1}")]
    Script(String, ScriptError),
}

/// Loads a builtin script by id, or a script file.
pub fn load_script(id_or_path: &str) -> Result<Vec<AuditClaim>, LoadError> {
    let text = match builtin_script(id_or_path) {
        Some(t) => t,
        None => fs::read_to_string(id_or_path).map_err(|e| LoadError::Io(id_or_path.to_string(), e))?,
    };
    parse_script(&text).map_err(|e| LoadError::Script(id_or_path.to_string(), e))
}

pub const BUILTIN_SCRIPTS: &[&str] = &[
    "lemma-4.1",
    "lemma-4.2",
    "lemma-4.3",
    "lemma-4.4",
    "theorem-4.1",
    "corollary-4.3",
    "corollary-4.4",
    "theorem-5.1",
    "theorem-5.2",
    "axiom-sanity",
];

pub fn builtin_scripts() -> Vec<&'static str> {
    BUILTIN_SCRIPTS.to_vec()
}

struct Writer {
    out: String,
    prefix: &'static str,
    locus: &'static str,
}

impl Writer {
    fn new(prefix: &'static str, locus: &'static str) -> Self {
        Writer {
            out: String::new(),
            prefix,
            locus,
        }
    }

    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn claim(&mut self, id: &str, hyps: &str, goal: &str, step: &str, shape: Option<&str>) {
        let _ = write!(
            self.out,
            "claim {}/{id} | hyps {hyps} | goal {goal} | locus {} {step}",
            self.prefix, self.locus
        );
        if let Some(s) = shape {
            let _ = write!(self.out, " | shape {s}");
        }
        self.out.push('\n');
    }

    fn members(&mut self, step: &str, hyps: &str, goals: &[&str]) {
        for g in goals {
            let slug: String = g.chars().filter(|c| !c.is_whitespace()).collect();
            self.claim(&format!("({step})/{slug}"), hyps, g, &format!("({step})"), None);
        }
    }

    /// `Cn(hyps) = S_A`, as the absolute target, a second target that is
    /// not already a hypothesis consequence, and a contradiction pair.
    fn everything(&mut self, tag: &str, hyps: &str, step: &str, pair: &str) {
        self.claim(&format!("{tag}/absolute/u27"), hyps, "u27", step, None);
        self.claim(&format!("{tag}/absolute/~u27"), hyps, "~u27", step, None);
        self.claim(&format!("{tag}/contradiction/{pair}"), hyps, pair, step, Some("contradiction"));
    }
}

const A0: &str = "L11, PrefixedL2r, NPsi3dot, xi";
const A1: &str = "L11, PrefixedL2r, NPsi3ddot, xi";

fn lemma_star(prefix: &'static str, locus: &'static str, base: &str, second: bool) -> String {
    let mut w = Writer::new(prefix, locus);
    let star = format!("{base}, ~delta00, alpha_p -> psi7");
    w.line(&format!("# A* = {base} + ~delta00 + (alpha_p -> psi7)"));
    if !second {
        w.members(
            "14",
            &star,
            &[
                "psi7",
                "gamma4p",
                "gamma2p",
                "O0 -> gamma0",
                "psi1 -> psi12",
                "gamma0p",
                "O0",
                "u27",
                "psi12 -> (psi7 -> ~psi1)",
                "psi12 -> ~psi1",
                "~psi1",
            ],
        );
        w.members("15", &star, &["(Ax1)(x1 = x1 -> (1 = 1 -> x1 = x1))"]);
        w.members("16", &star, &["psi7", "psi7 -> psi1", "psi1", "~psi1"]);
        w.everything("A*=S_A", &star, "(16)", "psi1");
    } else {
        w.members(
            "13",
            &star,
            &[
                "psi7",
                "gamma4p",
                "gamma2p",
                "O0 -> gamma0",
                "psi1 -> psi12",
                "gamma0p",
                "O0",
                "u27",
                "beta1",
                "psi1 -> beta0",
                "~beta0",
                "~psi1",
            ],
        );
        w.members("15", &star, &["psi7", "psi7 -> psi1", "~psi1", "psi1"]);
        w.everything("A*=S_A", &star, "(15)", "psi1");
    }
    w.out
}

fn lemma_plus(prefix: &'static str, locus: &'static str, base: &str, second: bool) -> String {
    let mut w = Writer::new(prefix, locus);
    let plus = format!("{base}, delta00, alpha_p -> psi7");
    w.line(&format!("# A+ = {base} + delta00 + (alpha_p -> psi7)"));
    w.line("# non-membership steps are not encoded");
    if !second {
        w.members(
            "15",
            &plus,
            &[
                "O0 -> gamma0",
                "gamma2p",
                "gamma4p",
                "psi1 -> (psi7 -> psi12)",
                "psi12 -> (psi7 -> ~psi1)",
                "psi7 -> ~psi1",
                "gamma0p -> O0",
                "psi7 -> (~psi1 -> O0)",
                "psi7 -> O0",
                "O0 -> gamma0p",
                "psi7 -> gamma0p",
                "psi7 -> u27",
            ],
        );
    } else {
        w.members(
            "14",
            &plus,
            &[
                "gamma4p",
                "O0 -> gamma0",
                "gamma2p",
                "O0 -> (u27 -> beta1)",
                "O0 -> beta1",
                "gamma0p -> O0",
                "gamma0p -> beta1",
                "beta1",
            ],
        );
        w.members(
            "15",
            &plus,
            &[
                "psi7 -> delta",
                "psi1 -> (psi7 -> psi12)",
                "beta1",
                "psi12 /\\ psi7 /\\ psi1 -> beta0",
                "psi12 -> (psi7 -> ~psi1)",
                "psi7 -> ~psi1",
                "gamma4p",
                "O0 -> gamma0",
                "gamma2p",
                "O0 -> gamma0p",
                "gamma0p -> O0",
                "gamma0p -> u27",
                "psi7 -> (~psi1 -> O0)",
                "psi7 -> O0",
                "psi7 -> gamma0p",
                "psi7 -> u27",
            ],
        );
    }
    w.members("17", &plus, &["O6"]);
    w.members("19", &plus, &["gamma0p -> (psi7 -> psi1)", "psi7 -> psi1", "psi1 -> ~psi7", "~psi7"]);
    w.line("# A+ - A0 read as containment: the extra hypotheses of A+ lie in the base set");
    w.members("20", base, &["delta00", "alpha_p -> psi7"]);
    w.members("21", base, &["~psi7"]);
    w.out
}

fn final_theorem(prefix: &'static str, locus: &'static str, header: &str) -> String {
    let mut w = Writer::new(prefix, locus);
    w.out.push_str(header);
    let with_alpha = format!("{A1}, alpha_p -> psi7");
    w.everything("(2)", &with_alpha, "(2)", "psi1");
    w.members("4", A1, &["~(alpha_p -> psi7)"]);
    w.members("6", A1, &["alpha_p"]);
    w.claim("(6)/contradiction/alpha_p", A1, "alpha_p", "(6)", Some("contradiction"));
    w.out
}

fn axiom_sanity() -> String {
    let mut w = Writer::new("sanity", "axioms");
    w.line("# psi axioms over the positive integers, Q axioms over the naturals");
    for n in 1..=12 {
        w.claim(&format!("psi{n}"), "", &format!("psi{n}"), "Xp", Some("model 50 positive"));
    }
    for n in 1..=9 {
        w.claim(&format!("Q{n}"), "", &format!("Q{n}"), "XpPrime", Some("model 50 naturals"));
    }
    w.out
}

/// Text of a builtin script.
pub fn builtin_script(id: &str) -> Option<String> {
    Some(match id {
        "lemma-4.1" => lemma_star("L4.1", "Lemma 4.1", A0, false),
        "lemma-4.2" => lemma_plus("L4.2", "Lemma 4.2", A0, false),
        "lemma-4.3" => lemma_star("L4.3", "Lemma 4.3", A1, true),
        "lemma-4.4" => lemma_plus("L4.4", "Lemma 4.4", A1, true),
        "theorem-4.1" => {
            let mut w = Writer::new("T4.1", "Theorem 4.1");
            let with_alpha = format!("{A0}, alpha_p -> psi7");
            w.everything("(2)", &with_alpha, "(2)", "psi1");
            w.members("4", A0, &["~(alpha_p -> psi7)"]);
            w.claim("(4)/ddot/~(alpha_p->psi7)", A1, "~(alpha_p -> psi7)", "(5)", None);
            w.members("6", A1, &["alpha_p"]);
            w.claim("(6)/contradiction/alpha_p", A1, "alpha_p", "(6)", Some("contradiction"));
            w.out
        }
        "corollary-4.3" => {
            let mut w = Writer::new("C4.3", "Corollary 4.3");
            let hyps = "LT1, beta1, psi1, psi7, psi12";
            w.members("beta0", hyps, &["beta0"]);
            w.everything("S_A", hyps, "", "psi1");
            w.out
        }
        "corollary-4.4" => {
            let mut w = Writer::new("C4.4", "Corollary 4.4");
            w.members("~beta0", "LT1", &["~beta0"]);
            w.out
        }
        "theorem-5.1" => final_theorem("T5.1", "Theorem 5.1", ""),
        "theorem-5.2" => final_theorem("T5.2", "Theorem 5.2", "set beta0 Q1\n"),
        "axiom-sanity" => axiom_sanity(),
        _ => return None,
    })
}

/// Why a claim is refuted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// A valuation of the skeleton atoms satisfying every relevant
    /// hypothesis instance and falsifying the goal (or, for contradiction
    /// claims, satisfying the hypotheses).
    Valuation(Vec<(Formula, bool)>),
    /// The goal is false in the truncated model.
    Model,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A kernel proof. For contradiction claims both the goal and its
    /// negation occur as steps.
    Proof(Proof),
    Model(ThreeValued),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Verified(Certificate),
    Refuted(Refutation),
    Unresolved { report: BudgetReport, note: String },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Verified(_) => "VERIFIED",
            Status::Refuted(_) => "REFUTED",
            Status::Unresolved { .. } => "UNRESOLVED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditVerdict {
    pub claim: AuditClaim,
    pub status: Status,
    pub steps: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub script: String,
    pub budget: Budget,
    pub verdicts: Vec<AuditVerdict>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub verified: usize,
    pub refuted: usize,
    pub unresolved: usize,
}

const SEARCH_NODE_LIMIT: u64 = 2_000_000;

fn eval3(p: &Prop, v: &[Option<bool>]) -> Option<bool> {
    match p {
        Prop::Atom(i) => v[*i],
        Prop::Not(a) => eval3(a, v).map(|b| !b),
        Prop::Implies(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
        Prop::And(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Prop::Or(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Prop::Iff(a, b) => Some(eval3(a, v)? == eval3(b, v)?),
    }
}

/// Backtracking search for a valuation making every prop true. `Err` when
/// the node limit runs out.
fn satisfy(props: &[Prop], v: &mut Vec<Option<bool>>, nodes: &mut u64) -> Result<bool, ()> {
    *nodes += 1;
    if *nodes > SEARCH_NODE_LIMIT {
        return Err(());
    }
    let mut done = true;
    for p in props {
        match eval3(p, v) {
            Some(false) => return Ok(false),
            None => done = false,
            Some(true) => {}
        }
    }
    if done {
        return Ok(true);
    }
    let Some(i) = v.iter().position(Option::is_none) else {
        return Ok(false);
    };
    for b in [false, true] {
        v[i] = Some(b);
        if satisfy(props, v, nodes)? {
            return Ok(true);
        }
    }
    v[i] = None;
    Ok(false)
}

/// A valuation satisfying the hypothesis instances and `extra`, or `None`
/// when none exists. `Err` if the search gave up.
fn skeleton_model(claim: &AuditClaim, goals: &[Formula], extra: impl Fn(&mut AtomTable) -> Prop) -> Result<Option<Vec<(Formula, bool)>>, ()> {
    let premises = premise_pool(&claim.hyps, goals, &claim.sets);
    let mut table = AtomTable::new();
    let mut props = vec![extra(&mut table)];
    props.extend(premises.iter().map(|p| table.skeleton_of(&p.formula)));
    let mut v = vec![None; table.len()];
    let mut nodes = 0;
    if !satisfy(&props, &mut v, &mut nodes)? {
        return Ok(None);
    }
    Ok(Some(
        table
            .atoms()
            .iter()
            .zip(&v)
            .filter_map(|(f, b)| b.map(|b| (f.clone(), b)))
            .collect(),
    ))
}

fn trivially_member(claim: &AuditClaim, f: &Formula) -> bool {
    claim.hyps.contains(f) || find_member(&claim.sets, f).is_some()
}

fn certified(claim: &AuditClaim, p: Proof, steps: u64, budget: &Budget) -> (Status, u64) {
    let r = check_proof(&p, &claim.sets);
    let hyps_ok = p.hyps.iter().all(|h| claim.hyps.contains(&h.formula));
    if r.ok && hyps_ok {
        (Status::Verified(Certificate::Proof(p)), steps)
    } else {
        let report = BudgetReport {
            steps,
            max_steps: budget.max_steps,
            exhausted: false,
        };
        let note = format!("search produced a proof that does not check: {:?}", r.failure);
        (Status::Unresolved { report, note }, steps)
    }
}

fn run_membership(c: &AuditClaim, budget: Budget) -> (Status, u64) {
    let mut note = String::new();
    if !trivially_member(c, &c.goal) {
        let goal = c.goal.clone();
        match skeleton_model(c, std::slice::from_ref(&goal), |t| Prop::Not(Box::new(t.skeleton_of(&goal)))) {
            Ok(Some(val)) => return (Status::Refuted(Refutation::Valuation(val)), 0),
            Ok(None) => {}
            Err(()) => note = "skeleton search gave up".into(),
        }
    }
    match prove(&c.goal, &c.hyps, &c.sets, budget) {
        SearchOutcome::Found(p, r) => certified(c, p, r.steps, &budget),
        SearchOutcome::Exhausted(report) => {
            if note.is_empty() && !report.exhausted {
                note = "search space exhausted within budget".into();
            }
            (Status::Unresolved { report, note }, report.steps)
        }
    }
}

fn run_contradiction(c: &AuditClaim, budget: Budget) -> (Status, u64) {
    let neg = Formula::not(c.goal.clone());
    let goals = [c.goal.clone(), neg.clone()];
    let hyps_only = skeleton_model(c, &goals, |t| {
        // hypotheses alone; the goal only fixes the atom order
        let g = t.skeleton_of(&goals[0]);
        Prop::Or(Box::new(g.clone()), Box::new(Prop::Not(Box::new(g))))
    });
    if let Ok(Some(val)) = hyps_only {
        return (Status::Refuted(Refutation::Valuation(val)), 0);
    }
    let first = prove(&c.goal, &c.hyps, &c.sets, budget);
    let spent = first.report().steps;
    let SearchOutcome::Found(mut p, _) = first else {
        return (
            Status::Unresolved {
                report: first.report(),
                note: format!("{} not derived", c.goal),
            },
            spent,
        );
    };
    let rest = Budget {
        max_steps: budget.max_steps.saturating_sub(spent),
        ..budget
    };
    let second = prove(&neg, &c.hyps, &c.sets, rest);
    let total = spent + second.report().steps;
    match second {
        SearchOutcome::Found(q, _) => {
            p.append(&q);
            certified(c, p, total, &budget)
        }
        SearchOutcome::Exhausted(r) => (
            Status::Unresolved {
                report: BudgetReport {
                    steps: total,
                    max_steps: budget.max_steps,
                    exhausted: r.exhausted,
                },
                note: format!("{} derived, {neg} not derived", c.goal),
            },
            total,
        ),
    }
}

fn run_model(c: &AuditClaim, bound: u64, universe: Universe, budget: Budget) -> (Status, u64) {
    let cfg = BoundedModelConfig { bound, universe };
    let value = eval_arith(&c.goal, &cfg).unwrap_or(ThreeValued::Unknown);
    let status = match value {
        ThreeValued::True => Status::Verified(Certificate::Model(value)),
        ThreeValued::False => Status::Refuted(Refutation::Model),
        ThreeValued::Unknown => Status::Unresolved {
            report: BudgetReport {
                steps: 0,
                max_steps: budget.max_steps,
                exhausted: false,
            },
            note: format!("UNKNOWN: no counterexample with quantifiers up to {bound}"),
        },
    };
    (status, 0)
}

pub fn run_claim(c: &AuditClaim, budget: Budget) -> AuditVerdict {
    let start = Instant::now();
    let (status, steps) = match c.shape {
        Shape::Membership => run_membership(c, budget),
        Shape::Contradiction => run_contradiction(c, budget),
        Shape::Model { bound, universe } => run_model(c, bound, universe, budget),
    };
    AuditVerdict {
        claim: c.clone(),
        status,
        steps,
        elapsed: start.elapsed(),
    }
}

/// Runs every claim. Deterministic budgets run sequentially; otherwise
/// claims are spread over threads and the report keeps script order.
pub fn run_audit(script: &str, claims: &[AuditClaim], budget: Budget) -> AuditReport {
    let verdicts = if budget.deterministic || claims.len() < 2 {
        claims.iter().map(|c| run_claim(c, budget)).collect()
    } else {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(claims.len());
        let mut slots: Vec<Option<AuditVerdict>> = vec![None; claims.len()];
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    s.spawn(move || {
                        (t..claims.len())
                            .step_by(threads)
                            .map(|i| (i, run_claim(&claims[i], budget)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, v) in h.join().expect("audit worker panicked") {
                    slots[i] = Some(v);
                }
            }
        });
        slots.into_iter().map(|v| v.expect("every claim ran")).collect()
    };
    AuditReport {
        script: script.to_string(),
        budget,
        verdicts,
    }
}

fn file_stem(index: usize, id: &str) -> String {
    let slug: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    format!("{:03}_{slug}", index + 1)
}

fn params_header(p: &Params) -> String {
    let beta: Vec<String> = p.beta_conjuncts.iter().map(ToString::to_string).collect();
    format!(
        "set alpha_p {}\nset delta {}\nset beta0 {}\n",
        p.alpha_p,
        p.delta,
        beta.join(" ; ")
    )
}

impl AuditReport {
    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for v in &self.verdicts {
            match v.status {
                Status::Verified(_) => c.verified += 1,
                Status::Refuted(_) => c.refuted += 1,
                Status::Unresolved { .. } => c.unresolved += 1,
            }
        }
        c
    }

    /// Human-readable report. Timings appear only outside deterministic mode.
    pub fn text(&self) -> String {
        let mut s = String::new();
        let b = &self.budget;
        let _ = writeln!(s, "audit {}", self.script);
        let _ = writeln!(
            s,
            "engine: max_steps={} max_depth={} deterministic={}",
            b.max_steps, b.max_depth, b.deterministic
        );
        for (i, v) in self.verdicts.iter().enumerate() {
            let c = &v.claim;
            let _ = write!(s, "{:>3} {:<10} {}  [{}]  {} steps", i + 1, v.status.label(), c.id, c.locus, v.steps);
            if !b.deterministic {
                let _ = write!(s, "  {:.3}s", v.elapsed.as_secs_f64());
            }
            s.push('\n');
            match &v.status {
                Status::Verified(Certificate::Proof(p)) => {
                    let _ = writeln!(s, "      certificate: {} steps", p.len());
                }
                Status::Verified(Certificate::Model(t)) => {
                    let _ = writeln!(s, "      model value: {t}");
                }
                Status::Refuted(Refutation::Valuation(val)) => {
                    let goal_atoms = crate::semantics::skeletonize(&c.goal).atoms;
                    let shown: Vec<String> = val
                        .iter()
                        .filter(|(f, _)| goal_atoms.contains(f))
                        .map(|(f, b)| format!("[{f}]={}", if *b { "T" } else { "F" }))
                        .collect();
                    let _ = writeln!(s, "      countervaluation: {}", shown.join(", "));
                }
                Status::Refuted(Refutation::Model) => {
                    let _ = writeln!(s, "      false in the truncated model");
                }
                Status::Unresolved { report, note } => {
                    let _ = write!(s, "      {report}");
                    if !note.is_empty() {
                        let _ = write!(s, "; {note}");
                    }
                    s.push('\n');
                }
            }
        }
        let n = self.counts();
        let _ = writeln!(
            s,
            "claims: {}  verified: {}  refuted: {}  unresolved: {}",
            self.verdicts.len(),
            n.verified,
            n.refuted,
            n.unresolved
        );
        s
    }

    /// Writes one detail file per claim into `dir` and returns their paths
    /// in claim order. Certificates get a `.proof` or `.model` extension.
    pub fn write_details(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for (i, v) in self.verdicts.iter().enumerate() {
            let c = &v.claim;
            let stem = file_stem(i, &c.id);
            let mut head = format!("# claim {}\n# locus {}\n# shape {}\n# goal {}\n", c.id, c.locus, c.shape, c.goal);
            let (ext, body) = match &v.status {
                Status::Verified(Certificate::Proof(p)) => {
                    let _ = writeln!(head, "# axioms {}", c.set_names.join(","));
                    for h in &c.hyps {
                        let _ = writeln!(head, "# premise {h}");
                    }
                    ("proof", format!("{}{}", params_header(&c.params), write_proof(p)))
                }
                Status::Verified(Certificate::Model(t)) => ("model", format!("# value {t}\n")),
                Status::Refuted(Refutation::Valuation(val)) => {
                    let mut b = String::from("# countervaluation\n");
                    for (f, t) in val {
                        let _ = writeln!(b, "{} {f}", if *t { "T" } else { "F" });
                    }
                    ("refutation", b)
                }
                Status::Refuted(Refutation::Model) => ("refutation", "# false in the truncated model\n".into()),
                Status::Unresolved { report, note } => ("unresolved", format!("# {report}\n# {note}\n")),
            };
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, head + &body)?;
            paths.push(path);
        }
        Ok(paths)
    }

    /// One `id<TAB>status<TAB>steps<TAB>detail-path` line per claim.
    pub fn tsv(&self, paths: &[PathBuf]) -> String {
        let mut s = String::new();
        for (i, v) in self.verdicts.iter().enumerate() {
            let path = paths.get(i).map_or_else(|| "-".to_string(), |p| p.display().to_string());
            let _ = writeln!(s, "{}\t{}\t{}\t{}", v.claim.id, v.status.label(), v.steps, path);
        }
        s
    }
}

fn header_values<'a>(text: &'a str, key: &str) -> Vec<&'a str> {
    let tag = format!("# {key} ");
    text.lines().filter_map(|l| l.strip_prefix(tag.as_str())).map(str::trim).collect()
}

/// Re-validates a serialized certificate without any state from the run
/// that produced it.
pub fn recheck_certificate(text: &str) -> Result<(), String> {
    let shape = header_values(text, "shape").first().copied().ok_or("missing shape header")?;
    let shape = parse_shape(shape)?;
    let goal_text = header_values(text, "goal").first().copied().ok_or("missing goal header")?;
    let goal = crate::parse_formula(goal_text).map_err(|e| format!("goal: {e}"))?;
    if let Shape::Model { bound, universe } = shape {
        let v = eval_arith(&goal, &BoundedModelConfig { bound, universe }).map_err(|e| e.to_string())?;
        return if v == ThreeValued::True {
            Ok(())
        } else {
            Err(format!("model value is {v}"))
        };
    }
    let (proof, params) = parse_proof(text).map_err(|e| e.to_string())?;
    let names = header_values(text, "axioms").first().copied().unwrap_or("");
    let sets = axiom_sets(names, &params).map_err(|e| e.to_string())?;
    let premises = header_values(text, "premise")
        .into_iter()
        .map(|t| crate::parse_formula(t).map_err(|e| format!("premise: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let r = check_proof(&proof, &sets);
    if let Some(f) = r.failure {
        return Err(f.to_string());
    }
    if let Some(h) = proof.hyps.iter().find(|h| !premises.contains(&h.formula)) {
        return Err(format!("hypothesis {} is not a claim premise", h.id));
    }
    let has = |f: &Formula| proof.steps.iter().any(|s| s.formula == *f);
    let ok = match shape {
        Shape::Contradiction => has(&goal) && has(&Formula::not(goal.clone())),
        _ => proof.conclusion() == Some(&goal),
    };
    if ok {
        Ok(())
    } else {
        Err("certificate does not reach the goal".into())
    }
}

/// Re-checks every `.proof` and `.model` file among `paths`.
pub fn recheck_files(paths: &[PathBuf]) -> Vec<(PathBuf, Result<(), String>)> {
    paths
        .iter()
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("proof" | "model")))
        .map(|p| {
            let r = fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| recheck_certificate(&t));
            (p.clone(), r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(line: &str) -> AuditClaim {
        parse_script(line).unwrap().remove(0)
    }

    #[test]
    fn grammar() {
        let cs = parse_script("# x\nset delta u27\nclaim a | hyps L12, ~delta | goal ~u27 | locus here\n").unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].set_names, vec!["L12"]);
        assert_eq!(cs[0].hyps, vec![Formula::not(crate::named::u27())]);
        assert_eq!(cs[0].locus, "here");
        assert!(parse_script("").unwrap().is_empty());
        let e = parse_script("\nclaim a | hyps Nope | goal psi1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_script("claim a | goal psi1\n").is_err());
        assert!(parse_script("claim a | hyps | goal psi1\nclaim a | hyps | goal psi1\n").is_err());
        assert!(parse_script("claim a | hyps | goal psi1 | shape model 5 reals\n").is_err());
    }

    #[test]
    fn builtins_parse() {
        for id in builtin_scripts() {
            let cs = load_script(id).unwrap_or_else(|e| panic!("{e}"));
            assert!(!cs.is_empty(), "{id}");
        }
        let first = load_script("lemma-4.1").unwrap();
        assert!(first.iter().filter(|c| c.id.contains("(14)")).count() >= 9);
        let last = load_script("theorem-5.1").unwrap();
        assert_eq!(last.last().unwrap().shape, Shape::Contradiction);
        assert!(load_script("lemma-4.2").unwrap().iter().any(|c| c.goal == crate::named::o6()));
    }

    #[test]
    fn example_verdicts() {
        let b = Budget::default();
        let v = run_claim(&one("claim a | hyps L12, ~(psi7 -> delta00) | goal psi7"), b);
        assert_eq!(v.status.label(), "VERIFIED");
        let v = run_claim(&one("claim a | hyps L12, ~psi1 | goal psi1"), b);
        let Status::Refuted(Refutation::Valuation(val)) = &v.status else {
            panic!("{:?}", v.status)
        };
        assert!(val.contains(&(crate::named::psi(1), false)));
        let v = run_claim(&one("claim a | hyps L12, gamma2p, O0 | goal u27"), b);
        assert_eq!(v.status.label(), "VERIFIED");
    }

    #[test]
    fn hypothesis_goal_never_refuted() {
        let v = run_claim(&one("claim a | hyps psi1, ~psi1 | goal psi1"), Budget::default());
        assert_eq!(v.status.label(), "VERIFIED");
    }

    #[test]
    fn contradiction_and_model_claims() {
        let b = Budget::default();
        let v = run_claim(&one("claim a | hyps L12, psi1, ~psi1 | goal psi1 | shape contradiction"), b);
        assert_eq!(v.status.label(), "VERIFIED");
        let v = run_claim(&one("claim a | hyps L12, psi1 | goal psi1 | shape contradiction"), b);
        assert_eq!(v.status.label(), "REFUTED");
        let v = run_claim(&one("claim a | hyps | goal 1 < 1 + 1 | shape model 5 naturals"), b);
        assert_eq!(v.status.label(), "VERIFIED");
        let v = run_claim(&one("claim a | hyps | goal 1 < 1 | shape model 5 naturals"), b);
        assert_eq!(v.status.label(), "REFUTED");
    }

    #[test]
    fn certificates_recheck_cold() {
        let claims = parse_script(
            "claim a | hyps L12, ~(psi7 -> delta) | goal ~delta\n\
             claim b | hyps L12, psi1, ~psi1 | goal psi1 | shape contradiction\n\
             claim c | hyps | goal 0 < 1 | shape model 3 naturals\n\
             claim d | hyps L12 | goal psi1\n",
        )
        .unwrap();
        let report = run_audit("t", &claims, Budget::default());
        let dir = std::env::temp_dir().join(format!("audit-unit-{}", std::process::id()));
        let paths = report.write_details(&dir).unwrap();
        let checks = recheck_files(&paths);
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|(_, r)| r.is_ok()), "{checks:?}");
        let tsv = report.tsv(&paths);
        assert_eq!(tsv.lines().count(), 4);
        assert!(tsv.lines().nth(3).unwrap().starts_with("d\tREFUTED\t0\t"));
        let text = fs::read_to_string(&paths[0]).unwrap();
        let last = text.lines().last().unwrap();
        let tampered = text.replace(last, "");
        assert!(recheck_certificate(&tampered).is_err());
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn deterministic_reports_are_identical() {
        let claims = load_script("corollary-4.4").unwrap();
        let a = run_audit("c", &claims, Budget::default()).text();
        let b = run_audit("c", &claims, Budget::default()).text();
        assert_eq!(a, b);
        assert!(!a.contains("proved"));
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn hilbert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hilbert-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_and_rejects() {
    let dir = scratch("check");
    let good = dir.join("good.proof");
    std::fs::write(&good, "hyp a psi7\n1. psi7 ; hyp a\n2. psi7 -> (psi1 -> psi7) ; axiom phi4\n3. psi1 -> psi7 ; mp 1 2\n").unwrap();
    let o = hilbert(&["check", good.to_str().unwrap(), "--axioms", "L12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let bad = dir.join("bad.proof");
    std::fs::write(&bad, "1. psi7 ; axiom L12\n").unwrap();
    let o = hilbert(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not-axiom"));
    let o = hilbert(&["check", dir.join("missing.proof").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn taut_lines() {
    let dir = scratch("taut");
    let f = dir.join("fs.txt");
    std::fs::write(&f, "psi1 -> psi1\n# skip\npsi1 -> psi7\n").unwrap();
    let o = hilbert(&["taut", f.to_str().unwrap()]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "TAUT");
    assert!(lines[1].starts_with("NONTAUT "));
    assert!(lines[1].contains("=T") && lines[1].contains("=F"));
}

#[test]
fn prove_then_check_round_trip() {
    let dir = scratch("prove");
    let hyp = dir.join("hyp.txt");
    std::fs::write(&hyp, "~(psi7 -> delta)\n").unwrap();
    let out = dir.join("p.proof");
    let o = hilbert(&["prove", "--goal", "psi7", "--hyp", hyp.to_str().unwrap(), "--axioms", "L12", "--max-steps", "1000000", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hilbert(&["check", out.to_str().unwrap(), "--axioms", "L12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = hilbert(&["prove", "--goal", "u27", "--axioms", "L12", "--max-steps", "200"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn closure_dump() {
    let dir = scratch("closure");
    let hyp = dir.join("hyp.txt");
    std::fs::write(&hyp, "psi1 /\\ psi7\n").unwrap();
    let dump = dir.join("dump.txt");
    let o = hilbert(&["closure", "--hyp", hyp.to_str().unwrap(), "--axioms", "L12", "--max-steps", "50", "--dump", dump.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0 | 3)));
    let text = std::fs::read_to_string(dump).unwrap();
    assert!(text.lines().next().unwrap().starts_with("1. "));
    assert!(text.contains("(Ax1)~(1 = x1 + 1)"));
}

#[test]
fn eval_and_usage_errors() {
    let o = hilbert(&["eval", "--bound", "10", "(Ex1)(x1 + x1 = 1 + 1 + 1 + 1)"]);
    assert_eq!(stdout(&o).trim(), "TRUE");
    let o = hilbert(&["eval", "--bound", "10", "--universe", "positive", "psi7"]);
    assert_eq!(stdout(&o).trim(), "UNKNOWN");
    assert_eq!(hilbert(&["eval", "--bound", "10", "1 < "]).status.code(), Some(2));
    assert_eq!(hilbert(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn audit_script_file() {
    let dir = scratch("audit");
    let script = dir.join("mine.audit");
    std::fs::write(
        &script,
        "set delta psi1\n\
         claim a | hyps L12, ~(psi7 -> delta) | goal psi7 | locus example\n\
         claim b | hyps L12, ~psi1 | goal psi1\n",
    )
    .unwrap();
    let report = dir.join("r.tsv");
    let o = hilbert(&["audit", script.to_str().unwrap(), "--deterministic", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let tsv = std::fs::read_to_string(&report).unwrap();
    let rows: Vec<Vec<&str>> = tsv.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][..2], &["a", "VERIFIED"]);
    assert_eq!(&rows[1][..3], &["b", "REFUTED", "0"]);
    assert!(std::path::Path::new(rows[0][3]).exists());
    let again = hilbert(&["audit", script.to_str().unwrap(), "--deterministic", "--report", report.to_str().unwrap()]);
    assert_eq!(stdout(&o), stdout(&again));
}

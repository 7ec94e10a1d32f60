use std::fs;
use std::path::PathBuf;

use opalg_core::dsl::{parse, run_text, Status};

fn script(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn counts(name: &str) -> (usize, usize) {
    let report = run_text(&script(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    for o in report.outcomes.iter().filter(|o| o.status != Status::Pass) {
        eprintln!("{name}: {o}");
    }
    report.counts()
}

#[test]
fn eq3_holds_for_every_pair() {
    assert_eq!(counts("eq3.oad"), (9, 9));
}

#[test]
fn eq5_holds_for_every_pair() {
    assert_eq!(counts("eq5.oad"), (9, 9));
}

#[test]
fn eq6_nine_of_nine() {
    assert_eq!(counts("eq6.oad"), (9, 9));
}

#[test]
fn section_a_steps() {
    assert_eq!(counts("sectionA.oad"), (3 + 3 + 9 + 9, 24));
}

#[test]
fn massive_is_canonical() {
    assert_eq!(counts("massive.oad"), (18, 18));
}

#[test]
fn scripts_reprint_stably() {
    for name in ["eq3.oad", "eq5.oad", "eq6.oad", "sectionA.oad", "massive.oad"] {
        let s = parse(&script(name)).unwrap();
        let printed = s.to_string();
        assert_eq!(parse(&printed).unwrap(), s, "{name}");
        assert_eq!(parse(&printed).unwrap().to_string(), printed, "{name}");
    }
}

#[test]
fn rerun_is_deterministic() {
    let a = run_text(&script("eq6.oad")).unwrap();
    let b = run_text(&script("eq6.oad")).unwrap();
    let text = |r: &opalg_core::dsl::RunReport| r.outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>();
    assert_eq!(text(&a), text(&b));
}

#[test]
fn wrong_claims_fail() {
    let eq6 = script("eq6.oad").replace("i*hbar*c^2*H^-2*P[i]*P[j]", "i*hbar*delta(i, j)*Id");
    assert_eq!(run_text(&eq6).unwrap().counts(), (0, 9));
    let eq3 = script("eq3.oad").replace(" + c^-2*H*comm(Q[i], V[j])", "");
    assert_eq!(run_text(&eq3).unwrap().counts(), (0, 9));
    let a = script("sectionA.oad").replace("== 0 under LeibnizSpeed", "== 0 under Leibniz");
    assert_eq!(run_text(&a).unwrap().counts(), (21, 24));
}

//! Acceptance gate. One test per criterion; each writes a `[PASS]` or
//! `[FAIL]` line to stdout (bypassing capture) before asserting.

use std::io::Write;
use std::panic;
use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opalg_core::algebra::{Atom, Axis, Expr};
use opalg_core::dsl::{lower, parse_expr, run_text};
use opalg_core::engine::{
    commutator, equivalent, expand, replay, replay_under, AxiomSet, Closure, Derivation, DerivationId,
};
use opalg_core::numeric::{
    convergence, realize, residual_case, CaseId, GridSpec, TestFamily, TestFunction, DEFAULT_SIGMA,
};
use opalg_core::sample;

const CENTER: [f64; 3] = [2.0; 3];
const ORDER_WINDOW: std::ops::RangeInclusive<f64> = 1.7..=2.3;

fn verdict(name: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{tag} {name}: {detail}").unwrap();
    out.flush().unwrap();
    assert!(pass, "{name}: {detail}");
}

fn parsed(text: &str) -> Expr {
    lower(&parse_expr(text).unwrap()).unwrap()
}

fn scripts() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

fn pairs() -> impl Iterator<Item = (Axis, Axis)> {
    Axis::ALL.into_iter().flat_map(|i| Axis::ALL.into_iter().map(move |j| (i, j)))
}

#[test]
fn velocity_bracket_expansion_under_leibniz_only() {
    let d = Derivation::get(DerivationId::Eq3);
    let r = replay(&d);
    let (ok, total) = r.tally();
    // the coefficient-exact comparison plus an open [Q_i, V_j] in every result
    let open = r.outcomes.iter().all(|o| o.computed.contains_opaque());
    verdict(
        "velocity-bracket expansion",
        r.passed() && open && total == 9,
        &format!("{ok}/{total} index pairs under {}; bracket left open: {open}", r.axioms),
    );
}

#[test]
fn massless_position_momentum_bracket() {
    let eq5 = replay(&Derivation::get(DerivationId::Eq5));
    let eq6 = replay(&Derivation::get(DerivationId::Eq6));
    let m = AxiomSet::massless();
    let mut literal = 0;
    for (i, j) in pairs() {
        let got = m.substitute_velocity(&commutator(&Expr::atom(Atom::Q(i)), &Expr::atom(Atom::P(j)), &m));
        let want = parsed(&format!("i*hbar*c^2*H^-2*P[{i}]*P[{j}]"));
        if got == want.normalized_in(m.families()) {
            literal += 1;
        }
    }
    let pass = eq5.passed() && eq6.passed() && eq6.tally() == (9, 9) && literal == 9;
    verdict(
        "massless [Q,P] = i hbar c^2 H^-2 P_i P_j",
        pass,
        &format!(
            "constant velocity {}/9, momentum form {}/9, exact normal form {literal}/9",
            eq5.tally().0,
            eq6.tally().0
        ),
    );
}

#[test]
fn speed_relation_steps() {
    let one = replay(&Derivation::get(DerivationId::SectionAI));
    let two = replay(&Derivation::get(DerivationId::SectionAII));
    verdict(
        "speed relation steps I and II",
        one.passed() && two.passed() && one.tally() == (3, 3) && two.tally() == (9, 9),
        &format!("step I {}/3 under {}, step II {}/9 under {}", one.tally().0, one.axioms, two.tally().0, two.axioms),
    );
}

#[test]
fn massive_contrast() {
    let m = AxiomSet::massive();
    let mut canonical = 0;
    for (i, j) in pairs() {
        let got = expand(&commutator(&Expr::atom(Atom::Q(i)), &Expr::atom(Atom::P(j)), &m), &m, Closure::Open).unwrap();
        let want = if i == j { parsed("i*hbar*Id") } else { Expr::zero() };
        if m.canonical(&got) == want {
            canonical += 1;
        }
    }
    let eq5 = replay_under(&Derivation::get(DerivationId::Eq5), &m);
    let eq6 = replay_under(&Derivation::get(DerivationId::Eq6), &m);
    verdict(
        "massive contrast",
        canonical == 9 && !eq5.passed() && !eq6.passed(),
        &format!(
            "[Q,P] canonical {canonical}/9; constant-velocity replay {}/9, momentum-form replay {}/9 (must fail)",
            eq5.tally().0,
            eq6.tally().0
        ),
    );
}

#[test]
fn numeric_massless_bracket_converges() {
    let base = GridSpec::default_box(17).unwrap();
    let r = convergence(CaseId::MasslessCr, 3, &base, &TestFamily::gaussian(CENTER, DEFAULT_SIGMA)).unwrap();
    let finest = r.rows.last().unwrap();
    let orders_ok = r.orders.len() == 2 && r.orders.iter().all(|o| ORDER_WINDOW.contains(o));
    verdict(
        "numeric massless [Q,P] (orders in [1.7, 2.3], finest < 1e-3)",
        orders_ok && finest.n == 65 && finest.residual < 1e-3,
        &format!(
            "n = {:?}, residuals {:?}, orders {:.3?}",
            r.rows.iter().map(|x| x.n).collect::<Vec<_>>(),
            r.rows.iter().map(|x| format!("{:.4e}", x.residual)).collect::<Vec<_>>(),
            r.orders
        ),
    );
}

#[test]
fn numeric_constant_velocity() {
    let family = TestFamily::seeded(0, CENTER, DEFAULT_SIGMA);
    let qv = convergence(CaseId::MasslessQv, 3, &GridSpec::default_box(17).unwrap(), &family).unwrap();
    let qv_ok = qv.orders.len() == 2 && qv.orders.iter().all(|o| ORDER_WINDOW.contains(o));
    let massive = residual_case(CaseId::MassiveQv, &GridSpec::default_box(65).unwrap(), &family).unwrap();
    let row = &massive.rows[0];
    let analytic = row.analytic.unwrap_or(0.0);
    let off = (row.residual - analytic).abs() / analytic;
    verdict(
        "numeric [Q,V]: massless -> 0, massive -> analytic",
        qv_ok && analytic > 0.0 && off < 0.05,
        &format!(
            "massless orders {:.3?}; massive {:.4e} vs analytic {analytic:.4e} ({:.2}% off at n = 65)",
            qv.orders,
            row.residual,
            100.0 * off
        ),
    );
}

#[test]
fn speed_identity_is_exact() {
    let family = TestFamily::seeded(0, CENTER, DEFAULT_SIGMA);
    let mut worst: f64 = 0.0;
    for n in [8, 17, 32, 33, 65] {
        let r = residual_case(CaseId::Speed, &GridSpec::default_box(n).unwrap(), &family).unwrap();
        worst = worst.max(r.rows[0].residual);
    }
    verdict("speed identity", worst < 1e-12, &format!("worst relative error {worst:.3e} over n in 8..65"));
}

#[test]
fn symbolic_and_numeric_oracles_agree() {
    let ax = AxiomSet::massless();
    let gaussian = TestFunction::gaussian(CENTER, DEFAULT_SIGMA);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let trees: Vec<_> = (0..24).map(|_| sample::tree(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    let mut within = 0;
    for n in [33, 65] {
        let g = GridSpec::default_box(n).unwrap();
        let psi = gaussian.sample(&g);
        let stencil = residual_case(CaseId::MasslessCr, &g, &TestFamily::gaussian(CENTER, DEFAULT_SIGMA))
            .unwrap()
            .rows[0]
            .residual;
        for t in &trees {
            let e = t.to_expr(&ax);
            let d = realize(&e, &psi).relative_distance(&t.apply(&psi), &psi);
            let ratio = d / stencil;
            worst = worst.max(ratio);
            if !e.contains_opaque() && ratio <= 10.0 {
                within += 1;
            }
        }
    }
    verdict(
        "cross-oracle",
        within == 2 * trees.len(),
        &format!("{within}/{} tree-grid pairs within 10x stencil residual, worst {worst:.2}x", 2 * trees.len()),
    );
}

#[test]
fn engine_properties() {
    const N: usize = 1000;
    let ax = AxiomSet::massless();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut failures = [0usize; 4];

    for _ in 0..N {
        let a = sample::expr(&mut rng);
        let b = sample::expr(&mut rng);
        if !equivalent(&commutator(&a, &b, &ax), &(-&commutator(&b, &a, &ax)), &ax) {
            failures[0] += 1;
        }
        if a.normalized() != a || a.mul_free(&b).normalized().normalized() != a.mul_free(&b).normalized() {
            failures[3] += 1;
        }
    }

    for _ in 0..N {
        let a = Expr::atom(sample::atom(&mut rng));
        let b = expand(&sample::expr(&mut rng), &ax, Closure::Open).unwrap();
        let c = expand(&sample::expr(&mut rng), &ax, Closure::Open).unwrap();
        let whole = commutator(&a, &b.mul_free(&c).normalized(), &ax);
        let split = &commutator(&a, &b, &ax).mul_free(&c) + &b.mul_free(&commutator(&a, &c, &ax));
        if !equivalent(&whole, &split, &ax) {
            failures[1] += 1;
        }
    }

    let mut resolvable = 0;
    let mut tries = 0;
    while resolvable < N && tries < 20 * N {
        tries += 1;
        let [a, b, c]: [Expr; 3] = std::array::from_fn(|_| Expr::atom(sample::atom(&mut rng)));
        let parts = [
            commutator(&a, &commutator(&b, &c, &ax), &ax),
            commutator(&b, &commutator(&c, &a, &ax), &ax),
            commutator(&c, &commutator(&a, &b, &ax), &ax),
        ];
        if parts.iter().any(Expr::contains_opaque) {
            continue;
        }
        resolvable += 1;
        let sum = parts.iter().fold(Expr::zero(), |acc, p| &acc + p);
        if !equivalent(&sum, &Expr::zero(), &ax) {
            failures[2] += 1;
        }
    }

    verdict(
        "engine properties",
        failures == [0; 4] && resolvable >= N,
        &format!(
            "failures: antisymmetry {}/{N}, Leibniz {}/{N}, Jacobi {}/{resolvable} resolvable, idempotence {}/{N}",
            failures[0], failures[1], failures[2], failures[3]
        ),
    );
}

/// Seeded corruptions of a valid script: truncation, deletion or insertion
/// of a punctuation character.
fn corrupt(text: &str, rng: &mut ChaCha8Rng) -> String {
    const JUNK: [char; 10] = ['(', ')', '[', ']', '{', ';', ',', '*', '=', '@'];
    let chars: Vec<char> = text.chars().collect();
    let at = rng.gen_range(0..chars.len());
    let mut out = chars.clone();
    match rng.gen_range(0..3) {
        0 => out.truncate(at),
        1 => {
            out.remove(at);
        }
        _ => out.insert(at, JUNK[rng.gen_range(0..JUNK.len())]),
    }
    out.into_iter().collect()
}

fn has_location(stderr: &str) -> bool {
    // "<file>:<line>:<column>: ..."
    stderr.split(':').collect::<Vec<_>>().windows(2).any(|w| {
        !w[0].is_empty() && w[0].chars().all(|c| c.is_ascii_digit()) && !w[1].is_empty() && w[1].chars().all(|c| c.is_ascii_digit())
    })
}

#[test]
fn script_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut round_trips = 0;
    for _ in 0..1000 {
        let e = sample::expr(&mut rng);
        if parse_expr(&e.to_string()).ok().and_then(|n| lower(&n).ok()) == Some(e.clone()) {
            round_trips += 1;
        }
    }

    let bin = opalg_gate::opalg_binary();
    let mut bundled = Vec::new();
    for name in ["eq3.oad", "eq5.oad", "eq6.oad", "sectionA.oad"] {
        let status = Command::new(&bin).arg("check").arg(scripts().join(name)).output().unwrap().status;
        bundled.push((name, status.code() == Some(0)));
    }

    // in-process: no corruption may panic, and every rejection carries a location
    let sources: Vec<String> =
        ["eq3.oad", "eq6.oad", "sectionA.oad"].iter().map(|n| std::fs::read_to_string(scripts().join(n)).unwrap()).collect();
    let mut crashes = 0;
    let mut rejected = Vec::new();
    for k in 0..1000 {
        let bad = corrupt(&sources[k % sources.len()], &mut rng);
        match panic::catch_unwind(|| run_text(&bad).map(|_| ())) {
            Err(_) => crashes += 1,
            Ok(Err(e)) => {
                let s = e.span();
                assert!(s.line >= 1 && s.column >= 1, "{e}");
                if rejected.len() < 40 {
                    rejected.push(bad);
                }
            }
            Ok(Ok(())) => {}
        }
    }

    // through the binary: exit 2 with file:line:column on stderr
    let dir = std::env::temp_dir().join(format!("opalg-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut cli_ok = 0;
    for (k, bad) in rejected.iter().enumerate() {
        let path = dir.join(format!("bad{k}.oad"));
        std::fs::write(&path, bad).unwrap();
        let o = Command::new(&bin).arg("check").arg(&path).output().unwrap();
        if o.status.code() == Some(2) && has_location(&String::from_utf8_lossy(&o.stderr)) {
            cli_ok += 1;
        }
    }

    let bundled_ok = bundled.iter().all(|(_, ok)| *ok);
    verdict(
        "script language",
        round_trips == 1000 && bundled_ok && crashes == 0 && !rejected.is_empty() && cli_ok == rejected.len(),
        &format!(
            "round trip {round_trips}/1000; bundled {}; corruptions: {crashes} crashes, {cli_ok}/{} rejected with exit 2 and line:column",
            bundled.iter().map(|(n, ok)| format!("{n} {}", if *ok { "ok" } else { "FAILED" })).collect::<Vec<_>>().join(", "),
            rejected.len()
        ),
    );
}

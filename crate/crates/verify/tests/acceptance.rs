//! Acceptance run: one PASS/FAIL line per criterion over the default suite.
//!
//! Some criteria cannot pass because the identities they name fail as
//! stated; those lines print FAIL and are listed in `EXPECTED_FAIL`. The
//! harness exits non-zero only when an outcome differs from that list.

use std::process::ExitCode;

use nctorus_verify::{run_suite, Mode, Report, Status, SuiteConfig};

/// Criteria whose literal statements are refuted by the exact checks.
const EXPECTED_FAIL: &[usize] = &[3, 4, 5];

const NUMERIC_TOL: f64 = 1e-9;

struct Line {
    n: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn entry<'a>(r: &'a Report, id: &str) -> &'a nctorus_verify::Entry {
    r.get(id).unwrap_or_else(|| panic!("missing entry {id}"))
}

fn secs<S: AsRef<str>>(r: &Report, ids: &[S]) -> f64 {
    ids.iter().map(|id| entry(r, id.as_ref()).millis.unwrap_or(0) as f64).sum::<f64>() / 1000.0
}

/// Exact identities pass and their controls detect the mutation.
fn exact_group(r: &Report, ids: &[String], limit: Option<f64>) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ids {
        let e = entry(r, id);
        let pass = e.status == Status::Pass;
        ok &= pass;
        let failed = e.params.get("failed").map(|v| format!(" failed={v}")).unwrap_or_default();
        parts.push(format!("{id}={}{failed}", status(e.status)));
    }
    let t = secs(r, ids);
    if let Some(limit) = limit {
        ok &= t < limit;
        parts.push(format!("time={t:.1}s<{limit}s"));
    }
    (ok, parts.join(", "))
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::ReportedVariant => "reported-variant",
        Status::NotApplicable => "not-applicable",
    }
}

fn with_controls(ids: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
    v.extend(ids.iter().map(|id| format!("{id}/negative-control")));
    v
}

const C1: &[&str] = &["chi-recursion"];
const C2: &[&str] = &["word-orthonormality"];
const C3: &[&str] = &["xi-recursion", "xi-boundary-mixed", "xi-boundary-u", "xi-products"];
const C4: &[&str] = &["xi-inner-products", "xi-inner-products-epsilon"];
const C5: &[&str] = &["xi-ilk-norms", "xi-ilk-orthogonality", "xi-ilk-recursion"];
const C6: &[&str] = &["w1-decomposition", "gamma-span"];
const C7: &[&str] = &["commutator-map", "ilk-coefficient-identity"];

fn criteria(r: &Report, rerun: &Report) -> Vec<Line> {
    let mut out = Vec::new();
    let mut push = |n, name, (pass, detail): (bool, String)| out.push(Line { n, name, pass, detail });

    push(1, "chi recursion", exact_group(r, &with_controls(C1), Some(30.0)));
    push(2, "orthonormal words", exact_group(r, &with_controls(C2), Some(120.0)));
    push(3, "xi recursion, boundary and product box", exact_group(r, &with_controls(C3), Some(300.0)));
    push(4, "xi inner-product table", exact_group(r, &with_controls(C4), None));
    push(5, "xi^{i,l,k} norms, orthogonality, recursion", exact_group(r, &with_controls(C5), None));
    push(6, "decomposition of W_1 and gamma span", exact_group(r, &with_controls(C6), None));

    // The map must reproduce the expansion; the sign variant of the
    // coefficient identity must be reported rather than hidden.
    let map = entry(r, "commutator-map");
    let tables = map.params.get("tables").and_then(|v| v.as_u64()).unwrap_or(0);
    let ident = entry(r, "ilk-coefficient-identity");
    let ident_ok = matches!(ident.status, Status::Pass | Status::ReportedVariant);
    let printed = entry(r, "commutator-map/as-printed");
    push(
        7,
        "commutator coefficient map",
        (
            map.status == Status::Pass && tables >= 50 && ident_ok,
            format!(
                "commutator-map={} tables={tables}, ilk-coefficient-identity={}, commutator-map/as-printed={} failed={}",
                status(map.status),
                status(ident.status),
                status(printed.status),
                printed.params.get("failed").cloned().unwrap_or_default()
            ),
        ),
    );

    let (worst_id, worst) = [C1, C2, C3, C4, C5, C6, C7]
        .concat()
        .into_iter()
        .map(|id| (id, entry(r, id).numeric_deviation.unwrap_or(f64::INFINITY)))
        .fold(("", 0.0), |a, b| if b.1 > a.1 { b } else { a });
    push(8, "exact vs numeric", (worst <= NUMERIC_TOL, format!("max deviation {worst:.1e} ({worst_id}) <= {NUMERIC_TOL:e}")));

    let aop = entry(r, "aop-decay");
    let seeds = aop.params.get("seeds").and_then(|v| v.as_u64()).unwrap_or(0);
    let t = secs(r, &["aop-decay"]);
    push(
        9,
        "AOP decay trend",
        (
            aop.mode == Mode::SampledNumeric && aop.status == Status::Pass && seeds >= 20 && t < 600.0,
            format!("status={} seeds={seeds} ratio M2/M1={:?} time={t:.1}s", status(aop.status), aop.ratio),
        ),
    );

    let (a, b) = (r.to_json(false), rerun.to_json(false));
    push(10, "determinism", (a == b, format!("{} bytes, identical={}", a.len(), a == b)));
    out
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let first = run_suite(&cfg).expect("default config is valid");
    let second = run_suite(&cfg).expect("default config is valid");
    let lines = criteria(&first, &second);
    let mut unexpected = 0;
    for l in &lines {
        println!("criterion {:>2} {} — {}: {}", l.n, if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
        if l.pass == EXPECTED_FAIL.contains(&l.n) {
            unexpected += 1;
            println!("  unexpected outcome for criterion {}", l.n);
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("{passed}/{} criteria pass; expected failures: {EXPECTED_FAIL:?}", lines.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

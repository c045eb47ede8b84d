//! The twelve acceptance criteria, evaluated from the suite report. Run with
//! `--nocapture` to see one pass/fail line per criterion.

use levelzero::config::RunConfig;
use levelzero::suite::{run_suite, CheckRecord, Report, Status};

struct Criterion {
    number: usize,
    title: &'static str,
    ids: Vec<&'static str>,
}

fn criteria() -> Vec<Criterion> {
    let c = |number, title, ids: &[&'static str]| Criterion { number, title, ids: ids.to_vec() };
    vec![
        c(1, "exact identities", &[
            "exact.residue_table",
            "exact.residue_table.six_sites",
            "exact.w_expansion",
            "exact.extremal_prefactor",
            "exact.sum_rule.quantum",
            "exact.sum_rule.classical",
            "exact.total_difference",
            "exact.nu_tilde_partial_fractions",
            "exact.w_tilde_via_nu",
            "exact.q_decomposition",
            "exact.generating_function",
            "exact.polynomial_part_swap",
            "exact.exchange_relation",
            "exact.basis_exchange",
            "exact.membership",
        ]),
        c(2, "top Q-polynomial vanishes at n = 2ℓ", &["exact.top_q_vanishes"]),
        c(3, "analytic vanishing laws and contour choice", &[
            "analytic.trivial_cycles",
            "analytic.total_differences",
            "analytic.small_remainder",
            "analytic.contour_choice",
        ]),
        c(4, "jump formula for singlet ν̃", &["analytic.jump_formula"]),
        c(5, "phase asymptotics", &["analytic.phase_asymptotics"]),
        c(6, "qKZ residuals", &["qkz.residual.n2_l1", "qkz.residual.n3_l1", "qkz.residual.n4_l2"]),
        c(7, "singular vectors and the trivial class", &["qkz.singular_vectors", "qkz.trivial_class_zero"]),
        c(8, "singlet degeneracy and closed forms", &["qkz.singlet_degeneracy", "qkz.singlet_forms"]),
        c(9, "assembly routes agree", &["qkz.routes.tensor", "qkz.routes.residue_basis", "qkz.routes.polynomial"]),
        c(10, "classical side", &[
            "kz.calibration",
            "kz.closed_cycles_zero",
            "kz.factor_four",
            "kz.residual.n4_l1",
            "kz.residual.n4_l2",
        ]),
        c(11, "trace example with the printed constant", &["trace.identity.printed_constant"]),
    ]
}

fn line(number: usize, title: &str, pass: bool, detail: &str) {
    println!("criterion {number:2}: {} {title} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn describe(records: &[&CheckRecord]) -> String {
    let worst = records
        .iter()
        .filter_map(|r| r.residual.map(|x| (x, r.tolerance)))
        .fold((0.0f64, 0.0f64), |a, b| if b.0 > a.0 { b } else { a });
    format!("{} checks, worst residual {:.2e} vs tol {:.0e}", records.len(), worst.0, worst.1)
}

#[test]
fn acceptance() {
    let cfg = RunConfig { jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1), ..Default::default() };
    let report = run_suite(&cfg).expect("default config runs");
    let mut failures = Vec::new();
    for crit in criteria() {
        let records: Vec<&CheckRecord> = crit.ids.iter().map(|id| report.get(id).unwrap_or_else(|| panic!("missing check {id}"))).collect();
        let pass = records.iter().all(|r| r.status == Status::Pass);
        line(crit.number, crit.title, pass, &describe(&records));
        if !pass {
            failures.push(crit.number);
        }
    }
    let again = run_suite(&cfg).expect("second run");
    let same = again.to_json() == report.to_json();
    line(12, "determinism of the JSON report", same, "two runs, same config and seed");
    if !same {
        failures.push(12);
    }

    // Criterion 11 fails as stated: the trace matches ψ_W componentwise, but the
    // printed constant is off by exactly (−1/2)^(ℓ(n−2ℓ)) (see the decisions ledger).
    // Pin that exact outcome so any other change in either pipeline shows up.
    let shape = report.get("trace.identity.shape").unwrap();
    assert_eq!(shape.status, Status::Pass, "{shape:?}");
    let printed = report.get("trace.identity.printed_constant").unwrap();
    assert!((printed.residual.unwrap() - 1.5).abs() < 1e-8, "{printed:?}");
    assert_eq!(failures, vec![11], "unexpected criterion failures");
}

#[test]
fn report_round_trips_and_tables_match() {
    let cfg = RunConfig { suites: vec![levelzero::config::Suite::Kz], ..Default::default() };
    let report = run_suite(&cfg).unwrap();
    let json = report.to_json();
    let back = Report::from_json(&json).unwrap();
    assert_eq!(back.to_json(), json);
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "check_id,anchor,status,residual,tolerance,seconds");
    assert_eq!(lines.count(), report.checks.len());
    assert!(report.checks.iter().all(|c| !c.anchor.is_empty()));
    assert_eq!(report.schema, 1);
}

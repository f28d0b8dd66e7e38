//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};

use paracalc_core::{run_convergence, run_suite, FieldKind, Suite, SuiteConfig, SuiteReport};

struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    /// Every listed case must exist in `report` and pass.
    fn cases(&mut self, report: &SuiteReport, names: &[&str]) {
        for name in names {
            match report.case(name) {
                Some(c) if c.pass => {}
                Some(c) => self.failures.push(format!(
                    "{name}: residual {:e} > {:e}",
                    c.residual, c.threshold
                )),
                None => self.failures.push(format!("{name}: missing")),
            }
        }
    }

    fn cases_with_prefix(&mut self, report: &SuiteReport, prefix: &str, expected: usize) {
        let names: Vec<&str> = report
            .cases
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| c.name.as_str())
            .collect();
        self.require(
            names.len() == expected,
            format!("{prefix}*: {} cases, expected {expected}", names.len()),
        );
        self.cases(report, &names);
    }

    fn finish(self) -> bool {
        let ok = self.failures.is_empty();
        println!(
            "{} criterion {}: {}",
            if ok { "PASS" } else { "FAIL" },
            self.id,
            self.title
        );
        for f in &self.failures {
            println!("    {f}");
        }
        ok
    }
}

fn suite(s: Suite) -> SuiteReport {
    run_suite(&SuiteConfig::for_suite(s)).expect("default configuration is valid")
}

fn binary(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_paracalc"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code(),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn algebra(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        1,
        "algebra identities over 1000 paravectors, action expansions exact",
    );
    c.require(r.samples * 20 >= 1000, "fewer than 1000 draws");
    c.cases(
        r,
        &[
            "algebra.associativity",
            "algebra.reversion_anti_automorphism",
            "algebra.det_multiplicative",
            "algebra.inverse",
            "algebra.left_action_expansion",
            "algebra.right_action_expansion",
        ],
    );
    for name in [
        "algebra.associativity",
        "algebra.reversion_anti_automorphism",
        "algebra.det_multiplicative",
    ] {
        c.require(
            r.case(name).is_some_and(|k| k.threshold == 1e-12),
            format!("{name}: threshold"),
        );
    }
    for name in [
        "algebra.left_action_expansion",
        "algebra.right_action_expansion",
    ] {
        c.require(
            r.case(name).is_some_and(|k| k.residual == 0.0),
            format!("{name}: not exact"),
        );
    }
    c.finish()
}

fn operators(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        2,
        "operator assembly vs oracle, numeric vs exact, second-order convergence",
    );
    c.cases(
        r,
        &[
            "diffop.div4_assembly_vs_product_oracle",
            "diffop.grad4_assembly_vs_product_oracle",
            "diffop.numeric_vs_exact_partials",
            "diffop.convergence_order",
        ],
    );
    c.require(r.tolerances.step == 1e-5, "step is not 1e-5");
    for kind in [FieldKind::Poly, FieldKind::PlaneWave] {
        match run_convergence(kind, &[1e-3, 5e-4], 42) {
            Ok(rows) => {
                let ratio = rows[0].ratio.unwrap_or(f64::NAN);
                c.require(
                    (3.2..=4.8).contains(&ratio),
                    format!("{kind:?}: ratio {ratio}"),
                );
            }
            Err(e) => c.require(false, format!("{kind:?}: {e}")),
        }
    }
    c.finish()
}

fn leibniz(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        3,
        "additivity and Leibniz rules, failure witnesses above their floors",
    );
    c.cases(
        r,
        &[
            "diffop.additivity.exact",
            "diffop.linearity.exact",
            "diffop.leibniz_div.exact",
            "diffop.leibniz_grad.exact",
            "diffop.product_rule_failure_witness",
            "diffop.ordering_witness",
        ],
    );
    c.finish()
}

fn theorems(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        4,
        "transformation rules for left, right and constant-factor maps",
    );
    c.require(r.samples == 50, "not 50 cases per identity");
    c.cases_with_prefix(r, "thm3.", 4);
    c.cases_with_prefix(r, "thm4.", 4);
    c.cases_with_prefix(r, "thm5.", 8);
    for case in r.cases.iter().filter(|k| k.name.starts_with("thm")) {
        let expected = if case.name.ends_with(".exact") {
            1e-10
        } else {
            1e-5
        };
        c.require(
            case.threshold == expected,
            format!("{}: threshold {:e}", case.name, case.threshold),
        );
    }
    c.finish()
}

fn rotation(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(5, "rotation identity under orthogonal conjugation");
    c.cases(r, &["rotation.exact"]);
    c.require(
        r.case("rotation.exact")
            .is_some_and(|k| k.threshold == 1e-10),
        "threshold",
    );
    c.finish()
}

fn wave(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        6,
        "wave-operator invariance in four forms, covariant and contravariant values differ",
    );
    c.cases(
        r,
        &[
            "wave.form1.exact",
            "wave.form2.exact",
            "wave.form3.exact",
            "wave.form4.exact",
            "wave.covariant_vs_contravariant",
        ],
    );
    for k in r.cases.iter().filter(|k| k.name.starts_with("wave.form")) {
        c.require(
            k.threshold <= 1e-9,
            format!("{}: threshold {:e}", k.name, k.threshold),
        );
    }
    c.finish()
}

fn maxwell(r: &SuiteReport) -> bool {
    let mut c = Criterion::new(
        7,
        "vacuum plane waves, factorization chain and Gauss slice for c = 1 and c = 2",
    );
    let base = [
        "maxwell.plane_wave_gauge",
        "maxwell.plane_wave_sources",
        "maxwell.factorization",
        "maxwell.gauss_slice",
    ];
    let names: Vec<String> = base
        .iter()
        .flat_map(|b| [b.to_string(), format!("{b}.c2")])
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    c.cases(r, &refs);
    c.require(r.samples * 2 >= 100, "fewer than 100 events");
    c.finish()
}

fn harness() -> bool {
    let mut c = Criterion::new(8, "byte-identical JSON and the exit-code contract");
    let args = ["check", "all", "--seed", "7", "--json"];
    let (code1, out1) = binary(&args);
    let (code2, out2) = binary(&args);
    c.require(
        code1 == Some(0) && code2 == Some(0),
        format!("clean run exit codes {code1:?}, {code2:?}"),
    );
    c.require(
        !out1.is_empty() && out1 == out2,
        "JSON differs between identical runs",
    );
    c.require(
        serde_json::from_str::<serde_json::Value>(&out1).is_ok(),
        "invalid JSON",
    );
    c.require(
        out1.ends_with("}\n") && out1.lines().count() == 1,
        "not one newline-terminated object",
    );
    // top-level keys in schema order; the nested keys follow "cases"
    let positions: Vec<Option<usize>> = [
        "\"suite\":",
        "\"seed\":",
        "\"samples\":",
        "\"tolerances\":",
        "\"cases\":",
    ]
    .iter()
    .map(|k| out1.find(k))
    .chain(["\"passed\":", "\"failed\":"].iter().map(|k| out1.rfind(k)))
    .collect();
    c.require(
        positions.iter().all(Option::is_some) && positions.windows(2).all(|w| w[0] < w[1]),
        format!("key order {positions:?}"),
    );

    let (code, out) = binary(&["check", "transforms", "--tol-exact", "1e-30", "--json"]);
    c.require(
        code == Some(1),
        format!("forced failure exit code {code:?}"),
    );
    let failed = serde_json::from_str::<serde_json::Value>(&out)
        .ok()
        .and_then(|v| v["failed"].as_u64())
        .unwrap_or(0);
    c.require(failed > 0, "forced failure reported no failed cases");

    let (code, _) = binary(&["check", "bogus"]);
    c.require(code == Some(2), format!("unknown suite exit code {code:?}"));
    let (code, _) = binary(&["check", "algebra", "--samples", "0"]);
    c.require(code == Some(2), format!("zero samples exit code {code:?}"));
    let (code, _) = binary(&["convergence", "--field", "poly", "--steps", "1e-3,1e-2"]);
    c.require(
        code == Some(2),
        format!("increasing steps exit code {code:?}"),
    );
    c.finish()
}

fn main() -> ExitCode {
    let algebra_report = suite(Suite::Algebra);
    let diffop_report = suite(Suite::Diffop);
    let transforms_report = suite(Suite::Transforms);
    let results = [
        algebra(&algebra_report),
        operators(&diffop_report),
        leibniz(&diffop_report),
        theorems(&transforms_report),
        rotation(&transforms_report),
        wave(&suite(Suite::Wave)),
        maxwell(&suite(Suite::Maxwell)),
        harness(),
    ];
    let passed = results.iter().filter(|ok| **ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

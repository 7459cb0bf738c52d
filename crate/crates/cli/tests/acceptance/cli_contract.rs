//! Round-trip and exit-code contracts of the `ordembed` binary over the
//! fixture corpus.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use ordembed_cli::format::{parse_order, parse_poly, print_order, print_poly};

use super::Outcome;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

/// Runs the binary with `--json --no-meta`; returns the exit code and the
/// report, if one was printed.
pub fn ordembed(args: &[&str]) -> (i32, Option<Value>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ordembed"))
        .args(["--json", "--no-meta"])
        .args(args)
        .output()
        .expect("run ordembed");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let report = serde_json::from_str(&stdout).ok();
    (out.status.code().unwrap_or(-1), report, stdout)
}

struct Case {
    args: Vec<String>,
    exit: i32,
    /// `(JSON pointer, expected value)` checks on the report.
    expect: Vec<(&'static str, Value)>,
}

fn case(args: &[&str], exit: i32) -> Case {
    Case {
        args: args
            .iter()
            .map(|a| {
                if a.ends_with(".json") {
                    fixture(a)
                } else {
                    a.to_string()
                }
            })
            .collect(),
        exit,
        expect: Vec::new(),
    }
}

impl Case {
    fn expect(mut self, pointer: &'static str, value: Value) -> Case {
        self.expect.push((pointer, value));
        self
    }
}

fn cases() -> Vec<Case> {
    use serde_json::json;
    vec![
        case(&["validate", "orders/lex2.json"], 0).expect("/result/valid", json!(true)),
        case(&["validate", "orders/lex3.json"], 0),
        case(&["validate", "orders/sqrt2.json"], 0).expect("/result/block_ranks", json!([2])),
        case(&["validate", "orders/quadratic3.json"], 0),
        case(&["validate", "orders/rational_k1.json"], 3)
            .expect("/result/issues/0/kind", json!("separation-fails"))
            .expect("/result/issues/0/witness", json!([3, -2])),
        case(&["validate", "orders/impure.json"], 3)
            .expect("/result/issues/0/kind", json!("not-pure"))
            .expect("/result/issues/0/witness", json!([1, 0])),
        case(&["validate", "orders/not_vanishing.json"], 3),
        case(&["validate", "orders/not_full.json"], 3),
        case(&["validate", "orders/not_increasing.json"], 3),
        case(&["validate", "orders/empty_chain.json"], 3),
        case(&["validate", "orders/float_literal.json"], 2)
            .expect("/result/error/kind", json!("parse"))
            .expect("/result/error/line", json!(5)),
        case(&["validate", "orders/bad_radicand.json"], 2),
        case(&["validate", "orders/unreduced.json"], 2),
        case(&["validate", "orders/dim_mismatch.json"], 2),
        case(&["validate", "orders/syntax_error.json"], 2),
        case(&["validate", "orders/bad_version.json"], 2),
        case(&["validate", "orders/unknown_field.json"], 2),
        case(&["validate", "orders/missing.json"], 2).expect("/result/error/kind", json!("io")),
        case(&["sgn", "orders/lex2.json", "[3,0]"], 0)
            .expect("/result/sign", json!(1))
            .expect("/result/level", json!(1)),
        case(&["sgn", "orders/lex2.json", "[0,0]"], 0).expect("/result/sign", json!(0)),
        case(&["sgn", "orders/sqrt2.json", "[-1,1]"], 0).expect("/result/sign", json!(1)),
        case(&["sgn", "orders/sqrt2.json", "1,-1"], 0).expect("/result/sign", json!(-1)),
        case(&["sgn", "orders/sqrt2.json", "[1,2,3]"], 2),
        case(&["sgn", "orders/sqrt2.json", "[1.5,0]"], 2),
        case(&["sgn", "orders/impure.json", "[1,0]"], 3),
        case(&["embed", "orders/lex3.json", "--set", "sets/lex3.json"], 0)
            .expect("/result/psi", json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]])),
        case(
            &["embed", "orders/sqrt2.json", "--set", "sets/sqrt2.json"],
            0,
        )
        .expect("/result/clean", json!(true)),
        case(
            &[
                "embed",
                "orders/sqrt2.json",
                "--poly",
                "polys/sqrt2_analytic.json",
            ],
            0,
        ),
        case(
            &[
                "embed",
                "orders/quadratic3.json",
                "--poly",
                "polys/hardy3d.json",
            ],
            0,
        ),
        case(
            &[
                "embed",
                "orders/sqrt2.json",
                "--set",
                "sets/sqrt2.json",
                "--verify-only",
                "psi/identity2.json",
            ],
            4,
        )
        .expect("/result/clean", json!(false)),
        case(
            &[
                "embed",
                "orders/sqrt2.json",
                "--set",
                "sets/sqrt2.json",
                "--verify-only",
                "psi/singular2.json",
            ],
            4,
        )
        .expect("/result/violations/0/kind", json!("not-unimodular")),
        case(
            &[
                "embed",
                "orders/sqrt2.json",
                "--set",
                "sets/sqrt2.json",
                "--verify-only",
                "psi/malformed.json",
            ],
            2,
        ),
        case(
            &["embed", "orders/sqrt2.json", "--set", "sets/wrong_dim.json"],
            2,
        ),
        case(
            &[
                "embed",
                "orders/rational_k1.json",
                "--set",
                "sets/sqrt2.json",
            ],
            3,
        ),
        case(
            &[
                "embed",
                "orders/sqrt2.json",
                "--poly",
                "polys/duplicate.json",
            ],
            2,
        ),
        case(&["decompose", "polys/example3.json"], 0)
            .expect("/result/nonzero_blocks", json!(3))
            .expect("/result/reassembles", json!(true)),
        case(&["decompose", "polys/constant5.json"], 0)
            .expect("/result/nonzero_blocks", json!(1))
            .expect("/result/blocks/0/terms/0/freq", json!([0, 0])),
        case(&["decompose", "polys/zero.json"], 0).expect("/result/nonzero_blocks", json!(0)),
        case(&["decompose", "polys/duplicate.json"], 2),
        case(&["decompose", "polys/float_freq.json"], 2),
        case(&["decompose", "polys/dim_mismatch.json"], 2),
        case(&["decompose", "polys/missing_im.json"], 2),
        case(&["decompose", "polys/syntax_error.json"], 2),
        case(&["check", "polys/constant5.json"], 0)
            .expect("/result/jensen/lhs", json!(5.0))
            .expect("/result/steps/0/margin", json!(0.0)),
        case(&["check", "polys/outer1d.json", "--jensen"], 0),
        case(
            &[
                "check",
                "polys/outer_half.json",
                "--jensen",
                "--grid",
                "4096",
                "--no-refine",
            ],
            0,
        )
        .expect("/result/jensen/quadrature/grid_size", json!(4096)),
        case(
            &[
                "check",
                "polys/example3.json",
                "--steps",
                "--pmean",
                "0.25",
                "--pmean",
                "0.9",
            ],
            0,
        ),
        case(&["check", "polys/hardy3d.json", "--grid", "16"], 0),
        case(
            &[
                "check",
                "polys/sqrt2_analytic.json",
                "--order",
                "orders/sqrt2.json",
            ],
            0,
        )
        .expect("/result/analytic", json!(true)),
        case(&["check", "polys/nonhardy.json", "--jensen"], 3)
            .expect("/result/error/details/witness", json!([-1, 0])),
        case(
            &[
                "check",
                "polys/sqrt2_not_analytic.json",
                "--order",
                "orders/sqrt2.json",
            ],
            3,
        ),
        case(
            &[
                "check",
                "polys/sqrt2_analytic.json",
                "--order",
                "orders/impure.json",
            ],
            3,
        ),
        case(
            &[
                "check",
                "polys/hardy3d.json",
                "--order",
                "orders/sqrt2.json",
            ],
            2,
        ),
        case(&["check", "polys/zero.json"], 3),
        case(&["check", "polys/outer1d.json", "--pmean", "1.5"], 2),
        case(&["check", "polys/outer1d.json", "--grid", "1"], 2),
        case(&["selftest", "--n-max", "0"], 2),
        case(
            &["selftest", "--seed", "7", "--count", "4", "--n-max", "2"],
            0,
        )
        .expect("/result/failures", json!(0)),
    ]
}

fn corpus(dir: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(fixtures().join(dir))
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

pub fn run() -> Outcome {
    let mut failures = Vec::new();
    let orders = corpus("orders");
    let polys = corpus("polys");
    if orders.len() < 10 || polys.len() < 10 {
        failures.push(format!(
            "corpus too small: {} orders, {} polys",
            orders.len(),
            polys.len()
        ));
    }

    // parse(print(x)) = x and print is a fixed point, for every fixture
    // that parses.
    let mut round_trips = 0;
    for path in &orders {
        if let Ok(spec) = parse_order(&fs::read_to_string(path).unwrap()) {
            round_trips += 1;
            let text = print_order(&spec);
            if parse_order(&text).as_ref() != Ok(&spec)
                || parse_order(&text).map(|s| print_order(&s)).as_ref() != Ok(&text)
            {
                failures.push(format!("round trip {}", path.display()));
            }
        }
    }
    for path in &polys {
        if let Ok(f) = parse_poly(&fs::read_to_string(path).unwrap()) {
            round_trips += 1;
            let text = print_poly(&f);
            if parse_poly(&text).as_ref() != Ok(&f)
                || parse_poly(&text).map(|g| print_poly(&g)).as_ref() != Ok(&text)
            {
                failures.push(format!("round trip {}", path.display()));
            }
        }
    }

    let cases = cases();
    let mut used = BTreeSet::new();
    for c in &cases {
        let args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        used.extend(c.args.iter().filter(|a| a.ends_with(".json")).cloned());
        let (code, report, _) = ordembed(&args);
        let Some(report) = report else {
            failures.push(format!("{args:?}: no report"));
            continue;
        };
        let verdict_ok =
            (report["verdict"] == "pass") == (code == 0) && report["exit_code"] == code;
        if code != c.exit || !verdict_ok {
            failures.push(format!("{args:?}: exit {code}, expected {}", c.exit));
        }
        for (pointer, value) in &c.expect {
            if report.pointer(pointer) != Some(value) {
                failures.push(format!(
                    "{args:?}: {pointer} = {:?}",
                    report.pointer(pointer)
                ));
            }
        }
    }
    for path in orders
        .iter()
        .chain(&polys)
        .chain(&corpus("sets"))
        .chain(&corpus("psi"))
    {
        if !used.contains(&path.display().to_string()) {
            failures.push(format!("fixture {} not exercised", path.display()));
        }
    }

    // Usage errors caught by the argument parser.
    for args in [&[][..], &["frobnicate"][..], &["embed", "x.json"][..]] {
        let (code, _, _) = ordembed(args);
        if code != 2 {
            failures.push(format!("{args:?}: exit {code}, expected 2"));
        }
    }

    // Reports are byte-identical across runs without meta.
    for args in [
        vec![
            fixture("orders/sqrt2.json"),
            "--set".into(),
            fixture("sets/sqrt2.json"),
        ],
        vec!["--seed".into(), "3".into(), "--count".into(), "3".into()],
    ] {
        let cmd = if args[0] == "--seed" {
            "selftest"
        } else {
            "embed"
        };
        let mut full: Vec<&str> = vec![cmd];
        full.extend(args.iter().map(String::as_str));
        if ordembed(&full).2 != ordembed(&full).2 {
            failures.push(format!("{cmd}: reports differ between runs"));
        }
    }

    // A tampered psi in an edited report fails verification.
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("embed.json");
    let report_arg = report_path.display().to_string();
    let (order, set) = (fixture("orders/sqrt2.json"), fixture("sets/sqrt2.json"));
    let (code, _, _) = ordembed(&["--out", &report_arg, "embed", &order, "--set", &set]);
    let verified = ordembed(&["embed", &order, "--set", &set, "--verify-only", &report_arg]).0;
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let entry = &mut doc["result"]["psi"][0][0];
    *entry = Value::from(entry.as_i64().unwrap() + 1);
    fs::write(&report_path, doc.to_string()).unwrap();
    let tampered = ordembed(&["embed", &order, "--set", &set, "--verify-only", &report_arg]).0;
    if (code, verified, tampered) != (0, 0, 4) {
        failures.push(format!(
            "tampered psi: exits {code}, {verified}, {tampered}"
        ));
    }

    for f in &failures {
        eprintln!("  cli contract: {f}");
    }
    Outcome::new(
        failures.len(),
        format!(
            "{} order + {} poly fixtures, {round_trips} round trips, {} command cases",
            orders.len(),
            polys.len(),
            cases.len()
        ),
    )
}

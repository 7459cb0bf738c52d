use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ordembed_core::embedding::{lex_sign, CertificateReport, ViolationKind};
use ordembed_core::order::ValidationReport;
use ordembed_core::torus::{
    is_analytic, is_hardy, is_hardy_by_differences, jensen_check, martingale_differences,
    p_mean_check, random_hardy, relabel, step_check, JensenReport, PMeanReport, QuadratureOptions,
    QuadratureResult, StepReport, TorusError,
};
use ordembed_core::{
    embed, random_order, verify_embedding, verify_map, IntMatrix, IntVector, OrderSpec, Sign,
    TrigPoly,
};

use crate::format::{
    self, int_to_json, matrix_columns_to_json, matrix_rows_to_json, order_to_json, poly_to_json,
    terms_to_json, vector_to_json, ParseError,
};
use crate::report::{CommandError, Exit, Report};
use crate::{CheckArgs, Command};

type Handler = fn(&Command, &mut Report) -> Result<(), CommandError>;

pub fn execute(command: &Command) -> Report {
    let (name, outcome): (&'static str, Handler) = match command {
        Command::Validate { .. } => ("validate", validate),
        Command::Sgn { .. } => ("sgn", sgn),
        Command::Embed { .. } => ("embed", embed_cmd),
        Command::Decompose { .. } => ("decompose", decompose),
        Command::Check(_) => ("check", check),
        Command::Selftest { .. } => ("selftest", selftest),
    };
    let mut report = Report::new(name);
    if let Err(e) = outcome(command, &mut report) {
        report.fail_with(&e);
    }
    report
}

fn read(path: &Path) -> Result<String, CommandError> {
    fs::read_to_string(path).map_err(|e| CommandError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CommandError> {
    r.map_err(|error| CommandError::Parse {
        path: path.display().to_string(),
        error,
    })
}

fn load_order(report: &mut Report, path: &Path) -> Result<OrderSpec, CommandError> {
    report.input("order", json!({"path": path.display().to_string()}));
    let spec = parsed(path, format::parse_order(&read(path)?))?;
    report.input(
        "order",
        json!({"path": path.display().to_string(), "document": order_to_json(&spec)}),
    );
    Ok(spec)
}

fn load_poly(report: &mut Report, path: &Path) -> Result<TrigPoly, CommandError> {
    report.input("poly", json!({"path": path.display().to_string()}));
    let f = parsed(path, format::parse_poly(&read(path)?))?;
    report.input(
        "poly",
        json!({"path": path.display().to_string(), "document": poly_to_json(&f)}),
    );
    Ok(f)
}

fn issues_json(v: &ValidationReport) -> Value {
    Value::Array(
        v.issues
            .iter()
            .map(|i| {
                json!({
                    "level": i.level,
                    "kind": i.kind.as_str(),
                    "witness": i.witness.as_ref().map(vector_to_json),
                })
            })
            .collect(),
    )
}

/// Loads an order and insists that it is valid.
fn load_valid_order(report: &mut Report, path: &Path) -> Result<OrderSpec, CommandError> {
    let spec = load_order(report, path)?;
    let v = spec.validate();
    if !v.is_valid() {
        for i in &v.issues {
            report.line(i.to_string());
        }
        return Err(CommandError::Precondition {
            message: format!("{} is not a valid order", path.display()),
            details: json!({ "issues": issues_json(&v) }),
        });
    }
    Ok(spec)
}

fn check_dim(what: &str, expected: usize, found: usize) -> Result<(), CommandError> {
    if expected != found {
        return Err(CommandError::Usage(format!(
            "{what} has dimension {found}, but the order has N = {expected}"
        )));
    }
    Ok(())
}

fn validate(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Validate { order } = command else {
        unreachable!()
    };
    let spec = load_order(report, order)?;
    let v = spec.validate();
    report.result = json!({
        "valid": v.is_valid(),
        "N": spec.dim(),
        "levels": spec.levels().len(),
        "issues": issues_json(&v),
    });
    if v.is_valid() {
        report.result["block_ranks"] = json!(spec.block_ranks());
        report.line(format!(
            "valid order on Z^{} with {} levels, block ranks {:?}",
            spec.dim(),
            spec.levels().len(),
            spec.block_ranks()
        ));
    } else {
        report.exit = Exit::Precondition;
        for i in &v.issues {
            report.line(i.to_string());
        }
    }
    Ok(())
}

fn sgn(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Sgn { order, vector } = command else {
        unreachable!()
    };
    report.input("vector", json!(vector));
    let x = format::parse_vector_arg(vector)
        .map_err(|e| CommandError::Usage(format!("vector {vector:?}: {e}")))?;
    report.input("vector", vector_to_json(&x));
    let spec = load_valid_order(report, order)?;
    check_dim("vector", spec.dim(), x.dim())?;
    let (sign, level) = spec
        .sgn_with_level(&x)
        .map_err(|e| CommandError::precondition(e.to_string()))?;
    report.result = json!({"vector": vector_to_json(&x), "sign": sign.to_i8(), "level": level});
    match level {
        Some(j) => report.line(format!("sgn {x} = {sign} (level {j})")),
        None => report.line(format!("sgn {x} = {sign}")),
    }
    Ok(())
}

fn violations_json(c: &CertificateReport) -> Value {
    Value::Array(
        c.violations
            .iter()
            .map(|v| {
                let mut o = json!({
                    "x": v.x.as_ref().map(vector_to_json),
                    "message": v.kind.to_string(),
                });
                o["kind"] = match &v.kind {
                    ViolationKind::NotUnimodular => json!("not-unimodular"),
                    ViolationKind::SignMismatch { expected, found } => {
                        o["expected"] = json!(expected.to_i8());
                        o["found"] = json!(found.to_i8());
                        json!("sign-mismatch")
                    }
                    ViolationKind::BlockMismatch { expected, found } => {
                        o["expected"] = json!(expected);
                        o["found"] = json!(found);
                        json!("block-mismatch")
                    }
                    ViolationKind::Order(_) => json!("order"),
                };
                o
            })
            .collect(),
    )
}

fn certificate_summary(report: &mut Report, c: &CertificateReport) {
    report.result["checked"] = json!(c.checked);
    report.result["violations"] = violations_json(c);
    report.result["clean"] = json!(c.is_clean());
    if c.is_clean() {
        report.line(format!("certificate clean over {} vectors", c.checked));
    } else {
        report.exit = Exit::CheckFailed;
        report.line(format!(
            "{} violations over {} vectors",
            c.violations.len(),
            c.checked
        ));
        for v in &c.violations {
            match &v.x {
                Some(x) => report.line(format!("{x}: {}", v.kind)),
                None => report.line(v.kind.to_string()),
            }
        }
    }
}

fn embed_cmd(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Embed {
        order,
        set,
        poly,
        psi_out,
        verify_only,
    } = command
    else {
        unreachable!()
    };
    let spec = load_valid_order(report, order)?;
    let s = match (set, poly) {
        (Some(path), _) => {
            report.input("set", json!({"path": path.display().to_string()}));
            let (n, vs) = parsed(path, format::parse_set(&read(path)?))?;
            check_dim("set", spec.dim(), n)?;
            let docs: Vec<Value> = vs.iter().map(vector_to_json).collect();
            report.input(
                "set",
                json!({"path": path.display().to_string(), "vectors": docs}),
            );
            vs
        }
        (None, Some(path)) => {
            let f = load_poly(report, path)?;
            check_dim("polynomial", spec.dim(), f.dim())?;
            f.support()
        }
        (None, None) => {
            return Err(CommandError::Usage(
                "one of --set or --poly is required".into(),
            ))
        }
    };
    if let Some(path) = verify_only {
        report.input("psi", json!({"path": path.display().to_string()}));
        let psi = parsed(path, format::parse_psi(&read(path)?))?;
        check_dim("psi", spec.dim(), psi.rows())?;
        let c = verify_map(&spec, &s, &psi);
        report.result = json!({
            "mode": "verify-only",
            "psi": matrix_rows_to_json(&psi),
            "det": int_to_json(&psi.det()),
        });
        certificate_summary(report, &c);
        return Ok(());
    }
    let r = embed(&spec, &s).map_err(|e| CommandError::precondition(e.to_string()))?;
    let c = verify_embedding(&spec, &s, &r);
    let integerized: Vec<Value> = r
        .integerized
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "block": [l.block.start, l.block.end],
                "block_coeffs": l.block_coeffs.iter().map(int_to_json).collect::<Vec<_>>(),
                "functional": l.functional.iter().map(int_to_json).collect::<Vec<_>>(),
                "default_used": l.default_used,
            })
        })
        .collect();
    let certificate: Vec<Value> = r
        .certificate
        .iter()
        .map(|e| {
            json!({
                "x": vector_to_json(&e.x),
                "level": e.level,
                "sign": e.sign.to_i8(),
                "image": vector_to_json(&e.image),
                "image_sign": e.image_sign.to_i8(),
                "last_nonzero": e.last_nonzero,
            })
        })
        .collect();
    report.result = json!({
        "mode": "embed",
        "psi": matrix_rows_to_json(r.psi.matrix()),
        "det": int_to_json(&r.psi.det()),
        "block_ranks": r.block_ranks,
        "chain_basis": matrix_columns_to_json(&r.chain_basis),
        "adapted_basis": matrix_columns_to_json(&r.adapted_basis),
        "integerized": integerized,
        "certificate": certificate,
    });
    report.line(format!("psi (det {}):", r.psi.det()));
    for line in r.psi.matrix().to_string().lines() {
        report.line(format!("  {line}"));
    }
    certificate_summary(report, &c);
    if let Some(path) = psi_out {
        fs::write(path, format::print_psi(r.psi.matrix())).map_err(|e| CommandError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        report.line(format!("psi written to {}", path.display()));
    }
    Ok(())
}

fn decompose(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Decompose { poly } = command else {
        unreachable!()
    };
    let f = load_poly(report, poly)?;
    let blocks = martingale_differences(&f);
    let sum = blocks
        .iter()
        .fold(TrigPoly::zero(f.dim()), |acc, d| acc.add(d));
    let reassembles = sum == f;
    let nonzero = blocks.iter().filter(|d| !d.is_zero()).count();
    report.result = json!({
        "blocks": blocks
            .iter()
            .enumerate()
            .map(|(j, d)| json!({"j": j, "terms": terms_to_json(d)}))
            .collect::<Vec<_>>(),
        "nonzero_blocks": nonzero,
        "reassembles": reassembles,
    });
    for (j, d) in blocks.iter().enumerate() {
        report.line(format!("d_{j}: {} terms", d.len()));
    }
    report.line(format!(
        "sum of differences {} f",
        if reassembles {
            "equals"
        } else {
            "differs from"
        }
    ));
    if !reassembles {
        report.exit = Exit::CheckFailed;
    }
    Ok(())
}

fn quadrature_json(q: &QuadratureResult) -> Value {
    json!({
        "value": q.value,
        "grid_size": q.grid_size,
        "clamped_fraction": q.clamped_fraction,
        "refinement_history": q.refinement_history,
        "refinement_delta": q.refinement_delta(),
    })
}

fn jensen_json(r: &JensenReport) -> Value {
    json!({
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "tolerance": r.tolerance,
        "verdict": r.verdict.as_str(),
        "quadrature": quadrature_json(&r.quadrature),
    })
}

fn step_json(r: &StepReport) -> Value {
    json!({
        "n": r.n,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "tolerance": r.tolerance,
        "verdict": r.verdict.as_str(),
        "lower": quadrature_json(&r.lower),
        "upper": quadrature_json(&r.upper),
    })
}

fn pmean_json(r: &PMeanReport) -> Value {
    json!({
        "p": r.p,
        "grid_size": r.grid_size,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "verdict": r.verdict.as_str(),
    })
}

fn torus_usage(e: TorusError) -> CommandError {
    match e {
        TorusError::GridTooSmall(_)
        | TorusError::GridTooLarge { .. }
        | TorusError::InvalidExponent(_) => CommandError::Usage(e.to_string()),
        other => CommandError::precondition(other.to_string()),
    }
}

fn check(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Check(args) = command else {
        unreachable!()
    };
    let CheckArgs {
        poly,
        order,
        jensen,
        steps,
        pmean,
        grid,
        no_refine,
    } = args;
    let f = load_poly(report, poly)?;
    let all = !jensen && !steps && pmean.is_empty();
    let exponents: Vec<f64> = if all { vec![0.5] } else { pmean.clone() };
    if let Some(p) = exponents.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(CommandError::Usage(format!(
            "--pmean {p} is outside (0, 1)"
        )));
    }
    if grid.is_some_and(|m| m < 2) {
        return Err(CommandError::Usage("--grid must be at least 2".into()));
    }
    let mut opts = QuadratureOptions::for_dim(f.dim());
    if let Some(m) = grid {
        opts.grid = *m;
    }
    opts.refine = !no_refine;
    report.input(
        "flags",
        json!({
            "jensen": *jensen || all,
            "steps": *steps || all,
            "pmean": exponents,
            "grid": opts.grid,
            "refine": opts.refine,
        }),
    );
    if f.is_zero() {
        return Err(CommandError::precondition("polynomial is identically zero"));
    }
    let (g, psi) = match order {
        Some(path) => {
            let spec = load_valid_order(report, path)?;
            check_dim("polynomial", spec.dim(), f.dim())?;
            let bad = f
                .support()
                .into_iter()
                .find(|k| spec.sgn(k) == Ok(Sign::Negative));
            if let Some(k) = bad {
                return Err(CommandError::Precondition {
                    message: format!("polynomial is not analytic for the order: sgn {k} = -1"),
                    details: json!({ "witness": vector_to_json(&k) }),
                });
            }
            debug_assert!(is_analytic(&f, &spec).unwrap_or(false));
            let r = embed(&spec, &f.support())
                .map_err(|e| CommandError::precondition(e.to_string()))?;
            let g = relabel(&f, &r.psi).map_err(torus_usage)?;
            report.line(format!(
                "relabeled through psi = {}",
                one_line(r.psi.matrix())
            ));
            (g, Some(r.psi.matrix().clone()))
        }
        None => {
            if let Some(k) = f
                .support()
                .into_iter()
                .find(|k| lex_sign(k) == Sign::Negative)
            {
                return Err(CommandError::Precondition {
                    message: format!(
                        "polynomial is not Hardy: frequency {k} is lexicographically negative"
                    ),
                    details: json!({ "witness": vector_to_json(&k) }),
                });
            }
            (f.clone(), None)
        }
    };
    debug_assert!(is_hardy(&g));
    report.result = json!({
        "analytic": true,
        "psi": psi.as_ref().map(matrix_rows_to_json),
        "checked_terms": terms_to_json(&g),
    });
    let mut failed = false;
    if *jensen || all {
        let r = jensen_check(&g, &opts).map_err(torus_usage)?;
        report.line(format!(
            "jensen: |f^(0)| = {:.12} <= {:.12}, margin {:.3e} at M = {} ({})",
            r.lhs, r.rhs, r.margin, r.quadrature.grid_size, r.verdict
        ));
        failed |= !r.verdict.passed();
        report.result["jensen"] = jensen_json(&r);
    }
    if *steps || all {
        let mut out = Vec::new();
        for n in 0..g.dim() {
            match step_check(&g, n, &opts) {
                Ok(r) => {
                    report.line(format!(
                        "step n = {n}: {:.12} <= {:.12}, margin {:.3e} ({})",
                        r.lhs, r.rhs, r.margin, r.verdict
                    ));
                    failed |= !r.verdict.passed();
                    out.push(step_json(&r));
                }
                // A vanishing lower partial sum makes the left side 0.
                Err(TorusError::ZeroPolynomial) => {
                    report.line(format!(
                        "step n = {n}: lower partial sum is zero, holds trivially"
                    ));
                    out.push(
                        json!({"n": n, "verdict": "holds", "note": "lower partial sum is zero"}),
                    );
                }
                Err(e) => return Err(torus_usage(e)),
            }
        }
        report.result["steps"] = Value::Array(out);
    }
    if !exponents.is_empty() {
        let mut out = Vec::new();
        for &p in &exponents {
            let r = p_mean_check(&g, p, opts.grid).map_err(torus_usage)?;
            report.line(format!(
                "p-mean p = {p}: {:.12} <= {:.12}, margin {:.3e} at M = {} ({})",
                r.lhs, r.rhs, r.margin, r.grid_size, r.verdict
            ));
            failed |= !r.verdict.passed();
            out.push(pmean_json(&r));
        }
        report.result["pmean"] = Value::Array(out);
    }
    if failed {
        report.exit = Exit::CheckFailed;
    }
    Ok(())
}

fn one_line(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|i| m.row(i).to_string()).collect();
    format!("[{}]", rows.join(", "))
}

#[derive(Default)]
struct Suite {
    instances: usize,
    failures: usize,
    min_margin: Option<f64>,
    max_clamped: f64,
}

impl Suite {
    fn record(&mut self, ok: bool) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn margin(&mut self, m: f64) {
        self.min_margin = Some(self.min_margin.map_or(m, |x| x.min(m)));
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"instances": self.instances, "failures": self.failures});
        if let Some(m) = self.min_margin {
            v["min_margin"] = json!(m);
            v["max_clamped_fraction"] = json!(self.max_clamped);
        }
        v
    }
}

/// Dimension cap for the quadrature suites; grids grow as `Mᴺ`.
const SELFTEST_TORUS_DIM_MAX: usize = 3;

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> IntVector {
    IntVector::new(
        (0..dim)
            .map(|_| rng.gen_range(-bound..=bound).into())
            .collect(),
    )
}

fn order_axioms_hold(spec: &OrderSpec, rng: &mut ChaCha8Rng) -> bool {
    let n = spec.dim();
    (0..20).all(|_| {
        let x = random_vector(rng, n, 10);
        let y = random_vector(rng, n, 10);
        let (Ok(sx), Ok(sy), Ok(snx), Ok(sxy)) = (
            spec.sgn(&x),
            spec.sgn(&y),
            spec.sgn(&x.neg()),
            spec.sgn(&x.add(&y)),
        ) else {
            return false;
        };
        let antisymmetric = snx == -sx;
        let zero_only_at_zero = (sx == Sign::Zero) == x.is_zero();
        let additive = !(sx == Sign::Positive && sy == Sign::Positive) || sxy == Sign::Positive;
        antisymmetric && zero_only_at_zero && additive
    })
}

fn selftest(command: &Command, report: &mut Report) -> Result<(), CommandError> {
    let Command::Selftest { seed, count, n_max } = command else {
        unreachable!()
    };
    let (seed, count, n_max) = (*seed, *count, *n_max);
    report.input(
        "flags",
        json!({"seed": seed, "count": count, "n_max": n_max}),
    );
    if n_max == 0 {
        return Err(CommandError::Usage("--n-max must be at least 1".into()));
    }
    let torus_max = n_max.min(SELFTEST_TORUS_DIM_MAX);
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut axioms = Suite::default();
    let mut embedding = Suite::default();
    let mut decomposition = Suite::default();
    let mut transport = Suite::default();
    let mut jensen = Suite::default();
    let mut steps = Suite::default();
    let mut pmean = Suite::default();
    let mut failures = Vec::new();
    for i in 0..count {
        let s: u64 = master.gen();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let dim = 1 + i % n_max;
        let mut note = |suite: &str, ok: bool| {
            if !ok && failures.len() < 20 {
                failures.push(json!({"suite": suite, "instance": i, "seed": s}));
            }
        };

        let spec = match random_order(dim, s, 5, true) {
            Ok(spec) => spec,
            Err(_) => {
                axioms.record(false);
                note("order-axioms", false);
                continue;
            }
        };
        let ok = order_axioms_hold(&spec, &mut rng);
        axioms.record(ok);
        note("order-axioms", ok);

        let size = rng.gen_range(1..=40);
        let set: Vec<IntVector> = (0..size)
            .map(|_| random_vector(&mut rng, dim, 20))
            .collect();
        let ok = embed(&spec, &set).is_ok_and(|r| verify_embedding(&spec, &set, &r).is_clean());
        embedding.record(ok);
        note("embedding", ok);

        let f = random_hardy(dim, rng.gen_range(1..=12), s);
        let sum = martingale_differences(&f)
            .iter()
            .fold(TrigPoly::zero(dim), |acc, d| acc.add(d));
        let ok = sum == f && is_hardy(&f) == is_hardy_by_differences(&f);
        decomposition.record(ok);
        note("decomposition", ok);

        let mut a = TrigPoly::zero(dim);
        for _ in 0..rng.gen_range(1..=12) {
            let mut k = random_vector(&mut rng, dim, 4);
            if spec.sgn(&k) == Ok(Sign::Negative) {
                k = k.neg();
            }
            a.add_term(
                k,
                Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
            );
        }
        let ok = embed(&spec, &a.support())
            .ok()
            .and_then(|r| relabel(&a, &r.psi).ok())
            .is_some_and(|g| is_hardy(&g));
        transport.record(ok);
        note("analytic-transport", ok);

        let tdim = 1 + i % torus_max;
        let h = random_hardy(tdim, rng.gen_range(1..=12), s ^ 0x7075);
        let opts = QuadratureOptions::for_dim(tdim);
        match jensen_check(&h, &opts) {
            Ok(r) => {
                jensen.margin(r.margin);
                jensen.max_clamped = jensen.max_clamped.max(r.quadrature.clamped_fraction);
                jensen.record(r.verdict.passed());
                note("jensen", r.verdict.passed());
            }
            Err(_) => {
                jensen.record(false);
                note("jensen", false);
            }
        }
        for n in 0..tdim {
            match step_check(&h, n, &opts) {
                Ok(r) => {
                    steps.margin(r.margin);
                    steps.max_clamped = steps
                        .max_clamped
                        .max(r.lower.clamped_fraction)
                        .max(r.upper.clamped_fraction);
                    steps.record(r.verdict.passed());
                    note("steps", r.verdict.passed());
                }
                Err(_) => {
                    steps.record(false);
                    note("steps", false);
                }
            }
        }
        for p in [0.25, 0.5, 0.9] {
            match p_mean_check(&h, p, opts.grid) {
                Ok(r) => {
                    pmean.margin(r.margin);
                    pmean.record(r.verdict.passed());
                    note("pmean", r.verdict.passed());
                }
                Err(_) => {
                    pmean.record(false);
                    note("pmean", false);
                }
            }
        }
    }
    let suites = [
        ("order_axioms", &axioms),
        ("embedding", &embedding),
        ("decomposition", &decomposition),
        ("analytic_transport", &transport),
        ("jensen", &jensen),
        ("steps", &steps),
        ("pmean", &pmean),
    ];
    let total: usize = suites.iter().map(|(_, s)| s.failures).sum();
    let mut by_name = serde_json::Map::new();
    for (name, s) in suites {
        by_name.insert(name.to_string(), s.to_json());
        let margin = s
            .min_margin
            .map(|m| format!(", min margin {m:.3e}"))
            .unwrap_or_default();
        report.line(format!(
            "{name}: {} instances, {} failures{margin}",
            s.instances, s.failures
        ));
    }
    report.result = json!({
        "seed": seed,
        "count": count,
        "n_max": n_max,
        "torus_dim_max": torus_max,
        "suites": by_name,
        "failures": total,
        "failed_instances": failures,
    });
    if total > 0 {
        report.exit = Exit::CheckFailed;
    }
    Ok(())
}

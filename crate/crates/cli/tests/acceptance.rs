//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure. Runs without the test harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordembed_core::lattice::{extend_basis, is_pure};
use ordembed_core::order::random_unimodular;
use ordembed_core::torus::{
    cond_expect, is_analytic, is_hardy, is_hardy_by_differences, is_hardy_by_support, jensen_check,
    log_abs_integral, martingale_differences, mdiff, p_mean_check, random_hardy, relabel,
    step_check, QuadratureOptions, TrigPoly,
};
use ordembed_core::{
    embed, lex_order, random_order, verify_embedding, IntMatrix, IntVector, OrderSpec, Sign,
    Subgroup, UnimodularMap,
};

#[path = "acceptance/cli_contract.rs"]
mod cli_contract;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: usize, detail: String) -> Outcome {
        Outcome {
            passed: failures == 0,
            detail: format!("{failures} failures; {detail}"),
        }
    }
}

type Criterion = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("embedding certificates", criterion_1),
        ("sgn oracle equivalence", criterion_2),
        ("lattice-core oracles", criterion_3),
        ("structural identities", criterion_4),
        ("analyticity transport", criterion_5),
        ("jensen inequality", criterion_6),
        ("step inequality", criterion_7),
        ("p-mean inequality", criterion_8),
        ("quadrature psi-invariance", criterion_9),
        ("cli contracts", cli_contract::run),
    ];
    // Optional criterion numbers on the command line select a subset.
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {:<28} {status}  ({}; {:.2?})",
            i + 1,
            name,
            outcome.detail,
            start.elapsed()
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> IntVector {
    IntVector::new(
        (0..dim)
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

/// All of `[-r, r]^dim` in lexicographic order.
fn box_points(dim: usize, r: i64) -> Vec<IntVector> {
    let side = (2 * r + 1) as usize;
    (0..side.pow(dim as u32))
        .map(|mut idx| {
            let mut v = vec![0i64; dim];
            for slot in v.iter_mut() {
                *slot = (idx % side) as i64 - r;
                idx /= side;
            }
            IntVector::from_i64(&v)
        })
        .collect()
}

// 1. embed on 1000 random orders, N in 2..=6, quadratic coefficients,
//    |S| <= 40, entries <= 20; certificate clean, det = ±1, under 60 s.
fn criterion_1() -> Outcome {
    const LIMIT: Duration = Duration::from_secs(60);
    let start = Instant::now();
    let mut failures = 0;
    let mut quadratic = 0;
    for seed in 0..1000u64 {
        let dim = 2 + (seed % 5) as usize;
        let spec = random_order(dim, seed, 5, true).expect("random order");
        if spec.levels().iter().any(|l| !l.functional.is_rational()) {
            quadratic += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let size = rng.gen_range(1..=40);
        let s: Vec<IntVector> = (0..size)
            .map(|_| random_vector(&mut rng, dim, 20))
            .collect();
        let ok = match embed(&spec, &s) {
            Ok(result) => {
                result.psi.det().abs().is_one() && verify_embedding(&spec, &s, &result).is_clean()
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    let slow = usize::from(elapsed > LIMIT);
    Outcome::new(
        failures + slow,
        format!("1000 instances, {quadratic} with irrational levels, {elapsed:.2?} of 60 s budget"),
    )
}

/// Sign of `x` from the highest level whose functional is nonzero on `x`,
/// evaluated directly in rationals without any subgroup membership test.
fn direct_sign(spec: &OrderSpec, x: &IntVector) -> Sign {
    for level in spec.levels().iter().rev() {
        let value = level
            .functional
            .coeffs()
            .iter()
            .zip(x.entries())
            .fold(BigRational::zero(), |acc, (c, xi)| {
                acc + c.rational_part() * BigRational::from_integer(xi.clone())
            });
        if !value.is_zero() {
            return if value.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
        }
    }
    Sign::Zero
}

// 2. sgn via chain membership against direct level evaluation on [-3,3]^N.
fn criterion_2() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    let mut specs: Vec<OrderSpec> = (1..=3).map(lex_order).collect();
    for seed in 0..60u64 {
        let dim = 1 + (seed % 3) as usize;
        specs.push(random_order(dim, 1000 + seed, 6, false).expect("random order"));
    }
    for spec in &specs {
        for x in box_points(spec.dim(), 3) {
            checked += 1;
            if spec.sgn(&x).ok() != Some(direct_sign(spec, &x)) {
                failures += 1;
            }
        }
    }
    Outcome::new(
        failures,
        format!("{} orders, {checked} vectors", specs.len()),
    )
}

/// Solves `G t = x` over ℚ for independent columns `G`, by Gaussian
/// elimination on fractions. `None` if `x` is outside the span.
fn rational_coords(gens: &[IntVector], x: &IntVector) -> Option<Vec<BigRational>> {
    let n = x.dim();
    let r = gens.len();
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = gens.iter().map(|g| q(&g[i])).collect();
            row.push(q(&x[i]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..r {
        let Some(p) = (pivot_row..n).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != pivot_row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[pivot_row].clone();
                for (v, p) in rows[i].iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    assert_eq!(pivots.len(), r, "generators must be independent");
    if rows[r..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    Some(rows[..r].iter().map(|row| row[r].clone()).collect())
}

fn oracle_member(gens: &[IntVector], x: &IntVector) -> bool {
    rational_coords(gens, x).is_some_and(|t| t.iter().all(|c| c.is_integer()))
}

/// Impure iff some box point lies in the rational span but not in the
/// subgroup. Every class of the span modulo the subgroup has a
/// representative `Σ t_i g_i` with `t_i ∈ [0,1)`, which lies in the box
/// `Σ |g_i|`, so the search is complete.
fn oracle_pure(gens: &[IntVector]) -> bool {
    let n = gens[0].dim();
    let radius: i64 = gens
        .iter()
        .map(|g| g.to_i64().unwrap().iter().map(|v| v.abs()).max().unwrap())
        .sum();
    box_points(n, radius)
        .iter()
        .all(|x| match rational_coords(gens, x) {
            Some(t) => t.iter().all(|c| c.is_integer()),
            None => true,
        })
}

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

// 3. is_pure, member and extend_basis against box-search oracles on 200
//    random subgroups of Z^2 and Z^3.
fn criterion_3() -> Outcome {
    let mut failures = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut impure = 0;
    let mut subgroups = 0;
    while subgroups < 200 {
        let n = 2 + subgroups % 2;
        let r = rng.gen_range(1..=n);
        let gens: Vec<IntVector> = (0..r).map(|_| random_vector(&mut rng, n, 3)).collect();
        let independent =
            IntMatrix::from_columns(n, &gens).rank() == r && gens.iter().all(|g| !g.is_zero());
        if !independent {
            continue;
        }
        subgroups += 1;
        let h = Subgroup::from_vectors(n, &gens);
        for x in box_points(n, 3) {
            let expected = oracle_member(&gens, &x);
            let coords = h.member(&x);
            let reconstructs = coords.as_ref().map_or(true, |c| {
                let combo = (0..h.rank()).fold(IntVector::zeros(n), |acc, i| {
                    acc.add(&h.basis().column(i).scale(&c[i]))
                });
                combo == x
            });
            if coords.is_some() != expected || h.contains(&x) != expected || !reconstructs {
                failures += 1;
            }
        }
        let pure = oracle_pure(&gens);
        if !pure {
            impure += 1;
        }
        if is_pure(&h) != pure {
            failures += 1;
        }
        match extend_basis(&h, &Subgroup::full(n)) {
            Ok(b) if pure => {
                let rows: Vec<Vec<BigInt>> = (0..n).map(|i| b.row(i).into_entries()).collect();
                let prefix = b.columns()[..r].to_vec();
                let spans = prefix.iter().all(|c| oracle_member(&gens, c))
                    && gens.iter().all(|g| oracle_member(&prefix, g));
                if !cofactor_det(&rows).abs().is_one() || !spans {
                    failures += 1;
                }
            }
            Err(_) if !pure => {}
            _ => failures += 1,
        }
    }
    Outcome::new(failures, format!("200 subgroups, {impure} impure"))
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, size: usize) -> TrigPoly {
    let mut f = TrigPoly::zero(dim);
    for _ in 0..size {
        let k = random_vector(rng, dim, 3);
        let c = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        f.add_term(k, c);
    }
    f
}

// 4. Σ_j d_j(f) = f, projection composition, and agreement of the two
//    Hardy characterizations (and analyticity for the lex order).
fn criterion_4() -> Outcome {
    let mut failures = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hardy = 0;
    for i in 0..500u64 {
        let dim = 1 + (i % 4) as usize;
        let size = rng.gen_range(0..=12);
        let f = if i % 2 == 0 {
            random_hardy(dim, size, i)
        } else {
            random_poly(&mut rng, dim, size)
        };
        let sum = martingale_differences(&f)
            .iter()
            .fold(TrigPoly::zero(dim), |acc, d| acc.add(d));
        if sum != f {
            failures += 1;
        }
        for m in 0..=dim {
            for n in 0..=dim {
                let lhs = cond_expect(&cond_expect(&f, m).unwrap(), n).unwrap();
                if lhs != cond_expect(&f, m.min(n)).unwrap() {
                    failures += 1;
                }
            }
            if mdiff(&f, m)
                .unwrap()
                .terms()
                .any(|(k, _)| k.last_nonzero() != m)
            {
                failures += 1;
            }
        }
        let by_support = is_hardy_by_support(&f);
        if by_support {
            hardy += 1;
        }
        if by_support != is_hardy_by_differences(&f)
            || is_analytic(&f, &lex_order(dim)).unwrap() != by_support
            || (i % 2 == 0 && !by_support)
        {
            failures += 1;
        }
    }
    Outcome::new(failures, format!("500 polynomials, {hardy} Hardy"))
}

/// Polynomial analytic for `spec`: random frequencies, each replaced by
/// its negative when `sgn_P` is negative.
fn random_analytic(rng: &mut ChaCha8Rng, spec: &OrderSpec, size: usize) -> TrigPoly {
    let mut f = TrigPoly::zero(spec.dim());
    for _ in 0..size {
        let mut k = random_vector(rng, spec.dim(), 4);
        if spec.sgn(&k).unwrap() == Sign::Negative {
            k = k.neg();
        }
        f.add_term(
            k,
            Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
        );
    }
    f
}

// 5. is_hardy(relabel(f, embed(spec, supp f).psi)) for analytic f.
fn criterion_5() -> Outcome {
    let mut failures = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..300u64 {
        let dim = 2 + (seed % 4) as usize;
        let spec = random_order(dim, 5000 + seed, 5, true).expect("random order");
        let size = rng.gen_range(1..=15);
        let f = random_analytic(&mut rng, &spec, size);
        let ok = is_analytic(&f, &spec).unwrap()
            && embed(&spec, &f.support())
                .ok()
                .and_then(|r| relabel(&f, &r.psi).ok())
                .is_some_and(|g| is_hardy(&g) && g.len() == f.len() && g.mean() == f.mean());
        if !ok {
            failures += 1;
        }
    }
    Outcome::new(failures, "300 order/polynomial pairs".into())
}

/// The shared corpus for criteria 6 to 8: Hardy, N ≤ 3, support ≤ 12.
fn hardy_corpus() -> Vec<TrigPoly> {
    (0..200u64)
        .map(|i| {
            let dim = 1 + (i % 3) as usize;
            let size = 1 + (i as usize * 7) % 12;
            random_hardy(dim, size, 600 + i)
        })
        .collect()
}

// 6. Jensen margins on the corpus, the constant equality case, and the
//    outer case 1 + 0.5e^{iθ} at M = 4096.
fn criterion_6() -> Outcome {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for f in hardy_corpus() {
        let r = jensen_check(&f, &QuadratureOptions::for_dim(f.dim())).unwrap();
        worst = worst.min(r.margin);
        if r.margin < -1e-3 {
            failures += 1;
        }
    }
    let constant = TrigPoly::constant(2, Complex64::new(-3.0, 4.0));
    let c = jensen_check(&constant, &QuadratureOptions::for_dim(2)).unwrap();
    if c.margin.abs() > 1e-12 {
        failures += 1;
    }
    let outer = TrigPoly::from_terms(
        1,
        [
            (IntVector::from_i64(&[0]), Complex64::new(1.0, 0.0)),
            (IntVector::from_i64(&[1]), Complex64::new(0.5, 0.0)),
        ],
    )
    .unwrap();
    let o = jensen_check(&outer, &QuadratureOptions::fixed(4096)).unwrap();
    if (o.rhs - o.lhs).abs() > 1e-3 || o.lhs != 1.0 {
        failures += 1;
    }
    Outcome::new(
        failures,
        format!(
            "200 polynomials, min margin {worst:.3e}; constant margin {:.1e}; outer rhs {:.12}",
            c.margin, o.rhs
        ),
    )
}

// 7. Step margins for every n < N on the corpus.
fn criterion_7() -> Outcome {
    let mut failures = 0;
    let mut checks = 0;
    let mut worst = f64::INFINITY;
    for f in hardy_corpus() {
        let opts = QuadratureOptions::for_dim(f.dim());
        for n in 0..f.dim() {
            checks += 1;
            match step_check(&f, n, &opts) {
                Ok(r) => {
                    worst = worst.min(r.margin);
                    if r.margin < -1e-3 {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    Outcome::new(failures, format!("{checks} steps, min margin {worst:.3e}"))
}

// 8. p-mean margins for p in {0.25, 0.5, 0.9} on the corpus.
fn criterion_8() -> Outcome {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for f in hardy_corpus() {
        let m = QuadratureOptions::for_dim(f.dim()).grid;
        for p in [0.25, 0.5, 0.9] {
            let r = p_mean_check(&f, p, m).unwrap();
            worst = worst.min(r.margin);
            if r.margin < -1e-6 {
                failures += 1;
            }
        }
    }
    Outcome::new(failures, format!("600 checks, min margin {worst:.3e}"))
}

// 9. log_abs_integral is unchanged by relabeling at equal M.
fn criterion_9() -> Outcome {
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100u64 {
        let dim = 1 + (i % 3) as usize;
        let f = random_hardy(dim, 1 + (i as usize) % 12, 900 + i);
        let psi = UnimodularMap::new(random_unimodular(dim, &mut rng)).unwrap();
        let g = relabel(&f, &psi).unwrap();
        let opts = QuadratureOptions::fixed([128, 64, 32][dim - 1]);
        let a = log_abs_integral(&f, &opts).unwrap().value;
        let b = log_abs_integral(&g, &opts).unwrap().value;
        worst = worst.max((a - b).abs());
        if (a - b).abs() > 1e-9 {
            failures += 1;
        }
    }
    Outcome::new(failures, format!("100 pairs, max difference {worst:.1e}"))
}

//! Fixed workloads for the criterion benches.

use num_complex::Complex64;
use ordembed_core::torus::random_hardy;
use ordembed_core::{random_order, IntMatrix, IntVector, OrderSpec, TrigPoly};

/// Dense `n × n` matrix with entries in `[-9, 9]` from a small LCG.
pub fn dense_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % 19) as i64 - 9
    };
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntMatrix::from_rows_i64(&refs)
}

/// A random order on ℤᴺ with quadratic levels and a box of frequencies.
pub fn embed_workload(dim: usize, seed: u64) -> (OrderSpec, Vec<IntVector>) {
    let spec = random_order(dim, seed, 5, true).expect("random order");
    let m = dense_matrix(dim, seed);
    let s = (0..dim)
        .flat_map(|i| {
            let row = m.row(i);
            [row.clone(), row.neg(), row.scale(&3.into())]
        })
        .collect();
    (spec, s)
}

/// Hardy polynomial with `terms` terms on 𝕋ᴺ.
pub fn hardy(dim: usize, terms: usize) -> TrigPoly {
    random_hardy(dim, terms, 17)
}

/// `1 + e^{iθ₁}`, which has a zero on the grid.
pub fn outer_with_zero() -> TrigPoly {
    TrigPoly::from_terms(
        1,
        [
            (IntVector::from_i64(&[0]), Complex64::new(1.0, 0.0)),
            (IntVector::from_i64(&[1]), Complex64::new(1.0, 0.0)),
        ],
    )
    .expect("distinct frequencies")
}

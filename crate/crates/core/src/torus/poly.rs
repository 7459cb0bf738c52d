//! Trigonometric polynomials on 𝕋ᴺ and their exact structural operations:
//! conditional expectations, martingale differences, analyticity and
//! relabeling. None of these touch coefficient values, so they are exact.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TorusError;
use crate::embedding::{lex_sign, UnimodularMap};
use crate::lattice::{IntVector, Sign};
use crate::order::OrderSpec;

/// `f = Σ a_χ e^{i⟨χ, θ⟩}` with finitely many nonzero coefficients, stored by
/// frequency in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<IntVector, Complex64>,
}

impl TrigPoly {
    /// The zero polynomial.
    pub fn zero(dim: usize) -> TrigPoly {
        TrigPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> TrigPoly {
        let mut f = TrigPoly::zero(dim);
        f.add_term(IntVector::zeros(dim), c);
        f
    }

    /// Builds a polynomial from distinct frequencies; zero coefficients are
    /// dropped.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (IntVector, Complex64)>,
    ) -> Result<TrigPoly, TorusError> {
        let mut map = BTreeMap::new();
        for (freq, c) in terms {
            if freq.dim() != dim {
                return Err(TorusError::DimensionMismatch {
                    expected: dim,
                    found: freq.dim(),
                });
            }
            match map.entry(freq) {
                Entry::Occupied(e) => return Err(TorusError::DuplicateFrequency(e.key().clone())),
                Entry::Vacant(e) => {
                    e.insert(c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TrigPoly { dim, terms: map })
    }

    /// Adds `c·e^{i⟨freq, θ⟩}`, merging with an existing term.
    pub fn add_term(&mut self, freq: IntVector, c: Complex64) {
        assert_eq!(freq.dim(), self.dim, "dimension mismatch");
        let slot = self.terms.entry(freq).or_insert(Complex64::zero());
        *slot += c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nonzero terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<IntVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, freq: &IntVector) -> Complex64 {
        self.terms
            .get(freq)
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    /// `f̂(0) = ∫ f`.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(&IntVector::zeros(self.dim))
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (freq, c) in other.terms() {
            out.add_term(freq.clone(), *c);
        }
        out
    }

    fn filter(&self, keep: impl Fn(&IntVector) -> bool) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    /// Value at `θ`, by direct summation.
    pub fn eval(&self, theta: &[f64]) -> Complex64 {
        assert_eq!(theta.len(), self.dim, "dimension mismatch");
        self.terms
            .iter()
            .map(|(freq, c)| {
                let phase: f64 = freq
                    .entries()
                    .iter()
                    .zip(theta)
                    .map(|(k, t)| num_traits::ToPrimitive::to_f64(k).unwrap_or(f64::NAN) * t)
                    .sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }
}

/// `E(f | F_n)`: keeps the terms whose frequency components `n+1..N` vanish.
pub fn cond_expect(f: &TrigPoly, n: usize) -> Result<TrigPoly, TorusError> {
    check_index(f, n)?;
    Ok(f.filter(|k| k.last_nonzero() <= n))
}

/// `d_j(f)`: the terms whose last nonzero frequency component is the `j`-th;
/// `d_0(f)` is the constant term.
pub fn mdiff(f: &TrigPoly, j: usize) -> Result<TrigPoly, TorusError> {
    check_index(f, j)?;
    Ok(f.filter(|k| k.last_nonzero() == j))
}

/// `d_0(f), d_1(f), …, d_N(f)`; their sum is `f`.
pub fn martingale_differences(f: &TrigPoly) -> Vec<TrigPoly> {
    (0..=f.dim)
        .map(|j| mdiff(f, j).expect("index in range"))
        .collect()
}

fn check_index(f: &TrigPoly, n: usize) -> Result<(), TorusError> {
    if n > f.dim {
        return Err(TorusError::IndexOutOfRange {
            index: n,
            dim: f.dim,
        });
    }
    Ok(())
}

/// Every frequency lies in the lexicographic positive cone `P*`.
pub fn is_hardy_by_support(f: &TrigPoly) -> bool {
    f.terms.keys().all(|k| lex_sign(k) != Sign::Negative)
}

/// Every martingale difference `d_j(f)`, `j ≥ 1`, has only positive `j`-th
/// frequency components, i.e. is analytic in `θ_j`.
pub fn is_hardy_by_differences(f: &TrigPoly) -> bool {
    (1..=f.dim).all(|j| {
        mdiff(f, j)
            .expect("index in range")
            .terms
            .keys()
            .all(|k| k[j - 1] > BigInt::zero())
    })
}

/// `(E(f | F_n))_n` is a Hardy martingale. Both characterizations are
/// evaluated and must agree.
pub fn is_hardy(f: &TrigPoly) -> bool {
    let by_support = is_hardy_by_support(f);
    debug_assert_eq!(by_support, is_hardy_by_differences(f));
    by_support
}

/// `f̂` vanishes off `P`.
pub fn is_analytic(f: &TrigPoly, spec: &OrderSpec) -> Result<bool, TorusError> {
    if spec.dim() != f.dim {
        return Err(TorusError::DimensionMismatch {
            expected: f.dim,
            found: spec.dim(),
        });
    }
    for k in f.terms.keys() {
        if spec.sgn(k)? == Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f ∘ φ` where `φ` is the torus automorphism dual to `ψ`: the coefficient
/// of `χ` moves to `ψχ`.
pub fn relabel(f: &TrigPoly, psi: &UnimodularMap) -> Result<TrigPoly, TorusError> {
    if psi.dim() != f.dim {
        return Err(TorusError::DimensionMismatch {
            expected: f.dim,
            found: psi.dim(),
        });
    }
    Ok(TrigPoly {
        dim: f.dim,
        terms: f.terms.iter().map(|(k, c)| (psi.apply(k), *c)).collect(),
    })
}

/// Frequency box radius used by [`random_hardy`].
pub const RANDOM_FREQUENCY_RADIUS: i64 = 3;

/// Random polynomial with frequencies in `P* ∩ [-3, 3]ᴺ`, coefficients with
/// real and imaginary parts in `[-1, 1]` and a nonzero constant term.
///
/// The support has `support_size` terms (the constant included), capped by
/// the number of available frequencies.
pub fn random_hardy(dim: usize, support_size: usize, seed: u64) -> TrigPoly {
    assert!(dim >= 1, "dimension must be at least 1");
    let r = RANDOM_FREQUENCY_RADIUS;
    let available = ((2 * r + 1).pow(dim as u32) - 1) / 2 + 1;
    let target = support_size.max(1).min(available as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeff =
        |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    let mut f = TrigPoly::zero(dim);
    let c0 = loop {
        let c = coeff(&mut rng);
        if c.norm() > 0.05 {
            break c;
        }
    };
    f.add_term(IntVector::zeros(dim), c0);
    while f.len() < target {
        let freq: Vec<i64> = (0..dim).map(|_| rng.gen_range(-r..=r)).collect();
        let freq = IntVector::from_i64(&freq);
        if lex_sign(&freq) != Sign::Positive || f.terms.contains_key(&freq) {
            continue;
        }
        let c = coeff(&mut rng);
        if !c.is_zero() {
            f.terms.insert(freq, c);
        }
    }
    f
}

//! Unimodular relabelings of ℤᴺ that carry an arbitrary order into the
//! lexicographic one on a prescribed finite set.
//!
//! Given a valid [`OrderSpec`] and a finite `S ⊂ ℤᴺ`, [`embed`] produces `ψ`
//! with `det ψ = ±1` such that for every `x ∈ S`
//!
//! * `sgn_P(x)` equals the sign of the last nonzero coordinate of `ψx`, and
//! * if `x ∈ S_j = S ∩ (C_j \ C_{j-1})`, that last nonzero coordinate sits
//!   at position `r(C_j)`.
//!
//! The pipeline: split `S` into the blocks `S_j`; build a basis `B₁` of ℤᴺ
//! adapted to the chain; replace each `L_j` on its block of `B₁`
//! coordinates by an integer functional `L*_j` with the same signs on
//! `S_j`; split `C_j = D_j ⊕ ⟨h_j⟩` with `D_j = ker L*_j ∩ C_j`; assemble
//! the basis `B = (…, basis of D_j extending C_{j-1}, h_j, …)` and return
//! `ψ = B⁻¹`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    extend_columns, kernel_split, IntMatrix, IntVector, LatticeError, Scalar, ScalarFunctional,
    Sign, SqrtConvergents,
};
use crate::order::{OrderError, OrderSpec, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("order is invalid: {}", format_issues(.0))]
    InvalidSpec(ValidationReport),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("no elements to integerize against")]
    EmptyBlock,
    #[error("functional vanishes on an element of its block")]
    VanishesOnBlock,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn format_issues(r: &ValidationReport) -> String {
    r.issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A square integer matrix with determinant ±1, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    matrix: IntMatrix,
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix) -> Result<UnimodularMap, EmbedError> {
        if matrix.rows() != matrix.cols() {
            return Err(EmbedError::NotUnimodular(BigInt::zero()));
        }
        let det = matrix.det();
        if !det.abs().is_one() {
            return Err(EmbedError::NotUnimodular(det));
        }
        Ok(UnimodularMap { matrix })
    }

    pub fn identity(dim: usize) -> UnimodularMap {
        UnimodularMap {
            matrix: IntMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &IntVector) -> IntVector {
        self.matrix.mul_vec(x)
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det()
    }

    pub fn inverse(&self) -> UnimodularMap {
        UnimodularMap {
            matrix: self
                .matrix
                .inverse_unimodular()
                .expect("unimodular by construction"),
        }
    }
}

/// Sign of the last nonzero coordinate; zero only for the zero vector.
pub fn lex_sign(v: &IntVector) -> Sign {
    match v.last_nonzero() {
        0 => Sign::Zero,
        i => Sign::of_int(&v[i - 1]),
    }
}

/// The integer functional that replaced `L_j` on one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerizedLevel {
    /// 1-based level index `j`.
    pub level: usize,
    /// 0-based positions `r(C_{j-1})..r(C_j)` of the block in `B₁`.
    pub block: Range<usize>,
    /// Integer coefficients on the block coordinates.
    pub block_coeffs: Vec<BigInt>,
    /// The same functional in standard coordinates of ℤᴺ.
    pub functional: Vec<BigInt>,
    /// `S_j` was empty and the default functional was used.
    pub default_used: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub x: IntVector,
    /// 1-based level of `x`, `None` for `x = 0`.
    pub level: Option<usize>,
    pub sign: Sign,
    pub image: IntVector,
    pub image_sign: Sign,
    /// 1-based index of the last nonzero coordinate of the image (0 for 0).
    pub last_nonzero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingResult {
    pub psi: UnimodularMap,
    /// `B₁`: columns `1..r(C_j)` form a basis of `C_j`.
    pub chain_basis: IntMatrix,
    /// `B = ψ⁻¹`: columns `1..r(C_j)` form a basis of `C_j`, column `r(C_j)`
    /// is `h_j`.
    pub adapted_basis: IntMatrix,
    pub integerized: Vec<IntegerizedLevel>,
    pub block_ranks: Vec<usize>,
    pub certificate: Vec<CertificateEntry>,
}

/// Integer block coefficients with the same sign as `L = Σ beta_l·c_l` at
/// every coordinate vector in `coords`.
///
/// Rational coefficients are scaled by their common denominator. Otherwise
/// `√d` is replaced by the first continued-fraction convergent `p/q` with
/// `|p/q − √d| < δ / (2B + 1)`, where `δ = min |L(c)|` and
/// `B = max Σ_l |b_l·c_l|` over the `√d` parts `b_l`; the perturbation is
/// then below `δ/2` everywhere, so no sign changes.
pub fn integerize(beta: &[Scalar], coords: &[Vec<BigInt>]) -> Result<Vec<BigInt>, EmbedError> {
    if coords.is_empty() {
        return Err(EmbedError::EmptyBlock);
    }
    let functional = ScalarFunctional::new(beta.to_vec())?;
    let values: Vec<Scalar> = coords
        .iter()
        .map(|c| functional.eval(&IntVector::new(c.clone())))
        .collect();
    if values.iter().any(Scalar::is_zero) {
        return Err(EmbedError::VanishesOnBlock);
    }
    let rational: Vec<BigRational> = if functional.is_rational() {
        functional.rational_parts()
    } else {
        let d = functional.radicand();
        let a = functional.rational_parts();
        let b = functional.irrational_parts();
        let delta = values.iter().map(Scalar::abs).min().expect("nonempty");
        let bound = coords
            .iter()
            .map(|c| {
                b.iter()
                    .zip(c)
                    .map(|(bl, cl)| (bl * BigRational::from_integer(cl.clone())).abs())
                    .sum::<BigRational>()
            })
            .max()
            .expect("nonempty");
        let two_b_plus_one = bound * BigRational::from_integer(2.into()) + BigRational::one();
        let threshold = delta.scale(&two_b_plus_one.recip());
        let (p, q) = SqrtConvergents::new(d)
            .find(|(p, q)| {
                let approx = BigRational::new(p.clone(), q.clone());
                let err = Scalar::new(approx, -BigRational::one(), d)
                    .expect("radicand already validated")
                    .abs();
                (&threshold - &err).sign() == Sign::Positive
            })
            .expect("convergents of an irrational square root approach it arbitrarily closely");
        let root = BigRational::new(p, q);
        a.iter().zip(&b).map(|(al, bl)| al + bl * &root).collect()
    };
    let lcm = rational
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = BigRational::from_integer(lcm);
    let alpha: Vec<BigInt> = rational.iter().map(|r| (r * &scale).to_integer()).collect();
    debug_assert!(coords.iter().zip(&values).all(|(c, v)| {
        let s: BigInt = alpha.iter().zip(c).map(|(x, y)| x * y).sum();
        Sign::of_int(&s) == v.sign()
    }));
    Ok(alpha)
}

/// Builds `ψ` for `spec` and the finite set `s` (duplicates ignored).
pub fn embed<'a>(
    spec: &OrderSpec,
    s: impl IntoIterator<Item = &'a IntVector>,
) -> Result<EmbeddingResult, EmbedError> {
    let report = spec.validate();
    if !report.is_valid() {
        return Err(EmbedError::InvalidSpec(report));
    }
    let n = spec.dim();
    let set: BTreeSet<IntVector> = s.into_iter().cloned().collect();
    if let Some(x) = set.iter().find(|x| x.dim() != n) {
        return Err(OrderError::DimensionMismatch {
            expected: n,
            found: x.dim(),
        }
        .into());
    }
    let blocks = spec.partition(&set)?;
    let ranks = spec.block_ranks();

    // Chain-adapted basis B₁.
    let mut chain_basis = IntMatrix::zeros(n, 0);
    for level in spec.levels() {
        chain_basis = extend_columns(&chain_basis, &level.subgroup)?;
    }
    let chain_inv = chain_basis
        .inverse_unimodular()
        .expect("adapted basis of the full lattice");

    // Integer replacement functionals and the splits C_j = D_j ⊕ ⟨h_j⟩.
    let mut integerized = Vec::with_capacity(ranks.len());
    let mut adapted = IntMatrix::zeros(n, 0);
    let mut prev_rank = 0;
    for (idx, (level, block_set)) in spec.levels().iter().zip(&blocks).enumerate() {
        let block = prev_rank..ranks[idx];
        let default_used = block_set.is_empty();
        let block_coeffs = if default_used {
            let mut alpha = vec![BigInt::zero(); block.len()];
            *alpha.last_mut().expect("ranks strictly increase") = BigInt::one();
            alpha
        } else {
            let beta: Vec<Scalar> = block
                .clone()
                .map(|l| level.functional.eval(&chain_basis.column(l)))
                .collect();
            let coords: Vec<Vec<BigInt>> = block_set
                .iter()
                .map(|x| {
                    let c = chain_inv.mul_vec(x);
                    block.clone().map(|l| c[l].clone()).collect()
                })
                .collect();
            integerize(&beta, &coords)?
        };
        let functional: Vec<BigInt> = (0..n)
            .map(|col| {
                block
                    .clone()
                    .zip(&block_coeffs)
                    .map(|(l, a)| a * &chain_inv[(l, col)])
                    .sum()
            })
            .collect();
        let (kernel, gen) = kernel_split(
            &level.subgroup,
            &ScalarFunctional::from_integers(&functional),
        )?;
        adapted = extend_columns(&adapted, &kernel)?;
        adapted = adapted.hconcat(&IntMatrix::from_columns(n, &[gen]));
        integerized.push(IntegerizedLevel {
            level: idx + 1,
            block,
            block_coeffs,
            functional,
            default_used,
        });
        prev_rank = ranks[idx];
    }

    let psi = UnimodularMap::new(
        adapted
            .inverse_unimodular()
            .expect("assembled from unimodular splits"),
    )?;
    let certificate = set
        .iter()
        .map(|x| {
            let (sign, level) = spec.sgn_with_level(x)?;
            let image = psi.apply(x);
            Ok(CertificateEntry {
                x: x.clone(),
                level,
                sign,
                image_sign: lex_sign(&image),
                last_nonzero: image.last_nonzero(),
                image,
            })
        })
        .collect::<Result<Vec<_>, EmbedError>>()?;
    Ok(EmbeddingResult {
        psi,
        chain_basis,
        adapted_basis: adapted,
        integerized,
        block_ranks: ranks,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `|det ψ| ≠ 1` or `ψ` is not `N × N`.
    NotUnimodular,
    SignMismatch {
        expected: Sign,
        found: Sign,
    },
    BlockMismatch {
        expected: usize,
        found: usize,
    },
    /// The order could not evaluate `sgn_P(x)`.
    Order(String),
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::NotUnimodular => write!(f, "map is not unimodular"),
            ViolationKind::SignMismatch { expected, found } => {
                write!(
                    f,
                    "sign mismatch: order gives {expected}, image has {found}"
                )
            }
            ViolationKind::BlockMismatch { expected, found } => write!(
                f,
                "block mismatch: last nonzero coordinate at {found}, expected {expected}"
            ),
            ViolationKind::Order(e) => write!(f, "order error: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: Option<IntVector>,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CertificateReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Rechecks the embedding postconditions for an arbitrary matrix `psi`,
/// using only `sgn_P` and integer arithmetic.
pub fn verify_map<'a>(
    spec: &OrderSpec,
    s: impl IntoIterator<Item = &'a IntVector>,
    psi: &IntMatrix,
) -> CertificateReport {
    let mut report = CertificateReport::default();
    let n = spec.dim();
    if psi.rows() != n || psi.cols() != n || !psi.det().abs().is_one() {
        report.violations.push(Violation {
            x: None,
            kind: ViolationKind::NotUnimodular,
        });
        if psi.rows() != n || psi.cols() != n {
            return report;
        }
    }
    let ranks = spec.block_ranks();
    let set: BTreeSet<&IntVector> = s.into_iter().collect();
    for x in set {
        report.checked += 1;
        let (sign, level) = match spec.sgn_with_level(x) {
            Ok(r) => r,
            Err(e) => {
                report.violations.push(Violation {
                    x: Some(x.clone()),
                    kind: ViolationKind::Order(e.to_string()),
                });
                continue;
            }
        };
        let image = psi.mul_vec(x);
        let found = lex_sign(&image);
        if found != sign {
            report.violations.push(Violation {
                x: Some(x.clone()),
                kind: ViolationKind::SignMismatch {
                    expected: sign,
                    found,
                },
            });
        }
        let expected = level.map_or(0, |j| ranks[j - 1]);
        let found = image.last_nonzero();
        if found != expected {
            report.violations.push(Violation {
                x: Some(x.clone()),
                kind: ViolationKind::BlockMismatch { expected, found },
            });
        }
    }
    report
}

/// [`verify_map`] applied to the map of an [`EmbeddingResult`].
pub fn verify_embedding<'a>(
    spec: &OrderSpec,
    s: impl IntoIterator<Item = &'a IntVector>,
    result: &EmbeddingResult,
) -> CertificateReport {
    verify_map(spec, s, result.psi.matrix())
}

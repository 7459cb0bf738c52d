//! Orders on ℤᴺ given by a chain of pure subgroups
//! `{0} = C_0 ⊂ C_1 ⊂ … ⊂ C_k = ℤᴺ` and real functionals `L_j`, with
//! `sgn_P(x) = sgn L_j(x)` for `x ∈ C_j \ C_{j-1}`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::{
    functional_kernel, impurity_witness, is_pure, IntMatrix, IntVector, LatticeError, Scalar,
    ScalarFunctional, Sign, Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("invalid order: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no valid order generated after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// One step of the chain: the subgroup `C_j` and the functional `L_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub subgroup: Subgroup,
    pub functional: ScalarFunctional,
}

/// An order on ℤᴺ presented by its chain data. Construction only checks
/// dimensions; use [`OrderSpec::validate`] for the order conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    dim: usize,
    levels: Vec<Level>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IssueKind {
    /// The chain has no levels.
    Empty,
    /// `C_{j-1} ⊄ C_j` or the rank does not grow.
    NotIncreasing,
    /// `C_j` is not pure in ℤᴺ.
    NotPure,
    /// `L_j` does not vanish on `C_{j-1}`.
    NotVanishingOnPrevious,
    /// `{x ∈ C_j : L_j(x) = 0}` is strictly larger than `C_{j-1}`.
    SeparationFails,
    /// `C_k ≠ ℤᴺ`.
    LastNotFull,
}

impl IssueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueKind::Empty => "empty-chain",
            IssueKind::NotIncreasing => "not-increasing",
            IssueKind::NotPure => "not-pure",
            IssueKind::NotVanishingOnPrevious => "not-vanishing-on-previous",
            IssueKind::SeparationFails => "separation-fails",
            IssueKind::LastNotFull => "last-not-full",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationIssue {
    /// 1-based level index, when the issue belongs to one level.
    pub level: Option<usize>,
    pub kind: IssueKind,
    pub witness: Option<IntVector>,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(j) => write!(f, "level {j}: {}", self.kind.as_str())?,
            None => write!(f, "{}", self.kind.as_str())?,
        }
        if let Some(w) = &self.witness {
            write!(f, " (witness {w})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl OrderSpec {
    pub fn new(dim: usize, levels: Vec<Level>) -> Result<OrderSpec, OrderError> {
        for level in &levels {
            for found in [level.subgroup.ambient_dim(), level.functional.dim()] {
                if found != dim {
                    return Err(OrderError::DimensionMismatch {
                        expected: dim,
                        found,
                    });
                }
            }
        }
        Ok(OrderSpec { dim, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// `C_j` for `j = 0..=k`; `C_0 = {0}`.
    pub fn chain_subgroup(&self, j: usize) -> Subgroup {
        if j == 0 {
            Subgroup::trivial(self.dim)
        } else {
            self.levels[j - 1].subgroup.clone()
        }
    }

    /// Ranks `r(C_1), …, r(C_k)`.
    pub fn block_ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.subgroup.rank()).collect()
    }

    /// Checks every chain condition exactly and reports each failure.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        if self.levels.is_empty() {
            issues.push(ValidationIssue {
                level: None,
                kind: IssueKind::Empty,
                witness: None,
            });
            return ValidationReport { issues };
        }
        let mut prev = Subgroup::trivial(self.dim);
        for (idx, level) in self.levels.iter().enumerate() {
            let j = Some(idx + 1);
            let c = &level.subgroup;
            let l = &level.functional;
            let outside = prev.basis().columns().into_iter().find(|b| !c.contains(b));
            if outside.is_some() || c.rank() <= prev.rank() {
                issues.push(ValidationIssue {
                    level: j,
                    kind: IssueKind::NotIncreasing,
                    witness: outside,
                });
            }
            if !is_pure(c) {
                issues.push(ValidationIssue {
                    level: j,
                    kind: IssueKind::NotPure,
                    witness: impurity_witness(c),
                });
            }
            if let Some(b) = prev
                .basis()
                .columns()
                .into_iter()
                .find(|b| !l.eval(b).is_zero())
            {
                issues.push(ValidationIssue {
                    level: j,
                    kind: IssueKind::NotVanishingOnPrevious,
                    witness: Some(b),
                });
            }
            let kernel = functional_kernel(c, l).expect("dimensions checked at construction");
            if let Some(w) = kernel
                .basis()
                .columns()
                .into_iter()
                .find(|b| !prev.contains(b))
            {
                issues.push(ValidationIssue {
                    level: j,
                    kind: IssueKind::SeparationFails,
                    witness: Some(w),
                });
            }
            prev = c.clone();
        }
        if !prev.is_full() {
            let w = (0..self.dim)
                .map(|i| IntVector::unit(self.dim, i))
                .find(|e| !prev.contains(e));
            issues.push(ValidationIssue {
                level: Some(self.levels.len()),
                kind: IssueKind::LastNotFull,
                witness: w,
            });
        }
        ValidationReport { issues }
    }

    /// Smallest `j ≥ 1` with `x ∈ C_j`; `None` for `x = 0`.
    pub fn level_of(&self, x: &IntVector) -> Result<Option<usize>, OrderError> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Ok(None);
        }
        self.levels
            .iter()
            .position(|l| l.subgroup.contains(x))
            .map(|j| Some(j + 1))
            .ok_or_else(|| OrderError::InvalidSpec(format!("{x} lies outside C_k")))
    }

    /// `sgn_P(x)` together with the level that decided it.
    pub fn sgn_with_level(&self, x: &IntVector) -> Result<(Sign, Option<usize>), OrderError> {
        let Some(j) = self.level_of(x)? else {
            return Ok((Sign::Zero, None));
        };
        match self.levels[j - 1].functional.eval(x).sign() {
            Sign::Zero => Err(OrderError::InvalidSpec(format!(
                "L_{j} vanishes on the nonzero element {x}"
            ))),
            s => Ok((s, Some(j))),
        }
    }

    /// `sgn_P(x)`: zero only at `x = 0`.
    pub fn sgn(&self, x: &IntVector) -> Result<Sign, OrderError> {
        self.sgn_with_level(x).map(|(s, _)| s)
    }

    /// `S_j = S ∩ (C_j \ C_{j-1})` for `j = 1..=k`; `0` belongs to no block.
    pub fn partition<'a>(
        &self,
        s: impl IntoIterator<Item = &'a IntVector>,
    ) -> Result<Vec<BTreeSet<IntVector>>, OrderError> {
        let mut blocks = vec![BTreeSet::new(); self.levels.len()];
        for x in s {
            if let Some(j) = self.level_of(x)? {
                blocks[j - 1].insert(x.clone());
            }
        }
        Ok(blocks)
    }

    fn check_dim(&self, x: &IntVector) -> Result<(), OrderError> {
        if x.dim() != self.dim {
            return Err(OrderError::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }
}

/// The lexicographic order: positive iff the last nonzero coordinate is.
pub fn lex_order(dim: usize) -> OrderSpec {
    assert!(dim >= 1, "dimension must be at least 1");
    let levels = (1..=dim)
        .map(|j| Level {
            subgroup: Subgroup::from_vectors(
                dim,
                &(0..j).map(|i| IntVector::unit(dim, i)).collect::<Vec<_>>(),
            ),
            functional: ScalarFunctional::coordinate(dim, j - 1),
        })
        .collect();
    OrderSpec { dim, levels }
}

/// Radicands used when quadratic coefficients are allowed.
const RADICANDS: [u64; 5] = [2, 3, 5, 6, 7];
const MAX_ATTEMPTS: usize = 64;

/// A random valid order, deterministic in `seed`.
///
/// Builds a random unimodular basis `U`, groups its columns into blocks
/// (size 1, or size 2 when quadratic coefficients are allowed), takes
/// `C_j` as the span of the first blocks, and gives each block a functional
/// that is injective on the block's integer coordinates.
pub fn random_order(
    dim: usize,
    seed: u64,
    coefficient_bound: i64,
    allow_quadratic: bool,
) -> Result<OrderSpec, OrderError> {
    assert!(dim >= 1, "dimension must be at least 1");
    let bound = coefficient_bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let u = random_unimodular(dim, &mut rng);
        let u_inv = u
            .inverse_unimodular()
            .expect("product of elementary operations");
        let mut sizes = Vec::new();
        let mut used = 0;
        while used < dim {
            let size = if allow_quadratic && dim - used >= 2 && rng.gen_bool(0.35) {
                2
            } else {
                1
            };
            sizes.push(size);
            used += size;
        }
        let mut levels = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for size in sizes {
            let end = start + size;
            let d = if allow_quadratic && (size == 2 || rng.gen_bool(0.3)) {
                *RADICANDS.choose(&mut rng).unwrap()
            } else {
                1
            };
            let mut coords = vec![Scalar::zero(); dim];
            if size == 1 {
                coords[start] = loop {
                    let c = random_scalar(&mut rng, bound, d);
                    if !c.is_zero() {
                        break c;
                    }
                };
            } else {
                let (a, b) = loop {
                    let a = [
                        random_rational(&mut rng, bound),
                        random_rational(&mut rng, bound),
                    ];
                    let b = [
                        random_rational(&mut rng, bound),
                        random_rational(&mut rng, bound),
                    ];
                    if &a[0] * &b[1] != &a[1] * &b[0] {
                        break (a, b);
                    }
                };
                for i in 0..2 {
                    coords[start + i] = Scalar::new(a[i].clone(), b[i].clone(), d)?;
                }
            }
            // Coefficients on later coordinates do not affect C_j.
            for c in coords.iter_mut().skip(end) {
                if rng.gen_bool(0.5) {
                    *c = random_scalar(&mut rng, bound, d);
                }
            }
            let coeffs = (0..dim)
                .map(|l| {
                    (start..dim).fold(Scalar::zero(), |acc, i| {
                        let w = BigRational::from_integer(u_inv[(i, l)].clone());
                        &acc + &coords[i].scale(&w)
                    })
                })
                .collect();
            levels.push(Level {
                subgroup: Subgroup::from_generators(&u.column_range(0..end)),
                functional: ScalarFunctional::new(coeffs)?,
            });
            start = end;
        }
        let spec = OrderSpec { dim, levels };
        if spec.validate().is_valid() {
            return Ok(spec);
        }
    }
    Err(OrderError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Product of random elementary column operations, entries kept small.
pub fn random_unimodular(dim: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(dim);
    if dim < 2 {
        if rng.gen_bool(0.5) {
            u[(0, 0)] = BigInt::from(-1);
        }
        return u;
    }
    for _ in 0..2 * dim {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..6) {
            0 => {
                for r in 0..dim {
                    let (a, b) = (u[(r, i)].clone(), u[(r, j)].clone());
                    u[(r, i)] = b;
                    u[(r, j)] = a;
                }
            }
            1 => {
                for r in 0..dim {
                    let v = -&u[(r, i)];
                    u[(r, i)] = v;
                }
            }
            _ => {
                let k = BigInt::from(*[-2, -1, 1, 2].choose(rng).unwrap());
                for r in 0..dim {
                    let t = &u[(r, i)] * &k;
                    u[(r, j)] += t;
                }
            }
        }
    }
    u
}

fn random_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=3);
    BigRational::new(n.into(), d.into())
}

fn random_scalar(rng: &mut impl Rng, bound: i64, d: u64) -> Scalar {
    let a = random_rational(rng, bound);
    let b = if d == 1 {
        BigRational::from_integer(0.into())
    } else {
        random_rational(rng, bound)
    };
    Scalar::new(a, b, d).expect("radicands are squarefree")
}

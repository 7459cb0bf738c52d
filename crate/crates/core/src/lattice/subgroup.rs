//! Subgroups of ℤᴺ stored by canonical HNF basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{hnf, integer_kernel, snf_invariants, IntMatrix, IntVector};
use super::scalar::{ScalarFunctional, Sign};
use super::LatticeError;

/// A subgroup `H ⊆ ℤᴺ`, held as the canonical column HNF of its generators,
/// so equal subgroups compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient_dim: usize,
    basis: IntMatrix,
    pivot_rows: Vec<usize>,
}

impl Subgroup {
    /// The subgroup generated by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Subgroup {
        let r = hnf(generators);
        Subgroup {
            ambient_dim: generators.rows(),
            basis: r.h,
            pivot_rows: r.pivot_rows,
        }
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[IntVector]) -> Subgroup {
        Self::from_generators(&IntMatrix::from_columns(ambient_dim, vectors))
    }

    pub fn full(ambient_dim: usize) -> Subgroup {
        Self::from_generators(&IntMatrix::identity(ambient_dim))
    }

    pub fn trivial(ambient_dim: usize) -> Subgroup {
        Self::from_generators(&IntMatrix::zeros(ambient_dim, 0))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `N × r` basis matrix in canonical HNF.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full(&self) -> bool {
        *self == Subgroup::full(self.ambient_dim)
    }

    /// Integer coordinates of `v` in the stored basis, or `None` if `v ∉ H`.
    pub fn member(&self, v: &IntVector) -> Option<Vec<BigInt>> {
        assert_eq!(v.dim(), self.ambient_dim, "dimension mismatch");
        // Forward substitution along pivot rows, then a full check.
        let mut coords: Vec<BigInt> = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivot_rows.iter().enumerate() {
            let mut rest = v[p].clone();
            for (kk, c) in coords.iter().enumerate() {
                rest -= &self.basis[(p, kk)] * c;
            }
            let (q, r) = rest.div_rem(&self.basis[(p, k)]);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        let back = self.basis.mul_vec(&IntVector::new(coords.clone()));
        (back == *v).then_some(coords)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.member(v).is_some()
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    /// `v` reduced modulo this subgroup to the representative whose
    /// pivot-row entries lie in `(-p/2, p/2]`.
    pub fn reduce(&self, v: &IntVector) -> IntVector {
        let mut v = v.clone();
        for (k, &p) in self.pivot_rows.iter().enumerate() {
            let pivot = &self.basis[(p, k)];
            let q = symmetric_quotient(&v[p], pivot);
            if !q.is_zero() {
                v = v.sub(&self.basis.column(k).scale(&q));
            }
        }
        v
    }
}

/// `q` such that `x - q·p ∈ (-p/2, p/2]`, for `p > 0`.
fn symmetric_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    // ceil((x - p/2) / p) = ceil((2x - p) / 2p)
    let two = BigInt::from(2);
    let num = x * &two - p;
    let den = p * &two;
    num.div_ceil(&den)
}

/// True iff `H = (ℚ·H) ∩ ℤᴺ`, i.e. every elementary divisor of the basis is 1.
pub fn is_pure(h: &Subgroup) -> bool {
    snf_invariants(h.basis()).iter().all(One::is_one)
}

/// Smallest pure subgroup containing `h` (its saturation); same rank.
pub fn pure_closure(h: &Subgroup) -> Subgroup {
    let orth = integer_kernel(&h.basis().transpose());
    let sat = integer_kernel(&orth.transpose());
    Subgroup::from_generators(&sat)
}

/// Completes the columns of `prefix` (a basis of a subgroup pure in `outer`)
/// to a basis of `outer`; the first `prefix.cols()` columns are `prefix`
/// itself.
pub fn extend_columns(prefix: &IntMatrix, outer: &Subgroup) -> Result<IntMatrix, LatticeError> {
    if prefix.rows() != outer.ambient_dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: outer.ambient_dim(),
            found: prefix.rows(),
        });
    }
    let p = prefix.cols();
    if p == 0 {
        return Ok(outer.basis().clone());
    }
    let ro = outer.rank();
    let mut coords = IntMatrix::zeros(ro, p);
    for j in 0..p {
        let c = outer
            .member(&prefix.column(j))
            .ok_or(LatticeError::NotContained)?;
        for (i, x) in c.into_iter().enumerate() {
            coords[(i, j)] = x;
        }
    }
    // coordsᵀ·u = [I | 0] exactly when the prefix spans a pure rank-p
    // sublattice; then (u⁻¹)ᵀ is unimodular with coords as leading columns.
    let r = hnf(&coords.transpose());
    if r.h != IntMatrix::identity(p) {
        return Err(LatticeError::NotPure);
    }
    let completion =
        r.u.inverse_unimodular()
            .expect("hnf transform is unimodular")
            .transpose();
    Ok(outer.basis().mul(&completion))
}

/// Basis of `outer` whose first `inner.rank()` columns are the canonical
/// basis of `inner`.
pub fn extend_basis(inner: &Subgroup, outer: &Subgroup) -> Result<IntMatrix, LatticeError> {
    if !outer.contains_subgroup(inner) {
        return Err(LatticeError::NotContained);
    }
    extend_columns(inner.basis(), outer)
}

/// `{x ∈ h : L(x) = 0}` computed exactly: the rational and `√d` parts of `L`
/// must vanish separately.
pub fn functional_kernel(h: &Subgroup, l: &ScalarFunctional) -> Result<Subgroup, LatticeError> {
    Ok(restricted_system(h, l)?.kernel_subgroup(h))
}

/// Splits `h = d ⊕ ⟨gen⟩` with `d = ker L ∩ h` and `L(gen) > 0` minimal.
///
/// `gen` is reduced modulo `d` to its canonical representative (pivot-row
/// entries in `(-p/2, p/2]` against the HNF basis of `d`).
pub fn kernel_split(
    h: &Subgroup,
    l: &ScalarFunctional,
) -> Result<(Subgroup, IntVector), LatticeError> {
    let sys = restricted_system(h, l)?;
    match sys.hnf.rank() {
        0 => return Err(LatticeError::ZeroOnSubgroup),
        1 => {}
        _ => return Err(LatticeError::KernelNotCodimOne),
    }
    let d = sys.kernel_subgroup(h);
    let mut gen = h.basis().mul_vec(&sys.hnf.u.column(0));
    match l.eval(&gen).sign() {
        Sign::Positive => {}
        Sign::Negative => gen = gen.neg(),
        Sign::Zero => unreachable!("generator column lies outside the kernel"),
    }
    let gen = d.reduce(&gen);
    Ok((d, gen))
}

struct RestrictedSystem {
    hnf: super::matrix::Hnf,
}

impl RestrictedSystem {
    fn kernel_subgroup(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_generators(&h.basis().mul(&self.hnf.kernel()))
    }
}

/// Integer matrix of `L` restricted to `h` (one row per nonzero rational or
/// irrational part, denominators cleared), in HNF.
fn restricted_system(h: &Subgroup, l: &ScalarFunctional) -> Result<RestrictedSystem, LatticeError> {
    if l.dim() != h.ambient_dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: h.ambient_dim(),
            found: l.dim(),
        });
    }
    let basis = h.basis().columns();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for part in [l.rational_parts(), l.irrational_parts()] {
        let values: Vec<BigRational> = basis
            .iter()
            .map(|b| {
                part.iter()
                    .zip(b.entries())
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| c * BigRational::from_integer(x.clone()))
                    .sum()
            })
            .collect();
        if values.iter().all(Zero::is_zero) {
            continue;
        }
        let lcm = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(
            values
                .iter()
                .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        );
    }
    let mut m = IntMatrix::zeros(rows.len(), basis.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    Ok(RestrictedSystem { hnf: hnf(&m) })
}

/// A vector `x ∉ h` with `n·x ∈ h` for some `n ≥ 2`, if `h` is not pure.
pub fn impurity_witness(h: &Subgroup) -> Option<IntVector> {
    let closure = pure_closure(h);
    closure
        .basis()
        .columns()
        .into_iter()
        .find(|c| !h.contains(c))
}

/// `|det|` of a square basis matrix is 1.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.det().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::scalar::Scalar;

    fn v(xs: &[i64]) -> IntVector {
        IntVector::from_i64(xs)
    }

    fn sub(n: usize, gens: &[&[i64]]) -> Subgroup {
        Subgroup::from_vectors(n, &gens.iter().map(|g| v(g)).collect::<Vec<_>>())
    }

    #[test]
    fn purity_examples() {
        assert!(is_pure(&sub(2, &[&[1, 0]])));
        assert!(!is_pure(&sub(2, &[&[2, 0]])));
        assert!(is_pure(&sub(2, &[&[3, -2]])));
        assert!(is_pure(&Subgroup::trivial(3)));
        assert_eq!(impurity_witness(&sub(2, &[&[2, 0]])), Some(v(&[1, 0])));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(pure_closure(&sub(2, &[&[2, 0]])), sub(2, &[&[1, 0]]));
        assert_eq!(pure_closure(&sub(2, &[&[2, 4]])), sub(2, &[&[1, 2]]));
        let p = sub(3, &[&[1, 2, 3]]);
        assert_eq!(pure_closure(&p), p);
        assert_eq!(pure_closure(&Subgroup::trivial(2)), Subgroup::trivial(2));
        assert_eq!(
            pure_closure(&sub(2, &[&[2, 0], &[0, 3]])),
            Subgroup::full(2)
        );
    }

    #[test]
    fn membership_examples() {
        let h = sub(2, &[&[1, 1], &[0, 2]]);
        assert_eq!(h.member(&v(&[3, 1])), Some(vec![3.into(), (-1).into()]));
        assert_eq!(h.member(&v(&[0, 0])), Some(vec![0.into(), 0.into()]));
        assert_eq!(h.member(&v(&[1, 0])), None);
        // Same lattice from other generators.
        assert_eq!(sub(2, &[&[2, 0], &[1, 1]]), h);
    }

    #[test]
    fn extend_examples() {
        let b = extend_basis(&sub(2, &[&[1, 0]]), &Subgroup::full(2)).unwrap();
        assert_eq!(b, IntMatrix::identity(2));
        let b = extend_basis(&sub(2, &[&[3, -2]]), &Subgroup::full(2)).unwrap();
        assert_eq!(b.column(0), v(&[3, -2]));
        assert!(is_unimodular(&b));
        assert_eq!(
            extend_basis(&sub(2, &[&[2, 0]]), &Subgroup::full(2)),
            Err(LatticeError::NotPure)
        );
        assert_eq!(
            extend_basis(&sub(2, &[&[1, 0]]), &sub(2, &[&[0, 1]])),
            Err(LatticeError::NotContained)
        );
    }

    #[test]
    fn extend_inside_proper_outer() {
        let outer = sub(3, &[&[1, 0, 1], &[0, 1, 1]]);
        let inner = sub(3, &[&[1, 1, 2]]);
        let b = extend_basis(&inner, &outer).unwrap();
        assert_eq!(b.column(0), inner.basis().column(0));
        assert_eq!(Subgroup::from_generators(&b), outer);
    }

    #[test]
    fn split_rational_functional() {
        let l = ScalarFunctional::from_i64(&[2, 3]);
        let (d, gen) = kernel_split(&Subgroup::full(2), &l).unwrap();
        assert_eq!(d, sub(2, &[&[3, -2]]));
        assert_eq!(gen, v(&[-1, 1]));
        assert_eq!(l.eval(&gen), Scalar::integer(1));

        let l = ScalarFunctional::from_i64(&[0, 1]);
        let (d, gen) = kernel_split(&Subgroup::full(2), &l).unwrap();
        assert_eq!(d, sub(2, &[&[1, 0]]));
        assert_eq!(gen, v(&[0, 1]));
    }

    #[test]
    fn split_quadratic_functional_is_not_codim_one() {
        let l = ScalarFunctional::new(vec![Scalar::integer(1), Scalar::sqrt(2).unwrap()]).unwrap();
        assert_eq!(
            kernel_split(&Subgroup::full(2), &l),
            Err(LatticeError::KernelNotCodimOne)
        );
        assert_eq!(
            functional_kernel(&Subgroup::full(2), &l).unwrap(),
            Subgroup::trivial(2)
        );
    }

    #[test]
    fn split_zero_on_subgroup() {
        let l = ScalarFunctional::from_i64(&[0, 1]);
        assert_eq!(
            kernel_split(&sub(2, &[&[1, 0]]), &l),
            Err(LatticeError::ZeroOnSubgroup)
        );
    }

    #[test]
    fn split_gen_is_minimal_for_scaled_functional() {
        // L = 4x + 6y takes values 2ℤ on ℤ².
        let l = ScalarFunctional::from_i64(&[4, 6]);
        let (d, gen) = kernel_split(&Subgroup::full(2), &l).unwrap();
        assert_eq!(l.eval(&gen), Scalar::integer(2));
        let split = d.basis().hconcat(&IntMatrix::from_columns(2, &[gen]));
        assert!(is_unimodular(&split));
    }

    #[test]
    fn symmetric_quotient_range() {
        let p = BigInt::from(3);
        for x in -10..10 {
            let x = BigInt::from(x);
            let r = &x - symmetric_quotient(&x, &p) * &p;
            assert!(r > BigInt::from(-2) && r <= BigInt::from(1), "{x} -> {r}");
        }
        let p = BigInt::from(2);
        for x in -10..10 {
            let x = BigInt::from(x);
            let r = &x - symmetric_quotient(&x, &p) * &p;
            assert!(r == BigInt::zero() || r == BigInt::one(), "{x} -> {r}");
        }
    }
}

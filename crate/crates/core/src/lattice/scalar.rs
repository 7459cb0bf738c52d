//! Exact numbers `a + b√d` with rational `a`, `b` and squarefree `d`, and
//! linear functionals on ℤᴺ with such coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntVector;
use super::LatticeError;

/// Sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_int(x: &BigInt) -> Sign {
        match x.cmp(&BigInt::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn of_rational(x: &BigRational) -> Sign {
        Sign::of_int(x.numer())
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(x: i8) -> Option<Sign> {
        match x {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Negative => write!(f, "-1"),
            Sign::Zero => write!(f, "0"),
            Sign::Positive => write!(f, "+1"),
        }
    }
}

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element `a + b√d` of the real quadratic field ℚ(√d).
///
/// Canonical: when `d = 1` the value is a pure rational and `b = 0`.
/// Arithmetic between two values over different radicands `d ≠ 1` panics;
/// [`ScalarFunctional`] guarantees a shared radicand for its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Scalar, LatticeError> {
        if !is_squarefree(d) {
            return Err(LatticeError::InvalidRadicand(d));
        }
        Ok(Self::canonical(a, b, d))
    }

    fn canonical(a: BigRational, b: BigRational, d: u64) -> Scalar {
        if d == 1 {
            Scalar {
                a: a + b,
                b: BigRational::zero(),
                d: 1,
            }
        } else if b.is_zero() {
            Scalar { a, b, d: 1 }
        } else {
            Scalar { a, b, d }
        }
    }

    pub fn zero() -> Scalar {
        Scalar::rational(BigRational::zero())
    }

    pub fn rational(q: BigRational) -> Scalar {
        Scalar {
            a: q,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Scalar {
        Scalar::rational(BigRational::from_integer(n.into()))
    }

    /// `√d`; `d = 1` gives `1`.
    pub fn sqrt(d: u64) -> Result<Scalar, LatticeError> {
        Scalar::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `√d`.
    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// The radicand `d`; `1` for pure rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√d`, comparing `a²` with `b²d` when the parts
    /// disagree in sign.
    pub fn sign(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        match (sa, sb) {
            (s, Sign::Zero) | (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        match self.sign() {
            Sign::Negative => -self,
            _ => self.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar::canonical(&self.a * q, &self.b * q, self.d)
    }

    /// Nearest `f64`, for reporting only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    fn common_radicand(&self, other: &Scalar) -> u64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed quadratic fields Q(sqrt {d}) and Q(sqrt {e})"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Numeric order. Panics across different quadratic fields.
    fn cmp(&self, other: &Scalar) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let d = self.common_radicand(rhs);
        Scalar::canonical(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let d = self.common_radicand(rhs);
        Scalar::canonical(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let d = self.common_radicand(rhs);
        let dq = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::canonical(a, b, d)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            write!(f, "{}", if self.b.is_negative() { " - " } else { " + " })?;
            write!(f, "{}·√{}", self.b.abs(), self.d)
        } else {
            write!(f, "{}·√{}", self.b, self.d)
        }
    }
}

/// A linear map `x ↦ Σ coeffs[l]·x[l]` from ℤᴺ to ℚ(√d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarFunctional {
    coeffs: Vec<Scalar>,
    d: u64,
}

impl ScalarFunctional {
    /// All coefficients must live in one field ℚ(√d) (rationals mix freely).
    pub fn new(coeffs: Vec<Scalar>) -> Result<ScalarFunctional, LatticeError> {
        let mut d = 1;
        for c in &coeffs {
            match (d, c.d) {
                (_, 1) => {}
                (1, e) => d = e,
                (x, e) if x == e => {}
                (x, e) => return Err(LatticeError::FieldMismatch(x, e)),
            }
        }
        Ok(ScalarFunctional { coeffs, d })
    }

    pub fn from_integers(coeffs: &[BigInt]) -> ScalarFunctional {
        ScalarFunctional {
            coeffs: coeffs.iter().cloned().map(Scalar::integer).collect(),
            d: 1,
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> ScalarFunctional {
        ScalarFunctional {
            coeffs: coeffs.iter().map(|&c| Scalar::integer(c)).collect(),
            d: 1,
        }
    }

    /// The `index`-th coordinate functional (0-based).
    pub fn coordinate(dim: usize, index: usize) -> ScalarFunctional {
        let mut c = vec![0; dim];
        c[index] = 1;
        Self::from_i64(&c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn rational_parts(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| c.a.clone()).collect()
    }

    pub fn irrational_parts(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| c.b.clone()).collect()
    }

    pub fn eval(&self, x: &IntVector) -> Scalar {
        assert_eq!(x.dim(), self.dim(), "dimension mismatch");
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for (c, xi) in self.coeffs.iter().zip(x.entries()) {
            if xi.is_zero() {
                continue;
            }
            let xi = BigRational::from_integer(xi.clone());
            a += &c.a * &xi;
            b += &c.b * &xi;
        }
        Scalar::canonical(a, b, self.d)
    }
}

impl fmt::Display for ScalarFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·x{}", l + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

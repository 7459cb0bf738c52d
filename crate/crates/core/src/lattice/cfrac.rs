//! Continued-fraction convergents of `√d`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Iterator over the convergents `p/q` of `√d`, starting at `⌊√d⌋/1`.
///
/// For a perfect square the expansion terminates after one term.
#[derive(Clone, Debug)]
pub struct SqrtConvergents {
    d: BigInt,
    a0: BigInt,
    // Periodic expansion state: √d = [a0; a1, a2, …] with
    // a_{n+1} = ⌊(a0 + m) / den⌋.
    m: BigInt,
    den: BigInt,
    a: BigInt,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
    started: bool,
    done: bool,
}

impl SqrtConvergents {
    pub fn new(d: u64) -> Self {
        let d = BigInt::from(d);
        let a0 = d.sqrt();
        SqrtConvergents {
            a: a0.clone(),
            done: false,
            started: false,
            m: BigInt::zero(),
            den: BigInt::one(),
            p: (BigInt::one(), a0.clone()),
            q: (BigInt::zero(), BigInt::one()),
            d,
            a0,
        }
    }
}

impl Iterator for SqrtConvergents {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if &self.a0 * &self.a0 == self.d {
                self.done = true;
            }
            return Some((self.p.1.clone(), self.q.1.clone()));
        }
        self.m = &self.den * &self.a - &self.m;
        self.den = (&self.d - &self.m * &self.m) / &self.den;
        self.a = (&self.a0 + &self.m) / &self.den;
        let p = &self.a * &self.p.1 + &self.p.0;
        let q = &self.a * &self.q.1 + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p.clone()), p.clone());
        self.q = (std::mem::replace(&mut self.q.1, q.clone()), q.clone());
        Some((p, q))
    }
}

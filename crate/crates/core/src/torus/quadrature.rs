//! Uniform-grid quadrature on 𝕋ᴺ.
//!
//! Grid points are `θ = 2πk/M`, `k ∈ {0,…,M-1}ᴺ`. Each value is a direct sum
//! over the terms with the phase index `⟨χ, k⟩ mod M` computed in integer
//! arithmetic and looked up in a table of `e^{2πit/M}`, so a unimodular
//! relabeling of the frequencies only permutes the grid values. Values are
//! accumulated in lexicographic grid order with a fixed pairwise summation
//! tree, which makes results reproducible bit for bit.
//!
//! Axes on which every frequency vanishes are integrated out exactly (the
//! integrand is constant along them), so the cost depends only on the
//! coordinates the polynomial actually uses.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{TorusError, TrigPoly};

/// Largest grid (in points) ever evaluated.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Values below this are clamped before taking the logarithm.
pub const DEFAULT_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Points per axis for the first (or only) evaluation.
    pub grid: usize,
    /// Double the grid until successive values agree to `refine_tol`.
    pub refine: bool,
    pub refine_tol: f64,
    /// Cap on the number of evaluated points.
    pub max_points: usize,
    pub floor: f64,
}

impl QuadratureOptions {
    /// Grid of `grid` points per axis, no refinement.
    pub fn fixed(grid: usize) -> QuadratureOptions {
        QuadratureOptions {
            grid,
            refine: false,
            refine_tol: 0.0,
            max_points: MAX_GRID_POINTS,
            floor: DEFAULT_FLOOR,
        }
    }

    /// Default starting grid for dimension `n` with refinement enabled:
    /// 256 points per axis for `n ≤ 2`, 64 for `n = 3`, and smaller grids
    /// beyond.
    pub fn for_dim(n: usize) -> QuadratureOptions {
        let grid = match n {
            0..=2 => 256,
            3 => 64,
            4 => 16,
            _ => 8,
        };
        QuadratureOptions {
            grid,
            refine: true,
            refine_tol: 1e-4,
            max_points: MAX_GRID_POINTS,
            floor: DEFAULT_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    /// Estimate of `∫ log|f| dλ` at the final grid.
    pub value: f64,
    /// Points per axis of the final grid.
    pub grid_size: usize,
    /// Fraction of final-grid points where `|f|` fell below the floor.
    pub clamped_fraction: f64,
    /// `(M, value)` for every grid evaluated, in order.
    pub refinement_history: Vec<(usize, f64)>,
}

impl QuadratureResult {
    /// `|value(M) − value(M/2)|` for the last refinement step, 0 without one.
    pub fn refinement_delta(&self) -> f64 {
        match self.refinement_history.as_slice() {
            [.., (_, a), (_, b)] => (b - a).abs(),
            _ => 0.0,
        }
    }
}

/// A polynomial prepared for evaluation on one grid.
struct Grid {
    m: u64,
    /// Number of active axes.
    axes: usize,
    table: Vec<Complex64>,
    /// Per term: frequency residues mod M on the active axes, coefficient.
    terms: Vec<(Vec<u64>, Complex64)>,
}

impl Grid {
    fn new(f: &TrigPoly, m: usize) -> Grid {
        let active: Vec<usize> = (0..f.dim())
            .filter(|&i| f.terms().any(|(k, _)| !k[i].is_zero()))
            .collect();
        let mb = BigInt::from(m);
        let terms = f
            .terms()
            .map(|(k, c)| {
                let res = active
                    .iter()
                    .map(|&i| k[i].mod_floor(&mb).to_u64().expect("residue below M"))
                    .collect();
                (res, *c)
            })
            .collect();
        let table = (0..m)
            .map(|t| {
                let (s, c) = (TAU * t as f64 / m as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Grid {
            m: m as u64,
            axes: active.len(),
            table,
            terms,
        }
    }

    fn points(&self) -> Option<usize> {
        (self.m as usize).checked_pow(self.axes as u32)
    }

    /// `f` at the grid point with lexicographic index `idx`.
    fn value(&self, idx: usize, k: &mut [u64]) -> Complex64 {
        let mut rest = idx as u64;
        for slot in k.iter_mut().rev() {
            *slot = rest % self.m;
            rest /= self.m;
        }
        let mut z = Complex64::zero();
        for (res, c) in &self.terms {
            let phase = res
                .iter()
                .zip(k.iter())
                .fold(0u64, |acc, (r, ki)| (acc + r * ki) % self.m);
            z += c * self.table[phase as usize];
        }
        z
    }

    /// Pairwise sum of `g(f(θ))` over the grid, with the fixed tree.
    fn sum(&self, g: &mut impl FnMut(Complex64) -> f64) -> f64 {
        let n = self.points().expect("grid size checked by caller");
        let mut k = vec![0u64; self.axes];
        self.sum_range(0, n, g, &mut k)
    }

    fn sum_range(
        &self,
        lo: usize,
        hi: usize,
        g: &mut impl FnMut(Complex64) -> f64,
        k: &mut [u64],
    ) -> f64 {
        const LEAF: usize = 16;
        if hi - lo <= LEAF {
            let mut buf = [0.0f64; LEAF];
            for (slot, idx) in buf.iter_mut().zip(lo..hi) {
                *slot = g(self.value(idx, k));
            }
            return pairwise(&buf[..hi - lo]);
        }
        let mid = lo + (hi - lo) / 2;
        self.sum_range(lo, mid, g, k) + self.sum_range(mid, hi, g, k)
    }
}

fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}

fn prepare(f: &TrigPoly, m: usize, max_points: usize) -> Result<(Grid, usize), TorusError> {
    if m < 2 {
        return Err(TorusError::GridTooSmall(m));
    }
    let grid = Grid::new(f, m);
    match grid.points() {
        Some(n) if n <= max_points => Ok((grid, n)),
        _ => Err(TorusError::GridTooLarge {
            grid: m,
            axes: grid.axes,
        }),
    }
}

/// `(mean of log max(|f|, floor), clamped fraction)` on an `M`-point grid.
fn log_mean(f: &TrigPoly, m: usize, opts: &QuadratureOptions) -> Result<(f64, f64), TorusError> {
    let (grid, n) = prepare(f, m, opts.max_points)?;
    let mut clamped = 0usize;
    let floor = opts.floor;
    let sum = grid.sum(&mut |z| {
        let a = z.norm();
        if a < floor {
            clamped += 1;
            floor.ln()
        } else {
            a.ln()
        }
    });
    Ok((sum / n as f64, clamped as f64 / n as f64))
}

/// Estimates `∫ log|f| dλ`, doubling the grid while refinement is enabled,
/// the last two values differ by at least `refine_tol`, and the next grid
/// fits under `max_points`.
pub fn log_abs_integral(
    f: &TrigPoly,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult, TorusError> {
    if f.is_zero() {
        return Err(TorusError::ZeroPolynomial);
    }
    let mut m = opts.grid;
    let (mut value, mut clamped) = log_mean(f, m, opts)?;
    let mut history = vec![(m, value)];
    if opts.refine {
        loop {
            let next = m * 2;
            let (v, c) = match log_mean(f, next, opts) {
                Ok(vc) => vc,
                Err(TorusError::GridTooLarge { .. }) => break,
                Err(e) => return Err(e),
            };
            let delta = (v - value).abs();
            m = next;
            value = v;
            clamped = c;
            history.push((m, value));
            if delta < opts.refine_tol {
                break;
            }
        }
    }
    Ok(QuadratureResult {
        value,
        grid_size: m,
        clamped_fraction: clamped,
        refinement_history: history,
    })
}

/// Grid mean of `|f|^p` on an `M`-point grid.
pub fn abs_pow_mean(f: &TrigPoly, p: f64, m: usize) -> Result<f64, TorusError> {
    let (grid, n) = prepare(f, m, MAX_GRID_POINTS)?;
    Ok(grid.sum(&mut |z| z.norm().powf(p)) / n as f64)
}

/// Grid mean of `f` itself; equals `f̂(0)` up to aliasing of frequencies
/// that are multiples of `M`.
pub fn grid_mean(f: &TrigPoly, m: usize) -> Result<Complex64, TorusError> {
    let (grid, n) = prepare(f, m, MAX_GRID_POINTS)?;
    let re = grid.sum(&mut |z| z.re);
    let im = grid.sum(&mut |z| z.im);
    Ok(Complex64::new(re, im) / n as f64)
}

//! Spectral radius computation and the polynomial certificates used by
//! the extremal comparisons.
//!
//! The power iteration runs on `A + I` rather than `A`: bipartite graphs
//! carry the eigenvalue pair `±rho`, and the unshifted iteration then
//! oscillates forever. The shift makes `rho + 1` strictly dominant while
//! leaving eigenvectors alone, so Rayleigh quotients and residuals are
//! still taken against `A` itself.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("spectral radius of the empty graph is undefined")]
    EmptyGraph,
    #[error("graph must be connected for a certified spectral radius")]
    Disconnected,
    #[error("tolerance must be a finite positive number, got {tol}")]
    BadTolerance { tol: f64 },
    #[error("residual {residual} still above tolerance after {iterations} iterations")]
    NonConvergence { iterations: u64, residual: f64 },
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("only quadratics and cubics are supported, got {len} coefficients")]
    UnsupportedDegree { len: usize },
    #[error("leading coefficient must be nonzero")]
    BadLeadingCoefficient,
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("matrix entries must be finite and nonnegative")]
    NegativeEntry,
    #[error("order must be even, got {n}")]
    OddOrder { n: i64 },
}

/// A certified eigenvalue estimate: `residual` is the infinity norm of
/// `A x - value x` on the final unit vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub value: f64,
    pub iterations: u64,
    pub residual: f64,
}

fn check_tol(tol: f64) -> Result<(), SpectralError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SpectralError::BadTolerance { tol });
    }
    Ok(())
}

/// Largest adjacency eigenvalue of a connected graph, by shifted power
/// iteration, certified to `residual <= tol`.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult, SpectralError> {
    check_tol(tol)?;
    let n = g.order();
    if n == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut result = None;
    let mut iterations = 0;
    while iterations <= MAX_ITERATIONS {
        for v in 0..n {
            let mut sum = 0.0;
            let mut nb = g.neighbors(v);
            while nb != 0 {
                sum += x[nb.trailing_zeros() as usize];
                nb &= nb - 1;
            }
            ax[v] = sum;
        }
        let value: f64 = x.iter().zip(&ax).map(|(xi, yi)| xi * yi).sum();
        let residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, yi)| (yi - value * xi).abs())
            .fold(0.0f64, f64::max);
        if residual <= tol {
            result = Some(SpectralResult {
                value,
                iterations,
                residual,
            });
            break;
        }
        if iterations == MAX_ITERATIONS {
            return Err(SpectralError::NonConvergence {
                iterations,
                residual,
            });
        }
        // One shifted step: y = (A + I) x, renormalized.
        let norm = x
            .iter()
            .zip(&ax)
            .map(|(xi, yi)| (xi + yi) * (xi + yi))
            .sum::<f64>()
            .sqrt();
        for v in 0..n {
            x[v] = (x[v] + ax[v]) / norm;
        }
        iterations += 1;
    }
    Ok(result.expect("loop exits only via break or error"))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition has no parts")]
    NoParts,
    #[error("part {part} is empty")]
    EmptyPart { part: usize },
    #[error("vertex {v} is outside the graph")]
    VertexOutOfRange { v: usize },
    #[error("vertex {v} appears in more than one part")]
    VertexRepeated { v: usize },
    #[error("vertex {v} is not covered by any part")]
    VertexMissing { v: usize },
}

/// Quotient of the adjacency matrix over a vertex partition. Entry
/// `(i, j)` is the average number of neighbors in part `j` over the
/// vertices of part `i`; `equitable` records whether that count is the
/// same for every vertex of part `i`, for all `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientMatrix {
    pub matrix: Vec<Vec<f64>>,
    pub equitable: bool,
}

pub fn quotient_matrix(g: &Graph, parts: &[Vec<usize>]) -> Result<QuotientMatrix, PartitionError> {
    if parts.is_empty() {
        return Err(PartitionError::NoParts);
    }
    let n = g.order();
    let mut owner = vec![usize::MAX; n];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(PartitionError::EmptyPart { part: i });
        }
        for &v in part {
            if v >= n {
                return Err(PartitionError::VertexOutOfRange { v });
            }
            if owner[v] != usize::MAX {
                return Err(PartitionError::VertexRepeated { v });
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(PartitionError::VertexMissing { v });
    }

    let p = parts.len();
    let mut matrix = vec![vec![0.0; p]; p];
    let mut equitable = true;
    for (i, part) in parts.iter().enumerate() {
        let mut first: Option<Vec<usize>> = None;
        for &v in part {
            let mut counts = vec![0usize; p];
            let mut nb = g.neighbors(v);
            while nb != 0 {
                counts[owner[nb.trailing_zeros() as usize]] += 1;
                nb &= nb - 1;
            }
            for j in 0..p {
                matrix[i][j] += counts[j] as f64;
            }
            match &first {
                None => first = Some(counts),
                Some(f) if *f != counts => equitable = false,
                _ => {}
            }
        }
        for j in 0..p {
            matrix[i][j] /= part.len() as f64;
        }
    }
    Ok(QuotientMatrix { matrix, equitable })
}

/// Dominant eigenvalue of a small nonnegative matrix, by the same
/// shifted iteration and residual certificate as `spectral_radius`.
pub fn largest_eigenvalue(m: &[Vec<f64>], tol: f64) -> Result<SpectralResult, SpectralError> {
    check_tol(tol)?;
    let p = m.len();
    if p == 0 || m.iter().any(|row| row.len() != p) {
        return Err(SpectralError::NotSquare);
    }
    if m.iter().flatten().any(|&e| !e.is_finite() || e < 0.0) {
        return Err(SpectralError::NegativeEntry);
    }
    let mut x = vec![1.0 / (p as f64).sqrt(); p];
    let mut iterations = 0;
    loop {
        let bx: Vec<f64> = m
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, xi)| a * xi).sum())
            .collect();
        let value: f64 = x.iter().zip(&bx).map(|(xi, yi)| xi * yi).sum();
        let residual = x
            .iter()
            .zip(&bx)
            .map(|(xi, yi)| (yi - value * xi).abs())
            .fold(0.0f64, f64::max);
        if residual <= tol {
            return Ok(SpectralResult {
                value,
                iterations,
                residual,
            });
        }
        if iterations == MAX_ITERATIONS {
            return Err(SpectralError::NonConvergence {
                iterations,
                residual,
            });
        }
        let norm = x
            .iter()
            .zip(&bx)
            .map(|(xi, yi)| (xi + yi) * (xi + yi))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            // Zero matrix: the all-zero image certifies eigenvalue 0.
            return Ok(SpectralResult {
                value: 0.0,
                iterations,
                residual: 0.0,
            });
        }
        for v in 0..p {
            x[v] = (x[v] + bx[v]) / norm;
        }
        iterations += 1;
    }
}

/// Characteristic polynomial (monic, descending powers) of the
/// three-part quotient of `K_s v (K_{n-2s} + empty_s)` under the
/// partition (s-clique, middle clique, independent set).
pub fn split_join_poly(n: i64, s: i64) -> [i64; 4] {
    [
        1,
        s - n + 2,
        -(s * s - s + n - 1),
        (n - 1) * s * s - 2 * s * s * s,
    ]
}

/// Characteristic polynomial of the two-part quotient of the balanced
/// half join `K_{n/2} v empty_{n/2}`. Requires even `n`.
pub fn half_join_poly(n: i64) -> Result<[i64; 3], SpectralError> {
    if n % 2 != 0 {
        return Err(SpectralError::OddOrder { n });
    }
    let m = n / 2;
    Ok([1, -(m - 1), -m * m])
}

/// The quadratic whose sign separates the radii of two split joins:
/// the polynomial difference satisfies
/// `split_join_poly(n, s) - split_join_poly(n, delta) = -(s - delta) * q`.
pub fn radius_gap_quadratic(n: i64, delta: i64, s: i64) -> [i64; 3] {
    [
        -1,
        delta + s - 1,
        delta + s - delta * n + 2 * delta * s - n * s + 2 * delta * delta + 2 * s * s,
    ]
}

/// The quadratic comparing a split join against the balanced half join:
/// `q(x) = f_delta(x) - (x - n/2) * half(x)` expanded. Requires even `n`.
pub fn half_join_gap_quadratic(n: i64, delta: i64) -> Result<[i64; 3], SpectralError> {
    if n % 2 != 0 {
        return Err(SpectralError::OddOrder { n });
    }
    let m = n / 2;
    Ok([
        delta + 1,
        -delta * delta + delta - m + 1,
        delta * delta * n - 2 * delta * delta * delta - delta * delta - m * m * m,
    ])
}

/// Horner evaluation in floating point (descending powers).
pub fn eval_poly(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Horner evaluation in exact integer arithmetic (descending powers).
pub fn eval_poly_exact(coeffs: &[i64], x: i128) -> i128 {
    coeffs.iter().fold(0i128, |acc, &c| acc * x + i128::from(c))
}

/// Largest real root of a quadratic or cubic, descending coefficients.
/// Cubics always yield a root; quadratics may have none.
pub fn largest_root(coeffs: &[f64]) -> Result<f64, SpectralError> {
    match *coeffs {
        [a, b, c] => {
            if a == 0.0 || !a.is_finite() {
                return Err(SpectralError::BadLeadingCoefficient);
            }
            let (b, c) = (b / a, c / a);
            let disc = b * b - 4.0 * c;
            if disc < 0.0 {
                return Err(SpectralError::NoRealRoot);
            }
            let sq = disc.sqrt();
            // The larger root, computed without cancellation.
            if b <= 0.0 {
                Ok((-b + sq) / 2.0)
            } else {
                Ok(2.0 * c / (-b - sq))
            }
        }
        [a, b, c, d] => {
            if a == 0.0 || !a.is_finite() {
                return Err(SpectralError::BadLeadingCoefficient);
            }
            let (b, c, d) = (b / a, c / a, d / a);
            Ok(largest_cubic_root(b, c, d))
        }
        _ => Err(SpectralError::UnsupportedDegree { len: coeffs.len() }),
    }
}

/// Largest real root of `x^3 + b x^2 + c x + d`.
fn largest_cubic_root(b: f64, c: f64, d: f64) -> f64 {
    let f = |x: f64| ((x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + c;
    let bound = 1.0 + b.abs().max(c.abs()).max(d.abs());

    // Bracket the largest root: the polynomial is increasing beyond its
    // larger critical point, and f(bound) > 0 by the root bound.
    let disc = b * b - 3.0 * c;
    let (mut lo, mut hi) = if disc > 0.0 {
        let c_hi = (-b + disc.sqrt()) / 3.0;
        let c_lo = (-b - disc.sqrt()) / 3.0;
        if f(c_hi) <= 0.0 {
            (c_hi, bound)
        } else {
            // Both turning values positive: the only root is left of the
            // local maximum.
            (-bound, c_lo)
        }
    } else {
        (-bound, bound)
    };

    debug_assert!(f(lo) <= 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-6 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Newton polish inside the bracket, with bisection as fallback.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let slope = df(x);
        if slope == 0.0 {
            break;
        }
        let next = (x - f(x) / slope).clamp(lo, hi);
        if (next - x).abs() <= 1e-13 * x.abs().max(1.0) {
            return next;
        }
        if f(next) > 0.0 {
            hi = next;
        } else {
            lo = next;
        }
        x = next;
    }
    while hi - lo > 1e-13 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

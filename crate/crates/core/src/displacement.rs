//! The su(1,1) displacement operator `S(ξ) = exp(ξK₊ - ξ*K₋)`.
//!
//! Matrix elements `S^k_{nm}(ξ) = ⟨n,k|S(ξ)|m,k⟩` come from the normal-ordered
//! factorization
//!
//! ```text
//! S(ξ) = exp(αK₊) (1-|α|²)^{K₀} exp(-α*K₋),   α = e^{iθ} tanh r,  ξ = r e^{iθ}
//! ```
//!
//! which yields a finite sum over `q = 0..=min(n, m)`. [`matrix_element_sum`]
//! folds the prefactor into each term, so it stays finite as `α → 0`. The
//! Gauss-series form ([`matrix_element_hyp`]) has its argument `1 - 1/|α|²`
//! blow up there and is kept for cross-validation. Both sums alternate, and
//! once `n` and `m` are both large their terms dwarf the result, so whole
//! tables ([`matrix_table`]) are built from eigenvectors of `S K₀ S†` instead.
//! An independent dense matrix exponential ([`displacement_oracle`]) checks
//! all three.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{apply_kminus, apply_kplus, BargmannIndex, StateVector};
use crate::error::{Error, Result};
use crate::specfun::{hyp2f1_terminating, ln_factorial, ln_gamma_ratio, CompensatedSum};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Squeezing parameters `ξ = r e^{iθ}`, with `θ` kept in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementParams {
    r: f64,
    theta: f64,
}

impl DisplacementParams {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("r must be finite and >= 0, got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("theta must be finite, got {theta}")));
        }
        Ok(Self {
            r,
            theta: wrap_angle(theta),
        })
    }

    pub fn identity() -> Self {
        Self { r: 0.0, theta: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.r.tanh(), self.theta)
    }

    /// `ln(1 - |α|²) = -2 ln cosh r`, evaluated without overflow for large `r`.
    pub fn ln_one_minus_alpha_sq(&self) -> f64 {
        -2.0 * ln_cosh(self.r)
    }
}

fn ln_cosh(r: f64) -> f64 {
    r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2
}

/// Maps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// `α = e^{iθ} tanh r`.
pub fn alpha_from_xi(p: &DisplacementParams) -> Complex64 {
    p.alpha()
}

/// Inverse of [`alpha_from_xi`] on the real principal branch: `r = artanh|α|`.
pub fn xi_from_alpha(alpha: Complex64) -> Result<DisplacementParams> {
    let a = alpha.norm();
    if !(a < 1.0) {
        return Err(Error::Domain(format!("|alpha| must be < 1, got {a}")));
    }
    let theta = if a == 0.0 { 0.0 } else { alpha.arg() };
    DisplacementParams::new(a.atanh(), theta)
}

/// `ln n!` and `ln Γ(2k+n)/Γ(2k)` for `n < len`, shared across many entries.
#[derive(Debug, Clone)]
struct LogTables {
    ln_fact: Vec<f64>,
    ln_rising: Vec<f64>,
}

impl LogTables {
    fn new(k: BargmannIndex, len: usize) -> Self {
        let twok = k.twice();
        Self {
            ln_fact: (0..len).map(ln_factorial).collect(),
            ln_rising: (0..len).map(|n| ln_gamma_ratio(n, twok)).collect(),
        }
    }
}

/// Shared per-table quantities for the folded sum.
struct FoldedSum<'a> {
    k: f64,
    ln_sech2: f64,
    ln_abs_alpha: f64,
    inv_sinh2: f64,
    theta: f64,
    tables: &'a LogTables,
}

impl FoldedSum<'_> {
    fn element(&self, n: usize, m: usize) -> Complex64 {
        let t = self.tables;
        let qmax = n.min(m);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        // Γ(2k+j) enters as Γ(2k)·(2k)_j; the Γ(2k) factors cancel between the
        // square root and the q-denominator.
        let common = self.k * self.ln_sech2
            + 0.5 * (t.ln_fact[m] + t.ln_fact[n] + t.ln_rising[m] + t.ln_rising[n]);
        let ln_term = |q: usize| {
            common + (n + m - 2 * q) as f64 * self.ln_abs_alpha + q as f64 * self.ln_sech2
                - t.ln_fact[q]
                - t.ln_fact[n - q]
                - t.ln_fact[m - q]
                - t.ln_rising[q]
        };
        if self.ln_abs_alpha == f64::NEG_INFINITY {
            return if n == m {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            };
        }
        // Terms are unimodal in q. Scale by the largest and walk outward with
        // exact ratios, which keeps the alternating sum accurate to a few ulps
        // per term instead of one log rounding per term.
        let (peak_q, peak) =
            (0..=qmax)
                .map(|q| (q, ln_term(q)))
                .fold((0, f64::NEG_INFINITY), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                });
        let ratio = |q: usize| {
            -self.inv_sinh2 * ((n - q) * (m - q)) as f64
                / ((q + 1) as f64 * (q as f64 + 2.0 * self.k))
        };
        let mut acc = CompensatedSum::new();
        let start = if peak_q % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(start);
        let mut v = start;
        for q in peak_q..qmax {
            v *= ratio(q);
            acc.add(v);
        }
        v = start;
        for q in (0..peak_q).rev() {
            v /= ratio(q);
            acc.add(v);
        }
        Complex64::from_polar(
            sign * acc.value() * peak.exp(),
            (n as f64 - m as f64) * self.theta,
        )
    }
}

fn folded<'a>(k: BargmannIndex, p: &DisplacementParams, tables: &'a LogTables) -> FoldedSum<'a> {
    FoldedSum {
        k: k.value(),
        ln_sech2: p.ln_one_minus_alpha_sq(),
        ln_abs_alpha: p.r.tanh().ln(),
        inv_sinh2: p.r.sinh().powi(-2),
        theta: p.theta,
        tables,
    }
}

/// `S^k_{nm}(ξ)` by the folded finite sum
///
/// ```text
/// Σ_q (1-|α|²)^k α^{n-q} (-1)^m (α*)^{m-q} (|α|²-1)^q
///     √(m! n! Γ(2k+m) Γ(2k+n)) / (q! (n-q)! (m-q)! Γ(2k+q))
/// ```
///
/// with all factorial ratios taken in log space. At `r = 0` only the
/// `q = n = m` term survives and the result is `δ_{nm}`.
pub fn matrix_element_sum(
    n: usize,
    m: usize,
    k: BargmannIndex,
    p: &DisplacementParams,
) -> Complex64 {
    let tables = LogTables::new(k, n.max(m) + 1);
    folded(k, p, &tables).element(n, m)
}

/// `S^k_{nm}(ξ)` through the terminating Gauss series
///
/// ```text
/// (1-|α|²)^k α^n (-α*)^m √(Γ(2k+m)Γ(2k+n) / (Γ(2k)² m! n!)) ₂F₁(-m, -n; 2k; 1 - 1/|α|²)
/// ```
///
/// Undefined at `α = 0`; use [`matrix_element_sum`] there.
pub fn matrix_element_hyp(
    n: usize,
    m: usize,
    k: BargmannIndex,
    p: &DisplacementParams,
) -> Result<Complex64> {
    let a = p.r.tanh();
    if a == 0.0 {
        return Err(Error::Domain(
            "Gauss-series matrix element is singular at alpha = 0".into(),
        ));
    }
    let twok = k.twice();
    let ln_pre = k.value() * p.ln_one_minus_alpha_sq()
        + (n + m) as f64 * a.ln()
        + 0.5
            * (ln_gamma_ratio(m, twok) + ln_gamma_ratio(n, twok)
                - ln_factorial(m)
                - ln_factorial(n));
    let f = hyp2f1_terminating(m, n, twok, 1.0 - 1.0 / (a * a))?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(
        sign * ln_pre.exp() * f,
        (n as f64 - m as f64) * p.theta,
    ))
}

/// Dense table of `S^k_{nm}(ξ)` for `n, m < dim`; entry `[[n, m]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElementTable {
    k: BargmannIndex,
    params: DisplacementParams,
    entries: Array2<Complex64>,
}

impl MatrixElementTable {
    pub fn k(&self) -> BargmannIndex {
        self.k
    }

    pub fn params(&self) -> &DisplacementParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[[n, m]]
    }

    /// Column `m`, i.e. the displaced number state `S(ξ)|m,k⟩`.
    pub fn column(&self, m: usize) -> StateVector {
        let coeffs = self.entries.column(m).to_vec();
        StateVector::new(self.k, coeffs).expect("table entries are finite")
    }

    /// `1 - Σ_n |S_{nm}|²` for every column.
    pub fn column_deficits(&self) -> Vec<f64> {
        self.entries
            .axis_iter(Axis(1))
            .map(|col| 1.0 - col.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .collect()
    }

    /// `max |Σ_j conj(S_{jn}) S_{jm} - δ_{nm}|` over `n, m < block`.
    pub fn unitarity_residual(&self, block: usize) -> f64 {
        let block = block.min(self.dim());
        let mut worst: f64 = 0.0;
        for n in 0..block {
            for m in 0..block {
                let g: Complex64 = self
                    .entries
                    .column(n)
                    .iter()
                    .zip(self.entries.column(m).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Largest modulus difference between two tables over `n, m < block`.
    pub fn max_abs_diff(&self, other: &MatrixElementTable, block: usize) -> f64 {
        let block = block.min(self.dim()).min(other.dim());
        let mut worst: f64 = 0.0;
        for n in 0..block {
            for m in 0..block {
                worst = worst.max((self.get(n, m) - other.get(n, m)).norm());
            }
        }
        worst
    }

    /// Table-vector product `S·s` over the common levels.
    pub fn apply(&self, s: &StateVector) -> StateVector {
        let dim = self.dim();
        let coeffs = (0..dim)
            .map(|n| {
                s.coeffs()
                    .iter()
                    .take(dim)
                    .enumerate()
                    .map(|(m, c)| self.entries[[n, m]] * c)
                    .sum()
            })
            .collect();
        StateVector::new(self.k, coeffs).expect("finite product")
    }

    /// Matrix product of two tables with the same `k` (parameters of `self` kept).
    pub fn compose(&self, other: &MatrixElementTable) -> MatrixElementTable {
        MatrixElementTable {
            k: self.k,
            params: self.params,
            entries: self.entries.dot(&other.entries),
        }
    }
}

/// Upper bound on the working length of a single column.
pub const COLUMN_LEN_CAP: usize = 1 << 22;

/// Solves a tridiagonal system by Gaussian elimination with partial pivoting.
/// `sub` and `sup` have length `diag.len() - 1`; all inputs are consumed.
fn solve_tridiagonal(
    sub: Vec<f64>,
    mut diag: Vec<f64>,
    mut sup: Vec<f64>,
    mut b: Vec<f64>,
) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * diag.iter().fold(1.0f64, |a, d| a.max(d.abs()));
    let mut sup2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n.saturating_sub(1) {
        if diag[i].abs() >= sub[i].abs() {
            if diag[i] == 0.0 {
                diag[i] = tiny;
            }
            let fact = sub[i] / diag[i];
            diag[i + 1] -= fact * sup[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = diag[i] / sub[i];
            diag[i] = sub[i];
            let temp = diag[i + 1];
            diag[i + 1] = sup[i] - fact * temp;
            if i + 2 < n {
                sup2[i] = sup[i + 1];
                sup[i + 1] = -fact * sup2[i];
            }
            sup[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i];
        }
    }
    if diag[n - 1] == 0.0 {
        diag[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = b[i];
        if i + 1 < n {
            v -= sup[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= sup2[i] * x[i + 2];
        }
        x[i] = v / diag[i];
    }
    x
}

/// Column `m` of `S(ξ)` with the phase `e^{i(n-m)θ}` removed, over `n < rows`.
///
/// `S K₀ S† = cosh 2r K₀ - ½ sinh 2r (e^{iθ}K₊ + e^{-iθ}K₋)`, so the stripped
/// column is the eigenvector of a real symmetric tridiagonal matrix with
/// eigenvalue `m + k`. Inverse iteration on a truncation long enough to hold
/// the column's support finds it; the sign is fixed where the column emerges
/// from underflow, since below its classical turning point the components
/// alternate as `(-1)^{n+m}`.
fn stripped_column(k: f64, r: f64, m: usize, rows: usize) -> Vec<f64> {
    let reach = 1.25 * (m as f64 + k + 16.0) * (2.0 * r).exp() + 64.0;
    let len = if reach < COLUMN_LEN_CAP as f64 {
        (reach as usize).max(rows)
    } else {
        COLUMN_LEN_CAP.max(rows)
    };
    let (c2, half_s2) = ((2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
    // Shifting off the exact eigenvalue keeps the solves finite; neighbours
    // sit a full unit away, so three sweeps suppress them far below rounding.
    let lambda = (m as f64 + k) * (1.0 + 1e-10);
    let diag: Vec<f64> = (0..len).map(|n| c2 * (n as f64 + k) - lambda).collect();
    let off: Vec<f64> = (0..len - 1)
        .map(|n| -half_s2 * ((n as f64 + 1.0) * (2.0 * k + n as f64)).sqrt())
        .collect();
    let mut x = vec![1.0; len];
    for _ in 0..3 {
        x = solve_tridiagonal(off.clone(), diag.clone(), off.clone(), x);
        let peak = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        x.iter_mut().for_each(|v| *v /= peak);
    }
    let mut norm = CompensatedSum::new();
    norm.extend(x.iter().map(|v| v * v));
    let scale = norm.value().sqrt();
    let anchor = x.iter().position(|v| v.abs() > 1e-200).unwrap_or(0);
    let sign = if (anchor + m) % 2 == 0 { 1.0 } else { -1.0 };
    let flip = if x[anchor] * sign < 0.0 { -1.0 } else { 1.0 };
    x.truncate(rows);
    x.iter_mut().for_each(|v| *v *= flip / scale);
    x
}

fn displaced_column(
    k: BargmannIndex,
    p: &DisplacementParams,
    dim: usize,
    m: usize,
) -> Vec<Complex64> {
    if p.r == 0.0 {
        let mut col = vec![ZERO; dim];
        if m < dim {
            col[m] = Complex64::new(1.0, 0.0);
        }
        return col;
    }
    stripped_column(k.value(), p.r, m, dim)
        .into_iter()
        .enumerate()
        .map(|(n, t)| Complex64::from_polar(t, (n as f64 - m as f64) * p.theta))
        .collect()
}

/// Fills a `dim × dim` table column by column.
///
/// Entries with both indices large are out of reach of either closed form in
/// double precision, because their alternating terms exceed the result by
/// many orders of magnitude. Each column is instead obtained as an eigenvector
/// of `S K₀ S†` and agrees with [`matrix_element_sum`] wherever the latter is
/// well conditioned.
pub fn matrix_table(k: BargmannIndex, p: &DisplacementParams, dim: usize) -> MatrixElementTable {
    let cols: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|m| displaced_column(k, p, dim, m))
        .collect();
    let mut entries = Array2::zeros((dim, dim));
    for (m, col) in cols.into_iter().enumerate() {
        for (n, v) in col.into_iter().enumerate() {
            entries[[n, m]] = v;
        }
    }
    MatrixElementTable {
        k,
        params: *p,
        entries,
    }
}

/// Column `m` of the table, `S(ξ)|m,k⟩` over `n < dim`, without filling the rest.
pub fn matrix_column(
    k: BargmannIndex,
    p: &DisplacementParams,
    dim: usize,
    m: usize,
) -> StateVector {
    StateVector::new(k, displaced_column(k, p, dim, m)).expect("finite entries")
}

/// Dense `exp(A)` by scaling and squaring around a Taylor polynomial.
///
/// `A` is scaled by `2^-s` until its 1-norm is at most 1/2; the Taylor core
/// keeps at least 20 terms and stops once a term falls below `1e-18`.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::from(0.5f64.powi(squarings));

    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for j in 1..=60 {
        term = term.dot(&scaled) / Complex64::from(j as f64);
        result += &term;
        if j >= 20 && one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.axis_iter(Axis(1))
        .map(|col| col.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Independent table from the dense exponential of `ξK₊ - ξ*K₋` on the
/// truncated basis. Entries with `n, m <= dim/4` are insulated from the
/// truncation edge.
pub fn displacement_oracle(
    k: BargmannIndex,
    p: &DisplacementParams,
    dim: usize,
) -> Result<MatrixElementTable> {
    if dim < 8 {
        return Err(Error::Domain(format!("oracle needs dim >= 8, got {dim}")));
    }
    let xi = p.xi();
    let mut generator = Array2::<Complex64>::zeros((dim, dim));
    for n in 0..dim - 1 {
        // ⟨n+1|K₊|n⟩ = ⟨n|K₋|n+1⟩ = √((n+1)(2k+n))
        let e = k.raise(n);
        generator[[n + 1, n]] = xi * e;
        generator[[n, n + 1]] = -xi.conj() * e;
    }
    Ok(MatrixElementTable {
        k,
        params: *p,
        entries: expm(&generator),
    })
}

/// Upper bound on series terms before a factor is declared non-convergent.
fn term_budget(dim: usize) -> usize {
    4 * dim
}

fn exp_series(
    s: &StateVector,
    coef: Complex64,
    op: fn(&StateVector) -> StateVector,
) -> Result<StateVector> {
    if coef == ZERO {
        return Ok(s.clone());
    }
    let k = s.k();
    let mut acc: Vec<Complex64> = s.coeffs().to_vec();
    let mut term = StateVector::from_parts(k, acc.clone(), 0.0);
    let mut lost = s.truncation_loss();
    for j in 1..=term_budget(s.dim()) {
        let factor = coef / j as f64;
        let next = op(&term);
        lost += next.truncation_loss() * factor.norm_sqr();
        term = StateVector::from_parts(k, next.into_coeffs(), 0.0).scaled(factor);
        for (a, t) in acc.iter_mut().zip(term.coeffs()) {
            *a += t;
        }
        let acc_norm = acc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if term.norm() <= 1e-16 * acc_norm {
            return Ok(StateVector::from_parts(k, acc, lost));
        }
    }
    Err(Error::Convergence {
        terms: term_budget(s.dim()),
    })
}

/// `S(ξ)|s⟩` through the three normal-ordered factors, right to left, each
/// as a truncated operator Taylor series.
pub fn decomposed_apply(
    k: BargmannIndex,
    p: &DisplacementParams,
    s: &StateVector,
) -> Result<StateVector> {
    if s.k() != k {
        return Err(Error::IndexMismatch {
            state_k: s.k().value(),
            tag_k: k.value(),
        });
    }
    if p.r == 0.0 {
        return Ok(s.clone());
    }
    let alpha = p.alpha();
    let lowered = exp_series(s, -alpha.conj(), apply_kminus)?;
    let ln_sech2 = p.ln_one_minus_alpha_sq();
    let kv = k.value();
    let middle: Vec<Complex64> = lowered
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * ((n as f64 + kv) * ln_sech2).exp())
        .collect();
    let middle = StateVector::from_parts(k, middle, lowered.truncation_loss());
    exp_series(&middle, alpha, apply_kplus)
}

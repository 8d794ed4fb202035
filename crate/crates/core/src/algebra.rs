//! Truncated discrete representation of su(1,1).
//!
//! A [`StateVector`] holds coefficients over `|n,k⟩`, `n = 0..dim`. The
//! generators act as
//!
//! ```text
//! K₊|n,k⟩ = √((n+1)(2k+n)) |n+1,k⟩
//! K₋|n,k⟩ = √(n(2k+n-1))   |n-1,k⟩
//! K₀|n,k⟩ = (n+k)          |n,k⟩,      𝒩 = K₀ - k
//! ```
//!
//! Truncation only breaks these relations at the top of the space, so every
//! residual below is measured on interior indices: `0..dim-1` for one-sided
//! checks and `1..=dim-2` for operator products. Residuals are returned, never
//! asserted; thresholds are policy and live with the caller.

use std::fmt;
use std::sync::Arc;

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A state counts as normalized when `|Σ|c_n|² - 1|` is below this.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// A state counts as converged when `|c_{dim-1}|² <= TAIL_TOL · Σ|c_n|²`.
pub const TAIL_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Bargmann index `k > 0` labelling an irreducible discrete representation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BargmannIndex(f64);

impl BargmannIndex {
    pub fn new(k: f64) -> Result<Self> {
        if k > 0.0 && k.is_finite() {
            Ok(Self(k))
        } else {
            Err(Error::Domain(format!(
                "Bargmann index must be finite and > 0, got {k}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2k`, the argument that appears in every gamma ratio.
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }

    /// Value `k(k-1)` of the Casimir operator on this representation.
    pub fn casimir(self) -> f64 {
        self.0 * (self.0 - 1.0)
    }

    /// `√((n+1)(2k+n))`, the `K₊` matrix element from level `n`.
    #[inline]
    pub fn raise(self, n: usize) -> f64 {
        let n = n as f64;
        ((n + 1.0) * (self.twice() + n)).sqrt()
    }

    /// `√(n(2k+n-1))`, the `K₋` matrix element from level `n`.
    #[inline]
    pub fn lower(self, n: usize) -> f64 {
        let n = n as f64;
        (n * (self.twice() + n - 1.0)).sqrt()
    }
}

impl fmt::Display for BargmannIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coefficients of a state over `|n,k⟩` in a basis truncated at `dim` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    k: BargmannIndex,
    coeffs: Vec<Complex64>,
    truncation_loss: f64,
}

impl StateVector {
    pub fn new(k: BargmannIndex, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("state vector needs dim >= 1".into()));
        }
        if let Some((n, c)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite {
                index: n,
                value: c.norm(),
            });
        }
        Ok(Self {
            k,
            coeffs,
            truncation_loss: 0.0,
        })
    }

    pub fn zeros(k: BargmannIndex, dim: usize) -> Self {
        assert!(dim > 0, "dim must be positive");
        Self {
            k,
            coeffs: vec![ZERO; dim],
            truncation_loss: 0.0,
        }
    }

    /// The basis state `|n,k⟩`.
    pub fn basis(k: BargmannIndex, n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Domain(format!("basis level {n} outside dim {dim}")));
        }
        let mut s = Self::zeros(k, dim);
        s.coeffs[n] = ONE;
        Ok(s)
    }

    pub(crate) fn from_parts(
        k: BargmannIndex,
        coeffs: Vec<Complex64>,
        truncation_loss: f64,
    ) -> Self {
        Self {
            k,
            coeffs,
            truncation_loss,
        }
    }

    pub fn k(&self) -> BargmannIndex {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Squared norm that operators pushed past the top level and dropped.
    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `1 - Σ|c_n|²`.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_deficit().abs() <= NORMALIZATION_TOL
    }

    pub fn is_converged(&self) -> bool {
        let top = self.coeffs[self.dim() - 1].norm_sqr();
        top <= TAIL_TOL * self.norm_sqr()
    }

    /// Rescaled copy with unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DivisionByZero(
                "cannot normalize a zero state".into(),
            ));
        }
        Ok(self.scaled(Complex64::from(1.0 / norm)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            truncation_loss: self.truncation_loss * factor.norm_sqr(),
        }
    }

    /// `⟨self|other⟩`, over the common levels.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest elementwise modulus of the difference; missing levels count as zero.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let n = self.dim().max(other.dim());
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(ZERO);
                let b = other.coeffs.get(i).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    fn map_coeffs(&self, coeffs: Vec<Complex64>, extra_loss: f64) -> Self {
        Self {
            k: self.k,
            coeffs,
            truncation_loss: self.truncation_loss + extra_loss,
        }
    }
}

/// An operator diagonal in the number basis, `D|n,k⟩ = d(n)|n,k⟩`.
pub trait DiagonalOperator {
    fn value(&self, n: usize) -> Complex64;
}

/// A real function of the number operator, such as `G(𝒩)` or `f(𝒩)`.
#[derive(Clone)]
pub struct NonlinearFunction {
    label: String,
    eval: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl NonlinearFunction {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c)
    }

    /// `G(n) = 1/(n+2k)`: the choice that turns the nonlinear coherent state
    /// into the Perelomov state.
    pub fn pcs_like(k: BargmannIndex) -> Self {
        let twok = k.twice();
        Self::new(format!("1/(n+{twok})"), move |n| 1.0 / (n as f64 + twok))
    }

    /// `G ≡ 1`: the Barut–Girardello choice.
    pub fn bgcs_like() -> Self {
        Self::new("1", |_| 1.0)
    }

    /// `G(n) = (n+a)/(n+b)`.
    pub fn rational(a: f64, b: f64) -> Self {
        Self::new(format!("(n+{a})/(n+{b})"), move |n| {
            (n as f64 + a) / (n as f64 + b)
        })
    }

    pub fn number() -> Self {
        Self::new("n", |n| n as f64)
    }

    pub fn eval(&self, n: usize) -> f64 {
        (self.eval)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// First `n < dim` at which the function vanishes or is not finite.
    pub fn first_bad_divisor(&self, dim: usize) -> Option<usize> {
        (0..dim).find(|&n| {
            let g = self.eval(n);
            g == 0.0 || !g.is_finite()
        })
    }
}

impl fmt::Debug for NonlinearFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("NonlinearFunction")
            .field(&self.label)
            .finish()
    }
}

impl DiagonalOperator for NonlinearFunction {
    fn value(&self, n: usize) -> Complex64 {
        Complex64::from(self.eval(n))
    }
}

/// Complex diagonal values indexed by level, e.g. the ladder function of a
/// state with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDiagonal(pub Vec<Complex64>);

impl DiagonalOperator for ComplexDiagonal {
    fn value(&self, n: usize) -> Complex64 {
        self.0.get(n).copied().unwrap_or(ZERO)
    }
}

impl<F: Fn(usize) -> Complex64> DiagonalOperator for F {
    fn value(&self, n: usize) -> Complex64 {
        self(n)
    }
}

/// `K₊|s⟩`. The component pushed to level `dim` is dropped and its squared
/// modulus added to the truncation loss.
pub fn apply_kplus(s: &StateVector) -> StateVector {
    let dim = s.dim();
    let k = s.k;
    let mut out = vec![ZERO; dim];
    for n in 0..dim - 1 {
        out[n + 1] = s.coeffs[n] * k.raise(n);
    }
    let lost = (s.coeffs[dim - 1] * k.raise(dim - 1)).norm_sqr();
    s.map_coeffs(out, lost)
}

/// `K₋|s⟩`.
pub fn apply_kminus(s: &StateVector) -> StateVector {
    let dim = s.dim();
    let k = s.k;
    let mut out = vec![ZERO; dim];
    for n in 1..dim {
        out[n - 1] = s.coeffs[n] * k.lower(n);
    }
    s.map_coeffs(out, 0.0)
}

/// `K₀|s⟩`.
pub fn apply_k0(s: &StateVector) -> StateVector {
    let k = s.k.value();
    let out = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * (n as f64 + k))
        .collect();
    s.map_coeffs(out, 0.0)
}

/// `𝒩|s⟩ = (K₀ - k)|s⟩`.
pub fn apply_number(s: &StateVector) -> StateVector {
    let out = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * n as f64)
        .collect();
    s.map_coeffs(out, 0.0)
}

/// `f(𝒩)|s⟩`. Fails if `f` is not finite at a level where `s` is nonzero.
pub fn apply_diag<D: DiagonalOperator + ?Sized>(s: &StateVector, f: &D) -> Result<StateVector> {
    let mut out = vec![ZERO; s.dim()];
    for (n, c) in s.coeffs.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        let d = f.value(n);
        if !d.is_finite() {
            return Err(Error::NonFinite {
                index: n,
                value: d.norm(),
            });
        }
        out[n] = c * d;
    }
    Ok(s.map_coeffs(out, 0.0))
}

/// Structure function `S(n) = n² |c_n|² / |c_{n-1}|²` of the deformed
/// oscillator carried by `s`. `S(0) = 0`.
pub fn structure_function(s: &StateVector, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if n >= s.dim() {
        return Err(Error::Domain(format!("level {n} outside dim {}", s.dim())));
    }
    let prev = s.coeffs[n - 1].norm();
    if prev == 0.0 {
        return Err(Error::DivisionByZero(format!(
            "coefficient c_{} vanishes",
            n - 1
        )));
    }
    // Ratio of moduli before squaring: |c|² underflows long before |c| does.
    Ok((n as f64 * s.coeffs[n].norm() / prev).powi(2))
}

/// The function `f(n) = c_n √n / (c_{n-1} √(n+2k-1))` for which
/// `(𝒩 - f(𝒩)K₊)|s⟩ = 0`, taken as a literal complex ratio. `f(0)` is unused
/// and set to zero.
pub fn general_ladder_function(s: &StateVector) -> Result<ComplexDiagonal> {
    let twok = s.k.twice();
    let mut f = vec![ZERO; s.dim()];
    for n in 1..s.dim() {
        let prev = s.coeffs[n - 1];
        if prev == ZERO {
            return Err(Error::DivisionByZero(format!(
                "coefficient c_{} vanishes",
                n - 1
            )));
        }
        let nf = n as f64;
        f[n] = ratio(s.coeffs[n], prev) * (nf / (nf + twok - 1.0)).sqrt();
    }
    Ok(ComplexDiagonal(f))
}

/// `a / b` without forming `|b|²`, which underflows for tiny coefficients.
fn ratio(a: Complex64, b: Complex64) -> Complex64 {
    let m = b.norm();
    (a / m) * (b.conj() / m)
}

fn interior_norm(v: &[Complex64]) -> f64 {
    let end = v.len().saturating_sub(1);
    v[..end].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn difference(a: &StateVector, b: &StateVector, scale_b: Complex64) -> Vec<Complex64> {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x - y * scale_b)
        .collect()
}

/// `‖(𝒩 - f(𝒩)K₊)|s⟩‖` over levels `0..dim-1`.
pub fn ladder_residual_general<D: DiagonalOperator + ?Sized>(
    s: &StateVector,
    f: &D,
) -> Result<f64> {
    let raised = apply_diag(&apply_kplus(s), f)?;
    let numbered = apply_number(s);
    Ok(interior_norm(&difference(&numbered, &raised, ONE)))
}

/// `‖G(𝒩)K₋|s⟩ - α|s⟩‖` over levels `0..dim-1`.
///
/// With `G(n) = 1/(n+2k)` this is the ladder form of the Perelomov state;
/// with `G ≡ 1` it is the Barut–Girardello eigen-equation.
pub fn eigen_residual_lowering<D: DiagonalOperator + ?Sized>(
    s: &StateVector,
    g: &D,
    alpha: Complex64,
) -> Result<f64> {
    let lhs = apply_diag(&apply_kminus(s), g)?;
    Ok(interior_norm(&difference(&lhs, s, alpha)))
}

/// `(μK₊ + νK₋)|s⟩`.
pub fn apply_mus_operator(s: &StateVector, mu: Complex64, nu: Complex64) -> StateVector {
    let up = apply_kplus(s);
    let down = apply_kminus(s);
    let coeffs = up
        .coeffs
        .iter()
        .zip(&down.coeffs)
        .map(|(u, d)| mu * u + nu * d)
        .collect();
    StateVector::from_parts(s.k, coeffs, up.truncation_loss * mu.norm_sqr())
}

/// `‖(μK₊ + νK₋)|s⟩ - α|s⟩‖` over levels `0..dim-1`.
///
/// Minimum-uncertainty states require `|μ/ν| < 1`; other ratios are evaluated
/// anyway and logged.
pub fn mus_residual(s: &StateVector, mu: Complex64, nu: Complex64, alpha: Complex64) -> f64 {
    if !(mu.norm() < nu.norm()) {
        log::warn!("mus_residual called with |mu/nu| >= 1 (mu = {mu}, nu = {nu})");
    }
    let lhs = apply_mus_operator(s, mu, nu);
    interior_norm(&difference(&lhs, s, alpha))
}

/// Diagonal of `K₀² - ½(K₊K₋ + K₋K₊)` on levels `0..dim-1`, built from
/// operator applications on basis states.
pub fn casimir_values(k: BargmannIndex, dim: usize) -> Vec<f64> {
    (0..dim.saturating_sub(1))
        .map(|n| {
            let e = StateVector::basis(k, n, dim).expect("n < dim");
            let k0k0 = apply_k0(&apply_k0(&e));
            let pm = apply_kplus(&apply_kminus(&e));
            let mp = apply_kminus(&apply_kplus(&e));
            (k0k0.coeffs[n] - (pm.coeffs[n] + mp.coeffs[n]) * 0.5).re
        })
        .collect()
}

/// Largest interior deviation of the Casimir operator from `k(k-1)`.
pub fn casimir_residual(k: BargmannIndex, dim: usize) -> f64 {
    let target = k.casimir();
    casimir_values(k, dim)
        .into_iter()
        .map(|v| (v - target).abs())
        .fold(0.0, f64::max)
}

/// Residual of a matrix identity `L = R` over an index block.
///
/// `absolute` is `max |L_ij - R_ij|`; `relative` divides each entry by
/// `max(1, |R_ij|)`, which is the meaningful figure once entries grow like
/// `dim²` and a single rounding already exceeds a fixed absolute bound.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityResidual {
    pub absolute: f64,
    pub relative: f64,
}

impl IdentityResidual {
    pub fn worst(self, other: Self) -> Self {
        Self {
            absolute: self.absolute.max(other.absolute),
            relative: self.relative.max(other.relative),
        }
    }

    fn between(lhs: &Array2<Complex64>, rhs: &Array2<Complex64>, lo: usize, hi: usize) -> Self {
        let mut out = Self::default();
        if hi < lo {
            return out;
        }
        let l = lhs.slice(s![lo..=hi, lo..=hi]);
        let r = rhs.slice(s![lo..=hi, lo..=hi]);
        for (a, b) in l.iter().zip(r.iter()) {
            let d = (a - b).norm();
            out.absolute = out.absolute.max(d);
            out.relative = out.relative.max(d / b.norm().max(1.0));
        }
        out
    }
}

/// Dense matrix of a linear map, built column by column from basis states.
pub fn operator_matrix(
    k: BargmannIndex,
    dim: usize,
    op: impl Fn(&StateVector) -> Result<StateVector>,
) -> Result<Array2<Complex64>> {
    let mut m = Array2::zeros((dim, dim));
    for j in 0..dim {
        let col = op(&StateVector::basis(k, j, dim)?)?;
        for (i, c) in col.coeffs.iter().enumerate() {
            m[[i, j]] = *c;
        }
    }
    Ok(m)
}

fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

/// Residuals of the defining commutators on the interior block `1..=dim-2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CommutatorResiduals {
    /// `[K₊, K₋] = -2K₀`
    pub raise_lower: IdentityResidual,
    /// `[K₀, K₊] = K₊`
    pub k0_raise: IdentityResidual,
    /// `[K₀, K₋] = -K₋`
    pub k0_lower: IdentityResidual,
}

impl CommutatorResiduals {
    pub fn max(&self) -> IdentityResidual {
        self.raise_lower.worst(self.k0_raise).worst(self.k0_lower)
    }
}

pub fn commutator_residuals(k: BargmannIndex, dim: usize) -> Result<CommutatorResiduals> {
    if dim < 3 {
        return Err(Error::Domain(format!(
            "commutator check needs dim >= 3, got {dim}"
        )));
    }
    let kp = operator_matrix(k, dim, |s| Ok(apply_kplus(s)))?;
    let km = operator_matrix(k, dim, |s| Ok(apply_kminus(s)))?;
    let k0 = operator_matrix(k, dim, |s| Ok(apply_k0(s)))?;
    let hi = dim - 2;
    Ok(CommutatorResiduals {
        raise_lower: IdentityResidual::between(
            &commutator(&kp, &km),
            &(&k0 * Complex64::from(-2.0)),
            1,
            hi,
        ),
        k0_raise: IdentityResidual::between(&commutator(&k0, &kp), &kp, 1, hi),
        k0_lower: IdentityResidual::between(
            &commutator(&k0, &km),
            &(&km * Complex64::from(-1.0)),
            1,
            hi,
        ),
    })
}

/// Residuals of the deformed-oscillator relations carried by a state, with
/// `A₊ = f(𝒩)K₊` built from the state's own coefficients and `A₋ = A₊†`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GdoResiduals {
    /// `[𝒩, A₊] = A₊`
    pub number_raise: IdentityResidual,
    /// `[𝒩, A₋] = -A₋`
    pub number_lower: IdentityResidual,
    /// `A₊A₋ = S(𝒩)`
    pub raise_lower: IdentityResidual,
    /// `A₋A₊ = S(𝒩+1)`
    pub lower_raise: IdentityResidual,
}

impl GdoResiduals {
    pub fn max(&self) -> IdentityResidual {
        self.number_raise
            .worst(self.number_lower)
            .worst(self.raise_lower)
            .worst(self.lower_raise)
    }
}

/// Checks the deformed-oscillator algebra on the interior block `1..=dim-2`.
///
/// Including the top row would show a spurious `A₋A₊` defect there, since
/// `K₊` cannot leave the truncated space.
pub fn gdo_residuals(s: &StateVector) -> Result<GdoResiduals> {
    let dim = s.dim();
    if dim < 3 {
        return Err(Error::Domain(format!(
            "GDO check needs dim >= 3, got {dim}"
        )));
    }
    let k = s.k;
    let f = general_ladder_function(s)?;
    let f_conj = ComplexDiagonal(f.0.iter().map(|c| c.conj()).collect());
    let a_plus = operator_matrix(k, dim, |v| apply_diag(&apply_kplus(v), &f))?;
    let a_minus = operator_matrix(k, dim, |v| Ok(apply_kminus(&apply_diag(v, &f_conj)?)))?;
    let number = operator_matrix(k, dim, |v| Ok(apply_number(v)))?;

    let mut s_n = Array2::zeros((dim, dim));
    let mut s_n1 = Array2::zeros((dim, dim));
    for n in 0..dim {
        s_n[[n, n]] = Complex64::from(structure_function(s, n)?);
        if n + 1 < dim {
            s_n1[[n, n]] = Complex64::from(structure_function(s, n + 1)?);
        }
    }
    let hi = dim - 2;
    Ok(GdoResiduals {
        number_raise: IdentityResidual::between(&commutator(&number, &a_plus), &a_plus, 1, hi),
        number_lower: IdentityResidual::between(
            &commutator(&number, &a_minus),
            &(&a_minus * Complex64::from(-1.0)),
            1,
            hi,
        ),
        raise_lower: IdentityResidual::between(&a_plus.dot(&a_minus), &s_n, 1, hi),
        lower_raise: IdentityResidual::between(&a_minus.dot(&a_plus), &s_n1, 1, hi),
    })
}

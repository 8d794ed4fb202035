//! Constructors for the su(1,1) state families.
//!
//! | family | defining property |
//! |---|---|
//! | [`pcs`] | `S(ξ)|0,k⟩`; equivalently `(𝒩+2k)⁻¹K₋|s⟩ = α|s⟩` |
//! | [`bgcs`] | `K₋|s⟩ = α|s⟩` |
//! | [`nlcs`], [`nlcs_exponential`] | `G(𝒩)K₋|s⟩ = α|s⟩` |
//! | [`dns`] | `S(ξ)|m,k⟩` |
//! | [`lps`] | `(μK₊ + νK₋)|s⟩ = λ|s⟩`, built from a Laguerre polynomial of a dressed `K₊` |
//!
//! Coefficients with a closed-form normalization ([`pcs`], [`bgcs`]) are
//! returned as evaluated, so `1 - Σ|c_n|²` is the weight lost to truncation.
//! The others are normalized numerically.

use num_complex::Complex64;

use crate::algebra::{
    apply_diag, apply_kplus, apply_mus_operator, BargmannIndex, NonlinearFunction, StateVector,
    TAIL_TOL,
};
use crate::displacement::{matrix_column, DisplacementParams};
use crate::error::{Error, Result};
use crate::specfun::{bessel_i, binomial, ln_factorial, ln_gamma_ratio, ln_gamma_unchecked};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest tolerated norm deficit of a displaced number state.
pub const DNS_DEFICIT_TOL: f64 = 1e-8;

/// Cross-check tolerance between the Bessel normalization and the direct sum.
pub const BESSEL_NORM_TOL: f64 = 1e-10;

/// Default number of retained levels.
pub const DEFAULT_DIM: usize = 256;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Domain("dim must be positive".into()))
    } else {
        Ok(())
    }
}

/// Builds `c_n = exp(ln_mag(n) + i n θ)`, or `|0,k⟩` when `α = 0`.
fn from_log_magnitudes(
    k: BargmannIndex,
    alpha: Complex64,
    dim: usize,
    ln_mag: impl Fn(usize) -> f64,
) -> StateVector {
    if alpha == ZERO {
        return StateVector::basis(k, 0, dim).expect("dim > 0");
    }
    let theta = alpha.arg();
    let coeffs = (0..dim)
        .map(|n| Complex64::from_polar(ln_mag(n).exp(), n as f64 * theta))
        .collect();
    StateVector::new(k, coeffs).expect("finite coefficients")
}

/// Perelomov coherent state
/// `c_n = (1-|α|²)^k √(Γ(2k+n)/(Γ(2k) n!)) α^n`, for `|α| < 1`.
pub fn pcs(alpha: Complex64, k: BargmannIndex, dim: usize) -> Result<StateVector> {
    check_dim(dim)?;
    let a = alpha.norm();
    if !(a < 1.0) {
        return Err(Error::Domain(format!(
            "Perelomov state needs |alpha| < 1, got {a}"
        )));
    }
    let twok = k.twice();
    let head = k.value() * (-a * a).ln_1p();
    let ln_a = a.ln();
    Ok(from_log_magnitudes(k, alpha, dim, |n| {
        head + 0.5 * (ln_gamma_ratio(n, twok) - ln_factorial(n)) + n as f64 * ln_a
    }))
}

/// Barut–Girardello coherent state
/// `c_n = √(|α|^{2k-1} / I_{2k-1}(2|α|)) α^n / √(n! Γ(n+2k))`.
///
/// Fails when the truncated norm disagrees with the Bessel normalization by
/// more than [`BESSEL_NORM_TOL`], i.e. when `dim` is too small for `|α|`.
pub fn bgcs(alpha: Complex64, k: BargmannIndex, dim: usize) -> Result<StateVector> {
    check_dim(dim)?;
    let a = alpha.norm();
    if !a.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    if a == 0.0 {
        return StateVector::basis(k, 0, dim);
    }
    let twok = k.twice();
    let ln_norm_sq = (twok - 1.0) * a.ln() - bessel_i(twok - 1.0, 2.0 * a)?.ln();
    let ln_gamma_twok = ln_gamma_unchecked(twok);
    let ln_a = a.ln();
    let s = from_log_magnitudes(k, alpha, dim, |n| {
        0.5 * ln_norm_sq + n as f64 * ln_a
            - 0.5 * (ln_factorial(n) + ln_gamma_twok + ln_gamma_ratio(n, twok))
    });
    let deficit = s.norm_deficit();
    if deficit.abs() > BESSEL_NORM_TOL {
        return Err(Error::Truncation(format!(
            "Barut-Girardello state with |alpha| = {a} needs more than {dim} levels (norm deficit {deficit:e})"
        )));
    }
    Ok(s)
}

fn require_tail(s: StateVector, what: &str) -> Result<StateVector> {
    if s.is_converged() {
        Ok(s)
    } else {
        let tail = s.coeffs()[s.dim() - 1].norm_sqr() / s.norm_sqr();
        Err(Error::Truncation(format!(
            "{what}: top-level weight {tail:e} exceeds {TAIL_TOL:e} at dim {}",
            s.dim()
        )))
    }
}

/// Nonlinear coherent state `G(𝒩)K₋|s⟩ = α|s⟩`, from the coefficient recursion
/// `D(n+1)/D(n) = α / (G(n) √((n+1)(2k+n)))`, normalized numerically.
pub fn nlcs(
    alpha: Complex64,
    k: BargmannIndex,
    g: &NonlinearFunction,
    dim: usize,
) -> Result<StateVector> {
    check_dim(dim)?;
    if let Some(index) = g.first_bad_divisor(dim) {
        return Err(Error::ZeroDivisor { index });
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    if alpha == ZERO {
        return StateVector::basis(k, 0, dim);
    }
    // Recurse on log-modulus and phase separately; a negative G adds π.
    let ln_a = alpha.norm().ln();
    let theta = alpha.arg();
    let mut ln_mag = Vec::with_capacity(dim);
    let mut phase = Vec::with_capacity(dim);
    let (mut l, mut ph) = (0.0, 0.0);
    for n in 0..dim {
        ln_mag.push(l);
        phase.push(ph);
        let gn = g.eval(n);
        l += ln_a - gn.abs().ln() - 0.5 * k.raise(n).powi(2).ln();
        ph += theta + if gn < 0.0 { std::f64::consts::PI } else { 0.0 };
    }
    let peak = ln_mag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coeffs = ln_mag
        .iter()
        .zip(&phase)
        .map(|(l, p)| Complex64::from_polar((l - peak).exp(), *p))
        .collect();
    let s = StateVector::new(k, coeffs)?.normalized()?;
    require_tail(s, "nonlinear coherent state")
}

/// Nonlinear coherent state from its exponential form
/// `exp(α/(G(𝒩-1)(𝒩+2k-1)) K₊)|0,k⟩`, summed term by term and normalized.
pub fn nlcs_exponential(
    alpha: Complex64,
    k: BargmannIndex,
    g: &NonlinearFunction,
    dim: usize,
) -> Result<StateVector> {
    check_dim(dim)?;
    if let Some(index) = g.first_bad_divisor(dim) {
        return Err(Error::ZeroDivisor { index });
    }
    let twok = k.twice();
    let f = |n: usize| {
        if n == 0 {
            ZERO
        } else {
            alpha / (g.eval(n - 1) * (n as f64 + twok - 1.0))
        }
    };
    let mut term = StateVector::basis(k, 0, dim)?;
    let mut acc: Vec<Complex64> = term.coeffs().to_vec();
    let budget = 4 * dim;
    let mut converged = false;
    for j in 1..=budget {
        term = apply_diag(&apply_kplus(&term), &f)?.scaled(Complex64::from(1.0 / j as f64));
        for (a, t) in acc.iter_mut().zip(term.coeffs()) {
            *a += t;
        }
        let acc_norm = acc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if term.norm() < 1e-16 * acc_norm {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { terms: budget });
    }
    let s = StateVector::new(k, acc)?.normalized()?;
    require_tail(s, "exponential nonlinear coherent state")
}

/// Displaced number state `S(ξ)|m,k⟩`, i.e. column `m` of the matrix-element
/// table. Not renormalized; fails if the truncated norm deficit exceeds
/// [`DNS_DEFICIT_TOL`].
pub fn dns(xi: &DisplacementParams, m: usize, k: BargmannIndex, dim: usize) -> Result<StateVector> {
    check_dim(dim)?;
    if m >= dim {
        return Err(Error::Domain(format!("number state {m} outside dim {dim}")));
    }
    let s = matrix_column(k, xi, dim, m);
    let deficit = s.norm_deficit();
    if deficit > DNS_DEFICIT_TOL {
        return Err(Error::Truncation(format!(
            "displaced number state loses {deficit:e} of its norm at dim {dim}"
        )));
    }
    Ok(s)
}

/// Parameters of a Laguerre polynomial state.
///
/// The displacement is `β = r e^{iθ}` and the polynomial argument is
/// `ξ = -e^{iθ} tanh 2r`. The state is an eigenvector of `μK₊ + νK₋` with
/// `-μ/ν = e^{2iθ} tanh² r`, so `|μ/ν| < 1` whenever `r` is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpsParams {
    theta: f64,
    r: f64,
    order: usize,
    k: BargmannIndex,
}

impl LpsParams {
    pub fn new(theta: f64, r: f64, order: usize, k: BargmannIndex) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::Domain(format!(
                "LPS needs finite r >= 0 and theta, got r = {r}, theta = {theta}"
            )));
        }
        Ok(Self {
            theta: crate::displacement::wrap_angle(theta),
            r,
            order,
            k,
        })
    }

    /// Recovers `(θ, r)` from the operator coefficients, taking the principal
    /// half-angle. Fails unless `0 <= |μ/ν| < 1`.
    pub fn from_mus(mu: Complex64, nu: Complex64, order: usize, k: BargmannIndex) -> Result<Self> {
        if nu == ZERO {
            return Err(Error::Parameter("nu must be nonzero".into()));
        }
        let ratio = -mu / nu;
        let t2 = ratio.norm();
        if !(t2 < 1.0) {
            return Err(Error::Parameter(format!("|mu/nu| = {t2} must be < 1")));
        }
        let theta = if t2 == 0.0 { 0.0 } else { 0.5 * ratio.arg() };
        Self::new(theta, t2.sqrt().atanh(), order, k)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn k(&self) -> BargmannIndex {
        self.k
    }

    /// `β = r e^{iθ}`.
    pub fn beta(&self) -> DisplacementParams {
        DisplacementParams::new(self.r, self.theta).expect("validated in new")
    }

    /// `ξ = -e^{iθ} tanh 2r`.
    pub fn laguerre_argument(&self) -> Complex64 {
        -Complex64::from_polar((2.0 * self.r).tanh(), self.theta)
    }

    /// `(μ, ν)` normalized to `ν = 1`.
    pub fn mus_coefficients(&self) -> (Complex64, Complex64) {
        let t = self.r.tanh();
        (
            -Complex64::from_polar(t * t, 2.0 * self.theta),
            Complex64::new(1.0, 0.0),
        )
    }
}

/// `L_M(ξ · 𝒩/(𝒩+2k-1) · K₊)|0,k⟩` by applying the operator polynomial term
/// by term. Unnormalized.
pub fn lps_seed(p: &LpsParams, dim: usize) -> Result<StateVector> {
    let order = p.order;
    if dim <= order {
        return Err(Error::Truncation(format!(
            "Laguerre order {order} needs dim > {order}, got {dim}"
        )));
    }
    let k = p.k;
    let twok = k.twice();
    let xi = p.laguerre_argument();
    let dressing = |n: usize| {
        if n == 0 {
            ZERO
        } else {
            xi * (n as f64 / (n as f64 + twok - 1.0))
        }
    };
    let mut power = StateVector::basis(k, 0, dim)?;
    let mut acc = vec![ZERO; dim];
    let mut factorial = 1.0;
    for j in 0..=order {
        if j > 0 {
            power = apply_diag(&apply_kplus(&power), &dressing)?;
            factorial *= j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * binomial(order as u64, (order - j) as u64)? / factorial;
        for (a, c) in acc.iter_mut().zip(power.coeffs()) {
            *a += c * weight;
        }
    }
    StateVector::new(k, acc)
}

/// The same seed from its closed-form expansion
/// `(-ξ)^m M! / ((M-m)! √(m! Γ(2k+m)/Γ(2k)))`, `m <= M`.
pub fn lps_seed_closed_form(p: &LpsParams, dim: usize) -> Result<StateVector> {
    let order = p.order;
    if dim <= order {
        return Err(Error::Truncation(format!(
            "Laguerre order {order} needs dim > {order}, got {dim}"
        )));
    }
    let minus_xi = -p.laguerre_argument();
    let twok = p.k.twice();
    let mut coeffs = vec![ZERO; dim];
    for (m, c) in coeffs.iter_mut().enumerate().take(order + 1) {
        let ln_mag = ln_factorial(order)
            - ln_factorial(order - m)
            - 0.5 * (ln_factorial(m) + ln_gamma_ratio(m, twok));
        *c = minus_xi.powu(m as u32) * ln_mag.exp();
    }
    StateVector::new(p.k, coeffs)
}

/// Laguerre polynomial state `S(β) L_M(ξ 𝒩/(𝒩+2k-1) K₊)|0,k⟩`, normalized.
pub fn lps(p: &LpsParams, dim: usize) -> Result<StateVector> {
    let seed = lps_seed(p, dim)?;
    let beta = p.beta();
    let mut acc = vec![ZERO; dim];
    for (m, c) in seed.coeffs().iter().enumerate().take(p.order + 1) {
        if *c == ZERO {
            continue;
        }
        let col = matrix_column(p.k, &beta, dim, m);
        for (a, v) in acc.iter_mut().zip(col.coeffs()) {
            *a += c * v;
        }
    }
    let s = StateVector::new(p.k, acc)?.normalized()?;
    require_tail(s, "Laguerre polynomial state")
}

/// `⟨s|(μK₊ + νK₋)|s⟩ / ⟨s|s⟩`, the eigenvalue of a minimum-uncertainty state.
pub fn mus_eigenvalue(s: &StateVector, mu: Complex64, nu: Complex64) -> Complex64 {
    s.inner(&apply_mus_operator(s, mu, nu)) / s.norm_sqr()
}

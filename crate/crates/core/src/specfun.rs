//! Scalar special functions used by the state and matrix-element formulas.
//!
//! Everything here is a pure function of its arguments. Factorial and gamma
//! ratios are formed as exact running products while the arguments are small
//! (at most [`EXACT_PRODUCT_LIMIT`] factors) and through [`ln_gamma`]
//! differences beyond that, since `Γ(x)` overflows an `f64` near `x = 171`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest number of factors multiplied directly before switching to log space.
pub const EXACT_PRODUCT_LIMIT: usize = 64;

/// Largest `a` for which [`binomial`] uses exact integer arithmetic.
pub const EXACT_BINOMIAL_LIMIT: u64 = 60;

/// Below this argument `ln Γ` is shifted upward by the recurrence before the
/// asymptotic series is applied.
const STIRLING_THRESHOLD: f64 = 15.0;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2j} / (2j (2j - 1))` for j = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated summation applied to the real and imaginary parts separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// `ln Γ(x)` without the domain check. Callers guarantee `x > 0`.
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x.fract() == 0.0 && x <= (EXACT_PRODUCT_LIMIT + 1) as f64 {
        // (x - 1)! exactly; gives ln Γ(1) = ln Γ(2) = 0 without rounding.
        let n = x as usize - 1;
        return (1..=n).map(|j| j as f64).product::<f64>().ln();
    }
    if x >= STIRLING_THRESHOLD {
        return stirling(x);
    }
    let shift = (STIRLING_THRESHOLD - x).ceil() as usize;
    let mut prod = 1.0;
    for j in 0..shift {
        prod *= x + j as f64;
    }
    stirling(x + shift as f64) - prod.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series
}

/// `Γ(twok + n) / Γ(twok) = ∏_{j<n} (twok + j)`.
pub fn gamma_ratio(n: usize, twok: f64) -> f64 {
    if n <= EXACT_PRODUCT_LIMIT {
        (0..n).map(|j| twok + j as f64).product()
    } else {
        ln_gamma_ratio(n, twok).exp()
    }
}

/// `ln(Γ(twok + n) / Γ(twok))`, finite for every `n` as long as `twok > 0`.
pub fn ln_gamma_ratio(n: usize, twok: f64) -> f64 {
    if n <= EXACT_PRODUCT_LIMIT {
        (0..n).map(|j| twok + j as f64).product::<f64>().ln()
    } else {
        ln_gamma_unchecked(twok + n as f64) - ln_gamma_unchecked(twok)
    }
}

/// `ln n!`
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma_ratio(n, 1.0)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).map(|j| x + j as f64).product()
}

/// Terminating Gauss series `₂F₁(-m, -n; c; z)`, summed with compensation.
///
/// The series stops at `q = min(m, n)` because one of the numerator
/// Pochhammer symbols vanishes beyond it.
pub fn hyp2f1_terminating(m: usize, n: usize, c: f64, z: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "hyp2f1_terminating requires c > 0, got {c}"
        )));
    }
    let mut acc = CompensatedSum::new();
    let mut term = 1.0;
    acc.add(term);
    for q in 0..m.min(n) {
        let qf = q as f64;
        term *= (qf - m as f64) * (qf - n as f64) * z / ((qf + 1.0) * (c + qf));
        acc.add(term);
    }
    Ok(acc.value())
}

/// Modified Bessel function of the first kind, `I_ν(x)`, by its power series.
///
/// Orders in `(-1, 0)` are accepted: the Barut–Girardello normalization at
/// `k = 1/4` needs `I_{-1/2}`. All terms are positive so the series is summed
/// directly until a term no longer moves the partial sum.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::Domain(format!(
            "bessel_i requires nu > -1, got {nu}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_i requires finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain(
                "bessel_i diverges at x = 0 for nu < 0".into(),
            ))
        };
    }
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut term = (nu * half.ln() - ln_gamma_unchecked(nu + 1.0)).exp();
    let mut sum = term;
    let mut j = 0.0;
    loop {
        j += 1.0;
        term *= quarter_sq / (j * (j + nu));
        sum += term;
        if term < 1e-17 * sum {
            return Ok(sum);
        }
    }
}

/// Laguerre polynomial `L_M(x) = Σ_{n=0}^{M} C(M, M-n) (-1)^n x^n / n!`.
pub fn laguerre(order: usize, x: Complex64) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    for j in 0..order {
        let jf = j as f64;
        term *= -x * ((order - j) as f64) / ((jf + 1.0) * (jf + 1.0));
        acc.add(term);
    }
    acc.value()
}

/// Binomial coefficient `C(a, b)`; exact for `a <= 60`.
pub fn binomial(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(Error::Domain(format!("binomial({a}, {b}) requires b <= a")));
    }
    let b = b.min(a - b);
    if a <= EXACT_BINOMIAL_LIMIT {
        let mut c: u128 = 1;
        for i in 0..b {
            c = c * u128::from(a - i) / u128::from(i + 1);
        }
        return Ok(c as f64);
    }
    let lf = |n: u64| ln_gamma_unchecked(n as f64 + 1.0);
    Ok((lf(a) - lf(b) - lf(a - b)).exp().round())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// ln n! by summing logs of the integers, independent of the library path.
    fn ln_fact_oracle(n: u64) -> f64 {
        (1..=n).map(|j| (j as f64).ln()).sum()
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!(rel(ln_gamma(0.5).unwrap(), half) < 1e-14);
        assert!(rel(ln_gamma(10.0).unwrap(), 362_880f64.ln()) < 1e-15);
        assert!(rel(ln_gamma(10.0).unwrap(), 12.801_827_480_081_467) < 1e-15);
    }

    #[test]
    fn ln_gamma_matches_factorials_through_the_stirling_branch() {
        for n in [70u64, 100, 170, 500, 1000, 10_000, 1_000_000] {
            let got = ln_gamma((n + 1) as f64).unwrap();
            assert!(rel(got, ln_fact_oracle(n)) < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        for n in 0u64..40 {
            let expect = ln_fact_oracle(2 * n) + 0.5 * std::f64::consts::PI.ln()
                - (n as f64) * 4f64.ln()
                - ln_fact_oracle(n);
            let got = ln_gamma(n as f64 + 0.5).unwrap();
            assert!(
                (got - expect).abs() <= 1e-13 * expect.abs().max(1.0),
                "n = {n}"
            );
        }
    }

    #[test]
    fn ln_gamma_recurrence_on_a_grid() {
        // ln Γ(x+1) - ln Γ(x) = ln x, away from the zeros of ln Γ.
        let mut x = 0.25;
        while x < 1e6 {
            let lhs = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap();
            let scale = ln_gamma(x + 1.0).unwrap().abs().max(1.0);
            assert!((lhs - x.ln()).abs() <= 1e-13 * scale, "x = {x}");
            x *= 1.37;
        }
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio(0, 3.7), 1.0);
        assert_eq!(gamma_ratio(3, 1.0), 6.0);
        assert_eq!(gamma_ratio(2, 0.5), 0.75);
    }

    #[test]
    fn gamma_ratio_switches_to_log_space_smoothly() {
        for twok in [0.5, 1.0, 1.5, 3.0] {
            let direct: f64 = (0..80).map(|j| twok + j as f64).product();
            assert!(rel(gamma_ratio(80, twok), direct) < 1e-12);
            assert!(rel(gamma_ratio(64, twok), pochhammer(twok, 64)) < 1e-12);
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(123.4, 0), 1.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
    }

    #[test]
    fn hyp2f1_examples() {
        assert_eq!(hyp2f1_terminating(0, 7, 1.3, 42.0).unwrap(), 1.0);
        for z in [-3.0, 0.0, 0.25, 7.0] {
            assert!((hyp2f1_terminating(1, 1, 1.0, z).unwrap() - (1.0 + z)).abs() < 1e-15);
        }
        assert_eq!(hyp2f1_terminating(2, 1, 0.5, -3.0).unwrap(), -11.0);
        assert!(hyp2f1_terminating(2, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        assert!(bessel_i(1.0, -1.0).is_err());
        // 64-term fixed summation with factorials formed as plain products.
        let oracle: f64 = (0..64)
            .map(|j: i32| {
                let fj: f64 = (1..=j).map(f64::from).product();
                let fj1: f64 = (1..=j + 1).map(f64::from).product();
                1.0 / (fj * fj1)
            })
            .sum();
        assert!(rel(bessel_i(1.0, 2.0).unwrap(), oracle) < 1e-14);
        assert!(rel(oracle, 1.590_636_854_637_329) < 1e-14);
    }

    #[test]
    fn bessel_half_order_closed_forms() {
        // I_{1/2}(x) = √(2/(πx)) sinh x,  I_{-1/2}(x) = √(2/(πx)) cosh x
        for x in [0.1, 1.0, 4.0, 20.0, 50.0] {
            let pre = (2.0 / (std::f64::consts::PI * x)).sqrt();
            assert!(rel(bessel_i(0.5, x).unwrap(), pre * x.sinh()) < 1e-12);
            assert!(rel(bessel_i(-0.5, x).unwrap(), pre * x.cosh()) < 1e-12);
        }
    }

    #[test]
    fn laguerre_examples() {
        let x = Complex64::new(0.7, -1.1);
        assert_eq!(laguerre(0, x), Complex64::new(1.0, 0.0));
        assert_eq!(
            laguerre(5, Complex64::new(0.0, 0.0)),
            Complex64::new(1.0, 0.0)
        );
        let expect = 1.0 - 2.0 * x + x * x / 2.0;
        assert!((laguerre(2, x) - expect).norm() < 1e-15);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 0).unwrap(), 1.0);
        assert_eq!(binomial(4, 2).unwrap(), 6.0);
        assert!(binomial(3, 4).is_err());
        // Pascal-triangle oracle.
        let mut row = vec![1u64];
        for _ in 0..40 {
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        assert_eq!(row[20], 137_846_528_820);
        for (b, &c) in row.iter().enumerate() {
            assert_eq!(binomial(40, b as u64).unwrap(), c as f64);
        }
        assert!(rel(binomial(80, 40).unwrap(), 1.075_072_087_333_361_8e23) < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let mut s = CompensatedSum::new();
        s.extend([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s.value(), 2.0);
    }
}

//! Bosonic realizations of su(1,1) and the photon states they induce.
//!
//! | realization | `K₊` | `K₋` | `K₀` | `|n,k⟩ ↦` |
//! |---|---|---|---|---|
//! | Holstein–Primakoff | `a†√(N+2k)` | `√(N+2k) a` | `N + k` | `|n⟩` |
//! | amplitude-squared, sector `j` | `½a†²` | `½a²` | `½(N+½)` | `|2n+j⟩`, `k = ¼ + j/2` |
//! | two-mode, `±p` | `a†b†` | `ab` | `½(N₁+N₂+1)` | `|n,n+p⟩` or `|n+p,n⟩`, `k = (p+1)/2` |

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{
    apply_k0, apply_kminus, apply_kplus, BargmannIndex, NonlinearFunction, StateVector,
};
use crate::displacement::DisplacementParams;
use crate::error::{Error, Result};
use crate::specfun::{hyp2f1_terminating, ln_factorial, ln_gamma};
use crate::states::{bgcs, pcs};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Single-mode photon-number amplitudes `amps[n] = ⟨n|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Domain(
                "Fock vector needs at least one amplitude".into(),
            ));
        }
        if let Some((index, c)) = amps.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: if c.re.is_finite() { c.im } else { c.re },
            });
        }
        Ok(Self { amps })
    }

    /// `|n⟩` in a space of `len` photon numbers.
    pub fn number_state(n: usize, len: usize) -> Result<Self> {
        if n >= len {
            return Err(Error::Domain(format!(
                "photon number {n} outside length {len}"
            )));
        }
        let mut amps = vec![ZERO; len];
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Number of retained photon numbers.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Photon-number distribution `P(n) = |amps[n]|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let len = self.dim().max(other.dim());
        (0..len)
            .map(|n| {
                let a = self.amps.get(n).copied().unwrap_or(ZERO);
                let b = other.amps.get(n).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `a|ψ⟩`.
    pub fn annihilate(&self) -> FockVector {
        let mut out = vec![ZERO; self.dim()];
        for n in 1..self.dim() {
            out[n - 1] = self.amps[n] * (n as f64).sqrt();
        }
        FockVector { amps: out }
    }

    /// `a†|ψ⟩`; the top amplitude is dropped.
    pub fn create(&self) -> FockVector {
        let mut out = vec![ZERO; self.dim()];
        for n in 1..self.dim() {
            out[n] = self.amps[n - 1] * (n as f64).sqrt();
        }
        FockVector { amps: out }
    }

    /// `f(N)|ψ⟩`.
    pub fn diag(&self, f: impl Fn(usize) -> f64) -> FockVector {
        FockVector {
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(n, c)| c * f(n))
                .collect(),
        }
    }

    pub fn stats(&self) -> PhotonStats {
        PhotonStats::from_distribution(self.probabilities().into_iter().enumerate())
    }
}

/// Two-mode amplitudes `⟨n₁,n₂|ψ⟩`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwoModeFockVector {
    amps: BTreeMap<(usize, usize), Complex64>,
}

impl TwoModeFockVector {
    pub fn new(amps: BTreeMap<(usize, usize), Complex64>) -> Result<Self> {
        if let Some((&(n1, _), c)) = amps.iter().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite {
                index: n1,
                value: if c.re.is_finite() { c.im } else { c.re },
            });
        }
        Ok(Self { amps })
    }

    pub fn get(&self, n1: usize, n2: usize) -> Complex64 {
        self.amps.get(&(n1, n2)).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Complex64)> {
        self.amps.iter()
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Distinct offsets `n₂ - n₁` that carry a nonzero amplitude.
    pub fn diagonals(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self
            .amps
            .iter()
            .filter(|(_, c)| **c != ZERO)
            .map(|(&(a, b), _)| b as i64 - a as i64)
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn inner(&self, other: &TwoModeFockVector) -> Complex64 {
        self.amps
            .iter()
            .map(|(key, a)| a.conj() * other.get(key.0, key.1))
            .sum()
    }

    pub fn max_abs_diff(&self, other: &TwoModeFockVector) -> f64 {
        let a = self
            .amps
            .iter()
            .map(|(key, v)| (v - other.get(key.0, key.1)).norm());
        let b = other
            .amps
            .iter()
            .map(|(key, v)| (v - self.get(key.0, key.1)).norm());
        a.chain(b).fold(0.0, f64::max)
    }

    /// `ab|ψ⟩`.
    pub fn apply_ab(&self) -> TwoModeFockVector {
        let mut out = BTreeMap::new();
        for (&(n1, n2), c) in &self.amps {
            if n1 > 0 && n2 > 0 {
                *out.entry((n1 - 1, n2 - 1)).or_insert(ZERO) += c * ((n1 * n2) as f64).sqrt();
            }
        }
        TwoModeFockVector { amps: out }
    }

    /// `a†b†|ψ⟩`.
    pub fn apply_adag_bdag(&self) -> TwoModeFockVector {
        let mut out = BTreeMap::new();
        for (&(n1, n2), c) in &self.amps {
            *out.entry((n1 + 1, n2 + 1)).or_insert(ZERO) +=
                c * (((n1 + 1) * (n2 + 1)) as f64).sqrt();
        }
        TwoModeFockVector { amps: out }
    }

    /// `f(N₁, N₂)|ψ⟩`.
    pub fn diag(&self, f: impl Fn(usize, usize) -> f64) -> TwoModeFockVector {
        TwoModeFockVector {
            amps: self
                .amps
                .iter()
                .map(|(&(a, b), c)| ((a, b), c * f(a, b)))
                .collect(),
        }
    }

    /// Statistics of the total photon number `N₁ + N₂`.
    pub fn stats(&self) -> PhotonStats {
        PhotonStats::from_distribution(self.amps.iter().map(|(&(a, b), c)| (a + b, c.norm_sqr())))
    }
}

/// Even (`j = 0`) or odd (`j = 1`) Fock sector of the amplitude-squared realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Even,
    Odd,
}

impl Sector {
    pub fn from_j(j: u8) -> Result<Self> {
        match j {
            0 => Ok(Sector::Even),
            1 => Ok(Sector::Odd),
            _ => Err(Error::Domain(format!(
                "sector index must be 0 or 1, got {j}"
            ))),
        }
    }

    pub fn j(self) -> usize {
        match self {
            Sector::Even => 0,
            Sector::Odd => 1,
        }
    }

    pub fn k(self) -> BargmannIndex {
        BargmannIndex::new(0.25 + 0.5 * self.j() as f64).expect("positive")
    }
}

/// Which mode carries the `p` extra photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    /// `|n, n+p⟩`
    Plus,
    /// `|n+p, n⟩`
    Minus,
}

impl PairSign {
    fn place(self, n: usize, p: usize) -> (usize, usize) {
        match self {
            PairSign::Plus => (n, n + p),
            PairSign::Minus => (n + p, n),
        }
    }
}

impl fmt::Display for PairSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairSign::Plus => "+",
            PairSign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealizationTag {
    HolsteinPrimakoff(BargmannIndex),
    AmplitudeSquared(Sector),
    TwoMode { p: usize, sign: PairSign },
}

impl RealizationTag {
    pub fn k(&self) -> BargmannIndex {
        match *self {
            RealizationTag::HolsteinPrimakoff(k) => k,
            RealizationTag::AmplitudeSquared(sector) => sector.k(),
            RealizationTag::TwoMode { p, .. } => {
                BargmannIndex::new(0.5 * (p as f64 + 1.0)).expect("positive")
            }
        }
    }
}

/// Result of [`map_to_fock`].
#[derive(Debug, Clone, PartialEq)]
pub enum MappedState {
    Single(FockVector),
    TwoMode(TwoModeFockVector),
}

impl MappedState {
    pub fn norm_sqr(&self) -> f64 {
        match self {
            MappedState::Single(f) => f.norm_sqr(),
            MappedState::TwoMode(t) => t.norm_sqr(),
        }
    }

    pub fn inner(&self, other: &MappedState) -> Result<Complex64> {
        match (self, other) {
            (MappedState::Single(a), MappedState::Single(b)) => Ok(a.inner(b)),
            (MappedState::TwoMode(a), MappedState::TwoMode(b)) => Ok(a.inner(b)),
            _ => Err(Error::Domain(
                "cannot pair a single-mode with a two-mode state".into(),
            )),
        }
    }

    pub fn max_abs_diff(&self, other: &MappedState) -> Result<f64> {
        match (self, other) {
            (MappedState::Single(a), MappedState::Single(b)) => Ok(a.max_abs_diff(b)),
            (MappedState::TwoMode(a), MappedState::TwoMode(b)) => Ok(a.max_abs_diff(b)),
            _ => Err(Error::Domain(
                "cannot compare a single-mode with a two-mode state".into(),
            )),
        }
    }

    pub fn stats(&self) -> PhotonStats {
        match self {
            MappedState::Single(f) => f.stats(),
            MappedState::TwoMode(t) => t.stats(),
        }
    }
}

fn check_k(s: &StateVector, tag: &RealizationTag) -> Result<()> {
    let (state_k, tag_k) = (s.k().value(), tag.k().value());
    if state_k != tag_k {
        return Err(Error::IndexMismatch { state_k, tag_k });
    }
    Ok(())
}

/// Re-indexes abstract coefficients as photon-number amplitudes.
///
/// The amplitude-squared map uses a Fock space of `2·dim` photon numbers.
pub fn map_to_fock(s: &StateVector, tag: RealizationTag) -> Result<MappedState> {
    check_k(s, &tag)?;
    Ok(match tag {
        RealizationTag::HolsteinPrimakoff(_) => MappedState::Single(FockVector {
            amps: s.coeffs().to_vec(),
        }),
        RealizationTag::AmplitudeSquared(sector) => {
            let j = sector.j();
            let mut amps = vec![ZERO; 2 * s.dim()];
            for (n, c) in s.coeffs().iter().enumerate() {
                amps[2 * n + j] = *c;
            }
            MappedState::Single(FockVector { amps })
        }
        RealizationTag::TwoMode { p, sign } => MappedState::TwoMode(TwoModeFockVector {
            amps: s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| (sign.place(n, p), *c))
                .collect(),
        }),
    })
}

fn expect_single(m: MappedState) -> FockVector {
    match m {
        MappedState::Single(f) => f,
        MappedState::TwoMode(_) => unreachable!("single-mode tag"),
    }
}

fn expect_two_mode(m: MappedState) -> TwoModeFockVector {
    match m {
        MappedState::TwoMode(t) => t,
        MappedState::Single(_) => unreachable!("two-mode tag"),
    }
}

/// One of the three su(1,1) generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Raise,
    Lower,
    Weight,
}

/// Applies a generator through its photon-operator form.
pub fn apply_fock_generator(
    tag: RealizationTag,
    g: Generator,
    state: &MappedState,
) -> Result<MappedState> {
    match (tag, state) {
        (RealizationTag::HolsteinPrimakoff(k), MappedState::Single(f)) => {
            let twok = k.twice();
            let root = |n: usize| (n as f64 + twok).sqrt();
            Ok(MappedState::Single(match g {
                Generator::Raise => f.diag(root).create(),
                Generator::Lower => f.annihilate().diag(root),
                Generator::Weight => f.diag(|n| n as f64 + k.value()),
            }))
        }
        (RealizationTag::AmplitudeSquared(_), MappedState::Single(f)) => {
            Ok(MappedState::Single(match g {
                Generator::Raise => f.create().create().diag(|_| 0.5),
                Generator::Lower => f.annihilate().annihilate().diag(|_| 0.5),
                Generator::Weight => f.diag(|n| 0.5 * (n as f64 + 0.5)),
            }))
        }
        (RealizationTag::TwoMode { .. }, MappedState::TwoMode(t)) => {
            Ok(MappedState::TwoMode(match g {
                Generator::Raise => t.apply_adag_bdag(),
                Generator::Lower => t.apply_ab(),
                Generator::Weight => t.diag(|a, b| 0.5 * (a + b + 1) as f64),
            }))
        }
        _ => Err(Error::Domain(
            "realization tag does not match the mode count of the state".into(),
        )),
    }
}

/// Largest deviation between photon-operator actions on mapped basis states
/// `|n,k⟩`, `n ≤ dim-2`, and the mapped abstract actions.
pub fn realization_residual(tag: RealizationTag, dim: usize) -> Result<f64> {
    if dim < 3 {
        return Err(Error::Domain(format!(
            "realization check needs dim >= 3, got {dim}"
        )));
    }
    let k = tag.k();
    let mut worst = 0.0f64;
    for n in 0..=dim - 2 {
        let basis = StateVector::basis(k, n, dim)?;
        let mapped = map_to_fock(&basis, tag)?;
        for (g, abstract_image) in [
            (Generator::Raise, apply_kplus(&basis)),
            (Generator::Lower, apply_kminus(&basis)),
            (Generator::Weight, apply_k0(&basis)),
        ] {
            let fock = apply_fock_generator(tag, g, &mapped)?;
            let expect = map_to_fock(&abstract_image, tag)?;
            worst = worst.max(fock.max_abs_diff(&expect)?);
        }
    }
    Ok(worst)
}

/// Negative binomial state
/// `(1-|α|²)^{M/2} √C(M+n-1, n) α^n`, for real `M > 0`.
pub fn nbs(alpha: Complex64, big_m: f64, dim: usize) -> Result<FockVector> {
    if !(big_m > 0.0) || !big_m.is_finite() {
        return Err(Error::Domain(format!(
            "negative binomial state needs M > 0, got {big_m}"
        )));
    }
    if dim == 0 {
        return Err(Error::Domain("dim must be positive".into()));
    }
    let a = alpha.norm();
    if !(a < 1.0) {
        return Err(Error::Domain(format!(
            "negative binomial state needs |alpha| < 1, got {a}"
        )));
    }
    if a == 0.0 {
        return FockVector::number_state(0, dim);
    }
    let head = 0.5 * big_m * (-a * a).ln_1p();
    let ln_gamma_m = ln_gamma(big_m)?;
    let theta = alpha.arg();
    let mut amps = Vec::with_capacity(dim);
    for n in 0..dim {
        let ln_binom = ln_gamma(big_m + n as f64)? - ln_gamma_m - ln_factorial(n);
        let ln_mag = head + 0.5 * ln_binom + n as f64 * a.ln();
        amps.push(Complex64::from_polar(ln_mag.exp(), n as f64 * theta));
    }
    FockVector::new(amps)
}

/// `‖(N+M)^{-1/2} a|ψ⟩ - α|ψ⟩‖` over photon numbers `0..dim-1`.
pub fn nbs_ladder_residual(f: &FockVector, alpha: Complex64, big_m: f64) -> f64 {
    let lowered = f.annihilate();
    (0..f.dim() - 1)
        .map(|n| (lowered.amps[n] / (n as f64 + big_m).sqrt() - alpha * f.amps[n]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `exp(½ξa†² - ½ξ*a²)|0⟩` over `2·dim` photon numbers.
pub fn squeezed_vacuum(p: &DisplacementParams, dim: usize) -> Result<FockVector> {
    squeezed(p, Sector::Even, dim)
}

/// `exp(½ξa†² - ½ξ*a²)|1⟩` over `2·dim` photon numbers.
pub fn squeezed_first(p: &DisplacementParams, dim: usize) -> Result<FockVector> {
    squeezed(p, Sector::Odd, dim)
}

fn squeezed(p: &DisplacementParams, sector: Sector, dim: usize) -> Result<FockVector> {
    let s = pcs(p.alpha(), sector.k(), dim)?;
    Ok(expect_single(map_to_fock(
        &s,
        RealizationTag::AmplitudeSquared(sector),
    )?))
}

/// Matrix elements of the single-mode squeeze operator within sector `j`,
/// written with explicit factorials:
/// `(-1)^m/(m! n!) √((2n+j)!(2m+j)!/cosh^{1+2j} r) e^{i(n-m)θ} (½tanh r)^{m+n}
/// ₂F₁(-m,-n; j+½; -1/sinh² r)`.
pub fn squeeze_sector_matrix_element(
    n: usize,
    m: usize,
    sector: Sector,
    p: &DisplacementParams,
) -> Result<Complex64> {
    let r = p.r();
    if !(r > 0.0) {
        return Err(Error::Domain(
            "squeeze-sector matrix elements need r > 0".into(),
        ));
    }
    let j = sector.j();
    let c = j as f64 + 0.5;
    let z = -1.0 / r.sinh().powi(2);
    let f = hyp2f1_terminating(m, n, c, z)?;
    let ln_mag = 0.5
        * (ln_factorial(2 * n + j) + ln_factorial(2 * m + j) - (1 + 2 * j) as f64 * r.cosh().ln())
        - ln_factorial(n)
        - ln_factorial(m)
        + (m + n) as f64 * (0.5 * r.tanh()).ln();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(
        sign * f * ln_mag.exp(),
        (n as f64 - m as f64) * p.theta(),
    ))
}

/// `exp(ξa†b† - ξ*ab)` applied to `|0,p⟩` or `|p,0⟩`.
pub fn two_mode_squeezed_vacuum(
    p: &DisplacementParams,
    pair_p: usize,
    sign: PairSign,
    dim: usize,
) -> Result<TwoModeFockVector> {
    let tag = RealizationTag::TwoMode { p: pair_p, sign };
    let s = pcs(p.alpha(), tag.k(), dim)?;
    Ok(expect_two_mode(map_to_fock(&s, tag)?))
}

/// Pair coherent state: eigenvector of `ab` on the `±p` diagonal.
pub fn pair_coherent(
    alpha: Complex64,
    pair_p: usize,
    sign: PairSign,
    dim: usize,
) -> Result<TwoModeFockVector> {
    let tag = RealizationTag::TwoMode { p: pair_p, sign };
    let s = bgcs(alpha, tag.k(), dim)?;
    Ok(expect_two_mode(map_to_fock(&s, tag)?))
}

/// `‖f(N)a²|ψ⟩ - α|ψ⟩‖` over photon numbers `0..dim-2`.
pub fn two_photon_nlcs_residual(psi: &FockVector, f: &NonlinearFunction, alpha: Complex64) -> f64 {
    let lowered = psi.annihilate().annihilate();
    (0..psi.dim().saturating_sub(2))
        .map(|n| (lowered.amps[n] * f.eval(n) - alpha * psi.amps[n]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖f(N₁,N₂)ab|ψ⟩ - α|ψ⟩‖` over stored entries whose `(n₁+1, n₂+1)`
/// neighbour is also stored.
pub fn two_mode_nlcs_residual(
    t: &TwoModeFockVector,
    f: impl Fn(usize, usize) -> f64,
    alpha: Complex64,
) -> f64 {
    let lowered = t.apply_ab();
    t.amps
        .iter()
        .filter(|(&(a, b), _)| t.amps.contains_key(&(a + 1, b + 1)))
        .map(|(&(a, b), c)| (lowered.get(a, b) * f(a, b) - alpha * c).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Moments of a photon-number distribution.
///
/// The distribution is renormalized by its total weight before taking
/// moments. `mandel_q` is `None` when the mean vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStats {
    pub mean: f64,
    pub variance: f64,
    pub mandel_q: Option<f64>,
    pub norm_deficit: f64,
}

impl PhotonStats {
    pub fn from_distribution(dist: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let (mut total, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (n, p) in dist {
            let n = n as f64;
            total += p;
            m1 += n * p;
            m2 += n * n * p;
        }
        let mean = m1 / total;
        let variance = m2 / total - mean * mean;
        let mandel_q = if mean > 0.0 {
            Some((variance - mean) / mean)
        } else {
            None
        };
        Self {
            mean,
            variance,
            mandel_q,
            norm_deficit: 1.0 - total,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displacement::matrix_element_sum;

    fn k(v: f64) -> BargmannIndex {
        BargmannIndex::new(v).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn index_maps() {
        let b = StateVector::basis(k(0.7), 3, 8).unwrap();
        let hp = expect_single(map_to_fock(&b, RealizationTag::HolsteinPrimakoff(k(0.7))).unwrap());
        assert_eq!(hp, FockVector::number_state(3, 8).unwrap());

        let b = StateVector::basis(k(0.25), 3, 8).unwrap();
        let sq =
            expect_single(map_to_fock(&b, RealizationTag::AmplitudeSquared(Sector::Even)).unwrap());
        assert_eq!(sq, FockVector::number_state(6, 16).unwrap());

        let b = StateVector::basis(k(1.5), 3, 8).unwrap();
        let tm = expect_two_mode(
            map_to_fock(
                &b,
                RealizationTag::TwoMode {
                    p: 2,
                    sign: PairSign::Plus,
                },
            )
            .unwrap(),
        );
        assert_eq!(tm.get(3, 5), c(1.0, 0.0));
        assert_eq!(tm.diagonals(), vec![2]);
        let tm = expect_two_mode(
            map_to_fock(
                &b,
                RealizationTag::TwoMode {
                    p: 2,
                    sign: PairSign::Minus,
                },
            )
            .unwrap(),
        );
        assert_eq!(tm.get(5, 3), c(1.0, 0.0));

        assert!(matches!(
            map_to_fock(&b, RealizationTag::AmplitudeSquared(Sector::Odd)),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn map_preserves_inner_products() {
        let kk = k(0.75);
        let a = pcs(c(0.3, 0.2), kk, 64).unwrap();
        let b = bgcs(c(-0.5, 0.9), kk, 64).unwrap();
        let expect = a.inner(&b);
        for tag in [
            RealizationTag::HolsteinPrimakoff(kk),
            RealizationTag::AmplitudeSquared(Sector::Odd),
        ] {
            let got = map_to_fock(&a, tag)
                .unwrap()
                .inner(&map_to_fock(&b, tag).unwrap())
                .unwrap();
            assert!((got - expect).norm() < 1e-15);
        }
        let k1 = k(1.0);
        let tag = RealizationTag::TwoMode {
            p: 1,
            sign: PairSign::Minus,
        };
        let a = pcs(c(0.3, 0.2), k1, 64).unwrap();
        let b = bgcs(c(-0.5, 0.9), k1, 64).unwrap();
        let got = map_to_fock(&a, tag)
            .unwrap()
            .inner(&map_to_fock(&b, tag).unwrap())
            .unwrap();
        assert!((got - a.inner(&b)).norm() < 1e-15);
    }

    #[test]
    fn nbs_examples() {
        assert_eq!(
            nbs(ZERO, 2.0, 8).unwrap(),
            FockVector::number_state(0, 8).unwrap()
        );
        let f = nbs(c(0.5, 0.0), 1.0, 64).unwrap();
        for (n, p) in f.probabilities().iter().enumerate().take(40) {
            assert!((p - 0.75 * 0.25f64.powi(n as i32)).abs() < 1e-15);
        }
        let f = nbs(c(0.5, 0.0), 2.0, 128).unwrap();
        assert!((f.stats().mean - 2.0 / 3.0).abs() < 1e-12);
        assert!(nbs(c(1.0, 0.0), 2.0, 8).is_err());
        assert!(nbs(c(0.1, 0.0), 0.0, 8).is_err());
    }

    #[test]
    fn nbs_is_mapped_perelomov_state() {
        for m in [0.5, 1.0, 3.0] {
            let alpha = c(0.4, -0.5);
            let f = nbs(alpha, m, 128).unwrap();
            let kk = k(m / 2.0);
            let s = pcs(alpha, kk, 128).unwrap();
            let mapped =
                expect_single(map_to_fock(&s, RealizationTag::HolsteinPrimakoff(kk)).unwrap());
            assert!(f.max_abs_diff(&mapped) < 1e-12);
            assert!(nbs_ladder_residual(&f, alpha, m) < 1e-9);
        }
    }

    #[test]
    fn coherent_state_is_not_an_nbs() {
        // Glauber amplitudes e^{-|α|²/2} α^n/√n!
        let alpha = 0.5f64;
        let amps = (0..64)
            .map(|n| {
                c(
                    (-alpha * alpha / 2.0 + n as f64 * alpha.ln() - 0.5 * ln_factorial(n)).exp(),
                    0.0,
                )
            })
            .collect();
        let f = FockVector::new(amps).unwrap();
        assert!(nbs_ladder_residual(&f, c(alpha, 0.0), 2.0) > 1e-3);
        assert_eq!(
            nbs_ladder_residual(&FockVector::number_state(0, 8).unwrap(), ZERO, 2.0),
            0.0
        );
    }

    #[test]
    fn squeezed_states() {
        let id = DisplacementParams::identity();
        assert_eq!(
            squeezed_vacuum(&id, 8).unwrap(),
            FockVector::number_state(0, 16).unwrap()
        );
        assert_eq!(
            squeezed_first(&id, 8).unwrap(),
            FockVector::number_state(1, 16).unwrap()
        );

        let p = DisplacementParams::new(0.5, 0.0).unwrap();
        let sv = squeezed_vacuum(&p, 128).unwrap();
        let ratio = sv.amps()[2].norm() / sv.amps()[0].norm();
        assert!((ratio - 0.5f64.tanh() / 2f64.sqrt()).abs() < 1e-15);
        assert!((sv.stats().mean - 0.5f64.sinh().powi(2)).abs() < 1e-12);

        let p = DisplacementParams::new(0.8, 1.2).unwrap();
        let alpha = p.alpha();
        let sv = squeezed_vacuum(&p, 128).unwrap();
        let sf = squeezed_first(&p, 128).unwrap();
        assert!(sv.amps().iter().skip(1).step_by(2).all(|a| *a == ZERO));
        assert!(sf.amps().iter().step_by(2).all(|a| *a == ZERO));
        let sv_f = NonlinearFunction::new("1/(n+1)", |n| 1.0 / (n as f64 + 1.0));
        let sf_f = NonlinearFunction::new("1/(n+2)", |n| 1.0 / (n as f64 + 2.0));
        assert!(two_photon_nlcs_residual(&sv, &sv_f, alpha) < 1e-9);
        assert!(two_photon_nlcs_residual(&sf, &sf_f, alpha) < 1e-9);
        assert_eq!(
            two_photon_nlcs_residual(&FockVector::number_state(0, 8).unwrap(), &sv_f, ZERO),
            0.0
        );
    }

    #[test]
    fn squeezed_vacuum_moduli_match_series() {
        let (r, theta) = (0.7, -0.9);
        let p = DisplacementParams::new(r, theta).unwrap();
        let sv = squeezed_vacuum(&p, 64).unwrap();
        for n in 0..30 {
            let expect = (n as f64 * r.tanh().ln() + 0.5 * ln_factorial(2 * n)
                - n as f64 * 2f64.ln()
                - ln_factorial(n)
                - 0.5 * r.cosh().ln())
            .exp();
            assert!((sv.amps()[2 * n].norm() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn squeeze_sector_examples() {
        let p = DisplacementParams::new(0.6, 0.4).unwrap();
        let e = squeeze_sector_matrix_element(0, 0, Sector::Even, &p).unwrap();
        assert!((e - c(1.0 / 0.6f64.cosh().sqrt(), 0.0)).norm() < 1e-15);
        let o = squeeze_sector_matrix_element(0, 0, Sector::Odd, &p).unwrap();
        assert!((o - c(0.6f64.cosh().powf(-1.5), 0.0)).norm() < 1e-15);
        for sector in [Sector::Even, Sector::Odd] {
            for r in [0.1, 0.7, 1.5] {
                let p = DisplacementParams::new(r, 2.0).unwrap();
                for n in 0..=10 {
                    for m in 0..=10 {
                        let a = squeeze_sector_matrix_element(n, m, sector, &p).unwrap();
                        let b = matrix_element_sum(n, m, sector.k(), &p);
                        assert!((a - b).norm() <= 1e-9 * b.norm().max(1e-300), "{n} {m} {r}");
                    }
                }
            }
        }
        assert!(
            squeeze_sector_matrix_element(0, 0, Sector::Even, &DisplacementParams::identity())
                .is_err()
        );
    }

    #[test]
    fn two_mode_states() {
        let id = DisplacementParams::identity();
        let v = two_mode_squeezed_vacuum(&id, 2, PairSign::Minus, 8).unwrap();
        assert_eq!(v.get(2, 0), c(1.0, 0.0));
        assert!((v.norm_sqr() - 1.0).abs() < 1e-15);

        let p = DisplacementParams::new(0.5, 0.3).unwrap();
        let v = two_mode_squeezed_vacuum(&p, 0, PairSign::Plus, 128).unwrap();
        assert!((v.get(1, 1).norm() / v.get(0, 0).norm() - 0.5f64.tanh()).abs() < 1e-15);
        for n in 0..20 {
            let expect =
                Complex64::from_polar(0.5f64.tanh().powi(n as i32) / 0.5f64.cosh(), n as f64 * 0.3);
            assert!((v.get(n, n) - expect).norm() < 1e-14);
        }
        assert!(v.norm_deficit().abs() < 1e-12);
        for pp in [0, 1, 3] {
            let v = two_mode_squeezed_vacuum(&p, pp, PairSign::Plus, 128).unwrap();
            let f = |a: usize, b: usize| 2.0 / (a + b + pp + 2) as f64;
            assert!(two_mode_nlcs_residual(&v, f, p.alpha()) < 1e-9);
        }
    }

    #[test]
    fn pair_coherent_states() {
        let z = pair_coherent(ZERO, 1, PairSign::Plus, 8).unwrap();
        assert_eq!(z.get(0, 1), c(1.0, 0.0));
        let alpha = c(1.0, 0.0);
        let t = pair_coherent(alpha, 0, PairSign::Plus, 128).unwrap();
        assert!(two_mode_nlcs_residual(&t, |_, _| 1.0, alpha) < 1e-9);
        let s = bgcs(alpha, k(0.5), 128).unwrap();
        for n in 0..128 {
            assert_eq!(t.get(n, n), s.coeffs()[n]);
        }
    }

    #[test]
    fn photon_operators_reproduce_the_representation() {
        for tag in [
            RealizationTag::HolsteinPrimakoff(k(0.25)),
            RealizationTag::HolsteinPrimakoff(k(1.5)),
            RealizationTag::AmplitudeSquared(Sector::Even),
            RealizationTag::AmplitudeSquared(Sector::Odd),
            RealizationTag::TwoMode {
                p: 0,
                sign: PairSign::Plus,
            },
            RealizationTag::TwoMode {
                p: 3,
                sign: PairSign::Minus,
            },
        ] {
            assert!(realization_residual(tag, 64).unwrap() < 1e-12, "{tag:?}");
        }
    }

    #[test]
    fn stats_of_vacuum() {
        let s = FockVector::number_state(0, 4).unwrap().stats();
        assert_eq!(s.mean, 0.0);
        assert_eq!(s.mandel_q, None);
    }
}

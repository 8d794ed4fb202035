//! The invariant suite behind `su11 verify`.
//!
//! Dense-matrix checks (commutators, deformed-oscillator relations, the exponential oracle and
//! realization faithfulness) run at `min(dim, cap)` with the cap shown in the
//! `dim` column; everything else runs at the configured `dim`.

use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use su11::algebra::{
    casimir_residual, commutator_residuals, eigen_residual_lowering, gdo_residuals, mus_residual,
};
use su11::displacement::{
    displacement_oracle, matrix_element_hyp, matrix_element_sum, matrix_table, DisplacementParams,
};
use su11::realizations::{
    nbs, nbs_ladder_residual, pair_coherent, realization_residual, squeeze_sector_matrix_element,
    squeezed_first, squeezed_vacuum, two_mode_nlcs_residual, two_mode_squeezed_vacuum,
    two_photon_nlcs_residual, PairSign, RealizationTag, Sector,
};
use su11::states::{
    bgcs, dns, lps, lps_seed, lps_seed_closed_form, mus_eigenvalue, nlcs, nlcs_exponential, pcs,
    LpsParams,
};
use su11::{BargmannIndex, NonlinearFunction, StateVector};

use crate::{CliError, CliResult, VerifyArgs, VERSION};

pub const K_GRID: [f64; 6] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
pub const R_GRID: [f64; 3] = [0.1, 0.5, 1.0];

/// Cap for checks that build dense `dim × dim` matrices.
pub const ALGEBRA_DIM_CAP: usize = 128;
pub const ORACLE_DIM_CAP: usize = 256;
/// Full displacement tables are `dim × dim`; beyond this the unitarity check
/// would need gigabytes.
pub const TABLE_DIM_CAP: usize = 1024;

const EXACT_LIMIT: f64 = 1e-12;
const EIGEN_LIMIT: f64 = 1e-9;
const MATEL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Algebra,
    Gdo,
    Eigen,
    Nlcs,
    Matel,
    Dns,
    Lps,
    Sector,
    Realizations,
    Faithfulness,
}

impl Group {
    pub const ALL: [Group; 10] = [
        Group::Algebra,
        Group::Gdo,
        Group::Eigen,
        Group::Nlcs,
        Group::Matel,
        Group::Dns,
        Group::Lps,
        Group::Sector,
        Group::Realizations,
        Group::Faithfulness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Algebra => "algebra",
            Group::Gdo => "gdo",
            Group::Eigen => "eigen",
            Group::Nlcs => "nlcs",
            Group::Matel => "matel",
            Group::Dns => "dns",
            Group::Lps => "lps",
            Group::Sector => "sector",
            Group::Realizations => "realizations",
            Group::Faithfulness => "faithfulness",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub dim: usize,
    pub rs: Vec<f64>,
    pub only: Option<Group>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            dim: crate::DEFAULT_DIM,
            rs: R_GRID.to_vec(),
            only: None,
        }
    }
}

impl Config {
    pub fn from_args(a: &VerifyArgs) -> CliResult<Self> {
        let rs = match a.r {
            Some(r) if !(r >= 0.0 && r.is_finite()) => {
                return Err(CliError(format!("--r must be finite and >= 0, got {r}")))
            }
            Some(r) => vec![r],
            None => R_GRID.to_vec(),
        };
        Ok(Self {
            dim: a.dim,
            rs,
            only: a.only,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: Group,
    pub name: String,
    pub dim: usize,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

fn check(
    group: Group,
    name: String,
    dim: usize,
    limit: f64,
    f: impl FnOnce() -> su11::Result<f64>,
) -> Check {
    match f() {
        Ok(value) => Check {
            group,
            name,
            dim,
            value,
            limit,
            passed: value < limit,
            detail: None,
        },
        Err(e) => Check {
            group,
            name,
            dim,
            value: f64::NAN,
            limit,
            passed: false,
            detail: Some(e.to_string()),
        },
    }
}

/// Like [`check`] but the value must be exactly zero.
fn check_exact(
    group: Group,
    name: String,
    dim: usize,
    f: impl FnOnce() -> su11::Result<f64>,
) -> Check {
    let mut c = check(group, name, dim, f64::MIN_POSITIVE, f);
    c.passed = c.detail.is_none() && c.value == 0.0;
    c.limit = 0.0;
    c
}

fn k(v: f64) -> BargmannIndex {
    BargmannIndex::new(v).expect("grid values are positive")
}

fn converged(s: StateVector) -> su11::Result<StateVector> {
    if s.is_converged() {
        Ok(s)
    } else {
        Err(su11::Error::Truncation(format!(
            "top-level weight not below tail tolerance at dim {}",
            s.dim()
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<14}{:<52}{:>6}  {:>10}  {:>8}  status\n",
            "group", "check", "dim", "value", "limit"
        );
        for c in &self.checks {
            s.push_str(&format!(
                "{:<14}{:<52}{:>6}  {:>10.3e}  {:>8.1e}  {}",
                c.group.name(),
                c.name,
                c.dim,
                c.value,
                c.limit,
                if c.passed { "pass" } else { "FAIL" }
            ));
            if let Some(d) = &c.detail {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
        s.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            self.checks.len(),
            self.checks.len() - self.failed(),
            self.failed()
        ));
        s
    }

    pub fn to_json(&self, cfg: &Config) -> String {
        let data: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "group": c.group.name(),
                    "check": c.name,
                    "dim": c.dim,
                    "value": if c.value.is_finite() { json!(c.value) } else { Value::Null },
                    "limit": c.limit,
                    "passed": c.passed,
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = json!({
            "meta": {
                "command": "verify",
                "dim": cfg.dim,
                "r": cfg.rs,
                "only": cfg.only.map(Group::name),
                "checks": self.checks.len(),
                "failed": self.failed(),
                "version": VERSION,
            },
            "data": data,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn run(cfg: &Config) -> Report {
    let groups: Vec<Group> = match cfg.only {
        Some(g) => vec![g],
        None => Group::ALL.to_vec(),
    };
    let mut checks = Vec::new();
    for g in groups {
        checks.extend(match g {
            Group::Algebra => algebra(cfg),
            Group::Gdo => gdo(cfg),
            Group::Eigen => eigen(cfg),
            Group::Nlcs => nlcs_checks(cfg),
            Group::Matel => matel(cfg),
            Group::Dns => dns_checks(cfg),
            Group::Lps => lps_checks(cfg),
            Group::Sector => sector(cfg),
            Group::Realizations => realizations(cfg),
            Group::Faithfulness => faithfulness(cfg),
        });
    }
    Report { checks }
}

fn algebra(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim.min(ALGEBRA_DIM_CAP);
    let mut out = Vec::new();
    for kv in K_GRID {
        out.push(check(
            Group::Algebra,
            format!("commutators k={kv} (relative)"),
            dim,
            EXACT_LIMIT,
            || Ok(commutator_residuals(k(kv), dim)?.max().relative),
        ));
        out.push(check(
            Group::Algebra,
            format!("casimir k={kv} (relative)"),
            dim,
            EXACT_LIMIT,
            || {
                let scale = (dim as f64 + kv).powi(2);
                Ok(casimir_residual(k(kv), dim) / scale)
            },
        ));
    }
    out
}

fn gdo(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim.min(ALGEBRA_DIM_CAP);
    let mut out = Vec::new();
    for kv in K_GRID {
        out.push(check(
            Group::Gdo,
            format!("pcs alpha=0.5e^0.3i k={kv} (relative)"),
            dim,
            EXACT_LIMIT,
            || {
                let s = pcs(Complex64::from_polar(0.5, 0.3), k(kv), dim)?;
                Ok(gdo_residuals(&s)?.max().relative)
            },
        ));
        // Ratios c_n/c_{n-1} are formed from the coefficients, so |alpha| is
        // chosen large enough that none of them leave the normal range.
        out.push(check(
            Group::Gdo,
            format!("bgcs alpha=2i k={kv} (relative)"),
            dim,
            EXACT_LIMIT,
            || {
                let s = bgcs(Complex64::new(0.0, 2.0), k(kv), dim)?;
                Ok(gdo_residuals(&s)?.max().relative)
            },
        ));
    }
    out
}

fn eigen(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for kv in K_GRID {
        for a in [0.5, 0.8] {
            let alpha = Complex64::from_polar(a, 0.7);
            out.push(check(
                Group::Eigen,
                format!("pcs |alpha|={a} k={kv}"),
                dim,
                EIGEN_LIMIT,
                || {
                    let s = converged(pcs(alpha, k(kv), dim)?)?;
                    eigen_residual_lowering(&s, &NonlinearFunction::pcs_like(k(kv)), alpha)
                },
            ));
        }
        for a in [1.0, 2.0] {
            let alpha = Complex64::from_polar(a, -1.1);
            out.push(check(
                Group::Eigen,
                format!("bgcs |alpha|={a} k={kv}"),
                dim,
                EIGEN_LIMIT,
                || {
                    let s = converged(bgcs(alpha, k(kv), dim)?)?;
                    eigen_residual_lowering(&s, &NonlinearFunction::bgcs_like(), alpha)
                },
            ));
        }
    }
    out
}

/// Rational presets `G(n) = (n+a)/(n+b)` used for the exponential-form check.
pub const RATIONAL_PRESETS: [(f64, f64); 5] =
    [(1.0, 2.0), (0.5, 3.0), (2.0, 1.0), (3.0, 0.5), (0.25, 4.0)];

fn nlcs_checks(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for kv in K_GRID {
        let kk = k(kv);
        out.push(check(
            Group::Nlcs,
            format!("G=1/(n+2k) equals pcs k={kv}"),
            dim,
            EXACT_LIMIT,
            || {
                let alpha = Complex64::new(0.4, 0.3);
                Ok(nlcs(alpha, kk, &NonlinearFunction::pcs_like(kk), dim)?
                    .max_abs_diff(&pcs(alpha, kk, dim)?))
            },
        ));
        out.push(check(
            Group::Nlcs,
            format!("G=1 equals bgcs k={kv}"),
            dim,
            EXACT_LIMIT,
            || {
                let alpha = Complex64::new(-0.6, 1.0);
                Ok(nlcs(alpha, kk, &NonlinearFunction::bgcs_like(), dim)?
                    .max_abs_diff(&bgcs(alpha, kk, dim)?))
            },
        ));
    }
    for (a, b) in RATIONAL_PRESETS {
        out.push(check(
            Group::Nlcs,
            format!("exponential form rational:{a},{b}"),
            dim,
            1e-10,
            || {
                let kk = k(1.0);
                let g = NonlinearFunction::rational(a, b);
                let alpha = Complex64::new(0.3, 0.5);
                Ok(nlcs_exponential(alpha, kk, &g, dim)?.max_abs_diff(&nlcs(alpha, kk, &g, dim)?))
            },
        ));
    }
    out
}

fn matel(cfg: &Config) -> Vec<Check> {
    let odim = cfg.dim.min(ORACLE_DIM_CAP);
    let mut cases = Vec::new();
    for kv in K_GRID {
        for &r in &cfg.rs {
            for theta in [0.0, 1.3] {
                cases.push((kv, r, theta));
            }
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|&(kv, r, theta)| {
            let kk = k(kv);
            let label = format!("k={kv} r={r} theta={theta}");
            let p = DisplacementParams::new(r, theta);
            let top = 21.min(odim);
            let pair = |name: &str, f: &dyn Fn(usize, usize) -> su11::Result<f64>| {
                check(
                    Group::Matel,
                    format!("{name} {label}"),
                    odim,
                    MATEL_LIMIT,
                    || {
                        let mut worst = 0.0f64;
                        for n in 0..top {
                            for m in 0..top {
                                worst = worst.max(f(n, m)?);
                            }
                        }
                        Ok(worst)
                    },
                )
            };
            let p = match p {
                Ok(p) => p,
                Err(e) => {
                    let err = e.clone();
                    return vec![check(
                        Group::Matel,
                        format!("params {label}"),
                        odim,
                        MATEL_LIMIT,
                        move || Err(err),
                    )];
                }
            };
            let oracle = displacement_oracle(kk, &p, odim);
            let table = matrix_table(kk, &p, odim);
            let hyp = |n, m| {
                if r == 0.0 {
                    Ok(matrix_element_sum(n, m, kk, &p))
                } else {
                    matrix_element_hyp(n, m, kk, &p)
                }
            };
            vec![
                pair("sum vs hyp", &|n, m| {
                    Ok((matrix_element_sum(n, m, kk, &p) - hyp(n, m)?).norm())
                }),
                pair("sum vs oracle", &|n, m| {
                    let o = oracle.as_ref().map_err(Clone::clone)?;
                    Ok((matrix_element_sum(n, m, kk, &p) - o.get(n, m)).norm())
                }),
                pair("hyp vs oracle", &|n, m| {
                    let o = oracle.as_ref().map_err(Clone::clone)?;
                    Ok((hyp(n, m)? - o.get(n, m)).norm())
                }),
                pair("table vs sum", &|n, m| {
                    Ok((table.get(n, m) - matrix_element_sum(n, m, kk, &p)).norm())
                }),
            ]
        })
        .collect()
}

fn dns_checks(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for kv in K_GRID {
        let kk = k(kv);
        for &r in &cfg.rs {
            out.push(check(
                Group::Dns,
                format!("m=0 equals pcs k={kv} r={r}"),
                dim,
                1e-10,
                || {
                    let p = DisplacementParams::new(r, 0.6)?;
                    Ok(dns(&p, 0, kk, dim)?.max_abs_diff(&pcs(p.alpha(), kk, dim)?))
                },
            ));
        }
        out.push(check_exact(
            Group::Dns,
            format!("r=0 gives number state k={kv}"),
            dim,
            || {
                let m = 3.min(dim - 1);
                Ok(dns(&DisplacementParams::identity(), m, kk, dim)?
                    .max_abs_diff(&StateVector::basis(kk, m, dim)?))
            },
        ));
    }
    let tdim = dim.min(TABLE_DIM_CAP);
    let block = (tdim / 8).max(1);
    for &r in cfg.rs.iter().filter(|r| **r <= 0.8) {
        for kv in K_GRID {
            out.push(check(
                Group::Dns,
                format!("unitarity block={block} k={kv} r={r}"),
                tdim,
                1e-8,
                || {
                    let t = matrix_table(k(kv), &DisplacementParams::new(r, -1.0)?, tdim);
                    let worst_deficit = t.column_deficits()[..block]
                        .iter()
                        .fold(0.0f64, |a, d| a.max(d.abs()));
                    Ok(t.unitarity_residual(block).max(worst_deficit))
                },
            ));
        }
    }
    out
}

fn lps_checks(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for kv in [0.5, 1.0] {
        for r in [0.2, 0.5] {
            for order in [0usize, 1, 2, 4] {
                let label = format!("M={order} r={r} k={kv}");
                out.push(check(
                    Group::Lps,
                    format!("mus eigen-equation {label}"),
                    dim,
                    1e-8,
                    || {
                        let p = LpsParams::new(0.4, r, order, k(kv))?;
                        let s = lps(&p, dim)?;
                        let (mu, nu) = p.mus_coefficients();
                        Ok(mus_residual(&s, mu, nu, mus_eigenvalue(&s, mu, nu)))
                    },
                ));
                out.push(check(
                    Group::Lps,
                    format!("seed closed form {label}"),
                    dim,
                    EXACT_LIMIT,
                    || {
                        let p = LpsParams::new(0.4, r, order, k(kv))?;
                        Ok(lps_seed(&p, dim)?.max_abs_diff(&lps_seed_closed_form(&p, dim)?))
                    },
                ));
            }
        }
    }
    out
}

fn sector(_cfg: &Config) -> Vec<Check> {
    let mut out = Vec::new();
    for sector in [Sector::Even, Sector::Odd] {
        for r in [0.1, 0.5, 1.0, 1.5] {
            out.push(check(
                Group::Sector,
                format!("k={} r={r} n,m<=10 (relative)", sector.k()),
                11,
                1e-9,
                || {
                    let p = DisplacementParams::new(r, 0.8)?;
                    let mut worst = 0.0f64;
                    for n in 0..=10 {
                        for m in 0..=10 {
                            let a = squeeze_sector_matrix_element(n, m, sector, &p)?;
                            let b = matrix_element_sum(n, m, sector.k(), &p);
                            worst = worst.max((a - b).norm() / b.norm());
                        }
                    }
                    Ok(worst)
                },
            ));
        }
    }
    out
}

/// `(1-a²)^M (M)_n/n! a^{2n}` by the ratio recurrence.
fn negative_binomial_law(a: f64, big_m: f64, len: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(len);
    let mut v = (1.0 - a * a).powf(big_m);
    for n in 0..len {
        p.push(v);
        v *= (big_m + n as f64) / (n as f64 + 1.0) * a * a;
    }
    p
}

fn realizations(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    let g = Group::Realizations;
    for big_m in [1.0, 2.0, 3.5] {
        let alpha = Complex64::from_polar(0.5, 0.4);
        out.push(check(
            g,
            format!("nbs law n<=40 M={big_m}"),
            dim,
            EXACT_LIMIT,
            || {
                let f = nbs(alpha, big_m, dim)?;
                let law = negative_binomial_law(0.5, big_m, 41.min(dim));
                Ok(law
                    .iter()
                    .zip(f.probabilities())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            },
        ));
        out.push(check(
            g,
            format!("nbs total probability M={big_m}"),
            dim,
            EXACT_LIMIT,
            || Ok(nbs(alpha, big_m, dim)?.norm_deficit().abs()),
        ));
        out.push(check(
            g,
            format!("nbs ladder M={big_m}"),
            dim,
            EIGEN_LIMIT,
            || Ok(nbs_ladder_residual(&nbs(alpha, big_m, dim)?, alpha, big_m)),
        ));
    }
    for &r in &cfg.rs {
        let theta = 0.9;
        let label = format!("r={r}");
        out.push(check(
            g,
            format!("squeezed vacuum ladder {label}"),
            dim,
            EIGEN_LIMIT,
            || {
                let p = DisplacementParams::new(r, theta)?;
                let f = squeezed_vacuum(&p, dim)?;
                let tail = f.amps()[2 * dim - 2].norm_sqr();
                if tail > su11::algebra::TAIL_TOL {
                    return Err(su11::Error::Truncation(format!(
                        "top even amplitude weight {tail:e}"
                    )));
                }
                let h = NonlinearFunction::new("1/(n+1)", |n| 1.0 / (n as f64 + 1.0));
                Ok(two_photon_nlcs_residual(&f, &h, p.alpha()))
            },
        ));
        out.push(check(
            g,
            format!("squeezed first ladder {label}"),
            dim,
            EIGEN_LIMIT,
            || {
                let p = DisplacementParams::new(r, theta)?;
                let f = squeezed_first(&p, dim)?;
                let tail = f.amps()[2 * dim - 1].norm_sqr();
                if tail > su11::algebra::TAIL_TOL {
                    return Err(su11::Error::Truncation(format!(
                        "top odd amplitude weight {tail:e}"
                    )));
                }
                let h = NonlinearFunction::new("1/(n+2)", |n| 1.0 / (n as f64 + 2.0));
                Ok(two_photon_nlcs_residual(&f, &h, p.alpha()))
            },
        ));
        out.push(check_exact(
            g,
            format!("squeezed parity {label}"),
            dim,
            || {
                let p = DisplacementParams::new(r, theta)?;
                let sv = squeezed_vacuum(&p, dim)?;
                let sf = squeezed_first(&p, dim)?;
                let odd = sv
                    .amps()
                    .iter()
                    .skip(1)
                    .step_by(2)
                    .map(|c| c.norm())
                    .fold(0.0, f64::max);
                let even = sf
                    .amps()
                    .iter()
                    .step_by(2)
                    .map(|c| c.norm())
                    .fold(0.0, f64::max);
                Ok(odd.max(even))
            },
        ));
        for pair_p in [0usize, 1, 2] {
            out.push(check(
                g,
                format!("two-mode squeezed ladder p={pair_p} {label}"),
                dim,
                EIGEN_LIMIT,
                || {
                    let p = DisplacementParams::new(r, theta)?;
                    let t = two_mode_squeezed_vacuum(&p, pair_p, PairSign::Plus, dim)?;
                    if t.norm_deficit().abs() > su11::algebra::NORMALIZATION_TOL {
                        return Err(su11::Error::Truncation(format!(
                            "norm deficit {:e}",
                            t.norm_deficit()
                        )));
                    }
                    Ok(two_mode_nlcs_residual(
                        &t,
                        |a, b| 2.0 / (a + b + pair_p + 2) as f64,
                        p.alpha(),
                    ))
                },
            ));
        }
    }
    for (pair_p, sign) in [
        (0usize, PairSign::Plus),
        (1, PairSign::Minus),
        (2, PairSign::Plus),
    ] {
        out.push(check(
            g,
            format!("pair coherent ab-eigen p={pair_p} sign={sign}"),
            dim,
            EIGEN_LIMIT,
            || {
                let alpha = Complex64::new(1.0, 0.0);
                Ok(two_mode_nlcs_residual(
                    &pair_coherent(alpha, pair_p, sign, dim)?,
                    |_, _| 1.0,
                    alpha,
                ))
            },
        ));
    }
    out
}

fn faithfulness(cfg: &Config) -> Vec<Check> {
    let dim = cfg.dim.min(ORACLE_DIM_CAP);
    let tags = [
        (
            "holstein-primakoff k=0.25",
            RealizationTag::HolsteinPrimakoff(k(0.25)),
        ),
        (
            "holstein-primakoff k=1",
            RealizationTag::HolsteinPrimakoff(k(1.0)),
        ),
        (
            "holstein-primakoff k=2",
            RealizationTag::HolsteinPrimakoff(k(2.0)),
        ),
        (
            "amplitude-squared even",
            RealizationTag::AmplitudeSquared(Sector::Even),
        ),
        (
            "amplitude-squared odd",
            RealizationTag::AmplitudeSquared(Sector::Odd),
        ),
        (
            "two-mode p=0",
            RealizationTag::TwoMode {
                p: 0,
                sign: PairSign::Plus,
            },
        ),
        (
            "two-mode p=1 -",
            RealizationTag::TwoMode {
                p: 1,
                sign: PairSign::Minus,
            },
        ),
        (
            "two-mode p=3 +",
            RealizationTag::TwoMode {
                p: 3,
                sign: PairSign::Plus,
            },
        ),
    ];
    tags.into_iter()
        .map(|(name, tag)| {
            check(
                Group::Faithfulness,
                name.to_string(),
                dim,
                EXACT_LIMIT,
                || realization_residual(tag, dim),
            )
        })
        .collect()
}

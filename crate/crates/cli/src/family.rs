//! Turns `state`/`stats` arguments into amplitudes.

use num_complex::Complex64;
use su11::displacement::DisplacementParams;
use su11::realizations::{self, PairSign, Sector};
use su11::states::{self, LpsParams};
use su11::{BargmannIndex, NonlinearFunction};

use crate::{CliError, CliResult, Family, Sign, StateArgs};

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Real(f64),
    Int(usize),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    /// Indexed by level (abstract families) or photon number (realizations).
    Single(Vec<Complex64>),
    TwoMode(Vec<((usize, usize), Complex64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Built {
    pub k: f64,
    pub params: Vec<(&'static str, Param)>,
    pub amplitudes: Amplitudes,
    pub norm_deficit: f64,
}

/// Parses `pcs-like`, `bgcs-like` or `rational:a,b`.
pub fn parse_preset(spec: &str, k: BargmannIndex) -> CliResult<NonlinearFunction> {
    match spec {
        "pcs-like" => Ok(NonlinearFunction::pcs_like(k)),
        "bgcs-like" => Ok(NonlinearFunction::bgcs_like()),
        _ => {
            let body = spec.strip_prefix("rational:").ok_or_else(|| {
                CliError(format!(
                    "unknown G preset {spec:?}; expected pcs-like, bgcs-like or rational:a,b"
                ))
            })?;
            let (a, b) = body.split_once(',').ok_or_else(|| {
                CliError(format!("rational preset needs two numbers, got {body:?}"))
            })?;
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError(format!("not a finite number in G preset: {t:?}")))
            };
            Ok(NonlinearFunction::rational(num(a)?, num(b)?))
        }
    }
}

fn used_flags(family: Family) -> &'static [&'static str] {
    match family {
        Family::Pcs | Family::Bgcs => &["k", "alpha"],
        Family::Nlcs => &["k", "alpha", "g"],
        Family::Dns => &["k", "r", "theta", "m"],
        Family::Lps => &["k", "r", "theta", "M"],
        Family::Nbs => &["alpha", "M"],
        Family::Sv | Family::Sf => &["r", "theta"],
        Family::Tmsv => &["r", "theta", "p", "sign"],
        Family::Pair => &["alpha", "p", "sign"],
    }
}

fn check_flags(a: &StateArgs) -> CliResult<()> {
    let given = [
        ("k", a.k.is_some()),
        ("alpha", a.alpha.is_some()),
        ("r", a.r.is_some()),
        ("theta", a.theta.is_some()),
        ("m", a.m.is_some()),
        ("M", a.big_m.is_some()),
        ("g", a.g.is_some()),
        ("p", a.p.is_some()),
        ("sign", a.sign.is_some()),
    ];
    let allowed = used_flags(a.family);
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return Err(CliError(format!(
                "--{flag} does not apply to family {}",
                a.family.name()
            )));
        }
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: Family) -> CliResult<T> {
    v.ok_or_else(|| CliError(format!("family {} needs --{flag}", family.name())))
}

fn bargmann(a: &StateArgs) -> CliResult<BargmannIndex> {
    Ok(BargmannIndex::new(a.k.unwrap_or(0.5))?)
}

fn squeeze(a: &StateArgs) -> CliResult<DisplacementParams> {
    let r = need(a.r, "r", a.family)?;
    Ok(DisplacementParams::new(r, a.theta.unwrap_or(0.0))?)
}

fn complex_params(alpha: Complex64) -> Vec<(&'static str, Param)> {
    vec![
        ("alpha_re", Param::Real(alpha.re)),
        ("alpha_im", Param::Real(alpha.im)),
    ]
}

fn squeeze_params(p: &DisplacementParams) -> Vec<(&'static str, Param)> {
    vec![("r", Param::Real(p.r())), ("theta", Param::Real(p.theta()))]
}

fn pair_sign(s: Option<Sign>) -> PairSign {
    match s.unwrap_or(Sign::Plus) {
        Sign::Plus => PairSign::Plus,
        Sign::Minus => PairSign::Minus,
    }
}

fn abstract_state(
    k: BargmannIndex,
    params: Vec<(&'static str, Param)>,
    s: su11::StateVector,
) -> Built {
    Built {
        k: k.value(),
        params,
        norm_deficit: s.norm_deficit(),
        amplitudes: Amplitudes::Single(s.into_coeffs()),
    }
}

pub fn build(a: &StateArgs) -> CliResult<Built> {
    check_flags(a)?;
    let dim = a.dim;
    let family = a.family;
    match family {
        Family::Pcs | Family::Bgcs | Family::Nlcs => {
            let k = bargmann(a)?;
            let alpha = need(a.alpha, "alpha", family)?;
            let mut params = complex_params(alpha);
            let s = match family {
                Family::Pcs => states::pcs(alpha, k, dim)?,
                Family::Bgcs => states::bgcs(alpha, k, dim)?,
                _ => {
                    let spec =
                        a.g.as_deref()
                            .ok_or_else(|| CliError("family nlcs needs --g".into()))?;
                    params.push(("g", Param::Text(spec.to_string())));
                    states::nlcs(alpha, k, &parse_preset(spec, k)?, dim)?
                }
            };
            Ok(abstract_state(k, params, s))
        }
        Family::Dns => {
            let k = bargmann(a)?;
            let p = squeeze(a)?;
            let m = a.m.unwrap_or(0);
            let mut params = squeeze_params(&p);
            params.push(("m", Param::Int(m)));
            Ok(abstract_state(k, params, states::dns(&p, m, k, dim)?))
        }
        Family::Lps => {
            let k = bargmann(a)?;
            let order = need(a.big_m, "M", family)?;
            if !(order >= 0.0 && order.fract() == 0.0 && order < 1e6) {
                return Err(CliError(format!(
                    "lps order --M must be a non-negative integer, got {order}"
                )));
            }
            let order = order as usize;
            let p = LpsParams::new(a.theta.unwrap_or(0.0), need(a.r, "r", family)?, order, k)?;
            let mut params = squeeze_params(&p.beta());
            params.push(("M", Param::Int(order)));
            Ok(abstract_state(k, params, states::lps(&p, dim)?))
        }
        Family::Nbs => {
            let alpha = need(a.alpha, "alpha", family)?;
            let big_m = need(a.big_m, "M", family)?;
            let f = realizations::nbs(alpha, big_m, dim)?;
            let mut params = complex_params(alpha);
            params.push(("M", Param::Real(big_m)));
            Ok(Built {
                k: big_m / 2.0,
                params,
                norm_deficit: f.norm_deficit(),
                amplitudes: Amplitudes::Single(f.amps().to_vec()),
            })
        }
        Family::Sv | Family::Sf => {
            let p = squeeze(a)?;
            let sector = if family == Family::Sv {
                Sector::Even
            } else {
                Sector::Odd
            };
            let f = if family == Family::Sv {
                realizations::squeezed_vacuum(&p, dim)?
            } else {
                realizations::squeezed_first(&p, dim)?
            };
            Ok(Built {
                k: sector.k().value(),
                params: squeeze_params(&p),
                norm_deficit: f.norm_deficit(),
                amplitudes: Amplitudes::Single(f.amps().to_vec()),
            })
        }
        Family::Tmsv | Family::Pair => {
            let pair_p = a.p.unwrap_or(0);
            let sign = pair_sign(a.sign);
            let (mut params, t) = if family == Family::Tmsv {
                let p = squeeze(a)?;
                (
                    squeeze_params(&p),
                    realizations::two_mode_squeezed_vacuum(&p, pair_p, sign, dim)?,
                )
            } else {
                let alpha = need(a.alpha, "alpha", family)?;
                (
                    complex_params(alpha),
                    realizations::pair_coherent(alpha, pair_p, sign, dim)?,
                )
            };
            params.push(("p", Param::Int(pair_p)));
            params.push(("sign", Param::Text(sign.to_string())));
            Ok(Built {
                k: 0.5 * (pair_p as f64 + 1.0),
                params,
                norm_deficit: t.norm_deficit(),
                amplitudes: Amplitudes::TwoMode(t.iter().map(|(key, c)| (*key, *c)).collect()),
            })
        }
    }
}

//! JSON and CSV rendering.
//!
//! JSON documents have the shape `{"meta": {...}, "data": [...]}`. CSV output
//! starts with `# key=value` metadata lines followed by a header row; every
//! real number is written as `{:.16e}`, which round-trips an `f64` exactly.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use su11::displacement::{
    matrix_element_hyp, matrix_element_sum, matrix_table, DisplacementParams,
};
use su11::realizations::PhotonStats;
use su11::BargmannIndex;

use crate::family::{Amplitudes, Built, Param};
use crate::{CliResult, Format, MatelArgs, Method, StateArgs, VERSION};

/// Agreement expected between `--method` choices, printed in `matel` output.
pub const METHOD_TOLERANCE: f64 = 1e-9;

fn sci(x: f64) -> String {
    // `+ 0.0` folds a negative zero into `0`.
    format!("{:.16e}", x + 0.0)
}

fn param_json(p: &Param) -> Value {
    match p {
        Param::Real(x) => json!(x),
        Param::Int(i) => json!(i),
        Param::Text(t) => json!(t),
    }
}

fn param_csv(p: &Param) -> String {
    match p {
        Param::Real(x) => sci(*x),
        Param::Int(i) => i.to_string(),
        Param::Text(t) => t.clone(),
    }
}

fn document(meta: Map<String, Value>, data: Value) -> String {
    let mut s =
        serde_json::to_string_pretty(&json!({ "meta": meta, "data": data })).expect("serializable");
    s.push('\n');
    s
}

fn index_kind(built: &Built, family: crate::Family) -> &'static str {
    match (&built.amplitudes, family) {
        (Amplitudes::TwoMode(_), _) => "photon numbers (n1, n2)",
        (_, crate::Family::Nbs | crate::Family::Sv | crate::Family::Sf) => "photon number",
        _ => "level",
    }
}

fn base_meta(command: &str, args: &StateArgs, built: &Built) -> Vec<(String, Value, String)> {
    let mut rows = vec![
        ("command".to_string(), json!(command), command.to_string()),
        (
            "family".to_string(),
            json!(args.family.name()),
            args.family.name().to_string(),
        ),
        ("k".to_string(), json!(built.k), sci(built.k)),
        ("dim".to_string(), json!(args.dim), args.dim.to_string()),
        (
            "index".to_string(),
            json!(index_kind(built, args.family)),
            index_kind(built, args.family).to_string(),
        ),
    ];
    for (name, p) in &built.params {
        rows.push((name.to_string(), param_json(p), param_csv(p)));
    }
    rows.push((
        "norm_deficit".to_string(),
        json!(built.norm_deficit),
        sci(built.norm_deficit),
    ));
    rows.push(("version".to_string(), json!(VERSION), VERSION.to_string()));
    rows
}

fn meta_json(rows: &[(String, Value, String)]) -> Map<String, Value> {
    rows.iter()
        .map(|(k, v, _)| (k.clone(), v.clone()))
        .collect()
}

fn meta_csv(rows: &[(String, Value, String)]) -> String {
    rows.iter()
        .map(|(k, _, v)| format!("# {k}={v}\n"))
        .collect()
}

/// Output of `state`.
pub fn state(args: &StateArgs, built: &Built) -> String {
    let meta = base_meta("state", args, built);
    match args.format {
        Format::Json => {
            let data: Vec<Value> = match &built.amplitudes {
                Amplitudes::Single(c) => c
                    .iter()
                    .enumerate()
                    .map(|(n, z)| json!({ "n": n, "re": z.re + 0.0, "im": z.im + 0.0, "prob": z.norm_sqr() }))
                    .collect(),
                Amplitudes::TwoMode(t) => t
                    .iter()
                    .map(|((a, b), z)| json!({ "n1": a, "n2": b, "re": z.re + 0.0, "im": z.im + 0.0, "prob": z.norm_sqr() }))
                    .collect(),
            };
            document(meta_json(&meta), Value::Array(data))
        }
        Format::Csv => {
            let mut s = meta_csv(&meta);
            let row =
                |z: &Complex64| format!("{},{},{}\n", sci(z.re), sci(z.im), sci(z.norm_sqr()));
            match &built.amplitudes {
                Amplitudes::Single(c) => {
                    s.push_str("n,re,im,prob\n");
                    for (n, z) in c.iter().enumerate() {
                        s.push_str(&format!("{n},{}", row(z)));
                    }
                }
                Amplitudes::TwoMode(t) => {
                    s.push_str("n1,n2,re,im,prob\n");
                    for ((a, b), z) in t {
                        s.push_str(&format!("{a},{b},{}", row(z)));
                    }
                }
            }
            s
        }
    }
}

/// Photon-number statistics of the built amplitudes.
pub fn photon_stats(built: &Built) -> PhotonStats {
    match &built.amplitudes {
        Amplitudes::Single(c) => {
            PhotonStats::from_distribution(c.iter().map(|z| z.norm_sqr()).enumerate())
        }
        Amplitudes::TwoMode(t) => {
            PhotonStats::from_distribution(t.iter().map(|((a, b), z)| (a + b, z.norm_sqr())))
        }
    }
}

/// Output of `stats`.
pub fn stats(args: &StateArgs, built: &Built) -> String {
    let meta = base_meta("stats", args, built);
    let st = photon_stats(built);
    match args.format {
        Format::Json => document(
            meta_json(&meta),
            json!({
                "mean": st.mean,
                "variance": st.variance,
                "mandel_q": st.mandel_q,
                "norm_deficit": st.norm_deficit,
            }),
        ),
        Format::Csv => {
            let q = st.mandel_q.map(sci).unwrap_or_default();
            format!(
                "{}mean,variance,mandel_q,norm_deficit\n{},{},{},{}\n",
                meta_csv(&meta),
                sci(st.mean),
                sci(st.variance),
                q,
                sci(st.norm_deficit)
            )
        }
    }
}

/// Output of `matel`.
pub fn matel(args: &MatelArgs) -> CliResult<String> {
    let k = BargmannIndex::new(args.k)?;
    let p = DisplacementParams::new(args.r, args.theta)?;
    let table = matrix_table(k, &p, args.dim);
    let cap = args.cap.min(args.dim);
    let mut entries = Vec::with_capacity(cap * cap);
    for n in 0..cap {
        for m in 0..cap {
            let z = match args.method {
                Method::Table => table.get(n, m),
                Method::Sum => matrix_element_sum(n, m, k, &p),
                Method::Hyp if p.r() == 0.0 => Complex64::new(if n == m { 1.0 } else { 0.0 }, 0.0),
                Method::Hyp => matrix_element_hyp(n, m, k, &p)?,
            };
            entries.push((n, m, z));
        }
    }
    let deficits: Vec<f64> = table.column_deficits().into_iter().take(cap).collect();
    let meta = vec![
        ("command".to_string(), json!("matel"), "matel".to_string()),
        ("k".to_string(), json!(k.value()), sci(k.value())),
        ("r".to_string(), json!(p.r()), sci(p.r())),
        ("theta".to_string(), json!(p.theta()), sci(p.theta())),
        ("dim".to_string(), json!(args.dim), args.dim.to_string()),
        ("cap".to_string(), json!(cap), cap.to_string()),
        (
            "method".to_string(),
            json!(args.method.name()),
            args.method.name().to_string(),
        ),
        (
            "tolerance".to_string(),
            json!(METHOD_TOLERANCE),
            sci(METHOD_TOLERANCE),
        ),
        (
            "column_deficits".to_string(),
            json!(deficits),
            deficits
                .iter()
                .map(|d| sci(*d))
                .collect::<Vec<_>>()
                .join(";"),
        ),
        ("version".to_string(), json!(VERSION), VERSION.to_string()),
    ];
    Ok(match args.format {
        Format::Json => {
            let data = entries
                .iter()
                .map(|(n, m, z)| json!({ "n": n, "m": m, "re": z.re + 0.0, "im": z.im + 0.0 }))
                .collect();
            document(meta_json(&meta), Value::Array(data))
        }
        Format::Csv => {
            let mut s = meta_csv(&meta);
            s.push_str("n,m,re,im\n");
            for (n, m, z) in entries {
                s.push_str(&format!("{n},{m},{},{}\n", sci(z.re), sci(z.im)));
            }
            s
        }
    })
}

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Arguments of the golden state for every family, all at `--dim 16`.
pub const GOLDEN_CASES: [(&str, &[&str]); 10] = [
    ("pcs", &["--k", "0.5", "--alpha", "0.5,0.2"]),
    ("bgcs", &["--k", "1", "--alpha", "0.8,-0.3"]),
    (
        "nlcs",
        &["--k", "1", "--alpha", "0.3,0.1", "--g", "rational:1,2"],
    ),
    (
        "dns",
        &["--k", "0.5", "--r", "0.3", "--theta", "0.5", "--m", "1"],
    ),
    (
        "lps",
        &["--k", "0.5", "--r", "0.2", "--theta", "0.4", "--M", "2"],
    ),
    ("nbs", &["--alpha", "0.3", "--M", "2"]),
    ("sv", &["--r", "0.3", "--theta", "0.2"]),
    ("sf", &["--r", "0.3", "--theta", "0.2"]),
    (
        "tmsv",
        &["--r", "0.3", "--theta", "0.2", "--p", "1", "--sign", "-"],
    ),
    ("pair", &["--alpha", "0.5", "--p", "0"]),
];

pub const GOLDEN_DIM: &str = "16";

pub fn su11(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su11"))
        .args(args)
        .env_remove(su11_cli::DIM_ENV)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

pub fn golden_args<'a>(family: &'a str, extra: &'a [&'a str], format: &'a str) -> Vec<&'a str> {
    let mut v = vec!["state", "--family", family];
    v.extend_from_slice(extra);
    v.extend_from_slice(&["--dim", GOLDEN_DIM, "--format", format]);
    v
}

pub fn golden_path(family: &str, format: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{family}.{format}"))
}

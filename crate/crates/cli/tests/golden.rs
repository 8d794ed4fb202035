//! Byte-for-byte comparison against the checked-in outputs.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p su11-cli --test golden`.

mod common;

use common::{golden_args, golden_path, stdout, su11, GOLDEN_CASES};

#[test]
fn state_outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (family, extra) in GOLDEN_CASES {
        for format in ["json", "csv"] {
            let out = su11(&golden_args(family, extra, format));
            assert!(
                out.status.success(),
                "{family} {format}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let text = stdout(&out);
            let path = golden_path(family, format);
            if update {
                std::fs::create_dir_all(path.parent().unwrap()).unwrap();
                std::fs::write(&path, &text).unwrap();
                continue;
            }
            let want = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            if want != text {
                mismatched.push(path.display().to_string());
            }
        }
    }
    assert!(mismatched.is_empty(), "outputs differ from {mismatched:?}");
}

#[test]
fn repeated_runs_are_identical() {
    for (family, extra) in GOLDEN_CASES {
        let args = golden_args(family, extra, "csv");
        assert_eq!(su11(&args).stdout, su11(&args).stdout, "{family}");
    }
}

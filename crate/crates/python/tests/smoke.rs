//! Runs `python/smoke_test.py` against the installed extension module.
//! Skipped when `qlimits` is not importable (build it with `maturin develop`
//! or `pip install -e crates/python` first).

use std::path::Path;
use std::process::Command;

#[test]
fn python_smoke_script() {
    let importable = Command::new("python3")
        .args(["-c", "import qlimits"])
        .status()
        .map(|s| s.success())
        .unwrap_or(false);
    if !importable {
        eprintln!("skipping: the qlimits Python module is not installed");
        return;
    }
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = Command::new("python3").arg(script).output().expect("python3 runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok"));
}

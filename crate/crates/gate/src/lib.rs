//! Acceptance gate for the workspace; the checks live in `tests/acceptance.rs`.

use std::path::PathBuf;

/// The `opalg` binary built into the same target directory as the running
/// test executable (`target/<profile>/deps/..` -> `target/<profile>/opalg`).
pub fn opalg_binary() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    let profile_dir = exe.parent().and_then(|deps| deps.parent()).expect("target/<profile>/deps layout");
    let bin = profile_dir.join(format!("opalg{}", std::env::consts::EXE_SUFFIX));
    assert!(bin.is_file(), "{} not found; build it with `cargo build -p opalg` or run `cargo test --workspace`", bin.display());
    bin
}

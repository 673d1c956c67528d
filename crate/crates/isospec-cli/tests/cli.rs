//! End-to-end checks of the command-line surface and its exit codes.

use std::path::PathBuf;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isospec"))
}

fn write_descriptor(dir: &std::path::Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write descriptor");
    path
}

struct Fixtures {
    _dir: tempdir::TempDir,
    torus: PathBuf,
    klein: PathBuf,
    cylinder: PathBuf,
    pillow: PathBuf,
}

// Minimal scoped tempdir; avoids a dev-dependency for one helper.
mod tempdir {
    use std::path::{Path, PathBuf};

    pub struct TempDir(PathBuf);

    impl TempDir {
        pub fn new(prefix: &str) -> std::io::Result<TempDir> {
            let mut path = std::env::temp_dir();
            let unique = format!(
                "{prefix}-{}-{:?}",
                std::process::id(),
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .unwrap()
                    .as_nanos()
            );
            path.push(unique);
            std::fs::create_dir_all(&path)?;
            Ok(TempDir(path))
        }

        pub fn path(&self) -> &Path {
            &self.0
        }
    }

    impl Drop for TempDir {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.0);
        }
    }
}

fn fixtures() -> Fixtures {
    let dir = tempdir::TempDir::new("isospec-cli-test").expect("temp dir");
    let torus = write_descriptor(
        dir.path(),
        "torus.json",
        r#"{"rank": 2, "gram": [["1","0"],["0","1"]], "label": "unit torus"}"#,
    );
    let klein = write_descriptor(
        dir.path(),
        "klein.json",
        r#"{"rank": 2, "gram": [["1","0"],["0","1"]],
            "involution": {"A": [[1,0],[0,-1]], "b": ["1/2","0"]}, "label": "klein"}"#,
    );
    let cylinder = write_descriptor(
        dir.path(),
        "cylinder.json",
        r#"{"rank": 2, "gram": [["1","0"],["0","1"]],
            "involution": {"A": [[1,0],[0,-1]], "b": ["0","0"]}, "label": "cylinder"}"#,
    );
    let pillow = write_descriptor(
        dir.path(),
        "pillow.json",
        r#"{"rank": 2, "gram": [["1","0"],["0","1"]],
            "involution": {"A": [[-1,0],[0,-1]], "b": ["0","0"]}, "label": "pillow"}"#,
    );
    Fixtures {
        _dir: dir,
        torus,
        klein,
        cylinder,
        pillow,
    }
}

#[test]
fn compare_exit_codes_signal_spectral_differences() {
    let f = fixtures();
    let equal = binary()
        .args(["compare", "--p", "1"])
        .arg("--a")
        .arg(&f.klein)
        .arg("--b")
        .arg(&f.cylinder)
        .output()
        .expect("run");
    assert_eq!(equal.status.code(), Some(0), "{equal:?}");
    assert!(String::from_utf8_lossy(&equal.stdout).contains("equal up to"));

    let differs = binary()
        .args(["compare", "--p", "1"])
        .arg("--a")
        .arg(&f.pillow)
        .arg("--b")
        .arg(&f.cylinder)
        .output()
        .expect("run");
    assert_eq!(differs.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&differs.stdout).contains("first difference at 0/1"));

    let excluded = binary()
        .args(["compare", "--p", "1", "--exclude-zero"])
        .arg("--a")
        .arg(&f.pillow)
        .arg("--b")
        .arg(&f.cylinder)
        .output()
        .expect("run");
    assert_eq!(excluded.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let f = fixtures();
    let missing_args = binary().args(["compare"]).output().expect("run");
    assert_eq!(missing_args.status.code(), Some(1));

    let missing_file = binary()
        .args(["spectrum", "--p", "0", "--cutoff", "5xPI2", "--space", "/no/such/file.json"])
        .output()
        .expect("run");
    assert_eq!(missing_file.status.code(), Some(1));

    let bad_descriptor = write_descriptor(
        f._dir.path(),
        "bad.json",
        r#"{"rank": 2, "gram": [["1","3"],["3","1"]], "label": "indefinite"}"#,
    );
    let refused = binary()
        .args(["spectrum", "--p", "0", "--cutoff", "5xPI2"])
        .arg("--space")
        .arg(&bad_descriptor)
        .output()
        .expect("run");
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("positive definite"));
}

#[test]
fn certificates_and_scenarios_report_their_verdicts() {
    let f = fixtures();
    let verified = binary()
        .args(["certify"])
        .arg("--m")
        .arg(&f.torus)
        .arg("--tau1")
        .arg(&f.klein)
        .arg("--tau2")
        .arg(&f.cylinder)
        .output()
        .expect("run");
    assert_eq!(verified.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&verified.stdout).contains("\"conclusion\""));

    let failed = binary()
        .args(["certify"])
        .arg("--m")
        .arg(&f.torus)
        .arg("--tau1")
        .arg(&f.pillow)
        .arg("--tau2")
        .arg(&f.cylinder)
        .output()
        .expect("run");
    assert_eq!(failed.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&failed.stderr).contains("orientation_reversing"));

    let caveat = binary()
        .args(["scenario", "run", "thm-3.1", "--format", "json"])
        .output()
        .expect("run");
    assert_eq!(caveat.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&caveat.stdout).contains("ConfirmedWithCaveat"));

    let unknown = binary()
        .args(["scenario", "run", "nothing-here"])
        .output()
        .expect("run");
    assert_eq!(unknown.status.code(), Some(1));

    let listing = binary().args(["scenario", "list"]).output().expect("run");
    assert_eq!(listing.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&listing.stdout).lines().count(), 14);
}

#[test]
fn spectrum_formats_render() {
    let f = fixtures();
    for format in ["json", "csv", "md"] {
        let output = binary()
            .args(["spectrum", "--p", "1", "--cutoff", "2xPI2", "--format", format])
            .arg("--space")
            .arg(&f.klein)
            .output()
            .expect("run");
        assert_eq!(output.status.code(), Some(0), "format {format}");
        assert!(!output.stdout.is_empty());
    }
}

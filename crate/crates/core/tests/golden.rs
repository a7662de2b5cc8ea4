//! Runs the CLI commands annotated `# golden: FILE` in the README and
//! compares their stdout with the committed files. `UPDATE_GOLDEN=1`
//! rewrites the files instead.

use std::path::{Path, PathBuf};
use std::process::Command;

const PREFIX: &str = "cargo run -q -p dbcause -- ";

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn golden_commands() -> Vec<(Vec<String>, String)> {
    let readme = std::fs::read_to_string(workspace_root().join("README.md")).unwrap();
    readme
        .lines()
        .filter_map(|line| {
            let rest = line.trim().strip_prefix(PREFIX)?;
            let (cmd, file) = rest.split_once("# golden:")?;
            Some((
                shlex::split(cmd.trim()).expect("balanced quotes"),
                file.trim().to_string(),
            ))
        })
        .collect()
}

fn run(args: &[String]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_dbcause"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn readme_commands_match_golden_files() {
    let commands = golden_commands();
    assert!(commands.len() >= 10, "README lists too few golden commands");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (args, file) in &commands {
        let (code, first) = run(args);
        let (_, second) = run(args);
        assert_eq!(code, 0, "{args:?} exited with {code}");
        assert_eq!(first, second, "{args:?} is not deterministic");
        let path = dir.join(file);
        if update {
            std::fs::write(&path, &first).unwrap();
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {file}"));
        if expected != first {
            mismatches.push(file.clone());
        }
    }
    assert!(
        mismatches.is_empty(),
        "output differs from golden files: {mismatches:?}"
    );
}

#[test]
fn golden_outputs_are_single_json_documents() {
    for (args, _) in golden_commands() {
        let (_, out) = run(&args);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        for key in ["input", "result", "stats"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
}

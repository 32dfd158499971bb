/*
Copyright 2026 The proxlab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! End-to-end runs of the `proxlab` binary.

use std::process::{Command, Output};

fn proxlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn prox_erowl_example() {
    let o = proxlab(&["prox", "--op", "erowl", "--x", "2,2", "--w", "0,2", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1.5,1.5");
}

#[test]
fn experiment_a_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runA");
    let o = proxlab(&["experiment", "a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trajectory_rowl.csv", "trajectory_erowl.csv", "summary.csv"] {
        let text = std::fs::read_to_string(out.join(f)).unwrap();
        assert!(text.lines().count() > 1, "{f} is empty");
    }
}

#[test]
fn verify_all_prints_a_table() {
    let o = proxlab(&["verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for suite in ["scalar", "rowl", "erowl", "transform", "solver", "experiments"] {
        assert!(text.contains(suite), "missing {suite}");
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert_eq!(proxlab(&["prox", "--op", "nope", "--x", "1"]).status.code(), Some(1));
    assert_eq!(proxlab(&["prox", "--op", "erowl", "--x", "2,2", "--w", "2,0", "--delta", "1"]).status.code(), Some(1));
    assert_eq!(proxlab(&["experiment", "b", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(proxlab(&["--help"]).status.code(), Some(0));
}

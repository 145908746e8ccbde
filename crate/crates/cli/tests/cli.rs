use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

/// A norm 2 vector of L: (s, 1, 1) with s² = 6, in doubled coordinates.
const NORM2_IN_L: &str = "-4,-2,-2,0,-2,0,0,-2,-2,0,0,-2,0,-2,2,0,2,2";
/// The same s with (m, n) = (1, 2): norm −2 in L.
const NORM_MINUS2_IN_L: &str = "-4,-2,-2,0,-2,0,0,-2,-2,0,0,-2,0,-2,2,0,2,4";

fn fbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbm")).args(args).env_remove("FBM_CACHE_DIR").output().expect("runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fbm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    fbm(args).status.code().expect("exit code")
}

#[test]
fn code_tables() {
    assert_eq!(stdout(&["codes", "enumerator", "--code", "h16-dual"]).trim(), "0:1 8:30 16:1");
    assert_eq!(stdout(&["codes", "steiner", "--code", "h16"]).trim(), "S(3,4,16): OK (560 triples)");
    assert_eq!(
        stdout(&["codes", "enumerator", "--code", "h16", "--coset", "0000000000000011"]).trim(),
        "2:8 4:112 6:504 8:800 10:504 12:112 14:8"
    );
    assert_eq!(stdout(&["codes", "enumerator", "--code", "f8-even"]).trim(), "0:1 2:28 4:70 6:28 8:1");
    let cosets = stdout(&["codes", "cosets", "--code", "h16"]);
    assert_eq!(cosets.lines().count(), 32);
    assert_eq!(code(&["codes", "enumerator", "--code", "golay"]), 2);
    assert_eq!(code(&["codes", "enumerator", "--code", "h16", "--coset", "0101"]), 2);
}

#[test]
fn qseries_output() {
    let h = stdout(&["qseries", "h", "--order", "5"]);
    let lines: Vec<&str> = h.lines().collect();
    assert_eq!(lines, ["-48/48\t1", "0/48\t8", "48/48\t52", "96/48\t256", "144/48\t1122", "192/48\t4352"]);
    assert_eq!(stdout(&["qseries", "verify-lemma", "--order", "20"]).trim(), "4 identities OK");
    assert!(stdout(&["qseries", "string", "--order", "2"]).starts_with("# c0\n-3/48\t1\n"));
    assert_eq!(code(&["qseries", "string", "--order", "0"]), 2);
    assert_eq!(code(&["qseries", "h", "--order", "201"]), 3);
    assert_eq!(code(&["qseries", "nonsense", "--order", "3"]), 2);
}

#[test]
fn character_commands() {
    assert_eq!(stdout(&["char", "dim", "--order", "2"]).trim(), "q^-1:1 q^0:48 q^1:196884 q^2:21493760 (J+48: OK)");
    // Weights through q^0: zero and the 32 roots of A1^16.
    assert_eq!(stdout(&["char", "verify", "--order", "0"]).trim(), "EQUAL through q^0 (33 keys compared)");
    assert_eq!(code(&["char", "verify", "--order", "99"]), 3);
    assert_eq!(code(&["char", "dim", "--order", "7"]), 3);
    let dump = stdout(&["char", "dump", "--order", "-1"]);
    assert_eq!(dump.trim(), "-48/48\t0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\t1");
}

#[test]
fn root_commands() {
    assert_eq!(stdout(&["gkm", "mult", "--vector", NORM2_IN_L]).trim(), "1");
    assert_eq!(stdout(&["gkm", "mult", "--vector", NORM_MINUS2_IN_L]).trim(), "308");
    assert_eq!(stdout(&["gkm", "mult", "--vector", "0,1,-1"]).trim(), "1");
    assert_eq!(code(&["gkm", "mult", "--vector", "1,2"]), 2);
    assert_eq!(code(&["gkm", "mult", "--vector", "0,0,0"]), 2);
    let simple = stdout(&["gkm", "simple-roots", "--height", "1"]);
    assert!(simple.contains("(0,1/2,-1/2) norm 1"), "{simple}");
    let simple = stdout(&["gkm", "simple-roots", "--height", "3/2"]);
    assert!(simple.trim_end().ends_with("4321 real simple roots of height <= 3/2"), "{simple}");
    let imag = stdout(&["gkm", "imaginary", "--n", "4"]);
    assert_eq!(imag.trim(), "(0,0,1/2)\t8\n(0,0,1)\t16\n(0,0,3/2)\t8\n(0,0,2)\t16");
    assert_eq!(code(&["gkm", "reduce", "--vector", "0,2,0", "--max-steps", "0"]), 4);
    assert!(stdout(&["gkm", "reduce", "--vector", "0,2,0"]).contains("parity -1"));
}

#[test]
fn denominator_and_consistency() {
    assert!(stdout(&["gkm", "verify-denominator", "--bound", "8"]).starts_with("product == sum through t^8"));
    assert!(stdout(&["gkm", "consistency", "--bound", "6"]).starts_with("exponent consistency OK through t^6"));
    assert_eq!(code(&["gkm", "verify-denominator", "--bound", "40"]), 3);
}

#[test]
fn lattice_commands() {
    let genus = stdout(&["lattice", "genus"]);
    assert!(genus.trim_end().ends_with("genus invariants EQUAL"));
    assert!(genus.contains("signature (17,1) det -1024"));
    assert_eq!(stdout(&["lattice", "theta", "--lattice", "bw", "--max-norm", "4"]).trim(), "0:1 4:4320");
    assert_eq!(stdout(&["lattice", "theta", "--lattice", "bw-dual", "--max-norm", "2"]).trim(), "0:1 2:4320");
}

#[test]
fn json_uses_decimal_strings() {
    let v: Value = serde_json::from_str(&stdout(&["--json", "char", "dim", "--order", "2"])).unwrap();
    assert_eq!(v["dimensions"][3], "21493760");
    assert_eq!(v["matches"], true);
    let v: Value = serde_json::from_str(&stdout(&["--json", "gkm", "mult", "--vector", NORM_MINUS2_IN_L])).unwrap();
    assert_eq!(v["multiplicity"], "308");
    assert_eq!(v["norm"], "-2");
    let v: Value = serde_json::from_str(&stdout(&["--json", "codes", "enumerator", "--code", "h16-dual"])).unwrap();
    assert_eq!(v["counts"][1]["weight"], "8");
    assert_eq!(v["counts"][1]["count"], "30");
    let err = fbm(&["--json", "qseries", "h", "--order", "0"]);
    let v: Value = serde_json::from_slice(&err.stdout).unwrap();
    assert_eq!(v["exit_code"], "2");
}

fn run_cached(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_fbm")).args(args).env("FBM_CACHE_DIR", dir).output().unwrap();
    assert!(out.status.success());
    out.stdout
}

#[test]
fn output_is_identical_with_cold_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "gkm", "verify-denominator", "--bound", "8"];
    let cold = run_cached(dir.path(), &args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = run_cached(dir.path(), &args);
    assert_eq!(cold, warm);
    let plain = fbm(&args);
    assert_eq!(plain.stdout, cold);
    let other = tempfile::tempdir().unwrap();
    let flag = Command::new(env!("CARGO_BIN_EXE_fbm"))
        .args(["--cache-dir", other.path().to_str().unwrap(), "gkm", "consistency", "--bound", "6"])
        .output()
        .unwrap();
    assert!(flag.status.success());
    assert!(std::fs::read_dir(other.path()).unwrap().count() > 0);
}

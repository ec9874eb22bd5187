use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn msp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msp")).args(args).output().expect("run msp")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const EXAMPLE: &str = "# two rows, three columns\n2 3\n1 2 3 3\n2 1 3 3\n";

#[test]
fn solve_all_lists_solutions_in_encoding_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.txt", EXAMPLE);
    let out = msp(&["solve", &path, "--all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "FEASIBLE\n110\n001\n");

    let first = msp(&["solve", &path]);
    assert_eq!(stdout(&first), "FEASIBLE\n110\n");
}

#[test]
fn infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "odd.txt", "1 2\n2 2 3\n");
    let out = msp(&["solve", &path, "--stats"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("INFEASIBLE\n"));
    assert!(text.contains("stats verdict=INFEASIBLE solutions=0"));
    assert!(text.contains("exhausted=true"));
}

#[test]
fn errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.txt", EXAMPLE);
    let out = msp(&["solve", &path, "--reduce", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r out of range"));

    let bad = write(dir.path(), "bad.txt", "2 3\n1 2 3 3\n2 1 3\n");
    let out = msp(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = msp(&["solve", &dir.path().join("missing.txt").display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_checks_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.txt", EXAMPLE);
    let ok = msp(&["verify", &path, "110"]);
    assert_eq!((ok.status.code(), stdout(&ok)), (Some(0), "VALID\n".to_string()));
    let no = msp(&["verify", &path, "100"]);
    assert_eq!((no.status.code(), stdout(&no)), (Some(1), "INVALID\n".to_string()));
    assert_eq!(msp(&["verify", &path, "11"]).status.code(), Some(2));
    assert_eq!(msp(&["verify", &path, "1x0"]).status.code(), Some(2));
}

#[test]
fn generate_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = msp(&[
            "generate", "--m", "3", "--K", "100", "--seed", "1", "--count", "4", "--out-dir",
            &dir.path().display().to_string(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).lines().count(), 4);
    }
    for seed in 1..=4 {
        let name = format!("msp_m3_n20_K100_s{seed}.txt");
        let x = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(&name)).unwrap());
        let header = String::from_utf8(x).unwrap();
        assert!(header.lines().find(|l| !l.starts_with('#')).unwrap().starts_with("3 20"));
    }

    let out = msp(&["generate", "--m", "1", "--K", "100", "--out-dir", &a.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solutions_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    msp(&["generate", "--m", "3", "--K", "10", "--seed", "0", "--count", "6", "--out-dir", &d]);
    let mut feasible = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path().display().to_string();
        let out = msp(&["solve", &path, "--all", "--backend", "serial"]);
        let text = stdout(&out);
        let mut lines = text.lines();
        match lines.next() {
            Some("FEASIBLE") => {
                feasible += 1;
                for x in lines {
                    assert_eq!(msp(&["verify", &path, x]).status.code(), Some(0), "{path} {x}");
                }
            }
            Some("INFEASIBLE") => assert_eq!(out.status.code(), Some(1)),
            other => panic!("unexpected output {other:?}"),
        }
    }
    assert!(feasible > 0);
}

#[test]
fn bench_prints_a_class_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    msp(&["generate", "--m", "2", "--K", "10", "--seed", "0", "--count", "2", "--out-dir", &d]);
    msp(&["generate", "--m", "3", "--K", "100", "--seed", "0", "--count", "3", "--out-dir", &d]);
    let out = msp(&["bench", &d, "--time-limit", "60", "--stats"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("bench path=")).count(), 5);
    assert!(text.contains("Average"));
    assert!(text.contains("(2, 10, 10)"));
    assert!(text.contains("(3, 20, 100)"));

    let out = msp(&["bench", &d, "--reduce", "2"]);
    assert!(stdout(&out).contains("(3, 20, 100)*r2"));
}

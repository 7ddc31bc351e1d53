//! The `nbasis` binary end to end.

mod common;

use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Output, Stdio};

use common::{literal, pow2_neg, q, Q};
use nbasis::kernel::{finset_decode, parse_prefix, Nat};
use num_traits::Signed;

fn nbasis() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nbasis"))
}

fn run(args: &[&str], input: &str) -> Output {
    let mut child = nbasis()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let data = input.to_owned();
    let feeder = std::thread::spawn(move || {
        let _ = stdin.write_all(data.as_bytes());
    });
    let out = child.wait_with_output().unwrap();
    let _ = feeder.join();
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn cells(out: &Output) -> Vec<Nat> {
    parse_prefix(&stdout(out)).unwrap()
}

fn ok(args: &[&str], input: &str) -> String {
    let out = run(args, input);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {:?}", out);
    stdout(&out)
}

#[test]
fn cauchy_name_of_a_third() {
    let out = run(
        &[
            "gen-name",
            "--world",
            "R-rational",
            "--point",
            "1/3",
            "--kind",
            "cauchy",
            "--prefix",
            "4",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let values: Vec<Q> = cells(&out).iter().map(common::rational).collect();
    assert_eq!(values.len(), 4);
    for (i, v) in values.iter().enumerate() {
        assert!(
            (v - q(1, 3)).abs() <= pow2_neg(i as i64),
            "cell {i} = {}",
            literal(v)
        );
    }
}

#[test]
fn cauchy_to_si_translates_cell_by_cell() {
    let cauchy = ok(
        &[
            "gen-name", "--point", "1/3", "--kind", "cauchy", "--prefix", "4",
        ],
        "",
    );
    let cauchy_cells = parse_prefix(&cauchy).unwrap();
    let si = run(&["translate", "--src", "cauchy", "--dst", "si"], &cauchy);
    // The input ends after 4 cells, which ends the output too.
    assert_eq!(si.status.code(), Some(0));
    let si_cells = cells(&si);
    assert_eq!(si_cells.len(), 4);
    for (n, code) in si_cells.iter().enumerate() {
        let members: Vec<Nat> = finset_decode(code).into_iter().collect();
        assert_eq!(members.len(), 1, "cell {n}");
        let (center, radius) = common::ball(&members[0]);
        assert_eq!(center, cauchy_cells[n]);
        assert_eq!(radius, pow2_neg(n as i64));
    }
}

#[test]
fn member_accepts_si_name_of_a_third() {
    let si = ok(
        &[
            "gen-name", "--point", "1/3", "--kind", "si", "--prefix", "64",
        ],
        "",
    );
    let out = run(
        &["member", "--world", "R-rational", "--target", "B(0,1)"],
        &si,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ACCEPT fuel="), "{}", stdout(&out));
}

#[test]
fn member_not_yet_exits_3() {
    let si = ok(
        &["gen-name", "--point", "1", "--kind", "si", "--prefix", "64"],
        "",
    );
    // 1 lies on the boundary, so no ball of the name is strongly included.
    let out = run(&["member", "--target", "B(0,1)", "--fuel", "500"], &si);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("NOT-YET fuel="));
}

#[test]
fn check_axioms_reports_nothing_for_metric_relations() {
    for rel in ["strict", "non-strict"] {
        for induced in [false, true] {
            let mut args = vec![
                "check-axioms",
                "--relation",
                rel,
                "--samples",
                "12",
                "--points",
                "20",
            ];
            if induced {
                args.push("--induced");
            }
            assert_eq!(ok(&args, ""), "", "{args:?}");
        }
    }
}

#[test]
fn broken_adapters_exit_1_with_violation_lines() {
    for adapter in ["empty", "radius-one"] {
        let out = run(
            &["check-adapter", "--adapter", adapter, "--samples", "5"],
            "",
        );
        assert_eq!(out.status.code(), Some(1), "{adapter}");
        let text = stdout(&out);
        assert!(!text.is_empty());
        assert!(text.lines().all(|l| l.starts_with("VIOLATION ")), "{text}");
    }
    for adapter in ["identity", "rational-to-creal", "creal-to-rational"] {
        ok(
            &["check-adapter", "--adapter", adapter, "--samples", "10"],
            "",
        );
    }
}

#[test]
fn flag_errors_exit_2() {
    for args in [
        &["translate", "--src", "nope", "--dst", "si"][..],
        &["--fuel", "0", "gen-name", "--point", "1", "--kind", "si"],
        &["--prefix", "0", "gen-name", "--point", "1", "--kind", "si"],
        &[
            "--world",
            "R-imaginary",
            "gen-name",
            "--point",
            "1",
            "--kind",
            "si",
        ],
        &["gen-name", "--point", "one", "--kind", "si"],
        &["member", "--target", "B(0,-1)"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args, "").status.code(), Some(2), "{args:?}");
    }
    // Malformed input cells are input errors as well.
    let out = run(&["translate", "--src", "cauchy", "--dst", "si"], "0\nx\n");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(cells(&out).len(), 1);
}

#[test]
fn missing_translation_exits_2() {
    let out = run(&["translate", "--src", "cauchy", "--dst", "max"], "0\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuel_exhaustion_flushes_partial_output() {
    let si = ok(
        &[
            "gen-name", "--point", "2/7", "--kind", "si", "--prefix", "200",
        ],
        "",
    );
    let out = run(
        &[
            "--fuel",
            "20",
            "translate",
            "--src",
            "si",
            "--dst",
            "cauchy",
            "--prefix",
            "100",
        ],
        &si,
    );
    assert_eq!(out.status.code(), Some(3));
    let written = cells(&out);
    assert!(!written.is_empty() && written.len() < 100);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains(&format!("fuel exhausted: {} cells written", written.len())),
        "{err}"
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("nbasis-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("name.txt");
    let path_str = path.to_str().unwrap();
    let shown = ok(
        &[
            "--out", path_str, "gen-name", "--point", "-2/7", "--kind", "max", "--prefix", "8",
        ],
        "",
    );
    assert_eq!(shown, "");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(parse_prefix(&written).unwrap().len(), 8);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn input_file_argument_matches_stdin() {
    let dir = std::env::temp_dir().join(format!("nbasis-in-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cauchy.txt");
    let cauchy = ok(
        &[
            "gen-name", "--point", "22/7", "--kind", "cauchy", "--prefix", "6",
        ],
        "",
    );
    std::fs::write(&path, &cauchy).unwrap();
    let from_file = ok(
        &[
            "translate",
            "--src",
            "cauchy",
            "--dst",
            "si",
            path.to_str().unwrap(),
        ],
        "",
    );
    let from_stdin = ok(&["translate", "--src", "cauchy", "--dst", "si"], &cauchy);
    assert_eq!(from_file, from_stdin);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn probe_verdicts() {
    let si = ok(
        &[
            "gen-name", "--point", "1/3", "--kind", "si", "--prefix", "10",
        ],
        "",
    );
    let out = run(&["probe", "--kind", "si", "--point", "1/3"], &si);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("CONSISTENT"), "{}", stdout(&out));
    let out = run(
        &["probe", "--kind", "si", "--point", "1/3", "--totalized"],
        &si,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("CONSISTENT"));
    let out = run(&["probe", "--kind", "si", "--point", "5"], &si);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("VIOLATION"), "{}", stdout(&out));
}

#[test]
fn translate_streams_before_input_ends() {
    let mut child = nbasis()
        .args([
            "translate",
            "--src",
            "cauchy",
            "--dst",
            "si",
            "--prefix",
            "3",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    // Each input line yields one output line while stdin stays open.
    for (i, cell) in ["0", "104", "25650"].iter().enumerate() {
        writeln!(stdin, "{cell}").unwrap();
        stdin.flush().unwrap();
        let line = lines.next().unwrap().unwrap();
        assert!(!line.is_empty(), "cell {i}");
    }
    drop(stdin);
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn verbose_prints_read_bound() {
    let cauchy = ok(
        &[
            "gen-name", "--point", "1/3", "--kind", "cauchy", "--prefix", "3",
        ],
        "",
    );
    let out = run(
        &["-v", "translate", "--src", "cauchy", "--dst", "si"],
        &cauchy,
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("reads at most k+1 input cells"), "{err}");
}

#[test]
fn registry_points_and_names() {
    let world = "R-registry --with pi,e,sqrt2";
    let si = ok(
        &[
            "--world", world, "gen-name", "--point", "pi", "--kind", "si", "--prefix", "40",
        ],
        "",
    );
    let cauchy = ok(
        &[
            "--world",
            world,
            "translate",
            "--src",
            "si",
            "--dst",
            "cauchy",
            "--prefix",
            "10",
        ],
        &si,
    );
    assert_eq!(parse_prefix(&cauchy).unwrap().len(), 10);
    let out = run(
        &[
            "--world", world, "gen-name", "--point", "pi", "--kind", "max",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netkrig_cli::record::{BenchRow, ResultRecord};
use netkrig_cli::{exit_code, EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE};
use netkrig_core::heuristics::exhaustive;
use netkrig_core::topology::render_routing_matrix;
use netkrig_core::{Criterion, DenseMatrix, Error, MonitoringProblem, RoutingMatrix};
use tempfile::TempDir;

fn netkrig(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netkrig"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = netkrig(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Deterministic 0/1 matrix with every column covered.
fn write_incidence(dir: &Path, name: &str, l: usize, j: usize) -> PathBuf {
    let mut a = DenseMatrix::from_fn(l, j, |r, c| {
        f64::from(u8::from((r * 7 + c * 11 + r * c) % 5 < 2))
    });
    for c in 0..j {
        if a.column(c).iter().all(|&v| v == 0.0) {
            a[(c % l, c)] = 1.0;
        }
    }
    let path = dir.join(name);
    fs::write(
        &path,
        render_routing_matrix(&RoutingMatrix::new(a).unwrap()),
    )
    .unwrap();
    path
}

fn generate_ba(dir: &Path) -> PathBuf {
    ok(
        dir,
        &[
            "generate", "--model", "ba", "--nodes", "40", "--attach", "2", "--flows", "120",
            "--seed", "7", "--out", "g",
        ],
    );
    dir.join("g.csv")
}

#[test]
fn generate_writes_three_files_deterministically() {
    let d = TempDir::new().unwrap();
    let stdout = ok(
        d.path(),
        &[
            "generate", "--model", "ba", "--nodes", "100", "--attach", "2", "--flows", "500",
            "--seed", "7", "--out", "a",
        ],
    );
    assert_eq!(stdout.trim(), "L=197 J=500");
    ok(
        d.path(),
        &[
            "generate", "--model", "ba", "--nodes", "100", "--attach", "2", "--flows", "500",
            "--seed", "7", "--out", "b",
        ],
    );
    for ext in ["edges", "flows", "csv"] {
        let x = fs::read(d.path().join(format!("a.{ext}"))).unwrap();
        let y = fs::read(d.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(x, y, "{ext}");
    }
    let csv = fs::read_to_string(d.path().join("a.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("197,500"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 500));
}

#[test]
fn generate_inet_and_zero_flows() {
    let d = TempDir::new().unwrap();
    let out = ok(
        d.path(),
        &[
            "generate", "--model", "inet", "--nodes", "60", "--links", "90", "--flows", "30",
            "--seed", "3", "--out", "i",
        ],
    );
    assert_eq!(out.trim(), "L=90 J=30");
    let out = netkrig(
        d.path(),
        &[
            "generate", "--model", "ba", "--nodes", "10", "--flows", "0", "--out", "z",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(fs::read_to_string(d.path().join("z.csv"))
        .unwrap()
        .starts_with("17,0\n"));
    let missing = netkrig(
        d.path(),
        &[
            "generate", "--model", "inet", "--nodes", "60", "--flows", "3", "--out", "q",
        ],
    );
    assert_eq!(code(&missing), EXIT_USAGE);
}

#[test]
fn solve_fge_emits_monotone_trajectory_that_round_trips() {
    let d = TempDir::new().unwrap();
    let m = generate_ba(d.path());
    ok(
        d.path(),
        &[
            "solve",
            "--algo",
            "fge",
            "--criterion",
            "trace",
            "--k",
            "10",
            "--matrix",
            m.to_str().unwrap(),
            "--out",
            "r.json",
        ],
    );
    let text = fs::read_to_string(d.path().join("r.json")).unwrap();
    let rec = ResultRecord::from_json(&text).unwrap();
    assert_eq!(rec.selected.len(), 10);
    assert_eq!(rec.error_trajectory.len(), 11);
    assert_eq!(rec.bound_trajectory.len(), 11);
    assert!(rec.error_trajectory.windows(2).all(|w| w[1] <= w[0]));
    assert!(rec
        .error_trajectory
        .iter()
        .zip(&rec.bound_trajectory)
        .all(|(e, b)| e + 1e-9 >= *b));
    assert_eq!(rec.to_json(), text);
    assert_eq!(rec.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn spectral_record_round_trips_byte_identically() {
    let d = TempDir::new().unwrap();
    let m = generate_ba(d.path());
    let text = ok(
        d.path(),
        &[
            "solve",
            "--algo",
            "fgr",
            "--criterion",
            "spectral",
            "--k",
            "6",
            "--m",
            "30",
            "--seed",
            "4",
            "--matrix",
            m.to_str().unwrap(),
        ],
    );
    let rec = ResultRecord::from_json(&text).unwrap();
    assert_eq!(rec.to_json(), text);
    assert_eq!(ResultRecord::from_json(&rec.to_json()).unwrap(), rec);
}

#[test]
fn solve_exact_matches_library_exhaustive() {
    let d = TempDir::new().unwrap();
    let path = write_incidence(d.path(), "a.csv", 12, 20);
    let text = ok(
        d.path(),
        &["solve", "--algo", "exact", "--k", "3", "--matrix", "a.csv"],
    );
    let rec = ResultRecord::from_json(&text).unwrap();
    let a = netkrig_core::topology::load_routing_matrix(&path).unwrap();
    let lib = exhaustive(&MonitoringProblem::new(a, 3, Criterion::Trace).unwrap()).unwrap();
    assert_eq!(rec.selected, lib.selected);
    assert_eq!(rec.error_trajectory, lib.error_trajectory);
}

#[test]
fn unsupported_combinations_are_usage_errors() {
    let d = TempDir::new().unwrap();
    write_incidence(d.path(), "a.csv", 12, 20);
    for (algo, crit) in [("fgp", "trace"), ("fgr", "trace"), ("fge", "spectral")] {
        let out = netkrig(
            d.path(),
            &[
                "solve",
                "--algo",
                algo,
                "--criterion",
                crit,
                "--k",
                "3",
                "--matrix",
                "a.csv",
            ],
        );
        assert_eq!(code(&out), EXIT_USAGE, "{algo}+{crit}");
    }
    let out = netkrig(
        d.path(),
        &["solve", "--algo", "fge", "--k", "13", "--matrix", "a.csv"],
    );
    assert_eq!(code(&out), EXIT_USAGE);
    let out = netkrig(
        d.path(),
        &["solve", "--algo", "nope", "--k", "3", "--matrix", "a.csv"],
    );
    assert_eq!(code(&out), EXIT_USAGE);
    let out = netkrig(
        d.path(),
        &[
            "ensemble",
            "--algo",
            "fge",
            "--criterion",
            "trace",
            "--k",
            "3",
            "--matrix",
            "a.csv",
        ],
    );
    assert_eq!(code(&out), EXIT_USAGE);
}

#[test]
fn data_problems_exit_with_code_two() {
    let d = TempDir::new().unwrap();
    let out = netkrig(
        d.path(),
        &[
            "solve",
            "--algo",
            "fge",
            "--k",
            "2",
            "--matrix",
            "missing.csv",
        ],
    );
    assert_eq!(code(&out), EXIT_DATA);
    fs::write(d.path().join("bad.csv"), "2,3\n1,1,0\n0,1\n").unwrap();
    let out = netkrig(
        d.path(),
        &["solve", "--algo", "fge", "--k", "1", "--matrix", "bad.csv"],
    );
    assert_eq!(code(&out), EXIT_DATA);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:3"));
    write_incidence(d.path(), "a.csv", 12, 20);
    fs::write(d.path().join("w.txt"), "1,2,x").unwrap();
    let out = netkrig(
        d.path(),
        &[
            "solve",
            "--algo",
            "fge",
            "--k",
            "1",
            "--matrix",
            "a.csv",
            "--weights",
            "w.txt",
        ],
    );
    assert_eq!(code(&out), EXIT_DATA);
}

#[test]
fn exit_code_mapping() {
    assert_eq!(exit_code(&Error::Numerical("x".into())), EXIT_NUMERICAL);
    assert_eq!(
        exit_code(&Error::RedundantSelection { observed: vec![1] }),
        EXIT_NUMERICAL
    );
    assert_eq!(exit_code(&Error::Input("x".into())), EXIT_USAGE);
    assert_eq!(
        exit_code(&Error::Parse {
            path: "p".into(),
            line: 1,
            message: "m".into()
        }),
        EXIT_DATA
    );
}

#[test]
fn ensemble_of_one_equals_solve_and_best_is_minimum() {
    let d = TempDir::new().unwrap();
    let m = generate_ba(d.path());
    let m = m.to_str().unwrap();
    let solo = ok(
        d.path(),
        &[
            "solve",
            "--algo",
            "fgr",
            "--criterion",
            "spectral",
            "--k",
            "5",
            "--m",
            "20",
            "--seed",
            "9",
            "--matrix",
            m,
        ],
    );
    let one = ok(
        d.path(),
        &[
            "ensemble",
            "--algo",
            "fgr",
            "--runs",
            "1",
            "--m",
            "20",
            "--criterion",
            "spectral",
            "--k",
            "5",
            "--seed",
            "9",
            "--matrix",
            m,
        ],
    );
    let (solo, one) = (
        ResultRecord::from_json(&solo).unwrap(),
        ResultRecord::from_json(&one).unwrap(),
    );
    assert_eq!(solo.selected, one.selected);
    assert_eq!(solo.error_trajectory, one.error_trajectory);

    let many = ok(
        d.path(),
        &[
            "ensemble",
            "--algo",
            "fgr",
            "--runs",
            "16",
            "--m",
            "20",
            "--criterion",
            "spectral",
            "--k",
            "5",
            "--seed",
            "9",
            "--matrix",
            m,
        ],
    );
    let rec = ResultRecord::from_json(&many).unwrap();
    let members = rec.member_errors.clone().unwrap();
    assert_eq!(members.len(), 16);
    assert_eq!(rec.seeds.clone().unwrap(), (9..25).collect::<Vec<u64>>());
    let best = *rec.error_trajectory.last().unwrap();
    assert!(members.iter().all(|&e| best <= e));
    assert_eq!(rec.seed, 9 + rec.best_index.unwrap() as u64);
    assert_eq!(rec.to_json(), many);
}

#[test]
fn bound_command_matches_library() {
    let d = TempDir::new().unwrap();
    let path = write_incidence(d.path(), "a.csv", 12, 20);
    let text = ok(
        d.path(),
        &[
            "bound",
            "--criterion",
            "spectral",
            "--k",
            "4",
            "--matrix",
            "a.csv",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let a = netkrig_core::topology::load_routing_matrix(&path)
        .unwrap()
        .into_matrix();
    let got: Vec<f64> = v["bound_trajectory"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let want: Vec<f64> = (0..=4)
        .map(|k| netkrig_core::pca_spectral_bound(&a, k).unwrap())
        .collect();
    assert_eq!(got, want);
    let csv = ok(
        d.path(),
        &["bound", "--k", "2", "--matrix", "a.csv", "--format", "csv"],
    );
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(csv.lines().next(), Some("k,bound"));
}

#[test]
fn topology_source_equals_matrix_source() {
    let d = TempDir::new().unwrap();
    generate_ba(d.path());
    let x = ok(
        d.path(),
        &["solve", "--algo", "pcaph", "--k", "4", "--matrix", "g.csv"],
    );
    let y = ok(
        d.path(),
        &[
            "solve",
            "--algo",
            "pcaph",
            "--k",
            "4",
            "--edges",
            "g.edges",
            "--flow-list",
            "g.flows",
        ],
    );
    let z = ok(
        d.path(),
        &[
            "solve",
            "--algo",
            "pcaph",
            "--k",
            "4",
            "--model",
            "ba",
            "--nodes",
            "40",
            "--attach",
            "2",
            "--flows",
            "120",
            "--gen-seed",
            "7",
        ],
    );
    let sel = |t: &str| ResultRecord::from_json(t).unwrap().selected;
    assert_eq!(sel(&x), sel(&y));
    assert_eq!(sel(&x), sel(&z));
}

#[test]
fn bench_rows_headers_and_failures() {
    let d = TempDir::new().unwrap();
    let csv = ok(
        d.path(),
        &["bench", "--instance", "gaussian:30x20", "--algos", ""],
    );
    assert_eq!(
        csv,
        "instance,algorithm,criterion,L,J,K,m,error,wall_time,status\n"
    );

    let csv = ok(
        d.path(),
        &[
            "bench",
            "--instance",
            "gaussian:30x20",
            "--instance",
            "missing.csv",
            "--algos",
            "pcaph,fgr,fge",
            "--k",
            "5",
            "--m",
            "20",
        ],
    );
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<BenchRow> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows[..3]
        .iter()
        .all(|r| r.status == "ok" && r.error.is_some() && r.links == Some(30)));
    assert!(rows[3..]
        .iter()
        .all(|r| r.status.starts_with("error") && r.error.is_none()));

    let json = ok(
        d.path(),
        &[
            "bench",
            "--instance",
            "ba:30:2:40",
            "--algos",
            "fge",
            "--criterion",
            "spectral",
            "--format",
            "json",
        ],
    );
    let rows: Vec<BenchRow> = serde_json::from_str(&json).unwrap();
    assert!(rows[0].status.contains("does not support"));
}

#[test]
fn help_and_version_exit_zero() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&netkrig(d.path(), &["--help"])), 0);
    assert_eq!(code(&netkrig(d.path(), &["--version"])), 0);
    assert_eq!(code(&netkrig(d.path(), &["frobnicate"])), EXIT_USAGE);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use fraclab::cli::{Outcome, RunRecord};
use fraclab::generators::gaussian;
use fraclab::spectral::io;
use fraclab::Grid;

fn fraclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclab"))
        .args(args)
        .env_remove("FRACLAB_TIMING")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn records(out: &Output) -> Vec<RunRecord> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.parse().expect("record parses"))
        .collect()
}

#[test]
fn sobolev_constant_line() {
    let out = fraclab(&["sobolev-const", "--grid", "2,64,10", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(stdout.contains("3.544907701811032"), "{stdout}");
    let rec = &records(&out)[0];
    assert_eq!(rec.outcome, Outcome::Certified);
    assert_eq!(rec.wall_ms, None);
}

#[test]
fn polya_szego_on_a_field_file() {
    let dir = scratch("ps");
    let path = dir.join("gaussian.fld");
    let g = Grid::new(1, 128, 20.0).unwrap();
    io::write_text(&gaussian(g, 1.0, 1.0, [0.0; 3]).unwrap(), &path).unwrap();
    let out = fraclab(&["verify-ps", "--field", path.to_str().unwrap(), "--s", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &records(&out)[0];
    assert_eq!(rec.payload.get("satisfied"), Some("true"));
    assert_eq!(rec.payload.get_real("slack").unwrap(), 0.0);
}

#[test]
fn invalid_inputs_exit_two() {
    let out = fraclab(&[
        "verify-gn",
        "--s",
        "2",
        "--grid",
        "1,64,10",
        "--field",
        "gen:gaussian",
        "--q",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("s out of range"), "{err}");
    assert_eq!(records(&out)[0].outcome, Outcome::Error);

    let out = fraclab(&["verify-ps", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr.clone())
        .unwrap()
        .to_lowercase()
        .contains("usage"));
    assert_eq!(records(&out).len(), 1);

    let out = fraclab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_and_csv_files() {
    let dir = scratch("out");
    let out_path = dir.join("record.txt");
    let csv_path = dir.join("series.csv");
    let out = fraclab(&[
        "series-check",
        "--s",
        "0.5",
        "--xi2",
        "1",
        "--k",
        "3",
        "--out",
        out_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.stdout.is_empty());
    let line = std::fs::read_to_string(&out_path).unwrap();
    let rec: RunRecord = line.trim_end().parse().unwrap();
    assert_eq!(rec.to_string(), line.trim_end());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("k,coefficient,term,partial,error"));
    let partials: Vec<f64> = rows
        .map(|r| r.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(partials, vec![0.75, 0.71875, 0.7109375]);
}

#[test]
fn timing_is_opt_in() {
    let out = fraclab(&[
        "sobolev-const",
        "--grid",
        "1,16,4",
        "--s",
        "0.5",
        "--timing",
    ]);
    assert!(records(&out)[0].wall_ms.is_some());
}

#[test]
fn empty_manifest() {
    let dir = scratch("empty");
    let manifest = dir.join("runs.txt");
    std::fs::write(&manifest, "# nothing\n\n").unwrap();
    let out = fraclab(&["batch", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    for key in [
        "runs",
        "certified",
        "violated",
        "converged",
        "flagged",
        "error",
    ] {
        assert_eq!(recs[0].payload.get(key), Some("0"), "{key}");
    }
}

#[test]
fn malformed_line_aborts_everything() {
    let dir = scratch("malformed");
    let manifest = dir.join("runs.txt");
    let dump = dir.join("never.csv");
    let text = format!(
        "sobolev-const --grid 1,16,4 --s 0.5\n\
         series-check --s 0.5 --xi2 1 --k 3 --csv {}\n\
         verify-ps --nope\n\
         sobolev-const --grid 2,16,4 --s 1\n",
        dump.display()
    );
    std::fs::write(&manifest, text).unwrap();
    let out = fraclab(&["batch", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].payload.get("runs"), Some("0"));
    assert!(!dump.exists());
    assert!(String::from_utf8(out.stderr.clone())
        .unwrap()
        .contains("line 3"));
}

#[test]
fn hundred_run_sweep_is_ordered_and_reproducible() {
    let dir = scratch("sweep");
    let manifest = dir.join("runs.txt");
    let text: String = (0..100)
        .map(|i| {
            format!(
                "verify-ps --grid 1,128,20 --field gen:random --seed {i} --s {}\n",
                (i % 5) as f64 * 0.25
            )
        })
        .collect();
    std::fs::write(&manifest, text).unwrap();
    let first = fraclab(&["batch", manifest.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    let recs = records(&first);
    assert_eq!(recs.len(), 101);
    for (i, r) in recs[..100].iter().enumerate() {
        assert_eq!(r.subcommand, "verify-ps");
        assert_eq!(r.seed, Some(i as u64));
    }
    let summary = &recs[100].payload;
    assert_eq!(summary.get("runs"), Some("100"));
    assert_eq!(summary.get("certified"), Some("100"));

    let again = Command::new(env!("CARGO_BIN_EXE_fraclab"))
        .args(["batch", manifest.to_str().unwrap()])
        .env("FRACLAB_THREADS", "1")
        .env_remove("FRACLAB_TIMING")
        .output()
        .unwrap();
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn minimize_from_config_file() {
    let dir = scratch("minimize");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "[grid]\nn = 1\nN = 64\nL = 20\n\n[solver]\nc = 1\ns = 0.75\ngrad_tol = 1e-4\n\n\
         [nonlinearity]\nfamily = power\nl = 1\nK = 1\na = const\nparams = 1\n",
    )
    .unwrap();
    let csv = dir.join("trace.csv");
    let dump = dir.join("u.fld");
    let out = fraclab(&[
        "minimize",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = &records(&out)[0];
    assert_eq!(rec.outcome, Outcome::Converged);
    let u = io::read(&dump).unwrap();
    assert_eq!(*u.grid(), Grid::new(1, 64, 20.0).unwrap());
    let energies: Vec<f64> = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));
}

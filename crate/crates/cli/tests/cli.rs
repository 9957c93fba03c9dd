use std::path::PathBuf;
use std::process::{Command, Output};

use ctap_core::protocol::metrics_from_distances;
use ctap_core::MaterialParams;

fn ctap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctap"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &PathBuf) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn triple_passthrough_matches_library() {
    let o = ctap(&[
        "triple", "--p1", "0,0,20", "--p2", "20,0,20", "--p3", "40,0,20",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = metrics_from_distances(20.0, 20.0, 40.0, &MaterialParams::default(), 0.01).unwrap();
    assert_eq!(v["t_max"].as_f64().unwrap(), m.t_max);
    assert_eq!(v["j_param"].as_f64().unwrap(), m.j_param);
    assert_eq!(v["too_close_flag"], false);
}

#[test]
fn triple_flags_close_pair_and_accepts_negative_coordinates() {
    let o = ctap(&[
        "triple", "--p1", "-4,0,20", "--p2", "0,0,20", "--p3", "30,0,20",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["d12"].as_f64().unwrap(), 4.0);
    assert_eq!(v["too_close_flag"], true);
}

#[test]
fn errors_are_single_prefixed_lines() {
    for args in [
        &["triple", "--p1", "0,0,0", "--p2", "0,0,0", "--p3", "5,0,0"][..],
        &["yield", "--strategy", "P99keV", "--samples", "10"][..],
        &["yield", "--no-such-flag"][..],
        &["evolve", "--w12", "0", "--w23", "1"][..],
        &[
            "yield",
            "--samples",
            "10",
            "--srim-file",
            "/nonexistent/RANGE_3D.txt",
        ][..],
    ] {
        let o = ctap(args);
        assert!(!o.status.success(), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "), "{args:?}: {err}");
    }
    let err = stderr(&ctap(&["yield", "--strategy", "P99keV"]));
    assert!(err.contains("P14keV") && err.contains("P7keV"));
}

#[test]
fn yield_summary_and_outputs() {
    let dir = scratch("summary");
    let o = ctap(&[
        "yield",
        "--strategy",
        "P7keV",
        "--samples",
        "2000",
        "--seed",
        "3",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = String::from_utf8(o.stdout).unwrap();
    assert!(
        line.starts_with("yield=")
            && line.contains(" j_ok=")
            && line.trim_end().ends_with(" n=2000"),
        "{line}"
    );

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("yield_report.json")).unwrap())
            .unwrap();
    for key in [
        "n_samples",
        "adiabaticity_target",
        "threshold",
        "yield_fraction",
        "j_below_one_fraction",
        "too_close_fraction",
        "tmax_percentiles",
        "cdf",
    ] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let (header, rows) = csv_rows(&dir.join("cdf.csv"));
    assert_eq!(header, "tmax_ns,fraction");
    assert_eq!(rows.last().unwrap()[1], 1.0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# run\nstrategy = P7keV\nsamples = 500\nseed = 9\n").unwrap();
    let o = ctap(&[
        "yield",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "300",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8(o.stdout).unwrap().contains("n=300"));

    std::fs::write(&cfg, "samples = 10\nflavour = lime\n").unwrap();
    let o = ctap(&[
        "yield",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("flavour"));
}

#[test]
fn strategy_file() {
    let dir = scratch("strategy");
    let path = dir.join("tight.strategy");
    std::fs::write(
        &path,
        "name = tight\nenergy = 5\noxide_thickness = 1\nmean_depth = 10\nlateral_straggle_sigma = 0\n\
         depth_straggle_sigma = 0\naperture_diameter = 0\naperture_pitch = 20\n",
    )
    .unwrap();
    let o = ctap(&[
        "yield",
        "--strategy",
        path.to_str().unwrap(),
        "--samples",
        "50",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    // every triple is the ideal 20 nm chain: t_max = 0.1035 ns < 1 ns
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("yield=1 j_ok=1 "));
}

#[test]
fn srim_file_input_and_sparse_warning() {
    let dir = scratch("srim");
    let path = dir.join("RANGE_3D.txt");
    std::fs::write(
        &path,
        "  TRIM RANGE_3D\n Ion Depth Y Z\n---- ----\n1 200,0 10,0 -5,0\n2 180.0 -20.0 3.0\n",
    )
    .unwrap();
    let o = ctap(&[
        "yield",
        "--srim-file",
        path.to_str().unwrap(),
        "--samples",
        "100",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("warning: "));

    std::fs::write(&path, "header\n1 200 10 -5\n2 inf 1 1\n").unwrap();
    let o = ctap(&[
        "yield",
        "--srim-file",
        path.to_str().unwrap(),
        "--samples",
        "100",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn evolve_series() {
    let dir = scratch("evolve");
    let o = ctap(&[
        "evolve",
        "--w12",
        "0.5",
        "--w23",
        "0.25",
        "--adiabaticity",
        "0.01",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let (header, traj) = csv_rows(&dir.join("trajectory.csv"));
    assert_eq!(header, "t_ns,p1,p2,p3");
    assert!(traj.len() <= 2001);
    assert!(traj.last().unwrap()[3] >= 0.99);

    let (header, eig) = csv_rows(&dir.join("eigenvalues.csv"));
    assert_eq!(header, "t_ns,E_minus,E_0,E_plus");
    assert!(eig
        .iter()
        .all(|r| r[2] == 0.0 && r[3] >= 0.0 && r[1] == -r[3]));

    let (header, a) = csv_rows(&dir.join("adiabaticity.csv"));
    assert_eq!(header, "t_ns,A");
    let argmax = (0..a.len())
        .max_by(|&i, &j| a[i][1].total_cmp(&a[j][1]))
        .unwrap();
    assert_eq!(argmax, a.len() / 2);
}

#[test]
fn evolve_with_equal_couplings_reaches_site_three() {
    let dir = scratch("evolve_eq");
    let o = ctap(&[
        "evolve",
        "--w12",
        "0.5",
        "--w23",
        "0.5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let f: f64 = out
        .split_whitespace()
        .next()
        .unwrap()
        .trim_start_matches("fidelity=")
        .parse()
        .unwrap();
    assert!(f >= 0.99, "{out}");
}

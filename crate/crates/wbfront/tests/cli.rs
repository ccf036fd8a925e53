use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wbfront(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbfront"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SMALL: &str = "scheme = wb_implicit\nx_max = 150\ndx = 0.5\nt_end = 20\n";

#[test]
fn run_writes_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.txt"), SMALL).unwrap();
    for out_dir in ["a", "b"] {
        let out = wbfront(&["run", "cfg.txt", "--out", out_dir], dir.path());
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = dir.path().join("a");
    for f in ["timeseries.csv", "config.txt", "fit.txt", "chart.svg"] {
        assert!(a.join(f).is_file(), "{f}");
    }
    assert_eq!(fs::read_dir(a.join("snapshots")).unwrap().count(), 5);
    let ts_a = fs::read(a.join("timeseries.csv")).unwrap();
    let ts_b = fs::read(dir.path().join("b/timeseries.csv")).unwrap();
    assert_eq!(ts_a, ts_b);
    let text = String::from_utf8(ts_a).unwrap();
    assert_eq!(text.lines().count(), 21);
    // 17 significant digits in every field
    let row = text.lines().nth(1).unwrap();
    for field in row.split(',') {
        let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{field}");
    }
}

#[test]
fn zero_end_time_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.txt"), format!("{SMALL}t_end = 0\n").replace("t_end = 20\n", "")).unwrap();
    let out = wbfront(&["run", "cfg.txt", "--out", "r"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ts = fs::read_to_string(dir.path().join("r/timeseries.csv")).unwrap();
    assert_eq!(ts, "t,dt,sigma_ly,x_c\n");
    assert!(!dir.path().join("r/fit.txt").exists());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "dx = 0.5\nschme = os\n").unwrap();
    let out = wbfront(&["run", "bad.txt"], dir.path());
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("schme"), "{err}");

    assert_eq!(code(&wbfront(&["preset", "nope"], dir.path())), 1);
    assert_eq!(code(&wbfront(&["preset", "fkpp_speed", "--dx", "0.3"], dir.path())), 1);
    assert_eq!(code(&wbfront(&["frobnicate"], dir.path())), 1);
}

#[test]
fn io_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = wbfront(&["run", "missing.txt"], dir.path());
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
    let out = wbfront(&["fit", "missing.csv", "--speed", "2", "--level", "0.5"], dir.path());
    assert_eq!(code(&out), 3);
    assert_eq!(code(&wbfront(&["table", "nowhere"], dir.path())), 3);
}

#[test]
fn budget_aborts_with_two_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.txt"), format!("{SMALL}budget = 9\n")).unwrap();
    let out = wbfront(&["run", "cfg.txt", "--out", "r"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let ts = fs::read_to_string(dir.path().join("r/timeseries.csv")).unwrap();
    assert!(ts.lines().count() > 1);
}

#[test]
fn preset_sweep_then_table_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = wbfront(
        &[
            "preset",
            "fkpp_speed",
            "--dx",
            "0.5,0.25",
            "--t-end",
            "20",
            "--scheme",
            "wb_implicit,os",
            "--out",
            "res",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let root = dir.path().join("res/fkpp_speed");
    for run in ["wb_implicit/dx_0.5", "wb_implicit/dx_0.25", "os/dx_0.5", "os/dx_0.25"] {
        assert!(root.join(run).join("timeseries.csv").is_file(), "{run}");
    }
    let cfg = fs::read_to_string(root.join("os/dx_0.5/config.txt")).unwrap();
    assert!(cfg.contains("x_max = 6080.0"));

    let out = wbfront(&["table", "res"], dir.path());
    assert_eq!(code(&out), 0);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("# fkpp, wb_implicit") && table.contains("# fkpp, os"), "{table}");

    let out = wbfront(
        &[
            "fit",
            "res/fkpp_speed/wb_implicit/dx_0.5/timeseries.csv",
            "--speed",
            "2",
            "--level",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for label in ["alpha", "beta", "gamma", "residual_rms", "window"] {
        assert!(text.contains(label), "{text}");
    }
}

#[test]
fn max_cells_trims_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = wbfront(
        &[
            "preset",
            "cubic_pushed",
            "--t-end",
            "2",
            "--scheme",
            "wb_implicit",
            "--max-cells",
            "7000",
            "--out",
            "res",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let runs: Vec<_> = fs::read_dir(dir.path().join("res/cubic_pushed/wb_implicit"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(runs, vec!["dx_0.5".to_string()]);
}

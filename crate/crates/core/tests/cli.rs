use std::path::Path;
use std::process::{Command, Output};

fn spinhall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinhall")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&spinhall(&["--help"])), 0);
    assert_eq!(code(&spinhall(&["--version"])), 0);
    assert_eq!(code(&spinhall(&[])), 1);
    assert_eq!(code(&spinhall(&["moments", "--no-such-flag"])), 1);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["moments", "--kw0", "5"][..],
        &["moments", "--sigma", "1.5"],
        &["moments", "--mode", "0,0,1"],
        &["tilt-sweep", "--theta", "1.5"],
        &["tilt-sweep", "--mode", "1,0,1,0"],
        &["density-grid"],
        &["moments", "--nodes", "3"],
    ] {
        let out = spinhall(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn io_errors_exit_two() {
    assert_eq!(code(&spinhall(&["moments", "--out", "/nonexistent-dir/x.csv"])), 2);
    assert_eq!(code(&spinhall(&["run", "--config", "/nonexistent-dir/c.toml"])), 2);
}

#[test]
fn sweep_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = spinhall(&["tilt-sweep", "--phi", "0", "--phi", "1.0", "--z", "0", "--z", "500", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    // header plus 3 theta x 2 phi x 2 z x 3 sigma rows
    assert_eq!(text.lines().count(), 1 + 36);
    assert!(text.starts_with("theta_rad,phi_rad,z,sigma,"));
}

#[test]
fn stdout_matches_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let args = ["moments", "--mode", "0,0,1,0", "--mode", "0,1,0,0.5", "--kw0", "30"];
    let to_stdout = spinhall(&args);
    assert_eq!(code(&to_stdout), 0);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(code(&spinhall(&with_out)), 0);
    assert_eq!(to_stdout.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn density_grid_writes_text_and_graymap() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("grid.txt");
    let out = spinhall(&["density-grid", "--grid-size", "21", "--mode", "1,0,1,0", "--out", text.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let pgm = std::fs::read(Path::new(&text).with_extension("pgm")).unwrap();
    let header = b"P5\n21 21\n255\n";
    assert_eq!(&pgm[..header.len()], header);
    assert_eq!(pgm.len(), header.len() + 21 * 21);
    assert_eq!(std::fs::read_to_string(&text).unwrap().lines().count(), 1 + 21 * 21);
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let csv = dir.path().join("c.csv");
    std::fs::write(
        &cfg,
        format!(
            "experiment = \"centroid\"\nbeam.kw0 = 40.0\nbeam.modes = [\"0,0,1,0\", \"1,0,0.2,0.1\"]\nframe.z = [0.0, 800.0]\noutput.path = {:?}\n",
            csv.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = spinhall(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);

    let other = dir.path().join("z0.csv");
    let out = spinhall(&["run", "--config", cfg.to_str().unwrap(), "--z", "0", "--out", other.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&other).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(text.lines().nth(1), std::fs::read_to_string(&csv).unwrap().lines().nth(1));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "experiment = \"moments\"\nbeam.kw = 40.0\n").unwrap();
    assert_eq!(code(&spinhall(&["run", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn verify_passes() {
    let out = spinhall(&["verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,value,tolerance,status\n"));
    assert!(!text.contains("FAIL"));
}

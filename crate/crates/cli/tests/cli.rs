use std::path::Path;
use std::process::{Command, Output};

fn qcvx(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcvx"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "problem.name = quadratic\nsolver.speed = 3\n").unwrap();
    let o = qcvx(&["solve", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error:"));
    assert!(err.contains("bad.cfg") && err.contains('2'), "{err}");

    let o = qcvx(&["solve", "--problem", "cubic"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = qcvx(&["solve"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["sdp", "lp", "zsg"] {
        let o = qcvx(&[sub, "absent.txt"], dir.path());
        assert_eq!(o.status.code(), Some(4), "{sub}");
        assert!(stderr(&o).contains("absent.txt"));
    }
    let o = qcvx(&["solve", "--config", "absent.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn malformed_instance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.csv"), "1,0\n0,3\n").unwrap();
    let o = qcvx(&["zsg", "g.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn regimes_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcvx(&["regimes", "--count", "3"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[0].starts_with("m\tinv_eps"));
    assert!(lines[1].ends_with("mirror-descent"));

    let o = qcvx(&["regimes", "--m-min", "10", "--m-max", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zsg_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("mp.csv"), "1,-1\n-1,1\n").unwrap();
    let o = qcvx(&["zsg", "mp.csv", "--eps", "0.1", "--out", "sol.txt"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("sol.txt")).unwrap();
    let value: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("value = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(value.abs() <= 0.1);
}

#[test]
fn sdp_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.sdp"), "SDP 1 2 1 2\nb 1\nMAT 0\n0 0 1\nMAT 1\n1 1 1\n").unwrap();
    let o = qcvx(&["sdp", "t.sdp", "--out", "cert.txt"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("feasible = true"));
    let cert = std::fs::read_to_string(dir.path().join("cert.txt")).unwrap();
    assert!(cert.contains("objective ="));
}

#[test]
fn solve_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcvx(
        &["solve", "--problem", "linear-simplex", "--dim", "4", "--iterations", "20", "--reps", "2", "--out", "runs"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("reps = 2"));
    for f in ["run_0.csv", "run_1.csv", "summary.txt"] {
        assert!(dir.path().join("runs").join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("runs/run_0.csv")).unwrap();
    assert!(csv.starts_with("iter,f_value,gap,charged_queries,actual_evals,wallclock_ms"));
}

#[test]
fn grad_est_reports_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcvx(&["grad-est", "--draws", "200", "--dim", "3"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("bias_ok = true"), "{text}");
    let o = qcvx(&["grad-est", "--backend", "magic"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

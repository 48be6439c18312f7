use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sparsepair::io::{self, SignalFile};
use sparsepair::output::strip_timestamp;
use sparsepair_core::dictionaries::build_dirac_fourier;
use sparsepair_core::{CVector, Complex64};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsepair")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn thresholds_reports_the_two_onb_values() {
    let o = run(&["thresholds", "--mu", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pair_p0") && text.contains("100"), "{text}");
    assert!(text.contains("91.4213562373095"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["thresholds", "--mu", "0"]).status.code(), Some(2));
    assert_eq!(run(&["thresholds", "--mu", "0.1", "--mu-b", "0.2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["montecarlo", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["spark", "--dict", "/definitely/missing.dict"]).status.code(), Some(3));
    assert_eq!(run(&["spark", "--dict", "dirac-fourier", "--d", "16", "--max-check", "17"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_modulo_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let args = |p: &Path| {
        vec![
            "--seed".to_string(),
            "3".into(),
            "montecarlo".into(),
            "--dict".into(),
            "random".into(),
            "--d".into(),
            "6".into(),
            "--nb".into(),
            "2".into(),
            "--trials".into(),
            "40".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let path = dir.path().join("mc.csv");
    let args = args(&path);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let mut texts = Vec::new();
    for _ in 0..2 {
        assert_eq!(run(&refs).status.code(), Some(0));
        texts.push(fs::read_to_string(&path).unwrap());
    }
    let (ta, tb) = (&texts[0], &texts[1]);
    assert!(ta.starts_with("# sparsepair"));
    assert!(ta.contains("# seed: 3"));
    assert_eq!(strip_timestamp(ta), strip_timestamp(tb));
}

#[test]
fn thread_count_does_not_change_results() {
    let body = |threads: &str| {
        let o = run(&["--threads", threads, "montecarlo", "--dict", "mub", "--p", "5", "--fixed-a", "0", "--nb", "2", "--trials", "60"]);
        assert_eq!(o.status.code(), Some(0));
        strip_timestamp(&stdout(&o)).lines().filter(|l| !l.starts_with("# command:")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(body("1"), body("4"));
}

#[test]
fn config_file_fills_in_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# defaults\nmu = 0.01\ngrid = 3\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "figure1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4, "{text}");
    assert!(rows[1].starts_with("0,50.5,100,"), "{text}");

    // command line wins
    let o = run(&["--config", cfg.to_str().unwrap(), "figure1", "--grid", "5"]);
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn recover_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let dict = dir.path().join("df4.dict");
    io::write_dictionary(&dict, &build_dirac_fourier(4).unwrap(), "").unwrap();

    let mut x = CVector::zeros(8);
    x[1] = Complex64::new(1.0, 0.5);
    x[6] = Complex64::new(-0.3, 0.0);
    let sig = dir.path().join("x.sig");
    io::write_signal(&sig, &SignalFile { coefficients: x, support: vec![1, 6] }, "").unwrap();
    let o = run(&["recover", "--dict", dict.to_str().unwrap(), "--signal", sig.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("success") && l.ends_with("true")).count(), 3, "{text}");

    // the comb: P0 finds two equally sparse representations
    let mut comb = CVector::zeros(8);
    comb[0] = Complex64::new(1.0, 0.0);
    comb[2] = Complex64::new(1.0, 0.0);
    let sig = dir.path().join("comb.sig");
    io::write_signal(&sig, &SignalFile { coefficients: comb, support: vec![0, 2] }, "").unwrap();
    let o = run(&["recover", "--dict", dict.to_str().unwrap(), "--signal", sig.to_str().unwrap(), "--solver", "p0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("non_unique") && l.ends_with("true")), "{text}");
}

#[test]
fn malformed_signal_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("bad.sig");
    fs::write(&sig, "3\n1 0\nnot a number\n0 0\n").unwrap();
    let o = run(&["recover", "--signal", sig.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.sig:3:"));
}

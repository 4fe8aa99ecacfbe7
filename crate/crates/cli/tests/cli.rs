use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .env_remove("SIEGEL_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn single_prints_everything() {
    let o = siegel(&["single", "163"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("lli        = 0.8675157625"), "{s}");
    assert!(s.contains("h(-q)      = 1"));
    let o = siegel(&["single", "3", "--all-methods"]);
    let s = stdout(&o);
    assert_eq!(s.matches("0.604599788078072").count(), 3, "{s}");
    assert!(s.contains("uli        = undefined"));
}

#[test]
fn invalid_modulus_fails() {
    for args in [["single", "4"], ["fftcheck", "4"], ["single", "91"]] {
        let o = siegel(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("invalid modulus"));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["scan", "--from", "3"],
        vec!["scan", "--to", "10", "--method", "magic"],
        vec!["scan", "--to", "10", "--resume"],
        vec![
            "plot", "--input", "x.csv", "--column", "nope", "--out", "x.svg",
        ],
    ] {
        assert_eq!(siegel(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_lists_every_scan_flag() {
    let s = stdout(&siegel(&["scan", "--help"]));
    for flag in [
        "--from",
        "--to",
        "--workers",
        "--method",
        "--out",
        "--checkpoint",
        "--resume",
        "SIEGEL_WORKERS",
    ] {
        assert!(s.contains(flag), "{flag}");
    }
}

#[test]
fn scan_file_stdout_and_workers_agree() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let eight = dir.path().join("eight.csv");
    let o = siegel(&[
        "scan",
        "--from",
        "3",
        "--to",
        "1000",
        "--workers",
        "1",
        "--out",
        path(&one),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty(), "data goes to the file only");
    siegel(&[
        "scan",
        "--to",
        "1000",
        "--workers",
        "8",
        "--block-size",
        "10",
        "--out",
        path(&eight),
    ]);
    let a = fs::read(&one).unwrap();
    assert_eq!(a, fs::read(&eight).unwrap());
    assert_eq!(String::from_utf8_lossy(&a).lines().count(), 168);
    let piped = siegel(&["scan", "--to", "1000"]);
    assert_eq!(piped.stdout, a);
}

#[test]
fn resume_on_finished_checkpoint_is_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let ck = dir.path().join("scan.ckpt");
    let args = [
        "scan",
        "--to",
        "3000",
        "--block-size",
        "64",
        "--out",
        path(&out),
        "--checkpoint",
        path(&ck),
    ];
    assert!(siegel(&args).status.success());
    let before = fs::read(&out).unwrap();
    let mut resume = args.to_vec();
    resume.push("--resume");
    let o = siegel(&resume);
    assert!(o.status.success());
    assert_eq!(fs::read(&out).unwrap(), before);
    // a different range must not reuse the checkpoint
    let mut other = resume.clone();
    other[2] = "4000";
    assert_eq!(siegel(&other).status.code(), Some(1));
}

#[test]
fn verify_passes_and_names_corrupted_prime() {
    let o = siegel(&["verify"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("PASS") && s.contains("worst relative error"));

    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("golden.csv");
    let text = include_str!("../../core/fixtures/golden.csv")
        .replace("0.24606852755296024389", "0.24606852785296024389");
    fs::write(&fixture, text).unwrap();
    let o = siegel(&["verify", "--fixtures", path(&fixture)]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("MISMATCH q = 163 L"), "{s}");
}

#[test]
fn census_and_extrema() {
    let s = stdout(&siegel(&["census", "--to", "1200"]));
    assert!(
        s.contains("first: 3, 7, 71, 191, 239, 311, 479, 719, 839, 1151"),
        "{s}"
    );
    let s = stdout(&siegel(&["census", "--to", "100"]));
    assert!(
        s.contains("first: 3, 5, 7, 11, 13, 19, 29, 43, 53, 67"),
        "{s}"
    );
    let s = stdout(&siegel(&["extrema", "--to", "1000"]));
    assert!(s.contains("max 0.6267599041 at q = 23"), "{s}");
    assert!(s.contains("max 0.4206022969 at q = 311"), "{s}");
}

#[test]
fn fftcheck_reports_model() {
    let o = siegel(&["fftcheck", "101"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(
        s.contains("N = 50") && s.contains("[ok]") && !s.contains("EXCEEDED"),
        "{s}"
    );
    let s = stdout(&siegel(&["fftcheck", "101", "--eps", "2^-64"]));
    assert!(s.contains("eps = 5.421010862427522e-20"), "{s}");
}

#[test]
fn plots() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    siegel(&["scan", "--to", "2000", "--out", path(&csv)]);
    let svg = dir.path().join("c1.svg");
    let o = siegel(&[
        "plot",
        "--input",
        path(&csv),
        "--column",
        "c1",
        "--kind",
        "histogram",
        "--bins",
        "20",
        "--out",
        path(&svg),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("fill=\"steelblue\"").count(), 20);
    assert!(text.contains("mean = ") && text.contains("sigma = "));
    assert!(stdout(&o).contains("reference (3 <= q <= 10^7)"));

    let scatter = dir.path().join("uli.svg");
    let o = siegel(&[
        "plot",
        "--input",
        path(&csv),
        "--column",
        "uli",
        "--log-x",
        "--ref",
        "0.66:0.66",
        "--out",
        path(&scatter),
    ]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&scatter)
        .unwrap()
        .contains("stroke-dasharray"));

    let none = dir.path().join("none.svg");
    let o = siegel(&[
        "plot",
        "--input",
        path(&csv),
        "--column",
        "c1",
        "--from",
        "5000",
        "--out",
        path(&none),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!none.exists());
}

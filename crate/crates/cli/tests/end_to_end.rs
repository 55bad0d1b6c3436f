use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn h3surf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h3surf")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    h3surf(args).status.code().expect("exit code")
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let path = out.to_str().unwrap().to_string();
    full.extend(["--out", &path]);
    assert_eq!(code(&full), 0, "{full:?}");
    fs::read(out).unwrap()
}

#[test]
fn curvature_of_the_plane() {
    let o = h3surf(&["curvature", "--f", "0", "--domain", "-1", "1", "-1", "1", "--grid", "3", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,f,K,H,det_gauss,minimal_residual,flat_residual");
    let r = rows(&text);
    assert_eq!(r.len(), 9);
    assert!(r.iter().all(|row| row[4] == 0.0));
    let centre = r.iter().find(|row| row[0] == 0.0 && row[1] == 0.0).unwrap();
    assert_eq!(centre[3], -0.75);
}

#[test]
fn minimal_family_rows_have_small_residual() {
    let o = h3surf(&["curvature", "--family", "minimal-eqm", "--C", "1", "--domain", "-1", "1", "-2", "2", "--grid", "9", "9"]);
    assert_eq!(o.status.code(), Some(0));
    for row in rows(&String::from_utf8(o.stdout).unwrap()) {
        assert!(row[6].abs() <= 1e-9);
    }
}

#[test]
fn gaussmap_examples() {
    let o = h3surf(&["gaussmap", "--f", "0", "--domain", "0", "2", "-1", "1", "--grid", "3", "3"]);
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    let row = r.iter().find(|row| row[0] == 2.0 && row[1] == 0.0).unwrap();
    assert_eq!(&row[2..], &[0.0, 1.0, 0.25]);

    let o = h3surf(&["gaussmap", "--f", "x*y/2", "--grid", "4", "4"]);
    assert!(rows(&String::from_utf8(o.stdout).unwrap()).iter().all(|row| row[4] == 0.0));

    // det column is u''v'' = A * A B y^(A-1)
    let o = h3surf(&["gaussmap", "--family", "flat-power", "--A", "2", "--B", "1.5", "--domain", "-1", "1", "0.5", "2", "--grid", "4", "4"]);
    assert_eq!(o.status.code(), Some(0));
    for row in rows(&String::from_utf8(o.stdout).unwrap()) {
        let want = 2.0 * 2.0 * 1.5 * row[1];
        assert!((row[4] - want).abs() < 1e-12 * want.abs().max(1.0), "{row:?}");
    }
}

#[test]
fn mesh_layout() {
    let o = h3surf(&["mesh", "--f", "x*y/2", "--grid", "2", "2"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);

    let o = h3surf(&["mesh", "--f", "x*y/2", "--grid", "3", "3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let verts: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| l[2..].split(' ').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(verts.len(), 9);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8);
    assert_eq!(verts.iter().find(|v| v[0] == 1.0 && v[1] == 1.0).unwrap()[2], 0.5);
    for l in text.lines() {
        assert!(!l.ends_with(' ') && !l.contains("  "), "{l:?}");
    }
}

#[test]
fn solve_ode_examples() {
    let o = h3surf(&["solve-ode", "--K1", "0", "--K2", "2", "--v0prime", "1", "--span", "0", "1", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "y,v,vp,vpp");
    let last = rows(&text).pop().unwrap();
    assert_eq!(last[0], 1.0);
    assert!((last[2] - 0.5f64.exp()).abs() < 1e-8);

    let o = h3surf(&["solve-ode", "--K1", "0", "--K2", "1", "--v0prime", "0"]);
    assert!(rows(&String::from_utf8(o.stdout).unwrap()).iter().all(|r| r[2] == 0.0));

    assert_eq!(code(&["solve-ode", "--K1", "1", "--C1", "0.5", "--span", "0", "1"]), 3);
}

#[test]
fn exit_code_contract() {
    assert_eq!(code(&["curvature", "--f", "x"]), 0);
    // usage and parse errors
    assert_eq!(code(&["curvature", "--f", "x**y"]), 2);
    assert_eq!(code(&["curvature", "--f", "foo(x)"]), 2);
    assert_eq!(code(&["curvature", "--f", "x", "--grid", "1", "5"]), 2);
    assert_eq!(code(&["curvature", "--f", "x", "--domain", "1", "1", "0", "1"]), 2);
    assert_eq!(code(&["curvature", "--family", "flat-power", "--A", "-1", "--B", "1"]), 2);
    assert_eq!(code(&["curvature", "--family", "no-such"]), 2);
    assert_eq!(code(&["curvature"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["verify", "--suite", "no-such"]), 2);
    // runtime domain errors
    assert_eq!(code(&["curvature", "--f", "ln(x)", "--domain", "-1", "1", "-1", "1"]), 3);
    assert_eq!(code(&["mesh", "--f", "1/x", "--grid", "3", "3"]), 3);
    assert_eq!(code(&["gaussmap", "--f", "sqrt(y)"]), 3);
}

#[test]
fn domain_error_names_the_point() {
    let o = h3surf(&["curvature", "--f", "ln(x)", "--domain", "-1", "1", "-1", "1"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("(-1, -1)"), "{err}");
}

#[test]
fn verify_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.csv");
    let o = h3surf(&["verify", "--suite", "minimal-family", "--summary", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("PASS"));
    let text = fs::read_to_string(&summary).unwrap();
    assert_eq!(text.lines().next().unwrap(), "name,status,max_error");
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.contains(",PASS,")));

    let o = h3surf(&["verify", "--suite", "brioschi", "--summary", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["curvature", "--f", "sin(x)*y + x^2/3", "--grid", "7", "5"],
        &["gaussmap", "--u", "x^3", "--v", "exp(y)", "--grid", "6", "6"],
        &["mesh", "--family", "flat-zero-det", "--A", "1", "--C", "2", "--domain", "-1", "1", "0", "1", "--grid", "5", "5"],
        &["curvature", "--family", "flat-general", "--C1", "5", "--K1", "1", "--K2", "0.5", "--domain", "-1", "1", "0", "2"],
        &["solve-ode", "--C1", "5", "--K1", "1", "--K2", "0.5", "--span", "0", "2", "--samples", "21"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{k}"), args);
        let b = run_to(dir.path(), &format!("b{k}"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

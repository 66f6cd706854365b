mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use branchforge::complex::format::{load_complex, parse_complex};
use branchforge::homology::Chain;

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(common::data_dir()).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchforge"))
        .current_dir(dir)
        .env_remove(branchforge::cli::SEED_VAR)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_writes_a_witness_next_to_the_locus() {
    let dir = workspace();
    let o = run(dir.path(), &["cover", "check", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("decision: class vanishes"));
    let w = Chain::parse(&fs::read_to_string(dir.path().join("poles.d7.chain")).unwrap()).unwrap();
    let b = w.boundary();
    assert_eq!((b.coefficient(&[4]) - 1).rem_euclid(7), 0);
    assert_eq!((b.coefficient(&[5]) + 1).rem_euclid(7), 0);

    let o = run(dir.path(), &["cover", "check", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "3", "-w", "w.chain"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("w.chain").exists());
}

#[test]
fn nonvanishing_class_exits_one_with_a_certificate() {
    let dir = workspace();
    let o = run(dir.path(), &["cover", "check", "-m", "torus3.cx", "-s", "circle.sub", "-d", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("class nonvanishing, certificate row"), "{text}");
    assert!(text.contains("FAIL"));
    let o = run(dir.path(), &["cover", "build", "-m", "torus3.cx", "-s", "circle.sub", "-d", "3", "-o", "x.cx"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("x.cx").exists());
}

#[test]
fn build_is_verified_and_deterministic() {
    let dir = workspace();
    let args = ["cover", "build", "-m", "torus3.cx", "-s", "opposite_circles.sub", "-d", "3", "-o", "x.cx", "--report", "r.txt"];
    let o = run(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert!(text.contains("euler characteristic relation: pass"), "{text}");
    assert!(text.contains("result: pass"));
    let first = fs::read(dir.path().join("x.cx")).unwrap();
    let x = load_complex(dir.path().join("x.cx")).unwrap();
    assert_eq!(x.f_vector(), vec![132, 996, 1728, 864]);
    assert_eq!(x.euler_characteristic(), 0);

    let again = run(dir.path(), &args);
    assert_eq!(stdout(&again), stdout(&o));
    assert_eq!(fs::read(dir.path().join("x.cx")).unwrap(), first);
    assert_eq!(parse_complex(&String::from_utf8(first).unwrap()).unwrap().f_vector(), x.f_vector());
}

#[test]
fn build_accepts_a_given_seifert_chain() {
    let dir = workspace();
    let o = run(dir.path(), &["cover", "check", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        dir.path(),
        &["cover", "build", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "4", "-o", "x.cx", "--seifert", "poles.d4.chain"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let x = load_complex(dir.path().join("x.cx")).unwrap();
    assert_eq!(x.euler_characteristic(), 2);
}

#[test]
fn symmetry_verify_passes_on_the_corpus() {
    let dir = workspace();
    for setup in ["sphere_setup_d2.toml", "sphere_setup_d3.toml", "torus3_setup_d3.toml"] {
        let o = run(dir.path(), &["symmetry", "verify", "--setup", setup, "--report", "sym.txt"]);
        assert_eq!(o.status.code(), Some(0), "{setup}\n{}", stdout(&o));
        assert!(fs::read_to_string(dir.path().join("sym.txt")).unwrap().contains("exactly d pieces: pass"));
    }
}

#[test]
fn cone_commands() {
    let dir = workspace();
    let o = run(dir.path(), &["cone", "dist", "--alpha", "4pi", "--p", "1,0", "--q", "1,pi/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.51337400659650"), "{}", stdout(&o));
    assert!(!stdout(&o).contains("result:"));
    let o = run(dir.path(), &["cone", "volume", "--vol", "2.5", "-d", "4"]);
    assert!(stdout(&o).contains("10"), "{}", stdout(&o));
    let o = run(dir.path(), &["cone", "angles", "--pair", "3,5"]);
    assert!(stdout(&o).contains("smooth gluing: true"), "{}", stdout(&o));
    let o = run(dir.path(), &["cone", "angles", "--sector", "3,pi/2"]);
    assert!(stdout(&o).contains("smooth gluing: false"), "{}", stdout(&o));
    let o = run(dir.path(), &["cone", "volume", "--vol", "1", "-d", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn einstein_commands_write_csv() {
    let dir = workspace();
    let o = run(dir.path(), &["einstein", "solve", "--dim", "4", "--alpha", "pi", "--step", "1e-2", "--csv", "t.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,f,df,g,dg,K_r_theta,K_r_x,K_theta_x,K_x_y"));
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(last[0] <= 10.0 && last[0] > 9.98);
    let o = run(dir.path(), &["einstein", "sweep", "--dim", "3", "--alphas", "pi/2,pi", "--step", "1e-2", "--csv", "s.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rows: Vec<String> = fs::read_to_string(dir.path().join("s.csv")).unwrap().lines().map(String::from).collect();
    assert_eq!(rows.len(), 3);
    let g0: f64 = rows[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((g0 - 0.5).abs() < 1e-6);
}

#[test]
fn homology_and_snf() {
    let dir = workspace();
    let o = run(dir.path(), &["homology", "compute", "-m", "torus3.cx", "-k", "1"]);
    assert!(stdout(&o).contains("Z^3"), "{}", stdout(&o));
    let o = run(dir.path(), &["homology", "compute", "-m", "torus3.cx", "-k", "1", "--coeffs", "4"]);
    assert!(stdout(&o).contains("Z/4"), "{}", stdout(&o));
    fs::write(dir.path().join("m.txt"), "2 4\n6 8\n").unwrap();
    let o = run(dir.path(), &["snf", "m.txt"]);
    assert!(stdout(&o).ends_with("invariant factors: 2 4\n"), "{}", stdout(&o));
}

#[test]
fn seed_is_echoed_and_errors_exit_two() {
    let dir = workspace();
    let o = Command::new(env!("CARGO_BIN_EXE_branchforge"))
        .current_dir(dir.path())
        .env(branchforge::cli::SEED_VAR, "17")
        .args(["cover", "check", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "2"])
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("seed: 17\n"), "{}", stdout(&o));
    let o = run(dir.path(), &["cover", "check", "-m", "missing.cx", "-s", "poles.sub", "-d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(run(dir.path(), &["bogus"]).status.code(), Some(2));
    let o = run(dir.path(), &["-q", "cover", "check", "-m", "octahedron.cx", "-s", "poles.sub", "-d", "2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), ""));
}

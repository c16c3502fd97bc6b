use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn verba(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verba"))
        .args(args)
        .env("VERBA_CACHE_DIR", cache)
        .env_remove("VERBA_SEEDS")
        .output()
        .expect("run verba")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_culler() {
    let dir = tempfile::tempdir().unwrap();
    let o = verba(&["verify", "[x,y]^3", "[y^x, x^(y^-1) x^-2][x^(y^-1), y^2]"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PASS");
    let o = verba(&["verify", "x y", "y x"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn reduce_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = verba(&["reduce", "x y y^-1"], dir.path());
    assert_eq!((o.status.code(), stdout(&o).trim().to_string()), (Some(0), "x".to_string()));
    let o = verba(&["reduce", "[x,"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("E_PARSE: "), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verba(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(verba(&["cover"], dir.path()).status.code(), Some(2));
    assert_eq!(verba(&["wlength", "--group", "Q9", "--template", "gamma2"], dir.path()).status.code(), Some(2));
}

#[test]
fn wlength_histogram_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["wlength", "--group", "A5", "--template", "gamma2"];
    let first = verba(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).contains("histogram {0:1, 1:59}"), "{}", stdout(&first));
    let info = verba(&["cache", "info"], dir.path());
    assert!(stdout(&info).contains(": 1 tables"), "{}", stdout(&info));

    let second = verba(&args, dir.path());
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&second).is_empty());

    let file = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    fs::write(&file, "garbage").unwrap();
    let third = verba(&args, dir.path());
    assert_eq!(stdout(&first), stdout(&third));
    assert!(stderr(&third).contains("warning"), "{}", stderr(&third));

    let clear = verba(&["cache", "clear"], dir.path());
    assert!(stdout(&clear).starts_with("removed 1 "));
    assert!(stdout(&verba(&["cache", "info"], dir.path())).contains(": 0 tables"));
}

#[test]
fn wlength_element_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = verba(&["wlength", "--group", "S3", "--template", "w:x^2", "--element", "1 2 0"], dir.path());
    assert_eq!(stdout(&o).trim(), "1");
    let o = verba(&["wlength", "--group", "S3", "--template", "w:x^2", "--element", "1 0 2"], dir.path());
    assert_eq!(stdout(&o).trim(), "UNREACHABLE");
    let o = verba(&["--budget", "10", "wlength", "--group", "A5", "--template", "gamma3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("E_BUDGET: "));
}

#[test]
fn bound_with_facts_file() {
    let dir = tempfile::tempdir().unwrap();
    let facts = dir.path().join("xy.facts");
    fs::write(&facts, "L FREE [x,y] | w:[x,y] ^ 3 = 0 / 2 # cubic identity\n").unwrap();
    let f = facts.to_str().unwrap();
    let o = verba(&["bound", "--facts", f, "--declare", "SL [x,y] | w:[x,y]"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("scl(x y x^-1 y^-1) = [1/2, 1/2]"), "{out}");
    assert!(out.contains("R5") && out.contains("SEED(cubic identity)"), "{out}");

    let o = verba(&["bound", "--facts", f, "--declare", "SL [x,y] | w:[x,y]", "--records"], dir.path());
    for line in stdout(&o).lines() {
        assert!(line.split(' ').all(|kv| kv.contains('=')), "{line}");
    }

    // without the R5 rule the ceiling is not reached
    let o = verba(&["bound", "--facts", f, "--declare", "SL [x,y] | w:[x,y]", "--rules", "R3"], dir.path());
    assert!(stdout(&o).starts_with("scl(x y x^-1 y^-1) = [1/2, 1]"), "{}", stdout(&o));
}

#[test]
fn bound_inconsistency_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let facts = dir.path().join("bad.facts");
    fs::write(&facts, "SCL FREE [x,y] = 1 / inf # wrong\nSCL FREE [x,y] = 0 / 1/2 # right\n").unwrap();
    let o = verba(&["bound", "--facts", facts.to_str().unwrap(), "--declare", "SCL [x,y]"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("E_INCONSISTENT: ") && err.contains("wrong") && err.contains("right"), "{err}");

    let o = verba(&["bound", "--declare", "SL gamma5 | gamma5", "--cap", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stderr(&o).starts_with("E_ITERATION_CAP: "));
}

#[test]
fn seeds_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("empty.facts");
    fs::write(&seeds, "# nothing\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_verba"))
        .args(["experiment", "run", "xy_squared"])
        .env("VERBA_SEEDS", &seeds)
        .env("VERBA_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("E_SEED: "), "{}", stderr(&o));
    let o = verba(&["experiment", "run", "xy_squared", "--seeds", "/nonexistent/seeds"], dir.path());
    assert!(stderr(&o).starts_with("E_IO: "));
}

#[test]
fn cover_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = verba(&["cover", "--n", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rho(x) = 2 1 0") && out.contains("rho(y) = 1 0 2"), "{out}");
    assert!(out.contains("genus = 2"));
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn experiments_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&verba(&["experiment", "list"], dir.path()));
    assert!(list.lines().filter(|l| l.contains("claim:")).count() >= 8);
    let report = dir.path().join("report.txt");
    let a = verba(&["experiment", "run", "xy_n", "--report", report.to_str().unwrap()], dir.path());
    let b = verba(&["experiment", "run", "xy_n"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&report).unwrap(), a.stdout);
    let o = verba(&["experiment", "run", "xy_m"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean: xy_n"), "{}", stderr(&o));
}

#[test]
fn rewrite_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.txt");
    let o = verba(&["rewrite", "square-to-gamma3", "x", "[y,z]", "3", "--out", cert.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("GAMMA_N_WORD[3]=7"), "{}", stdout(&o));
    let o = verba(&["check", cert.to_str().unwrap()], dir.path());
    assert_eq!(stdout(&o).trim(), "PASS 8 factors");

    let text = fs::read_to_string(&cert).unwrap().replacen("TARGET x", "TARGET y", 1);
    fs::write(&cert, text).unwrap();
    let o = verba(&["check", cert.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));

    let o = verba(&["rewrite", "hall-witt-split", "x", "[s,t]", "[u,v]"], dir.path());
    assert!(stdout(&o).contains("BETA2_WORD=2"), "{}", stdout(&o));
    let o = verba(&["rewrite", "telescope-line", "--g", "x,y", "--a", "1,-2", "--b", "3,0"], dir.path());
    assert!(stdout(&o).contains("COUNTS RAW=2"), "{}", stdout(&o));
}

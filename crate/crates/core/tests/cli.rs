use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SQUARE: &str = "kcolor-instance 1\nk 2\nn 4\npoint 0 0\npoint 4 0\npoint 4 4\npoint 0 4\ncolors 1 1 1 1 2 1\n";

fn kcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcolor")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(|r| r.split_whitespace().next().unwrap_or("").to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{out}"))
}

#[test]
fn count_convex_square() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.txt", SQUARE);
    let o = kcolor(&["count", "--instance", &two]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "monochromatic"), "0");
    assert_eq!(field(&stdout(&o), "crossings"), "1");
    let one = write(dir.path(), "one.txt", &SQUARE.replace("k 2", "k 1").replace("2 1\n", "1 1\n"));
    let o = kcolor(&["count", "--instance", &one]);
    assert_eq!(field(&stdout(&o), "monochromatic"), "1");
}

#[test]
fn parse_error_exit_code_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", &SQUARE.replace("point 4 4", "point 4 four"));
    let o = kcolor(&["count", "--instance", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
}

#[test]
fn invariant_violations_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let col = write(dir.path(), "col.txt", &SQUARE.replace("point 4 4", "point 2 0"));
    let o = kcolor(&["count", "--instance", &col]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("collinear"));
    let cyc = write(dir.path(), "cyc.txt", &format!("{SQUARE}matching 1 0 3 2\n"));
    let o = kcolor(&["bound", "--instance", &cyc, "--use-given-matching"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_is_deterministic_and_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = kcolor(&["search", "--n", "10", "--k", "2", "--seed", "5", "--restarts", "2", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.contains("seed 5"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
    let o = kcolor(&["count", "--instance", a.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn search_with_many_colors_has_no_monochromatic_crossing() {
    let o = kcolor(&["search", "--n", "6", "--k", "15", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "monochromatic"), "0");
}

#[test]
fn bound_optimal_vs_given_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "inst.txt", &format!("{SQUARE}matching 1 2 3 0\ndetails 1:L:R 1:S:L 2:R:R 1:L:L\n"));
    let best_path = dir.path().join("best.txt");
    let o = kcolor(&["bound", "--instance", &inst, "--out", best_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let optimal: f64 = field(&stdout(&o), "bound").parse().unwrap();
    let o = kcolor(&["bound", "--instance", &inst, "--use-given-matching"]);
    assert!(o.status.success());
    let given: f64 = field(&stdout(&o), "bound").parse().unwrap();
    assert!(optimal <= given);
    // the written instance reproduces the optimal bound with its own matching
    let o = kcolor(&["bound", "--instance", best_path.to_str().unwrap(), "--use-given-matching"]);
    assert_eq!(field(&stdout(&o), "bound").parse::<f64>().unwrap(), optimal);

    let o = kcolor(&["verify", "--instance", &inst, "--t-max", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("verify: pass"));
    let o = kcolor(&["verify", "--instance", &inst, "--t-max", "0"]);
    assert!(o.status.success());
    let o = kcolor(&["verify", "--instance", &inst, "--t-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

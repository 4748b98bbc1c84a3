use std::path::PathBuf;
use std::process::{Command, Output};

fn lowdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdisc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lowdisc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_then_disc() {
    let file = scratch("halton.txt");
    let f = file.to_str().unwrap();
    assert!(lowdisc(&["gen", "--primes", "2,3", "--n", "30", "-o", f]).status.success());
    let o = lowdisc(&["disc", f, "--method", "exact"]);
    assert!(o.status.success());
    let line = stdout(&o);
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields[1], "exact_grid");
    assert_eq!(fields.len(), 5);
    let v: f64 = fields[0].parse().unwrap();
    assert!(v > 0.0 && v < 1.0);
}

#[test]
fn vdc_series_csv() {
    let cfg = write("vdc5.json", r#"{"primes":[5],"shifts":[1],"perms":[[0,1,2,3,4]]}"#);
    let o = lowdisc(&["series", "--config", &cfg, "--n-max", "1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,scaled"));
    assert_eq!(lines.count(), 999);
}

#[test]
fn bounds_rows() {
    let o = lowdisc(&["bounds", "sqrt", "--d", "4", "--n", "40,392"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("sqrt_bound,2.4631832,4,40,0.77892"));
    let o = lowdisc(&["bounds", "crossover", "--kind", "base23"]);
    assert_eq!(stdout(&o).trim(), "crossover_threshold,base23,3,2.4631832,28");
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "--dim", "2", "--n", "30", "--budget-shifts", "8", "--budget-perms", "4", "--seed", "7"];
    let a = lowdisc(&args);
    let b = lowdisc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert!(stdout(&a).contains("\"shifts\""));
}

#[test]
fn reproduce_exit_codes() {
    let empty = write("empty.json", r#"{"table_id":"empty","entries":[]}"#);
    let o = lowdisc(&["reproduce", "--manifest", &empty]);
    assert_eq!(o.status.code(), Some(0));

    let wrong = write(
        "wrong.json",
        r#"{"table_id":"wrong","entries":[{"label":"vdc2","generator":{"kind":"sequence",
        "config":{"primes":[2],"shifts":[1],"perms":[[0,1]]}},"n":100,
        "expect":{"approx":{"value":0.5,"tol":1e-6}},"method":"closed_form"}]}"#,
    );
    let o = lowdisc(&["reproduce", "--manifest", &wrong]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let broken = write("broken.json", "{");
    assert_eq!(lowdisc(&["reproduce", "--manifest", &broken]).status.code(), Some(2));
    let missing = scratch("missing.json");
    assert_eq!(lowdisc(&["reproduce", "--manifest", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn padic_check_small() {
    let o = lowdisc(&["padic-check", "--primes", "2,3", "--max-shift", "5", "--perms", "2", "--sizes", "10,100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn winners_table() {
    let a = write("a.csv", "n,scaled\n2,1.0\n3,0.5\n");
    let b = write("b.csv", "n,scaled\n2,1.0\n3,0.7\n");
    let o = lowdisc(&["winners", &a, &b]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "file,ties_count_for_all,ties_count_for_none");
    assert!(rows[1].ends_with(",2,1"));
    assert!(rows[2].ends_with(",1,0"));
}

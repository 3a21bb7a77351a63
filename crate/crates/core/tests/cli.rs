use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barycheb"))
        .args(args)
        .env_remove("BARYCHEB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nodes_table() {
    let o = run(&["nodes", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k,x\n0,-1.0\n1,0.0\n2,1.0\n");
}

#[test]
fn binned_nodes_table() {
    let o = run(&["nodes", "--n", "4", "--bins", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,bin,base,u,x");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[3], "2,1,0.0,0.0,0.0");
}

#[test]
fn bn_single_row() {
    let o = run(&["bn", "--n", "63"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], "n_plus_1,bn");
    let (np1, bn) = rows[1].split_once(',').unwrap();
    assert_eq!(np1, "64");
    let bn: f64 = bn.parse().unwrap();
    assert!(bn > 1.0e-16 && bn < 1.0e-15);
}

#[test]
fn step_one_critical_cell_is_refused() {
    let o = run(&["errors", "--f", "cos1e4", "--n", "999"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let allowed = run(&[
        "errors",
        "--f",
        "cos1e4",
        "--n",
        "999",
        "--scale",
        "200",
        "--allow-step1",
    ]);
    assert!(allowed.status.success());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["errors", "--f", "sin7", "--n", "999"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify-layout", "--bins", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn errors_csv_is_deterministic() {
    let args = [
        "errors",
        "--formula",
        "first",
        "--bins",
        "3",
        "--n",
        "999",
        "--f",
        "cos100",
        "--scale",
        "200",
    ];
    let a = run(&args);
    assert!(a.status.success());
    let out = stdout(&a);
    assert!(out.starts_with("t,stepII,stepIII,overall\n"));
    assert_eq!(out.lines().count(), 1 + 500);
    let threaded: Vec<&str> = args.iter().copied().chain(["--threads", "2"]).collect();
    assert_eq!(stdout(&run(&args)), out);
    assert_eq!(stdout(&run(&threaded)), out);
    // every value parses back
    for line in out.lines().skip(1) {
        for v in line.split(',') {
            v.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn ratio_row() {
    let o = run(&["ratio", "--n", "999", "--f", "cos10", "--scale", "200"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], &["1000", "first", "usual", "cos10", "Tm1"]);
    assert!(row[7].parse::<f64>().unwrap() > 10.0);
}

#[test]
fn zstats_and_epoly_schemas() {
    let z = run(&["zstats", "--n", "63"]);
    assert!(z.status.success());
    let out = stdout(&z);
    assert!(out.starts_with("k,z_k\n"));
    assert_eq!(out.lines().count(), 65);
    let e = run(&["epoly", "--n", "16"]);
    assert!(e.status.success());
    assert!(stdout(&e).starts_with("t,E,L,Q\n"));
}

#[test]
fn bounds_report() {
    let o = run(&["bounds", "--n", "64", "--bins", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("n,grid,bound,lhs,rhs,satisfied,detail\n"));
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(5) == Some("true")));
}

#[test]
fn verify_layouts() {
    for bins in ["3", "dyadic:10"] {
        let o = run(&["verify-layout", "--bins", bins, "--n", "512"]);
        assert!(o.status.success(), "{bins}");
        assert!(stdout(&o)
            .lines()
            .skip(1)
            .all(|l| l.split(',').nth(1) == Some("true")));
    }
}

#[test]
fn eval_and_weights() {
    let o = run(&["eval", "--n", "32", "--t", "0.3"]);
    let out = stdout(&o);
    let v: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((v - 0.3f64.cos()).abs() < 1.0e-15);
    let w = run(&["weights", "--n", "2", "--formula", "second"]);
    assert_eq!(stdout(&w), "k,w\n0,0.5\n1,-1.0\n2,0.5\n");
}

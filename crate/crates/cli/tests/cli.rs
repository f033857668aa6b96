use std::fs;
use std::process::{Command, Output};

fn srk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srk")).args(args).output().expect("spawn srk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn poles_round_trip_through_custom_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let o = srk(&["poles", "extended", "--len", "4", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&file).unwrap(), "inf\n0.0000000000000000e0\ninf\n0.0000000000000000e0\n");

    let o = srk(&["poles", "zolotarev", "--interval", "1,100", "--len", "1"]);
    let p: f64 = stdout(&o).trim().parse().unwrap();
    assert!((p + 10.0).abs() < 1e-10);

    // A custom pole file behaves like the named strategy it was printed from.
    let zfile = dir.path().join("z.txt");
    srk(&["poles", "eds-cauchy", "--interval", "0.01,4", "--len", "12", "--out", zfile.to_str().unwrap()]);
    let base = ["funv", "--matrix", "tridiag:60", "--function", "power:-0.5", "--tol", "0", "--maxiter", "12"];
    let named = srk(&[&base[..], &["--poles", "eds-cauchy", "--interval", "0.01,4"]].concat());
    let custom = srk(&[&base[..], &["--poles", zfile.to_str().unwrap(), "--interval", "0.01,4"]].concat());
    assert!(named.status.success() && custom.status.success());
    assert_eq!(column(&stdout(&named), "true_error"), column(&stdout(&custom), "true_error"));
}

#[test]
fn funv_trace_converges_and_is_seed_deterministic() {
    let args = ["--seed", "7", "funv", "--matrix", "tridiag:400", "--function", "power:-0.5", "--tol", "1e-10"];
    let a = srk(&args);
    let b = srk(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("ell,est_error,true_error,bound\n"));
    let err = column(&csv, "true_error");
    assert!(*err.last().unwrap() < 1e-8);
    let other = srk(&["--seed", "8", "funv", "--matrix", "tridiag:400", "--function", "power:-0.5", "--tol", "1e-10"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn funv_bound_dominates_error_for_zolotarev() {
    let o = srk(&[
        "funv",
        "--matrix",
        "tridiag:300",
        "--function",
        "phi:1",
        "--poles",
        "zolotarev",
        "--tol",
        "0",
        "--maxiter",
        "16",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    for (e, b) in column(&csv, "true_error").into_iter().zip(column(&csv, "bound")) {
        assert!(e <= b, "{e} > {b}");
    }
}

#[test]
fn funv_reads_matrix_market_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let mtx = dir.path().join("a.mtx");
    fs::write(&mtx, "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 2 3\n3 3 4\n2 1 0.5\n").unwrap();
    let out = dir.path().join("trace.csv");
    let res = dir.path().join("x.csv");
    let o = srk(&[
        "--gnuplot",
        "funv",
        "--matrix",
        mtx.to_str().unwrap(),
        "--function",
        "inverse",
        "--poles",
        "polynomial",
        "--tol",
        "0",
        "--maxiter",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--result",
        res.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let err = column(&fs::read_to_string(&out).unwrap(), "true_error");
    assert!(err[2] < 1e-12);
    assert!(dir.path().join("trace.gp").exists());
    assert_eq!(fs::read_to_string(&res).unwrap().lines().count(), 4);
}

#[test]
fn oracle_off_leaves_true_error_empty() {
    let o = srk(&["funv", "--matrix", "tridiag:50", "--function", "inverse", "--oracle", "off", "--maxiter", "5"]);
    assert!(column(&stdout(&o), "true_error").iter().all(|e| e.is_nan()));
}

#[test]
fn kronfun_with_factor_files_and_svd_report() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.mtx");
    let v = dir.path().join("v.mtx");
    let col = |n: usize| {
        let mut s = format!("%%MatrixMarket matrix array real general\n{n} 1\n");
        for i in 0..n {
            s.push_str(&format!("{}\n", 1.0 + i as f64 / n as f64));
        }
        s
    };
    fs::write(&u, col(30)).unwrap();
    fs::write(&v, col(20)).unwrap();
    let svd = dir.path().join("svd.csv");
    let o = srk(&[
        "kronfun",
        "--a",
        "tridiag:30",
        "--b",
        "tridiag:20",
        "--ufile",
        u.to_str().unwrap(),
        "--vfile",
        v.to_str().unwrap(),
        "--function",
        "power:-0.5",
        "--poles",
        "cauchy-kron",
        "--ell",
        "8",
        "--svd-report",
        svd.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    for (e, b) in column(&csv, "true_error").into_iter().zip(column(&csv, "bound")) {
        assert!(e <= b);
    }
    let report = fs::read_to_string(&svd).unwrap();
    assert!(report.starts_with("index,sigma,bound\n"));
    assert_eq!(report.lines().count(), 21);
}

#[test]
fn experiment_bounds_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = srk(&[
        "experiment",
        "fig-cauchy-1d",
        "--n",
        "200",
        "--max-ell",
        "5",
        "--bounds-only",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let listing = stdout(&o);
    let files: Vec<&str> = listing.lines().map(str::trim).collect();
    assert!(!files.is_empty());
    let text = fs::read_to_string(files[0]).unwrap();
    let b = column(&text, "bound");
    assert_eq!(b.len(), 5);
    assert!(b.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn bad_inputs_exit_with_code_two() {
    for args in [
        &["funv", "--matrix", "tridiag:10", "--function", "nope"][..],
        &["funv", "--matrix", "missing.mtx", "--function", "inverse"][..],
        &["poles", "zolotarev", "--len", "3"][..],
        &["experiment", "fig-lapl-2d", "--n", "5000", "--bounds-only"][..],
    ] {
        let o = srk(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    assert_eq!(srk(&["experiment", "fig-unknown"]).status.code(), Some(2));
}

#[test]
fn accept_single_criterion() {
    let o = srk(&["accept", "--criterion", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS]  2 zolotarev-bound"));
}

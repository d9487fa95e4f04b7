//! End-to-end runs of the `greenprop` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use greenprop_cli::output::{read_output, Parsed};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_greenprop"));
    c.env_remove("GREENPROP_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Runs with `--out` into a temp dir and reads the file back with the tool's reader.
fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> Parsed {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--out", &p]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    read_output(&path).expect("own output parses")
}

fn col(p: &Parsed, name: &str) -> usize {
    p.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(p: &Parsed, row: usize, name: &str) -> f64 {
    p.rows[row][col(p, name)].as_f64().unwrap_or(f64::NAN)
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn free_green_function_record() {
    let d = tmp();
    let p = run_to_file(d.path(), "g.csv", &["greens", "--potential", "free", "--x", "0", "--xprime", "1", "--energy", "0.5,0"]);
    // i e^{i}
    assert!((num(&p, 0, "re_g") + 1f64.sin()).abs() < 1e-14);
    assert!((num(&p, 0, "im_g") - 1f64.cos()).abs() < 1e-14);
    assert!(num(&p, 0, "jump_residual") < 1e-8);
    assert_eq!(p.manifest["command"], "greens");
    assert_eq!(p.manifest["method_path"], "closed_free");
    assert!(p.manifest["timestamp"].is_string());
}

#[test]
fn oscillator_pole_exits_with_numerical_failure() {
    let o = run(&["greens", "--potential", "harmonic", "--omega", "1", "--x", "0", "--xprime", "0", "--energy", "0.5,0"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
    assert!(o.stdout.is_empty());
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        vec!["greens", "--potential", "free", "--x", "0", "--xprime", "1", "--energy", "0.5,0,1"],
        vec!["greens", "--potential", "free", "--x", "0", "--xprime", "1", "--energy", "0.5;0"],
        vec!["greens", "--potential", "delta", "--x", "0", "--xprime", "1", "--energy", "0.5,0.1"],
        vec!["greens", "--potential", "harmonic", "--omega", "-1", "--x", "0", "--xprime", "1", "--energy", "0.5,0.1"],
        vec!["sweep", "--potential", "free", "--x-range", "0:1", "--t", "0,-1"],
        vec!["sweep", "--potential", "free", "--x-range", "0:1:4", "--energy", "1,1"],
        vec!["propagator", "--potential", "free", "--method", "spectral", "--x", "0", "--xprime", "0", "--t", "1,0"],
        vec!["greens", "--potential", "custom", "--potential-file", "/nonexistent.csv", "--x", "0", "--xprime", "0", "--energy", "1,1"],
    ] {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
}

#[test]
fn singular_and_caustic_times_exit_3() {
    let base = ["propagator", "--method", "closed", "--x", "0.1", "--xprime", "0.3"];
    let free: Vec<&str> = base.iter().copied().chain(["--potential", "free", "--t", "0,0"]).collect();
    assert_eq!(code(&run(&free)), 3);
    let pi = format!("{},0", std::f64::consts::PI);
    let osc: Vec<&str> = base.iter().copied().chain(["--potential", "harmonic", "--omega", "1", "--t", &pi]).collect();
    assert_eq!(code(&run(&osc)), 3);
}

#[test]
fn free_propagator_example() {
    let d = tmp();
    let p = run_to_file(
        d.path(),
        "k.jsonl",
        &["propagator", "--potential", "free", "--method", "closed", "--x", "0", "--xprime", "0", "--t", "1,0", "--format", "jsonl"],
    );
    let a = 1.0 / (8.0 * std::f64::consts::PI).sqrt() * 2f64.sqrt();
    assert!((num(&p, 0, "re_k") - a).abs() < 1e-12 && (num(&p, 0, "im_k") + a).abs() < 1e-12);
    assert!((num(&p, 0, "re_k") - 0.2820948).abs() < 1e-7);
    assert_eq!(p.rows[0][col(&p, "method")], "closed_free");
}

#[test]
fn oscillator_methods_agree() {
    let d = tmp();
    let args = |m: &'static str| {
        vec!["propagator", "--potential", "harmonic", "--omega", "1", "--method", m, "--t", "1,-0.05", "--x", "0.7", "--xprime", "-0.4"]
    };
    let closed = run_to_file(d.path(), "c.csv", &args("closed"));
    let mut long = args("spectral");
    long.extend(["--nmax", "500"]);
    let spectral = run_to_file(d.path(), "s.csv", &long);
    let diff = (num(&closed, 0, "re_k") - num(&spectral, 0, "re_k")).hypot(num(&closed, 0, "im_k") - num(&spectral, 0, "im_k"));
    assert!(diff < 1e-8, "{diff:e}");
    assert_eq!(spectral.manifest["method_path"]["n_max"], 500);
    // at 60 terms the e^{-0.05 n} tail is still about 5e-2 of the leading term
    let mut short = args("spectral");
    short.extend(["--nmax", "60"]);
    let s60 = run_to_file(d.path(), "s60.csv", &short);
    let miss = (num(&closed, 0, "re_k") - num(&s60, 0, "re_k")).hypot(num(&closed, 0, "im_k") - num(&s60, 0, "im_k"));
    assert!(miss > 1e-6 && miss < 1e-1, "{miss:e}");
}

#[test]
fn delta_inversion_matches_closed_form() {
    let d = tmp();
    let common = ["--potential", "delta", "--b", "1", "--t", "0,-0.8", "--x", "0.5", "--xprime", "0.5"];
    let mut inv = vec!["propagator", "--method", "inverse-laplace"];
    inv.extend(common);
    let mut cl = vec!["propagator", "--method", "closed"];
    cl.extend(common);
    let a = run_to_file(d.path(), "a.csv", &inv);
    let b = run_to_file(d.path(), "b.csv", &cl);
    assert!((num(&a, 0, "re_k") - num(&b, 0, "re_k")).abs() < 1e-6);
    assert_eq!(a.manifest["method_path"]["scheme"], "trapezoid_line");
    for scheme in ["talbot", "k-line"] {
        let mut s = inv.clone();
        s.extend(["--scheme", scheme]);
        let c = run_to_file(d.path(), &format!("{scheme}.csv"), &s);
        assert!((num(&c, 0, "re_k") - num(&b, 0, "re_k")).abs() < 1e-6, "{scheme}");
    }
}

#[test]
fn tolerance_comes_from_the_environment() {
    let d = tmp();
    let args = ["propagator", "--potential", "free", "--method", "inverse-laplace", "--t", "1,-0.3", "--x", "0.2", "--xprime", "-0.6"];
    let strict = run_to_file(d.path(), "strict.csv", &args);
    let path = d.path().join("loose.csv");
    let o = bin().env("GREENPROP_TOL", "1e-4").args(args).args(["--out", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(code(&o), 0);
    let loose = read_output(&path).unwrap();
    assert_eq!(loose.manifest["tolerance"], 1e-4);
    assert!(num(&loose, 0, "terms_used") < num(&strict, 0, "terms_used"));
    assert!((num(&loose, 0, "re_k") - num(&strict, 0, "re_k")).abs() < 1e-4);

    let bad = bin().env("GREENPROP_TOL", "tiny").args(args).output().unwrap();
    assert_eq!(code(&bad), 2);
    // a tolerance below rounding cannot be met by doubling nodes
    let unreachable = bin().env("GREENPROP_TOL", "1e-300").args(args).output().unwrap();
    assert_eq!(code(&unreachable), 4);
}

#[test]
fn heat_kernel_map_peaks_on_the_diagonal() {
    let d = tmp();
    let p = run_to_file(
        d.path(),
        "map.csv",
        &["sweep", "--potential", "free", "--quantity", "propagator", "--x-range", "-3:3:64", "--xprime-range", "-3:3:64", "--t", "0,-0.5"],
    );
    assert_eq!(p.rows.len(), 64);
    assert_eq!(p.columns.len(), 65);
    assert_eq!(p.columns[0], "x\\x_prime");
    for (i, row) in p.rows.iter().enumerate() {
        let vals: Vec<f64> = row[1..].iter().map(|v| v.as_f64().unwrap()).collect();
        let arg = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(arg, i);
    }
    assert!(p.manifest["flagged"].as_array().unwrap().is_empty());
}

#[test]
fn oscillator_poles_are_flagged_columns() {
    let d = tmp();
    let p = run_to_file(
        d.path(),
        "poles.csv",
        &["sweep", "--potential", "harmonic", "--omega", "1", "--quantity", "greens", "--xprime", "0.1",
          "--x-range", "-1:1:5", "--energy-range", "0:3:31"],
    );
    let flagged = p.manifest["flagged"].as_array().unwrap();
    let mut cols: Vec<u64> = flagged.iter().map(|f| f["col"].as_u64().unwrap()).collect();
    cols.sort();
    cols.dedup();
    // E = 0.5, 1.5, 2.5 on a 0.1 grid
    assert_eq!(cols, vec![5, 15, 25], "{flagged:?}");
    assert_eq!(flagged.len(), 15);
    for f in flagged {
        let (r, c) = (f["row"].as_u64().unwrap() as usize, f["col"].as_u64().unwrap() as usize);
        assert!(p.rows[r][c + 1].is_null());
    }
}

#[test]
fn delta_kernel_has_a_kink_at_the_origin() {
    let d = tmp();
    let p = run_to_file(
        d.path(),
        "kink.csv",
        &["sweep", "--potential", "delta", "--b", "2", "--quantity", "propagator", "--xprime", "0.5", "--t", "0,-0.5",
          "--x-range", "-1:1:41"],
    );
    let v: Vec<f64> = p.rows.iter().map(|r| r[1].as_f64().unwrap()).collect();
    let curvature: Vec<f64> = v.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]).abs()).collect();
    let worst = curvature.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    // the window centred on x = 0 is index 19 of the second differences
    assert_eq!(worst + 1, 20);
}

#[test]
fn outputs_are_reproducible() {
    let d = tmp();
    let args = ["sweep", "--potential", "delta", "--b", "1", "--quantity", "propagator", "--method", "inverse-laplace",
                "--x-range", "-1:1:9", "--xprime-range", "-1:1:7", "--t", "0.4,-0.6", "--component", "re"];
    let body = |name: &str| {
        let path = d.path().join(name);
        assert_eq!(code(&bin().args(args).args(["--out", path.to_str().unwrap()]).output().unwrap()), 0);
        let text = std::fs::read_to_string(path).unwrap();
        text.lines().skip(1).map(String::from).collect::<Vec<_>>()
    };
    assert_eq!(body("a.csv"), body("b.csv"));

    let report = |seed: &str| {
        let o = run(&["validate", "--suite", "jump", "--seed", seed]);
        assert_eq!(code(&o), 0);
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["runtime_s"] = Value::Null;
        for p in v["properties"].as_array_mut().unwrap() {
            p["runtime_s"] = Value::Null;
        }
        v
    };
    let a = report("7");
    assert_eq!(a, report("7"));
    assert_ne!(a["properties"][0]["max_residual"], report("8")["properties"][0]["max_residual"]);
}

#[test]
fn jump_suite_runs_sixty_checks() {
    let o = run(&["validate", "--suite", "jump", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let p = &v["properties"][0];
    assert_eq!(p["checks"], 60);
    assert!(p["max_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn mehler_and_wronskian_suites_pass() {
    for suite in ["mehler", "wronskian", "symmetry"] {
        let d = tmp();
        let path = d.path().join("r.json");
        let o = run(&["validate", "--suite", suite, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{suite}");
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(v["pass"], true);
        if suite == "mehler" {
            assert_eq!(v["properties"][0]["details"]["table"].as_array().unwrap().len(), 4);
        }
    }
}

fn write_quartic(dir: &Path) -> PathBuf {
    let path = dir.join("quartic.csv");
    let mut text = String::from("# V = x^4 - 2 x^2\nx,V\n");
    for i in 0..=400 {
        let x = -5.0 + i as f64 * 0.025;
        text.push_str(&format!("{x},{}\n", x.powi(4) - 2.0 * x * x));
    }
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn tabulated_potential_uses_numerical_modes() {
    let d = tmp();
    let q = write_quartic(d.path());
    let p = run_to_file(
        d.path(),
        "q.csv",
        &["greens", "--potential", "custom", "--potential-file", q.to_str().unwrap(), "--energy", "0.3,0.4", "--x", "0.1", "--xprime", "0.2"],
    );
    assert_eq!(p.rows[0][col(&p, "method")], "numerical_modes");
    let g = num(&p, 0, "re_g").hypot(num(&p, 0, "im_g"));
    assert!(g.is_finite() && g > 0.0);
    assert!(num(&p, 0, "est_error") < 1e-6 * g);
    assert!(num(&p, 0, "jump_residual") < 1e-6);
    assert_eq!(p.manifest["potential"]["samples"], 401);
}

#[test]
fn config_file_with_flag_overrides() {
    let d = tmp();
    write_quartic(d.path());
    let cfg = d.path().join("run.toml");
    std::fs::write(&cfg, "[units]\nhbar = 1.0\nmass = 0.5\n\n[potential]\nkind = \"custom\"\nfile = \"quartic.csv\"\ninterpolation = \"cubic\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let p = run_to_file(d.path(), "a.csv", &["greens", "--config", c, "--energy", "1,0.5", "--x", "0", "--xprime", "0.4"]);
    assert_eq!(p.manifest["units"]["mass"], 0.5);
    assert_eq!(p.manifest["potential"]["kind"], "custom");
    assert!(p.manifest["config_path"].as_str().unwrap().ends_with("run.toml"));
    assert!(num(&p, 0, "jump_residual") < 1e-6);

    // flags win over the file
    let p = run_to_file(
        d.path(),
        "b.csv",
        &["greens", "--config", c, "--potential", "harmonic", "--omega", "1", "--mass", "1", "--energy", "1,0.5", "--x", "0", "--xprime", "0.4"],
    );
    assert_eq!(p.manifest["units"]["mass"], 1.0);
    assert_eq!(p.rows[0][col(&p, "method")], "closed_harmonic");

    std::fs::write(&cfg, "[potential]\nkind = \"free\"\ncolour = 3\n").unwrap();
    assert_eq!(code(&run(&["greens", "--config", c, "--energy", "1,0.5", "--x", "0", "--xprime", "0.4"])), 2);
}

#[test]
fn special_function_probe() {
    let o = run(&["specfun-probe", "--fn", "gamma", "--z", "5,0"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 24.0).abs() < 1e-12);
    let o = run(&["specfun-probe", "--fn", "pcf", "--z", "0.3,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn help_lists_every_command() {
    let o = run(&["--help"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for c in ["greens", "propagator", "sweep", "validate"] {
        assert!(text.contains(c));
    }
}

use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const EXAMPLE: &str = "1 2 3 5 6 7 9 10 11 13\n";
const FIG1_DATA: &str = "6 6 11 5 3 5 2 6 5 13 2 7 7 7 6\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gainlattice"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn estimate_compat_on_example() {
    let v = json(&run(&["estimate", "--method", "compat"], EXAMPLE));
    assert_eq!(v["method"], "compat");
    assert_eq!(v["estimate"], "79/60");
    assert_eq!(v["interval"], serde_json::json!(["13/10", "4/3"]));
    assert_eq!(v["precision"], "1/60");
    assert_eq!(v["steps"], 12);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn estimate_reads_files_and_csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    fs::write(&path, "count\n1\n2\n3\n5\n6\n7\n9\n10\n11\n13\n").unwrap();
    let v = json(&run(&["estimate", path.to_str().unwrap()], ""));
    assert_eq!(v["estimate"], "79/60");
}

#[test]
fn estimate_schema_is_stable_across_methods() {
    let keys = [
        "method",
        "estimate",
        "estimate_f64",
        "interval",
        "interval_f64",
        "precision",
        "precision_f64",
        "steps",
        "warnings",
    ];
    for method in ["compat", "double-poisson", "fourier", "regression"] {
        let v = json(&run(&["estimate", "--method", method], EXAMPLE));
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), keys.len(), "{method}");
        for k in keys {
            assert!(obj.contains_key(k), "{method} lacks {k}");
        }
    }
}

#[test]
fn estimate_regression_on_example() {
    let v = json(&run(&["estimate", "--method", "regression"], EXAMPLE));
    let a = v["estimate_f64"].as_f64().unwrap();
    assert!((a - 1.3130).abs() < 5e-4, "{a}");
    assert!((a - 505.5 / 385.0).abs() < 1e-12);
}

#[test]
fn estimate_fourier_flags_incompatibility() {
    let v = json(&run(&["estimate", "--method", "fourier"], EXAMPLE));
    assert_eq!(v["estimate"], "14/11");
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn single_observation_fails_with_estimator_status() {
    for method in ["compat", "double-poisson", "fourier", "regression"] {
        let out = run(&["estimate", "--method", method], "5\n");
        let code = out.status.code().unwrap();
        assert!(code == 2 || code == 3, "{method}: {code}");
    }
}

#[test]
fn parse_errors_exit_2_with_line_number() {
    let out = run(&["estimate"], "1\n2\nthree\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:"), "{err}");
    assert_eq!(
        run(&["estimate", "/nonexistent/file"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["estimate", "--method", "magic"], EXAMPLE)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn estimator_failures_exit_3_with_message() {
    for (method, data, message) in [
        ("double-poisson", "4 4 4\n", "zero dispersion"),
        ("compat", "0 5 5\n", "insufficient data"),
        ("fourier", "0 1 2 3\n", "spectrum too coarse"),
    ] {
        let out = run(&["estimate", "--method", method], data);
        assert_eq!(out.status.code(), Some(3), "{method}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains(message),
            "{method}"
        );
    }
}

#[test]
fn bounds_on_example() {
    let v = json(&run(&["bounds"], EXAMPLE));
    assert_eq!(v["density_bound"], "7/5");
    assert_eq!(v["interval_bound"], "3/2");
    assert_eq!(v["pairwise_bound"], "2");
}

#[test]
fn compat_set_on_even_integers() {
    let v = json(&run(&["compat-set"], "0 2 4 6 8\n"));
    assert_eq!(v["top"], serde_json::json!(["2", "9/4"]));
    assert_eq!(v["includes_unit"], true);
    let intervals = v["intervals"].as_array().unwrap();
    assert!(intervals.contains(&serde_json::json!(["4/3", "7/5"])));
}

#[test]
fn recover_example_indices() {
    let out = stdout(&run(&["recover", "--tau", "33/25"], EXAMPLE));
    let expected: String = std::iter::once("n,count".to_string())
        .chain((1..=10).map(|n| format!("{n},1")))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(out.trim_end(), expected);
}

#[test]
fn recover_with_unit_gain_is_identity() {
    let out = stdout(&run(&["recover", "--tau", "1", "--by-value"], "0 3 9\n"));
    assert_eq!(out, "x,n\n0,0\n3,3\n9,9\n");
}

#[test]
fn recover_fig1_table() {
    let out = stdout(&run(&["recover", "--tau", "79/60"], FIG1_DATA));
    assert_eq!(out, "n,count\n2,2\n3,1\n4,3\n5,4\n6,3\n9,1\n10,1\n");
}

#[test]
fn recover_incompatible_gain_names_observation() {
    let out = run(&["recover", "--tau", "6/5"], FIG1_DATA);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("observation 5"));
    assert_eq!(
        run(&["recover", "--tau", "1/2"], "0 3\n").status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["recover", "--tau", "x"], "0 3\n").status.code(),
        Some(2)
    );
}

#[test]
fn estimate_then_recover_round_trips() {
    // S = floor(1.32 k) for k in 1..10 without k = 4.
    let data = "1 2 3 6 7 9 10 11 13\n";
    let v = json(&run(&["estimate"], data));
    let tau = v["estimate"].as_str().unwrap();
    let out = stdout(&run(&["recover", "--tau", tau, "--by-value"], data));
    let ks: Vec<u64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ks, vec![1, 2, 3, 5, 6, 7, 8, 9, 10]);
    // Regenerating floor(t k) at the recovered indices gives back S.
    let (p, q) = tau.split_once('/').unwrap();
    let (p, q): (u64, u64) = (p.parse().unwrap(), q.parse().unwrap());
    let regenerated: Vec<String> = ks.iter().map(|k| (k * p / q).to_string()).collect();
    assert_eq!(regenerated.join(" "), data.trim());
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str, extra: &[&str]| -> Vec<String> {
        let mut a: Vec<String> = [
            "simulate",
            "--tau",
            "33/25",
            "--law",
            "poisson:5.5",
            "--size",
            "15",
            "--repeats",
            "40",
            "--seed",
            "11",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        a.push("--out".into());
        a.push(dir.path().join(name).to_string_lossy().into_owned());
        a.extend(extra.iter().map(|s| s.to_string()));
        a
    };
    let run_args = |a: Vec<String>| {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(run(&refs, "").status.success());
    };
    run_args(args("a.csv", &[]));
    run_args(args("b.csv", &[]));
    run_args(args("c.csv", &["--sequential"]));
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, fs::read(dir.path().join("c.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("repeat_index,method,estimate,interval_lo,interval_hi,compatible\n"));
    assert_eq!(text.lines().count(), 1 + 40 * 5);
}

#[test]
fn simulate_requires_seed_and_valid_law() {
    let base = [
        "simulate",
        "--tau",
        "33/25",
        "--size",
        "15",
        "--repeats",
        "2",
    ];
    let mut no_seed = base.to_vec();
    no_seed.extend(["--law", "poisson:5.5"]);
    assert_eq!(run(&no_seed, "").status.code(), Some(2));
    let mut bad_law = base.to_vec();
    bad_law.extend(["--law", "gamma:2", "--seed", "1"]);
    assert_eq!(run(&bad_law, "").status.code(), Some(2));
}

#[test]
fn simulate_writes_kde() {
    let dir = tempfile::tempdir().unwrap();
    let kde = dir.path().join("kde.csv");
    let out = run(
        &[
            "simulate",
            "--tau",
            "33/25",
            "--law",
            "poisson:5.5",
            "--size",
            "15",
            "--repeats",
            "30",
            "--seed",
            "3",
            "--methods",
            "compat,fourier",
            "--kde-out",
            kde.to_str().unwrap(),
        ],
        "",
    );
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 1 + 30 * 2);
    let kde_text = fs::read_to_string(&kde).unwrap();
    assert!(kde_text.starts_with("x,density\n"));
    assert_eq!(kde_text.lines().count(), 513);
}

#[test]
fn figures_write_data_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("figs");
    for fig in [
        "fig1", "fig2", "fig3", "fig4", "fig5", "fig8", "fig9", "fig10",
    ] {
        let out = run(
            &[
                "figures",
                fig,
                "--outdir",
                outdir.to_str().unwrap(),
                "--seed",
                "5",
            ],
            "",
        );
        assert!(
            out.status.success(),
            "{fig}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let svg = fs::read_to_string(outdir.join(format!("{fig}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let fig8: Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("fig8_summary.json")).unwrap())
            .unwrap();
    assert_eq!(fig8["density_bound"], "7/5");
    assert_eq!(fig8["tau_f_exact"], "14/11");
    let fig3 = fs::read_to_string(outdir.join("fig3.csv")).unwrap();
    assert_eq!(fig3.lines().count(), 201);
    let fig4 = fs::read_to_string(outdir.join("fig4_kde.csv")).unwrap();
    assert!(fig4.starts_with("series,x,density\n"));
    let fig10: Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("fig10_summary.json")).unwrap())
            .unwrap();
    assert_eq!(fig10["recovered_match_truth"], true);
}

#[test]
fn figures_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert!(run(
            &[
                "figures",
                "fig9",
                "--outdir",
                d.to_str().unwrap(),
                "--seed",
                "9"
            ],
            ""
        )
        .status
        .success());
    }
    for name in ["fig9_estimates.csv", "fig9_kde.csv", "fig9.svg"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn unknown_figure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "figures",
            "fig11",
            "--outdir",
            dir.path().to_str().unwrap(),
            "--seed",
            "1",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mosaic-trees"))
        .args(args)
        .env_remove("MOSAIC_TREES_VERTEX_CAP")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn counts_table() {
    let out = run(&["counts", "--p", "4", "--q", "5", "--levels", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("| 7 | 18455 | 10655 | 29110 |"));
    assert!(text.contains("| 10 | 959305 | 553855 | 1513160 |"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn euclidean_counts_column() {
    let out = run(&[
        "counts", "--p", "4", "--q", "4", "--levels", "5", "--format", "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,a,b,total"));
    for (i, line) in lines.enumerate().skip(1) {
        assert_eq!(line, format!("{i},{},4,{}", 8 * i - 4, 8 * i));
    }
}

#[test]
fn constants_radical_forms() {
    let text = stdout(&run(&[
        "constants",
        "--p",
        "4",
        "--q",
        "6",
        "--precision",
        "6",
    ]));
    assert!(text.contains("| z1 | 3 + 2√2 | 5.828427 |"), "{text}");
    let text = stdout(&run(&[
        "constants",
        "--p",
        "4",
        "--q",
        "5",
        "--precision",
        "6",
    ]));
    assert!(text.contains("| K | -1/2 + (1/2)√3 | 0.366025 |"));
    assert!(text.contains("| M | -3 + 2√3 | 0.464102 |"));
}

#[test]
fn euclidean_constants_are_refused() {
    let out = run(&["constants", "--p", "4", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Euclidean"));
}

#[test]
fn probabilities() {
    let text = stdout(&run(&[
        "probs",
        "--p",
        "4",
        "--q",
        "5",
        "--levels",
        "7",
        "--mode",
        "asymptotic",
        "--precision",
        "6",
    ]));
    assert!(text.contains("| 6 | 0.294229 |"));
    assert!(text.contains("| 0 | 0.015016 |"));

    let text = stdout(&run(&[
        "probs",
        "--p",
        "4",
        "--q",
        "5",
        "--levels",
        "1",
        "--mode",
        "asymptotic",
        "--precision",
        "6",
    ]));
    assert!(text.contains("| 1 | 0.366025 |"));
    assert!(text.contains("| 0 | 0.633975 |"));

    let text = stdout(&run(&[
        "probs",
        "--p",
        "4",
        "--q",
        "5",
        "--levels",
        "7",
        "--precision",
        "6",
    ]));
    assert!(text.contains("32/2911"));
    assert!(text.contains("main root) is of order 1e-3"));
}

#[test]
fn json_lines_carry_exact_fractions() {
    let text = stdout(&run(&[
        "probs",
        "--p",
        "4",
        "--q",
        "5",
        "--levels",
        "10",
        "--mode",
        "exact",
        "--format",
        "json-lines",
    ]));
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["j"], 0);
    // 2560/1513160 in lowest terms
    assert_eq!(last["exact"]["num"], "64");
    assert_eq!(last["exact"]["den"], "37829");
}

#[test]
fn verify_default_symbols() {
    let out = run(&["verify", "--levels", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn verify_four_seven() {
    let out = run(&[
        "verify",
        "--symbols",
        "4:7",
        "--levels",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().skip(1).all(|l| l.contains(",PASS,")));
}

#[test]
fn verify_reports_injected_fault() {
    let out = run(&[
        "verify",
        "--symbols",
        "4:5,5:4",
        "--levels",
        "3",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("overall: FAIL"));
}

#[test]
fn usage_errors_exit_two_without_output() {
    for args in [
        &["counts", "--p", "2", "--q", "5"][..],
        &["probs", "--p", "4", "--q", "5"],
        &["verify", "--symbols", "4-5"],
        &["export", "--p", "4", "--q", "5", "--what", "everything"],
        &[
            "probs",
            "--p",
            "4",
            "--q",
            "4",
            "--levels",
            "3",
            "--mode",
            "asymptotic",
        ],
        &["counts", "--p", "4", "--q", "5", "--precision", "0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn vertex_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mosaic-trees"))
        .args([
            "export",
            "--p",
            "5",
            "--q",
            "5",
            "--levels",
            "4",
            "--what",
            "mosaic-edges",
        ])
        .env("MOSAIC_TREES_VERTEX_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("mosaic-trees-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spanning.dot");
    let args = [
        "export", "--p", "4", "--q", "5", "--levels", "3", "--what", "spanning",
    ];
    let out = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&run(&args)));
    assert!(written.starts_with("graph spanning_4_5 {"));
    // 201 vertices, a spanning tree has 200 edges.
    assert_eq!(written.matches(" -- ").count(), 200);
    fs::remove_dir_all(&dir).unwrap();

    let edges = run(&[
        "export",
        "--p",
        "4",
        "--q",
        "5",
        "--levels",
        "1",
        "--what",
        "mosaic-edges",
    ]);
    let text = stdout(&edges);
    assert_eq!(
        text.lines().next(),
        Some("# p=4 q=5 belts=1 vertices=11 edges=15")
    );
    assert_eq!(text.lines().count(), 16);
}

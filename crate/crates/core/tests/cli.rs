use std::process::{Command, Output};

fn hallbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallbasis"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_json_document() {
    let o = hallbasis(&[
        "gen",
        "--order",
        "fibo",
        "--alphabet",
        "2",
        "--max-len",
        "6",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], "fibo");
    assert_eq!(v["alphabet"], 2);
    let sizes: Vec<usize> = v["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![2, 1, 2, 3, 6, 9]);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(
        hallbasis(&[
            "gen",
            "--order",
            "supergeom",
            "--alphabet",
            "3",
            "--max-len",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        hallbasis(&["gen", "--order", "bogus", "--max-len", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hallbasis(&["decompose", "--order", "length", "-a", "X9", "-b", "X0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sharp_order_generates() {
    let o = hallbasis(&["gen", "--order", "sharp:3", "--max-len", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4 + 6 + 20 + 60 + 204);
}

#[test]
fn decompose_reports_norm() {
    let o = hallbasis(&[
        "decompose",
        "--order",
        "length",
        "--alphabet",
        "3",
        "-a",
        "X0",
        "-b",
        "[X1,[X1,X2]]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "norm\t4"));
}

#[test]
fn capacity_exits_three() {
    let o = hallbasis(&[
        "decompose",
        "--order",
        "lyndon",
        "--max-len",
        "3",
        "-a",
        "X0",
        "-b",
        "[X0,[X0,X1]]",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn beta_table_with_jobs() {
    let o = hallbasis(&[
        "--jobs",
        "2",
        "beta",
        "--order",
        "lyndon",
        "--alphabet",
        "2",
        "--max-n",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let betas: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(betas, vec!["1", "1", "1", "2", "3", "5", "8", "16", "32"]);
}

#[test]
fn verify_and_family() {
    let o = hallbasis(&[
        "verify", "--suite", "oracle", "--order", "fibo", "--budget", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS oracle fibo"));
    let o = hallbasis(&["family", "sharp-en1", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("norm=16"));
}

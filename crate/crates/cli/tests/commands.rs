use std::process::{Command, Output};

fn pi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(args)
        .env_remove("APNUM_GUARD_BITS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_prints_grouped_digits() {
    let o = pi(&["compute", "--algorithm", "quartic", "--digits", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "3.1415926535 8979323846 2643383279 5028841971 6939937510"
    );
    assert_eq!(
        lines[1],
        "  5820974944 5923078164 0628620899 8628034825 3421170679"
    );
    assert_eq!(lines.len(), 2);
}

#[test]
fn compute_one_digit_and_raw() {
    let o = pi(&["compute", "--algorithm", "quadratic", "--digits", "1"]);
    assert_eq!(stdout(&o), "3.1\n");
    let o = pi(&["compute", "--algorithm", "cubic", "--digits", "30", "--raw"]);
    assert_eq!(stdout(&o), "3.141592653589793238462643383279\n");
}

#[test]
fn every_algorithm_prints_the_same_digits() {
    let outputs: Vec<String> = [
        "quadratic",
        "quartic",
        "cubic",
        "quartic-analog",
        "salamin_brent",
    ]
    .iter()
    .map(|a| stdout(&pi(&["compute", "-a", a, "-d", "500", "--raw"])))
    .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(outputs[0].len(), 2 + 500 + 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["compute", "--digits", "0"][..],
        &["verify", "--iterations", "1"],
        &["bench", "--digits", "50"],
        &["table", "--iterations", "0"],
        &["compute", "--algorithm", "octic"],
        &["frobnicate"],
    ] {
        let o = pi(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn precision_ceiling_exits_three() {
    let o = pi(&["compute", "--digits", "1000000000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn table_csv_and_json_share_keys() {
    let csv = stdout(&pi(&[
        "table",
        "-a",
        "quadratic",
        "-n",
        "4",
        "-d",
        "50",
        "-f",
        "csv",
    ]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("n,estimate,abs_error,correct_digits,local_order")
    );
    let digits: Vec<u64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    for (got, want) in digits.iter().zip([1u64, 3, 8, 18]) {
        assert!(got.abs_diff(want) <= 1, "{digits:?}");
    }
    let json = stdout(&pi(&[
        "table",
        "-a",
        "quadratic",
        "-n",
        "4",
        "-d",
        "50",
        "-f",
        "json",
    ]));
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 5);
        let positions: Vec<usize> = [
            "n",
            "estimate",
            "abs_error",
            "correct_digits",
            "local_order",
        ]
        .iter()
        .map(|k| line.find(&format!("\"{k}\":")).unwrap())
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{line}");
    }
    let one = stdout(&pi(&["table", "-a", "cubic", "-n", "1", "-f", "csv"]));
    assert_eq!(one.lines().count(), 2);
}

#[test]
fn verify_exit_codes() {
    let o = pi(&["verify", "--iterations", "6", "--digits", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FLAG"));
    let o = pi(&[
        "verify",
        "--iterations",
        "6",
        "--digits",
        "100",
        "--inject-fault",
        "quadratic-step",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("pi-cli-out-{}.txt", std::process::id()));
    let o = pi(&["compute", "-d", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "3.1415926535 8979323846\n"
    );
    std::fs::remove_file(path).unwrap();
}

#[test]
fn guard_bits_flag_beats_environment() {
    let bad_env = Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(["compute", "-d", "10"])
        .env("APNUM_GUARD_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(["compute", "-d", "10", "--guard-bits", "96"])
        .env("APNUM_GUARD_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
    assert_eq!(stdout(&flag_wins), "3.1415926535\n");
}

#[test]
fn bench_reports_every_algorithm() {
    let o = pi(&["bench", "--digits", "1000", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.last().unwrap(), "wall_ms");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    let iterations = |name: &str| -> u32 {
        rows.iter().find(|r| &r[0] == name).unwrap()[1]
            .parse()
            .unwrap()
    };
    // the quartic iteration is the quadratic one taken two steps at a time
    assert!(iterations("quartic").abs_diff(iterations("quadratic").div_ceil(2)) <= 1);
    for r in &rows {
        assert!(r[4].parse::<u64>().unwrap() >= 1000);
        assert!(r[5].parse::<u64>().unwrap() >= 1000);
    }
}

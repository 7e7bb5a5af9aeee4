use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel-ladder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn phi_rows() {
    let o = run(&["phi", "--order", "0.5,1", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("order,z,phi"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    // φ_(1/2)(1) = √(2/π) sin 1
    assert!((row[2] - (2.0 / std::f64::consts::PI).sqrt() * 1f64.sin()).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["phi", "--z", ""]).status.code(), Some(2));
    assert_eq!(run(&["phi", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "weights", "--tolerance", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn gated_suite_exit_codes() {
    assert_eq!(run(&["verify", "ladder"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "weights"]).status.code(), Some(0));
    assert_eq!(
        run(&["verify", "weights", "--tolerance", "1e-30"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "sweep", "deform", "--lambda", "0.5,0.25", "--n", "1,0", "--z", "1,2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    // rows come out in sorted grid order regardless of the order given
    let text = stdout(&a);
    let lambdas: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    let mut sorted = lambdas.clone();
    sorted.sort();
    assert_eq!(lambdas, sorted);
}

#[test]
fn csv_round_trips() {
    let o = run(&["sweep", "spectrum", "--lambda", "0,0.3", "--modes", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(&o.stdout[..]);
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .flexible(true)
        .from_writer(Vec::new());
    for record in reader.records() {
        writer.write_record(&record.unwrap()).unwrap();
    }
    assert_eq!(writer.into_inner().unwrap(), o.stdout);
}

#[test]
fn json_report_parses() {
    let o = run(&["verify", "weights", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["suite"], "weights");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 * 41);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# grid\norder = 0.5\nz = 1, 2\n").unwrap();
    let cfg = config.to_str().unwrap();
    let from_file = stdout(&run(&["phi", "--config", cfg]));
    assert_eq!(from_file.lines().count(), 3);
    let overridden = stdout(&run(&["phi", "--config", cfg, "--z", "3"]));
    assert_eq!(overridden.lines().count(), 2);
    assert!(overridden
        .lines()
        .nth(1)
        .unwrap()
        .contains(",3.0000000000000000e0,"));

    std::fs::write(&config, "bogus = 1\n").unwrap();
    assert_eq!(run(&["phi", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = run(&["phi", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("order,z,phi\n"));
}

#[test]
fn deform_integer_lambda_is_exact_shift() {
    let o = run(&["deform", "--lambda", "1", "--n", "0", "--z", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], row[4]);
}

#[test]
fn spectrum_without_deformation_is_the_winding_numbers() {
    let text = stdout(&run(&["spectrum", "--modes", "2", "--lambda", "0"]));
    let eig: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(eig, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
}

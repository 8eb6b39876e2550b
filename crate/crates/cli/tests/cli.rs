use std::io::Write;
use std::process::{Command, Output, Stdio};

fn animalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_animalab")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_animalab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn count_prints_the_pyramid_table() {
    let v = stdout_json(&animalab(&["count", "--kind", "pyramid", "--n-max", "6"]));
    let got: Vec<&str> = (1..=6).map(|n| v["counts"][n.to_string()].as_str().unwrap()).collect();
    assert_eq!(got, ["1", "2", "5", "13", "35", "96"]);
}

#[test]
fn decode_then_encode_is_the_identity() {
    let animal = animalab(&["decode", "0,1,0,-1,-2,-4"]);
    assert!(animal.status.success());
    let back = with_stdin(&["encode"], &String::from_utf8(animal.stdout).unwrap());
    assert_eq!(stdout_json(&back), serde_json::json!([0, 1, 0, -1, -2, -4]));
}

#[test]
fn invalid_input_exits_with_two() {
    let o = animalab(&["decode", "0,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(animalab(&["verify", "{not json"]).status.code(), Some(2));
}

#[test]
fn verify_reports_holding_identities() {
    let v = stdout_json(&animalab(&["verify", r#"{"identity":"jolie","n":8}"#]));
    assert_eq!(v["holds"], true);
    let v = stdout_json(&animalab(&["verify", "--sweep", "eta", "--trials", "50", "--seed", "3"]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["checked"], 50);
}

#[test]
fn kernel_rows_are_exact_fractions() {
    let v = stdout_json(&animalab(&["kernel", "--model", "uip", "--source", "0"]));
    let entries = v["entries"].as_array().unwrap();
    // {-1}, {1}, {-1, 1}
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert_eq!((e["num"].as_str().unwrap(), e["den"].as_str().unwrap()), ("1", "3"));
    }
    let chain = stdout_json(&animalab(&["kernel", "--model", "uipp", "--source", "0", "--steps", "5", "--seed", "1"]));
    let layers = chain.as_array().unwrap();
    assert_eq!(layers.len(), 6);
    assert!(layers.iter().flat_map(|l| l.as_array().unwrap()).all(|x| x.as_i64().unwrap() >= 0));
}

#[test]
fn experiments_write_csv() {
    let o = animalab(&["experiment", "--name", "exit", "--trials", "2000", "--seed", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("experiment,event,trials,empirical,exact_num,exact_den,stderr,z"));
    assert!(lines.all(|l| l.starts_with("exit,")));
    let again = animalab(&["experiment", "--name", "exit", "--trials", "2000", "--seed", "1"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    assert_eq!(animalab(&["experiment", "--name", "nope", "--trials", "10"]).status.code(), Some(2));
}

#[test]
fn experiment_config_and_output_file() {
    let dir = std::env::temp_dir().join(format!("animalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let out = dir.join("out.json");
    std::fs::write(&cfg, r#"{"experiment":"width","trials":1000,"seed":2,"streams":4,"format":"json"}"#).unwrap();
    let o = animalab(&["experiment", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!v["rows"].as_array().unwrap().is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn samples_render_as_svg() {
    let o = animalab(&["sample", "--model", "pyramid", "--n", "12", "--seed", "4", "--svg", "dominoes"]);
    assert!(o.status.success());
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<rect x=").count(), 12);

    let animal = animalab(&["sample", "--model", "bhp", "--r", "3", "--seed", "4"]);
    let o = with_stdin(&["render", "--style", "squares"], &String::from_utf8(animal.stdout.clone()).unwrap());
    let svg = String::from_utf8(o.stdout).unwrap();
    let n = stdout_json(&animal)["vertices"].as_array().unwrap().len();
    assert_eq!(svg.matches("<polygon").count(), n);
}

#[test]
fn walks_print_traces() {
    let v = stdout_json(&animalab(&["walk", "--kind", "nonpos", "--n", "3", "--seed", "2"]));
    let values: Vec<i64> = v["values"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(*values.last().unwrap(), -3);
    assert!(values.iter().all(|&x| x <= 0));
}

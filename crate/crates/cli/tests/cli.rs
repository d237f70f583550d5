use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvelog")).args(args).env_remove("CURVELOG_CONFIG").output().unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn mzv_of_one_zero() {
    let v = json_out(&["mzv", "--poles", "0,1", "--word", "1,0"]);
    let (re, im) = pair(&v["value"]);
    assert!((re + 1.6449340668482264).abs() < 1e-9 && im.abs() < 1e-9);
}

#[test]
fn periods_are_two_pi_i() {
    let v = json_out(&["periods", "--poles", "0,1,-1"]);
    let m = v["matrix"].as_array().unwrap();
    for (s, row) in m.iter().enumerate() {
        for (t, e) in row.as_array().unwrap().iter().enumerate() {
            let (re, im) = pair(e);
            let want = if s == t { 2.0 * std::f64::consts::PI } else { 0.0 };
            assert!(re.abs() < 1e-9 && (im - want).abs() < 1e-9);
        }
    }
}

#[test]
fn dmap_input_is_a_kernel_member() {
    let t = r#"{"dmap":{"s":{"terms":[{"word":[{"pole":"0"}],"coeff":"1"}]},"f":{"poly":["0","1"]},"s2":{"terms":[{"word":[{"pole":"1"}],"coeff":"2"}]}}}"#;
    let v = json_out(&["kernel", "--poles", "0,1", "--tensor-json", t]);
    assert_eq!(v["member"], Value::Bool(true));
}

#[test]
fn reduce_integrates_a_double_pole() {
    let t = r#"{"terms":[{"word":[{"pole":"0","order":2}],"coeff":"1"}]}"#;
    let v = json_out(&["reduce", "--poles", "0,1", "--basepoint", "1/2", "--tensor-json", t]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["word"], Value::Array(vec![]));
    assert_eq!(terms[0]["f"]["poly"][0], "2");
}

#[test]
fn eval_points_and_csv() {
    let v = json_out(&["eval", "--poles", "0,1", "--word", "1", "--point", "1/2;-1"]);
    let (a, _) = pair(&v[0]["value"]);
    let (b, _) = pair(&v[1]["value"]);
    assert!((a - 0.5f64.ln()).abs() < 1e-9 && (b - 2f64.ln()).abs() < 1e-9);
    let o = run(&["eval", "--poles", "0,1", "--word", "1", "--point", "1/2", "--csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("re_z,im_z,re,im\n0.5,0,"));
}

#[test]
fn expansion_evaluates_near_the_center() {
    let v = json_out(&["expand", "--poles", "0,1", "--center", "0", "--word", "1", "--orders", "20,1", "--point", "0.1"]);
    let (re, _) = pair(&v["values"][0]["value"]);
    assert!((re - 0.9f64.ln()).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["mzv", "--poles", "0,x", "--word", "1"]).status.code(), Some(1));
    assert_eq!(run(&["mzv", "--poles", "0,0", "--word", "1"]).status.code(), Some(2));
    let o = run(&["eval", "--poles", "0,1", "--word", "1", "--point", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].is_string());
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("curvelog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("c.toml");
    std::fs::write(&p, "weight = 1\n").unwrap();
    let go = |extra: &[&str]| {
        let mut args = vec!["monodromy", "--poles", "0,1", "--around", "0"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_curvelog")).args(&args).env("CURVELOG_CONFIG", &p).output().unwrap();
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["weight"].as_u64().unwrap()
    };
    assert_eq!(go(&[]), 1);
    assert_eq!(go(&["--weight", "2"]), 2);
}

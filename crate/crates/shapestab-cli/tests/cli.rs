use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapestab"))
        .args(args)
        .env_remove("SHAPESTAB_THREADS")
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn spectrum_planar_beta_two() {
    let o = run(&["spectrum", "--N", "2", "--beta", "2", "--kmax", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 51);
    let theta = |k: usize| r[k][1].parse::<f64>().unwrap();
    assert!((theta(0) - 2.0 * PI).abs() < 1e-13);
    assert!((theta(1) + PI).abs() < 1e-13);
    for k in 2..=50 {
        assert_eq!(theta(k), 0.0);
    }
    let lambda1: f64 = r[1][3].parse().unwrap();
    assert!((lambda1 - 12.0 * PI).abs() < 1e-12);
}

#[test]
fn spectrum_even_beta_truncates() {
    let o = run(&["spectrum", "--N", "3", "--beta", "4", "--kmax", "10"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    for row in &r[3..] {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    }
    assert!(r[2][1].parse::<f64>().unwrap() != 0.0);
}

#[test]
fn spectrum_rejects_nonpositive_beta() {
    assert_eq!(code(&run(&["spectrum", "--N", "2", "--beta", "-1"])), 2);
    assert_eq!(code(&run(&["spectrum", "--N", "2", "--beta", "0"])), 2);
    assert_eq!(code(&run(&["spectrum", "--N", "1", "--beta", "1"])), 2);
}

#[test]
fn energy_of_disc() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "ball.json",
        r#"{"kind":"radial","N":2,"breakpoints":[1.0],"inside":[true,false]}"#,
    );
    let o = run(&["energy", "--shape", &p, "--beta", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let g = v["g_beta"].as_f64().unwrap();
    assert!((g - PI * PI).abs() < 1e-12 * g);
    assert_eq!(v["deficit_beta"].as_f64().unwrap(), 0.0);
}

#[test]
fn energy_of_annulus_has_positive_deficit() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "ann.json",
        r#"{"kind":"radial","N":2,"breakpoints":[0.5,1.0,1.2],"inside":[true,false,true,false]}"#,
    );
    let o = run(&[
        "energy", "--shape", &p, "--beta", "1", "--alpha", "1", "--s", "0.5",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["deficit_beta"].as_f64().unwrap() > 0.0);
    assert!(v["v_alpha_deficit"].as_f64().unwrap() < 0.0);
    assert!(v["p_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn energy_rejects_large_perturbation() {
    let d = tempfile::tempdir().unwrap();
    let u: Vec<String> = (0..64)
        .map(|i| (0.6 * (2.0 * PI * i as f64 / 64.0).cos()).to_string())
        .collect();
    let body = format!(
        r#"{{"kind":"nearly_spherical","N":2,"grid":{{"layout":"circle","m":64}},"t":0.1,"u":[{}]}}"#,
        u.join(",")
    );
    let p = write(d.path(), "bad.json", &body);
    assert_eq!(code(&run(&["energy", "--shape", &p, "--beta", "1"])), 2);
    let missing = d.path().join("none.json");
    assert_eq!(
        code(&run(&[
            "energy",
            "--shape",
            missing.to_str().unwrap(),
            "--beta",
            "1"
        ])),
        2
    );
}

#[test]
fn sharpness_passes() {
    let o = run(&["sharpness", "--N", "2", "--beta", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# slope="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 2.0).abs() < 0.3, "slope {slope}");
}

#[test]
fn fuglede_with_random_perturbations() {
    let o = run(&[
        "fuglede", "--N", "2", "--beta", "1", "--random", "2", "--seed", "7",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!rows(&stdout(&o)).is_empty());
    assert_eq!(
        code(&run(&[
            "fuglede", "--N", "2", "--beta", "1", "--random", "2"
        ])),
        2
    );
}

#[test]
fn mixed_is_informational() {
    let o = run(&[
        "mixed", "--N", "2", "--beta", "1", "--alpha", "1", "--s", "0.5", "--m-grid", "0.5,2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&stdout(&o)).len(), 2);
}

#[test]
fn config_file_with_flag_override() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(
        d.path(),
        "run.cfg",
        "# spectrum run\nN = 3\nbeta = 4\nkmax = 12\n",
    );
    let o = run(&["--config", &cfg, "spectrum"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("# N=3"));
    assert_eq!(rows(&text).len(), 13);
    let o = run(&["--config", &cfg, "spectrum", "--kmax", "20"]);
    assert_eq!(rows(&stdout(&o)).len(), 21);

    let bad = write(d.path(), "bad.cfg", "N = 2\ncolour = red\n");
    assert_eq!(
        code(&run(&["--config", &bad, "spectrum", "--beta", "1"])),
        2
    );
}

#[test]
fn output_file_and_determinism() {
    let d = tempfile::tempdir().unwrap();
    let a = d.path().join("a.csv");
    let b = d.path().join("b.csv");
    for (p, threads) in [(&a, "1"), (&b, "2")] {
        let o = run(&[
            "--threads",
            threads,
            "--out",
            p.to_str().unwrap(),
            "bigasym",
            "--N",
            "2",
            "--beta",
            "1",
            "--count",
            "3",
            "--seed",
            "11",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

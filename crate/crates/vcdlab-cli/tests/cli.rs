use std::path::Path;
use std::process::{Command, Output};

fn vcdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcdlab"))
        .args(args)
        .env_remove("VCDLAB_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn tightness_examples_pass() {
    let out = vcdlab(&[
        "tightness",
        "--example",
        "hyperplanes",
        "--m",
        "2",
        "--n",
        "4",
        "--seed",
        "7",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("16 realizable patterns"));
    assert!(text.trim_end().ends_with("PASS"));

    let out = vcdlab(&["tightness", "--example", "grid", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("dim H^1 = 4"));
    assert!(text.contains("{0, 1, 2, 3, 4}"));

    let out = vcdlab(&[
        "tightness",
        "--example",
        "pencil",
        "--n",
        "3",
        "--seed",
        "5",
    ]);
    assert!(out.status.success());
}

#[test]
fn sweep_outputs_are_deterministic() {
    let dir_a = tempdir("vcd-a");
    let dir_b = tempdir("vcd-b");
    for dir in [&dir_a, &dir_b] {
        let out = vcdlab(&[
            "vcd", "--family", "grid", "--p", "1", "--n-min", "4", "--n-max", "12", "--out", dir,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let csv_a = std::fs::read(Path::new(&dir_a).join("sweep.csv")).unwrap();
    let csv_b = std::fs::read(Path::new(&dir_b).join("sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    // Default step 2 over 4..=12 gives five data rows plus the header.
    assert_eq!(csv_a.iter().filter(|&&b| b == b'\n').count(), 6);
    let slope_a = std::fs::read(Path::new(&dir_a).join("slope.json")).unwrap();
    let slope_b = std::fs::read(Path::new(&dir_b).join("slope.json")).unwrap();
    assert_eq!(slope_a, slope_b);
}

#[test]
fn reports_are_seed_deterministic() {
    let run = || {
        let out = vcdlab(&[
            "epsnet",
            "--n",
            "12",
            "--eps",
            "1/3",
            "--c-const",
            "1",
            "--d",
            "2",
            "--trials",
            "20",
            "--seed",
            "99",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn missing_seed_is_a_config_error() {
    let out = vcdlab(&["helly", "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = vcdlab(&["tightness", "--example", "grid", "--n", "3", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn impossible_net_is_a_precondition_failure() {
    let out = vcdlab(&[
        "epsnet",
        "--n",
        "4",
        "--eps",
        "1/10",
        "--c-const",
        "10",
        "--d",
        "2",
        "--trials",
        "2",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generated_instances_parse_back() {
    let dir = tempdir("gen");
    let path = Path::new(&dir).join("grid.json");
    let out = vcdlab(&[
        "gen",
        "--example",
        "grid",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("vcdlab-instance/1"));
    vcdlab::arrangements::schema::InstanceFile::from_json(&text).unwrap();
}

fn tempdir(tag: &str) -> String {
    let dir = std::env::temp_dir().join(format!("vcdlab-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir.to_string_lossy().into_owned()
}

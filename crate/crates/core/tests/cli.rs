use std::path::Path;
use std::process::{Command, Output};

fn patankar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patankar")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
name = "small"
[problem]
id = "burgers"
u1 = 2.0
u2 = 1e-13
[scheme]
flux = "upwind"
integrator = "mpe"
[mesh]
n = [40]
[time]
t_end = 0.1
cfl = 0.9
"#;

#[test]
fn run_writes_outputs_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");
    let o = patankar(&["run", &config, "--out-dir", out.to_str().unwrap(), "--dump-fields"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let runs: Vec<_> = std::fs::read_dir(&out).unwrap().collect();
    assert_eq!(runs.len(), 1);
    let dir = runs[0].as_ref().unwrap().path();
    for file in ["summary.json", "config.toml", "series.csv", "field.csv"] {
        assert!(dir.join(file).is_file(), "{file} missing");
    }
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let o = patankar(&["run", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write(tmp.path(), "bad.toml", "name = \"x\"\n[problem]\nid = \"nope\"\n");
    assert_eq!(patankar(&["run", &bad]).status.code(), Some(2));
    let negative = write(tmp.path(), "neg.toml", &SMALL.replace("cfl = 0.9", "cfl = -1.0"));
    assert_eq!(patankar(&["run", &negative]).status.code(), Some(2));
    assert_eq!(patankar(&["presets", "run", "no_such_preset"]).status.code(), Some(2));
}

#[test]
fn solver_failures_exit_three() {
    // explicit Euler far beyond its CFL limit drives the water depth negative
    let tmp = tempfile::tempdir().unwrap();
    let text = r#"
name = "unstable"
[problem]
id = "sw_dam_break"
[scheme]
flux = "rusanov"
integrator = "ee"
[mesh]
n = [50]
[time]
t_end = 0.7
cfl = 5.0
"#;
    let config = write(tmp.path(), "unstable.toml", text);
    let out = tmp.path().join("out");
    let o = patankar(&["run", &config, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn presets_are_listed() {
    let o = patankar(&["presets", "list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["burgers_mpe_cfl1", "burgers_mpe_cfl2_1", "buckley_mpe", "tvd_sharpness", "ttv_study", "sw_dam_break"] {
        assert!(text.contains(name), "{name} not listed");
    }
}

#[test]
fn overrides_replace_cell_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = patankar(&["presets", "run", "tvd_sharpness", "--cfl", "1.5", "--N", "20", "--out-dir", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let names: Vec<String> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert_eq!(names.len(), 1, "{names:?}");
    assert!(names[0].ends_with("cfl1.5_n20"), "{names:?}");
}

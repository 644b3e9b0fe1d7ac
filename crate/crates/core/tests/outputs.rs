use patankar::harness::{emit_outputs, run, RunConfig, FIELD_HEADER, SERIES_HEADER};

const CONFIG: &str = r#"
name = "schema"
[problem]
id = "burgers"
u1 = 2.0
u2 = 1e-13
[scheme]
flux = "upwind"
integrator = "mpdec2"
[mesh]
n = [30]
[time]
t_end = 0.2
cfl = 1.5
[output]
keep_fields = true
dump_fields = true
"#;

fn summary_without_clock(path: &std::path::Path) -> serde_json::Value {
    let mut value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    value.as_object_mut().unwrap().remove("wall_clock_seconds");
    value
}

#[test]
fn files_follow_the_schema() {
    let config = RunConfig::from_toml(CONFIG).unwrap();
    let record = run(&config).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let paths = emit_outputs(&record, tmp.path()).unwrap();

    let mut series = csv::Reader::from_path(&paths.series).unwrap();
    assert_eq!(series.headers().unwrap().iter().collect::<Vec<_>>(), SERIES_HEADER);
    let rows: Vec<csv::StringRecord> = series.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), record.steps() + 1);
    assert_eq!(&rows[0][0], "0");
    let last_time: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!((last_time - 0.2).abs() < 1e-14);

    let mut field = csv::Reader::from_path(paths.field.as_ref().unwrap()).unwrap();
    assert_eq!(field.headers().unwrap().iter().collect::<Vec<_>>(), FIELD_HEADER);
    assert_eq!(field.records().count(), 30 * (record.steps() + 1));

    let summary = summary_without_clock(&paths.summary);
    for key in [
        "run_id",
        "config_hash",
        "shock_location",
        "shock_error",
        "tvd_violation_max",
        "ttvrk_max",
        "weakform_discrete",
        "weakform_continuous",
    ] {
        assert!(summary.get(key).is_some(), "summary lacks {key}");
    }
    assert_eq!(summary["config_hash"], config.hash());

    // the written config reproduces the run
    let again = RunConfig::from_path(&paths.config).unwrap();
    assert_eq!(again.hash(), config.hash());
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let config = RunConfig::from_toml(CONFIG).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let pa = emit_outputs(&run(&config).unwrap(), a.path()).unwrap();
    let pb = emit_outputs(&run(&config).unwrap(), b.path()).unwrap();
    assert_eq!(summary_without_clock(&pa.summary), summary_without_clock(&pb.summary));
    for (x, y) in [(&pa.series, &pb.series), (pa.field.as_ref().unwrap(), pb.field.as_ref().unwrap())] {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
}

use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn touchchart() -> Command {
    Command::new(env!("CARGO_BIN_EXE_touchchart"))
}

#[test]
fn describe_lists_zones_and_bins() {
    let out = touchchart().arg("describe").arg(data("penguins.toml")).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let zones: Vec<&str> = text.lines().filter(|l| l.starts_with("  [zone]")).collect();
    assert_eq!(zones.len(), 4);
    // x bins sit directly under the X axis zone
    let x_bins = text
        .lines()
        .skip_while(|l| !l.contains("X axis area"))
        .skip(1)
        .take_while(|l| !l.starts_with("  [zone]"))
        .filter(|l| l.starts_with("    [bin]"))
        .count();
    assert_eq!(x_bins, 9);
}

#[test]
fn replay_matches_golden_transcripts() {
    for (config, name) in [
        ("penguins.toml", "penguin_gentoo_bin"),
        ("penguins.toml", "penguin_dtm_sweep"),
        ("penguins.toml", "empty"),
        ("covid.toml", "covid_january"),
    ] {
        let out = touchchart()
            .arg("replay")
            .arg(data(config))
            .arg(data(&format!("golden/{name}.trace")))
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let golden = std::fs::read_to_string(data(&format!("golden/{name}.transcript"))).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden, "{name}");
    }
}

#[test]
fn replay_missing_file_names_path() {
    let out = touchchart()
        .arg("replay")
        .arg(data("penguins.toml"))
        .arg("/nonexistent/trace.jsonl")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/nonexistent/trace.jsonl"), "{err}");
}

#[test]
fn replay_rejects_other_config_unless_forced() {
    let trace = data("golden/covid_january.trace");
    let out = touchchart().arg("replay").arg(data("penguins.toml")).arg(&trace).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("--force"));
    let out = touchchart()
        .args(["replay", "--force"])
        .arg(data("penguins.toml"))
        .arg(&trace)
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn replay_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("t.jsonl");
    let status = touchchart()
        .arg("replay")
        .arg(data("penguins.toml"))
        .arg(data("golden/empty.trace"))
        .arg("-o")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn trace_svg_has_one_path_per_stroke() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("paths.svg");
    let trace = data("golden/covid_january.trace");
    let status = touchchart()
        .arg("trace-svg")
        .arg(data("covid.toml"))
        .arg(&trace)
        .arg("-o")
        .arg(&svg)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    // count strokes straight from the trace: one per touch_down
    let strokes = std::fs::read_to_string(trace)
        .unwrap()
        .lines()
        .filter(|l| l.contains(r#""kind":"touch_down""#))
        .count();
    assert_eq!(strokes, 2);
    assert_eq!(text.matches("<path ").count(), strokes);
    assert!(text.starts_with("<svg"));
}

#[test]
fn bad_args_print_usage() {
    let out = touchchart().arg("frobnicate").output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("Usage"));
}

#[test]
fn bad_config_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "format_version = 1\ncsv_path = \"x.csv\"\nsurprise = true\n").unwrap();
    let out = touchchart().arg("describe").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("c.toml"), "{err}");
}

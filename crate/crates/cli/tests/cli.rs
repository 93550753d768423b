use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn lawmine(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lawmine"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn foil_learns_the_updown_clause() {
    let dir = tempfile::tempdir().unwrap();
    let kb = fixture("updown.kb");
    let before = std::fs::read(&kb).unwrap();
    let o = lawmine(&["mine", "--learner", "foil", "--knowledge", kb.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rules = std::fs::read_to_string(dir.path().join("rules.txt")).unwrap();
    assert_eq!(rules.trim(), "UpDown(x, y, z) <- Down(y, z)");
    assert!(dir.path().join("trace.tsv").exists() && dir.path().join("counters.txt").exists());
    assert_eq!(std::fs::read(&kb).unwrap(), before);
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = lawmine(&["mine", "--input", "no/such/prices.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/prices.csv"));
}

#[test]
fn malformed_knowledge_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("bad.kb");
    std::fs::write(&kb, "garbage line here\n").unwrap();
    let o = lawmine(&["mine", "--learner", "foil", "--knowledge", kb.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn declared_hypotheses_forecast_the_fixture_days() {
    let dir = tempfile::tempdir().unwrap();
    let csv = fixture("four_days.csv");
    let kb = fixture("four_days.kb");
    let o = lawmine(
        &[
            "forecast",
            "--input",
            csv.to_str().unwrap(),
            "--knowledge",
            kb.to_str().unwrap(),
            "--use-hypotheses",
            "--from",
            "1999-01-02",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tsv = std::fs::read_to_string(dir.path().join("forecast.tsv")).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "date\tsign\tlower\tupper\trules");
    assert_eq!(lines[2], "1999-01-04\tup\t54.6\t60\t0,1");
}

#[test]
fn inspect_lists_declarations() {
    let dir = tempfile::tempdir().unwrap();
    let kb = fixture("updown.kb");
    let o = lawmine(&["inspect", "--knowledge", kb.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("UpDown(price, price, price)"));
    assert!(text.contains("target: UpDown (2 positive, 2 negative)"));
}

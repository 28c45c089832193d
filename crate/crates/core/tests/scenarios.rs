use std::fs;
use std::path::PathBuf;

use fsolink::scenario::DEFAULT_SCENARIO_JSON;
use fsolink::{parse_scenario, parse_scenario_with_overrides, render_table, run_sweep, ScenarioError, TableFormat};

fn docs_scenarios() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/scenarios");
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn documented_scenarios_parse_and_run() {
    let files = docs_scenarios();
    assert!(!files.is_empty());
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let s = parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let sweep = s.sweep.clone().unwrap_or_else(|| panic!("{} has no sweep", path.display()));
        let rows = run_sweep(&s.setup(), &sweep).unwrap();
        assert!(!rows.is_empty(), "{}", path.display());
        for format in [TableFormat::Csv, TableFormat::Markdown] {
            render_table(sweep.kind(), &rows, format).unwrap();
        }
    }
}

#[test]
fn serialized_scenarios_parse_back_identically() {
    let mut texts = vec![DEFAULT_SCENARIO_JSON.to_string()];
    texts.extend(docs_scenarios().iter().map(|p| fs::read_to_string(p).unwrap()));
    for text in texts {
        let s = parse_scenario(&text).unwrap();
        let again = parse_scenario(&s.to_json()).unwrap();
        assert_eq!(s.to_json(), again.to_json());
    }
}

#[test]
fn errors_name_the_field() {
    let err = parse_scenario_with_overrides(DEFAULT_SCENARIO_JSON, &[("ground.elevation_deg".to_string(), "0".to_string())]).unwrap_err();
    assert_eq!(err.field(), Some("ground.elevation_deg"));

    let renamed = DEFAULT_SCENARIO_JSON.replace("\"telescope_diameter_mm\"", "\"telescope_diameter_m\"");
    let err = parse_scenario(&renamed).unwrap_err();
    assert!(err.field().is_some_and(|f| f.starts_with("receiver")), "{err}");

    match parse_scenario("{\n  \"link\": ,\n}").unwrap_err() {
        ScenarioError::Syntax { line, .. } => assert_eq!(line, 2),
        other => panic!("expected a syntax error, got {other}"),
    }
}

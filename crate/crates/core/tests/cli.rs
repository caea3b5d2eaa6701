use molres::cli::run_with;
use molres::format::TRACE_HEADER;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("molres").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn simulate_twice_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert_eq!(call(&["simulate", "--seed", "7", "--out", p.to_str().unwrap()]).0, 0);
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().next(), Some(TRACE_HEADER));
    assert_eq!(text.lines().count(), 4502);

    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.config.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 7);
    assert_eq!(side["config"]["tau"], 100.0);
}

#[test]
fn analyze_with_paper_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("protocol.json");
    std::fs::write(&cfg, "{}").unwrap();
    let (code, out, _) = call(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["sustained_substrate_nM"].as_f64().unwrap() / 5.9985e4 - 1.0).abs() < 1e-4);
    assert_eq!(v["master_seed"], 1);
}

#[test]
fn bench_emits_four_cells_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let (code, out, err) = call(&["bench", "--trials", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n_trials"], 4);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    for c in cells {
        assert_eq!(c["per_trial"].as_array().unwrap().len(), 4);
    }
    let rows = std::fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().next(), Some("seed,mode,task,nrmse_train,nrmse_test"));
    assert_eq!(rows.lines().count(), 17);
}

#[test]
fn sweep_writes_one_row_per_cell_and_value() {
    let (code, out, err) = call(&["sweep", "--trials", "3", "--key", "tau", "--values", "50,100"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "key,value,mode,task,mean,std");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("tau,50,product_only,A,"));
    assert!(err.contains("\"key\""), "provenance on stderr");
}

#[test]
fn typo_in_config_is_rejected_with_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"tua": 100}"#).unwrap();
    let (code, _, err) = call(&["trial", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("tua"), "{err}");
}

#[test]
fn trial_output_embeds_config() {
    let (code, out, _) = call(&["trial", "--seed", "3", "--mode", "product_only", "--task", "A"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["seed"], 3);
    assert_eq!(v["result"]["mode"], "product_only");
    assert!(v["config"].is_object());
    let n = v["result"]["nrmse_test"].as_f64().unwrap();
    assert!(n > 0.0 && n < 1.0);
}

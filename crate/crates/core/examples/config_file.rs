//! Loads a partial JSON config, fills defaults, validates, and writes it back.
//!
//! `cargo run --example config_file [path]`

use molres::config::{load_config, save_config, ExperimentConfig};

fn main() -> molres::Result<()> {
    let path = std::env::args().nth(1).map(std::path::PathBuf::from);
    let cfg = match &path {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::from_json(r#"{"tau": 50, "mode": "product_only", "reactor": {"e": 0.1}}"#)?,
    };
    println!("{}", cfg.to_json());

    match ExperimentConfig::from_json(r#"{"tau": -1}"#) {
        Ok(_) => unreachable!(),
        Err(e) => eprintln!("rejected: {e}"),
    }
    let out = std::env::temp_dir().join("molres-config.json");
    save_config(&cfg, &out)?;
    assert_eq!(load_config(&out)?, cfg);
    eprintln!("round trip through {}", out.display());
    Ok(())
}

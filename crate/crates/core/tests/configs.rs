//! The checked-in study configs are the library defaults, and every one of
//! them loads.

use std::path::PathBuf;

use netcentral::experiments::{StudyConfig, StudyId};

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn checked_in_configs_equal_defaults() {
    for id in StudyId::ALL {
        let path = config_dir().join(format!("{id}.toml"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let default = StudyConfig::default_for(id);
        assert_eq!(text, default.to_toml(), "{} is stale", path.display());
        assert_eq!(StudyConfig::load(&path).unwrap(), default);
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let mut text = StudyConfig::default_for(StudyId::Rate).to_toml();
    text.push_str("\n[extra]\nvalue = 1\n");
    assert!(StudyConfig::parse(&text).is_err());
}

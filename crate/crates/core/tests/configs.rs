use std::path::PathBuf;

use vcwave::harness::{build_background, load_config, RunConfig, Scenario};
use vcwave::riemann::{same_order_check, SameOrder};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_roundtrip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let text = cfg.to_toml_string().unwrap();
        let again = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn acceptance_presets_match_their_scenarios() {
    let contact = load_config(&configs_dir().join("contact.toml")).unwrap();
    assert_eq!(contact.scenario, Scenario::ContactOnly);
    assert_eq!((contact.grid.x_min, contact.grid.x_max, contact.grid.n_cells), (-100.0, 100.0, 4000));
    assert_eq!(contact.solver.t_end, 200.0);
    let (_, d) = build_background(&contact).unwrap();
    let d = d.unwrap();
    assert!(d.is_contact_only());
    assert!((d.strengths.cd - 0.1).abs() < 1e-12);

    let composite = load_config(&configs_dir().join("composite.toml")).unwrap();
    let (_, d) = build_background(&composite).unwrap();
    let d = d.unwrap();
    for s in [d.strengths.r1, d.strengths.cd, d.strengths.r3] {
        assert!((s - 0.05).abs() < 1e-9, "{:?}", d.strengths);
    }
    assert_eq!(same_order_check(&d, 10.0), SameOrder::Holds);
}

#[test]
fn doubled_domain_keeps_resolution() {
    let cfg = load_config(&configs_dir().join("contact.toml")).unwrap();
    let d = cfg.with_doubled_domain();
    assert_eq!(d.grid().unwrap().dx(), cfg.grid().unwrap().dx());
    assert_eq!(d.grid.x_max - d.grid.x_min, 2.0 * (cfg.grid.x_max - cfg.grid.x_min));
    d.validate().unwrap();
}

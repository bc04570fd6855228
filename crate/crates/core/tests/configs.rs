use std::path::PathBuf;

use noma_qubo::decoders::DecoderKind;
use noma_qubo::harness::{run_ber_sweep_with_width, SimulationConfig};

fn configs() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    paths
}

#[test]
fn shipped_configs_load() {
    let paths = configs();
    assert!(paths.len() >= 4);
    for p in paths {
        let c = SimulationConfig::from_path(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(c.trials > 0);
    }
}

#[test]
fn shipped_configs_run_when_shortened() {
    for p in configs() {
        let mut c = SimulationConfig::from_path(&p).unwrap();
        c.trials = 3;
        c.anneal.reads = 10;
        let records = run_ber_sweep_with_width(&c, 2).unwrap();
        assert_eq!(
            records.len(),
            c.power_dbm_list.len() * c.decoders.len() * c.n_users
        );
    }
}

#[test]
fn annealer_config_keeps_default_sampler() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let c = SimulationConfig::from_path(dir.join("power_sweep_annealer.toml")).unwrap();
    assert_eq!(c.anneal, noma_qubo::decoders::AnnealParams::default());
    assert!(c.decoders.contains(&DecoderKind::Annealer));
}

use proptest::prelude::*;

use quadorder::driver::{parse_config, AnalysisConfig, CheckKind, OutputFormat};
use quadorder::make_order;

fn config() -> impl Strategy<Value = AnalysisConfig> {
    let orders = prop::collection::btree_set(
        (prop::sample::select(vec![-1i64, -2, -3, -5, -6, -7, -14, -15, -23]), 1i64..20),
        1..6,
    );
    let checks = prop::sample::subsequence(CheckKind::ALL.to_vec(), 1..=8).prop_shuffle();
    let format = prop::sample::select(vec![OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text]);
    (orders, 2u64..1_000_000, 2u64..5000, checks, format, 1usize..64).prop_map(
        |(orders, norm_bound, sweep_bound, checks, format, jobs)| AnalysisConfig {
            orders: orders.into_iter().map(|(d, f)| make_order(d, f).unwrap()).collect(),
            norm_bound,
            sweep_bound,
            checks,
            format,
            jobs,
        },
    )
}

proptest! {
    #[test]
    fn parse_of_emitted_config_is_a_fixed_point(cfg in config()) {
        let once = parse_config(&cfg.to_toml()).unwrap();
        prop_assert_eq!(&once, &cfg);
        let twice = parse_config(&once.to_toml()).unwrap();
        prop_assert_eq!(twice.echo(), cfg.echo());
        prop_assert_eq!(once.to_toml(), twice.to_toml());
    }
}

#[test]
fn golden_corpus_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../golden/corpus.toml");
    let cfg = parse_config(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(cfg.orders.len(), 6);
    assert_eq!((cfg.norm_bound, cfg.sweep_bound), (10_000, 1000));
    assert_eq!(cfg.checks, CheckKind::ALL.to_vec());
}

use hobesov::harness::{
    generate_corpus, run_suite, CorpusSpec, ExperimentConfig, CHECKER_OPS, REGISTRY,
};
use hobesov::hermite::HermiteBasis;

fn subset(groups: &[&str]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.checks.enabled = Some(groups.iter().map(|g| g.to_string()).collect());
    cfg
}

#[test]
fn partition_only_config_gives_one_passing_group() {
    let report = run_suite(&subset(&["partition"])).unwrap();
    assert_eq!(report.groups.len(), 1);
    assert!(report.pass(), "{}", report.digest());
    assert!(report.rows().all(|r| r.check == "partition"));
}

#[test]
fn default_config_enables_every_group() {
    let cfg = ExperimentConfig::default();
    assert_eq!(cfg.enabled_checks().len(), 15);
    assert_eq!(REGISTRY.len(), 15);
    assert!(CHECKER_OPS.len() >= 30);
}

#[test]
fn corrupted_config_reports_its_line() {
    let err = ExperimentConfig::from_toml("config_version = 1\n[basis\ndim = 1\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn violations_are_rows_not_aborts() {
    let mut cfg = subset(&["weighted_l2", "oscillator_split"]);
    cfg.budgets.insert("weighted_l2.ratio".into(), 0.5);
    let report = run_suite(&cfg).unwrap();
    assert!(!report.pass());
    // the second group still ran
    assert!(report.group("oscillator_split").unwrap().pass());
    let flagged = report.rows().filter(|r| r.flags.to_string().contains("budget_violation")).count();
    assert!(flagged > 0);
}

#[test]
fn every_row_carries_the_config_hash() {
    let cfg = subset(&["partition"]);
    let report = run_suite(&cfg).unwrap();
    let mut buf = Vec::new();
    report.write_rows_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let hash = cfg.hash();
    assert!(text.lines().skip(1).all(|l| l.ends_with(&hash)));
}

#[test]
fn corpus_spec_examples() {
    let basis = HermiteBasis::new(1, 64).unwrap();
    let spec: CorpusSpec = toml::from_str("eigen = [[0], [5], [40]]").unwrap();
    assert_eq!(generate_corpus(&spec, basis).unwrap().len(), 3);

    let spec: CorpusSpec = toml::from_str("[random]\ncount = 4\nseed = 42").unwrap();
    let a = generate_corpus(&spec, basis).unwrap();
    let b = generate_corpus(&spec, basis).unwrap();
    assert!(a.members.iter().zip(&b.members).all(|(x, y)| x.coeffs == y.coeffs));

    let spec: CorpusSpec = toml::from_str("[[power_laws]]\ngamma = 0.3\nseed = 1").unwrap();
    assert!(generate_corpus(&spec, basis).is_err());
}

#[test]
fn shipped_configs_load() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut shipped = ExperimentConfig::load(&root.join("default.toml")).unwrap();
    let defaults = ExperimentConfig::default();
    for (key, value) in hobesov::harness::config::DEFAULT_BUDGETS {
        assert_eq!(shipped.budget(key).unwrap(), *value, "{key}");
    }
    shipped.budgets.clear();
    assert_eq!(shipped, defaults);

    let quick = ExperimentConfig::load(&root.join("quick.toml")).unwrap();
    assert_eq!(quick.enabled_checks().len(), 5);
    assert_eq!(quick.base_len(), 12 + 100);
}

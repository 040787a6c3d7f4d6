//! Experiment configuration, corpus generation and the verification suite.

pub mod checks;
pub mod config;
pub mod corpus;
pub mod report;
pub mod suite;

pub use checks::{CheckInfo, CHECKER_OPS, REGISTRY};
pub use config::ExperimentConfig;
pub use corpus::{
    coherent_power_law, generate_corpus, power_law, Corpus, CorpusSpec, GaussianSpec,
    HermiteGaussianSpec, Member, PowerLawSpec, RandomFamily, RESOLUTION_TOL,
};
pub use report::{ExperimentReport, GroupReport, Row, Summary};
pub use suite::{run_suite, run_with_context, Entry, Recorder, SuiteContext};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::corpus::{CorpusSpec, GaussianSpec, HermiteGaussianSpec, PowerLawSpec, RandomFamily};
use crate::besov::{Exponent, InterpolationParams};
use crate::error::{Error, Result};
use crate::hermite::{HermiteBasis, DEFAULT_MARGIN, DEFAULT_SPACING};
use crate::paraproduct::{
    LowHighParams, NegPosProductParams, NegativeLowHighParams, ProductParams, ResonantParams,
    DEFAULT_N0,
};
use crate::semigroup::XKind;

pub const CONFIG_VERSION: u32 = 1;

/// Budgets and tolerances used when a config does not override them.
///
/// Tolerances come from the accuracy targets of each invariant. Ratio budgets
/// are the pilot maxima on the default corpus rounded up by roughly a quarter.
pub const DEFAULT_BUDGETS: &[(&str, f64)] = &[
    ("corpus.tail", 1e-12),
    ("foundation.eigenrelation", 1e-9),
    ("foundation.parseval", 1e-9),
    ("foundation.round_trip", 1e-10),
    ("foundation.runtime_s", 10.0),
    ("partition.completeness", 1e-12),
    ("partition.below_base", 0.0),
    ("multiplier_uniformity.l1_spread", 0.5),
    ("multiplier_uniformity.linf_spread", 0.5),
    ("multiplier_uniformity.runtime_s", 60.0),
    ("kernel_scaling.max_min", 3.0),
    ("weighted_l2.ratio", 1.25),
    ("oscillator_split.two_sided", 2.2),
    ("besov.monotone", 0.0),
    ("besov.duality", 1e-10),
    ("besov.embedding", 1.0),
    ("besov.sandwich", 1.35),
    ("besov.interpolation", 3.2),
    ("besov.lifting", 3.0),
    ("bony.completeness", 1e-8),
    ("bony.regrouping", 1e-10),
    ("bilinear.lowhigh", 0.35),
    ("bilinear.negative_lowhigh", 0.27),
    ("bilinear.resonant", 2.8),
    ("bilinear.product", 0.57),
    ("bilinear.negpos", 1.05),
    ("bilinear.homogeneity", 1e-12),
    ("heat_kernel.mehler", 1e-8),
    ("heat_kernel.semigroup_law", 1e-12),
    ("heat_kernel.gaussian_bound", 1.0),
    ("heat_kernel.heat_bound", 1.25),
    ("smoothing_rates.slope_error", 0.15),
    ("smoothing_rates.dimension_gap", 0.20),
    ("equivalence.constant", 3.9),
    ("max_regularity.manufactured", 1e-8),
    ("max_regularity.residual", 1e-12),
    ("max_regularity.ratio", 3.3),
    ("continuity.deficit", 1.0),
    ("continuity.monotone", 0.0),
    ("continuity.weak_pairing", 1e-3),
    ("continuity.pairing_monotone", 0.0),
];

fn default_seed() -> u64 {
    42
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub dim: usize,
    pub max_degree: usize,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            max_degree: 128,
            spacing: DEFAULT_SPACING,
            margin: DEFAULT_MARGIN,
        }
    }
}

/// Corpus doubling used for stability deltas: ratios over the base prefix
/// (fixed families plus `base_random` random members) are compared with the whole corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityConfig {
    pub base_random: usize,
    pub max_growth: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            base_random: 100,
            max_growth: 0.10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDiffPair {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

fn pair(alpha: usize, beta: usize) -> PolyDiffPair {
    PolyDiffPair {
        alpha: vec![alpha],
        beta: vec![beta],
    }
}

fn default_pairs() -> Vec<PolyDiffPair> {
    vec![pair(1, 0), pair(0, 1), pair(1, 1), pair(2, 0), pair(0, 2)]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovTuple {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
}

fn bt(s: f64, p: Exponent, q: Exponent) -> BesovTuple {
    BesovTuple { s, p, q }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FoundationConfig {
    pub max_degree: usize,
    pub samples: usize,
}

impl Default for FoundationConfig {
    fn default() -> Self {
        Self {
            max_degree: 256,
            samples: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionConfig {
    pub points: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self { points: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    /// Blocks whose `L^1` and `L^inf` operator norms are compared.
    pub blocks: Vec<i32>,
    /// Blocks of the weighted-derivative scaling sweep.
    pub scaling_blocks: Vec<i32>,
    pub pairs: Vec<PolyDiffPair>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            blocks: (0..=5).collect(),
            scaling_blocks: (1..=5).collect(),
            pairs: default_pairs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightedConfig {
    pub pairs: Vec<PolyDiffPair>,
}

impl Default for WeightedConfig {
    fn default() -> Self {
        Self {
            pairs: default_pairs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingTuple {
    pub s: f64,
    pub r: Exponent,
    pub p: Exponent,
    pub q: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftingTuple {
    pub alpha: f64,
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesovConfig {
    /// `(s, p)` pairs on which `q -> ||f||_{B^s_{p,q}}` must be non-increasing.
    pub monotone: Vec<BesovTuple>,
    pub embedding: Vec<EmbeddingTuple>,
    pub sandwich: Vec<Exponent>,
    pub interpolation: Vec<InterpolationParams>,
    pub lifting: Vec<LiftingTuple>,
}

impl Default for BesovConfig {
    fn default() -> Self {
        use Exponent as E;
        let lift = |alpha, s, p, q| LiftingTuple { alpha, s, p, q };
        Self {
            monotone: vec![bt(0.0, E::TWO, E::TWO), bt(1.0, E::ONE, E::ONE), bt(0.5, E::INF, E::INF)],
            embedding: vec![
                EmbeddingTuple { s: 0.0, r: E::ONE, p: E::TWO, q: E::TWO },
                EmbeddingTuple { s: 0.0, r: E::TWO, p: E::INF, q: E::TWO },
                EmbeddingTuple { s: 0.5, r: E::ONE, p: E::INF, q: E::ONE },
            ],
            sandwich: vec![E::ONE, E::TWO, E::INF],
            interpolation: vec![
                InterpolationParams { s: 0.5, s0: 1.0, p: E::TWO, r: E::TWO, r0: E::TWO, theta: 0.5 },
                InterpolationParams { s: 0.25, s0: 1.0, p: E::TWO, r: E::TWO, r0: E::TWO, theta: 0.75 },
            ],
            lifting: vec![
                lift(-2.0, 0.0, E::TWO, E::TWO),
                lift(-1.0, 0.0, E::TWO, E::TWO),
                lift(1.0, 0.0, E::TWO, E::TWO),
                lift(2.0, 0.0, E::TWO, E::TWO),
                lift(1.0, 0.5, E::ONE, E::INF),
                lift(-1.0, 0.5, E::INF, E::ONE),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BonyConfig {
    /// Members of the corpus prefix used for the pieces.
    pub members: usize,
    pub n0: Vec<i32>,
}

impl Default for BonyConfig {
    fn default() -> Self {
        Self {
            members: 100,
            n0: vec![1, 2, 3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BilinearConfig {
    pub n0: i32,
    pub lowhigh: Vec<LowHighParams>,
    pub negative_lowhigh: Vec<NegativeLowHighParams>,
    pub resonant: Vec<ResonantParams>,
    pub product: Vec<ProductParams>,
    pub negpos: Vec<NegPosProductParams>,
    /// Pairs used for the homogeneity check, and the factors applied to `f` and `g`.
    pub homogeneity_pairs: usize,
    pub scales: [f64; 2],
}

impl Default for BilinearConfig {
    fn default() -> Self {
        use Exponent as E;
        let lh = |s| LowHighParams { s, p: E::TWO, p1: E::INF, p2: E::TWO, q: E::TWO };
        Self {
            n0: DEFAULT_N0,
            lowhigh: vec![lh(0.5), lh(1.0), lh(2.0)],
            negative_lowhigh: vec![NegativeLowHighParams {
                s: -0.5,
                r: 1.0,
                p: E::TWO,
                p1: E::INF,
                p2: E::TWO,
                q: E::TWO,
            }],
            resonant: vec![ResonantParams {
                s1: 0.5,
                s2: 0.5,
                p: E::ONE,
                p1: E::TWO,
                p2: E::TWO,
                q: E::ONE,
                q1: E::TWO,
                q2: E::TWO,
            }],
            product: vec![ProductParams {
                s: 1.0,
                p: E::TWO,
                p1: E::TWO,
                p2: E::INF,
                p3: E::INF,
                p4: E::TWO,
                q: E::TWO,
            }],
            negpos: vec![NegPosProductParams {
                s: -0.5,
                r: 1.0,
                p: E::TWO,
                p1: E::TWO,
                p2: E::INF,
                q: E::TWO,
            }],
            homogeneity_pairs: 5,
            scales: [10.0, 0.1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatConfig {
    pub kernel_degree: usize,
    pub kernel_times: Vec<f64>,
    pub gaussian_c: f64,
    /// `(t, s)` pairs for `e^{-tH} e^{-sH} = e^{-(t+s)H}`.
    pub law_times: Vec<[f64; 2]>,
    pub bound_times: Vec<f64>,
    pub bound: Vec<BesovTuple>,
}

impl Default for HeatConfig {
    fn default() -> Self {
        use Exponent as E;
        Self {
            kernel_degree: 128,
            kernel_times: vec![0.1, 0.5, 1.0],
            gaussian_c: 8.0,
            law_times: vec![[0.1, 0.2], [0.5, 1.0], [1e-3, 2.0]],
            bound_times: vec![1e-3, 1e-2, 0.1, 1.0],
            bound: vec![bt(0.0, E::TWO, E::TWO), bt(1.0, E::ONE, E::INF), bt(-0.5, E::INF, E::ONE)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTuple {
    pub dim: usize,
    pub max_degree: usize,
    pub s1: f64,
    pub s2: f64,
    pub p1: Exponent,
    pub p2: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatesConfig {
    pub tuples: Vec<RateTuple>,
    /// Times per fit, log-spaced over `[t0, span t0]` with `t0 = 1/(2N + d)`.
    pub samples: usize,
    pub span: f64,
    /// Indices of two tuples differing only in `d`; their slope gap is checked.
    pub gap: Option<[usize; 2]>,
}

impl Default for RatesConfig {
    fn default() -> Self {
        use Exponent as E;
        let rt = |dim, max_degree, s1, s2, p1, p2| RateTuple { dim, max_degree, s1, s2, p1, p2 };
        Self {
            tuples: vec![
                rt(1, 256, 0.0, 1.0, E::TWO, E::TWO),
                rt(1, 256, 0.0, 0.0, E::ONE, E::INF),
                rt(1, 256, 0.5, 1.0, E::ONE, E::INF),
                rt(2, 64, 0.0, 0.0, E::ONE, E::INF),
            ],
            samples: 17,
            span: 16.0,
            gap: Some([1, 3]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceConfig {
    pub s0: f64,
    pub tuples: Vec<BesovTuple>,
    pub spaces: Vec<XKind>,
    pub nodes: usize,
    pub t_min: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        use Exponent as E;
        Self {
            s0: 1.0,
            tuples: vec![bt(1.0, E::TWO, E::TWO), bt(0.5, E::TWO, E::ONE), bt(0.0, E::INF, E::INF)],
            spaces: vec![
                XKind::Lp,
                XKind::Besov { r: E::ONE },
                XKind::Besov { r: E::TWO },
                XKind::Besov { r: E::INF },
            ],
            nodes: 200,
            t_min: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxRegConfig {
    pub s: f64,
    pub p: Exponent,
    pub qs: Vec<Exponent>,
    pub t_max: f64,
    pub t_first: f64,
    pub nodes: usize,
    /// Uniform step of the manufactured-solution run.
    pub manufactured_step: f64,
}

impl Default for MaxRegConfig {
    fn default() -> Self {
        Self {
            s: 0.0,
            p: Exponent::TWO,
            qs: vec![Exponent::ONE, Exponent::TWO, Exponent::INF],
            t_max: 10.0,
            t_first: 1e-6,
            nodes: 400,
            manufactured_step: 2e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuityConfig {
    pub tuples: Vec<BesovTuple>,
    /// Decreasing times; the last one is compared against `t ||f||_{B^{s+2}}`.
    pub times: Vec<f64>,
    pub pairs: usize,
    pub pair_times: Vec<f64>,
}

impl Default for ContinuityConfig {
    fn default() -> Self {
        use Exponent as E;
        Self {
            tuples: vec![bt(0.0, E::TWO, E::TWO), bt(1.0, E::TWO, E::ONE), bt(0.0, E::ONE, E::ONE)],
            times: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            pairs: 20,
            pair_times: vec![1e-2, 1e-3, 1e-4],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecksConfig {
    /// Check groups to run, in registry order; all when absent.
    pub enabled: Option<Vec<String>>,
    pub foundation: FoundationConfig,
    pub partition: PartitionConfig,
    pub kernels: KernelConfig,
    pub weighted: WeightedConfig,
    pub besov: BesovConfig,
    pub bony: BonyConfig,
    pub bilinear: BilinearConfig,
    pub heat: HeatConfig,
    pub rates: RatesConfig,
    pub equivalence: EquivalenceConfig,
    pub max_regularity: MaxRegConfig,
    pub continuity: ContinuityConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory receiving `rows.csv`, `summary.csv` and `report.json`.
    pub dir: Option<PathBuf>,
}

/// Everything a run depends on. The hash of its canonical form tags every report row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub config_version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default = "default_corpus")]
    pub corpus: CorpusSpec,
    #[serde(default)]
    pub stability: StabilityConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    /// Overrides of [`DEFAULT_BUDGETS`].
    #[serde(default)]
    pub budgets: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Fixed families plus 200 random members with band `N/4`.
pub fn default_corpus() -> CorpusSpec {
    default_corpus_with_seed(default_seed())
}

fn default_corpus_with_seed(seed: u64) -> CorpusSpec {
    CorpusSpec {
        eigen: vec![vec![0], vec![1], vec![5], vec![20], vec![40]],
        gaussians: vec![
            GaussianSpec { a: 0.5, x0: [0.0; 2] },
            GaussianSpec { a: 1.0, x0: [1.0, 0.0] },
            GaussianSpec { a: 0.25, x0: [-2.0, 0.0] },
        ],
        hermite_gaussians: vec![
            HermiteGaussianSpec { n: vec![4], a: 0.8 },
            HermiteGaussianSpec { n: vec![7], a: 0.6 },
        ],
        power_laws: vec![
            PowerLawSpec { gamma: 1.0, band: Some(32), seed: seed + 7 },
            PowerLawSpec { gamma: 2.0, band: Some(48), seed: seed + 8 },
        ],
        random: Some(RandomFamily {
            count: 200,
            band: None,
            seed,
        }),
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            config_version: CONFIG_VERSION,
            seed: default_seed(),
            basis: BasisConfig::default(),
            corpus: default_corpus(),
            stability: StabilityConfig::default(),
            checks: ChecksConfig::default(),
            budgets: BTreeMap::new(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses and validates TOML. Syntax errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let place = match e.span() {
                Some(span) => {
                    let (line, col) = line_col(text, span.start);
                    format!("line {line}, column {col}: ")
                }
                None => String::new(),
            };
            Error::Config(format!("{place}{}", e.message()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Replaces the run seed and the seed of the random family.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        if let Some(r) = &mut self.corpus.random {
            r.seed = seed;
        }
        self
    }

    pub fn basis(&self) -> Result<HermiteBasis> {
        HermiteBasis::new(self.basis.dim, self.basis.max_degree)
    }

    /// Budget or tolerance for `key`, with config overrides taking precedence.
    pub fn budget(&self, key: &str) -> Result<f64> {
        if let Some(v) = self.budgets.get(key) {
            return Ok(*v);
        }
        DEFAULT_BUDGETS
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Config(format!("no budget named `{key}`")))
    }

    /// Number of corpus members in the stability base.
    pub fn base_len(&self) -> usize {
        let c = &self.corpus;
        let fixed = c.eigen.len() + c.gaussians.len() + c.hermite_gaussians.len() + c.power_laws.len();
        let random = c.random.as_ref().map_or(0, |r| r.count.min(self.stability.base_random));
        fixed + random
    }

    /// Enabled check groups, in registry order.
    pub fn enabled_checks(&self) -> Vec<&'static str> {
        super::checks::REGISTRY
            .iter()
            .map(|c| c.name)
            .filter(|n| self.checks.enabled.as_ref().is_none_or(|e| e.iter().any(|x| x == n)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.config_version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "config_version {} is not supported (expected {CONFIG_VERSION})",
                self.config_version
            )));
        }
        self.basis()?;
        if !(self.basis.spacing > 0.0) || !(self.basis.margin >= 4.0) {
            return Err(Error::Config("basis spacing must be positive and margin at least 4".into()));
        }
        if let Some(enabled) = &self.checks.enabled {
            for name in enabled {
                if !super::checks::REGISTRY.iter().any(|c| c.name == name) {
                    return Err(Error::Config(format!("unknown check `{name}`")));
                }
            }
        }
        for key in self.budgets.keys() {
            if !DEFAULT_BUDGETS.iter().any(|(k, _)| k == key) {
                return Err(Error::Config(format!("unknown budget `{key}`")));
            }
        }
        if !(self.stability.max_growth >= 0.0) {
            return Err(Error::Config("stability.max_growth must be non-negative".into()));
        }
        let d = self.basis.dim;
        for t in &self.checks.besov.interpolation {
            t.validate(d).map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some([a, b]) = self.checks.rates.gap {
            let n = self.checks.rates.tuples.len();
            if a >= n || b >= n {
                return Err(Error::Config(format!("rates.gap indices out of range for {n} tuples")));
            }
        }
        if self.checks.continuity.times.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("continuity.times must be strictly decreasing".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn minimal_file_uses_defaults() {
        let cfg = ExperimentConfig::from_toml("config_version = 1\n").unwrap();
        assert_eq!(cfg.basis.max_degree, 128);
        assert_eq!(cfg.budget("equivalence.constant").unwrap(), 3.9);
        assert_eq!(cfg.base_len(), 12 + 100);
    }

    #[test]
    fn errors_point_at_the_line() {
        let text = "config_version = 1\n[basis]\ndim = 1\nmax_degree = \"many\"\n";
        let err = ExperimentConfig::from_toml(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
        let err = ExperimentConfig::from_toml("config_version = 2\n").unwrap_err();
        assert!(err.to_string().contains("config_version"));
        let err = ExperimentConfig::from_toml("config_version = 1\n[budgets]\n\"nope\" = 1.0\n");
        assert!(err.is_err());
        let err = ExperimentConfig::from_toml("config_version = 1\n[checks]\nenabled = [\"nope\"]\n");
        assert!(err.is_err());
    }

    #[test]
    fn seed_override_changes_hash() {
        let a = ExperimentConfig::default();
        let b = a.clone().with_seed(7);
        assert_eq!(b.corpus.random.as_ref().unwrap().seed, 7);
        assert_ne!(a.hash(), b.hash());
    }
}

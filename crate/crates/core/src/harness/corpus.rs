use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{
    hermite_function, Grid, GridFunction, HermiteBasis, SpectralCoefficients, TransformPlan,
    DEFAULT_MARGIN, DEFAULT_SPACING,
};

/// A member is accepted when its relative tail on the top shell is below this.
pub const RESOLUTION_TOL: f64 = 1e-12;

/// Seeded uniform-random members, each drawn from its own stream of `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomFamily {
    pub count: usize,
    /// Total-degree band limit; defaults to `N / 4`.
    #[serde(default)]
    pub band: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    /// `e^{-a |x - x0|²}`.
    pub a: f64,
    #[serde(default)]
    pub x0: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteGaussianSpec {
    /// Degree of the Hermite polynomial along each axis.
    pub n: Vec<usize>,
    /// Gaussian rate: the member is `prod_i h_{n_i}(sqrt(2a) x_i)`.
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSpec {
    /// `c_n = (2|n| + d)^{-gamma} e^{i theta_n}` with seeded phases.
    pub gamma: f64,
    #[serde(default)]
    pub band: Option<usize>,
    pub seed: u64,
}

/// Named families making up a corpus. Every field may be empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub eigen: Vec<Vec<usize>>,
    #[serde(default)]
    pub gaussians: Vec<GaussianSpec>,
    #[serde(default)]
    pub hermite_gaussians: Vec<HermiteGaussianSpec>,
    #[serde(default)]
    pub power_laws: Vec<PowerLawSpec>,
    #[serde(default)]
    pub random: Option<RandomFamily>,
}

#[derive(Clone, Debug)]
pub struct Member {
    pub id: String,
    pub coeffs: SpectralCoefficients,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub members: Vec<Member>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.id == id)
    }

    /// The first `n` members.
    pub fn prefix(&self, n: usize) -> Corpus {
        Corpus {
            members: self.members[..n.min(self.len())].to_vec(),
        }
    }
}

fn fmt_index(n: &[usize]) -> String {
    n.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_")
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Projects a callable onto `basis` with the trapezoid rule on the default grid.
pub fn project_fn(f: impl Fn([f64; 2]) -> Complex64, basis: HermiteBasis) -> Result<SpectralCoefficients> {
    let grid = Grid::for_basis(&basis, DEFAULT_SPACING, DEFAULT_MARGIN)?;
    let plan = TransformPlan::new(basis, grid.clone())?;
    plan.analyze(&GridFunction::from_fn(grid, f))
}

fn check_len(n: &[usize], dim: usize, what: &str) -> Result<()> {
    if n.len() != dim {
        return Err(Error::Config(format!(
            "{what} index {n:?} has length {}, expected {dim}",
            n.len()
        )));
    }
    Ok(())
}

/// `c_n = (2|n| + d)^{-gamma} e^{i theta_n}` for `|n| <= band`, phases from `seed`.
pub fn power_law(basis: HermiteBasis, gamma: f64, band: usize, seed: u64) -> SpectralCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = basis.dim();
    SpectralCoefficients::from_fn(basis, |n| {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let total = n[0] + n[1];
        if total > band {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(((2 * total + d) as f64).powf(-gamma), theta)
    })
}

/// Phase-coherent broadband input `c_n = (2|n| + d)^{-gamma} prod_i h_{n_i}(0)` for `|n| <= band`.
///
/// Every block then concentrates at the origin, so its `L^p` norms scale with the block
/// index as sharply as Bernstein's inequality allows. This is the input that realizes the
/// smoothing rates across all `p`.
pub fn coherent_power_law(basis: HermiteBasis, gamma: f64, band: usize) -> SpectralCoefficients {
    let d = basis.dim();
    let at0: Vec<f64> = (0..=basis.max_degree()).map(|k| hermite_function(k, 0.0)).collect();
    SpectralCoefficients::from_fn(basis, |n| {
        let total = n[0] + n[1];
        if total > band {
            return Complex64::new(0.0, 0.0);
        }
        let amp: f64 = n[..d].iter().map(|&k| at0[k]).product();
        Complex64::new(((2 * total + d) as f64).powf(-gamma) * amp, 0.0)
    })
}

/// Builds every member in family order: eigenfunctions, Gaussians, Hermite-Gaussians,
/// power laws, then random members. Unresolved members are rejected.
pub fn generate_corpus(spec: &CorpusSpec, basis: HermiteBasis) -> Result<Corpus> {
    let d = basis.dim();
    let n_max = basis.max_degree();
    let mut members = Vec::new();
    for n in &spec.eigen {
        check_len(n, d, "eigenfunction")?;
        members.push(Member {
            id: format!("h_{}", fmt_index(n)),
            coeffs: SpectralCoefficients::unit(basis, n)?,
        });
    }
    for g in &spec.gaussians {
        if !(g.a > 0.0) {
            return Err(Error::Config(format!("Gaussian rate {} must be positive", g.a)));
        }
        let (a, x0) = (g.a, g.x0);
        let f = move |x: [f64; 2]| {
            let r2: f64 = (0..d).map(|i| (x[i] - x0[i]).powi(2)).sum();
            Complex64::new((-a * r2).exp(), 0.0)
        };
        members.push(Member {
            id: format!("gauss_a{}_x{}_{}", g.a, x0[0], if d == 2 { x0[1] } else { 0.0 }),
            coeffs: project_fn(f, basis)?,
        });
    }
    for hg in &spec.hermite_gaussians {
        check_len(&hg.n, d, "Hermite-Gaussian")?;
        if !(hg.a > 0.0) {
            return Err(Error::Config(format!("Gaussian rate {} must be positive", hg.a)));
        }
        let (n, scale) = (hg.n.clone(), (2.0 * hg.a).sqrt());
        let f = move |x: [f64; 2]| {
            Complex64::new((0..d).map(|i| hermite_function(n[i], scale * x[i])).product(), 0.0)
        };
        members.push(Member {
            id: format!("hgauss_{}_a{}", fmt_index(&hg.n), hg.a),
            coeffs: project_fn(f, basis)?,
        });
    }
    for pl in &spec.power_laws {
        let band = pl.band.unwrap_or(d * n_max);
        members.push(Member {
            id: format!("power_g{}_b{}_s{}", pl.gamma, band, pl.seed),
            coeffs: power_law(basis, pl.gamma, band, pl.seed),
        });
    }
    if let Some(r) = &spec.random {
        let band = r.band.unwrap_or(n_max / 4);
        for i in 0..r.count {
            members.push(Member {
                id: format!("rand_s{}_{i}", r.seed),
                coeffs: SpectralCoefficients::random(basis, band, &mut stream(r.seed, i)),
            });
        }
    }
    for m in &members {
        let tail = m.coeffs.relative_tail(1);
        if tail > RESOLUTION_TOL {
            return Err(Error::Unresolved {
                id: m.id.clone(),
                tail,
                limit: RESOLUTION_TOL,
            });
        }
    }
    Ok(Corpus { members })
}

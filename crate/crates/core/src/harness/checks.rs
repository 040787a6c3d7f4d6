//! The verification suite: an ordered registry of check groups.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{BesovTuple, PolyDiffPair};
use super::corpus::{coherent_power_law, Member, RESOLUTION_TOL};
use super::suite::{Entry, Recorder, SuiteContext};
use crate::besov::{
    besov_norm, duality_pairing, embedding_ratio, interpolation_check, lifting_ratio,
    sandwich_check, BesovParams, BlockNorms, Exponent, LpEvaluator,
};
use crate::error::{Error, Result};
use crate::flags::{Flags, Ratio};
use crate::hermite::{apply_oscillator, with_headroom, Grid, HermiteBasis, SpectralCoefficients, TransformPlan};
use crate::paraproduct::{
    bony_decompose, lowhigh_estimate_ratio, negative_positive_product_ratio,
    negative_s_lowhigh_ratio, product_estimate_ratio, resonant_estimate_ratio, Bilinear,
    ProductEngine,
};
use crate::semigroup::{
    continuity_deficit, duhamel_solve, equivalence_ratio, gaussian_bound_ratio, graded_grid,
    heat_apply, heat_bound_ratio, log_space, max_reg_ratio, mehler_kernel, semigroup_norms,
    smoothing_rate_fit, smoothing_ratio, weak_continuity_pairing, MaxRegParams,
    SemigroupNormParams, SmoothingParams,
};
use crate::spectral::{
    apply_h_power, apply_multiplier, build_partition, kernel_grid, low_block, lp_block,
    multiplier_kernel, operator_kernel, operator_norm, oscillator_split_ratios, poly_diff_ratio,
    pow2, resolving_degree, widened_block, DyadicPartition, KernelMatrix, SymbolFn,
};

pub type CheckFn = fn(&SuiteContext, &mut Recorder) -> Result<()>;

/// A check group and the library operations it exercises.
pub struct CheckInfo {
    pub name: &'static str,
    pub covers: &'static [&'static str],
    pub run: CheckFn,
}

/// Every checker operation of the spectral, Besov, paraproduct and semigroup layers.
pub const CHECKER_OPS: &[&str] = &[
    "build_partition",
    "apply_multiplier",
    "lp_block",
    "widened_block",
    "low_block",
    "apply_h_power",
    "multiplier_kernel",
    "operator_kernel",
    "operator_norm",
    "poly_diff_ratio",
    "oscillator_split_ratios",
    "lp_norm",
    "besov_norm",
    "duality_pairing",
    "embedding_ratio",
    "sandwich_check",
    "interpolation_check",
    "lifting_ratio",
    "product",
    "bony_decompose",
    "lowhigh_estimate_ratio",
    "negative_s_lowhigh_ratio",
    "resonant_estimate_ratio",
    "product_estimate_ratio",
    "negative_positive_product_ratio",
    "heat_apply",
    "mehler_kernel",
    "gaussian_bound_ratio",
    "heat_bound_ratio",
    "smoothing_ratio",
    "smoothing_rate_fit",
    "continuity_deficit",
    "weak_continuity_pairing",
    "semigroup_norm",
    "equivalence_ratio",
    "duhamel_solve",
    "max_reg_ratio",
];

pub const REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        name: "corpus",
        covers: &[],
        run: corpus,
    },
    CheckInfo {
        name: "foundation",
        covers: &[],
        run: foundation,
    },
    CheckInfo {
        name: "partition",
        covers: &["build_partition", "apply_multiplier", "lp_block", "widened_block", "low_block"],
        run: partition,
    },
    CheckInfo {
        name: "multiplier_uniformity",
        covers: &["multiplier_kernel", "operator_norm"],
        run: multiplier_uniformity,
    },
    CheckInfo {
        name: "kernel_scaling",
        covers: &["operator_kernel", "operator_norm"],
        run: kernel_scaling,
    },
    CheckInfo {
        name: "weighted_l2",
        covers: &["poly_diff_ratio"],
        run: weighted_l2,
    },
    CheckInfo {
        name: "oscillator_split",
        covers: &["oscillator_split_ratios", "apply_h_power"],
        run: oscillator_split,
    },
    CheckInfo {
        name: "besov",
        covers: &[
            "lp_norm",
            "besov_norm",
            "duality_pairing",
            "embedding_ratio",
            "sandwich_check",
            "interpolation_check",
            "lifting_ratio",
        ],
        run: besov,
    },
    CheckInfo {
        name: "bony",
        covers: &["product", "bony_decompose"],
        run: bony,
    },
    CheckInfo {
        name: "bilinear",
        covers: &[
            "lowhigh_estimate_ratio",
            "negative_s_lowhigh_ratio",
            "resonant_estimate_ratio",
            "product_estimate_ratio",
            "negative_positive_product_ratio",
        ],
        run: bilinear,
    },
    CheckInfo {
        name: "heat_kernel",
        covers: &["heat_apply", "mehler_kernel", "gaussian_bound_ratio", "heat_bound_ratio"],
        run: heat_kernel,
    },
    CheckInfo {
        name: "smoothing_rates",
        covers: &["smoothing_ratio", "smoothing_rate_fit"],
        run: smoothing_rates,
    },
    CheckInfo {
        name: "equivalence",
        covers: &["semigroup_norm", "equivalence_ratio"],
        run: equivalence,
    },
    CheckInfo {
        name: "max_regularity",
        covers: &["duhamel_solve", "max_reg_ratio"],
        run: max_regularity,
    },
    CheckInfo {
        name: "continuity",
        covers: &["continuity_deficit", "weak_continuity_pairing"],
        run: continuity,
    },
];

fn tuple_params(t: &BesovTuple) -> String {
    format!("s={},p={},q={}", t.s, t.p, t.q)
}

fn pair_params(p: &PolyDiffPair) -> String {
    format!("alpha={:?},beta={:?}", p.alpha, p.beta)
}

fn rel_diff(a: &SpectralCoefficients, b: &SpectralCoefficients, scale: f64) -> f64 {
    if scale == 0.0 {
        return (a - b).norm();
    }
    (a - b).norm() / scale
}

fn corpus(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let mut worst = 0.0f64;
    for (label, c) in [("corpus", &ctx.corpus), ("partner", &ctx.partner)] {
        for m in &c.members {
            let tail = m.coeffs.relative_tail(1);
            rec.row(label, &m.id, "", tail, Flags::when(tail > RESOLUTION_TOL, Flags::UNRESOLVED));
            worst = worst.max(tail);
        }
    }
    rec.tolerance("tail", &format!("members={}", ctx.corpus.len()), worst, Flags::NONE)?;
    Ok(())
}

fn foundation(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.foundation;
    let d = ctx.basis.dim();
    let basis = HermiteBasis::new(d, cfg.max_degree)?;
    let params = format!("d={d},N={}", cfg.max_degree);
    let grid = Grid::for_basis(&basis, ctx.config.basis.spacing, ctx.config.basis.margin)?;
    let plan = TransformPlan::new(basis, grid.clone())?;
    let weights = grid.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed);
    let (mut eig, mut parseval, mut trip) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        let c = SpectralCoefficients::random(basis, d * cfg.max_degree, &mut rng);
        let id = format!("rand_{i}");
        let wide = with_headroom(&c, 2);
        let wb = wide.basis();
        let e = rel_diff(&apply_oscillator(&c)?, &wide.map_diagonal(|k| wb.eigenvalue(k)), c.norm() * basis.max_eigenvalue());
        rec.row("eigenrelation", &id, "", e, Flags::NONE);
        let values = plan.synthesize(&c)?;
        let grid_sq: f64 = values.values().iter().zip(&weights).map(|(v, w)| w * v.norm_sqr()).sum();
        let p = (grid_sq - c.norm_sqr()).abs() / c.norm_sqr();
        rec.row("parseval", &id, "", p, Flags::NONE);
        let back = plan.analyze(&values)?;
        let top = c.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = back.max_abs_diff(&c) / top;
        rec.row("round_trip", &id, "", r, Flags::NONE);
        eig = eig.max(e);
        parseval = parseval.max(p);
        trip = trip.max(r);
    }
    // eigenfunctions one at a time, in one dimension
    if d == 1 {
        for n in 0..=cfg.max_degree {
            let h = SpectralCoefficients::unit(basis, &[n])?;
            let wide = with_headroom(&h, 2);
            let e = rel_diff(&apply_oscillator(&h)?, &wide.scale(((2 * n + 1) as f64).into()), (2 * n + 1) as f64);
            eig = eig.max(e);
        }
    }
    rec.tolerance("eigenrelation", &params, eig, Flags::NONE)?;
    rec.tolerance("parseval", &params, parseval, Flags::NONE)?;
    rec.tolerance("round_trip", &params, trip, Flags::NONE)?;
    Ok(())
}

fn partition(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.partition;
    let d = ctx.basis.dim();
    let p = build_partition(d, ctx.basis.max_degree())?;
    if p != ctx.partition {
        return Err(Error::invalid("partition rebuilt from (d, N) differs from the suite partition"));
    }
    let pts = log_space((d as f64).sqrt(), pow2(p.j_max()), cfg.points.max(2));
    let mut scalar = 0.0f64;
    for &l in &pts {
        let sum: f64 = (p.j0()..=p.j_max() + 1).map(|j| p.phi(j, l)).sum();
        scalar = scalar.max((sum - 1.0).abs());
    }
    let params = format!("points={}", pts.len());
    rec.row(&params, "", "", scalar, Flags::NONE);
    let identity = SymbolFn::constant(1.0);
    let mut operator = 0.0f64;
    let mut below = 0.0f64;
    for m in &ctx.corpus.members {
        let f = &m.coeffs;
        let scale = f.norm();
        let blocks: Vec<i32> = p.blocks_for(&f.basis()).collect();
        let mut total = SpectralCoefficients::zeros(f.basis());
        let mut high = low_block(&p, f);
        for &j in &blocks {
            let b = lp_block(&p, j, f);
            total += &b;
            if j >= 1 {
                high += &b;
            }
        }
        let mut err = rel_diff(&total, f, scale).max(rel_diff(&high, f, scale));
        err = err.max(rel_diff(&apply_multiplier(&identity, f), f, scale));
        for &j in &blocks {
            let three = &(&lp_block(&p, j - 1, f) + &lp_block(&p, j, f)) + &lp_block(&p, j + 1, f);
            err = err.max(rel_diff(&widened_block(&p, j, f), &three, scale));
        }
        rec.row("operator", &m.id, "", err, Flags::NONE);
        operator = operator.max(err);
        for j in p.j0() - 3..p.j0() {
            let b = lp_block(&p, j, f);
            below = below.max(b.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    rec.tolerance("completeness", &params, scalar, Flags::NONE)?;
    rec.tolerance("completeness", "operator", operator, Flags::NONE)?;
    rec.tolerance("below_base", &format!("j0={}", p.j0()), below, Flags::NONE)?;
    Ok(())
}

/// Kernel of `phi_j(sqrt H)` in the smallest basis of degree at least `floor` that resolves it.
fn block_basis(p: &DyadicPartition, j: i32, floor: usize) -> Result<HermiteBasis> {
    HermiteBasis::new(1, resolving_degree(p, j).max(floor))
}

fn block_kernel(p: &DyadicPartition, j: i32, floor: usize) -> Result<KernelMatrix> {
    let basis = block_basis(p, j, floor)?;
    multiplier_kernel(&SymbolFn::block(p, j), basis, &kernel_grid(&basis, 0)?)
}

fn spread(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    v.iter().map(|x| (x - median).abs() / median).fold(0.0, f64::max)
}

fn multiplier_uniformity(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.kernels;
    let floor = ctx.basis.max_degree();
    let p = DyadicPartition::new(1, floor)?;
    let (mut ones, mut infs, mut flags) = (Vec::new(), Vec::new(), Flags::NONE);
    for &j in &cfg.blocks {
        let k = block_kernel(&p, j, floor)?;
        let f = Flags::when(!k.is_resolved(), Flags::UNRESOLVED);
        let (one, inf) = (operator_norm(&k, 1.0)?, operator_norm(&k, f64::INFINITY)?);
        let n = k.grid().len();
        rec.row(&format!("j={j},p=1,nodes={n}"), "", "", one, f);
        rec.row(&format!("j={j},p=inf,nodes={n}"), "", "", inf, f);
        ones.push(one);
        infs.push(inf);
        flags |= f;
    }
    let params = format!("j={:?}", cfg.blocks);
    rec.tolerance("l1_spread", &params, spread(&ones), flags)?;
    rec.tolerance("linf_spread", &params, spread(&infs), flags)?;
    Ok(())
}

fn kernel_scaling(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.kernels;
    let floor = ctx.basis.max_degree();
    let p = DyadicPartition::new(1, floor)?;
    for pair in &cfg.pairs {
        if pair.alpha.len() != 1 || pair.beta.len() != 1 {
            return Err(Error::Config(format!("kernel pairs are one-dimensional, got {pair:?}")));
        }
        let order = pair.alpha[0] + pair.beta[0];
        let (mut vals, mut flags) = (Vec::new(), Flags::NONE);
        for &j in &cfg.scaling_blocks {
            let basis = block_basis(&p, j, floor)?;
            let grid = kernel_grid(&basis, order)?;
            let k = operator_kernel(&pair.alpha, &pair.beta, &SymbolFn::block(&p, j), basis, &grid)?;
            let f = Flags::when(!k.is_resolved(), Flags::UNRESOLVED);
            let v = operator_norm(&k, 1.0)? / pow2(order as i32 * j);
            rec.row(&format!("{},j={j}", pair_params(pair)), "", "", v, f);
            vals.push(v);
            flags |= f;
        }
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        rec.tolerance("max_min", &pair_params(pair), hi / lo, flags)?;
    }
    Ok(())
}

fn weighted_l2(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    for pair in &ctx.config.checks.weighted.pairs {
        let entries = ctx
            .corpus
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| Ok(Entry::single(i, m, poly_diff_ratio(&m.coeffs, &pair.alpha, &pair.beta)?)))
            .collect::<Result<Vec<_>>>()?;
        rec.bounded("ratio", &pair_params(pair), &entries)?;
    }
    Ok(())
}

fn oscillator_split(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let mut entries = Vec::new();
    let mut product_err = 0.0f64;
    for (i, m) in ctx.corpus.members.iter().enumerate() {
        let (up, down) = oscillator_split_ratios(&m.coeffs)?;
        product_err = product_err.max((up.value * down.value - 1.0).abs());
        entries.push(Entry::single(i, m, up));
        // the oscillator itself is H^{2/2}
        let h = apply_h_power(2.0, &m.coeffs);
        let ladder = apply_oscillator(&m.coeffs)?.resize(m.coeffs.basis())?;
        product_err = product_err.max(rel_diff(&h, &ladder, h.norm()));
    }
    if product_err > 1e-10 {
        return Err(Error::invalid(format!("split ratios inconsistent by {product_err:.3e}")));
    }
    rec.two_sided("two_sided", "p=2", &entries)?;
    Ok(())
}

fn per_member(
    ctx: &SuiteContext,
    mut f: impl FnMut(&Member) -> Result<Ratio>,
) -> Result<Vec<Entry>> {
    ctx.corpus
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| Ok(Entry::single(i, m, f(m)?)))
        .collect()
}

fn besov(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.besov;
    let (p, ev) = (&ctx.partition, &ctx.eval);
    for t in &cfg.monotone {
        let mut worst = 0.0f64;
        let params = format!("s={},p={}", t.s, t.p);
        for m in &ctx.corpus.members {
            let (one, profile, flags) = besov_norm(&m.coeffs, p, &BesovParams::new(t.s, t.p, Exponent::ONE), ev)?;
            let (two, inf) = (profile.with_q(Exponent::TWO), profile.with_q(Exponent::INF));
            let v = (two - one).max(inf - two).max(0.0);
            rec.row(&params, &m.id, "", v, flags);
            worst = worst.max(v);
        }
        rec.tolerance("monotone", &params, worst, Flags::NONE)?;
    }
    let mut duality = 0.0f64;
    for (_, f, g) in ctx.pairs() {
        let z = duality_pairing(&f.coeffs, &g.coeffs, p)?;
        let scale = f.coeffs.norm() * g.coeffs.norm();
        let v = if scale > 0.0 { (z - f.coeffs.inner(&g.coeffs)).norm() / scale } else { 0.0 };
        rec.row("pairing", &f.id, &g.id, v, Flags::NONE);
        duality = duality.max(v);
    }
    rec.tolerance("duality", "pairing", duality, Flags::NONE)?;
    for e in &cfg.embedding {
        let entries = per_member(ctx, |m| embedding_ratio(&m.coeffs, p, e.s, e.r, e.p, e.q, ev))?;
        rec.bounded("embedding", &format!("s={},r={},p={},q={}", e.s, e.r, e.p, e.q), &entries)?;
    }
    for &q in &cfg.sandwich {
        let (mut upper, mut lower) = (Vec::new(), Vec::new());
        for (i, m) in ctx.corpus.members.iter().enumerate() {
            let (a, b) = sandwich_check(&m.coeffs, p, q, ev)?;
            upper.push(Entry::single(i, m, a));
            lower.push(Entry::single(i, m, b));
        }
        rec.bounded("sandwich", &format!("p={q},side=inf"), &upper)?;
        rec.bounded("sandwich", &format!("p={q},side=one"), &lower)?;
    }
    for t in &cfg.interpolation {
        let entries = per_member(ctx, |m| interpolation_check(&m.coeffs, p, t, ev))?;
        let params = format!("s={},s0={},p={},r={},r0={},theta={}", t.s, t.s0, t.p, t.r, t.r0, t.theta);
        rec.bounded("interpolation", &params, &entries)?;
    }
    for l in &cfg.lifting {
        let entries = per_member(ctx, |m| lifting_ratio(&m.coeffs, p, l.alpha, l.s, l.p, l.q, ev))?;
        rec.two_sided("lifting", &format!("alpha={},s={},p={},q={}", l.alpha, l.s, l.p, l.q), &entries)?;
    }
    Ok(())
}

fn bony(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.bony;
    let engine = ProductEngine::new(ctx.config.basis.spacing, ctx.config.basis.margin)?;
    let (mut complete, mut regroup) = (0.0f64, 0.0f64);
    for (_, f, g) in ctx.pairs().take(cfg.members) {
        let prod = engine.product(&f.coeffs, &g.coeffs)?;
        let scale = prod.coeffs.norm();
        let mut reference: Option<SpectralCoefficients> = None;
        for &n0 in &cfg.n0 {
            let pieces = bony_decompose(&f.coeffs, &g.coeffs, &ctx.partition, n0, &engine)?;
            let sum = pieces.sum();
            let c = rel_diff(&sum, &prod.coeffs, scale);
            rec.row(&format!("n0={n0},completeness"), &f.id, &g.id, c, pieces.flags | prod.flags);
            complete = complete.max(c);
            match &reference {
                None => reference = Some(sum),
                Some(r) => {
                    let v = rel_diff(&sum, r, scale);
                    rec.row(&format!("n0={n0},regrouping"), &f.id, &g.id, v, pieces.flags);
                    regroup = regroup.max(v);
                }
            }
        }
    }
    let params = format!("members={},n0={:?}", cfg.members, cfg.n0);
    rec.tolerance("completeness", &params, complete, Flags::NONE)?;
    rec.tolerance("regrouping", &params, regroup, Flags::NONE)?;
    Ok(())
}

fn bilinear(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.bilinear;
    let (sp, mg) = (ctx.config.basis.spacing, ctx.config.basis.margin);
    let bl = Bilinear {
        engine: ProductEngine::new(sp, mg)?,
        eval: LpEvaluator::new(sp, mg)?,
        n0: Some(cfg.n0),
    };
    let p = &ctx.partition;
    let [lambda, mu] = cfg.scales;
    let mut homogeneity = 0.0f64;
    let mut sweep = |rec: &mut Recorder,
                     stat: &str,
                     params: String,
                     ratio: &dyn Fn(&SpectralCoefficients, &SpectralCoefficients) -> Result<Ratio>|
     -> Result<()> {
        let mut entries = Vec::new();
        for (i, f, g) in ctx.pairs() {
            let r = ratio(&f.coeffs, &g.coeffs)?;
            if i < cfg.homogeneity_pairs && r.value > 0.0 {
                let scaled = ratio(&f.coeffs.scale(lambda.into()), &g.coeffs.scale(mu.into()))?;
                homogeneity = homogeneity.max((scaled.value - r.value).abs() / r.value);
            }
            entries.push(Entry::pair(i, f, g, r));
        }
        rec.bounded(stat, &params, &entries)?;
        Ok(())
    };
    for t in &cfg.lowhigh {
        let params = format!("s={},p={},p1={},p2={},q={}", t.s, t.p, t.p1, t.p2, t.q);
        sweep(rec, "lowhigh", params, &|f, g| lowhigh_estimate_ratio(f, g, p, t, &bl))?;
    }
    for t in &cfg.negative_lowhigh {
        let params = format!("s={},r={},p={},p1={},p2={},q={}", t.s, t.r, t.p, t.p1, t.p2, t.q);
        sweep(rec, "negative_lowhigh", params, &|f, g| negative_s_lowhigh_ratio(f, g, p, t, &bl))?;
    }
    for t in &cfg.resonant {
        let params = format!(
            "s1={},s2={},p={},p1={},p2={},q={},q1={},q2={}",
            t.s1, t.s2, t.p, t.p1, t.p2, t.q, t.q1, t.q2
        );
        sweep(rec, "resonant", params, &|f, g| resonant_estimate_ratio(f, g, p, t, &bl))?;
    }
    for t in &cfg.product {
        let params = format!(
            "s={},p={},p1={},p2={},p3={},p4={},q={}",
            t.s, t.p, t.p1, t.p2, t.p3, t.p4, t.q
        );
        sweep(rec, "product", params, &|f, g| product_estimate_ratio(f, g, p, t, &bl))?;
    }
    for t in &cfg.negpos {
        let params = format!("s={},r={},p={},p1={},p2={},q={}", t.s, t.r, t.p, t.p1, t.p2, t.q);
        sweep(rec, "negpos", params, &|f, g| negative_positive_product_ratio(f, g, p, t, &bl))?;
    }
    rec.tolerance(
        "homogeneity",
        &format!("pairs={},scales={lambda}/{mu}", cfg.homogeneity_pairs),
        homogeneity,
        Flags::NONE,
    )?;
    Ok(())
}

fn heat_kernel(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.heat;
    let basis = HermiteBasis::new(1, cfg.kernel_degree)?;
    let grid = kernel_grid(&basis, 0)?;
    let (mut mehler, mut gaussian) = (0.0f64, 0.0f64);
    for &t in &cfg.kernel_times {
        let closed = mehler_kernel(t, &grid)?;
        let symbol = SymbolFn::new(format!("exp(-{t} l^2)"), None, move |l| (-t * l * l).exp());
        let spectral = multiplier_kernel(&symbol, basis, &grid)?;
        let top = closed.entries().iter().cloned().fold(0.0, f64::max);
        let diff = (closed.entries() - spectral.entries()).iter().map(|v| v.abs()).fold(0.0, f64::max);
        rec.row(&format!("mehler,t={t},N={}", cfg.kernel_degree), "", "", diff / top, Flags::NONE);
        mehler = mehler.max(diff / top);
        let g = gaussian_bound_ratio(t, &grid, cfg.gaussian_c)?;
        rec.row(&format!("gaussian,t={t},C={}", cfg.gaussian_c), "", "", g, Flags::NONE);
        gaussian = gaussian.max(g);
    }
    let times = format!("t={:?}", cfg.kernel_times);
    rec.tolerance("mehler", &times, mehler, Flags::NONE)?;
    rec.tolerance("gaussian_bound", &format!("{times},C={}", cfg.gaussian_c), gaussian, Flags::NONE)?;
    let mut law = 0.0f64;
    for m in &ctx.corpus.members {
        for &[t, s] in &cfg.law_times {
            let two = heat_apply(t, &heat_apply(s, &m.coeffs)?)?;
            let one = heat_apply(t + s, &m.coeffs)?;
            let v = rel_diff(&two, &one, m.coeffs.norm());
            rec.row(&format!("law,t={t},s={s}"), &m.id, "", v, Flags::NONE);
            law = law.max(v);
        }
    }
    rec.tolerance("semigroup_law", &format!("pairs={:?}", cfg.law_times), law, Flags::NONE)?;
    for b in &cfg.bound {
        let mut entries = Vec::new();
        for (i, m) in ctx.corpus.members.iter().enumerate() {
            for &t in &cfg.bound_times {
                let r = heat_bound_ratio(&m.coeffs, t, &ctx.partition, b.s, b.p, b.q, &ctx.eval)?;
                entries.push(Entry::single(i, m, r));
            }
        }
        rec.bounded("heat_bound", &format!("{},t={:?}", tuple_params(b), cfg.bound_times), &entries)?;
    }
    Ok(())
}

fn smoothing_rates(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.rates;
    let mut slopes = Vec::new();
    for t in &cfg.tuples {
        let basis = HermiteBasis::new(t.dim, t.max_degree)?;
        let partition = DyadicPartition::for_basis(&basis);
        let params = SmoothingParams {
            s1: t.s1,
            s2: t.s2,
            p1: t.p1,
            p2: t.p2,
            q1: Exponent::INF,
            q2: Exponent::INF,
        };
        params.validate(t.dim)?;
        let d = t.dim as f64;
        let gamma = 0.5 * (t.s1 + d * (1.0 - t.p1.recip()));
        // one empty shell on top keeps the input resolved
        let f = coherent_power_law(basis.with_max_degree(t.max_degree + 1), gamma, t.max_degree);
        let id = format!("coherent_g{gamma}_b{}", t.max_degree);
        let t0 = 1.0 / (2 * t.max_degree + t.dim) as f64;
        let times = log_space(t0, cfg.span * t0, cfg.samples);
        let fit = smoothing_rate_fit(&f, &partition, &params, &times, &ctx.eval)?;
        let label = format!("d={},N={},s1={},s2={},p1={},p2={}", t.dim, t.max_degree, t.s1, t.s2, t.p1, t.p2);
        let at_t0 = smoothing_ratio(&f, t0, &partition, &params, &ctx.eval)?;
        rec.row(&format!("{label},ratio_at_t0"), &id, "", at_t0.value, at_t0.flags);
        rec.row(&format!("{label},slope"), &id, "", fit.slope, fit.flags);
        rec.row(&format!("{label},predicted"), &id, "", fit.predicted, fit.flags);
        rec.tolerance("slope_error", &label, fit.relative_error, fit.flags)?;
        slopes.push((fit.slope, fit.predicted));
    }
    if let Some([a, b]) = cfg.gap {
        let (sa, pa) = slopes[a];
        let (sb, pb) = slopes[b];
        let predicted = pa - pb;
        let measured = sa - sb;
        let err = (measured - predicted).abs() / predicted.abs();
        rec.row(&format!("gap,tuples={a}/{b},measured"), "", "", measured, Flags::NONE);
        rec.row(&format!("gap,tuples={a}/{b},predicted"), "", "", predicted, Flags::NONE);
        rec.tolerance("dimension_gap", &format!("tuples={a}/{b}"), err, Flags::NONE)?;
    }
    Ok(())
}

fn equivalence(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.equivalence;
    let (p, ev) = (&ctx.partition, &ctx.eval);
    for t in &cfg.tuples {
        let family: Vec<SemigroupNormParams> = cfg
            .spaces
            .iter()
            .map(|&x| SemigroupNormParams {
                nodes: cfg.nodes,
                t_min: cfg.t_min,
                ..SemigroupNormParams::new(t.s, cfg.s0, t.p, t.q, x)
            })
            .collect();
        let mut entries = vec![Vec::new(); family.len()];
        for (i, m) in ctx.corpus.members.iter().enumerate() {
            let norms = semigroup_norms(&m.coeffs, p, &family, ev)?;
            let b = BlockNorms::compute(&m.coeffs, p, t.p, ev)?;
            let den = b.besov(t.s, t.q);
            for (e, sg) in entries.iter_mut().zip(norms) {
                e.push(Entry::single(i, m, Ratio::of(sg.value, den).with(sg.flags | b.flags())));
            }
        }
        for (e, params) in entries.iter().zip(&family) {
            rec.two_sided("constant", &format!("{},s0={},X={}", tuple_params(t), cfg.s0, params.x), e)?;
        }
    }
    // the single-space entry point agrees with the joint evaluation
    if let (Some(t), Some(&x), Some(m)) = (cfg.tuples.first(), cfg.spaces.first(), ctx.corpus.members.first()) {
        let params = SemigroupNormParams {
            nodes: cfg.nodes,
            t_min: cfg.t_min,
            ..SemigroupNormParams::new(t.s, cfg.s0, t.p, t.q, x)
        };
        let single = equivalence_ratio(&m.coeffs, p, &params, ev)?;
        rec.row("single_entry_point", &m.id, "", single.value, single.flags);
    }
    Ok(())
}

fn max_regularity(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.max_regularity;
    let basis = ctx.basis;
    let d = basis.dim();
    let mut n = vec![0usize; d];
    n[0] = 3.min(basis.max_degree());
    let h = SpectralCoefficients::unit(basis, &n)?;
    let lambda = basis.eigenvalue(basis.flat_index(&n)?);
    let steps = (1.0 / cfg.manufactured_step).round() as usize;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * cfg.manufactured_step).collect();
    // u = e^{-t} h solves u' + H u = (lambda - 1) e^{-t} h
    let forcing: Vec<_> = times.iter().map(|&t| h.scale(((lambda - 1.0) * (-t).exp()).into())).collect();
    let traj = duhamel_solve(&h, Some(&forcing), &times)?;
    let manufactured = traj
        .states()
        .iter()
        .zip(&times)
        .map(|(u, &t)| u.max_abs_diff(&h.scale((-t).exp().into())))
        .fold(0.0, f64::max);
    rec.row("manufactured", &format!("h_{n:?}"), "", manufactured, Flags::NONE);
    rec.tolerance("manufactured", &format!("dt={}", cfg.manufactured_step), manufactured, Flags::NONE)?;

    let grid = graded_grid(cfg.t_first, cfg.t_max, cfg.nodes);
    let mut residual = 0.0f64;
    let mut entries = vec![Vec::new(); cfg.qs.len()];
    for (i, f, g) in ctx.pairs() {
        let samples: Vec<_> = grid.iter().map(|&t| g.coeffs.scale((-t).exp().into())).collect();
        let r = duhamel_solve(&f.coeffs, Some(&samples), &grid)?.mode_residual();
        rec.row("residual", &f.id, &g.id, r, Flags::NONE);
        residual = residual.max(r);
        let forcing = |t: f64| g.coeffs.scale((-t).exp().into());
        for (e, &q) in entries.iter_mut().zip(&cfg.qs) {
            let params = MaxRegParams {
                t_max: cfg.t_max,
                t_first: cfg.t_first,
                nodes: cfg.nodes,
                ..MaxRegParams::new(cfg.s, cfg.p, q)
            };
            let m = max_reg_ratio(&f.coeffs, Some(&forcing), &ctx.partition, &params, &ctx.eval)?;
            e.push(Entry::pair(i, f, g, m.ratio));
        }
    }
    rec.tolerance("residual", &format!("nodes={}", cfg.nodes), residual, Flags::NONE)?;
    for (e, q) in entries.iter().zip(&cfg.qs) {
        rec.bounded("ratio", &format!("s={},p={},q={q},T={}", cfg.s, cfg.p, cfg.t_max), e)?;
    }
    Ok(())
}

fn continuity(ctx: &SuiteContext, rec: &mut Recorder) -> Result<()> {
    let cfg = &ctx.config.checks.continuity;
    let (p, ev) = (&ctx.partition, &ctx.eval);
    let Some(&t_last) = cfg.times.last() else {
        return Err(Error::Config("continuity.times is empty".into()));
    };
    for t in &cfg.tuples {
        let params = tuple_params(t);
        let mut entries = Vec::new();
        let mut monotone = 0.0f64;
        for (i, m) in ctx.corpus.members.iter().enumerate() {
            let ds = continuity_deficit(&m.coeffs, p, t.s, t.p, t.q, &cfg.times, ev)?;
            let b = BlockNorms::compute(&m.coeffs, p, t.p, ev)?;
            let top = b.besov(t.s + 2.0, t.q);
            entries.push(Entry::single(i, m, Ratio::of(ds[ds.len() - 1], t_last * top).with(b.flags())));
            if ds[0] > 0.0 {
                let rise = ds.windows(2).map(|w| (w[1] - w[0]) / ds[0]).fold(0.0, f64::max);
                monotone = monotone.max(rise);
            }
        }
        rec.bounded("deficit", &format!("{params},t={t_last}"), &entries)?;
        rec.tolerance("monotone", &format!("{params},t={:?}", cfg.times), monotone, Flags::NONE)?;
    }
    let (mut last, mut rise) = (0.0f64, 0.0f64);
    for (_, f, g) in ctx.pairs().skip(ctx.random_start()).take(cfg.pairs) {
        let scale = f.coeffs.norm() * g.coeffs.norm();
        let vals = cfg
            .pair_times
            .iter()
            .map(|&t| Ok(weak_continuity_pairing(&f.coeffs, &g.coeffs, p, t)?.norm() / scale))
            .collect::<Result<Vec<f64>>>()?;
        for (v, t) in vals.iter().zip(&cfg.pair_times) {
            rec.row(&format!("pairing,t={t}"), &f.id, &g.id, *v, Flags::NONE);
        }
        last = last.max(*vals.last().unwrap_or(&0.0));
        if let Some(first) = vals.first().filter(|v| **v > 0.0) {
            rise = rise.max(vals.windows(2).map(|w| (w[1] - w[0]) / first).fold(0.0, f64::max));
        }
    }
    let params = format!("pairs={},t={:?}", cfg.pairs, cfg.pair_times);
    rec.tolerance("weak_pairing", &params, last, Flags::NONE)?;
    rec.tolerance("pairing_monotone", &params, rise, Flags::NONE)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn registry_covers_every_checker() {
        let covered: BTreeSet<&str> = REGISTRY.iter().flat_map(|c| c.covers.iter().copied()).collect();
        let all: BTreeSet<&str> = CHECKER_OPS.iter().copied().collect();
        let missing: Vec<_> = all.difference(&covered).collect();
        assert!(missing.is_empty(), "unregistered checkers: {missing:?}");
        let unknown: Vec<_> = covered.difference(&all).collect();
        assert!(unknown.is_empty(), "unknown operations: {unknown:?}");
    }

    #[test]
    fn registry_names_are_unique() {
        let names: BTreeSet<&str> = REGISTRY.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), REGISTRY.len());
        assert_eq!(REGISTRY.len(), 15);
    }

    #[test]
    fn spread_is_relative_to_median() {
        assert_eq!(spread(&[1.0, 2.0, 3.0]), 0.5);
        assert_eq!(spread(&[2.0, 2.0]), 0.0);
    }
}

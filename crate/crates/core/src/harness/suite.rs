use std::time::Instant;

use super::checks::REGISTRY;
use super::config::ExperimentConfig;
use super::corpus::{generate_corpus, Corpus, Member};
use super::report::{ExperimentReport, GroupReport, Row, Summary};
use crate::besov::LpEvaluator;
use crate::error::Result;
use crate::flags::{Flags, Ratio};
use crate::hermite::HermiteBasis;
use crate::spectral::DyadicPartition;

/// Shared inputs of every check group.
pub struct SuiteContext {
    pub config: ExperimentConfig,
    pub basis: HermiteBasis,
    pub partition: DyadicPartition,
    pub eval: LpEvaluator,
    pub corpus: Corpus,
    /// `partner.members[i]` is the second argument paired with `corpus.members[i]`.
    pub partner: Corpus,
    pub base_len: usize,
    pub hash: String,
}

/// Partner of each member: fixed families in reverse order, then an independent
/// random family drawn with `seed + 1`. Pairs of a corpus prefix never change
/// when the corpus grows.
fn partner_corpus(config: &ExperimentConfig, basis: HermiteBasis, corpus: &Corpus) -> Result<Corpus> {
    let random = config.corpus.random.as_ref().map_or(0, |r| r.count);
    let fixed = corpus.len() - random;
    let mut members: Vec<Member> = corpus.members[..fixed].iter().rev().cloned().collect();
    if let Some(r) = &config.corpus.random {
        let mut spec = config.corpus.clone();
        spec.eigen.clear();
        spec.gaussians.clear();
        spec.hermite_gaussians.clear();
        spec.power_laws.clear();
        spec.random = Some(super::corpus::RandomFamily {
            seed: r.seed.wrapping_add(1),
            ..r.clone()
        });
        members.extend(generate_corpus(&spec, basis)?.members);
    }
    Ok(Corpus { members })
}

impl SuiteContext {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let basis = config.basis()?;
        let corpus = generate_corpus(&config.corpus, basis)?;
        let partner = partner_corpus(&config, basis, &corpus)?;
        Ok(Self {
            partition: DyadicPartition::for_basis(&basis),
            eval: LpEvaluator::new(config.basis.spacing, config.basis.margin)?,
            base_len: config.base_len().min(corpus.len()),
            hash: config.hash(),
            basis,
            corpus,
            partner,
            config,
        })
    }

    /// `(index, f, g)` over the whole corpus.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, &Member, &Member)> {
        self.corpus
            .members
            .iter()
            .zip(&self.partner.members)
            .enumerate()
            .map(|(i, (f, g))| (i, f, g))
    }

    /// Index of the first random member.
    pub fn random_start(&self) -> usize {
        self.corpus.len() - self.config.corpus.random.as_ref().map_or(0, |r| r.count)
    }
}

/// One measured value, tagged with the corpus index that produced it.
#[derive(Clone, Debug)]
pub struct Entry {
    pub f_id: String,
    pub g_id: String,
    pub index: usize,
    pub value: f64,
    pub flags: Flags,
}

impl Entry {
    pub fn single(index: usize, f: &Member, r: Ratio) -> Self {
        Self {
            f_id: f.id.clone(),
            g_id: String::new(),
            index,
            value: r.value,
            flags: r.flags,
        }
    }

    pub fn pair(index: usize, f: &Member, g: &Member, r: Ratio) -> Self {
        Self {
            g_id: g.id.clone(),
            ..Self::single(index, f, r)
        }
    }
}

/// Collects rows and budgeted summaries for one check group.
pub struct Recorder<'a> {
    ctx: &'a SuiteContext,
    started: Instant,
    out: GroupReport,
}

impl<'a> Recorder<'a> {
    pub fn new(ctx: &'a SuiteContext, name: &str) -> Self {
        Self {
            ctx,
            started: Instant::now(),
            out: GroupReport {
                name: name.into(),
                ..Default::default()
            },
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Closes the group. Wall time stays out of the serialized report so that
    /// reports are reproducible; a runtime budget, if any, fails the group.
    pub fn finish(mut self) -> GroupReport {
        self.out.seconds = self.elapsed();
        if let Ok(limit) = self.budget("runtime_s") {
            if self.out.seconds > limit {
                let msg = format!("runtime {:.1}s exceeds the {limit}s budget", self.out.seconds);
                self.out.errors.push(msg);
            }
        }
        self.out
    }

    fn budget(&self, stat: &str) -> Result<f64> {
        self.ctx.config.budget(&format!("{}.{stat}", self.out.name))
    }

    pub fn row(&mut self, params: &str, f_id: &str, g_id: &str, value: f64, flags: Flags) {
        self.out.rows.push(Row {
            check: self.out.name.clone(),
            params: params.into(),
            f_id: f_id.into(),
            g_id: g_id.into(),
            value,
            flags,
        });
    }

    fn summary(&mut self, stat: &str, params: &str, value: f64, growth: Option<f64>, flags: Flags) -> Result<bool> {
        let budget = self.budget(stat)?;
        let max_growth = self.ctx.config.stability.max_growth;
        let pass = value.is_finite() && value <= budget && growth.is_none_or(|g| g <= max_growth);
        self.out.summaries.push(Summary {
            check: self.out.name.clone(),
            stat: stat.into(),
            params: params.into(),
            value,
            budget,
            growth,
            pass,
            flags: flags | Flags::when(!pass, Flags::BUDGET_VIOLATION),
        });
        Ok(pass)
    }

    /// Passes when `value <= budget`.
    pub fn tolerance(&mut self, stat: &str, params: &str, value: f64, flags: Flags) -> Result<bool> {
        self.summary(stat, params, value, None, flags)
    }

    /// Rows for `entries`, summarized by `score` with a corpus-doubling growth.
    fn scored(
        &mut self,
        stat: &str,
        params: &str,
        entries: &[Entry],
        score: impl Fn(f64) -> f64,
    ) -> Result<bool> {
        let budget = self.budget(stat)?;
        let (mut all, mut base, mut flags) = (0.0f64, 0.0f64, Flags::NONE);
        for e in entries {
            let v = if e.flags.contains(Flags::ZERO_DENOMINATOR) {
                0.0
            } else {
                score(e.value)
            };
            let over = Flags::when(!(v <= budget), Flags::BUDGET_VIOLATION);
            self.row(params, &e.f_id, &e.g_id, e.value, e.flags | over);
            flags |= e.flags;
            all = all.max(v);
            if e.index < self.ctx.base_len {
                base = base.max(v);
            }
            if v.is_nan() {
                all = f64::NAN;
            }
        }
        let growth = if base > 0.0 { all / base - 1.0 } else { 0.0 };
        self.summary(stat, params, all, Some(growth), flags)
    }

    /// One-sided bound: the largest value must stay within budget.
    pub fn bounded(&mut self, stat: &str, params: &str, entries: &[Entry]) -> Result<bool> {
        self.scored(stat, params, entries, |v| v)
    }

    /// Two-sided bound: every value must lie in `[1/C, C]`.
    pub fn two_sided(&mut self, stat: &str, params: &str, entries: &[Entry]) -> Result<bool> {
        self.scored(stat, params, entries, |v| if v > 0.0 { v.max(1.0 / v) } else { f64::INFINITY })
    }
}

/// Runs every enabled check group in registry order. A group that errors is
/// recorded as failed and the run continues.
pub fn run_suite(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let ctx = SuiteContext::new(config.clone())?;
    run_with_context(&ctx)
}

pub fn run_with_context(ctx: &SuiteContext) -> Result<ExperimentReport> {
    let enabled = ctx.config.enabled_checks();
    let mut groups = Vec::new();
    for check in REGISTRY.iter().filter(|c| enabled.contains(&c.name)) {
        let mut rec = Recorder::new(ctx, check.name);
        if let Err(e) = (check.run)(ctx, &mut rec) {
            rec.out.errors.push(e.to_string());
        }
        groups.push(rec.finish());
    }
    Ok(ExperimentReport {
        config_hash: ctx.hash.clone(),
        groups,
    })
}

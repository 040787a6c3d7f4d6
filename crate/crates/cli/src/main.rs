use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use hobesov::besov::{besov_norm, BesovParams, BlockNorms, Exponent};
use hobesov::harness::{run_with_context, ExperimentConfig, ExperimentReport, Member, SuiteContext};
use hobesov::hermite::{Grid, TransformPlan};
use hobesov::io::{
    coefficients_from_csv, coefficients_to_csv, create, fmt_f64, read_coefficients,
    read_grid_function, write_coefficients, write_grid_function, write_kernel, Kind, MAGIC,
};
use hobesov::paraproduct::{bony_decompose, ProductEngine};
use hobesov::semigroup::heat_apply;
use hobesov::spectral::{
    kernel_grid, multiplier_kernel, operator_norm, resolving_degree, DyadicPartition, SymbolFn,
};
use hobesov::{Error, Flags};

#[derive(Parser)]
#[command(name = "hobesov", version, about = "Besov spaces of the harmonic oscillator, numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML). Defaults apply when omitted.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze or synthesize a stored function and report the round trip.
    Transform {
        #[command(flatten)]
        common: Common,
        /// Coefficient CSV or container of coefficients or grid values.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Besov norm of a corpus member with its block profile.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        p: Exponent,
        #[arg(long)]
        q: Exponent,
    },
    /// Per-block L^p norms of a corpus member.
    Blocks {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value = "2")]
        p: Exponent,
    },
    /// Bony pieces of a product and the recombination residual.
    Paraproduct {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        #[arg(long = "g")]
        g: String,
        #[arg(long, default_value_t = 2)]
        n0: i32,
    },
    /// Norms of a corpus member along the heat flow.
    Heat {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        /// One or more times.
        #[arg(long = "t", num_args = 1.., required = true)]
        t: Vec<f64>,
    },
    /// Smoothing-rate fits.
    Rates {
        #[command(flatten)]
        common: Common,
    },
    /// Two-sided semigroup/Besov norm ratios.
    Equiv {
        #[command(flatten)]
        common: Common,
    },
    /// Maximal-regularity ratios.
    Maxreg {
        #[command(flatten)]
        common: Common,
    },
    /// Kernel of one Littlewood-Paley block with its L^1 and L^inf norms.
    Kernels {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        /// Writes the kernel to a container file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the whole verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Directory for rows.csv, summary.csv and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type Outcome = Result<bool, Error>;

/// A small typed table rendered as CSV or JSON.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, hash: &str, w: impl Write) -> Result<(), Error> {
        let fail = |e: String| Error::Format(e);
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(w);
                let mut header = self.columns.clone();
                header.push("config_hash");
                out.write_record(&header).map_err(|e| fail(e.to_string()))?;
                for row in &self.rows {
                    let mut rec: Vec<String> = row.iter().map(csv_cell).collect();
                    rec.push(hash.into());
                    out.write_record(&rec).map_err(|e| fail(e.to_string()))?;
                }
                out.flush().map_err(|e| fail(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m: Map<String, Value> =
                            self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                        m.insert("config_hash".into(), hash.into());
                        Value::Object(m)
                    })
                    .collect();
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| fail(e.to_string()))?;
                writeln!(w).map_err(|e| fail(e.to_string()))
            }
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_f64(x),
            _ => n.to_string(),
        },
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Floats as JSON numbers, with non-finite values spelled out.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(fmt_f64(x)), Value::Number)
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    Ok(match common.seed {
        Some(seed) => config.with_seed(seed),
        None => config,
    })
}

fn member<'a>(ctx: &'a SuiteContext, id: &str) -> Result<&'a Member, Error> {
    ctx.corpus
        .get(id)
        .or_else(|| ctx.partner.get(id))
        .ok_or_else(|| Error::Config(format!("no corpus member `{id}`")))
}

fn emit_report(report: &ExperimentReport, format: Format) -> Outcome {
    let out = io::stdout().lock();
    match format {
        Format::Csv => report.write_summary_csv(out)?,
        Format::Json => {
            let mut out = out;
            report.write_json(&mut out, false)?;
            writeln!(out).map_err(|e| Error::Format(e.to_string()))?;
        }
    }
    Ok(report.pass())
}

/// Runs the named check groups and prints their summaries.
fn run_groups(common: &Common, groups: &[&str], out: Option<&Path>) -> Outcome {
    let mut config = load(common)?;
    if !groups.is_empty() {
        config.checks.enabled = Some(groups.iter().map(|g| g.to_string()).collect());
    }
    let dir = out.map(Path::to_path_buf).or_else(|| config.output.dir.clone());
    let ctx = SuiteContext::new(config)?;
    let report = run_with_context(&ctx)?;
    if let Some(dir) = dir {
        report.write_dir(&dir)?;
    }
    eprint!("{}", report.digest());
    emit_report(&report, common.format)
}

fn transform(common: &Common, input: &Path, out: &Path) -> Outcome {
    let config = load(common)?;
    let hash = config.hash();
    let mut bytes = Vec::new();
    std::fs::File::open(input)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::Io {
            path: input.into(),
            source: e,
        })?;
    let kind = if bytes.starts_with(MAGIC) { bytes.get(MAGIC.len()).copied() } else { None };
    let mut table = Table::new(&["input", "direction", "coefficients", "nodes", "round_trip"]);
    let name = input.display().to_string();
    match kind {
        Some(k) if k == Kind::GridFunction as u8 => {
            let values = read_grid_function(&mut bytes.as_slice())?;
            // the largest basis up to the configured degree that the grid supports
            let top = config.basis()?;
            let basis = (0..=top.max_degree())
                .rev()
                .map(|n| top.with_max_degree(n))
                .find(|b| values.grid().check_covers(b).is_ok())
                .ok_or_else(|| Error::Config(format!("{name}: grid too small for any basis")))?;
            let plan = TransformPlan::new(basis, values.grid().clone())?;
            let c = plan.analyze(&values)?;
            let back = plan.synthesize(&c)?;
            let top = values.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = back.max_abs_diff(&values) / top.max(f64::MIN_POSITIVE);
            write_coefficients(&mut create(out)?, &c)?;
            table.push(vec![
                name.into(),
                "analyze".into(),
                c.coeffs().len().into(),
                values.values().len().into(),
                num(err),
            ]);
        }
        Some(k) if k != Kind::Coefficients as u8 => {
            return Err(Error::Format(format!("{name}: container kind {k} cannot be transformed")));
        }
        _ => {
            let c = if kind.is_some() {
                read_coefficients(&mut bytes.as_slice())?
            } else {
                coefficients_from_csv(bytes.as_slice())?
            };
            let grid = Grid::for_basis(&c.basis(), config.basis.spacing, config.basis.margin)?;
            let plan = TransformPlan::new(c.basis(), grid)?;
            let values = plan.synthesize(&c)?;
            let back = plan.analyze(&values)?;
            let top = c.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = back.max_abs_diff(&c) / top.max(f64::MIN_POSITIVE);
            if out.extension().is_some_and(|e| e == "csv") {
                coefficients_to_csv(create(out)?, &back)?;
            } else {
                write_grid_function(&mut create(out)?, &values)?;
            }
            table.push(vec![
                name.into(),
                "synthesize".into(),
                c.coeffs().len().into(),
                values.values().len().into(),
                num(err),
            ]);
        }
    }
    table.write(common.format, &hash, io::stdout().lock())?;
    Ok(true)
}

fn norm(common: &Common, f: &str, s: f64, p: Exponent, q: Exponent) -> Outcome {
    let ctx = SuiteContext::new(load(common)?)?;
    let m = member(&ctx, f)?;
    let (value, profile, flags) = besov_norm(&m.coeffs, &ctx.partition, &BesovParams::new(s, p, q), &ctx.eval)?;
    let mut table = Table::new(&["f_id", "j", "weighted_block", "flags"]);
    for (j, w) in profile.j.iter().zip(&profile.weighted) {
        table.push(vec![f.into(), (*j).into(), num(*w), "".into()]);
    }
    let label = format!("B^{s}_{{{p},{q}}}");
    table.push(vec![f.into(), label.into(), num(value), flags.to_string().into()]);
    table.write(common.format, &ctx.hash, io::stdout().lock())?;
    Ok(true)
}

fn blocks(common: &Common, f: &str, p: Exponent) -> Outcome {
    let ctx = SuiteContext::new(load(common)?)?;
    let m = member(&ctx, f)?;
    let norms = BlockNorms::compute(&m.coeffs, &ctx.partition, p, &ctx.eval)?;
    let l2 = BlockNorms::compute(&m.coeffs, &ctx.partition, Exponent::TWO, &ctx.eval)?;
    let mut table = Table::new(&["f_id", "j", "p", "lp_norm", "l2_norm"]);
    for ((j, v), (_, w)) in norms.iter().zip(l2.iter()) {
        table.push(vec![f.into(), j.into(), p.to_string().into(), num(v), num(w)]);
    }
    table.write(common.format, &ctx.hash, io::stdout().lock())?;
    Ok(true)
}

fn paraproduct(common: &Common, f: &str, g: &str, n0: i32) -> Outcome {
    let config = load(common)?;
    let budget = config.budget("bony.completeness")?;
    let engine = ProductEngine::new(config.basis.spacing, config.basis.margin)?;
    let ctx = SuiteContext::new(config)?;
    let (fm, gm) = (member(&ctx, f)?, member(&ctx, g)?);
    let pieces = bony_decompose(&fm.coeffs, &gm.coeffs, &ctx.partition, n0, &engine)?;
    let prod = engine.product(&fm.coeffs, &gm.coeffs)?;
    let scale = prod.coeffs.norm();
    let residual = (&pieces.sum() - &prod.coeffs).norm() / scale.max(f64::MIN_POSITIVE);
    let mut table = Table::new(&["f_id", "g_id", "piece", "l2_norm", "flags"]);
    let flags = pieces.flags | prod.flags;
    for (piece, c) in [
        ("low_high", &pieces.low_high),
        ("high_low", &pieces.high_low),
        ("resonant", &pieces.resonant),
        ("product", &prod.coeffs),
    ] {
        table.push(vec![f.into(), g.into(), piece.into(), num(c.norm()), "".into()]);
    }
    let pass = residual <= budget;
    let flags = flags | Flags::when(!pass, Flags::BUDGET_VIOLATION);
    table.push(vec![f.into(), g.into(), "residual".into(), num(residual), flags.to_string().into()]);
    table.write(common.format, &ctx.hash, io::stdout().lock())?;
    Ok(pass)
}

fn heat(common: &Common, f: &str, times: &[f64]) -> Outcome {
    let ctx = SuiteContext::new(load(common)?)?;
    let m = member(&ctx, f)?;
    let ps = [Exponent::ONE, Exponent::TWO, Exponent::INF];
    let mut table = Table::new(&["f_id", "t", "l1", "l2", "linf"]);
    for &t in times {
        let u = heat_apply(t, &m.coeffs)?;
        let n = ctx.eval.norms(&u, &ps)?;
        table.push(vec![f.into(), num(t), num(n[0]), num(n[1]), num(n[2])]);
    }
    table.write(common.format, &ctx.hash, io::stdout().lock())?;
    Ok(true)
}

fn kernels(common: &Common, j: i32, out: Option<&Path>) -> Outcome {
    let config = load(common)?;
    let hash = config.hash();
    let floor = config.basis.max_degree;
    let partition = DyadicPartition::new(1, floor)?;
    let basis = hobesov::hermite::HermiteBasis::new(1, resolving_degree(&partition, j).max(floor))?;
    let k = multiplier_kernel(&SymbolFn::block(&partition, j), basis, &kernel_grid(&basis, 0)?)?;
    let flags = Flags::when(!k.is_resolved(), Flags::UNRESOLVED);
    let mut table = Table::new(&["j", "degree", "nodes", "l1_norm", "linf_norm", "flags"]);
    table.push(vec![
        j.into(),
        basis.max_degree().into(),
        k.grid().len().into(),
        num(operator_norm(&k, 1.0)?),
        num(operator_norm(&k, f64::INFINITY)?),
        flags.to_string().into(),
    ]);
    if let Some(path) = out {
        write_kernel(&mut create(path)?, &k)?;
    }
    table.write(common.format, &hash, io::stdout().lock())?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Transform { common, input, out } => transform(&common, &input, &out),
        Command::Norm { common, f, s, p, q } => norm(&common, &f, s, p, q),
        Command::Blocks { common, f, p } => blocks(&common, &f, p),
        Command::Paraproduct { common, f, g, n0 } => paraproduct(&common, &f, &g, n0),
        Command::Heat { common, f, t } => heat(&common, &f, &t),
        Command::Rates { common } => run_groups(&common, &["smoothing_rates"], None),
        Command::Equiv { common } => run_groups(&common, &["equivalence"], None),
        Command::Maxreg { common } => run_groups(&common, &["max_regularity"], None),
        Command::Kernels { common, j, out } => kernels(&common, j, out.as_deref()),
        Command::Verify { common, out } => run_groups(&common, &[], out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

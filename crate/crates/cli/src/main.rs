//! `qct`: command-line access to the circle-analysis and Toeplitz toolkit.
//!
//! Every command prints (or writes) one JSON document that embeds the
//! resolved run configuration. `--format csv` switches to the command's plot
//! series instead.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qc_toeplitz::{CircleGrid, Error, Result, SymbolSpec, Thresholds};
use serde::Serialize;

const OUT_DIR_ENV: &str = "QCT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "qct", version, about = "Fourier, oscillation, index and Toeplitz experiments on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Fourier coefficients of a symbol
    Coeffs,
    /// Hilbert transform and its identity residuals
    Hilbert,
    /// Poisson smoothing at a radius
    Poisson,
    /// Dyadic mean-oscillation profile and VMO verdict
    Oscillation,
    /// Essential range histogram and integer-valued check
    Essrange,
    /// Factorization chi_n * exp(w - i w~) * exp(ig)
    Factor,
    /// Winding number of the smoothed symbol curve
    Winding,
    /// Winding number and Fredholm index of the Toeplitz operator
    Index,
    /// Component fingerprint, pairwise comparison, or ladder classification
    Classify,
    /// The built-in example H
    ExampleH,
    /// Finite-section norms and small singular values
    ToeplitzNorms,
    /// Kernel-count estimate of the Fredholm index
    ToeplitzIndex,
    /// Semicommutator T_{phi psi} - T_phi T_psi on a finite section
    Semicommutator,
    /// Component verdict for T_f1 + K1 versus T_f2 + K2
    OperatorClassify,
    /// Run the full acceptance suite
    VerifyAll,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Coeffs => "coeffs",
            Command::Hilbert => "hilbert",
            Command::Poisson => "poisson",
            Command::Oscillation => "oscillation",
            Command::Essrange => "essrange",
            Command::Factor => "factor",
            Command::Winding => "winding",
            Command::Index => "index",
            Command::Classify => "classify",
            Command::ExampleH => "example-h",
            Command::ToeplitzNorms => "toeplitz-norms",
            Command::ToeplitzIndex => "toeplitz-index",
            Command::Semicommutator => "semicommutator",
            Command::OperatorClassify => "operator-classify",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Report {
    Sup,
    Summary,
    Decay,
}

#[derive(Args, Debug, Clone)]
struct Flags {
    /// Grid size (power of two); some commands enlarge the default to fit
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Truncation degree of coefficient tables
    #[arg(long, global = true, default_value_t = 64)]
    degree: usize,
    /// Poisson radius; defaults to 1 - 2π/grid
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Radii at which windings are re-checked
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [0.9, 0.99])]
    stability_radii: Vec<f64>,
    /// Singular-value threshold for kernel counts
    #[arg(long, global = true, default_value_t = 1e-6)]
    eps: f64,
    /// Invertibility threshold on min |f|
    #[arg(long, global = true, default_value_t = 1e-6)]
    delta: f64,
    /// Centered phase sup below which a phase counts as bounded
    #[arg(long, global = true, default_value_t = 50.0)]
    bounded_sup_limit: f64,
    /// Minimal sup growth per decade for an unbounded trend
    #[arg(long, global = true, default_value_t = 0.02)]
    growth_per_decade: f64,
    /// Bandwidth multiplier for exp nodes of symbol trees
    #[arg(long, global = true, default_value_t = 8.0)]
    exp_factor: f64,
    /// Output file; defaults to $QCT_OUT_DIR/<command>.<ext> or stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Symbol: char:n, trig:[n,re,im;...], h:M[:scale] or a JSON tree (repeatable)
    #[arg(long, global = true)]
    spec: Vec<String>,
    /// File holding a symbol in any `--spec` form (repeatable)
    #[arg(long, global = true)]
    spec_file: Vec<PathBuf>,
    /// Reference phase for `classify`
    #[arg(long, global = true)]
    reference: Option<String>,
    /// Comma-separated section sizes or truncation orders
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Vec<usize>,
    /// Truncation order for `example-h`
    #[arg(long, global = true, default_value_t = 1000)]
    terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Report::Summary)]
    report: Report,
    /// Histogram bins for `essrange`
    #[arg(long, global = true, default_value_t = 64)]
    bins: usize,
    /// Oscillation profile depth
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Section size for `semicommutator`
    #[arg(long, global = true, default_value_t = 64)]
    size: usize,
    /// Ranks of the random compact parts for `operator-classify`
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [0, 0])]
    ranks: Vec<usize>,
    #[arg(long, global = true, default_value_t = qc_toeplitz::verify::DEFAULT_SEED)]
    seed: u64,
}

/// Fully resolved settings of one run; embedded in every result document.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub grid_size: usize,
    pub degree: usize,
    pub radius: Option<f64>,
    pub thresholds: Thresholds,
    pub format: &'static str,
    pub out: Option<String>,
    pub ladder: Vec<usize>,
    pub terms: usize,
    pub report: &'static str,
    pub bins: usize,
    pub depth: Option<usize>,
    pub size: usize,
    pub ranks: Vec<usize>,
    pub seed: u64,
    pub reference: Option<SymbolSpec>,
}

impl RunConfig {
    pub fn grid(&self) -> CircleGrid {
        CircleGrid::new(self.grid_size).expect("validated")
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::validation("cli", msg)
}

/// Smallest power of two whose grid resolves `bandwidth`.
fn grid_for(bandwidth: usize) -> usize {
    (2 * bandwidth + 2).next_power_of_two()
}

fn resolve(command: Command, flags: &Flags, specs: &[SymbolSpec]) -> Result<RunConfig> {
    let thresholds = Thresholds {
        delta: flags.delta,
        kernel_eps: flags.eps,
        stability_radii: flags.stability_radii.clone(),
        bounded_sup_limit: flags.bounded_sup_limit,
        unbounded_growth_per_decade: flags.growth_per_decade,
        exp_bandwidth_factor: flags.exp_factor,
        ..Thresholds::default()
    };
    thresholds.validate()?;
    if let Some(r) = flags.radius {
        if !(r > 0.0 && r < 1.0) {
            return Err(invalid(format!("--radius must lie in (0, 1), got {r}")));
        }
    }
    if flags.degree == 0 {
        return Err(invalid("--degree must be positive"));
    }
    let reference = flags.reference.as_deref().map(SymbolSpec::parse).transpose()?;

    let grid_size = match flags.grid {
        Some(g) => g,
        None => {
            let mut g = 1024.max(4 * flags.degree);
            match command {
                Command::ExampleH => g = g.max(grid_for(2 * flags.terms)),
                Command::Classify if !flags.ladder.is_empty() => {
                    let top = *flags.ladder.iter().max().expect("nonempty");
                    let tree = specs.iter().chain(reference.as_ref());
                    let bw = tree
                        .filter_map(|s| s.with_truncation(top).bandwidth(&thresholds))
                        .max()
                        .unwrap_or(0);
                    g = g.max(grid_for(bw));
                }
                _ => {
                    let bw = specs.iter().filter_map(|s| s.bandwidth(&thresholds)).max().unwrap_or(0);
                    g = g.max(grid_for(bw));
                }
            }
            g.next_power_of_two()
        }
    };
    CircleGrid::new(grid_size)?;
    if grid_size < 4 * flags.degree {
        return Err(invalid(format!("grid size {grid_size} must be at least 4·degree = {}", 4 * flags.degree)));
    }
    if flags.ranks.len() != 2 {
        return Err(invalid("--ranks takes exactly two values"));
    }
    Ok(RunConfig {
        command: command.name(),
        grid_size,
        degree: flags.degree,
        radius: flags.radius,
        thresholds,
        format: match flags.format {
            Format::Json => "json",
            Format::Csv => "csv",
        },
        out: flags.out.as_ref().map(|p| p.display().to_string()),
        ladder: flags.ladder.clone(),
        terms: flags.terms,
        report: match flags.report {
            Report::Sup => "sup",
            Report::Summary => "summary",
            Report::Decay => "decay",
        },
        bins: flags.bins,
        depth: flags.depth,
        size: flags.size,
        ranks: flags.ranks.clone(),
        seed: flags.seed,
        reference,
    })
}

fn load_specs(flags: &Flags) -> Result<Vec<SymbolSpec>> {
    let mut specs: Vec<SymbolSpec> = flags.spec.iter().map(|s| SymbolSpec::parse(s)).collect::<Result<_>>()?;
    for path in &flags.spec_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read spec file {}: {e}", path.display())))?;
        specs.push(SymbolSpec::parse(&text)?);
    }
    Ok(specs)
}

fn emit(cfg: &RunConfig, format: Format, out: &commands::Output, specs: &[SymbolSpec]) -> Result<()> {
    let (text, ext) = match format {
        Format::Json => {
            let doc = serde_json::json!({
                "command": cfg.command,
                "config": cfg,
                "specs": specs,
                "result": out.result,
            });
            (serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n", "json")
        }
        Format::Csv => match &out.csv {
            Some(csv) => (csv.clone(), "csv"),
            None => return Err(invalid(format!("`{}` has no CSV series; use --format json", cfg.command))),
        },
    };
    let target = match (&cfg.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(PathBuf::from(p)),
        (None, Some(dir)) => Some(PathBuf::from(dir).join(format!("{}.{ext}", cfg.command))),
        (None, None) => None,
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| invalid(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let specs = load_specs(&cli.flags)?;
    let cfg = resolve(cli.command, &cli.flags, &specs)?;
    let out = commands::dispatch(cli.command, &cfg, &specs)?;
    emit(&cfg, cli.flags.format, &out, &specs)?;
    Ok(ExitCode::from(out.exit_code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

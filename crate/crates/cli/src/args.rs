//! Command-line grammar and value resolution across flags, config file and defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fracwave",
    version,
    about = "Fractal and wavelet analysis of signals and unfolded images",
    long_about = "Fractal and wavelet analysis of signals and unfolded images.\n\n\
        Inputs are CSV signals, PGM images (unfolded to a series) or generator specs \
        such as 'fgn:H=0.7,n=16,seed=42', 'fbm:H=0.3,n=14', 'cascade:a=0.75,n=16[,shuffle=S]' \
        and 'white:n=16,seed=7'.\n\n\
        Settings resolve as: command-line flag, then --config file (key=value lines, keys \
        named like the long flags), then the built-in default.\n\n\
        Exit status: 0 on success, the number of failed inputs (at most 125) otherwise, \
        126 for usage errors."
)]
pub struct Cli {
    /// Directory for output files
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// Worker threads; 0 uses every available core
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Replace the seed of every generator input
    #[arg(long, global = true)]
    pub seed_override: Option<u64>,

    /// Which output files to write
    #[arg(long, global = true, default_value = "both", value_parser = ["json", "csv", "both"])]
    pub format: String,

    /// File of key=value settings used where no flag is given
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write generator output as canonical CSV
    Synth(SynthArgs),
    /// Multifractal detrended fluctuation analysis
    Mfdfa(MfdfaArgs),
    /// Multilevel discrete wavelet decomposition and band fluctuations
    Dwt(DwtArgs),
    /// Wavelet coherence and phase between two signals
    Coherence(CoherenceArgs),
    /// Group mean and standard deviation of H and singularity width
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator specs, e.g. fgn:H=0.7,n=16,seed=42
    #[arg(required = true)]
    pub specs: Vec<String>,

    /// Output file (single spec only) [default: <out-dir>/<spec>.csv]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Image unfolding and MFDFA settings shared by `mfdfa` and `report`.
#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Unfolding order for PGM inputs
    #[arg(long, default_value = "row-major", value_parser = ["row-major", "column-major", "boustrophedon"])]
    pub unfold: String,

    /// Polynomial detrending order (0-3)
    #[arg(long, default_value_t = 1)]
    pub detrend_order: usize,

    /// Smallest moment order q
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub q_min: f64,

    /// Largest moment order q
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub q_max: f64,

    /// Moment grid spacing
    #[arg(long, default_value_t = 0.25)]
    pub q_step: f64,

    /// Smallest segment length
    #[arg(long, default_value_t = 16)]
    pub s_min: usize,

    /// Largest segment length [default: N/4]
    #[arg(long)]
    pub s_max: Option<usize>,

    /// Number of log-spaced segment lengths before deduplication
    #[arg(long, default_value_t = 20)]
    pub s_count: usize,

    /// Smallest segment length in the log-log fit [default: smallest scale]
    #[arg(long)]
    pub fit_min: Option<usize>,

    /// Largest segment length in the log-log fit [default: largest scale]
    #[arg(long)]
    pub fit_max: Option<usize>,

    /// Half-width of the uncorrelated band around H = 0.5
    #[arg(long, default_value_t = 0.02)]
    pub dead_band: f64,
}

#[derive(Debug, Args)]
pub struct MfdfaArgs {
    /// Signal files (CSV or PGM) or generator specs
    #[arg(required = true)]
    pub inputs: Vec<String>,

    #[command(flatten)]
    pub analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct DwtArgs {
    /// Signal files (CSV or PGM) or generator specs
    #[arg(required = true)]
    pub inputs: Vec<String>,

    /// Unfolding order for PGM inputs
    #[arg(long, default_value = "row-major", value_parser = ["row-major", "column-major", "boustrophedon"])]
    pub unfold: String,

    /// Daubechies order p (vanishing moments, 1-10)
    #[arg(long, default_value_t = 4)]
    pub order: usize,

    /// Decomposition levels
    #[arg(long, default_value_t = 5)]
    pub levels: usize,

    /// Boundary extension
    #[arg(long, default_value = "periodic", value_parser = ["periodic", "symmetric"])]
    pub boundary: String,

    /// Detail level whose signal-domain trace is written [default: --levels]
    #[arg(long)]
    pub band: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    /// First signal (CSV, PGM or generator spec)
    pub x: String,

    /// Second signal (CSV, PGM or generator spec)
    pub y: String,

    /// Unfolding order for PGM inputs
    #[arg(long, default_value = "row-major", value_parser = ["row-major", "column-major", "boustrophedon"])]
    pub unfold: String,

    /// Complex Gaussian derivative order (1-8)
    #[arg(long, default_value_t = 2)]
    pub wavelet_order: usize,

    /// Time smoothing window as a multiple of the scale
    #[arg(long, default_value_t = 0.6)]
    pub smooth_time: f64,

    /// Number of adjacent scales averaged (odd)
    #[arg(long, default_value_t = 3)]
    pub smooth_scales: usize,

    /// Scales per octave
    #[arg(long, default_value_t = 12)]
    pub voices: usize,

    /// Smallest scale
    #[arg(long, default_value_t = 2.0)]
    pub min_scale: f64,

    /// Largest scale [default: N/4]
    #[arg(long)]
    pub max_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Group directories (label = directory name) or manifest files of
    /// 'label<TAB>input' lines
    #[arg(required = true)]
    pub groups: Vec<PathBuf>,

    /// Stem of the report files
    #[arg(long, default_value = "report")]
    pub name: String,

    #[command(flatten)]
    pub analysis: AnalysisArgs,
}

/// `key=value` lines; `#` starts a comment.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let known = known_keys();
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{origin}: line {}: expected key=value", i + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if !known.contains(&key) || key == "config" {
                return Err(CliError::Usage(format!(
                    "{origin}: line {}: unknown setting '{key}'",
                    i + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, id: &str) -> Option<&str> {
        self.values.get(&id.replace('_', "-")).map(String::as_str)
    }
}

fn known_keys() -> Vec<String> {
    let cmd = Cli::command();
    let mut keys: Vec<String> = cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    for sub in cmd.get_subcommands() {
        keys.extend(sub.get_arguments().filter_map(|a| a.get_long().map(str::to_string)));
    }
    keys
}

/// Looks up settings in precedence order: command line, config file, default.
pub struct Settings<'a> {
    matches: &'a ArgMatches,
    config: &'a ConfigFile,
}

impl<'a> Settings<'a> {
    pub fn new(matches: &'a ArgMatches, config: &'a ConfigFile) -> Self {
        Settings { matches, config }
    }

    fn on_command_line(&self, id: &str) -> bool {
        self.matches.value_source(id) == Some(ValueSource::CommandLine)
    }

    fn parse_config<T: FromStr>(&self, id: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.config.get(id) {
            Some(v) => v.parse::<T>().map(Some).map_err(|e| {
                CliError::Usage(format!("config setting {}: '{v}': {e}", id.replace('_', "-")))
            }),
            None => Ok(None),
        }
    }

    /// Setting with a built-in default.
    pub fn get<T>(&self, id: &str) -> Result<T, CliError>
    where
        T: FromStr + Clone + Send + Sync + 'static,
        T::Err: std::fmt::Display,
    {
        if !self.on_command_line(id) {
            if let Some(v) = self.parse_config(id)? {
                return Ok(v);
            }
        }
        self.matches
            .get_one::<T>(id)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("missing value for {id}")))
    }

    /// Setting without a built-in default.
    pub fn get_opt<T>(&self, id: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Clone + Send + Sync + 'static,
        T::Err: std::fmt::Display,
    {
        if self.on_command_line(id) {
            return Ok(self.matches.get_one::<T>(id).cloned());
        }
        self.parse_config(id)
    }
}

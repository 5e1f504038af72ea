//! `synth`, `mfdfa`, `dwt` and `coherence`.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use fracwave::cwt::{wavelet_coherence, ComplexGaussian, ScaleGrid, SmoothingParams, WaveletDescriptor};
use fracwave::dwt::{band_trace, daubechies_filters, dwt_multilevel, BoundaryMode, DwtDecomposition};
use fracwave::io::{save_json, save_signal_csv, save_table_csv, Cell, Table};
use fracwave::mfdfa::{analyze_with_table, log_spaced_scales, MfdfaConfig, MomentGrid, MultifractalSpectrum};
use fracwave::{Error, UnfoldDirection};

use crate::args::Settings;
use crate::error::{CliError, CliResult};
use crate::inputs::Input;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            _ => Err(CliError::Usage(format!("unknown format '{s}'"))),
        }
    }

    pub fn json(self) -> bool {
        self != Format::Csv
    }

    pub fn csv(self) -> bool {
        self != Format::Json
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub out_dir: PathBuf,
    pub format: Format,
    pub seed_override: Option<u64>,
}

impl Context {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        Ok(Context {
            out_dir: s.get("out_dir")?,
            format: Format::parse(&s.get::<String>("format")?)?,
            seed_override: s.get_opt("seed_override")?,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn ensure_out_dir(&self) -> CliResult<()> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| {
            CliError::Core(Error::Io {
                path: self.out_dir.clone(),
                source: e,
            })
        })
    }
}

/// Reports a failure on standard error and returns 1 for counting.
pub fn report_failure(what: &str, err: &CliError) -> usize {
    eprintln!("fracwave: {what}: {err}");
    1
}

fn unfold_setting(s: &Settings) -> CliResult<UnfoldDirection> {
    Ok(s.get::<String>("unfold")?.parse()?)
}

pub fn synth(ctx: &Context, specs: &[String], output: Option<&Path>) -> CliResult<usize> {
    if output.is_some() && specs.len() > 1 {
        return Err(CliError::Usage("--output needs exactly one spec".into()));
    }
    ctx.ensure_out_dir()?;
    let results: Vec<CliResult<String>> = specs
        .par_iter()
        .map(|raw| {
            let input = Input::parse(raw, ctx.seed_override)?;
            let Input::Generator(spec) = &input else {
                return Err(Error::SpecParse {
                    token: raw.clone(),
                    message: "not a generator spec".into(),
                }
                .into());
            };
            let signal = spec.generate()?;
            let path = match output {
                Some(p) => p.to_path_buf(),
                None => ctx.path(&format!("{}.csv", input.stem())),
            };
            save_signal_csv(&signal, &path)?;
            Ok(format!("{}\t{}", input.label(), path.display()))
        })
        .collect();
    Ok(finish(specs, results))
}

/// Prints successes on stdout and failures on stderr, in input order.
fn finish(labels: &[String], results: Vec<CliResult<String>>) -> usize {
    let mut failures = 0;
    for (label, r) in labels.iter().zip(results) {
        match r {
            Ok(line) => println!("{line}"),
            Err(e) => failures += report_failure(label, &e),
        }
    }
    failures
}

/// MFDFA settings read from flags and config.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub unfold: UnfoldDirection,
    pub detrend_order: usize,
    pub q: MomentGrid,
    pub s_min: usize,
    pub s_max: Option<usize>,
    pub s_count: usize,
    pub fit_min: Option<usize>,
    pub fit_max: Option<usize>,
    pub dead_band: f64,
}

impl AnalysisOptions {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let q = MomentGrid::uniform(s.get("q_min")?, s.get("q_max")?, s.get("q_step")?)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(AnalysisOptions {
            unfold: unfold_setting(s)?,
            detrend_order: s.get("detrend_order")?,
            q,
            s_min: s.get("s_min")?,
            s_max: s.get_opt("s_max")?,
            s_count: s.get("s_count")?,
            fit_min: s.get_opt("fit_min")?,
            fit_max: s.get_opt("fit_max")?,
            dead_band: s.get("dead_band")?,
        })
    }

    pub fn config_for(&self, n: usize) -> CliResult<MfdfaConfig> {
        let hi = self.s_max.unwrap_or(n / 4);
        if hi < self.s_min {
            return Err(Error::SignalTooShort {
                required: 4 * self.s_min,
                actual: n,
            }
            .into());
        }
        let scales = log_spaced_scales(self.s_min, hi, self.s_count);
        let fit_range = (
            self.fit_min.unwrap_or(scales[0]),
            self.fit_max.unwrap_or(*scales.last().unwrap()),
        );
        Ok(MfdfaConfig {
            q: self.q.clone(),
            scales: Some(scales),
            detrend_order: self.detrend_order,
            fit_range: Some(fit_range),
            dead_band: self.dead_band,
        })
    }

    pub fn analyze(&self, input: &Input) -> CliResult<(MultifractalSpectrum, fracwave::mfdfa::FluctuationTable, usize)> {
        let signal = input.load(self.unfold)?;
        let config = self.config_for(signal.len())?;
        let (spectrum, table) = analyze_with_table(&signal, &config)?;
        Ok((spectrum, table, signal.len()))
    }
}

#[derive(Serialize)]
struct MfdfaOutput<'a> {
    input: String,
    length: usize,
    #[serde(flatten)]
    spectrum: &'a MultifractalSpectrum,
}

pub fn mfdfa(ctx: &Context, inputs: &[String], opts: &AnalysisOptions) -> CliResult<usize> {
    ctx.ensure_out_dir()?;
    let results: Vec<CliResult<String>> = inputs
        .par_iter()
        .map(|raw| {
            let input = Input::parse(raw, ctx.seed_override)?;
            let (spectrum, table, length) = opts.analyze(&input)?;
            let stem = input.stem();
            if ctx.format.json() {
                let out = MfdfaOutput {
                    input: input.label(),
                    length,
                    spectrum: &spectrum,
                };
                save_json(&out, &ctx.path(&format!("{stem}.mfdfa.json")))?;
            }
            if ctx.format.csv() {
                save_table_csv(&table.to_table(), &ctx.path(&format!("{stem}.fluct.csv")))?;
            }
            Ok(format!(
                "{}\tH={:.4}\twidth={:.4}\t{}",
                input.label(),
                spectrum.hurst,
                spectrum.width,
                spectrum.classification.as_str()
            ))
        })
        .collect();
    Ok(finish(inputs, results))
}

#[derive(Debug, Clone)]
pub struct DwtOptions {
    pub unfold: UnfoldDirection,
    pub order: usize,
    pub levels: usize,
    pub boundary: BoundaryMode,
    pub band: Option<usize>,
}

impl DwtOptions {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        Ok(DwtOptions {
            unfold: unfold_setting(s)?,
            order: s.get("order")?,
            levels: s.get("levels")?,
            boundary: s.get::<String>("boundary")?.parse()?,
            band: s.get_opt("band")?,
        })
    }
}

#[derive(Serialize)]
struct DwtOutput<'a> {
    input: String,
    band: usize,
    #[serde(flatten)]
    decomposition: &'a DwtDecomposition,
}

pub fn dwt(ctx: &Context, inputs: &[String], opts: &DwtOptions) -> CliResult<usize> {
    ctx.ensure_out_dir()?;
    let results: Vec<CliResult<String>> = inputs
        .par_iter()
        .map(|raw| {
            let input = Input::parse(raw, ctx.seed_override)?;
            let signal = input.load(opts.unfold)?;
            let filter = daubechies_filters(opts.order)?;
            let decomposition = dwt_multilevel(&signal, &filter, opts.levels, opts.boundary)?;
            let band = opts.band.unwrap_or(opts.levels);
            let trace = band_trace(&decomposition, &filter, Some(band))?;
            let stem = input.stem();
            if ctx.format.json() {
                let out = DwtOutput {
                    input: input.label(),
                    band,
                    decomposition: &decomposition,
                };
                save_json(&out, &ctx.path(&format!("{stem}.dwt.json")))?;
            }
            if ctx.format.csv() {
                save_signal_csv(&trace, &ctx.path(&format!("{stem}.band{band}.csv")))?;
            }
            Ok(format!(
                "{}\tlevels={}\tband={}\tmax_abs={:.4e}",
                input.label(),
                opts.levels,
                band,
                trace.max_abs()
            ))
        })
        .collect();
    Ok(finish(inputs, results))
}

#[derive(Debug, Clone)]
pub struct CoherenceOptions {
    pub unfold: UnfoldDirection,
    pub wavelet_order: usize,
    pub smoothing: SmoothingParams,
    pub voices: usize,
    pub min_scale: f64,
    pub max_scale: Option<f64>,
}

impl CoherenceOptions {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        Ok(CoherenceOptions {
            unfold: unfold_setting(s)?,
            wavelet_order: s.get("wavelet_order")?,
            smoothing: SmoothingParams {
                time_factor: s.get("smooth_time")?,
                scale_window: s.get("smooth_scales")?,
            },
            voices: s.get("voices")?,
            min_scale: s.get("min_scale")?,
            max_scale: s.get_opt("max_scale")?,
        })
    }
}

#[derive(Serialize)]
struct CoherenceOutput<'a> {
    x: String,
    y: String,
    wavelet: WaveletDescriptor,
    #[serde(flatten)]
    map: &'a fracwave::cwt::CoherenceMap,
}

fn coherence_one(ctx: &Context, x_raw: &str, y_raw: &str, opts: &CoherenceOptions) -> CliResult<String> {
    let xi = Input::parse(x_raw, ctx.seed_override)?;
    let yi = Input::parse(y_raw, ctx.seed_override)?;
    let x = xi.load(opts.unfold)?;
    let y = yi.load(opts.unfold)?;
    let wavelet = ComplexGaussian::new(opts.wavelet_order)?;
    let max_scale = opts.max_scale.unwrap_or(x.len() as f64 / 4.0);
    let grid = ScaleGrid::log_spaced(opts.min_scale, max_scale, opts.voices)?;
    let map = wavelet_coherence(&x, &y, &wavelet, &grid, &opts.smoothing)?;
    let stem = format!("{}__{}", xi.stem(), yi.stem());
    if ctx.format.csv() {
        let mut t = Table::with_header(&["scale", "position", "coherence", "phase", "in_coi"]);
        for (i, &a) in map.scales.iter().enumerate() {
            for b in 0..map.positions {
                if !map.is_valid(i, b) {
                    continue;
                }
                t.push(vec![
                    Cell::from(a),
                    Cell::from(b),
                    Cell::from(map.coherence_at(i, b)),
                    Cell::from(map.phase_at(i, b)),
                    Cell::from(usize::from(!map.is_interior(i, b))),
                ]);
            }
        }
        save_table_csv(&t, &ctx.path(&format!("{stem}.coherence.csv")))?;
    }
    if ctx.format.json() {
        let out = CoherenceOutput {
            x: xi.label(),
            y: yi.label(),
            wavelet: wavelet.descriptor(),
            map: &map,
        };
        save_json(&out, &ctx.path(&format!("{stem}.coherence.json")))?;
    }
    let (mut acc, mut count) = (0.0, 0usize);
    for i in 0..map.scales.len() {
        for b in 0..map.positions {
            if map.is_valid(i, b) && map.is_interior(i, b) {
                acc += map.coherence_at(i, b);
                count += 1;
            }
        }
    }
    let mean = if count > 0 { acc / count as f64 } else { f64::NAN };
    Ok(format!(
        "{}\t{}\tmean_interior_coherence={:.4}\tinvalid_cells={}",
        xi.label(),
        yi.label(),
        mean,
        map.invalid.len()
    ))
}

pub fn coherence(ctx: &Context, x: &str, y: &str, opts: &CoherenceOptions) -> CliResult<usize> {
    ctx.ensure_out_dir()?;
    let label = format!("{x} / {y}");
    Ok(finish(&[label], vec![coherence_one(ctx, x, y, opts)]))
}

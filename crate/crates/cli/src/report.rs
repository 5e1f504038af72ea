//! Group comparison of Hurst exponent and singularity spectrum width.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use fracwave::io::{save_json, save_table_csv, write_atomic, Cell, Table};
use fracwave::stats::{mean, sample_std};
use fracwave::Error;

use crate::commands::{report_failure, AnalysisOptions, Context};
use crate::error::{CliError, CliResult};
use crate::inputs::Input;

pub const HURST_ROW: &str = "Hurst exponent (mean h(q=2) ± std)";
pub const WIDTH_ROW: &str = "Singularity spectrum width (mean Δα ± std)";

#[derive(Debug)]
pub struct Group {
    pub label: String,
    pub inputs: Vec<Input>,
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Core(Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn push_input(groups: &mut Vec<Group>, label: &str, input: Input) {
    match groups.iter_mut().find(|g| g.label == label) {
        Some(g) => g.inputs.push(input),
        None => groups.push(Group {
            label: label.to_string(),
            inputs: vec![input],
        }),
    }
}

/// Directories become one group each; other paths are `label<TAB>input` manifests.
pub fn collect_groups(paths: &[PathBuf], seed_override: Option<u64>) -> CliResult<Vec<Group>> {
    let mut groups = Vec::new();
    for path in paths {
        if path.is_dir() {
            let label = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| io_err(path, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .map(|e| e.eq_ignore_ascii_case("csv") || e.eq_ignore_ascii_case("pgm"))
                            .unwrap_or(false)
                })
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(CliError::EmptyGroup(label));
            }
            for f in files {
                push_input(&mut groups, &label, Input::File(f));
            }
        } else {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let base = path.parent().unwrap_or(Path::new("."));
            for (i, line) in text.lines().enumerate() {
                let line = line.trim_end();
                if line.trim().is_empty() || line.trim_start().starts_with('#') {
                    continue;
                }
                let (label, raw) = line.split_once('\t').ok_or_else(|| {
                    CliError::Usage(format!(
                        "{}: line {}: expected 'label<TAB>input'",
                        path.display(),
                        i + 1
                    ))
                })?;
                let input = Input::parse(raw.trim(), seed_override)?.resolve_relative(base);
                push_input(&mut groups, label.trim(), input);
            }
        }
    }
    if groups.is_empty() {
        return Err(CliError::EmptyGroup(String::new()));
    }
    Ok(groups)
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub input: String,
    pub hurst: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub label: String,
    pub count: usize,
    pub mean_h: f64,
    pub std_h: f64,
    pub mean_width: f64,
    pub std_width: f64,
    pub samples: Vec<Sample>,
}

impl GroupSummary {
    fn new(label: String, samples: Vec<Sample>) -> Self {
        let h: Vec<f64> = samples.iter().map(|s| s.hurst).collect();
        let w: Vec<f64> = samples.iter().map(|s| s.width).collect();
        GroupSummary {
            label,
            count: samples.len(),
            mean_h: mean(&h),
            std_h: sample_std(&h),
            mean_width: mean(&w),
            std_width: sample_std(&w),
            samples,
        }
    }
}

#[derive(Debug, Serialize)]
struct ReportOutput<'a> {
    groups: &'a [GroupSummary],
}

/// Tab-separated comparison table, one column per group.
pub fn render_table(groups: &[GroupSummary]) -> String {
    let mut out = String::new();
    for g in groups {
        out.push('\t');
        out.push_str(&g.label);
    }
    out.push('\n');
    out.push_str(HURST_ROW);
    for g in groups {
        out.push_str(&format!("\t{:.4} ± {:.4}", g.mean_h, g.std_h));
    }
    out.push('\n');
    out.push_str(WIDTH_ROW);
    for g in groups {
        out.push_str(&format!("\t{:.4} ± {:.4}", g.mean_width, g.std_width));
    }
    out.push('\n');
    out
}

fn summary_table(groups: &[GroupSummary]) -> Table {
    let mut t = Table::with_header(&["group", "n", "mean_h", "std_h", "mean_width", "std_width"]);
    for g in groups {
        t.push(vec![
            Cell::from(g.label.as_str()),
            Cell::from(g.count),
            Cell::from(g.mean_h),
            Cell::from(g.std_h),
            Cell::from(g.mean_width),
            Cell::from(g.std_width),
        ]);
    }
    t
}

pub fn report(ctx: &Context, paths: &[PathBuf], name: &str, opts: &AnalysisOptions) -> CliResult<usize> {
    let groups = collect_groups(paths, ctx.seed_override)?;
    std::fs::create_dir_all(&ctx.out_dir).map_err(|e| io_err(&ctx.out_dir, e))?;

    let jobs: Vec<(usize, &Input)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| g.inputs.iter().map(move |inp| (gi, inp)))
        .collect();
    let results: Vec<CliResult<Sample>> = jobs
        .par_iter()
        .map(|(_, input)| {
            let (spectrum, _, _) = opts.analyze(input)?;
            Ok(Sample {
                input: input.label(),
                hurst: spectrum.hurst,
                width: spectrum.width,
            })
        })
        .collect();

    let mut failures = 0;
    let mut per_group: Vec<Vec<Sample>> = vec![Vec::new(); groups.len()];
    for ((gi, input), r) in jobs.iter().zip(results) {
        match r {
            Ok(s) => per_group[*gi].push(s),
            Err(e) => failures += report_failure(&input.label(), &e),
        }
    }

    let mut summaries = Vec::new();
    for (g, samples) in groups.iter().zip(per_group) {
        if samples.is_empty() {
            failures += report_failure(&g.label, &CliError::EmptyGroup(g.label.clone()));
            continue;
        }
        summaries.push(GroupSummary::new(g.label.clone(), samples));
    }
    if summaries.is_empty() {
        return Ok(failures.max(1));
    }

    let text = render_table(&summaries);
    print!("{text}");
    write_atomic(&ctx.path(&format!("{name}.report.txt")), text.as_bytes())?;
    if ctx.format.csv() {
        save_table_csv(&summary_table(&summaries), &ctx.path(&format!("{name}.report.csv")))?;
    }
    if ctx.format.json() {
        save_json(
            &ReportOutput { groups: &summaries },
            &ctx.path(&format!("{name}.report.json")),
        )?;
    }
    Ok(failures)
}

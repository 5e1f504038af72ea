//! Positional inputs: generator specs, CSV signals and PGM images.

use std::path::{Path, PathBuf};

use fracwave::io::{load_image_pgm, load_signal_csv};
use fracwave::synth::GeneratorSpec;
use fracwave::{unfold_image, Signal, UnfoldDirection};

use crate::error::CliResult;

#[derive(Debug, Clone)]
pub enum Input {
    Generator(GeneratorSpec),
    File(PathBuf),
}

impl Input {
    /// Anything starting with a generator prefix is a spec; the rest are paths.
    pub fn parse(raw: &str, seed_override: Option<u64>) -> CliResult<Input> {
        if GeneratorSpec::looks_like_spec(raw) {
            let mut spec = GeneratorSpec::parse(raw)?;
            if let Some(seed) = seed_override {
                spec = spec.with_seed_override(seed);
            }
            Ok(Input::Generator(spec))
        } else {
            Ok(Input::File(PathBuf::from(raw)))
        }
    }

    pub fn resolve_relative(self, base: &Path) -> Input {
        match self {
            Input::File(p) if p.is_relative() => Input::File(base.join(p)),
            other => other,
        }
    }

    pub fn load(&self, unfold: UnfoldDirection) -> CliResult<Signal> {
        match self {
            Input::Generator(spec) => Ok(spec.generate()?),
            Input::File(path) => {
                let is_pgm = path
                    .extension()
                    .map(|e| e.eq_ignore_ascii_case("pgm"))
                    .unwrap_or(false);
                if is_pgm {
                    Ok(unfold_image(&load_image_pgm(path)?, unfold))
                } else {
                    Ok(load_signal_csv(path)?)
                }
            }
        }
    }

    /// File-name stem for outputs derived from this input.
    pub fn stem(&self) -> String {
        match self {
            Input::Generator(spec) => spec
                .to_string()
                .chars()
                .map(|c| match c {
                    ':' | ',' => '_',
                    '=' => '-',
                    c => c,
                })
                .collect(),
            Input::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Input::Generator(spec) => spec.to_string(),
            Input::File(path) => path.display().to_string(),
        }
    }
}

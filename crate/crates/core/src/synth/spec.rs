//! Generator spec strings such as `fgn:H=0.7,n=16,seed=42`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    WhiteNoise,
    Fgn,
    Fbm,
    BinomialCascade,
}

impl GeneratorKind {
    pub fn prefix(self) -> &'static str {
        match self {
            GeneratorKind::WhiteNoise => "white",
            GeneratorKind::Fgn => "fgn",
            GeneratorKind::Fbm => "fbm",
            GeneratorKind::BinomialCascade => "cascade",
        }
    }

    fn from_prefix(p: &str) -> Option<Self> {
        [
            GeneratorKind::WhiteNoise,
            GeneratorKind::Fgn,
            GeneratorKind::Fbm,
            GeneratorKind::BinomialCascade,
        ]
        .into_iter()
        .find(|k| k.prefix() == p)
    }
}

/// A parsed generator request. `seed` is the noise seed for white/fgn/fbm
/// and the optional shuffle seed for the cascade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hurst: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    pub exponent: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn parse_err(token: &str, message: impl Into<String>) -> Error {
    Error::SpecParse {
        token: token.to_string(),
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(token: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| parse_err(token, format!("cannot parse value '{value}'")))
}

impl GeneratorSpec {
    /// Whether `s` starts with a known generator prefix.
    pub fn looks_like_spec(s: &str) -> bool {
        s.split_once(':')
            .map(|(p, _)| GeneratorKind::from_prefix(p).is_some())
            .unwrap_or(false)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (prefix, rest) = s
            .split_once(':')
            .ok_or_else(|| parse_err(s, "expected '<kind>:<key>=<value>,...'"))?;
        let kind = GeneratorKind::from_prefix(prefix)
            .ok_or_else(|| parse_err(prefix, "unknown generator kind"))?;
        let mut spec = GeneratorSpec {
            kind,
            hurst: None,
            weight: None,
            exponent: 0,
            seed: None,
        };
        let mut have_n = false;
        for token in rest.split(',').filter(|t| !t.is_empty()) {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| parse_err(token, "expected key=value"))?;
            match (kind, key) {
                (GeneratorKind::Fgn | GeneratorKind::Fbm, "H") => {
                    spec.hurst = Some(parse_num(token, value)?)
                }
                (GeneratorKind::BinomialCascade, "a") => spec.weight = Some(parse_num(token, value)?),
                (GeneratorKind::BinomialCascade, "shuffle") => {
                    spec.seed = Some(parse_num(token, value)?)
                }
                (GeneratorKind::BinomialCascade, "seed") => {
                    return Err(parse_err(token, "cascade takes shuffle=<seed>, not seed"))
                }
                (_, "seed") => spec.seed = Some(parse_num(token, value)?),
                (_, "n") => {
                    spec.exponent = parse_num(token, value)?;
                    have_n = true;
                }
                _ => return Err(parse_err(token, format!("unknown key for {prefix}"))),
            }
        }
        if !have_n {
            return Err(parse_err(s, "missing n=<length exponent>"));
        }
        match kind {
            GeneratorKind::Fgn | GeneratorKind::Fbm if spec.hurst.is_none() => {
                Err(parse_err(s, "missing H=<hurst>"))
            }
            GeneratorKind::BinomialCascade if spec.weight.is_none() => {
                Err(parse_err(s, "missing a=<weight>"))
            }
            _ => Ok(spec),
        }
    }

    /// Replaces the noise seed; cascades are left unchanged.
    pub fn with_seed_override(mut self, seed: u64) -> Self {
        if self.kind != GeneratorKind::BinomialCascade {
            self.seed = Some(seed);
        }
        self
    }

    /// Runs the generator. A missing seed means seed 0.
    pub fn generate(&self) -> Result<Signal> {
        let seed = self.seed.unwrap_or(0);
        match self.kind {
            GeneratorKind::WhiteNoise => super::gen_white_noise(self.exponent, seed),
            GeneratorKind::Fgn => super::gen_fgn(self.hurst.unwrap_or(f64::NAN), self.exponent, seed),
            GeneratorKind::Fbm => super::gen_fbm(self.hurst.unwrap_or(f64::NAN), self.exponent, seed),
            GeneratorKind::BinomialCascade => super::gen_binomial_cascade(
                self.weight.unwrap_or(f64::NAN),
                self.exponent,
                self.seed,
            ),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GeneratorSpec::parse(s)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.prefix())?;
        if let Some(h) = self.hurst {
            write!(f, "H={h},")?;
        }
        if let Some(a) = self.weight {
            write!(f, "a={a},")?;
        }
        write!(f, "n={}", self.exponent)?;
        if let Some(seed) = self.seed {
            let key = if self.kind == GeneratorKind::BinomialCascade {
                "shuffle"
            } else {
                "seed"
            };
            write!(f, ",{key}={seed}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let s = GeneratorSpec::parse("fgn:H=0.7,n=16,seed=42").unwrap();
        assert_eq!(s.kind, GeneratorKind::Fgn);
        assert_eq!(s.hurst, Some(0.7));
        assert_eq!(s.exponent, 16);
        assert_eq!(s.seed, Some(42));
        let c = GeneratorSpec::parse("cascade:a=0.75,n=2").unwrap();
        assert_eq!(c.generate().unwrap().samples(), &[0.5625, 0.1875, 0.1875, 0.0625]);
        let w = GeneratorSpec::parse("white:n=16,seed=7").unwrap();
        assert_eq!(w.to_string(), "white:n=16,seed=7");
        assert_eq!(GeneratorSpec::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_tokens() {
        for (input, token) in [
            ("fgn:H=0.7", "fgn:H=0.7"),
            ("fgn:H=abc,n=4", "H=abc"),
            ("pink:n=4", "pink"),
            ("white:n=4,q=2", "q=2"),
            ("white:n", "n"),
            ("cascade:n=4", "cascade:n=4"),
        ] {
            match GeneratorSpec::parse(input) {
                Err(Error::SpecParse { token: t, .. }) => assert_eq!(t, token, "{input}"),
                other => panic!("{input}: {other:?}"),
            }
        }
    }

    #[test]
    fn range_errors_surface_on_generate() {
        let s = GeneratorSpec::parse("fgn:H=1.5,n=10").unwrap();
        assert!(matches!(s.generate(), Err(Error::Range(_))));
    }

    #[test]
    fn prefix_detection() {
        assert!(GeneratorSpec::looks_like_spec("fgn:H=0.5,n=4"));
        assert!(GeneratorSpec::looks_like_spec("cascade:"));
        assert!(!GeneratorSpec::looks_like_spec("data/x.csv"));
        assert!(!GeneratorSpec::looks_like_spec("C:/x.csv"));
    }
}

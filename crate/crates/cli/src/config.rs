//! Layered run configuration: defaults, then a TOML file, then environment
//! variables and flags (clap resolves the last two, flags first).

use std::path::{Path, PathBuf};

use nctorus_verify::SuiteConfig;
use serde::Deserialize;

/// Largest truncation accepted without `--unsafe-truncation`; the number of
/// words of length `l` grows like `4·3^{l−1}` per exponent pattern.
pub const TRUNCATION_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

/// The `[output]` table of a config file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    pub timing: Option<bool>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("truncation {0} exceeds the cap {TRUNCATION_CAP}; pass --unsafe-truncation to allow it")]
    TruncationCap(usize),
    #[error(transparent)]
    Suite(#[from] nctorus_verify::ConfigError),
}

/// Overrides collected from flags and environment variables.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub theta: Option<f64>,
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    pub lmax: Option<usize>,
    pub lemmas: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub no_timing: bool,
    pub unsafe_truncation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timing: bool,
}

/// Splits a config file into its `[output]` table and the suite parameters.
pub fn parse_file(text: &str, path: &Path) -> Result<(SuiteConfig, OutputConfig), RunConfigError> {
    let parse_err = |message: String| RunConfigError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| parse_err(e.to_string()))?;
    let output = match table.remove("output") {
        Some(v) => v.try_into().map_err(|e: toml::de::Error| parse_err(e.to_string()))?,
        None => OutputConfig::default(),
    };
    let suite = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| parse_err(e.to_string()))?;
    Ok((suite, output))
}

pub fn resolve(file: Option<&Path>, o: &Overrides) -> Result<RunConfig, RunConfigError> {
    let (mut suite, output) = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunConfigError::Read {
                path: path.to_path_buf(),
                source,
            })?;
            parse_file(&text, path)?
        }
        None => (SuiteConfig::default(), OutputConfig::default()),
    };
    if let Some(t) = o.theta {
        suite.theta = t;
    }
    if let Some(t) = o.truncation {
        suite.truncation = t;
    }
    if let Some(s) = o.seed {
        suite.seed = s;
    }
    if let Some(l) = o.lmax {
        suite.lmax = l;
    }
    if !o.lemmas.is_empty() {
        suite.lemmas = o.lemmas.clone();
    }
    if suite.truncation > TRUNCATION_CAP && !o.unsafe_truncation {
        return Err(RunConfigError::TruncationCap(suite.truncation));
    }
    suite.validate()?;
    Ok(RunConfig {
        suite,
        out: o.out.clone().or(output.path),
        format: o.format.or(output.format).unwrap_or(Format::Json),
        timing: !o.no_timing && output.timing.unwrap_or(true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let text = "seed = 7\nlmax = 4\n[output]\nformat = \"markdown\"\n";
        let (suite, out) = parse_file(text, Path::new("x.toml")).unwrap();
        assert_eq!(suite.seed, 7);
        assert_eq!(suite.lmax, 4);
        assert_eq!(suite.truncation, SuiteConfig::default().truncation);
        assert_eq!(out.format, Some(Format::Markdown));

        let dir = std::env::temp_dir().join("nctorus-config-test.toml");
        std::fs::write(&dir, text).unwrap();
        let o = Overrides {
            seed: Some(9),
            format: Some(Format::Json),
            ..Overrides::default()
        };
        let rc = resolve(Some(&dir), &o).unwrap();
        assert_eq!(rc.suite.seed, 9);
        assert_eq!(rc.suite.lmax, 4);
        assert_eq!(rc.format, Format::Json);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_file("sede = 1\n", Path::new("x.toml")).is_err());
        assert!(parse_file("[output]\nfmt = \"json\"\n", Path::new("x.toml")).is_err());
    }

    #[test]
    fn truncation_cap() {
        let o = Overrides {
            truncation: Some(TRUNCATION_CAP + 1),
            ..Overrides::default()
        };
        assert!(matches!(resolve(None, &o), Err(RunConfigError::TruncationCap(_))));
        let o = Overrides {
            unsafe_truncation: true,
            ..o
        };
        assert!(resolve(None, &o).is_ok());
    }
}

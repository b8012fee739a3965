//! Flag, config-file and default resolution.

use std::collections::BTreeMap;

use crate::axis::{parse_axis, parse_scalar};
use crate::experiments::Experiment;
use crate::{CliError, Format, Opts};

/// Every key accepted on the command line or in a config file.
const KEYS: &[&str] = &[
    "xi", "epsilon", "purity", "T", "window", "alpha", "beta", "parity", "k", "seed", "exponent",
    "grid", "out", "format", "jobs", "quiet", "plot",
];

#[derive(Debug, Clone)]
pub struct Settings {
    /// Resolved experiment parameters as given (after precedence).
    pub values: BTreeMap<&'static str, String>,
    pub out: Option<String>,
    pub format: Format,
    pub jobs: Option<usize>,
    pub quiet: bool,
    pub plot: bool,
}

fn flag_values(opts: &Opts) -> BTreeMap<&'static str, String> {
    let pairs = [
        ("xi", &opts.xi),
        ("epsilon", &opts.epsilon),
        ("purity", &opts.purity),
        ("T", &opts.t),
        ("window", &opts.window),
        ("alpha", &opts.alpha),
        ("beta", &opts.beta),
        ("parity", &opts.parity),
        ("k", &opts.k),
        ("seed", &opts.seed),
        ("exponent", &opts.exponent),
        ("grid", &opts.grid),
    ];
    pairs
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect()
}

fn read_config(path: &str) -> Result<BTreeMap<&'static str, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    let table: toml::Table =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {path}: {e}")))?;
    let mut out = BTreeMap::new();
    for (key, value) in table {
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(CliError::Usage(format!("config {path}: unknown key {key:?}")));
        };
        let text = match value {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Boolean(b) => b.to_string(),
            other => {
                return Err(CliError::Usage(format!(
                    "config {path}: {key} must be a string, number or boolean, got {other}"
                )))
            }
        };
        out.insert(known, text);
    }
    Ok(out)
}

fn parse_bool(key: &str, text: &str) -> Result<bool, CliError> {
    text.parse()
        .map_err(|_| CliError::Usage(format!("{key} must be true or false, got {text:?}")))
}

impl Settings {
    pub fn resolve(experiment: Experiment, opts: &Opts) -> Result<Settings, CliError> {
        let file = match &opts.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let flags = flag_values(opts);
        let quiet = opts.quiet || file.get("quiet").map(|v| parse_bool("quiet", v)).transpose()?.unwrap_or(false);

        let mut values = BTreeMap::new();
        for &(key, default) in experiment.params() {
            let chosen = flags.get(key).or_else(|| file.get(key)).cloned();
            if let Some(v) = chosen.or_else(|| default.map(str::to_string)) {
                values.insert(key, v);
            }
        }
        let used: Vec<&str> = experiment.params().iter().map(|p| p.0).collect();
        for key in flags.keys() {
            if !used.contains(key) && !quiet {
                eprintln!("catamp: --{key} is not used by {}; ignored", experiment.name());
            }
        }

        let out = opts.out.clone().or_else(|| file.get("out").cloned());
        let format = match opts.format {
            Some(f) => f,
            None => match file.get("format").map(String::as_str) {
                Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => return Err(CliError::Usage(format!("format must be csv or json, got {other:?}"))),
                None if out.as_deref().is_some_and(|p| p.ends_with(".json")) => Format::Json,
                None => Format::Csv,
            },
        };
        let jobs = match opts.jobs {
            Some(j) => Some(j),
            None => file
                .get("jobs")
                .map(|v| v.parse::<usize>().map_err(|_| CliError::Usage(format!("jobs must be a count, got {v:?}"))))
                .transpose()?,
        };
        if jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let plot = opts.plot || file.get("plot").map(|v| parse_bool("plot", v)).transpose()?.unwrap_or(false);
        if plot && out.is_none() {
            return Err(CliError::Usage("--plot needs --out".into()));
        }

        let settings = Settings {
            values,
            out,
            format,
            jobs,
            quiet,
            plot,
        };
        settings.validate()?;
        Ok(settings)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Usage(format!("--{key} is required")))
    }

    pub fn axis(&self, key: &str) -> Result<Vec<f64>, CliError> {
        parse_axis(key, self.require(key)?)
    }

    pub fn optional_axis(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key).map(|v| parse_axis(key, v)).transpose()
    }

    pub fn scalar(&self, key: &str) -> Result<f64, CliError> {
        parse_scalar(key, self.require(key)?)
    }

    pub fn choice(&self, key: &str, allowed: &[&str]) -> Result<String, CliError> {
        let v = self.require(key)?;
        if allowed.contains(&v) {
            Ok(v.to_string())
        } else {
            Err(CliError::Usage(format!("--{key} must be one of {}, got {v:?}", allowed.join(", "))))
        }
    }

    /// Checks every numeric parameter against its physical range.
    fn validate(&self) -> Result<(), CliError> {
        for (&key, text) in &self.values {
            let check = |ok: fn(f64) -> bool, what: &str| -> Result<(), CliError> {
                for v in parse_axis(key, text)? {
                    if !ok(v) {
                        return Err(CliError::Usage(format!("--{key} = {v}: {what}")));
                    }
                }
                Ok(())
            };
            match key {
                "xi" => check(|v| v.is_finite() && v.abs() <= 40.0, "squeezing must lie within 40 dB")?,
                "epsilon" => check(|v| (1.0..=10.0).contains(&v), "impurity must lie in [1, 10]")?,
                "purity" => check(|v| v > 0.0 && v <= 1.0, "purity must lie in (0, 1]")?,
                "T" => check(|v| v > 0.0 && v < 1.0, "transmissivity must lie in (0, 1)")?,
                "window" => check(|v| v >= 0.0, "window must be non-negative")?,
                "alpha" | "beta" => check(|v| v.is_finite() && (0.0..=50.0).contains(&v), "amplitude must lie in [0, 50]")?,
                "k" => check(|v| v.fract() == 0.0 && (0.0..=12.0).contains(&v), "iterations must be an integer in [0, 12]")?,
                "grid" => check(f64::is_finite, "grid must be finite")?,
                _ => {}
            }
        }
        Ok(())
    }
}

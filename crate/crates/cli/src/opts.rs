//! Flags, config files and their merge.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ext())
    }
}

/// Every option a subcommand may take. A config file uses the same keys as
/// the long flags; flags given on the command line win.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Opts {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    /// Coefficient polynomial A(z), e.g. "z + 5".
    #[arg(long = "A", value_name = "POLY", allow_hyphen_values = true)]
    #[serde(rename = "A", deserialize_with = "text_like")]
    pub a: Option<String>,
    /// Coefficient polynomial B(z).
    #[arg(long = "B", value_name = "POLY", allow_hyphen_values = true)]
    #[serde(rename = "B", deserialize_with = "text_like")]
    pub b: Option<String>,
    /// Sequence index: `30`, `30,70` or an inclusive range `10..40`.
    #[arg(long)]
    #[serde(deserialize_with = "text_like")]
    pub n: Option<String>,
    /// Window `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(deserialize_with = "text_like")]
    pub bbox: Option<String>,
    /// Grid nodes `nx,ny`.
    #[arg(long)]
    #[serde(deserialize_with = "text_like")]
    pub grid: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "ab-eps")]
    #[serde(rename = "ab-eps")]
    pub ab_eps: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random samples for the q-discriminant consistency run.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output directory; without it the output goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    #[serde(deserialize_with = "formats")]
    pub format: Vec<Format>,
    /// JSON file with default values for any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Evaluation point for `qdisc`, e.g. `2` or `0.5+0.5i`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(deserialize_with = "text_like")]
    pub q: Option<String>,
    /// Built-in example id (5.1 – 5.4); fills k, l, A and B.
    #[arg(long)]
    #[serde(deserialize_with = "text_like")]
    pub example: Option<String>,
}

impl Opts {
    /// Fills unset options from the config file, if one was given.
    pub fn resolve(self) -> Result<Opts, Failure> {
        match self.config.clone() {
            Some(path) => Ok(self.over(load(&path)?)),
            None => Ok(self),
        }
    }

    fn over(self, base: Opts) -> Opts {
        Opts {
            k: self.k.or(base.k),
            l: self.l.or(base.l),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            n: self.n.or(base.n),
            bbox: self.bbox.or(base.bbox),
            grid: self.grid.or(base.grid),
            tol: self.tol.or(base.tol),
            ab_eps: self.ab_eps.or(base.ab_eps),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            out: self.out.or(base.out),
            format: if self.format.is_empty() { base.format } else { self.format },
            config: self.config,
            jobs: self.jobs.or(base.jobs),
            q: self.q.or(base.q),
            example: self.example.or(base.example),
        }
    }

    pub fn formats_or(&self, default: &[Format]) -> Vec<Format> {
        let mut v = if self.format.is_empty() { default.to_vec() } else { self.format.clone() };
        v.dedup();
        v
    }
}

fn load(path: &Path) -> Result<Opts, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

/// Accepts a string, a number, or an array of numbers (joined with commas).
fn text_like<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    use serde_json::Value;
    let v = Option::<Value>::deserialize(d)?;
    let scalar = |v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(de::Error::custom(format!("expected a string or number, got {other}"))),
    };
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(items)) => {
            let parts: Result<Vec<String>, _> = items.iter().map(scalar).collect();
            Ok(Some(parts?.join(",")))
        }
        Some(other) => scalar(&other).map(Some),
    }
}

fn formats<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Format>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Format),
        Many(Vec<Format>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(f) => vec![f],
        OneOrMany::Many(v) => v,
    })
}

/// `30`, `30,70`, `10..40`, or a mix such as `10..12,20`.
pub fn parse_indices(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("bad --n '{text}': expected e.g. 30, 30,70 or 10..40"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub fn parse_grid(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("bad --grid '{text}': expected nx,ny"));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

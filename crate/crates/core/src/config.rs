//! `key = value` run configuration files.
//!
//! ```text
//! # comments and blank lines are ignored
//! command = verify
//! func = smooth_bump
//! scale = 2
//! shift = 0.25
//! d = 1
//! n = 8,16,32
//! r = 2
//! grid = 0.005
//! backend = float
//! seed = 7
//! out = report.json
//! ```
//!
//! `scale` and `shift` turn the registry function `f` into `scale * f + shift`.
//! Entries of `n` are uniform degrees, or per-axis degrees joined by `x`
//! (`8x16`).

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::Backend;
use crate::combinatorics::DegreeVector;
use crate::error::{Error, Result};
use crate::oracle::{builtin, FunctionOracle};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub func: Option<String>,
    pub scale: f64,
    pub shift: f64,
    pub d: Option<usize>,
    pub n: Vec<String>,
    pub r: Option<usize>,
    pub grid: Option<f64>,
    pub out: Option<String>,
    pub backend: Option<Backend>,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            func: None,
            scale: 1.0,
            shift: 0.0,
            d: None,
            n: Vec::new(),
            r: None,
            grid: None,
            out: None,
            backend: None,
            seed: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "command" => cfg.command = Some(value.to_string()),
                "func" => cfg.func = Some(value.to_string()),
                "scale" => cfg.scale = parse_value(key, value)?,
                "shift" => cfg.shift = parse_value(key, value)?,
                "d" => cfg.d = Some(parse_value(key, value)?),
                "n" => cfg.n = parse_degree_list(value)?,
                "r" => cfg.r = Some(parse_value(key, value)?),
                "grid" => cfg.grid = Some(parse_value(key, value)?),
                "out" => cfg.out = Some(value.to_string()),
                "backend" => cfg.backend = Some(value.parse()?),
                "seed" => cfg.seed = Some(parse_value(key, value)?),
                other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text form: fixed key order, unset keys omitted.
    pub fn to_canonical(&self) -> String {
        let mut s = String::new();
        if let Some(v) = &self.command {
            writeln!(s, "command = {v}").unwrap();
        }
        if let Some(v) = &self.func {
            writeln!(s, "func = {v}").unwrap();
        }
        if self.scale != 1.0 {
            writeln!(s, "scale = {}", self.scale).unwrap();
        }
        if self.shift != 0.0 {
            writeln!(s, "shift = {}", self.shift).unwrap();
        }
        if let Some(v) = self.d {
            writeln!(s, "d = {v}").unwrap();
        }
        if !self.n.is_empty() {
            writeln!(s, "n = {}", self.n.join(",")).unwrap();
        }
        if let Some(v) = self.r {
            writeln!(s, "r = {v}").unwrap();
        }
        if let Some(v) = self.grid {
            writeln!(s, "grid = {v}").unwrap();
        }
        if let Some(v) = &self.backend {
            writeln!(s, "backend = {v}").unwrap();
        }
        if let Some(v) = self.seed {
            writeln!(s, "seed = {v}").unwrap();
        }
        if let Some(v) = &self.out {
            writeln!(s, "out = {v}").unwrap();
        }
        s
    }

    /// The configured registry function with its transform applied.
    pub fn oracle(&self, d: usize) -> Result<FunctionOracle> {
        let name = self
            .func
            .as_deref()
            .ok_or_else(|| Error::Parse("no function given".into()))?;
        let f = builtin(name, d)?;
        if self.scale == 1.0 && self.shift == 0.0 {
            Ok(f)
        } else {
            f.with_transform(self.scale, self.shift)
        }
    }
}

/// Parse one degree item: `10` (uniform over `d` axes) or `8x16` (per axis).
pub fn parse_degree(item: &str, d: usize) -> Result<DegreeVector> {
    let parts: Vec<usize> = item
        .trim()
        .split('x')
        .map(|p| parse_value("n", p.trim()))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [n] => DegreeVector::uniform(d, *n),
        per_axis if per_axis.len() == d => DegreeVector::new(per_axis.to_vec()),
        per_axis => Err(Error::Parse(format!(
            "degree `{item}` has {} axes but d = {d}",
            per_axis.len()
        ))),
    }
}

fn parse_degree_list(value: &str) -> Result<Vec<String>> {
    value
        .split(',')
        .map(|item| {
            item.trim()
                .split('x')
                .try_for_each(|p| parse_value::<usize>("n", p.trim()).map(drop))
                .map(|_| item.trim().to_string())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = "# run\ncommand = verify\nfunc = smooth_bump\nscale = 2\nshift = 0.25\nd = 1\nn = 8,16,32\nr = 2\ngrid = 0.005\nbackend = float\nseed = 7\nout = report.json\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.command.as_deref(), Some("verify"));
        assert_eq!(cfg.n, vec!["8", "16", "32"]);
        assert_eq!(cfg.scale, 2.0);
        assert_eq!(cfg.backend, Some(Backend::Float));
        let f = cfg.oracle(1).unwrap();
        assert!((f.lower_bound_m() - (2.0 * 0.5 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("r = two").is_err());
        assert!(RunConfig::parse("n = 8,x").is_err());
        assert!(RunConfig::parse("just words").is_err());
    }

    #[test]
    fn degree_items() {
        assert_eq!(parse_degree("10", 2).unwrap().entries(), &[10, 10]);
        assert_eq!(parse_degree("8x16", 2).unwrap().entries(), &[8, 16]);
        assert!(parse_degree("8x16", 3).is_err());
        assert!(parse_degree("0", 1).is_err());
    }
}

//! Run configuration as flat `key=value` text.
//!
//! Defaults are overridden by a config file, which is overridden by flags.
//! [`RunConfig::to_text`] is the form embedded in every artifact; it omits the
//! output directory, which says where artifacts go rather than what they hold.

use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;
use transcend_core::builder::{LRule, NRule, SequenceRule};
use transcend_core::rng::DEFAULT_SEED;

/// Version tag written next to the config in every artifact.
pub const FORMAT_VERSION: &str = "transcend-artifact/1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError(format!("invalid value {value:?} for {key}"))
}

/// Rectangle as center and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub cx: f64,
    pub cy: f64,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec_roots: Vec<f64>,
    pub lambda: f64,
    pub iterations: u32,
    pub rule: SequenceRule,
    pub depth: usize,
    pub seed: u64,
    pub samples: usize,
    pub band_points: usize,
    /// `None` selects the square of side `8R_1` centred at 0, covering `A_1`.
    pub window: Option<WindowSpec>,
    pub res: (usize, usize),
    pub budget: usize,
    pub box_min_exp: u32,
    /// `None` uses `log2` of the smaller resolution.
    pub box_max_exp: Option<u32>,
    pub strict_no_skip: bool,
    /// Load this construction file instead of building.
    pub construction: Option<PathBuf>,
    pub z: (f64, f64),
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spec_roots: vec![1.0],
            lambda: 10.0,
            iterations: 4,
            rule: SequenceRule::default(),
            depth: 5,
            seed: DEFAULT_SEED,
            samples: 4096,
            band_points: 1000,
            window: None,
            res: (1024, 1024),
            budget: 64,
            box_min_exp: 3,
            box_max_exp: None,
            strict_no_skip: false,
            construction: None,
            z: (0.0, 0.0),
            out: PathBuf::from("out"),
        }
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad(key, s))).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, ConfigError> {
    s.trim().parse().map_err(|_| bad(key, s))
}

pub fn parse_seed(s: &str) -> Result<u64, ConfigError> {
    let t = s.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse(),
    }
    .map_err(|_| bad("seed", s))
}

pub fn n_rule_text(r: &NRule) -> String {
    match r {
        NRule::Constant { c } => format!("constant:{c}"),
        NRule::Power { s } => format!("power:{s}"),
        NRule::Tower => "tower".into(),
        NRule::LogPower { s } => format!("logpower:{s}"),
    }
}

pub fn parse_n_rule(s: &str) -> Result<NRule, ConfigError> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind.trim() {
        "constant" => NRule::Constant { c: parse_num("n_rule", arg)? },
        "power" => NRule::Power { s: parse_num("n_rule", arg)? },
        "tower" if arg.is_empty() => NRule::Tower,
        "logpower" => NRule::LogPower { s: parse_num("n_rule", arg)? },
        _ => return Err(bad("n_rule", s)),
    })
}

pub fn parse_l_rule(s: &str) -> Result<LRule, ConfigError> {
    match s.trim() {
        "one" => Ok(LRule::One),
        "maxlog" => Ok(LRule::MaxLog),
        _ => Err(bad("l_rule", s)),
    }
}

pub fn parse_window(s: &str) -> Result<Option<WindowSpec>, ConfigError> {
    if s.trim() == "auto" {
        return Ok(None);
    }
    match parse_list("window", s)?[..] {
        [cx, cy, width, height] => Ok(Some(WindowSpec { cx, cy, width, height })),
        _ => Err(bad("window", s)),
    }
}

pub fn parse_res(s: &str) -> Result<(usize, usize), ConfigError> {
    let parts: Vec<&str> = s.split('x').collect();
    match parts[..] {
        [n] => {
            let n = parse_num("res", n)?;
            Ok((n, n))
        }
        [a, b] => Ok((parse_num("res", a)?, parse_num("res", b)?)),
        _ => Err(bad("res", s)),
    }
}

fn parse_bool(key: &str, s: &str) -> Result<bool, ConfigError> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, s)),
    }
}

impl RunConfig {
    /// Sets one key; unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "spec_roots" => self.spec_roots = parse_list(key, v)?,
            "lambda" => self.lambda = parse_num(key, v)?,
            "iterations" => self.iterations = parse_num(key, v)?,
            "n_rule" => self.rule.n = parse_n_rule(v)?,
            "l_rule" => self.rule.l = parse_l_rule(v)?,
            "depth" => self.depth = parse_num(key, v)?,
            "seed" => self.seed = parse_seed(v)?,
            "samples" => self.samples = parse_num(key, v)?,
            "band_points" => self.band_points = parse_num(key, v)?,
            "window" => self.window = parse_window(v)?,
            "res" => self.res = parse_res(v)?,
            "budget" => self.budget = parse_num(key, v)?,
            "box_min_exp" => self.box_min_exp = parse_num(key, v)?,
            "box_max_exp" => self.box_max_exp = if v == "auto" { None } else { Some(parse_num(key, v)?) },
            "strict_no_skip" => self.strict_no_skip = parse_bool(key, v)?,
            "construction" => self.construction = if v == "none" { None } else { Some(PathBuf::from(v)) },
            "z" => match parse_list(key, v)?[..] {
                [x, y] => self.z = (x, y),
                _ => return Err(bad(key, v)),
            },
            "out" => self.out = PathBuf::from(v),
            other => return Err(ConfigError(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are ignored, so
    /// the comment block embedded in CSV and image headers parses once the
    /// leading `# ` is stripped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key=value, got {line:?}", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Every key except `out`, one per line, in a fixed order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = |s: &mut String, k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        w(&mut s, "spec_roots", list(&self.spec_roots));
        w(&mut s, "lambda", self.lambda.to_string());
        w(&mut s, "iterations", self.iterations.to_string());
        w(&mut s, "n_rule", n_rule_text(&self.rule.n));
        w(&mut s, "l_rule", match self.rule.l {
            LRule::One => "one".into(),
            LRule::MaxLog => "maxlog".into(),
        });
        w(&mut s, "depth", self.depth.to_string());
        w(&mut s, "seed", format!("{:#x}", self.seed));
        w(&mut s, "samples", self.samples.to_string());
        w(&mut s, "band_points", self.band_points.to_string());
        w(&mut s, "window", match self.window {
            None => "auto".into(),
            Some(w) => list(&[w.cx, w.cy, w.width, w.height]),
        });
        w(&mut s, "res", format!("{}x{}", self.res.0, self.res.1));
        w(&mut s, "budget", self.budget.to_string());
        w(&mut s, "box_min_exp", self.box_min_exp.to_string());
        w(&mut s, "box_max_exp", self.box_max_exp.map_or("auto".into(), |e| e.to_string()));
        w(&mut s, "strict_no_skip", self.strict_no_skip.to_string());
        w(&mut s, "construction", self.construction.as_ref().map_or("none".into(), |p| p.display().to_string()));
        w(&mut s, "z", list(&[self.z.0, self.z.1]));
        s
    }

    /// Header block for text artifacts: format version then the config.
    pub fn header(&self) -> String {
        format!("format_version={FORMAT_VERSION}\n{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.set("n_rule", "power:0.5").unwrap();
        c.set("window", "1.5,-2,64,32").unwrap();
        c.set("res", "300x200").unwrap();
        c.set("seed", "0xDEAD_BEEF").unwrap();
        c.set("z", "0.1,1e-3").unwrap();
        let back = RunConfig::from_text(&c.to_text()).unwrap();
        assert_eq!(back.to_text(), c.to_text());
        assert_eq!(back.rule.n, NRule::Power { s: 0.5 });
        assert_eq!(back.seed, 0xDEAD_BEEF);
    }

    #[test]
    fn header_lines_parse_back() {
        let c = RunConfig::default();
        let mut d = RunConfig::default();
        d.lambda = 3.0;
        let stripped: String = c.to_text().lines().map(|l| format!("{l}\n")).collect();
        d.apply_text(&stripped).unwrap();
        assert_eq!(d, c);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut c = RunConfig::default();
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("lambda", "ten").is_err());
        assert!(c.set("n_rule", "tower:3").is_err());
        assert!(c.apply_text("lambda 10").is_err());
    }
}

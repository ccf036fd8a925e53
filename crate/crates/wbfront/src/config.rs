//! Plain-text experiment configuration: one `key = value` per line, `#` starts
//! a comment. Unknown keys are rejected; missing keys take the defaults of
//! [`ExperimentConfig::default`].

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use wbfront_core::{Grid, ReactionKind, ReactionModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    WbImplicit,
    WbExplicit,
    Os,
    ZeroWaveImplicit,
    ZeroWaveExplicit,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::WbImplicit,
        SchemeKind::WbExplicit,
        SchemeKind::Os,
        SchemeKind::ZeroWaveImplicit,
        SchemeKind::ZeroWaveExplicit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::WbImplicit => "wb_implicit",
            SchemeKind::WbExplicit => "wb_explicit",
            SchemeKind::Os => "os",
            SchemeKind::ZeroWaveImplicit => "zero_wave_implicit",
            SchemeKind::ZeroWaveExplicit => "zero_wave_explicit",
        }
    }

    pub fn is_explicit(self) -> bool {
        matches!(self, SchemeKind::WbExplicit | SchemeKind::ZeroWaveExplicit)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Sigmoid,
    /// Exact pushed front of the cubic model (`a > 2`), centered at x = 40.
    ExactPushedFront,
    /// CSV with `x,u` columns on the run's grid (snapshot format).
    FromFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ReactionModel,
    pub scheme: SchemeKind,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub t_end: f64,
    /// `None` means the scheme default: 0.05 for OS, `dx` otherwise.
    pub dt_cap: Option<f64>,
    pub cfl_safety: f64,
    pub sigma_floor: f64,
    pub record_cadence: f64,
    pub level_c: f64,
    pub initial: InitialData,
    pub output_dir: Option<PathBuf>,
    pub left_state: f64,
    pub right_state: f64,
    /// Every scheme uses `dt = min(dt_cap, dx^2/2, dx/|sigma|)`.
    pub same_dt: bool,
    /// Maximum number of time steps.
    pub budget: Option<u64>,
    pub snapshots: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ReactionModel::fkpp(),
            scheme: SchemeKind::WbImplicit,
            x_min: 0.0,
            x_max: 3080.0,
            dx: 0.5,
            t_end: 1500.0,
            dt_cap: None,
            cfl_safety: 1.0,
            sigma_floor: 1e-6,
            record_cadence: 1.0,
            level_c: 0.5,
            initial: InitialData::Sigmoid,
            output_dir: None,
            left_state: 1.0,
            right_state: 0.0,
            same_dt: false,
            budget: None,
            snapshots: 5,
        }
    }
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<Grid, wbfront_core::Error> {
        Grid::new(self.x_min, self.x_max, self.dx)
    }

    pub fn effective_dt_cap(&self) -> f64 {
        self.dt_cap.unwrap_or(match self.scheme {
            SchemeKind::Os if !self.same_dt => 0.05,
            _ => self.dx,
        })
    }

    /// Checks cross-field invariants. Errors carry the name of the offending key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let positive = |key: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((key, format!("{key} must be positive and finite (got {v})")))
            }
        };
        positive("dx", self.dx)?;
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(("t_end", format!("t_end must be >= 0 (got {})", self.t_end)));
        }
        if let Some(cap) = self.dt_cap {
            positive("dt_cap", cap)?;
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err((
                "cfl_safety",
                format!("cfl_safety must lie in (0, 1] (got {})", self.cfl_safety),
            ));
        }
        positive("sigma_floor", self.sigma_floor)?;
        positive("record_cadence", self.record_cadence)?;
        if !(self.model.a >= 0.0) {
            return Err(("a", format!("a must be >= 0 (got {})", self.model.a)));
        }
        // fronts invade to the right: the occupied state sits on the left
        if !(self.left_state > self.right_state) {
            return Err((
                "right_state",
                "left_state must exceed right_state".to_string(),
            ));
        }
        if !(self.level_c > self.right_state && self.level_c < self.left_state) {
            return Err((
                "level_c",
                format!("level_c must lie strictly between the boundary states (got {})", self.level_c),
            ));
        }
        if let Err(e) = self.grid() {
            return Err(("dx", e.to_string()));
        }
        if self.initial == InitialData::ExactPushedFront
            && !(self.model.kind == ReactionKind::Cubic && self.model.a > 2.0)
        {
            return Err((
                "initial",
                "exact_pushed_front needs model = cubic with a > 2".to_string(),
            ));
        }
        Ok(())
    }

    /// Serializes to the same `key = value` format [`parse_config`] reads.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let model = match self.model.kind {
            ReactionKind::Fkpp => "fkpp",
            ReactionKind::Cubic => "cubic",
        };
        let _ = writeln!(s, "model = {model}");
        let _ = writeln!(s, "a = {:?}", self.model.a);
        let _ = writeln!(s, "scheme = {}", self.scheme);
        let _ = writeln!(s, "x_min = {:?}", self.x_min);
        let _ = writeln!(s, "x_max = {:?}", self.x_max);
        let _ = writeln!(s, "dx = {:?}", self.dx);
        let _ = writeln!(s, "t_end = {:?}", self.t_end);
        if let Some(cap) = self.dt_cap {
            let _ = writeln!(s, "dt_cap = {cap:?}");
        }
        let _ = writeln!(s, "cfl_safety = {:?}", self.cfl_safety);
        let _ = writeln!(s, "sigma_floor = {:?}", self.sigma_floor);
        let _ = writeln!(s, "record_cadence = {:?}", self.record_cadence);
        let _ = writeln!(s, "level_c = {:?}", self.level_c);
        match &self.initial {
            InitialData::Sigmoid => {
                let _ = writeln!(s, "initial = sigmoid");
            }
            InitialData::ExactPushedFront => {
                let _ = writeln!(s, "initial = exact_pushed_front");
            }
            InitialData::FromFile(p) => {
                let _ = writeln!(s, "initial = file");
                let _ = writeln!(s, "initial_file = {}", p.display());
            }
        }
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(s, "output_dir = {}", dir.display());
        }
        let _ = writeln!(s, "left_state = {:?}", self.left_state);
        let _ = writeln!(s, "right_state = {:?}", self.right_state);
        let _ = writeln!(s, "same_dt = {}", self.same_dt);
        if let Some(b) = self.budget {
            let _ = writeln!(s, "budget = {b}");
        }
        let _ = writeln!(s, "snapshots = {}", self.snapshots);
        s
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {message}")]
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    /// `line` is 0 when the offending key took its default value.
    #[error("line {line}: invalid `{key}`: {message}")]
    Invariant {
        line: usize,
        key: String,
        message: String,
    },
}

const KEYS: &[&str] = &[
    "model",
    "a",
    "scheme",
    "x_min",
    "x_max",
    "dx",
    "t_end",
    "dt_cap",
    "cfl_safety",
    "sigma_floor",
    "record_cadence",
    "level_c",
    "initial",
    "initial_file",
    "output_dir",
    "left_state",
    "right_state",
    "same_dt",
    "budget",
    "snapshots",
];

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: Vec<(&str, usize)> = Vec::new();
    let mut model_kind = "fkpp";
    let mut model_line = 0;
    let mut a = 0.0;
    let mut initial_kind: Option<(String, usize)> = None;
    let mut initial_file: Option<PathBuf> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Malformed {
                line,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if seen.iter().any(|(k, _)| *k == known) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        seen.push((known, line));

        let bad = |message: String| ConfigError::BadValue {
            line,
            key: key.to_string(),
            message,
        };
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| bad(format!("`{value}` is not a number")))
        };
        match known {
            "model" => {
                model_kind = match value {
                    "fkpp" => "fkpp",
                    "cubic" => "cubic",
                    _ => return Err(bad(format!("expected `fkpp` or `cubic`, got `{value}`"))),
                };
                model_line = line;
            }
            "a" => a = num()?,
            "scheme" => cfg.scheme = value.parse().map_err(bad)?,
            "x_min" => cfg.x_min = num()?,
            "x_max" => cfg.x_max = num()?,
            "dx" => cfg.dx = num()?,
            "t_end" => cfg.t_end = num()?,
            "dt_cap" => cfg.dt_cap = Some(num()?),
            "cfl_safety" => cfg.cfl_safety = num()?,
            "sigma_floor" => cfg.sigma_floor = num()?,
            "record_cadence" => cfg.record_cadence = num()?,
            "level_c" => cfg.level_c = num()?,
            "initial" => initial_kind = Some((value.to_string(), line)),
            "initial_file" => initial_file = Some(PathBuf::from(value)),
            "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
            "left_state" => cfg.left_state = num()?,
            "right_state" => cfg.right_state = num()?,
            "same_dt" => {
                cfg.same_dt = value
                    .parse()
                    .map_err(|_| bad(format!("expected `true` or `false`, got `{value}`")))?
            }
            "budget" => {
                cfg.budget = Some(
                    value
                        .parse()
                        .map_err(|_| bad(format!("`{value}` is not a step count")))?,
                )
            }
            "snapshots" => {
                cfg.snapshots = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a count")))?
            }
            _ => unreachable!("key list and match arms agree"),
        }
    }

    let line_of = |key: &str| {
        seen.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, l)| *l)
            .unwrap_or(0)
    };

    cfg.model = match model_kind {
        "cubic" => ReactionModel::cubic(a).map_err(|e| ConfigError::Invariant {
            line: line_of("a").max(model_line),
            key: "a".into(),
            message: e.to_string(),
        })?,
        _ => ReactionModel::fkpp(),
    };

    cfg.initial = match initial_kind {
        None => InitialData::Sigmoid,
        Some((kind, line)) => match kind.as_str() {
            "sigmoid" => InitialData::Sigmoid,
            "exact_pushed_front" => InitialData::ExactPushedFront,
            "file" => match initial_file.take() {
                Some(p) => InitialData::FromFile(p),
                None => {
                    return Err(ConfigError::Invariant {
                        line,
                        key: "initial_file".into(),
                        message: "initial = file requires initial_file".into(),
                    })
                }
            },
            other => {
                return Err(ConfigError::BadValue {
                    line,
                    key: "initial".into(),
                    message: format!(
                        "expected `sigmoid`, `exact_pushed_front` or `file`, got `{other}`"
                    ),
                })
            }
        },
    };
    if initial_file.is_some() && !matches!(cfg.initial, InitialData::FromFile(_)) {
        return Err(ConfigError::Invariant {
            line: line_of("initial_file"),
            key: "initial_file".into(),
            message: "initial_file is only used with initial = file".into(),
        });
    }

    cfg.validate().map_err(|(key, message)| ConfigError::Invariant {
        line: line_of(key),
        key: key.to_string(),
        message,
    })?;
    Ok(cfg)
}

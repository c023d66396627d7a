//! Run configuration shared by command-line flags and JSON config files.

use std::fmt;
use std::path::PathBuf;

use polyvortex_core::nested::Alignment;
use polyvortex_core::plane::parse_point;
use polyvortex_core::polygon::{CirculantKind, MotionCase};
use polyvortex_core::PlanePoint;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Verify,
    SolveNested,
    ClassifyRegime,
    Scan,
    Corotate,
    Simulate,
    Spectrum,
    Rigidity,
}

impl CommandName {
    pub fn label(self) -> &'static str {
        match self {
            CommandName::Verify => "verify",
            CommandName::SolveNested => "solve-nested",
            CommandName::ClassifyRegime => "classify-regime",
            CommandName::Scan => "scan",
            CommandName::Corotate => "corotate",
            CommandName::Simulate => "simulate",
            CommandName::Spectrum => "spectrum",
            CommandName::Rigidity => "rigidity",
        }
    }

    /// Parameter keys the command accepts besides `format` and `output`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            CommandName::Verify => &["input", "tol"],
            CommandName::SolveNested => &["n", "gamma1", "gamma2", "s1"],
            CommandName::ClassifyRegime => &["n", "gamma1", "gamma2"],
            CommandName::Scan => &["n", "ratios", "geometric", "at"],
            CommandName::Corotate => &["n", "gamma1", "gamma2", "s1", "mode", "alignment"],
            CommandName::Simulate => &["input", "t-end", "rel-tol"],
            CommandName::Spectrum => &["n", "kind"],
            CommandName::Rigidity => &["n", "case"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CorotateMode {
    Single,
    Nested,
    Absolute,
}

/// Every parameter a command can take. Keys mirror the command-line flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub n: Option<usize>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub s1: Option<String>,
    pub ratios: Option<String>,
    pub geometric: Option<bool>,
    pub at: Option<Vec<f64>>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub t_end: Option<f64>,
    pub rel_tol: Option<f64>,
    pub input: Option<PathBuf>,
    pub kind: Option<String>,
    pub case: Option<String>,
    pub mode: Option<CorotateMode>,
    pub alignment: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ValidationError> {
    Err(ValidationError(msg.into()))
}

/// A fully validated command.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Verify { input: PathBuf, tol: f64 },
    SolveNested { n: usize, gamma1: f64, gamma2: f64, s1: PlanePoint },
    ClassifyRegime { n: usize, ratio: f64 },
    Scan { n: usize, ratios: Vec<f64> },
    CorotateSingle { n: usize, s1: PlanePoint, gamma: f64 },
    CorotateNested { n: usize, gamma1: f64, gamma2: f64, s1: PlanePoint, alignment: Alignment },
    CorotateAbsolute { n: usize, gamma1: f64 },
    Simulate { input: PathBuf, t_end: f64, rel_tol: f64 },
    Spectrum { n: usize, kind: CirculantKind },
    Rigidity { n: usize, case: MotionCase },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ValidationError> {
        serde_json::from_str(text).map_err(|e| ValidationError(format!("config: {e}")))
    }

    fn present_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut add = |present: bool, key: &'static str| {
            if present {
                keys.push(key);
            }
        };
        add(self.n.is_some(), "n");
        add(self.gamma1.is_some(), "gamma1");
        add(self.gamma2.is_some(), "gamma2");
        add(self.s1.is_some(), "s1");
        add(self.ratios.is_some(), "ratios");
        add(self.geometric.is_some(), "geometric");
        add(self.at.is_some(), "at");
        add(self.tol.is_some(), "tol");
        add(self.t_end.is_some(), "t-end");
        add(self.rel_tol.is_some(), "rel-tol");
        add(self.input.is_some(), "input");
        add(self.kind.is_some(), "kind");
        add(self.case.is_some(), "case");
        add(self.mode.is_some(), "mode");
        add(self.alignment.is_some(), "alignment");
        keys
    }

    /// Check every parameter before anything is computed.
    pub fn validate(&self) -> Result<Plan, ValidationError> {
        let Some(name) = self.command else {
            return invalid("no command given");
        };
        for key in self.present_keys() {
            if !name.keys().contains(&key) {
                return invalid(format!("{key} is not a parameter of {}", name.label()));
            }
        }
        let command = match name {
            CommandName::Verify => Command::Verify {
                input: self.need_input()?,
                tol: positive("tol", self.tol.unwrap_or(polyvortex_core::dynamics::DEFAULT_CLASSIFY_TOL))?,
            },
            CommandName::SolveNested => Command::SolveNested {
                n: self.need_n()?,
                gamma1: nonzero("gamma1", self.need("gamma1", self.gamma1)?)?,
                gamma2: nonzero("gamma2", self.need("gamma2", self.gamma2)?)?,
                s1: self.s1()?,
            },
            CommandName::ClassifyRegime => {
                let gamma1 = nonzero("gamma1", self.gamma1.unwrap_or(1.0))?;
                let gamma2 = nonzero("gamma2", self.need("gamma2", self.gamma2)?)?;
                Command::ClassifyRegime {
                    n: self.need_n()?,
                    ratio: gamma2 / gamma1,
                }
            }
            CommandName::Scan => Command::Scan {
                n: self.need_n()?,
                ratios: self.ratio_grid()?,
            },
            CommandName::Corotate => self.corotate()?,
            CommandName::Simulate => {
                let rel_tol = self.rel_tol.unwrap_or(1e-10);
                if !(1e-14..=1e-3).contains(&rel_tol) {
                    return invalid(format!("rel-tol must lie in [1e-14, 1e-3], got {rel_tol}"));
                }
                Command::Simulate {
                    input: self.need_input()?,
                    t_end: positive("t-end", self.need("t-end", self.t_end)?)?,
                    rel_tol,
                }
            }
            CommandName::Spectrum => Command::Spectrum {
                n: self.need_n()?,
                kind: self
                    .need("kind", self.kind.as_deref())?
                    .parse()
                    .map_err(|e: polyvortex_core::Error| ValidationError(e.to_string()))?,
            },
            CommandName::Rigidity => Command::Rigidity {
                n: self.need_n()?,
                case: self
                    .case
                    .as_deref()
                    .unwrap_or("rotating")
                    .parse()
                    .map_err(|e: polyvortex_core::Error| ValidationError(e.to_string()))?,
            },
        };
        Ok(Plan {
            command,
            format: self.format.unwrap_or_default(),
            output: self.output.clone(),
        })
    }

    fn need<T>(&self, key: &str, value: Option<T>) -> Result<T, ValidationError> {
        match value {
            Some(v) => Ok(v),
            None => invalid(format!("{} requires {key}", self.command.map_or("command", |c| c.label()))),
        }
    }

    fn need_n(&self) -> Result<usize, ValidationError> {
        let n = self.need("n", self.n)?;
        if n < 2 {
            return invalid(format!("n must be >= 2, got {n}"));
        }
        Ok(n)
    }

    fn need_input(&self) -> Result<PathBuf, ValidationError> {
        self.need("input", self.input.clone())
    }

    fn s1(&self) -> Result<PlanePoint, ValidationError> {
        match &self.s1 {
            None => Ok(PlanePoint::new(1.0, 0.0)),
            Some(text) => match parse_point(text) {
                Some(p) if p.is_finite() && p.norm() > 0.0 => Ok(p),
                _ => invalid(format!("s1 must be a nonzero point \"x,y\", got {text:?}")),
            },
        }
    }

    fn ratio_grid(&self) -> Result<Vec<f64>, ValidationError> {
        let mut grid = Vec::new();
        if let Some(spec) = &self.ratios {
            let parts: Vec<&str> = spec.split(':').collect();
            let [start, stop, count] = parts[..] else {
                return invalid(format!("ratios must be start:stop:count, got {spec:?}"));
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| ValidationError(format!("bad number {s:?} in ratios")))
            };
            let (a, b) = (parse(start)?, parse(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| ValidationError(format!("bad count {count:?} in ratios")))?;
            if count == 0 {
                return invalid("ratios count must be positive");
            }
            let geometric = self.geometric.unwrap_or(false);
            if geometric && (a * b <= 0.0) {
                return invalid("geometric ratios need start and stop of the same nonzero sign");
            }
            for i in 0..count {
                let f = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                grid.push(if geometric {
                    a.signum() * (a.abs().ln() + f * (b.abs().ln() - a.abs().ln())).exp()
                } else {
                    a + f * (b - a)
                });
            }
        } else if self.geometric.is_some() {
            return invalid("geometric needs ratios");
        }
        grid.extend(self.at.iter().flatten().copied());
        if grid.is_empty() {
            return invalid("scan requires ratios or at");
        }
        for &r in &grid {
            if r == 0.0 || !r.is_finite() {
                return invalid(format!("ratio {r} must be finite and nonzero"));
            }
        }
        Ok(grid)
    }

    fn corotate(&self) -> Result<Command, ValidationError> {
        let n = self.need_n()?;
        let mode = self.mode.unwrap_or(if self.gamma2.is_some() {
            CorotateMode::Nested
        } else {
            CorotateMode::Single
        });
        let gamma1 = nonzero("gamma1", self.gamma1.unwrap_or(1.0))?;
        match mode {
            CorotateMode::Single => {
                if self.gamma2.is_some() || self.alignment.is_some() {
                    return invalid("single-ring co-rotation takes no gamma2 or alignment");
                }
                Ok(Command::CorotateSingle {
                    n,
                    s1: self.s1()?,
                    gamma: gamma1,
                })
            }
            CorotateMode::Nested => {
                let alignment = match self.need("alignment", self.alignment.as_deref())? {
                    "aligned" => Alignment::Aligned,
                    "staggered" => Alignment::Staggered,
                    other => return invalid(format!("alignment must be aligned or staggered, got {other:?}")),
                };
                Ok(Command::CorotateNested {
                    n,
                    gamma1,
                    gamma2: nonzero("gamma2", self.need("gamma2", self.gamma2)?)?,
                    s1: self.s1()?,
                    alignment,
                })
            }
            CorotateMode::Absolute => {
                if self.gamma2.is_some() || self.alignment.is_some() || self.s1.is_some() {
                    return invalid("absolute co-rotation takes only n and gamma1");
                }
                Ok(Command::CorotateAbsolute { n, gamma1 })
            }
        }
    }
}

fn nonzero(key: &str, x: f64) -> Result<f64, ValidationError> {
    if x == 0.0 || !x.is_finite() {
        invalid(format!("{key} must be finite and nonzero, got {x}"))
    } else {
        Ok(x)
    }
}

fn positive(key: &str, x: f64) -> Result<f64, ValidationError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        invalid(format!("{key} must be positive, got {x}"))
    }
}

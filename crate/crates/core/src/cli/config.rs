//! Flat `key=value` run configuration.
//!
//! Pairs are separated by whitespace or newlines; `#` starts a comment that
//! runs to the end of the line. List values are comma separated.
//!
//! ```text
//! study=time-sweep n=64 T=1
//! tau=0.1,0.05,0.025
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scheme::{PhysParams, SchemeSettings, TimeGrid};
use crate::sparsela::{PreconditionerKind, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Single,
    TimeSweep,
    SpaceSweep,
    EnergyTest,
}

impl FromStr for StudyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "single" => Ok(Self::Single),
            "time-sweep" => Ok(Self::TimeSweep),
            "space-sweep" => Ok(Self::SpaceSweep),
            "energy-test" => Ok(Self::EnergyTest),
            other => Err(format!(
                "unknown study '{other}' (single|time-sweep|space-sweep|energy-test)"
            )),
        }
    }
}

/// Exact solution driving the forcing and the error measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactKind {
    #[default]
    Trig,
    Zero,
}

impl FromStr for ExactKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "trig" => Ok(Self::Trig),
            "zero" => Ok(Self::Zero),
            other => Err(format!("unknown exact solution '{other}' (trig|zero)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub study: StudyKind,
    pub n: Vec<usize>,
    pub tau: Vec<f64>,
    /// Final time; for an energy test with `steps`, this is unused.
    pub final_time: Option<f64>,
    pub params: PhysParams<f64>,
    pub settings: SchemeSettings,
    pub exact: ExactKind,
    /// Energy test only: fixed number of steps per time step size.
    pub steps: Option<usize>,
    /// Energy test only: time at which the exact fields are sampled for initial data.
    pub init_time: f64,
    pub out: Option<PathBuf>,
    pub threads: usize,
}

impl RunConfig {
    /// Time grid for step size `tau`.
    pub fn grid(&self, tau: f64) -> Result<TimeGrid<f64>> {
        match (self.steps, self.final_time) {
            (Some(k), _) => TimeGrid::new(tau * k as f64, k),
            (None, Some(t)) => TimeGrid::from_step(t, tau),
            (None, None) => Err(Error::ConfigInvalid("missing key T".into())),
        }
    }
}

const KEYS: &[&str] = &[
    "study", "n", "tau", "T", "j", "nu", "nu_r", "c0", "ca", "cd", "tol", "maxit", "restart", "precond", "exact",
    "steps", "init_time", "out", "threads",
];

/// Raw pairs with the line each came from.
type Pairs = BTreeMap<String, (String, usize)>;

fn parse_pairs(text: &str) -> Result<Pairs> {
    let mut pairs = Pairs::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        for token in content.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| Error::ConfigParse {
                line,
                message: format!("expected key=value, got '{token}'"),
            })?;
            if !KEYS.contains(&key) {
                return Err(Error::ConfigParse {
                    line,
                    message: format!("unknown key '{key}'"),
                });
            }
            if value.is_empty() {
                return Err(Error::ConfigParse {
                    line,
                    message: format!("empty value for '{key}'"),
                });
            }
            if let Some((_, first)) = pairs.get(key) {
                return Err(Error::ConfigParse {
                    line,
                    message: format!("duplicate key '{key}' (first set on line {first})"),
                });
            }
            pairs.insert(key.to_string(), (value.to_string(), line));
        }
    }
    Ok(pairs)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_overrides(text, &[])
}

/// Parses `text`, then applies `overrides` (later entries win) before validation.
pub fn parse_config_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut pairs = parse_pairs(text)?;
    for (k, v) in overrides {
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::ConfigInvalid(format!("unknown key '{k}' in override")));
        }
        pairs.insert(k.clone(), (v.clone(), 0));
    }
    build(&pairs)
}

fn value<V: FromStr>(pairs: &Pairs, key: &str) -> Result<Option<V>>
where
    V::Err: std::fmt::Display,
{
    match pairs.get(key) {
        None => Ok(None),
        Some((raw, line)) => raw.parse::<V>().map(Some).map_err(|e| Error::ConfigParse {
            line: *line,
            message: format!("bad value '{raw}' for '{key}': {e}"),
        }),
    }
}

fn list<V: FromStr>(pairs: &Pairs, key: &str) -> Result<Option<Vec<V>>>
where
    V::Err: std::fmt::Display,
{
    match pairs.get(key) {
        None => Ok(None),
        Some((raw, line)) => raw
            .split(',')
            .map(|s| {
                s.trim().parse::<V>().map_err(|e| Error::ConfigParse {
                    line: *line,
                    message: format!("bad list entry '{s}' for '{key}': {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
    }
}

fn build(pairs: &Pairs) -> Result<RunConfig> {
    let one = |k: &str| -> Result<f64> { Ok(value::<f64>(pairs, k)?.unwrap_or(1.0)) };
    let params = PhysParams::new(one("j")?, one("nu")?, one("nu_r")?, one("c0")?, one("ca")?, one("cd")?)?;

    let final_time = value::<f64>(pairs, "T")?;
    let steps = value::<usize>(pairs, "steps")?;
    let tau = list::<f64>(pairs, "tau")?;
    if let Some(taus) = &tau {
        if taus.iter().any(|&t| !(t.is_finite() && t > 0.0)) {
            return Err(Error::ConfigInvalid("every tau must be positive".into()));
        }
        if let (Some(t), None) = (final_time, steps) {
            for &dt in taus {
                TimeGrid::from_step(t, dt).map_err(|e| Error::ConfigInvalid(format!("K = T / tau not integral: {e}")))?;
            }
        }
    }

    let study = value::<StudyKind>(pairs, "study")?.ok_or_else(|| Error::ConfigInvalid("missing key study".into()))?;
    let n = list::<usize>(pairs, "n")?.ok_or_else(|| Error::ConfigInvalid("missing key n".into()))?;
    let mut tau = tau.ok_or_else(|| Error::ConfigInvalid("missing key tau".into()))?;
    let mut n = n;
    if n.contains(&0) {
        return Err(Error::ConfigInvalid("n must be positive".into()));
    }

    if steps.is_some() && study != StudyKind::EnergyTest {
        return Err(Error::ConfigInvalid("steps is only valid for study=energy-test".into()));
    }
    if steps.is_some() && final_time.is_some() {
        return Err(Error::ConfigInvalid("give either T or steps, not both".into()));
    }
    if steps.is_none() && final_time.is_none() {
        return Err(Error::ConfigInvalid("missing key T".into()));
    }

    match study {
        StudyKind::Single => {
            if n.len() != 1 || tau.len() != 1 {
                return Err(Error::ConfigInvalid("single study takes one n and one tau".into()));
            }
        }
        StudyKind::TimeSweep => {
            if n.len() != 1 || tau.len() < 2 {
                return Err(Error::ConfigInvalid("time-sweep takes one n and at least two tau".into()));
            }
            tau.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            for w in tau.windows(2) {
                if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
                    return Err(Error::ConfigInvalid(format!(
                        "tau list must halve: {} -> {}",
                        w[0], w[1]
                    )));
                }
            }
        }
        StudyKind::SpaceSweep => {
            if n.len() < 2 || tau.len() != 1 {
                return Err(Error::ConfigInvalid("space-sweep takes at least two n and one tau".into()));
            }
            n.sort_unstable();
            for w in n.windows(2) {
                if w[1] != 2 * w[0] {
                    return Err(Error::ConfigInvalid(format!("n list must double: {} -> {}", w[0], w[1])));
                }
            }
        }
        StudyKind::EnergyTest => {
            if n.len() != 1 {
                return Err(Error::ConfigInvalid("energy-test takes one n".into()));
            }
            tau.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            tau.dedup();
        }
    }

    let defaults = SolverOptions::default();
    let solver = SolverOptions {
        tol: value(pairs, "tol")?.unwrap_or(defaults.tol),
        max_iter: value(pairs, "maxit")?.unwrap_or(defaults.max_iter),
        restart: value(pairs, "restart")?.unwrap_or(defaults.restart),
    };
    if solver.tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || solver.restart == 0 || solver.max_iter == 0 {
        return Err(Error::ConfigInvalid("tol, maxit and restart must be positive".into()));
    }
    let precond = value::<PreconditionerKind>(pairs, "precond")?.unwrap_or_default();
    let threads = value::<usize>(pairs, "threads")?.unwrap_or(1).max(1);

    Ok(RunConfig {
        study,
        n,
        tau,
        final_time,
        params,
        settings: SchemeSettings { solver, precond },
        exact: value(pairs, "exact")?.unwrap_or_default(),
        steps,
        init_time: value(pairs, "init_time")?.unwrap_or(1.0),
        out: value::<String>(pairs, "out")?.map(PathBuf::from),
        threads,
    })
}

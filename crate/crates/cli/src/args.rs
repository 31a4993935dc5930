//! Parsing of angles, numeric ranges and scalar-or-range parameters.

use std::fmt;

use serde::Serialize;

/// Inclusive grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// A single value or an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Value(f64),
    Range(Range),
}

impl Param {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Param::Value(v) => vec![*v],
            Param::Range(r) => r.values(),
        }
    }

    pub fn as_value(&self) -> Option<f64> {
        match self {
            Param::Value(v) => Some(*v),
            Param::Range(_) => None,
        }
    }

    pub fn as_range(&self) -> Option<Range> {
        match self {
            Param::Range(r) => Some(*r),
            Param::Value(_) => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) => write!(f, "{v}"),
            Param::Range(r) => write!(f, "{}:{}:{}", r.start, r.stop, r.count),
        }
    }
}

/// Parses `pi`, `pi/2`, `-pi/4`, `2pi/3`, `3*pi/4` or a plain decimal.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse angle '{s}'; use a decimal or forms like pi, pi/2, 3*pi/4");
    let Some(idx) = t.find("pi") else {
        return parse_number(&t).map_err(|_| bad());
    };
    let (head, tail) = (&t[..idx], &t[idx + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coef * std::f64::consts::PI / denom)
}

pub fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse number '{s}'"))?;
    if !v.is_finite() {
        return Err(format!("number '{s}' is not finite"));
    }
    Ok(v)
}

fn parse_param_with(s: &str, scalar: fn(&str) -> Result<f64, String>) -> Result<Param, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(Param::Value(scalar(one)?)),
        [start, stop, count] => {
            let start = scalar(start)?;
            let stop = scalar(stop)?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("range count '{count}' is not a non-negative integer"))?;
            if count < 2 {
                return Err(format!("range count must be ≥ 2, got {count}"));
            }
            if start >= stop {
                return Err(format!("range start must be < stop, got {start}:{stop}"));
            }
            Ok(Param::Range(Range { start, stop, count }))
        }
        _ => Err(format!(
            "'{s}' is neither a value nor a start:stop:count range"
        )),
    }
}

/// Angle value or range; endpoints accept the `pi` forms.
pub fn parse_angle_param(s: &str) -> Result<Param, String> {
    parse_param_with(s, parse_angle)
}

/// Plain decimal value or range.
pub fn parse_number_param(s: &str) -> Result<Param, String> {
    parse_param_with(s, |x| parse_number(x.trim()))
}

/// Comma-separated list of decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum EngineArg {
    Chebyshev,
    TraceClosed,
    TracePathOrdered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

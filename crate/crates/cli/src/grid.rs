//! Axis specifications: `min:max:count` grids and comma-separated value lists.

use std::fmt;
use std::str::FromStr;

/// `count` equally spaced points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(format!("grid bounds must be finite, got {min}:{max}"));
        }
        if count < 2 {
            return Err(format!("grid count must be at least 2, got {count}"));
        }
        if !(max > min) {
            return Err(format!("grid needs max > min, got {min}:{max}"));
        }
        Ok(Self { min, max, count })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// Points computed as `min + i·step`, with the last one pinned to `max`.
    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.count).map(|i| if i + 1 == self.count { self.max } else { self.min + i as f64 * h }).collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:count, got '{s}'"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}' in '{s}': {e}"));
        let count = parts[2].trim().parse::<usize>().map_err(|e| format!("bad count '{}' in '{s}': {e}", parts[2]))?;
        Self::new(num(parts[0])?, num(parts[1])?, count)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Either a grid or an explicit list like `0,0.5,1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueList {
    Grid(GridSpec),
    List(Vec<f64>),
}

impl ValueList {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ValueList::Grid(g) => g.points(),
            ValueList::List(v) => v.clone(),
        }
    }
}

impl FromStr for ValueList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            return s.parse().map(ValueList::Grid);
        }
        let values = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}' in '{s}': {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("values must be finite: '{s}'"));
        }
        Ok(ValueList::List(values))
    }
}

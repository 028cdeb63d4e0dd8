//! Value parsers for angles, complex numbers and sweep ranges.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use hcs_core::ComplexPoint;

/// Decimal radians or a multiple of pi: `1.2`, `pi`, `-pi/2`, `0.75pi`, `3pi/4`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let Some(idx) = t.find("pi") else {
        return parse_finite(&t).map_err(|_| format!("invalid angle '{s}'"));
    };
    let head = t[..idx].trim().trim_end_matches('*').trim();
    let tail = t[idx + 2..].trim();
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_finite(h).map_err(|_| format!("invalid angle '{s}'"))?,
    };
    let denom = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        None => return Err(format!("invalid angle '{s}'")),
        Some(d) => parse_finite(d.trim()).map_err(|_| format!("invalid angle '{s}'"))?,
    };
    if denom == 0.0 {
        return Err(format!("invalid angle '{s}': division by zero"));
    }
    Ok(coef * PI / denom)
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a finite number")),
    }
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    parse_finite(s.trim())
}

/// `re,im`; a bare number is taken as real.
pub fn parse_complex(s: &str) -> Result<ComplexPoint, String> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts.next().ok_or_else(|| format!("invalid complex value '{s}'"))?;
    let re = parse_finite(re).map_err(|_| format!("invalid complex value '{s}', expected re,im"))?;
    let im = match parts.next() {
        Some(p) => parse_finite(p).map_err(|_| format!("invalid complex value '{s}', expected re,im"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("invalid complex value '{s}', expected re,im"));
    }
    Ok(ComplexPoint::new(re, im))
}

/// Which state parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    AlphaMag,
    AlphaArg,
    Theta,
    Phi,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::AlphaMag => "alpha-mag",
            SweepVar::AlphaArg => "alpha-arg",
            SweepVar::Theta => "theta",
            SweepVar::Phi => "phi",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alpha-mag" | "r" | "abs-alpha" => Ok(SweepVar::AlphaMag),
            "alpha-arg" | "omega" => Ok(SweepVar::AlphaArg),
            "theta" => Ok(SweepVar::Theta),
            "phi" => Ok(SweepVar::Phi),
            _ => Err(format!("unknown sweep variable '{s}' (alpha-mag, alpha-arg, theta, phi)")),
        }
    }
}

/// Evenly spaced values `from..=to`, `steps ≥ 2` of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.to } else { self.from + k as f64 * h }).collect()
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.from, self.to, self.steps)
    }
}

fn parse_steps(s: &str) -> Result<usize, String> {
    let steps: usize = s.trim().parse().map_err(|_| format!("invalid step count '{s}'"))?;
    if steps < 2 {
        return Err(format!("a range needs at least 2 steps, got {steps}"));
    }
    Ok(steps)
}

/// `from:to:steps`; endpoints accept angle syntax.
pub fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [from, to, steps] = parts.as_slice() else {
        return Err(format!("invalid range '{s}', expected from:to:steps"));
    };
    Ok(Range { from: parse_angle(from)?, to: parse_angle(to)?, steps: parse_steps(steps)? })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub range: Range,
}

/// `variable:from:to:steps`.
pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let (var, rest) = s.split_once(':').ok_or_else(|| format!("invalid sweep '{s}', expected var:from:to:steps"))?;
    Ok(Sweep { var: var.trim().parse()?, range: parse_range(rest)? })
}

/// `x_min:x_max:p_min:p_max:nx[:np]`.
pub fn parse_grid(s: &str) -> Result<hcs_core::GridBounds, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 5 && parts.len() != 6 {
        return Err(format!("invalid grid '{s}', expected x_min:x_max:p_min:p_max:nx[:np]"));
    }
    let b: Vec<f64> = parts[..4].iter().map(|p| parse_real(p)).collect::<Result<_, _>>()?;
    let nx = parse_steps(parts[4])?;
    let np = match parts.get(5) {
        Some(p) => parse_steps(p)?,
        None => nx,
    };
    hcs_core::GridBounds::new(b[0], b[1], b[2], b[3], nx, np).map_err(|e| e.to_string())
}

//! `start:end:count` grids. Endpoints accept a `pi` factor, so `-pi/2`,
//! `2pi` and `0.25pi` are all valid. Points are `start + k·(end − start)/count`
//! for `k = 0..count`, leaving out the end point so that a full period is
//! sampled once.

use std::f64::consts::PI;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(format!("grid '{spec}' is not of the form start:end:count"));
    };
    let start = parse_value(start)?;
    let end = parse_value(end)?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("grid count '{count}' is not a positive integer"))?;
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    let step = (end - start) / count as f64;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// A number optionally carrying a `pi` factor and a `/divisor`.
pub fn parse_value(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || format!("cannot read '{text}' as a number");
    let (numerator, divisor) = match t.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let numerator = numerator.trim();
    let value = match numerator.strip_suffix("pi") {
        Some(coefficient) => {
            let coefficient = coefficient.trim().trim_end_matches('*');
            let factor = match coefficient {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            factor * PI
        }
        None => numerator.parse::<f64>().map_err(|_| bad())?,
    };
    let v = value / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

//! Axis values on the command line: a single number, a comma list, or an
//! inclusive `start:stop:steps` range.

use crate::CliError;

pub fn parse_axis(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("--{key} {text:?}: {why}"));
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty value"));
    }
    let number = |s: &str| -> Result<f64, CliError> {
        let v: f64 = s.trim().parse().map_err(|_| bad("not a number"))?;
        if v.is_nan() {
            return Err(bad("not a number"));
        }
        Ok(v)
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("ranges are start:stop:steps"));
        }
        let (start, stop) = (number(parts[0])?, number(parts[1])?);
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("steps must be a positive integer"))?;
        if steps == 0 {
            return Err(bad("steps must be at least 1"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad("range ends must be finite"));
        }
        if steps == 1 {
            return Ok(vec![start]);
        }
        let h = (stop - start) / (steps - 1) as f64;
        // Index-based so the last point is exactly `stop`.
        return Ok((0..steps)
            .map(|i| if i + 1 == steps { stop } else { start + h * i as f64 })
            .collect());
    }
    text.split(',').map(number).collect()
}

/// A single value; ranges and lists are rejected.
pub fn parse_scalar(key: &str, text: &str) -> Result<f64, CliError> {
    let values = parse_axis(key, text)?;
    match values.as_slice() {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!("--{key} takes a single value, got {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_both_ends() {
        let v = parse_axis("xi", "0.8:15:100").unwrap();
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 0.8);
        assert_eq!(v[99], 15.0);
        assert_eq!(parse_axis("xi", "2:9:1").unwrap(), vec![2.0]);
    }

    #[test]
    fn lists_and_scalars() {
        assert_eq!(parse_axis("xi", "0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_axis("window", "inf").unwrap(), vec![f64::INFINITY]);
        assert_eq!(parse_scalar("T", "0.99").unwrap(), 0.99);
        assert!(parse_scalar("T", "0.9,0.95").is_err());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1:2", "1:2:0", "a", "1:2:x", "nan", "0:inf:3"] {
            assert!(parse_axis("beta", bad).is_err(), "{bad}");
        }
    }
}

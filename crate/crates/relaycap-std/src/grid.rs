//! Grid syntax: `start:step:stop` (stop inclusive), a comma list, or one value.

use std::fmt;

pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed grid: {}", self.0)
    }
}

impl std::error::Error for GridError {}

fn number(s: &str) -> Result<f64, GridError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| GridError(format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(GridError(format!("'{s}' is not finite")));
    }
    Ok(v)
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>, GridError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(GridError("empty".into()));
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, h, b] = parts[..] else {
            return Err(GridError(format!("'{s}' needs start:step:stop")));
        };
        let (a, h, b) = (number(a)?, number(h)?, number(b)?);
        if h <= 0.0 || b < a {
            return Err(GridError(format!("'{s}' needs step > 0 and stop >= start")));
        }
        // tolerate round-off in (b - a)/h
        let n = ((b - a) / h * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
        if n > MAX_POINTS {
            return Err(GridError(format!(
                "'{s}' has more than {MAX_POINTS} points"
            )));
        }
        return Ok((0..n).map(|i| a + h * i as f64).collect());
    }
    let v = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    if v.len() > MAX_POINTS {
        return Err(GridError(format!("more than {MAX_POINTS} points")));
    }
    Ok(v)
}

/// A grid whose points must all be positive integers.
pub fn parse_int_grid(s: &str) -> Result<Vec<u32>, GridError> {
    parse_grid(s)?
        .into_iter()
        .map(|x| {
            if x >= 1.0 && x <= f64::from(u32::MAX) && x.fract() == 0.0 {
                Ok(x as u32)
            } else {
                Err(GridError(format!("{x} is not a positive integer")))
            }
        })
        .collect()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_stop() {
        assert_eq!(
            parse_grid("0:5:30").unwrap(),
            vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
        );
        assert_eq!(parse_grid("0:0.1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("2").unwrap(), vec![2.0]);
        assert_eq!(parse_grid(" 1, 2.5 ,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert_eq!(parse_int_grid("4:2:14").unwrap(), vec![4, 6, 8, 10, 12, 14]);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "", "a", "1:2", "0:0:5", "5:1:0", "1:2:3:4", "1,,2", "nan", "0:1e-9:1", "inf",
        ] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
        assert!(parse_int_grid("1.5").is_err());
        assert!(parse_int_grid("0").is_err());
    }

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
        assert!((linear_to_db(db_to_linear(7.3)) - 7.3).abs() < 1e-12);
    }
}

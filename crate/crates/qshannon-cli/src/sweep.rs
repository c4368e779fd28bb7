//! Parameter values on the command line are either a single number or an
//! inclusive `start:stop:steps` sweep; `--log` switches sweeps to geometric
//! spacing. `steps = 0` is the empty sweep (header-only output).

use crate::CliError;

pub fn parse_f64(s: &str, name: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name}: expected a number, got '{s}'")))
}

pub fn parse_u32(s: &str, name: &str) -> Result<u32, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name}: expected a non-negative integer, got '{s}'")))
}

pub fn parse_u64(s: &str, name: &str) -> Result<u64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name}: expected a non-negative integer, got '{s}'")))
}

pub fn parse_usize(s: &str, name: &str) -> Result<usize, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name}: expected a non-negative integer, got '{s}'")))
}

pub fn parse_bool(s: &str, name: &str) -> Result<bool, CliError> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::Usage(format!(
            "--{name}: expected true or false, got '{s}'"
        ))),
    }
}

pub fn parse_sweep(s: &str, name: &str, log: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => Ok(vec![parse_f64(s, name)?]),
        3 => {
            let start = parse_f64(parts[0], name)?;
            let stop = parse_f64(parts[1], name)?;
            let steps = parse_usize(parts[2], name)?;
            linspace(start, stop, steps, log, name)
        }
        _ => Err(CliError::Usage(format!(
            "--{name}: expected VALUE or START:STOP:STEPS, got '{s}'"
        ))),
    }
}

fn linspace(start: f64, stop: f64, steps: usize, log: bool, name: &str) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Ok(Vec::new());
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    if log {
        if !(start > 0.0 && stop > 0.0) {
            return Err(CliError::Usage(format!(
                "--{name}: --log sweeps need positive endpoints, got {start}:{stop}"
            )));
        }
        let (a, b) = (start.ln(), stop.ln());
        return Ok((0..steps)
            .map(|k| (a + (b - a) * k as f64 / (steps - 1) as f64).exp())
            .collect());
    }
    Ok((0..steps)
        .map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64)
        .collect())
}

/// Row-major cartesian product of two sweeps (first parameter outermost).
pub fn product2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push((x, y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and_swept_values() {
        assert_eq!(parse_sweep("2.5", "x", false).unwrap(), vec![2.5]);
        let v = parse_sweep("0:1.2:25", "x", false).unwrap();
        assert_eq!(v.len(), 25);
        assert_eq!(v[0], 0.0);
        assert!((v[24] - 1.2).abs() < 1e-15);
        assert!(parse_sweep("0:1:2:3", "x", false).is_err());
        assert!(parse_sweep("abc", "x", false).is_err());
    }

    #[test]
    fn empty_and_degenerate_sweeps() {
        assert!(parse_sweep("0:1:0", "x", false).unwrap().is_empty());
        assert_eq!(parse_sweep("3:9:1", "x", false).unwrap(), vec![3.0]);
    }

    #[test]
    fn log_spacing() {
        let v = parse_sweep("0.01:100:5", "x", true).unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 0.01).abs() < 1e-12);
        assert!((v[2] - 1.0).abs() < 1e-12);
        assert!((v[4] - 100.0).abs() < 1e-9);
        assert!(parse_sweep("0:1:5", "x", true).is_err());
    }

    #[test]
    fn cartesian_is_row_major() {
        let p = product2(&[1.0, 2.0], &[10.0, 20.0]);
        assert_eq!(p, vec![(1.0, 10.0), (1.0, 20.0), (2.0, 10.0), (2.0, 20.0)]);
    }
}

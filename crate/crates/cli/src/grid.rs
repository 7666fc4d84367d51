//! Numeric grid syntax: `1,2,5`, `lin:a:b:n` or `log:a:b:n`.

use crate::error::CliError;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("grid '{spec}': {why}"));
    let spec = spec.trim();
    if let Some((kind, rest)) = spec.split_once(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad("expected kind:start:stop:count"));
        };
        let a: f64 = a.trim().parse().map_err(|_| bad("start is not a number"))?;
        let b: f64 = b.trim().parse().map_err(|_| bad("stop is not a number"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("count is not an integer"))?;
        if n == 0 || !a.is_finite() || !b.is_finite() {
            return Err(bad("need a finite range and a positive count"));
        }
        let at = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        return match kind {
            "lin" => Ok((0..n).map(|i| a + (b - a) * at(i)).collect()),
            "log" => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(bad("log grids need positive endpoints"));
                }
                let (la, lb) = (a.ln(), b.ln());
                Ok((0..n)
                    .map(|i| match i {
                        0 => a,
                        _ if i == n - 1 => b,
                        _ => (la + (lb - la) * at(i)).exp(),
                    })
                    .collect())
            }
            _ => Err(bad("kind must be lin or log")),
        };
    }
    let values = spec
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad(&format!("'{v}' is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.iter().any(|v| v.is_nan()) {
        return Err(bad("NaN in grid"));
    }
    Ok(values)
}

pub fn parse_counts(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| CliError::Config(format!("'{v}' is not a positive integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_and_ranges() {
        assert_eq!(parse_grid("1, 2.5,inf").unwrap(), vec![1.0, 2.5, f64::INFINITY]);
        assert_eq!(parse_grid("lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid("log:0.01:100:5").unwrap();
        assert_eq!((g[0], g[4]), (0.01, 100.0));
        assert!((g[2] - 1.0).abs() < 1e-12);
        assert_eq!(parse_grid("log:2:9:1").unwrap(), vec![2.0]);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1,,2", "log:0:1:3", "lin:0:1", "cubic:0:1:2", "lin:0:1:0", "nan"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
        assert!(parse_counts("1,0").is_err());
        assert_eq!(parse_counts("1, 3").unwrap(), vec![1, 3]);
    }
}

//! Parsing of scalar, list and grid arguments.

use num_complex::Complex64;

/// Parses `0.5`, `-2e-3`, `0.1+0.2i`, `-0.3-1e-2i`, `2i`, `-i`.
pub fn parse_scalar(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| format!("invalid number '{s}'"))?;
        let im: f64 = im.parse().map_err(|_| format!("invalid number '{s}'"))?;
        return Ok(Complex64::new(re, im));
    }
    t.parse::<f64>()
        .map(|re| Complex64::new(re, 0.0))
        .map_err(|_| format!("invalid number '{s}'"))
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let v = s
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("invalid real number '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite number '{s}'"))
    }
}

pub fn parse_index(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("invalid nonnegative integer '{s}'"))
}

/// Comma-separated scalars; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<Complex64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_scalar).collect()
}

/// Expands a table axis: `a..b` (inclusive integers), `start:stop:count`
/// (evenly spaced reals, endpoints included) or a single value.
pub fn expand_axis(s: &str) -> Result<Vec<String>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a = parse_index(a)?;
        let b = parse_index(b)?;
        if b < a {
            return Err(format!("empty grid '{s}'"));
        }
        return Ok((a..=b).map(|v| v.to_string()).collect());
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start = parse_real(parts[0])?;
        let stop = parse_real(parts[1])?;
        let count = parse_index(parts[2])?;
        return match count {
            0 => Err(format!("empty grid '{s}'")),
            1 => Ok(vec![format!("{start:?}")]),
            _ => Ok((0..count)
                .map(|i| {
                    let v = start + (stop - start) * i as f64 / (count - 1) as f64;
                    format!("{v:?}")
                })
                .collect()),
        };
    }
    if parts.len() != 1 {
        return Err(format!("malformed grid '{s}', expected a..b or start:stop:count"));
    }
    Ok(vec![s.to_string()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_scalar("0.1+0.2i").unwrap(), Complex64::new(0.1, 0.2));
        assert_eq!(parse_scalar("-0.3-1e-2i").unwrap(), Complex64::new(-0.3, -0.01));
        assert_eq!(parse_scalar("1e-3+2e+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_scalar("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_scalar("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn axes() {
        assert_eq!(expand_axis("0..3").unwrap(), vec!["0", "1", "2", "3"]);
        assert_eq!(expand_axis("0:1:3").unwrap(), vec!["0.0", "0.5", "1.0"]);
        assert_eq!(expand_axis("0.25").unwrap(), vec!["0.25"]);
        assert!(expand_axis("0:1:0").is_err());
        assert!(expand_axis("3..1").is_err());
        assert!(expand_axis("1:2").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("").unwrap(), vec![]);
        assert_eq!(parse_list("0.5,0.25").unwrap().len(), 2);
    }
}

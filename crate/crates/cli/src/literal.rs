//! Complex literals of the form "a", "a+bi", "a-bi", "bi" (no spaces).

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("invalid complex literal {s:?}; expected a, a+bi or a-bi");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        v => v,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = im.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Inverse of [`parse_complex`], lossless for finite parts.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// "start:end" or a single value, for grid axes.
pub fn parse_range(s: &str) -> Result<(Complex64, Complex64), String> {
    match s.split_once(':') {
        Some((a, b)) => Ok((parse_complex(a)?, parse_complex(b)?)),
        None => {
            let v = parse_complex(s)?;
            Ok((v, v))
        }
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: Complex64, b: Complex64, n: usize) -> Vec<Complex64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * (k as f64 / (n - 1) as f64)).collect()
}

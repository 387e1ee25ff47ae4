//! Flag value parsers and the fixed text format for floats.

use cfcomm::BobAction;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_bob(s: &str) -> Result<BobAction, String> {
    s.parse::<BobAction>()
        .map_err(|_| format!("expected `block`, `pass` or `split:<beta radians>`, got `{s}`"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KValues(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct AngleValues(pub Vec<f64>);

/// `K` values: `n`, `a:b` or `a:b:step` (inclusive), or a comma list of those.
pub fn parse_k_values(s: &str) -> Result<KValues, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad integer `{t}`: {e}"));
        match fields.as_slice() {
            [n] => out.push(num(n)?),
            [a, b] | [a, b, _] => {
                let (a, b) = (num(a)?, num(b)?);
                let step = if fields.len() == 3 { num(fields[2])? } else { 1 };
                if step == 0 || b < a {
                    return Err(format!("empty or invalid range `{part}`"));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(format!("bad range `{part}`")),
        }
    }
    Ok(KValues(out))
}

/// Angles: `x`, or `a:b:step` (inclusive within 1e-9 of a step), or a comma list.
pub fn parse_f64_values(s: &str) -> Result<AngleValues, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("bad number `{t}`"))
        };
        match fields.as_slice() {
            [x] => out.push(num(x)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if step <= 0.0 || b < a {
                    return Err(format!("empty or invalid range `{part}`"));
                }
                let n = ((b - a) / step + 1e-9).floor() as usize + 1;
                out.extend((0..n).map(|i| a + i as f64 * step));
            }
            _ => return Err(format!("expected `x` or `start:end:step`, got `{part}`")),
        }
    }
    Ok(AngleValues(out))
}

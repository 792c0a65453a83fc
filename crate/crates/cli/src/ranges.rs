//! Length lists on the command line: `1..64`, `2^4..2^14`, `10^4`, `4,8,16`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeError(String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad length list {:?}: expected 1..64, 2^4..2^14, 10^4 or 4,8,16", self.0)
    }
}

impl std::error::Error for RangeError {}

/// A single term: plain integer or `base^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Term {
    value: usize,
    power: Option<(usize, u32)>,
}

fn term(text: &str) -> Option<Term> {
    let text = text.trim();
    match text.split_once('^') {
        Some((b, e)) => {
            let base: usize = b.trim().parse().ok()?;
            let exp: u32 = e.trim().parse().ok()?;
            Some(Term {
                value: base.checked_pow(exp)?,
                power: Some((base, exp)),
            })
        }
        None => Some(Term {
            value: text.parse().ok()?,
            power: None,
        }),
    }
}

/// Parses a list of lengths. `a^i..a^j` steps through the powers of `a`;
/// any other range steps by one. The result is strictly increasing.
pub fn parse_lengths(text: &str) -> Result<Vec<usize>, RangeError> {
    let err = || RangeError(text.to_string());
    let mut out = Vec::new();
    for part in text.split(',') {
        if let Some((lo, hi)) = part.split_once("..") {
            let (lo, hi) = (term(lo).ok_or_else(err)?, term(hi).ok_or_else(err)?);
            if lo.value > hi.value {
                return Err(err());
            }
            match (lo.power, hi.power) {
                (Some((b1, e1)), Some((b2, e2))) if b1 == b2 && b1 >= 2 => {
                    out.extend((e1..=e2).map(|e| b1.pow(e)));
                }
                _ => out.extend(lo.value..=hi.value),
            }
        } else {
            out.push(term(part).ok_or_else(err)?.value);
        }
    }
    if out.is_empty() || out.contains(&0) || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(err());
    }
    Ok(out)
}

/// A single length such as `10^4`.
pub fn parse_length(text: &str) -> Result<usize, RangeError> {
    match term(text) {
        Some(t) if t.value > 0 => Ok(t.value),
        _ => Err(RangeError(text.to_string())),
    }
}

/// `n,n'`
pub fn parse_pair(text: &str) -> Result<(u64, u64), String> {
    let bad = || format!("bad pair {text:?}: expected n,n'");
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

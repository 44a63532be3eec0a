//! The shell-safe complex literal grammar "RE±IMi": optional sign, decimal
//! mantissa, optional signed imaginary part ending in 'i'. No whitespace, no
//! exponents.

use crate::ball::BallComplex;
use crate::error::{Error, Result};

fn is_plain_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() {
        return false;
    }
    let mut dots = 0;
    for c in body.chars() {
        match c {
            '0'..='9' => {}
            '.' => dots += 1,
            _ => return false,
        }
    }
    dots <= 1 && body != "."
}

/// Split a literal into real and imaginary decimal strings.
pub fn split_complex(s: &str) -> Result<(String, String)> {
    let bad = || Error::UsageError(format!("invalid complex literal {s:?} (expected RE±IMi)"));
    if s.contains(char::is_whitespace) {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        // Separator: the last sign that is not the leading sign and not
        // immediately after '.'-free position 0.
        let idx = body
            .char_indices()
            .filter(|(i, c)| *i > 0 && (*c == '+' || *c == '-'))
            .map(|(i, _)| i)
            .next_back()
            .ok_or_else(bad)?;
        let (re, im) = (&body[..idx], &body[idx..]);
        if !is_plain_decimal(re) || !is_plain_decimal(im) {
            return Err(bad());
        }
        Ok((re.to_string(), im.to_string()))
    } else {
        if !is_plain_decimal(s) {
            return Err(bad());
        }
        Ok((s.to_string(), "0".to_string()))
    }
}

pub fn parse_complex(s: &str, prec: u32) -> Result<BallComplex> {
    let (re, im) = split_complex(s)?;
    BallComplex::parse(&re, &im, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_grammar() {
        for (s, re, im) in [
            ("0.4+17i", "0.4", "+17"),
            ("-2.5+5i", "-2.5", "+5"),
            ("3", "3", "0"),
            ("0.5-7i", "0.5", "-7"),
            ("-1-1i", "-1", "-1"),
        ] {
            let (r, i) = split_complex(s).unwrap();
            assert_eq!((r.as_str(), i.as_str()), (re, im));
        }
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "i", "5i", "1+2", "1 + 2i", "1e3", "2+3j", "1..2", "+-3"] {
            assert!(split_complex(s).is_err(), "{s:?} should be rejected");
        }
    }
}

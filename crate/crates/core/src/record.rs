//! Single-line `key=value` records and their reader.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Formats a real with 16 significant digits, trailing zeros trimmed.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..16).contains(&mag) {
        let decimals = (15 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        let s = format!("{x:.15e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Ordered `key=value` pairs. Values never contain whitespace or `=`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        let v: String = value.into();
        let v = if v.is_empty() {
            "-".to_string()
        } else {
            v.replace(char::is_whitespace, "_")
        };
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn push_real(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, fmt_real(value))
    }

    pub fn push_opt_real(&mut self, key: &str, value: Option<f64>) -> &mut Self {
        match value {
            Some(v) => self.push_real(key, v),
            None => self.push(key, "-"),
        }
    }

    pub fn extend(&mut self, other: &Record) -> &mut Self {
        self.fields.extend(other.fields.iter().cloned());
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_real(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn csv_header(&self) -> String {
        self.keys().collect::<Vec<_>>().join(",")
    }

    pub fn csv_row(&self) -> String {
        self.fields
            .iter()
            .map(|(_, v)| v.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut rec = Record::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("token `{tok}` is not key=value"),
            })?;
            if k.is_empty() {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("empty key in `{tok}`"),
                });
            }
            rec.fields.push((k.to_string(), v.to_string()));
        }
        Ok(rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_like_sixteen_digits() {
        assert_eq!(
            fmt_real(2.0 * std::f64::consts::PI.sqrt()),
            "3.544907701811032"
        );
        assert_eq!(fmt_real(0.75), "0.75");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-1.25e-9), "-1.25e-9");
        assert_eq!(fmt_real(0.0), "0");
    }

    #[test]
    fn record_round_trip() {
        let mut r = Record::new();
        r.push("kind", "ps")
            .push_real("s", 0.5)
            .push("note", "two words");
        let line = r.to_string();
        assert_eq!(line, "kind=ps s=0.5 note=two_words");
        let back: Record = line.parse().unwrap();
        assert_eq!(back, r);
        assert!("a=1 b".parse::<Record>().is_err());
    }

    proptest! {
        #[test]
        fn real_format_is_close(x in -1e300f64..1e300) {
            let y: f64 = fmt_real(x).parse().unwrap();
            prop_assert!((x - y).abs() <= 1e-15 * x.abs());
        }
    }
}

//! Locale-free rendering of numbers and tables.

use std::io::Write;

use crate::error::CliError;

const SIGNIFICANT: usize = 12;

/// Renders `x` with 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in `-5..12`, scientific otherwise, trailing zeros
/// dropped. Negative zero prints as `0`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific rendering has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to what [`num`] prints, for structured output.
pub fn rounded(x: f64) -> f64 {
    if x.is_finite() {
        num(x).parse().expect("rendered number parses")
    } else {
        x
    }
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// CSV sink with a header row and LF record terminators.
pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, header: &[&str]) -> Result<Self, CliError> {
        let mut inner = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, CliError> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| CliError::Io(e.into_error()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(-0.32192809488736235), "-0.321928094887");
        assert_eq!(num(123456789012.0), "123456789012");
        assert_eq!(num(1234567890123.0), "1.23456789012e12");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(0.000012345), "0.000012345");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(99999999999.99999), "100000000000");
    }

    #[test]
    fn rounding_round_trips() {
        for x in [0.2780719051126377, 1e-300, -7.5e22, 42.0] {
            assert_eq!(rounded(x), num(x).parse::<f64>().unwrap());
            assert_eq!(num(rounded(x)), num(x));
        }
    }

    #[test]
    fn table_uses_line_feeds() {
        let mut t = Table::new(Vec::new(), &["a", "b"]).unwrap();
        t.row([num(0.5), "x".into()]).unwrap();
        let bytes = t.finish().unwrap();
        assert_eq!(bytes, b"a,b\n0.5,x\n");
    }
}

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

const SIG_DIGITS: usize = 12;

/// C-style `%.12g`, except that negative zero prints as `0`.
pub fn fmt_g(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let x = x + 0.0;
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus rows, comma-separated, newline-terminated.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn num_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|&v| fmt_g(v)).collect()
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `contents` to `path`, or to `stdout` when no path is given.
pub fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            stdout.write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(-0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_g(2.0 * std::f64::consts::SQRT_2), "2.82842712475");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.5e-17), "1.5e-17");
        assert_eq!(fmt_g(0.0001234), "0.0001234");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_g(0.999999999999999), "1");
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], [num_row(&[1.0, 0.5]), num_row(&[-0.0, 1e-20])]);
        assert_eq!(s, "a,b\n1,0.5\n0,1e-20\n");
    }
}

use std::io;
use std::path::Path;

use crate::error::{usage, HarnessError, Result};

/// `value` with `digits` significant digits, in the style of C's `%g`:
/// trailing zeros dropped, scientific notation below `1e-4` or from
/// `10^digits` up.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `x,y` rows under an `x,y` header. Returns the number of data rows.
pub fn emit_csv(series: &[(usize, f64)], path: &Path) -> Result<usize> {
    if series.is_empty() {
        return usage(format!("{}: refusing to write an empty series", path.display()));
    }
    let fail = |e: ::csv::Error| HarnessError::io(path, io::Error::from(e));
    let mut writer = ::csv::Writer::from_path(path).map_err(fail)?;
    writer.write_record(["x", "y"]).map_err(fail)?;
    for &(x, y) in series {
        writer
            .write_record([x.to_string(), format_significant(y, 12)])
            .map_err(fail)?;
    }
    writer.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(series.len())
}

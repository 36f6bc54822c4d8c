//! Number formatting shared by the CSV, JSON and text outputs.

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest decimal rendering of `x` rounded to 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let magnitude = r.abs().log10();
    if (-5.0..15.0).contains(&magnitude) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// One CSV record (quoted where needed), without the trailing newline.
pub fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer
        .write_record(fields.iter().map(|f| f.as_ref()))
        .expect("writing to memory cannot fail");
    let bytes = writer.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes)
        .expect("fields are UTF-8")
        .trim_end()
        .to_string()
}

/// Rounds every float inside a JSON value to 12 significant digits.
pub fn rounded_json(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(num) if num.is_f64() => num
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(items) => Value::Array(items.into_iter().map(rounded_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, rounded_json(v))).collect())
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(fmt_sig(39.47841760435743), "39.4784176044");
        assert_eq!(fmt_sig(-2.0), "-2");
        assert_eq!(fmt_sig(1.23456789012345e-9), "1.23456789012e-9");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(
            csv_line(&["a", "clifford:2,1", "3"]),
            "a,\"clifford:2,1\",3"
        );
    }
}

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// What a command produced: the data for the output stream, whether the
/// results agree with the expected values, and a line for stderr.
pub struct Report {
    pub data: String,
    pub matches: bool,
    pub summary: Option<String>,
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn json_sorted<T: Serialize>(value: &T) -> Result<String, CliError> {
    // `Value` keeps objects in a BTreeMap, so the round trip sorts keys.
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Scalar rendering of a JSON value for a CSV cell or a text line.
/// Arrays of scalars are joined with `;`.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(";")
        }
        other => other.to_string(),
    }
}

/// One CSV row of the top-level fields of `value`, keys sorted.
pub fn csv_flat<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let Value::Object(map) = v else {
        return Err(CliError::Io("expected an object".into()));
    };
    let header: Vec<&str> = map.keys().map(String::as_str).collect();
    let row: Vec<String> = map.values().map(cell).collect();
    csv_table(&header, &[row])
}

/// `key: value` lines, keys sorted.
pub fn text_flat<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let Value::Object(map) = v else {
        return Err(CliError::Io("expected an object".into()));
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    Ok(map.iter().map(|(k, v)| format!("{k:width$}  {}\n", cell(v))).collect())
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Unsorted {
        zeta: u32,
        alpha: Vec<u32>,
    }

    #[test]
    fn keys_are_sorted() {
        let s = json_sorted(&Unsorted { zeta: 1, alpha: vec![2, 3] }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert_eq!(csv_flat(&Unsorted { zeta: 1, alpha: vec![2, 3] }).unwrap(), "alpha,zeta\n2;3,1\n");
    }
}

//! Labeled-matrix CSV files and number formatting shared by every emitter.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How reals are rendered in emitted tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumFormat {
    /// Six significant digits, `%g` style. Used for human-facing reports.
    Sig6,
    /// Shortest representation that parses back to the same value. Used for
    /// model files that are read again.
    RoundTrip,
}

impl NumFormat {
    pub fn fmt<T: Scalar>(self, x: T) -> String {
        match self {
            NumFormat::Sig6 => fmt_sig(x.as_f64(), 6),
            NumFormat::RoundTrip => format!("{x:?}"),
        }
    }
}

/// Formats `x` with `digits` significant digits the way C's `%.{digits}g` does.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A matrix with labels on both axes, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix<T> {
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Array2<T>,
}

impl<T: Scalar> LabeledMatrix<T> {
    pub fn to_csv_string(&self, format: NumFormat) -> Result<String> {
        render_labeled_csv(
            &self.corner,
            &self.row_labels,
            &self.col_labels,
            &self.values,
            format,
        )
    }

    pub fn write(&self, path: &Path, format: NumFormat) -> Result<()> {
        write_string(path, &self.to_csv_string(format)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|msg| Error::Format {
            path: path.to_path_buf(),
            msg,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut rows = rdr.records();
        let header = match rows.next() {
            Some(h) => h.map_err(|e| e.to_string())?,
            None => return Err("empty file".into()),
        };
        let corner = header.get(0).unwrap_or("").to_string();
        let col_labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut row_labels = Vec::new();
        let mut flat = Vec::new();
        for (idx, rec) in rows.enumerate() {
            let rec = rec.map_err(|e| e.to_string())?;
            if rec.len() != col_labels.len() + 1 {
                return Err(format!(
                    "line {}: expected {} fields, found {}",
                    idx + 2,
                    col_labels.len() + 1,
                    rec.len()
                ));
            }
            row_labels.push(rec[0].to_string());
            for cell in rec.iter().skip(1) {
                let v: f64 = cell
                    .trim()
                    .parse()
                    .map_err(|_| format!("line {}: `{cell}` is not a number", idx + 2))?;
                flat.push(T::lit(v));
            }
        }
        let values = Array2::from_shape_vec((row_labels.len(), col_labels.len()), flat)
            .map_err(|e| e.to_string())?;
        Ok(LabeledMatrix {
            corner,
            row_labels,
            col_labels,
            values,
        })
    }
}

pub fn render_labeled_csv<T: Scalar>(
    corner: &str,
    row_labels: &[String],
    col_labels: &[String],
    values: &Array2<T>,
    format: NumFormat,
) -> Result<String> {
    if values.dim() != (row_labels.len(), col_labels.len()) {
        return Err(Error::shape(format!(
            "matrix is {:?} but labels are {}x{}",
            values.dim(),
            row_labels.len(),
            col_labels.len()
        )));
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec![corner.to_string()];
    header.extend(col_labels.iter().cloned());
    wtr.write_record(&header)?;
    for (label, row) in row_labels.iter().zip(values.rows()) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|&v| format.fmt(v)));
        wtr.write_record(&rec)?;
    }
    finish(wtr)
}

/// Renders plain string rows as CSV.
pub fn render_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)?;
    for r in rows {
        wtr.write_record(r)?;
    }
    finish(wtr)
}

fn finish(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::io("<buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Reads a `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_key_values(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_key_values(&text).map_err(|msg| Error::Format {
        path: path.to_path_buf(),
        msg,
    })
}

pub fn parse_key_values(text: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", idx + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn render_key_values(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(k);
        s.push('=');
        s.push_str(v);
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn sig6_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.1875, "0.1875"),
            (1.0 / 3.0, "0.333333"),
            (2.0 / 3.0, "0.666667"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.000012345678, "1.23457e-05"),
            (0.0001, "0.0001"),
            (-0.75, "-0.75"),
            (999999.5, "1e+06"),
            (0.98795180722891562, "0.987952"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_sig(x, 6), want, "formatting {x}");
        }
    }

    #[test]
    fn labeled_matrix_round_trip() {
        let m = LabeledMatrix {
            corner: "P".to_string(),
            row_labels: vec!["1".into(), "a,b".into()],
            col_labels: vec!["k1".into(), "k2".into()],
            values: array![[0.1f64, 1.0 / 3.0], [-2.5e-9, 7.0]],
        };
        let text = m.to_csv_string(NumFormat::RoundTrip).unwrap();
        let back = LabeledMatrix::<f64>::parse(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn key_values_skip_comments() {
        let kv = parse_key_values("# c\nhidden = 8,16\n\nlr=0.01\n").unwrap();
        assert_eq!(
            kv,
            vec![
                ("hidden".to_string(), "8,16".to_string()),
                ("lr".to_string(), "0.01".to_string())
            ]
        );
        assert!(parse_key_values("oops").is_err());
    }
}

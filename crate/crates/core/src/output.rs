//! Plot-ready tables and the metadata record that heads every output.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::rng::GENERATOR;

pub const TOOL_VERSION: &str = concat!("swn ", env!("CARGO_PKG_VERSION"));

/// Float with 17 significant digits, so every value survives a round trip.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub generator: String,
    /// Full resolved configuration; feeding it back through `--config`
    /// reproduces the output.
    pub config: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        Metadata {
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            generator: GENERATOR.to_string(),
            config,
        }
    }
}

/// Named numeric columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Comma separated, `.` decimal point, LF line endings.
    pub fn write_csv<W: Write>(&self, mut w: W, meta: Option<&Metadata>) -> Result<()> {
        if let Some(meta) = meta {
            write_csv_metadata(&mut w, meta)?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// `#`-prefixed comment lines: version, command, seed, generator, config.
pub fn write_csv_metadata<W: Write>(w: &mut W, meta: &Metadata) -> Result<()> {
    writeln!(w, "# version: {}", meta.version)?;
    writeln!(w, "# command: {}", meta.command)?;
    match meta.seed {
        Some(s) => writeln!(w, "# seed: {s}")?,
        None => writeln!(w, "# seed: none")?,
    }
    writeln!(w, "# generator: {}", meta.generator)?;
    writeln!(w, "# config: {}", serde_json::to_string(&meta.config)?)?;
    Ok(())
}

/// JSON object whose first key is `meta`, followed by the fields of `body`.
pub fn write_json<W: Write, T: Serialize>(mut w: W, meta: &Metadata, body: &T) -> Result<()> {
    let mut obj = serde_json::Map::new();
    obj.insert("meta".into(), serde_json::to_value(meta)?);
    match serde_json::to_value(body)? {
        serde_json::Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("result".into(), other);
        }
    }
    serde_json::to_writer_pretty(&mut w, &serde_json::Value::Object(obj))?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![1.0, 2.0]);
        let meta = Metadata::new("x", Some(3), serde_json::json!({"k": 1}));
        let mut buf = Vec::new();
        t.write_csv(&mut buf, Some(&meta)).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# version: swn "));
        assert!(s.contains("# seed: 3\n"));
        assert!(s.ends_with("a,b\n1.0000000000000000e0,2.0000000000000000e0\n"));
        assert!(!s.contains('\r'));
    }
}

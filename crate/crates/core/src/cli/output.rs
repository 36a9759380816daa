//! Tabular output. CSV uses a header row, commas and LF endings; JSON is an
//! array of objects with one key per column.

use std::io::{self, Write};

use super::config::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Shortest round-trip decimal; scientific outside `[1e-4, 1e15)`.
fn csv_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// 17 significant digits.
fn json_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Float(x) => csv_float(*x),
                    Cell::Int(n) => n.to_string(),
                    Cell::Text(s) => csv_field(s),
                    Cell::Bool(b) => b.to_string(),
                })
                .collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "[")?;
        for (k, row) in self.rows.iter().enumerate() {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(name, c)| {
                    let value = match c {
                        Cell::Float(x) => json_float(*x),
                        Cell::Int(n) => n.to_string(),
                        Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
                        Cell::Bool(b) => b.to_string(),
                    };
                    format!("{}: {value}", serde_json::to_string(name).expect("string serializes"))
                })
                .collect();
            let sep = if k + 1 == self.rows.len() { "" } else { "," };
            writeln!(out, "  {{{}}}{sep}", fields.join(", "))?;
        }
        writeln!(out, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["mF", "x_rad_s", "ok"]);
        t.push(vec!["-7/2".into(), 0.1.into(), true.into()]);
        t.push(vec!["a,b".into(), 2.5e-9.into(), Cell::Int(3)]);
        t
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mF,x_rad_s,ok\n-7/2,0.1,true\n\"a,b\",2.5e-9,3\n");
    }

    #[test]
    fn json_round_trips() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["mF"], "-7/2");
        // serde_json's default parser is not correctly rounded
        assert!((v[0]["x_rad_s"].as_f64().unwrap() - 0.1).abs() < 1e-16);
        assert!((v[1]["x_rad_s"].as_f64().unwrap() - 2.5e-9).abs() < 1e-24);
        assert_eq!(v[1]["ok"], 3);
        let x = std::f64::consts::PI / 7.0;
        assert_eq!(json_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_floats_round_trip() {
        for x in [0.0, -0.0, 1.0 / 3.0, 6.02e23, -1.5e-300, 1e-4, 123456.789] {
            assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        }
    }
}

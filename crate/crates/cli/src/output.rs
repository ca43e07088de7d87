//! Fixed number formatting and the CSV / JSON writers.

use serde_json::{Map, Value};

use crate::CliError;

/// Significant digits in every emitted number.
pub const DIGITS: usize = 15;

/// `printf("%.15g")`: 15 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 ≤ |x| < 1e15`. Negative zero prints as `0`.
pub fn fmt_g(x: f64) -> Result<String, CliError> {
    if !x.is_finite() {
        return Err(CliError::Numerical(format!("non-finite value {x} in output")));
    }
    if x == 0.0 {
        return Ok("0".into());
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        Ok(format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs()))
    } else {
        let decimals = (DIGITS as i32 - 1 - exp) as usize;
        Ok(trim_zeros(&format!("{:.*}", decimals, x)).to_string())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A finite number as JSON.
pub fn num(x: f64) -> Result<Value, CliError> {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| CliError::Numerical(format!("non-finite value {x} in output")))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> Result<String, CliError> {
        Ok(match self {
            Cell::Num(x) => fmt_g(*x)?,
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        })
    }

    fn json(&self) -> Result<Value, CliError> {
        Ok(match self {
            Cell::Num(x) => num(*x)?,
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        })
    }
}

/// Rows under a fixed header, with `#` metadata lines for CSV.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { comments: Vec::new(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// LF-terminated CSV.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Result<Vec<String>, CliError> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells?.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Rows as an array of objects keyed by the header.
    pub fn to_json_rows(&self) -> Result<Value, CliError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut obj = Map::new();
            for (k, v) in self.header.iter().zip(row) {
                obj.insert((*k).to_string(), v.json()?);
            }
            rows.push(Value::Object(obj));
        }
        Ok(Value::Array(rows))
    }
}

/// Everything one command emits.
#[derive(Debug, Clone)]
pub struct Document {
    pub config: Value,
    pub table: Table,
    /// JSON `data`; the table rows when `None`.
    pub data: Option<Value>,
    pub checks: Value,
}

impl Document {
    pub fn render(&self, format: crate::args::Format) -> Result<String, CliError> {
        match format {
            crate::args::Format::Csv => self.table.to_csv(),
            crate::args::Format::Json => {
                let data = match &self.data {
                    Some(d) => d.clone(),
                    None => self.table.to_json_rows()?,
                };
                let mut top = Map::new();
                top.insert("config".into(), self.config.clone());
                top.insert("data".into(), data);
                top.insert("checks".into(), self.checks.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(top))
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_g_style() {
        let cases = [
            (1.5, "1.5"),
            (3.0 - 3.0f64.sqrt(), "1.26794919243112"),
            (1.0e-5, "1e-05"),
            (0.0001, "0.0001"),
            (123456789012345.0, "123456789012345"),
            (1.0e15, "1e+15"),
            (-2.5e-7, "-2.5e-07"),
            (-0.0, "0"),
            (std::f64::consts::PI, "3.14159265358979"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x).unwrap(), want, "{x}");
        }
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(fmt_g(9.9999999999999999e-5).unwrap(), "0.0001");
        assert_eq!(fmt_g(999999999999999.9).unwrap(), "1e+15");
    }

    #[test]
    fn non_finite_is_an_error() {
        assert!(fmt_g(f64::NAN).is_err());
        assert!(num(f64::INFINITY).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.comment("note");
        t.push(vec![Cell::Int(1), Cell::Num(0.25)]);
        assert_eq!(t.to_csv().unwrap(), "# note\na,b\n1,0.25\n");
    }
}

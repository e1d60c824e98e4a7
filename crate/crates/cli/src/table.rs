use std::io::Write;

use serde_json::{Map, Value};
use statatom::format::{fmt_sig, round_sig, SIGNIFICANT_DIGITS};

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v, SIGNIFICANT_DIGITS),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(round_sig(*v, SIGNIFICANT_DIGITS)),
            Cell::Num(v) => Value::from(fmt_sig(*v, SIGNIFICANT_DIGITS)),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// A command's output: descriptive comments, scalar metadata and a record table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(comment: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            comments: vec![comment.into()],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// `# comment` lines, one `# key=value,...` line, the column header, then rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        if !self.meta.is_empty() {
            let kv: Vec<String> = self.meta.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
            writeln!(w, "# {}", kv.join(","))?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// `{"comment": [...], "meta": {...}, "records": [{column: value}, ...]}`.
    pub fn write_json<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.json());
        }
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut root = Map::new();
        root.insert("comment".into(), Value::from(self.comments.clone()));
        root.insert("meta".into(), Value::Object(meta));
        root.insert("records".into(), Value::Array(records));
        serde_json::to_writer_pretty(&mut *w, &Value::Object(root))?;
        writeln!(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("test table", &["Z", "value"]);
        t.meta("B", 1.588071022611375);
        t.push(vec![Cell::from(3u32), Cell::from(0.1 + 0.2)]);
        t
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        sample().write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# test table\n# B=1.588071023\nZ,value\n3,0.3\n");
    }

    #[test]
    fn json_layout() {
        let mut out = Vec::new();
        sample().write_json(&mut out).unwrap();
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["meta"]["B"], Value::from(1.588071023));
        assert_eq!(v["records"][0]["value"], Value::from(0.3));
        assert_eq!(v["records"][0]["Z"], Value::from(3));
    }
}

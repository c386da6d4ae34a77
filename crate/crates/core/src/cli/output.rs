use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) => Value::from(*x),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Result of one command: a table, metadata and an overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub metadata: Map<String, Value>,
    pub table: Table,
    pub pass: bool,
    /// Exit status when the checks fail (1 for numerical checks).
    pub failure_code: i32,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            self.failure_code
        }
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(&self.table.columns)
            .expect("in-memory write");
        for row in &self.table.rows {
            writer
                .write_record(row.iter().map(Cell::csv))
                .expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command));
        doc.insert("metadata".into(), Value::Object(self.metadata.clone()));
        doc.insert(
            "columns".into(),
            Value::from(
                self.table
                    .columns
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>(),
            ),
        );
        doc.insert("rows".into(), Value::from(rows));
        doc.insert("pass".into(), Value::from(self.pass));
        doc.insert("exit_code".into(), Value::from(self.exit_code()));
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        text.push('\n');
        text
    }
}

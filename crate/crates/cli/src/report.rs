//! One report model, three renderers.
//!
//! Machine formats (JSON, CSV) print floats with 17 significant digits;
//! `text` uses 6. Non-finite floats become `null` in JSON and `inf`/`nan`
//! elsewhere.

use std::fmt::Write as _;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Null,
    Obj(Vec<(String, Value)>),
    List(Vec<Value>),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Builder for ordered objects.
#[derive(Debug, Default, Clone)]
pub struct Obj(Vec<(String, Value)>);

impl Obj {
    pub fn new() -> Self {
        Obj(Vec::new())
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Self {
        Value::Obj(o.0)
    }
}

/// Rows rendered as a CSV table; each row has one value per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub body: Vec<(String, Value)>,
    pub table: Option<Table>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Report {
    pub fn new(command: &'static str, body: Obj) -> Self {
        Report {
            command,
            body: body.0,
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    fn root(&self) -> Value {
        let mut fields = vec![
            ("schema".to_string(), Value::Int(SCHEMA_VERSION)),
            ("command".to_string(), Value::Str(self.command.to_string())),
        ];
        fields.extend(self.body.iter().cloned());
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    Value::Obj(
                        t.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.clone()))
                            .collect(),
                    )
                })
                .collect();
            fields.push(("rows".to_string(), Value::List(rows)));
        }
        Value::Obj(fields)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_json(&mut out, &self.root(), 0);
        out.push('\n');
        out
    }

    /// Tables render as-is; other reports as `key,value` rows with dotted keys.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.table {
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|v| csv_cell(&scalar(v, 17))).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            return out;
        }
        out.push_str("key,value\n");
        for (k, v) in flatten(&self.root()) {
            let _ = writeln!(out, "{},{}", csv_cell(&k), csv_cell(&scalar(&v, 17)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut root = self.root();
        if let Value::Obj(fields) = &mut root {
            fields.retain(|(k, _)| k != "rows");
        }
        for (k, v) in flatten(&root) {
            let _ = writeln!(out, "{k}: {}", scalar(&v, 6));
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = std::iter::once(t.columns.iter().map(|c| c.to_string()).collect())
                .chain(t.rows.iter().map(|r| r.iter().map(|v| scalar(v, 6)).collect()))
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).max().unwrap_or(0))
                .collect();
            for row in cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
        out
    }
}

fn flatten(v: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    flatten_into(v, String::new(), &mut out);
    out
}

fn flatten_into(v: &Value, prefix: String, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Obj(fields) => {
            for (k, child) in fields {
                flatten_into(child, join(k), out);
            }
        }
        Value::List(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten_into(child, join(&i.to_string()), out);
            }
        }
        leaf => out.push((prefix, leaf.clone())),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar(v: &Value, digits: usize) -> String {
    match v {
        Value::Num(x) => fmt_float(*x, digits),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => s.clone(),
        Value::Null => String::new(),
        Value::Obj(_) | Value::List(_) => unreachable!("flattened before rendering"),
    }
}

/// Scientific notation with `digits` significant digits; `text` output
/// (6 digits) drops trailing zeros and uses plain notation for moderate
/// exponents.
pub fn fmt_float(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if digits >= 17 {
        return format!("{:.*e}", digits - 1, x);
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Num(x) if x.is_finite() => out.push_str(&fmt_float(*x, 17)),
        Value::Num(_) | Value::Null => out.push_str("null"),
        Value::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Str(s) => write_json_string(out, s),
        Value::Obj(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, child)) in fields.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json_string(out, k);
                out.push_str(": ");
                write_json(out, child, indent + 1);
                if i + 1 < fields.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::List(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, child) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(out, child, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

use std::fmt::Write as _;

use lagmark::numeric::rational::{format_rational, to_f64};
use lagmark::{BoundedValue, ExactRational, Quad};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One reported number with its provenance.
#[derive(Clone, Debug)]
pub struct Reported {
    pub name: String,
    pub provenance: &'static str,
    pub value: String,
    pub approx: Option<f64>,
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub width: Option<f64>,
}

impl Reported {
    pub fn exact_quad(name: &str, x: &Quad) -> Self {
        Reported {
            name: name.into(),
            provenance: "exact",
            value: x.to_string(),
            approx: Some(x.to_f64()),
            lo: None,
            hi: None,
            width: None,
        }
    }

    pub fn exact_rational(name: &str, x: &ExactRational) -> Self {
        Reported {
            name: name.into(),
            provenance: "exact",
            value: format_rational(x),
            approx: Some(to_f64(x)),
            lo: None,
            hi: None,
            width: None,
        }
    }

    pub fn exact_int(name: &str, x: impl ToString) -> Self {
        let value = x.to_string();
        Reported {
            name: name.into(),
            provenance: "exact",
            approx: value.parse().ok(),
            value,
            lo: None,
            hi: None,
            width: None,
        }
    }

    pub fn exact_text(name: &str, x: impl ToString) -> Self {
        Reported {
            name: name.into(),
            provenance: "exact",
            value: x.to_string(),
            approx: None,
            lo: None,
            hi: None,
            width: None,
        }
    }

    pub fn enclosure(name: &str, x: &BoundedValue) -> Self {
        Reported {
            name: name.into(),
            provenance: "enclosure",
            value: x.to_string(),
            approx: Some(x.mid_f64()),
            lo: Some(format_rational(x.lo())),
            hi: Some(format_rational(x.hi())),
            width: Some(x.width_f64()),
        }
    }

    /// A rigorous floating-point interval (computed with outward margins).
    pub fn float_bracket(name: &str, lo: f64, hi: f64) -> Self {
        Reported {
            name: name.into(),
            provenance: "enclosure",
            value: format!("[{lo:.12}, {hi:.12}]"),
            approx: Some(0.5 * (lo + hi)),
            lo: Some(format!("{lo:e}")),
            hi: Some(format!("{hi:e}")),
            width: Some(hi - lo),
        }
    }

    pub fn empirical(name: &str, x: f64) -> Self {
        Reported {
            name: name.into(),
            provenance: "empirical",
            value: format!("{x}"),
            approx: Some(x),
            lo: None,
            hi: None,
            width: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("provenance".into(), json!(self.provenance));
        m.insert("value".into(), json!(self.value));
        if let Some(a) = self.approx {
            m.insert("approx".into(), json!(a));
        }
        if let Some(lo) = &self.lo {
            m.insert("lo".into(), json!(lo));
        }
        if let Some(hi) = &self.hi {
            m.insert("hi".into(), json!(hi));
        }
        if let Some(w) = self.width {
            m.insert("width".into(), json!(w));
        }
        Value::Object(m)
    }
}

/// A table of plain cells, one row per record.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<Reported>,
    pub table: Option<Table>,
    pub seconds: f64,
    pub budget_exhausted: bool,
    pub notes: Vec<String>,
}

impl Envelope {
    pub fn new(command: &str) -> Self {
        Envelope {
            command: command.into(),
            inputs: Vec::new(),
            values: Vec::new(),
            table: None,
            seconds: 0.0,
            budget_exhausted: false,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.push((name.into(), value.to_string()));
        self
    }

    pub fn value(&mut self, v: Reported) -> &mut Self {
        self.values.push(v);
        self
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), Value::Object(inputs));
        m.insert("values".into(), Value::Array(self.values.iter().map(Reported::to_json).collect()));
        if let Some(t) = &self.table {
            m.insert("table".into(), json!({ "columns": t.columns, "rows": t.rows }));
        }
        m.insert("seconds".into(), json!(self.seconds));
        m.insert("budget_exhausted".into(), json!(self.budget_exhausted));
        if !self.notes.is_empty() {
            m.insert("notes".into(), json!(self.notes));
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("envelope serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(t) => {
                let _ = writeln!(out, "{}", csv_line(&t.columns));
                for row in &t.rows {
                    let _ = writeln!(out, "{}", csv_line(row));
                }
            }
            None => {
                let _ = writeln!(out, "name,provenance,value,lo,hi,width");
                for v in &self.values {
                    let cells = vec![
                        v.name.clone(),
                        v.provenance.to_string(),
                        v.value.clone(),
                        v.lo.clone().unwrap_or_default(),
                        v.hi.clone().unwrap_or_default(),
                        v.width.map(|w| format!("{w:e}")).unwrap_or_default(),
                    ];
                    let _ = writeln!(out, "{}", csv_line(&cells));
                }
            }
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for v in &self.values {
            let _ = writeln!(out, "{} = {} [{}]", v.name, v.value, v.provenance);
        }
        if let Some(t) = &self.table {
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for row in &t.rows {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if self.budget_exhausted {
            let _ = writeln!(out, "budget exhausted");
        }
        let _ = writeln!(out, "({:.3} s)", self.seconds);
        out
    }
}

fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_line(&["a,b".into(), "c".into()]), "\"a,b\",c");
    }

    #[test]
    fn json_has_provenance() {
        let mut e = Envelope::new("x");
        e.value(Reported::empirical("d", 0.5));
        let v = e.to_json();
        assert_eq!(v["values"][0]["provenance"], "empirical");
        assert_eq!(v["budget_exhausted"], false);
    }
}

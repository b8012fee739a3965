//! Long-format tables, manifests and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::settings::Settings;
use crate::{CliError, Format};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) if v.is_nan() => "NaN".into(),
            Value::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Value::Num(v) => format!("{v:.16e}"),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => csv_field(s),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            // JSON has no NaN or infinity; those become null.
            Value::Num(v) => serde_json::Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Value::Int(i) => json!(i),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A value left the linear floating-point range; log-scale columns are
    /// still meaningful.
    Underflow,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Underflow => "underflow",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub values: Vec<Value>,
    pub status: Status,
    pub note: String,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    /// How many leading columns are inputs.
    pub inputs: usize,
    pub rows: Vec<Row>,
}

pub struct StatusCounts {
    pub ok: usize,
    pub underflow: usize,
    pub error: usize,
}

impl Table {
    pub fn status_counts(&self) -> StatusCounts {
        let count = |s| self.rows.iter().filter(|r| r.status == s).count();
        StatusCounts {
            ok: count(Status::Ok),
            underflow: count(Status::Underflow),
            error: count(Status::Error),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| csv_field(c)).collect();
        let _ = writeln!(out, "{},status,note", header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.values.iter().map(Value::csv).collect();
            let _ = writeln!(out, "{},{},{}", cells.join(","), row.status.as_str(), csv_field(&row.note));
        }
        out
    }

    fn rows_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (c, v) in self.columns.iter().zip(&row.values) {
                        obj.insert(c.clone(), v.json());
                    }
                    obj.insert("status".into(), json!(row.status.as_str()));
                    obj.insert("note".into(), json!(row.note));
                    Json::Object(obj)
                })
                .collect(),
        )
    }
}

pub struct Run<'a> {
    pub experiment: &'static str,
    pub settings: &'a Settings,
    pub table: &'a Table,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
}

impl Run<'_> {
    pub fn manifest(&self) -> Json {
        let counts = self.table.status_counts();
        let config: Map<String, Json> = self
            .settings
            .values
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "tool": "catamp",
            "version": env!("CARGO_PKG_VERSION"),
            "experiment": self.experiment,
            "config": config,
            "columns": self.table.columns,
            "input_columns": self.table.inputs,
            "rows": self.table.rows.len(),
            "status_counts": {
                "ok": counts.ok,
                "underflow": counts.underflow,
                "error": counts.error,
            },
            "row_status": self.table.rows.iter().map(|r| r.status.as_str()).collect::<Vec<_>>(),
            "started_unix": self.started_unix,
            "wall_clock_seconds": self.wall_clock_seconds,
        })
    }

    fn json_document(&self) -> String {
        let doc = json!({
            "manifest": self.manifest(),
            "rows": self.table.rows_json(),
        });
        serde_json::to_string_pretty(&doc).expect("JSON values are finite or null") + "\n"
    }

    /// A gnuplot script plotting the first output against the inputs.
    fn plot_script(&self, data: &str) -> String {
        let t = self.table;
        let first_out = t.inputs + 1;
        let title = t.columns.get(t.inputs).cloned().unwrap_or_default();
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set key autotitle columnhead");
        let _ = writeln!(s, "set xlabel '{}'", t.columns.first().cloned().unwrap_or_default());
        if t.inputs >= 2 {
            let _ = writeln!(s, "set ylabel '{}'", t.columns[1]);
            let _ = writeln!(s, "set zlabel '{title}'");
            let _ = writeln!(s, "splot '{data}' using 1:2:{first_out} with points palette");
        } else {
            let _ = writeln!(s, "set ylabel '{title}'");
            let _ = writeln!(s, "plot '{data}' using 1:{first_out} with linespoints");
        }
        s
    }
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn emit(run: &Run) -> Result<(), CliError> {
    let data = match run.settings.format {
        Format::Csv => run.table.to_csv(),
        Format::Json => run.json_document(),
    };
    let Some(out) = &run.settings.out else {
        std::io::stdout()
            .write_all(data.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        return Ok(());
    };
    let path = Path::new(out);
    write_atomic(path, &data)?;
    if run.settings.format == Format::Csv {
        let manifest = serde_json::to_string_pretty(&run.manifest()).expect("finite manifest") + "\n";
        write_atomic(Path::new(&format!("{out}.manifest.json")), &manifest)?;
    }
    if run.settings.plot {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        write_atomic(Path::new(&format!("{out}.gp")), &run.plot_script(&name))?;
    }
    Ok(())
}

//! Pose files: headered CSV or a JSON array of objects with the same field names.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use posekit::refinement::nearest_rotation_svd;
use posekit::{euler_to_rotation, EulerAngles, Matrix3, Quaternion, RotationMatrix, Vector3};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Euler,
    Quat,
    Matrix,
    Vectors,
}

impl Repr {
    pub const ALL: [Repr; 4] = [Repr::Euler, Repr::Quat, Repr::Matrix, Repr::Vectors];

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Repr::Euler => &["roll", "yaw", "pitch"],
            Repr::Quat => &["w", "x", "y", "z"],
            Repr::Matrix => &["m11", "m12", "m13", "m21", "m22", "m23", "m31", "m32", "m33"],
            Repr::Vectors => &[
                "left_x", "left_y", "left_z", "down_x", "down_y", "down_z", "front_x", "front_y", "front_z",
            ],
        }
    }

    fn detect<'a>(fields: impl Iterator<Item = &'a str> + Clone) -> Option<Repr> {
        Repr::ALL
            .into_iter()
            .find(|r| r.columns().iter().all(|c| fields.clone().any(|f| f == *c)))
    }
}

impl fmt::Display for Repr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Repr::Euler => "euler",
            Repr::Quat => "quat",
            Repr::Matrix => "matrix",
            Repr::Vectors => "vectors",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseRecord {
    pub id: String,
    pub repr: Repr,
    pub values: Vec<f64>,
}

impl PoseRecord {
    pub fn euler(&self) -> Option<EulerAngles> {
        (self.repr == Repr::Euler).then(|| EulerAngles::new(self.values[0], self.values[1], self.values[2]))
    }

    /// The nine values as a matrix; vectors are its columns.
    fn matrix(&self) -> Matrix3 {
        let v = &self.values;
        match self.repr {
            Repr::Vectors => Matrix3::from_columns([
                Vector3::new(v[0], v[1], v[2]),
                Vector3::new(v[3], v[4], v[5]),
                Vector3::new(v[6], v[7], v[8]),
            ]),
            _ => Matrix3::from_row_major(v[..9].try_into().unwrap()),
        }
    }

    /// Raw 3x3 payload for `matrix` and `vectors` records.
    pub fn raw_matrix(&self) -> Option<Matrix3> {
        matches!(self.repr, Repr::Matrix | Repr::Vectors).then(|| self.matrix())
    }

    /// Rotation described by the record. Quaternions and matrices within `tol`
    /// of the constraint are renormalized / projected before use.
    pub fn to_rotation(&self, tol: f64) -> Result<RotationMatrix, String> {
        let v = &self.values;
        match self.repr {
            Repr::Euler => euler_to_rotation(&self.euler().unwrap()).map_err(|e| e.to_string()),
            Repr::Quat => {
                let q = Quaternion::new(v[0], v[1], v[2], v[3]);
                let norm = q.norm();
                if !norm.is_finite() || (norm - 1.0).abs() > tol {
                    return Err(format!("quaternion norm is {norm:.6}, not within {tol} of 1"));
                }
                let q = q.normalized().map_err(|e| e.to_string())?;
                posekit::quat_to_rotation(&q).map_err(|e| e.to_string())
            }
            Repr::Matrix | Repr::Vectors => {
                let m = self.matrix();
                RotationMatrix::with_tolerance(m, tol).map_err(|e| format!("not a rotation: {e}"))?;
                nearest_rotation_svd(&m).map(|r| r.rotation).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn of(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Reads a pose file. `expect` pins the representation; otherwise it is
/// detected from the header or the first object's keys. Records without an
/// `id` are numbered from 1.
pub fn read_records(path: &Path, expect: Option<Repr>) -> Result<Vec<PoseRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let ctx = |msg: String| CliError::data(format!("{}: {msg}", path.display()));
    match Format::of(path) {
        Format::Csv => parse_csv(&text, expect).map_err(ctx),
        Format::Json => parse_json(&text, expect).map_err(ctx),
    }
}

fn resolve(detected: Option<Repr>, expect: Option<Repr>, what: &str) -> Result<Repr, String> {
    expect.or(detected).ok_or_else(|| format!("cannot tell the representation from the {what}"))
}

fn parse_csv(text: &str, expect: Option<Repr>) -> Result<Vec<PoseRecord>, String> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(str::to_owned).collect();
    let repr = resolve(Repr::detect(header.iter().map(String::as_str)), expect, "header")?;
    let id_col = header.iter().position(|h| h == "id");
    let cols: Vec<usize> = repr
        .columns()
        .iter()
        .map(|c| header.iter().position(|h| h == c).ok_or_else(|| format!("missing column '{c}' for {repr}")))
        .collect::<Result<_, _>>()?;
    let id_width = usize::from(id_col.is_some());

    let mut out = Vec::new();
    for (k, row) in reader.records().enumerate() {
        let n = k + 1;
        let row = row.map_err(|e| format!("row {n}: {e}"))?;
        if row.len() != header.len() {
            let got = row.len().saturating_sub(id_width);
            return Err(format!("row {n}: expected {} values, found {got}", header.len() - id_width));
        }
        let values = cols
            .iter()
            .zip(repr.columns())
            .map(|(&c, name)| row[c].parse::<f64>().map_err(|_| format!("row {n}: invalid number '{}' in column {name}", &row[c])))
            .collect::<Result<Vec<_>, _>>()?;
        let id = id_col.map_or_else(|| n.to_string(), |c| row[c].to_owned());
        out.push(PoseRecord { id, repr, values });
    }
    Ok(out)
}

fn parse_json(text: &str, expect: Option<Repr>) -> Result<Vec<PoseRecord>, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let items = doc.as_array().ok_or("expected a JSON array of records")?;
    let detected = items.first().and_then(Value::as_object).and_then(|o| Repr::detect(o.keys().map(String::as_str)));
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let repr = resolve(detected, expect, "first record's keys")?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let n = k + 1;
            let obj = item.as_object().ok_or_else(|| format!("row {n}: expected an object"))?;
            let values = repr
                .columns()
                .iter()
                .map(|c| obj.get(*c).and_then(Value::as_f64).ok_or_else(|| format!("row {n}: missing or non-numeric '{c}'")))
                .collect::<Result<Vec<_>, _>>()?;
            let id = match obj.get("id") {
                None => n.to_string(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            };
            Ok(PoseRecord { id, repr, values })
        })
        .collect()
}

/// Fixed six-decimal formatting without a `-0.000000`.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => fmt6(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// A header plus rows of cells, written as CSV or JSON depending on `path`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).unwrap();
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .filter(|(_, c)| **c != Cell::Empty)
                    .map(|(h, c)| (h.clone(), c.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).unwrap();
        s.push('\n');
        s
    }

    /// Writes to `out`, or stdout when `None`.
    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        match out {
            Some(path) => {
                let body = match Format::of(path) {
                    Format::Csv => self.to_csv(),
                    Format::Json => self.to_json(),
                };
                fs::write(path, body).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
            }
            None => std::io::stdout()
                .write_all(self.to_csv().as_bytes())
                .map_err(|e| CliError::data(format!("stdout: {e}"))),
        }
    }
}

//! File formats: point CSVs and the JSON model file.
//!
//! Reals inside the model file are written as decimal strings with 17
//! significant digits, which round-trip every finite double exactly.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::Matrix;
use crate::model::BasisModel;
use crate::points::PointSet;
use crate::reduction::ReductionReport;

pub const FORMAT_VERSION: u32 = 1;

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64<E: serde::de::Error>(s: &str) -> std::result::Result<f64, E> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| E::custom(format!("bad real {s:?}: {e}")))
}

/// A single real as a decimal string.
pub mod f64_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_f64(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_f64(&s)
    }
}

pub mod f64_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| super::fmt_f64(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| super::parse_f64(s)).collect()
    }
}

pub mod opt_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&super::fmt_f64(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::parse_f64(&s))
            .transpose()
    }
}

pub mod opt_f64_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.iter().map(|x| super::fmt_f64(*x)).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| v.iter().map(|s| super::parse_f64(s)).collect())
            .transpose()
    }
}

/// `{rows, cols, data}` with `data` a row-major nested array of strings.
pub mod matrix {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::Matrix;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        rows: usize,
        cols: usize,
        data: Vec<Vec<String>>,
    }

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m
                .row_iter()
                .map(|r| r.iter().map(|x| super::fmt_f64(*x)).collect())
                .collect(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let r = Repr::deserialize(d)?;
        if r.data.len() != r.rows || r.data.iter().any(|row| row.len() != r.cols) {
            return Err(D::Error::custom(format!(
                "matrix data does not match its {}x{} shape",
                r.rows, r.cols
            )));
        }
        let mut flat = Vec::with_capacity(r.rows * r.cols);
        for row in &r.data {
            for s in row {
                flat.push(super::parse_f64(s)?);
            }
        }
        Ok(Matrix::from_row_slice(r.rows, r.cols, &flat))
    }
}

/// A fitted model plus, optionally, the report of a reduction run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub model: BasisModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionReport>,
}

impl ModelFile {
    pub fn new(model: BasisModel) -> Self {
        ModelFile {
            format_version: FORMAT_VERSION,
            model,
            reduction: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ModelFile = serde_json::from_str(s)?;
        if f.format_version != FORMAT_VERSION {
            return Err(AviError::Format(format!(
                "unsupported model format version {}",
                f.format_version
            )));
        }
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let m = &self.model;
        if m.constant_value == 0.0 {
            return Err(AviError::Format(
                "constant polynomial value must be nonzero".into(),
            ));
        }
        let mut f_prev = 1;
        let mut f_one = 0;
        for (i, r) in m.degrees.iter().enumerate() {
            let bad = |what: &str| Err(AviError::Format(format!("degree {}: {what}", r.degree)));
            if r.degree != i + 1 {
                return bad("degrees must be consecutive from 1");
            }
            let c = r.parents.len();
            let f_acc: usize = 1 + m.degrees[..i]
                .iter()
                .map(|d| d.count(crate::model::PolyKind::F))
                .sum::<usize>();
            if r.ortho_weights.shape() != (f_acc, c) {
                return bad("orthogonalization weights have the wrong shape");
            }
            if r.eigvecs.nrows() != c
                || r.eigvals.len() != r.eigvecs.ncols()
                || r.partition.len() != r.eigvecs.ncols()
            {
                return bad("eigenvector, eigenvalue and partition sizes disagree");
            }
            for p in &r.parents {
                let ok = match *p {
                    crate::model::Parent::Variable(k) => r.degree == 1 && k < m.num_vars,
                    crate::model::Parent::Product { linear, previous } => {
                        r.degree >= 2 && linear < f_one && previous < f_prev
                    }
                };
                if !ok {
                    return bad("candidate parent out of range");
                }
            }
            f_prev = r.count(crate::model::PolyKind::F);
            if r.degree == 1 {
                f_one = f_prev;
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(AviError::file(path))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(AviError::file(path))?)
    }
}

/// Parse points from CSV text. A first row that does not parse as numbers
/// is taken as a header.
pub fn read_points<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| AviError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            rec.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) => {
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    return Err(AviError::Parse {
                        line,
                        msg: format!("non-finite value {bad}"),
                    });
                }
                if let Some(n) = rows.first().map(|r| r.len()) {
                    if v.len() != n {
                        return Err(AviError::Parse {
                            line,
                            msg: format!("expected {n} fields, found {}", v.len()),
                        });
                    }
                }
                rows.push(v);
            }
            Err(e) if !first => {
                return Err(AviError::Parse {
                    line,
                    msg: format!("not a number: {e}"),
                })
            }
            Err(_) => {}
        }
        first = false;
    }
    if rows.is_empty() {
        return Err(AviError::EmptyPointSet);
    }
    PointSet::from_rows(&rows)
}

pub fn read_points_file(path: &Path) -> Result<PointSet> {
    read_points(fs::File::open(path).map_err(AviError::file(path))?)
}

/// Write a header row followed by one row per matrix row.
pub fn write_csv<W: Write>(writer: W, header: &[String], rows: &Matrix) -> Result<()> {
    if header.len() != rows.ncols() {
        return Err(AviError::Dimension(format!(
            "{} header fields for {} columns",
            header.len(),
            rows.ncols()
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| AviError::Format(e.to_string());
    if !header.is_empty() {
        w.write_record(header).map_err(csv_err)?;
    }
    for r in rows.row_iter() {
        w.write_record(r.iter().map(|x| format!("{x:e}")))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Points with a generated `x1..xn` header.
pub fn write_points<W: Write>(writer: W, points: &PointSet) -> Result<()> {
    let header: Vec<String> = (1..=points.dim()).map(|k| format!("x{k}")).collect();
    write_csv(writer, &header, points.matrix())
}

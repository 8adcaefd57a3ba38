//! Datasets and the two text formats they are read from.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Real,
    Categorical,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Real => "real",
            Kind::Categorical => "categorical",
        }
    }
}

/// Row-major feature storage.
#[derive(Clone, Debug, PartialEq)]
pub enum Features {
    Real(Vec<f64>),
    /// Tokens are interned per dataset; `symbols[code]` recovers the text.
    Categorical {
        codes: Vec<u32>,
        symbols: Vec<String>,
    },
}

/// N instances of dimension d with optional per-instance annotations.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    name: String,
    n: usize,
    d: usize,
    features: Features,
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn from_real_rows(name: impl Into<String>, rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let (n, d) = check_shape(&rows, labels.as_deref())?;
        let mut values = Vec::with_capacity(n * d);
        for (i, row) in rows.into_iter().enumerate() {
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Parse { row: i + 1, column: j + 1, field: row[j].to_string() });
            }
            values.extend(row);
        }
        Ok(Dataset { name: name.into(), n, d, features: Features::Real(values), labels })
    }

    pub fn from_categorical_rows(
        name: impl Into<String>,
        rows: Vec<Vec<String>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let (n, d) = check_shape(&rows, labels.as_deref())?;
        let mut interned: HashMap<String, u32> = HashMap::new();
        let mut symbols = Vec::new();
        let mut codes = Vec::with_capacity(n * d);
        for row in rows {
            for token in row {
                let next = symbols.len() as u32;
                let code = *interned.entry(token.clone()).or_insert_with(|| {
                    symbols.push(token);
                    next
                });
                codes.push(code);
            }
        }
        Ok(Dataset { name: name.into(), n, d, features: Features::Categorical { codes, symbols }, labels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a dataset holds at least one instance.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> Kind {
        match self.features {
            Features::Real(_) => Kind::Real,
            Features::Categorical { .. } => Kind::Categorical,
        }
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn real_row(&self, i: usize) -> Option<&[f64]> {
        match &self.features {
            Features::Real(v) => Some(&v[i * self.d..(i + 1) * self.d]),
            Features::Categorical { .. } => None,
        }
    }

    pub fn categorical_row(&self, i: usize) -> Option<&[u32]> {
        match &self.features {
            Features::Categorical { codes, .. } => Some(&codes[i * self.d..(i + 1) * self.d]),
            Features::Real(_) => None,
        }
    }

    /// Planar coordinates, present only for two-dimensional real data.
    pub fn coords2d(&self) -> Option<Vec<[f64; 2]>> {
        match &self.features {
            Features::Real(v) if self.d == 2 => Some(v.chunks_exact(2).map(|c| [c[0], c[1]]).collect()),
            _ => None,
        }
    }
}

fn check_shape<T>(rows: &[Vec<T>], labels: Option<&[String]>) -> Result<(usize, usize)> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let d = rows[0].len();
    if d == 0 {
        return Err(Error::Format { line: 1, message: "instance has no attributes".into() });
    }
    if let Some(i) = rows.iter().position(|r| r.len() != d) {
        return Err(Error::Format {
            line: i + 1,
            message: format!("expected {d} attributes, found {}", rows[i].len()),
        });
    }
    if let Some(labels) = labels {
        if labels.len() != n {
            return Err(Error::usage(format!("{} labels given for {n} instances", labels.len())));
        }
    }
    Ok((n, d))
}

/// Options for comma-separated real-valued files.
#[derive(Clone, Debug, Default)]
pub struct RealCsvOptions {
    /// Skip the first line.
    pub has_header: bool,
    /// Zero-based column holding an annotation instead of a feature.
    pub label_column: Option<usize>,
}

pub fn load_real_csv(path: impl AsRef<Path>, opts: &RealCsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    read_real_csv(File::open(path).map_err(|e| Error::file(path, e))?, &dataset_name(path), opts)
}

pub fn read_real_csv<R: Read>(reader: R, name: &str, opts: &RealCsvOptions) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut labels = opts.label_column.map(|_| Vec::new());
    for_each_record(reader, opts.has_header, opts.label_column, |line, fields, label| {
        let mut row = Vec::with_capacity(fields.len());
        for (column, field) in fields {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => return Err(Error::Parse { row: line, column, field: field.to_string() }),
            }
        }
        rows.push(row);
        if let (Some(labels), Some(label)) = (labels.as_mut(), label) {
            labels.push(label.to_string());
        }
        Ok(())
    })?;
    Dataset::from_real_rows(name, rows, labels)
}

/// Loads a categorical file in the UCI layout: one instance per line, single-token fields.
pub fn load_categorical(path: impl AsRef<Path>, label_column: usize) -> Result<Dataset> {
    let path = path.as_ref();
    read_categorical(File::open(path).map_err(|e| Error::file(path, e))?, &dataset_name(path), label_column)
}

pub fn read_categorical<R: Read>(reader: R, name: &str, label_column: usize) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for_each_record(reader, false, Some(label_column), |line, fields, label| {
        let mut row = Vec::with_capacity(fields.len());
        for (column, token) in fields {
            if token.split_whitespace().count() != 1 {
                return Err(Error::Format {
                    line,
                    message: format!("column {column}: {token:?} is not a single token"),
                });
            }
            row.push(token.to_string());
        }
        rows.push(row);
        labels.push(label.unwrap_or_default().to_string());
        Ok(())
    })?;
    Dataset::from_categorical_rows(name, rows, Some(labels))
}

/// Walks non-empty records, checking width, splitting off the label column.
/// The callback receives the 1-based line, (1-based column, field) pairs, and the label.
fn for_each_record<R, F>(reader: R, has_header: bool, label_column: Option<usize>, mut f: F) -> Result<()>
where
    R: Read,
    F: FnMut(usize, Vec<(usize, &str)>, Option<&str>) -> Result<()>,
{
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(has_header).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut width = None;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Format {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Format { line, message: format!("expected {expected} fields, found {}", record.len()) });
        }
        if let Some(lc) = label_column {
            if lc >= record.len() {
                return Err(Error::usage(format!("label column {lc} out of range for {} fields", record.len())));
            }
        }
        if let Some(column) = record.iter().position(str::is_empty) {
            return Err(Error::Format { line, message: format!("missing value in column {}", column + 1) });
        }
        let label = label_column.map(|lc| &record[lc]);
        let fields =
            record.iter().enumerate().filter(|(j, _)| Some(*j) != label_column).map(|(j, s)| (j + 1, s)).collect();
        f(line, fields, label)?;
    }
    if width.is_none() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".to_string())
}

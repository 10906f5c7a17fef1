//! Per-column data summaries inferred from the dataset itself.
//!
//! Type inference, in order: integer-valued numeric columns with at most
//! `ordinal_max_cardinality` distinct values are ordinal; other numeric
//! columns are quantitative; columns of ISO-8601 dates or datetimes are
//! temporal; everything else is nominal. Nulls are ignored throughout and
//! only counted.

use std::collections::HashSet;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::Serialize;
use serde_json::Value;

use crate::error::DataError;
use crate::spec::{ChartSpec, FieldType};

pub const DEFAULT_ORDINAL_MAX_CARDINALITY: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Number(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn to_json(&self) -> Value {
        match self {
            Cell::Null => Value::Null,
            Cell::Number(n) => serde_json::Number::from_f64(*n).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    fn from_json(v: &Value) -> Cell {
        match v {
            Value::Null => Cell::Null,
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => n.as_f64().map_or(Cell::Null, Cell::Number),
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        }
    }

    fn from_csv(s: &str) -> Cell {
        if s.is_empty() {
            return Cell::Null;
        }
        match s.trim().parse::<f64>() {
            Ok(n) if n.is_finite() => Cell::Number(n),
            _ => Cell::Text(s.to_string()),
        }
    }

    fn distinct_key(&self) -> Option<String> {
        match self {
            Cell::Null => None,
            Cell::Number(n) => Some(format!("n:{}", (n + 0.0).to_bits())),
            Cell::Bool(b) => Some(format!("b:{b}")),
            Cell::Text(s) => Some(format!("s:{s}")),
        }
    }
}

/// Rows of cells under a shared header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Builds a table from JSON objects; every row must have exactly the keys
    /// of the first row.
    pub fn from_json_rows(rows: &[Value]) -> Result<Table, DataError> {
        let Some(first) = rows.first() else {
            return Ok(Table::default());
        };
        let columns: Vec<String> = first
            .as_object()
            .ok_or(DataError::Ragged { row: 0 })?
            .keys()
            .cloned()
            .collect();
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let obj = row.as_object().ok_or(DataError::Ragged { row: i })?;
            if obj.len() != columns.len() {
                return Err(DataError::Ragged { row: i });
            }
            let cells = columns
                .iter()
                .map(|c| obj.get(c).map(Cell::from_json))
                .collect::<Option<Vec<_>>>()
                .ok_or(DataError::Ragged { row: i })?;
            out.push(cells);
        }
        Ok(Table { columns, rows: out })
    }

    pub fn from_json_text(text: &str) -> Result<Table, DataError> {
        let v: Value = serde_json::from_str(text).map_err(|e| DataError::Read(e.to_string()))?;
        match v {
            Value::Array(rows) => Table::from_json_rows(&rows),
            _ => Err(DataError::Read("expected a JSON array of objects".into())),
        }
    }

    pub fn from_delimited(text: &str, delimiter: u8) -> Result<Table, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .flexible(true)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| DataError::Read(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| DataError::Read(e.to_string()))?;
            if record.len() != columns.len() {
                return Err(DataError::Ragged { row: i });
            }
            rows.push(record.iter().map(Cell::from_csv).collect());
        }
        Ok(Table { columns, rows })
    }

    pub fn from_csv(text: &str) -> Result<Table, DataError> {
        Table::from_delimited(text, b',')
    }

    /// Reads `.json`, `.csv` or `.tsv` files.
    pub fn load(path: &Path) -> Result<Table, DataError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DataError::Read(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Table::from_csv(&text),
            Some("tsv") => Table::from_delimited(&text, b'\t'),
            _ => Table::from_json_text(&text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldProfile {
    pub name: String,
    pub inferred_type: FieldType,
    /// Distinct non-null values.
    pub cardinality: usize,
    pub min_value: Option<f64>,
    pub max_value: Option<f64>,
    pub has_nonpositive: bool,
    pub null_count: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DatasetProfile {
    pub row_count: usize,
    /// One profile per column, in column order.
    pub fields: Vec<FieldProfile>,
}

impl DatasetProfile {
    pub fn lookup(&self, column: &str) -> Result<&FieldProfile, DataError> {
        self.get(column)
            .ok_or_else(|| DataError::UnknownColumn(column.to_string()))
    }

    pub fn get(&self, column: &str) -> Option<&FieldProfile> {
        self.fields.iter().find(|f| f.name == column)
    }

    pub fn columns(&self) -> impl Iterator<Item = &FieldProfile> {
        self.fields.iter()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub ordinal_max_cardinality: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            ordinal_max_cardinality: DEFAULT_ORDINAL_MAX_CARDINALITY,
        }
    }
}

pub fn profile_dataset(table: &Table) -> Result<DatasetProfile, DataError> {
    profile_dataset_with(table, ProfileOptions::default())
}

pub fn profile_dataset_with(
    table: &Table,
    options: ProfileOptions,
) -> Result<DatasetProfile, DataError> {
    if table.rows.is_empty() {
        return Err(DataError::NoRows);
    }
    if let Some(i) = table.rows.iter().position(|r| r.len() != table.columns.len()) {
        return Err(DataError::Ragged { row: i });
    }
    let fields = table
        .columns
        .iter()
        .enumerate()
        .map(|(c, name)| profile_column(name, table.rows.iter().map(|r| &r[c]), options))
        .collect();
    Ok(DatasetProfile {
        row_count: table.rows.len(),
        fields,
    })
}

/// Loads and profiles a data file.
pub fn profile_file(path: &Path) -> Result<DatasetProfile, DataError> {
    profile_dataset(&Table::load(path)?)
}

/// Profiles the data a chart refers to: inline `values` first, otherwise a
/// `url` resolved against `base` and then each of its ancestors. Remote or
/// missing files give `None`.
pub fn profile_for_spec(
    spec: &ChartSpec,
    base: Option<&Path>,
) -> Result<Option<DatasetProfile>, DataError> {
    let Some(data) = &spec.data else {
        return Ok(None);
    };
    if let Some(rows) = &data.values {
        return profile_dataset(&Table::from_json_rows(rows)?).map(Some);
    }
    let (Some(url), Some(base)) = (&data.url, base) else {
        return Ok(None);
    };
    if url.contains("://") {
        return Ok(None);
    }
    match base.ancestors().map(|d| d.join(url)).find(|p| p.is_file()) {
        Some(path) => profile_file(&path).map(Some),
        None => Ok(None),
    }
}

fn is_iso_datetime(s: &str) -> bool {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
        || NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f").is_ok()
        || NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M").is_ok()
        || NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f").is_ok()
        || DateTime::parse_from_rfc3339(s).is_ok()
}

fn profile_column<'a>(
    name: &str,
    cells: impl Iterator<Item = &'a Cell>,
    options: ProfileOptions,
) -> FieldProfile {
    let mut null_count = 0;
    let mut distinct = HashSet::new();
    let mut numbers = Vec::new();
    let mut all_numeric = true;
    let mut all_dates = true;
    for cell in cells {
        match cell {
            Cell::Null => {
                null_count += 1;
                continue;
            }
            Cell::Number(n) => {
                numbers.push(*n);
                all_dates = false;
            }
            Cell::Text(s) => {
                all_numeric = false;
                all_dates &= is_iso_datetime(s);
            }
            Cell::Bool(_) => {
                all_numeric = false;
                all_dates = false;
            }
        }
        distinct.extend(cell.distinct_key());
    }
    let cardinality = distinct.len();
    let numeric = all_numeric && !numbers.is_empty();
    let inferred_type = if numeric {
        let integral = numbers.iter().all(|n| n.fract() == 0.0);
        if integral && cardinality <= options.ordinal_max_cardinality {
            FieldType::Ordinal
        } else {
            FieldType::Quantitative
        }
    } else if all_dates && cardinality > 0 {
        FieldType::Temporal
    } else {
        FieldType::Nominal
    };
    let (min_value, max_value) = if numeric {
        (
            numbers.iter().copied().reduce(f64::min),
            numbers.iter().copied().reduce(f64::max),
        )
    } else {
        (None, None)
    };
    FieldProfile {
        name: name.to_string(),
        inferred_type,
        cardinality,
        min_value,
        max_value,
        has_nonpositive: min_value.is_some_and(|m| m <= 0.0),
        null_count,
    }
}

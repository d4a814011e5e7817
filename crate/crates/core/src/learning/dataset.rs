use std::collections::HashMap;
use std::io;
use std::sync::Arc;

use indexmap::IndexMap;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::model::{EventSpace, SpaceKind};

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub space: Arc<EventSpace>,
}

/// Complete discrete records, stored column-major as value ordinals.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    columns: Vec<Column>,
    cells: Vec<Vec<u32>>,
}

/// Event spaces declared up front for some (or all) CSV columns.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpaceDeclarations {
    pub spaces: Vec<EventSpace>,
    /// column name → space id
    pub columns: IndexMap<String, String>,
}

impl Dataset {
    /// Builds from ordinal columns, checking every cell against its space.
    pub fn new(columns: Vec<Column>, cells: Vec<Vec<u32>>) -> Result<Self, LearnError> {
        if columns.len() != cells.len() {
            return Err(LearnError::Shape(format!(
                "{} columns but {} cell vectors",
                columns.len(),
                cells.len()
            )));
        }
        let rows = cells.first().map_or(0, Vec::len);
        for (col, values) in columns.iter().zip(&cells) {
            if values.len() != rows {
                return Err(LearnError::Shape(format!("column {:?} has {} rows, expected {rows}", col.name, values.len())));
            }
            if let Some(&bad) = values.iter().find(|&&v| v as usize >= col.space.len()) {
                return Err(LearnError::Shape(format!(
                    "column {:?} holds ordinal {bad} outside its space",
                    col.name
                )));
            }
        }
        Ok(Dataset { columns, cells })
    }

    /// Reads comma-separated text with a header row. Columns without a
    /// declaration get a categorical space whose value order is the order of
    /// first appearance.
    pub fn from_csv<R: io::Read>(reader: R, declared: Option<&SpaceDeclarations>) -> Result<Self, LearnError> {
        let mut csv = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = csv.headers()?.iter().map(str::to_owned).collect();

        let declared_spaces: HashMap<&str, &EventSpace> = declared
            .map(|d| d.spaces.iter().map(|s| (s.id.as_str(), s)).collect())
            .unwrap_or_default();
        let mut fixed: Vec<Option<Arc<EventSpace>>> = Vec::with_capacity(headers.len());
        for h in &headers {
            let space = match declared.and_then(|d| d.columns.get(h)) {
                Some(id) => Some(Arc::new(
                    (*declared_spaces
                        .get(id.as_str())
                        .ok_or_else(|| LearnError::UnknownSpace(id.clone()))?)
                    .clone(),
                )),
                None => None,
            };
            fixed.push(space);
        }

        let mut inferred: Vec<IndexMap<String, u32>> = vec![IndexMap::new(); headers.len()];
        let mut cells: Vec<Vec<u32>> = vec![Vec::new(); headers.len()];
        for (line, record) in csv.records().enumerate() {
            let record = record?;
            if record.len() != headers.len() {
                return Err(LearnError::Shape(format!(
                    "record {} has {} cells, expected {}",
                    line + 1,
                    record.len(),
                    headers.len()
                )));
            }
            for (c, cell) in record.iter().enumerate() {
                if cell.is_empty() {
                    return Err(LearnError::MissingCell {
                        row: line + 1,
                        column: headers[c].clone(),
                    });
                }
                let ordinal = match &fixed[c] {
                    Some(space) => space.ordinal(cell).ok_or_else(|| LearnError::ValueNotInSpace {
                        column: headers[c].clone(),
                        value: cell.to_owned(),
                    })? as u32,
                    None => {
                        let next = inferred[c].len() as u32;
                        *inferred[c].entry(cell.to_owned()).or_insert(next)
                    }
                };
                cells[c].push(ordinal);
            }
        }

        let columns = headers
            .into_iter()
            .zip(fixed)
            .zip(inferred)
            .map(|((name, space), seen)| {
                let space = space.unwrap_or_else(|| {
                    Arc::new(EventSpace::new(
                        name.clone(),
                        SpaceKind::Categorical,
                        seen.into_keys().collect(),
                    ))
                });
                Column { name, space }
            })
            .collect();
        Dataset::new(columns, cells)
    }

    pub fn to_csv(&self) -> Result<String, LearnError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for r in 0..self.n_rows() {
            w.write_record(
                self.columns
                    .iter()
                    .zip(&self.cells)
                    .map(|(c, v)| c.space.values[v[r] as usize].as_str()),
            )?;
        }
        let bytes = w.into_inner().map_err(|e| LearnError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn column_values(&self, column: usize) -> &[u32] {
        &self.cells[column]
    }

    pub fn cardinality(&self, column: usize) -> usize {
        self.columns[column].space.len()
    }

    /// Same columns, no rows.
    pub fn empty_like(&self) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            cells: vec![Vec::new(); self.columns.len()],
        }
    }

    /// `n` rows drawn without replacement using a seeded generator, kept in
    /// their original order. Returns the whole dataset when `n >= n_rows`.
    pub fn subsample(&self, n: usize, seed: u64) -> Dataset {
        if n >= self.n_rows() {
            return self.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = sample(&mut rng, self.n_rows(), n).into_vec();
        picked.sort_unstable();
        Dataset {
            columns: self.columns.clone(),
            cells: self
                .cells
                .iter()
                .map(|col| picked.iter().map(|&r| col[r]).collect())
                .collect(),
        }
    }
}

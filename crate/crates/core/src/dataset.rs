//! Tabular classification data and the seeded train/ordering/test split.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A classification dataset: numeric feature rows, dense class indices and
/// the original label values they were mapped from (in first-appearance
/// order).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    label_map: Vec<String>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, label_map: Vec<String>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let n_classes = label_map.len();
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(Error::InvalidParameter(format!(
                "label index {bad} out of range for {n_classes} classes"
            )));
        }
        if let Some(width) = features.first().map(Vec::len) {
            if features.iter().any(|r| r.len() != width) {
                return Err(Error::InvalidParameter("ragged feature rows".into()));
            }
        }
        Ok(Dataset {
            features,
            labels,
            label_map,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn n_classes(&self) -> usize {
        self.label_map.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_map(&self) -> &[String] {
        &self.label_map
    }

    fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            label_map: self.label_map.clone(),
        }
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum LabelColumn {
    /// The last column (the default).
    #[default]
    Last,
    Index(usize),
    /// By header name; requires a header row.
    Name(String),
}


/// Loads a UTF-8 comma-separated file. The header row is optional and
/// detected by attempting to parse the first row's feature cells as
/// numbers; a [`LabelColumn::Name`] forces header interpretation. Labels
/// are re-indexed densely in first-appearance order; any non-numeric or
/// missing feature cell is an error.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path.as_ref())?;
    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for record in reader.records() {
        rows.push(record?);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let width = rows[0].len();
    if width < 2 {
        return Err(Error::InvalidParameter(
            "need at least one feature column and one label column".into(),
        ));
    }

    let (label_idx, has_header) = match label_column {
        LabelColumn::Last => (width - 1, first_row_is_header(&rows[0], width - 1)),
        LabelColumn::Index(i) => {
            if *i >= width {
                return Err(Error::LabelColumnNotFound(i.to_string()));
            }
            (*i, first_row_is_header(&rows[0], *i))
        }
        LabelColumn::Name(name) => {
            let idx = rows[0]
                .iter()
                .position(|cell| cell.trim() == name)
                .ok_or_else(|| Error::LabelColumnNotFound(name.clone()))?;
            (idx, true)
        }
    };

    let data_rows = if has_header { &rows[1..] } else { &rows[..] };
    if data_rows.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut features = Vec::with_capacity(data_rows.len());
    let mut labels = Vec::with_capacity(data_rows.len());
    let mut label_map: Vec<String> = Vec::new();
    let mut label_index: HashMap<String, usize> = HashMap::new();
    for (r, record) in data_rows.iter().enumerate() {
        let mut row = Vec::with_capacity(width - 1);
        for (c, cell) in record.iter().enumerate() {
            if c == label_idx {
                continue;
            }
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericFeature {
                row: r,
                col: c,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumericFeature {
                    row: r,
                    col: c,
                    value: cell.to_string(),
                });
            }
            row.push(value);
        }
        let raw = record
            .get(label_idx)
            .map(str::trim)
            .unwrap_or_default()
            .to_string();
        let next = label_map.len();
        let class = *label_index.entry(raw.clone()).or_insert_with(|| {
            label_map.push(raw);
            next
        });
        features.push(row);
        labels.push(class);
    }
    Dataset::new(features, labels, label_map)
}

fn first_row_is_header(row: &csv::StringRecord, label_idx: usize) -> bool {
    row.iter()
        .enumerate()
        .filter(|(c, _)| *c != label_idx)
        .any(|(_, cell)| cell.trim().parse::<f64>().is_err())
}

/// The three-way split: half for training, a quarter for order generation,
/// a quarter for testing.
#[derive(Debug, Clone)]
pub struct DatasetSplits {
    pub train: Dataset,
    pub ordering: Dataset,
    pub test: Dataset,
    pub seed: u64,
}

/// Seeded uniform shuffle followed by a 50/25/25 partition. The quarter
/// sizes are floored and the remainder goes to the training split, so the
/// same seed always yields the identical partition.
pub fn split(dataset: &Dataset, seed: u64) -> Result<DatasetSplits> {
    let n = dataset.len();
    if n < 4 {
        return Err(Error::TooFewSamples { n, min: 4 });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let n_ordering = n / 4;
    let n_test = n / 4;
    let n_train = n - n_ordering - n_test;
    let train = dataset.subset(&indices[..n_train]);
    let ordering = dataset.subset(&indices[n_train..n_train + n_ordering]);
    let test = dataset.subset(&indices[n_train + n_ordering..]);
    Ok(DatasetSplits {
        train,
        ordering,
        test,
        seed,
    })
}

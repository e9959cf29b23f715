//! Count-matrix ingestion, zero-fraction gene filtering, quantile
//! normalization and label joining.
//!
//! Dense CSV layout: the header row starts with the literal `cell_id`
//! followed by gene ids; each following row is a cell id and its values.
//! Label tables use the header `cell_id,label`.
//!
//! Normalization works on whatever values are loaded; raw counts are the
//! expected input (no log transform is applied).

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;

/// Default zero-fraction threshold for [`filter_genes`].
pub const DEFAULT_ZERO_FRACTION: f64 = 0.8;

/// Dense labelled table: row ids, column ids and row-major finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTable {
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    /// Row-major, `row_ids.len() * col_ids.len()` entries.
    pub values: Vec<f64>,
}

impl DenseTable {
    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_cols();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn to_data_matrix(&self) -> Result<DataMatrix> {
        DataMatrix::from_row_major(self.n_rows(), self.n_cols(), &self.values)
    }

    /// Parses the dense CSV layout, accepting any finite value.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        parse_dense(reader, false)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header = std::iter::once("cell_id").chain(self.col_ids.iter().map(String::as_str));
        w.write_record(header).map_err(csv_io)?;
        for (i, id) in self.row_ids.iter().enumerate() {
            let mut rec = Vec::with_capacity(self.n_cols() + 1);
            rec.push(id.clone());
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Non-negative count matrix: rows are cells, columns are genes.
#[derive(Debug, Clone, PartialEq)]
pub struct CountMatrix {
    table: DenseTable,
}

impl CountMatrix {
    pub fn new(cell_ids: Vec<String>, gene_ids: Vec<String>, counts: Vec<f64>) -> Result<Self> {
        if counts.len() != cell_ids.len() * gene_ids.len() {
            return Err(Error::Dimension(format!(
                "{} counts for {} cells x {} genes",
                counts.len(),
                cell_ids.len(),
                gene_ids.len()
            )));
        }
        check_unique(&cell_ids, "cell")?;
        check_unique(&gene_ids, "gene")?;
        if let Some(idx) = counts.iter().position(|v| !v.is_finite() || *v < 0.0) {
            let d = gene_ids.len();
            return Err(Error::Contract(format!(
                "count at cell {}, gene {} is {} (must be finite and >= 0)",
                idx / d,
                idx % d,
                counts[idx]
            )));
        }
        Ok(Self {
            table: DenseTable {
                row_ids: cell_ids,
                col_ids: gene_ids,
                values: counts,
            },
        })
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        Ok(Self {
            table: parse_dense(reader, true)?,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.table.write_csv(out)
    }

    pub fn n_cells(&self) -> usize {
        self.table.n_rows()
    }

    pub fn n_genes(&self) -> usize {
        self.table.n_cols()
    }

    pub fn cell_ids(&self) -> &[String] {
        &self.table.row_ids
    }

    pub fn gene_ids(&self) -> &[String] {
        &self.table.col_ids
    }

    /// Row-major counts.
    pub fn counts(&self) -> &[f64] {
        &self.table.values
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        self.table.row(i)
    }

    pub fn as_table(&self) -> &DenseTable {
        &self.table
    }

    pub fn into_table(self) -> DenseTable {
        self.table
    }
}

fn check_unique(ids: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::Contract(format!("duplicate {what} id {id:?}")));
        }
    }
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line: 0,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn read_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::Utf8 { err, .. } => Error::Parse {
            line,
            column: err.field() + 1,
            message: "invalid UTF-8".into(),
        },
        other => Error::Parse {
            line,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

fn parse_dense<R: Read>(reader: R, nonnegative: bool) -> Result<DenseTable> {
    let mut rdr = csv_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(r) => r.map_err(read_error)?,
        None => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty file".into(),
            })
        }
    };
    if header.get(0) != Some("cell_id") {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!(
                "first header cell must be `cell_id`, found {:?}",
                header.get(0).unwrap_or("")
            ),
        });
    }
    let col_ids: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    if col_ids.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 2,
            message: "header has no feature columns".into(),
        });
    }
    let mut seen = HashSet::new();
    for (j, g) in col_ids.iter().enumerate() {
        if !seen.insert(g.as_str()) {
            return Err(Error::Parse {
                line: 1,
                column: j + 2,
                message: format!("duplicate column id {g:?}"),
            });
        }
    }

    let width = col_ids.len() + 1;
    let mut row_ids = Vec::new();
    let mut values = Vec::new();
    let mut seen_rows = HashSet::new();
    for rec in records {
        let rec = rec.map_err(read_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec.get(0) == Some("") {
            // blank line
            continue;
        }
        if rec.len() != width {
            return Err(Error::Parse {
                line,
                column: rec.len().min(width) + 1,
                message: format!("row has {} fields, expected {width}", rec.len()),
            });
        }
        let id = rec.get(0).unwrap_or_default().to_owned();
        if id.is_empty() {
            return Err(Error::Parse {
                line,
                column: 1,
                message: "empty row id".into(),
            });
        }
        if !seen_rows.insert(id.clone()) {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("duplicate row id {id:?}"),
            });
        }
        for (j, field) in rec.iter().enumerate().skip(1) {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                column: j + 1,
                message: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: j + 1,
                    message: format!("non-finite value {field:?}"),
                });
            }
            if nonnegative && v < 0.0 {
                return Err(Error::Parse {
                    line,
                    column: j + 1,
                    message: format!("negative count {v}"),
                });
            }
            values.push(v);
        }
        row_ids.push(id);
    }
    if row_ids.is_empty() {
        return Err(Error::Parse {
            line: 2,
            column: 1,
            message: "no data rows".into(),
        });
    }
    Ok(DenseTable {
        row_ids,
        col_ids,
        values,
    })
}

/// Reads a dense count CSV from disk.
pub fn load_counts(path: impl AsRef<Path>) -> Result<CountMatrix> {
    CountMatrix::read_csv(std::fs::File::open(path)?)
}

/// Keeps gene `j` unless its zero fraction is strictly greater than
/// `zero_fraction_threshold`. A gene zero in exactly the threshold fraction of
/// cells survives.
pub fn filter_genes(m: &CountMatrix, zero_fraction_threshold: f64) -> Result<CountMatrix> {
    if !(zero_fraction_threshold > 0.0 && zero_fraction_threshold <= 1.0) {
        return Err(Error::OutOfRange {
            what: "zero-fraction threshold",
            detail: format!("{zero_fraction_threshold} not in (0, 1]"),
        });
    }
    let n = m.n_cells();
    let g = m.n_genes();
    let mut zeros = vec![0usize; g];
    for i in 0..n {
        for (z, &v) in zeros.iter_mut().zip(m.cell(i)) {
            if v == 0.0 {
                *z += 1;
            }
        }
    }
    // compare the rounded fraction itself: 8.0 / 10.0 == 0.8 exactly
    let keep: Vec<usize> = (0..g)
        .filter(|&j| !(zeros[j] as f64 / n as f64 > zero_fraction_threshold))
        .collect();
    if keep.is_empty() {
        return Err(Error::Empty(format!(
            "every gene is zero in more than {zero_fraction_threshold} of cells"
        )));
    }
    let mut counts = Vec::with_capacity(n * keep.len());
    for i in 0..n {
        let row = m.cell(i);
        counts.extend(keep.iter().map(|&j| row[j]));
    }
    let genes = keep.iter().map(|&j| m.gene_ids()[j].clone()).collect();
    CountMatrix::new(m.cell_ids().to_vec(), genes, counts)
}

/// Quantile-normalizes cells so every cell shares one empirical
/// distribution.
///
/// The reference is the per-rank mean of the sorted cells. Tied values in a
/// cell receive the mean of the reference over their rank span.
pub fn quantile_normalize(m: &CountMatrix) -> Result<CountMatrix> {
    let n = m.n_cells();
    let g = m.n_genes();
    if g == 0 {
        return Err(Error::Degenerate("no genes to normalize".into()));
    }

    let orders: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let row = m.cell(i);
            let mut idx: Vec<usize> = (0..g).collect();
            idx.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            idx
        })
        .collect();

    let mut reference = vec![0.0; g];
    for (i, order) in orders.iter().enumerate() {
        let row = m.cell(i);
        for (r, &j) in order.iter().enumerate() {
            reference[r] += row[j];
        }
    }
    reference.iter_mut().for_each(|v| *v /= n as f64);

    let mut out = vec![0.0; n * g];
    for (i, order) in orders.iter().enumerate() {
        let row = m.cell(i);
        let dst = &mut out[i * g..(i + 1) * g];
        let mut start = 0;
        while start < g {
            let mut end = start + 1;
            while end < g && row[order[end]] == row[order[start]] {
                end += 1;
            }
            let value = if end - start == 1 {
                reference[start]
            } else {
                reference[start..end].iter().sum::<f64>() / (end - start) as f64
            };
            for &j in &order[start..end] {
                dst[j] = value;
            }
            start = end;
        }
    }
    CountMatrix::new(m.cell_ids().to_vec(), m.gene_ids().to_vec(), out)
}

/// Mapping from cell id to cell-type label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelTable {
    labels: HashMap<String, String>,
}

impl LabelTable {
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut labels = HashMap::new();
        for (k, v) in pairs {
            let k = k.into();
            if labels.insert(k.clone(), v.into()).is_some() {
                return Err(Error::Contract(format!(
                    "duplicate cell id {k:?} in labels"
                )));
            }
        }
        Ok(Self { labels })
    }

    pub fn get(&self, cell_id: &str) -> Option<&str> {
        self.labels.get(cell_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Parses a `cell_id,label` CSV.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv_reader(reader);
        let mut records = rdr.records();
        let header = records
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: "empty label file".into(),
            })?
            .map_err(read_error)?;
        if header.len() != 2 || &header[0] != "cell_id" || &header[1] != "label" {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "label header must be `cell_id,label`".into(),
            });
        }
        let mut labels = HashMap::new();
        for rec in records {
            let rec = rec.map_err(read_error)?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() == 1 && rec.get(0) == Some("") {
                continue;
            }
            if rec.len() != 2 {
                return Err(Error::Parse {
                    line,
                    column: rec.len().min(2) + 1,
                    message: format!("row has {} fields, expected 2", rec.len()),
                });
            }
            if labels
                .insert(rec[0].to_owned(), rec[1].to_owned())
                .is_some()
            {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("duplicate cell id {:?}", &rec[0]),
                });
            }
        }
        Ok(Self { labels })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Labels for `cell_ids` in order. Extra entries in the table are ignored.
pub fn join_labels(cell_ids: &[String], labels: &LabelTable) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(cell_ids.len());
    let mut missing = Vec::new();
    for id in cell_ids {
        match labels.get(id) {
            Some(l) => out.push(l.to_owned()),
            None => missing.push(id.clone()),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        let count = missing.len();
        missing.truncate(10);
        Err(Error::MissingLabels {
            count,
            shown: missing,
        })
    }
}

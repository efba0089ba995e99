//! Categorical records, contingency tables, row profiles and design matrices.

use std::collections::HashMap;
use std::path::Path;

use ndarray::Array2;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table_io::{self, LabeledMatrix, NumFormat};

/// A categorical variable and its ordered levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub levels: Vec<String>,
}

impl Variable {
    pub fn level_index(&self, level: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == level)
    }
}

/// Variable names and level catalogs. Fixed when a dataset is loaded and
/// carried by every model so later data maps onto the same axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub explanatory: Vec<Variable>,
    pub response: Variable,
}

impl Schema {
    /// Stacked explanatory level labels, `variable-level`, in block order.
    pub fn row_labels(&self) -> Vec<String> {
        self.explanatory
            .iter()
            .flat_map(|v| v.levels.iter().map(move |l| format!("{}-{}", v.name, l)))
            .collect()
    }

    pub fn col_labels(&self) -> Vec<String> {
        self.response.levels.clone()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.explanatory.iter().map(|v| v.levels.len()).collect()
    }

    /// Total number of explanatory levels, `I`.
    pub fn n_inputs(&self) -> usize {
        self.explanatory.iter().map(|v| v.levels.len()).sum()
    }

    pub fn n_outputs(&self) -> usize {
        self.response.levels.len()
    }

    fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.explanatory
            .iter()
            .map(|v| {
                let o = acc;
                acc += v.levels.len();
                o
            })
            .collect()
    }
}

/// One individual: a level index per explanatory variable and a response index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Record {
    pub explanatory: Vec<usize>,
    pub response: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalDataset {
    pub schema: Schema,
    pub records: Vec<Record>,
}

impl CategoricalDataset {
    /// Reads individual records; every column other than `response` is explanatory.
    /// Level catalogs are built in order of first appearance.
    pub fn load(path: &Path, response: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, response)
    }

    pub fn parse(text: &str, response: &str) -> Result<Self> {
        let (header, rows) = read_rows(text)?;
        let resp_col = header
            .iter()
            .position(|h| h == response)
            .ok_or_else(|| Error::UnknownVariable(response.to_string()))?;
        let expl_cols: Vec<usize> = (0..header.len()).filter(|&c| c != resp_col).collect();

        let mut catalogs: Vec<Catalog> = vec![Catalog::default(); header.len()];
        let mut records = Vec::with_capacity(rows.len());
        for (line, fields) in rows {
            if fields.len() != header.len() || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Record {
                    row: line,
                    msg: format!("expected {} non-empty fields", header.len()),
                });
            }
            let explanatory = expl_cols
                .iter()
                .map(|&c| catalogs[c].intern(&fields[c]))
                .collect();
            let response = catalogs[resp_col].intern(&fields[resp_col]);
            records.push(Record {
                explanatory,
                response,
            });
        }
        let mut take = |c: usize| Variable {
            name: header[c].clone(),
            levels: std::mem::take(&mut catalogs[c].levels),
        };
        let explanatory = expl_cols.iter().map(|&c| take(c)).collect();
        let response = take(resp_col);
        Ok(CategoricalDataset {
            schema: Schema {
                explanatory,
                response,
            },
            records,
        })
    }

    /// Reads records against an existing schema. Columns are matched by name;
    /// levels outside the schema's catalogs are rejected.
    pub fn load_with_schema(path: &Path, schema: &Schema) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_with_schema(&text, schema)
    }

    pub fn parse_with_schema(text: &str, schema: &Schema) -> Result<Self> {
        let (header, rows) = read_rows(text)?;
        let col_of = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let expl_cols = schema
            .explanatory
            .iter()
            .map(|v| col_of(&v.name))
            .collect::<Result<Vec<_>>>()?;
        let resp_col = col_of(&schema.response.name)?;
        let lookup = |var: &Variable, level: &str| {
            var.level_index(level).ok_or_else(|| Error::UnknownLevel {
                axis: var.name.clone(),
                level: level.to_string(),
            })
        };
        let mut records = Vec::with_capacity(rows.len());
        for (line, fields) in rows {
            if fields.len() != header.len() {
                return Err(Error::Record {
                    row: line,
                    msg: format!("expected {} fields", header.len()),
                });
            }
            let explanatory = schema
                .explanatory
                .iter()
                .zip(&expl_cols)
                .map(|(v, &c)| lookup(v, &fields[c]))
                .collect::<Result<Vec<_>>>()?;
            let response = lookup(&schema.response, &fields[resp_col])?;
            records.push(Record {
                explanatory,
                response,
            });
        }
        Ok(CategoricalDataset {
            schema: schema.clone(),
            records,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn subset(&self, idx: &[usize]) -> Self {
        CategoricalDataset {
            schema: self.schema.clone(),
            records: idx.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }

    /// Response labels of every record, in record order.
    pub fn response_labels(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.response).collect()
    }

    /// Writes the records back out as CSV, explanatory columns first.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut header: Vec<&str> = self
            .schema
            .explanatory
            .iter()
            .map(|v| v.name.as_str())
            .collect();
        header.push(&self.schema.response.name);
        let rows: Vec<Vec<String>> = self
            .records
            .iter()
            .map(|r| {
                let mut row: Vec<String> = r
                    .explanatory
                    .iter()
                    .zip(&self.schema.explanatory)
                    .map(|(&l, v)| v.levels[l].clone())
                    .collect();
                row.push(self.schema.response.levels[r.response].clone());
                row
            })
            .collect();
        table_io::render_rows(&header, &rows)
    }
}

#[derive(Debug, Clone, Default)]
struct Catalog {
    levels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Catalog {
    fn intern(&mut self, level: &str) -> usize {
        if let Some(&i) = self.index.get(level) {
            return i;
        }
        let i = self.levels.len();
        self.levels.push(level.to_string());
        self.index.insert(level.to_string(), i);
        i
    }
}

type Rows = Vec<(usize, Vec<String>)>;

fn read_rows(text: &str) -> Result<(Vec<String>, Rows)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header.is_empty() || header.iter().any(String::is_empty) {
        return Err(Error::Record {
            row: 1,
            msg: "header must name every column".into(),
        });
    }
    let mut rows = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        rows.push((idx + 2, rec.iter().map(|f| f.trim().to_string()).collect()));
    }
    Ok((header, rows))
}

/// Counts of explanatory level (rows) by response level (columns).
///
/// With several explanatory variables the rows are stacked blocks, one per
/// variable, so every individual contributes one count to each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Array2<u64>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub block_sizes: Vec<usize>,
}

impl ContingencyTable {
    pub fn new(counts: Array2<u64>, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if counts.dim() != (row_labels.len(), col_labels.len()) {
            return Err(Error::shape(format!(
                "counts are {:?} but labels are {}x{}",
                counts.dim(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        if counts.is_empty() || counts.sum() == 0 {
            return Err(Error::Degenerate("contingency table has zero total".into()));
        }
        let block_sizes = vec![row_labels.len()];
        Ok(ContingencyTable {
            counts,
            row_labels,
            col_labels,
            block_sizes,
        })
    }

    /// Reads a pre-tabulated counts CSV: first column row labels, first row
    /// column labels, non-negative integer cells.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Format {
                path: path.to_path_buf(),
                msg,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let col_labels: Vec<String> = rdr
            .headers()?
            .iter()
            .skip(1)
            .map(|h| h.trim().to_string())
            .collect();
        let mut row_labels = Vec::new();
        let mut flat = Vec::new();
        for (idx, rec) in rdr.records().enumerate() {
            let rec = rec?;
            row_labels.push(rec[0].trim().to_string());
            for cell in rec.iter().skip(1) {
                let n: u64 = cell.trim().parse().map_err(|_| {
                    Error::invalid(format!(
                        "line {}: `{cell}` is not a non-negative integer",
                        idx + 2
                    ))
                })?;
                flat.push(n);
            }
        }
        let counts = Array2::from_shape_vec((row_labels.len(), col_labels.len()), flat)
            .map_err(|e| Error::shape(e.to_string()))?;
        Self::new(counts, row_labels, col_labels)
    }

    pub fn n_rows(&self) -> usize {
        self.counts.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.counts.ncols()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.rows().into_iter().map(|r| r.sum()).collect()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.sum()
    }

    pub fn to_csv_string(&self, corner: &str) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .row_labels
            .iter()
            .zip(self.counts.rows())
            .map(|(l, r)| std::iter::once(l.clone()).chain(r.iter().map(u64::to_string)).collect())
            .collect();
        let mut header = vec![corner];
        header.extend(self.col_labels.iter().map(String::as_str));
        table_io::render_rows(&header, &rows)
    }
}

/// Tallies the dataset into stacked explanatory blocks by response level.
pub fn contingency_table(ds: &CategoricalDataset) -> Result<ContingencyTable> {
    if ds.is_empty() {
        return Err(Error::Degenerate("dataset has no records".into()));
    }
    let schema = &ds.schema;
    let offsets = schema.block_offsets();
    let mut counts = Array2::<u64>::zeros((schema.n_inputs(), schema.n_outputs()));
    for r in &ds.records {
        for (&level, &off) in r.explanatory.iter().zip(&offsets) {
            counts[[off + level, r.response]] += 1;
        }
    }
    Ok(ContingencyTable {
        counts,
        row_labels: schema.row_labels(),
        col_labels: schema.col_labels(),
        block_sizes: schema.block_sizes(),
    })
}

/// Conditional proportions `p(j|i)`; every row sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionMatrix<T> {
    pub profiles: Array2<T>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl<T: Scalar> CompositionMatrix<T> {
    pub fn to_labeled(&self, corner: &str) -> LabeledMatrix<T> {
        LabeledMatrix {
            corner: corner.to_string(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            values: self.profiles.clone(),
        }
    }

    pub fn to_csv_string(&self, corner: &str) -> Result<String> {
        self.to_labeled(corner).to_csv_string(NumFormat::Sig6)
    }
}

pub fn row_profiles<T: Scalar>(ct: &ContingencyTable) -> Result<CompositionMatrix<T>> {
    let mut profiles = Array2::<T>::zeros(ct.counts.dim());
    for (i, row) in ct.counts.rows().into_iter().enumerate() {
        let total: u64 = row.sum();
        if total == 0 {
            return Err(Error::ZeroRow(ct.row_labels[i].clone()));
        }
        let total = T::lit(total as f64);
        for (j, &n) in row.iter().enumerate() {
            profiles[[i, j]] = T::lit(n as f64) / total;
        }
    }
    Ok(CompositionMatrix {
        profiles,
        row_labels: ct.row_labels.clone(),
        col_labels: ct.col_labels.clone(),
    })
}

/// One-hot design matrices: `x` is N×I with one block per explanatory
/// variable, `y` is N×J.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrices<T> {
    pub x: Array2<T>,
    pub y: Array2<T>,
    pub x_labels: Vec<String>,
    pub y_labels: Vec<String>,
}

pub fn dummy_code<T: Scalar>(ds: &CategoricalDataset) -> Result<DesignMatrices<T>> {
    if ds.is_empty() {
        return Err(Error::Degenerate("dataset has no records".into()));
    }
    let schema = &ds.schema;
    let offsets = schema.block_offsets();
    let n = ds.len();
    let mut x = Array2::<T>::zeros((n, schema.n_inputs()));
    let mut y = Array2::<T>::zeros((n, schema.n_outputs()));
    for (row, r) in ds.records.iter().enumerate() {
        for (&level, &off) in r.explanatory.iter().zip(&offsets) {
            x[[row, off + level]] = T::one();
        }
        y[[row, r.response]] = T::one();
    }
    Ok(DesignMatrices {
        x,
        y,
        x_labels: schema.row_labels(),
        y_labels: schema.col_labels(),
    })
}

/// Seeded partition into (train, test). The train part gets
/// `floor(N * train_fraction)` records; both keep the original record order.
pub fn split(
    ds: &CategoricalDataset,
    train_fraction: f64,
    test_fraction: f64,
    seed: u64,
) -> Result<(CategoricalDataset, CategoricalDataset)> {
    for f in [train_fraction, test_fraction] {
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::invalid(format!("split fraction {f} outside (0, 1)")));
        }
    }
    if (train_fraction + test_fraction - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("split fractions must sum to 1"));
    }
    let n = ds.len();
    let n_train = ((n as f64) * train_fraction + 1e-9).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut crate::seeded_rng(seed));
    let mut train_idx = order[..n_train].to_vec();
    let mut test_idx = order[n_train..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    fn small() -> CategoricalDataset {
        CategoricalDataset::parse("P,Y\n1,1\n2,1\n1,1\n", "Y").unwrap()
    }

    #[test]
    fn parse_builds_catalogs_in_first_appearance_order() {
        let ds = CategoricalDataset::parse("Y,P\nb,2\na,1\nb,3\nc,1\nd,2\n", "Y").unwrap();
        assert_eq!(ds.len(), 5);
        assert_eq!(ds.schema.response.levels, vec!["b", "a", "c", "d"]);
        assert_eq!(ds.schema.explanatory[0].levels, vec!["2", "1", "3"]);
        assert_eq!(ds.schema.n_outputs(), 4);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            CategoricalDataset::parse("P,Y\n1,1\n", "Z"),
            Err(Error::UnknownVariable(_))
        ));
        let err = CategoricalDataset::parse("P,Y\n1,1\n2,\n", "Y").unwrap_err();
        assert!(matches!(err, Error::Record { row: 3, .. }), "{err}");
        let err = CategoricalDataset::parse("P,Y\n1,1\n2\n", "Y").unwrap_err();
        assert!(matches!(err, Error::Record { row: 3, .. }), "{err}");
        let err = CategoricalDataset::load(Path::new("/nonexistent/x.csv"), "Y").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn schema_parse_rejects_unseen_levels() {
        let ds = small();
        let ok = CategoricalDataset::parse_with_schema("Y,P\n1,2\n", &ds.schema).unwrap();
        assert_eq!(ok.records[0].explanatory, vec![1]);
        let err = CategoricalDataset::parse_with_schema("P,Y\n7,1\n", &ds.schema).unwrap_err();
        assert!(matches!(err, Error::UnknownLevel { .. }));
    }

    #[test]
    fn tally_small_dataset() {
        let ct = contingency_table(&small()).unwrap();
        assert_eq!(ct.counts, array![[2u64], [1]]);
        assert_eq!(ct.row_labels, vec!["P-1", "P-2"]);
    }

    #[test]
    fn empty_cells_keep_their_row() {
        let ds = CategoricalDataset::parse("P,Y\n1,a\n2,b\n", "Y").unwrap();
        let ct = contingency_table(&ds).unwrap();
        assert_eq!(ct.counts, array![[1u64, 0], [0, 1]]);
    }

    #[test]
    fn stacked_blocks_count_every_record_once_per_variable() {
        let ds = CategoricalDataset::parse("A,B,Y\n0,1,x\n1,1,y\n0,0,x\n", "Y").unwrap();
        let ct = contingency_table(&ds).unwrap();
        assert_eq!(ct.block_sizes, vec![2, 2]);
        assert_eq!(ct.counts.slice(ndarray::s![0..2, ..]).sum(), 3);
        assert_eq!(ct.counts.slice(ndarray::s![2..4, ..]).sum(), 3);
    }

    #[test]
    fn profiles_of_first_example_row() {
        let ct = ContingencyTable::new(
            array![[164u64, 2, 0, 0]],
            vec!["1".into()],
            (1..=4).map(|j| j.to_string()).collect(),
        )
        .unwrap();
        let p = row_profiles::<f64>(&ct).unwrap();
        assert!((p.profiles[[0, 0]] - 164.0 / 166.0).abs() < 1e-12);
        assert!((p.profiles[[0, 0]] - 0.988).abs() < 1e-3);
        assert!((p.profiles[[0, 1]] - 0.012).abs() < 1e-3);
        assert_eq!(p.profiles[[0, 2]], 0.0);
    }

    #[test]
    fn single_column_profiles_are_ones() {
        let ct = ContingencyTable::new(array![[3u64], [5]], vec!["a".into(), "b".into()], vec!["y".into()]).unwrap();
        let p = row_profiles::<f64>(&ct).unwrap();
        assert_eq!(p.profiles, array![[1.0], [1.0]]);
    }

    #[test]
    fn zero_row_is_named() {
        let ct = ContingencyTable::new(array![[3u64, 1], [0, 0]], vec!["a".into(), "dead".into()], vec!["y".into(), "z".into()]).unwrap();
        match row_profiles::<f64>(&ct) {
            Err(Error::ZeroRow(label)) => assert_eq!(label, "dead"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn counts_csv_round_trip_and_errors() {
        let text = ",1,2\nA,3,4\nB,0,7\n";
        let ct = ContingencyTable::parse(text).unwrap();
        assert_eq!(ct.counts, array![[3u64, 4], [0, 7]]);
        assert_eq!(ct.to_csv_string("").unwrap(), text);
        assert!(ContingencyTable::parse(",1\nA,-1\n").is_err());
        assert!(ContingencyTable::parse(",1\nA,0\n").is_err());
    }

    #[test]
    fn one_hot_rows() {
        let ds = CategoricalDataset::parse("P,Y\n1,1\n2,2\n3,3\n4,4\n5,3\n6,1\n2,3\n", "Y").unwrap();
        let dm = dummy_code::<f64>(&ds).unwrap();
        assert_eq!(dm.x.row(6).to_vec(), vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(dm.y.row(6).to_vec(), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn split_sizes() {
        let text: String = std::iter::once("P,Y".to_string())
            .chain((0..1000).map(|i| format!("{},{}", i % 6, i % 4)))
            .collect::<Vec<_>>()
            .join("\n");
        let ds = CategoricalDataset::parse(&text, "Y").unwrap();
        let (tr, te) = split(&ds, 0.8, 0.2, 3).unwrap();
        assert_eq!((tr.len(), te.len()), (800, 200));
        let (tr2, te2) = split(&ds, 0.8, 0.2, 3).unwrap();
        assert_eq!(tr, tr2);
        assert_eq!(te, te2);
        let half = CategoricalDataset {
            schema: ds.schema.clone(),
            records: ds.records[..500].to_vec(),
        };
        let (tr, te) = split(&half, 0.8, 0.2, 9).unwrap();
        assert_eq!((tr.len(), te.len()), (400, 100));
        assert!(split(&ds, 1.0, 0.0, 1).is_err());
        assert!(split(&ds, 0.5, 0.4, 1).is_err());
    }

    fn dataset_strategy() -> impl Strategy<Value = CategoricalDataset> {
        prop::collection::vec((0usize..3, 0usize..4, 0usize..3), 1..60).prop_map(|rows| {
            let text: String = std::iter::once("A,B,Y".to_string())
                .chain(rows.iter().map(|(a, b, y)| format!("a{a},b{b},y{y}")))
                .collect::<Vec<_>>()
                .join("\n");
            CategoricalDataset::parse(&text, "Y").unwrap()
        })
    }

    proptest! {
        #[test]
        fn design_column_sums_match_level_frequencies(ds in dataset_strategy()) {
            let dm = dummy_code::<f64>(&ds).unwrap();
            let ct = contingency_table(&ds).unwrap();
            let xs = dm.x.sum_axis(ndarray::Axis(0));
            for (i, total) in ct.row_totals().into_iter().enumerate() {
                prop_assert_eq!(xs[i], total as f64);
            }
            let ys = dm.y.sum_axis(ndarray::Axis(0));
            for j in 0..ds.schema.n_outputs() {
                let freq = ds.records.iter().filter(|r| r.response == j).count();
                prop_assert_eq!(ys[j], freq as f64);
            }
            for row in dm.x.rows() {
                prop_assert_eq!(row.sum(), 2.0);
            }
        }

        #[test]
        fn profiles_times_totals_reproduce_counts(ds in dataset_strategy()) {
            let ct = contingency_table(&ds).unwrap();
            let nonzero: Vec<usize> = (0..ct.n_rows()).filter(|&i| ct.row_totals()[i] > 0).collect();
            let sub = ContingencyTable::new(
                ct.counts.select(ndarray::Axis(0), &nonzero),
                nonzero.iter().map(|&i| ct.row_labels[i].clone()).collect(),
                ct.col_labels.clone(),
            ).unwrap();
            let p = row_profiles::<f64>(&sub).unwrap();
            for (i, total) in sub.row_totals().into_iter().enumerate() {
                prop_assert!((p.profiles.row(i).sum() - 1.0).abs() < 1e-9);
                for j in 0..sub.n_cols() {
                    prop_assert!((p.profiles[[i, j]] * total as f64 - sub.counts[[i, j]] as f64).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn tally_ignores_record_order(ds in dataset_strategy(), seed in any::<u64>()) {
            let mut shuffled = ds.clone();
            shuffled.records.shuffle(&mut crate::seeded_rng(seed));
            prop_assert_eq!(contingency_table(&ds).unwrap(), contingency_table(&shuffled).unwrap());
        }
    }
}

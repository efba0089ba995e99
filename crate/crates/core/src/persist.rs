//! On-disk model directories: labeled CSVs for every parameter block, a
//! `meta.txt` of `key=value` lines and the `schema.json` the model was fitted
//! against.

use std::path::Path;

use ndarray::{Array1, Array2, Axis};

use crate::data::Schema;
use crate::error::{Error, Result};
use crate::lba::LbaModel;
use crate::nn::Network;
use crate::scalar::Scalar;
use crate::table_io::{read_key_values, render_key_values, write_string, LabeledMatrix, NumFormat};
use crate::tuning::TrialConfig;

pub const META_FILE: &str = "meta.txt";
pub const SCHEMA_FILE: &str = "schema.json";

fn k_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn write_matrix<T: Scalar>(dir: &Path, file: &str, corner: &str, rows: Vec<String>, cols: Vec<String>, values: Array2<T>) -> Result<()> {
    LabeledMatrix {
        corner: corner.to_string(),
        row_labels: rows,
        col_labels: cols,
        values,
    }
    .write(&dir.join(file), NumFormat::RoundTrip)
}

fn read_matrix<T: Scalar>(dir: &Path, file: &str) -> Result<LabeledMatrix<T>> {
    LabeledMatrix::read(&dir.join(file))
}

fn write_schema(dir: &Path, schema: &Schema) -> Result<()> {
    write_string(&dir.join(SCHEMA_FILE), &(serde_json::to_string_pretty(schema)? + "\n"))
}

fn read_schema(dir: &Path) -> Result<Schema> {
    let path = dir.join(SCHEMA_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

struct Meta {
    path: std::path::PathBuf,
    pairs: Vec<(String, String)>,
}

impl Meta {
    fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(META_FILE);
        Ok(Meta {
            pairs: read_key_values(&path)?,
            path,
        })
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| self.err(format!("missing key `{key}`")))
    }

    fn parse<V: std::str::FromStr>(&self, key: &str) -> Result<V> {
        self.get(key)?
            .parse()
            .map_err(|_| self.err(format!("bad value for `{key}`")))
    }

    fn err(&self, msg: String) -> Error {
        Error::Format {
            path: self.path.clone(),
            msg,
        }
    }
}

pub fn save_lba<T: Scalar>(m: &LbaModel<T>, schema: &Schema, dir: &Path) -> Result<()> {
    let k = m.k();
    write_matrix(dir, "A.csv", "mixing", m.row_labels.clone(), k_labels("k", k), m.a.clone())?;
    write_matrix(dir, "B.csv", "budget", m.col_labels.clone(), k_labels("k", k), m.b.clone())?;
    let trace = Array2::from_shape_vec((m.loglik_trace.len(), 1), m.loglik_trace.clone())
        .expect("column vector");
    write_matrix(
        dir,
        "loglik_trace.csv",
        "iteration",
        (0..m.loglik_trace.len()).map(|i| i.to_string()).collect(),
        vec!["loglik".into()],
        trace,
    )?;
    write_schema(dir, schema)?;
    let meta = render_key_values(&[
        ("kind", "lba".into()),
        ("k", k.to_string()),
        ("loglik", format!("{}", m.loglik())),
        ("converged", m.converged.to_string()),
        ("iterations", m.iterations().to_string()),
        ("seed", m.seed.to_string()),
        ("restart", m.restart.to_string()),
    ]);
    write_string(&dir.join(META_FILE), &meta)
}

pub fn load_lba<T: Scalar>(dir: &Path) -> Result<(LbaModel<T>, Schema)> {
    let meta = Meta::read(dir)?;
    if meta.get("kind")? != "lba" {
        return Err(meta.err("not an LBA model directory".into()));
    }
    let a = read_matrix::<T>(dir, "A.csv")?;
    let b = read_matrix::<T>(dir, "B.csv")?;
    let k: usize = meta.parse("k")?;
    if a.values.ncols() != k || b.values.ncols() != k {
        return Err(meta.err(format!("A and B must have {k} columns")));
    }
    let trace = read_matrix::<T>(dir, "loglik_trace.csv")
        .map(|t| t.values.column(0).to_vec())
        .unwrap_or_else(|_| vec![T::lit(meta.parse::<f64>("loglik").unwrap_or(f64::NAN))]);
    let model = LbaModel {
        a: a.values,
        b: b.values,
        loglik_trace: trace,
        converged: meta.parse("converged")?,
        row_labels: a.row_labels,
        col_labels: b.row_labels,
        seed: meta.parse("seed")?,
        restart: meta.parse("restart")?,
    };
    Ok((model, read_schema(dir)?))
}

pub fn save_network<T: Scalar>(net: &Network<T>, config: &TrialConfig, schema: &Schema, dir: &Path) -> Result<()> {
    let l = net.n_hidden();
    let hidden = k_labels("h", l);
    write_matrix(dir, "A_prime.csv", "input", net.input_labels.clone(), hidden.clone(), net.a.clone())?;
    write_matrix(dir, "Bt_prime.csv", "hidden", hidden.clone(), net.output_labels.clone(), net.bt.clone())?;
    write_matrix(dir, "b1.csv", "hidden", hidden, vec!["bias".into()], net.b1.clone().insert_axis(Axis(1)))?;
    write_matrix(dir, "b2.csv", "output", net.output_labels.clone(), vec!["bias".into()], net.b2.clone().insert_axis(Axis(1)))?;
    write_schema(dir, schema)?;
    let mut meta = render_key_values(&[("kind", "nn".into())]);
    meta.push_str(&config.to_key_values());
    write_string(&dir.join(META_FILE), &meta)
}

pub fn load_network<T: Scalar>(dir: &Path) -> Result<(Network<T>, TrialConfig, Schema)> {
    let meta = Meta::read(dir)?;
    if meta.get("kind")? != "nn" {
        return Err(meta.err("not a network model directory".into()));
    }
    let pairs: Vec<(String, String)> = meta.pairs.iter().filter(|(k, _)| k != "kind").cloned().collect();
    let config = TrialConfig::from_key_values(&pairs)?;
    let a = read_matrix::<T>(dir, "A_prime.csv")?;
    let bt = read_matrix::<T>(dir, "Bt_prime.csv")?;
    let b1 = read_matrix::<T>(dir, "b1.csv")?;
    let b2 = read_matrix::<T>(dir, "b2.csv")?;
    let column = |m: LabeledMatrix<T>| -> Array1<T> { m.values.column(0).to_owned() };
    let net = Network {
        a: a.values,
        b1: column(b1),
        bt: bt.values,
        b2: column(b2),
        act1: config.act1,
        act2: config.act2,
        input_labels: a.row_labels,
        output_labels: bt.col_labels,
    };
    if net.n_hidden() != config.hidden || net.b1.len() != config.hidden || net.bt.nrows() != config.hidden {
        return Err(meta.err("parameter shapes disagree with `hidden`".into()));
    }
    Ok((net, config, read_schema(dir)?))
}

/// Either kind of fitted model, as found in a model directory.
#[derive(Debug, Clone)]
pub enum SavedModel<T> {
    Lba(LbaModel<T>),
    Nn(Network<T>, TrialConfig),
}

pub fn load_model<T: Scalar>(dir: &Path) -> Result<(SavedModel<T>, Schema)> {
    let meta = Meta::read(dir)?;
    match meta.get("kind")? {
        "lba" => load_lba(dir).map(|(m, s)| (SavedModel::Lba(m), s)),
        "nn" => load_network(dir).map(|(n, c, s)| (SavedModel::Nn(n, c), s)),
        other => Err(meta.err(format!("unknown model kind `{other}`"))),
    }
}

//! Grid search over LBA-NN hyperparameters, selected on final validation loss.

use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nn::{init_network, train, Activation, LossKind, TrainConfig};
use crate::scalar::Scalar;
use crate::table_io::{fmt_sig, render_key_values, render_rows};

/// Candidate values per hyperparameter. Trial `t` uses seed `base_seed + t`
/// for both initialisation and training.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub hidden: Vec<usize>,
    pub act1: Vec<Activation>,
    pub act2: Vec<Activation>,
    pub learning_rate: Vec<f64>,
    pub epochs: Vec<usize>,
    pub loss: Vec<LossKind>,
    pub batch_size: Vec<usize>,
    pub validation_fraction: f64,
    pub base_seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        let t = TrainConfig::default();
        GridSpec {
            hidden: vec![8],
            act1: vec![Activation::Linear],
            act2: vec![Activation::Linear],
            learning_rate: vec![t.learning_rate],
            epochs: vec![t.epochs],
            loss: vec![t.loss],
            batch_size: vec![t.batch_size],
            validation_fraction: t.validation_fraction,
            base_seed: t.seed,
        }
    }
}

fn parse_list<V: FromStr>(key: &str, value: &str) -> Result<Vec<V>> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("`{v}` is not a valid value for {key}")))
        })
        .collect()
}

fn join<V: ToString>(values: &[V]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl GridSpec {
    /// Parses `key=value[,value...]` pairs. Keys not given keep their defaults.
    pub fn from_key_values(pairs: &[(String, String)]) -> Result<Self> {
        let mut spec = GridSpec::default();
        for (k, v) in pairs {
            match k.as_str() {
                "hidden" => spec.hidden = parse_list(k, v)?,
                "act1" => spec.act1 = parse_list(k, v)?,
                "act2" => spec.act2 = parse_list(k, v)?,
                "lr" | "learning_rate" => spec.learning_rate = parse_list(k, v)?,
                "epochs" => spec.epochs = parse_list(k, v)?,
                "loss" => spec.loss = parse_list(k, v)?,
                "batch_size" => spec.batch_size = parse_list(k, v)?,
                "val_fraction" | "validation_fraction" => {
                    spec.validation_fraction = single(k, v)?
                }
                "seed" => spec.base_seed = single(k, v)?,
                other => return Err(Error::invalid(format!("unknown grid key `{other}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_key_values(&self) -> String {
        render_key_values(&[
            ("hidden", join(&self.hidden)),
            ("act1", join(&self.act1)),
            ("act2", join(&self.act2)),
            ("lr", join(&self.learning_rate)),
            ("epochs", join(&self.epochs)),
            ("loss", join(&self.loss)),
            ("batch_size", join(&self.batch_size)),
            ("val_fraction", self.validation_fraction.to_string()),
            ("seed", self.base_seed.to_string()),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = [
            ("hidden", self.hidden.len()),
            ("act1", self.act1.len()),
            ("act2", self.act2.len()),
            ("lr", self.learning_rate.len()),
            ("epochs", self.epochs.len()),
            ("loss", self.loss.len()),
            ("batch_size", self.batch_size.len()),
        ];
        if let Some((k, _)) = sizes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::invalid(format!("grid list `{k}` is empty")));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::invalid("grid search needs a validation fraction in (0, 1)"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.hidden.len()
            * self.act1.len()
            * self.act2.len()
            * self.learning_rate.len()
            * self.epochs.len()
            * self.loss.len()
            * self.batch_size.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cartesian product in declaration order, last key varying fastest.
    pub fn trials(&self) -> Vec<TrialConfig> {
        let mut out = Vec::with_capacity(self.len());
        for &hidden in &self.hidden {
            for &act1 in &self.act1 {
                for &act2 in &self.act2 {
                    for &lr in &self.learning_rate {
                        for &epochs in &self.epochs {
                            for &loss in &self.loss {
                                for &batch_size in &self.batch_size {
                                    let seed = self.base_seed.wrapping_add(out.len() as u64);
                                    out.push(TrialConfig {
                                        hidden,
                                        act1,
                                        act2,
                                        train: TrainConfig {
                                            epochs,
                                            learning_rate: lr,
                                            validation_fraction: self.validation_fraction,
                                            loss,
                                            batch_size,
                                            seed,
                                        },
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn single<V: FromStr>(key: &str, value: &str) -> Result<V> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("`{value}` is not a valid value for {key}")))
}

/// Everything needed to build and train one network.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub hidden: usize,
    pub act1: Activation,
    pub act2: Activation,
    pub train: TrainConfig,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            hidden: 8,
            act1: Activation::Linear,
            act2: Activation::Linear,
            train: TrainConfig::default(),
        }
    }
}

impl TrialConfig {
    /// Reusable training-config file, the same `key=value` format as a grid.
    pub fn to_key_values(&self) -> String {
        render_key_values(&[
            ("hidden", self.hidden.to_string()),
            ("act1", self.act1.to_string()),
            ("act2", self.act2.to_string()),
            ("lr", self.train.learning_rate.to_string()),
            ("epochs", self.train.epochs.to_string()),
            ("loss", self.train.loss.to_string()),
            ("batch_size", self.train.batch_size.to_string()),
            ("val_fraction", self.train.validation_fraction.to_string()),
            ("seed", self.train.seed.to_string()),
        ])
    }

    /// Reads a config written by [`TrialConfig::to_key_values`]; every list
    /// must hold exactly one value.
    pub fn from_key_values(pairs: &[(String, String)]) -> Result<Self> {
        let spec = GridSpec::from_key_values(pairs)?;
        if spec.len() != 1 {
            return Err(Error::invalid("a training config must hold a single value per key"));
        }
        Ok(spec.trials().pop().expect("one trial"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult<T> {
    pub index: usize,
    pub config: TrialConfig,
    pub val_loss: Option<T>,
    pub train_loss: Option<T>,
    /// Set when the trial could not be trained or produced a non-finite loss.
    pub failure: Option<String>,
}

impl<T: Scalar> TrialResult<T> {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

fn run_trial<T: Scalar>(x: &Array2<T>, y: &Array2<T>, index: usize, config: TrialConfig) -> TrialResult<T> {
    let outcome = init_network::<T>(
        x.ncols(),
        config.hidden,
        y.ncols(),
        config.act1,
        config.act2,
        config.train.seed,
    )
    .and_then(|net| train(&net, x, y, &config.train));
    match outcome {
        Ok((_, trace)) => {
            let val = trace.final_val_loss();
            let tr = trace.final_train_loss();
            let failure = match val {
                Some(v) if v.is_finite() && tr.is_finite() => None,
                _ => Some("non-finite loss".to_string()),
            };
            TrialResult {
                index,
                config,
                val_loss: val,
                train_loss: Some(tr),
                failure,
            }
        }
        Err(e) => TrialResult {
            index,
            config,
            val_loss: None,
            train_loss: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Trains one network per grid point (in parallel) and returns the trial
/// with the lowest final validation loss together with every trial in index
/// order. Ties go to the lowest index.
pub fn grid_search<T: Scalar>(
    x: &Array2<T>,
    y: &Array2<T>,
    spec: &GridSpec,
) -> Result<(TrialResult<T>, Vec<TrialResult<T>>)> {
    spec.validate()?;
    let all: Vec<TrialResult<T>> = spec
        .trials()
        .into_par_iter()
        .enumerate()
        .map(|(index, cfg)| run_trial(x, y, index, cfg))
        .collect();
    let mut best: Option<&TrialResult<T>> = None;
    for t in all.iter().filter(|t| !t.failed()) {
        if best.is_none_or(|b| t.val_loss < b.val_loss) {
            best = Some(t);
        }
    }
    match best {
        Some(b) => Ok((b.clone(), all)),
        None => Err(Error::AllTrialsFailed(
            all.iter()
                .map(|t| format!("trial {}: {}", t.index, t.failure.as_deref().unwrap_or("?")))
                .collect(),
        )),
    }
}

pub fn results_csv<T: Scalar>(all: &[TrialResult<T>]) -> Result<String> {
    let fmt = |v: Option<T>| v.map_or_else(|| "NA".to_string(), |x| fmt_sig(x.as_f64(), 6));
    let rows: Vec<Vec<String>> = all
        .iter()
        .map(|t| {
            vec![
                t.index.to_string(),
                t.config.hidden.to_string(),
                t.config.act1.to_string(),
                t.config.act2.to_string(),
                t.config.train.learning_rate.to_string(),
                t.config.train.epochs.to_string(),
                t.config.train.loss.to_string(),
                t.config.train.batch_size.to_string(),
                t.config.train.seed.to_string(),
                fmt(t.train_loss),
                fmt(t.val_loss),
                t.failure.clone().unwrap_or_default(),
            ]
        })
        .collect();
    render_rows(
        &[
            "trial", "hidden", "act1", "act2", "lr", "epochs", "loss", "batch_size", "seed",
            "train_loss", "val_loss", "failure",
        ],
        &rows,
    )
}

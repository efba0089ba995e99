use std::path::Path;

use lbann_core::cluster::{attribute_explanatory, biplot, kmeans_restarts};
use lbann_core::data::{
    contingency_table, dummy_code, split, CategoricalDataset, CompositionMatrix, ContingencyTable, Schema,
    Variable,
};
use lbann_core::eval::{confusion, metrics, render_text};
use lbann_core::importance::{connection_weights, plot_data_csv, ImportanceTable};
use lbann_core::lba::{self, budget_proportions, expected_budgets, lba_predict, FitConfig, Prediction};
use lbann_core::nn::{init_network, nn_predict, train, Activation, LossKind, Network};
use lbann_core::persist::{load_model, save_lba, save_network, SavedModel};
use lbann_core::table_io::{read_key_values, render_rows, LabeledMatrix, NumFormat};
use lbann_core::tuning::{grid_search, results_csv, GridSpec, TrialConfig};
use lbann_core::{generate, svg};
use ndarray::Array2;

use crate::manifest::{usage, CliResult, Run};
use crate::{ClusterArgs, DataArgs, EvaluateArgs, FitLbaArgs, FitNnArgs, GenerateArgs, ModelArgs, PredictArgs, TuneArgs};

pub const DEFAULT_SEED: u64 = 1;
const MODEL_DIR: &str = "model";

/// `explanatory/response` from a corner cell, `P`/`Y` when blank.
fn variable_names(corner: &str) -> (String, String) {
    match corner.split_once('/') {
        Some((e, r)) if !e.trim().is_empty() && !r.trim().is_empty() => {
            (e.trim().to_string(), r.trim().to_string())
        }
        _ => ("P".into(), "Y".into()),
    }
}

fn load_records(run: &mut Run, data: &DataArgs) -> CliResult<CategoricalDataset> {
    run.input(&data.records);
    Ok(CategoricalDataset::load(&data.records, &data.response)?)
}

pub fn generate(run: &mut Run, a: &GenerateArgs, seed: Option<u64>) -> CliResult<()> {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    run.seed("generator", seed);
    run.input(&a.profiles);
    let m = LabeledMatrix::<f64>::read(&a.profiles)?;
    let (expl, resp) = variable_names(&m.corner);
    let masses: Vec<f64> = match &a.masses {
        None => vec![1.0; m.row_labels.len()],
        Some(s) => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("`{v}` is not a mass"))))
            .collect::<CliResult<_>>()?,
    };
    if let Some(f) = a.test_fraction {
        if !(f > 0.0 && f < 1.0) {
            return Err(usage(format!("--test-fraction {f} outside (0, 1)")));
        }
    }
    let profiles = CompositionMatrix {
        profiles: m.values,
        row_labels: m.row_labels,
        col_labels: m.col_labels,
    };
    let ds = run.time("sample", || generate::generate_records(&profiles, &masses, a.n, seed, &expl, &resp))?;
    run.write("records.csv", &ds.to_csv_string()?)?;
    if let Some(f) = a.test_fraction {
        let (tr, te) = split(&ds, 1.0 - f, f, seed)?;
        run.write("train.csv", &tr.to_csv_string()?)?;
        run.write("test.csv", &te.to_csv_string()?)?;
        run.say(format!("{} records ({} train, {} test)", ds.len(), tr.len(), te.len()));
    } else {
        run.say(format!("{} records", ds.len()));
    }
    Ok(())
}

/// Counts file plus the schema its labels imply. Row labels may carry the
/// `variable-` prefix or be bare levels.
fn load_counts(path: &Path) -> CliResult<(ContingencyTable, Schema)> {
    let corner = LabeledMatrix::<f64>::read(path)?.corner;
    let mut ct = ContingencyTable::load(path)?;
    let (expl, resp) = variable_names(&corner);
    let prefix = format!("{expl}-");
    let levels = ct
        .row_labels
        .iter()
        .map(|l| l.strip_prefix(&prefix).unwrap_or(l).to_string())
        .collect();
    let schema = Schema {
        explanatory: vec![Variable { name: expl, levels }],
        response: Variable {
            name: resp,
            levels: ct.col_labels.clone(),
        },
    };
    ct.row_labels = schema.row_labels();
    Ok((ct, schema))
}

pub fn fit_lba(run: &mut Run, a: &FitLbaArgs, seed: Option<u64>) -> CliResult<()> {
    let (ct, schema) = match (&a.counts, &a.records) {
        (Some(path), _) => {
            run.input(path);
            load_counts(path)?
        }
        (None, Some(path)) => {
            let ds = load_records(
                run,
                &DataArgs {
                    records: path.clone(),
                    response: a.response.clone(),
                },
            )?;
            (contingency_table(&ds)?, ds.schema)
        }
        (None, None) => return Err(usage("one of --counts or --records is required")),
    };
    let k = a.k as usize;
    let k_max = ct.n_rows().min(ct.n_cols());
    if k > k_max {
        return Err(usage(format!("--k {k} exceeds min(I, J) = {k_max}")));
    }
    if !(a.tolerance > 0.0) || a.max_iterations == 0 {
        return Err(usage("--tolerance and --max-iterations must be positive"));
    }
    let cfg = FitConfig {
        k,
        max_iterations: a.max_iterations,
        tolerance: a.tolerance,
        restarts: a.restarts as usize,
        seed: seed.unwrap_or(DEFAULT_SEED),
    };
    run.seed("lba", cfg.seed);
    let model = run.time("em", || lba::fit_lba::<f64>(&ct, &cfg))?;
    let dir = run.out_dir().join(MODEL_DIR);
    save_lba(&model, &schema, &dir)?;
    run.record_dir(&dir)?;
    run.write("expected_budgets.csv", &expected_budgets(&model).to_csv_string("explanatory")?)?;
    let props = budget_proportions(&model, &ct)?;
    let rows: Vec<Vec<String>> = props
        .iter()
        .enumerate()
        .map(|(k, &p)| vec![format!("k{}", k + 1), NumFormat::Sig6.fmt(p)])
        .collect();
    run.write("budget_proportions.csv", &render_rows(&["budget", "proportion"], &rows)?)?;
    run.say(format!(
        "K={k} loglik={} converged={} restart={} proportions=[{}]",
        NumFormat::Sig6.fmt(model.loglik()),
        model.converged,
        model.restart,
        props.iter().map(|&p| NumFormat::Sig6.fmt(p)).collect::<Vec<_>>().join(", ")
    ));
    Ok(())
}

fn parse_flag<V: std::str::FromStr>(flag: &str, value: &str) -> CliResult<V> {
    value.parse().map_err(|_| usage(format!("invalid value `{value}` for --{flag}")))
}

/// Config file (or the defaults), then flag overrides.
fn resolve_trial(a: &FitNnArgs, seed: Option<u64>) -> CliResult<TrialConfig> {
    let mut cfg = match &a.config {
        Some(path) => TrialConfig::from_key_values(&read_key_values(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => {
            let hidden = a.hidden.ok_or_else(|| usage("--hidden is required without --config"))?;
            TrialConfig {
                hidden,
                ..TrialConfig::default()
            }
        }
    };
    if let Some(h) = a.hidden {
        cfg.hidden = h;
    }
    if let Some(v) = &a.act1 {
        cfg.act1 = parse_flag::<Activation>("act1", v)?;
    }
    if let Some(v) = &a.act2 {
        cfg.act2 = parse_flag::<Activation>("act2", v)?;
    }
    if let Some(v) = &a.loss {
        cfg.train.loss = parse_flag::<LossKind>("loss", v)?;
    }
    if let Some(v) = a.lr {
        cfg.train.learning_rate = v;
    }
    if let Some(v) = a.epochs {
        cfg.train.epochs = v;
    }
    if let Some(v) = a.batch_size {
        cfg.train.batch_size = v;
    }
    if let Some(v) = a.val_fraction {
        cfg.train.validation_fraction = v;
    }
    if let Some(s) = seed {
        cfg.train.seed = s;
    } else if a.config.is_none() {
        cfg.train.seed = DEFAULT_SEED;
    }
    if cfg.hidden == 0 {
        return Err(usage("--hidden must be at least 1"));
    }
    if cfg.act1 == Activation::Softmax {
        return Err(usage("softmax is not supported on the hidden layer"));
    }
    cfg.train.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

pub fn fit_nn(run: &mut Run, a: &FitNnArgs, seed: Option<u64>) -> CliResult<()> {
    let cfg = resolve_trial(a, seed)?;
    if let Some(path) = &a.config {
        run.input(path);
    }
    run.seed("nn", cfg.train.seed);
    let ds = load_records(run, &a.data)?;
    let dm = dummy_code::<f64>(&ds)?;
    let net = init_network::<f64>(dm.x.ncols(), cfg.hidden, dm.y.ncols(), cfg.act1, cfg.act2, cfg.train.seed)?
        .with_labels(dm.x_labels.clone(), dm.y_labels.clone())?;
    let (net, trace) = run.time("train", || train(&net, &dm.x, &dm.y, &cfg.train))?;
    let dir = run.out_dir().join(MODEL_DIR);
    save_network(&net, &cfg, &ds.schema, &dir)?;
    run.record_dir(&dir)?;
    let fmt = NumFormat::Sig6;
    let rows: Vec<Vec<String>> = trace
        .train_loss
        .iter()
        .enumerate()
        .map(|(e, &t)| {
            let v = trace.val_loss.as_ref().map_or_else(String::new, |v| fmt.fmt(v[e]));
            vec![(e + 1).to_string(), fmt.fmt(t), v]
        })
        .collect();
    run.write("trace.csv", &render_rows(&["epoch", "train_loss", "val_loss"], &rows)?)?;
    run.say(format!(
        "{}x{}x{} {}/{} {} final train loss {} val loss {}",
        net.n_inputs(),
        net.n_hidden(),
        net.n_outputs(),
        cfg.act1,
        cfg.act2,
        cfg.train.loss,
        fmt.fmt(trace.final_train_loss()),
        trace.final_val_loss().map_or_else(|| "NA".into(), |v| fmt.fmt(v)),
    ));
    Ok(())
}

pub fn tune(run: &mut Run, a: &TuneArgs, seed: Option<u64>) -> CliResult<()> {
    run.input(&a.grid);
    let mut spec = GridSpec::from_key_values(&read_key_values(&a.grid)?)
        .map_err(|e| usage(format!("{}: {e}", a.grid.display())))?;
    if let Some(s) = seed {
        spec.base_seed = s;
    }
    spec.validate().map_err(|e| usage(e.to_string()))?;
    run.seed("base", spec.base_seed);
    let ds = load_records(run, &a.data)?;
    let dm = dummy_code::<f64>(&ds)?;
    let outcome = run.time("grid", || grid_search(&dm.x, &dm.y, &spec));
    let (best, all) = outcome?;
    run.write("tuning_results.csv", &results_csv(&all)?)?;
    run.write("best_config.txt", &best.config.to_key_values())?;
    run.say(format!(
        "{} trials, best #{} val loss {}",
        all.len(),
        best.index,
        best.val_loss.map_or_else(|| "NA".into(), |v| NumFormat::Sig6.fmt(v)),
    ));
    Ok(())
}

struct Scored {
    schema: Schema,
    kind: &'static str,
    actual: Vec<usize>,
    one_hot: Array2<f64>,
    pred: Prediction<f64>,
}

fn score(run: &mut Run, m: &ModelArgs, records: &Path) -> CliResult<Scored> {
    run.input(&m.model);
    run.input(records);
    let (model, schema) = load_model::<f64>(&m.model)?;
    let ds = CategoricalDataset::load_with_schema(records, &schema)?;
    let dm = dummy_code::<f64>(&ds)?;
    let (kind, pred) = match &model {
        SavedModel::Lba(lba) => ("LBA", lba_predict(lba, &dm.x)?),
        SavedModel::Nn(net, _) => ("LBA-NN", nn_predict(net, &dm.x)?),
    };
    Ok(Scored {
        actual: ds.response_labels(),
        one_hot: dm.y,
        schema,
        kind,
        pred,
    })
}

fn write_scores(run: &mut Run, s: &Scored, with_actual: bool) -> CliResult<()> {
    let labels = s.schema.col_labels();
    let n = s.pred.labels.len();
    let scores = LabeledMatrix {
        corner: "record".into(),
        row_labels: (1..=n).map(|r| r.to_string()).collect(),
        col_labels: labels.clone(),
        values: s.pred.scores.clone(),
    };
    run.write("scores.csv", &scores.to_csv_string(NumFormat::Sig6)?)?;
    let rows: Vec<Vec<String>> = (0..n)
        .map(|r| {
            let mut row = vec![(r + 1).to_string()];
            if with_actual {
                row.push(labels[s.actual[r]].clone());
            }
            row.push(labels[s.pred.labels[r]].clone());
            row
        })
        .collect();
    let header: &[&str] = if with_actual {
        &["record", "actual", "predicted"]
    } else {
        &["record", "predicted"]
    };
    run.write("predictions.csv", &render_rows(header, &rows)?)
}

pub fn predict(run: &mut Run, a: &PredictArgs) -> CliResult<()> {
    let s = score(run, &a.model, &a.records)?;
    write_scores(run, &s, false)?;
    run.say(format!("{} predictions from {} model", s.pred.labels.len(), s.kind));
    Ok(())
}

pub fn evaluate(run: &mut Run, a: &EvaluateArgs) -> CliResult<()> {
    let s = score(run, &a.model, &a.records)?;
    write_scores(run, &s, true)?;
    let cm = confusion(&s.actual, &s.pred.labels, &s.schema.col_labels())?;
    let report = metrics(&cm, &s.pred.scores, &s.one_hot)?;
    run.write("confusion.csv", &cm.to_csv_string()?)?;
    run.write("confusion.svg", &svg::confusion_heatmap(&cm))?;
    run.write("metrics.json", &report.to_json()?)?;
    let name = a.name.as_deref().unwrap_or(s.kind);
    let text = render_text(&[(name, &report)]);
    run.write("metrics.txt", &text)?;
    run.say(text.trim_end());
    Ok(())
}

fn load_network(run: &mut Run, m: &ModelArgs) -> CliResult<Network<f64>> {
    run.input(&m.model);
    match load_model::<f64>(&m.model)?.0 {
        SavedModel::Nn(net, _) => Ok(net),
        SavedModel::Lba(_) => Err(usage(format!(
            "{} holds an LBA model; importance needs an LBA-NN model",
            m.model.display()
        ))),
    }
}

fn write_importance(run: &mut Run, imp: &ImportanceTable<f64>) -> CliResult<()> {
    run.write("importance.csv", &imp.to_csv_string()?)?;
    run.write("importance_plot.csv", &plot_data_csv(imp)?)?;
    run.write("importance.svg", &svg::importance_bars(imp))
}

pub fn importance(run: &mut Run, a: &ModelArgs) -> CliResult<()> {
    let net = load_network(run, a)?;
    let imp = connection_weights(&net);
    write_importance(run, &imp)?;
    run.say(format!("importance table {}x{}", imp.values.nrows(), imp.values.ncols()));
    Ok(())
}

pub fn cluster(run: &mut Run, a: &ClusterArgs, seed: Option<u64>) -> CliResult<()> {
    let net = load_network(run, &a.model)?;
    let imp = connection_weights(&net);
    let k = a.k as usize;
    let j = imp.values.nrows();
    if k > j {
        return Err(usage(format!("--k {k} exceeds the {j} response levels")));
    }
    let seed = seed.unwrap_or(DEFAULT_SEED);
    run.seed("kmeans", seed);
    let result = run.time("kmeans", || kmeans_restarts(&imp, k, seed, a.max_iterations, a.restarts as usize))?;
    let coords = biplot(&imp)?;
    run.write("clusters.csv", &result.to_csv_string()?)?;
    run.write("biplot.csv", &coords.to_csv_string()?)?;
    run.write("biplot.svg", &svg::biplot(&coords, &result))?;
    let attributed = attribute_explanatory(&result);
    run.say(format!(
        "K={k} within-SS {} explained {}/{} explanatory clusters [{}]",
        NumFormat::Sig6.fmt(result.within_ss),
        NumFormat::Sig6.fmt(coords.explained[0]),
        NumFormat::Sig6.fmt(coords.explained[1]),
        attributed.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" "),
    ));
    Ok(())
}

//! The LBA-NN: `Ŷ = σ₂(σ₁(X A′ + b₁) B′ᵀ + b₂)` trained by mini-batch
//! gradient descent.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::lba::Prediction;
use crate::scalar::Scalar;

/// Standard deviation of the initial weight distribution.
pub const INIT_STDDEV: f64 = 0.05;
/// Floor applied to predicted probabilities inside the cross-entropy log.
pub const CE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    /// Identity (slope 1).
    Linear,
    Relu,
    /// Row-wise softmax; output layer only.
    Softmax,
}

impl Activation {
    fn apply<T: Scalar>(self, z: &mut Array2<T>) {
        match self {
            Activation::Linear => {}
            Activation::Relu => z.mapv_inplace(|v| v.max(T::zero())),
            Activation::Softmax => {
                for mut row in z.rows_mut() {
                    let max = row.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
                    row.mapv_inplace(|v| (v - max).exp());
                    let total: T = row.sum();
                    row.mapv_inplace(|v| v / total);
                }
            }
        }
    }

    /// Back-propagates `d_out` (gradient w.r.t. the activation's output)
    /// to the pre-activation `z`, given the activation output `out`.
    fn backward<T: Scalar>(self, z: &Array2<T>, out: &Array2<T>, d_out: Array2<T>) -> Array2<T> {
        match self {
            Activation::Linear => d_out,
            Activation::Relu => {
                let mut d = d_out;
                d.zip_mut_with(z, |g, &zv| {
                    if zv <= T::zero() {
                        *g = T::zero();
                    }
                });
                d
            }
            Activation::Softmax => {
                let mut d = d_out;
                for (mut g, s) in d.rows_mut().into_iter().zip(out.rows()) {
                    let inner: T = g.iter().zip(s.iter()).map(|(&a, &b)| a * b).sum();
                    g.zip_mut_with(&s, |gv, &sv| *gv = sv * (*gv - inner));
                }
                d
            }
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Linear => "linear",
            Activation::Relu => "relu",
            Activation::Softmax => "softmax",
        })
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Activation::Linear),
            "relu" => Ok(Activation::Relu),
            "softmax" => Ok(Activation::Softmax),
            other => Err(Error::invalid(format!("unknown activation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    Mse,
    CrossEntropy,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Mse => "mse",
            LossKind::CrossEntropy => "cross-entropy",
        })
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "cross-entropy" | "crossentropy" | "categorical_crossentropy" | "ce" => {
                Ok(LossKind::CrossEntropy)
            }
            other => Err(Error::invalid(format!("unknown loss `{other}`"))),
        }
    }
}

/// Mean squared error over all `N·J` entries, or mean per-record
/// cross-entropy with predictions floored at [`CE_FLOOR`].
pub fn loss<T: Scalar>(kind: LossKind, y: &Array2<T>, y_hat: &Array2<T>) -> Result<T> {
    if y.dim() != y_hat.dim() {
        return Err(Error::shape(format!(
            "targets {:?} vs predictions {:?}",
            y.dim(),
            y_hat.dim()
        )));
    }
    Ok(loss_view(kind, y.view(), y_hat.view()))
}

fn loss_view<T: Scalar>(kind: LossKind, y: ArrayView2<T>, y_hat: ArrayView2<T>) -> T {
    let n = T::count(y.nrows());
    match kind {
        LossKind::Mse => {
            let sq: T = y
                .iter()
                .zip(y_hat.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            sq / T::count(y.len())
        }
        LossKind::CrossEntropy => {
            let floor = T::lit(CE_FLOOR);
            let total: T = y
                .iter()
                .zip(y_hat.iter())
                .filter(|(a, _)| **a != T::zero())
                .map(|(&a, &b)| a * b.max(floor).ln())
                .sum();
            -total / n
        }
    }
}

/// Gradient of the loss with respect to the predictions.
fn loss_grad<T: Scalar>(kind: LossKind, y: ArrayView2<T>, y_hat: &Array2<T>) -> Array2<T> {
    match kind {
        LossKind::Mse => {
            let scale = T::lit(2.0) / T::count(y.len());
            (y_hat - &y).mapv(|d| d * scale)
        }
        LossKind::CrossEntropy => {
            let floor = T::lit(CE_FLOOR);
            let n = T::count(y.nrows());
            let mut g = Array2::<T>::zeros(y.raw_dim());
            ndarray::Zip::from(&mut g)
                .and(&y)
                .and(y_hat)
                .for_each(|g, &t, &p| {
                    if t != T::zero() && p > floor {
                        *g = -t / (n * p);
                    }
                });
            g
        }
    }
}

/// Single-hidden-layer network with unconstrained weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    /// Input-to-hidden weights, I×L.
    pub a: Array2<T>,
    pub b1: Array1<T>,
    /// Hidden-to-output weights, L×J.
    pub bt: Array2<T>,
    pub b2: Array1<T>,
    pub act1: Activation,
    pub act2: Activation,
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
}

/// Parameter-shaped gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub a: Array2<T>,
    pub b1: Array1<T>,
    pub bt: Array2<T>,
    pub b2: Array1<T>,
}

/// Normal(0, 0.05) weights drawn in row-major order (`A′` first, then `B′ᵀ`);
/// zero biases.
pub fn init_network<T: Scalar>(
    inputs: usize,
    hidden: usize,
    outputs: usize,
    act1: Activation,
    act2: Activation,
    seed: u64,
) -> Result<Network<T>> {
    if inputs == 0 || hidden == 0 || outputs == 0 {
        return Err(Error::invalid("layer sizes must be at least 1"));
    }
    if act1 == Activation::Softmax {
        return Err(Error::invalid("softmax is only supported on the output layer"));
    }
    let normal = Normal::new(0.0, INIT_STDDEV).expect("valid normal");
    let mut rng = crate::seeded_rng(seed);
    let mut draw = |rows, cols| {
        Array2::from_shape_simple_fn((rows, cols), || T::lit(normal.sample(&mut rng)))
    };
    let a = draw(inputs, hidden);
    let bt = draw(hidden, outputs);
    Ok(Network {
        a,
        b1: Array1::zeros(hidden),
        bt,
        b2: Array1::zeros(outputs),
        act1,
        act2,
        input_labels: (1..=inputs).map(|i| format!("x{i}")).collect(),
        output_labels: (1..=outputs).map(|j| format!("y{j}")).collect(),
    })
}

struct ForwardCache<T> {
    z1: Array2<T>,
    h: Array2<T>,
    z2: Array2<T>,
    out: Array2<T>,
}

impl<T: Scalar> Network<T> {
    pub fn with_labels(mut self, inputs: Vec<String>, outputs: Vec<String>) -> Result<Self> {
        if inputs.len() != self.n_inputs() || outputs.len() != self.n_outputs() {
            return Err(Error::shape("label counts do not match layer sizes"));
        }
        self.input_labels = inputs;
        self.output_labels = outputs;
        Ok(self)
    }

    pub fn n_inputs(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_hidden(&self) -> usize {
        self.a.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.bt.ncols()
    }

    fn check_shapes(&self) -> Result<()> {
        let l = self.a.ncols();
        if self.b1.len() != l || self.bt.nrows() != l || self.b2.len() != self.bt.ncols() {
            return Err(Error::shape("inconsistent network layer shapes"));
        }
        if self.act1 == Activation::Softmax {
            return Err(Error::invalid("softmax is only supported on the output layer"));
        }
        Ok(())
    }

    fn check_input(&self, x: ArrayView2<T>) -> Result<()> {
        if x.ncols() != self.n_inputs() {
            return Err(Error::shape(format!(
                "input has {} columns, network expects {}",
                x.ncols(),
                self.n_inputs()
            )));
        }
        Ok(())
    }

    fn forward_cached(&self, x: ArrayView2<T>) -> ForwardCache<T> {
        let z1 = x.dot(&self.a) + &self.b1;
        let mut h = z1.clone();
        self.act1.apply(&mut h);
        let z2 = h.dot(&self.bt) + &self.b2;
        let mut out = z2.clone();
        self.act2.apply(&mut out);
        ForwardCache { z1, h, z2, out }
    }

    pub fn forward(&self, x: &Array2<T>) -> Result<Array2<T>> {
        self.check_shapes()?;
        self.check_input(x.view())?;
        Ok(self.forward_cached(x.view()).out)
    }

    /// Loss and its gradient for one batch.
    pub fn gradients(&self, x: &Array2<T>, y: &Array2<T>, kind: LossKind) -> Result<(T, Gradients<T>)> {
        self.check_shapes()?;
        self.check_input(x.view())?;
        if y.dim() != (x.nrows(), self.n_outputs()) {
            return Err(Error::shape("targets do not match inputs and outputs"));
        }
        Ok(self.gradients_view(x.view(), y.view(), kind))
    }

    fn gradients_view(&self, x: ArrayView2<T>, y: ArrayView2<T>, kind: LossKind) -> (T, Gradients<T>) {
        let cache = self.forward_cached(x);
        let value = loss_view(kind, y, cache.out.view());
        let d_out = loss_grad(kind, y, &cache.out);
        let dz2 = self.act2.backward(&cache.z2, &cache.out, d_out);
        let d_bt = cache.h.t().dot(&dz2);
        let d_b2 = dz2.sum_axis(Axis(0));
        let dh = dz2.dot(&self.bt.t());
        let dz1 = self.act1.backward(&cache.z1, &cache.h, dh);
        let d_a = x.t().dot(&dz1);
        let d_b1 = dz1.sum_axis(Axis(0));
        (
            value,
            Gradients {
                a: d_a,
                b1: d_b1,
                bt: d_bt,
                b2: d_b2,
            },
        )
    }

    /// `w ← w − r·∂Loss/∂w` for every weight and bias.
    pub fn descend(&mut self, g: &Gradients<T>, lr: T) {
        self.a.scaled_add(-lr, &g.a);
        self.b1.scaled_add(-lr, &g.b1);
        self.bt.scaled_add(-lr, &g.bt);
        self.b2.scaled_add(-lr, &g.b2);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Hold-out fraction taken from the tail of a seeded shuffle.
    pub validation_fraction: f64,
    pub loss: LossKind,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            learning_rate: 0.01,
            validation_fraction: 0.2,
            loss: LossKind::Mse,
            batch_size: 32,
            seed: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning rate must be finite and non-negative"));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::invalid("validation fraction must be in [0, 1)"));
        }
        if self.epochs < 1 {
            return Err(Error::invalid("epochs must be at least 1"));
        }
        if self.batch_size < 1 {
            return Err(Error::invalid("batch size must be at least 1"));
        }
        Ok(())
    }
}

/// Per-epoch losses on the full training and validation partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace<T> {
    pub train_loss: Vec<T>,
    /// `None` when no validation partition was held out.
    pub val_loss: Option<Vec<T>>,
}

impl<T: Scalar> TrainTrace<T> {
    pub fn final_train_loss(&self) -> T {
        *self.train_loss.last().expect("at least one epoch")
    }

    pub fn final_val_loss(&self) -> Option<T> {
        self.val_loss.as_ref().and_then(|v| v.last().copied())
    }
}

/// Splits row indices into (train, validation) for the given config.
pub fn validation_split(n: usize, cfg: &TrainConfig) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut crate::seeded_rng_stream(cfg.seed, 1));
    let n_val = if cfg.validation_fraction > 0.0 {
        ((n as f64) * cfg.validation_fraction + 1e-9).floor() as usize
    } else {
        0
    };
    if cfg.validation_fraction > 0.0 && n_val == 0 {
        return Err(Error::Degenerate(format!(
            "validation fraction {} of {n} records leaves the validation set empty",
            cfg.validation_fraction
        )));
    }
    if n_val >= n {
        return Err(Error::Degenerate("training partition is empty".into()));
    }
    let val = order.split_off(n - n_val);
    Ok((order, val))
}

/// Mini-batch gradient descent. Deterministic for a given config.
pub fn train<T: Scalar>(
    net: &Network<T>,
    x: &Array2<T>,
    y: &Array2<T>,
    cfg: &TrainConfig,
) -> Result<(Network<T>, TrainTrace<T>)> {
    cfg.validate()?;
    net.check_shapes()?;
    net.check_input(x.view())?;
    if y.dim() != (x.nrows(), net.n_outputs()) {
        return Err(Error::shape("targets do not match inputs and outputs"));
    }
    let (mut train_idx, val_idx) = validation_split(x.nrows(), cfg)?;
    let x_val = x.select(Axis(0), &val_idx);
    let y_val = y.select(Axis(0), &val_idx);
    let x_train_full = x.select(Axis(0), &train_idx);
    let y_train_full = y.select(Axis(0), &train_idx);

    let lr = T::lit(cfg.learning_rate);
    let mut rng = crate::seeded_rng_stream(cfg.seed, 2);
    let mut net = net.clone();
    let mut train_loss = Vec::with_capacity(cfg.epochs);
    let mut val_loss = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        train_idx.shuffle(&mut rng);
        for batch in train_idx.chunks(cfg.batch_size) {
            let xb = x.select(Axis(0), batch);
            let yb = y.select(Axis(0), batch);
            let (_, g) = net.gradients_view(xb.view(), yb.view(), cfg.loss);
            net.descend(&g, lr);
        }
        let out = net.forward_cached(x_train_full.view()).out;
        train_loss.push(loss_view(cfg.loss, y_train_full.view(), out.view()));
        if !val_idx.is_empty() {
            let out = net.forward_cached(x_val.view()).out;
            val_loss.push(loss_view(cfg.loss, y_val.view(), out.view()));
        }
    }
    let trace = TrainTrace {
        train_loss,
        val_loss: (!val_idx.is_empty()).then_some(val_loss),
    };
    Ok((net, trace))
}

pub fn nn_predict<T: Scalar>(net: &Network<T>, x: &Array2<T>) -> Result<Prediction<T>> {
    Ok(Prediction::from_scores(net.forward(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn init_shapes_and_determinism() {
        let n1 = init_network::<f64>(6, 8, 4, Activation::Relu, Activation::Softmax, 42).unwrap();
        let n2 = init_network::<f64>(6, 8, 4, Activation::Relu, Activation::Softmax, 42).unwrap();
        assert_eq!(n1, n2);
        assert_eq!(n1.a.dim(), (6, 8));
        assert_eq!(n1.bt.dim(), (8, 4));
        assert!(n1.b1.iter().chain(n1.b2.iter()).all(|&b| b == 0.0));
        let n3 = init_network::<f64>(6, 8, 4, Activation::Relu, Activation::Softmax, 43).unwrap();
        assert_ne!(n1.a, n3.a);
    }

    #[test]
    fn init_rejects_hidden_softmax_and_empty_layers() {
        assert!(init_network::<f64>(2, 2, 2, Activation::Softmax, Activation::Linear, 1).is_err());
        assert!(init_network::<f64>(0, 2, 2, Activation::Linear, Activation::Linear, 1).is_err());
    }

    #[test]
    fn init_moments() {
        let net = init_network::<f64>(100, 100, 1, Activation::Linear, Activation::Linear, 5).unwrap();
        let w: Vec<f64> = net.a.iter().copied().collect();
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let sd = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() < 0.002, "mean {mean}");
        assert!((sd - 0.05).abs() < 0.005, "sd {sd}");
    }

    fn zero_net(i: usize, l: usize, j: usize, act1: Activation, act2: Activation) -> Network<f64> {
        let mut n = init_network(i, l, j, act1, act2, 0).unwrap();
        n.a.fill(0.0);
        n.bt.fill(0.0);
        n
    }

    #[test]
    fn zero_softmax_net_is_uniform() {
        let net = zero_net(3, 2, 4, Activation::Linear, Activation::Softmax);
        let out = net.forward(&Array2::eye(3)).unwrap();
        assert!(out.iter().all(|&v| (v - 0.25).abs() < 1e-15));
        let pred = nn_predict(&net, &Array2::eye(3)).unwrap();
        assert_eq!(pred.labels, vec![0, 0, 0]);
    }

    #[test]
    fn linear_net_is_a_matrix_product() {
        let net = init_network::<f64>(5, 3, 4, Activation::Linear, Activation::Linear, 9).unwrap();
        let x = array![[1.0, 0.0, 1.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 1.0]];
        let out = net.forward(&x).unwrap();
        let direct = x.dot(&net.a.dot(&net.bt));
        assert!((&out - &direct).iter().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn relu_hidden_by_hand() {
        let mut net = zero_net(1, 1, 1, Activation::Relu, Activation::Linear);
        net.a[[0, 0]] = -2.0;
        net.b1[0] = 1.0;
        net.bt[[0, 0]] = 3.0;
        net.b2[0] = 0.5;
        // hidden = relu(-2 + 1) = 0, output = 0·3 + 0.5
        let out = net.forward(&array![[1.0]]).unwrap();
        assert_eq!(out[[0, 0]], 0.5);
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let net = zero_net(3, 2, 2, Activation::Linear, Activation::Linear);
        assert!(net.forward(&Array2::zeros((1, 4))).is_err());
    }

    #[test]
    fn loss_closed_forms() {
        let y = array![[1.0f64, 0.0, 0.0, 0.0]];
        let uniform = Array2::from_elem((1, 4), 0.25);
        assert_eq!(loss(LossKind::Mse, &y, &y).unwrap(), 0.0);
        assert!((loss(LossKind::Mse, &y, &uniform).unwrap() - 0.1875).abs() < 1e-15);
        assert!((loss(LossKind::CrossEntropy, &y, &uniform).unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!(loss(LossKind::Mse, &y, &Array2::zeros((2, 4))).is_err());
    }

    #[test]
    fn parse_tags() {
        assert_eq!("ReLU".parse::<Activation>().unwrap(), Activation::Relu);
        assert_eq!("cross-entropy".parse::<LossKind>().unwrap(), LossKind::CrossEntropy);
        assert!("tanh".parse::<Activation>().is_err());
    }

    fn separable_toy() -> (Array2<f64>, Array2<f64>) {
        (array![[1.0, 0.0], [0.0, 1.0]], array![[1.0, 0.0], [0.0, 1.0]])
    }

    #[test]
    fn separable_toy_trains_to_low_loss() {
        let (x, y) = separable_toy();
        let net = init_network::<f64>(2, 4, 2, Activation::Linear, Activation::Softmax, 3).unwrap();
        let cfg = TrainConfig {
            epochs: 200,
            learning_rate: 0.1,
            validation_fraction: 0.0,
            loss: LossKind::CrossEntropy,
            batch_size: 2,
            seed: 3,
        };
        let (trained, trace) = train(&net, &x, &y, &cfg).unwrap();
        assert_eq!(trace.train_loss.len(), 200);
        assert!(trace.val_loss.is_none());
        assert!(trace.final_train_loss() < 0.1, "loss {}", trace.final_train_loss());
        assert_eq!(nn_predict(&trained, &x).unwrap().labels, vec![0, 1]);
    }

    #[test]
    fn full_batch_small_step_is_monotone() {
        let (x, y) = separable_toy();
        let net = init_network::<f64>(2, 3, 2, Activation::Relu, Activation::Softmax, 11).unwrap();
        let cfg = TrainConfig {
            epochs: 100,
            learning_rate: 0.05,
            validation_fraction: 0.0,
            loss: LossKind::Mse,
            batch_size: 2,
            seed: 0,
        };
        let (_, trace) = train(&net, &x, &y, &cfg).unwrap();
        for w in trace.train_loss.windows(2) {
            assert!(w[1] <= w[0], "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn zero_learning_rate_leaves_weights() {
        let (x, y) = separable_toy();
        let net = init_network::<f64>(2, 3, 2, Activation::Relu, Activation::Softmax, 1).unwrap();
        let cfg = TrainConfig {
            epochs: 7,
            learning_rate: 0.0,
            validation_fraction: 0.0,
            batch_size: 1,
            ..TrainConfig::default()
        };
        let (trained, _) = train(&net, &x, &y, &cfg).unwrap();
        assert_eq!(trained, net);
    }

    #[test]
    fn degenerate_validation_split() {
        let (x, y) = separable_toy();
        let net = init_network::<f64>(2, 3, 2, Activation::Linear, Activation::Linear, 1).unwrap();
        let cfg = TrainConfig {
            validation_fraction: 0.2,
            ..TrainConfig::default()
        };
        assert!(matches!(train(&net, &x, &y, &cfg), Err(Error::Degenerate(_))));
        let x1 = array![[1.0, 0.0]];
        let y1 = array![[1.0, 0.0]];
        let cfg = TrainConfig {
            validation_fraction: 0.9,
            ..TrainConfig::default()
        };
        assert!(train(&net, &x1, &y1, &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = [
            TrainConfig { learning_rate: -1.0, ..TrainConfig::default() },
            TrainConfig { validation_fraction: 1.0, ..TrainConfig::default() },
            TrainConfig { epochs: 0, ..TrainConfig::default() },
            TrainConfig { batch_size: 0, ..TrainConfig::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        TrainConfig::default().validate().unwrap();
    }

    #[test]
    fn training_is_bit_reproducible() {
        let x = Array2::from_shape_fn((40, 3), |(r, c)| if r % 3 == c { 1.0 } else { 0.0 });
        let y = Array2::from_shape_fn((40, 2), |(r, c)| if (r % 3 == 0) == (c == 0) { 1.0 } else { 0.0 });
        let net = init_network::<f64>(3, 4, 2, Activation::Relu, Activation::Softmax, 8).unwrap();
        let cfg = TrainConfig { batch_size: 5, ..TrainConfig::default() };
        let a = train(&net, &x, &y, &cfg).unwrap();
        let b = train(&net, &x, &y, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.val_loss.as_ref().unwrap().len(), 10);
    }

    #[test]
    fn softmax_rows_sum_to_one_in_f32() {
        let net = init_network::<f32>(3, 4, 5, Activation::Relu, Activation::Softmax, 2).unwrap();
        let out = net.forward(&Array2::eye(3)).unwrap();
        for row in out.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-6);
        }
    }
}

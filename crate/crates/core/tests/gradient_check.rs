//! Back-propagated gradients against central finite differences.

use lbann_core::nn::{init_network, loss, Activation, LossKind, Network};
use ndarray::Array2;
use rand::Rng;

const H: f64 = 1e-5;
const TOL: f64 = 1e-5;

fn random_net(act1: Activation, act2: Activation, seed: u64) -> Network<f64> {
    let mut net = init_network::<f64>(4, 3, 2, act1, act2, seed).unwrap();
    let mut rng = lbann_core::seeded_rng_stream(seed, 99);
    net.a.mapv_inplace(|_| rng.random_range(-1.0..1.0));
    net.bt.mapv_inplace(|_| rng.random_range(-1.0..1.0));
    net.b1.mapv_inplace(|_| rng.random_range(-0.5..0.5));
    // Keeps linear/relu outputs positive so the cross-entropy log stays
    // away from its floor.
    net.b2.mapv_inplace(|_| rng.random_range(2.5..3.0));
    net
}

fn batch(seed: u64) -> (Array2<f64>, Array2<f64>) {
    let mut rng = lbann_core::seeded_rng_stream(seed, 7);
    let x = Array2::from_shape_fn((5, 4), |_| if rng.random_bool(0.5) { 1.0 } else { 0.0 });
    let y = Array2::from_shape_fn((5, 2), |(r, c)| if (r + seed as usize) % 2 == c { 1.0 } else { 0.0 });
    (x, y)
}

fn numeric(net: &Network<f64>, x: &Array2<f64>, y: &Array2<f64>, kind: LossKind, poke: impl Fn(&mut Network<f64>, f64)) -> f64 {
    let mut plus = net.clone();
    poke(&mut plus, H);
    let mut minus = net.clone();
    poke(&mut minus, -H);
    let lp = loss(kind, y, &plus.forward(x).unwrap()).unwrap();
    let lm = loss(kind, y, &minus.forward(x).unwrap()).unwrap();
    (lp - lm) / (2.0 * H)
}

fn check(net: &Network<f64>, kind: LossKind, seed: u64) -> f64 {
    let (x, y) = batch(seed);
    let (_, g) = net.gradients(&x, &y, kind).unwrap();
    let mut worst = 0.0f64;
    let mut record = |analytic: f64, fd: f64| {
        worst = worst.max((analytic - fd).abs() / fd.abs().max(1.0));
    };
    for ((i, l), &ga) in g.a.indexed_iter() {
        record(ga, numeric(net, &x, &y, kind, |n, d| n.a[[i, l]] += d));
    }
    for (l, &gb) in g.b1.indexed_iter() {
        record(gb, numeric(net, &x, &y, kind, |n, d| n.b1[l] += d));
    }
    for ((l, j), &gb) in g.bt.indexed_iter() {
        record(gb, numeric(net, &x, &y, kind, |n, d| n.bt[[l, j]] += d));
    }
    for (j, &gb) in g.b2.indexed_iter() {
        record(gb, numeric(net, &x, &y, kind, |n, d| n.b2[j] += d));
    }
    worst
}

#[test]
fn every_activation_and_loss_combination() {
    let hidden = [Activation::Linear, Activation::Relu];
    let output = [Activation::Linear, Activation::Relu, Activation::Softmax];
    for act1 in hidden {
        for act2 in output {
            for kind in [LossKind::Mse, LossKind::CrossEntropy] {
                for seed in 0..5 {
                    let net = random_net(act1, act2, seed);
                    let worst = check(&net, kind, seed);
                    assert!(worst < TOL, "{act1}/{act2}/{kind} seed {seed}: rel err {worst:e}");
                }
            }
        }
    }
}

#[test]
fn gradient_of_a_zero_batch_loss_vanishes_at_the_target() {
    let mut net = random_net(Activation::Linear, Activation::Linear, 1);
    net.a.fill(0.0);
    net.bt.fill(0.0);
    net.b2.fill(0.5);
    let x = Array2::ones((3, 4));
    let y = Array2::from_elem((3, 2), 0.5);
    let (value, g) = net.gradients(&x, &y, LossKind::Mse).unwrap();
    assert_eq!(value, 0.0);
    assert!(g.b2.iter().chain(g.a.iter()).all(|&v| v == 0.0));
}

//! Latent budget analysis (LBA) and its unconstrained neural-network
//! counterpart (LBA-NN) for compositional contingency data.
//!
//! The pipeline runs from categorical records to a contingency table, fits
//! the latent budget model by EM, trains a single-hidden-layer network on the
//! dummy-coded records, derives Connection Weight importances from the
//! network, clusters the importance rows with K-means and places them in a
//! rank-2 biplot, and compares both models with six predictive metrics.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the precision to `f64`, which is what the
//! command-line tool uses.

pub mod cluster;
pub mod data;
pub mod error;
pub mod eval;
pub mod generate;
pub mod importance;
pub mod lba;
pub mod linalg;
pub mod nn;
pub mod persist;
pub mod scalar;
pub mod svg;
pub mod table_io;
pub mod tuning;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type LbaModel64 = lba::LbaModel<f64>;
pub type Network64 = nn::Network<f64>;
pub type ImportanceTable64 = importance::ImportanceTable<f64>;
pub type ClusterResult64 = cluster::ClusterResult<f64>;
pub type BiplotCoords64 = cluster::BiplotCoords<f64>;
pub type MetricsReport64 = eval::MetricsReport<f64>;
pub type CompositionMatrix64 = data::CompositionMatrix<f64>;
pub type DesignMatrices64 = data::DesignMatrices<f64>;

pub type LbaModel32 = lba::LbaModel<f32>;
pub type Network32 = nn::Network<f32>;

/// The generator behind every seeded operation.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` under `seed`; used for restarts and trials.
pub fn seeded_rng_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

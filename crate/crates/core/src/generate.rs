//! Synthetic individual records drawn from user-supplied row profiles.

use rand::distr::weighted::WeightedIndex;
use rand_distr::Distribution;

use crate::data::{CategoricalDataset, CompositionMatrix, Record, Schema, Variable};
use crate::error::{Error, Result};

const STOCHASTIC_TOL: f64 = 1e-6;

/// Draws `n` records: an explanatory level from `masses`, then a response
/// level from that row's profile.
pub fn generate_records(
    profiles: &CompositionMatrix<f64>,
    masses: &[f64],
    n: usize,
    seed: u64,
    explanatory_name: &str,
    response_name: &str,
) -> Result<CategoricalDataset> {
    let (rows, cols) = profiles.profiles.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::Degenerate("profile matrix is empty".into()));
    }
    for (label, row) in profiles.row_labels.iter().zip(profiles.profiles.rows()) {
        let sum: f64 = row.sum();
        if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::invalid(format!(
                "profile row `{label}` is not stochastic (sums to {sum})"
            )));
        }
    }
    if masses.len() != rows {
        return Err(Error::shape(format!("{} masses for {rows} profile rows", masses.len())));
    }
    let row_dist = WeightedIndex::new(masses)
        .map_err(|e| Error::invalid(format!("row masses: {e}")))?;
    let col_dists = profiles
        .profiles
        .rows()
        .into_iter()
        .map(|r| WeightedIndex::new(r.iter().copied()).map_err(|e| Error::invalid(e.to_string())))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = crate::seeded_rng(seed);
    let records = (0..n)
        .map(|_| {
            let i = row_dist.sample(&mut rng);
            let j = col_dists[i].sample(&mut rng);
            Record {
                explanatory: vec![i],
                response: j,
            }
        })
        .collect();
    Ok(CategoricalDataset {
        schema: Schema {
            explanatory: vec![Variable {
                name: explanatory_name.to_string(),
                levels: profiles.row_labels.clone(),
            }],
            response: Variable {
                name: response_name.to_string(),
                levels: profiles.col_labels.clone(),
            },
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{contingency_table, row_profiles};
    use ndarray::array;

    fn payment_profiles() -> CompositionMatrix<f64> {
        CompositionMatrix {
            profiles: array![
                [0.07, 0.70, 0.20, 0.03],
                [0.25, 0.10, 0.60, 0.05],
                [0.35, 0.45, 0.15, 0.05],
                [0.80, 0.10, 0.08, 0.02],
                [0.05, 0.40, 0.35, 0.20],
                [0.60, 0.15, 0.15, 0.10]
            ],
            row_labels: ["America", "Asia", "Europe", "Africa", "Oceania", "Other"]
                .map(String::from)
                .to_vec(),
            col_labels: ["Cash", "Credit Cards", "Mobile App", "Check"].map(String::from).to_vec(),
        }
    }

    #[test]
    fn empirical_profiles_track_the_generator() {
        let p = payment_profiles();
        let ds = generate_records(&p, &[1.0; 6], 6000, 7, "Continent", "Payment").unwrap();
        let emp = row_profiles::<f64>(&contingency_table(&ds).unwrap()).unwrap();
        let worst = (&emp.profiles - &p.profiles).iter().fold(0.0f64, |m, d| m.max(d.abs()));
        assert!(worst < 0.03, "max deviation {worst}");
    }

    #[test]
    fn zero_records_and_determinism() {
        let p = payment_profiles();
        let empty = generate_records(&p, &[1.0; 6], 0, 7, "C", "P").unwrap();
        assert_eq!(empty.to_csv_string().unwrap(), "C,P\n");
        let a = generate_records(&p, &[1.0; 6], 50, 3, "C", "P").unwrap();
        let b = generate_records(&p, &[1.0; 6], 50, 3, "C", "P").unwrap();
        assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let mut p = payment_profiles();
        p.profiles[[0, 0]] = 0.5;
        assert!(generate_records(&p, &[1.0; 6], 10, 1, "C", "P").is_err());
        assert!(generate_records(&payment_profiles(), &[1.0; 5], 10, 1, "C", "P").is_err());
    }
}

//! Connection Weight importances: `Imp[j][i] = Σ_l A′[i][l] · B′ᵀ[l][j]`.
//!
//! Biases and activations do not enter the formula. For relu hidden layers
//! this is an approximation that is kept as is.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::nn::Network;
use crate::scalar::Scalar;
use crate::table_io::{LabeledMatrix, NumFormat};

/// J×I table of signed importances; rows are response levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceTable<T> {
    pub values: Array2<T>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

pub fn connection_weights<T: Scalar>(net: &Network<T>) -> ImportanceTable<T> {
    ImportanceTable {
        values: net.a.dot(&net.bt).reversed_axes(),
        row_labels: net.output_labels.clone(),
        col_labels: net.input_labels.clone(),
    }
}

impl<T: Scalar> ImportanceTable<T> {
    pub fn row_index(&self, response_level: &str) -> Result<usize> {
        self.row_labels
            .iter()
            .position(|l| l == response_level)
            .ok_or_else(|| Error::UnknownLevel {
                axis: "response".into(),
                level: response_level.to_string(),
            })
    }

    pub fn to_labeled(&self) -> LabeledMatrix<T> {
        LabeledMatrix {
            corner: "response".into(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            values: self.values.clone(),
        }
    }

    pub fn to_csv_string(&self) -> Result<String> {
        self.to_labeled().to_csv_string(NumFormat::Sig6)
    }
}

/// Bars for one response level: one `(explanatory level, importance)` per
/// column, in catalog order.
pub fn importance_plot_data<T: Scalar>(
    t: &ImportanceTable<T>,
    response_level: &str,
) -> Result<Vec<(String, T)>> {
    let j = t.row_index(response_level)?;
    Ok(t.col_labels
        .iter()
        .cloned()
        .zip(t.values.row(j).iter().copied())
        .collect())
}

/// Long-format CSV of every bar series: `response,explanatory,importance`.
pub fn plot_data_csv<T: Scalar>(t: &ImportanceTable<T>) -> Result<String> {
    let mut rows = Vec::new();
    for resp in &t.row_labels {
        for (expl, v) in importance_plot_data(t, resp)? {
            rows.push(vec![resp.clone(), expl, NumFormat::Sig6.fmt(v)]);
        }
    }
    crate::table_io::render_rows(&["response", "explanatory", "importance"], &rows)
}

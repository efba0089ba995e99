//! LBA-NN-K-means: Lloyd's K-means over the rows of an importance table,
//! attribution of explanatory levels to clusters, and a rank-2 biplot.

use ndarray::{s, Array2, ArrayView1, Axis};
use rand::Rng;

use crate::error::{Error, Result};
use crate::importance::ImportanceTable;
use crate::linalg::svd;
use crate::scalar::{argmax, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult<T> {
    /// Cluster index (0-based) of every response level.
    pub assignments: Vec<usize>,
    /// K×I cluster means.
    pub centroids: Array2<T>,
    pub within_ss: T,
    /// Cluster index (0-based) of every explanatory level.
    pub attribution: Vec<usize>,
    /// Lloyd reassignment rounds performed.
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squares after every centroid update.
    pub objective_trace: Vec<T>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl<T: Scalar> ClusterResult<T> {
    pub fn k(&self) -> usize {
        self.centroids.nrows()
    }

    /// `response,cluster` rows followed by `explanatory,cluster` rows, with
    /// clusters numbered from 1.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut rows = Vec::new();
        for (l, c) in self.row_labels.iter().zip(&self.assignments) {
            rows.push(vec!["response".into(), l.clone(), (c + 1).to_string()]);
        }
        for (l, c) in self.col_labels.iter().zip(&self.attribution) {
            rows.push(vec!["explanatory".into(), l.clone(), (c + 1).to_string()]);
        }
        crate::table_io::render_rows(&["axis", "level", "cluster"], &rows)
    }
}

fn sq_dist<T: Scalar>(a: ArrayView1<T>, b: ArrayView1<T>) -> T {
    a.iter().zip(b.iter()).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Sum over rows of the squared distance to the assigned centroid.
pub fn within_ss<T: Scalar>(points: &Array2<T>, centroids: &Array2<T>, assign: &[usize]) -> T {
    points
        .rows()
        .into_iter()
        .zip(assign)
        .map(|(p, &c)| sq_dist(p, centroids.row(c)))
        .sum()
}

fn update_centroids<T: Scalar>(points: &Array2<T>, assign: &mut [usize], centroids: &mut Array2<T>) {
    let k = centroids.nrows();
    let mut sizes = vec![0usize; k];
    let mut sums = Array2::<T>::zeros(centroids.raw_dim());
    for (p, &c) in points.rows().into_iter().zip(assign.iter()) {
        sizes[c] += 1;
        sums.row_mut(c).zip_mut_with(&p, |acc, &v| *acc = *acc + v);
    }
    for c in 0..k {
        if sizes[c] > 0 {
            let n = T::count(sizes[c]);
            centroids.row_mut(c).assign(&sums.row(c).mapv(|v| v / n));
        }
    }
    // Empty clusters take the point farthest from its own centroid, provided
    // it shares that cluster with others and sits at a positive distance.
    for e in 0..k {
        if sizes[e] > 0 {
            continue;
        }
        let mut best: Option<(usize, T)> = None;
        for (i, p) in points.rows().into_iter().enumerate() {
            let c = assign[i];
            if sizes[c] < 2 {
                continue;
            }
            let d = sq_dist(p, centroids.row(c));
            if d > T::zero() && best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let Some((i, _)) = best else { continue };
        let old = assign[i];
        assign[i] = e;
        sizes[old] -= 1;
        sizes[e] = 1;
        centroids.row_mut(e).assign(&points.row(i));
        let n = T::count(sizes[old]);
        let mut mean = Array2::<T>::zeros((1, points.ncols()));
        for (p, &c) in points.rows().into_iter().zip(assign.iter()) {
            if c == old {
                mean.row_mut(0).zip_mut_with(&p, |acc, &v| *acc = *acc + v);
            }
        }
        centroids.row_mut(old).assign(&mean.row(0).mapv(|v| v / n));
    }
}

fn nearest<T: Scalar>(p: ArrayView1<T>, centroids: &Array2<T>) -> usize {
    let mut best = 0;
    let mut best_d = T::infinity();
    for (c, mu) in centroids.rows().into_iter().enumerate() {
        let d = sq_dist(p, mu);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// Lloyd's algorithm on the table rows from a seeded random initial
/// assignment. Ties in reassignment go to the lowest cluster index.
pub fn kmeans<T: Scalar>(
    t: &ImportanceTable<T>,
    k: usize,
    seed: u64,
    max_iterations: usize,
) -> Result<ClusterResult<T>> {
    kmeans_with_rng(t, k, &mut crate::seeded_rng(seed), max_iterations)
}

/// Best of `restarts` runs by within-cluster sum of squares; the first
/// restart reproduces [`kmeans`] with the same seed.
pub fn kmeans_restarts<T: Scalar>(
    t: &ImportanceTable<T>,
    k: usize,
    seed: u64,
    max_iterations: usize,
    restarts: usize,
) -> Result<ClusterResult<T>> {
    if restarts < 1 {
        return Err(Error::invalid("at least one K-means restart is required"));
    }
    let mut best = kmeans(t, k, seed, max_iterations)?;
    for r in 1..restarts {
        let run = kmeans_with_rng(t, k, &mut crate::seeded_rng_stream(seed, r as u64), max_iterations)?;
        if run.within_ss < best.within_ss {
            best = run;
        }
    }
    Ok(best)
}

fn kmeans_with_rng<T: Scalar, R: Rng>(
    t: &ImportanceTable<T>,
    k: usize,
    rng: &mut R,
    max_iterations: usize,
) -> Result<ClusterResult<T>> {
    let points = &t.values;
    let n = points.nrows();
    if k < 1 || k > n {
        return Err(Error::invalid(format!("K = {k} outside 1..={n}")));
    }
    let mut assign: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let mut centroids = Array2::<T>::zeros((k, points.ncols()));
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        update_centroids(points, &mut assign, &mut centroids);
        trace.push(within_ss(points, &centroids, &assign));
        if iterations == max_iterations {
            break;
        }
        let next: Vec<usize> = points.rows().into_iter().map(|p| nearest(p, &centroids)).collect();
        iterations += 1;
        if next == assign {
            converged = true;
            break;
        }
        assign = next;
    }
    let mut result = ClusterResult {
        within_ss: *trace.last().expect("one update"),
        assignments: assign,
        centroids,
        attribution: Vec::new(),
        iterations,
        converged,
        objective_trace: trace,
        row_labels: t.row_labels.clone(),
        col_labels: t.col_labels.clone(),
    };
    result.attribution = attribute_explanatory(&result);
    Ok(result)
}

/// Explanatory level `i` goes to the cluster whose centroid has the largest
/// coordinate `i`; ties go to the lowest cluster index.
pub fn attribute_explanatory<T: Scalar>(result: &ClusterResult<T>) -> Vec<usize> {
    result
        .centroids
        .columns()
        .into_iter()
        .map(|col| argmax(col.iter().copied()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiplotCoords<T> {
    /// J×2 response-level points (`UΣ`).
    pub row_points: Array2<T>,
    /// I×2 explanatory-level markers (`V`).
    pub col_points: Array2<T>,
    pub explained: [T; 2],
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl<T: Scalar> BiplotCoords<T> {
    /// `axis,level,dim1,dim2` rows, response levels first.
    pub fn to_csv_string(&self) -> Result<String> {
        let fmt = crate::table_io::NumFormat::Sig6;
        let mut rows = Vec::new();
        for (axis, labels, pts) in [
            ("response", &self.row_labels, &self.row_points),
            ("explanatory", &self.col_labels, &self.col_points),
        ] {
            for (l, p) in labels.iter().zip(pts.rows()) {
                rows.push(vec![axis.into(), l.clone(), fmt.fmt(p[0]), fmt.fmt(p[1])]);
            }
        }
        crate::table_io::render_rows(&["axis", "level", "dim1", "dim2"], &rows)
    }
}

/// Rank-2 biplot of the column-centred table. Each singular vector pair is
/// signed so that the largest-magnitude entry of the right vector is positive.
pub fn biplot<T: Scalar>(t: &ImportanceTable<T>) -> Result<BiplotCoords<T>> {
    let (j, i) = t.values.dim();
    if j < 2 || i < 2 {
        return Err(Error::Degenerate(format!("biplot needs at least a 2x2 table, got {j}x{i}")));
    }
    let mean = t.values.mean_axis(Axis(0)).expect("non-empty");
    let centred = &t.values - &mean;
    let d = svd(&centred);
    let total: T = d.s.iter().map(|&v| v * v).sum();
    if !(total > T::zero()) {
        return Err(Error::Degenerate("centred table has rank 0".into()));
    }
    let mut u = d.u.slice(s![.., 0..2]).to_owned();
    let mut v = d.v.slice(s![.., 0..2]).to_owned();
    for c in 0..2 {
        let lead = argmax(v.column(c).iter().map(|x| x.abs()));
        if v[[lead, c]] < T::zero() {
            v.column_mut(c).mapv_inplace(|x| -x);
            u.column_mut(c).mapv_inplace(|x| -x);
        }
    }
    for c in 0..2 {
        let sc = d.s[c];
        u.column_mut(c).mapv_inplace(|x| x * sc);
    }
    Ok(BiplotCoords {
        row_points: u,
        col_points: v,
        explained: [d.s[0] * d.s[0] / total, d.s[1] * d.s[1] / total],
        row_labels: t.row_labels.clone(),
        col_labels: t.col_labels.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn table(values: Array2<f64>) -> ImportanceTable<f64> {
        let (j, i) = values.dim();
        ImportanceTable {
            values,
            row_labels: (0..j).map(|v| format!("y{v}")).collect(),
            col_labels: (0..i).map(|v| format!("x{v}")).collect(),
        }
    }

    #[test]
    fn k_equal_to_rows_gives_singletons() {
        let t = table(array![[0.0, 1.0], [5.0, 5.0], [-3.0, 2.0], [9.0, -1.0]]);
        for seed in 0..10 {
            let r = kmeans(&t, 4, seed, 100).unwrap();
            assert_eq!(r.within_ss, 0.0, "seed {seed}");
            let mut a = r.assignments.clone();
            a.sort_unstable();
            assert_eq!(a, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let t = table(array![[0.0, 1.0], [4.0, 5.0], [2.0, 0.0]]);
        let r = kmeans(&t, 1, 3, 10).unwrap();
        assert_eq!(r.centroids, array![[2.0, 2.0]]);
        assert!(r.converged);
    }

    #[test]
    fn k_out_of_range() {
        let t = table(array![[0.0, 1.0], [4.0, 5.0]]);
        assert!(kmeans(&t, 3, 0, 10).is_err());
        assert!(kmeans(&t, 0, 0, 10).is_err());
    }

    #[test]
    fn attribution_by_dominant_coordinate() {
        let t = table(array![[5.0, 0.0], [0.0, 5.0]]);
        let mut r = kmeans(&t, 2, 0, 10).unwrap();
        r.centroids = array![[5.0, 0.0], [0.0, 5.0]];
        assert_eq!(attribute_explanatory(&r), vec![0, 1]);
        r.centroids = array![[1.0, 1.0], [1.0, 1.0]];
        assert_eq!(attribute_explanatory(&r), vec![0, 0]);
    }

    #[test]
    fn duplicates_share_a_cluster() {
        let t = table(array![[1.0, 1.0], [1.0, 1.0], [8.0, 0.0], [0.0, 8.0]]);
        for seed in 0..20 {
            for k in 1..=4 {
                let r = kmeans(&t, k, seed, 100).unwrap();
                assert_eq!(r.assignments[0], r.assignments[1], "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn restarts_never_worse_than_first_run() {
        let t = table(array![[0.0, 0.0], [0.1, 0.0], [5.0, 5.0], [5.1, 5.0], [9.0, 0.0], [0.0, 9.0]]);
        let one = kmeans(&t, 3, 4, 100).unwrap();
        let many = kmeans_restarts(&t, 3, 4, 100, 8).unwrap();
        assert!(many.within_ss <= one.within_ss);
    }

    #[test]
    fn biplot_rejects_degenerate_tables() {
        assert!(biplot(&table(array![[1.0, 2.0]])).is_err());
        assert!(biplot(&table(array![[1.0, 2.0], [1.0, 2.0]])).is_err());
    }

    #[test]
    fn rank_one_and_reconstruction() {
        let t = table(array![[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [-1.0, -2.0, -3.0]]);
        let b = biplot(&t).unwrap();
        assert!(b.explained[1] < 1e-10);
        assert!((b.explained[0] - 1.0).abs() < 1e-10);
        let centred = &t.values - &t.values.mean_axis(Axis(0)).unwrap();
        let back = b.row_points.dot(&b.col_points.t());
        assert!((&back - &centred).iter().all(|e| e.abs() < 1e-10));
    }
}

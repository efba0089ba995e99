//! Dense thin SVD by one-sided Jacobi rotations.

use ndarray::{Array1, Array2};

use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// `a = u · diag(s) · vᵀ` with `s` sorted in decreasing order.
/// For an m×n input, `u` is m×r, `v` is n×r, with `r = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Array2<T>,
    pub s: Array1<T>,
    pub v: Array2<T>,
}

pub fn svd<T: Scalar>(a: &Array2<T>) -> Svd<T> {
    if a.nrows() < a.ncols() {
        let t = svd_tall(&a.t().to_owned());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    svd_tall(a)
}

fn svd_tall<T: Scalar>(a: &Array2<T>) -> Svd<T> {
    let (m, n) = a.dim();
    let mut u = a.clone();
    let mut v = Array2::<T>::eye(n);
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for k in 0..m {
                    let (x, y) = (u[[k, p]], u[[k, q]]);
                    alpha = alpha + x * x;
                    beta = beta + y * y;
                    gamma = gamma + x * y;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n)
        .map(|j| u.column(j).iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut su = Array2::<T>::zeros((m, n));
    let mut sv = Array2::<T>::zeros((n, n));
    let mut s = Array1::<T>::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = norms[src];
        if norms[src] > T::zero() {
            for k in 0..m {
                su[[k, dst]] = u[[k, src]] / norms[src];
            }
        }
        for k in 0..n {
            sv[[k, dst]] = v[[k, src]];
        }
    }
    Svd { u: su, s, v: sv }
}

fn rotate<T: Scalar>(m: &mut Array2<T>, p: usize, q: usize, c: T, s: T) {
    for k in 0..m.nrows() {
        let (x, y) = (m[[k, p]], m[[k, q]]);
        m[[k, p]] = c * x - s * y;
        m[[k, q]] = s * x + c * y;
    }
}

//! Nullspace computation for the linear systems behind every approximant.
//!
//! The solver is reduced row echelon form with threshold pivoting. Under the
//! exact backend the zero test is exact, so rank and kernel are certain.
//! Under the float backend an entry counts as zero when it falls below
//! `10^(-digits/2)` relative to the largest entry of the input matrix; that
//! is the same scale at which roots are clustered, so "rank" means rank
//! distinguishable at the working precision.
//!
//! Kernel basis vectors are indexed by the free columns: the vector for free
//! column `f` has a one in position `f` and support only on earlier pivot
//! columns. Tops are therefore distinct and the first basis vector is the
//! unique (up to scale) kernel vector of minimal top index already in
//! canonical form. Solvers that want "lowest degree, normalized" take
//! `basis[0]` as is.

use crate::scalar::{Backend, Scalar};

#[derive(Debug)]
pub struct KernelResult {
    /// Kernel basis ordered by increasing top index (= the free column).
    pub basis: Vec<Vec<Scalar>>,
    pub rank: usize,
}

impl KernelResult {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn ln_abs_or_neg_inf(s: &Scalar) -> f64 {
    if s.is_zero() {
        f64::NEG_INFINITY
    } else {
        s.ln_abs()
    }
}

/// Kernel of the `rows.len() x cols` matrix.
#[allow(clippy::needless_range_loop)] // index loops keep the row mutation legible
pub fn kernel(rows: &[Vec<Scalar>], cols: usize, backend: Backend) -> KernelResult {
    for r in rows {
        assert_eq!(r.len(), cols, "ragged matrix row");
    }
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ln_tol = match backend {
        Backend::Exact => f64::NEG_INFINITY,
        Backend::Float { digits } => {
            let ln_max = m
                .iter()
                .flatten()
                .map(ln_abs_or_neg_inf)
                .fold(f64::NEG_INFINITY, f64::max);
            if ln_max == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                ln_max + crate::tolerances::cluster_radius(digits).ln()
            }
        }
    };
    let is_negligible = |s: &Scalar| -> bool {
        if s.is_zero() {
            return true;
        }
        match backend {
            Backend::Exact => false,
            Backend::Float { .. } => s.ln_abs() <= ln_tol,
        }
    };

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row_at = 0usize;
    for col in 0..cols {
        // Largest surviving entry in this column keeps elimination stable.
        let mut best: Option<(usize, f64)> = None;
        for r in row_at..m.len() {
            if is_negligible(&m[r][col]) {
                continue;
            }
            let mag = ln_abs_or_neg_inf(&m[r][col]);
            if best.is_none_or(|(_, b)| mag > b) {
                best = Some((r, mag));
            }
        }
        let Some((prow, _)) = best else {
            continue;
        };
        m.swap(row_at, prow);
        let inv = m[row_at][col].inv();
        for c in col..cols {
            m[row_at][c] = &m[row_at][c] * &inv;
        }
        m[row_at][col] = backend.one();
        for r in 0..m.len() {
            if r == row_at || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let t = &m[row_at][c] * &factor;
                m[r][c] = &m[r][c] - &t;
            }
            m[r][col] = backend.zero();
        }
        pivot_cols.push(col);
        row_at += 1;
        if row_at == m.len() {
            break;
        }
    }

    let rank = pivot_cols.len();
    let mut basis = Vec::with_capacity(cols - rank);
    let mut pivot_of_col = vec![None; cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        pivot_of_col[c] = Some(i);
    }
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![backend.zero(); cols];
        v[f] = backend.one();
        for (i, &p) in pivot_cols.iter().enumerate() {
            if p < f {
                let entry = &m[i][f];
                if !is_negligible(entry) {
                    v[p] = entry.neg();
                }
            }
        }
        basis.push(v);
    }
    KernelResult { basis, rank }
}

/// `rows * v` for verification of kernel candidates.
pub fn mat_vec(rows: &[Vec<Scalar>], v: &[Scalar], backend: Backend) -> Vec<Scalar> {
    rows.iter()
        .map(|row| {
            let mut acc = backend.zero();
            for (a, b) in row.iter().zip(v.iter()) {
                acc = &acc + &(a * b);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex() -> Backend {
        Backend::Exact
    }

    fn row(vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| ex().from_int(v)).collect()
    }

    #[test]
    fn rank_one_kernel_two() {
        let rows = vec![row(&[1, 2, 3]), row(&[2, 4, 6])];
        let k = kernel(&rows, 3, ex());
        assert_eq!(k.rank, 1);
        assert_eq!(k.dimension(), 2);
        assert_eq!(k.basis[0], row(&[-2, 1, 0]));
        assert_eq!(k.basis[1], row(&[-3, 0, 1]));
        for v in &k.basis {
            for r in mat_vec(&rows, v, ex()) {
                assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_square_has_trivial_kernel() {
        let rows = vec![row(&[2, 1]), row(&[1, 1])];
        let k = kernel(&rows, 2, ex());
        assert_eq!(k.rank, 2);
        assert_eq!(k.dimension(), 0);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let rows = vec![row(&[0, 0, 0])];
        let k = kernel(&rows, 3, ex());
        assert_eq!(k.rank, 0);
        assert_eq!(k.dimension(), 3);
        for (i, v) in k.basis.iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                assert_eq!(c.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn empty_rows_full_kernel() {
        let k = kernel(&[], 2, ex());
        assert_eq!(k.rank, 0);
        assert_eq!(k.dimension(), 2);
    }

    #[test]
    fn float_threshold_drops_noise_row() {
        let b = Backend::Float { digits: 30 };
        let eps = 1e-25; // below 10^-15 relative to the unit-scale entries
        let rows = vec![
            vec![b.from_c64((1.0).into()), b.from_c64((2.0).into())],
            vec![b.from_c64(eps.into()), b.from_c64((2.0 * eps).into())],
        ];
        let k = kernel(&rows, 2, b);
        assert_eq!(k.rank, 1, "noise row must not raise the rank");
        assert_eq!(k.dimension(), 1);
        let v = &k.basis[0];
        let c = v[0].to_c64();
        assert!((c.re + 2.0).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn minimal_top_is_first() {
        // Kernel contains (1,0,0,...) when first column is zero.
        let rows = vec![row(&[0, 1, 0]), row(&[0, 0, 1])];
        let k = kernel(&rows, 3, ex());
        assert_eq!(k.dimension(), 1);
        assert_eq!(k.basis[0], row(&[1, 0, 0]));
    }
}

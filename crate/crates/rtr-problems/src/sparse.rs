use rtr_core::DeterministicRng;

/// A sparse matrix in coordinate (triplet) form.
///
/// The benchmark targets are sparse with roughly a fixed fraction of
/// nonzero entries; they are generated once per instance and then only
/// ever *applied* — to a skinny `r`-column factor or inside a weighted
/// inner product — so triplets are the right representation and the
/// matrix is never densified, at desk scale or paper scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoo {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseCoo {
    /// Samples a `rows x cols` matrix whose cells are independently
    /// nonzero with probability `density`, each nonzero uniform on
    /// `[0, 1)`.
    pub fn sample(rows: usize, cols: usize, density: f64, rng: &mut DeterministicRng) -> Self {
        let mut entries = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if rng.uniform() < density {
                    entries.push((i, j, rng.uniform()));
                }
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Samples a symmetric `n x n` matrix: each unordered index pair is
    /// independently nonzero with probability `density`, and off-diagonal
    /// hits are mirrored so that `A = A^T` holds exactly (both triangles
    /// are stored).
    pub fn sample_symmetric(n: usize, density: f64, rng: &mut DeterministicRng) -> Self {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if rng.uniform() < density {
                    let value = rng.uniform();
                    entries.push((i, j, value));
                    if i != j {
                        entries.push((j, i, value));
                    }
                }
            }
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Builds the triplet form of a dense row-major matrix, dropping exact
    /// zeros. Test-support constructor for cross-checking the sparse paths
    /// against dense formulas.
    #[cfg(test)]
    pub(crate) fn from_dense(data: &[f64], rows: usize, cols: usize) -> Self {
        assert_eq!(data.len(), rows * cols, "from_dense: length mismatch");
        let mut entries = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let value = data[i * cols + j];
                if value != 0.0 {
                    entries.push((i, j, value));
                }
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored entries (symmetric matrices store both triangles).
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Squared Frobenius norm over the stored entries.
    pub fn fro_norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, _, v)| v * v).sum()
    }

    /// `A * X` for a row-major `cols x k` matrix `X`; the result is
    /// row-major `rows x k`. Cost is `O(nnz * k)`.
    pub fn mul_mat(&self, x: &[f64], k: usize) -> Vec<f64> {
        assert_eq!(x.len(), self.cols * k, "mul_mat: operand length mismatch");
        let mut out = vec![0.0; self.rows * k];
        for &(i, j, v) in &self.entries {
            let x_row = &x[j * k..(j + 1) * k];
            let out_row = &mut out[i * k..(i + 1) * k];
            for (o, &xv) in out_row.iter_mut().zip(x_row) {
                *o += v * xv;
            }
        }
        out
    }

    /// `A^T * X` for a row-major `rows x k` matrix `X`; the result is
    /// row-major `cols x k`.
    pub fn tr_mul_mat(&self, x: &[f64], k: usize) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.rows * k,
            "tr_mul_mat: operand length mismatch"
        );
        let mut out = vec![0.0; self.cols * k];
        for &(i, j, v) in &self.entries {
            let x_row = &x[i * k..(i + 1) * k];
            let out_row = &mut out[j * k..(j + 1) * k];
            for (o, &xv) in out_row.iter_mut().zip(x_row) {
                *o += v * xv;
            }
        }
        out
    }

    /// `sum_{(i,j)} A_ij <L_i, R_j>` with `L` row-major `rows x k` and `R`
    /// row-major `cols x k` — the inner product `<L R^T, A>` computed
    /// through the sparsity pattern without forming `L R^T`.
    pub fn weighted_inner(&self, l: &[f64], r: &[f64], k: usize) -> f64 {
        assert_eq!(
            l.len(),
            self.rows * k,
            "weighted_inner: left factor length mismatch"
        );
        assert_eq!(
            r.len(),
            self.cols * k,
            "weighted_inner: right factor length mismatch"
        );
        let mut acc = 0.0;
        for &(i, j, v) in &self.entries {
            let l_row = &l[i * k..(i + 1) * k];
            let r_row = &r[j * k..(j + 1) * k];
            let dot: f64 = l_row.iter().zip(r_row).map(|(a, b)| a * b).sum();
            acc += v * dot;
        }
        acc
    }
}

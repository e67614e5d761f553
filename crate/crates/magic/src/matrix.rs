//! Dense row-major matrices and the handful of small-K kernels the model needs.
//!
//! Affiliation matrices are N x K and interaction matrices are K x K with K
//! typically in the tens, so plain contiguous storage with tight loops beats
//! anything fancier here.

/// Dense row-major `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from a row-major value list. Panics if the length
    /// does not match the shape.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// `self += scale * u v^T`.
    pub fn add_outer(&mut self, scale: f64, u: &[f64], v: &[f64]) {
        debug_assert_eq!(u.len(), self.rows);
        debug_assert_eq!(v.len(), self.cols);
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
            let s = scale * ui;
            for (slot, &vj) in row.iter_mut().zip(v) {
                *slot += s * vj;
            }
        }
    }

    /// `self v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = dot(self.row(i), v);
        }
        out
    }

    /// `self^T v`, i.e. `v` premultiplied as a row vector.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (slot, &a) in out.iter_mut().zip(self.row(i)) {
                *slot += vi * a;
            }
        }
        out
    }

    pub fn transposed(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Replaces the matrix with `(self + self^T) / 2`. Square only.
    pub fn symmetrize(&mut self) {
        assert_eq!(self.rows, self.cols, "symmetrize requires a square matrix");
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                let m = 0.5 * (self.get(r, c) + self.get(c, r));
                self.set(r, c, m);
                self.set(c, r, m);
            }
        }
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Column sums, i.e. the sum of all rows as a single vector.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            add_assign(&mut out, self.row(r));
        }
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `u^T A v` without allocating.
pub fn bilinear(u: &[f64], a: &Matrix, v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), a.rows());
    debug_assert_eq!(v.len(), a.cols());
    let mut acc = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0.0 {
            continue;
        }
        acc += ui * dot(a.row(i), v);
    }
    acc
}

/// `u^T A v` with `A` given as a flat row-major slice of shape `k x k`.
pub fn bilinear_flat(u: &[f64], a_flat: &[f64], k: usize, v: &[f64]) -> f64 {
    debug_assert_eq!(a_flat.len(), k * k);
    let mut acc = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0.0 {
            continue;
        }
        acc += ui * dot(&a_flat[i * k..(i + 1) * k], v);
    }
    acc
}

pub fn add_assign(target: &mut [f64], source: &[f64]) {
    debug_assert_eq!(target.len(), source.len());
    for (t, &s) in target.iter_mut().zip(source) {
        *t += s;
    }
}

pub fn sub_assign(target: &mut [f64], source: &[f64]) {
    debug_assert_eq!(target.len(), source.len());
    for (t, &s) in target.iter_mut().zip(source) {
        *t -= s;
    }
}

/// `target += scale * source`.
pub fn axpy(target: &mut [f64], scale: f64, source: &[f64]) {
    debug_assert_eq!(target.len(), source.len());
    for (t, &s) in target.iter_mut().zip(source) {
        *t += scale * s;
    }
}

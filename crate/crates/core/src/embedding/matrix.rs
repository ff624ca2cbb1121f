use std::sync::atomic::{AtomicU64, Ordering};

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Row access used by the update rules, implemented for exclusive dense
/// storage and for the shared lock-free storage used by parallel training.
pub trait ParamStore {
    fn dims(&self) -> usize;
    fn read(&self, row: u32, out: &mut [f64]);
    /// `row += scale * delta`
    fn add_scaled(&mut self, row: u32, delta: &[f64], scale: f64);
}

pub struct DenseRows<'a>(pub &'a mut Matrix);

impl ParamStore for DenseRows<'_> {
    fn dims(&self) -> usize {
        self.0.cols
    }

    fn read(&self, row: u32, out: &mut [f64]) {
        out.copy_from_slice(self.0.row(row as usize));
    }

    fn add_scaled(&mut self, row: u32, delta: &[f64], scale: f64) {
        for (p, d) in self.0.row_mut(row as usize).iter_mut().zip(delta) {
            *p += scale * d;
        }
    }
}

/// Matrix of `f64` bit patterns in relaxed atomics.
///
/// Concurrent writers may interleave and lose updates on the same row; this
/// is the accepted relaxed-consistency contract of lock-free training.
pub struct AtomicMatrix {
    cols: usize,
    data: Vec<AtomicU64>,
}

impl AtomicMatrix {
    pub fn from_matrix(m: &Matrix) -> Self {
        AtomicMatrix {
            cols: m.cols,
            data: m.data.iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows = self.data.len() / self.cols.max(1);
        Matrix::from_vec(
            rows,
            self.cols,
            self.data
                .iter()
                .map(|a| f64::from_bits(a.load(Ordering::Relaxed)))
                .collect(),
        )
    }
}

#[derive(Clone, Copy)]
pub struct SharedRows<'a>(pub &'a AtomicMatrix);

impl ParamStore for SharedRows<'_> {
    fn dims(&self) -> usize {
        self.0.cols
    }

    fn read(&self, row: u32, out: &mut [f64]) {
        let start = row as usize * self.0.cols;
        for (o, a) in out.iter_mut().zip(&self.0.data[start..start + self.0.cols]) {
            *o = f64::from_bits(a.load(Ordering::Relaxed));
        }
    }

    fn add_scaled(&mut self, row: u32, delta: &[f64], scale: f64) {
        let start = row as usize * self.0.cols;
        for (a, d) in self.0.data[start..start + self.0.cols].iter().zip(delta) {
            let v = f64::from_bits(a.load(Ordering::Relaxed)) + scale * d;
            a.store(v.to_bits(), Ordering::Relaxed);
        }
    }
}

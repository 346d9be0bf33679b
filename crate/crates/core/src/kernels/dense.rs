use std::ops::Index;

use super::spec::{KernelSpec, MAX_EXPLICIT_STATES};
use super::KernelError;
use crate::scalar::Scalar;

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        Self { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = &self.data[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[l * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] = out.data[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.matmul(self))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { n: self.n, data }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).iter().fold(T::zero(), |acc, a| acc + a.clone())).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn nonzero_in_row(&self, i: usize) -> usize {
        self.row(i).iter().filter(|a| !a.is_zero()).count()
    }

    /// Smallest non-zero entry, `None` for the zero matrix.
    pub fn min_nonzero(&self) -> Option<T> {
        self.data.iter().filter(|a| !a.is_zero()).fold(None, |best: Option<T>, a| match best {
            Some(b) if b <= *a => Some(b),
            _ => Some(a.clone()),
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { n: self.n, data: self.data.iter().map(f).collect() }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

/// Realises the full transition matrix of `kernel`, one row per state.
///
/// Row `v` is obtained by pushing the point mass at `v` through the kernel, so the result
/// is exact when `T` is [`Rational`](crate::Rational). Limited to 4096 states.
pub fn dense_matrix<T: Scalar>(kernel: &KernelSpec) -> Result<DenseMatrix<T>, KernelError> {
    let n = kernel.state_count();
    if n > MAX_EXPLICIT_STATES as u64 {
        return Err(KernelError::SizeGuard { states: n, limit: MAX_EXPLICIT_STATES as u64 });
    }
    let n = n as usize;
    let mut data = Vec::with_capacity(n * n);
    let mut delta = vec![T::zero(); n];
    for v in 0..n {
        delta[v] = T::one();
        data.extend(kernel.push_forward(&delta)?);
        delta[v] = T::zero();
    }
    Ok(DenseMatrix { n, data })
}

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Sub};

/// Square matrix of size `dim ≤ 3`, stored inline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    entries: [[T; 3]; 3],
}

pub type RealMatrix = SquareMatrix<f64>;
pub type ComplexMatrix = SquareMatrix<Complex64>;

impl<T> SquareMatrix<T>
where
    T: Copy + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=3).contains(&dim));
        SquareMatrix {
            dim,
            entries: [[T::zero(); 3]; 3],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i][i] = T::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.dim && j < self.dim);
        self.entries[i][j]
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.dim, |i, j| self.entries[i][j] * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.entries[j][i])
    }

    pub fn mul_vec(&self, v: &[T]) -> [T; 3] {
        assert_eq!(v.len(), self.dim);
        let mut out = [T::zero(); 3];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            let mut acc = T::zero();
            for (j, vj) in v.iter().enumerate() {
                acc = acc + self.entries[i][j] * *vj;
            }
            *o = acc;
        }
        out
    }
}

impl<T> Add for SquareMatrix<T>
where
    T: Copy + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<T> Sub for SquareMatrix<T>
where
    T: Copy + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<T> Mul for SquareMatrix<T>
where
    T: Copy + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(T::zero(), |acc, k| {
                acc + self.entries[i][k] * rhs.entries[k][j]
            })
        })
    }
}

impl RealMatrix {
    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.entries[i][j].abs());
            }
        }
        m
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| Complex64::new(self.entries[i][j], 0.0))
    }
}

impl ComplexMatrix {
    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.entries[i][j].norm());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_identity() {
        let a = RealMatrix::from_fn(3, |i, j| (i * 3 + j) as f64);
        let id = RealMatrix::identity(3);
        assert_eq!(a * id, a);
        assert_eq!(id * a, a);
        let v = a.mul_vec(&[1.0, 0.0, -1.0]);
        assert_eq!(v, [-2.0, -2.0, -2.0]);
        assert_eq!((a - a).max_abs(), 0.0);
        assert_eq!(a.transpose().get(0, 2), 6.0);
    }
}

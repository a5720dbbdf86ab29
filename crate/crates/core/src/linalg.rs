//! Dense square matrices over exact fields and the Hessenberg
//! characteristic-polynomial recursion.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(<[T]>::to_vec).take(self.n).collect()
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// True when every entry below the first subdiagonal vanishes.
    pub fn is_upper_hessenberg(&self) -> bool {
        (0..self.n).all(|i| (0..i.saturating_sub(1)).all(|j| self.get(i, j).is_zero()))
    }

    /// First `(row, col)` where the two matrices differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)>
    where
        T: PartialEq,
    {
        if self.n != other.n {
            return Some((self.n.min(other.n), 0));
        }
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + for<'a> Add<&'a T, Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix::from_fn(self.n, |i, j| {
            (0..self.n).fold(T::zero(), |acc, k| acc + &(self.get(i, k) * rhs.get(k, j)))
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(i, j).clone() + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x * c)
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Coefficients (ascending) of `det(x I - self)` for an upper Hessenberg matrix.
    ///
    /// `p_k` is the characteristic polynomial of the leading k×k block:
    /// `p_k = (x - h_kk) p_{k-1} - sum_i h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}`.
    pub fn hessenberg_char_poly(&self) -> Vec<T> {
        assert!(self.is_upper_hessenberg(), "matrix is not upper Hessenberg");
        let n = self.n;
        let mut minors: Vec<Vec<T>> = Vec::with_capacity(n + 1);
        minors.push(vec![T::one()]);
        for k in 0..n {
            // (x - h_kk) p_{k}
            let prev = &minors[k];
            let mut next = vec![T::zero(); k + 2];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] = next[d + 1].clone() + c;
                next[d] = &next[d] - &(c * self.get(k, k));
            }
            let mut chain = T::one();
            for i in (0..k).rev() {
                chain = &chain * self.get(i + 1, i);
                if chain.is_zero() {
                    break;
                }
                let factor = self.get(i, k) * &chain;
                if factor.is_zero() {
                    continue;
                }
                for (d, c) in minors[i].iter().enumerate() {
                    next[d] = &next[d] - &(c * &factor);
                }
            }
            minors.push(next);
        }
        minors.pop().expect("at least one minor")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_fn(rows.len(), |i, j| rat(rows[i][j]))
    }

    #[test]
    fn two_by_two() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.hessenberg_char_poly(), vec![rat(-2), rat(-5), rat(1)]);
    }

    #[test]
    fn three_cycle() {
        // det(xI - A) = x^3 - 16
        let a = m(&[&[0, 0, 2], &[-4, 0, 0], &[0, -2, 0]]);
        assert_eq!(a.hessenberg_char_poly(), vec![rat(-16), rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn empty_matrix_is_one() {
        let a: Matrix<Rational> = Matrix::zeros(0);
        assert_eq!(a.hessenberg_char_poly(), vec![rat(1)]);
    }

    #[test]
    fn commutator_of_identity_vanishes() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.commutator(&Matrix::identity(2)), Matrix::zeros(2));
        assert_eq!(a.trace(), rat(5));
    }
}

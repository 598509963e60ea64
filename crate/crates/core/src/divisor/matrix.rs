use std::fmt;

use crate::scalar::Scalar;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not match");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length does not match");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant of the leading `k x k` block by fraction-free Bareiss
    /// elimination (exact over the integers).
    pub fn leading_minor(&self, k: usize) -> T {
        assert!(k <= self.rows && k <= self.cols);
        if k == 0 {
            return T::one();
        }
        let mut a: Vec<Vec<T>> = (0..k)
            .map(|i| (0..k).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = T::one();
        let mut prev = T::one();
        for p in 0..k - 1 {
            if a[p][p].is_zero() {
                match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                    Some(r) => {
                        a.swap(p, r);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in p + 1..k {
                for j in p + 1..k {
                    let num = a[i][j].clone() * a[p][p].clone() - a[i][p].clone() * a[p][j].clone();
                    a[i][j] = num / prev.clone();
                }
            }
            prev = a[p][p].clone();
        }
        sign * a[k - 1][k - 1].clone()
    }

    /// All leading principal minors `d_1, ..., d_n`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows.min(self.cols)).map(|k| self.leading_minor(k)).collect()
    }

    /// Sylvester's criterion for `-self`: minors alternate `-, +, -, ...`.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric()
            && self.leading_minors().iter().enumerate().all(|(i, d)| {
                if i % 2 == 0 {
                    d.is_negative()
                } else {
                    d.is_positive()
                }
            })
    }
}

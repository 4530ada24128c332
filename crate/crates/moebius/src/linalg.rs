//! Dense matrices over the rationals, with just enough Gaussian elimination
//! for kernels, images and splittings.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Q>) -> Mat {
        assert_eq!(entries.len(), rows * cols);
        Mat {
            rows,
            cols,
            data: entries,
        }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Mat {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Columns `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as the columns of the result.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                out[(p, k)] = -r[(i, f)].clone();
            }
        }
        out
    }

    /// Basis of the column space, chosen among the columns.
    pub fn image(&self) -> Mat {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<Q>> = pivots.iter().map(|&j| self.col(j)).collect();
        Mat::from_cols(self.rows, &cols)
    }

    /// A solution `X` of `self * X = b`, if one exists.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let (r, pivots) = self.hcat(b).rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.rows))?;
        (self.mul(&x) == Mat::identity(self.rows)).then_some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

//! Dense integer matrices and Smith normal form.
//!
//! Only what the Čech oracles need: exact rank, kernel bases and cokernel
//! dimensions of small integer matrices.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|i| {
                (0..self.cols).try_fold(0i64, |acc, j| {
                    self[(i, j)]
                        .checked_mul(v[j])
                        .and_then(|x| acc.checked_add(x))
                        .ok_or(LinalgError::Overflow)
                })
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let col = self.mul_vec(&other.column(j))?;
            for (i, x) in col.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) -> Result<(), LinalgError> {
        for j in 0..self.cols {
            let v = self[(src, j)]
                .checked_mul(c)
                .and_then(|x| x.checked_add(self[(dst, j)]))
                .ok_or(LinalgError::Overflow)?;
            self[(dst, j)] = v;
        }
        Ok(())
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) -> Result<(), LinalgError> {
        for i in 0..self.rows {
            let v = self[(i, src)]
                .checked_mul(c)
                .and_then(|x| x.checked_add(self[(i, dst)]))
                .ok_or(LinalgError::Overflow)?;
            self[(i, dst)] = v;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), LinalgError> {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].checked_neg().ok_or(LinalgError::Overflow)?;
        }
        Ok(())
    }

    /// Smith normal form `left · self · right = diag(d_1, ..., d_r, 0, ...)`
    /// with `d_i > 0` and `d_i | d_{i+1}`; `left` and `right` are unimodular.
    pub fn smith(&self) -> Result<Smith, LinalgError> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut left = Self::identity(m);
        let mut right = Self::identity(n);

        // Row operations are mirrored on `left`, column operations on `right`.
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = a.min_abs_nonzero(t) else {
                break;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            loop {
                let pivot = a[(t, t)];
                let mut clean = true;
                for i in t + 1..m {
                    let q = a[(i, t)].div_euclid(pivot);
                    if q != 0 {
                        a.add_row(i, t, -q)?;
                        left.add_row(i, t, -q)?;
                    }
                    if a[(i, t)] != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    let q = a[(t, j)].div_euclid(pivot);
                    if q != 0 {
                        a.add_col(j, t, -q)?;
                        right.add_col(j, t, -q)?;
                    }
                    if a[(t, j)] != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    // A smaller remainder is left in row or column t; move it
                    // into the pivot and repeat.
                    let (bi, bj) = a.min_abs_in_cross(t);
                    a.swap_rows(t, bi);
                    left.swap_rows(t, bi);
                    a.swap_cols(t, bj);
                    right.swap_cols(t, bj);
                    continue;
                }
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[(i, j)] % pivot != 0);
                match bad {
                    Some((i, _)) => {
                        a.add_row(t, i, 1)?;
                        left.add_row(t, i, 1)?;
                    }
                    None => break,
                }
            }
            if a[(t, t)] < 0 {
                a.negate_row(t)?;
                left.negate_row(t)?;
            }
            t += 1;
        }

        let diag = (0..t).map(|i| a[(i, i)]).collect();
        Ok(Smith {
            diag,
            left,
            right,
            shape: (m, n),
        })
    }

    fn min_abs_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self[(i, j)].unsigned_abs();
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn min_abs_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (self[(t, t)].unsigned_abs(), t, t);
        for i in t + 1..self.rows {
            let v = self[(i, t)].unsigned_abs();
            if v != 0 && v < best.0 {
                best = (v, i, t);
            }
        }
        for j in t + 1..self.cols {
            let v = self[(t, j)].unsigned_abs();
            if v != 0 && v < best.0 {
                best = (v, t, j);
            }
        }
        (best.1, best.2)
    }

    pub fn rank(&self) -> Result<usize, LinalgError> {
        Ok(self.smith()?.rank())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<i64> = (0..self.cols).map(|j| self[(i, j)]).collect();
            writeln!(f, "  {row:?}")?;
        }
        f.write_str("]")
    }
}

/// Result of [`IntMatrix::smith`].
#[derive(Debug, Clone)]
pub struct Smith {
    /// Nonzero invariant factors, in order.
    pub diag: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    shape: (usize, usize),
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Integer basis of the kernel: the trailing columns of `right`.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.shape.1)
            .map(|j| self.right.column(j))
            .collect()
    }

    /// Dimension of the cokernel over the rationals.
    pub fn cokernel_rank(&self) -> usize {
        self.shape.0 - self.rank()
    }

    /// Invariant factors greater than one (torsion of the integral cokernel).
    pub fn torsion(&self) -> Vec<i64> {
        self.diag.iter().copied().filter(|&d| d > 1).collect()
    }
}

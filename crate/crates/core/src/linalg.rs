//! Dense exact linear algebra over Q(q), sized for the small systems that
//! arise when solving for conjugation cofactors.

use crate::coeff::CoeffRat;
use crate::error::Result;

/// A dense matrix in row-major order.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<CoeffRat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![CoeffRat::zero(); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &CoeffRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CoeffRat) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-reduce in place; returns the pivot columns. Exact arithmetic,
    /// partial "pivoting" just picks the first nonzero entry.
    fn reduce(&mut self) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| !self.at(r, col).is_zero())
            else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, pivot_row * self.cols + c);
            }
            let inv = self.at(row, col).inv()?;
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&self.at(row, c).mul(&factor));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.reduce()?.len())
    }
}

/// Solve M x = b exactly. Returns None when the system is inconsistent;
/// free variables, if any, are set to zero.
pub fn solve(m: &Matrix, b: &[CoeffRat]) -> Result<Option<Vec<CoeffRat>>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Matrix::zero(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.at(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let pivots = aug.reduce()?;
    if pivots.contains(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![CoeffRat::zero(); m.cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug.at(row, m.cols).clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_coeff;

    fn c(s: &str) -> CoeffRat {
        parse_coeff(s).unwrap()
    }

    #[test]
    fn solves_a_two_by_two_system() {
        // (q  1) (x)   (q + 1)
        // (0  q) (y) = (q)      => x = y = 1
        let mut m = Matrix::zero(2, 2);
        m.set(0, 0, c("q"));
        m.set(0, 1, c("1"));
        m.set(1, 1, c("q"));
        let sol = solve(&m, &[c("q + 1"), c("q")]).unwrap().unwrap();
        assert_eq!(sol, vec![c("1"), c("1")]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut m = Matrix::zero(2, 1);
        m.set(0, 0, c("1"));
        m.set(1, 0, c("1"));
        assert!(solve(&m, &[c("1"), c("2")]).unwrap().is_none());
    }

    #[test]
    fn rank_sees_dependent_rows() {
        let mut m = Matrix::zero(2, 2);
        m.set(0, 0, c("1"));
        m.set(0, 1, c("q"));
        m.set(1, 0, c("q"));
        m.set(1, 1, c("q^2"));
        assert_eq!(m.rank().unwrap(), 1);
    }
}

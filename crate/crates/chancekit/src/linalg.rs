//! Exact dense linear algebra over the rationals, plus Newton interpolation.
//!
//! Matrices here are small (tens of rows), so plain fraction-full Gaussian
//! elimination is both simplest and fast enough; all the heavy lifting in the
//! crate happens at scalar sample points precisely so that these routines never
//! see polynomial entries.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Solves the square system `a x = b`, also returning `det(a)`.
/// Fails with `EliminationDegenerate` when the matrix is singular.
pub fn solve_with_det(a: &Mat, b: &[Rational]) -> Result<(Vec<Rational>, Rational)> {
    assert_eq!(a.rows, a.cols, "square system required");
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
        let Some(pivot) = pivot else {
            return Err(Error::EliminationDegenerate(format!(
                "singular matrix at column {col}"
            )));
        };
        if pivot != col {
            m.swap_rows(pivot, col);
            rhs.swap(pivot, col);
            det = -det;
        }
        let p = m.at(col, col).clone();
        det = &det * &p;
        for r in col + 1..n {
            if m.at(r, col).is_zero() {
                continue;
            }
            let factor = m.at(r, col).checked_div(&p)?;
            for j in col..n {
                let t = &factor * m.at(col, j);
                *m.at_mut(r, j) -= &t;
            }
            let t = &factor * &rhs[col];
            rhs[r] -= &t;
        }
    }
    // back substitution
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            let t = m.at(i, j) * &x[j];
            acc -= &t;
        }
        x[i] = acc.checked_div(m.at(i, i))?;
    }
    Ok((x, det))
}

pub fn solve(a: &Mat, b: &[Rational]) -> Result<Vec<Rational>> {
    solve_with_det(a, b).map(|(x, _)| x)
}

pub fn det(a: &Mat) -> Rational {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap_rows(pivot, col);
            det = -det;
        }
        let p = m.at(col, col).clone();
        det = &det * &p;
        for r in col + 1..n {
            if m.at(r, col).is_zero() {
                continue;
            }
            let factor = m.at(r, col) / &p;
            for j in col..n {
                let t = &factor * m.at(col, j);
                *m.at_mut(r, j) -= &t;
            }
        }
    }
    det
}

/// Reduces `m` to reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(p, row);
        let inv = m.at(row, col).recip().unwrap();
        for j in col..m.cols {
            *m.at_mut(row, j) *= &inv;
        }
        for r in 0..m.rows {
            if r == row || m.at(r, col).is_zero() {
                continue;
            }
            let factor = m.at(r, col).clone();
            for j in col..m.cols {
                let t = &factor * m.at(row, j);
                *m.at_mut(r, j) -= &t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the right nullspace of `a` (possibly empty for full column rank).
pub fn nullspace(a: &Mat) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); a.cols];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m.at(r, f);
        }
        basis.push(v);
    }
    basis
}

/// Newton divided-difference interpolation through `(x_i, y_i)` with distinct
/// nodes; returns the unique polynomial of degree `< points.len()`.
pub fn newton_interpolate(points: &[(Rational, Rational)]) -> Poly {
    if points.is_empty() {
        return Poly::zero();
    }
    let n = points.len();
    // divided-difference coefficients
    let mut coef: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &points[i].0 - &points[i - level].0;
            assert!(!dx.is_zero(), "repeated interpolation node");
            coef[i] = (&coef[i] - &coef[i - 1]) / dx;
        }
    }
    // Horner expansion of the Newton form into the monomial basis
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        let lin = Poly::new(vec![-&points[i].0, Rational::one()]);
        p = &(&p * &lin) + &Poly::constant(coef[i].clone());
    }
    p
}

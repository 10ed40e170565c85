//! Minimal dense matrix helpers for the Hamiltonian checks and the
//! least-squares machinery. Matrices here are tiny (at most 16 x 16),
//! so simple row-major storage is plenty.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DMat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Real> DMat<F> {
    pub fn zero(rows: usize, cols: usize) -> DMat<F> {
        DMat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &DMat<F>) -> DMat<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = DMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &DMat<F>) -> DMat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn add_scaled(&self, other: &DMat<F>, s: F) -> DMat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b * s)
                .collect(),
        }
    }

    pub fn frob_norm(&self) -> F {
        self.data.iter().map(|&c| c * c).sum::<F>().sqrt()
    }

    pub fn transpose_defect(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut worst = F::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// |AB - BA| in Frobenius norm.
pub fn commutator_norm<F: Real>(a: &DMat<F>, b: &DMat<F>) -> F {
    a.mul(b).sub(&b.mul(a)).frob_norm()
}

/// Solves the symmetric positive (semi)definite system `a x = b` by
/// Gaussian elimination with partial pivoting. Returns None if the
/// matrix is numerically singular.
pub fn solve_linear<F: Real>(a: &DMat<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m.get(i, col)
                    .abs()
                    .partial_cmp(&m.get(j, col).abs())
                    .unwrap()
            })
            .unwrap();
        let pv = m.get(pivot, col);
        if pv.abs() < F::of(1e-300) {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let (x, y) = (m.get(col, j), m.get(pivot, j));
                m.set(col, j, y);
                m.set(pivot, j, x);
            }
            rhs.swap(col, pivot);
        }
        for row in col + 1..n {
            let f = m.get(row, col) / m.get(col, col);
            if f == F::zero() {
                continue;
            }
            for j in col..n {
                let v = m.get(row, j) - f * m.get(col, j);
                m.set(row, j, v);
            }
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }
    let mut x = vec![F::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc = acc - m.get(row, j) * x[j];
        }
        x[row] = acc / m.get(row, row);
    }
    Some(x)
}

/// Minimum-norm least-squares solution of `a x ~ b` for a possibly
/// rank-deficient `a`, via ridge-regularized normal equations. Also
/// reports the numerical rank of `a`.
pub fn lstsq<F: Real>(a: &DMat<F>, b: &[F]) -> (Vec<F>, usize) {
    let n = a.cols;
    // normal matrix a^T a + eps I
    let mut ata = DMat::zero(n, n);
    let mut atb = vec![F::zero(); n];
    for i in 0..a.rows {
        for j in 0..n {
            let aij = a.get(i, j);
            if aij == F::zero() {
                continue;
            }
            atb[j] = atb[j] + aij * b[i];
            for k in 0..n {
                let v = ata.get(j, k) + aij * a.get(i, k);
                ata.set(j, k, v);
            }
        }
    }
    let rank = matrix_rank(a);
    let scale = (0..n).map(|j| ata.get(j, j)).fold(F::zero(), F::max);
    let eps = (scale + F::one()) * F::of(1e-12);
    let mut reg = ata.clone();
    for j in 0..n {
        let v = reg.get(j, j) + eps;
        reg.set(j, j, v);
    }
    let x = solve_linear(&reg, &atb).expect("regularized normal matrix is nonsingular");
    (x, rank)
}

fn matrix_rank<F: Real>(a: &DMat<F>) -> usize {
    let mut m = a.clone();
    let mut rank = 0;
    let tol = F::of(1e-10) * (F::one() + m.frob_norm());
    for col in 0..m.cols {
        let Some(pivot) = (rank..m.rows).max_by(|&i, &j| {
            m.get(i, col)
                .abs()
                .partial_cmp(&m.get(j, col).abs())
                .unwrap()
        }) else {
            break;
        };
        if m.get(pivot, col).abs() <= tol {
            continue;
        }
        for j in 0..m.cols {
            let (x, y) = (m.get(rank, j), m.get(pivot, j));
            m.set(rank, j, y);
            m.set(pivot, j, x);
        }
        for row in 0..m.rows {
            if row == rank {
                continue;
            }
            let f = m.get(row, col) / m.get(rank, col);
            if f == F::zero() {
                continue;
            }
            for j in 0..m.cols {
                let v = m.get(row, j) - f * m.get(rank, j);
                m.set(row, j, v);
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, vals: &[f64]) -> DMat<f64> {
        DMat {
            rows,
            cols,
            data: vals.to_vec(),
        }
    }

    #[test]
    fn mul_and_commutator() {
        let a = mat(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = mat(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(a.mul(&b).data, vec![2.0, 1.0, 4.0, 3.0]);
        let id = mat(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(commutator_norm(&a, &id), 0.0);
        assert!(commutator_norm(&a, &b) > 0.0);
    }

    #[test]
    fn solve_exact() {
        let a = mat(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let x = solve_linear(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        let singular = mat(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(solve_linear(&singular, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn lstsq_overdetermined() {
        // fit y = 2x + 1 through exact points
        let a = mat(3, 2, &[0.0, 1.0, 1.0, 1.0, 2.0, 1.0]);
        let (x, rank) = lstsq(&a, &[1.0, 3.0, 5.0]);
        assert_eq!(rank, 2);
        assert!((x[0] - 2.0).abs() < 1e-6);
        assert!((x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lstsq_rank_deficient() {
        let a = mat(2, 2, &[1.0, 1.0, 2.0, 2.0]);
        let (x, rank) = lstsq(&a, &[2.0, 4.0]);
        assert_eq!(rank, 1);
        // minimum-norm solution splits the weight evenly
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5);
    }
}

//! Linear and quadratic forms over the M time directions, the wedge
//! product, and the rapidity-parametrized partner forms that complete a
//! 4-cycle from two of its coupling forms.

use crate::orient::CycleType;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A 1-form: M real components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearForm<F> {
    pub comps: Vec<F>,
}

impl<F: Real> LinearForm<F> {
    pub fn new(comps: Vec<F>) -> LinearForm<F> {
        assert!(comps.iter().all(|c| c.is_finite()));
        LinearForm { comps }
    }

    pub fn zero(m: usize) -> LinearForm<F> {
        LinearForm {
            comps: vec![F::zero(); m],
        }
    }

    pub fn m(&self) -> usize {
        self.comps.len()
    }

    pub fn scaled(&self, s: F) -> LinearForm<F> {
        LinearForm {
            comps: self.comps.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &LinearForm<F>) -> LinearForm<F> {
        assert_eq!(self.m(), other.m());
        LinearForm {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn norm(&self) -> F {
        self.comps.iter().map(|&c| c * c).sum::<F>().sqrt()
    }

    /// Symmetric square f (x) f as a quadratic form.
    pub fn outer(&self) -> QuadraticForm<F> {
        let m = self.m();
        let mut data = vec![F::zero(); m * m];
        for j in 0..m {
            for k in 0..m {
                data[j * m + k] = self.comps[j] * self.comps[k];
            }
        }
        QuadraticForm { m, data }
    }
}

/// f ^ g: the antisymmetric components f_j g_k - f_k g_j for j < k.
/// A single scalar when M = 2.
pub fn wedge<F: Real>(f: &LinearForm<F>, g: &LinearForm<F>) -> Vec<F> {
    assert_eq!(f.m(), g.m());
    let m = f.m();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for j in 0..m {
        for k in j + 1..m {
            out.push(f.comps[j] * g.comps[k] - f.comps[k] * g.comps[j]);
        }
    }
    out
}

pub fn wedge_norm<F: Real>(f: &LinearForm<F>, g: &LinearForm<F>) -> F {
    wedge(f, g).iter().map(|&w| w * w).sum::<F>().sqrt()
}

/// |f ^ g| / (|f| |g|): 0 for parallel forms, 1 for orthogonal ones.
/// Returns 0 if either form vanishes.
pub fn wedge_margin<F: Real>(f: &LinearForm<F>, g: &LinearForm<F>) -> F {
    let denom = f.norm() * g.norm();
    if denom == F::zero() {
        F::zero()
    } else {
        wedge_norm(f, g) / denom
    }
}

/// A symmetric M x M matrix of components, stored dense row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm<F> {
    pub m: usize,
    pub data: Vec<F>,
}

impl<F: Real> QuadraticForm<F> {
    pub fn zero(m: usize) -> QuadraticForm<F> {
        QuadraticForm {
            m,
            data: vec![F::zero(); m * m],
        }
    }

    pub fn from_rows(rows: &[&[F]]) -> QuadraticForm<F> {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * m);
        for r in rows {
            assert_eq!(r.len(), m);
            data.extend_from_slice(r);
        }
        let q = QuadraticForm { m, data };
        assert!(q.symmetry_defect() == F::zero());
        q
    }

    pub fn get(&self, j: usize, k: usize) -> F {
        self.data[j * self.m + k]
    }

    pub fn symmetry_defect(&self) -> F {
        let mut worst = F::zero();
        for j in 0..self.m {
            for k in 0..self.m {
                worst = worst.max((self.get(j, k) - self.get(k, j)).abs());
            }
        }
        worst
    }

    pub fn add_scaled(&self, other: &QuadraticForm<F>, s: F) -> QuadraticForm<F> {
        assert_eq!(self.m, other.m);
        QuadraticForm {
            m: self.m,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b * s)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QuadraticForm<F>) -> QuadraticForm<F> {
        self.add_scaled(other, -F::one())
    }

    pub fn frob_norm(&self) -> F {
        self.data.iter().map(|&c| c * c).sum::<F>().sqrt()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartnerFormError {
    #[error("input forms are parallel; the family would be degenerate")]
    ParallelInputs,
    #[error("a forbidden cycle orientation has no partner forms")]
    ForbiddenCycle,
}

/// Given the two forms leaving one corner of a 4-cycle, produces the
/// two forms entering the opposite corner so the cycle property holds.
/// `theta` is the rapidity, `p` and `r` are branch signs.
///
/// Returns (form on the 2-3 edge, form on the 2-4 edge) when the inputs
/// sit on the 1-3 and 1-4 edges.
pub fn partner_forms<F: Real>(
    a13: &LinearForm<F>,
    a14: &LinearForm<F>,
    theta: F,
    p: i8,
    r: i8,
    ty: CycleType,
) -> Result<(LinearForm<F>, LinearForm<F>), PartnerFormError> {
    assert!(p == 1 || p == -1);
    assert!(r == 1 || r == -1);
    if wedge_norm(a13, a14) == F::zero() {
        return Err(PartnerFormError::ParallelInputs);
    }
    let (ch, sh) = (theta.cosh(), theta.sinh());
    let pf = F::of(p as f64);
    let rf = F::of(r as f64);
    let (a23, a24) = match ty {
        CycleType::NonBipartite => (
            a13.scaled(sh).add(&a14.scaled(-rf * ch)).scaled(pf),
            a13.scaled(ch).add(&a14.scaled(-rf * sh)).scaled(pf),
        ),
        CycleType::Bipartite => (
            a13.scaled(rf * ch).add(&a14.scaled(sh)).scaled(pf),
            a13.scaled(rf * sh).add(&a14.scaled(ch)).scaled(pf),
        ),
        CycleType::Forbidden => return Err(PartnerFormError::ForbiddenCycle),
    };
    Ok((a23, a24))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(c: &[f64]) -> LinearForm<f64> {
        LinearForm::new(c.to_vec())
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(wedge(&lf(&[1.0, 0.0]), &lf(&[0.0, 1.0])), vec![1.0]);
        let f = lf(&[0.7, -2.1]);
        assert_eq!(wedge(&f, &f), vec![0.0]);
        assert_eq!(wedge(&lf(&[2.0, 1.0]), &lf(&[4.0, 2.0])), vec![0.0]);
        // antisymmetry and bilinearity spot checks
        let g = lf(&[1.3, 0.4]);
        assert_eq!(wedge(&f, &g)[0], -wedge(&g, &f)[0]);
        let sum = f.add(&g.scaled(2.5));
        let h = lf(&[-0.2, 0.9]);
        let lhs = wedge(&sum, &h)[0];
        let rhs = wedge(&f, &h)[0] + 2.5 * wedge(&g, &h)[0];
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn partner_identities() {
        // the two wedge relations on a 4-cycle, both orientations
        let a13 = lf(&[1.0, 0.3]);
        let a14 = lf(&[-0.2, 1.1]);
        let w0 = wedge(&a13, &a14)[0];
        for &p in &[1i8, -1] {
            for &r in &[1i8, -1] {
                for &theta in &[0.0, 0.37, -1.2] {
                    let (a23, a24) =
                        partner_forms(&a13, &a14, theta, p, r, CycleType::NonBipartite).unwrap();
                    let rf = r as f64;
                    assert!((wedge(&a23, &a24)[0] - rf * w0).abs() < 1e-12);
                    assert!(
                        (wedge(&a14, &a24)[0] - rf * wedge(&a13, &a23)[0]).abs() < 1e-12
                    );
                    let (b23, b24) =
                        partner_forms(&a13, &a14, theta, p, r, CycleType::Bipartite).unwrap();
                    assert!((wedge(&b23, &b24)[0] - rf * w0).abs() < 1e-12);
                    assert!(
                        (wedge(&a14, &b24)[0] + rf * wedge(&a13, &b23)[0]).abs() < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn partner_theta_zero_identity() {
        let a13 = lf(&[1.0, 0.0]);
        let a14 = lf(&[0.0, 1.0]);
        let (a23, a24) = partner_forms(&a13, &a14, 0.0, 1, -1, CycleType::NonBipartite).unwrap();
        assert_eq!(a24, a13);
        assert_eq!(a23, a14);
    }

    #[test]
    fn partner_rejects_parallel() {
        let a13 = lf(&[1.0, 2.0]);
        let a14 = lf(&[2.0, 4.0]);
        assert_eq!(
            partner_forms(&a13, &a14, 0.5, 1, 1, CycleType::NonBipartite),
            Err(PartnerFormError::ParallelInputs)
        );
        assert_eq!(
            partner_forms(&a13, &lf(&[0.0, 1.0]), 0.5, 1, 1, CycleType::Forbidden),
            Err(PartnerFormError::ForbiddenCycle)
        );
    }

    #[test]
    fn quadratic_form_ops() {
        let f = lf(&[3.0, -1.0]);
        let q = f.outer();
        assert_eq!(q.get(0, 0), 9.0);
        assert_eq!(q.get(0, 1), -3.0);
        assert_eq!(q.symmetry_defect(), 0.0);
        let z = QuadraticForm::<f64>::zero(2);
        assert_eq!(z.add_scaled(&q, 2.0).get(1, 1), 2.0);
        assert_eq!(q.sub(&q).frob_norm(), 0.0);
    }
}

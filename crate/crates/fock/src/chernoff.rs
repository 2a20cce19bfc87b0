//! Quantum Chernoff exponent `−min_s log Tr ρ₀^s ρ₁^{1−s}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, FockOperator};

/// Eigenvalues at or below this are treated as exact zeros.
pub const EIGEN_FLOOR: f64 = 1e-15;
const GOLDEN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chernoff {
    /// `+∞` when the supports are orthogonal.
    pub exponent: f64,
    pub s: f64,
}

/// `Tr ρ₀^s ρ₁^{1−s} = Σᵢⱼ λᵢ^s μⱼ^{1−s} |⟨uᵢ|vⱼ⟩|²`, from one pair of
/// eigendecompositions.
#[derive(Clone, Debug)]
pub struct OverlapCurve {
    l0: DVector<f64>,
    l1: DVector<f64>,
    w: DMatrix<f64>,
}

fn support(rho: &FockOperator) -> Result<(DVector<f64>, DMatrix<num_complex::Complex64>)> {
    let (vals, vecs) = hermitian_eigen(rho.data())?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > EIGEN_FLOOR).collect();
    Ok((
        DVector::from_iterator(keep.len(), keep.iter().map(|&i| vals[i])),
        vecs.select_columns(&keep),
    ))
}

impl OverlapCurve {
    pub fn new(rho0: &FockOperator, rho1: &FockOperator) -> Result<Self> {
        if rho0.dims() != rho1.dims() {
            return Err(Error::Dimension(format!(
                "{:?} vs {:?}",
                rho0.dims(),
                rho1.dims()
            )));
        }
        let (l0, u0) = support(rho0)?;
        let (l1, u1) = support(rho1)?;
        let w = (u0.adjoint() * u1).map(|z| z.norm_sqr());
        Ok(Self { l0, l1, w })
    }

    pub fn at(&self, s: f64) -> f64 {
        let a = self.l0.map(|l| l.powf(s));
        let b = self.l1.map(|l| l.powf(1.0 - s));
        (a.transpose() * &self.w * b)[(0, 0)]
    }
}

/// Golden-section search over `s ∈ [0, 1]`; the log-overlap is convex in `s`.
pub fn chernoff_exponent(rho0: &FockOperator, rho1: &FockOperator) -> Result<Chernoff> {
    let curve = OverlapCurve::new(rho0, rho1)?;
    let g = |s: f64| curve.at(s).ln();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    if f1 == f64::NEG_INFINITY || f2 == f64::NEG_INFINITY {
        return Ok(Chernoff {
            exponent: f64::INFINITY,
            s: 0.5,
        });
    }
    while b - a > GOLDEN_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        }
    }
    let mut best = ((a + b) / 2.0, g((a + b) / 2.0));
    for s in [0.0, 1.0] {
        let v = g(s);
        if v < best.1 {
            best = (s, v);
        }
    }
    Ok(Chernoff {
        exponent: (-best.1).max(0.0),
        s: best.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn pure(k: usize) -> FockOperator {
        let mut m = DMatrix::zeros(3, 3);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        FockOperator::new(vec![3], m).unwrap()
    }

    #[test]
    fn identical_states() {
        let t = FockOperator::thermal(0.7, 20).unwrap();
        assert!(chernoff_exponent(&t, &t).unwrap().exponent < 1e-14);
    }

    #[test]
    fn orthogonal_states() {
        assert_eq!(
            chernoff_exponent(&pure(0), &pure(1)).unwrap().exponent,
            f64::INFINITY
        );
    }

    #[test]
    fn commuting_states_reduce_to_classical() {
        let a = FockOperator::thermal(0.3, 60).unwrap();
        let b = FockOperator::thermal(1.2, 60).unwrap();
        let r = chernoff_exponent(&a, &b).unwrap();
        let classical = (0..=1000)
            .map(|k| {
                let s = k as f64 / 1000.0;
                (0..60)
                    .map(|n| a.data()[(n, n)].re.powf(s) * b.data()[(n, n)].re.powf(1.0 - s))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((r.exponent + classical.ln()).abs() < 1e-7);
    }
}

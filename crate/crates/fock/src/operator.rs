//! Dense density matrices on truncated multimode Fock spaces.

use gqi_core::GaussianState;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const NEGATIVITY_TOL: f64 = 1e-9;

/// Operator on `⊗ₖ span{|0⟩, …, |dₖ − 1⟩}`. Basis index of
/// `|n₀, n₁, …⟩` is row-major with mode 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    dims: Vec<usize>,
    data: DMatrix<Complex64>,
    /// Trace lost to truncation before the last renormalization.
    deficit: f64,
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Splits a basis index into per-mode photon numbers.
pub(crate) fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

pub(crate) fn index(ns: &[usize], dims: &[usize]) -> usize {
    ns.iter().zip(dims).fold(0, |acc, (&n, &d)| acc * d + n)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Basis vectors whose row is exactly zero are split off first; they are
/// eigenvectors with eigenvalue zero, and removing them avoids a failure of
/// the dense solver on matrices with many empty rows. The decomposition is
/// checked by reconstruction.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let (live, dead): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| m.row(i).iter().any(|z| *z != c(0.0)));
    let sub = m.select_rows(&live).select_columns(&live);
    let eig = SymmetricEigen::new(sub.clone());
    let recon = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(c))
        * eig.eigenvectors.adjoint();
    let err = (&recon - &sub).camax();
    // The QR iteration leaves residuals near 1e-10 on the largest states we
    // build; anything past 1e-8 means it did not converge.
    if !(err <= 1e-8 * sub.camax().max(f64::MIN_POSITIVE)) {
        return Err(Error::NotDensity(format!(
            "eigendecomposition failed (residual {err:e})"
        )));
    }
    let mut vals = DVector::zeros(n);
    let mut vecs = DMatrix::zeros(n, n);
    for k in 0..live.len() {
        vals[k] = eig.eigenvalues[k];
        for (r, &row) in live.iter().enumerate() {
            vecs[(row, k)] = eig.eigenvectors[(r, k)];
        }
    }
    for (k, &i) in dead.iter().enumerate() {
        vecs[(i, live.len() + k)] = c(1.0);
    }
    Ok((vals, vecs))
}

impl FockOperator {
    pub fn new(dims: Vec<usize>, data: DMatrix<Complex64>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid cutoffs {dims:?}")));
        }
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::Dimension(format!(
                "cutoffs {dims:?} need a {dim}x{dim} matrix, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self {
            dims,
            data,
            deficit: 0.0,
        })
    }

    /// Thermal state with mean photon number `n`, truncated and
    /// renormalized.
    pub fn thermal(n: f64, d: usize) -> Result<Self> {
        if !(n >= 0.0) {
            return Err(Error::Parameter(format!(
                "thermal occupation must be >= 0, got {n}"
            )));
        }
        let q = n / (1.0 + n);
        // The lost tail is exactly q^d; dividing by 1 − q^d renormalizes.
        let tail = q.powi(d as i32);
        let diag = DVector::from_fn(d, |k, _| c(q.powi(k as i32) / (1.0 + n) / (1.0 - tail)));
        Ok(Self::new(vec![d], DMatrix::from_diagonal(&diag))?.with_deficit(tail))
    }

    pub fn vacuum(dims: &[usize]) -> Result<Self> {
        let dim: usize = dims.iter().product();
        let mut data = DMatrix::zeros(dim, dim);
        data[(0, 0)] = c(1.0);
        Self::new(dims.to_vec(), data)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Divides by the trace and records `1 − trace` as the deficit.
    pub fn renormalized(mut self) -> Self {
        let tr = self.trace();
        self.deficit = 1.0 - tr;
        self.data /= c(tr);
        self
    }

    pub(crate) fn with_deficit(mut self, deficit: f64) -> Self {
        self.deficit = deficit;
        self
    }

    /// `(A + A†)/2`, to wash out rounding.
    pub(crate) fn hermitized(mut self) -> Self {
        self.data = (&self.data + self.data.adjoint()) * c(0.5);
        self
    }

    pub fn ensure_density(&self) -> Result<()> {
        let herm = (&self.data - self.data.adjoint()).camax();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues()?.min();
        if min < -NEGATIVITY_TOL {
            return Err(Error::NotDensity(format!("eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        hermitian_eigen(&self.data).map(|(vals, _)| vals)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        Self {
            dims,
            data: self.data.kronecker(&other.data),
            deficit: self.deficit + other.deficit,
        }
    }

    /// Reduced operator on the listed modes, in their given order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() || keep.iter().any(|&k| k >= self.dims.len()) {
            return Err(Error::Dimension(format!(
                "bad modes {keep:?} for {} modes",
                self.dims.len()
            )));
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let dim: usize = kept_dims.iter().product();
        let mut out = DMatrix::zeros(dim, dim);
        let n = self.data.nrows();
        for i in 0..n {
            let di = digits(i, &self.dims);
            for j in 0..n {
                let dj = digits(j, &self.dims);
                let traced_equal = (0..self.dims.len())
                    .filter(|k| !keep.contains(k))
                    .all(|k| di[k] == dj[k]);
                if !traced_equal {
                    continue;
                }
                let ki: Vec<usize> = keep.iter().map(|&k| di[k]).collect();
                let kj: Vec<usize> = keep.iter().map(|&k| dj[k]).collect();
                out[(index(&ki, &kept_dims), index(&kj, &kept_dims))] += self.data[(i, j)];
            }
        }
        Ok(Self {
            dims: kept_dims,
            data: out,
            deficit: self.deficit,
        })
    }

    /// Nonzero entries `(row, col, value)` of a matrix acting on `modes`
    /// (row-major over those modes), embedded in the full space.
    fn embedded_entries(
        &self,
        modes: &[usize],
        m: &DMatrix<Complex64>,
    ) -> Vec<(usize, usize, Complex64)> {
        let sub_dims: Vec<usize> = modes.iter().map(|&k| self.dims[k]).collect();
        let n = self.data.nrows();
        let mut out = Vec::new();
        for j in 0..n {
            let dj = digits(j, &self.dims);
            let sub_j = index(&modes.iter().map(|&k| dj[k]).collect::<Vec<_>>(), &sub_dims);
            for sub_i in 0..m.nrows() {
                let v = m[(sub_i, sub_j)];
                if v == c(0.0) {
                    continue;
                }
                let mut di = dj.clone();
                for (&k, s) in modes.iter().zip(digits(sub_i, &sub_dims)) {
                    di[k] = s;
                }
                out.push((index(&di, &self.dims), j, v));
            }
        }
        out
    }

    pub(crate) fn embed(&self, modes: &[usize], m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.data.nrows();
        let mut out = DMatrix::zeros(n, n);
        for (i, j, v) in self.embedded_entries(modes, m) {
            out[(i, j)] = v;
        }
        out
    }

    /// `U ρ U†` for a matrix acting on `modes`.
    ///
    /// Gates are sparse once embedded (photon-number conserving gates very
    /// much so), so `U` is applied entry by entry: with `Y = ρU†` and `ρ`
    /// Hermitian, `UρU† = Y†U†`.
    pub fn conjugated(&self, modes: &[usize], u: &DMatrix<Complex64>) -> Result<Self> {
        let sub: usize = modes
            .iter()
            .map(|&k| self.dims.get(k).copied().unwrap_or(0))
            .product();
        if sub == 0 || u.nrows() != sub || u.ncols() != sub {
            return Err(Error::Dimension(format!(
                "gate of size {}x{} on modes {modes:?}",
                u.nrows(),
                u.ncols()
            )));
        }
        let entries = self.embedded_entries(modes, u);
        let times_adjoint = |x: &DMatrix<Complex64>| {
            let mut out = DMatrix::zeros(x.nrows(), x.ncols());
            for &(i, j, v) in &entries {
                out.column_mut(i).axpy(v.conj(), &x.column(j), c(1.0));
            }
            out
        };
        let y = times_adjoint(&self.data);
        Ok(Self {
            dims: self.dims.clone(),
            data: times_adjoint(&y.adjoint()),
            deficit: self.deficit,
        }
        .hermitized())
    }

    /// `Tr(ρ A)` for an operator given on the full space.
    pub fn expectation(&self, a: &DMatrix<Complex64>) -> Complex64 {
        self.data.transpose().component_mul(a).sum()
    }

    /// `Tr(ρ L)` for a product `L` of ladder operators, applied right to
    /// left; `(mode, true)` is a creation operator. Raising the top level
    /// gives zero, as for products of truncated matrices.
    pub fn ladder_expectation(&self, ops: &[(usize, bool)]) -> Complex64 {
        let n = self.data.nrows();
        let mut total = c(0.0);
        'basis: for j in 0..n {
            let mut ns = digits(j, &self.dims);
            let mut amp = 1.0;
            for &(mode, create) in ops.iter().rev() {
                if create {
                    if ns[mode] + 1 >= self.dims[mode] {
                        continue 'basis;
                    }
                    ns[mode] += 1;
                    amp *= (ns[mode] as f64).sqrt();
                } else {
                    if ns[mode] == 0 {
                        continue 'basis;
                    }
                    amp *= (ns[mode] as f64).sqrt();
                    ns[mode] -= 1;
                }
            }
            total += self.data[(j, index(&ns, &self.dims))] * amp;
        }
        total
    }

    /// Truncated annihilation operator of `mode` on the full space.
    pub fn annihilation(&self, mode: usize) -> DMatrix<Complex64> {
        let d = self.dims[mode];
        let a = DMatrix::from_fn(d, d, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt())
            } else {
                c(0.0)
            }
        });
        self.embed(&[mode], &a)
    }

    /// Quadratures `(x₀, p₀, x₁, p₁, …)` with `x = (a + a†)/√2`,
    /// `p = (a − a†)/(i√2)`, as truncated matrices.
    pub fn quadratures(&self) -> Vec<DMatrix<Complex64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        (0..self.dims.len())
            .flat_map(|k| {
                let a = self.annihilation(k);
                let ad = a.adjoint();
                let x = (&a + &ad) * c(s);
                let p = (&a - &ad) * Complex64::new(0.0, -s);
                [x, p]
            })
            .collect()
    }

    /// First and second moments in the convention where the vacuum has
    /// identity covariance, from ladder-operator expectations.
    pub fn gaussian_moments(&self) -> Result<GaussianState<f64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        // x = s(a + a†), p = −is a + is a†.
        let parts = |q: usize| -> [(Complex64, (usize, bool)); 2] {
            let mode = q / 2;
            if q.is_multiple_of(2) {
                [(c(s), (mode, false)), (c(s), (mode, true))]
            } else {
                [(-i * s, (mode, false)), (i * s, (mode, true))]
            }
        };
        let n = 2 * self.dims.len();
        let mean = DVector::from_fn(n, |q, _| {
            parts(q)
                .iter()
                .map(|&(w, op)| w * self.ladder_expectation(&[op]))
                .sum::<Complex64>()
                .re
        });
        let mut cov = DMatrix::zeros(n, n);
        for q in 0..n {
            for r in q..n {
                let mut anti = c(0.0);
                for &(wq, oq) in &parts(q) {
                    for &(wr, or) in &parts(r) {
                        anti += wq
                            * wr
                            * (self.ladder_expectation(&[oq, or])
                                + self.ladder_expectation(&[or, oq]));
                    }
                }
                let v = anti.re - 2.0 * mean[q] * mean[r];
                cov[(q, r)] = v;
                cov[(r, q)] = v;
            }
        }
        Ok(GaussianState::new(mean, cov)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_distribution() {
        let t = FockOperator::thermal(0.5, 40).unwrap();
        assert!(t.deficit() < 1e-19);
        for k in 0..40 {
            let expected = (1.0 / 1.5) * (0.5f64 / 1.5).powi(k as i32);
            assert!((t.data()[(k, k)].re - expected).abs() < 1e-15);
        }
        t.ensure_density().unwrap();
    }

    #[test]
    fn tensor_then_trace() {
        let a = FockOperator::thermal(0.2, 6).unwrap();
        let b = FockOperator::thermal(1.0, 5).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.dims(), &[6, 5]);
        let back = ab.partial_trace(&[1]).unwrap();
        assert!((back.data() - b.data()).camax() < 1e-15);
    }

    #[test]
    fn vacuum_moments() {
        let v = FockOperator::vacuum(&[4, 4])
            .unwrap()
            .gaussian_moments()
            .unwrap();
        assert!((v.cov() - DMatrix::identity(4, 4)).amax() < 1e-14);
    }

    #[test]
    fn ladder_moments_match_matrix_products() {
        // A generic mixed state on small cutoffs, including the top levels.
        let dims = vec![3, 4];
        let m = DMatrix::from_fn(12, 12, |i, j| {
            Complex64::new((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i as f64) - (j as f64))
        });
        let pos = &m * m.adjoint();
        let tr = pos.trace();
        let rho = FockOperator::new(dims, pos / tr).unwrap();
        let r = rho.quadratures();
        let got = rho.gaussian_moments().unwrap();
        for q in 0..4 {
            let mq = rho.expectation(&r[q]).re;
            assert!((got.mean()[q] - mq).abs() < 1e-13);
            for p in 0..4 {
                let mp = rho.expectation(&r[p]).re;
                let anti = (&r[q] * &r[p] + &r[p] * &r[q]) * c(1.0);
                let dense = rho.expectation(&anti).re - 2.0 * mq * mp;
                assert!((got.cov()[(q, p)] - dense).abs() < 1e-12);
            }
        }
    }
}

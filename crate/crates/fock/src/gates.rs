//! Exact matrix elements of Gaussian gates between truncated Fock states.
//!
//! Squeezers are evaluated in normally ordered (disentangled) form, where
//! every intermediate photon number is bounded by the input and output
//! numbers, so the truncated blocks carry no truncation error of their own.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// `√(n!/m!)` for `n ≥ m`.
fn sqrt_falling(n: usize, m: usize) -> f64 {
    ((m + 1)..=n).map(|k| (k as f64).sqrt()).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `⟨m|D(α)|n⟩` for `m, n < d`, built column by column from
/// `D|n+1⟩ = (a† − α*) D|n⟩ / √(n+1)` starting at the coherent state.
pub fn displacement(alpha: Complex64, d: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(d, d);
    let mut col = DVector::<Complex64>::zeros(d);
    col[0] = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for m in 1..d {
        col[m] = col[m - 1] * alpha / (m as f64).sqrt();
    }
    for n in 0..d {
        out.set_column(n, &col);
        let mut next = DVector::zeros(d);
        for m in 0..d {
            let raised = if m > 0 {
                col[m - 1] * (m as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            };
            next[m] = (raised - alpha.conj() * col[m]) / ((n + 1) as f64).sqrt();
        }
        col = next;
    }
    out
}

/// `⟨m|S|n⟩` for the squeezer multiplying `x` by `e^ζ` and `p` by `e^−ζ`:
/// `S = exp(τa†²/2) (cosh ζ)^−(a†a+½) exp(−τa²/2)` with `τ = tanh ζ`.
pub fn single_mode_squeeze(zeta: f64, d: usize) -> DMatrix<Complex64> {
    let tau = zeta.tanh();
    let c = zeta.cosh();
    let mut out = DMatrix::zeros(d, d);
    for m in 0..d {
        for n in (m % 2..d).step_by(2) {
            let mut sum = 0.0;
            for l in (m % 2..=m.min(n)).step_by(2) {
                let up = (m - l) / 2;
                let down = (n - l) / 2;
                let raise = (tau / 2.0).powi(up as i32) / factorial(up) * sqrt_falling(m, l);
                let lower = (-tau / 2.0).powi(down as i32) / factorial(down) * sqrt_falling(n, l);
                sum += raise * c.powf(-(l as f64 + 0.5)) * lower;
            }
            out[(m, n)] = Complex64::new(sum, 0.0);
        }
    }
    out
}

/// Two-mode squeezer `exp(ζ(a†b† − ab))` on `d_a × d_b` Fock states, in
/// the order `|n_a, n_b⟩ → n_a d_b + n_b`:
/// `exp(τa†b†) (cosh ζ)^−(a†a+b†b+1) exp(−τab)`.
pub fn two_mode_squeeze(zeta: f64, d_a: usize, d_b: usize) -> DMatrix<Complex64> {
    let tau = zeta.tanh();
    let c = zeta.cosh();
    let dim = d_a * d_b;
    let mut out = DMatrix::zeros(dim, dim);
    for ma in 0..d_a {
        for mb in 0..d_b {
            for na in 0..d_a {
                let shift = ma as isize - na as isize;
                let nb = mb as isize - shift;
                if nb < 0 || nb >= d_b as isize {
                    continue;
                }
                let nb = nb as usize;
                let mut sum = 0.0;
                for j in 0..=na.min(nb) {
                    let (la, lb) = (na - j, nb - j);
                    if la > ma || lb > mb {
                        continue;
                    }
                    let up = ma - la;
                    let raise = tau.powi(up as i32) / factorial(up)
                        * sqrt_falling(ma, la)
                        * sqrt_falling(mb, lb);
                    let lower = (-tau).powi(j as i32) / factorial(j)
                        * sqrt_falling(na, la)
                        * sqrt_falling(nb, lb);
                    sum += raise * c.powi(-((la + lb + 1) as i32)) * lower;
                }
                out[(ma * d_b + mb, na * d_b + nb)] = Complex64::new(sum, 0.0);
            }
        }
    }
    out
}

/// Amplitudes of a beam splitter `U a† U† = t a† − r b†`,
/// `U b† U† = r a† + t b†`, with `t = √η`, `r = √(1−η)`. On quadratures
/// this is `x_a → t x_a + r x_b`, `x_b → −r x_a + t x_b`.
///
/// `table[n][k][i] = ⟨i, n+k−i| U |n, k⟩` for `n < d_a`, `k < d_b`.
pub fn beam_splitter_table(eta: f64, d_a: usize, d_b: usize) -> Vec<Vec<Vec<f64>>> {
    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    // Multiplies a vector over |i, N−i⟩ by (u a† + v b†) / √norm.
    let raise = |v: &[f64], u: f64, w: f64, norm: f64| -> Vec<f64> {
        let total = v.len() - 1;
        let mut out = vec![0.0; v.len() + 1];
        for (i, &x) in v.iter().enumerate() {
            out[i + 1] += u * x * ((i + 1) as f64).sqrt();
            out[i] += w * x * ((total - i + 1) as f64).sqrt();
        }
        out.iter().map(|x| x / norm.sqrt()).collect()
    };
    let mut table = vec![vec![Vec::new(); d_b]; d_a];
    let mut base = vec![1.0];
    for k in 0..d_b {
        if k > 0 {
            base = raise(&base, r, t, k as f64);
        }
        let mut v = base.clone();
        table[0][k] = v.clone();
        for (n, row) in table.iter_mut().enumerate().skip(1) {
            v = raise(&v, t, -r, n as f64);
            row[k] = v.clone();
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col_norm(m: &DMatrix<Complex64>, n: usize) -> f64 {
        m.column(n).iter().map(|z| z.norm_sqr()).sum()
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let alpha = Complex64::new(0.6, -0.3);
        let d = displacement(alpha, 30);
        let nbar: f64 = (0..30).map(|m| m as f64 * d[(m, 0)].norm_sqr()).sum();
        assert!((nbar - alpha.norm_sqr()).abs() < 1e-12);
        assert!((col_norm(&d, 3) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_amplitudes() {
        let zeta: f64 = 0.4;
        let s = single_mode_squeeze(zeta, 40);
        let c0 = s[(0, 0)].re;
        assert!((c0 - 1.0 / zeta.cosh().sqrt()).abs() < 1e-14);
        let c2 = s[(2, 0)].re;
        assert!((c2 - zeta.tanh() / 2.0 * 2f64.sqrt() * c0).abs() < 1e-14);
        assert!((col_norm(&s, 0) - 1.0).abs() < 1e-10);
        assert!((col_norm(&s, 5) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tmsv_schmidt_coefficients() {
        let zeta: f64 = 0.5;
        let u = two_mode_squeeze(zeta, 20, 20);
        for n in 0..20 {
            let expected = zeta.tanh().powi(n as i32) / zeta.cosh();
            assert!((u[(n * 20 + n, 0)].re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn beam_splitter_is_unitary_on_fixed_photon_number() {
        let table = beam_splitter_table(0.3, 6, 6);
        for amps in table.iter().flatten() {
            let norm: f64 = amps.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        // |1,0⟩ → t|1,0⟩ − r|0,1⟩, |0,1⟩ → r|1,0⟩ + t|0,1⟩
        assert!((table[1][0][1] - 0.3f64.sqrt()).abs() < 1e-15);
        assert!((table[1][0][0] + 0.7f64.sqrt()).abs() < 1e-15);
        assert!((table[0][1][1] - 0.7f64.sqrt()).abs() < 1e-15);
        let overlap: f64 = table[2][1]
            .iter()
            .zip(&table[1][2])
            .map(|(a, b)| a * b)
            .sum();
        assert!(overlap.abs() < 1e-12);
    }
}

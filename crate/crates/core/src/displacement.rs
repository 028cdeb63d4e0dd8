//! Matrix elements `⟨m|D(z)|n⟩` of the displacement operator.
//!
//! For `m = j + k` (`k ≥ 0`),
//! `⟨j+k|D(z)|j⟩ = e^{−|z|²/2} zᵏ/√k! · h_j^{(k)}` and
//! `⟨j|D(z)|j+k⟩ = e^{−|z|²/2} (−z̄)ᵏ/√k! · h_j^{(k)}`, where
//! `h_j^{(k)} = √(k! j!/(j+k)!) L_j^{(k)}(|z|²)` is a rescaled associated Laguerre
//! polynomial. The rescaled form obeys a three-term recurrence in `j` whose
//! coefficients never involve factorials, so nothing overflows for large indices.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ComplexPoint, FockVector};

/// `h_0 … h_{len-1}` for order `k` at `x = |z|²`.
fn scaled_laguerre(k: usize, x: f64, len: usize, out: &mut Vec<f64>) {
    out.clear();
    if len == 0 {
        return;
    }
    let kf = k as f64;
    out.push(1.0);
    if len > 1 {
        out.push((1.0 + kf - x) / (kf + 1.0).sqrt());
    }
    for j in 1..len.saturating_sub(1) {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * out[j] - (jf * (jf + kf)).sqrt() * out[j - 1])
            / ((jf + 1.0) * (jf + 1.0 + kf)).sqrt();
        out.push(next);
    }
}

/// `e^{−|z|²/2} wᵏ/√k!` for `k = 0..len`.
fn prefactors(w: Complex64, x: f64, len: usize) -> Vec<Complex64> {
    let mut g = Vec::with_capacity(len);
    let mut cur = Complex64::new((-0.5 * x).exp(), 0.0);
    for k in 0..len {
        if k > 0 {
            cur = cur * w / (k as f64).sqrt();
        }
        g.push(cur);
    }
    g
}

/// Rectangular block `⟨m|D(z)|n⟩`, `m ≤ rows`, `n ≤ cols`, with no truncation guard.
pub(crate) fn displacement_block(z: ComplexPoint, rows: usize, cols: usize) -> Array2<Complex64> {
    let zc = z.to_complex();
    let x = z.norm_sqr();
    let mut block = Array2::<Complex64>::zeros((rows + 1, cols + 1));
    let lower = prefactors(zc, x, rows + 1);
    let upper = prefactors(-zc.conj(), x, cols + 1);
    let mut h = Vec::new();

    // on and below the diagonal: m = n + k
    for k in 0..=rows {
        let len = (rows - k).min(cols) + 1;
        scaled_laguerre(k, x, len, &mut h);
        for (j, hj) in h.iter().enumerate() {
            block[[j + k, j]] = lower[k] * *hj;
        }
    }
    // above the diagonal: n = m + k
    for k in 1..=cols {
        let len = (cols - k).min(rows) + 1;
        scaled_laguerre(k, x, len, &mut h);
        for (j, hj) in h.iter().enumerate() {
            block[[j, j + k]] = upper[k] * *hj;
        }
    }
    block
}

/// The `(cutoff+1)²` matrix of `⟨m|D(z)|n⟩`.
///
/// Refuses `|z|² > cutoff/4`: beyond that the displaced low levels leak out of
/// the retained basis and the truncated matrix stops being a useful operator.
pub fn displacement_matrix(z: ComplexPoint, cutoff: usize) -> Result<Array2<Complex64>> {
    let limit = cutoff as f64 / 4.0;
    if z.norm_sqr() > limit {
        return Err(Error::CutoffInsufficient { cutoff, tail: z.norm_sqr(), limit });
    }
    Ok(displacement_block(z, cutoff, cutoff))
}

/// `D(z)|ψ⟩` expressed on `|0⟩ … |rows⟩`.
pub(crate) fn displace(state: &FockVector, z: ComplexPoint, rows: usize, cols: usize) -> Vec<Complex64> {
    let block = displacement_block(z, rows, cols);
    let amps = state.amplitudes();
    (0..=rows).map(|m| (0..=cols.min(state.cutoff())).map(|n| block[[m, n]] * amps[n]).sum()).collect()
}

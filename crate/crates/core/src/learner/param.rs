//! Matrix-parametrized fuzzy covers: `θ ↦ π_p(softmax(θ))`.

use ndarray::{Array2, ArrayView1, ArrayViewMut1};

use crate::complex::FuzzyCover;
use crate::{ensure, Result};

/// Raw `n × k` parameters of the matrix model.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta(pub Array2<f64>);

impl Theta {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }
}

fn softmax_row(row: ArrayView1<'_, f64>, mut out: ArrayViewMut1<'_, f64>) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(row.iter()) {
        *o = (v - max).exp();
        sum += *o;
    }
    out.mapv_inplace(|v| v / sum);
}

/// Row-wise softmax (max-subtracted); each output row sums to 1.
pub fn softmax_rows(theta: &Theta) -> Array2<f64> {
    let mut out = Array2::zeros(theta.0.raw_dim());
    for (row, out_row) in theta.0.rows().into_iter().zip(out.rows_mut()) {
        softmax_row(row, out_row);
    }
    out
}

/// `‖row‖_p` computed with the row maximum factored out.
fn p_norm(row: ArrayView1<'_, f64>, p: f64) -> f64 {
    let max = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 || p.is_infinite() {
        return max;
    }
    max * row.iter().map(|v| (v.abs() / max).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Row-wise normalization by the `p`-norm; `p = ∞` divides by the row maximum.
pub fn pi_p(h: &Array2<f64>, p: f64) -> Result<Array2<f64>> {
    ensure!(p >= 1.0, Parameter, "p must be >= 1, got {p}");
    let mut out = h.clone();
    for (x, mut row) in out.rows_mut().into_iter().enumerate() {
        let norm = p_norm(row.view(), p);
        ensure!(norm > 0.0, Invariant, "row {x} is zero and cannot be normalized");
        row.mapv_inplace(|v| v / norm);
    }
    Ok(out)
}

/// Vector-Jacobian product of `θ ↦ π_p(softmax(θ))` for finite `p`.
pub fn chain_gradient(theta: &Theta, p: f64, upstream: &Array2<f64>) -> Array2<f64> {
    let k = theta.0.ncols();
    let mut out = Array2::zeros(theta.0.raw_dim());
    let mut s = ndarray::Array1::zeros(k);
    let mut a = ndarray::Array1::zeros(k);
    for ((row, up), mut grad) in theta.0.rows().into_iter().zip(upstream.rows()).zip(out.rows_mut()) {
        softmax_row(row, s.view_mut());
        let norm = p_norm(s.view(), p);
        // y = s / ‖s‖_p ;  ∂L/∂s_j = (u_j − y_j^{p−1} Σ_i u_i y_i) / ‖s‖_p
        let uy: f64 = up.iter().zip(s.iter()).map(|(u, sv)| u * sv / norm).sum();
        for j in 0..k {
            let y = s[j] / norm;
            a[j] = (up[j] - y.powf(p - 1.0) * uy) / norm;
        }
        let sa: f64 = s.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
        for j in 0..k {
            grad[j] = s[j] * (a[j] - sa);
        }
    }
    out
}

/// The fuzzy cover `π_∞(softmax(θ))`.
pub fn cover_from_theta(theta: &Theta) -> Result<FuzzyCover> {
    FuzzyCover::new(pi_p(&softmax_rows(theta), f64::INFINITY)?)
}

/// Lifts a fuzzy cover to parameters `θ = margin · g`, so that softmax
/// softens the cover while keeping each row's argmax.
pub fn theta_from_cover(g: &FuzzyCover, margin: f64) -> Theta {
    Theta(g.matrix() * margin)
}

//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use nalgebra::DMatrix;

use super::{LinOperator, Scalar};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U · diag(σ) · V*` truncated at the rank threshold.
///
/// `left` is `rows × rank`, `right` is `cols × rank`, both with orthonormal
/// columns; `singulars` are strictly positive and descending. The full
/// spectrum (including values cut from the rank) is kept in `spectrum`.
#[derive(Debug, Clone)]
pub struct SvdFactorization {
    pub left: DMatrix<Scalar>,
    pub singulars: Vec<f64>,
    pub right: DMatrix<Scalar>,
    pub spectrum: Vec<f64>,
}

impl SvdFactorization {
    pub fn rank(&self) -> usize {
        self.singulars.len()
    }

    pub fn reconstruct(&self) -> DMatrix<Scalar> {
        let mut us = self.left.clone();
        for (j, &s) in self.singulars.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * self.right.adjoint()
    }

    pub(crate) fn pinv_matrix(&self, rows: usize, cols: usize) -> DMatrix<Scalar> {
        let mut vs = self.right.clone();
        for (j, &s) in self.singulars.iter().enumerate() {
            vs.column_mut(j).scale_mut(1.0 / s);
        }
        if self.rank() == 0 {
            return DMatrix::zeros(rows, cols);
        }
        vs * self.left.adjoint()
    }
}

/// SVD with rank cut `σ_k > rank_tol · σ_max · max(rows, cols)`.
pub fn svd(a: &LinOperator, rank_tol: f64) -> Result<SvdFactorization> {
    if !(rank_tol >= 0.0 && rank_tol.is_finite()) {
        return Err(Error::InvalidInput(format!("rank_tol must be finite and ≥ 0, got {rank_tol}")));
    }
    Ok(factor(a.matrix(), rank_tol))
}

pub(crate) fn factor(a: &DMatrix<Scalar>, rank_tol: f64) -> SvdFactorization {
    let (rows, cols) = a.shape();
    if rows >= cols {
        let (w, v) = jacobi(a.clone());
        assemble(w, v, rank_tol, rows.max(cols), false)
    } else {
        let (w, v) = jacobi(a.adjoint());
        assemble(w, v, rank_tol, rows.max(cols), true)
    }
}

pub(crate) fn singular_values(a: &DMatrix<Scalar>) -> Vec<f64> {
    factor(a, 0.0).spectrum
}

pub(crate) fn spectral_norm(a: &DMatrix<Scalar>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Orthogonalizes the columns of `w` by plane rotations; returns the rotated
/// matrix `W = A V` and the accumulated unitary `V`.
fn jacobi(mut w: DMatrix<Scalar>) -> (DMatrix<Scalar>, DMatrix<Scalar>) {
    let n = w.ncols();
    let mut v = DMatrix::<Scalar>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn, phase);
                rotate(&mut v, p, q, cs, sn, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

// [x_p, x_q] ← [c·x_p − s·e^{-iφ}·x_q, s·x_p + c·e^{-iφ}·x_q]
fn rotate(m: &mut DMatrix<Scalar>, p: usize, q: usize, cs: f64, sn: f64, phase: Scalar) {
    let unphase = phase.conj();
    for i in 0..m.nrows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * unphase;
        m[(i, p)] = xp * cs - xq * sn;
        m[(i, q)] = xp * sn + xq * cs;
    }
}

fn assemble(
    w: DMatrix<Scalar>,
    v: DMatrix<Scalar>,
    rank_tol: f64,
    scale_dim: usize,
    transposed: bool,
) -> SvdFactorization {
    let mut order: Vec<(usize, f64)> = (0..w.ncols()).map(|j| (j, w.column(j).norm())).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1));
    let spectrum: Vec<f64> = order.iter().map(|&(_, s)| s).collect();
    let sigma_max = spectrum.first().copied().unwrap_or(0.0);
    let cut = rank_tol * sigma_max * scale_dim as f64;
    let kept: Vec<(usize, f64)> = order.into_iter().filter(|&(_, s)| s > cut && s > 0.0).collect();

    let mut normalized = DMatrix::<Scalar>::zeros(w.nrows(), kept.len());
    let mut unitary = DMatrix::<Scalar>::zeros(v.nrows(), kept.len());
    for (k, &(j, s)) in kept.iter().enumerate() {
        normalized.set_column(k, &(w.column(j) / Scalar::new(s, 0.0)));
        unitary.set_column(k, &v.column(j));
    }
    let singulars = kept.iter().map(|&(_, s)| s).collect();
    // For the transposed run we factored A* = W V*, so A = V Σ U*.
    let (left, right) = if transposed {
        (unitary, normalized)
    } else {
        (normalized, unitary)
    };
    SvdFactorization {
        left,
        singulars,
        right,
        spectrum,
    }
}

//! Loewner order, range inclusion and the Douglas factorization `S = Tθ`.

use super::{hermitian_defect, pinv, rank_of, sorted_eigenvalues, LinOperator, HERMITIAN_TOL, RANK_EPS};
use crate::error::{mismatch, Error, Result};

/// `A ⪯ B`: true iff `λ_min(B − A) ≥ −tol · max(1, ‖A‖, ‖B‖)`.
pub fn loewner_leq(a: &LinOperator, b: &LinOperator, tol: f64) -> Result<bool> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(mismatch(
            "loewner_leq",
            format!("{}×{} square", a.rows(), a.rows()),
            format!("{}×{} and {}×{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    let (na, nb) = (a.op_norm(), b.op_norm());
    for (op, norm) in [(a, na), (b, nb)] {
        let defect = hermitian_defect(op);
        if defect > HERMITIAN_TOL * (1.0 + norm) {
            return Err(Error::NotHermitian { asymmetry: defect });
        }
    }
    let diff = b.matrix() - a.matrix();
    let min_ev = sorted_eigenvalues(&diff)[0];
    Ok(min_ev >= -tol * 1f64.max(na).max(nb))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeInclusion {
    pub included: bool,
    /// `inf{μ : SS* ⪯ μ TT*}`, present iff `included`.
    pub lambda_star: Option<f64>,
}

/// Tests `R(S) ⊆ R(T)` through `rank([T | S]) = rank(T)`.
///
/// Both blocks are normalized to unit norm before stacking so that the rank
/// cut is not dominated by whichever operand happens to be larger.
pub fn range_inclusion(s: &LinOperator, t: &LinOperator) -> Result<RangeInclusion> {
    if s.rows() != t.rows() {
        return Err(mismatch("range_inclusion", t.rows(), s.rows()));
    }
    let (ns, nt) = (s.op_norm(), t.op_norm());
    if ns == 0.0 {
        return Ok(RangeInclusion {
            included: true,
            lambda_star: Some(0.0),
        });
    }
    if nt == 0.0 {
        return Ok(RangeInclusion {
            included: false,
            lambda_star: None,
        });
    }
    let s_hat = s.scale((1.0 / ns).into());
    let t_hat = t.scale((1.0 / nt).into());
    let joint = t_hat.hstack(&s_hat)?;
    let included = rank_of(joint.matrix(), RANK_EPS) == rank_of(t_hat.matrix(), RANK_EPS);
    let lambda_star = included.then(|| {
        let theta = &pinv(t) * s;
        theta.op_norm().powi(2)
    });
    Ok(RangeInclusion {
        included,
        lambda_star,
    })
}

/// The minimal-norm solution `θ = T† S` of `S = Tθ`.
///
/// Fails with [`Error::HypothesisViolated`] unless `R(S) ⊆ R(T)`.
pub fn douglas_factor(s: &LinOperator, t: &LinOperator) -> Result<LinOperator> {
    let inc = range_inclusion(s, t)?;
    if !inc.included {
        return Err(Error::HypothesisViolated(
            "range inclusion R(S) ⊆ R(T) fails; no bounded factor S = Tθ exists".into(),
        ));
    }
    Ok(&pinv(t) * s)
}

/// Infimum of `{λ ≥ 0 : SS* ⪯ λ TT*}` by bisection over [`loewner_leq`].
///
/// The Loewner tolerance grows with `λ‖TT*‖`, so the search is capped where
/// that slack reaches `10⁻³‖SS*‖`; `None` means no `λ` below the cap passes.
/// This route never forms a pseudo-inverse, so it serves as a cross-check on
/// [`range_inclusion`].
pub fn loewner_bisect(
    s: &LinOperator,
    t: &LinOperator,
    iterations: usize,
    tol: f64,
) -> Result<Option<f64>> {
    if s.rows() != t.rows() {
        return Err(mismatch("loewner_bisect", t.rows(), s.rows()));
    }
    let ss = s * &s.adjoint();
    let tt = t * &t.adjoint();
    let passes = |lambda: f64| loewner_leq(&ss, &tt.scale(lambda.into()), tol);
    if passes(0.0)? {
        return Ok(Some(0.0));
    }
    let cap = (1e-3 * ss.op_norm().max(1.0) / (tol * tt.op_norm()).max(f64::MIN_POSITIVE)).min(2f64.powi(60));
    let mut hi = 1.0;
    while !passes(hi)? {
        hi *= 2.0;
        if hi > cap {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// `N(A) = N(B)` via `rank(A) = rank(B) = rank([A; B])`.
pub fn kernels_coincide(a: &LinOperator, b: &LinOperator) -> Result<bool> {
    let stacked = a.vstack(b)?;
    let ra = a.rank();
    Ok(ra == b.rank() && ra == stacked.rank())
}

//! Duals of Parseval K-frames.
//!
//! `G` is a dual K-Bessel sequence of `F` when `Kf = Σ μ_i ⟨f, G(ω_i)⟩ F(ω_i)`
//! for all `f`, i.e. `T_F* T_G = K`. For a Parseval K-frame (`S_F = KK*`) the
//! canonical dual is `F̃ = K†F`; every other dual differs from it by a
//! residual operator `φ` with `T_F* φ = 0`, and `F̃` is the dual whose
//! analysis operator has the smallest norm.
//!
//! Every operation here re-checks the Parseval K-frame hypothesis (relative
//! tolerance `tol`) and returns [`Error::HypothesisViolated`] when it fails.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{mismatch, Error, Result};
use crate::frame::{
    analysis, frame_operator, is_l2_independent, require_parseval_k, synthesis, synthesis_kernel_basis,
    KOperator, SampledFrame,
};
use crate::linalg::{pinv, HVector, LinOperator, Scalar};
use crate::measure::{bochner_integrate, l2_inner, l2_norm_sq, same_space, L2Coefficients};
use crate::rng;

/// Outcome of a randomized check: the worst normalized residual seen over
/// `instances` cases, compared against `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub instances: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Index of the first case whose residual exceeded the tolerance.
    pub witness: Option<usize>,
}

impl CheckOutcome {
    pub(crate) fn new(tolerance: f64) -> Self {
        Self {
            instances: 0,
            max_residual: 0.0,
            tolerance,
            witness: None,
        }
    }

    pub(crate) fn record(&mut self, residual: f64) {
        let index = self.instances;
        self.instances += 1;
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
        }
        if self.witness.is_none() && (residual.is_nan() || residual > self.tolerance) {
            self.witness = Some(index);
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub is_dual: bool,
    /// `‖T_F* T_G − K‖`.
    pub duality_residual: f64,
    /// Optimal Bessel bound of `G`, `λ_max(S_G)`.
    pub bessel_bound_of_g: f64,
    /// `‖T_G‖` as an operator `H → L²(Ω)`.
    pub analysis_norm_of_g: f64,
}

/// `φ : H → L²(Ω)`, `(φf)_i = ⟨f, G(ω_i) − K†F(ω_i)⟩`, as an `m × d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualOperator {
    phi: LinOperator,
}

impl ResidualOperator {
    pub fn phi(&self) -> &LinOperator {
        &self.phi
    }

    pub fn into_phi(self) -> LinOperator {
        self.phi
    }
}

/// `F̃ = K†F`.
pub fn canonical_dual(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<SampledFrame> {
    require_parseval_k(f, k, tol)?;
    f.map(k.pinv())
}

pub fn is_dual_k_bessel(g: &SampledFrame, f: &SampledFrame, k: &KOperator, tol: f64) -> Result<DualityReport> {
    g.check_compatible(f, "is_dual_k_bessel")?;
    if f.dim() != k.dim() {
        return Err(mismatch("is_dual_k_bessel", f.dim(), k.dim()));
    }
    let recon = &synthesis(f) * &analysis(g);
    let duality_residual = recon.distance(k.op())?;
    let analysis_norm_of_g = g.analysis_norm();
    Ok(DualityReport {
        is_dual: duality_residual <= tol * (1.0 + k.norm()),
        duality_residual,
        bessel_bound_of_g: analysis_norm_of_g * analysis_norm_of_g,
        analysis_norm_of_g,
    })
}

fn require_dual(g: &SampledFrame, f: &SampledFrame, k: &KOperator, tol: f64) -> Result<()> {
    let report = is_dual_k_bessel(g, f, k, tol)?;
    if report.is_dual {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "G is not a dual K-Bessel sequence of F: ‖T_F* T_G − K‖ = {:e}",
            report.duality_residual
        )))
    }
}

/// The residual operator of a dual `G`; its image lies in `N(T_F*)`.
pub fn residual_operator(g: &SampledFrame, f: &SampledFrame, k: &KOperator, tol: f64) -> Result<ResidualOperator> {
    let canonical = canonical_dual(f, k, tol)?;
    require_dual(g, f, k, tol)?;
    let phi = &analysis(g) - &analysis(&canonical);
    Ok(ResidualOperator { phi })
}

/// `‖T_F* φ‖`, in the same units as the duality residual.
pub fn phi_constraint_residual(f: &SampledFrame, phi: &LinOperator) -> Result<f64> {
    if phi.rows() != f.atom_count() || phi.cols() != f.dim() {
        return Err(mismatch(
            "phi shape",
            format!("{}×{}", f.atom_count(), f.dim()),
            format!("{}×{}", phi.rows(), phi.cols()),
        ));
    }
    Ok((&synthesis(f) * phi).op_norm())
}

/// The dual `G(ω_i) = K†F(ω_i) + (row i of φ)*`, for any `φ` with `T_F* φ = 0`.
pub fn build_dual_from_phi(f: &SampledFrame, k: &KOperator, phi: &LinOperator, tol: f64) -> Result<SampledFrame> {
    let canonical = canonical_dual(f, k, tol)?;
    let constraint = phi_constraint_residual(f, phi)?;
    let bound = tol * (1.0 + k.norm()) * (1.0 + f.space().codomain_norm(phi)?);
    if constraint > bound {
        return Err(Error::HypothesisViolated(format!(
            "φ does not satisfy T_F* φ = 0: residual {constraint:e} > {bound:e}"
        )));
    }
    let samples = canonical.samples_matrix() + phi.matrix().adjoint();
    SampledFrame::from_matrix(f.space().clone(), samples)
}

/// A random `φ = P_{N(T_F*)} Z` (complex Gaussian `Z`) rescaled so that its
/// norm as an operator into `L²(Ω)` equals `target_norm`. Returns zero when
/// the kernel is trivial.
pub fn random_kernel_phi<R: Rng + ?Sized>(f: &SampledFrame, rng: &mut R, target_norm: f64) -> LinOperator {
    kernel_phi_in(f, &synthesis_kernel_basis(f), rng, target_norm)
}

fn kernel_phi_in<R: Rng + ?Sized>(
    f: &SampledFrame,
    basis: &DMatrix<Scalar>,
    rng: &mut R,
    target_norm: f64,
) -> LinOperator {
    let m = f.atom_count();
    let d = f.dim();
    if basis.ncols() == 0 {
        return LinOperator::from_matrix_unchecked(DMatrix::zeros(m, d));
    }
    let z = rng::gaussian_matrix(rng, m, d);
    let projected = basis * (basis.adjoint() * z);
    let phi = LinOperator::from_matrix_unchecked(projected);
    let norm = f.space().codomain_norm(&phi).expect("φ has one row per atom");
    if norm == 0.0 {
        return phi;
    }
    phi.scale(Scalar::new(target_norm / norm, 0.0))
}

/// A random dual of `F` together with its residual operator. The size of
/// `φ` is drawn log-uniformly in `[0.1, 10] · ‖T_F̃‖`.
pub fn random_dual<R: Rng + ?Sized>(
    f: &SampledFrame,
    k: &KOperator,
    rng: &mut R,
    tol: f64,
) -> Result<(SampledFrame, LinOperator)> {
    DualSampler::new(f, k, tol)?.sample(f, k, rng, tol)
}

/// Draws random duals of one `F` without refactoring `F` for every draw.
struct DualSampler {
    canonical: SampledFrame,
    basis: DMatrix<Scalar>,
}

impl DualSampler {
    fn new(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<Self> {
        Ok(Self {
            canonical: canonical_dual(f, k, tol)?,
            basis: synthesis_kernel_basis(f),
        })
    }

    fn sample<R: Rng + ?Sized>(
        &self,
        f: &SampledFrame,
        k: &KOperator,
        rng: &mut R,
        tol: f64,
    ) -> Result<(SampledFrame, LinOperator)> {
        let scale = rng::log_uniform(rng, 0.1, 10.0) * self.canonical.analysis_norm().max(1e-3);
        let phi = kernel_phi_in(f, &self.basis, rng, scale);
        let constraint = phi_constraint_residual(f, &phi)?;
        let bound = tol * (1.0 + k.norm()) * (1.0 + scale);
        if constraint > bound {
            return Err(Error::HypothesisViolated(format!(
                "φ does not satisfy T_F* φ = 0: residual {constraint:e} > {bound:e}"
            )));
        }
        let samples = self.canonical.samples_matrix() + phi.matrix().adjoint();
        Ok((SampledFrame::from_matrix(f.space().clone(), samples)?, phi))
    }
}

/// `‖T_G x‖² − ‖T_F̃ x‖² − ‖φx‖²`, all norms in `L²(Ω)`, divided by `‖x‖²`.
pub fn norm_decomposition_gap(
    g: &SampledFrame,
    canonical: &SampledFrame,
    phi: &LinOperator,
    x: &HVector,
) -> Result<f64> {
    let space = g.space().clone();
    let coeffs = |op: &LinOperator| -> Result<f64> {
        let v = op.apply(x)?.into_vector();
        Ok(l2_norm_sq(&L2Coefficients::from_vector(space.clone(), v)?))
    };
    let gap = coeffs(&analysis(g))? - coeffs(&analysis(canonical))? - coeffs(phi)?;
    Ok(gap.abs() / x.norm_sq().max(f64::MIN_POSITIVE))
}

/// Samples `trials` random duals `G` and checks `‖T_F̃‖ ≤ ‖T_G‖ + tol`
/// together with `‖T_G f‖² = ‖T_F̃ f‖² + ‖φf‖²` on `probes` random `f`.
pub fn minimality_check_with_probes(
    f: &SampledFrame,
    k: &KOperator,
    trials: usize,
    probes: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckOutcome> {
    let sampler = DualSampler::new(f, k, tol)?;
    let canonical = &sampler.canonical;
    let canonical_norm = canonical.analysis_norm();
    let mut outcome = CheckOutcome::new(tol);
    for trial in 0..trials {
        let mut rng = rng::trial_stream(seed, trial as u64);
        let (g, phi) = sampler.sample(f, k, &mut rng, tol)?;
        let mut worst = (canonical_norm - g.analysis_norm()).max(0.0);
        for _ in 0..probes {
            let x = HVector::from_vector_unchecked(rng::gaussian_vector(&mut rng, f.dim()));
            worst = worst.max(norm_decomposition_gap(&g, canonical, &phi, &x)?);
        }
        outcome.record(worst);
    }
    Ok(outcome)
}

pub fn minimality_check(f: &SampledFrame, k: &KOperator, trials: usize, seed: u64, tol: f64) -> Result<CheckOutcome> {
    minimality_check_with_probes(f, k, trials, 20, seed, tol)
}

/// `‖T_G* T_G − T_G* T_H‖ / (1 + ‖T_G‖²)`.
pub fn characterization_residual(g: &SampledFrame, h: &SampledFrame) -> Result<f64> {
    g.check_compatible(h, "characterization_residual")?;
    let tg_star = synthesis(g);
    let diff = &tg_star * &(&analysis(g) - &analysis(h));
    let n = g.analysis_norm();
    Ok(diff.op_norm() / (1.0 + n * n))
}

/// Tests `T_G* T_G = T_G* T_H` against `F̃` and `trials` random duals `H`.
/// When `trials > 0` the canonical dual is always the first candidate, so a
/// non-canonical `G` is witnessed at index 0.
pub fn canonical_characterization(
    g: &SampledFrame,
    f: &SampledFrame,
    k: &KOperator,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckOutcome> {
    let sampler = DualSampler::new(f, k, tol)?;
    require_dual(g, f, k, tol)?;
    let mut outcome = CheckOutcome::new(tol);
    if trials == 0 {
        return Ok(outcome);
    }
    outcome.record(characterization_residual(g, &sampler.canonical)?);
    for trial in 0..trials {
        let mut rng = rng::trial_stream(seed, trial as u64);
        let (h, _) = sampler.sample(f, k, &mut rng, tol)?;
        outcome.record(characterization_residual(g, &h)?);
    }
    Ok(outcome)
}

/// `F` has exactly one dual K-Bessel sequence iff `R(T_F) = L²(Ω)`.
pub fn uniqueness_test(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<bool> {
    require_parseval_k(f, k, tol)?;
    Ok(analysis(f).rank() == f.atom_count())
}

/// The dual obtained from the minimal (unweighted) least-squares solution
/// `T_G = (T_F*)† K` of `T_F* T_G = K`. It never forms `K†`, so it is an
/// independent route to the dual when that dual is unique.
pub fn least_squares_dual(f: &SampledFrame, k: &KOperator) -> Result<SampledFrame> {
    if f.dim() != k.dim() {
        return Err(mismatch("least_squares_dual", f.dim(), k.dim()));
    }
    let tg = &pinv(&synthesis(f)) * k.op();
    SampledFrame::from_matrix(f.space().clone(), tg.matrix().adjoint())
}

/// `Q = F̃ + G_α` with `G_α(ω_i) = conj(α_i) h`, for `α ⊥ R(T_F)` nonzero
/// and `h ≠ 0`. Verifies that `Q` is a dual distinct from `F̃`.
pub fn alternative_dual_from(
    f: &SampledFrame,
    k: &KOperator,
    alpha: &L2Coefficients,
    h: &HVector,
    tol: f64,
) -> Result<SampledFrame> {
    let canonical = canonical_dual(f, k, tol)?;
    same_space(f.space(), alpha.space(), "alternative_dual_from")?;
    if h.dim() != f.dim() {
        return Err(mismatch("alternative_dual_from h", f.dim(), h.dim()));
    }
    let alpha_norm = alpha.values().norm();
    if alpha_norm == 0.0 || h.norm() == 0.0 {
        return Err(Error::InvalidInput("α and h must both be nonzero".into()));
    }
    let orth = (synthesis(f).matrix() * alpha.values()).norm();
    if orth > tol * (1.0 + f.analysis_norm()) * alpha_norm {
        return Err(Error::HypothesisViolated(format!(
            "α is not orthogonal to R(T_F): ‖T_F* α‖ = {orth:e}"
        )));
    }
    let g_alpha = h.vector() * alpha.values().adjoint();
    let q = SampledFrame::from_matrix(f.space().clone(), canonical.samples_matrix() + g_alpha)?;
    require_dual(&q, f, k, tol)?;
    if q.approx_eq(&canonical, tol)? {
        return Err(Error::Infeasible("alternative dual coincides with F̃".into()));
    }
    Ok(q)
}

/// A dual different from `F̃`, which exists iff the dual is not unique.
/// `α` is a seeded unit combination of an orthonormal basis of `R(T_F)⊥`
/// and `h` a seeded unit vector.
pub fn construct_alternative_dual(f: &SampledFrame, k: &KOperator, seed: u64, tol: f64) -> Result<SampledFrame> {
    require_parseval_k(f, k, tol)?;
    let basis = synthesis_kernel_basis(f);
    if basis.ncols() == 0 {
        return Err(Error::Infeasible(
            "R(T_F) = L²(Ω): the dual K-Bessel sequence is unique".into(),
        ));
    }
    let mut rng = rng::stream(seed);
    let mix = rng::unit_vector(&mut rng, basis.ncols());
    let alpha = L2Coefficients::from_vector(f.space().clone(), basis * mix)?;
    let h = HVector::from_vector_unchecked(rng::unit_vector(&mut rng, f.dim()));
    alternative_dual_from(f, k, &alpha, &h, tol)
}

/// `(Σ μ_i |⟨x, F̃(ω_i)⟩|², ‖x‖²)`; the two agree for `x ∈ N(K)⊥`.
pub fn complement_parseval_sides(f: &SampledFrame, k: &KOperator, x: &HVector, tol: f64) -> Result<(f64, f64)> {
    let canonical = canonical_dual(f, k, tol)?;
    let coeffs = analysis(&canonical).apply(x)?.into_vector();
    let lhs = l2_norm_sq(&L2Coefficients::from_vector(f.space().clone(), coeffs)?);
    Ok((lhs, x.norm_sq()))
}

/// `F̃` is a Parseval frame for `N(K)⊥`: checks the identity on `trials`
/// random vectors `K†K z`.
pub fn complement_parseval_check(
    f: &SampledFrame,
    k: &KOperator,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckOutcome> {
    require_parseval_k(f, k, tol)?;
    let mut outcome = CheckOutcome::new(tol);
    for trial in 0..trials {
        let mut rng = rng::trial_stream(seed, trial as u64);
        let z = HVector::from_vector_unchecked(rng::gaussian_vector(&mut rng, f.dim()));
        let x = k.corange_projector().apply(&z)?;
        let (lhs, rhs) = complement_parseval_sides(f, k, &x, tol)?;
        outcome.record((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE));
    }
    Ok(outcome)
}

/// `S_F̃ = (K†K)(K†K)*` and `S_{KF̃} = KK*`, each residual divided by
/// `1 + ‖K‖²`. Two instances.
pub fn kdaggerk_frame_check(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<CheckOutcome> {
    let canonical = canonical_dual(f, k, tol)?;
    let scale = 1.0 + k.norm().powi(2);
    let p = k.corange_projector();
    let target = p * &p.adjoint();
    let regenerated = canonical.map(k.op())?;
    let mut outcome = CheckOutcome::new(tol);
    outcome.record(frame_operator(&canonical).distance(&target)? / scale);
    outcome.record(frame_operator(&regenerated).distance(&k.gram())? / scale);
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceTransfer {
    pub f_indep: bool,
    pub dual_indep: bool,
    /// `max_i ‖F(ω_i) − K F̃(ω_i)‖ / (1 + ‖K‖)`, evaluated only when `F` is
    /// `L²`-independent.
    pub reconstruction_residual: Option<f64>,
    pub reconstruction_holds: Option<bool>,
}

impl IndependenceTransfer {
    pub fn agree(&self) -> bool {
        self.f_indep == self.dual_indep
    }
}

pub fn l2_independence_transfer(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<IndependenceTransfer> {
    let canonical = canonical_dual(f, k, tol)?;
    let f_indep = is_l2_independent(f);
    let dual_indep = is_l2_independent(&canonical);
    let reconstruction_residual = if f_indep {
        Some(f.max_sample_distance(&canonical.map(k.op())?)? / (1.0 + k.norm()))
    } else {
        None
    };
    Ok(IndependenceTransfer {
        f_indep,
        dual_indep,
        reconstruction_residual,
        reconstruction_holds: reconstruction_residual.map(|r| r <= tol),
    })
}

/// If `F` has a unique dual, `F̃` also has a unique dual (with respect to
/// `K*`): `rank(T_F̃) = m`.
pub fn unique_dual_transfer(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<bool> {
    if !uniqueness_test(f, k, tol)? {
        return Err(Error::HypothesisViolated(
            "F does not have a unique dual K-Bessel sequence".into(),
        ));
    }
    let canonical = canonical_dual(f, k, tol)?;
    Ok(analysis(&canonical).rank() == f.atom_count())
}

/// The three terms of `‖c‖² = ‖c − c̃‖² + ‖c̃‖²`, `c̃ = T_F̃ x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pythagorean {
    pub total: f64,
    pub residual: f64,
    pub canonical: f64,
    /// `|⟨c − c̃, c̃⟩|` in `L²(Ω)`.
    pub cross_term: f64,
}

impl Pythagorean {
    /// `|total − residual − canonical| / (1 + total)`.
    pub fn identity_gap(&self) -> f64 {
        (self.total - self.residual - self.canonical).abs() / (1.0 + self.total)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.identity_gap() <= tol && self.cross_term <= tol
    }
}

pub fn canonical_coefficients(f: &SampledFrame, k: &KOperator, x: &HVector, tol: f64) -> Result<L2Coefficients> {
    let canonical = canonical_dual(f, k, tol)?;
    L2Coefficients::from_vector(f.space().clone(), analysis(&canonical).apply(x)?.into_vector())
}

/// Decomposes `‖c‖²` for coefficients with `Kx = ∫ c F dμ`.
pub fn pythagorean_decomposition(
    f: &SampledFrame,
    k: &KOperator,
    x: &HVector,
    c: &L2Coefficients,
    tol: f64,
) -> Result<Pythagorean> {
    let kx = k.op().apply(x)?;
    let synthesized = bochner_integrate(f, c)?;
    let residual = (synthesized.vector() - kx.vector()).norm();
    let bound = tol * (1.0 + k.norm() * x.norm());
    if residual > bound {
        return Err(Error::InvalidCoefficients { residual, bound });
    }
    let canonical = canonical_coefficients(f, k, x, tol)?;
    let diff = c.sub(&canonical)?;
    Ok(Pythagorean {
        total: l2_norm_sq(c),
        residual: l2_norm_sq(&diff),
        canonical: l2_norm_sq(&canonical),
        cross_term: l2_inner(&diff, &canonical)?.norm(),
    })
}

/// `count` coefficient families solving `Kx = ∫ c F dμ`: the canonical
/// coefficients first, then canonical plus random elements of `N(T_F*)`.
pub fn dual_coefficient_family(
    f: &SampledFrame,
    k: &KOperator,
    x: &HVector,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<L2Coefficients>> {
    let canonical = canonical_coefficients(f, k, x, tol)?;
    let basis = synthesis_kernel_basis(f);
    let scale = l2_norm_sq(&canonical).sqrt().max(1.0);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i == 0 || basis.ncols() == 0 {
            out.push(canonical.clone());
            continue;
        }
        let mut rng = rng::trial_stream(seed, i as u64);
        let coef = rng::gaussian_vector(&mut rng, basis.ncols());
        let size = rng::log_uniform(&mut rng, 0.1, 10.0) * scale;
        let kernel: DVector<Scalar> = &basis * coef;
        let kernel = &kernel * Scalar::new(size / kernel.norm().max(f64::MIN_POSITIVE), 0.0);
        out.push(L2Coefficients::from_vector(
            f.space().clone(),
            canonical.values() + kernel,
        )?);
    }
    Ok(out)
}

//! Frames as sampled vector fields `F : Ω → ℂ^d`.
//!
//! Matrix conventions, with `m` atoms and `H = ℂ^d`:
//!
//! * [`analysis`] is the `m × d` matrix whose row `i` is `F(ω_i)*`, so
//!   `(Tf)_i = ⟨f, F(ω_i)⟩`;
//! * [`synthesis`] is the `d × m` matrix `F · diag(μ)`, which is the adjoint
//!   of the analysis operator for the *weighted* inner product of `L²(Ω)`
//!   (it is not the conjugate transpose of the analysis matrix unless all
//!   weights are one);
//! * [`frame_operator`] is `S = T*T = Σ μ_i F(ω_i) F(ω_i)*`.
//!
//! Norms of operators into `L²(Ω)` are always taken with the weighted inner
//! product; see [`SampledFrame::analysis_norm`].

pub mod fixtures;

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{mismatch, Error, Result};
use crate::linalg::{
    corange_projector, hermitian_eigenvalues, null_space_basis, pinv, range_inclusion, range_projector,
    HVector, LinOperator, Scalar, DEFAULT_TOL,
};
use crate::measure::{same_space, MeasureSpace};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFrame {
    space: Arc<MeasureSpace>,
    /// `d × m`, column `i` is `F(ω_i)`.
    samples: DMatrix<Scalar>,
}

impl SampledFrame {
    pub fn new(space: Arc<MeasureSpace>, samples: &[HVector]) -> Result<Self> {
        if samples.len() != space.atom_count() {
            return Err(mismatch("SampledFrame samples", space.atom_count(), samples.len()));
        }
        let d = samples[0].dim();
        if let Some(bad) = samples.iter().find(|s| s.dim() != d) {
            return Err(mismatch("SampledFrame sample dimension", d, bad.dim()));
        }
        let cols: Vec<_> = samples.iter().map(|s| s.vector().clone()).collect();
        Ok(Self {
            space,
            samples: DMatrix::from_columns(&cols),
        })
    }

    /// Builds a frame from a `d × m` matrix whose columns are the samples.
    pub fn from_matrix(space: Arc<MeasureSpace>, samples: DMatrix<Scalar>) -> Result<Self> {
        if samples.ncols() != space.atom_count() {
            return Err(mismatch("SampledFrame samples", space.atom_count(), samples.ncols()));
        }
        LinOperator::from_matrix(samples.clone())?;
        Ok(Self { space, samples })
    }

    pub(crate) fn from_matrix_unchecked(space: Arc<MeasureSpace>, samples: DMatrix<Scalar>) -> Self {
        Self { space, samples }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.samples.nrows()
    }

    pub fn atom_count(&self) -> usize {
        self.samples.ncols()
    }

    pub fn samples_matrix(&self) -> &DMatrix<Scalar> {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> HVector {
        HVector::from_vector_unchecked(self.samples.column(i).into_owned())
    }

    pub fn samples(&self) -> Vec<HVector> {
        (0..self.atom_count()).map(|i| self.sample(i)).collect()
    }

    /// The frame `ω ↦ A·F(ω)`.
    pub fn map(&self, a: &LinOperator) -> Result<SampledFrame> {
        if a.cols() != self.dim() {
            return Err(mismatch("SampledFrame::map", self.dim(), a.cols()));
        }
        Ok(Self::from_matrix_unchecked(self.space.clone(), a.matrix() * &self.samples))
    }

    /// `‖T_F‖` as an operator `H → L²(Ω)`, i.e. `√λ_max(S)`.
    pub fn analysis_norm(&self) -> f64 {
        self.space
            .codomain_norm(&analysis(self))
            .expect("analysis rows match atom count")
    }

    /// `max_i ‖F(ω_i) − G(ω_i)‖`.
    pub fn max_sample_distance(&self, other: &SampledFrame) -> Result<f64> {
        self.check_compatible(other, "max_sample_distance")?;
        let diff = &self.samples - &other.samples;
        Ok((0..diff.ncols()).map(|j| diff.column(j).norm()).fold(0.0, f64::max))
    }

    pub fn max_sample_norm(&self) -> f64 {
        (0..self.atom_count())
            .map(|j| self.samples.column(j).norm())
            .fold(0.0, f64::max)
    }

    /// Samplewise equality: `max_i ‖F_i − G_i‖ ≤ tol · (1 + max norms)`.
    pub fn approx_eq(&self, other: &SampledFrame, tol: f64) -> Result<bool> {
        let scale = 1.0 + self.max_sample_norm().max(other.max_sample_norm());
        Ok(self.max_sample_distance(other)? <= tol * scale)
    }

    pub(crate) fn check_compatible(&self, other: &SampledFrame, ctx: &'static str) -> Result<()> {
        same_space(&self.space, &other.space, ctx)?;
        if self.dim() != other.dim() {
            return Err(mismatch(ctx, self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// `K ∈ B(H)` together with its pseudo-inverse, adjoint and projectors.
#[derive(Debug, Clone)]
pub struct KOperator {
    op: LinOperator,
    pinv: LinOperator,
    adjoint: LinOperator,
    rank: usize,
    range_projector: LinOperator,
    corange_projector: LinOperator,
}

impl KOperator {
    pub fn new(op: LinOperator) -> Result<Self> {
        if !op.is_square() {
            return Err(mismatch("KOperator", "square", format!("{}×{}", op.rows(), op.cols())));
        }
        Ok(Self {
            pinv: pinv(&op),
            adjoint: op.adjoint(),
            rank: op.rank(),
            range_projector: range_projector(&op),
            corange_projector: corange_projector(&op),
            op,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(LinOperator::identity(dim)?)
    }

    pub fn op(&self) -> &LinOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn pinv(&self) -> &LinOperator {
        &self.pinv
    }

    pub fn adjoint(&self) -> &LinOperator {
        &self.adjoint
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `KK†`, the projector onto `R(K)`.
    pub fn range_projector(&self) -> &LinOperator {
        &self.range_projector
    }

    /// `K†K`, the projector onto `N(K)⊥ = R(K*)`.
    pub fn corange_projector(&self) -> &LinOperator {
        &self.corange_projector
    }

    /// `KK*`.
    pub fn gram(&self) -> LinOperator {
        &self.op * &self.adjoint
    }

    pub fn norm(&self) -> f64 {
        self.op.op_norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Samples carried NaN/Inf; nothing can be said.
    NotBesselInput,
    BesselOnly,
    /// An ordinary frame for all of `H` (hence a K-frame for every `K`)
    /// that is neither tight nor Parseval as a K-frame.
    Frame,
    KFrame,
    TightKFrame,
    ParsevalKFrame,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameClassification {
    pub verdict: Verdict,
    /// Optimal ordinary bounds `(λ_min(S), λ_max(S))`.
    pub bounds: FrameBounds,
    /// Optimal lower K-frame bound, absent when `F` is not a K-frame.
    pub k_lower: Option<f64>,
    pub residuals: BTreeMap<String, f64>,
}

pub fn analysis(f: &SampledFrame) -> LinOperator {
    LinOperator::from_matrix_unchecked(f.samples.adjoint())
}

pub fn synthesis(f: &SampledFrame) -> LinOperator {
    let mut m = f.samples.clone();
    for (j, w) in f.space.weights().iter().enumerate() {
        m.column_mut(j).scale_mut(*w);
    }
    LinOperator::from_matrix_unchecked(m)
}

/// `F · diag(√μ)`: the synthesis operator written in an orthonormal basis of
/// `L²(Ω)`, so that `T̂ T̂* = S` holds for plain conjugate transposes.
pub fn weighted_synthesis(f: &SampledFrame) -> LinOperator {
    LinOperator::from_matrix_unchecked(&f.samples * f.space.sqrt_weight_diag())
}

pub fn frame_operator(f: &SampledFrame) -> LinOperator {
    let t = weighted_synthesis(f);
    &t * &t.adjoint()
}

pub fn frame_bounds(f: &SampledFrame) -> FrameBounds {
    let ev = hermitian_eigenvalues(&frame_operator(f)).expect("frame operator is Hermitian");
    FrameBounds {
        lower: ev[0].max(0.0),
        upper: ev[ev.len() - 1].max(0.0),
    }
}

/// Orthonormal basis (columns, `m × k`) of `N(T_F*) = R(T_F)⊥`.
///
/// `x ∈ N(T_F*)` iff `Σ μ_i x_i F(ω_i) = 0`; the weights are positive so this
/// is the same subspace whether or not they are folded in.
pub fn synthesis_kernel_basis(f: &SampledFrame) -> DMatrix<Scalar> {
    null_space_basis(&synthesis(f))
}

/// Optimal `A` with `A‖K*f‖² ≤ ⟨Sf, f⟩` for all `f`, namely `1/λ*` where
/// `λ* = inf{λ : KK* ⪯ λ S}`; `None` when `R(K) ⊄ R(T_F*)`.
///
/// For `K = 0` every `A` works and the result is `+∞`.
pub fn k_lower_bound(f: &SampledFrame, k: &KOperator) -> Result<Option<f64>> {
    if f.dim() != k.dim() {
        return Err(mismatch("k_lower_bound", f.dim(), k.dim()));
    }
    let inc = range_inclusion(k.op(), &weighted_synthesis(f))?;
    Ok(inc.lambda_star.map(|lam| if lam == 0.0 { f64::INFINITY } else { 1.0 / lam }))
}

/// `‖S − KK*‖ / (1 + ‖KK*‖)`.
pub fn parseval_residual(f: &SampledFrame, k: &KOperator) -> Result<f64> {
    if f.dim() != k.dim() {
        return Err(mismatch("parseval_residual", f.dim(), k.dim()));
    }
    let kk = k.gram();
    Ok(frame_operator(f).distance(&kk)? / (1.0 + kk.op_norm()))
}

/// Fails with [`Error::HypothesisViolated`] unless `F` is a Parseval K-frame
/// at relative tolerance `tol`.
pub fn require_parseval_k(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<()> {
    let resid = parseval_residual(f, k)?;
    if resid <= tol {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "frame is not a Parseval K-frame: ‖S − KK*‖/(1+‖KK*‖) = {resid:e} > {tol:e}"
        )))
    }
}

/// Classifies `F` against `K`.
///
/// Checked in order: Parseval K-frame (`S = KK*`), tight K-frame (optimal
/// lower K-bound equals the optimal upper bound), ordinary frame, K-frame,
/// Bessel only. `tol` is relative; the default is [`DEFAULT_TOL`].
pub fn classify(f: &SampledFrame, k: &KOperator, tol: f64) -> Result<FrameClassification> {
    let bounds = frame_bounds(f);
    let k_lower = k_lower_bound(f, k)?;
    let parseval = parseval_residual(f, k)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("parseval".to_string(), parseval);

    let verdict = if parseval <= tol {
        Verdict::ParsevalKFrame
    } else if let Some(a) = k_lower {
        let gap = (a - bounds.upper).abs();
        residuals.insert("tight".to_string(), gap);
        if gap <= tol * (1.0 + bounds.upper) {
            Verdict::TightKFrame
        } else if bounds.lower > tol * (1.0 + bounds.upper) {
            Verdict::Frame
        } else {
            Verdict::KFrame
        }
    } else {
        Verdict::BesselOnly
    };
    Ok(FrameClassification {
        verdict,
        bounds,
        k_lower,
        residuals,
    })
}

/// Classification of raw sample data that may contain non-finite values.
pub fn classify_raw(
    space: Arc<MeasureSpace>,
    samples: DMatrix<Scalar>,
    k: &KOperator,
    tol: f64,
) -> Result<FrameClassification> {
    if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Ok(FrameClassification {
            verdict: Verdict::NotBesselInput,
            bounds: FrameBounds {
                lower: f64::NAN,
                upper: f64::INFINITY,
            },
            k_lower: None,
            residuals: BTreeMap::new(),
        });
    }
    classify(&SampledFrame::from_matrix(space, samples)?, k, tol)
}

pub fn classify_default(f: &SampledFrame, k: &KOperator) -> Result<FrameClassification> {
    classify(f, k, DEFAULT_TOL)
}

/// `rank(T_F*) = m`: no nonzero `φ ∈ L²(Ω)` has `∫ φ F dμ = 0`.
pub fn is_l2_independent(f: &SampledFrame) -> bool {
    synthesis(f).rank() == f.atom_count()
}

/// Random Parseval K-frame `F(ω_i) = K w_i`.
///
/// The family `w_i = B q_i / √μ_i` uses an orthonormal basis `B` of a
/// `p = min(d, m)`-dimensional subspace containing `R(K*)` and the rows
/// `q_i*` of a random `m × p` isometry, so `Σ μ_i w_i w_i*` is the projector
/// `BB*` and `S = K BB* K* = KK*`.
pub fn generate_parseval_k_frame(
    k: &KOperator,
    atoms: usize,
    space: Arc<MeasureSpace>,
    seed: u64,
) -> Result<SampledFrame> {
    if space.atom_count() != atoms {
        return Err(mismatch("generate_parseval_k_frame atoms", space.atom_count(), atoms));
    }
    if atoms < k.rank() {
        return Err(Error::Infeasible(format!(
            "{atoms} atoms cannot carry a Parseval K-frame for rank(K) = {}",
            k.rank()
        )));
    }
    let d = k.dim();
    let p = d.min(atoms);
    let mut rng = rng::stream(seed);

    let corange = k.corange_projector();
    let row_space = crate::linalg::svd(corange, 0.25 / d as f64)?.left;
    let mut basis = DMatrix::<Scalar>::zeros(d, p);
    basis.columns_mut(0, row_space.ncols()).copy_from(&row_space);
    let extra = p - row_space.ncols();
    if extra > 0 {
        // Extend inside N(K), which does not change S.
        let kernel = null_space_basis(k.op());
        let mix = rng::isometry(&mut rng, kernel.ncols(), extra);
        basis.columns_mut(row_space.ncols(), extra).copy_from(&(kernel * mix));
    }

    let q = rng::isometry(&mut rng, atoms, p);
    let mut w = &basis * q.adjoint();
    for (j, mu) in space.weights().iter().enumerate() {
        w.column_mut(j).scale_mut(1.0 / mu.sqrt());
    }
    Ok(SampledFrame::from_matrix_unchecked(space, k.op().matrix() * w))
}

/// Complex Gaussian samples scaled by `1/√(m μ_i)`.
pub fn generate_random_bessel(
    dim: usize,
    atoms: usize,
    space: Arc<MeasureSpace>,
    seed: u64,
) -> Result<SampledFrame> {
    if space.atom_count() != atoms {
        return Err(mismatch("generate_random_bessel atoms", space.atom_count(), atoms));
    }
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be ≥ 1".into()));
    }
    let mut rng = rng::stream(seed);
    let mut samples = rng::gaussian_matrix(&mut rng, dim, atoms);
    for (j, mu) in space.weights().iter().enumerate() {
        samples.column_mut(j).scale_mut(1.0 / (atoms as f64 * mu).sqrt());
    }
    Ok(SampledFrame::from_matrix_unchecked(space, samples))
}

/// Random `K` of the requested rank (`≤ dim`).
pub fn random_k_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<KOperator> {
    if rank > dim {
        return Err(Error::InvalidInput(format!("rank {rank} exceeds dimension {dim}")));
    }
    KOperator::new(LinOperator::from_matrix(rng::rank_deficient_matrix(rng, dim, dim, rank))?)
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::{r, HVector};

    fn basis_frame(d: usize, scale: f64) -> SampledFrame {
        let space = MeasureSpace::uniform(d).unwrap().shared();
        let samples: DMatrix<Scalar> = DMatrix::identity(d, d) * r(scale);
        SampledFrame::from_matrix(space, samples).unwrap()
    }

    fn mercedes_benz() -> SampledFrame {
        let space = MeasureSpace::uniform(3).unwrap().shared();
        let samples: Vec<HVector> = (0..3)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                HVector::from_real(&[a.cos(), a.sin()]).unwrap()
            })
            .collect();
        SampledFrame::new(space, &samples).unwrap()
    }

    #[test]
    fn analysis_and_synthesis_examples() {
        let e = basis_frame(3, 1.0);
        let i3 = LinOperator::identity(3).unwrap();
        assert_eq!(analysis(&e), i3);
        assert_eq!(synthesis(&e), i3);
        assert_eq!(analysis(&basis_frame(3, 2.0)), i3.scale(r(2.0)));

        let (f, _) = fixture_w1();
        let t = analysis(&f);
        let s = 0.5f64.sqrt();
        let probe = HVector::from_real(&[3.0, 5.0]).unwrap();
        let out = t.apply(&probe).unwrap();
        for (got, want) in out.entries().iter().zip([3.0 * s, 3.0 * s, 0.0]) {
            assert!((got - r(want)).norm() < 1e-15);
        }

        let (fp, _) = fixture_w1_prime();
        let x = nalgebra::DVector::from_vec(vec![r(2f64.sqrt()), r(0.0), r(0.0)]);
        let y = synthesis(&fp).matrix() * x;
        assert!((y[0] - r(2.0)).norm() < 1e-15 && y[1].norm() < 1e-15);

        let zero = SampledFrame::from_matrix(MeasureSpace::uniform(2).unwrap().shared(), DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(synthesis(&zero).op_norm(), 0.0);
    }

    #[test]
    fn frame_operator_examples() {
        let i2 = LinOperator::identity(2).unwrap();
        assert!(frame_operator(&basis_frame(2, 1.0)).distance(&i2).unwrap() < 1e-15);
        let (f, _) = fixture_w1();
        let d10 = LinOperator::real_diagonal(&[1.0, 0.0]).unwrap();
        assert!(frame_operator(&f).distance(&d10).unwrap() < 1e-15);
        let mb = frame_operator(&mercedes_benz());
        assert!(mb.distance(&i2.scale(r(1.5))).unwrap() < 1e-14);
    }

    #[test]
    fn frame_bounds_examples() {
        let b = frame_bounds(&basis_frame(2, 1.0));
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);
        let b = frame_bounds(&mercedes_benz());
        assert!((b.lower - 1.5).abs() < 1e-14 && (b.upper - 1.5).abs() < 1e-14);
        let (f, _) = fixture_w1();
        let b = frame_bounds(&f);
        assert!(b.lower.abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-14);
    }

    #[test]
    fn k_lower_bound_examples() {
        let id = KOperator::identity(2).unwrap();
        assert!((k_lower_bound(&basis_frame(2, 1.0), &id).unwrap().unwrap() - 1.0).abs() < 1e-14);
        let (f, k) = fixture_w1();
        assert!((k_lower_bound(&f, &k).unwrap().unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(k_lower_bound(&f, &id).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        let id = KOperator::identity(2).unwrap();
        assert_eq!(classify_default(&basis_frame(2, 1.0), &id).unwrap().verdict, Verdict::ParsevalKFrame);
        let (f, k) = fixture_w1();
        assert_eq!(classify_default(&f, &k).unwrap().verdict, Verdict::ParsevalKFrame);

        let c = classify_default(&basis_frame(2, 2.0), &id).unwrap();
        assert_eq!(c.verdict, Verdict::TightKFrame);
        assert!((c.k_lower.unwrap() - 4.0).abs() < 1e-12 && (c.bounds.upper - 4.0).abs() < 1e-12);

        assert_eq!(classify_default(&f, &id).unwrap().verdict, Verdict::BesselOnly);

        let half = KOperator::new(LinOperator::real_diagonal(&[2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(classify_default(&mercedes_benz(), &half).unwrap().verdict, Verdict::Frame);

        let e1 = KOperator::new(LinOperator::real_diagonal(&[2.0, 0.0]).unwrap()).unwrap();
        let space = MeasureSpace::uniform(2).unwrap().shared();
        let g = SampledFrame::new(
            space,
            &[HVector::from_real(&[1.0, 0.0]).unwrap(), HVector::from_real(&[2.0, 0.0]).unwrap()],
        )
        .unwrap();
        assert_eq!(classify_default(&g, &e1).unwrap().verdict, Verdict::KFrame);

        let raw = DMatrix::from_element(2, 2, r(f64::NAN));
        let c = classify_raw(MeasureSpace::uniform(2).unwrap().shared(), raw, &id, DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::NotBesselInput);
    }

    #[test]
    fn independence_examples() {
        assert!(is_l2_independent(&basis_frame(3, 1.0)));
        let (f, _) = fixture_w1();
        assert!(!is_l2_independent(&f));
        let space = MeasureSpace::new(vec![0.3, 7.0]).unwrap().shared();
        let g = SampledFrame::new(
            space,
            &[HVector::from_real(&[1.0, 1.0]).unwrap(), HVector::from_real(&[1.0, -2.0]).unwrap()],
        )
        .unwrap();
        assert!(is_l2_independent(&g));
    }

    #[test]
    fn parseval_generator_examples() {
        let id = KOperator::identity(3).unwrap();
        let f = generate_parseval_k_frame(&id, 3, MeasureSpace::uniform(3).unwrap().shared(), 11).unwrap();
        let gram = analysis(&f).matrix() * synthesis(&f).matrix();
        assert!((gram - DMatrix::<Scalar>::identity(3, 3)).norm() < 1e-13);

        let k = KOperator::new(LinOperator::real_diagonal(&[1.0, 0.0]).unwrap()).unwrap();
        let f = generate_parseval_k_frame(&k, 3, MeasureSpace::uniform(3).unwrap().shared(), 5).unwrap();
        assert!(frame_operator(&f).distance(&k.gram()).unwrap() <= 1e-12);
        assert_eq!(classify_default(&f, &k).unwrap().verdict, Verdict::ParsevalKFrame);

        let k3 = random_k_operator(&mut rng::stream(3), 4, 3).unwrap();
        let space = MeasureSpace::new(vec![0.5, 2.0, 1.5]).unwrap().shared();
        let f = generate_parseval_k_frame(&k3, 3, space, 9).unwrap();
        assert!(parseval_residual(&f, &k3).unwrap() < 1e-12);

        let space = MeasureSpace::uniform(2).unwrap().shared();
        assert!(matches!(
            generate_parseval_k_frame(&id, 2, space, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn bessel_generator_is_deterministic() {
        let space = MeasureSpace::new(vec![1.0, 0.25, 4.0]).unwrap().shared();
        let a = generate_random_bessel(2, 3, space.clone(), 42).unwrap();
        let b = generate_random_bessel(2, 3, space.clone(), 42).unwrap();
        assert_eq!(a, b);
        assert!(frame_bounds(&a).upper.is_finite());
        let one = generate_random_bessel(1, 1, MeasureSpace::uniform(1).unwrap().shared(), 1).unwrap();
        assert_eq!((one.dim(), one.atom_count()), (1, 1));
    }
}

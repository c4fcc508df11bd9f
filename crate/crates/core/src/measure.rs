//! The discretized measure space `(Ω, μ)` and its coefficient space `L²(Ω)`.
//!
//! `Ω` is a finite set of atoms, each with a strictly positive weight, so
//! every integral becomes a weighted sum and "almost everywhere" means
//! "at every atom".

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{mismatch, Error, Result};
use crate::frame::SampledFrame;
use crate::linalg::{HVector, LinOperator, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
    labels: Vec<String>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| format!("w{i}")).collect();
        Self::with_labels(weights, labels)
    }

    pub fn with_labels(weights: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("measure space needs at least one atom".into()));
        }
        if labels.len() != weights.len() {
            return Err(mismatch("MeasureSpace labels", weights.len(), labels.len()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "weight of atom {i} must be finite and positive, got {w}"
            )));
        }
        Ok(Self { weights, labels })
    }

    pub fn uniform(atoms: usize) -> Result<Self> {
        Self::new(vec![1.0; atoms])
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `diag(√μ)`, the isometry from `L²(Ω)` onto unweighted `ℂ^m`.
    pub fn sqrt_weight_diag(&self) -> DMatrix<Scalar> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.atom_count(),
            self.weights.iter().map(|w| Scalar::new(w.sqrt(), 0.0)),
        ))
    }

    /// Norm of `op : ℂ^d → L²(Ω)` (an `m × d` matrix) with the weighted
    /// inner product on the codomain.
    pub fn codomain_norm(&self, op: &LinOperator) -> Result<f64> {
        if op.rows() != self.atom_count() {
            return Err(mismatch("MeasureSpace::codomain_norm", self.atom_count(), op.rows()));
        }
        Ok(LinOperator::from_matrix_unchecked(self.sqrt_weight_diag() * op.matrix()).op_norm())
    }
}

/// A function `c : Ω → ℂ`, stored by its value at each atom.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Coefficients {
    space: Arc<MeasureSpace>,
    values: DVector<Scalar>,
}

impl L2Coefficients {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<Scalar>) -> Result<Self> {
        Self::from_vector(space, DVector::from_vec(values))
    }

    pub fn from_vector(space: Arc<MeasureSpace>, values: DVector<Scalar>) -> Result<Self> {
        if values.len() != space.atom_count() {
            return Err(mismatch("L2Coefficients", space.atom_count(), values.len()));
        }
        if !values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("coefficients have non-finite entries".into()));
        }
        Ok(Self { space, values })
    }

    pub fn zeros(space: Arc<MeasureSpace>) -> Self {
        let m = space.atom_count();
        Self {
            space,
            values: DVector::zeros(m),
        }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &DVector<Scalar> {
        &self.values
    }

    pub fn norm_sq(&self) -> f64 {
        l2_norm_sq(self)
    }

    /// `a·self + other`.
    pub fn axpy(&self, a: Scalar, other: &L2Coefficients) -> Result<Self> {
        same_space(&self.space, &other.space, "L2Coefficients::axpy")?;
        Ok(Self {
            space: self.space.clone(),
            values: &self.values * a + &other.values,
        })
    }

    pub fn sub(&self, other: &L2Coefficients) -> Result<Self> {
        other.axpy(Scalar::new(-1.0, 0.0), self).map(|d| Self {
            space: d.space,
            values: -d.values,
        })
    }
}

pub(crate) fn same_space(a: &Arc<MeasureSpace>, b: &Arc<MeasureSpace>, ctx: &'static str) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(ctx))
    }
}

/// `⟨a, b⟩ = Σ μ_i a_i conj(b_i)`.
pub fn l2_inner(a: &L2Coefficients, b: &L2Coefficients) -> Result<Scalar> {
    same_space(&a.space, &b.space, "l2_inner")?;
    Ok(a.space
        .weights
        .iter()
        .zip(a.values.iter().zip(b.values.iter()))
        .map(|(w, (x, y))| x * y.conj() * *w)
        .sum())
}

/// `Σ μ_i |c_i|²`.
pub fn l2_norm_sq(c: &L2Coefficients) -> f64 {
    c.space
        .weights
        .iter()
        .zip(c.values.iter())
        .map(|(w, z)| w * z.norm_sqr())
        .sum()
}

/// `∫ c(ω) F(ω) dμ(ω) = Σ μ_i c_i F(ω_i)`.
pub fn bochner_integrate(field: &SampledFrame, c: &L2Coefficients) -> Result<HVector> {
    same_space(field.space(), &c.space, "bochner_integrate")?;
    let weighted = DVector::from_iterator(
        c.values.len(),
        c.values.iter().zip(&c.space.weights).map(|(z, w)| z * *w),
    );
    Ok(HVector::from_vector_unchecked(field.samples_matrix() * weighted))
}

//! Hand-checkable fixtures on three atoms of unit weight in `ℂ²`.
//!
//! * `W1`: `F = ((1/√2, 0), (1/√2, 0), (0, 0))`, `K = diag(1, 0)`.
//! * `W1′`: `F = ((√2, 0), (√2, 0), (0, 0))`, `K = diag(2, 0)`, so that
//!   `K† = diag(1/2, 0)` and the canonical dual is the `W1` frame.
//!
//! Both are Parseval K-frames with a zero sample, a repeated direction and a
//! two-dimensional kernel `span{(1, −1, 0), (0, 0, 1)}` of the synthesis map.

use super::{KOperator, SampledFrame};
use crate::linalg::{HVector, LinOperator};
use crate::measure::MeasureSpace;

fn three_atom_frame(x: f64) -> SampledFrame {
    let space = MeasureSpace::uniform(3).expect("three atoms").shared();
    let samples = [
        HVector::from_real(&[x, 0.0]),
        HVector::from_real(&[x, 0.0]),
        HVector::from_real(&[0.0, 0.0]),
    ]
    .map(|v| v.expect("finite"));
    SampledFrame::new(space, &samples).expect("consistent fixture")
}

fn diagonal_k(a: f64) -> KOperator {
    KOperator::new(LinOperator::real_diagonal(&[a, 0.0]).expect("finite")).expect("square")
}

pub fn fixture_w1() -> (SampledFrame, KOperator) {
    (three_atom_frame(std::f64::consts::FRAC_1_SQRT_2), diagonal_k(1.0))
}

pub fn fixture_w1_prime() -> (SampledFrame, KOperator) {
    (three_atom_frame(std::f64::consts::SQRT_2), diagonal_k(2.0))
}

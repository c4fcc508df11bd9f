use kframe_core::duality::{
    build_dual_from_phi, canonical_dual, complement_parseval_check, is_dual_k_bessel, random_kernel_phi,
    residual_operator,
};
use kframe_core::frame::{
    analysis, classify_default, frame_bounds, frame_operator, generate_parseval_k_frame, generate_random_bessel,
    random_k_operator, synthesis, Verdict,
};
use kframe_core::linalg::{adjoint, corange_projector, pinv, range_projector, DEFAULT_TOL};
use kframe_core::measure::{bochner_integrate, l2_inner, l2_norm_sq};
use kframe_core::rng;
use kframe_core::{HVector, L2Coefficients, LinOperator, MeasureSpace, Scalar};
use nalgebra::DMatrix;
use proptest::prelude::*;
use std::sync::Arc;

fn space(m: usize, seed: u64, uniform: bool) -> Arc<MeasureSpace> {
    if uniform {
        return MeasureSpace::uniform(m).unwrap().shared();
    }
    let mut rng = rng::stream(seed ^ 0xABCD);
    MeasureSpace::new((0..m).map(|_| rng::log_uniform(&mut rng, 0.05, 20.0)).collect())
        .unwrap()
        .shared()
}

fn coeffs(s: &Arc<MeasureSpace>, rng: &mut rng::StreamRng) -> L2Coefficients {
    L2Coefficients::from_vector(s.clone(), rng::gaussian_vector(rng, s.atom_count())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l2_inner_is_sesquilinear(m in 1usize..12, seed in any::<u64>()) {
        let s = space(m, seed, false);
        let mut rng = rng::stream(seed);
        let (a, b, c) = (coeffs(&s, &mut rng), coeffs(&s, &mut rng), coeffs(&s, &mut rng));
        let z = rng::complex_gaussian(&mut rng);
        let ab = l2_inner(&a, &b).unwrap();
        let ba = l2_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12 * (1.0 + ab.norm()));

        let lhs = l2_inner(&a.axpy(z, &c).unwrap(), &b).unwrap();
        let rhs = z * ab + l2_inner(&c, &b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));

        let aa = l2_inner(&a, &a).unwrap();
        prop_assert!(aa.im.abs() <= 1e-12 * (1.0 + aa.re));
        prop_assert!((aa.re - l2_norm_sq(&a)).abs() <= 1e-12 * (1.0 + aa.re));
    }

    #[test]
    fn bochner_integral_is_linear(d in 1usize..6, m in 1usize..12, seed in any::<u64>()) {
        let s = space(m, seed, false);
        let f = generate_random_bessel(d, m, s.clone(), seed).unwrap();
        let mut rng = rng::stream(seed.wrapping_add(1));
        let (c1, c2) = (coeffs(&s, &mut rng), coeffs(&s, &mut rng));
        let a = rng::complex_gaussian(&mut rng);
        let lhs = bochner_integrate(&f, &c1.axpy(a, &c2).unwrap()).unwrap();
        let i1 = bochner_integrate(&f, &c1).unwrap();
        let i2 = bochner_integrate(&f, &c2).unwrap();
        let rhs = i1.vector() * a + i2.vector();
        prop_assert!((lhs.vector() - &rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn analysis_and_synthesis_are_adjoint(d in 1usize..8, m in 1usize..16, seed in any::<u64>(), uniform in any::<bool>()) {
        let s = space(m, seed, uniform);
        let f = generate_random_bessel(d, m, s.clone(), seed).unwrap();
        let mut rng = rng::stream(seed.wrapping_mul(3));
        let x = HVector::from_vector(rng::gaussian_vector(&mut rng, d)).unwrap();
        let c = coeffs(&s, &mut rng);
        let tx = L2Coefficients::from_vector(s.clone(), analysis(&f).apply(&x).unwrap().into_vector()).unwrap();
        let lhs = l2_inner(&tx, &c).unwrap();
        let tsc = HVector::from_vector(synthesis(&f).matrix() * c.values()).unwrap();
        let rhs = x.inner(&tsc).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn frame_inequality_is_attained(d in 1usize..7, m in 1usize..16, seed in any::<u64>()) {
        let s = space(m, seed, false);
        let f = generate_random_bessel(d, m, s.clone(), seed).unwrap();
        let b = frame_bounds(&f);
        let energy = |x: &HVector| {
            let v = analysis(&f).apply(x).unwrap().into_vector();
            l2_norm_sq(&L2Coefficients::from_vector(s.clone(), v).unwrap())
        };
        let mut rng = rng::stream(seed ^ 7);
        for _ in 0..8 {
            let x = HVector::from_vector(rng::gaussian_vector(&mut rng, d)).unwrap();
            let e = energy(&x);
            let n2 = x.norm_sq();
            prop_assert!(b.lower * n2 <= e + 1e-9 * n2 * (1.0 + b.upper));
            prop_assert!(e <= b.upper * n2 + 1e-9 * n2 * (1.0 + b.upper));
        }
        // Extreme eigenvectors of S reach the bounds.
        let sop = frame_operator(&f);
        let eig = nalgebra::SymmetricEigen::new(sop.matrix().clone());
        let (imin, imax) = (eig.eigenvalues.imin(), eig.eigenvalues.imax());
        for (i, bound) in [(imin, b.lower), (imax, b.upper)] {
            let v = HVector::from_vector(eig.eigenvectors.column(i).into_owned()).unwrap();
            prop_assert!((energy(&v) - bound).abs() <= 1e-9 * (1.0 + b.upper));
        }
    }

    #[test]
    fn moore_penrose_identities(rows in 1usize..10, cols in 1usize..10, seed in any::<u64>(), deficient in any::<bool>()) {
        let mut rng = rng::stream(seed);
        let rank = if deficient { rows.min(cols).saturating_sub(1).max(1) } else { rows.min(cols) };
        let a = LinOperator::from_matrix(rng::rank_deficient_matrix(&mut rng, rows, cols, rank)).unwrap();
        let ap = pinv(&a);
        let scale = 1e-10 * (1.0 + a.op_norm());
        prop_assert!((&(&a * &ap) * &a).distance(&a).unwrap() <= scale);
        prop_assert!((&(&ap * &a) * &ap).distance(&ap).unwrap() <= scale * (1.0 + ap.op_norm()));
        let aap = &a * &ap;
        let apa = &ap * &a;
        prop_assert!(aap.adjoint().distance(&aap).unwrap() <= scale);
        prop_assert!(apa.adjoint().distance(&apa).unwrap() <= scale);
        prop_assert!(pinv(&adjoint(&a)).distance(&adjoint(&ap)).unwrap() <= scale * (1.0 + ap.op_norm()));
        prop_assert!((&ap * &range_projector(&a)).distance(&ap).unwrap() <= scale * (1.0 + ap.op_norm()));
        prop_assert!(corange_projector(&a).distance(&apa).unwrap() <= scale);
        prop_assert!((a.op_norm() - adjoint(&a).op_norm()).abs() <= 1e-12 * a.op_norm());
    }

    #[test]
    fn generated_parseval_frames_classify(d in 1usize..8, extra in 0usize..10, seed in any::<u64>(), uniform in any::<bool>()) {
        let mut rng = rng::stream(seed);
        let rank = 1 + (seed as usize % d);
        let k = random_k_operator(&mut rng, d, rank).unwrap();
        let m = rank + extra;
        let s = space(m, seed, uniform);
        let f = generate_parseval_k_frame(&k, m, s, seed).unwrap();
        let c = classify_default(&f, &k).unwrap();
        prop_assert_eq!(c.verdict, Verdict::ParsevalKFrame);
        prop_assert!(c.residuals["parseval"] <= 1e-10);
    }

    #[test]
    fn residual_operator_round_trip(d in 1usize..7, extra in 1usize..10, seed in any::<u64>()) {
        let mut rng = rng::stream(seed);
        let k = random_k_operator(&mut rng, d, d).unwrap();
        let m = d + extra;
        let s = space(m, seed, false);
        let f = generate_parseval_k_frame(&k, m, s, seed).unwrap();
        let phi = random_kernel_phi(&f, &mut rng, 2.0);
        let g = build_dual_from_phi(&f, &k, &phi, DEFAULT_TOL).unwrap();
        prop_assert!(is_dual_k_bessel(&g, &f, &k, DEFAULT_TOL).unwrap().is_dual);
        let back = residual_operator(&g, &f, &k, DEFAULT_TOL).unwrap();
        prop_assert!(back.phi().distance(&phi).unwrap() <= 1e-9 * (1.0 + phi.op_norm()));
        prop_assert!(complement_parseval_check(&f, &k, 4, seed, DEFAULT_TOL).unwrap().passed());
    }
}

#[test]
fn bochner_examples() {
    let s = MeasureSpace::uniform(3).unwrap().shared();
    let e = kframe_core::SampledFrame::from_matrix(s.clone(), DMatrix::<Scalar>::identity(3, 3)).unwrap();
    let zero = bochner_integrate(&e, &L2Coefficients::zeros(s.clone())).unwrap();
    assert_eq!(zero.norm(), 0.0);
    let ind = L2Coefficients::from_vector(s.clone(), DMatrix::<Scalar>::identity(3, 3).column(1).into_owned()).unwrap();
    assert_eq!(bochner_integrate(&e, &ind).unwrap().entries()[1], Scalar::new(1.0, 0.0));

    let (fp, _) = kframe_core::frame::fixtures::fixture_w1_prime();
    let c = L2Coefficients::new(fp.space().clone(), vec![Scalar::new(2f64.sqrt(), 0.0), 0.0.into(), 0.0.into()]).unwrap();
    let v = bochner_integrate(&fp, &c).unwrap();
    assert!((v.entries()[0] - Scalar::new(2.0, 0.0)).norm() < 1e-15);
    assert_eq!(v.entries()[1], Scalar::new(0.0, 0.0));
}

#[test]
fn canonical_dual_of_identity_k_is_frame_itself() {
    let k = kframe_core::KOperator::identity(4).unwrap();
    let f = generate_parseval_k_frame(&k, 9, space(9, 3, false), 3).unwrap();
    let fd = canonical_dual(&f, &k, DEFAULT_TOL).unwrap();
    assert!(fd.approx_eq(&f, 1e-12).unwrap());
}

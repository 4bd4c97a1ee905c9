//! Route equivalence and frame checks for the hypersurface machinery.
//!
//! The general second-fundamental-form pairing must agree with the
//! class-specific specializations on random tangent pairs, the direct trace
//! must match the closed forms, and all tangent-frame constructions must
//! produce orthonormal bases of the same subspace.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use twistor_geom::algebra::Vector4;
use twistor_geom::catalog;
use twistor_geom::hermitian::AlmostHermitian;
use twistor_geom::sigma::{
    self, fiber_point, frame_tangency_residual, grad_rho, pi_pair_general, pi_pair_hermitian,
    pi_pair_symplectic, sigma_tangent_frame, trace_pi, FrameMode, SigmaPoint, TraceRoute,
};
use twistor_geom::twistor::{h_t, TwistorTangent};

/// Random tangent vector of the hypersurface at `s`: arbitrary horizontal
/// part plus the forced vertical α-component plus a free ξ-component.
fn random_tangent(
    h: &AlmostHermitian,
    s: &SigmaPoint,
    rng: &mut impl Rng,
) -> TwistorTangent {
    let x = Vector4([
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ]);
    let hat = sigma::hat_lift(h, s, &x);
    let xi = s.xi(h);
    let c: f64 = rng.gen_range(-1.0..1.0);
    TwistorTangent {
        horizontal: hat.horizontal,
        vertical: hat.vertical.add(&xi.scale(c)),
    }
}

fn random_sigma_point(h: &AlmostHermitian, rng: &mut impl Rng) -> SigmaPoint {
    let base_choices = h.manifold().sample_points(8);
    let p = base_choices[rng.gen_range(0..base_choices.len())];
    let psi = rng.gen_range(0.0..std::f64::consts::TAU);
    fiber_point(h, p, psi).unwrap()
}

#[test]
fn hermitian_route_matches_general_on_primary_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for eps in [1i8, -1] {
        let pres = catalog::kodaira_hermitian(eps).unwrap();
        let h = &pres.hermitian;
        for t in [0.5, 1.0, 2.0] {
            for _ in 0..70 {
                let s = random_sigma_point(h, &mut rng);
                let e = random_tangent(h, &s, &mut rng);
                let f = random_tangent(h, &s, &mut rng);
                let general = pi_pair_general(h, &s, t, &e, &f).unwrap();
                let special = pi_pair_hermitian(h, &s, t, &e, &f).unwrap();
                assert!(
                    (general - special).abs() <= 1e-9,
                    "eps={eps} t={t}: general {general} vs hermitian {special}"
                );
            }
        }
    }
}

#[test]
fn hermitian_route_matches_general_on_secondary_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (e1, e2) in [(1i8, 1i8), (-1, 1)] {
        let pres = catalog::secondary_complex(e1, e2).unwrap();
        let h = &pres.hermitian;
        for t in [0.5, 1.0, 2.0] {
            for _ in 0..40 {
                let s = random_sigma_point(h, &mut rng);
                let e = random_tangent(h, &s, &mut rng);
                let f = random_tangent(h, &s, &mut rng);
                let general = pi_pair_general(h, &s, t, &e, &f).unwrap();
                let special = pi_pair_hermitian(h, &s, t, &e, &f).unwrap();
                assert!(
                    (general - special).abs() <= 1e-9,
                    "t={t}: general {general} vs hermitian {special}"
                );
            }
        }
    }
}

#[test]
fn hermitian_route_matches_general_on_hopf_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let entry = catalog::s3xs1().unwrap();
    let h = &entry.structures[0].hermitian;
    for t in [0.5, 1.0, 2.0] {
        for _ in 0..40 {
            let s = random_sigma_point(h, &mut rng);
            let e = random_tangent(h, &s, &mut rng);
            let f = random_tangent(h, &s, &mut rng);
            let general = pi_pair_general(h, &s, t, &e, &f).unwrap();
            let special = pi_pair_hermitian(h, &s, t, &e, &f).unwrap();
            assert!(
                (general - special).abs() <= 1e-9,
                "t={t}: general {general} vs hermitian {special}"
            );
        }
    }
}

#[test]
fn symplectic_route_matches_general() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (e1, e2, phi) in [
        (1i8, 1i8, std::f64::consts::FRAC_PI_6),
        (1, -1, std::f64::consts::FRAC_PI_4),
        (-1, 1, 0.3),
        (-1, -1, 1.2),
    ] {
        let pres = catalog::kodaira_symplectic(e1, e2, phi).unwrap();
        let h = &pres.hermitian;
        for t in [0.5, 1.0, 2.0] {
            for _ in 0..40 {
                let s = random_sigma_point(h, &mut rng);
                let e = random_tangent(h, &s, &mut rng);
                let f = random_tangent(h, &s, &mut rng);
                let general = pi_pair_general(h, &s, t, &e, &f).unwrap();
                let special = pi_pair_symplectic(h, &s, t, &e, &f).unwrap();
                assert!(
                    (general - special).abs() <= 1e-9,
                    "e1={e1} e2={e2} phi={phi} t={t}: general {general} vs symplectic {special}"
                );
            }
        }
    }
}

#[test]
fn pairing_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let pres = catalog::kodaira_hermitian(1).unwrap();
    let h = &pres.hermitian;
    for _ in 0..50 {
        let s = random_sigma_point(h, &mut rng);
        let e = random_tangent(h, &s, &mut rng);
        let f = random_tangent(h, &s, &mut rng);
        let a = pi_pair_general(h, &s, 1.0, &e, &f).unwrap();
        let b = pi_pair_general(h, &s, 1.0, &f, &e).unwrap();
        assert!((a - b).abs() <= 1e-11, "asymmetry {}", (a - b).abs());
    }
}

#[test]
fn kahler_hypersurface_is_totally_geodesic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let entry = catalog::flat_r4().unwrap();
    let h = &entry.structures[0].hermitian;
    for _ in 0..200 {
        let s = random_sigma_point(h, &mut rng);
        let e = random_tangent(h, &s, &mut rng);
        let f = random_tangent(h, &s, &mut rng);
        let v = pi_pair_general(h, &s, 1.0, &e, &f).unwrap();
        assert!(v.abs() <= 1e-11, "pairing {v}");
    }
}

#[test]
fn grad_rho_is_normal_to_all_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let pres = catalog::kodaira_hermitian(1).unwrap();
    let h = &pres.hermitian;
    for t in [0.5, 1.0, 2.0] {
        for _ in 0..20 {
            let s = random_sigma_point(h, &mut rng);
            let g = grad_rho(h, &s.tau, t);
            for mode in [FrameMode::GenericGramSchmidt, FrameMode::HermitianB] {
                let frame = sigma_tangent_frame(h, &s, t, mode).unwrap();
                for v in &frame.vectors {
                    assert!(h_t(t, v, &g).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn frame_modes_are_orthonormal_and_span_the_same_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let hermitian = catalog::kodaira_hermitian(-1).unwrap();
    let symplectic = catalog::kodaira_symplectic(1, 1, 0.9).unwrap();
    for t in [0.5, 1.0, 2.0] {
        for _ in 0..15 {
            let h = &hermitian.hermitian;
            let s = random_sigma_point(h, &mut rng);
            let generic = sigma_tangent_frame(h, &s, t, FrameMode::GenericGramSchmidt).unwrap();
            let special = sigma_tangent_frame(h, &s, t, FrameMode::HermitianB).unwrap();
            assert!(generic.orthonormality_residual(t) <= 1e-10);
            assert!(special.orthonormality_residual(t) <= 1e-10);
            assert!(generic.projector_difference(&special, t) <= 1e-9);
            assert!(frame_tangency_residual(h, &s, &generic) <= 1e-10);
            assert!(frame_tangency_residual(h, &s, &special) <= 1e-10);

            let h = &symplectic.hermitian;
            let s = random_sigma_point(h, &mut rng);
            let generic = sigma_tangent_frame(h, &s, t, FrameMode::GenericGramSchmidt).unwrap();
            let special = sigma_tangent_frame(h, &s, t, FrameMode::SymplecticN).unwrap();
            assert!(generic.orthonormality_residual(t) <= 1e-10);
            assert!(special.orthonormality_residual(t) <= 1e-10);
            assert!(generic.projector_difference(&special, t) <= 1e-9);
        }
    }
}

#[test]
fn frame_mode_errors_out_of_class() {
    let symplectic = catalog::kodaira_symplectic(1, 1, 0.4).unwrap();
    let s = fiber_point(&symplectic.hermitian, [0.0; 4], 0.3).unwrap();
    assert!(sigma_tangent_frame(&symplectic.hermitian, &s, 1.0, FrameMode::HermitianB).is_err());
    let hermitian = catalog::kodaira_hermitian(1).unwrap();
    let s = fiber_point(&hermitian.hermitian, [0.0; 4], 0.3).unwrap();
    assert!(sigma_tangent_frame(&hermitian.hermitian, &s, 1.0, FrameMode::SymplecticN).is_err());
}

#[test]
fn trace_direct_matches_closed_form_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let cases: Vec<AlmostHermitian> = vec![
        catalog::kodaira_hermitian(1).unwrap().hermitian,
        catalog::kodaira_hermitian(-1).unwrap().hermitian,
        catalog::kodaira_symplectic(1, -1, 0.8).unwrap().hermitian,
        catalog::s3xs1().unwrap().structures[0].hermitian.clone(),
        catalog::secondary_complex(1, 1).unwrap().hermitian,
        catalog::flat_r4().unwrap().structures[0].hermitian.clone(),
    ];
    for h in &cases {
        for t in [0.5, 1.0, 2.0] {
            for _ in 0..15 {
                let s = random_sigma_point(h, &mut rng);
                let direct = trace_pi(h, &s, t, TraceRoute::Direct).unwrap();
                let closed = trace_pi(h, &s, t, TraceRoute::ClosedForm).unwrap();
                assert!(
                    (direct - closed).abs() <= 1e-8,
                    "{}: direct {direct} vs closed {closed} at t={t}",
                    h.name()
                );
            }
        }
    }
}

#[test]
fn trace_is_fiber_invariant_on_homogeneous_structures() {
    let pres = catalog::kodaira_symplectic(-1, -1, 0.6).unwrap();
    let h = &pres.hermitian;
    let mut values = Vec::new();
    for k in 0..16 {
        let psi = std::f64::consts::TAU * k as f64 / 16.0;
        let s = fiber_point(h, [0.0; 4], psi).unwrap();
        values.push(trace_pi(h, &s, 1.0, TraceRoute::Direct).unwrap());
    }
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 1e-9, "trace varies along the fibre: {spread}");
}

#[test]
fn hermitian_substitution_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for eps in [1i8, -1] {
        let pres = catalog::kodaira_hermitian(eps).unwrap();
        let h = &pres.hermitian;
        for _ in 0..20 {
            let s = random_sigma_point(h, &mut rng);
            assert!(sigma::hermitian_substitution_residual(h, &s) <= 1e-10);
            assert!(sigma::hermitian_second_substitution_residual(h, &s) <= 1e-9);
        }
    }
}

#[test]
fn rho_values_are_linear_on_the_fiber() {
    let pres = catalog::kodaira_hermitian(1).unwrap();
    let h = &pres.hermitian;
    let p = [0.0; 4];
    let alpha = h.alpha_at(p);
    let m = h.manifold();
    let tau = twistor_geom::twistor::TwistorPoint::new(m, p, alpha).unwrap();
    assert!((sigma::rho(h, &tau) - 1.0).abs() < 1e-14);
    let (t2, _t3) = twistor_geom::twistor::fiber_basis(m, &alpha);
    let tau2 = twistor_geom::twistor::TwistorPoint::new(m, p, t2).unwrap();
    assert!(sigma::rho(h, &tau2).abs() < 1e-14);
    for psi in [0.3f64, 1.2, 2.8] {
        let sigma_biv = alpha.scale(psi.cos()).add(&t2.scale(psi.sin()));
        let tau3 = twistor_geom::twistor::TwistorPoint::new(m, p, sigma_biv).unwrap();
        assert!((sigma::rho(h, &tau3) - psi.cos()).abs() < 1e-14);
    }
}

#[test]
fn kahler_frame_is_horizontal_lifts_plus_fiber_direction() {
    let entry = catalog::flat_r4().unwrap();
    let h = &entry.structures[0].hermitian;
    let s = fiber_point(h, [0.0; 4], 0.0).unwrap();
    let frame = sigma_tangent_frame(h, &s, 2.0, FrameMode::HermitianB).unwrap();
    // B = 0 branch: four plain horizontal lifts and ξ/√t
    for v in &frame.vectors[..4] {
        assert!(v.vertical.norm() < 1e-14);
    }
    assert!(frame.vectors[4].horizontal.norm() < 1e-14);
    assert!(frame.orthonormality_residual(2.0) < 1e-12);
}

#[test]
fn kahler_grad_rho_is_purely_vertical_alpha_over_t() {
    let entry = catalog::flat_r4().unwrap();
    let h = &entry.structures[0].hermitian;
    for t in [0.5, 1.0, 2.0] {
        let s = fiber_point(h, [0.0; 4], 1.1).unwrap();
        let g = grad_rho(h, &s.tau, t);
        assert!(g.horizontal.norm() < 1e-14);
        let alpha = h.alpha_at([0.0; 4]);
        assert!(g.vertical.sub(&alpha.scale(1.0 / t)).norm() < 1e-14);
    }
}

#[test]
fn scaled_lee_form_vanishes_on_parallel_lee_structures() {
    // dθ = 0 and constant ‖θ‖ kill both summands
    let cases = vec![
        catalog::kodaira_hermitian(1).unwrap().hermitian,
        catalog::kodaira_hermitian(-1).unwrap().hermitian,
        catalog::s3xs1().unwrap().structures[0].hermitian.clone(),
        catalog::flat_r4().unwrap().structures[0].hermitian.clone(),
    ];
    for h in &cases {
        for t in [0.5, 1.0, 2.0] {
            let w = h.scaled_lee_two_form([0.0; 4], t);
            let worst = w
                .iter()
                .flatten()
                .map(|v| v.abs())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-10, "{}: {worst}", h.name());
        }
    }
}

#[test]
fn expected_minimality_verdicts_hold_for_every_entry() {
    for (id, f) in catalog::registry() {
        let entry = f().unwrap();
        for pres in &entry.structures {
            let rep = sigma::is_minimal(&pres.hermitian, &[0.5, 1.0, 2.0], 2, 8).unwrap();
            assert_eq!(
                rep.numeric_minimal, entry.expected_minimal,
                "{id}/{}: numeric verdict",
                pres.name
            );
            if let Some(analytic) = rep.analytic_minimal {
                assert_eq!(analytic, entry.expected_minimal, "{id}/{}", pres.name);
            }
            if let Some(residual) = rep.route_residual {
                assert!(residual <= 1e-8, "{id}/{}: route residual {residual}", pres.name);
            }
        }
    }
}

#[test]
fn type_11_examples() {
    let pres = catalog::kodaira_hermitian(1).unwrap();
    let h = &pres.hermitian;
    let p = [0.0; 4];
    // the fundamental form itself is (1,1)
    let omega = h.omega_at(p);
    assert!(h.is_type_11(p, &omega, 1e-12));
    // dθ vanishes for the parallel Lee form, hence is (1,1)
    let dth = h.d_theta(p);
    assert!(h.is_type_11(p, &dth, 1e-12));
    // the 2-form dual to the second triple member is anti-invariant
    let triple = h.manifold().sd_triple();
    let mut beta = [[0.0; 4]; 4];
    for (idx, &(i, j)) in twistor_geom::algebra::BASIS_PAIRS.iter().enumerate() {
        beta[i][j] = triple.s2.0[idx];
        beta[j][i] = -triple.s2.0[idx];
    }
    assert!(!h.is_type_11(p, &beta, 1e-9));
}

#[test]
fn closed_form_trace_rejects_generic_structures() {
    use std::sync::Arc;
    use twistor_geom::algebra::k_endo;
    // a compatible structure that is neither integrable nor symplectic
    let m = Arc::new(catalog::primary_manifold(1).unwrap());
    let triple = m.sd_triple();
    let sigma = triple
        .s1
        .scale(0.6)
        .add(&triple.s2.scale(0.48))
        .add(&triple.s3.scale(0.64));
    let j = k_endo(&sigma);
    let h = twistor_geom::AlmostHermitian::new("generic", m, j.0).unwrap();
    assert_eq!(h.class(), twistor_geom::StructureClass::Generic);
    let s = fiber_point(&h, [0.0; 4], 0.4).unwrap();
    assert!(trace_pi(&h, &s, 1.0, TraceRoute::Direct).is_ok());
    assert!(trace_pi(&h, &s, 1.0, TraceRoute::ClosedForm).is_err());
    // the generic numeric path still produces a report, without a verdict
    let rep = sigma::is_minimal(&h, &[1.0], 2, 4).unwrap();
    assert!(rep.analytic_minimal.is_none());
}

//! Statistical validation of the sphere-times-circle correspondence chain.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use twistor_geom::hopf::{
    complex_structure_residual, contact_to_cp3, cp3_to_contact, cp3_to_j6, f_map, j6_to_cp3,
    kappa, orientation_compatible, sigma_image_predicate, twistor_image_residual, xi_frame,
    ContactElement, ProjectivePoint,
};
use num_complex::Complex64;

fn random_sphere_point(rng: &mut impl Rng) -> [f64; 4] {
    loop {
        let p = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.1 {
            return p.map(|v| v / n);
        }
    }
}

fn random_contact_element(rng: &mut impl Rng) -> ContactElement {
    let p = random_sphere_point(rng);
    let frame = xi_frame(p);
    let c = [
        rng.gen_range(-1.0..1.0f64),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let mut xi = [0.0; 4];
    for i in 0..3 {
        for a in 0..4 {
            xi[a] += c[i] / n * frame[i][a];
        }
    }
    ContactElement::new(p, xi).unwrap()
}

#[test]
fn contact_kappa_images_are_complex_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let ce = random_contact_element(&mut rng);
        assert!(ce.contact_identity_residual() <= 1e-12);
        let j = kappa(&ce);
        assert!(complex_structure_residual(&j) <= 1e-12);
        assert!(orientation_compatible(&j));
    }
}

#[test]
fn f_map_structures_and_g_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..200 {
        let p = random_sphere_point(&mut rng);
        let frame = xi_frame(p);
        let mk = |rng: &mut ChaCha8Rng| {
            let c = [
                rng.gen_range(-1.0..1.0f64),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            let mut xi = [0.0; 4];
            for i in 0..3 {
                for a in 0..4 {
                    xi[a] += c[i] / n * frame[i][a];
                }
            }
            (xi, [c[0] / n, c[1] / n, c[2] / n])
        };
        let (xi1, _) = mk(&mut rng);
        let (xi2, _) = mk(&mut rng);
        let i1 = f_map(&ContactElement::new(p, xi1).unwrap());
        let i2 = f_map(&ContactElement::new(p, xi2).unwrap());
        let m1 = nalgebra::Matrix4::from_fn(|r, c| i1[r][c]);
        let m2 = nalgebra::Matrix4::from_fn(|r, c| i2[r][c]);
        // I² = −Id
        let sq = m1 * m1;
        assert!((sq + nalgebra::Matrix4::identity()).norm() <= 1e-12);
        // G(J′, J″) = ⟨ξ′, ξ″⟩
        let g = -0.25 * (m1 * m2).trace();
        let dot: f64 = (0..4).map(|a| xi1[a] * xi2[a]).sum();
        assert!((g - dot).abs() <= 1e-10);
    }
}

#[test]
fn round_trips_through_projective_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..1000 {
        let p = random_sphere_point(&mut rng);
        let ang = rng.gen_range(0.0..std::f64::consts::TAU);
        let (l2, l3) = (ang.sin(), ang.cos());
        let z = contact_to_cp3(p, l2, l3).unwrap();
        // the construction normalizes so that 4|z3|² = |z|² = 1
        assert!((z.norm_sq() - 1.0).abs() <= 1e-12);
        assert!(sigma_image_predicate(&z));
        let (p2, l2b, l3b) = cp3_to_contact(&z).unwrap();
        let mut worst = (l2b - l2).abs().max((l3b - l3).abs());
        for a in 0..4 {
            worst = worst.max((p2[a] - p[a]).abs());
        }
        assert!(worst <= 1e-10, "round trip residual {worst:.3e}");
        // and the other direction: rebuild z from (p2, λ)
        let z2 = contact_to_cp3(p2, l2b, l3b).unwrap();
        assert!(z.line_distance(&z2) <= 1e-10);
    }
}

#[test]
fn commuting_triangle_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..300 {
        let p = random_sphere_point(&mut rng);
        let ang = rng.gen_range(0.0..std::f64::consts::TAU);
        let (l2, l3) = (ang.sin(), ang.cos());
        let frame = xi_frame(p);
        let mut xi = [0.0; 4];
        for a in 0..4 {
            xi[a] = l2 * frame[1][a] + l3 * frame[2][a];
        }
        let jk = kappa(&ContactElement::new(p, xi).unwrap());
        let jz = cp3_to_j6(&contact_to_cp3(p, l2, l3).unwrap()).unwrap();
        assert!((jk - jz).norm() <= 1e-10);
    }
}

#[test]
fn twistor_image_characterization_for_general_xi() {
    // contact elements with unconstrained ξ; the image in projective space
    // satisfies |z1|² + |z2|² = |z3|² + |z4|²
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..300 {
        let ce = random_contact_element(&mut rng);
        let j = kappa(&ce);
        let z = j6_to_cp3(&j).unwrap();
        assert!(twistor_image_residual(&z) <= 1e-9);
        // consistency: the identification maps back to the same structure
        let j2 = cp3_to_j6(&z).unwrap();
        assert!((j - j2).norm() <= 1e-9);
    }
}

#[test]
fn hypersurface_points_are_exactly_the_xi1_orthogonal_elements() {
    // ⟨σ, J_std⟩-orthogonality corresponds to ξ ⊥ ξ1; the predicate holds
    // exactly on κ-images of such elements and fails otherwise
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..100 {
        let ce = random_contact_element(&mut rng);
        let frame = xi_frame(ce.p);
        let dot: f64 = (0..4).map(|a| ce.xi[a] * frame[0][a]).sum();
        let z = j6_to_cp3(&kappa(&ce)).unwrap();
        if dot.abs() <= 1e-12 {
            assert!(sigma_image_predicate(&z));
        }
        if dot.abs() > 1e-3 {
            assert!(!sigma_image_predicate(&z), "ξ·ξ1 = {dot}");
        }
    }
}

#[test]
fn orthogonality_of_structures_reflects_xi_orthogonality() {
    let mut rng = ChaCha8Rng::seed_from_u64(131);
    for _ in 0..100 {
        let p = random_sphere_point(&mut rng);
        let frame = xi_frame(p);
        // two frame-aligned ξ's: orthogonal iff distinct members
        for i in 0..3 {
            for j in 0..3 {
                let i1 = f_map(&ContactElement::new(p, frame[i]).unwrap());
                let i2 = f_map(&ContactElement::new(p, frame[j]).unwrap());
                let m1 = nalgebra::Matrix4::from_fn(|r, c| i1[r][c]);
                let m2 = nalgebra::Matrix4::from_fn(|r, c| i2[r][c]);
                let g = -0.25 * (m1 * m2).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn predicate_near_miss_corpus() {
    let cases = [
        // 4|z3|² = 0 ≠ |z|²
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
        // 4|z3|² = 4, |z|² = 2
        [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
        // |z3| = |z4| but wrong proportion vs |z|
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.6, 0.0),
        ],
        // correct z3 but z4 off by 1e-3 in modulus
        [
            Complex64::new(0.35355339, 0.35355339),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.501, 0.0),
        ],
    ];
    for z in cases {
        let zp = ProjectivePoint(z);
        assert!(!sigma_image_predicate(&zp));
        assert!(cp3_to_contact(&zp).is_err());
    }
}

//! The twistor space as the unit sphere bundle of self-dual 2-vectors.
//!
//! Points are pairs (base point, unit self-dual 2-vector σ); tangents split
//! into a horizontal part (a base tangent vector) and a vertical part (a
//! self-dual 2-vector orthogonal to σ). The metric family is
//! `h_t(X^h + V, Y^h + W) = ⟨X,Y⟩ + t⟨V,W⟩`, and the Levi-Civita data is
//!
//! * `D_{X^h} Y^h = (∇_X Y)^h + ½ R(X∧Y)σ`,
//! * `D_V X^h = −(t/2) (R(σ×V) X)^h`,
//!
//! with totally geodesic fibres. A coordinate-chart finite-difference oracle
//! for these formulas lives in [`crate::chart`].

use crate::algebra::{cross, Bivector, Vector4};
use crate::error::{GeomError, Result};
use crate::manifold::{Chart4, FrameVectorField, FramedManifold};

/// Unit self-dual 2-vector over a base point.
#[derive(Debug, Clone, Copy)]
pub struct TwistorPoint {
    pub base: Chart4,
    pub sigma: Bivector<f64>,
}

impl TwistorPoint {
    pub fn new(m: &FramedManifold, base: Chart4, sigma: Bivector<f64>) -> Result<Self> {
        let asd = sigma.anti_self_dual_part(m.orientation()).norm();
        if asd > 1e-10 {
            return Err(GeomError::NotSelfDual { residual: asd });
        }
        if (sigma.norm() - 1.0).abs() > 1e-10 {
            return Err(GeomError::InvalidStructure(format!(
                "twistor fibre point must be unit, norm = {}",
                sigma.norm()
            )));
        }
        Ok(TwistorPoint { base, sigma })
    }
}

/// Tangent vector of the twistor space at an implicit point.
#[derive(Debug, Clone, Copy)]
pub struct TwistorTangent {
    pub horizontal: Vector4<f64>,
    pub vertical: Bivector<f64>,
}

impl TwistorTangent {
    pub fn horizontal_lift(x: Vector4<f64>) -> Self {
        TwistorTangent {
            horizontal: x,
            vertical: Bivector::zero(),
        }
    }

    pub fn vertical(v: Bivector<f64>) -> Self {
        TwistorTangent {
            horizontal: Vector4::zero(),
            vertical: v,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        TwistorTangent {
            horizontal: self.horizontal.add(&other.horizontal),
            vertical: self.vertical.add(&other.vertical),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TwistorTangent {
            horizontal: self.horizontal.sub(&other.horizontal),
            vertical: self.vertical.sub(&other.vertical),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        TwistorTangent {
            horizontal: self.horizontal.scale(c),
            vertical: self.vertical.scale(c),
        }
    }

    /// Residual of the verticality constraint `⟨V, σ⟩ = 0`.
    pub fn vertical_residual(&self, at: &TwistorPoint) -> f64 {
        self.vertical.inner(&at.sigma).abs()
    }
}

/// The canonical variation `h_t`.
pub fn h_t(t: f64, u: &TwistorTangent, v: &TwistorTangent) -> f64 {
    u.horizontal.dot(&v.horizontal) + t * u.vertical.inner(&v.vertical)
}

pub fn h_t_norm(t: f64, u: &TwistorTangent) -> f64 {
    h_t(t, u, u).sqrt()
}

/// `[X^h, Y^h]_τ = [X,Y]^h + R(X∧Y)τ` (vertical part projected off σ is a
/// no-op analytically; asserted by tests).
pub fn bracket_h_h(
    m: &FramedManifold,
    x: &FrameVectorField,
    y: &FrameVectorField,
    tau: &TwistorPoint,
) -> TwistorTangent {
    let p = tau.base;
    let hor = m.bracket(p, x, y);
    let vert = m.curvature_derivation(
        p,
        &crate::algebra::wedge(&x.at(p), &y.at(p)),
        &tau.sigma,
    );
    TwistorTangent {
        horizontal: hor,
        vertical: vert,
    }
}

/// `D_{X^h} Y^h = (∇_X Y)^h + ½ R(X∧Y)τ`.
pub fn d_hh(
    m: &FramedManifold,
    x: &FrameVectorField,
    y: &FrameVectorField,
    tau: &TwistorPoint,
) -> TwistorTangent {
    let p = tau.base;
    let hor = m.nabla_field(p, x, y);
    let vert = m
        .curvature_derivation(p, &crate::algebra::wedge(&x.at(p), &y.at(p)), &tau.sigma)
        .scale(0.5);
    TwistorTangent {
        horizontal: hor,
        vertical: vert,
    }
}

/// `D_V X^h = 𝓗(D_{X^h} V) = −(t/2) (R(τ×V) X)^h` for vertical `V ⊥ τ`.
pub fn d_vh(
    m: &FramedManifold,
    t: f64,
    v: &Bivector<f64>,
    x: &FrameVectorField,
    tau: &TwistorPoint,
) -> TwistorTangent {
    let p = tau.base;
    let txv = cross(&tau.sigma, v, m.orientation());
    let hor = m
        .curvature_endo_biv(p, &txv)
        .apply(&x.at(p))
        .scale(-0.5 * t);
    TwistorTangent::horizontal_lift(hor)
}

/// Orthonormal tangent basis of the fibre circle orthogonal to a unit
/// self-dual `sigma`; deterministic seed from the oriented triple.
pub fn fiber_basis(m: &FramedManifold, sigma: &Bivector<f64>) -> (Bivector<f64>, Bivector<f64>) {
    let triple = m.sd_triple();
    let mut best = triple.s1;
    let mut best_norm = -1.0;
    for cand in triple.members() {
        let residual = cand.sub(&sigma.scale(cand.inner(sigma)));
        let n = residual.norm();
        if n > best_norm {
            best_norm = n;
            best = residual;
        }
    }
    let v1 = best.normalized();
    let v2 = cross(sigma, &v1, m.orientation());
    (v1, v2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Orientation, SelfDualTriple};
    use crate::manifold::StructureConstants;
    use approx::assert_abs_diff_eq;

    fn flat() -> FramedManifold {
        FramedManifold::constant("flat", Orientation::Positive, StructureConstants::zero()).unwrap()
    }

    fn triple() -> SelfDualTriple<f64> {
        crate::algebra::oriented_sd_triple(Orientation::Positive)
    }

    #[test]
    fn h_t_gram_matrix() {
        let s = triple();
        let t = 0.7;
        for i in 0..4 {
            for j in 0..4 {
                let u = TwistorTangent::horizontal_lift(Vector4::basis(i));
                let v = TwistorTangent::horizontal_lift(Vector4::basis(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(h_t(t, &u, &v), want);
            }
        }
        let v = TwistorTangent::vertical(s.s2);
        assert_abs_diff_eq!(h_t(t, &v, &v), t);
        let u = TwistorTangent::horizontal_lift(Vector4::basis(0));
        assert_abs_diff_eq!(h_t(t, &u, &v), 0.0);
    }

    #[test]
    fn flat_space_brackets_and_derivatives_vanish() {
        let m = flat();
        let tau = TwistorPoint::new(&m, [0.0; 4], triple().s1).unwrap();
        let x = FrameVectorField::frame(0);
        let y = FrameVectorField::frame(1);
        let br = bracket_h_h(&m, &x, &y, &tau);
        assert_abs_diff_eq!(br.horizontal.norm(), 0.0);
        assert_abs_diff_eq!(br.vertical.norm(), 0.0);
        let d = d_hh(&m, &x, &y, &tau);
        assert_abs_diff_eq!(d.horizontal.norm(), 0.0);
        assert_abs_diff_eq!(d.vertical.norm(), 0.0);
        let dv = d_vh(&m, 1.0, &triple().s2, &x, &tau);
        assert_abs_diff_eq!(dv.horizontal.norm(), 0.0);
    }

    #[test]
    fn d_vh_scales_linearly_in_t() {
        let mut c = StructureConstants::zero();
        c.set_bracket(0, 1, [0.0, 0.0, 0.0, -2.0]);
        let m = FramedManifold::constant("kodaira", Orientation::Positive, c).unwrap();
        let tau = TwistorPoint::new(&m, [0.0; 4], triple().s2).unwrap();
        let x = FrameVectorField::frame(0);
        let a = d_vh(&m, 1.0, &triple().s3, &x, &tau);
        let b = d_vh(&m, 2.5, &triple().s3, &x, &tau);
        assert_abs_diff_eq!(b.horizontal.sub(&a.horizontal.scale(2.5)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fiber_basis_is_orthonormal_circle_frame() {
        let m = flat();
        let s = triple();
        let sigma = s.s2.scale(0.8).add(&s.s3.scale(0.6));
        let (v1, v2) = fiber_basis(&m, &sigma);
        assert_abs_diff_eq!(v1.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v2.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v1.inner(&v2), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v1.inner(&sigma), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v2.inner(&sigma), 0.0, epsilon = 1e-12);
    }
}

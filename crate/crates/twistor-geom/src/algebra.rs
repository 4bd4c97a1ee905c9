//! Pointwise exterior algebra of an oriented Euclidean 4-space.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * the metric on 2-vectors is `⟨v1∧v2, v3∧v4⟩ = ½ det[⟨vi,vj⟩]`, so a basis
//!   2-vector `Ei∧Ej` has squared norm 1/2 and the triple
//!   `s1 = E1∧E2 + E3∧E4`, `s2 = E1∧E3 + E4∧E2`, `s3 = E1∧E4 + E2∧E3`
//!   is orthonormal in the self-dual space;
//! * `K_a` is the skew endomorphism with `⟨K_a X, Y⟩ = 2⟨a, X∧Y⟩`; for a unit
//!   self-dual `σ` it is an orthogonal complex structure, and
//!   `K_a ∘ K_b = −⟨a,b⟩ Id + K_{a×b}` on the self-dual space;
//! * the inner product on skew endomorphisms is normalized so that `a ↦ K_a`
//!   is an isometry: `G(P,Q) = −¼ tr(PQ)`.
//!
//! Bivector components are stored in the lexicographic basis
//! `(E1∧E2, E1∧E3, E1∧E4, E2∧E3, E2∧E4, E3∧E4)`; the ½-det convention lives
//! in the inner product, not in the storage.

use crate::error::{GeomError, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Index pairs of the lexicographic bivector basis.
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Orientation of the active frame relative to the manifold orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign<S: Scalar>(self) -> S {
        match self {
            Orientation::Positive => S::one(),
            Orientation::Negative => -S::one(),
        }
    }
}

/// Tangent vector in the active orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vector4<S = f64>(pub [S; 4]);

/// 2-vector in the lexicographic `Ei∧Ej` basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bivector<S = f64>(pub [S; 6]);

/// Skew-symmetric endomorphism of the tangent space, columns indexed by frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewEndo4<S = f64>(pub [[S; 4]; 4]);

/// Oriented orthonormal basis of the (anti-)self-dual space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfDualTriple<S = f64> {
    pub s1: Bivector<S>,
    pub s2: Bivector<S>,
    pub s3: Bivector<S>,
}

impl<S: Scalar> Vector4<S> {
    pub fn zero() -> Self {
        Vector4([S::zero(); 4])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [S::zero(); 4];
        v[i] = S::one();
        Vector4(v)
    }

    pub fn dot(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for i in 0..4 {
            acc = acc + self.0[i] * other.0[i];
        }
        acc
    }

    pub fn scale(&self, c: S) -> Self {
        Vector4(self.0.map(|x| x * c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut v = [S::zero(); 4];
        for i in 0..4 {
            v[i] = self.0[i] + other.0[i];
        }
        Vector4(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut v = [S::zero(); 4];
        for i in 0..4 {
            v[i] = self.0[i] - other.0[i];
        }
        Vector4(v)
    }
}

impl Vector4<f64> {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }
}

impl<S: Scalar> Bivector<S> {
    pub fn zero() -> Self {
        Bivector([S::zero(); 6])
    }

    pub fn basis(idx: usize) -> Self {
        let mut b = [S::zero(); 6];
        b[idx] = S::one();
        Bivector(b)
    }

    /// Component `a_{ij}` with the antisymmetric convention for `i > j`.
    pub fn component(&self, i: usize, j: usize) -> S {
        if i == j {
            return S::zero();
        }
        for (idx, &(k, l)) in BASIS_PAIRS.iter().enumerate() {
            if (k, l) == (i, j) {
                return self.0[idx];
            }
            if (k, l) == (j, i) {
                return -self.0[idx];
            }
        }
        unreachable!()
    }

    /// ½-determinant inner product.
    pub fn inner(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for i in 0..6 {
            acc = acc + self.0[i] * other.0[i];
        }
        acc * S::half()
    }

    pub fn scale(&self, c: S) -> Self {
        Bivector(self.0.map(|x| x * c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut b = [S::zero(); 6];
        for i in 0..6 {
            b[i] = self.0[i] + other.0[i];
        }
        Bivector(b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut b = [S::zero(); 6];
        for i in 0..6 {
            b[i] = self.0[i] - other.0[i];
        }
        Bivector(b)
    }

    /// Hodge star for the given manifold orientation.
    pub fn star(&self, orientation: Orientation) -> Self {
        let a = &self.0;
        let std = Bivector([a[5], -a[4], a[3], a[2], -a[1], a[0]]);
        std.scale(orientation.sign::<S>())
    }

    pub fn self_dual_part(&self, orientation: Orientation) -> Self {
        self.add(&self.star(orientation)).scale(S::half())
    }

    pub fn anti_self_dual_part(&self, orientation: Orientation) -> Self {
        self.sub(&self.star(orientation)).scale(S::half())
    }
}

impl Bivector<f64> {
    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }
}

impl<S: Scalar> SkewEndo4<S> {
    pub fn zero() -> Self {
        SkewEndo4([[S::zero(); 4]; 4])
    }

    /// Entry `M[l][k] = ⟨output of column k, E_l⟩`.
    pub fn apply(&self, v: &Vector4<S>) -> Vector4<S> {
        let mut out = [S::zero(); 4];
        for l in 0..4 {
            for k in 0..4 {
                out[l] = out[l] + self.0[l][k] * v.0[k];
            }
        }
        Vector4(out)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[S::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    m[i][j] = m[i][j] + self.0[i][k] * other.0[k][j];
                }
            }
        }
        SkewEndo4(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = [[S::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.0[i][j] + other.0[i][j];
            }
        }
        SkewEndo4(m)
    }

    pub fn scale(&self, c: S) -> Self {
        SkewEndo4(self.0.map(|row| row.map(|x| x * c)))
    }

    pub fn trace(&self) -> S {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    /// Extension to 2-vectors as a derivation: `K·(x∧y) = Kx∧y + x∧Ky`.
    pub fn derivation_on(&self, b: &Bivector<S>) -> Bivector<S> {
        let mut out = Bivector::zero();
        for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            if b.0[idx].is_zero() {
                continue;
            }
            let ei = Vector4::basis(i);
            let ej = Vector4::basis(j);
            let term = wedge(&self.apply(&ei), &ej).add(&wedge(&ei, &self.apply(&ej)));
            out = out.add(&term.scale(b.0[idx]));
        }
        out
    }

    pub fn max_abs_f64(&self) -> f64
    where
        S: Scalar,
    {
        self.0
            .iter()
            .flatten()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// Wedge product of tangent vectors.
pub fn wedge<S: Scalar>(x: &Vector4<S>, y: &Vector4<S>) -> Bivector<S> {
    let mut b = [S::zero(); 6];
    for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        b[idx] = x.0[i] * y.0[j] - x.0[j] * y.0[i];
    }
    Bivector(b)
}

/// The oriented orthonormal basis of the plus space of the star operator.
///
/// For a negatively oriented frame the plus space is spanned by the minus
/// combinations; the sign twist on the first member keeps the triple
/// positively oriented, matching the s-basis computed in any frame that is
/// positively oriented for the same manifold orientation.
pub fn oriented_sd_triple<S: Scalar>(orientation: Orientation) -> SelfDualTriple<S> {
    match orientation {
        Orientation::Positive => s_basis(Orientation::Positive),
        Orientation::Negative => {
            let m = s_basis(Orientation::Negative);
            SelfDualTriple {
                s1: m.s1.scale(-S::one()),
                s2: m.s2,
                s3: m.s3,
            }
        }
    }
}

/// The `s` basis for the chosen eigenvalue sign of the star operator:
/// `s1 = E1∧E2 ± E3∧E4`, `s2 = E1∧E3 ± E4∧E2`, `s3 = E1∧E4 ± E2∧E3`.
pub fn s_basis<S: Scalar>(sign: Orientation) -> SelfDualTriple<S> {
    let s: S = sign.sign();
    SelfDualTriple {
        s1: Bivector([S::one(), S::zero(), S::zero(), S::zero(), S::zero(), s]),
        s2: Bivector([S::zero(), S::one(), S::zero(), S::zero(), -s, S::zero()]),
        s3: Bivector([S::zero(), S::zero(), S::one(), s, S::zero(), S::zero()]),
    }
}

impl<S: Scalar> SelfDualTriple<S> {
    pub fn members(&self) -> [&Bivector<S>; 3] {
        [&self.s1, &self.s2, &self.s3]
    }

    /// Coordinates of a self-dual 2-vector in this orthonormal triple.
    pub fn coords(&self, a: &Bivector<S>) -> [S; 3] {
        [a.inner(&self.s1), a.inner(&self.s2), a.inner(&self.s3)]
    }

    pub fn from_coords(&self, c: &[S; 3]) -> Bivector<S> {
        self.s1
            .scale(c[0])
            .add(&self.s2.scale(c[1]))
            .add(&self.s3.scale(c[2]))
    }
}

/// Skew endomorphism `K_a` with `⟨K_a X, Y⟩ = 2⟨a, X∧Y⟩`.
pub fn k_endo<S: Scalar>(a: &Bivector<S>) -> SkewEndo4<S> {
    let mut m = [[S::zero(); 4]; 4];
    for l in 0..4 {
        for k in 0..4 {
            m[l][k] = a.component(k, l);
        }
    }
    SkewEndo4(m)
}

/// Inner product on skew endomorphisms making `a ↦ K_a` an isometry.
pub fn g_skew<S: Scalar>(p: &SkewEndo4<S>, q: &SkewEndo4<S>) -> S {
    -S::from_ratio(1, 4) * p.compose(q).trace()
}

/// Cross product on the oriented 3-space of self-dual 2-vectors.
///
/// Inputs are assumed self-dual for the given orientation; see
/// [`cross_checked`] for the tolerance-validated entry point.
pub fn cross<S: Scalar>(a: &Bivector<S>, b: &Bivector<S>, orientation: Orientation) -> Bivector<S> {
    let t = oriented_sd_triple::<S>(orientation);
    let u = t.coords(a);
    let v = t.coords(b);
    let w = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    t.from_coords(&w)
}

/// Relative tolerance for rejecting inputs with an anti-self-dual part.
pub const SELF_DUAL_TOL: f64 = 1e-10;

/// Cross product that rejects inputs which are not self-dual.
pub fn cross_checked(
    a: &Bivector<f64>,
    b: &Bivector<f64>,
    orientation: Orientation,
) -> Result<Bivector<f64>> {
    for x in [a, b] {
        let bad = x.anti_self_dual_part(orientation).norm();
        let scale = x.norm().max(1.0);
        if bad > SELF_DUAL_TOL * scale {
            return Err(GeomError::NotSelfDual {
                residual: bad / scale,
            });
        }
    }
    Ok(cross(a, b, orientation))
}

//! The correspondence chain for the product of the 3-sphere and a circle:
//! contact twistor space of the sphere, product complex structures, the
//! embedding into orthogonal complex structures of 6-space, and the explicit
//! projective-space identification with its hypersurface image.
//!
//! Complex 6-space is spanned by `A_k = (a_{2k−1} − i a_{2k})/√2`; the
//! projective identification is transcribed verbatim from its three defining
//! lines and covered by matrix-level invariant tests rather than re-derived.
//!
//! The metric `G` on skew endomorphisms is normalized as `−¼ tr(PQ)`, the
//! scaling for which `G(J′,J″) = ⟨ξ′,ξ″⟩` holds on the fibres and the
//! half-pullback of `G` through the embedding equals the contact metric at
//! `t = ½`.

use crate::error::{GeomError, Result};
use nalgebra::SMatrix;
use num_complex::Complex64;

type Mat6 = SMatrix<f64, 6, 6>;

/// A linear contact structure on the tangent space of the unit 3-sphere:
/// the pair (φ, ξ) is determined by the unit tangent vector ξ through the
/// oriented cross product, `φ(v) = ξ × v`.
#[derive(Debug, Clone, Copy)]
pub struct ContactElement {
    pub p: [f64; 4],
    pub xi: [f64; 4],
}

impl ContactElement {
    pub fn new(p: [f64; 4], xi: [f64; 4]) -> Result<Self> {
        let np: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nxi: f64 = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = (0..4).map(|a| p[a] * xi[a]).sum();
        if (np - 1.0).abs() > 1e-10 || (nxi - 1.0).abs() > 1e-10 || dot.abs() > 1e-10 {
            return Err(GeomError::InvalidStructure(format!(
                "contact element needs unit p, unit tangent xi: |p|={np}, |xi|={nxi}, ⟨p,xi⟩={dot}"
            )));
        }
        Ok(ContactElement { p, xi })
    }

    /// `φ(v) = ξ × v` in the tangent space, oriented by the outward normal
    /// (the orientation for which the standard product structure below is
    /// the one induced by complex multiplication on the ambient plane pair).
    pub fn phi(&self, v: &[f64; 4]) -> [f64; 4] {
        cross_tangent(&self.p, &self.xi, v)
    }

    /// Residuals of `φ²v = −v + ⟨v,ξ⟩ξ` and the φ-metric identity.
    pub fn contact_identity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..4 {
            let mut v = [0.0; 4];
            v[a] = 1.0;
            // project v to the tangent space first
            let vp: f64 = (0..4).map(|i| v[i] * self.p[i]).sum();
            for i in 0..4 {
                v[i] -= vp * self.p[i];
            }
            let f2 = self.phi(&self.phi(&v));
            let vxi: f64 = (0..4).map(|i| v[i] * self.xi[i]).sum();
            for i in 0..4 {
                let want = -v[i] + vxi * self.xi[i];
                worst = worst.max((f2[i] - want).abs());
            }
        }
        worst
    }
}

/// Cross product of tangent vectors of the unit sphere at `p`, for the
/// orientation induced by the outward normal: `⟨u×v, z⟩ = det[p, u, v, z]`.
pub fn cross_tangent(p: &[f64; 4], u: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
    let mut w = [0.0; 4];
    for a in 0..4 {
        let mut e = [0.0; 4];
        e[a] = 1.0;
        w[a] = det4(p, u, v, &e);
    }
    w
}

fn det4(c0: &[f64; 4], c1: &[f64; 4], c2: &[f64; 4], c3: &[f64; 4]) -> f64 {
    let m = nalgebra::Matrix4::from_fn(|r, c| match c {
        0 => c0[r],
        1 => c1[r],
        2 => c2[r],
        _ => c3[r],
    });
    m.determinant()
}

/// The global sphere frame; the first member generates the standard
/// product complex structure.
pub fn xi_frame(p: [f64; 4]) -> [[f64; 4]; 3] {
    crate::catalog::sphere_frame(p)
}

/// Complex structure of the product tangent space `T_pS³ × T S¹` induced by
/// a contact element: `I = φ` on the image of φ, `Iξ = ∂/∂t`, `I∂/∂t = −ξ`.
/// Returned in the orthonormal basis `(ξ_1, ξ_2, ξ_3, ∂/∂t)`.
pub fn f_map(ce: &ContactElement) -> [[f64; 4]; 4] {
    let frame = xi_frame(ce.p);
    // ξ components in the frame
    let mut xi_c = [0.0; 3];
    for i in 0..3 {
        for a in 0..4 {
            xi_c[i] += ce.xi[a] * frame[i][a];
        }
    }
    let mut m = [[0.0; 4]; 4];
    // columns: images of (ξ1, ξ2, ξ3) and ∂t
    for col in 0..3 {
        let v = frame[col];
        // tangential split: v = ⟨v,ξ⟩ξ + v⊥, I v = ⟨v,ξ⟩ ∂t + φ(v⊥) = ⟨v,ξ⟩∂t + φ(v)
        let vxi = xi_c[col];
        let fv = ce.phi(&v);
        for row in 0..3 {
            let mut acc = 0.0;
            for a in 0..4 {
                acc += fv[a] * frame[row][a];
            }
            m[row][col] = acc;
        }
        m[3][col] = vxi;
    }
    // I ∂t = −ξ
    for row in 0..3 {
        m[row][3] = -xi_c[row];
    }
    m
}

/// Inner product on skew endomorphisms, normalized so the correspondence
/// with 2-vectors (and with fibre tangent vectors) is isometric.
pub fn g_skew_matrix<const N: usize>(p: &SMatrix<f64, N, N>, q: &SMatrix<f64, N, N>) -> f64 {
    -0.25 * (p * q).trace()
}

/// The embedding of a contact element as a complex structure on 6-space:
/// `J = φ` on the image of φ, `Jξ = −a5`, `Jp = −a6`, `Ja5 = ξ`, `Ja6 = p`.
pub fn kappa(ce: &ContactElement) -> Mat6 {
    let mut j = Mat6::zeros();
    // action on the ℝ⁴ block: for tangent v, J v = φ(v) − ⟨v,ξ⟩ a5; J p = −a6
    for col in 0..4 {
        let mut v = [0.0; 4];
        v[col] = 1.0;
        let vp: f64 = (0..4).map(|i| v[i] * ce.p[i]).sum();
        let mut vt = v;
        for i in 0..4 {
            vt[i] -= vp * ce.p[i];
        }
        let vxi: f64 = (0..4).map(|i| vt[i] * ce.xi[i]).sum();
        let fv = ce.phi(&vt);
        for row in 0..4 {
            j[(row, col)] = fv[row];
        }
        j[(4, col)] = -vxi;
        j[(5, col)] = -vp;
    }
    // J a5 = ξ, J a6 = p
    for row in 0..4 {
        j[(row, 4)] = ce.xi[row];
        j[(row, 5)] = ce.p[row];
    }
    j
}

/// Validation of a complex-structure matrix on 6-space.
pub fn complex_structure_residual(j: &Mat6) -> f64 {
    let j2 = j * j;
    let jt = j.transpose() * j;
    let mut worst = 0.0f64;
    for r in 0..6 {
        for c in 0..6 {
            let want2 = if r == c { -1.0 } else { 0.0 };
            let want_t = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((j2[(r, c)] - want2).abs());
            worst = worst.max((jt[(r, c)] - want_t).abs());
        }
    }
    worst
}

/// Orientation compatibility: a `J`-adapted basis is positively oriented.
pub fn orientation_compatible(j: &Mat6) -> bool {
    // Gram–Schmidt a J-adapted basis (v, Jv, w, Jw, x, Jx)
    let mut basis: Vec<nalgebra::SVector<f64, 6>> = Vec::new();
    for seed in 0..6 {
        if basis.len() == 6 {
            break;
        }
        let mut v = nalgebra::SVector::<f64, 6>::zeros();
        v[seed] = 1.0;
        for b in &basis {
            v -= b * v.dot(b);
        }
        if v.norm() < 1e-6 {
            continue;
        }
        v /= v.norm();
        let jv = j * v;
        basis.push(v);
        basis.push(jv);
    }
    let mut m = Mat6::zeros();
    for (c, b) in basis.iter().enumerate() {
        for r in 0..6 {
            m[(r, c)] = b[r];
        }
    }
    m.determinant() > 0.0
}

/// Homogeneous coordinates of a projective point.
#[derive(Debug, Clone, Copy)]
pub struct ProjectivePoint(pub [Complex64; 4]);

impl ProjectivePoint {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sq() == 0.0
    }

    /// Distance between the lines: phase-align the unit representatives and
    /// take the norm of the difference (zero iff the lines agree, and linear
    /// in the perturbation, unlike the angle formula).
    pub fn line_distance(&self, other: &ProjectivePoint) -> f64 {
        let nu = self.norm_sq().sqrt();
        let nv = other.norm_sq().sqrt();
        let mut inner = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            inner += (self.0[k] / nu) * (other.0[k] / nv).conj();
        }
        let phase = if inner.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            inner / inner.norm()
        };
        let mut acc = 0.0;
        for k in 0..4 {
            acc += (self.0[k] / nu - phase * other.0[k] / nv).norm_sqr();
        }
        acc.sqrt()
    }
}

/// Basis vectors `A_k = (a_{2k−1} − i a_{2k})/√2` of complexified 6-space.
fn basis_a(k: usize) -> [Complex64; 6] {
    let mut v = [Complex64::new(0.0, 0.0); 6];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    v[2 * k] = Complex64::new(s, 0.0);
    v[2 * k + 1] = Complex64::new(0.0, -s);
    v
}

fn conj6(v: &[Complex64; 6]) -> [Complex64; 6] {
    v.map(|z| z.conj())
}

/// The complex structure of 6-space attached to homogeneous coordinates
/// `[z_1, z_2, z_3, z_4]`; transcribed from the three defining lines of the
/// identification and scale-invariant by construction.
pub fn cp3_to_j6(z: &ProjectivePoint) -> Result<Mat6> {
    if z.is_zero() {
        return Err(GeomError::ZeroProjectivePoint);
    }
    let n = z.norm_sq();
    let z1 = z.0[0];
    let z2 = z.0[1];
    let z3 = z.0[2];
    let z4 = z.0[3];
    let (a1, a2, a3) = (basis_a(0), basis_a(1), basis_a(2));
    let (ab1, ab2, ab3) = (conj6(&a1), conj6(&a2), conj6(&a3));
    let i = Complex64::new(0.0, 1.0);
    let comb = |terms: &[(Complex64, [Complex64; 6])]| -> [Complex64; 6] {
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for (c, v) in terms {
            for idx in 0..6 {
                out[idx] += c * v[idx];
            }
        }
        // J A_k = (i/n) · (−i n J A_k)
        out.map(|w| w * i / n)
    };
    let d1 = Complex64::new(z1.norm_sqr() - z2.norm_sqr() - z3.norm_sqr() + z4.norm_sqr(), 0.0);
    let d2 = Complex64::new(-z1.norm_sqr() + z2.norm_sqr() - z3.norm_sqr() + z4.norm_sqr(), 0.0);
    let d3 = Complex64::new(-z1.norm_sqr() - z2.norm_sqr() + z3.norm_sqr() + z4.norm_sqr(), 0.0);
    let ja1 = comb(&[
        (d1, a1),
        (2.0 * z1.conj() * z2, a2),
        (2.0 * z1.conj() * z3, a3),
        (2.0 * z4.conj() * z3, ab2),
        (-2.0 * z4.conj() * z2, ab3),
    ]);
    let ja2 = comb(&[
        (2.0 * z2.conj() * z1, a1),
        (d2, a2),
        (2.0 * z2.conj() * z3, a3),
        (-2.0 * z4.conj() * z3, ab1),
        (2.0 * z4.conj() * z1, ab3),
    ]);
    let ja3 = comb(&[
        (2.0 * z3.conj() * z1, a1),
        (2.0 * z3.conj() * z2, a2),
        (d3, a3),
        (2.0 * z4.conj() * z2, ab1),
        (-2.0 * z4.conj() * z1, ab2),
    ]);
    // real matrix: J a_{2k−1} = √2 Re(J A_k), J a_{2k} = −√2 Im(J A_k)
    let mut j = Mat6::zeros();
    for (k, ja) in [ja1, ja2, ja3].iter().enumerate() {
        for row in 0..6 {
            j[(row, 2 * k)] = std::f64::consts::SQRT_2 * ja[row].re;
            j[(row, 2 * k + 1)] = -std::f64::consts::SQRT_2 * ja[row].im;
        }
    }
    Ok(j)
}

/// Inverse of the projective identification: recovers `[z]` from a complex
/// structure. The coefficients of the defining lines are linear in the
/// rank-one Hermitian matrix `z z*`, so the inverse is a linear read-off
/// followed by extracting the dominant column.
pub fn j6_to_cp3(j: &Mat6) -> Result<ProjectivePoint> {
    let res = complex_structure_residual(j);
    if res > 1e-8 {
        return Err(GeomError::InvalidStructure(format!(
            "not a complex structure: residual {res:.3e}"
        )));
    }
    // complexified action on the A-basis: u_k = −i J A_k
    let apply = |v: &[Complex64; 6]| -> [Complex64; 6] {
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for r in 0..6 {
            for c in 0..6 {
                out[r] += j[(r, c)] * v[c];
            }
        }
        out.map(|w| w * Complex64::new(0.0, -1.0))
    };
    let hermitian_inner = |u: &[Complex64; 6], v: &[Complex64; 6]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..6 {
            acc += u[idx] * v[idx].conj();
        }
        acc
    };
    let bases = [basis_a(0), basis_a(1), basis_a(2)];
    let conj_bases = [conj6(&bases[0]), conj6(&bases[1]), conj6(&bases[2])];
    let u: Vec<[Complex64; 6]> = bases.iter().map(apply).collect();
    // coefficients c[j][k] of A_j and d[j][k] of conj(A_j) in u_k
    let mut c = [[Complex64::new(0.0, 0.0); 3]; 3];
    let mut d = [[Complex64::new(0.0, 0.0); 3]; 3];
    for k in 0..3 {
        for jj in 0..3 {
            c[jj][k] = hermitian_inner(&u[k], &bases[jj]);
            d[jj][k] = hermitian_inner(&u[k], &conj_bases[jj]);
        }
    }
    // normalize |z|² = 1; read off the Hermitian matrix H = z z*
    let mut h = [[Complex64::new(0.0, 0.0); 4]; 4];
    let set = |h: &mut [[Complex64; 4]; 4], r: usize, cidx: usize, v: Complex64| {
        h[r][cidx] = v;
        h[cidx][r] = v.conj();
    };
    set(&mut h, 1, 0, c[1][0] / 2.0); // 2 z̄1 z2 = 2 H_{21}
    set(&mut h, 2, 0, c[2][0] / 2.0);
    set(&mut h, 2, 1, c[2][1] / 2.0);
    set(&mut h, 2, 3, d[1][0] / 2.0); // 2 z̄4 z3 = 2 H_{34}
    set(&mut h, 1, 3, -d[2][0] / 2.0); // −2 z̄4 z2
    set(&mut h, 0, 3, d[2][1] / 2.0); // 2 z̄4 z1
    // diagonals from the three real diagonal coefficients and |z|² = 1
    let d1 = c[0][0].re;
    let d2 = c[1][1].re;
    let d3 = c[2][2].re;
    // (H11, H22, H33, H44) solves the linear system with rows (±1 pattern)
    let h11 = (1.0 + d1 - d2 - d3) / 4.0;
    let h22 = (1.0 - d1 + d2 - d3) / 4.0;
    let h33 = (1.0 - d1 - d2 + d3) / 4.0;
    let h44 = (1.0 + d1 + d2 + d3) / 4.0;
    h[0][0] = Complex64::new(h11, 0.0);
    h[1][1] = Complex64::new(h22, 0.0);
    h[2][2] = Complex64::new(h33, 0.0);
    h[3][3] = Complex64::new(h44, 0.0);
    // H = z z*: take the column with the largest diagonal, normalize
    let mut best = 0;
    for r in 1..4 {
        if h[r][r].re > h[best][best].re {
            best = r;
        }
    }
    if h[best][best].re <= 0.0 {
        return Err(GeomError::InvalidStructure(
            "degenerate Hermitian read-off (structure outside the identified chart?)".into(),
        ));
    }
    let scale = h[best][best].re.sqrt();
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for r in 0..4 {
        // column `best` of H is z · z̄_best
        z[r] = h[r][best] / scale;
    }
    Ok(ProjectivePoint(z))
}

/// Explicit projective coordinates of a contact element whose ξ is
/// orthogonal to the first frame member: `ξ = λ2 ξ2(p) + λ3 ξ3(p)`.
pub fn contact_to_cp3(p: [f64; 4], lambda2: f64, lambda3: f64) -> Result<ProjectivePoint> {
    let np: f64 = p.iter().map(|v| v * v).sum::<f64>();
    if (np - 1.0).abs() > 1e-10 || (lambda2 * lambda2 + lambda3 * lambda3 - 1.0).abs() > 1e-10 {
        return Err(GeomError::InvalidStructure(
            "need p on the sphere and λ2² + λ3² = 1".into(),
        ));
    }
    let mu = Complex64::new(lambda3, -lambda2); // λ3 − iλ2
    let p12 = Complex64::new(p[0], p[1]);
    let p34 = Complex64::new(p[2], p[3]);
    let z1 = 0.5 * (-p12 - mu * p34.conj());
    let z2 = 0.5 * (mu * p12.conj() - p34);
    let z3 = Complex64::new(0.5, 0.0);
    let z4 = -0.5 * mu;
    Ok(ProjectivePoint([z1, z2, z3, z4]))
}

/// Inverse: recovers `(p, λ2, λ3)` from projective coordinates satisfying
/// the hypersurface predicate `4|z3|² = 4|z4|² = |z|²`.
pub fn cp3_to_contact(z: &ProjectivePoint) -> Result<([f64; 4], f64, f64)> {
    if !sigma_image_predicate(z) {
        return Err(GeomError::PredicateViolation(format!(
            "4|z3|² = {:.6e}, 4|z4|² = {:.6e}, |z|² = {:.6e}",
            4.0 * z.0[2].norm_sqr(),
            4.0 * z.0[3].norm_sqr(),
            z.norm_sq()
        )));
    }
    let n = z.norm_sq();
    let (z1, z2, z3, z4) = (z.0[0], z.0[1], z.0[2], z.0[3]);
    let p12 = -2.0 * (z1 * z3.conj() + z2.conj() * z4) / n;
    let p34 = 2.0 * (z1.conj() * z4 - z2 * z3.conj()) / n;
    let lam = -4.0 * z3 * z4.conj() / n; // λ3 + iλ2
    Ok(([p12.re, p12.im, p34.re, p34.im], lam.im, lam.re))
}

/// Relative tolerance of the hypersurface-image predicate.
pub const PREDICATE_REL_TOL: f64 = 1e-9;

/// Whether `[z]` lies in the image of the hypersurface:
/// `4|z3|² = 4|z4|² = |z|²` (scale-invariant).
pub fn sigma_image_predicate(z: &ProjectivePoint) -> bool {
    let n = z.norm_sq();
    if n == 0.0 {
        return false;
    }
    let a = 4.0 * z.0[2].norm_sqr() / n;
    let b = 4.0 * z.0[3].norm_sqr() / n;
    (a - 1.0).abs() <= PREDICATE_REL_TOL && (b - 1.0).abs() <= PREDICATE_REL_TOL
}

/// Scale-normalized residual of the twistor-image characterization
/// `|z1|² + |z2|² = |z3|² + |z4|²` satisfied by every embedded contact
/// element after the projective identification.
pub fn twistor_image_residual(z: &ProjectivePoint) -> f64 {
    let n = z.norm_sq();
    ((z.0[0].norm_sqr() + z.0[1].norm_sqr()) / n - (z.0[2].norm_sqr() + z.0[3].norm_sqr()) / n)
        .abs()
}

/// Vertical derivative of the embedding: `κ_*` of a fibre direction `ξ̇ ⊥ ξ`.
pub fn kappa_vertical_pushforward(ce: &ContactElement, xi_dot: &[f64; 4]) -> Mat6 {
    // differentiate κ along the fibre: ξ(s) = cos(s‖w‖)ξ + sin(s‖w‖)ŵ
    let h = 1e-6;
    let nw: f64 = xi_dot.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nw == 0.0 {
        return Mat6::zeros();
    }
    let unit = xi_dot.map(|v| v / nw);
    let shift = |s: f64| -> Mat6 {
        let mut xi = [0.0; 4];
        for a in 0..4 {
            xi[a] = (s * nw).cos() * ce.xi[a] + (s * nw).sin() * unit[a];
        }
        let ce2 = ContactElement { p: ce.p, xi };
        kappa(&ce2)
    };
    (shift(h) - shift(-h)) / (2.0 * h)
}

/// Contact metric value at `t`: horizontal part is the sphere metric, the
/// fibre part is `t` times the round metric of the unit-ξ sphere.
pub fn contact_metric_vertical(t: f64, xi_dot1: &[f64; 4], xi_dot2: &[f64; 4]) -> f64 {
    t * (0..4).map(|a| xi_dot1[a] * xi_dot2[a]).sum::<f64>()
}

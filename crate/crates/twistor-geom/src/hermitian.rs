//! Almost Hermitian structures over a framed four-manifold.
//!
//! The structure carries `J` (orthogonal, `J² = −Id`, compatible with the
//! manifold orientation), the dual 2-vector `α` with `⟨α, X∧Y⟩ = ½⟨JX, Y⟩`
//! and `K_α = J`, the fundamental form `Ω(X,Y) = ⟨JX,Y⟩`, the Nijenhuis
//! tensor, and the Lee form `θ = −δΩ∘J`.
//!
//! Sign convention for the codifferential: `δΩ(X) = −Σ_i (∇_{E_i}Ω)(E_i, X)`.
//! This is the choice that reproduces `θ(X) = −2ε⟨X, A_3⟩` on the primary
//! Kodaira family, which anchors every other sign in the Lee-form pipeline.

use crate::algebra::{cross, k_endo, wedge, Bivector, SkewEndo4, Vector4, BASIS_PAIRS};
use crate::error::{GeomError, Result};
use crate::manifold::{BivectorField, Chart4, FrameVectorField, FramedManifold};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Classification used by the minimality criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureClass {
    Kahler,
    /// Integrable, non-Kähler.
    Hermitian,
    /// Symplectic (`dΩ = 0`), non-Kähler.
    AlmostKahler,
    Generic,
}

impl StructureClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StructureClass::Kahler => "kahler",
            StructureClass::Hermitian => "hermitian",
            StructureClass::AlmostKahler => "almost_kahler",
            StructureClass::Generic => "generic",
        }
    }

    pub fn integrable(&self) -> bool {
        matches!(self, StructureClass::Kahler | StructureClass::Hermitian)
    }

    pub fn symplectic(&self) -> bool {
        matches!(self, StructureClass::Kahler | StructureClass::AlmostKahler)
    }
}

/// Tolerance deciding `N ≈ 0` / `dΩ ≈ 0` over the classification grid.
pub const CLASSIFICATION_TOL: f64 = 1e-9;
const CLASSIFICATION_SAMPLES: usize = 64;

#[derive(Clone)]
enum JField {
    Constant([[f64; 4]; 4]),
    Fn(Arc<dyn Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync>),
}

/// Lee form data at a point.
#[derive(Debug, Clone, Copy)]
pub struct LeeData {
    /// Frame components of `θ`.
    pub theta: [f64; 4],
    /// Dual vector `B` with `⟨B, X⟩ = θ(X)`.
    pub b: Vector4<f64>,
    pub norm_sq: f64,
}

#[derive(Clone)]
pub struct AlmostHermitian {
    manifold: Arc<FramedManifold>,
    j: JField,
    class: StructureClass,
    name: String,
}

impl AlmostHermitian {
    /// Builds and validates the structure; classifies it over a fixed grid.
    pub fn new(name: &str, manifold: Arc<FramedManifold>, j: [[f64; 4]; 4]) -> Result<Self> {
        Self::build(name, manifold, JField::Constant(j))
    }

    pub fn new_functional(
        name: &str,
        manifold: Arc<FramedManifold>,
        j: impl Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(name, manifold, JField::Fn(Arc::new(j)))
    }

    fn build(name: &str, manifold: Arc<FramedManifold>, j: JField) -> Result<Self> {
        let mut h = AlmostHermitian {
            manifold,
            j,
            class: StructureClass::Generic,
            name: name.to_string(),
        };
        let grid = h.manifold.sample_points(CLASSIFICATION_SAMPLES);
        for &p in &grid {
            let jm = h.j_matrix(p);
            let j2 = jm.compose(&jm);
            let mut worst = 0.0f64;
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b { -1.0 } else { 0.0 };
                    worst = worst.max((j2.0[a][b] - want).abs());
                    worst = worst.max((jm.0[a][b] + jm.0[b][a]).abs());
                }
            }
            if worst > 1e-12 {
                return Err(GeomError::InvalidStructure(format!(
                    "J is not an orthogonal complex structure at {p:?}: residual {worst:.3e}"
                )));
            }
            let alpha = h.alpha_at(p);
            let asd = alpha.anti_self_dual_part(h.manifold.orientation()).norm();
            if asd > 1e-10 {
                return Err(GeomError::InvalidStructure(format!(
                    "dual 2-vector of J is not self-dual for the declared orientation \
                     (residual {asd:.3e}); frame orientation and J disagree"
                )));
            }
            if (alpha.norm() - 1.0).abs() > 1e-10 {
                return Err(GeomError::InvalidStructure("dual 2-vector not unit".into()));
            }
        }

        let mut n_max = 0.0f64;
        let mut grad_j_max = 0.0f64;
        let mut d_omega_max = 0.0f64;
        for &p in &grid {
            n_max = n_max.max(h.nijenhuis_max(p));
            grad_j_max = grad_j_max.max(h.integrability_residual_nabla_j(p));
            d_omega_max = d_omega_max.max(h.d_omega_max(p));
        }
        let integrable = n_max <= CLASSIFICATION_TOL;
        let integrable_bis = grad_j_max <= CLASSIFICATION_TOL;
        if integrable != integrable_bis {
            return Err(GeomError::InvalidStructure(format!(
                "integrability criteria disagree: max|N| = {n_max:.3e}, \
                 max|(∇_X J)Y − (∇_JX J)JY| = {grad_j_max:.3e}"
            )));
        }
        let symplectic = d_omega_max <= CLASSIFICATION_TOL;
        h.class = match (integrable, symplectic) {
            (true, true) => StructureClass::Kahler,
            (true, false) => StructureClass::Hermitian,
            (false, true) => StructureClass::AlmostKahler,
            (false, false) => StructureClass::Generic,
        };
        Ok(h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn manifold(&self) -> &Arc<FramedManifold> {
        &self.manifold
    }

    pub fn class(&self) -> StructureClass {
        self.class
    }

    pub fn is_integrable(&self) -> bool {
        self.class.integrable()
    }

    pub fn is_symplectic(&self) -> bool {
        self.class.symplectic()
    }

    pub fn j_matrix(&self, p: Chart4) -> SkewEndo4<f64> {
        match &self.j {
            JField::Constant(m) => SkewEndo4(*m),
            JField::Fn(f) => SkewEndo4(f(p)),
        }
    }

    pub fn apply_j(&self, p: Chart4, v: &Vector4<f64>) -> Vector4<f64> {
        self.j_matrix(p).apply(v)
    }

    /// Unit self-dual 2-vector dual to half the fundamental form; `K_α = J`.
    pub fn alpha_at(&self, p: Chart4) -> Bivector<f64> {
        let j = self.j_matrix(p);
        let mut b = [0.0; 6];
        for (idx, &(i, jj)) in BASIS_PAIRS.iter().enumerate() {
            // α_{ij} = ⟨J E_i, E_j⟩
            b[idx] = j.0[jj][i];
        }
        Bivector(b)
    }

    pub fn alpha_field(&self) -> BivectorField {
        match &self.j {
            JField::Constant(_) => BivectorField::Constant(self.alpha_at([0.0; 4])),
            JField::Fn(_) => {
                let h = self.clone();
                BivectorField::Fn(Arc::new(move |p| h.alpha_at(p)))
            }
        }
    }

    /// Fundamental form `Ω(E_i, E_j)` as a matrix.
    pub fn omega_at(&self, p: Chart4) -> [[f64; 4]; 4] {
        let j = self.j_matrix(p);
        let mut om = [[0.0; 4]; 4];
        for i in 0..4 {
            for jj in 0..4 {
                om[i][jj] = j.0[jj][i];
            }
        }
        om
    }

    fn j_column_field(&self, i: usize) -> FrameVectorField {
        match &self.j {
            JField::Constant(m) => {
                FrameVectorField::Constant([m[0][i], m[1][i], m[2][i], m[3][i]])
            }
            JField::Fn(f) => {
                let f = f.clone();
                FrameVectorField::Fn(Arc::new(move |p| {
                    let m = f(p);
                    [m[0][i], m[1][i], m[2][i], m[3][i]]
                }))
            }
        }
    }

    /// `N(E_i, E_j)` table at `p`; general values follow by bilinearity.
    pub fn nijenhuis_table(&self, p: Chart4) -> [[Vector4<f64>; 4]; 4] {
        let m = &self.manifold;
        let jm = self.j_matrix(p);
        let mut table = [[Vector4::zero(); 4]; 4];
        let jf: Vec<FrameVectorField> = (0..4).map(|i| self.j_column_field(i)).collect();
        for i in 0..4 {
            for jdx in i + 1..4 {
                let ei = FrameVectorFrame(i).field();
                let ej = FrameVectorFrame(jdx).field();
                let t1 = m.bracket(p, &ei, &ej);
                let t2 = m.bracket(p, &jf[i], &jf[jdx]);
                let t3 = jm.apply(&m.bracket(p, &ei, &jf[jdx]));
                let t4 = jm.apply(&m.bracket(p, &jf[i], &ej));
                let n = t2.sub(&t1).sub(&t3).sub(&t4);
                table[i][jdx] = n;
                table[jdx][i] = n.scale(-1.0);
            }
        }
        table
    }

    /// `N(Y, Z) = −[Y,Z] + [JY,JZ] − J[Y,JZ] − J[JY,Z]` for pointwise vectors.
    pub fn nijenhuis(&self, p: Chart4, y: &Vector4<f64>, z: &Vector4<f64>) -> Vector4<f64> {
        let table = self.nijenhuis_table(p);
        let mut out = Vector4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let f = y.0[i] * z.0[j];
                if f != 0.0 {
                    out = out.add(&table[i][j].scale(f));
                }
            }
        }
        out
    }

    /// Linear extension of `N` to 2-vectors.
    pub fn nijenhuis_biv(&self, p: Chart4, a: &Bivector<f64>) -> Vector4<f64> {
        let table = self.nijenhuis_table(p);
        let mut out = Vector4::zero();
        for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            if a.0[idx] != 0.0 {
                out = out.add(&table[i][j].scale(a.0[idx]));
            }
        }
        out
    }

    pub fn nijenhuis_max(&self, p: Chart4) -> f64 {
        let table = self.nijenhuis_table(p);
        table
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `(∇_X J)` as a matrix on frame components.
    pub fn nabla_j(&self, p: Chart4, x: &Vector4<f64>) -> SkewEndo4<f64> {
        let gamma = self.manifold.gamma_at(p);
        let mut gx = [[0.0; 4]; 4];
        for i in 0..4 {
            if x.0[i] != 0.0 {
                let li = gamma.endo(i);
                for a in 0..4 {
                    for b in 0..4 {
                        gx[a][b] += x.0[i] * li.0[a][b];
                    }
                }
            }
        }
        let gx = SkewEndo4(gx);
        let j = self.j_matrix(p);
        let mut out = gx.compose(&j).add(&j.compose(&gx).scale(-1.0));
        if let JField::Fn(f) = &self.j {
            for a in 0..4 {
                for b in 0..4 {
                    let fab = {
                        let f = f.clone();
                        move |q: Chart4| f(q)[a][b]
                    };
                    let mut acc = 0.0;
                    for i in 0..4 {
                        if x.0[i] != 0.0 {
                            acc += x.0[i] * self.manifold.frame_derivative(p, i, &fab);
                        }
                    }
                    out.0[a][b] += acc;
                }
            }
        }
        out
    }

    /// Max residual of the integrability criterion `(∇_X J)Y = (∇_JX J)(JY)`.
    pub fn integrability_residual_nabla_j(&self, p: Chart4) -> f64 {
        let j = self.j_matrix(p);
        let mut worst = 0.0f64;
        for i in 0..4 {
            let x = Vector4::basis(i);
            let jx = j.apply(&x);
            let nx = self.nabla_j(p, &x);
            let njx = self.nabla_j(p, &jx);
            for k in 0..4 {
                let y = Vector4::basis(k);
                let lhs = nx.apply(&y);
                let rhs = njx.apply(&j.apply(&y));
                worst = worst.max(lhs.sub(&rhs).norm());
            }
        }
        worst
    }

    /// Lee form data; `δΩ(X) = −Σ_i (∇_{E_i}Ω)(E_i, X)`, `θ = −δΩ∘J`.
    pub fn lee(&self, p: Chart4) -> LeeData {
        let gamma = self.manifold.gamma_at(p);
        let om = self.omega_at(p);
        let mut delta = [0.0; 4];
        for x in 0..4 {
            let mut acc = 0.0;
            for i in 0..4 {
                // (∇_{E_i}Ω)(E_i, E_x)
                let mut t = 0.0;
                if let JField::Fn(f) = &self.j {
                    let fix = {
                        let f = f.clone();
                        move |q: Chart4| {
                            let m = f(q);
                            m[x][i] // Ω(E_i, E_x) = ⟨J E_i, E_x⟩
                        }
                    };
                    t += self.manifold.frame_derivative(p, i, &fix);
                }
                for k in 0..4 {
                    t -= gamma.0[i][i][k] * om[k][x];
                    t -= gamma.0[i][x][k] * om[i][k];
                }
                acc += t;
            }
            delta[x] = -acc;
        }
        let j = self.j_matrix(p);
        let mut theta = [0.0; 4];
        for x in 0..4 {
            let jx = j.apply(&Vector4::basis(x));
            let mut acc = 0.0;
            for k in 0..4 {
                acc += delta[k] * jx.0[k];
            }
            theta[x] = -acc;
        }
        let b = Vector4(theta);
        LeeData {
            theta,
            b,
            norm_sq: b.dot(&b),
        }
    }

    /// `∇_X α` through the connection on 2-vector fields (works for any class).
    pub fn nabla_alpha(&self, p: Chart4, x: &Vector4<f64>) -> Bivector<f64> {
        self.manifold.nabla_bivector(p, x, &self.alpha_field())
    }

    /// Closed form for integrable structures: `∇_X α = ½(JX∧B + X∧JB)`.
    pub fn nabla_alpha_integrable(&self, p: Chart4, x: &Vector4<f64>) -> Bivector<f64> {
        let j = self.j_matrix(p);
        let b = self.lee(p).b;
        wedge(&j.apply(x), &b)
            .add(&wedge(x, &j.apply(&b)))
            .scale(0.5)
    }

    /// Symplectic pairing identity RHS: `¼⟨N(a), JX⟩`.
    pub fn nabla_alpha_symplectic_pairing(&self, p: Chart4, x: &Vector4<f64>, a: &Bivector<f64>) -> f64 {
        let n = self.nijenhuis_biv(p, a);
        0.25 * n.dot(&self.apply_j(p, x))
    }

    /// Second covariant derivative `∇²_{XY}α = ∇_X ∇_Y α − ∇_{∇_X Y} α`,
    /// tensorial in both slots.
    pub fn second_nabla_alpha(&self, p: Chart4, x: &Vector4<f64>, y: &Vector4<f64>) -> Bivector<f64> {
        // left-invariant data: the inner derivative has constant components
        let invariant =
            self.manifold.is_constant_structure() && matches!(self.j, JField::Constant(_));
        let gamma = self.manifold.gamma_at(p);
        let mut out = Bivector::zero();
        for j in 0..4 {
            if y.0[j] == 0.0 {
                continue;
            }
            let field = if invariant {
                BivectorField::Constant(self.nabla_alpha(p, &Vector4::basis(j)))
            } else {
                let h = self.clone();
                BivectorField::Fn(Arc::new(move |q: Chart4| {
                    h.nabla_alpha(q, &Vector4::basis(j))
                }))
            };
            out = out.add(&self.manifold.nabla_bivector(p, x, &field).scale(y.0[j]));
        }
        let nxy = gamma.nabla_vec(x, y);
        out.sub(&self.nabla_alpha(p, &nxy))
    }

    /// Same quantity with the outer derivative always taken by differencing
    /// the inner derivative as a field over the chart; used as an oracle for
    /// the algebraic route.
    pub fn second_nabla_alpha_fd(&self, p: Chart4, x: &Vector4<f64>, y: &Vector4<f64>) -> Bivector<f64> {
        let gamma = self.manifold.gamma_at(p);
        let mut out = Bivector::zero();
        for j in 0..4 {
            if y.0[j] == 0.0 {
                continue;
            }
            let h = self.clone();
            let field = BivectorField::Fn(Arc::new(move |q: Chart4| {
                h.nabla_alpha(q, &Vector4::basis(j))
            }));
            out = out.add(&self.manifold.nabla_bivector(p, x, &field).scale(y.0[j]));
        }
        let nxy = gamma.nabla_vec(x, y);
        out.sub(&self.nabla_alpha(p, &nxy))
    }

    /// Closed form of `∇²` for integrable structures.
    pub fn second_nabla_alpha_integrable(
        &self,
        p: Chart4,
        x: &Vector4<f64>,
        y: &Vector4<f64>,
    ) -> Bivector<f64> {
        let j = self.j_matrix(p);
        let lee = self.lee(p);
        let nj = self.nabla_j(p, x);
        let nxb = self.nabla_b(p, x);
        let t1 = wedge(&nj.apply(y), &lee.b);
        let t2 = wedge(y, &nj.apply(&lee.b));
        let t3 = wedge(&j.apply(y), &nxb);
        let t4 = wedge(y, &j.apply(&nxb));
        t1.add(&t2).add(&t3).add(&t4).scale(0.5)
    }

    /// `∇_X B` of the Lee vector field.
    pub fn nabla_b(&self, p: Chart4, x: &Vector4<f64>) -> Vector4<f64> {
        let h = self.clone();
        let field = FrameVectorField::Fn(Arc::new(move |q: Chart4| h.lee(q).b.0));
        self.manifold.nabla_vec_dir(p, x, &field)
    }

    /// `Σ_i ∇²_{E_i E_i} α`.
    pub fn trace_second_nabla_alpha(&self, p: Chart4) -> Bivector<f64> {
        let mut out = Bivector::zero();
        for i in 0..4 {
            let e = Vector4::basis(i);
            out = out.add(&self.second_nabla_alpha(p, &e, &e));
        }
        out
    }

    /// ⋆-Ricci tensor `ρ*(X,Y) = tr{Z ↦ R(JZ, X) JY}` as a frame matrix.
    pub fn star_ricci(&self, p: Chart4) -> [[f64; 4]; 4] {
        let j = self.j_matrix(p);
        let mut rho = [[0.0; 4]; 4];
        for a in 0..4 {
            let x = Vector4::basis(a);
            for b in 0..4 {
                let jy = j.apply(&Vector4::basis(b));
                let mut acc = 0.0;
                for k in 0..4 {
                    let jz = j.apply(&Vector4::basis(k));
                    let r = self
                        .manifold
                        .curvature_endo_biv(p, &wedge(&jz, &x))
                        .apply(&jy);
                    acc += r.0[k];
                }
                rho[a][b] = acc;
            }
        }
        rho
    }

    /// Residual of `ρ*(JX, JY) = ρ*(Y, X)` over frame pairs.
    pub fn star_ricci_identity_residual(&self, p: Chart4) -> f64 {
        let rho = self.star_ricci(p);
        let j = self.j_matrix(p);
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                let jx = j.apply(&Vector4::basis(a));
                let jy = j.apply(&Vector4::basis(b));
                let mut lhs = 0.0;
                for i in 0..4 {
                    for k in 0..4 {
                        lhs += jx.0[i] * jy.0[k] * rho[i][k];
                    }
                }
                worst = worst.max((lhs - rho[b][a]).abs());
            }
        }
        worst
    }

    pub fn star_ricci_asymmetry(&self, p: Chart4) -> f64 {
        let rho = self.star_ricci(p);
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max((rho[a][b] - rho[b][a]).abs());
            }
        }
        worst
    }

    /// `S(Ω)(X,Y) = Ric(Y,JX) − Ric(X,JY) + 2ρ*(X,JY)`.
    pub fn s_omega(&self, p: Chart4, x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
        let ric = self.manifold.ricci(p);
        let rho = self.star_ricci(p);
        let j = self.j_matrix(p);
        let jx = j.apply(x);
        let jy = j.apply(y);
        let bil = |m: &[[f64; 4]; 4], u: &Vector4<f64>, v: &Vector4<f64>| -> f64 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += u.0[a] * v.0[b] * m[a][b];
                }
            }
            acc
        };
        bil(&ric, y, &jx) - bil(&ric, x, &jy) + 2.0 * bil(&rho, x, &jy)
    }

    /// Same quantity through the curvature-trace definition, as an
    /// independent route for the algebraic identity checks.
    pub fn s_omega_trace_form(&self, p: Chart4, x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
        let om = self.omega_at(p);
        let omega = |u: &Vector4<f64>, v: &Vector4<f64>| -> f64 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += u.0[a] * v.0[b] * om[a][b];
                }
            }
            acc
        };
        let mut acc = 0.0;
        for i in 0..4 {
            let z = Vector4::basis(i);
            let rzy = self.manifold.curvature_endo_biv(p, &wedge(&z, y));
            let rzx = self.manifold.curvature_endo_biv(p, &wedge(&z, x));
            // (R(Z,Y)Ω)(Z,X) = −Ω(R(Z,Y)Z, X) − Ω(Z, R(Z,Y)X)
            acc += -omega(&rzy.apply(&z), x) - omega(&z, &rzy.apply(x));
            acc -= -omega(&rzx.apply(&z), y) - omega(&z, &rzx.apply(y));
        }
        acc
    }

    /// Exterior derivative of the Lee form as a frame 2-form matrix.
    pub fn d_theta(&self, p: Chart4) -> [[f64; 4]; 4] {
        let c = self.manifold.structure_at(p);
        let theta0 = self.lee(p).theta;
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let mut v = 0.0;
                // E_i(θ(E_j)) − E_j(θ(E_i))
                let h1 = self.clone();
                let fj = move |q: Chart4| h1.lee(q).theta[j];
                let h2 = self.clone();
                let fi = move |q: Chart4| h2.lee(q).theta[i];
                v += self.manifold.frame_derivative(p, i, &fj);
                v -= self.manifold.frame_derivative(p, j, &fi);
                for k in 0..4 {
                    v -= c.0[i][j][k] * theta0[k];
                }
                d[i][j] = v;
                d[j][i] = -v;
            }
        }
        d
    }

    /// `dΩ` components on frame triples `(i,j,k)`, `i<j<k`.
    pub fn d_omega(&self, p: Chart4) -> [f64; 4] {
        let c = self.manifold.structure_at(p);
        let om0 = self.omega_at(p);
        let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
        let omega_fn = |q: Chart4, a: usize, b: usize| -> f64 { self.omega_entry(q, a, b) };
        let mut out = [0.0; 4];
        for (t, &(i, j, k)) in triples.iter().enumerate() {
            let mut v = 0.0;
            if matches!(self.j, JField::Fn(_)) {
                let fjk = |q: Chart4| omega_fn(q, j, k);
                let fik = |q: Chart4| omega_fn(q, i, k);
                let fij = |q: Chart4| omega_fn(q, i, j);
                v += self.manifold.frame_derivative(p, i, &fjk);
                v -= self.manifold.frame_derivative(p, j, &fik);
                v += self.manifold.frame_derivative(p, k, &fij);
            }
            for l in 0..4 {
                v -= c.0[i][j][l] * om0[l][k];
                v += c.0[i][k][l] * om0[l][j];
                v += c.0[j][k][l] * om0[i][l];
            }
            out[t] = v;
        }
        out
    }

    fn omega_entry(&self, p: Chart4, a: usize, b: usize) -> f64 {
        self.omega_at(p)[a][b]
    }

    pub fn d_omega_max(&self, p: Chart4) -> f64 {
        self.d_omega(p).iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `dΩ` on coordinate triples through the chart, as an independent route.
    pub fn d_omega_coords(&self, p: Chart4, a: usize, b: usize, c: usize) -> Result<f64> {
        let omega_coord = |q: Chart4, u: usize, v: usize| -> Result<f64> {
            let f = self.manifold.frame_matrix(q)?;
            let finv = nalgebra::Matrix4::from_fn(|r, cc| f[r][cc])
                .try_inverse()
                .ok_or_else(|| GeomError::InvalidStructure("singular frame".into()))?;
            let om = self.omega_at(q);
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    acc += finv[(i, u)] * finv[(j, v)] * om[i][j];
                }
            }
            Ok(acc)
        };
        let h = crate::manifold::CHART_FD_STEP;
        let diff = |dir: usize, u: usize, v: usize| -> Result<f64> {
            let mut pp = p;
            let mut pm = p;
            pp[dir] += h;
            pm[dir] -= h;
            Ok((omega_coord(pp, u, v)? - omega_coord(pm, u, v)?) / (2.0 * h))
        };
        Ok(diff(a, b, c)? - diff(b, a, c)? + diff(c, a, b)?)
    }

    /// Type-(1,1) residual of an antisymmetric frame 2-form:
    /// `max |β(E_i,E_j) − β(JE_i,JE_j)|`.
    pub fn type_11_residual(&self, p: Chart4, beta: &[[f64; 4]; 4]) -> f64 {
        let j = self.j_matrix(p);
        let mut worst = 0.0f64;
        for i in 0..4 {
            for k in i + 1..4 {
                let ji = j.apply(&Vector4::basis(i));
                let jk = j.apply(&Vector4::basis(k));
                let mut jj = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        jj += ji.0[a] * jk.0[b] * beta[a][b];
                    }
                }
                worst = worst.max((beta[i][k] - jj).abs());
            }
        }
        worst
    }

    pub fn is_type_11(&self, p: Chart4, beta: &[[f64; 4]; 4], tol: f64) -> bool {
        self.type_11_residual(p, beta) <= tol
    }

    /// The 2-form `d(θ/√(8+2t‖θ‖²))`, computed as
    /// `(dθ + θ∧d ln √(8+2t‖θ‖²)) / √(8+2t‖θ‖²)`.
    pub fn scaled_lee_two_form(&self, p: Chart4, t: f64) -> [[f64; 4]; 4] {
        let w = self.lee_criterion_form(p, t);
        let lee = self.lee(p);
        let f = 8.0 + 2.0 * t * lee.norm_sq;
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = w[i][j] / f.sqrt();
            }
        }
        out
    }

    /// The unnormalized criterion form `dθ + θ∧d ln √(8+2t‖θ‖²)`.
    pub fn lee_criterion_form(&self, p: Chart4, t: f64) -> [[f64; 4]; 4] {
        let mut w = self.d_theta(p);
        let lee = self.lee(p);
        let f = 8.0 + 2.0 * t * lee.norm_sq;
        // d ln √f = t d(‖θ‖²)/f
        let mut eta = [0.0; 4];
        for i in 0..4 {
            let h = self.clone();
            let nf = move |q: Chart4| h.lee(q).norm_sq;
            eta[i] = t * self.manifold.frame_derivative(p, i, &nf) / f;
        }
        for i in 0..4 {
            for j in 0..4 {
                w[i][j] += lee.theta[i] * eta[j] - lee.theta[j] * eta[i];
            }
        }
        w
    }

    /// Evaluates a frame 2-form on a 2-vector: `β(Σ a_{ij} E_i∧E_j) = Σ a_{ij} β(E_i,E_j)`.
    pub fn eval_two_form(beta: &[[f64; 4]; 4], a: &Bivector<f64>) -> f64 {
        let mut acc = 0.0;
        for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            acc += a.0[idx] * beta[i][j];
        }
        acc
    }

    /// Residual of the structural identity
    /// `2⟨(∇_X J)Y, Z⟩ = dΩ(X,Y,Z) − dΩ(X,JY,JZ) + ⟨N(Y,Z), JX⟩`
    /// over all frame triples.
    pub fn nabla_j_structure_residual(&self, p: Chart4) -> f64 {
        let j = self.j_matrix(p);
        let d_om = self.d_omega_form(p);
        let table = self.nijenhuis_table(p);
        let mut worst = 0.0f64;
        for xi in 0..4 {
            let x = Vector4::basis(xi);
            let nj = self.nabla_j(p, &x);
            let jx = j.apply(&x);
            for yi in 0..4 {
                let y = Vector4::basis(yi);
                let jy = j.apply(&y);
                for zi in 0..4 {
                    let z = Vector4::basis(zi);
                    let jz = j.apply(&z);
                    let lhs = 2.0 * nj.apply(&y).dot(&z);
                    let rhs = d_om(&x, &y, &z) - d_om(&x, &jy, &jz) + table[yi][zi].dot(&jx);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    /// `dΩ` as a trilinear evaluator from the component values.
    pub fn d_omega_form(&self, p: Chart4) -> impl Fn(&Vector4<f64>, &Vector4<f64>, &Vector4<f64>) -> f64 {
        let comps = self.d_omega(p);
        move |x: &Vector4<f64>, y: &Vector4<f64>, z: &Vector4<f64>| -> f64 {
            let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
            let mut acc = 0.0;
            for (t, &(i, j, k)) in triples.iter().enumerate() {
                if comps[t] == 0.0 {
                    continue;
                }
                // antisymmetrized coefficient of the basis 3-form e_i∧e_j∧e_k
                let det = det3(
                    [x.0[i], x.0[j], x.0[k]],
                    [y.0[i], y.0[j], y.0[k]],
                    [z.0[i], z.0[j], z.0[k]],
                );
                acc += comps[t] * det;
            }
            acc
        }
    }

    /// Residual of the closed form `2(∇_XJ)Y = ⟨JX,Y⟩B − ⟨B,Y⟩JX + ⟨X,Y⟩JB − ⟨JB,Y⟩X`
    /// valid for integrable structures.
    pub fn nabla_j_integrable_residual(&self, p: Chart4) -> f64 {
        let j = self.j_matrix(p);
        let b = self.lee(p).b;
        let jb = j.apply(&b);
        let mut worst = 0.0f64;
        for xi in 0..4 {
            let x = Vector4::basis(xi);
            let nj = self.nabla_j(p, &x);
            let jx = j.apply(&x);
            for yi in 0..4 {
                let y = Vector4::basis(yi);
                let lhs = nj.apply(&y).scale(2.0);
                let rhs = b
                    .scale(jx.dot(&y))
                    .sub(&jx.scale(b.dot(&y)))
                    .add(&jb.scale(x.dot(&y)))
                    .sub(&x.scale(jb.dot(&y)));
                worst = worst.max(lhs.sub(&rhs).norm());
            }
        }
        worst
    }

    /// `ξ_σ = α × σ` for a self-dual σ at p.
    pub fn xi(&self, p: Chart4, sigma: &Bivector<f64>) -> Bivector<f64> {
        cross(&self.alpha_at(p), sigma, self.manifold.orientation())
    }

    /// Convenience: `K_σ B`-style pairings use this endomorphism.
    pub fn k_of(&self, b: &Bivector<f64>) -> SkewEndo4<f64> {
        k_endo(b)
    }
}

/// Small helper making frame basis fields read naturally.
struct FrameVectorFrame(usize);

impl FrameVectorFrame {
    fn field(&self) -> FrameVectorField {
        FrameVectorField::frame(self.0)
    }
}

fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

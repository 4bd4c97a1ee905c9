//! Four-manifolds presented by an oriented orthonormal frame.
//!
//! The frame is the single source of metric truth: the metric is the one
//! making the frame orthonormal, the connection comes from the structure
//! functions `c_{ijk} = ⟨[E_i,E_j], E_k⟩` through the Koszul formula
//! `2Γ_{ijk} = c_{ijk} − c_{ikj} − c_{jki}` (exact for orthonormal frames,
//! including frames with varying coefficients), and the curvature convention
//! is `R(X,Y) = ∇_{[X,Y]} − [∇_X, ∇_Y]`.
//!
//! A manifold may carry a coordinate chart (frame vectors expressed in
//! coordinate fields). The chart is only needed by finite-difference oracles;
//! homogeneous examples without a useful chart work purely through their
//! constant structure functions.

use crate::algebra::{
    k_endo, oriented_sd_triple, wedge, Bivector, Orientation, SelfDualTriple, SkewEndo4, Vector4,
    BASIS_PAIRS,
};
use crate::error::{GeomError, Result};
use crate::scalar::Scalar;
use std::sync::Arc;

pub type Chart4 = [f64; 4];

/// Central-difference step for chart-level derivatives on unit-scaled charts.
pub const CHART_FD_STEP: f64 = 1e-5;

/// Structure functions `c_{ijk}` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureConstants<S = f64>(pub [[[S; 4]; 4]; 4]);

/// Connection coefficients `Γ_{ijk} = ⟨∇_{E_i} E_j, E_k⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoefficients<S = f64>(pub [[[S; 4]; 4]; 4]);

impl<S: Scalar> StructureConstants<S> {
    pub fn zero() -> Self {
        StructureConstants([[[S::zero(); 4]; 4]; 4])
    }

    /// Sets `[E_i, E_j] = Σ v_k E_k` together with the antisymmetric slot.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: [S; 4]) {
        for k in 0..4 {
            self.0[i][j][k] = v[k];
            self.0[j][i][k] = -v[k];
        }
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let r = (self.0[i][j][k] + self.0[j][i][k]).to_f64().abs();
                    worst = worst.max(r);
                }
            }
        }
        worst
    }

    /// Max residual of the Jacobi identity for the constant-coefficient bracket.
    pub fn jacobi_residual(&self) -> f64 {
        let c = &self.0;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut acc = S::zero();
                        for m in 0..4 {
                            acc = acc
                                + c[i][j][m] * c[m][k][l]
                                + c[j][k][m] * c[m][i][l]
                                + c[k][i][m] * c[m][j][l];
                        }
                        worst = worst.max(acc.to_f64().abs());
                    }
                }
            }
        }
        worst
    }
}

/// Koszul formula for an orthonormal frame.
pub fn koszul<S: Scalar>(c: &StructureConstants<S>) -> ConnectionCoefficients<S> {
    let mut g = [[[S::zero(); 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                g[i][j][k] = (c.0[i][j][k] - c.0[i][k][j] - c.0[j][k][i]) * S::half();
            }
        }
    }
    ConnectionCoefficients(g)
}

impl<S: Scalar> ConnectionCoefficients<S> {
    /// `∇_{E_i}` as a (skew) matrix acting on frame components.
    pub fn endo(&self, i: usize) -> SkewEndo4<S> {
        let mut m = [[S::zero(); 4]; 4];
        for j in 0..4 {
            for k in 0..4 {
                m[k][j] = self.0[i][j][k];
            }
        }
        SkewEndo4(m)
    }

    pub fn nabla_vec(&self, x: &Vector4<S>, v: &Vector4<S>) -> Vector4<S> {
        let mut out = Vector4::zero();
        for i in 0..4 {
            if x.0[i].is_zero() {
                continue;
            }
            out = out.add(&self.endo(i).apply(v).scale(x.0[i]));
        }
        out
    }

    /// `∇_{E_i}` applied to a 2-vector with constant frame components.
    pub fn nabla_biv(&self, i: usize, b: &Bivector<S>) -> Bivector<S> {
        self.endo(i).derivation_on(b)
    }

    pub fn metric_skew_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    worst = worst.max((self.0[i][j][k] + self.0[i][k][j]).to_f64().abs());
                }
            }
        }
        worst
    }
}

/// Curvature endomorphism `R(E_i, E_j)` for constant structure functions.
pub fn curvature_endo_constant<S: Scalar>(
    c: &StructureConstants<S>,
    gamma: &ConnectionCoefficients<S>,
    i: usize,
    j: usize,
) -> SkewEndo4<S> {
    let li = gamma.endo(i);
    let lj = gamma.endo(j);
    let mut r = li.compose(&lj).scale(-S::one()).add(&lj.compose(&li));
    for m in 0..4 {
        if !c.0[i][j][m].is_zero() {
            r = r.add(&gamma.endo(m).scale(c.0[i][j][m]));
        }
    }
    r
}

/// Riemann bilinear form on 2-vectors: `B[(ij)][(kl)] = ⟨R(E_i,E_j)E_k, E_l⟩`.
pub fn riemann_form_constant<S: Scalar>(
    c: &StructureConstants<S>,
    gamma: &ConnectionCoefficients<S>,
) -> [[S; 6]; 6] {
    let mut b = [[S::zero(); 6]; 6];
    for (pi, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        let r = curvature_endo_constant(c, gamma, i, j);
        for (pj, &(k, l)) in BASIS_PAIRS.iter().enumerate() {
            b[pi][pj] = r.0[l][k];
        }
    }
    b
}

/// Ricci in the frame, `Ric(E_j, E_k) = Σ_i ⟨R(E_i, E_j) E_k, E_i⟩`.
pub fn ricci_constant<S: Scalar>(
    c: &StructureConstants<S>,
    gamma: &ConnectionCoefficients<S>,
) -> [[S; 4]; 4] {
    let mut ric = [[S::zero(); 4]; 4];
    for i in 0..4 {
        let mut endos = Vec::with_capacity(4);
        endos.push(curvature_endo_constant(c, gamma, i, 0));
        endos.push(curvature_endo_constant(c, gamma, i, 1));
        endos.push(curvature_endo_constant(c, gamma, i, 2));
        endos.push(curvature_endo_constant(c, gamma, i, 3));
        for j in 0..4 {
            for k in 0..4 {
                ric[j][k] = ric[j][k] + endos[j].0[k][i];
            }
        }
    }
    ric
}

#[derive(Clone)]
enum FrameSpec {
    /// No coordinate realization; only constant structure functions.
    Abstract,
    /// Columns `E_i` as coordinate vector fields.
    Chart(Arc<dyn Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync>),
}

#[derive(Clone)]
enum StructureSpec {
    Constant(StructureConstants<f64>),
    Function(Arc<dyn Fn(Chart4) -> StructureConstants<f64> + Send + Sync>),
    /// Derived from the chart frame by central differences.
    FiniteDifference,
}

/// Frame components of a vector field, possibly varying over the chart.
#[derive(Clone)]
pub enum FrameVectorField {
    Constant([f64; 4]),
    Fn(Arc<dyn Fn(Chart4) -> [f64; 4] + Send + Sync>),
}

impl FrameVectorField {
    pub fn frame(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        FrameVectorField::Constant(v)
    }

    pub fn at(&self, p: Chart4) -> Vector4<f64> {
        match self {
            FrameVectorField::Constant(v) => Vector4(*v),
            FrameVectorField::Fn(f) => Vector4(f(p)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, FrameVectorField::Constant(_))
    }
}

/// Frame components of a 2-vector field.
#[derive(Clone)]
pub enum BivectorField {
    Constant(Bivector<f64>),
    Fn(Arc<dyn Fn(Chart4) -> Bivector<f64> + Send + Sync>),
}

impl BivectorField {
    pub fn at(&self, p: Chart4) -> Bivector<f64> {
        match self {
            BivectorField::Constant(b) => *b,
            BivectorField::Fn(f) => f(p),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, BivectorField::Constant(_))
    }
}

/// A four-manifold chart with an oriented orthonormal frame field.
#[derive(Clone)]
pub struct FramedManifold {
    name: String,
    orientation: Orientation,
    frame: FrameSpec,
    structure: StructureSpec,
}

impl FramedManifold {
    /// Homogeneous presentation: constant structure functions, no chart.
    pub fn constant(
        name: &str,
        orientation: Orientation,
        c: StructureConstants<f64>,
    ) -> Result<Self> {
        let anti = c.antisymmetry_residual();
        if anti > 1e-12 {
            return Err(GeomError::InvalidStructure(format!(
                "structure functions not antisymmetric in (i,j): residual {anti:.3e}"
            )));
        }
        let jac = c.jacobi_residual();
        if jac > 1e-12 {
            return Err(GeomError::InvalidStructure(format!(
                "Jacobi identity fails for constant structure functions: residual {jac:.3e}"
            )));
        }
        Ok(FramedManifold {
            name: name.to_string(),
            orientation,
            frame: FrameSpec::Abstract,
            structure: StructureSpec::Constant(c),
        })
    }

    /// Same, with a coordinate chart realizing the frame.
    pub fn constant_with_chart(
        name: &str,
        orientation: Orientation,
        c: StructureConstants<f64>,
        frame: impl Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync + 'static,
    ) -> Result<Self> {
        let mut m = Self::constant(name, orientation, c)?;
        m.frame = FrameSpec::Chart(Arc::new(frame));
        Ok(m)
    }

    /// Chart presentation with structure functions derived by differencing.
    pub fn from_chart(
        name: &str,
        orientation: Orientation,
        frame: impl Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync + 'static,
    ) -> Self {
        FramedManifold {
            name: name.to_string(),
            orientation,
            frame: FrameSpec::Chart(Arc::new(frame)),
            structure: StructureSpec::FiniteDifference,
        }
    }

    /// Chart presentation with closed-form structure functions.
    pub fn functional(
        name: &str,
        orientation: Orientation,
        frame: impl Fn(Chart4) -> [[f64; 4]; 4] + Send + Sync + 'static,
        c: impl Fn(Chart4) -> StructureConstants<f64> + Send + Sync + 'static,
    ) -> Self {
        FramedManifold {
            name: name.to_string(),
            orientation,
            frame: FrameSpec::Chart(Arc::new(frame)),
            structure: StructureSpec::Function(Arc::new(c)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_constant_structure(&self) -> bool {
        matches!(self.structure, StructureSpec::Constant(_))
    }

    pub fn has_chart(&self) -> bool {
        matches!(self.frame, FrameSpec::Chart(_))
    }

    /// Oriented orthonormal basis of the self-dual space in this frame.
    pub fn sd_triple(&self) -> SelfDualTriple<f64> {
        oriented_sd_triple(self.orientation)
    }

    /// Frame vectors as coordinate fields, columns `E_i`.
    pub fn frame_matrix(&self, p: Chart4) -> Result<[[f64; 4]; 4]> {
        match &self.frame {
            FrameSpec::Abstract => Err(GeomError::NoChart(self.name.clone())),
            FrameSpec::Chart(f) => Ok(f(p)),
        }
    }

    /// Coordinate components of the metric, `g_ab` with `FᵀgF = Id`.
    pub fn coord_metric(&self, p: Chart4) -> Result<[[f64; 4]; 4]> {
        let f = self.frame_matrix(p)?;
        let fm = na4(&f);
        let finv = fm.try_inverse().ok_or_else(|| {
            GeomError::InvalidStructure(format!("frame matrix singular at {p:?}"))
        })?;
        let g = finv.transpose() * finv;
        Ok(from_na4(&g))
    }

    /// Frame components of a coordinate vector.
    pub fn to_frame(&self, p: Chart4, coord: [f64; 4]) -> Result<Vector4<f64>> {
        let f = self.frame_matrix(p)?;
        let finv = na4(&f)
            .try_inverse()
            .ok_or_else(|| GeomError::InvalidStructure("singular frame".into()))?;
        let v = finv * nalgebra::Vector4::from(coord);
        Ok(Vector4([v[0], v[1], v[2], v[3]]))
    }

    /// Coordinate components of a frame vector.
    pub fn to_coords(&self, p: Chart4, v: &Vector4<f64>) -> Result<[f64; 4]> {
        let f = self.frame_matrix(p)?;
        let w = na4(&f) * nalgebra::Vector4::from(v.0);
        Ok([w[0], w[1], w[2], w[3]])
    }

    pub fn structure_at(&self, p: Chart4) -> StructureConstants<f64> {
        match &self.structure {
            StructureSpec::Constant(c) => *c,
            StructureSpec::Function(f) => f(p),
            StructureSpec::FiniteDifference => self
                .structure_by_differencing(p)
                .expect("finite-difference structure functions need a chart"),
        }
    }

    /// `c_{ijk}` from the chart frame alone, by central differences.
    pub fn structure_by_differencing(&self, p: Chart4) -> Result<StructureConstants<f64>> {
        let f0 = self.frame_matrix(p)?;
        // ∂_a E_j^b by central differences
        let mut d = [[[0.0; 4]; 4]; 4]; // d[a][j][b]
        for a in 0..4 {
            let mut pp = p;
            let mut pm = p;
            pp[a] += CHART_FD_STEP;
            pm[a] -= CHART_FD_STEP;
            let fp = self.frame_matrix(pp)?;
            let fm = self.frame_matrix(pm)?;
            for j in 0..4 {
                for b in 0..4 {
                    d[a][j][b] = (fp[b][j] - fm[b][j]) / (2.0 * CHART_FD_STEP);
                }
            }
        }
        let mut c = StructureConstants::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                // [E_i, E_j]^b = E_i^a ∂_a E_j^b − E_j^a ∂_a E_i^b
                let mut br = [0.0; 4];
                for b in 0..4 {
                    for a in 0..4 {
                        br[b] += f0[a][i] * d[a][j][b] - f0[a][j] * d[a][i][b];
                    }
                }
                let fr = self.to_frame(p, br)?;
                c.set_bracket(i, j, fr.0);
            }
        }
        Ok(c)
    }

    pub fn gamma_at(&self, p: Chart4) -> ConnectionCoefficients<f64> {
        koszul(&self.structure_at(p))
    }

    /// Directional derivative of a scalar function along a chart direction.
    pub fn directional_derivative(
        &self,
        p: Chart4,
        dir: [f64; 4],
        f: &dyn Fn(Chart4) -> f64,
    ) -> f64 {
        let mut pp = p;
        let mut pm = p;
        for a in 0..4 {
            pp[a] += CHART_FD_STEP * dir[a];
            pm[a] -= CHART_FD_STEP * dir[a];
        }
        (f(pp) - f(pm)) / (2.0 * CHART_FD_STEP)
    }

    /// Derivative of a scalar function along the frame vector `E_i`.
    pub fn frame_derivative(&self, p: Chart4, i: usize, f: &dyn Fn(Chart4) -> f64) -> f64 {
        match &self.frame {
            FrameSpec::Abstract => 0.0, // homogeneous data: fields are constant
            FrameSpec::Chart(fr) => {
                let cols = fr(p);
                let dir = [cols[0][i], cols[1][i], cols[2][i], cols[3][i]];
                self.directional_derivative(p, dir, f)
            }
        }
    }

    fn field_derivative_along(&self, p: Chart4, x: &Vector4<f64>, field: &FrameVectorField) -> Vector4<f64> {
        match field {
            FrameVectorField::Constant(_) => Vector4::zero(),
            FrameVectorField::Fn(f) => {
                let mut out = [0.0; 4];
                for k in 0..4 {
                    let fk = {
                        let f = f.clone();
                        move |q: Chart4| f(q)[k]
                    };
                    let mut acc = 0.0;
                    for i in 0..4 {
                        if x.0[i] != 0.0 {
                            acc += x.0[i] * self.frame_derivative(p, i, &fk);
                        }
                    }
                    out[k] = acc;
                }
                Vector4(out)
            }
        }
    }

    /// Lie bracket of vector fields given by frame components.
    pub fn bracket(&self, p: Chart4, x: &FrameVectorField, y: &FrameVectorField) -> Vector4<f64> {
        let xv = x.at(p);
        let yv = y.at(p);
        let c = self.structure_at(p);
        let mut out = self
            .field_derivative_along(p, &xv, y)
            .sub(&self.field_derivative_along(p, &yv, x));
        for i in 0..4 {
            for j in 0..4 {
                let f = xv.0[i] * yv.0[j];
                if f != 0.0 {
                    for k in 0..4 {
                        out.0[k] += f * c.0[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Covariant derivative of a vector field along a pointwise direction.
    pub fn nabla_vec_dir(&self, p: Chart4, x: &Vector4<f64>, y: &FrameVectorField) -> Vector4<f64> {
        let gamma = self.gamma_at(p);
        self.field_derivative_along(p, x, y)
            .add(&gamma.nabla_vec(x, &y.at(p)))
    }

    /// Covariant derivative `∇_X Y` of vector fields.
    pub fn nabla_field(&self, p: Chart4, x: &FrameVectorField, y: &FrameVectorField) -> Vector4<f64> {
        self.nabla_vec_dir(p, &x.at(p), y)
    }

    /// Covariant derivative of a 2-vector field along a pointwise direction.
    pub fn nabla_bivector(&self, p: Chart4, x: &Vector4<f64>, s: &BivectorField) -> Bivector<f64> {
        let gamma = self.gamma_at(p);
        let sv = s.at(p);
        let mut out = Bivector::zero();
        for i in 0..4 {
            if x.0[i] != 0.0 {
                out = out.add(&gamma.nabla_biv(i, &sv).scale(x.0[i]));
            }
        }
        if let BivectorField::Fn(f) = s {
            for idx in 0..6 {
                let fi = {
                    let f = f.clone();
                    move |q: Chart4| f(q).0[idx]
                };
                let mut acc = 0.0;
                for i in 0..4 {
                    if x.0[i] != 0.0 {
                        acc += x.0[i] * self.frame_derivative(p, i, &fi);
                    }
                }
                out.0[idx] += acc;
            }
        }
        out
    }

    /// Curvature endomorphism `R(E_i, E_j)` in the frame.
    pub fn curvature_endo(&self, p: Chart4, i: usize, j: usize) -> SkewEndo4<f64> {
        match &self.structure {
            StructureSpec::Constant(c) => curvature_endo_constant(c, &koszul(c), i, j),
            _ => {
                let c = self.structure_at(p);
                let gamma = koszul(&c);
                let mut r = curvature_endo_constant(&c, &gamma, i, j);
                // varying-frame correction: E_i(Γ_{jk·}) − E_j(Γ_{ik·})
                for k in 0..4 {
                    for l in 0..4 {
                        let gjk = {
                            let m = self.clone();
                            move |q: Chart4| m.gamma_at(q).0[j][k][l]
                        };
                        let gik = {
                            let m = self.clone();
                            move |q: Chart4| m.gamma_at(q).0[i][k][l]
                        };
                        r.0[l][k] += -self.frame_derivative(p, i, &gjk)
                            + self.frame_derivative(p, j, &gik);
                    }
                }
                r
            }
        }
    }

    /// Curvature of vector fields, `R(X,Y)Z = ∇_{[X,Y]}Z − ∇_X ∇_Y Z + ∇_Y ∇_X Z`.
    pub fn curvature_fields(
        &self,
        p: Chart4,
        x: &FrameVectorField,
        y: &FrameVectorField,
        z: &FrameVectorField,
    ) -> Vector4<f64> {
        let br = self.bracket(p, x, y);
        let first = self.nabla_vec_dir(p, &br, z);
        let m = self.clone();
        let nyz = {
            let m = m.clone();
            let y = y.clone();
            let z = z.clone();
            FrameVectorField::Fn(Arc::new(move |q: Chart4| m.nabla_field(q, &y, &z).0))
        };
        let nxz = {
            let m = m.clone();
            let x = x.clone();
            let z = z.clone();
            FrameVectorField::Fn(Arc::new(move |q: Chart4| m.nabla_field(q, &x, &z).0))
        };
        first
            .sub(&self.nabla_field(p, x, &nyz))
            .add(&self.nabla_field(p, y, &nxz))
    }

    /// Endomorphism extension of the curvature over a 2-vector argument.
    pub fn curvature_endo_biv(&self, p: Chart4, a: &Bivector<f64>) -> SkewEndo4<f64> {
        let mut out = SkewEndo4::zero();
        for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            if a.0[idx] != 0.0 {
                out = out.add(&self.curvature_endo(p, i, j).scale(a.0[idx]));
            }
        }
        out
    }

    /// Derivation action `R(a)b` of the curvature on 2-vectors.
    pub fn curvature_derivation(&self, p: Chart4, a: &Bivector<f64>, b: &Bivector<f64>) -> Bivector<f64> {
        self.curvature_endo_biv(p, a).derivation_on(b)
    }

    /// Riemann bilinear form on 2-vectors, `B[(ij)][(kl)] = ⟨R(E_i,E_j)E_k, E_l⟩`.
    pub fn riemann_form(&self, p: Chart4) -> [[f64; 6]; 6] {
        let mut b = [[0.0; 6]; 6];
        for (pi, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            let r = self.curvature_endo(p, i, j);
            for (pj, &(k, l)) in BASIS_PAIRS.iter().enumerate() {
                b[pi][pj] = r.0[l][k];
            }
        }
        b
    }

    /// Curvature operator on 2-vectors for the ½-det metric (twice the form).
    pub fn curvature_operator(&self, p: Chart4) -> [[f64; 6]; 6] {
        let b = self.riemann_form(p);
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = 2.0 * b[j][i];
            }
        }
        m
    }

    /// Bivector representing `B(a, ·)` with respect to the ½-det metric.
    pub fn curvature_operator_apply(&self, p: Chart4, a: &Bivector<f64>) -> Bivector<f64> {
        let m = self.curvature_operator(p);
        let mut out = [0.0; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i] += m[i][j] * a.0[j];
            }
        }
        Bivector(out)
    }

    /// `Ric(Y, W) = Σ_i ⟨R(E_i, Y) E_i, W⟩`; positive on round spheres.
    pub fn ricci(&self, p: Chart4) -> [[f64; 4]; 4] {
        let mut ric = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let r = self.curvature_endo(p, i, j);
                for k in 0..4 {
                    ric[j][k] += r.0[k][i];
                }
            }
        }
        ric
    }

    pub fn scalar_curvature(&self, p: Chart4) -> f64 {
        let ric = self.ricci(p);
        ric[0][0] + ric[1][1] + ric[2][2] + ric[3][3]
    }

    /// Coordinate Christoffels `Γ^c_{ab}` from the coordinate metric, by
    /// fourth-order differencing (the nested derivative in the curvature
    /// oracle needs the extra accuracy).
    pub fn coord_christoffels(&self, p: Chart4) -> Result<[[[f64; 4]; 4]; 4]> {
        let g0 = self.coord_metric(p)?;
        let ginv = na4(&g0)
            .try_inverse()
            .ok_or_else(|| GeomError::InvalidStructure("singular coordinate metric".into()))?;
        let h = 1e-3;
        let mut dg = [[[0.0; 4]; 4]; 4]; // dg[a][b][c] = ∂_c g_ab
        for cdir in 0..4 {
            let shift = |s: f64| -> Result<[[f64; 4]; 4]> {
                let mut q = p;
                q[cdir] += s;
                self.coord_metric(q)
            };
            let g_m2 = shift(-2.0 * h)?;
            let g_m1 = shift(-h)?;
            let g_p1 = shift(h)?;
            let g_p2 = shift(2.0 * h)?;
            for a in 0..4 {
                for b in 0..4 {
                    dg[a][b][cdir] =
                        (g_m2[a][b] - 8.0 * g_m1[a][b] + 8.0 * g_p1[a][b] - g_p2[a][b]) / (12.0 * h);
                }
            }
        }
        let mut gam = [[[0.0; 4]; 4]; 4]; // gam[c][a][b] = Γ^c_{ab}
        for cidx in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let mut acc = 0.0;
                    for d in 0..4 {
                        acc += ginv[(cidx, d)] * (dg[d][a][b] + dg[d][b][a] - dg[a][b][d]);
                    }
                    gam[cidx][a][b] = 0.5 * acc;
                }
            }
        }
        Ok(gam)
    }

    /// Curvature `R(E_i,E_j)E_k` computed purely from the coordinate metric.
    ///
    /// Independent of the frame Koszul route; double finite differencing of
    /// the coordinate Christoffels with a wider step to limit noise.
    pub fn curvature_via_coords(&self, p: Chart4, i: usize, j: usize, k: usize) -> Result<Vector4<f64>> {
        let h = 1e-3;
        let f = self.frame_matrix(p)?;
        // R^d_{c ab} with the sign convention R(X,Y) = ∇_{[X,Y]} − [∇_X,∇_Y]
        let mut dgam = [[[[0.0; 4]; 4]; 4]; 4]; // dgam[e][c][a][b] = ∂_e Γ^c_{ab}
        for e in 0..4 {
            let shift = |s: f64| -> Result<[[[f64; 4]; 4]; 4]> {
                let mut q = p;
                q[e] += s;
                self.coord_christoffels(q)
            };
            let g_m2 = shift(-2.0 * h)?;
            let g_m1 = shift(-h)?;
            let g_p1 = shift(h)?;
            let g_p2 = shift(2.0 * h)?;
            for c in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        dgam[e][c][a][b] = (g_m2[c][a][b] - 8.0 * g_m1[c][a][b]
                            + 8.0 * g_p1[c][a][b]
                            - g_p2[c][a][b])
                            / (12.0 * h);
                    }
                }
            }
        }
        let gam = self.coord_christoffels(p)?;
        let mut r = [[[[0.0; 4]; 4]; 4]; 4]; // r[d][c][a][b] = component d of R(∂a,∂b)∂c
        for d in 0..4 {
            for c in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        let mut acc = -(dgam[a][d][b][c] - dgam[b][d][a][c]);
                        for e in 0..4 {
                            acc -= gam[d][a][e] * gam[e][b][c] - gam[d][b][e] * gam[e][a][c];
                        }
                        r[d][c][a][b] = acc;
                    }
                }
            }
        }
        let mut out = [0.0; 4];
        for d in 0..4 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        acc += f[a][i] * f[b][j] * f[c][k] * r[d][c][a][b];
                    }
                }
            }
            out[d] = acc;
        }
        self.to_frame(p, out)
    }

    /// Deterministic chart sample points (low-discrepancy van der Corput grid).
    pub fn sample_points(&self, n: usize) -> Vec<Chart4> {
        match &self.frame {
            FrameSpec::Abstract => vec![[0.0; 4]; n.max(1)],
            FrameSpec::Chart(_) => {
                let mut pts = Vec::with_capacity(n);
                for s in 0..n {
                    let mut p = [0.0; 4];
                    for (a, base) in [2u32, 3, 5, 7].iter().enumerate() {
                        p[a] = 2.0 * van_der_corput(s as u32 + 1, *base) - 1.0;
                    }
                    pts.push(p);
                }
                pts
            }
        }
    }
}

fn van_der_corput(mut n: u32, base: u32) -> f64 {
    let mut q = 0.0;
    let mut denom = 1.0;
    while n > 0 {
        denom *= base as f64;
        q += (n % base) as f64 / denom;
        n /= base;
    }
    q
}

fn na4(m: &[[f64; 4]; 4]) -> nalgebra::Matrix4<f64> {
    nalgebra::Matrix4::from_fn(|r, c| m[r][c])
}

fn from_na4(m: &nalgebra::Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = m[(r, c)];
        }
    }
    out
}

/// `R(a)` as a tangent-space endomorphism, for a 2-vector `a` (constant case).
pub fn curvature_endo_biv_constant<S: Scalar>(
    c: &StructureConstants<S>,
    gamma: &ConnectionCoefficients<S>,
    a: &Bivector<S>,
) -> SkewEndo4<S> {
    let mut out = SkewEndo4::zero();
    for (idx, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        if !a.0[idx].is_zero() {
            out = out.add(&curvature_endo_constant(c, gamma, i, j).scale(a.0[idx]));
        }
    }
    out
}

/// Frame-level identity `⟨R(a)b, c⟩ = ⟨R_op(b×c), a⟩` residual over given inputs.
///
/// `R(a)b` is the derivation action, `R_op` the curvature operator for the
/// ½-det metric; `b`, `c` must be self-dual.
pub fn curvature_cross_identity_residual(
    m: &FramedManifold,
    p: Chart4,
    a: &Bivector<f64>,
    b: &Bivector<f64>,
    c: &Bivector<f64>,
) -> f64 {
    let lhs = m.curvature_derivation(p, a, b).inner(c);
    let bc = crate::algebra::cross(b, c, m.orientation());
    let rhs = m.curvature_operator_apply(p, &bc).inner(a);
    (lhs - rhs).abs()
}

/// Left-hand sides of the compatibility checks `K_a` vs curvature used in proofs:
/// for `a` self-dual and `b` anti-self-dual, `K_a` and `K_b` commute.
pub fn k_commute_residual(a: &Bivector<f64>, b: &Bivector<f64>) -> f64 {
    let ka = k_endo(a);
    let kb = k_endo(b);
    let comm = ka.compose(&kb).add(&kb.compose(&ka).scale(-1.0));
    comm.max_abs_f64()
}

/// Residual of `K_a∘K_b = −⟨a,b⟩ Id + K_{a×b}` for self-dual `a`, `b`.
pub fn k_composition_residual(a: &Bivector<f64>, b: &Bivector<f64>, o: Orientation) -> f64 {
    let lhs = k_endo(a).compose(&k_endo(b));
    let mut rhs = k_endo(&crate::algebra::cross(a, b, o));
    let ip = a.inner(b);
    for i in 0..4 {
        rhs.0[i][i] -= ip;
    }
    lhs.add(&rhs.scale(-1.0)).max_abs_f64()
}

/// Residual of the wedge identity `X∧Y − JX∧JY ∈ Λ²₊` used in the minimality proof.
pub fn j_invariant_wedge_residual(
    o: Orientation,
    j: &SkewEndo4<f64>,
    x: &Vector4<f64>,
    y: &Vector4<f64>,
) -> f64 {
    let b = wedge(x, y).sub(&wedge(&j.apply(x), &j.apply(y)));
    b.anti_self_dual_part(o).norm()
}

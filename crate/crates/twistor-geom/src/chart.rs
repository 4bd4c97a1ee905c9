//! Coordinate-chart oracle for the twistor Levi-Civita connection.
//!
//! Builds the 7-dimensional chart `(x̃_1..x̃_4, y_1..y_3)` on the total space
//! of the self-dual 2-vector bundle, with `y_j(τ) = ⟨τ, s_j⟩` against the
//! oriented triple of the base frame, expresses `h_t` there, and derives the
//! connection by central differences. The unit-sphere bundle sits inside the
//! chart isometrically, so its connection is the tangential projection of the
//! ambient one. Everything here is independent of the closed-form twistor
//! formulas it is used to check: only the frame, its structure functions and
//! the ½-det metric enter.
//!
//! Tolerance hierarchy: analytic identities are checked at 1e−10, the
//! finite-difference comparisons at 1e−6 with the default step 1e−4.

use crate::algebra::Bivector;
use crate::error::{GeomError, Result};
use crate::manifold::{BivectorField, Chart4, FrameVectorField, FramedManifold};
use crate::twistor::{TwistorPoint, TwistorTangent};
use nalgebra::{SMatrix, SVector};

pub const ORACLE_FD_STEP: f64 = 1e-4;
pub const ORACLE_TOL: f64 = 1e-6;

type Mat7 = SMatrix<f64, 7, 7>;
type Vec7 = SVector<f64, 7>;

/// Chart point of the 2-vector bundle; on the twistor space `Σ y_j² = 1`.
#[derive(Debug, Clone, Copy)]
pub struct TwistorChartPoint {
    pub x: Chart4,
    pub y: [f64; 3],
}

impl TwistorChartPoint {
    pub fn sphere_residual(&self) -> f64 {
        (self.y.iter().map(|v| v * v).sum::<f64>() - 1.0).abs()
    }
}

/// A vector field on the 7-dimensional chart.
pub type ChartField = Box<dyn Fn([f64; 7]) -> [f64; 7]>;

pub struct ChartOracle<'a> {
    m: &'a FramedManifold,
    t: f64,
}

impl<'a> ChartOracle<'a> {
    pub fn new(m: &'a FramedManifold, t: f64) -> Result<Self> {
        if !m.has_chart() {
            return Err(GeomError::NoChart(m.name().to_string()));
        }
        Ok(ChartOracle { m, t })
    }

    pub fn chart_point(&self, tau: &TwistorPoint) -> TwistorChartPoint {
        let triple = self.m.sd_triple();
        let y = triple.coords(&tau.sigma);
        TwistorChartPoint { x: tau.base, y }
    }

    /// Packed 7-vector of chart coordinates of a twistor point.
    pub fn chart_coords(&self, tau: &TwistorPoint) -> [f64; 7] {
        Self::pack(&self.chart_point(tau))
    }

    fn pack(q: &TwistorChartPoint) -> [f64; 7] {
        [q.x[0], q.x[1], q.x[2], q.x[3], q.y[0], q.y[1], q.y[2]]
    }

    fn unpack(q: [f64; 7]) -> TwistorChartPoint {
        TwistorChartPoint {
            x: [q[0], q[1], q[2], q[3]],
            y: [q[4], q[5], q[6]],
        }
    }

    /// `Γ̃_{ajk} = ⟨∇_{∂_a} s_j, s_k⟩` for the oriented triple.
    fn gamma_tilde(&self, x: Chart4) -> Result<[[[f64; 3]; 3]; 4]> {
        let triple = self.m.sd_triple();
        let mut out = [[[0.0; 3]; 3]; 4];
        for a in 0..4 {
            let mut coord = [0.0; 4];
            coord[a] = 1.0;
            let dir = self.m.to_frame(x, coord)?;
            for (j, sj) in triple.members().iter().enumerate() {
                let ns = self
                    .m
                    .nabla_bivector(x, &dir, &BivectorField::Constant(**sj));
                for (k, sk) in triple.members().iter().enumerate() {
                    out[a][j][k] = ns.inner(sk);
                }
            }
        }
        Ok(out)
    }

    /// Fiber drift of the coordinate fields: `∂x̃_a = (∂_a)^h + Σ_k w_a^k ∂y_k`.
    fn drift(&self, q: &TwistorChartPoint) -> Result<[[f64; 3]; 4]> {
        let gt = self.gamma_tilde(q.x)?;
        let mut w = [[0.0; 3]; 4];
        for a in 0..4 {
            for k in 0..3 {
                for j in 0..3 {
                    w[a][k] += q.y[j] * gt[a][j][k];
                }
            }
        }
        Ok(w)
    }

    /// `h_t` on the 7-dimensional chart (flat radial extension off the sphere).
    pub fn metric(&self, q7: [f64; 7]) -> Result<Mat7> {
        let q = Self::unpack(q7);
        let g = self.m.coord_metric(q.x)?;
        let w = self.drift(&q)?;
        let mut h = Mat7::zeros();
        for a in 0..4 {
            for b in 0..4 {
                let mut v = g[a][b];
                for k in 0..3 {
                    v += self.t * w[a][k] * w[b][k];
                }
                h[(a, b)] = v;
            }
            for k in 0..3 {
                h[(a, 4 + k)] = self.t * w[a][k];
                h[(4 + k, a)] = self.t * w[a][k];
            }
        }
        for k in 0..3 {
            h[(4 + k, 4 + k)] = self.t;
        }
        Ok(h)
    }

    /// Chart Christoffels `Γ^c_{ab}` of the 7-dimensional metric at `q`.
    pub fn christoffels(&self, q7: [f64; 7], step: f64) -> Result<[[[f64; 7]; 7]; 7]> {
        let h0 = self.metric(q7)?;
        let hinv = h0.try_inverse().ok_or_else(|| {
            GeomError::InvalidStructure("chart metric singular".into())
        })?;
        let mut dh = [[[0.0; 7]; 7]; 7]; // dh[c][a][b] = ∂_c H_ab
        for c in 0..7 {
            let mut qp = q7;
            let mut qm = q7;
            qp[c] += step;
            qm[c] -= step;
            let hp = self.metric(qp)?;
            let hm = self.metric(qm)?;
            for a in 0..7 {
                for b in 0..7 {
                    dh[c][a][b] = (hp[(a, b)] - hm[(a, b)]) / (2.0 * step);
                }
            }
        }
        let mut gam = [[[0.0; 7]; 7]; 7];
        for c in 0..7 {
            for a in 0..7 {
                for b in 0..7 {
                    let mut acc = 0.0;
                    for d in 0..7 {
                        acc += hinv[(c, d)] * (dh[a][d][b] + dh[b][d][a] - dh[d][a][b]);
                    }
                    gam[c][a][b] = 0.5 * acc;
                }
            }
        }
        Ok(gam)
    }

    /// Horizontal lift of a frame-component field as a chart field.
    pub fn lift_field(&self, x: &FrameVectorField) -> Result<ChartField> {
        let m = self.m.clone();
        let triple = self.m.sd_triple();
        let x = x.clone();
        Ok(Box::new(move |q7: [f64; 7]| {
            let q = Self::unpack(q7);
            let xv = x.at(q.x);
            let coords = m.to_coords(q.x, &xv).expect("chart frame");
            let mut out = [0.0; 7];
            out[..4].copy_from_slice(&coords);
            // fiber components: −Σ_j y_j ⟨∇_X s_j, s_k⟩
            for (j, sj) in triple.members().iter().enumerate() {
                let ns = m.nabla_bivector(q.x, &xv, &BivectorField::Constant(**sj));
                for (k, sk) in triple.members().iter().enumerate() {
                    out[4 + k] -= q.y[j] * ns.inner(sk);
                }
            }
            out
        }))
    }

    /// Vertical field tangent to the sphere fibres: `y ↦ v0 − (v0·y) y`.
    pub fn vertical_field(v0: [f64; 3]) -> ChartField {
        Box::new(move |q7: [f64; 7]| {
            let y = [q7[4], q7[5], q7[6]];
            let dot = v0[0] * y[0] + v0[1] * y[1] + v0[2] * y[2];
            let mut out = [0.0; 7];
            for k in 0..3 {
                out[4 + k] = v0[k] - dot * y[k];
            }
            out
        })
    }

    /// Ambient covariant derivative `(D_U V)^c = U^a ∂_a V^c + Γ^c_{ab} U^a V^b`.
    pub fn ambient_derivative(
        &self,
        q7: [f64; 7],
        u: [f64; 7],
        v: &ChartField,
        step: f64,
    ) -> Result<[f64; 7]> {
        let gam = self.christoffels(q7, step)?;
        let v0 = v(q7);
        let mut out = [0.0; 7];
        for c in 0..7 {
            let mut acc = 0.0;
            for a in 0..7 {
                if u[a] == 0.0 {
                    continue;
                }
                let mut qp = q7;
                let mut qm = q7;
                qp[a] += step;
                qm[a] -= step;
                acc += u[a] * (v(qp)[c] - v(qm)[c]) / (2.0 * step);
                for b in 0..7 {
                    acc += gam[c][a][b] * u[a] * v0[b];
                }
            }
            out[c] = acc;
        }
        Ok(out)
    }

    /// `H`-orthogonal projection onto the tangent space of the sphere bundle.
    pub fn project_tangent(&self, q7: [f64; 7], w: [f64; 7]) -> Result<[f64; 7]> {
        let h = self.metric(q7)?;
        let y = [q7[4], q7[5], q7[6]];
        // tangent basis: the four x̃-directions and two fiber directions ⊥ y
        let mut fib = Vec::new();
        for cand in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let dot = cand[0] * y[0] + cand[1] * y[1] + cand[2] * y[2];
            let v = [cand[0] - dot * y[0], cand[1] - dot * y[1], cand[2] - dot * y[2]];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 0.5 {
                fib.push([v[0] / n, v[1] / n, v[2] / n]);
            }
            if fib.len() == 2 {
                break;
            }
        }
        let mut basis = [[0.0; 7]; 6];
        for a in 0..4 {
            basis[a][a] = 1.0;
        }
        for (i, f) in fib.iter().enumerate() {
            basis[4 + i][4] = f[0];
            basis[4 + i][5] = f[1];
            basis[4 + i][6] = f[2];
        }
        let mut tb = SMatrix::<f64, 7, 6>::zeros();
        for c in 0..6 {
            for r in 0..7 {
                tb[(r, c)] = basis[c][r];
            }
        }
        let wv = Vec7::from_column_slice(&w);
        let gram = tb.transpose() * h * tb;
        let rhs = tb.transpose() * h * wv;
        let coef = gram.try_inverse().ok_or_else(|| {
            GeomError::InvalidStructure("degenerate tangent Gram matrix".into())
        })? * rhs;
        let proj = tb * coef;
        let mut out = [0.0; 7];
        for r in 0..7 {
            out[r] = proj[r];
        }
        Ok(out)
    }

    /// Splits a chart tangent vector at `q` into a twistor tangent.
    pub fn to_twistor_tangent(&self, q7: [f64; 7], w: [f64; 7]) -> Result<TwistorTangent> {
        let q = Self::unpack(q7);
        let triple = self.m.sd_triple();
        let hor = self.m.to_frame(q.x, [w[0], w[1], w[2], w[3]])?;
        let drift = self.drift(&q)?;
        let mut fib = [w[4], w[5], w[6]];
        for k in 0..3 {
            for a in 0..4 {
                fib[k] += w[a] * drift[a][k];
            }
        }
        let vert = triple
            .s1
            .scale(fib[0])
            .add(&triple.s2.scale(fib[1]))
            .add(&triple.s3.scale(fib[2]));
        Ok(TwistorTangent {
            horizontal: hor,
            vertical: vert,
        })
    }

    /// Finite-difference `D_{X^h} Y^h` at `tau`, projected to the sphere bundle.
    pub fn fd_d_hh(
        &self,
        x: &FrameVectorField,
        y: &FrameVectorField,
        tau: &TwistorPoint,
        step: f64,
    ) -> Result<TwistorTangent> {
        let q7 = Self::pack(&self.chart_point(tau));
        let xf = self.lift_field(x)?;
        let yf = self.lift_field(y)?;
        let u = xf(q7);
        let amb = self.ambient_derivative(q7, u, &yf, step)?;
        let proj = self.project_tangent(q7, amb)?;
        self.to_twistor_tangent(q7, proj)
    }

    /// Finite-difference `D_V X^h` for a vertical direction `V ⊥ σ`.
    pub fn fd_d_vh(
        &self,
        v: &Bivector<f64>,
        x: &FrameVectorField,
        tau: &TwistorPoint,
        step: f64,
    ) -> Result<TwistorTangent> {
        let q7 = Self::pack(&self.chart_point(tau));
        let triple = self.m.sd_triple();
        let vy = triple.coords(v);
        let mut u = [0.0; 7];
        u[4] = vy[0];
        u[5] = vy[1];
        u[6] = vy[2];
        let xf = self.lift_field(x)?;
        let amb = self.ambient_derivative(q7, u, &xf, step)?;
        let proj = self.project_tangent(q7, amb)?;
        self.to_twistor_tangent(q7, proj)
    }

    /// Same derivative with two step sizes; errors out when they disagree
    /// by more than ten times the oracle tolerance.
    pub fn fd_d_hh_validated(
        &self,
        x: &FrameVectorField,
        y: &FrameVectorField,
        tau: &TwistorPoint,
    ) -> Result<TwistorTangent> {
        let a = self.fd_d_hh(x, y, tau, ORACLE_FD_STEP)?;
        let b = self.fd_d_hh(x, y, tau, 2.0 * ORACLE_FD_STEP)?;
        let diff = crate::twistor::h_t_norm(self.t, &a.sub(&b));
        if diff > 10.0 * ORACLE_TOL {
            return Err(GeomError::StepSizeFailure {
                residual: diff,
                limit: 10.0 * ORACLE_TOL,
            });
        }
        Ok(a)
    }

    /// Horizontal component of `D_{V1} V2` for fibre fields: the fibre
    /// second-fundamental-form residual (zero for totally geodesic fibres).
    pub fn fiber_second_fundamental_residual(
        &self,
        tau: &TwistorPoint,
        v1: &Bivector<f64>,
        v2: &Bivector<f64>,
        step: f64,
    ) -> Result<f64> {
        let q7 = Self::pack(&self.chart_point(tau));
        let triple = self.m.sd_triple();
        let c1 = triple.coords(v1);
        let c2 = triple.coords(v2);
        let mut u = [0.0; 7];
        u[4] = c1[0];
        u[5] = c1[1];
        u[6] = c1[2];
        let field = Self::vertical_field(c2);
        let amb = self.ambient_derivative(q7, u, &field, step)?;
        let proj = self.project_tangent(q7, amb)?;
        let tt = self.to_twistor_tangent(q7, proj)?;
        Ok(tt.horizontal.norm())
    }
}

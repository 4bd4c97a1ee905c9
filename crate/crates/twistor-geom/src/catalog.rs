//! Concrete example manifolds and structures, with their regression fixtures.
//!
//! Each entry packages a framed manifold, one or more almost Hermitian
//! structures on it, and the bracket / covariant-derivative / drift tables
//! the construction must reproduce. Fixtures are checked when the entry is
//! built; construction fails on any mismatch. The same tables are rendered
//! into `fixtures/kodaira_tables.txt` for human consumption and kept in sync
//! by a test.
//!
//! The compact nilpotent/solvable quotients are computed on the universal
//! cover with left-invariant data; pointwise tensors do not see the lattice,
//! so the global chart `(x, y, u, v)` is used throughout.

use crate::algebra::{Orientation, SelfDualTriple, Vector4};
use crate::error::{GeomError, Result};
use crate::hermitian::{AlmostHermitian, StructureClass};
use crate::manifold::{
    koszul, Chart4, ConnectionCoefficients, FramedManifold, StructureConstants,
};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Parameters selecting a structure inside a family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StructureParams {
    pub epsilon: Option<i8>,
    pub epsilon1: Option<i8>,
    pub epsilon2: Option<i8>,
    pub phi: Option<f64>,
}

/// One structure on one (possibly structure-adapted) framed presentation.
#[derive(Clone)]
pub struct StructurePresentation {
    pub name: String,
    pub params: StructureParams,
    pub hermitian: AlmostHermitian,
    pub expected_class: StructureClass,
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub structures: Vec<StructurePresentation>,
    pub expected_minimal: bool,
}

impl CatalogEntry {
    pub fn structure(&self, name: &str) -> Option<&StructurePresentation> {
        self.structures.iter().find(|s| s.name == name)
    }
}

/// Name → builder registry; the CLI selects entries from here at runtime.
pub fn registry() -> Vec<(&'static str, fn() -> Result<CatalogEntry>)> {
    vec![
        ("flat_r4", flat_r4 as fn() -> Result<CatalogEntry>),
        ("kodaira_primary", kodaira_primary),
        ("kodaira_secondary", kodaira_secondary),
        ("s3xs1", s3xs1),
    ]
}

pub fn entry_ids() -> Vec<&'static str> {
    registry().into_iter().map(|(id, _)| id).collect()
}

pub fn build(id: &str) -> Result<CatalogEntry> {
    for (name, f) in registry() {
        if name == id {
            return f();
        }
    }
    Err(GeomError::InvalidStructure(format!(
        "unknown catalog entry `{id}`; known: {:?}",
        entry_ids()
    )))
}

// ---------------------------------------------------------------------------
// fixture tables (generic over the scalar so the exact mode reuses them)
// ---------------------------------------------------------------------------

pub mod tables {
    use super::*;

    /// Bracket table of the primary family: `[A_1, A_2] = −2 A_4`.
    pub fn primary_structure_constants<S: Scalar>() -> StructureConstants<S> {
        let mut c = StructureConstants([[[S::zero(); 4]; 4]; 4]);
        c.set_bracket(0, 1, [S::zero(), S::zero(), S::zero(), S::from_int(-2)]);
        c
    }

    /// Bracket table of the secondary family:
    /// `[A_1,A_2] = −2A_4`, `2[A_3,A_1] = A_2`, `2[A_3,A_2] = −A_1`.
    pub fn secondary_structure_constants<S: Scalar>() -> StructureConstants<S> {
        let mut c = StructureConstants([[[S::zero(); 4]; 4]; 4]);
        c.set_bracket(0, 1, [S::zero(), S::zero(), S::zero(), S::from_int(-2)]);
        c.set_bracket(2, 0, [S::zero(), S::half(), S::zero(), S::zero()]);
        c.set_bracket(2, 1, [-S::half(), S::zero(), S::zero(), S::zero()]);
        c
    }

    /// Bracket table of the adapted frame of the symplectic family:
    /// `[E_1, E_4] = −2(k E_2 + m E_3)` with `k = ε1ε2 cos φ`, `m = ε2 sin φ`.
    pub fn symplectic_structure_constants<S: Scalar>(k: S, m: S) -> StructureConstants<S> {
        let mut c = StructureConstants([[[S::zero(); 4]; 4]; 4]);
        c.set_bracket(
            0,
            3,
            [S::zero(), S::from_int(-2) * k, S::from_int(-2) * m, S::zero()],
        );
        c
    }

    /// Product-frame bracket table of the round 3-sphere times a circle:
    /// cyclically `[E_1,E_2] = −2E_3` on the sphere factor, `E_4` central.
    pub fn s3xs1_structure_constants<S: Scalar>() -> StructureConstants<S> {
        let two = S::from_int(2);
        let mut c = StructureConstants([[[S::zero(); 4]; 4]; 4]);
        c.set_bracket(0, 1, [S::zero(), S::zero(), -two, S::zero()]);
        c.set_bracket(1, 2, [-two, S::zero(), S::zero(), S::zero()]);
        c.set_bracket(2, 0, [S::zero(), -two, S::zero(), S::zero()]);
        c
    }

    /// Non-zero `∇_{A_i} A_j` of the primary family: `(i, j, coefficients)`.
    pub fn primary_nabla_a<S: Scalar>() -> Vec<(usize, usize, [S; 4])> {
        let one = S::one();
        vec![
            (0, 1, [S::zero(), S::zero(), S::zero(), -one]),
            (1, 0, [S::zero(), S::zero(), S::zero(), one]),
            (0, 3, [S::zero(), one, S::zero(), S::zero()]),
            (3, 0, [S::zero(), one, S::zero(), S::zero()]),
            (1, 3, [-one, S::zero(), S::zero(), S::zero()]),
            (3, 1, [-one, S::zero(), S::zero(), S::zero()]),
        ]
    }

    /// `∇_{A_i} s_k` coefficients over the oriented triple for the Hermitian
    /// family, `[i][k] → coefficients of (s_1, s_2, s_3)`.
    pub fn primary_nabla_s_hermitian<S: Scalar>(eps: S) -> [[[S; 3]; 3]; 4] {
        let z = S::zero();
        let one = S::one();
        let mut t = [[[z; 3]; 3]; 4];
        t[0][0] = [z, z, -eps]; // ∇_{A1}s1 = −ε s3
        t[0][2] = [eps, z, z]; // ∇_{A1}s3 = ε s1
        t[1][0] = [z, one, z]; // ∇_{A2}s1 = s2
        t[1][1] = [-one, z, z]; // ∇_{A2}s2 = −s1
        t[3][1] = [z, z, eps]; // ∇_{A4}s2 = ε s3
        t[3][2] = [z, -eps, z]; // ∇_{A4}s3 = −ε s2
        t
    }

    /// Non-zero `∇_{E_i} E_j` of the symplectic adapted frame.
    pub fn symplectic_nabla_e<S: Scalar>(k: S, m: S) -> Vec<(usize, usize, [S; 4])> {
        let z = S::zero();
        vec![
            (0, 1, [z, z, z, k]),
            (1, 0, [z, z, z, k]),
            (0, 2, [z, z, z, m]),
            (2, 0, [z, z, z, m]),
            (0, 3, [z, -k, -m, z]),
            (3, 0, [z, k, m, z]),
            (1, 3, [-k, z, z, z]),
            (3, 1, [-k, z, z, z]),
            (2, 3, [-m, z, z, z]),
            (3, 2, [-m, z, z, z]),
        ]
    }

    /// `∇_{E_i} s_k` coefficients for the symplectic adapted frame.
    pub fn symplectic_nabla_s<S: Scalar>(k: S, m: S) -> [[[S; 3]; 3]; 4] {
        let z = S::zero();
        let mut t = [[[z; 3]; 3]; 4];
        t[0][0] = [z, z, k];
        t[0][1] = [z, z, m];
        t[0][2] = [-k, -m, z];
        t[1][0] = [z, k, z];
        t[1][1] = [-k, z, z];
        t[2][0] = [z, m, z];
        t[2][1] = [-m, z, z];
        t[3][0] = [z, z, -m];
        t[3][1] = [z, z, k];
        t[3][2] = [m, -k, z];
        t
    }

    /// Sphere-drift vectors of the Hermitian family, `u_i(x)` rows.
    pub fn u_hermitian<S: Scalar>(eps: S, x: &[S; 3]) -> [[S; 3]; 4] {
        let z = S::zero();
        [
            [-eps * x[2], z, eps * x[0]],
            [x[1], -x[0], z],
            [z, z, z],
            [z, eps * x[2], -eps * x[1]],
        ]
    }

    /// Sphere-drift vectors of the symplectic family.
    pub fn u_symplectic<S: Scalar>(k: S, m: S, x: &[S; 3]) -> [[S; 3]; 4] {
        let z = S::zero();
        [
            [x[2] * k, x[2] * m, -(x[0] * k) - x[1] * m],
            [x[1] * k, -(x[0] * k), z],
            [x[1] * m, -(x[0] * m), z],
            [-(x[2] * m), x[2] * k, x[0] * m - x[1] * k],
        ]
    }

    /// Drift computed from the connection: `u_i(x)_k = −Σ_j x_j ⟨∇_{E_i}s_j, s_k⟩`.
    pub fn drift_from_connection<S: Scalar>(
        gamma: &ConnectionCoefficients<S>,
        triple: &SelfDualTriple<S>,
        x: &[S; 3],
    ) -> [[S; 3]; 4] {
        let mut out = [[S::zero(); 3]; 4];
        for i in 0..4 {
            for (j, sj) in triple.members().iter().enumerate() {
                let ns = gamma.nabla_biv(i, sj);
                for (kk, sk) in triple.members().iter().enumerate() {
                    out[i][kk] = out[i][kk] - x[j] * ns.inner(sk);
                }
            }
        }
        out
    }

    /// `∇_{E_i} s_k` computed from the connection, as triple coefficients.
    pub fn nabla_s_from_connection<S: Scalar>(
        gamma: &ConnectionCoefficients<S>,
        triple: &SelfDualTriple<S>,
    ) -> [[[S; 3]; 3]; 4] {
        let mut out = [[[S::zero(); 3]; 3]; 4];
        for i in 0..4 {
            for (kk, sk) in triple.members().iter().enumerate() {
                let ns = gamma.nabla_biv(i, sk);
                for (l, sl) in triple.members().iter().enumerate() {
                    out[i][kk][l] = ns.inner(sl);
                }
            }
        }
        out
    }
}

/// Renders the embedded fixture tables in the human-readable layout mirrored
/// at `fixtures/kodaira_tables.txt`; a test keeps file and code in sync.
pub fn render_fixture_tables() -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let frac = |v: f64| -> String {
        if v == v.round() {
            format!("{}", v as i64)
        } else {
            format!("{v}")
        }
    };
    writeln!(out, "Left-invariant fixture tables of the catalog families.").unwrap();
    writeln!(out, "eps entries abbreviate the sign parameter; k = e1*e2*cos(phi), m = e2*sin(phi).").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[primary] brackets: [A1,A2] = -2 A4, all others zero").unwrap();
    writeln!(out, "[primary] covariant derivatives (A-frame):").unwrap();
    for (i, j, v) in tables::primary_nabla_a::<f64>() {
        let k = v.iter().position(|c| *c != 0.0).unwrap();
        writeln!(out, "  nabla_A{} A{} = {} A{}", i + 1, j + 1, frac(v[k]), k + 1).unwrap();
    }
    writeln!(out, "[primary, J_eps] covariant derivatives of the oriented triple:").unwrap();
    // render symbolically through the two sign values
    for (label, eps) in [("eps=+1", 1.0), ("eps=-1", -1.0)] {
        writeln!(out, "  ({label})").unwrap();
        let t = tables::primary_nabla_s_hermitian(eps);
        for i in 0..4 {
            for kk in 0..3 {
                for l in 0..3 {
                    if t[i][kk][l] != 0.0 {
                        writeln!(
                            out,
                            "    nabla_A{} s{} = {} s{}",
                            i + 1,
                            kk + 1,
                            frac(t[i][kk][l]),
                            l + 1
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    writeln!(out, "[primary, J_eps] sphere drifts: u1 = eps(-x3, 0, x1), u2 = (x2, -x1, 0), u3 = 0, u4 = eps(0, x3, -x2)").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[primary, symplectic family] brackets: [E1,E4] = -2(k E2 + m E3)").unwrap();
    writeln!(out, "[primary, symplectic family] covariant derivatives (k, m symbolic):").unwrap();
    // evaluate at (k, m) = (1, 0) and (0, 1) to display the two coefficient slots
    let tk = tables::symplectic_nabla_e(1.0, 0.0);
    let tm = tables::symplectic_nabla_e(0.0, 1.0);
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, _) in tk.iter().chain(tm.iter()) {
        seen.insert((*i, *j));
    }
    for (i, j) in seen {
        let vk = tk
            .iter()
            .find(|(a, b, _)| (*a, *b) == (i, j))
            .map(|(_, _, v)| *v)
            .unwrap_or([0.0; 4]);
        let vm = tm
            .iter()
            .find(|(a, b, _)| (*a, *b) == (i, j))
            .map(|(_, _, v)| *v)
            .unwrap_or([0.0; 4]);
        let mut terms = Vec::new();
        for l in 0..4 {
            match (vk[l] != 0.0, vm[l] != 0.0) {
                (true, false) => terms.push(format!("{} k E{}", frac(vk[l]), l + 1)),
                (false, true) => terms.push(format!("{} m E{}", frac(vm[l]), l + 1)),
                (true, true) => terms.push(format!(
                    "({} k + {} m) E{}",
                    frac(vk[l]),
                    frac(vm[l]),
                    l + 1
                )),
                (false, false) => {}
            }
        }
        writeln!(out, "  nabla_E{} E{} = {}", i + 1, j + 1, terms.join(" + ")).unwrap();
    }
    writeln!(out, "[primary, symplectic family] triple derivatives:").unwrap();
    let sk = tables::symplectic_nabla_s(1.0, 0.0);
    let sm = tables::symplectic_nabla_s(0.0, 1.0);
    for i in 0..4 {
        for kk in 0..3 {
            let mut terms = Vec::new();
            for l in 0..3 {
                match (sk[i][kk][l] != 0.0, sm[i][kk][l] != 0.0) {
                    (true, false) => terms.push(format!("{} k s{}", frac(sk[i][kk][l]), l + 1)),
                    (false, true) => terms.push(format!("{} m s{}", frac(sm[i][kk][l]), l + 1)),
                    (true, true) => terms.push(format!(
                        "({} k + {} m) s{}",
                        frac(sk[i][kk][l]),
                        frac(sm[i][kk][l]),
                        l + 1
                    )),
                    (false, false) => {}
                }
            }
            if !terms.is_empty() {
                writeln!(out, "  nabla_E{} s{} = {}", i + 1, kk + 1, terms.join(" + ")).unwrap();
            }
        }
    }
    writeln!(out, "[primary, symplectic family] sphere drifts:").unwrap();
    writeln!(out, "  u1 = (x3 k, x3 m, -x1 k - x2 m)").unwrap();
    writeln!(out, "  u2 = (x2 k, -x1 k, 0)").unwrap();
    writeln!(out, "  u3 = (x2 m, -x1 m, 0)").unwrap();
    writeln!(out, "  u4 = (-x3 m, x3 k, x1 m - x2 k)").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[secondary] brackets: [A1,A2] = -2 A4, [A3,A1] = 1/2 A2, [A3,A2] = -1/2 A1").unwrap();
    writeln!(out, "[s3xs1] brackets (product frame): [E1,E2] = -2 E3, [E2,E3] = -2 E1, [E3,E1] = -2 E2; E4 central").unwrap();
    out
}

// ---------------------------------------------------------------------------
// chart realizations
// ---------------------------------------------------------------------------

fn identity_frame(_p: Chart4) -> [[f64; 4]; 4] {
    let mut id = [[0.0; 4]; 4];
    for i in 0..4 {
        id[i][i] = 1.0;
    }
    id
}

/// Left-invariant frame of the primary family on the global chart (x,y,u,v):
/// `A1 = ∂x − x∂u + y∂v`, `A2 = ∂y − y∂u − x∂v`, `A3 = ∂u`, `A4 = ∂v`.
fn primary_frame(p: Chart4) -> [[f64; 4]; 4] {
    let (x, y) = (p[0], p[1]);
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-x, -y, 1.0, 0.0],
        [y, -x, 0.0, 1.0],
    ]
}

/// Adapted frame of the symplectic family: `E1 = A1`, `E4 = A2`, while
/// `E2, E3` rotate `(A3, A4)` by the structure angle.
fn symplectic_frame_explicit(e1: f64, e2: f64, phi: f64) -> impl Fn(Chart4) -> [[f64; 4]; 4] {
    let (s, c) = phi.sin_cos();
    move |p: Chart4| {
        let (x, y) = (p[0], p[1]);
        // A1 = (1,0,−x,y), A2 = (0,1,−y,−x), A3 = ∂u, A4 = ∂v
        // E1 = A1, E2 = −ε1 s A3 + ε1ε2 c A4, E3 = c A3 + ε2 s A4, E4 = A2
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-x, -e1 * s, c, -y],
            [y, e1 * e2 * c, e2 * s, -x],
        ]
    }
}

/// Left-invariant frame of the secondary family; `A1, A2` rotate with `u/2`.
fn secondary_frame(p: Chart4) -> [[f64; 4]; 4] {
    let (x, y, u) = (p[0], p[1], p[2]);
    let (sn, cs) = (0.5 * u).sin_cos();
    // C1 = ∂x + y∂v, C2 = ∂y − x∂v
    // A1 = cos(u/2) C1 + sin(u/2) C2, A2 = −sin(u/2) C1 + cos(u/2) C2
    [
        [cs, -sn, 0.0, 0.0],
        [sn, cs, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [y * cs - x * sn, -y * sn - x * cs, 0.0, 1.0],
    ]
}

fn standard_j(eps: f64) -> [[f64; 4]; 4] {
    // J E1 = ε E2, J E3 = E4
    [
        [0.0, -eps, 0.0, 0.0],
        [eps, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
}

fn secondary_j(e1: f64, e2: f64) -> [[f64; 4]; 4] {
    [
        [0.0, -e1, 0.0, 0.0],
        [e1, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -e2],
        [0.0, 0.0, e2, 0.0],
    ]
}

// ---------------------------------------------------------------------------
// entries
// ---------------------------------------------------------------------------

/// Flat Euclidean 4-space with the standard complex structure.
pub fn flat_r4() -> Result<CatalogEntry> {
    let m = Arc::new(FramedManifold::constant_with_chart(
        "flat_r4",
        Orientation::Positive,
        StructureConstants::zero(),
        identity_frame,
    )?);
    let h = AlmostHermitian::new("kahler", m, standard_j(1.0))?;
    if h.class() != StructureClass::Kahler {
        return Err(GeomError::FixtureMismatch {
            entry: "flat_r4".into(),
            detail: format!("expected a Kähler structure, classified {:?}", h.class()),
        });
    }
    Ok(CatalogEntry {
        id: "flat_r4",
        structures: vec![StructurePresentation {
            name: "kahler".into(),
            params: StructureParams::default(),
            hermitian: h,
            expected_class: StructureClass::Kahler,
        }],
        expected_minimal: true,
    })
}

/// Primary family manifold in the left-invariant frame, oriented for `J_ε`.
pub fn primary_manifold(eps: i8) -> Result<FramedManifold> {
    let orientation = if eps >= 0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    FramedManifold::constant_with_chart(
        "kodaira_primary",
        orientation,
        tables::primary_structure_constants(),
        primary_frame,
    )
}

/// The integrable structure `J_ε` on the primary family.
pub fn kodaira_hermitian(eps: i8) -> Result<StructurePresentation> {
    assert!(eps == 1 || eps == -1);
    let m = Arc::new(primary_manifold(eps)?);
    let h = AlmostHermitian::new(
        &format!("hermitian(eps={eps})"),
        m,
        standard_j(eps as f64),
    )?;
    verify_primary_hermitian_fixtures(&h, eps)?;
    Ok(StructurePresentation {
        name: format!("hermitian(eps={eps})"),
        params: StructureParams {
            epsilon: Some(eps),
            ..Default::default()
        },
        hermitian: h,
        expected_class: StructureClass::Hermitian,
    })
}

/// The symplectic structure `J^{ε,φ}` on the primary family, presented in
/// its adapted frame.
pub fn kodaira_symplectic(e1: i8, e2: i8, phi: f64) -> Result<StructurePresentation> {
    assert!(e1 == 1 || e1 == -1);
    assert!(e2 == 1 || e2 == -1);
    let (s, c) = phi.sin_cos();
    let k = e1 as f64 * e2 as f64 * c;
    let m_par = e2 as f64 * s;
    let manifold = Arc::new(FramedManifold::constant_with_chart(
        "kodaira_primary",
        Orientation::Positive,
        tables::symplectic_structure_constants(k, m_par),
        symplectic_frame_explicit(e1 as f64, e2 as f64, phi),
    )?);
    let name = format!("symplectic(e1={e1},e2={e2},phi={phi:.6})");
    let h = AlmostHermitian::new(&name, manifold, standard_j(1.0))?;
    verify_primary_symplectic_fixtures(&h, e1, e2, phi)?;
    Ok(StructurePresentation {
        name,
        params: StructureParams {
            epsilon1: Some(e1),
            epsilon2: Some(e2),
            phi: Some(phi),
            ..Default::default()
        },
        hermitian: h,
        expected_class: StructureClass::AlmostKahler,
    })
}

/// Primary family: both integrable structures and the four symplectic sign
/// pairs at a representative angle.
pub fn kodaira_primary() -> Result<CatalogEntry> {
    let mut structures = Vec::new();
    for eps in [1i8, -1] {
        structures.push(kodaira_hermitian(eps)?);
    }
    let phi = std::f64::consts::FRAC_PI_6;
    for (e1, e2) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
        structures.push(kodaira_symplectic(e1, e2, phi)?);
    }
    Ok(CatalogEntry {
        id: "kodaira_primary",
        structures,
        expected_minimal: true,
    })
}

/// Left-invariant complex structure on the secondary family.
pub fn secondary_complex(e1: i8, e2: i8) -> Result<StructurePresentation> {
    let orientation = if e1 * e2 > 0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    let m = Arc::new(FramedManifold::constant_with_chart(
        "kodaira_secondary",
        orientation,
        tables::secondary_structure_constants(),
        secondary_frame,
    )?);
    let name = format!("complex(e1={e1},e2={e2})");
    let h = AlmostHermitian::new(&name, m, secondary_j(e1 as f64, e2 as f64))?;
    if h.class() != StructureClass::Hermitian {
        return Err(GeomError::FixtureMismatch {
            entry: "kodaira_secondary".into(),
            detail: format!("expected integrable non-Kähler, classified {:?}", h.class()),
        });
    }
    Ok(StructurePresentation {
        name,
        params: StructureParams {
            epsilon1: Some(e1),
            epsilon2: Some(e2),
            ..Default::default()
        },
        hermitian: h,
        expected_class: StructureClass::Hermitian,
    })
}

pub fn kodaira_secondary() -> Result<CatalogEntry> {
    let mut structures = Vec::new();
    for (e1, e2) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
        structures.push(secondary_complex(e1, e2)?);
    }
    Ok(CatalogEntry {
        id: "kodaira_secondary",
        structures,
        expected_minimal: true,
    })
}

/// Whether a left-invariant symplectic structure exists on the secondary
/// family: the closedness of the fundamental form forces `Ω(·, A_4) = 0`,
/// which is incompatible with nondegeneracy. Returns the rank deficiency
/// witness so tests can assert the obstruction.
pub fn secondary_symplectic_obstruction() -> (f64, f64, f64) {
    // dΩ = −(a14/2) α2∧α3∧α4 + (a24/2) α1∧α3∧α4 − 2 a34 α1∧α2∧α3 for
    // Ω = Σ a_ij α_i∧α_j; closure kills a14, a24, a34, degenerating Ω.
    (0.5, 0.5, 2.0)
}

/// Chart of the sphere-circle product covering the hemisphere `q_1 > 0`:
/// `x ↦ ((1, x_1, x_2, x_3)/√(1+|x|²), x_4)`, adapted frame
/// `(ξ2, ξ3, ξ1, ∂t)` expressed in chart coordinates by inverting the
/// differential of the hemisphere parametrization.
fn s3xs1_frame(p: Chart4) -> [[f64; 4]; 4] {
    let w = [1.0, p[0], p[1], p[2]];
    let s2: f64 = w.iter().map(|v| v * v).sum();
    let s = s2.sqrt();
    let q = [w[0] / s, w[1] / s, w[2] / s, w[3] / s];
    // columns of dψ restricted to the sphere factor: ∂q/∂x_a
    let mut dpsi = nalgebra::SMatrix::<f64, 4, 3>::zeros();
    for a in 0..3 {
        for b in 0..4 {
            let e = if b == a + 1 { 1.0 } else { 0.0 };
            dpsi[(b, a)] = e / s - w[b] * p[a] / (s2 * s);
        }
    }
    let pinv = (dpsi.transpose() * dpsi)
        .try_inverse()
        .expect("hemisphere parametrization is an immersion")
        * dpsi.transpose();
    let xi = sphere_frame(q);
    // frame order (ξ2, ξ3, ξ1, ∂t)
    let order = [1usize, 2, 0];
    let mut out = [[0.0; 4]; 4];
    for (col, &idx) in order.iter().enumerate() {
        let v = nalgebra::SVector::<f64, 4>::from_column_slice(&xi[idx]);
        let u = pinv * v;
        for row in 0..3 {
            out[row][col] = u[row];
        }
    }
    out[3][3] = 1.0;
    out
}

/// Product of the round 3-sphere and a circle, standard complex structure.
///
/// The adapted frame is `(E1, E2, E3, E4) = (ξ2, ξ3, ξ1, ∂t)` built from the
/// explicit global sphere frame; all tensors are left-invariant, and the
/// hemisphere chart above realizes the frame for the coordinate oracles.
pub fn s3xs1() -> Result<CatalogEntry> {
    let m = Arc::new(FramedManifold::constant_with_chart(
        "s3xs1",
        Orientation::Positive,
        tables::s3xs1_structure_constants(),
        s3xs1_frame,
    )?);
    let h = AlmostHermitian::new("standard", m, standard_j(1.0))?;
    if h.class() != StructureClass::Hermitian {
        return Err(GeomError::FixtureMismatch {
            entry: "s3xs1".into(),
            detail: format!("expected integrable non-Kähler, classified {:?}", h.class()),
        });
    }
    // parallel Lee form with ‖θ‖ = 2, as for every product of a Sasakian
    // 3-manifold with a circle
    let lee = h.lee([0.0; 4]);
    if (lee.norm_sq - 4.0).abs() > 1e-12 {
        return Err(GeomError::FixtureMismatch {
            entry: "s3xs1".into(),
            detail: format!("Lee norm² = {}, expected 4", lee.norm_sq),
        });
    }
    Ok(CatalogEntry {
        id: "s3xs1",
        structures: vec![StructurePresentation {
            name: "standard".into(),
            params: StructureParams::default(),
            hermitian: h,
            expected_class: StructureClass::Hermitian,
        }],
        expected_minimal: true,
    })
}

/// The explicit global frame of the unit 3-sphere in ambient coordinates.
pub fn sphere_frame(p: [f64; 4]) -> [[f64; 4]; 3] {
    [
        [-p[1], p[0], -p[3], p[2]],
        [-p[2], p[3], p[0], -p[1]],
        [-p[3], -p[2], p[1], p[0]],
    ]
}

// ---------------------------------------------------------------------------
// pushforward metric of the product identification M × S²
// ---------------------------------------------------------------------------

/// Metric value of Eq.-style pushforward:
/// `g(X,Y) + t⟨P − Σ_i ⟨X,E_i⟩u_i(x), Q − Σ_j ⟨Y,E_j⟩u_j(x)⟩`.
pub fn pushforward_metric(
    t: f64,
    u: &[[f64; 3]; 4],
    x_vec: &Vector4<f64>,
    p_sph: &[f64; 3],
    y_vec: &Vector4<f64>,
    q_sph: &[f64; 3],
) -> f64 {
    let mut pv = *p_sph;
    let mut qv = *q_sph;
    for i in 0..4 {
        for k in 0..3 {
            pv[k] -= x_vec.0[i] * u[i][k];
            qv[k] -= y_vec.0[i] * u[i][k];
        }
    }
    x_vec.dot(y_vec) + t * (pv[0] * qv[0] + pv[1] * qv[1] + pv[2] * qv[2])
}

// ---------------------------------------------------------------------------
// load-time fixture verification
// ---------------------------------------------------------------------------

fn check_close(entry: &str, what: &str, got: f64, want: f64, tol: f64) -> Result<()> {
    if (got - want).abs() > tol {
        return Err(GeomError::FixtureMismatch {
            entry: entry.into(),
            detail: format!("{what}: got {got}, want {want}"),
        });
    }
    Ok(())
}

fn verify_connection_table(
    entry: &str,
    gamma: &ConnectionCoefficients<f64>,
    table: &[(usize, usize, [f64; 4])],
) -> Result<()> {
    let mut expected = [[[0.0f64; 4]; 4]; 4];
    for &(i, j, v) in table {
        expected[i][j] = v;
    }
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                check_close(
                    entry,
                    &format!("∇_{{E{}}}E{} · E{}", i + 1, j + 1, k + 1),
                    gamma.0[i][j][k],
                    expected[i][j][k],
                    1e-12,
                )?;
            }
        }
    }
    Ok(())
}

fn verify_nabla_s_table(
    entry: &str,
    gamma: &ConnectionCoefficients<f64>,
    triple: &SelfDualTriple<f64>,
    expected: &[[[f64; 3]; 3]; 4],
) -> Result<()> {
    let got = tables::nabla_s_from_connection(gamma, triple);
    for i in 0..4 {
        for k in 0..3 {
            for l in 0..3 {
                check_close(
                    entry,
                    &format!("∇_{{E{}}}s{} · s{}", i + 1, k + 1, l + 1),
                    got[i][k][l],
                    expected[i][k][l],
                    1e-12,
                )?;
            }
        }
    }
    Ok(())
}

fn verify_primary_hermitian_fixtures(h: &AlmostHermitian, eps: i8) -> Result<()> {
    let entry = "kodaira_primary";
    let m = h.manifold();
    let p = [0.0; 4];
    let gamma = m.gamma_at(p);
    verify_connection_table(entry, &gamma, &tables::primary_nabla_a::<f64>())?;
    verify_nabla_s_table(
        entry,
        &gamma,
        &m.sd_triple(),
        &tables::primary_nabla_s_hermitian(eps as f64),
    )?;

    // Lee form: θ(X) = −2ε⟨X, A3⟩ with vanishing covariant derivative
    let lee = h.lee(p);
    check_close(entry, "θ(A3)", lee.theta[2], -2.0 * eps as f64, 1e-12)?;
    for i in [0usize, 1, 3] {
        check_close(entry, "θ(A_i), i≠3", lee.theta[i], 0.0, 1e-12)?;
    }
    for i in 0..4 {
        let nb = h.nabla_b(p, &Vector4::basis(i));
        check_close(entry, "∇θ", nb.norm(), 0.0, 1e-12)?;
    }

    // drift fixtures u_i^ε at a few sphere points
    for x in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [-0.5, 0.5, 1.0 / 2f64.sqrt()]] {
        let want = tables::u_hermitian(eps as f64, &x);
        let got = tables::drift_from_connection(&gamma, &m.sd_triple(), &x);
        for i in 0..4 {
            for k in 0..3 {
                check_close(entry, &format!("u_{}^ε", i + 1), got[i][k], want[i][k], 1e-12)?;
            }
        }
    }
    Ok(())
}

fn verify_primary_symplectic_fixtures(h: &AlmostHermitian, e1: i8, e2: i8, phi: f64) -> Result<()> {
    let entry = "kodaira_primary";
    let m = h.manifold();
    let p = [0.0; 4];
    let (s, c) = phi.sin_cos();
    let k = e1 as f64 * e2 as f64 * c;
    let mm = e2 as f64 * s;
    let gamma = m.gamma_at(p);
    verify_connection_table(entry, &gamma, &tables::symplectic_nabla_e(k, mm))?;
    verify_nabla_s_table(entry, &gamma, &m.sd_triple(), &tables::symplectic_nabla_s(k, mm))?;

    // ⋆-Ricci values
    let rho = h.star_ricci(p);
    check_close(entry, "ρ*(E1,E4)", rho[0][3], -(e1 as f64) * s * c, 1e-12)?;
    check_close(entry, "ρ*(E4,E1)", rho[3][0], -(e1 as f64) * s * c, 1e-12)?;
    check_close(entry, "ρ*(E1,E3)", rho[0][2], 0.0, 1e-12)?;
    check_close(entry, "ρ*(E3,E1)", rho[2][0], 0.0, 1e-12)?;

    for x in [[0.0, 0.0, 1.0], [0.6, 0.8, 0.0], [0.5, -0.5, 1.0 / 2f64.sqrt()]] {
        let want = tables::u_symplectic(k, mm, &x);
        let got = tables::drift_from_connection(&gamma, &m.sd_triple(), &x);
        for i in 0..4 {
            for kk in 0..3 {
                check_close(
                    entry,
                    &format!("u_{}^(ε,φ)", i + 1),
                    got[i][kk],
                    want[i][kk],
                    1e-12,
                )?;
            }
        }
    }
    Ok(())
}

/// Exact-arithmetic reproduction of a connection table.
pub fn rational_connection_matches<S: Scalar>(
    c: &StructureConstants<S>,
    table: &[(usize, usize, [S; 4])],
) -> bool {
    let gamma = koszul(c);
    let mut expected = [[[S::zero(); 4]; 4]; 4];
    for &(i, j, v) in table {
        expected[i][j] = v;
    }
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if gamma.0[i][j][k] != expected[i][j][k] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::FrameVectorField;
    use approx::assert_abs_diff_eq;

    #[test]
    fn all_entries_build_and_classify() {
        for (id, f) in registry() {
            let entry = f().unwrap_or_else(|e| panic!("{id} failed to build: {e}"));
            for s in &entry.structures {
                assert_eq!(
                    s.hermitian.class(),
                    s.expected_class,
                    "{}/{} classified {:?}",
                    id,
                    s.name,
                    s.hermitian.class()
                );
            }
        }
    }

    #[test]
    fn primary_chart_realizes_brackets() {
        let m = primary_manifold(1).unwrap();
        let p = [0.3, -0.8, 0.25, 0.6];
        let c = m.structure_by_differencing(p).unwrap();
        let want = tables::primary_structure_constants::<f64>();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_abs_diff_eq!(c.0[i][j][k], want.0[i][j][k], epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn secondary_chart_realizes_brackets() {
        let entry = kodaira_secondary().unwrap();
        let m = entry.structures[0].hermitian.manifold();
        let p = [0.4, -0.2, 0.7, -0.1];
        let c = m.structure_by_differencing(p).unwrap();
        let want = tables::secondary_structure_constants::<f64>();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_abs_diff_eq!(c.0[i][j][k], want.0[i][j][k], epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn symplectic_chart_realizes_brackets() {
        let pres = kodaira_symplectic(-1, 1, 0.7).unwrap();
        let m = pres.hermitian.manifold();
        let p = [0.1, 0.2, -0.4, 0.8];
        let c = m.structure_by_differencing(p).unwrap();
        let want = m.structure_at(p);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_abs_diff_eq!(c.0[i][j][k], want.0[i][j][k], epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn sphere_frame_is_orthonormal_and_tangent() {
        let pts = [[1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.5, 0.5], [0.6, -0.8, 0.0, 0.0]];
        for p in pts {
            let f = sphere_frame(p);
            for i in 0..3 {
                let dot_p: f64 = (0..4).map(|a| f[i][a] * p[a]).sum();
                assert_abs_diff_eq!(dot_p, 0.0, epsilon = 1e-14);
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    let d: f64 = (0..4).map(|a| f[i][a] * f[j][a]).sum();
                    assert_abs_diff_eq!(d, want, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn sphere_frame_brackets_match_structure_constants() {
        // [ξ_i, ξ_j] for linear fields v ↦ M v is (M_j M_i − M_i M_j) v
        let mats: Vec<[[f64; 4]; 4]> = {
            let mut ms = Vec::new();
            for i in 0..3 {
                let mut m = [[0.0; 4]; 4];
                for a in 0..4 {
                    let mut e = [0.0; 4];
                    e[a] = 1.0;
                    let col = sphere_frame(e)[i];
                    for b in 0..4 {
                        m[b][a] = col[b];
                    }
                }
                ms.push(m);
            }
            ms
        };
        let mul = |a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]| {
            let mut out = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            out
        };
        // cyclic table [ξ1,ξ2] = −2ξ3 etc.
        let pairs = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)];
        let p = [0.5, -0.5, 0.5, 0.5];
        for (i, j, k) in pairs {
            let ba = mul(&mats[j], &mats[i]);
            let ab = mul(&mats[i], &mats[j]);
            let mut br = [0.0; 4];
            for a in 0..4 {
                for b in 0..4 {
                    br[a] += (ba[a][b] - ab[a][b]) * p[b];
                }
            }
            let want = sphere_frame(p)[k];
            for a in 0..4 {
                assert_abs_diff_eq!(br[a], -2.0 * want[a], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn s3xs1_frame_matches_sphere_conventions() {
        // the abstract product frame is (ξ2, ξ3, ξ1, ∂t); its bracket table
        // must agree with the differentiated sphere frame
        let entry = s3xs1().unwrap();
        let m = entry.structures[0].hermitian.manifold();
        let c = m.structure_at([0.0; 4]);
        // [E1,E2] = [ξ2,ξ3] = −2ξ1 = −2E3
        assert_abs_diff_eq!(c.0[0][1][2], -2.0);
        assert_abs_diff_eq!(c.0[1][2][0], -2.0);
        assert_abs_diff_eq!(c.0[2][0][1], -2.0);
    }

    #[test]
    fn s3xs1_ricci_of_circle_direction_vanishes() {
        let entry = s3xs1().unwrap();
        let m = entry.structures[0].hermitian.manifold();
        let ric = m.ricci([0.0; 4]);
        assert_abs_diff_eq!(ric[3][3], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn secondary_symplectic_structures_do_not_exist() {
        // dΩ = 0 forces the last row of Ω to vanish; exhibit the
        // obstruction numerically: for every left-invariant J compatible
        // with g, dΩ has a (1,2,3)-component ±2 a34 and (a14, a24) enter the
        // other components with fixed nonzero weights.
        let (w14, w24, w34) = secondary_symplectic_obstruction();
        assert!(w14 > 0.0 && w24 > 0.0 && w34 > 0.0);
        // concrete check: the canonical complex structure has dΩ ≠ 0 with
        // exactly the (1,2,3) component −2·a34 = −2
        let pres = secondary_complex(1, 1).unwrap();
        let d = pres.hermitian.d_omega([0.0; 4]);
        assert_abs_diff_eq!(d[0], -2.0, epsilon = 1e-12); // (E1,E2,E3) component
        assert_abs_diff_eq!(d[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pushforward_metric_examples() {
        // X = Y = A3, P = Q = 0: u_3 = 0 so the value is 1
        let u = tables::u_hermitian(1.0, &[0.0, 0.0, 1.0]);
        let a3 = Vector4::basis(2);
        let v = pushforward_metric(0.8, &u, &a3, &[0.0; 3], &a3, &[0.0; 3]);
        assert_abs_diff_eq!(v, 1.0);
        // X = A1 at x = (0,0,1): u_1 = ε(−1,0,0), value 1 + t
        let a1 = Vector4::basis(0);
        let t = 0.8;
        let v = pushforward_metric(t, &u, &a1, &[0.0; 3], &a1, &[0.0; 3]);
        assert_abs_diff_eq!(v, 1.0 + t, epsilon = 1e-14);
        // vertical only
        let z = Vector4::zero();
        let v = pushforward_metric(t, &u, &z, &[1.0, 0.0, 0.0], &z, &[0.5, 0.0, 0.0]);
        assert_abs_diff_eq!(v, t * 0.5, epsilon = 1e-14);
    }

    #[test]
    fn pushforward_matches_twistor_metric() {
        // independent check of the product identification: the pushforward
        // formula equals h_t under the drift decomposition computed from ∇
        let pres = kodaira_hermitian(1).unwrap();
        let h = &pres.hermitian;
        let m = h.manifold();
        let p = [0.0; 4];
        let gamma = m.gamma_at(p);
        let triple = m.sd_triple();
        let x: [f64; 3] = [0.48, -0.6, 0.64];
        let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let x = [x[0] / xn, x[1] / xn, x[2] / xn];
        let drift = tables::drift_from_connection(&gamma, &triple, &x);
        let xv = Vector4([0.3, -1.0, 0.7, 0.2]);
        let yv = Vector4([1.1, 0.4, -0.2, 0.5]);
        // sphere tangent vectors ⊥ x
        let mk_tangent = |seed: [f64; 3]| {
            let dot = seed[0] * x[0] + seed[1] * x[1] + seed[2] * x[2];
            [seed[0] - dot * x[0], seed[1] - dot * x[1], seed[2] - dot * x[2]]
        };
        let pt = mk_tangent([1.0, 0.2, -0.4]);
        let qt = mk_tangent([-0.3, 0.9, 0.1]);
        for t in [0.5, 1.0, 2.0] {
            let formula = pushforward_metric(t, &drift, &xv, &pt, &yv, &qt);
            // twistor side: vertical parts v = P − Σ⟨X,E_i⟩u_i(x)
            let mut pv = pt;
            let mut qv = qt;
            for i in 0..4 {
                for kk in 0..3 {
                    pv[kk] -= xv.0[i] * drift[i][kk];
                    qv[kk] -= yv.0[i] * drift[i][kk];
                }
            }
            let u = crate::twistor::TwistorTangent {
                horizontal: xv,
                vertical: triple.from_coords(&pv),
            };
            let w = crate::twistor::TwistorTangent {
                horizontal: yv,
                vertical: triple.from_coords(&qv),
            };
            let ht = crate::twistor::h_t(t, &u, &w);
            assert_abs_diff_eq!(formula, ht, epsilon = 1e-12);
        }
        // and the lifted frame images A_i + u_i sit at unit h_t-norm base part
        let _ = FrameVectorField::frame(0);
    }
}

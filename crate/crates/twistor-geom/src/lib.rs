//! Twistor spaces of framed Riemannian four-manifolds and the hypersurface
//! cut out by an almost Hermitian structure.
//!
//! The crate builds the unit sphere bundle of self-dual 2-vectors over a
//! four-manifold presented by an oriented orthonormal frame, equips it with
//! the canonical metric family `h_t`, and studies the hypersurface of fibre
//! complex structures anti-commuting with a given almost Hermitian structure:
//! its second fundamental form, the trace, and minimality criteria for the
//! integrable and symplectic classes. A catalog of homogeneous examples with
//! exact-rational structure constants doubles as the regression corpus.

pub mod algebra;
pub mod catalog;
pub mod chart;
pub mod error;
pub mod hermitian;
pub mod hopf;
pub mod manifold;
pub mod scalar;
pub mod sigma;
pub mod twistor;

pub use algebra::{Bivector, Orientation, SelfDualTriple, SkewEndo4, Vector4};
pub use error::{GeomError, Result};
pub use hermitian::{AlmostHermitian, StructureClass};
pub use manifold::{Chart4, FramedManifold, StructureConstants};
pub use sigma::{MinimalityReport, SigmaPoint, TraceRoute};
pub use twistor::{TwistorPoint, TwistorTangent};

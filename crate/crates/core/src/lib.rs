//! Adaptive fictitious-domain Poisson solver.
//!
//! A physical domain with boundary curve `γ` is embedded in a square box.
//! The Dirichlet data on `γ` is enforced through a piecewise-constant
//! Lagrange multiplier, and the resulting saddle-point system is solved by a
//! nested inexact preconditioned Uzawa iteration: the outer loop dyadically
//! enlarges the multiplier space on `γ`, the intermediate loop runs damped
//! Richardson steps preconditioned by a Haar-wavelet Riesz map for
//! `H^{-1/2}(γ)`, and every Richardson step calls an adaptive finite element
//! solver (newest-vertex bisection, node-patch error estimator, Dörfler
//! marking) for the inner elliptic problem on the box.

pub mod afem;
pub mod boundary;
pub mod coupling;
pub mod diagnostics;
pub mod estimator;
pub mod fem;
pub mod geom;
pub mod lshape;
pub mod mesh;
pub mod quadrature;
pub mod report;
pub mod uzawa;






pub use geom::Point;

pub use mesh::{Triangulation, VertexPatch};



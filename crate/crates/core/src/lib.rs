//! Tagged arcs on the once-punctured disk, punctured skein smoothing, and
//! the arc representations of the Jacobian algebra of a triangulation.
//!
//! Extensions between indecomposables of the cluster category of type D are
//! produced geometrically by [`skein_engine::smooth_pair`] and certified by
//! exact linear algebra in [`qp_algebra`].

pub mod arc_rep;
pub mod disk_model;
pub mod ext_analyzer;
pub mod io;
pub mod linalg;
pub mod qp_algebra;
pub mod skein_engine;

pub use arc_rep::{arc_representation, multicurve_representation, ArcRepError, JacobianContext};
pub use disk_model::{Curve, DiskError, PuncturedDisk, Tag, TaggedArc, Triangulation};
pub use ext_analyzer::{analyze_extension, ExtError, ExtensionReport};
pub use linalg::{FieldConfig, Matrix, Scalar};
pub use qp_algebra::{Morphism, Potential, QpError, Quiver, Representation};
pub use skein_engine::{smooth_pair, FormalSum, Multicurve, SkeinError, SmoothingResult};

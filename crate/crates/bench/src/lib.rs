//! Shared inputs for the criterion benchmarks.

use pdisk_core::io::builtin_bundle;
use pdisk_core::{JacobianContext, TaggedArc, Triangulation};

/// Triangulation and arc pair of a bundled example.
pub fn example(name: &str) -> (Triangulation, TaggedArc, TaggedArc) {
    let b = builtin_bundle(name).expect("bundled fixture");
    (b.triangulation, b.alpha, b.beta)
}

pub fn context(name: &str) -> JacobianContext {
    JacobianContext::new(&example(name).0).expect("supported triangulation")
}

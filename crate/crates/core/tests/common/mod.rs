#![allow(dead_code)]

use pdisk_core::linalg::int;
use pdisk_core::qp_algebra::hom_space;
use pdisk_core::{FieldConfig, Matrix, Morphism, Quiver, Representation};

/// True when some combination of a basis of `Hom(m, n)` is invertible at
/// every vertex. Tries a fixed family of integer combinations.
pub fn isomorphic(q: &Quiver, m: &Representation, n: &Representation, field: &FieldConfig) -> bool {
    if m.dims != n.dims {
        return false;
    }
    let basis = hom_space(q, m, n, field).unwrap();
    if m.total_dim() == 0 {
        return true;
    }
    for trial in 0..40i64 {
        let mut maps: Vec<Matrix> = m.dims.iter().map(|&d| Matrix::zeros(d, d)).collect();
        for (k, h) in basis.iter().enumerate() {
            let c = field.int((k as i64 * 7 + trial * 13 + 3) % 11 - 5);
            for (acc, g) in maps.iter_mut().zip(&h.maps) {
                *acc = acc.add(&g.scale(&c, field), field).unwrap();
            }
        }
        if maps.iter().all(|g| g.rank(field) == g.rows()) {
            return true;
        }
    }
    false
}

pub fn morphism_is_identity_like(m: &Morphism) -> bool {
    m.maps.iter().all(|g| *g == Matrix::identity(g.rows()))
}

pub fn one() -> pdisk_core::Scalar {
    int(1)
}

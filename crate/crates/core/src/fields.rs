//! The small fields used throughout the tests, the CLI examples and the
//! acceptance suite.

use std::sync::Arc;

use crate::padic::FieldSpec;

fn build(p: u64, g: &[i64], e: &[Vec<i64>], m: u32) -> Arc<FieldSpec> {
    FieldSpec::new(p, g, e, m).expect("standard field is well formed")
}

/// Q_2.
pub fn q2() -> Arc<FieldSpec> {
    build(2, &[-1, 1], &[vec![-2], vec![1]], 0)
}

/// Q_2 with an explicit coefficient precision.
pub fn q2_m(m: u32) -> Arc<FieldSpec> {
    build(2, &[-1, 1], &[vec![-2], vec![1]], m)
}

/// Q_3.
pub fn q3() -> Arc<FieldSpec> {
    build(3, &[-1, 1], &[vec![-3], vec![1]], 0)
}

/// Q_5.
pub fn q5() -> Arc<FieldSpec> {
    build(5, &[-1, 1], &[vec![-5], vec![1]], 0)
}

/// Q_3(ζ_3), from E = x² + 3x + 3 = Φ_3(x + 1).
pub fn q3_zeta3() -> Arc<FieldSpec> {
    build(3, &[-1, 1], &[vec![3], vec![3], vec![1]], 0)
}

/// The unramified quadratic extension of Q_2, g = y² + y + 1.
pub fn q4() -> Arc<FieldSpec> {
    build(2, &[1, 1, 1], &[vec![-2], vec![1]], 0)
}

/// Q_2(√2), from E = x² − 2.
pub fn q2_sqrt2() -> Arc<FieldSpec> {
    build(2, &[-1, 1], &[vec![-2], vec![0], vec![1]], 0)
}

/// Q_3(√3), from E = x² − 3: (p−1) | e but ζ_3 ∉ K.
pub fn q3_sqrt3() -> Arc<FieldSpec> {
    build(3, &[-1, 1], &[vec![-3], vec![0], vec![1]], 0)
}

/// Every standard field.
pub fn all_fields() -> Vec<Arc<FieldSpec>> {
    vec![q2(), q3(), q5(), q3_zeta3(), q4(), q2_sqrt2(), q3_sqrt3()]
}

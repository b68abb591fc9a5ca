//! Small algebras used throughout the tests, the CLI examples and the acceptance suite.

use crate::linalg::FieldSpec;
use crate::quiver::{PathAlgebra, Quiver, DEFAULT_MAX_PATH_LENGTH};

/// `k(1 ← 2)`: vertices `1`, `2` and one arrow `a: 2 → 1`.
pub fn a2(field: FieldSpec) -> PathAlgebra {
    let quiver = Quiver::from_parts(&["1", "2"], &[("a", 1, 0)]).unwrap();
    PathAlgebra::new(quiver, alloc::vec![], field, DEFAULT_MAX_PATH_LENGTH).unwrap()
}

/// `k[T]/(T²)` as the loop quiver on `x` with relation `t·t`.
pub fn dual_numbers(field: FieldSpec) -> PathAlgebra {
    let quiver = Quiver::from_parts(&["x"], &[("t", 0, 0)]).unwrap();
    let tt = quiver.path(&[0, 0]).unwrap();
    PathAlgebra::new(quiver, alloc::vec![alloc::vec![(field.one(), tt)]], field, DEFAULT_MAX_PATH_LENGTH).unwrap()
}

//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use quiverdim_core::{corpus, Algebra, PrimeField, SimpleSet};

/// The first corpus example at `m = 10` with `V = {3, ..., 9}`.
pub fn example1() -> (Arc<Algebra<PrimeField>>, SimpleSet) {
    let alg = corpus::example1(10)
        .and_then(|e| e.build(PrimeField::default()))
        .expect("corpus algebra builds");
    (alg, SimpleSet::from_indices(2..9))
}

/// The second corpus example at `m = 5`, `n = 12` with `V = {3, ..., 14}`.
pub fn example2() -> (Arc<Algebra<PrimeField>>, SimpleSet) {
    let alg = corpus::example2(5, 12)
        .and_then(|e| e.build(PrimeField::default()))
        .expect("corpus algebra builds");
    (alg, SimpleSet::from_indices(2..14))
}

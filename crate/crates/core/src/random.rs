//! Seeded random modules and short exact sequences.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::rep::{
    generated_submodule, projective_sum, quotient, radical, radical_power, Representation,
    ShortExactSequence,
};

const ATTEMPTS: usize = 64;

fn random_columns<F: Field, R: Rng + ?Sized>(
    basis: &Matrix<F>,
    count: usize,
    rng: &mut R,
) -> Matrix<F> {
    let f = basis.field();
    let coeffs: Vec<F::Elem> = (0..basis.cols() * count)
        .map(|_| f.random_elem(rng))
        .collect();
    basis.mul(&Matrix::from_rows(f, basis.cols(), count, coeffs))
}

/// Random vectors of `m` (at most `max_gens` in total, at random vertices),
/// restricted to the subspaces `within[v]`.
fn random_gens<F: Field, R: Rng + ?Sized>(
    m: &Representation<F>,
    within: &[Matrix<F>],
    max_gens: usize,
    rng: &mut R,
) -> Vec<Matrix<F>> {
    let nv = m.dims().len();
    let mut counts = vec![0usize; nv];
    let live: Vec<usize> = (0..nv).filter(|&v| within[v].cols() > 0).collect();
    if !live.is_empty() {
        for _ in 0..rng.gen_range(1..=max_gens.max(1)) {
            counts[live[rng.gen_range(0..live.len())]] += 1;
        }
    }
    (0..nv)
        .map(|v| random_columns(&within[v], counts[v], rng))
        .collect()
}

/// A random nonzero module: a quotient of one or two indecomposable
/// projectives by a randomly generated submodule of the radical, possibly
/// truncated by a power of the radical. Retries until every vertex has
/// dimension at most `max_vertex_dim`, falling back to a simple module.
pub fn random_module<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<Algebra<F>>,
    max_vertex_dim: usize,
    rng: &mut R,
) -> Representation<F> {
    let nv = algebra.num_vertices();
    for _ in 0..ATTEMPTS {
        let tops: Vec<usize> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..nv))
            .collect();
        let p = projective_sum(algebra, &tops);
        let (_, rad_incl) = radical(&p);
        let gens = random_gens(&p, rad_incl.blocks(), 3, rng);
        let (_, sub) = generated_submodule(&p, &gens);
        let (mut q, _) = quotient(&sub);
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(1..=algebra.nilpotency_degree().max(1));
            q = quotient(&radical_power(&q, k).1).0;
        }
        if q.dims().iter().all(|&d| d <= max_vertex_dim) && !q.is_zero() {
            return q;
        }
    }
    Representation::simple(algebra, rng.gen_range(0..nv))
}

/// A random short exact sequence `0 -> A -> B -> B/A -> 0` with `B` from
/// [`random_module`] and `A` generated by a few random vectors.
pub fn random_ses<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<Algebra<F>>,
    max_vertex_dim: usize,
    rng: &mut R,
) -> ShortExactSequence<F> {
    let b = random_module(algebra, max_vertex_dim, rng);
    let f = b.field().clone();
    let full: Vec<Matrix<F>> = b.dims().iter().map(|&d| Matrix::identity(&f, d)).collect();
    let gens = random_gens(&b, &full, 2, rng);
    let (_, incl) = generated_submodule(&b, &gens);
    let (_, proj) = quotient(&incl);
    ShortExactSequence::new(incl, proj).expect("submodule and quotient form a short exact sequence")
}

/// Labelled sample modules: every simple, every indecomposable projective,
/// every nonzero `rad^k P(i)`, then `extra` random modules from `seed`.
pub fn default_samples<F: Field>(
    algebra: &Arc<Algebra<F>>,
    extra: usize,
    seed: u64,
) -> Vec<(String, Representation<F>)> {
    let q = algebra.quiver();
    let mut out = Vec::new();
    for v in 0..algebra.num_vertices() {
        out.push((
            format!("S({})", q.vertex_name(v)),
            Representation::simple(algebra, v),
        ));
    }
    for v in 0..algebra.num_vertices() {
        let p = Representation::projective(algebra, v);
        out.push((format!("P({})", q.vertex_name(v)), p.clone()));
        for k in 1.. {
            let r = radical_power(&p, k).0;
            if r.is_zero() {
                break;
            }
            out.push((format!("rad^{k} P({})", q.vertex_name(v)), r));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..extra {
        out.push((format!("random#{i}"), random_module(algebra, 3, &mut rng)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::PrimeField;

    #[test]
    fn modules_are_valid_and_bounded() {
        let a = corpus::example1(10)
            .unwrap()
            .build(PrimeField::default())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_module(&a, 3, &mut rng);
            assert!(!m.is_zero());
            assert!(m.dims().iter().all(|&d| d <= 3));
            Representation::new(a.clone(), m.dims().to_vec(), m.actions().to_vec()).unwrap();
            random_ses(&a, 3, &mut rng).validate().unwrap();
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = corpus::dual_numbers()
            .build(PrimeField::new(5).unwrap())
            .unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5)
                .map(|_| random_module(&a, 3, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
    }
}

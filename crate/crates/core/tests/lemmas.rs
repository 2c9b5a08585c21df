//! Structural identities of the layer functor, syzygy shifts and Loewy
//! resolutions, checked on the corpus algebras.

mod support;

use quiverdim_core::rep::direct_sum;
use quiverdim_core::torsion::{layer_functor, layer_length, torsion_radical};
use quiverdim_core::*;
use support::*;

#[test]
fn layer_sequences_are_exact() {
    check_layer_sequences(10).unwrap();
}

#[test]
fn layer_functor_vanishes_at_layer_length() {
    check_layer_vanishing(20).unwrap();
}

#[test]
fn syzygy_of_torsion_part_drops_a_layer() {
    assert!(check_torsion_syzygy_drop(30).unwrap() > 40);
}

#[test]
fn syzygy_shift_sequences() {
    assert!(check_syzygy_shift(46, 15).unwrap() >= 50);
}

#[test]
fn loewy_resolutions_have_bounded_terms() {
    check_loewy(3, 50).unwrap();
}

#[test]
fn degenerate_sets_recover_loewy_length() {
    check_degenerate_sets().unwrap();
}

/// Uniserial module with `len` copies of `S(1)` joined by `alpha`.
fn alpha_string(alg: &Alg, len: usize) -> Representation<PrimeField> {
    let f = alg.field();
    let mut dims = vec![0; alg.num_vertices()];
    dims[0] = len;
    let alpha = alg.quiver().arrow("alpha").unwrap();
    let actions = (0..alg.num_arrows())
        .map(|a| {
            let info = alg.quiver().arrow_info(a);
            let mut m = Matrix::zeros(f, dims[info.target], dims[info.source]);
            if a == alpha {
                for r in 1..len {
                    m.set(r, r - 1, f.one());
                }
            }
            m
        })
        .collect();
    Representation::new(alg.clone(), dims, actions).unwrap()
}

#[test]
fn second_example_first_projective() {
    let (alg, v) = ex2();
    let p1 = Representation::projective(&alg, 0);
    assert_eq!(layer_length(&p1, &v), 5);
    let expected = direct_sum(
        &alg,
        &[alpha_string(&alg, 4), Representation::projective(&alg, 1)],
    )
    .unwrap()
    .sum;
    assert!(iso(&layer_functor(&p1, &v, 1), &expected));
}

#[test]
fn first_example_projective_is_torsion() {
    let (alg, v) = ex1();
    let p1 = Representation::projective(&alg, 0);
    assert!(torsion_radical(&p1, &v).0 == p1);
}

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quiverdim_core::modfile::{emit_module, module_from_json, module_to_json, parse_module};
use quiverdim_core::random::random_module;
use quiverdim_core::rep::{first_syzygy, loewy_length};
use quiverdim_core::torsion::{layer_length, torsion_quotient, torsion_radical};
use quiverdim_core::*;

fn algebras() -> &'static [Arc<Algebra<PrimeField>>] {
    static ALGS: OnceLock<Vec<Arc<Algebra<PrimeField>>>> = OnceLock::new();
    ALGS.get_or_init(|| {
        let f = PrimeField::default();
        vec![
            corpus::example1(10).unwrap().build(f).unwrap(),
            corpus::example2(5, 12).unwrap().build(f).unwrap(),
            corpus::dual_numbers().build(f).unwrap(),
            corpus::a2().build(f).unwrap(),
        ]
    })
}

fn sample(which: usize, seed: u64) -> Representation<PrimeField> {
    let alg = &algebras()[which % algebras().len()];
    random_module(alg, 3, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn vertex_set(alg: &Algebra<PrimeField>, mask: u32) -> SimpleSet {
    SimpleSet::from_indices((0..alg.num_vertices()).filter(|&v| mask >> (v % 32) & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn syzygy_sequence_is_exact(which in 0usize..4, seed: u64) {
        let m = sample(which, seed);
        let (_, iota, cover) = first_syzygy(&m);
        ShortExactSequence::new(iota, cover.epi).unwrap().validate().unwrap();
    }

    #[test]
    fn torsion_radical_axioms(which in 0usize..4, seed: u64, mask: u32, extra: u32) {
        let m = sample(which, seed);
        let alg = m.algebra().clone();
        let v = vertex_set(&alg, mask);
        let (t, incl) = torsion_radical(&m, &v);
        let (q, _) = torsion_quotient(&m, &v);
        prop_assert!(incl.is_injective());
        prop_assert!(q.composition_factors().iter().all(|&(s, _)| v.contains(s)));
        let tt = torsion_radical(&t, &v).0;
        prop_assert_eq!(tt.dims(), t.dims());
        prop_assert!(torsion_radical(&q, &v).0.is_zero());
        // A larger V leaves a smaller torsion part, sitting inside the old one.
        let w = vertex_set(&alg, mask | extra);
        let (_, incl_w) = torsion_radical(&m, &w);
        for j in 0..alg.num_vertices() {
            let old = Subspace::span(incl.block(j));
            prop_assert!(old.contains(incl_w.block(j)));
        }
    }

    #[test]
    fn degenerate_layer_lengths(which in 0usize..4, seed: u64) {
        let m = sample(which, seed);
        let n = m.algebra().num_vertices();
        prop_assert_eq!(layer_length(&m, &SimpleSet::empty()), loewy_length(&m));
        prop_assert_eq!(layer_length(&m, &SimpleSet::all(n)), 0);
    }

    #[test]
    fn module_files_round_trip(which in 0usize..4, seed: u64) {
        let m = sample(which, seed);
        let alg = m.algebra().clone();
        let text = emit_module(&m);
        let back = parse_module(&alg, &text).unwrap();
        prop_assert!(back == m);
        prop_assert_eq!(emit_module(&back), text);
        let json = module_to_json(&m);
        prop_assert!(module_from_json(&alg, &json).unwrap() == m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_module_files_round_trip(seed: u64) {
        let alg = corpus::example1(10).unwrap().build(Rationals).unwrap();
        let m = random_module(&alg, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let text = emit_module(&m);
        prop_assert!(parse_module(&alg, &text).unwrap() == m);
        prop_assert!(module_from_json(&alg, &module_to_json(&m)).unwrap() == m);
    }
}

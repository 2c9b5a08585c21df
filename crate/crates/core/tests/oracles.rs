//! Independent brute-force oracles over small fields.

mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiverdim_core::homology::projective_dimension;
use quiverdim_core::random::{random_module, random_ses};
use quiverdim_core::rep::{
    combine_maps, direct_sum, hom_basis, hom_basis_direct, in_add, submodule,
};
use quiverdim_core::*;
use support::check_torsion_oracle;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

#[test]
fn torsion_radical_matches_subspace_enumeration() {
    assert!(check_torsion_oracle(2024, 4, 60).unwrap() >= 200);
}

// Krull-Schmidt oracle for add: split off idempotents by enumeration, then
// match indecomposable summands up to isomorphism.

fn hom_elements(
    x: &Representation<PrimeField>,
    y: &Representation<PrimeField>,
) -> Vec<ModuleMap<PrimeField>> {
    let basis = hom_basis_direct(x, y).unwrap();
    assert!(basis.len() <= 14, "hom space too large to enumerate");
    (0u32..1 << basis.len())
        .map(|bits| {
            let coeffs: Vec<u32> = (0..basis.len()).map(|i| bits >> i & 1).collect();
            if basis.is_empty() {
                ModuleMap::zero(x, y)
            } else {
                combine_maps(&basis, &coeffs)
            }
        })
        .collect()
}

fn image(e: &ModuleMap<PrimeField>) -> Representation<PrimeField> {
    let bases = e.blocks().iter().map(|b| b.column_basis()).collect();
    submodule(e.cod(), bases).unwrap().0
}

fn indecomposables(m: &Representation<PrimeField>) -> Vec<Representation<PrimeField>> {
    if m.is_zero() {
        return Vec::new();
    }
    let id = ModuleMap::identity(m);
    for e in hom_elements(m, m) {
        if e.is_zero() || e.blocks() == id.blocks() {
            continue;
        }
        if e.compose(&e).unwrap().blocks() == e.blocks() {
            let rest = id.add(&e.neg());
            let mut out = indecomposables(&image(&e));
            out.extend(indecomposables(&image(&rest)));
            return out;
        }
    }
    vec![m.clone()]
}

fn isomorphic(a: &Representation<PrimeField>, b: &Representation<PrimeField>) -> bool {
    a.dims() == b.dims() && hom_elements(a, b).iter().any(|h| h.is_isomorphism())
}

fn add_oracle(x: &Representation<PrimeField>, y: &Representation<PrimeField>) -> bool {
    let ys = indecomposables(y);
    indecomposables(x)
        .iter()
        .all(|xi| ys.iter().any(|yj| isomorphic(xi, yj)))
}

#[test]
fn in_add_matches_krull_schmidt() {
    let algebras = [
        corpus::a2().build(f2()).unwrap(),
        corpus::dual_numbers().build(f2()).unwrap(),
        parse_algebra(
            "vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation: a*b\n",
            f2(),
            8,
        )
        .unwrap(),
        parse_algebra(
            "vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n",
            f2(),
            8,
        )
        .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut yes, mut no) = (0, 0);
    for alg in &algebras {
        for _ in 0..25 {
            let parts: Vec<_> = (0..rng.gen_range(1..=2))
                .map(|_| random_module(alg, 2, &mut rng))
                .collect();
            let y = direct_sum(alg, &parts).unwrap().sum;
            let x = match rng.gen_range(0..3) {
                0 => random_module(alg, 2, &mut rng),
                1 => parts[0].clone(),
                _ => {
                    direct_sum(alg, &[parts[0].clone(), parts[0].clone()])
                        .unwrap()
                        .sum
                }
            };
            let small =
                |m: &Representation<PrimeField>| hom_basis_direct(m, m).unwrap().len() <= 12;
            if !small(&x) || !small(&y) {
                continue;
            }
            let expected = add_oracle(&x, &y);
            assert_eq!(in_add(&x, &y).unwrap(), expected);
            if expected {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(
        yes + no >= 40,
        "only {} cases small enough to enumerate",
        yes + no
    );
    assert!(
        yes > 0 && no > 0,
        "both outcomes exercised ({yes} yes, {no} no)"
    );
}

fn flat<F: Field>(h: &ModuleMap<F>) -> Vec<F::Elem> {
    h.blocks().iter().flat_map(|b| b.to_vec()).collect()
}

fn same_span<F: Field>(f: &F, a: &[ModuleMap<F>], b: &[ModuleMap<F>], len: usize) -> bool {
    let mut sa = EchelonSpan::new(f, len);
    a.iter().for_each(|h| {
        sa.insert(flat(h));
    });
    a.len() == b.len() && sa.dim() == a.len() && b.iter().all(|h| sa.contains(&flat(h)))
}

#[test]
fn hom_via_presentation_agrees_with_linear_system() {
    let fp = PrimeField::default();
    let algebras = [
        corpus::example1(10).unwrap().build(fp).unwrap(),
        corpus::example2(5, 12).unwrap().build(fp).unwrap(),
        corpus::dual_numbers().build(fp).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for alg in &algebras {
        for _ in 0..15 {
            let x = random_module(alg, 3, &mut rng);
            let y = random_module(alg, 3, &mut rng);
            let a = hom_basis(&x, &y).unwrap();
            let b = hom_basis_direct(&x, &y).unwrap();
            for h in &a {
                h.check().unwrap();
            }
            let len: usize = (0..alg.num_vertices())
                .map(|v| x.dim_at(v) * y.dim_at(v))
                .sum();
            assert!(same_span(&fp, &a, &b, len));
        }
    }
    let q = Rationals;
    let alg = corpus::example1(10).unwrap().build(q).unwrap();
    for _ in 0..8 {
        let x = random_module(&alg, 2, &mut rng);
        let y = random_module(&alg, 2, &mut rng);
        let a = hom_basis(&x, &y).unwrap();
        let b = hom_basis_direct(&x, &y).unwrap();
        let len: usize = (0..alg.num_vertices())
            .map(|v| x.dim_at(v) * y.dim_at(v))
            .sum();
        assert!(same_span(&q, &a, &b, len));
    }
}

#[test]
fn pd_respects_short_exact_sequences() {
    let fp = PrimeField::default();
    let algebras = [
        corpus::example1(10).unwrap().build(fp).unwrap(),
        parse_algebra(
            "vertices: 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 4\nrelation: a*b\n",
            fp,
            8,
        )
        .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut compared = 0;
    for alg in &algebras {
        for _ in 0..25 {
            let ses = random_ses(alg, 3, &mut rng);
            let pd = |m: &Representation<PrimeField>| {
                projective_dimension(m, 30).unwrap().finite_value()
            };
            let (Some(a), Some(b), Some(c)) = (pd(ses.left()), pd(ses.middle()), pd(ses.right()))
            else {
                continue;
            };
            assert!(b <= a.max(c), "pd B = {b} > max(pd A = {a}, pd C = {c})");
            assert!(
                a <= b.max(c - 1),
                "pd A = {a} > max(pd B = {b}, pd C - 1 = {})",
                c - 1
            );
            assert!(
                c <= b.max(a + 1),
                "pd C = {c} > max(pd B = {b}, pd A + 1 = {})",
                a + 1
            );
            compared += 1;
        }
    }
    assert!(compared >= 30, "only {compared} sequences with finite pd");
}

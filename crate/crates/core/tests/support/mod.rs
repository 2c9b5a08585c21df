//! Checks shared by the core integration tests and the acceptance suite.
//! Each returns the number of cases examined, or a description of the first
//! violation.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiverdim_core::constructions::{loewy_resolution, radical_quotient_parts, syzygy_shift_ses};
use quiverdim_core::random::{default_samples, random_module, random_ses};
use quiverdim_core::rep::{
    direct_sum, first_syzygy, in_add, in_add_parts, is_isomorphic, loewy_length, quotient, radical,
    syzygy, top, IsoOptions,
};
use quiverdim_core::torsion::{algebra_layer_length, layer_functor, layer_length, torsion_radical};
use quiverdim_core::*;

pub type Alg = Arc<Algebra<PrimeField>>;
pub type Check = Result<usize, String>;

pub fn ex1() -> (Alg, SimpleSet) {
    let a = corpus::example1(10)
        .unwrap()
        .build(PrimeField::default())
        .unwrap();
    (a, SimpleSet::from_indices(2..9))
}

/// `V = {3, ..., n+2}`.
pub fn ex2() -> (Alg, SimpleSet) {
    let a = corpus::example2(5, 12)
        .unwrap()
        .build(PrimeField::default())
        .unwrap();
    (a, SimpleSet::from_indices(2..14))
}

pub fn small_algebras() -> Vec<Alg> {
    let f = PrimeField::default();
    vec![
        corpus::a2().build(f).unwrap(),
        corpus::dual_numbers().build(f).unwrap(),
        parse_algebra("vertices: 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 4\nrelation: a*b*c\n", f, 8)
            .unwrap(),
    ]
}

pub fn iso(a: &Representation<PrimeField>, b: &Representation<PrimeField>) -> bool {
    is_isomorphic(a, b, IsoOptions::default())
        .unwrap()
        .is_isomorphic()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- F_2 torsion oracle ----

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

/// Random acyclic quiver on `n` vertices, arrows only from lower to higher
/// index, no relations.
pub fn random_acyclic(n: usize, rng: &mut ChaCha8Rng) -> Alg {
    let mut text = String::from("name: random\nvertices:");
    for v in 1..=n {
        text.push_str(&format!(" {v}"));
    }
    text.push('\n');
    let mut k = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            for _ in 0..rng.gen_range(0..=2usize) {
                if rng.gen_bool(0.6) {
                    k += 1;
                    text.push_str(&format!("arrow a{k}: {i} -> {j}\n"));
                }
            }
        }
    }
    parse_algebra(&text, f2(), 16).unwrap()
}

/// Random F_2 representation of total dimension between 1 and 6.
pub fn random_rep(alg: &Alg, rng: &mut ChaCha8Rng) -> Representation<PrimeField> {
    let f = f2();
    let nv = alg.num_vertices();
    let mut dims = vec![0usize; nv];
    for _ in 0..rng.gen_range(1..=6usize) {
        dims[rng.gen_range(0..nv)] += 1;
    }
    let actions = alg
        .quiver()
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            let data = (0..r * c).map(|_| rng.gen_range(0..2u32)).collect();
            Matrix::from_rows(&f, r, c, data)
        })
        .collect();
    Representation::new(alg.clone(), dims, actions).unwrap()
}

/// Columns of an F_2 matrix as bitmasks.
pub fn columns(m: &Matrix<PrimeField>) -> Vec<u8> {
    (0..m.cols())
        .map(|c| {
            (0..m.rows()).fold(0u8, |acc, r| {
                if *m.get(r, c) == 1 {
                    acc | (1 << r)
                } else {
                    acc
                }
            })
        })
        .collect()
}

fn apply(cols: &[u8], v: u8) -> u8 {
    cols.iter()
        .enumerate()
        .filter(|(i, _)| v >> i & 1 == 1)
        .fold(0, |acc, (_, c)| acc ^ c)
}

/// A subspace of F_2^d as a bitset over its 2^d vectors.
pub fn span_mask(vectors: &[u8]) -> u64 {
    let mut mask = 1u64;
    for &v in vectors {
        let mut add = mask;
        for x in 0..64u32 {
            if mask >> x & 1 == 1 {
                add |= 1 << (x as u8 ^ v);
            }
        }
        mask = add;
    }
    mask
}

fn all_subspaces(d: usize) -> Vec<u64> {
    let mut seen = HashSet::from([1u64]);
    let mut frontier = vec![1u64];
    while let Some(s) = frontier.pop() {
        for v in 0..(1u8 << d) {
            if s >> v & 1 == 0 {
                let t = span_mask(&members(s).chain([v]).collect::<Vec<_>>());
                if seen.insert(t) {
                    frontier.push(t);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn members(mask: u64) -> impl Iterator<Item = u8> {
    (0..64u8).filter(move |x| mask >> x & 1 == 1)
}

/// Smallest submodule `U` with `U_v = M_v` off `V`, found by intersecting
/// every arrow-stable choice of subspaces at the vertices of `V`.
pub fn torsion_oracle(m: &Representation<PrimeField>, v: &SimpleSet) -> Vec<u64> {
    let alg = m.algebra();
    let nv = alg.num_vertices();
    let full: Vec<u64> = (0..nv)
        .map(|i| span_mask(&(0..m.dim_at(i)).map(|b| 1u8 << b).collect::<Vec<_>>()))
        .collect();
    let acts: Vec<Vec<u8>> = (0..alg.num_arrows())
        .map(|a| columns(m.action(a)))
        .collect();
    let choices: Vec<Vec<u64>> = (0..nv)
        .map(|i| {
            if v.contains(i) {
                all_subspaces(m.dim_at(i))
            } else {
                vec![full[i]]
            }
        })
        .collect();
    let mut best = full;
    let mut idx = vec![0usize; nv];
    loop {
        let cand: Vec<u64> = (0..nv).map(|i| choices[i][idx[i]]).collect();
        let stable = alg.quiver().arrows().iter().enumerate().all(|(a, arr)| {
            members(cand[arr.source]).all(|x| cand[arr.target] >> apply(&acts[a], x) & 1 == 1)
        });
        if stable {
            for i in 0..nv {
                best[i] &= cand[i];
            }
        }
        let mut i = 0;
        loop {
            if i == nv {
                return best;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `quivers` random quivers with `per_quiver` representations each.
pub fn check_torsion_oracle(seed: u64, quivers: usize, per_quiver: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for q in 0..quivers {
        let alg = random_acyclic(3 + q % 2, &mut rng);
        let nv = alg.num_vertices();
        for _ in 0..per_quiver {
            let m = random_rep(&alg, &mut rng);
            let v = SimpleSet::from_indices((0..nv).filter(|_| rng.gen_bool(0.5)));
            let (_, incl) = torsion_radical(&m, &v);
            let got: Vec<u64> = incl
                .blocks()
                .iter()
                .map(|b| span_mask(&columns(b)))
                .collect();
            ensure(got == torsion_oracle(&m, &v), || {
                format!(
                    "quiver {q}, dims {:?}, V = {:?}",
                    m.dims(),
                    v.iter().collect::<Vec<_>>()
                )
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

// ---- corpus identities ----

/// Every simple, projective and nonzero `rad^k P(i)` of both examples.
pub fn corpus_modules() -> Vec<(String, Representation<PrimeField>)> {
    [ex1(), ex2()]
        .into_iter()
        .flat_map(|(a, _)| {
            let name = a.name().to_string();
            default_samples(&a, 0, 0)
                .into_iter()
                .map(move |(l, m)| (format!("{name} {l}"), m))
        })
        .collect()
}

pub fn check_degenerate_sets() -> Check {
    let mods = corpus_modules();
    for (label, m) in &mods {
        let n = m.algebra().num_vertices();
        let (none, all) = (
            layer_length(m, &SimpleSet::empty()),
            layer_length(m, &SimpleSet::all(n)),
        );
        ensure(none == loewy_length(m), || {
            format!("{label}: ℓℓ over ∅ is {none}, LL is {}", loewy_length(m))
        })?;
        ensure(all == 0, || {
            format!("{label}: ℓℓ over all vertices is {all}")
        })?;
    }
    Ok(mods.len())
}

/// `0 -> t F^i -> F^i -> q F^i -> 0` and `0 -> F^{i+1} -> t F^i -> top t F^i -> 0`
/// for `i ≤ 4`.
pub fn check_layer_sequences(extra: usize) -> Check {
    let mut n = 0;
    for (alg, v) in [ex1(), ex2()] {
        for (label, m) in default_samples(&alg, extra, 1) {
            for i in 0..=4 {
                let fi = layer_functor(&m, &v, i);
                let (t, t_incl) = torsion_radical(&fi, &v);
                let (q, q_proj) = quotient(&t_incl);
                ShortExactSequence::new(t_incl, q_proj)
                    .and_then(|s| s.validate())
                    .map_err(|e| format!("{label}, i = {i}: torsion sequence: {e}"))?;
                ensure(
                    q.composition_factors().iter().all(|&(s, _)| v.contains(s)),
                    || format!("{label}, i = {i}: quotient has factors outside V"),
                )?;
                let (r, r_incl) = radical(&t);
                let (_, top_proj) = top(&t);
                ShortExactSequence::new(r_incl, top_proj)
                    .and_then(|s| s.validate())
                    .map_err(|e| format!("{label}, i = {i}: radical sequence: {e}"))?;
                ensure(r == layer_functor(&m, &v, i + 1), || {
                    format!("{label}: F^{} mismatch", i + 1)
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `ℓℓ(F^k M) = 0` for `k = ℓℓ(M)`, and not earlier.
pub fn check_layer_vanishing(extra: usize) -> Check {
    let mut n = 0;
    for (alg, v) in [ex1(), ex2()] {
        for (label, m) in default_samples(&alg, extra, 2) {
            let k = layer_length(&m, &v);
            let after = layer_length(&layer_functor(&m, &v, k), &v);
            ensure(after == 0, || format!("{label}: ℓℓ(F^{k}) = {after}"))?;
            if k > 0 {
                ensure(layer_length(&layer_functor(&m, &v, k - 1), &v) > 0, || {
                    format!("{label}: F^{} already vanishes", k - 1)
                })?;
            }
            n += 1;
        }
    }
    Ok(n)
}

/// `ℓℓ(Ω t_V M) ≤ ℓℓ(Λ) - 1` whenever `t_V M ≠ 0`.
pub fn check_torsion_syzygy_drop(extra: usize) -> Check {
    let mut n = 0;
    for (alg, v) in [ex1(), ex2()] {
        let bound = algebra_layer_length(&alg, &v);
        for (label, m) in default_samples(&alg, extra, 3) {
            let t = torsion_radical(&m, &v).0;
            if t.is_zero() {
                continue;
            }
            let got = layer_length(&first_syzygy(&t).0, &v);
            ensure(got < bound, || {
                format!("{label}: ℓℓ(Ω t_V M) = {got}, ℓℓ(Λ) = {bound}")
            })?;
            n += 1;
        }
    }
    Ok(n)
}

/// Syzygy-shift sequences from random short exact sequences, `i = 0..=3`
/// in rotation.
pub fn check_syzygy_shift(seed: u64, per_algebra: usize) -> Check {
    let mut algs = small_algebras();
    algs.push(ex1().0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = 0;
    for alg in &algs {
        let regular = Representation::regular(alg);
        for round in 0..per_algebra {
            let ses = random_ses(alg, 3, &mut rng);
            let i = round % 4;
            let ctx = |what: &str| format!("{} round {round}, i = {i}: {what}", alg.name());
            let shift = syzygy_shift_ses(&ses, i, IsoOptions::default())
                .map_err(|e| ctx(&e.to_string()))?;
            shift.ses.validate().map_err(|e| ctx(&e.to_string()))?;
            ensure(iso(shift.ses.left(), &syzygy(ses.right(), i + 1)), || {
                ctx("left term is not Ω^{i+1} C")
            })?;
            ensure(iso(shift.ses.right(), &syzygy(ses.middle(), i)), || {
                ctx("right term is not Ω^i B")
            })?;
            let expected = direct_sum(alg, &[syzygy(ses.left(), i), shift.q.clone()])
                .unwrap()
                .sum;
            ensure(iso(shift.ses.middle(), &expected), || {
                ctx("middle term is not Ω^i A ⊕ Q")
            })?;
            ensure(in_add(&shift.q, &regular).unwrap(), || {
                ctx("Q is not projective")
            })?;
            n += 1;
        }
    }
    Ok(n)
}

/// Loewy resolutions of `per_algebra` random modules over every corpus
/// algebra: exact, at most `LL(Λ)` terms, `M_i ∈ add(Λ / rad^{n-i} Λ)`.
pub fn check_loewy(seed: u64, per_algebra: usize) -> Check {
    let f = PrimeField::default();
    let mut algs = small_algebras();
    algs.push(ex1().0);
    algs.push(ex2().0);
    algs.push(corpus::semisimple(3).unwrap().build(f).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = 0;
    for alg in &algs {
        let ll = alg.nilpotency_degree();
        let parts: Vec<Vec<Representation<PrimeField>>> =
            (0..=ll).map(|k| radical_quotient_parts(alg, k)).collect();
        for round in 0..per_algebra {
            let m = random_module(alg, 3, &mut rng);
            let ctx = |what: &str| format!("{} module {round}: {what}", alg.name());
            let res = loewy_resolution(&m).map_err(|e| ctx(&e.to_string()))?;
            res.chain.validate().map_err(|e| ctx(&e.to_string()))?;
            ensure(res.chain.modules.len() <= ll, || ctx("too many terms"))?;
            for (term, &budget) in res.chain.modules.iter().zip(&res.budgets) {
                ensure(in_add_parts(term, &parts[budget]).unwrap(), || {
                    ctx("term outside its add class")
                })?;
            }
            n += 1;
        }
    }
    Ok(n)
}

//! Pushouts, pullbacks, the horseshoe lemma, the syzygy-shift sequence,
//! Loewy resolutions, and Igusa-Todorov certificates built from them.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{pd_set, PdResult};
use crate::linalg::{EchelonSpan, Matrix, Subspace};
use crate::rep::{
    cokernel, combine_maps, direct_sum, first_syzygy, hom_basis, in_add_parts, is_isomorphic,
    kernel, map_from_projective, projective_cover, projective_sum, quotient_by_spaces,
    radical_power, submodule_from_spaces, syzygy, top_dims, IsoOptions, IsoVerdict, ModuleMap,
    ProjectiveCover, Representation, ShortExactSequence,
};
use crate::torsion::{
    algebra_layer_length, layer_functor, layer_functor_with_inclusion, torsion_radical, SimpleSet,
};

/// `h: X -> Z` rewritten as a map into `Y`, given a monomorphism `Y -> Z`
/// whose image contains the image of `h`.
pub fn factor_through_mono<F: Field>(
    h: &ModuleMap<F>,
    mono: &ModuleMap<F>,
) -> Result<ModuleMap<F>> {
    if h.cod().dims() != mono.cod().dims() {
        return Err(Error::InvalidMap(
            "factorization through a map with another codomain".into(),
        ));
    }
    let blocks = h
        .blocks()
        .iter()
        .zip(mono.blocks())
        .map(|(hb, mb)| {
            Subspace::from_basis(mb.clone())
                .coordinates(hb)
                .ok_or_else(|| Error::Verification("image does not lie in the subobject".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleMap::from_parts(
        h.dom().clone(),
        mono.dom().clone(),
        blocks,
    ))
}

/// A map `P -> B` with `g ∘ h = cover.epi`, obtained by lifting the cover
/// generators through the surjection `g: B -> C`.
pub fn lift_cover<F: Field>(cover: &ProjectiveCover<F>, g: &ModuleMap<F>) -> Result<ModuleMap<F>> {
    let f = g.dom().field();
    let lifts = cover
        .generators
        .iter()
        .map(|(v, x)| {
            let rhs = Matrix::from_columns(f, x.len(), std::slice::from_ref(x));
            g.block(*v)
                .solve(&rhs)
                .map(|y| (*v, y.column(0)))
                .ok_or_else(|| Error::Verification("map to lift through is not surjective".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(map_from_projective(&cover.projective, g.dom(), &lifts))
}

/// `D` with legs `B -> D`, `C -> D`.
#[derive(Clone, Debug)]
pub struct Pushout<F: Field> {
    pub module: Representation<F>,
    pub from_left: ModuleMap<F>,
    pub from_right: ModuleMap<F>,
}

/// Pushout of `f: A -> B` and `g: A -> C`: the cokernel of `(f, -g)`.
pub fn pushout<F: Field>(f: &ModuleMap<F>, g: &ModuleMap<F>) -> Result<Pushout<F>> {
    if f.dom().dims() != g.dom().dims() {
        return Err(Error::InvalidMap(
            "pushout legs have different domains".into(),
        ));
    }
    let alg = f.dom().algebra();
    let fld = alg.field();
    let sum = direct_sum(alg, &[f.cod().clone(), g.cod().clone()])?;
    let blocks = f
        .blocks()
        .iter()
        .zip(g.blocks())
        .map(|(a, b)| a.vstack(&b.neg()))
        .collect();
    let _ = fld;
    let into_sum = ModuleMap::from_parts(f.dom().clone(), sum.sum.clone(), blocks);
    let (module, proj) = cokernel(&into_sum);
    let from_left = proj.compose(&sum.injections[0])?;
    let from_right = proj.compose(&sum.injections[1])?;
    if f.is_injective() && !from_right.is_injective() {
        return Err(Error::Verification(
            "pushout of a monomorphism is not injective".into(),
        ));
    }
    Ok(Pushout {
        module,
        from_left,
        from_right,
    })
}

/// `A ⊆ B ⊕ C` with legs `A -> B`, `A -> C`.
#[derive(Clone, Debug)]
pub struct Pullback<F: Field> {
    pub module: Representation<F>,
    pub to_left: ModuleMap<F>,
    pub to_right: ModuleMap<F>,
    /// Inclusion into `B ⊕ C`.
    pub incl: ModuleMap<F>,
}

/// Pullback of `f: B -> D` and `g: C -> D`: the kernel of `(f, -g)`.
pub fn pullback<F: Field>(f: &ModuleMap<F>, g: &ModuleMap<F>) -> Result<Pullback<F>> {
    if f.cod().dims() != g.cod().dims() {
        return Err(Error::InvalidMap(
            "pullback legs have different codomains".into(),
        ));
    }
    let alg = f.dom().algebra();
    let sum = direct_sum(alg, &[f.dom().clone(), g.dom().clone()])?;
    let blocks = f
        .blocks()
        .iter()
        .zip(g.blocks())
        .map(|(a, b)| a.hstack(&b.neg()))
        .collect();
    let from_sum = ModuleMap::from_parts(sum.sum.clone(), f.cod().clone(), blocks);
    let (module, incl) = kernel(&from_sum);
    let to_left = sum.projections[0].compose(&incl)?;
    let to_right = sum.projections[1].compose(&incl)?;
    if f.is_surjective() && !to_right.is_surjective() {
        return Err(Error::Verification(
            "pullback of an epimorphism is not surjective".into(),
        ));
    }
    Ok(Pullback {
        module,
        to_left,
        to_right,
        incl,
    })
}

/// Output of the horseshoe lemma for `0 -> A -> B -> C -> 0`.
#[derive(Clone, Debug)]
pub struct Horseshoe<F: Field> {
    pub cover_left: ProjectiveCover<F>,
    pub cover_right: ProjectiveCover<F>,
    /// `P_A ⊕ P_C -> B`.
    pub middle_epi: ModuleMap<F>,
    /// `K -> P_A ⊕ P_C`, the kernel of `middle_epi`.
    pub kernel_incl: ModuleMap<F>,
    /// `0 -> Ω(A) -> K -> Ω(C) -> 0`.
    pub syzygy_ses: ShortExactSequence<F>,
}

impl<F: Field> Horseshoe<F> {
    pub fn middle_kernel(&self) -> &Representation<F> {
        self.syzygy_ses.middle()
    }

    /// Vertices of the summands of `P_A ⊕ P_C`.
    pub fn middle_vertices(&self) -> Vec<usize> {
        let mut v = self.cover_left.summand_vertices();
        v.extend(self.cover_right.summand_vertices());
        v
    }
}

pub fn horseshoe<F: Field>(ses: &ShortExactSequence<F>) -> Result<Horseshoe<F>> {
    let alg = ses.middle().algebra().clone();
    let (omega_a, incl_a, cover_left) = first_syzygy(ses.left());
    let (omega_c, incl_c, cover_right) = first_syzygy(ses.right());
    let h = lift_cover(&cover_right, &ses.g)?;
    let sum = direct_sum(
        &alg,
        &[
            cover_left.projective.clone(),
            cover_right.projective.clone(),
        ],
    )?;
    let left_part = ses
        .f
        .compose(&cover_left.epi)?
        .compose(&sum.projections[0])?;
    let right_part = h.compose(&sum.projections[1])?;
    let middle_epi = left_part.add(&right_part);
    if !middle_epi.is_surjective() {
        return Err(Error::Verification(
            "horseshoe middle map is not surjective".into(),
        ));
    }
    let (_, kernel_incl) = kernel(&middle_epi);
    let into_k = factor_through_mono(&sum.injections[0].compose(&incl_a)?, &kernel_incl)?;
    let out_of_k = factor_through_mono(&sum.projections[1].compose(&kernel_incl)?, &incl_c)?;
    let _ = (omega_a, omega_c);
    let syzygy_ses = ShortExactSequence::new(into_k, out_of_k)?;
    Ok(Horseshoe {
        cover_left,
        cover_right,
        middle_epi,
        kernel_incl,
        syzygy_ses,
    })
}

/// Vertices `v` with multiplicity `top(big)_v - top(small)_v`, or an error
/// if some difference is negative.
fn top_difference<F: Field>(
    big: &Representation<F>,
    small: &Representation<F>,
) -> Result<Vec<usize>> {
    let (tb, ts) = (top_dims(big), top_dims(small));
    let mut out = Vec::new();
    for v in 0..tb.len() {
        if tb[v] < ts[v] {
            return Err(Error::Verification(format!(
                "top of the summand exceeds the module at vertex {v}"
            )));
        }
        out.extend(std::iter::repeat_n(v, tb[v] - ts[v]));
    }
    Ok(out)
}

/// An isomorphism `X ⊕ Q -> K` with `Q = ⊕ P(v)` projective.
#[derive(Clone, Debug)]
pub struct SplitCertificate<F: Field> {
    pub projective_vertices: Vec<usize>,
    pub projective: Representation<F>,
    /// `X ⊕ Q`, literally.
    pub sum: Representation<F>,
    pub iso: ModuleMap<F>,
}

/// Certifies `K ≅ X ⊕ Q` for a projective `Q` read off from the tops.
pub fn certify_plus_projective<F: Field>(
    k: &Representation<F>,
    x: &Representation<F>,
    iso: IsoOptions,
) -> Result<SplitCertificate<F>> {
    let alg = k.algebra();
    let verts = top_difference(k, x)?;
    let projective = projective_sum(alg, &verts);
    let sum = direct_sum(alg, &[x.clone(), projective.clone()])?.sum;
    match is_isomorphic(&sum, k, iso)? {
        IsoVerdict::Isomorphic(w) => Ok(SplitCertificate {
            projective_vertices: verts,
            projective,
            sum,
            iso: w,
        }),
        IsoVerdict::NotIsomorphic(why) => Err(Error::Verification(format!(
            "module is not a syzygy plus a projective: {why}"
        ))),
        IsoVerdict::Undetermined => Err(Error::Verification(
            "could not certify the splitting off of a projective summand".into(),
        )),
    }
}

/// Result of the syzygy-shift construction.
#[derive(Clone, Debug)]
pub struct ShiftResult<F: Field> {
    /// `0 -> Ω^{i+1}(C) -> Ω^i(A) ⊕ Q_i -> Ω^i(B) -> 0`.
    pub ses: ShortExactSequence<F>,
    pub q: Representation<F>,
    pub q_vertices: Vec<usize>,
    pub i: usize,
}

/// `0 -> Ω^{i+1}(C) -> Ω^i(A) ⊕ Q_i -> Ω^i(B) -> 0` from
/// `0 -> A -> B -> C -> 0`: pull back along the projective cover of `C`,
/// then apply the horseshoe lemma `i` times. The middle term is returned
/// literally as `Ω^i(A) ⊕ Q_i`.
pub fn syzygy_shift_ses<F: Field>(
    ses: &ShortExactSequence<F>,
    i: usize,
    iso: IsoOptions,
) -> Result<ShiftResult<F>> {
    let alg = ses.middle().algebra().clone();
    let (a, b, c) = (ses.left(), ses.middle(), ses.right());
    let (omega_c, iota, cover) = first_syzygy(c);
    let s = lift_cover(&cover, &ses.g)?;
    let pb = pullback(&ses.g, &cover.epi)?;

    // Ω(C) -> E, ω ↦ (0, ι ω).
    let bp = direct_sum(&alg, &[b.clone(), cover.projective.clone()])?;
    let j = factor_through_mono(&bp.injections[1].compose(&iota)?, &pb.incl)?;

    // A ⊕ P -> E, (a, p) ↦ (f a + s p, p).
    let ap = direct_sum(&alg, &[a.clone(), cover.projective.clone()])?;
    let to_b = ses
        .f
        .compose(&ap.projections[0])?
        .add(&s.compose(&ap.projections[1])?);
    let to_bp = bp.injections[0]
        .compose(&to_b)?
        .add(&bp.injections[1].compose(&ap.projections[1])?);
    let phi = factor_through_mono(&to_bp, &pb.incl)?;
    let phi_inv = phi
        .inverse()
        .ok_or_else(|| Error::Verification("A ⊕ P -> E is not an isomorphism".into()))?;
    let _ = omega_c;
    let mut cur = ShortExactSequence::new(phi_inv.compose(&j)?, pb.to_left.compose(&phi)?)?;
    let mut q = cover.projective.clone();
    let mut q_vertices = cover.summand_vertices();

    let mut omega_a = a.clone();
    for _ in 0..i {
        omega_a = first_syzygy(&omega_a).0;
        let hs = horseshoe(&cur)?;
        let cert = certify_plus_projective(hs.middle_kernel(), &omega_a, iso)?;
        let w_inv = cert.iso.inverse().expect("certified isomorphism");
        let f = w_inv.compose(&hs.syzygy_ses.f)?;
        let g = hs.syzygy_ses.g.compose(&cert.iso)?;
        cur = ShortExactSequence::new(f, g)?;
        q = cert.projective;
        q_vertices = cert.projective_vertices;
    }
    Ok(ShiftResult {
        ses: cur,
        q,
        q_vertices,
        i,
    })
}

/// An exact sequence `0 -> X_k -> ... -> X_1 -> X_0 -> T -> 0`.
#[derive(Clone, Debug)]
pub struct LongExactChain<F: Field> {
    /// `modules[i] = X_i`.
    pub modules: Vec<Representation<F>>,
    /// `maps[0]: X_0 -> T`, `maps[i]: X_i -> X_{i-1}`.
    pub maps: Vec<ModuleMap<F>>,
    pub target: Representation<F>,
}

impl<F: Field> LongExactChain<F> {
    /// The empty resolution of a zero module.
    pub fn empty(target: Representation<F>) -> Self {
        Self {
            modules: Vec::new(),
            maps: Vec::new(),
            target,
        }
    }

    /// Number of resolving terms minus one (`-1` when empty).
    pub fn length(&self) -> i64 {
        self.modules.len() as i64 - 1
    }

    /// Recomputes exactness from ranks at every position.
    pub fn validate(&self) -> Result<()> {
        if self.modules.len() != self.maps.len() {
            return Err(Error::Verification(
                "chain has mismatched module and map counts".into(),
            ));
        }
        if self.modules.is_empty() {
            return if self.target.is_zero() {
                Ok(())
            } else {
                Err(Error::Verification(
                    "empty chain over a nonzero module".into(),
                ))
            };
        }
        for (i, m) in self.maps.iter().enumerate() {
            m.check()
                .map_err(|e| Error::Verification(format!("map {i}: {e}")))?;
            if m.dom().dims() != self.modules[i].dims() {
                return Err(Error::Verification(format!("map {i} has the wrong domain")));
            }
            let cod = if i == 0 {
                &self.target
            } else {
                &self.modules[i - 1]
            };
            if m.cod().dims() != cod.dims() {
                return Err(Error::Verification(format!(
                    "map {i} has the wrong codomain"
                )));
            }
        }
        if !self.maps[0].is_surjective() {
            return Err(Error::Verification("augmentation is not surjective".into()));
        }
        for i in 1..self.maps.len() {
            let (d, prev) = (&self.maps[i], &self.maps[i - 1]);
            if !prev.compose(d)?.is_zero() {
                return Err(Error::Verification(format!(
                    "composite at position {} is not zero",
                    i - 1
                )));
            }
            if d.rank() + prev.rank() != self.modules[i - 1].total_dim() {
                return Err(Error::Verification(format!(
                    "not exact at position {}",
                    i - 1
                )));
            }
        }
        if !self.maps.last().expect("nonempty").is_injective() {
            return Err(Error::Verification("last map is not injective".into()));
        }
        Ok(())
    }
}

/// Loewy resolution `0 -> M_{n-1} -> ... -> M_0 -> M -> 0` with
/// `M_i ∈ add(Λ/rad^{n-i} Λ)`, `n = LL(Λ)`.
#[derive(Clone, Debug)]
pub struct LoewyResolution<F: Field> {
    pub chain: LongExactChain<F>,
    /// `budgets[i] = n - i`.
    pub budgets: Vec<usize>,
}

pub fn loewy_resolution<F: Field>(m: &Representation<F>) -> Result<LoewyResolution<F>> {
    if m.is_zero() {
        return Err(Error::Parameter(
            "Loewy resolution of the zero module".into(),
        ));
    }
    let alg = m.algebra();
    let n = alg.nilpotency_degree();
    let mut chain = LongExactChain::empty(m.clone());
    let mut budgets = Vec::new();
    let mut cur = m.clone();
    let mut incl = ModuleMap::identity(m);
    let mut budget = n;
    while !cur.is_zero() {
        if budget == 0 {
            return Err(Error::Verification(
                "Loewy budget exhausted before the kernel vanished".into(),
            ));
        }
        let cover = projective_cover(&cur);
        let (_, rad_incl) = radical_power(&cover.projective, budget);
        let spaces: Vec<Subspace<F>> = rad_incl.blocks().iter().map(Subspace::span).collect();
        let (mi, proj) = quotient_by_spaces(&cover.projective, &spaces);
        // The cover factors through P / rad^budget P since rad^budget cur = 0.
        let lifts: Vec<Matrix<F>> = spaces.iter().map(|s| s.complement().clone()).collect();
        let epi_blocks = cover
            .epi
            .blocks()
            .iter()
            .zip(&lifts)
            .map(|(e, l)| e.mul(l))
            .collect();
        let epi = ModuleMap::from_parts(mi.clone(), cur.clone(), epi_blocks);
        epi.check()?;
        let _ = proj;
        let d = incl.compose(&epi)?;
        chain.modules.push(mi);
        chain.maps.push(d);
        budgets.push(budget);
        let (k, k_incl) = kernel(&epi);
        cur = k;
        incl = k_incl;
        budget -= 1;
    }
    Ok(LoewyResolution { chain, budgets })
}

/// `P(v) / rad^k P(v)` for every vertex.
pub fn radical_quotient_parts<F: Field>(
    algebra: &Arc<Algebra<F>>,
    k: usize,
) -> Vec<Representation<F>> {
    (0..algebra.num_vertices())
        .map(|v| {
            let p = Representation::projective(algebra, v);
            crate::rep::quotient(&radical_power(&p, k).1).0
        })
        .collect()
}

/// A labelled summand of an Igusa-Todorov generator.
#[derive(Clone, Debug)]
pub struct GeneratorPart<F: Field> {
    pub label: String,
    pub module: Representation<F>,
}

/// One test module and its resolution of `Ω^n(M)` by the generator.
#[derive(Clone, Debug)]
pub struct Evidence<F: Field> {
    pub label: String,
    pub module: Representation<F>,
    pub chain: LongExactChain<F>,
    /// Labels of generator parts needed to certify the chain terms.
    pub parts_used: Vec<String>,
}

/// Verified `(m, n)`-Igusa-Todorov data over a finite sample of modules.
#[derive(Clone, Debug)]
pub struct ItCertificate<F: Field> {
    pub m: usize,
    pub n: usize,
    pub generator: Vec<GeneratorPart<F>>,
    pub evidence: Vec<Evidence<F>>,
}

impl<F: Field> ItCertificate<F> {
    /// The bound `2m + n + 1`.
    pub fn bound(&self) -> usize {
        2 * self.m + self.n + 1
    }

    /// Re-validates every chain: exact, at most `m + 1` terms, augmenting to
    /// `Ω^n` of its module, each term in add of the generator.
    pub fn verify(&self) -> Result<()> {
        let parts: Vec<Representation<F>> =
            self.generator.iter().map(|p| p.module.clone()).collect();
        for ev in &self.evidence {
            ev.chain.validate()?;
            if ev.chain.modules.len() > self.m + 1 {
                return Err(Error::Verification(format!(
                    "{}: chain is too long",
                    ev.label
                )));
            }
            let target = syzygy(&ev.module, self.n);
            if !is_isomorphic(&target, &ev.chain.target, IsoOptions::default())?.is_isomorphic() {
                return Err(Error::Verification(format!(
                    "{}: chain does not augment to Ω^n",
                    ev.label
                )));
            }
            for (i, t) in ev.chain.modules.iter().enumerate() {
                if !in_add_parts(t, &parts)? {
                    return Err(Error::Verification(format!(
                        "{}: term {i} is not in add of the generator",
                        ev.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parts used to certify `x ∈ add(⊕ parts)`; `None` if not a member.
/// Traces `g ∘ f` are collected part by part until they span the identity
/// of `X`; the contributing parts are then pruned greedily.
pub fn in_add_detail<F: Field>(
    x: &Representation<F>,
    parts: &[GeneratorPart<F>],
) -> Result<Option<Vec<String>>> {
    if x.is_zero() {
        return Ok(Some(Vec::new()));
    }
    let id = ModuleMap::identity(x).flatten();
    let mut span = EchelonSpan::new(x.field(), id.len());
    let mut contributed = Vec::new();
    'parts: for (i, part) in parts.iter().enumerate() {
        let fs = hom_basis(x, &part.module)?;
        if fs.is_empty() {
            continue;
        }
        let gs = hom_basis(&part.module, x)?;
        let mut grew = false;
        for fm in &fs {
            for gm in &gs {
                grew |= span.insert(gm.compose(fm)?.flatten());
            }
            if grew && span.contains(&id) {
                contributed.push(i);
                break 'parts;
            }
        }
        if grew {
            contributed.push(i);
        }
    }
    if !span.contains(&id) {
        return Ok(None);
    }
    let mut keep = contributed;
    let mut idx = 0;
    while keep.len() > 1 && idx < keep.len() {
        let trial: Vec<Representation<F>> = keep
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, &i)| parts[i].module.clone())
            .collect();
        if in_add_parts(x, &trial)? {
            keep.remove(idx);
        } else {
            idx += 1;
        }
    }
    Ok(Some(
        keep.into_iter().map(|i| parts[i].label.clone()).collect(),
    ))
}

/// `Λ ⊕ ⊕_{i ∈ range} Ω^i(Λ/rad Λ)`, split into indecomposable projectives
/// and syzygies of simples.
pub fn syzygy_generator<F: Field>(
    algebra: &Arc<Algebra<F>>,
    range: std::ops::RangeInclusive<usize>,
) -> Vec<GeneratorPart<F>> {
    let q = algebra.quiver();
    let mut parts: Vec<GeneratorPart<F>> = (0..algebra.num_vertices())
        .map(|v| GeneratorPart {
            label: format!("P({})", q.vertex_name(v)),
            module: Representation::projective(algebra, v),
        })
        .collect();
    for v in 0..algebra.num_vertices() {
        let mut cur = Representation::simple(algebra, v);
        let mut level = 0;
        for i in range.clone() {
            while level < i && !cur.is_zero() {
                cur = first_syzygy(&cur).0;
                level += 1;
            }
            if cur.is_zero() {
                break;
            }
            parts.push(GeneratorPart {
                label: format!("Ω^{i}(S({}))", q.vertex_name(v)),
                module: cur.clone(),
            });
        }
    }
    parts
}

/// A module with a descending chain of submodules, `subs[i][v]` holding a
/// basis of `(X_i)_v` in the coordinates of the module; `subs[0]` is everything.
#[derive(Clone, Debug)]
struct Filtered<F: Field> {
    module: Representation<F>,
    subs: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> Filtered<F> {
    /// `X_i / X_{i+1}` (with `X_len = 0`) and the lifts of its basis into
    /// the module.
    fn layer(&self, i: usize) -> (Representation<F>, Vec<Matrix<F>>) {
        let f = self.module.field();
        let (xi, _) = submodule_from_spaces(
            &self.module,
            &self.subs[i]
                .iter()
                .cloned()
                .map(Subspace::from_basis)
                .collect::<Vec<_>>(),
        )
        .expect("filtration steps are submodules");
        let nv = self.subs[i].len();
        let inner: Vec<Subspace<F>> = (0..nv)
            .map(|v| match self.subs.get(i + 1) {
                None => Subspace::from_basis(Matrix::zeros(f, xi.dim_at(v), 0)),
                Some(next) => {
                    let coords = Subspace::from_basis(self.subs[i][v].clone())
                        .coordinates(&next[v])
                        .expect("filtration is descending");
                    Subspace::from_basis(coords)
                }
            })
            .collect();
        let (layer, _) = quotient_by_spaces(&xi, &inner);
        let lifts = (0..nv)
            .map(|v| self.subs[i][v].mul(inner[v].complement()))
            .collect();
        (layer, lifts)
    }
}

/// One filtered horseshoe step: cover every layer, lift the covers into the
/// module, and return the kernel with its induced filtration. Layer `i` of
/// the result is the syzygy of layer `i` of the input.
fn filtered_syzygy<F: Field>(x: &Filtered<F>) -> Result<Filtered<F>> {
    let alg = x.module.algebra();
    let f = x.module.field();
    let nv = alg.num_vertices();
    let mut gens: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut starts = Vec::new();
    for i in 0..x.subs.len() {
        starts.push(gens.len());
        let (layer, lifts) = x.layer(i);
        let cover = projective_cover(&layer);
        for (v, y) in cover.generators {
            gens.push((v, lifts[v].mul_vec(&y)));
        }
    }
    let vertices: Vec<usize> = gens.iter().map(|g| g.0).collect();
    let p = projective_sum(alg, &vertices);
    let eps = map_from_projective(&p, &x.module, &gens);
    if !eps.is_surjective() {
        return Err(Error::Verification(
            "filtered cover is not surjective".into(),
        ));
    }
    let (g, g_incl) = kernel(&eps);

    // Coordinates in P_j: summands in generator order, each with its paths.
    let offsets: Vec<Vec<usize>> = (0..nv)
        .map(|j| {
            let mut acc = 0;
            vertices
                .iter()
                .map(|&v| {
                    let o = acc;
                    acc += alg.block(v, j).len();
                    o
                })
                .collect()
        })
        .collect();
    let mut subs = Vec::with_capacity(x.subs.len());
    for &start in &starts {
        let blocks: Vec<Matrix<F>> = (0..nv)
            .map(|j| {
                let first = offsets[j].get(start).copied().unwrap_or(p.dim_at(j));
                let tail = eps.block(j).column_range(first, p.dim_at(j));
                let ker = tail.kernel();
                let mut padded = Matrix::zeros(f, p.dim_at(j), ker.cols());
                padded.paste(first, 0, &ker);
                Subspace::from_basis(g_incl.block(j).clone())
                    .coordinates(&padded)
                    .expect("tail kernel lies in the kernel")
            })
            .collect();
        subs.push(blocks);
    }
    Ok(Filtered { module: g, subs })
}

/// The evidence for one sample module in the layer-length certificate.
fn thm47_chain<F: Field>(
    m: &Representation<F>,
    v: &SimpleSet,
    layer_len: usize,
    pd_v: i64,
    iso: IsoOptions,
) -> Result<LongExactChain<F>> {
    let alg = m.algebra().clone();
    let rounds = (pd_v + 1) as usize;
    let target = syzygy(m, rounds + 1);
    let (t, _) = torsion_radical(m, v);
    let n_mod = first_syzygy(&t).0;

    // Filtration N = F^0 ⊇ F^1 ⊇ ... ⊇ F^{L-1}, the last step in F(V).
    let subs: Vec<Vec<Matrix<F>>> = (0..layer_len)
        .map(|i| {
            layer_functor_with_inclusion(&n_mod, v, i)
                .1
                .blocks()
                .to_vec()
        })
        .collect();
    let last = layer_functor(&n_mod, v, layer_len - 1);
    if !torsion_radical(&last, v).0.is_zero() {
        return Err(Error::Verification(
            "layer filtration of the syzygy does not end in F(V)".into(),
        ));
    }
    let mut filt = Filtered {
        module: n_mod,
        subs,
    };
    for _ in 0..rounds {
        filt = filtered_syzygy(&filt)?;
    }
    if filt.subs[layer_len - 1].iter().any(|b| b.cols() > 0) {
        return Err(Error::Verification(
            "last filtration step survives the syzygy rounds".into(),
        ));
    }
    if target.is_zero() {
        return Ok(LongExactChain::empty(target));
    }
    let g = filt.module.clone();

    // D_j = G / G_{j+2}; the SES 0 -> Z_k -> D_{k-1} -> D_{k-2} -> 0.
    let spaces = |i: usize| -> Vec<Subspace<F>> {
        filt.subs[i]
            .iter()
            .cloned()
            .map(Subspace::from_basis)
            .collect()
    };
    let quotients: Vec<(Representation<F>, ModuleMap<F>)> = (0..layer_len)
        .map(|i| quotient_by_spaces(&g, &spaces(i)))
        .collect();
    let d = |j: usize| -> &(Representation<F>, ModuleMap<F>) { &quotients[j] };
    let mut shifted: Vec<ShiftResult<F>> = Vec::new();
    for k in 1..=layer_len - 2 {
        // d(k + 1) = D_{k-1}, d(k) = D_{k-2}.
        let (dk1, pk1) = d(k + 1);
        let (dk2, pk2) = d(k);
        let lifts = spaces(k + 1);
        let down_blocks = (0..alg.num_vertices())
            .map(|v| pk2.block(v).mul(lifts[v].complement()))
            .collect();
        let down = ModuleMap::from_parts(dk1.clone(), dk2.clone(), down_blocks);
        let zk_spaces: Vec<Subspace<F>> = spaces(k)
            .iter()
            .enumerate()
            .map(|(vtx, s)| Subspace::span(&pk1.block(vtx).mul(s.basis())))
            .collect();
        let (_, zk_incl) = submodule_from_spaces(dk1, &zk_spaces)?;
        let ses = ShortExactSequence::new(zk_incl, down)?;
        shifted.push(syzygy_shift_ses(&ses, layer_len - 2 - k, iso)?);
    }

    // The last sequence ends in D_{L-3} = G; pull it back along a split
    // mono Ω^{d+2}(M) -> G.
    let last_map = match shifted.last() {
        Some(s) => s.ses.g.clone(),
        None => ModuleMap::identity(&g),
    };
    let split = find_split_mono(&target, &g, iso)?;
    let pb = pullback(&last_map, &split)?;
    let mut modules = vec![pb.module.clone()];
    let mut maps = vec![pb.to_right.clone()];

    // Splice from the right: middles of earlier sequences, then the left end
    // of the first one. The map out of term j is f_{k+1} ∘ g_k.
    for idx in (0..shifted.len()).rev() {
        let s = &shifted[idx];
        let (module, into_next) = if idx == 0 {
            (s.ses.left().clone(), s.ses.f.clone())
        } else {
            let before = &shifted[idx - 1];
            let g_prev = retarget_eq(&before.ses.g, s.ses.left())?;
            (before.ses.middle().clone(), s.ses.f.compose(&g_prev)?)
        };
        let map = if idx + 1 == shifted.len() {
            // Into W ⊆ middle ⊕ Ω^{d+2}(M) as x ↦ (f x, 0).
            let sum = direct_sum(&alg, &[into_next.cod().clone(), target.clone()])?;
            factor_through_mono(&sum.injections[0].compose(&into_next)?, &pb.incl)?
        } else {
            into_next
        };
        modules.push(module);
        maps.push(map);
    }
    let chain = LongExactChain {
        modules,
        maps,
        target,
    };
    chain.validate()?;
    Ok(chain)
}

/// The same map with its codomain replaced by an equal module.
fn retarget_eq<F: Field>(map: &ModuleMap<F>, cod: &Representation<F>) -> Result<ModuleMap<F>> {
    if map.cod() != cod {
        return Err(Error::Verification(
            "spliced sequences do not share their end terms".into(),
        ));
    }
    Ok(map.retarget(map.dom(), cod))
}

/// A split monomorphism `X -> Y` (with `X` a summand of `Y`), found by
/// sampling `s: X -> Y`, `r: Y -> X` until `r ∘ s` is invertible.
pub fn find_split_mono<F: Field>(
    x: &Representation<F>,
    y: &Representation<F>,
    iso: IsoOptions,
) -> Result<ModuleMap<F>> {
    if x.is_zero() {
        return Ok(ModuleMap::zero(x, y));
    }
    let fld = x.field();
    let into = hom_basis(x, y)?;
    let back = hom_basis(y, x)?;
    if into.is_empty() || back.is_empty() {
        return Err(Error::Verification("module is not a direct summand".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(iso.seed);
    for _ in 0..iso.samples.max(1) {
        let a: Vec<F::Elem> = (0..into.len()).map(|_| fld.random_elem(&mut rng)).collect();
        let b: Vec<F::Elem> = (0..back.len()).map(|_| fld.random_elem(&mut rng)).collect();
        let s = combine_maps(&into, &a);
        let r = combine_maps(&back, &b);
        if r.compose(&s)?.is_isomorphism() {
            return Ok(s);
        }
    }
    Err(Error::Verification(
        "no split monomorphism found by sampling".into(),
    ))
}

/// Options for building certificates.
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub cutoff: usize,
    pub iso: IsoOptions,
}

/// Builds the `(ℓℓ^{t_V}(Λ) - 2, pd V + 2)` certificate over the samples.
pub fn thm47_certificate<F: Field>(
    algebra: &Arc<Algebra<F>>,
    v: &SimpleSet,
    samples: &[(String, Representation<F>)],
    opts: CertifyOptions,
) -> Result<ItCertificate<F>> {
    let layer_len = algebra_layer_length(algebra, v);
    if layer_len < 2 {
        return Err(Error::Hypothesis(format!(
            "layer length of the algebra is {layer_len}, the construction needs at least 2"
        )));
    }
    let pd_v = match pd_set(algebra, v, opts.cutoff)? {
        PdResult::MinusOne => -1,
        PdResult::Finite(d) => d as i64,
        other => {
            return Err(Error::Hypothesis(format!("pd V is not finite ({other})")));
        }
    };
    let m = layer_len - 2;
    let n = (pd_v + 2) as usize;
    let lo = (pd_v + 1) as usize;
    let hi = (pd_v + layer_len as i64 - 1) as usize;
    let generator = syzygy_generator(algebra, lo..=hi);
    use rayon::prelude::*;
    let evidence = samples
        .par_iter()
        .map(|(label, module)| {
            let chain = thm47_chain(module, v, layer_len, pd_v, opts.iso)?;
            let mut used: Vec<String> = Vec::new();
            for (i, term) in chain.modules.iter().enumerate() {
                let parts = in_add_detail(term, &generator)?.ok_or_else(|| {
                    Error::Verification(format!("{label}: term {i} is not in add of the generator"))
                })?;
                for p in parts {
                    if !used.contains(&p) {
                        used.push(p);
                    }
                }
            }
            Ok(Evidence {
                label: label.clone(),
                module: module.clone(),
                chain,
                parts_used: used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = ItCertificate {
        m,
        n,
        generator,
        evidence,
    };
    Ok(cert)
}

/// Outcome of a direct resolution check against a generator.
#[derive(Clone, Debug)]
pub enum AddResolution<F: Field> {
    Certified(LongExactChain<F>),
    /// Failure of this particular construction; not a disproof.
    NotCertified(String),
}

impl<F: Field> AddResolution<F> {
    pub fn is_certified(&self) -> bool {
        matches!(self, AddResolution::Certified(_))
    }
}

/// Resolves `Ω^n(M)` by full evaluation maps from the generator parts,
/// stopping once a kernel lies in add of the generator.
pub fn check_addv_resolution<F: Field>(
    m: &Representation<F>,
    generator: &[Representation<F>],
    max_len: usize,
    n: usize,
) -> Result<AddResolution<F>> {
    let alg = m.algebra().clone();
    let target = syzygy(m, n);
    let mut chain = LongExactChain::empty(target.clone());
    if target.is_zero() {
        return Ok(AddResolution::Certified(chain));
    }
    let mut cur = target;
    let mut incl = ModuleMap::identity(&cur);
    for step in 0..=max_len {
        if in_add_parts(&cur, generator)? {
            chain.modules.push(cur.clone());
            chain.maps.push(incl);
            chain.validate()?;
            return Ok(AddResolution::Certified(chain));
        }
        if step == max_len {
            return Ok(AddResolution::NotCertified(format!(
                "kernel after {max_len} steps is not in add of the generator"
            )));
        }
        // Evaluation map ⊕_{parts, f ∈ Hom(part, cur)} part -> cur.
        let mut copies = Vec::new();
        let mut maps = Vec::new();
        for p in generator {
            for h in hom_basis(p, &cur)? {
                copies.push(p.clone());
                maps.push(h);
            }
        }
        let sum = direct_sum(&alg, &copies)?;
        let mut eval = ModuleMap::zero(&sum.sum, &cur);
        for (h, pr) in maps.iter().zip(&sum.projections) {
            eval = eval.add(&h.compose(pr)?);
        }
        if !eval.is_surjective() {
            return Ok(AddResolution::NotCertified(format!(
                "step {step}: the generator does not generate the kernel"
            )));
        }
        chain.modules.push(sum.sum.clone());
        chain.maps.push(incl.compose(&eval)?);
        let (k, k_incl) = kernel(&eval);
        if k.is_zero() {
            chain.validate()?;
            return Ok(AddResolution::Certified(chain));
        }
        cur = k;
        incl = k_incl;
    }
    unreachable!("loop returns at step == max_len")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_algebra;
    use crate::rep::hom_basis;

    fn a2() -> Arc<Algebra<PrimeField>> {
        parse_algebra(
            "vertices: 1 2\narrow a: 1 -> 2\n",
            PrimeField::default(),
            64,
        )
        .unwrap()
    }

    fn a2_ses() -> ShortExactSequence<PrimeField> {
        let a = a2();
        let s1 = Representation::simple(&a, 0);
        let s2 = Representation::simple(&a, 1);
        let p1 = Representation::projective(&a, 0);
        let f = hom_basis(&s2, &p1).unwrap().remove(0);
        let g = hom_basis(&p1, &s1).unwrap().remove(0);
        ShortExactSequence::new(f, g).unwrap()
    }

    #[test]
    fn horseshoe_a2() {
        let h = horseshoe(&a2_ses()).unwrap();
        assert!(h.syzygy_ses.left().is_zero());
        assert_eq!(h.middle_kernel().dims(), &[0, 1]);
    }

    #[test]
    fn shift_a2() {
        let r = syzygy_shift_ses(&a2_ses(), 0, IsoOptions::default()).unwrap();
        assert_eq!(r.ses.left().dims(), &[0, 1]);
        assert_eq!(r.ses.middle().dims(), &[1, 2]);
        assert_eq!(r.ses.right().dims(), &[1, 1]);
        assert_eq!(r.q_vertices, vec![0]);
    }

    #[test]
    fn pushout_pullback_a2() {
        let a = a2();
        let ses = a2_ses();
        let s2 = ses.left().clone();
        let zero = ModuleMap::zero(&s2, &Representation::zero(&a));
        let po = pushout(&ses.f, &zero).unwrap();
        assert_eq!(po.module.dims(), &[1, 0]);
        let pb = pullback(&ses.g, &ModuleMap::identity(ses.right())).unwrap();
        assert_eq!(pb.module.dims(), &[1, 1]);
    }

    #[test]
    fn loewy_a2() {
        let a = a2();
        let r = loewy_resolution(&Representation::simple(&a, 0)).unwrap();
        r.chain.validate().unwrap();
        assert_eq!(r.chain.modules.len(), 2);
        assert_eq!(r.chain.modules[1].dims(), &[0, 1]);
    }

    #[test]
    fn add_resolution_a2() {
        let a = a2();
        let lam = vec![Representation::regular(&a)];
        let r = check_addv_resolution(&Representation::simple(&a, 0), &lam, 0, 1).unwrap();
        assert!(r.is_certified());
    }
}

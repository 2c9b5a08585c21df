//! Right modules over a bound quiver algebra, given as representations, and
//! the exact linear algebra on them.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, PathWord};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{EchelonSpan, Matrix, Subspace};

struct RepInner<F: Field> {
    algebra: Arc<Algebra<F>>,
    dims: Vec<usize>,
    action: Vec<Matrix<F>>,
    /// Action of every basis path of the algebra, built on first use.
    paths: OnceLock<Vec<Matrix<F>>>,
}

/// A finite-dimensional right module: a vector space per vertex and a matrix
/// (target × source) per arrow. Cloning is cheap.
#[derive(Clone)]
pub struct Representation<F: Field> {
    inner: Arc<RepInner<F>>,
}

impl<F: Field> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dims", &self.inner.dims)
            .field("action", &self.inner.action)
            .finish()
    }
}

impl<F: Field> PartialEq for Representation<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (same_algebra(&self.inner.algebra, &other.inner.algebra)
                && self.inner.dims == other.inner.dims
                && self.inner.action == other.inner.action)
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<Algebra<F>>, b: &Arc<Algebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn path_matrix<F: Field>(
    field: &F,
    dims: &[usize],
    action: &[Matrix<F>],
    p: &PathWord,
) -> Matrix<F> {
    let mut m = Matrix::identity(field, dims[p.source]);
    for &a in &p.arrows {
        m = action[a].mul(&m);
    }
    m
}

impl<F: Field> Representation<F> {
    /// Validates matrix shapes and that every relation acts as zero.
    pub fn new(algebra: Arc<Algebra<F>>, dims: Vec<usize>, action: Vec<Matrix<F>>) -> Result<Self> {
        let q = algebra.quiver();
        if dims.len() != q.num_vertices() {
            return Err(Error::InvalidModule(format!(
                "expected {} vertex dimensions, got {}",
                q.num_vertices(),
                dims.len()
            )));
        }
        if action.len() != q.num_arrows() {
            return Err(Error::InvalidModule(format!(
                "expected {} arrow matrices, got {}",
                q.num_arrows(),
                action.len()
            )));
        }
        for (a, m) in q.arrows().iter().zip(&action) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(Error::InvalidModule(format!(
                    "matrix for arrow {} has shape {:?}, expected {:?}",
                    a.name,
                    m.shape(),
                    (dims[a.target], dims[a.source])
                )));
            }
        }
        let field = algebra.field().clone();
        for (i, r) in algebra.relations().iter().enumerate() {
            let mut acc = Matrix::zeros(&field, dims[r.target()], dims[r.source()]);
            for (c, p) in &r.terms {
                acc = acc.add(&path_matrix(&field, &dims, &action, p).scale(c));
            }
            if !acc.is_zero() {
                return Err(Error::InvalidModule(format!(
                    "relation {} does not act as zero",
                    i + 1
                )));
            }
        }
        Ok(Self::from_parts(algebra, dims, action))
    }

    pub(crate) fn from_parts(
        algebra: Arc<Algebra<F>>,
        dims: Vec<usize>,
        action: Vec<Matrix<F>>,
    ) -> Self {
        Self {
            inner: Arc::new(RepInner {
                algebra,
                dims,
                action,
                paths: OnceLock::new(),
            }),
        }
    }

    pub fn zero(algebra: &Arc<Algebra<F>>) -> Self {
        let n = algebra.num_vertices();
        Self::semisimple(algebra, &vec![0; n])
    }

    /// `⊕ S(i)^{mult[i]}`.
    pub fn semisimple(algebra: &Arc<Algebra<F>>, mult: &[usize]) -> Self {
        let f = algebra.field();
        let action = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(f, mult[a.target], mult[a.source]))
            .collect();
        Self::from_parts(algebra.clone(), mult.to_vec(), action)
    }

    pub fn simple(algebra: &Arc<Algebra<F>>, v: usize) -> Self {
        let mut mult = vec![0; algebra.num_vertices()];
        mult[v] = 1;
        Self::semisimple(algebra, &mult)
    }

    /// The indecomposable projective `P(v) = e_v Λ`; the basis at vertex `j`
    /// is the normal-form paths `v -> j`.
    pub fn projective(algebra: &Arc<Algebra<F>>, v: usize) -> Self {
        let data = algebra.projective_data(v);
        Self::from_parts(algebra.clone(), data.dims.clone(), data.action.clone())
    }

    /// The regular module `Λ = ⊕ P(v)`.
    pub fn regular(algebra: &Arc<Algebra<F>>) -> Self {
        let parts: Vec<_> = (0..algebra.num_vertices())
            .map(|v| Self::projective(algebra, v))
            .collect();
        direct_sum_module(algebra, &parts)
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.inner.algebra
    }

    pub fn field(&self) -> &F {
        self.inner.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.inner.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.inner.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn action(&self, arrow: usize) -> &Matrix<F> {
        &self.inner.action[arrow]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.inner.action
    }

    /// Action of the `b`-th basis path of the algebra.
    pub fn basis_path_action(&self, b: usize) -> &Matrix<F> {
        &self.path_actions()[b]
    }

    fn path_actions(&self) -> &[Matrix<F>] {
        self.inner.paths.get_or_init(|| {
            let alg = &self.inner.algebra;
            let f = alg.field();
            let mut out: Vec<Matrix<F>> = Vec::with_capacity(alg.dim());
            for (b, p) in alg.basis().iter().enumerate() {
                let m = match alg.basis_parent(b) {
                    None => Matrix::identity(f, self.inner.dims[p.source]),
                    Some(parent) => {
                        let a = *p.arrows.last().expect("non-trivial path");
                        self.inner.action[a].mul(&out[parent])
                    }
                };
                out.push(m);
            }
            out
        })
    }

    /// Action of an arbitrary path.
    pub fn path_action(&self, p: &PathWord) -> Matrix<F> {
        path_matrix(self.field(), &self.inner.dims, &self.inner.action, p)
    }

    pub(crate) fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if same_algebra(self.algebra(), other.algebra()) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Composition factors `(vertex, multiplicity)` with nonzero multiplicity.
    pub fn composition_factors(&self) -> Vec<(usize, usize)> {
        self.dims()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(v, &d)| (v, d))
            .collect()
    }
}

/// A module homomorphism, one block (cod × dom) per vertex.
#[derive(Clone, Debug)]
pub struct ModuleMap<F: Field> {
    dom: Representation<F>,
    cod: Representation<F>,
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for ModuleMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.blocks == other.blocks
    }
}

impl<F: Field> ModuleMap<F> {
    /// Validates shapes and the intertwining equations.
    pub fn new(
        dom: Representation<F>,
        cod: Representation<F>,
        blocks: Vec<Matrix<F>>,
    ) -> Result<Self> {
        dom.check_same_algebra(&cod)?;
        let m = Self::from_parts(dom, cod, blocks);
        m.check()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        dom: Representation<F>,
        cod: Representation<F>,
        blocks: Vec<Matrix<F>>,
    ) -> Self {
        Self { dom, cod, blocks }
    }

    /// Re-verifies shapes and `block_j · A_dom(a) = A_cod(a) · block_i`.
    pub fn check(&self) -> Result<()> {
        let n = self.dom.algebra().num_vertices();
        if self.blocks.len() != n {
            return Err(Error::InvalidMap(format!(
                "expected {n} blocks, got {}",
                self.blocks.len()
            )));
        }
        for v in 0..n {
            if self.blocks[v].shape() != (self.cod.dim_at(v), self.dom.dim_at(v)) {
                return Err(Error::InvalidMap(format!("block {v} has the wrong shape")));
            }
        }
        for (a, arrow) in self.dom.algebra().quiver().arrows().iter().enumerate() {
            let lhs = self.blocks[arrow.target].mul(self.dom.action(a));
            let rhs = self.cod.action(a).mul(&self.blocks[arrow.source]);
            if lhs != rhs {
                return Err(Error::InvalidMap(format!(
                    "does not commute with arrow {}",
                    arrow.name
                )));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Representation<F>) -> Self {
        let f = m.field();
        let blocks = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
        Self::from_parts(m.clone(), m.clone(), blocks)
    }

    pub fn zero(dom: &Representation<F>, cod: &Representation<F>) -> Self {
        let f = dom.field();
        let blocks = (0..dom.dims().len())
            .map(|v| Matrix::zeros(f, cod.dim_at(v), dom.dim_at(v)))
            .collect();
        Self::from_parts(dom.clone(), cod.clone(), blocks)
    }

    pub fn dom(&self) -> &Representation<F> {
        &self.dom
    }

    pub fn cod(&self) -> &Representation<F> {
        &self.cod
    }

    pub fn block(&self, v: usize) -> &Matrix<F> {
        &self.blocks[v]
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap<F>) -> Result<Self> {
        if first.cod.dims() != self.dom.dims() {
            return Err(Error::InvalidMap("composition of incompatible maps".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&first.blocks)
            .map(|(g, f)| g.mul(f))
            .collect();
        Ok(Self::from_parts(
            first.dom.clone(),
            self.cod.clone(),
            blocks,
        ))
    }

    pub fn add(&self, other: &ModuleMap<F>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::from_parts(self.dom.clone(), self.cod.clone(), blocks)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        Self::from_parts(self.dom.clone(), self.cod.clone(), blocks)
    }

    pub fn neg(&self) -> Self {
        let blocks = self.blocks.iter().map(|a| a.neg()).collect();
        Self::from_parts(self.dom.clone(), self.cod.clone(), blocks)
    }

    /// Same blocks, reinterpreted between other (equal) modules.
    pub(crate) fn retarget(&self, dom: &Representation<F>, cod: &Representation<F>) -> Self {
        Self::from_parts(dom.clone(), cod.clone(), self.blocks.clone())
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.dom.total_dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.cod.total_dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.dom.dims() == self.cod.dims() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_isomorphism() {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_parts(self.cod.clone(), self.dom.clone(), blocks))
    }

    /// All blocks flattened row-major, vertex by vertex.
    pub(crate) fn flatten(&self) -> Vec<F::Elem> {
        self.blocks
            .iter()
            .flat_map(|b| b.data().iter().cloned())
            .collect()
    }
}

/// Linear combination `Σ c_k f_k` of maps sharing domain and codomain.
pub fn combine_maps<F: Field>(maps: &[ModuleMap<F>], coeffs: &[F::Elem]) -> ModuleMap<F> {
    let first = &maps[0];
    let f = first.dom.field();
    let mut blocks: Vec<Matrix<F>> = first
        .blocks
        .iter()
        .map(|b| Matrix::zeros(f, b.rows(), b.cols()))
        .collect();
    for (m, c) in maps.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (acc, b) in blocks.iter_mut().zip(&m.blocks) {
            *acc = acc.add(&b.scale(c));
        }
    }
    ModuleMap::from_parts(first.dom.clone(), first.cod.clone(), blocks)
}

/// A short exact sequence `0 -> A -f-> B -g-> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence<F: Field> {
    pub f: ModuleMap<F>,
    pub g: ModuleMap<F>,
}

impl<F: Field> ShortExactSequence<F> {
    pub fn new(f: ModuleMap<F>, g: ModuleMap<F>) -> Result<Self> {
        let s = Self { f, g };
        s.validate()?;
        Ok(s)
    }

    /// Exactness from ranks: `f` injective, `g` surjective, `g∘f = 0` and
    /// `dim B = dim A + dim C`.
    pub fn validate(&self) -> Result<()> {
        self.f
            .check()
            .map_err(|e| Error::Verification(format!("left map: {e}")))?;
        self.g
            .check()
            .map_err(|e| Error::Verification(format!("right map: {e}")))?;
        if self.f.cod().dims() != self.g.dom().dims() {
            return Err(Error::Verification("maps are not composable".into()));
        }
        if !self.f.is_injective() {
            return Err(Error::Verification("left map is not injective".into()));
        }
        if !self.g.is_surjective() {
            return Err(Error::Verification("right map is not surjective".into()));
        }
        let gf = self.g.compose(&self.f)?;
        if !gf.is_zero() {
            return Err(Error::Verification("composite is not zero".into()));
        }
        for v in 0..self.f.dom().dims().len() {
            if self.f.cod().dim_at(v) != self.f.dom().dim_at(v) + self.g.cod().dim_at(v) {
                return Err(Error::Verification(format!(
                    "dimension count fails at vertex {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn left(&self) -> &Representation<F> {
        self.f.dom()
    }

    pub fn middle(&self) -> &Representation<F> {
        self.f.cod()
    }

    pub fn right(&self) -> &Representation<F> {
        self.g.cod()
    }
}

/// Submodule spanned at each vertex by the independent columns of
/// `bases[v]`; fails if the spaces are not arrow-stable.
pub fn submodule<F: Field>(
    m: &Representation<F>,
    bases: Vec<Matrix<F>>,
) -> Result<(Representation<F>, ModuleMap<F>)> {
    let spaces: Vec<Subspace<F>> = bases.into_iter().map(Subspace::from_basis).collect();
    submodule_from_spaces(m, &spaces)
}

pub(crate) fn submodule_from_spaces<F: Field>(
    m: &Representation<F>,
    spaces: &[Subspace<F>],
) -> Result<(Representation<F>, ModuleMap<F>)> {
    let alg = m.algebra();
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let mut action = Vec::with_capacity(alg.num_arrows());
    for (a, arrow) in alg.quiver().arrows().iter().enumerate() {
        let img = m.action(a).mul(spaces[arrow.source].basis());
        let coords = spaces[arrow.target].coordinates(&img).ok_or_else(|| {
            Error::InvalidModule(format!("subspace is not stable under arrow {}", arrow.name))
        })?;
        action.push(coords);
    }
    let sub = Representation::from_parts(alg.clone(), dims, action);
    let incl = ModuleMap::from_parts(
        sub.clone(),
        m.clone(),
        spaces.iter().map(|s| s.basis().clone()).collect(),
    );
    Ok((sub, incl))
}

/// Quotient by the arrow-stable subspaces `spaces`, with its projection.
pub(crate) fn quotient_by_spaces<F: Field>(
    m: &Representation<F>,
    spaces: &[Subspace<F>],
) -> (Representation<F>, ModuleMap<F>) {
    let alg = m.algebra();
    let proj: Vec<Matrix<F>> = spaces.iter().map(|s| s.quotient_projection()).collect();
    let dims: Vec<usize> = proj.iter().map(|p| p.rows()).collect();
    let action = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            proj[arrow.target]
                .mul(m.action(a))
                .mul(spaces[arrow.source].complement())
        })
        .collect();
    let q = Representation::from_parts(alg.clone(), dims, action);
    let p = ModuleMap::from_parts(m.clone(), q.clone(), proj);
    (q, p)
}

/// Quotient of `m` by a submodule given through its inclusion.
pub fn quotient<F: Field>(incl: &ModuleMap<F>) -> (Representation<F>, ModuleMap<F>) {
    let spaces: Vec<Subspace<F>> = incl.blocks().iter().map(Subspace::span).collect();
    quotient_by_spaces(incl.cod(), &spaces)
}

/// Smallest submodule containing the given vectors (`gens[v]` columns lie at
/// vertex `v`).
pub fn generated_submodule<F: Field>(
    m: &Representation<F>,
    gens: &[Matrix<F>],
) -> (Representation<F>, ModuleMap<F>) {
    let alg = m.algebra();
    let f = m.field();
    let n = alg.num_vertices();
    let mut spanning: Vec<Vec<Matrix<F>>> = vec![Vec::new(); n];
    for (v, g) in gens.iter().enumerate() {
        if g.cols() == 0 {
            continue;
        }
        for j in 0..n {
            for &b in alg.block(v, j) {
                spanning[j].push(m.basis_path_action(b).mul(g));
            }
        }
    }
    let spaces: Vec<Subspace<F>> = (0..n)
        .map(|j| Subspace::span(&Matrix::hstack_all(f, m.dim_at(j), &spanning[j])))
        .collect();
    submodule_from_spaces(m, &spaces).expect("generated subspaces are stable")
}

/// Kernel, image and cokernel of a map.
#[derive(Clone, Debug)]
pub struct Factorization<F: Field> {
    pub kernel: Representation<F>,
    pub kernel_incl: ModuleMap<F>,
    pub image: Representation<F>,
    pub image_incl: ModuleMap<F>,
    /// The corestriction `dom -> image`.
    pub coimage: ModuleMap<F>,
    pub cokernel: Representation<F>,
    pub cokernel_proj: ModuleMap<F>,
}

pub fn factorize<F: Field>(map: &ModuleMap<F>) -> Factorization<F> {
    let (kernel, kernel_incl) = kernel(map);
    let spaces: Vec<Subspace<F>> = map.blocks().iter().map(Subspace::span).collect();
    let (image, image_incl) = submodule_from_spaces(map.cod(), &spaces).expect("images are stable");
    let coimage_blocks = spaces
        .iter()
        .zip(map.blocks())
        .map(|(s, b)| s.coordinates(b).expect("block lies in its image"))
        .collect();
    let coimage = ModuleMap::from_parts(map.dom().clone(), image.clone(), coimage_blocks);
    let (cokernel, cokernel_proj) = quotient_by_spaces(map.cod(), &spaces);
    Factorization {
        kernel,
        kernel_incl,
        image,
        image_incl,
        coimage,
        cokernel,
        cokernel_proj,
    }
}

pub fn kernel<F: Field>(map: &ModuleMap<F>) -> (Representation<F>, ModuleMap<F>) {
    let bases: Vec<Matrix<F>> = map.blocks().iter().map(|b| b.kernel()).collect();
    submodule(map.dom(), bases).expect("kernels are stable")
}

pub fn cokernel<F: Field>(map: &ModuleMap<F>) -> (Representation<F>, ModuleMap<F>) {
    let spaces: Vec<Subspace<F>> = map.blocks().iter().map(Subspace::span).collect();
    quotient_by_spaces(map.cod(), &spaces)
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub sum: Representation<F>,
    pub injections: Vec<ModuleMap<F>>,
    pub projections: Vec<ModuleMap<F>>,
}

fn direct_sum_module<F: Field>(
    algebra: &Arc<Algebra<F>>,
    parts: &[Representation<F>],
) -> Representation<F> {
    let f = algebra.field();
    let n = algebra.num_vertices();
    let dims: Vec<usize> = (0..n)
        .map(|v| parts.iter().map(|p| p.dim_at(v)).sum())
        .collect();
    let action = (0..algebra.num_arrows())
        .map(|a| {
            let blocks: Vec<Matrix<F>> = parts.iter().map(|p| p.action(a).clone()).collect();
            Matrix::block_diag(f, &blocks)
        })
        .collect();
    Representation::from_parts(algebra.clone(), dims, action)
}

pub fn direct_sum<F: Field>(
    algebra: &Arc<Algebra<F>>,
    parts: &[Representation<F>],
) -> Result<DirectSum<F>> {
    for p in parts {
        if !same_algebra(algebra, p.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
    }
    let f = algebra.field();
    let n = algebra.num_vertices();
    let sum = direct_sum_module(algebra, parts);
    let mut offsets = vec![0usize; n];
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    for p in parts {
        let mut inj = Vec::with_capacity(n);
        let mut proj = Vec::with_capacity(n);
        for v in 0..n {
            let mut i = Matrix::zeros(f, sum.dim_at(v), p.dim_at(v));
            let mut q = Matrix::zeros(f, p.dim_at(v), sum.dim_at(v));
            for k in 0..p.dim_at(v) {
                i.set(offsets[v] + k, k, f.one());
                q.set(k, offsets[v] + k, f.one());
            }
            offsets[v] += p.dim_at(v);
            inj.push(i);
            proj.push(q);
        }
        injections.push(ModuleMap::from_parts(p.clone(), sum.clone(), inj));
        projections.push(ModuleMap::from_parts(sum.clone(), p.clone(), proj));
    }
    Ok(DirectSum {
        sum,
        injections,
        projections,
    })
}

/// `rad M` at vertex `j`: the span of the images of arrows ending at `j`.
fn radical_spaces<F: Field>(m: &Representation<F>) -> Vec<Subspace<F>> {
    let alg = m.algebra();
    let f = m.field();
    (0..alg.num_vertices())
        .map(|j| {
            let imgs: Vec<Matrix<F>> = alg
                .quiver()
                .arrows_into(j)
                .map(|a| m.action(a).clone())
                .collect();
            Subspace::span(&Matrix::hstack_all(f, m.dim_at(j), &imgs))
        })
        .collect()
}

pub fn radical<F: Field>(m: &Representation<F>) -> (Representation<F>, ModuleMap<F>) {
    submodule_from_spaces(m, &radical_spaces(m)).expect("radical is stable")
}

pub fn top<F: Field>(m: &Representation<F>) -> (Representation<F>, ModuleMap<F>) {
    quotient_by_spaces(m, &radical_spaces(m))
}

/// `(rad M, inclusion, top M, projection)`.
#[derive(Clone, Debug)]
pub struct RadicalTop<F: Field> {
    pub radical: Representation<F>,
    pub radical_incl: ModuleMap<F>,
    pub top: Representation<F>,
    pub top_proj: ModuleMap<F>,
}

pub fn radical_top<F: Field>(m: &Representation<F>) -> RadicalTop<F> {
    let spaces = radical_spaces(m);
    let (radical, radical_incl) = submodule_from_spaces(m, &spaces).expect("radical is stable");
    let (top, top_proj) = quotient_by_spaces(m, &spaces);
    RadicalTop {
        radical,
        radical_incl,
        top,
        top_proj,
    }
}

/// Dimension vector of `top M`.
pub fn top_dims<F: Field>(m: &Representation<F>) -> Vec<usize> {
    radical_spaces(m)
        .iter()
        .enumerate()
        .map(|(v, s)| m.dim_at(v) - s.dim())
        .collect()
}

/// `rad^k M` with its inclusion into `M`.
pub fn radical_power<F: Field>(
    m: &Representation<F>,
    k: usize,
) -> (Representation<F>, ModuleMap<F>) {
    let mut cur = m.clone();
    let mut incl = ModuleMap::identity(m);
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        let (r, i) = radical(&cur);
        incl = incl.compose(&i).expect("composable");
        cur = r;
    }
    (cur, incl)
}

/// Least `i` with `rad^i M = 0`.
pub fn loewy_length<F: Field>(m: &Representation<F>) -> usize {
    let mut cur = m.clone();
    let mut i = 0;
    while !cur.is_zero() {
        cur = radical(&cur).0;
        i += 1;
    }
    i
}

/// `soc M`: at vertex `i`, the common kernel of all arrows leaving `i`.
pub fn socle<F: Field>(m: &Representation<F>) -> (Representation<F>, ModuleMap<F>) {
    let alg = m.algebra();
    let f = m.field();
    let bases = (0..alg.num_vertices())
        .map(|i| {
            let outs: Vec<Matrix<F>> = alg
                .quiver()
                .arrows_from(i)
                .map(|a| m.action(a).clone())
                .collect();
            Matrix::vstack_all(f, m.dim_at(i), &outs).kernel()
        })
        .collect();
    submodule(m, bases).expect("socle is stable")
}

/// `Λ / rad^k Λ`; the ideal is graded, so `rad^k P(i)` is spanned by the
/// basis paths of length at least `k`.
pub fn radical_power_quotient<F: Field>(algebra: &Arc<Algebra<F>>, k: usize) -> Representation<F> {
    let parts: Vec<_> = (0..algebra.num_vertices())
        .map(|v| {
            let p = Representation::projective(algebra, v);
            let (_, incl) = radical_power(&p, k);
            quotient(&incl).0
        })
        .collect();
    direct_sum_module(algebra, &parts)
}

/// A minimal projective cover `⊕ P(v_k) -> M`, sending the top of the
/// `k`-th summand to the generator `x_k ∈ M_{v_k}`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover<F: Field> {
    pub projective: Representation<F>,
    pub epi: ModuleMap<F>,
    pub generators: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> ProjectiveCover<F> {
    /// Vertices of the indecomposable summands, in order.
    pub fn summand_vertices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.0).collect()
    }
}

/// Projective `⊕ P(v)` over the listed vertices.
pub fn projective_sum<F: Field>(
    algebra: &Arc<Algebra<F>>,
    vertices: &[usize],
) -> Representation<F> {
    let parts: Vec<_> = vertices
        .iter()
        .map(|&v| Representation::projective(algebra, v))
        .collect();
    direct_sum_module(algebra, &parts)
}

/// The map `⊕ P(v_k) -> M` determined by images `x_k ∈ M_{v_k}` of the tops.
pub fn map_from_projective<F: Field>(
    p: &Representation<F>,
    m: &Representation<F>,
    generators: &[(usize, Vec<F::Elem>)],
) -> ModuleMap<F> {
    let alg = m.algebra();
    let f = m.field();
    let n = alg.num_vertices();
    let blocks = (0..n)
        .map(|j| {
            let mut cols: Vec<Vec<F::Elem>> = Vec::with_capacity(p.dim_at(j));
            for (v, x) in generators {
                for &b in alg.block(*v, j) {
                    cols.push(m.basis_path_action(b).mul_vec(x));
                }
            }
            Matrix::from_columns(f, m.dim_at(j), &cols)
        })
        .collect();
    ModuleMap::from_parts(p.clone(), m.clone(), blocks)
}

pub fn projective_cover<F: Field>(m: &Representation<F>) -> ProjectiveCover<F> {
    let alg = m.algebra();
    let mut generators = Vec::new();
    for (v, space) in radical_spaces(m).iter().enumerate() {
        let comp = space.complement();
        for c in 0..comp.cols() {
            generators.push((v, comp.column(c)));
        }
    }
    let vertices: Vec<usize> = generators.iter().map(|g| g.0).collect();
    let projective = projective_sum(alg, &vertices);
    let epi = map_from_projective(&projective, m, &generators);
    ProjectiveCover {
        projective,
        epi,
        generators,
    }
}

/// `M` is projective iff it has the dimension of its projective cover.
pub fn is_projective<F: Field>(m: &Representation<F>) -> bool {
    let tops = top_dims(m);
    let alg = m.algebra();
    let cover_dim: usize = tops
        .iter()
        .enumerate()
        .map(|(v, &t)| t * Representation::projective(alg, v).total_dim())
        .sum();
    cover_dim == m.total_dim()
}

/// First syzygy `Ω(M)` with its inclusion into the projective cover.
pub fn first_syzygy<F: Field>(
    m: &Representation<F>,
) -> (Representation<F>, ModuleMap<F>, ProjectiveCover<F>) {
    let cover = projective_cover(m);
    let (k, incl) = kernel(&cover.epi);
    (k, incl, cover)
}

/// `Ω^k(M)` from minimal projective covers.
pub fn syzygy<F: Field>(m: &Representation<F>, k: usize) -> Representation<F> {
    let mut cur = m.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = first_syzygy(&cur).0;
    }
    cur
}

/// Basis of `Hom(M, N)`.
///
/// A map is determined by the images `y_k ∈ N_{v_k}` of the generators of a
/// projective cover `π: P -> M`; the constraints say the induced map
/// `P -> N` kills `ker π`. The blocks of `M -> N` are recovered through a
/// right inverse of `π` at each vertex.
pub fn hom_basis<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
) -> Result<Vec<ModuleMap<F>>> {
    m.check_same_algebra(n)?;
    if m.is_zero() || n.is_zero() {
        return Ok(Vec::new());
    }
    let alg = m.algebra();
    let f = m.field();
    let nv = alg.num_vertices();
    let cover = projective_cover(m);
    let gens = &cover.generators;
    let mut offsets = Vec::with_capacity(gens.len());
    let mut unknowns = 0;
    for (v, _) in gens {
        offsets.push(unknowns);
        unknowns += n.dim_at(*v);
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }

    // P_j coordinates are (generator k, basis path b: v_k -> j).
    let coords: Vec<Vec<(usize, usize)>> = (0..nv)
        .map(|j| {
            gens.iter()
                .enumerate()
                .flat_map(|(k, (v, _))| alg.block(*v, j).iter().map(move |&b| (k, b)))
                .collect()
        })
        .collect();

    let mut eq_blocks: Vec<Matrix<F>> = Vec::new();
    for j in 0..nv {
        if n.dim_at(j) == 0 {
            continue;
        }
        let ker = cover.epi.block(j).kernel();
        for c in 0..ker.cols() {
            let mut e = Matrix::zeros(f, n.dim_at(j), unknowns);
            for (row, &(k, b)) in coords[j].iter().enumerate() {
                let z = ker.get(row, c);
                if f.is_zero(z) {
                    continue;
                }
                e.add_block(0, offsets[k], &n.basis_path_action(b).scale(z));
            }
            eq_blocks.push(e);
        }
    }
    let system = Matrix::vstack_all(f, unknowns, &eq_blocks);
    let solutions = system.kernel();

    let right_inverses: Vec<Matrix<F>> = (0..nv)
        .map(|j| {
            cover
                .epi
                .block(j)
                .solve(&Matrix::identity(f, m.dim_at(j)))
                .expect("cover is surjective")
        })
        .collect();

    let mut out = Vec::with_capacity(solutions.cols());
    for s in 0..solutions.cols() {
        let y = solutions.column(s);
        let blocks = (0..nv)
            .map(|j| {
                let cols: Vec<Vec<F::Elem>> = coords[j]
                    .iter()
                    .map(|&(k, b)| {
                        let (v, _) = gens[k];
                        let yk = &y[offsets[k]..offsets[k] + n.dim_at(v)];
                        n.basis_path_action(b).mul_vec(yk)
                    })
                    .collect();
                let psi = Matrix::from_columns(f, n.dim_at(j), &cols);
                psi.mul(&right_inverses[j])
            })
            .collect();
        out.push(ModuleMap::from_parts(m.clone(), n.clone(), blocks));
    }
    Ok(out)
}

/// Basis of `Hom(M, N)` from the full intertwining system in all block
/// entries. Slower than [`hom_basis`]; kept as an independent route.
pub fn hom_basis_direct<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
) -> Result<Vec<ModuleMap<F>>> {
    m.check_same_algebra(n)?;
    let alg = m.algebra();
    let f = m.field();
    let nv = alg.num_vertices();
    let mut offsets = Vec::with_capacity(nv);
    let mut unknowns = 0;
    for v in 0..nv {
        offsets.push(unknowns);
        unknowns += m.dim_at(v) * n.dim_at(v);
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    // X_v is stored row-major: entry (r, c) is unknown offsets[v] + r*dimM_v + c.
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (a, arrow) in alg.quiver().arrows().iter().enumerate() {
        let (i, j) = (arrow.source, arrow.target);
        let am = m.action(a);
        let an = n.action(a);
        // (X_j A_M - A_N X_i)[r, c] = 0 for r < dimN_j, c < dimM_i.
        for r in 0..n.dim_at(j) {
            for c in 0..m.dim_at(i) {
                let mut row = vec![f.zero(); unknowns];
                for t in 0..m.dim_at(j) {
                    let idx = offsets[j] + r * m.dim_at(j) + t;
                    row[idx] = f.add(&row[idx], am.get(t, c));
                }
                for t in 0..n.dim_at(i) {
                    let idx = offsets[i] + t * m.dim_at(i) + c;
                    row[idx] = f.sub(&row[idx], an.get(r, t));
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(
        f,
        rows.len(),
        unknowns,
        rows.into_iter().flatten().collect(),
    );
    let sol = system.kernel();
    Ok((0..sol.cols())
        .map(|s| {
            let x = sol.column(s);
            let blocks = (0..nv)
                .map(|v| {
                    let (r, c) = (n.dim_at(v), m.dim_at(v));
                    Matrix::from_rows(f, r, c, x[offsets[v]..offsets[v] + r * c].to_vec())
                })
                .collect();
            ModuleMap::from_parts(m.clone(), n.clone(), blocks)
        })
        .collect())
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoVerdict<F: Field> {
    /// Carries a verified invertible homomorphism.
    Isomorphic(ModuleMap<F>),
    NotIsomorphic(String),
    Undetermined,
}

impl<F: Field> IsoVerdict<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

/// Sampling parameters for [`is_isomorphic`].
#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        Self {
            samples: 64,
            seed: 0,
        }
    }
}

/// Largest hom-space size searched exhaustively.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

pub fn is_isomorphic<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
    opts: IsoOptions,
) -> Result<IsoVerdict<F>> {
    m.check_same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::NotIsomorphic("dimension vectors differ".into()));
    }
    if m.is_zero() {
        return Ok(IsoVerdict::Isomorphic(
            ModuleMap::identity(m).retarget(m, n),
        ));
    }
    if m == n {
        return Ok(IsoVerdict::Isomorphic(ModuleMap::identity(m)));
    }
    if top_dims(m) != top_dims(n) {
        return Ok(IsoVerdict::NotIsomorphic("tops differ".into()));
    }
    if socle(m).0.dims() != socle(n).0.dims() {
        return Ok(IsoVerdict::NotIsomorphic("socles differ".into()));
    }
    let hmn = hom_basis(m, n)?;
    let hnm = hom_basis(n, m)?;
    if hmn.len() != hnm.len() {
        return Ok(IsoVerdict::NotIsomorphic("hom dimensions differ".into()));
    }
    if hmn.is_empty() {
        return Ok(IsoVerdict::NotIsomorphic("no nonzero maps".into()));
    }
    let f = m.field();
    for g in &hmn {
        if g.is_isomorphism() {
            return Ok(IsoVerdict::Isomorphic(g.clone()));
        }
    }
    let h = hmn.len() as u32;
    let exhaustive = f
        .order()
        .and_then(|q| q.checked_pow(h))
        .filter(|&t| t <= EXHAUSTIVE_LIMIT);
    if let Some(total) = exhaustive {
        let q = f.order().expect("finite field");
        for idx in 1..total {
            let mut rest = idx;
            let coeffs: Vec<F::Elem> = (0..h)
                .map(|_| {
                    let d = rest % q;
                    rest /= q;
                    f.nth_elem(d)
                })
                .collect();
            let g = combine_maps(&hmn, &coeffs);
            if g.is_isomorphism() {
                return Ok(IsoVerdict::Isomorphic(g));
            }
        }
        return Ok(IsoVerdict::NotIsomorphic(
            "no invertible map in the hom space".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let coeffs: Vec<F::Elem> = (0..h).map(|_| f.random_elem(&mut rng)).collect();
        let g = combine_maps(&hmn, &coeffs);
        if g.is_isomorphism() {
            return Ok(IsoVerdict::Isomorphic(g));
        }
    }
    Ok(IsoVerdict::Undetermined)
}

/// `X ∈ add Y`: the identity of `X` lies in the span of all `g∘f` with
/// `f: X -> Y`, `g: Y -> X`.
pub fn in_add<F: Field>(x: &Representation<F>, y: &Representation<F>) -> Result<bool> {
    in_add_parts(x, std::slice::from_ref(y))
}

/// `X ∈ add(Y_1 ⊕ ... ⊕ Y_r)`, taking traces through each summand separately.
pub fn in_add_parts<F: Field>(x: &Representation<F>, parts: &[Representation<F>]) -> Result<bool> {
    for p in parts {
        x.check_same_algebra(p)?;
    }
    if x.is_zero() {
        return Ok(true);
    }
    // Every composition factor of X must occur in some part.
    for v in 0..x.dims().len() {
        if x.dim_at(v) > 0 && parts.iter().all(|p| p.dim_at(v) == 0) {
            return Ok(false);
        }
    }
    let f = x.field();
    let id = ModuleMap::identity(x).flatten();
    let mut span = EchelonSpan::new(f, id.len());
    for p in parts {
        if p.is_zero() {
            continue;
        }
        let fs = hom_basis(x, p)?;
        if fs.is_empty() {
            continue;
        }
        let gs = hom_basis(p, x)?;
        for fm in &fs {
            let mut grew = false;
            for gm in &gs {
                grew |= span.insert(gm.compose(fm)?.flatten());
            }
            if grew && span.contains(&id) {
                return Ok(true);
            }
        }
    }
    Ok(span.contains(&id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_algebra;

    fn a2() -> Arc<Algebra<PrimeField>> {
        parse_algebra(
            "vertices: 1 2\narrow a: 1 -> 2\n",
            PrimeField::default(),
            64,
        )
        .unwrap()
    }

    fn dual() -> Arc<Algebra<PrimeField>> {
        parse_algebra(
            "vertices: 1\narrow x: 1 -> 1\nrelation: x*x\n",
            PrimeField::default(),
            64,
        )
        .unwrap()
    }

    #[test]
    fn projectives_of_a2() {
        let a = a2();
        assert_eq!(Representation::projective(&a, 0).dims(), &[1, 1]);
        assert_eq!(Representation::projective(&a, 1).dims(), &[0, 1]);
        assert_eq!(Representation::regular(&a).total_dim(), 3);
    }

    #[test]
    fn hom_small_cases() {
        let a = a2();
        let s1 = Representation::simple(&a, 0);
        let s2 = Representation::simple(&a, 1);
        let p1 = Representation::projective(&a, 0);
        assert_eq!(hom_basis(&s1, &s1).unwrap().len(), 1);
        assert!(hom_basis(&s1, &s2).unwrap().is_empty());
        assert_eq!(hom_basis(&p1, &s1).unwrap().len(), 1);
        assert!(hom_basis(&s1, &p1).unwrap().is_empty());
        assert_eq!(hom_basis(&s2, &p1).unwrap().len(), 1);
    }

    #[test]
    fn kernel_of_p1_to_s1() {
        let a = a2();
        let s1 = Representation::simple(&a, 0);
        let p1 = Representation::projective(&a, 0);
        let f = hom_basis(&p1, &s1).unwrap().remove(0);
        let fac = factorize(&f);
        assert_eq!(fac.kernel.dims(), &[0, 1]);
        assert_eq!(fac.cokernel.total_dim(), 0);
    }

    #[test]
    fn syzygies() {
        let a = a2();
        let s1 = Representation::simple(&a, 0);
        assert_eq!(syzygy(&s1, 1).dims(), &[0, 1]);
        assert!(syzygy(&Representation::projective(&a, 0), 1).is_zero());
        let d = dual();
        let s = Representation::simple(&d, 0);
        let om = syzygy(&s, 1);
        assert!(is_isomorphic(&om, &s, IsoOptions::default())
            .unwrap()
            .is_isomorphic());
    }

    #[test]
    fn socle_and_top() {
        let d = dual();
        let p = Representation::projective(&d, 0);
        assert_eq!(socle(&p).0.dims(), &[1]);
        assert_eq!(top_dims(&p), vec![1]);
        assert_eq!(loewy_length(&p), 2);
    }

    #[test]
    fn add_membership() {
        let a = a2();
        let lam = Representation::regular(&a);
        let s1 = Representation::simple(&a, 0);
        assert!(in_add(&Representation::projective(&a, 0), &lam).unwrap());
        assert!(!in_add(&s1, &lam).unwrap());
        assert!(in_add(&Representation::simple(&a, 1), &lam).unwrap());
    }

    #[test]
    fn quotient_powers() {
        let a = a2();
        assert_eq!(radical_power_quotient(&a, 1).dims(), &[1, 1]);
        assert!(radical_power_quotient(&a, 1).action(0).is_zero());
        assert_eq!(radical_power_quotient(&a, 0).total_dim(), 0);
        let d = dual();
        assert_eq!(radical_power_quotient(&d, 2).total_dim(), 2);
    }

    #[test]
    fn rejects_bad_module() {
        let d = dual();
        let f = d.field();
        let x = Matrix::from_rows(f, 2, 2, vec![1, 0, 0, 1]);
        assert!(Representation::new(d.clone(), vec![2], vec![x]).is_err());
    }
}

//! The torsion pair `(T, F(V))` cut out by a set `V` of simple modules: the
//! torsion radical `t_V`, the quotient `q_{t_V}`, the layer functor
//! `F_{t_V} = rad ∘ t_V` and the radical layer length.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::rep::{quotient, radical, submodule_from_spaces, ModuleMap, Representation};

/// A set of simple modules, recorded by vertex index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleSet {
    vertices: BTreeSet<usize>,
}

impl SimpleSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all(num_vertices: usize) -> Self {
        Self {
            vertices: (0..num_vertices).collect(),
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self {
            vertices: indices.into_iter().collect(),
        }
    }

    /// Parses `all`, `none`, or a comma-separated list of vertex names.
    pub fn parse<F: Field>(algebra: &Algebra<F>, text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "all" => Ok(Self::all(algebra.num_vertices())),
            "none" | "" => Ok(Self::empty()),
            _ => {
                let mut set = BTreeSet::new();
                for name in text.split(',') {
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(Error::Parameter(format!("empty vertex name in `{text}`")));
                    }
                    set.insert(algebra.quiver().vertex(name)?);
                }
                Ok(Self { vertices: set })
            }
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied()
    }

    /// The complementary set `V′` among `num_vertices` vertices.
    pub fn complement(&self, num_vertices: usize) -> Self {
        Self {
            vertices: (0..num_vertices).filter(|v| !self.contains(*v)).collect(),
        }
    }

    pub fn is_subset(&self, other: &SimpleSet) -> bool {
        self.vertices.is_subset(&other.vertices)
    }

    pub fn names<F: Field>(&self, algebra: &Algebra<F>) -> Vec<String> {
        self.iter()
            .map(|v| algebra.quiver().vertex_name(v).to_string())
            .collect()
    }
}

impl fmt::Display for SimpleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `t_V(M)` with its inclusion. The chain `K_0 = M`,
/// `K_{t+1} = (rad K_t)_v for v ∈ V, (K_t)_v otherwise` descends to the
/// smallest submodule whose quotient has all composition factors in `V`.
pub fn torsion_radical<F: Field>(
    m: &Representation<F>,
    v: &SimpleSet,
) -> (Representation<F>, ModuleMap<F>) {
    let mut cur = m.clone();
    let mut incl = ModuleMap::identity(m);
    let alg = m.algebra().clone();
    let f = m.field().clone();
    loop {
        if cur.is_zero() {
            return (cur, incl);
        }
        let mut shrinks = false;
        let spaces: Vec<Subspace<F>> = (0..alg.num_vertices())
            .map(|j| {
                if v.contains(j) && cur.dim_at(j) > 0 {
                    let imgs: Vec<Matrix<F>> = alg
                        .quiver()
                        .arrows_into(j)
                        .map(|a| cur.action(a).clone())
                        .collect();
                    let s = Subspace::span(&Matrix::hstack_all(&f, cur.dim_at(j), &imgs));
                    shrinks |= s.dim() < cur.dim_at(j);
                    s
                } else {
                    Subspace::from_basis(Matrix::identity(&f, cur.dim_at(j)))
                }
            })
            .collect();
        if !shrinks {
            return (cur, incl);
        }
        let (next, step) =
            submodule_from_spaces(&cur, &spaces).expect("arrows land in the radical");
        incl = incl.compose(&step).expect("composable");
        cur = next;
    }
}

/// `q_{t_V}(M) = M / t_V(M)` with its projection.
pub fn torsion_quotient<F: Field>(
    m: &Representation<F>,
    v: &SimpleSet,
) -> (Representation<F>, ModuleMap<F>) {
    let (_, incl) = torsion_radical(m, v);
    quotient(&incl)
}

/// `F^i_{t_V}(M)` together with its inclusion into `M`.
pub fn layer_functor_with_inclusion<F: Field>(
    m: &Representation<F>,
    v: &SimpleSet,
    i: usize,
) -> (Representation<F>, ModuleMap<F>) {
    let mut cur = m.clone();
    let mut incl = ModuleMap::identity(m);
    for _ in 0..i {
        if cur.is_zero() {
            break;
        }
        let (t, ti) = torsion_radical(&cur, v);
        let (r, ri) = radical(&t);
        incl = incl
            .compose(&ti)
            .and_then(|x| x.compose(&ri))
            .expect("composable");
        cur = r;
    }
    (cur, incl)
}

/// `F^i_{t_V}(M)`.
pub fn layer_functor<F: Field>(
    m: &Representation<F>,
    v: &SimpleSet,
    i: usize,
) -> Representation<F> {
    layer_functor_with_inclusion(m, v, i).0
}

/// `ℓℓ^{t_V}(M)`: the least `i` with `t_V(F^i_{t_V}(M)) = 0`.
pub fn layer_length<F: Field>(m: &Representation<F>, v: &SimpleSet) -> usize {
    let mut cur = m.clone();
    let mut i = 0;
    loop {
        let (t, _) = torsion_radical(&cur, v);
        if t.is_zero() {
            return i;
        }
        cur = radical(&t).0;
        i += 1;
    }
}

/// `ℓℓ^{t_V}(Λ)`, the maximum over the indecomposable projectives.
pub fn algebra_layer_length<F: Field>(algebra: &Arc<Algebra<F>>, v: &SimpleSet) -> usize {
    (0..algebra.num_vertices())
        .map(|i| layer_length(&Representation::projective(algebra, i), v))
        .max()
        .unwrap_or(0)
}

//! Bound quiver algebras `kQ/I` with length-homogeneous relations.
//!
//! The ideal is graded by path length, so the algebra is computed one degree
//! at a time: degree-`d` candidates are `b·a` for basis paths `b` of degree
//! `d-1` and arrows `a`, and the only new relations in degree `d` are images
//! of `p·r` for basis paths `p` and generators `r`. Row reduction with pivots
//! on the largest candidate (length-lex, declared arrow order) leaves the
//! smaller paths as the normal-form basis.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Default bound on the nilpotency degree searched by [`Algebra::new`].
pub const DEFAULT_NILPOTENCY_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    /// `arrows` are `(name, source, target)` with endpoints given by name.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name.as_ref(), s.as_ref(), t.as_ref())?;
        }
        Ok(q)
    }

    fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.vertex_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let idx = self.vertices.len();
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize> {
        if self.arrow_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        let idx = self.arrows.len();
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        self.arrow_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_info(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }
}

/// A path, composed left to right: `[p, q]` means first `p`, then `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl PathWord {
    pub fn trivial(v: usize) -> Self {
        Self {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    /// Builds a path from arrow indices, checking composability.
    pub fn from_arrows(quiver: &Quiver, arrows: &[usize]) -> Result<Self> {
        let first = arrows
            .first()
            .ok_or_else(|| Error::InvalidModule("empty arrow list needs a vertex".into()))?;
        let source = quiver.arrows[*first].source;
        let mut at = source;
        for &a in arrows {
            let info = &quiver.arrows[a];
            if info.source != at {
                return Err(Error::InvalidModule(format!(
                    "arrow {} does not start at {}",
                    info.name, quiver.vertices[at]
                )));
            }
            at = info.target;
        }
        Ok(Self {
            source,
            target: at,
            arrows: arrows.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", quiver.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Length-then-lexicographic comparison on arrow indices.
    pub fn deglex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
    }
}

/// A generator of the ideal: a linear combination of parallel paths of a
/// common length at least two.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<F: Field> {
    pub terms: Vec<(F::Elem, PathWord)>,
}

impl<F: Field> Relation<F> {
    pub fn len(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }
}

/// Sparse vector over basis indices.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Structure constants of `e_i Λ` for one vertex `i`: dimension at each
/// vertex and the arrow action matrices (target × source).
#[derive(Clone, Debug)]
pub(crate) struct ProjectiveData<F: Field> {
    pub dims: Vec<usize>,
    pub action: Vec<Matrix<F>>,
}

/// `Λ = kQ/I` with a normal-form path basis and right multiplication table.
#[derive(Debug)]
pub struct Algebra<F: Field> {
    name: String,
    field: F,
    quiver: Quiver,
    relations: Vec<Relation<F>>,
    basis: Vec<PathWord>,
    /// Basis index of the path with its last arrow removed.
    parent: Vec<Option<usize>>,
    /// Position of each basis path inside its `(source, target)` block.
    local: Vec<usize>,
    /// `blocks[s][t]`: basis indices of paths `s -> t`, length-lex sorted.
    blocks: Vec<Vec<Vec<usize>>>,
    /// `right_mult[b]`: for each arrow leaving `target(b)`, the normal form
    /// of `b·a`.
    right_mult: Vec<Vec<(usize, SparseVec<F::Elem>)>>,
    nilpotency_degree: usize,
    projectives: Vec<ProjectiveData<F>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.quiver == other.quiver
            && self.relations == other.relations
    }
}

impl<F: Field> Algebra<F> {
    /// Builds the algebra, computing its basis degree by degree. Fails if some
    /// relation is not homogeneous of length at least two, or if paths of
    /// length `nilpotency_cap` do not all vanish.
    pub fn new(
        name: impl Into<String>,
        field: F,
        quiver: Quiver,
        relations: Vec<Relation<F>>,
        nilpotency_cap: usize,
    ) -> Result<Arc<Self>> {
        for (i, r) in relations.iter().enumerate() {
            if r.terms.is_empty() {
                return Err(Error::NotAdmissible(format!("relation {} is zero", i + 1)));
            }
            let len = r.len();
            if r.terms.iter().any(|(_, p)| p.len() != len) {
                return Err(Error::NonHomogeneous {
                    line: i + 1,
                    lengths: r.terms.iter().map(|(_, p)| p.len()).collect(),
                });
            }
            if r.terms
                .iter()
                .any(|(_, p)| p.source != r.source() || p.target != r.target())
            {
                return Err(Error::NotParallel { line: i + 1 });
            }
            if len < 2 {
                return Err(Error::NotAdmissible(format!(
                    "relation {} has length {len} < 2",
                    i + 1
                )));
            }
        }

        let n = quiver.num_vertices();
        let mut basis: Vec<PathWord> = (0..n).map(PathWord::trivial).collect();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut degree_start = vec![0usize, n];
        let mut right_mult: Vec<Vec<(usize, SparseVec<F::Elem>)>> = vec![Vec::new(); n];
        let mut nilpotency_degree = None;

        for d in 1..=nilpotency_cap {
            let prev = degree_start[d - 1]..degree_start[d];
            // Candidates b·a in length-lex order.
            let mut candidates: Vec<(usize, usize, PathWord)> = Vec::new();
            for b in prev.clone() {
                for a in quiver.arrows_from(basis[b].target) {
                    let mut arrows = basis[b].arrows.clone();
                    arrows.push(a);
                    let word = PathWord {
                        source: basis[b].source,
                        target: quiver.arrows[a].target,
                        arrows,
                    };
                    candidates.push((b, a, word));
                }
            }
            candidates.sort_by(|x, y| x.2.deglex_cmp(&y.2));
            let cand_index: HashMap<(usize, usize), usize> = candidates
                .iter()
                .enumerate()
                .map(|(i, (b, a, _))| ((*b, *a), i))
                .collect();
            let nc = candidates.len();

            // Relation vectors in candidate coordinates; column j stores
            // candidate nc-1-j so that pivots land on the largest paths.
            let mut rows: Vec<Vec<F::Elem>> = Vec::new();
            for r in &relations {
                let len = r.len();
                if len > d {
                    continue;
                }
                let lo = degree_start[d - len];
                let hi = degree_start[d - len + 1];
                for p in lo..hi {
                    if basis[p].target != r.source() {
                        continue;
                    }
                    let mut row = vec![field.zero(); nc];
                    for (c, w) in &r.terms {
                        let mut v: SparseVec<F::Elem> = vec![(p, field.one())];
                        let (last, init) = w.arrows.split_last().expect("length >= 2");
                        for &a in init {
                            v = mult_sparse(&field, &right_mult, &v, a);
                        }
                        for (b, x) in v {
                            let ci = cand_index[&(b, *last)];
                            let col = nc - 1 - ci;
                            row[col] = field.add(&row[col], &field.mul(c, &x));
                        }
                    }
                    if row.iter().any(|x| !field.is_zero(x)) {
                        rows.push(row);
                    }
                }
            }
            let (rref, pivots) = if rows.is_empty() {
                (Matrix::zeros(&field, 0, nc), Vec::new())
            } else {
                let data: Vec<F::Elem> = rows.into_iter().flatten().collect();
                Matrix::from_rows(&field, data.len() / nc, nc, data).rref()
            };
            let pivot_cands: HashMap<usize, usize> = pivots
                .iter()
                .enumerate()
                .map(|(row, &col)| (nc - 1 - col, row))
                .collect();

            // Standard (non-pivot) candidates become the new basis.
            let start = basis.len();
            let mut cand_to_basis = vec![usize::MAX; nc];
            for (ci, (b, _, word)) in candidates.iter().enumerate() {
                if !pivot_cands.contains_key(&ci) {
                    cand_to_basis[ci] = basis.len();
                    basis.push(word.clone());
                    parent.push(Some(*b));
                    right_mult.push(Vec::new());
                }
            }
            degree_start.push(basis.len());

            // Right multiplication of degree d-1 basis paths by arrows.
            for b in prev {
                let mut entries = Vec::new();
                for a in quiver.arrows_from(basis[b].target) {
                    let ci = cand_index[&(b, a)];
                    let nf: SparseVec<F::Elem> = match pivot_cands.get(&ci) {
                        None => vec![(cand_to_basis[ci], field.one())],
                        Some(&row) => {
                            let mut out = Vec::new();
                            for col in 0..nc {
                                let cj = nc - 1 - col;
                                if pivot_cands.contains_key(&cj) {
                                    continue;
                                }
                                let x = rref.get(row, col);
                                if !field.is_zero(x) {
                                    out.push((cand_to_basis[cj], field.neg(x)));
                                }
                            }
                            out.sort_by_key(|e| e.0);
                            out
                        }
                    };
                    entries.push((a, nf));
                }
                right_mult[b] = entries;
            }

            if basis.len() == start {
                nilpotency_degree = Some(d);
                break;
            }
        }
        let nilpotency_degree = nilpotency_degree.ok_or_else(|| {
            Error::NotAdmissible(format!(
                "paths of length {nilpotency_cap} do not all vanish (nilpotency cap)"
            ))
        })?;
        // Top-degree paths have empty right multiplication lists.
        right_mult.resize(basis.len(), Vec::new());
        let last = degree_start[degree_start.len() - 2]..basis.len();
        for b in last {
            right_mult[b] = quiver
                .arrows_from(basis[b].target)
                .map(|a| (a, Vec::new()))
                .collect();
        }

        let mut blocks = vec![vec![Vec::new(); n]; n];
        let mut local = vec![0; basis.len()];
        for (i, p) in basis.iter().enumerate() {
            let blk: &mut Vec<usize> = &mut blocks[p.source][p.target];
            local[i] = blk.len();
            blk.push(i);
        }

        let mut alg = Algebra {
            name: name.into(),
            field,
            quiver,
            relations,
            basis,
            parent,
            local,
            blocks,
            right_mult,
            nilpotency_degree,
            projectives: Vec::new(),
        };
        alg.projectives = (0..n).map(|i| alg.build_projective(i)).collect();
        Ok(Arc::new(alg))
    }

    fn build_projective(&self, i: usize) -> ProjectiveData<F> {
        let f = &self.field;
        let n = self.quiver.num_vertices();
        let dims: Vec<usize> = (0..n).map(|j| self.blocks[i][j].len()).collect();
        let action = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let mut m = Matrix::zeros(f, dims[arrow.target], dims[arrow.source]);
                for &b in &self.blocks[i][arrow.source] {
                    for (c, x) in self.mult_by_arrow(b, a) {
                        m.set(self.local[*c], self.local[b], x.clone());
                    }
                }
                m
            })
            .collect();
        ProjectiveData { dims, action }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation<F>] {
        &self.relations
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    pub fn num_arrows(&self) -> usize {
        self.quiver.num_arrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Least `L` such that every path of length `L` lies in the ideal.
    pub fn nilpotency_degree(&self) -> usize {
        self.nilpotency_degree
    }

    pub fn basis(&self) -> &[PathWord] {
        &self.basis
    }

    pub fn basis_parent(&self, b: usize) -> Option<usize> {
        self.parent[b]
    }

    pub fn local_index(&self, b: usize) -> usize {
        self.local[b]
    }

    /// Basis indices of normal-form paths from `s` to `t`.
    pub fn block(&self, s: usize, t: usize) -> &[usize] {
        &self.blocks[s][t]
    }

    /// Normal form of `basis[b] · arrow`, as a sparse combination of basis
    /// paths. Empty if the product vanishes or the arrow does not compose.
    pub fn mult_by_arrow(&self, b: usize, arrow: usize) -> &[(usize, F::Elem)] {
        self.right_mult[b]
            .iter()
            .find(|(a, _)| *a == arrow)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    /// Normal form of an arbitrary path word.
    pub fn reduce_path(&self, path: &PathWord) -> SparseVec<F::Elem> {
        let mut v = vec![(path.source, self.field.one())];
        for &a in &path.arrows {
            v = mult_sparse(&self.field, &self.right_mult, &v, a);
        }
        v
    }

    /// Normal-form basis paths from `source` to `target`, length-lex sorted.
    pub fn path_basis(&self, source: &str, target: &str) -> Result<Vec<PathWord>> {
        let s = self.quiver.vertex(source)?;
        let t = self.quiver.vertex(target)?;
        Ok(self.blocks[s][t]
            .iter()
            .map(|&b| self.basis[b].clone())
            .collect())
    }

    pub(crate) fn projective_data(&self, v: usize) -> &ProjectiveData<F> {
        &self.projectives[v]
    }

    /// Text form accepted by [`crate::parse::parse_algebra`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(s, "name: {}", self.name);
        }
        let _ = writeln!(s, "vertices: {}", self.quiver.vertices.join(" "));
        for a in &self.quiver.arrows {
            let _ = writeln!(
                s,
                "arrow {}: {} -> {}",
                a.name, self.quiver.vertices[a.source], self.quiver.vertices[a.target]
            );
        }
        for r in &self.relations {
            let _ = writeln!(
                s,
                "relation: {}",
                format_relation(&self.field, &self.quiver, r)
            );
        }
        s
    }
}

pub(crate) fn format_relation<F: Field>(field: &F, quiver: &Quiver, r: &Relation<F>) -> String {
    let mut out = String::new();
    for (i, (c, p)) in r.terms.iter().enumerate() {
        let negative = field.prefers_negative_form(c);
        let mag = if negative { field.neg(c) } else { c.clone() };
        if i == 0 {
            if negative {
                out.push_str("- ");
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !field.is_one(&mag) {
            out.push_str(&field.format_elem(&mag));
            out.push(' ');
        }
        out.push_str(&p.display(quiver));
    }
    out
}

fn mult_sparse<F: Field>(
    field: &F,
    table: &[Vec<(usize, SparseVec<F::Elem>)>],
    v: &SparseVec<F::Elem>,
    arrow: usize,
) -> SparseVec<F::Elem> {
    let mut acc: Vec<(usize, F::Elem)> = Vec::new();
    for (b, x) in v {
        let Some((_, nf)) = table[*b].iter().find(|(a, _)| *a == arrow) else {
            continue;
        };
        for (c, y) in nf {
            let t = field.mul(x, y);
            match acc.iter_mut().find(|e| e.0 == *c) {
                Some(e) => e.1 = field.add(&e.1, &t),
                None => acc.push((*c, t)),
            }
        }
    }
    acc.retain(|e| !field.is_zero(&e.1));
    acc.sort_by_key(|e| e.0);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_algebra;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn hereditary_a2() {
        let a = parse_algebra("vertices: 1 2\narrow a: 1 -> 2\n", f(), 64).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.nilpotency_degree(), 2);
        let p = a.path_basis("1", "2").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].display(a.quiver()), "a");
    }

    #[test]
    fn dual_numbers() {
        let a = parse_algebra("vertices: 1\narrow x: 1 -> 1\nrelation: x*x\n", f(), 64).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.nilpotency_degree(), 2);
        let names: Vec<String> = a
            .path_basis("1", "1")
            .unwrap()
            .iter()
            .map(|p| p.display(a.quiver()))
            .collect();
        assert_eq!(names, vec!["e1", "x"]);
    }

    #[test]
    fn commutativity_relation_keeps_smaller_path() {
        let text = "vertices: 1 2 3 4\narrow b: 1 -> 2\narrow c: 1 -> 3\narrow d: 2 -> 4\narrow e: 3 -> 4\nrelation: b*d - c*e\n";
        let a = parse_algebra(text, f(), 64).unwrap();
        let p = a.path_basis("1", "4").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].display(a.quiver()), "b*d");
        // c*e reduces to b*d.
        let ce = PathWord::from_arrows(a.quiver(), &[1, 3]).unwrap();
        let nf = a.reduce_path(&ce);
        assert_eq!(nf.len(), 1);
        assert_eq!(a.basis()[nf[0].0].display(a.quiver()), "b*d");
        assert_eq!(nf[0].1, 1);
    }

    #[test]
    fn loop_without_relation_trips_cap() {
        let err = parse_algebra("vertices: 1\narrow x: 1 -> 1\n", f(), 10).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible(_)));
    }

    #[test]
    fn text_round_trip() {
        let text = "name: sq\nvertices: 1 2 3 4\narrow b: 1 -> 2\narrow c: 1 -> 3\narrow d: 2 -> 4\narrow e: 3 -> 4\nrelation: b*d - c*e\nrelation: 2 b*d + 3 c*e\n";
        let a = parse_algebra(text, f(), 64).unwrap();
        let again = parse_algebra(&a.to_text(), f(), 64).unwrap();
        assert_eq!(*a, *again);
        assert_eq!(a.to_text(), again.to_text());
    }
}

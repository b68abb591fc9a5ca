//! Quivers with relations and their finite-dimensional path algebras.
//!
//! Paths are written left to right: `ab` means `a` then `b`, so `target(a) = source(b)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input, Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};

pub const DEFAULT_MAX_PATH_LENGTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A path; the trivial path at `v` has `start = end = v` and no arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { start: v, end: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn concat(&self, o: &Path) -> Option<Path> {
        if self.end != o.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&o.arrows);
        Some(Path { start: self.start, end: o.end, arrows })
    }
}

/// A linear combination of parallel paths.
pub type Relation = Vec<(Scalar, Path)>;

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return input(format!("duplicate vertex label `{v}`"));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if arrows[..i].iter().any(|b| b.label == a.label) || vertices.contains(&a.label) {
                return input(format!("duplicate arrow label `{}`", a.label));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return input(format!("arrow `{}` references a missing vertex", a.label));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Convenience constructor from `(label, source, target)` triples.
    pub fn from_parts(vertices: &[&str], arrows: &[(&str, usize, usize)]) -> Result<Quiver> {
        Quiver::new(
            vertices.iter().map(|s| String::from(*s)).collect(),
            arrows
                .iter()
                .map(|(l, s, t)| Arrow { label: String::from(*l), source: *s, target: *t })
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// Builds a path from arrow indices, checking composability.
    pub fn path(&self, arrows: &[usize]) -> Result<Path> {
        let Some(&first) = arrows.first() else {
            return input("empty arrow sequence");
        };
        let mut p = Path::trivial(self.arrows[first].source);
        for &a in arrows {
            let arrow = &self.arrows[a];
            if arrow.source != p.end {
                return input(format!("arrow `{}` does not compose", arrow.label));
            }
            p.arrows.push(a);
            p.end = arrow.target;
        }
        Ok(p)
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { label: a.label.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm.
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen < n
    }

    /// Whether every connected component of the underlying graph is a simply-laced Dynkin diagram.
    pub fn is_dynkin(&self) -> bool {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            if a.source == a.target {
                return false;
            }
            adj[a.source].push(a.target);
            adj[a.target].push(a.source);
        }
        let mut comp = vec![usize::MAX; n];
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let mut members = vec![root];
            comp[root] = root;
            let mut i = 0;
            while i < members.len() {
                for &w in &adj[members[i]] {
                    if comp[w] == usize::MAX {
                        comp[w] = root;
                        members.push(w);
                    }
                }
                i += 1;
            }
            let edges: usize = members.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
            if edges + 1 != members.len() {
                return false;
            }
            let branch: Vec<usize> = members.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
            if branch.iter().any(|&v| adj[v].len() > 3) || branch.len() > 1 {
                return false;
            }
            if let Some(&b) = branch.first() {
                let mut arms: Vec<usize> = adj[b]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (b, start, 1);
                        while adj[cur].len() == 2 {
                            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                            prev = cur;
                            cur = next;
                            len += 1;
                        }
                        len + 1
                    })
                    .collect();
                arms.sort();
                // Arms (p, q, r) counted with the branch vertex: need 1/p + 1/q + 1/r > 1.
                let (p, q, r) = (arms[0], arms[1], arms[2]);
                if q * r + p * r + p * q <= p * q * r {
                    return false;
                }
            }
        }
        true
    }
}

/// `kQ/I` with an explicit residue path basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAlgebra {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub field: FieldSpec,
    /// Residue paths; shorter paths are preferred as representatives.
    pub basis: Vec<Path>,
    /// Paths of this length or longer are zero.
    pub nil_length: usize,
    normal: BTreeMap<Path, Vec<Scalar>>,
}

fn paths_up_to(q: &Quiver, len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == p.end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { start: p.start, end: a.target, arrows });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if out.len() > 20_000 {
            break;
        }
    }
    out
}

const PATH_CAP: usize = 20_000;

impl PathAlgebra {
    pub fn new(quiver: Quiver, relations: Vec<Relation>, field: FieldSpec, max_path_length: usize) -> Result<PathAlgebra> {
        for r in &relations {
            let Some((_, first)) = r.first() else { continue };
            for (c, p) in r {
                if c.field() != field {
                    return input("relation coefficient from another field");
                }
                if (p.start, p.end) != (first.start, first.end) {
                    return input("relation terms are not parallel");
                }
                if p.len() < 2 {
                    return input("relation terms must have length at least 2");
                }
            }
        }
        for len in 1..=max_path_length.max(1) {
            let paths = paths_up_to(&quiver, len);
            if paths.len() > PATH_CAP {
                return Err(Error::PossiblyInfinite(len));
            }
            let alg = Self::truncated(&quiver, &relations, field, len, &paths);
            let long_zero = paths.iter().filter(|p| p.len() == len).all(|p| alg.normal[p].iter().all(Scalar::is_zero));
            if long_zero {
                return Ok(alg);
            }
        }
        Err(Error::PossiblyInfinite(max_path_length))
    }

    fn truncated(quiver: &Quiver, relations: &[Relation], field: FieldSpec, len: usize, paths: &[Path]) -> PathAlgebra {
        // Columns ordered longest path first, so pivots land on long paths.
        let mut order: Vec<&Path> = paths.iter().collect();
        order.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let col: BTreeMap<&Path, usize> = order.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for r in relations {
            let Some((_, first)) = r.first() else { continue };
            for u in paths.iter().filter(|u| u.end == first.start) {
                for v in paths.iter().filter(|v| v.start == first.end) {
                    let mut row = vec![field.zero(); order.len()];
                    let mut any = false;
                    for (c, p) in r {
                        let full = u.concat(p).and_then(|x| x.concat(v)).expect("composable");
                        if let Some(&j) = col.get(&full) {
                            row[j] = row[j].add(c);
                            any = true;
                        }
                    }
                    if any {
                        rows.push(row);
                    }
                }
            }
        }
        let n = order.len();
        let ideal = Matrix::from_scalars(field, rows.len(), n, rows.concat()).expect("shape");
        let red = ideal.rref();
        let basis_cols: Vec<usize> = (0..n).filter(|j| !red.pivots.contains(j)).collect();
        let mut basis: Vec<Path> = basis_cols.iter().map(|&j| order[j].clone()).collect();
        basis.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let bidx: BTreeMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut normal = BTreeMap::new();
        for (j, p) in order.iter().enumerate() {
            let mut v = vec![field.zero(); basis.len()];
            if let Some(row) = red.pivots.iter().position(|&c| c == j) {
                for &k in &basis_cols {
                    let c = red.reduced.get(row, k);
                    if !c.is_zero() {
                        v[bidx[order[k]]] = c.neg();
                    }
                }
            } else {
                v[bidx[*p]] = field.one();
            }
            normal.insert((*p).clone(), v);
        }
        PathAlgebra {
            quiver: quiver.clone(),
            relations: relations.to_vec(),
            field,
            basis,
            nil_length: len,
            normal,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Coordinates of a path in the residue basis; long paths are zero.
    pub fn normal_form(&self, p: &Path) -> Vec<Scalar> {
        match self.normal.get(p) {
            Some(v) => v.clone(),
            None => vec![self.field.zero(); self.dim()],
        }
    }

    /// Structure constants: coordinates of `basis[i] * basis[j]`.
    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        match self.basis[i].concat(&self.basis[j]) {
            Some(p) => self.normal_form(&p),
            None => vec![self.field.zero(); self.dim()],
        }
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.mul_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&ab.mul(c));
                    }
                }
            }
        }
        out
    }

    pub fn one(&self) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        for (i, p) in self.basis.iter().enumerate() {
            if p.is_empty() {
                v[i] = self.field.one();
            }
        }
        v
    }

    /// Indices of basis paths from `i` to `j`.
    pub fn basis_between(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].start == i && self.basis[k].end == j).collect()
    }

    /// No relations and no oriented cycles: a hereditary path algebra.
    pub fn is_hereditary_presentation(&self) -> bool {
        self.relations.iter().all(|r| r.iter().all(|(c, _)| c.is_zero())) && !self.quiver.has_oriented_cycle()
    }

    /// The algebra with all arrows and relation paths reversed.
    pub fn opposite(&self) -> PathAlgebra {
        let rev = |p: &Path| Path { start: p.end, end: p.start, arrows: p.arrows.iter().rev().copied().collect() };
        let relations = self.relations.iter().map(|r| r.iter().map(|(c, p)| (c.clone(), rev(p))).collect()).collect();
        PathAlgebra::new(self.quiver.opposite(), relations, self.field, self.nil_length.max(DEFAULT_MAX_PATH_LENGTH))
            .expect("opposite of a finite-dimensional algebra")
    }
}

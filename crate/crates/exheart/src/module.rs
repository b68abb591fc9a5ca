//! Finite-dimensional representations: the ambient abelian category `mod Λ`.
//!
//! An arrow `a: s → t` acts by a matrix `V_s → V_t`, stored as a `dim V_t × dim V_s` matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input, Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::quiver::{Path, PathAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub comps: Vec<Matrix>,
}

impl Module {
    pub fn new(alg: &PathAlgebra, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Module> {
        let q = &alg.quiver;
        if dims.len() != q.vertex_count() || maps.len() != q.arrows.len() {
            return input("dimension vector or arrow list has the wrong length");
        }
        for (a, m) in q.arrows.iter().zip(&maps) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] || m.field() != alg.field {
                return Err(Error::Dimension(format!("matrix of arrow `{}` has the wrong shape", a.label)));
            }
        }
        let m = Module { field: alg.field, dims, maps };
        for r in &alg.relations {
            let Some((_, p0)) = r.first() else { continue };
            let mut acc = Matrix::zeros(alg.field, m.dims[p0.end], m.dims[p0.start]);
            for (c, p) in r {
                acc = acc.add(&m.path_matrix(p).scale(c));
            }
            if !acc.is_zero() {
                return input("a relation does not vanish on the module");
            }
        }
        Ok(m)
    }

    pub fn zero(alg: &PathAlgebra) -> Module {
        let d = vec![0; alg.vertex_count()];
        Module::unchecked(alg, d)
    }

    fn unchecked(alg: &PathAlgebra, dims: Vec<usize>) -> Module {
        let maps = alg.quiver.arrows.iter().map(|a| Matrix::zeros(alg.field, dims[a.target], dims[a.source])).collect();
        Module { field: alg.field, dims, maps }
    }

    pub fn simple(alg: &PathAlgebra, v: usize) -> Module {
        let mut d = vec![0; alg.vertex_count()];
        d[v] = 1;
        Module::unchecked(alg, d)
    }

    /// `P(i)`: paths starting at `i`.
    pub fn projective(alg: &PathAlgebra, i: usize) -> Module {
        let n = alg.vertex_count();
        let bases: Vec<Vec<usize>> = (0..n).map(|j| alg.basis_between(i, j)).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let maps = alg
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(alg.field, dims[a.target], dims[a.source]);
                let arrow_path = Path { start: a.source, end: a.target, arrows: vec![ai] };
                for (col, &b) in bases[a.source].iter().enumerate() {
                    let nf = alg.normal_form(&alg.basis[b].concat(&arrow_path).expect("composable"));
                    for (row, &c) in bases[a.target].iter().enumerate() {
                        m.set(row, col, nf[c].clone());
                    }
                }
                m
            })
            .collect();
        Module { field: alg.field, dims, maps }
    }

    /// `I(i)`: the dual of paths ending at `i`.
    pub fn injective(alg: &PathAlgebra, i: usize) -> Module {
        let n = alg.vertex_count();
        let bases: Vec<Vec<usize>> = (0..n).map(|j| alg.basis_between(j, i)).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let maps = alg
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                // Dual of q ↦ a·q from paths (target → i) to paths (source → i).
                let mut m = Matrix::zeros(alg.field, dims[a.target], dims[a.source]);
                let arrow_path = Path { start: a.source, end: a.target, arrows: vec![ai] };
                for (row, &qb) in bases[a.target].iter().enumerate() {
                    let nf = alg.normal_form(&arrow_path.concat(&alg.basis[qb]).expect("composable"));
                    for (col, &c) in bases[a.source].iter().enumerate() {
                        m.set(row, col, nf[c].clone());
                    }
                }
                m
            })
            .collect();
        Module { field: alg.field, dims, maps }
    }

    /// The regular module `Λ_Λ = ⊕ P(i)`.
    pub fn regular(alg: &PathAlgebra) -> Module {
        let parts: Vec<Module> = (0..alg.vertex_count()).map(|i| Module::projective(alg, i)).collect();
        direct_sum(alg, &parts).module
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// The matrix of a path `p`, a map `V_start → V_end`.
    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.dims[p.start]);
        for &a in &p.arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    /// The dual representation over the opposite algebra.
    pub fn dual(&self) -> Module {
        Module { field: self.field, dims: self.dims.clone(), maps: self.maps.iter().map(Matrix::transpose).collect() }
    }

    pub fn identity(&self) -> ModuleMap {
        ModuleMap {
            source: self.clone(),
            target: self.clone(),
            comps: self.dims.iter().map(|&d| Matrix::identity(self.field, d)).collect(),
        }
    }
}

impl ModuleMap {
    pub fn new(alg: &PathAlgebra, source: &Module, target: &Module, comps: Vec<Matrix>) -> Result<ModuleMap> {
        if comps.len() != source.dims.len() {
            return input("one matrix per vertex expected");
        }
        for (v, c) in comps.iter().enumerate() {
            if c.rows() != target.dims[v] || c.cols() != source.dims[v] {
                return Err(Error::Dimension(format!("component at vertex `{}` has the wrong shape", alg.quiver.vertices[v])));
            }
        }
        let f = ModuleMap { source: source.clone(), target: target.clone(), comps };
        if let Some(a) = f.commutation_failure(alg) {
            return input(format!("map does not intertwine arrow `{}`", alg.quiver.arrows[a].label));
        }
        Ok(f)
    }

    /// Index of the first arrow whose square fails to commute.
    pub fn commutation_failure(&self, alg: &PathAlgebra) -> Option<usize> {
        alg.quiver.arrows.iter().enumerate().find_map(|(i, a)| {
            let l = self.comps[a.target].mul(&self.source.maps[i]);
            let r = self.target.maps[i].mul(&self.comps[a.source]);
            (l != r).then_some(i)
        })
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps: source.dims.iter().zip(&target.dims).map(|(&s, &t)| Matrix::zeros(source.field, t, s)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.source.field
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &ModuleMap) -> ModuleMap {
        debug_assert_eq!(f.target.dims, self.source.dims, "compose: incompatible modules");
        ModuleMap {
            source: f.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&f.comps).map(|(g, f)| g.mul(f)).collect(),
        }
    }

    pub fn add(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &ModuleMap) -> ModuleMap {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(Matrix::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(|m| m.scale(c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(Matrix::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let comps = self.comps.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), comps })
    }

    /// Entries of all components, concatenated.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.comps.iter().flat_map(|c| c.entries().iter().cloned()).collect()
    }

    fn unflatten(source: &Module, target: &Module, v: &[Scalar]) -> ModuleMap {
        let mut comps = Vec::new();
        let mut off = 0;
        for (&s, &t) in source.dims.iter().zip(&target.dims) {
            comps.push(Matrix::from_scalars(source.field, t, s, v[off..off + s * t].to_vec()).expect("shape"));
            off += s * t;
        }
        ModuleMap { source: source.clone(), target: target.clone(), comps }
    }

    pub fn dual(&self) -> ModuleMap {
        ModuleMap {
            source: self.target.dual(),
            target: self.source.dual(),
            comps: self.comps.iter().map(Matrix::transpose).collect(),
        }
    }

    pub fn is_nilpotent_endo(&self) -> bool {
        self.pow(self.source.total_dim()).is_zero()
    }

    /// The `n`-th power of an endomorphism.
    pub fn pow(&self, n: usize) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(|c| c.pow(n)).collect(), ..self.clone() }
    }

    /// Block map `⊕ sources → ⊕ targets`; `blocks[i][j]` goes from source `j` to target `i`.
    pub fn from_blocks(alg: &PathAlgebra, sources: &[Module], targets: &[Module], blocks: &[Vec<ModuleMap>]) -> ModuleMap {
        let s = direct_sum(alg, sources);
        let t = direct_sum(alg, targets);
        let mut acc = ModuleMap::zero(&s.module, &t.module);
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                acc = acc.add(&t.incl[i].compose(b).compose(&s.proj[j]));
            }
        }
        acc
    }

    /// Direct sum of maps.
    pub fn diag(alg: &PathAlgebra, maps: &[ModuleMap]) -> ModuleMap {
        let sources: Vec<Module> = maps.iter().map(|m| m.source.clone()).collect();
        let targets: Vec<Module> = maps.iter().map(|m| m.target.clone()).collect();
        let blocks: Vec<Vec<ModuleMap>> = maps
            .iter()
            .enumerate()
            .map(|(i, _)| {
                maps.iter()
                    .enumerate()
                    .map(|(j, mj)| if i == j { mj.clone() } else { ModuleMap::zero(&mj.source, &maps[i].target) })
                    .collect()
            })
            .collect();
        ModuleMap::from_blocks(alg, &sources, &targets, &blocks)
    }
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub incl: Vec<ModuleMap>,
    pub proj: Vec<ModuleMap>,
}

pub fn direct_sum(alg: &PathAlgebra, parts: &[Module]) -> DirectSum {
    let field = alg.field;
    let nv = alg.vertex_count();
    let na = alg.quiver.arrows.len();
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
    let maps: Vec<Matrix> = (0..na)
        .map(|a| Matrix::block_diag(field, &parts.iter().map(|m| &m.maps[a]).collect::<Vec<_>>()))
        .collect();
    let module = Module { field, dims: dims.clone(), maps };
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    let mut offs = vec![0usize; nv];
    for m in parts {
        let mut ic = Vec::new();
        let mut pc = Vec::new();
        for v in 0..nv {
            let mut i = Matrix::zeros(field, dims[v], m.dims[v]);
            i.put(offs[v], 0, &Matrix::identity(field, m.dims[v]));
            pc.push(i.transpose());
            ic.push(i);
            offs[v] += m.dims[v];
        }
        incl.push(ModuleMap { source: m.clone(), target: module.clone(), comps: ic });
        proj.push(ModuleMap { source: module.clone(), target: m.clone(), comps: pc });
    }
    DirectSum { module, incl, proj }
}

/// Repeats `parts[i]` `mult[i]` times.
pub fn power_sum(alg: &PathAlgebra, parts: &[Module], mult: &[usize]) -> DirectSum {
    let list: Vec<Module> = parts.iter().zip(mult).flat_map(|(m, &k)| core::iter::repeat(m.clone()).take(k)).collect();
    direct_sum(alg, &list)
}

/// A basis of `Hom(x, y)`.
pub fn hom_basis(alg: &PathAlgebra, x: &Module, y: &Module) -> Vec<ModuleMap> {
    let f = alg.field;
    let mut offs = Vec::new();
    let mut n = 0;
    for (&s, &t) in x.dims.iter().zip(&y.dims) {
        offs.push(n);
        n += s * t;
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (ai, a) in alg.quiver.arrows.iter().enumerate() {
        let (xs, xt, ys, yt) = (x.dims[a.source], x.dims[a.target], y.dims[a.source], y.dims[a.target]);
        let xa = &x.maps[ai];
        let ya = &y.maps[ai];
        // (f_t X_a − Y_a f_s)[i][j] = 0 with f_v stored row-major of shape y_v × x_v.
        for i in 0..yt {
            for j in 0..xs {
                let mut row = vec![f.zero(); n];
                for k in 0..xt {
                    let c = xa.get(k, j);
                    if !c.is_zero() {
                        let idx = offs[a.target] + i * xt + k;
                        row[idx] = row[idx].add(c);
                    }
                }
                for k in 0..ys {
                    let c = ya.get(i, k);
                    if !c.is_zero() {
                        let idx = offs[a.source] + k * xs + j;
                        row[idx] = row[idx].sub(c);
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let sys = Matrix::from_scalars(f, rows.len(), n, rows.concat()).expect("shape");
    let k = sys.kernel_basis();
    (0..k.cols())
        .map(|c| {
            let v: Vec<Scalar> = (0..n).map(|r| k.get(r, c).clone()).collect();
            ModuleMap::unflatten(x, y, &v)
        })
        .collect()
}

pub fn hom_dim(alg: &PathAlgebra, x: &Module, y: &Module) -> usize {
    hom_basis(alg, x, y).len()
}

/// Matrix whose columns are the flattened maps.
pub fn maps_matrix(field: FieldSpec, len: usize, maps: &[ModuleMap]) -> Matrix {
    let mut m = Matrix::zeros(field, len, maps.len());
    for (j, f) in maps.iter().enumerate() {
        for (i, c) in f.flatten().into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

fn flat_len(x: &Module, y: &Module) -> usize {
    x.dims.iter().zip(&y.dims).map(|(a, b)| a * b).sum()
}

/// Coefficients `c` with `Σ cᵢ·spanning[i] = h`, if any.
pub fn solve_in_span(spanning: &[ModuleMap], h: &ModuleMap) -> Option<Vec<Scalar>> {
    let field = h.field();
    let len = flat_len(&h.source, &h.target);
    if spanning.is_empty() {
        return h.is_zero().then(Vec::new);
    }
    let a = maps_matrix(field, len, spanning);
    let b = Matrix::column(field, h.flatten());
    let x = a.solve(&b).ok()??;
    Some((0..spanning.len()).map(|i| x.get(i, 0).clone()).collect())
}

pub fn combine(source: &Module, target: &Module, maps: &[ModuleMap], coeffs: &[Scalar]) -> ModuleMap {
    let mut acc = ModuleMap::zero(source, target);
    for (m, c) in maps.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// Rank of a family of parallel maps as vectors.
pub fn span_rank(maps: &[ModuleMap]) -> usize {
    let Some(first) = maps.first() else { return 0 };
    maps_matrix(first.field(), flat_len(&first.source, &first.target), maps).rank()
}

/// Some `x: A → B` with `g ∘ x = h`, for `g: B → C`, `h: A → C`.
pub fn lift_through(alg: &PathAlgebra, g: &ModuleMap, h: &ModuleMap) -> Option<ModuleMap> {
    let basis = hom_basis(alg, &h.source, &g.source);
    let images: Vec<ModuleMap> = basis.iter().map(|x| g.compose(x)).collect();
    let c = solve_in_span(&images, h)?;
    Some(combine(&h.source, &g.source, &basis, &c))
}

/// Some `x: C → D` with `x ∘ g = h`, for `g: B → C`, `h: B → D`.
pub fn extend_along(alg: &PathAlgebra, g: &ModuleMap, h: &ModuleMap) -> Option<ModuleMap> {
    let basis = hom_basis(alg, &g.target, &h.target);
    let images: Vec<ModuleMap> = basis.iter().map(|x| x.compose(g)).collect();
    let c = solve_in_span(&images, h)?;
    Some(combine(&g.target, &h.target, &basis, &c))
}

/// For an injective `i`, the unique `x` with `i ∘ x = h` when `im h ⊆ im i`.
pub fn lift_along_mono(i: &ModuleMap, h: &ModuleMap) -> Option<ModuleMap> {
    let comps = i
        .comps
        .iter()
        .zip(&h.comps)
        .map(|(iv, hv)| iv.solve(hv).ok().flatten())
        .collect::<Option<Vec<_>>>()?;
    Some(ModuleMap { source: h.source.clone(), target: i.source.clone(), comps })
}

/// For a surjective `q`, the unique `x` with `x ∘ q = h` when `ker q ⊆ ker h`.
pub fn descend_along_epi(q: &ModuleMap, h: &ModuleMap) -> Option<ModuleMap> {
    let mut comps = Vec::new();
    for (qv, hv) in q.comps.iter().zip(&h.comps) {
        let r = qv.solve(&Matrix::identity(qv.field(), qv.rows())).ok()??;
        let x = hv.mul(&r);
        if x.mul(qv) != *hv {
            return None;
        }
        comps.push(x);
    }
    Some(ModuleMap { source: q.target.clone(), target: h.target.clone(), comps })
}

/// Pointwise kernel with its inclusion.
pub fn kernel(alg: &PathAlgebra, f: &ModuleMap) -> (Module, ModuleMap) {
    let ks: Vec<Matrix> = f.comps.iter().map(Matrix::kernel_basis).collect();
    let dims: Vec<usize> = ks.iter().map(Matrix::cols).collect();
    let maps = alg
        .quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = f.source.maps[ai].mul(&ks[a.source]);
            ks[a.target].solve(&img).expect("shape").expect("kernel is a submodule")
        })
        .collect();
    let k = Module { field: alg.field, dims, maps };
    let incl = ModuleMap { source: k.clone(), target: f.source.clone(), comps: ks };
    (k, incl)
}

/// Image with the factorization `f = incl ∘ coim`.
pub fn image(alg: &PathAlgebra, f: &ModuleMap) -> (Module, ModuleMap, ModuleMap) {
    let is: Vec<Matrix> = f.comps.iter().map(Matrix::column_space).collect();
    let dims: Vec<usize> = is.iter().map(Matrix::cols).collect();
    let maps = alg
        .quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = f.target.maps[ai].mul(&is[a.source]);
            is[a.target].solve(&img).expect("shape").expect("image is a submodule")
        })
        .collect();
    let m = Module { field: alg.field, dims, maps };
    let coim = f
        .comps
        .iter()
        .zip(&is)
        .map(|(fv, iv)| iv.solve(fv).expect("shape").expect("in image"))
        .collect();
    let incl = ModuleMap { source: m.clone(), target: f.target.clone(), comps: is };
    let coim = ModuleMap { source: f.source.clone(), target: m.clone(), comps: coim };
    (m, incl, coim)
}

/// Pointwise cokernel with its projection.
pub fn cokernel(alg: &PathAlgebra, f: &ModuleMap) -> (Module, ModuleMap) {
    let qs: Vec<Matrix> = f.comps.iter().map(Matrix::left_kernel_basis).collect();
    let dims: Vec<usize> = qs.iter().map(Matrix::rows).collect();
    let maps = alg
        .quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let qs_s = &qs[a.source];
            let r = qs_s.solve(&Matrix::identity(alg.field, qs_s.rows())).expect("shape").expect("full row rank");
            qs[a.target].mul(&f.target.maps[ai]).mul(&r)
        })
        .collect();
    let c = Module { field: alg.field, dims, maps };
    let proj = ModuleMap { source: f.target.clone(), target: c.clone(), comps: qs };
    (c, proj)
}

/// The pullback of `p: X → Z` along `a: Y → Z`, with its projections to `X` and `Y`.
pub fn pullback(alg: &PathAlgebra, p: &ModuleMap, a: &ModuleMap) -> (Module, ModuleMap, ModuleMap) {
    let sum = direct_sum(alg, &[p.source.clone(), a.source.clone()]);
    let diff = p.compose(&sum.proj[0]).sub(&a.compose(&sum.proj[1]));
    let (k, incl) = kernel(alg, &diff);
    let to_x = sum.proj[0].compose(&incl);
    let to_y = sum.proj[1].compose(&incl);
    (k, to_x, to_y)
}

/// Whether `im h ⊆ im f` for maps with a common target.
pub fn image_within(h: &ModuleMap, f: &ModuleMap) -> bool {
    h.comps.iter().zip(&f.comps).all(|(hv, fv)| {
        let both = Matrix::hstack(fv.field(), fv.rows(), &[fv, hv]);
        both.rank() == fv.rank()
    })
}

/// Whether `f` then `g` is short exact: `f` injective, `g` surjective, `im f = ker g`.
pub fn is_short_exact(f: &ModuleMap, g: &ModuleMap) -> bool {
    f.is_injective() && g.is_surjective() && g.compose(f).is_zero() && f.source.total_dim() + g.target.total_dim() == f.target.total_dim()
}

/// Whether `L → M → N` is exact at `M`.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> bool {
    g.compose(f).is_zero()
        && f.comps.iter().zip(&g.comps).all(|(fv, gv)| fv.rank() + gv.rank() == gv.cols())
}

/// Radical layer complement: a projective cover `P ↠ m`.
pub fn projective_cover(alg: &PathAlgebra, m: &Module) -> (Module, ModuleMap) {
    let (_, p, eps) = projective_cover_parts(alg, m);
    (p.module, eps)
}

/// Projective cover together with the vertex of each indecomposable summand, in summand order.
pub fn projective_cover_parts(alg: &PathAlgebra, m: &Module) -> (Vec<usize>, DirectSum, ModuleMap) {
    let f = alg.field;
    let n = alg.vertex_count();
    let mut tops: Vec<Vec<Matrix>> = vec![Vec::new(); n];
    for v in 0..n {
        let incoming: Vec<&Matrix> = alg.quiver.arrows.iter().enumerate().filter(|(_, a)| a.target == v).map(|(i, _)| &m.maps[i]).collect();
        let mut span = Matrix::hstack(f, m.dims[v], &incoming);
        for k in 0..m.dims[v] {
            let mut e = Matrix::zeros(f, m.dims[v], 1);
            e.set(k, 0, f.one());
            if !span.spans(&e) {
                span = Matrix::hstack(f, m.dims[v], &[&span, &e]);
                tops[v].push(e);
            }
        }
    }
    let mut parts = Vec::new();
    let mut gens = Vec::new();
    for (v, ts) in tops.iter().enumerate() {
        for t in ts {
            parts.push(Module::projective(alg, v));
            gens.push((v, t.clone()));
        }
    }
    let p = direct_sum(alg, &parts);
    let mut total = ModuleMap::zero(&p.module, m);
    for (k, (v, x)) in gens.iter().enumerate() {
        let g = map_from_projective(alg, *v, m, x);
        total = total.add(&g.compose(&p.proj[k]));
    }
    (gens.into_iter().map(|(v, _)| v).collect(), p, total)
}

/// The map `P(v) → m` sending the trivial path to the vector `x ∈ m_v`.
pub fn map_from_projective(alg: &PathAlgebra, v: usize, m: &Module, x: &Matrix) -> ModuleMap {
    let pv = Module::projective(alg, v);
    let comps = (0..alg.vertex_count())
        .map(|j| {
            let basis = alg.basis_between(v, j);
            let cols: Vec<Matrix> = basis.iter().map(|&b| m.path_matrix(&alg.basis[b]).mul(x)).collect();
            Matrix::hstack(alg.field, m.dims[j], &cols.iter().collect::<Vec<_>>())
        })
        .collect();
    ModuleMap { source: pv, target: m.clone(), comps }
}

/// `… → P⁻¹ → P⁰ ↠ m`; `terms[k]` is `P^{-k}` and `diffs[k]` is `P^{-k-1} → P^{-k}`.
#[derive(Clone, Debug)]
pub struct ProjectiveResolution {
    pub terms: Vec<Module>,
    pub diffs: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
    /// True when the last syzygy computed was zero.
    pub complete: bool,
}

pub fn projective_resolution(alg: &PathAlgebra, m: &Module, length: usize) -> ProjectiveResolution {
    let (p0, eps) = projective_cover(alg, m);
    let mut terms = vec![p0];
    let mut diffs = Vec::new();
    let (mut syz, mut incl) = kernel(alg, &eps);
    for _ in 0..length {
        if syz.is_zero() {
            break;
        }
        let (p, cov) = projective_cover(alg, &syz);
        diffs.push(incl.compose(&cov));
        terms.push(p);
        let (s, i) = kernel(alg, &cov);
        syz = s;
        incl = i;
    }
    let complete = syz.is_zero();
    ProjectiveResolution { terms, diffs, augmentation: eps, complete }
}

/// Projective dimension up to `bound`; `None` when the resolution is longer.
pub fn projective_dimension(alg: &PathAlgebra, m: &Module, bound: usize) -> Option<usize> {
    if m.is_zero() {
        return Some(0);
    }
    let r = projective_resolution(alg, m, bound);
    r.complete.then(|| r.terms.len() - 1)
}

/// `Ext¹(x, y)` from the presentation `0 → Ω → P⁰ → x → 0`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub dim: usize,
    pub x: Module,
    pub y: Module,
    omega_incl: ModuleMap,
    cover: ModuleMap,
    /// Maps `Ω → y` representing a basis of `Ext¹(x, y)`.
    pub classes: Vec<ModuleMap>,
}

/// A short exact sequence `y ↣ middle ↠ x`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub middle: Module,
    pub inc: ModuleMap,
    pub proj: ModuleMap,
}

pub fn ext1(alg: &PathAlgebra, x: &Module, y: &Module) -> Ext1 {
    let (p0, cover) = projective_cover(alg, x);
    let (omega, incl) = kernel(alg, &cover);
    let hom_omega = hom_basis(alg, &omega, y);
    let restricted: Vec<ModuleMap> = hom_basis(alg, &p0, y).iter().map(|phi| phi.compose(&incl)).collect();
    let mut span = restricted.clone();
    let mut classes = Vec::new();
    let mut rank = span_rank(&span);
    for h in &hom_omega {
        span.push(h.clone());
        let r = span_rank(&span);
        if r > rank {
            classes.push(h.clone());
            rank = r;
        } else {
            span.pop();
        }
    }
    Ext1 { dim: classes.len(), x: x.clone(), y: y.clone(), omega_incl: incl, cover, classes }
}

impl Ext1 {
    /// The pushout extension for the class `Σ cᵢ·classes[i]`.
    pub fn extension(&self, alg: &PathAlgebra, coeffs: &[Scalar]) -> Extension {
        let omega = &self.omega_incl.source;
        let psi = combine(omega, &self.y, &self.classes, coeffs);
        let p0 = self.cover.source.clone();
        let sum = direct_sum(alg, &[self.y.clone(), p0]);
        let glue = sum.incl[0].compose(&psi).sub(&sum.incl[1].compose(&self.omega_incl));
        let (middle, q) = cokernel(alg, &glue);
        let inc = q.compose(&sum.incl[0]);
        let onto = self.cover.compose(&sum.proj[1]);
        let proj = descend_along_epi(&q, &onto).expect("pushout factorization");
        Extension { middle, inc, proj }
    }

    pub fn basis_extensions(&self, alg: &PathAlgebra) -> Vec<Extension> {
        let f = alg.field;
        (0..self.dim)
            .map(|i| {
                let c: Vec<Scalar> = (0..self.dim).map(|j| if i == j { f.one() } else { f.zero() }).collect();
                self.extension(alg, &c)
            })
            .collect()
    }
}

/// Fitting splitting `m = ker φⁿ ⊕ im φⁿ` when it is proper.
fn fitting_split(alg: &PathAlgebra, phi: &ModuleMap) -> Option<[(Module, ModuleMap); 2]> {
    let n = phi.source.total_dim();
    let psi = phi.pow(n);
    let r = psi.rank();
    if r == 0 || r == n {
        return None;
    }
    let (k, ki) = kernel(alg, &psi);
    let (i, ii, _) = image(alg, &psi);
    Some([(k, ki), (i, ii)])
}

/// Projections for an internal direct sum given by inclusions.
fn projections(field: FieldSpec, m: &Module, incls: &[ModuleMap]) -> Vec<ModuleMap> {
    let nv = m.dims.len();
    let mut inverses = Vec::new();
    for v in 0..nv {
        let cols: Vec<&Matrix> = incls.iter().map(|i| &i.comps[v]).collect();
        let big = Matrix::hstack(field, m.dims[v], &cols);
        inverses.push(big.inverse().expect("internal direct sum"));
    }
    let mut out = Vec::new();
    let mut offs = vec![0usize; nv];
    for inc in incls {
        let comps = (0..nv)
            .map(|v| {
                let d = inc.source.dims[v];
                let b = inverses[v].block(offs[v], 0, d, m.dims[v]);
                offs[v] += d;
                b
            })
            .collect();
        out.push(ModuleMap { source: m.clone(), target: inc.source.clone(), comps });
    }
    out
}

/// An indecomposable summand with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

fn lambda_candidates(field: FieldSpec, phi: &ModuleMap) -> Vec<Scalar> {
    let n = phi.source.total_dim();
    let tr = phi.comps.iter().fold(field.zero(), |acc, c| acc.add(&c.trace()));
    let mut out = Vec::new();
    if let Some(inv) = field.from_i64(n as i64).inv() {
        out.push(tr.mul(&inv));
    }
    if let Some(els) = field.elements() {
        if els.len() <= 101 {
            out.extend(els);
        }
    }
    out
}

fn shift(phi: &ModuleMap, lambda: &Scalar) -> ModuleMap {
    phi.sub(&phi.source.identity().scale(lambda))
}

/// Span of products `a·b` for `a` in `xs`, `b` in `ys`, as endomorphisms.
fn product_span(xs: &[ModuleMap], ys: &[ModuleMap]) -> Vec<ModuleMap> {
    let mut out: Vec<ModuleMap> = Vec::new();
    let mut rank = 0;
    for a in xs {
        for b in ys {
            out.push(a.compose(b));
            let r = span_rank(&out);
            if r > rank {
                rank = r;
            } else {
                out.pop();
            }
        }
    }
    out
}

/// Decides locality of `End(m)` or finds a splitting endomorphism.
fn split_or_local(alg: &PathAlgebra, m: &Module) -> Result<Option<[(Module, ModuleMap); 2]>> {
    let field = alg.field;
    let end = hom_basis(alg, m, m);
    let mut radical_part = Vec::new();
    for b in &end {
        if let Some(s) = fitting_split(alg, b) {
            return Ok(Some(s));
        }
        let mut found = None;
        for l in lambda_candidates(field, b) {
            let shifted = shift(b, &l);
            if let Some(s) = fitting_split(alg, &shifted) {
                return Ok(Some(s));
            }
            if found.is_none() && shifted.pow(m.total_dim()).is_zero() {
                found = Some(shifted);
            }
        }
        match found {
            Some(r) => radical_part.push(r),
            None => {
                return Err(Error::SplittingField(format!("module of dimension vector {:?}", m.dims)));
            }
        }
    }
    for (i, a) in end.iter().enumerate() {
        for b in &end[i..] {
            for c in [a.add(b), a.compose(b)] {
                if let Some(s) = fitting_split(alg, &c) {
                    return Ok(Some(s));
                }
            }
        }
    }
    // Local iff the span of the shifted basis is a nilpotent algebra.
    let mut power = product_span(&radical_part, &radical_part);
    for _ in 0..=m.total_dim() {
        if power.iter().all(ModuleMap::is_zero) {
            return Ok(None);
        }
        power = product_span(&power, &radical_part);
    }
    if power.iter().all(ModuleMap::is_zero) {
        return Ok(None);
    }
    Err(Error::SplittingField(format!("module of dimension vector {:?}", m.dims)))
}

/// Krull–Schmidt decomposition with split inclusions and projections.
pub fn decompose_with_maps(alg: &PathAlgebra, m: &Module) -> Result<Vec<Summand>> {
    let mut done: Vec<(Module, ModuleMap)> = Vec::new();
    let mut todo = vec![(m.clone(), m.identity())];
    while let Some((n, inc)) = todo.pop() {
        if n.is_zero() {
            continue;
        }
        match split_or_local(alg, &n)? {
            None => done.push((n, inc)),
            Some([(a, ai), (b, bi)]) => {
                todo.push((b, inc.compose(&bi)));
                todo.push((a, inc.compose(&ai)));
            }
        }
    }
    let incls: Vec<ModuleMap> = done.iter().map(|(_, i)| i.clone()).collect();
    let projs = projections(alg.field, m, &incls);
    Ok(done
        .into_iter()
        .zip(projs)
        .map(|((module, incl), proj)| Summand { module, incl, proj })
        .collect())
}

pub fn decompose(alg: &PathAlgebra, m: &Module) -> Result<Vec<Module>> {
    Ok(decompose_with_maps(alg, m)?.into_iter().map(|s| s.module).collect())
}

/// An isomorphism between indecomposables, if one exists.
pub fn indecomposable_iso(alg: &PathAlgebra, x: &Module, y: &Module) -> Option<ModuleMap> {
    if x.dims != y.dims {
        return None;
    }
    if x == y {
        return Some(x.identity());
    }
    let there = hom_basis(alg, x, y);
    let back = hom_basis(alg, y, x);
    for f in &there {
        if f.is_iso() {
            return Some(f.clone());
        }
        for g in &back {
            if g.compose(f).is_iso() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// An isomorphism `x → y`, found by matching indecomposable summands.
pub fn find_iso(alg: &PathAlgebra, x: &Module, y: &Module) -> Result<Option<ModuleMap>> {
    if x.dims != y.dims {
        return Ok(None);
    }
    if x == y {
        return Ok(Some(x.identity()));
    }
    let xs = decompose_with_maps(alg, x)?;
    let ys = decompose_with_maps(alg, y)?;
    if xs.len() != ys.len() {
        return Ok(None);
    }
    let mut used = vec![false; ys.len()];
    let mut total = ModuleMap::zero(x, y);
    for s in &xs {
        let mut hit = None;
        for (j, t) in ys.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(iso) = indecomposable_iso(alg, &s.module, &t.module) {
                hit = Some((j, iso));
                break;
            }
        }
        let Some((j, iso)) = hit else { return Ok(None) };
        used[j] = true;
        total = total.add(&ys[j].incl.compose(&iso).compose(&s.proj));
    }
    Ok(Some(total))
}

pub fn is_isomorphic(alg: &PathAlgebra, x: &Module, y: &Module) -> Result<bool> {
    Ok(find_iso(alg, x, y)?.is_some())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::quiver::Quiver;

    pub use crate::fixtures::{a2, dual_numbers};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn a2_projectives_and_injectives() {
        let alg = a2(q());
        let p1 = Module::projective(&alg, 0);
        let p2 = Module::projective(&alg, 1);
        let i1 = Module::injective(&alg, 0);
        let i2 = Module::injective(&alg, 1);
        assert_eq!(p1.dims, vec![1, 0]);
        assert_eq!(p2.dims, vec![1, 1]);
        assert!(p2.maps[0].is_identity());
        assert_eq!(i2.dims, vec![0, 1]);
        assert_eq!(i1, p2);
        assert_eq!(p1, Module::simple(&alg, 0));
    }

    #[test]
    fn a2_hom_dimensions() {
        let alg = a2(q());
        let p1 = Module::projective(&alg, 0);
        let p2 = Module::projective(&alg, 1);
        let i2 = Module::injective(&alg, 1);
        assert_eq!(hom_dim(&alg, &p2, &i2), 1);
        assert_eq!(hom_dim(&alg, &p2, &p1), 0);
        assert_eq!(hom_dim(&alg, &p1, &p2), 1);
        assert_eq!(hom_dim(&alg, &i2, &p2), 0);
        let end = hom_basis(&alg, &p2, &p2);
        assert!(solve_in_span(&end, &p2.identity()).is_some());
    }

    #[test]
    fn a2_kernel_of_cover() {
        let alg = a2(q());
        let p2 = Module::projective(&alg, 1);
        let i2 = Module::injective(&alg, 1);
        let f = hom_basis(&alg, &p2, &i2).remove(0);
        let (k, inc) = kernel(&alg, &f);
        assert!(is_isomorphic(&alg, &k, &Module::projective(&alg, 0)).unwrap());
        assert!(f.compose(&inc).is_zero());
        let (k0, _) = kernel(&alg, &p2.identity());
        assert!(k0.is_zero());
        let z = Module::zero(&alg);
        let (c, _) = cokernel(&alg, &ModuleMap::zero(&z, &p2));
        assert_eq!(c, p2);
    }

    #[test]
    fn a2_ext() {
        let alg = a2(q());
        let p1 = Module::projective(&alg, 0);
        let p2 = Module::projective(&alg, 1);
        let i2 = Module::injective(&alg, 1);
        let e = ext1(&alg, &i2, &p1);
        assert_eq!(e.dim, 1);
        let ext = &e.basis_extensions(&alg)[0];
        assert!(is_short_exact(&ext.inc, &ext.proj));
        assert!(is_isomorphic(&alg, &ext.middle, &p2).unwrap());
        assert_eq!(ext1(&alg, &i2, &p2).dim, 0);
        assert_eq!(ext1(&alg, &p2, &i2).dim, 0);
        assert_eq!(ext1(&alg, &p1, &i2).dim, 0);
    }

    #[test]
    fn a2_resolution_of_i2() {
        let alg = a2(q());
        let i2 = Module::injective(&alg, 1);
        let r = projective_resolution(&alg, &i2, 4);
        assert!(r.complete);
        assert_eq!(r.terms.len(), 2);
        assert!(is_isomorphic(&alg, &r.terms[0], &Module::projective(&alg, 1)).unwrap());
        assert!(is_isomorphic(&alg, &r.terms[1], &Module::projective(&alg, 0)).unwrap());
        assert!(r.augmentation.compose(&r.diffs[0]).is_zero());
        assert_eq!(projective_dimension(&alg, &Module::projective(&alg, 1), 3), Some(0));
    }

    #[test]
    fn dual_numbers_simple_resolution() {
        let alg = dual_numbers(q());
        let s = Module::simple(&alg, 0);
        let r = projective_resolution(&alg, &s, 3);
        assert!(!r.complete);
        assert_eq!(r.terms.len(), 4);
        for t in &r.terms {
            assert_eq!(t.dims, vec![2]);
        }
        for w in r.diffs.windows(2) {
            assert!(w[1].compose(&w[0]).is_zero());
        }
        assert_eq!(projective_dimension(&alg, &s, 5), None);
    }

    #[test]
    fn decompositions() {
        let alg = a2(q());
        let p1 = Module::projective(&alg, 0);
        let p2 = Module::projective(&alg, 1);
        let two = direct_sum(&alg, &[p1.clone(), p1.clone()]).module;
        assert_eq!(decompose(&alg, &two).unwrap(), vec![p1.clone(), p1.clone()]);
        assert_eq!(decompose(&alg, &p2).unwrap(), vec![p2.clone()]);
        let reg = decompose(&alg, &Module::regular(&alg)).unwrap();
        assert_eq!(reg.len(), 2);
        assert!(reg.iter().any(|m| is_isomorphic(&alg, m, &p1).unwrap()));
        assert!(reg.iter().any(|m| is_isomorphic(&alg, m, &p2).unwrap()));
    }

    #[test]
    fn decompose_twisted_sum_over_f5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let alg = a2(f5);
        let p2 = Module::projective(&alg, 1);
        let s2 = Module::simple(&alg, 1);
        let s1 = Module::simple(&alg, 0);
        let m = direct_sum(&alg, &[p2.clone(), s1.clone(), s2.clone()]).module;
        // Conjugate by a non-trivial automorphism so the summands are not coordinate blocks.
        let g1 = Matrix::from_i64(f5, 2, 2, &[1, 1, 0, 1]);
        let g2 = Matrix::from_i64(f5, 2, 2, &[1, 0, 2, 1]);
        let maps = vec![g1.mul(&m.maps[0]).mul(&g2.inverse().unwrap())];
        let twisted = Module::new(&alg, m.dims.clone(), maps).unwrap();
        let parts = decompose_with_maps(&alg, &twisted).unwrap();
        assert_eq!(parts.len(), 3);
        let mut sum = ModuleMap::zero(&twisted, &twisted);
        for s in &parts {
            assert!(s.proj.compose(&s.incl).is_iso());
            sum = sum.add(&s.incl.compose(&s.proj));
        }
        assert!(sum.comps.iter().all(Matrix::is_identity));
        assert!(is_isomorphic(&alg, &twisted, &m).unwrap());
    }

    #[test]
    fn kronecker_rotation_over_q_is_reported() {
        // End is ℚ(i): indecomposable, but not split over ℚ.
        let quiver = Quiver::from_parts(&["1", "2"], &[("a", 0, 1), ("b", 0, 1)]).unwrap();
        let alg = PathAlgebra::new(quiver, vec![], q(), 12).unwrap();
        let rot = Matrix::from_i64(q(), 2, 2, &[0, -1, 1, 0]);
        let m = Module::new(&alg, vec![2, 2], vec![Matrix::identity(q(), 2), rot]).unwrap();
        assert!(matches!(decompose(&alg, &m), Err(Error::SplittingField(_))));
    }

    #[test]
    fn dual_numbers_modules() {
        let alg = dual_numbers(q());
        let lam = Module::projective(&alg, 0);
        assert_eq!(lam.dims, vec![2]);
        assert_eq!(decompose(&alg, &lam).unwrap().len(), 1);
        assert_eq!(hom_dim(&alg, &lam, &lam), 2);
        assert!(Module::new(&alg, vec![1], vec![Matrix::from_i64(q(), 1, 1, &[1])]).is_err());
    }
}

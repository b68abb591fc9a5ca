//! Finitely presented functors `coker Y(f)` on `E = add(T)`, evaluated at `T`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::acyclic::{refine, search_killing_deflation};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::exact::{minimal_right_approximation, ExactSubcat, Structure};
use crate::linalg::{Matrix, Scalar};
use crate::module::{
    cokernel, combine, direct_sum, find_iso, hom_basis, is_isomorphic, kernel, maps_matrix, projective_cover_parts,
    projective_dimension, solve_in_span, Module, ModuleMap,
};
use crate::quiver::{Arrow, Path, PathAlgebra, Quiver, Relation};
use crate::status::Verdict;

/// `coker(Y(M) → Y(N))` for the presentation `f: M → N` in `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpFunctor {
    pub pres: ModuleMap,
}

/// `F(A)` as a quotient of `Hom(A, N)`.
#[derive(Clone, Debug)]
pub struct Value {
    pub hom: Vec<ModuleMap>,
    /// Representatives of a basis of `F(A)`.
    pub reps: Vec<ModuleMap>,
    /// Coordinates on `hom` to coordinates on `reps`.
    proj: Matrix,
}

impl Value {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `h: A → N`.
    pub fn class_of(&self, h: &ModuleMap) -> Vec<Scalar> {
        let field = h.field();
        if self.hom.is_empty() {
            return Vec::new();
        }
        let c = solve_in_span(&self.hom, h).expect("h lies in Hom(A, N)");
        let v = self.proj.mul(&Matrix::column(field, c));
        (0..v.rows()).map(|i| v.get(i, 0).clone()).collect()
    }
}

impl FpFunctor {
    pub fn new(pres: ModuleMap) -> FpFunctor {
        FpFunctor { pres }
    }

    pub fn representable(alg: &PathAlgebra, n: &Module) -> FpFunctor {
        FpFunctor { pres: ModuleMap::zero(&Module::zero(alg), n) }
    }

    pub fn zero(alg: &PathAlgebra) -> FpFunctor {
        let z = Module::zero(alg);
        FpFunctor { pres: ModuleMap::zero(&z, &z) }
    }

    /// `dim Hom(A, N) − rank Hom(A, f)`.
    pub fn evaluate_dim(&self, alg: &PathAlgebra, a: &Module) -> usize {
        self.value(alg, a).dim()
    }

    pub fn value(&self, alg: &PathAlgebra, a: &Module) -> Value {
        let field = alg.field;
        let hom = hom_basis(alg, a, &self.pres.target);
        let n = hom.len();
        if n == 0 {
            return Value { hom, reps: Vec::new(), proj: Matrix::zeros(field, 0, 0) };
        }
        let images: Vec<ModuleMap> = hom_basis(alg, a, &self.pres.source).iter().map(|x| self.pres.compose(x)).collect();
        let mut cols: Vec<Matrix> = Vec::new();
        for im in &images {
            let c = solve_in_span(&hom, im).expect("image lies in Hom(A, N)");
            cols.push(Matrix::column(field, c));
        }
        let mut span = Matrix::hstack(field, n, &cols.iter().collect::<Vec<_>>());
        let span_rank = span.rank();
        let mut chosen = Vec::new();
        for k in 0..n {
            let mut e = Matrix::zeros(field, n, 1);
            e.set(k, 0, field.one());
            if !span.spans(&e) {
                span = Matrix::hstack(field, n, &[&span, &e]);
                chosen.push(k);
            }
        }
        // Basis of the image followed by the chosen unit vectors; invert and keep the last rows.
        let image_basis = Matrix::hstack(field, n, &cols.iter().collect::<Vec<_>>()).column_space();
        let mut full = vec![image_basis];
        for &k in &chosen {
            let mut e = Matrix::zeros(field, n, 1);
            e.set(k, 0, field.one());
            full.push(e);
        }
        let basis = Matrix::hstack(field, n, &full.iter().collect::<Vec<_>>());
        let inv = basis.inverse().expect("complement basis");
        let proj = inv.select_rows(&(span_rank..n).collect::<Vec<_>>());
        let reps = chosen.iter().map(|&k| hom[k].clone()).collect();
        Value { hom, reps, proj }
    }

    /// Vanishes on every generator.
    pub fn is_zero(&self, e: &ExactSubcat) -> bool {
        e.generators.iter().all(|g| self.evaluate_dim(&e.alg, g) == 0)
    }
}

/// A natural transformation `coker Y(f) → coker Y(f')` induced by `top: N → N'`.
#[derive(Clone, Debug)]
pub struct FunctorMap {
    pub source: FpFunctor,
    pub target: FpFunctor,
    pub top: ModuleMap,
}

impl FunctorMap {
    pub fn new(alg: &PathAlgebra, source: &FpFunctor, target: &FpFunctor, top: ModuleMap) -> Result<FunctorMap> {
        if top.source != source.pres.target || top.target != target.pres.target {
            return Err(Error::Input("functor map does not match the presentations".into()));
        }
        if crate::module::lift_through(alg, &target.pres, &top.compose(&source.pres)).is_none() {
            return Err(Error::Input("top map does not preserve the relations".into()));
        }
        Ok(FunctorMap { source: source.clone(), target: target.clone(), top })
    }
}

/// `E ≃ proj Γ` with `Γ = End(T)^op` given by its Gabriel quiver, and the induced `mod E ≃ mod Γ`.
#[derive(Clone, Debug)]
pub struct Transport {
    pub e: ExactSubcat,
    pub gamma: PathAlgebra,
    /// The irreducible map `φ: Gᵢ → Gⱼ` behind the arrow `j → i`.
    pub arrow_maps: Vec<ModuleMap>,
}

impl Transport {
    pub fn new(e: &ExactSubcat) -> Result<Transport> {
        let alg = &e.alg;
        let n = e.generators.len();
        let mut arrows = Vec::new();
        let mut arrow_maps = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let rad2 = e.radical_squared(i, j)?;
                let mut span = rad2.clone();
                for phi in e.radical(i, j)? {
                    span.push(phi.clone());
                    if crate::module::span_rank(&span) == span.len() {
                        arrows.push(Arrow { label: format!("a{}", arrows.len()), source: j, target: i });
                        arrow_maps.push(phi);
                    } else {
                        span.pop();
                    }
                }
            }
        }
        let vertices: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let quiver = Quiver::new(vertices, arrows)?;
        let mut tr = Transport { e: e.clone(), gamma: PathAlgebra::new(Quiver::new(Vec::new(), Vec::new())?, Vec::new(), alg.field, 1)?, arrow_maps };
        // Paths by length until every composite vanishes.
        let total: usize = e.generators.iter().map(Module::total_dim).sum();
        let mut layers: Vec<Vec<Path>> = vec![(0..n).map(Path::trivial).collect()];
        let mut relations: Vec<Relation> = Vec::new();
        let mut nil = 1;
        loop {
            let prev = layers.last().expect("nonempty");
            let mut next = Vec::new();
            for p in prev {
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.source == p.end {
                        next.push(p.concat(&Path { start: a.source, end: a.target, arrows: vec![ai] }).expect("composable"));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let all_zero = next.iter().all(|p| tr.path_map(p).is_zero());
            layers.push(next);
            nil += 1;
            if all_zero {
                break;
            }
            if nil > total + 2 {
                return Err(Error::Unsupported("radical of End(T) is not nilpotent at the expected length".into()));
            }
        }
        for v in 0..n {
            for w in 0..n {
                let paths: Vec<&Path> = layers.iter().skip(2).flatten().filter(|p| p.start == v && p.end == w).collect();
                if paths.is_empty() {
                    continue;
                }
                let maps: Vec<ModuleMap> = paths.iter().map(|p| tr.path_map(p)).collect();
                let len = maps[0].flatten().len();
                let k = maps_matrix(alg.field, len, &maps).kernel_basis();
                for c in 0..k.cols() {
                    let rel: Relation = (0..k.rows())
                        .filter(|&r| !k.get(r, c).is_zero())
                        .map(|r| (k.get(r, c).clone(), paths[r].clone()))
                        .collect();
                    relations.push(rel);
                }
            }
        }
        tr.gamma = PathAlgebra::new(quiver, relations, alg.field, nil + 1)?;
        let expected: usize = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| hom_basis(alg, &e.generators[i], &e.generators[j]).len()).sum();
        if tr.gamma.dim() != expected {
            return Err(Error::Unsupported(format!("End(T) has dimension {expected} but the quiver presentation gives {}", tr.gamma.dim())));
        }
        Ok(tr)
    }

    /// The map `G_w → G_v` of a path `v → w`.
    pub fn path_map(&self, p: &Path) -> ModuleMap {
        let mut m = self.e.generators[p.start].identity();
        for &a in &p.arrows {
            m = m.compose(&self.arrow_maps[a]);
        }
        m
    }

    /// `F(T)` with its right `Γ`-action.
    pub fn functor_module(&self, f: &FpFunctor) -> Result<Module> {
        let alg = &self.e.alg;
        let values: Vec<Value> = self.e.generators.iter().map(|g| f.value(alg, g)).collect();
        let dims = values.iter().map(Value::dim).collect();
        let maps = self
            .gamma
            .quiver
            .arrows
            .iter()
            .zip(&self.arrow_maps)
            .map(|(a, phi)| {
                let (j, i) = (a.source, a.target);
                let cols: Vec<Matrix> =
                    values[j].reps.iter().map(|h| Matrix::column(alg.field, values[i].class_of(&h.compose(phi)))).collect();
                let m = Matrix::hstack(alg.field, values[i].dim(), &cols.iter().collect::<Vec<_>>());
                if cols.is_empty() {
                    Matrix::zeros(alg.field, values[i].dim(), 0)
                } else {
                    m
                }
            })
            .collect();
        Module::new(&self.gamma, dims, maps)
    }

    pub fn map_module(&self, a: &FunctorMap) -> Result<ModuleMap> {
        let alg = &self.e.alg;
        let src = self.functor_module(&a.source)?;
        let tgt = self.functor_module(&a.target)?;
        let comps = self
            .e
            .generators
            .iter()
            .map(|g| {
                let vs = a.source.value(alg, g);
                let vt = a.target.value(alg, g);
                let cols: Vec<Matrix> = vs.reps.iter().map(|h| Matrix::column(alg.field, vt.class_of(&a.top.compose(h)))).collect();
                if cols.is_empty() {
                    Matrix::zeros(alg.field, vt.dim(), 0)
                } else {
                    Matrix::hstack(alg.field, vt.dim(), &cols.iter().collect::<Vec<_>>())
                }
            })
            .collect();
        ModuleMap::new(&self.gamma, &src, &tgt, comps)
    }

    /// A presentation in `E` of a `Γ`-module, from two projective covers.
    pub fn module_functor(&self, x: &Module) -> Result<FpFunctor> {
        let g = &self.gamma;
        let (v0, p0, eps0) = projective_cover_parts(g, x);
        let (k, kinc) = kernel(g, &eps0);
        let (v1, p1, eps1) = projective_cover_parts(g, &k);
        let d = kinc.compose(&eps1);
        let top = self.e_map_between(&v1, &p1, &v0, &p0, &d);
        Ok(FpFunctor { pres: top })
    }

    /// The `E`-map behind a `Γ`-map between sums of indecomposable projectives.
    pub fn e_map_between(
        &self,
        vs: &[usize],
        ps: &crate::module::DirectSum,
        ws: &[usize],
        pt: &crate::module::DirectSum,
        d: &ModuleMap,
    ) -> ModuleMap {
        let alg = &self.e.alg;
        let gens = &self.e.generators;
        let sources: Vec<Module> = vs.iter().map(|&v| gens[v].clone()).collect();
        let targets: Vec<Module> = ws.iter().map(|&w| gens[w].clone()).collect();
        let blocks: Vec<Vec<ModuleMap>> = ws
            .iter()
            .enumerate()
            .map(|(t, &w)| {
                vs.iter()
                    .enumerate()
                    .map(|(s, &v)| {
                        let block = pt.proj[t].compose(d).compose(&ps.incl[s]);
                        let trivial = self.gamma.basis_between(v, v).iter().position(|&b| self.gamma.basis[b].is_empty()).expect("trivial path");
                        let col = block.comps[v].select_cols(&[trivial]);
                        let paths = self.gamma.basis_between(w, v);
                        let mut m = ModuleMap::zero(&gens[v], &gens[w]);
                        for (r, &b) in paths.iter().enumerate() {
                            let c = col.get(r, 0);
                            if !c.is_zero() {
                                m = m.add(&self.path_map(&self.gamma.basis[b]).scale(c));
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        if sources.is_empty() || targets.is_empty() {
            let s = direct_sum(alg, &sources).module;
            let t = direct_sum(alg, &targets).module;
            return ModuleMap::zero(&s, &t);
        }
        ModuleMap::from_blocks(alg, &sources, &targets, &blocks)
    }

    pub fn is_iso(&self, f: &FpFunctor, g: &FpFunctor) -> Result<bool> {
        is_isomorphic(&self.gamma, &self.functor_module(f)?, &self.functor_module(g)?)
    }

    pub fn iso(&self, f: &FpFunctor, g: &FpFunctor) -> Result<Option<ModuleMap>> {
        find_iso(&self.gamma, &self.functor_module(f)?, &self.functor_module(g)?)
    }

    /// Kernel and cokernel of a transformation, as functors.
    pub fn kernel_cokernel(&self, a: &FunctorMap) -> Result<(FpFunctor, FpFunctor)> {
        let m = self.map_module(a)?;
        let k = kernel(&self.gamma, &m).0;
        let c = cokernel(&self.gamma, &m).0;
        Ok((self.module_functor(&k)?, self.module_functor(&c)?))
    }
}

/// Every element of `F(A)` dies after some `E`-deflation onto `A`; witnesses are one deflation per generator.
pub fn is_effaceable(e: &ExactSubcat, f: &FpFunctor) -> Result<Verdict<Vec<ModuleMap>>> {
    let alg = &e.alg;
    if e.structure == Structure::Split {
        return Ok(if f.is_zero(e) {
            Verdict::Yes(e.generators.iter().map(Module::identity).collect())
        } else {
            Verdict::No("deflations split, so only the zero functor is effaceable".into())
        });
    }
    let mut witnesses = Vec::new();
    let mut unknown = None;
    for (j, g) in e.generators.iter().enumerate() {
        let v = f.value(alg, g);
        let mut p = g.identity();
        for h in &v.reps {
            match search_killing_deflation(e, g, h, &f.pres)? {
                Verdict::Yes(q) => p = refine(alg, &p, &q),
                Verdict::No(r) => return Ok(Verdict::No(format!("an element of F(G{j}) survives: {r}"))),
                Verdict::Unknown(r) => {
                    unknown.get_or_insert(format!("generator {j}: {r}"));
                }
            }
        }
        witnesses.push(p);
    }
    Ok(match unknown {
        Some(r) => Verdict::Unknown(r),
        None => Verdict::Yes(witnesses),
    })
}

/// A transformation is inverted in `mod E / eff E` when its kernel and cokernel are effaceable.
pub fn fraction_invertible(tr: &Transport, a: &FunctorMap) -> Result<Verdict<()>> {
    let (k, c) = tr.kernel_cokernel(a)?;
    let vk = is_effaceable(&tr.e, &k)?.forget();
    let vc = is_effaceable(&tr.e, &c)?.forget();
    Ok(crate::status::all_of([vk, vc]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// Admits an `Ext_E`-resolution.
    R,
    /// Admits a bounded one.
    Rb,
    /// Admits one vanishing below degree `−(n+1)`.
    Rn(usize),
    /// Any finitely presented functor.
    Qlcat,
}

/// An `Ext_E`-resolution of `F` built from minimal weak kernels, with the reason it stopped.
#[derive(Clone, Debug)]
pub struct WeakKernelResolution {
    pub complex: Complex,
    pub outcome: ResolutionOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolutionOutcome {
    /// The last differential is a monomorphism in `E`.
    Bounded,
    /// A kernel repeated up to isomorphism, so the construction never stops.
    Periodic { first: i32, again: i32 },
    /// Depth exhausted.
    Truncated(usize),
}

/// `… → X⁻² → X⁻¹ –f→ X⁰`, each differential a minimal right approximation of the previous kernel.
pub fn weak_kernel_resolution(e: &ExactSubcat, f: &FpFunctor, depth: usize) -> Result<WeakKernelResolution> {
    let alg = &e.alg;
    let mut diffs = vec![f.pres.clone()];
    let mut kernels: Vec<Module> = Vec::new();
    let outcome = loop {
        let d = diffs.last().expect("nonempty").clone();
        if e.is_mono_in_e(&d) {
            break ResolutionOutcome::Bounded;
        }
        let (k, kinc) = kernel(alg, &d);
        let here = -(diffs.len() as i32);
        if let Some(pos) = kernels.iter().position(|old| is_isomorphic(alg, old, &k).unwrap_or(false)) {
            break ResolutionOutcome::Periodic { first: -(pos as i32) - 1, again: here };
        }
        kernels.push(k.clone());
        if diffs.len() > depth {
            break ResolutionOutcome::Truncated(depth);
        }
        let approx = minimal_right_approximation(e, &k)?;
        diffs.push(kinc.compose(&approx));
    };
    let mut ds: Vec<ModuleMap> = diffs.into_iter().rev().collect();
    if ds.len() > 1 && ds[0].source.is_zero() {
        ds.remove(0);
    }
    let lo = -(ds.len() as i32);
    let mut terms: Vec<Module> = ds.iter().map(|d| d.source.clone()).collect();
    terms.push(f.pres.target.clone());
    let complex = Complex::new(alg, lo, terms, ds)?;
    Ok(WeakKernelResolution { complex, outcome })
}

/// Membership of `F` in the completions, with a resolution witnessing `Yes` where one is needed.
pub fn membership_completion(e: &ExactSubcat, f: &FpFunctor, which: Completion, depth: usize) -> Result<Verdict<Complex>> {
    let res = weak_kernel_resolution(e, f, depth)?;
    let lo = res.complex.lo;
    Ok(match which {
        Completion::Qlcat | Completion::R => Verdict::Yes(res.complex),
        Completion::Rb | Completion::Rn(_) => match (&res.outcome, which) {
            (ResolutionOutcome::Bounded, Completion::Rn(n)) if lo < -(n as i32) - 1 => {
                if e.structure == Structure::Split {
                    Verdict::No(format!("the minimal resolution reaches degree {lo}"))
                } else {
                    Verdict::Unknown(format!("the weak-kernel resolution reaches degree {lo}"))
                }
            }
            (ResolutionOutcome::Bounded, _) => Verdict::Yes(res.complex),
            (ResolutionOutcome::Periodic { first, again }, _) => {
                let msg = format!("kernels in degrees {first} and {again} agree, so weak kernels never stop");
                if e.structure == Structure::Split {
                    Verdict::No(msg)
                } else {
                    Verdict::Unknown(msg)
                }
            }
            (ResolutionOutcome::Truncated(d), _) => Verdict::Unknown(format!("no bounded resolution up to depth {d}")),
        },
    })
}

/// The oracle for split structures: finite projective dimension over `Γ`.
pub fn transported_projective_dimension(tr: &Transport, f: &FpFunctor, bound: usize) -> Result<Option<usize>> {
    Ok(projective_dimension(&tr.gamma, &tr.functor_module(f)?, bound))
}

/// Combination `Σ cᵢ fᵢ` of maps with given sources and targets.
pub fn combination(source: &Module, target: &Module, maps: &[ModuleMap], coeffs: &[Scalar]) -> ModuleMap {
    combine(source, target, maps, coeffs)
}

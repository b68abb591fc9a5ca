//! Per-degree acyclicity of `L –f→ M –g→ N` relative to an exact subcategory.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{cone, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exact::{coefficient_patterns, patterns_exhaustive, split_epi_section, split_mono_retraction, ExactSubcat, Structure};
use crate::module::{
    combine, direct_sum, ext1, hom_basis, image, image_within, is_exact_at, kernel, lift_along_mono, lift_through,
    maps_matrix, projective_cover, pullback, span_rank, cokernel, Module, ModuleMap,
};
use crate::quiver::PathAlgebra;
use crate::status::Verdict;

/// `L ↠ K ↣ M ↠ C ↣ N`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub k: Module,
    pub p: ModuleMap,
    pub i: ModuleMap,
    pub c: Module,
    pub q: ModuleMap,
    pub j: ModuleMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtTier {
    /// Read off an `E`-acyclic factorization.
    FromFactorization,
    /// Trivial deflations suffice.
    FromHom,
    /// Projective covers, valid because `E` is resolving.
    Resolving,
    /// Bounded search among extensions.
    Search,
}

/// One deflation `p_G: B_G ↠ G` per generator such that every `z: G → M` with `g z = 0`
/// satisfies `z p_G ∈ f ∘ Hom(B_G, L)`.
#[derive(Clone, Debug)]
pub struct ExtWitness {
    pub tier: ExtTier,
    pub deflations: Vec<ModuleMap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    Auto,
    /// Skips every shortcut and runs the bounded search.
    ForceSearch,
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub degree: i32,
    pub split: Verdict<Factorization>,
    pub e_acyclic: Verdict<Factorization>,
    pub left_hom: Verdict<()>,
    pub left_ext: Verdict<ExtWitness>,
    pub right_hom: Verdict<()>,
    pub right_ext: Verdict<ExtWitness>,
}

pub const FLAG_NAMES: [&str; 6] = ["split", "e_acyclic", "left_hom", "left_ext", "right_hom", "right_ext"];

impl DegreeReport {
    pub fn flags(&self) -> [Verdict<()>; 6] {
        [
            self.split.forget(),
            self.e_acyclic.forget(),
            self.left_hom.forget(),
            self.left_ext.forget(),
            self.right_hom.forget(),
            self.right_ext.forget(),
        ]
    }

    /// The first implication `a ⇒ b` of the lattice contradicted by a `Yes`/`No` pair.
    pub fn lattice_violation(&self) -> Option<(&'static str, &'static str)> {
        const EDGES: [(usize, usize); 7] = [(0, 1), (1, 3), (0, 2), (2, 3), (1, 5), (0, 4), (4, 5)];
        let f = self.flags();
        EDGES
            .iter()
            .find(|&&(a, b)| f[a].is_yes() && f[b].is_no())
            .map(|&(a, b)| (FLAG_NAMES[a], FLAG_NAMES[b]))
    }
}

/// `Z(A) = {a: A → M | g a = 0}` together with the part not reached by `f ∘ Hom(A, L)`.
#[derive(Clone, Debug)]
pub struct Cycles {
    pub z: Vec<ModuleMap>,
    pub obstructions: Vec<ModuleMap>,
}

pub fn cycles(alg: &PathAlgebra, a: &Module, f: &ModuleMap, g: &ModuleMap) -> Cycles {
    let h = hom_basis(alg, a, &f.target);
    let z = if h.is_empty() {
        Vec::new()
    } else {
        let images: Vec<ModuleMap> = h.iter().map(|x| g.compose(x)).collect();
        let len = images[0].flatten().len();
        let k = maps_matrix(alg.field, len, &images).kernel_basis();
        (0..k.cols())
            .map(|c| {
                let coeffs: Vec<_> = (0..k.rows()).map(|r| k.get(r, c).clone()).collect();
                combine(a, &f.target, &h, &coeffs)
            })
            .collect()
    };
    let mut span: Vec<ModuleMap> = hom_basis(alg, a, &f.source).iter().map(|x| f.compose(x)).collect();
    let mut rank = span_rank(&span);
    let mut obstructions = Vec::new();
    for zi in &z {
        span.push(zi.clone());
        let r = span_rank(&span);
        if r > rank {
            rank = r;
            obstructions.push(zi.clone());
        } else {
            span.pop();
        }
    }
    Cycles { z, obstructions }
}

/// The factorization through `E`-conflations, or through split ones when `split` is set.
pub fn factorization(e: &ExactSubcat, f: &ModuleMap, g: &ModuleMap, split: bool) -> Result<Verdict<Factorization>> {
    let alg = &e.alg;
    if !g.compose(f).is_zero() {
        return Ok(Verdict::No("g ∘ f is nonzero".into()));
    }
    if !is_exact_at(f, g) {
        return Ok(Verdict::No("not exact in the ambient module category".into()));
    }
    let (k, i, p) = image(alg, f);
    let (c, j, q) = image(alg, g);
    let fact = Factorization { k, p, i, c, q, j };
    if split || e.structure == Structure::Split {
        if split_epi_section(alg, &fact.p).is_none() {
            return Ok(Verdict::No("L → im f does not split".into()));
        }
        if split_mono_retraction(alg, &fact.i).is_none() {
            return Ok(Verdict::No("im f → M does not split".into()));
        }
        if split_mono_retraction(alg, &fact.j).is_none() {
            return Ok(Verdict::No("im g → N does not split".into()));
        }
        return Ok(Verdict::Yes(fact));
    }
    let checks: [(&str, Module); 4] = [
        ("im f", fact.k.clone()),
        ("im g", fact.c.clone()),
        ("ker f", kernel(alg, f).0),
        ("coker g", cokernel(alg, g).0),
    ];
    for (name, m) in checks {
        if !e.contains(&m)? {
            return Ok(Verdict::No(format!("{name} is not in E")));
        }
    }
    Ok(Verdict::Yes(fact))
}

/// Left Hom-acyclicity: complete linear algebra over the generators.
pub fn left_hom(e: &ExactSubcat, f: &ModuleMap, g: &ModuleMap) -> (Verdict<()>, Vec<Cycles>) {
    let cyc: Vec<Cycles> = e.generators.iter().map(|a| cycles(&e.alg, a, f, g)).collect();
    let bad = cyc.iter().position(|c| !c.obstructions.is_empty());
    let v = match bad {
        Some(j) => Verdict::No(format!("a map from generator {j} killed by g does not factor through f")),
        None => Verdict::Yes(()),
    };
    (v, cyc)
}

/// Enumerates multiplicity vectors `m` with `0 < Σ mᵢ dim Gᵢ ≤ bound`.
fn kernel_shapes(dims: &[usize], bound: usize) -> Vec<Vec<usize>> {
    fn go(dims: &[usize], k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == dims.len() {
            if cur.iter().any(|&m| m > 0) {
                out.push(cur.clone());
            }
            return;
        }
        let mut m = 0;
        loop {
            cur.push(m);
            go(dims, k + 1, left - m * dims[k], cur, out);
            cur.pop();
            m += 1;
            if dims[k] == 0 || m * dims[k] > left {
                break;
            }
        }
    }
    let mut out = Vec::new();
    go(dims, 0, bound, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().zip(dims).map(|(a, b)| a * b).sum::<usize>(), m.clone()));
    out
}

/// Searches an `E`-deflation `p: B ↠ A` with `h ∘ p ∈ f ∘ Hom(B, M')`, for `h: A → N'`, `f: M' → N'`.
pub fn search_killing_deflation(e: &ExactSubcat, a: &Module, h: &ModuleMap, f: &ModuleMap) -> Result<Verdict<ModuleMap>> {
    let alg = &e.alg;
    if lift_through(alg, f, h).is_some() {
        return Ok(Verdict::Yes(a.identity()));
    }
    if e.structure == Structure::Split {
        return Ok(Verdict::No("deflations split, and the map does not factor".into()));
    }
    if !image_within(h, f) {
        return Ok(Verdict::No("the image is not contained in the image of f".into()));
    }
    if e.is_ext_projective(a) {
        return Ok(Verdict::No("every deflation onto the source splits".into()));
    }
    let bound = e.bounds.kernel_dim_bound.unwrap_or(4 * a.total_dim());
    let dims: Vec<usize> = e.generators.iter().map(Module::total_dim).collect();
    let mut exhaustive = true;
    for m in kernel_shapes(&dims, bound) {
        let k = e.object(&m).module;
        let x = ext1(alg, a, &k);
        if x.dim == 0 {
            continue;
        }
        exhaustive &= patterns_exhaustive(alg.field, x.dim, e.bounds.pattern_cap);
        for coeffs in coefficient_patterns(alg.field, x.dim, e.bounds.pattern_cap).iter().skip(1) {
            let ext = x.extension(alg, coeffs);
            if !e.contains(&ext.middle)? {
                continue;
            }
            if lift_through(alg, f, &h.compose(&ext.proj)).is_some() {
                return Ok(Verdict::Yes(ext.proj));
            }
        }
    }
    let how = if exhaustive { "" } else { ", sampled extension classes" };
    Ok(Verdict::Unknown(format!("no deflation with kernel dimension ≤ {bound}{how}")))
}

/// Refines `p₁: B₁ ↠ A` by pulling back `p₂: B₂ ↠ A`; the result factors through both.
pub fn refine(alg: &PathAlgebra, p1: &ModuleMap, p2: &ModuleMap) -> ModuleMap {
    if p2.is_iso() {
        return p1.clone();
    }
    if p1.is_iso() {
        return p2.clone();
    }
    let (_, _, to_b1) = pullback(alg, p2, p1);
    p1.compose(&to_b1)
}

/// Whether `p` is an `E`-deflation after which every cycle factors through `f`.
pub fn verify_deflation_witness(e: &ExactSubcat, f: &ModuleMap, cyc: &Cycles, p: &ModuleMap) -> Result<bool> {
    if !e.contains(&p.source)? || e.is_deflation(p)?.is_none() {
        return Ok(false);
    }
    Ok(cyc.z.iter().all(|z| lift_through(&e.alg, f, &z.compose(p)).is_some()))
}

pub fn verify_ext_witness(e: &ExactSubcat, f: &ModuleMap, g: &ModuleMap, w: &ExtWitness) -> Result<bool> {
    for (a, p) in e.generators.iter().zip(&w.deflations) {
        if !verify_deflation_witness(e, f, &cycles(&e.alg, a, f, g), p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-sequence context: the subcategory and whether it is resolving in `mod Λ`.
#[derive(Clone, Debug)]
pub struct Side {
    pub e: ExactSubcat,
    pub resolving: bool,
}

impl Side {
    pub fn new(e: ExactSubcat) -> Result<Side> {
        let resolving = is_resolving(&e)?;
        Ok(Side { e, resolving })
    }

    pub fn left_ext(&self, f: &ModuleMap, g: &ModuleMap, fact: &Verdict<Factorization>, policy: Policy) -> Result<Verdict<ExtWitness>> {
        let e = &self.e;
        let alg = &e.alg;
        let (hom, cyc) = left_hom(e, f, g);
        if policy == Policy::Auto {
            if let Verdict::Yes(fa) = fact {
                let deflations = cyc.iter().zip(&e.generators).map(|(c, a)| from_factorization(alg, fa, c, a)).collect();
                return Ok(Verdict::Yes(ExtWitness { tier: ExtTier::FromFactorization, deflations }));
            }
        }
        if hom.is_yes() {
            return Ok(Verdict::Yes(ExtWitness { tier: ExtTier::FromHom, deflations: e.generators.iter().map(Module::identity).collect() }));
        }
        if e.structure == Structure::Split {
            return Ok(Verdict::No("deflations split and the sequence is not left Hom-acyclic".into()));
        }
        for (j, c) in cyc.iter().enumerate() {
            if c.z.iter().any(|z| !image_within(z, f)) {
                return Ok(Verdict::No(format!("a cycle from generator {j} leaves the image of f")));
            }
        }
        if policy == Policy::Auto && self.resolving {
            let mut deflations = Vec::new();
            for (a, c) in e.generators.iter().zip(&cyc) {
                let p = if c.obstructions.is_empty() { a.identity() } else { projective_cover(alg, a).1 };
                deflations.push(p);
            }
            let w = ExtWitness { tier: ExtTier::Resolving, deflations };
            if verify_ext_witness(e, f, g, &w)? {
                return Ok(Verdict::Yes(w));
            }
        }
        if policy == Policy::Auto && e.is_mono_in_e(f) {
            return Ok(Verdict::No("f is a monomorphism in E and the sequence is not left Hom-acyclic".into()));
        }
        let mut deflations = Vec::new();
        let mut unknown: Option<String> = None;
        for (j, (a, c)) in e.generators.iter().zip(&cyc).enumerate() {
            let mut p = a.identity();
            for z in &c.obstructions {
                match search_killing_deflation(e, a, z, f)? {
                    Verdict::Yes(q) => p = refine(alg, &p, &q),
                    Verdict::No(r) => return Ok(Verdict::No(format!("generator {j}: {r}"))),
                    Verdict::Unknown(r) => {
                        unknown.get_or_insert(format!("generator {j}: {r}"));
                    }
                }
            }
            deflations.push(p);
        }
        if let Some(r) = unknown {
            return Ok(Verdict::Unknown(r));
        }
        Ok(Verdict::Yes(ExtWitness { tier: ExtTier::Search, deflations }))
    }
}

/// Pulls `L ↠ K` back along each `z = i ∘ k` in turn.
fn from_factorization(alg: &PathAlgebra, fa: &Factorization, c: &Cycles, a: &Module) -> ModuleMap {
    let mut p = a.identity();
    for z in &c.obstructions {
        let k = lift_along_mono(&fa.i, z).expect("cycles land in im f");
        let (_, _, to_b) = pullback(alg, &fa.p, &k.compose(&p));
        p = p.compose(&to_b);
    }
    p
}

/// `E` resolving in `mod Λ`: induced, containing the projectives, closed under kernels of epimorphisms.
/// The kernel condition is decided exactly when `E` is all of `mod Λ` and sampled otherwise.
pub fn is_resolving(e: &ExactSubcat) -> Result<bool> {
    let alg = &e.alg;
    if e.structure != Structure::Induced {
        return Ok(false);
    }
    for v in 0..alg.vertex_count() {
        if !e.contains(&Module::projective(alg, v))? {
            return Ok(false);
        }
    }
    if alg.relations.is_empty() && alg.quiver.is_dynkin() {
        let all = crate::exact::indecomposables(alg, usize::MAX)?;
        if all.len() == e.generators.len() {
            return Ok(true);
        }
    }
    let n = e.generators.len();
    for s in 1..(1usize << n) {
        let mult: Vec<usize> = (0..n).map(|i| (s >> i) & 1).collect();
        let x = e.object(&mult).module;
        for y in &e.generators {
            let basis = hom_basis(alg, &x, y);
            for c in coefficient_patterns(alg.field, basis.len(), 256) {
                let f = combine(&x, y, &basis, &c);
                if f.is_surjective() && !e.contains(&kernel(alg, &f).0)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Classifies sequences and complexes against `E` and, through duality, its right-handed notions.
#[derive(Clone, Debug)]
pub struct Classifier {
    pub left: Side,
    pub right: Side,
}

impl Classifier {
    pub fn new(e: &ExactSubcat) -> Result<Classifier> {
        Ok(Classifier { left: Side::new(e.clone())?, right: Side::new(e.dual())? })
    }

    pub fn e(&self) -> &ExactSubcat {
        &self.left.e
    }

    pub fn alg(&self) -> &PathAlgebra {
        &self.left.e.alg
    }

    pub fn left_ext(&self, f: &ModuleMap, g: &ModuleMap, policy: Policy) -> Result<Verdict<ExtWitness>> {
        let fact = factorization(self.e(), f, g, false)?;
        self.left.left_ext(f, g, &fact, policy)
    }

    /// Right Ext-acyclicity, witnessed by inflations over the opposite algebra.
    pub fn right_ext(&self, f: &ModuleMap, g: &ModuleMap, policy: Policy) -> Result<Verdict<ExtWitness>> {
        let (df, dg) = (g.dual(), f.dual());
        let fact = factorization(&self.right.e, &df, &dg, false)?;
        self.right.left_ext(&df, &dg, &fact, policy)
    }

    pub fn sequence(&self, f: &ModuleMap, g: &ModuleMap, degree: i32) -> Result<DegreeReport> {
        let e = self.e();
        for (name, m) in [("source", &f.source), ("middle", &f.target), ("target", &g.target)] {
            if !e.contains(m)? {
                return Err(Error::NotMember(format!("{name} term in degree {degree}")));
            }
        }
        let split = factorization(e, f, g, true)?;
        let e_acyclic = match (&split, e.structure) {
            (_, Structure::Split) => split.clone(),
            _ => factorization(e, f, g, false)?,
        };
        let left_hom = left_hom(e, f, g).0;
        let left_ext = self.left.left_ext(f, g, &e_acyclic, Policy::Auto)?;
        let (df, dg) = (g.dual(), f.dual());
        let de = &self.right.e;
        let right_hom = left_hom_only(de, &df, &dg);
        let dfact = match &e_acyclic {
            Verdict::Yes(_) => factorization(de, &df, &dg, false)?,
            other => other.clone().map(|_| unreachable!()),
        };
        let right_ext = self.right.left_ext(&df, &dg, &dfact, Policy::Auto)?;
        Ok(DegreeReport { degree, split, e_acyclic, left_hom, left_ext, right_hom, right_ext })
    }

    pub fn classify(&self, x: &Complex, n: i32) -> Result<DegreeReport> {
        self.sequence(&x.diff(n - 1), &x.diff(n), n)
    }

    /// One report per degree of the support, widened by one on each side.
    pub fn report(&self, x: &Complex) -> Result<Vec<DegreeReport>> {
        match x.support() {
            None => Ok(Vec::new()),
            Some((a, b)) => (a - 1..=b + 1).map(|n| self.classify(x, n)).collect(),
        }
    }

    /// `E`-acyclic in every degree.
    pub fn is_acyclic(&self, x: &Complex) -> Result<bool> {
        let Some((a, b)) = x.support() else { return Ok(true) };
        for n in a..=b {
            if !factorization(self.e(), &x.diff(n - 1), &x.diff(n), false)?.is_yes() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the cone is `E`-acyclic.
    pub fn is_quasi_iso(&self, f: &ChainMap) -> Result<bool> {
        self.is_acyclic(&cone(self.alg(), f))
    }
}

fn left_hom_only(e: &ExactSubcat, f: &ModuleMap, g: &ModuleMap) -> Verdict<()> {
    left_hom(e, f, g).0
}

/// Lifts `a: A → M` with `g a = 0` through `f` after a deflation, using a witness on the generators.
pub fn ext_lift(e: &ExactSubcat, w: &ExtWitness, f: &ModuleMap, a: &ModuleMap) -> Result<Option<(ModuleMap, ModuleMap)>> {
    let alg = &e.alg;
    let Some(mem) = e.membership_iso(&a.source)? else {
        return Err(Error::NotMember("source of the test map".into()));
    };
    let target = e.object(&mem.mult);
    let inv = mem.iso.inverse().expect("membership iso");
    let mut slots = Vec::new();
    for (j, &m) in mem.mult.iter().enumerate() {
        for _ in 0..m {
            slots.push(j);
        }
    }
    let mut defl = Vec::new();
    let mut lifts = Vec::new();
    for (s, &j) in slots.iter().enumerate() {
        let a_s = a.compose(&inv).compose(&target.incl[s]);
        let p = &w.deflations[j];
        let Some(h) = lift_through(alg, f, &a_s.compose(p)) else { return Ok(None) };
        defl.push(target.incl[s].compose(p));
        lifts.push(h);
    }
    let sources: Vec<Module> = w_sources(&slots, w);
    let sum = direct_sum(alg, &sources);
    let mut p = ModuleMap::zero(&sum.module, &a.source);
    let mut h = ModuleMap::zero(&sum.module, &f.source);
    for (s, pr) in sum.proj.iter().enumerate() {
        p = p.add(&inv.compose(&defl[s]).compose(pr));
        h = h.add(&lifts[s].compose(pr));
    }
    Ok(Some((p, h)))
}

fn w_sources(slots: &[usize], w: &ExtWitness) -> Vec<Module> {
    slots.iter().map(|&j| w.deflations[j].source.clone()).collect()
}

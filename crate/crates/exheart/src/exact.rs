//! Additive subcategories `add(T)` of `mod Λ` with the split or the induced exact structure.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::module::{
    cokernel, combine, decompose_with_maps, direct_sum, ext1, hom_basis, indecomposable_iso, is_short_exact, kernel,
    power_sum, solve_in_span, span_rank, DirectSum, Module, ModuleMap,
};
use crate::quiver::PathAlgebra;
use crate::status::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Split,
    Induced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Kernel dimension bound for deflation searches; `None` means `4 × dim A`.
    pub kernel_dim_bound: Option<usize>,
    pub multiplicity_bound: usize,
    /// Maximum number of coefficient patterns tried per Hom space.
    pub pattern_cap: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { kernel_dim_bound: None, multiplicity_bound: 2, pattern_cap: 4096 }
    }
}

#[derive(Clone, Debug)]
pub struct ExactSubcat {
    pub alg: PathAlgebra,
    pub generators: Vec<Module>,
    pub structure: Structure,
    pub bounds: SearchBounds,
}

/// A kernel-cokernel pair `i`, `p`.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub i: ModuleMap,
    pub p: ModuleMap,
}

#[derive(Clone, Debug)]
pub enum ConflationCertificate {
    NotConflation(String),
    Conflation(Conflation),
}

impl ConflationCertificate {
    pub fn is_conflation(&self) -> bool {
        matches!(self, ConflationCertificate::Conflation(_))
    }
}

/// `x ≅ ⊕ generatorsᵢ^{multᵢ}` with an explicit isomorphism.
#[derive(Clone, Debug)]
pub struct Membership {
    pub mult: Vec<usize>,
    pub iso: ModuleMap,
}

fn fits(p: u64, d: usize, cap: usize) -> bool {
    u32::try_from(d).ok().and_then(|d| p.checked_pow(d)).is_some_and(|n| n <= cap as u64)
}

/// Coefficient vectors of length `d`: every vector over a small prime field,
/// else patterns in `{0, 1, −1}`; at most `cap` of them, zero vector first.
pub fn coefficient_patterns(field: FieldSpec, d: usize, cap: usize) -> Vec<Vec<Scalar>> {
    let digits: Vec<Scalar> = match field.size() {
        Some(p) if fits(p, d, cap) => field.elements().expect("finite"),
        _ => vec![field.zero(), field.one(), field.from_i64(-1)],
    };
    let base = digits.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        out.push(idx.iter().map(|&i| digits[i].clone()).collect());
        if out.len() >= cap {
            break;
        }
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < base {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    out
}

/// Whether the pattern enumeration covers the whole Hom space.
pub fn patterns_exhaustive(field: FieldSpec, d: usize, cap: usize) -> bool {
    match field.size() {
        Some(p) => fits(p, d, cap),
        None => d == 0,
    }
}

pub fn split_mono_retraction(alg: &PathAlgebra, f: &ModuleMap) -> Option<ModuleMap> {
    let basis = hom_basis(alg, &f.target, &f.source);
    let images: Vec<ModuleMap> = basis.iter().map(|r| r.compose(f)).collect();
    let c = solve_in_span(&images, &f.source.identity())?;
    Some(combine(&f.target, &f.source, &basis, &c))
}

pub fn split_epi_section(alg: &PathAlgebra, f: &ModuleMap) -> Option<ModuleMap> {
    let basis = hom_basis(alg, &f.target, &f.source);
    let images: Vec<ModuleMap> = basis.iter().map(|s| f.compose(s)).collect();
    let c = solve_in_span(&images, &f.target.identity())?;
    Some(combine(&f.target, &f.source, &basis, &c))
}

impl ExactSubcat {
    pub fn new(alg: &PathAlgebra, generators: Vec<Module>, structure: Structure) -> Result<ExactSubcat> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() || decompose_with_maps(alg, g)?.len() != 1 {
                return Err(Error::Input(format!("generator {i} is not indecomposable")));
            }
            for h in &generators[..i] {
                if indecomposable_iso(alg, g, h).is_some() {
                    return Err(Error::Input(format!("generator {i} repeats an earlier one")));
                }
            }
        }
        Ok(ExactSubcat { alg: alg.clone(), generators, structure, bounds: SearchBounds::default() })
    }

    pub fn with_bounds(mut self, bounds: SearchBounds) -> Self {
        self.bounds = bounds;
        self
    }

    /// `mod Λ` itself, for representation-finite algebras.
    pub fn module_category(alg: &PathAlgebra, dim_bound: usize) -> Result<ExactSubcat> {
        let gens = indecomposables(alg, dim_bound)?;
        ExactSubcat::new(alg, gens, Structure::Induced)
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field
    }

    /// `T`, the direct sum of the generators.
    pub fn t(&self) -> DirectSum {
        direct_sum(&self.alg, &self.generators)
    }

    pub fn object(&self, mult: &[usize]) -> DirectSum {
        power_sum(&self.alg, &self.generators, mult)
    }

    pub fn membership_iso(&self, x: &Module) -> Result<Option<Membership>> {
        let alg = &self.alg;
        let parts = decompose_with_maps(alg, x)?;
        let mut slots: Vec<Vec<(usize, ModuleMap)>> = vec![Vec::new(); self.generators.len()];
        for (k, s) in parts.iter().enumerate() {
            let hit = self.generators.iter().enumerate().find_map(|(j, g)| indecomposable_iso(alg, &s.module, g).map(|iso| (j, iso)));
            match hit {
                Some((j, iso)) => slots[j].push((k, iso)),
                None => return Ok(None),
            }
        }
        let mult: Vec<usize> = slots.iter().map(Vec::len).collect();
        let target = self.object(&mult);
        let mut iso = ModuleMap::zero(x, &target.module);
        let mut slot = 0;
        for list in &slots {
            for (k, phi) in list {
                iso = iso.add(&target.incl[slot].compose(phi).compose(&parts[*k].proj));
                slot += 1;
            }
        }
        Ok(Some(Membership { mult, iso }))
    }

    pub fn membership(&self, x: &Module) -> Result<Option<Vec<usize>>> {
        Ok(self.membership_iso(x)?.map(|m| m.mult))
    }

    pub fn contains(&self, x: &Module) -> Result<bool> {
        Ok(self.membership(x)?.is_some())
    }

    /// `Hom(T, f)` injective.
    pub fn is_mono_in_e(&self, f: &ModuleMap) -> bool {
        self.generators.iter().all(|g| {
            let basis = hom_basis(&self.alg, g, &f.source);
            let images: Vec<ModuleMap> = basis.iter().map(|h| f.compose(h)).collect();
            span_rank(&images) == basis.len()
        })
    }

    /// `Hom(f, T)` injective.
    pub fn is_epi_in_e(&self, f: &ModuleMap) -> bool {
        self.generators.iter().all(|g| {
            let basis = hom_basis(&self.alg, &f.target, g);
            let images: Vec<ModuleMap> = basis.iter().map(|h| h.compose(f)).collect();
            span_rank(&images) == basis.len()
        })
    }

    /// Witness conflation `f ↣ Y ↠ coker f` when `f` is an inflation.
    pub fn is_inflation(&self, f: &ModuleMap) -> Result<Option<Conflation>> {
        let ok = match self.structure {
            Structure::Split => split_mono_retraction(&self.alg, f).is_some(),
            Structure::Induced => f.is_injective(),
        };
        if !ok {
            return Ok(None);
        }
        let (c, p) = cokernel(&self.alg, f);
        if self.structure == Structure::Induced && !self.contains(&c)? {
            return Ok(None);
        }
        Ok(Some(Conflation { i: f.clone(), p }))
    }

    pub fn is_deflation(&self, f: &ModuleMap) -> Result<Option<Conflation>> {
        let ok = match self.structure {
            Structure::Split => split_epi_section(&self.alg, f).is_some(),
            Structure::Induced => f.is_surjective(),
        };
        if !ok {
            return Ok(None);
        }
        let (k, i) = kernel(&self.alg, f);
        if self.structure == Structure::Induced && !self.contains(&k)? {
            return Ok(None);
        }
        Ok(Some(Conflation { i, p: f.clone() }))
    }

    pub fn is_conflation(&self, i: &ModuleMap, p: &ModuleMap) -> Result<ConflationCertificate> {
        for (name, m) in [("kernel", &i.source), ("middle", &i.target), ("cokernel", &p.target)] {
            if !self.contains(m)? {
                return Err(Error::NotMember(format!("{name} term")));
            }
        }
        if !is_short_exact(i, p) {
            return Ok(ConflationCertificate::NotConflation("not short exact in mod Λ".into()));
        }
        if self.structure == Structure::Split && split_epi_section(&self.alg, p).is_none() {
            return Ok(ConflationCertificate::NotConflation("the epimorphism does not split".into()));
        }
        Ok(ConflationCertificate::Conflation(Conflation { i: i.clone(), p: p.clone() }))
    }

    /// Objects `⊕ Gᵢ^{mᵢ}` with `0 < Σ mᵢ` and every `mᵢ ≤ bound`, in lexicographic order of `m`.
    pub fn objects_up_to(&self, bound: usize) -> Vec<(Vec<usize>, DirectSum)> {
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut m = vec![0usize; n];
        loop {
            let mut k = n;
            while k > 0 {
                k -= 1;
                m[k] += 1;
                if m[k] <= bound {
                    break;
                }
                m[k] = 0;
                if k == 0 {
                    return out;
                }
            }
            if n == 0 {
                return out;
            }
            out.push((m.clone(), self.object(&m)));
        }
    }

    /// Every `E`-deflation onto `a` splits when `Ext¹(a, G) = 0` for all generators `G`.
    pub fn is_ext_projective(&self, a: &Module) -> bool {
        self.structure == Structure::Split || self.generators.iter().all(|g| ext1(&self.alg, a, g).dim == 0)
    }

    /// All of `mod Λ` with the induced structure, decided for representation-finite hereditary `Λ`.
    pub fn is_module_category(&self) -> Result<bool> {
        let alg = &self.alg;
        if self.structure != Structure::Induced || !alg.is_hereditary_presentation() || !alg.quiver.is_dynkin() {
            return Ok(false);
        }
        for m in indecomposables(alg, usize::MAX)? {
            if !self.contains(&m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual subcategory of `mod Λ^op`.
    pub fn dual(&self) -> ExactSubcat {
        ExactSubcat {
            alg: self.alg.opposite(),
            generators: self.generators.iter().map(Module::dual).collect(),
            structure: self.structure,
            bounds: self.bounds,
        }
    }

    /// Enumerates maps `x → y` as coefficient patterns on a Hom basis.
    pub fn sample_maps(&self, x: &Module, y: &Module) -> (Vec<ModuleMap>, bool) {
        let basis = hom_basis(&self.alg, x, y);
        let cap = self.bounds.pattern_cap;
        let exhaustive = patterns_exhaustive(self.field(), basis.len(), cap);
        let maps = coefficient_patterns(self.field(), basis.len(), cap)
            .iter()
            .map(|c| combine(x, y, &basis, c))
            .collect();
        (maps, exhaustive)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxNegCondition {
    MonoNotInflation,
    EpiNotDeflation,
}

#[derive(Clone, Debug)]
pub enum MaxNegVerdict {
    VerifiedUpToBound(usize),
    Counterexample { map: ModuleMap, condition: MaxNegCondition, source_mult: Vec<usize>, target_mult: Vec<usize> },
}

impl MaxNegVerdict {
    pub fn verified(&self) -> bool {
        matches!(self, MaxNegVerdict::VerifiedUpToBound(_))
    }
}

/// Every mono in `E` an inflation and every epi in `E` a deflation, over objects with multiplicities `≤ bound`.
pub fn check_maximally_nonnegative(e: &ExactSubcat, bound: usize) -> Result<MaxNegVerdict> {
    scan_monos_epis(e, bound, true, true)
}

/// The mono and epi halves of [`check_maximally_nonnegative`], selectable.
pub fn scan_monos_epis(e: &ExactSubcat, bound: usize, monos: bool, epis: bool) -> Result<MaxNegVerdict> {
    // In an abelian category monos are kernels and epis are cokernels.
    if e.is_module_category()? {
        return Ok(MaxNegVerdict::VerifiedUpToBound(bound));
    }
    let objects = e.objects_up_to(bound);
    for (mx, x) in &objects {
        for (my, y) in &objects {
            let (maps, _) = e.sample_maps(&x.module, &y.module);
            for f in maps {
                if epis && e.is_epi_in_e(&f) && e.is_deflation(&f)?.is_none() {
                    return Ok(MaxNegVerdict::Counterexample {
                        map: f,
                        condition: MaxNegCondition::EpiNotDeflation,
                        source_mult: mx.clone(),
                        target_mult: my.clone(),
                    });
                }
                if monos && e.is_mono_in_e(&f) && e.is_inflation(&f)?.is_none() {
                    return Ok(MaxNegVerdict::Counterexample {
                        map: f,
                        condition: MaxNegCondition::MonoNotInflation,
                        source_mult: mx.clone(),
                        target_mult: my.clone(),
                    });
                }
            }
        }
    }
    Ok(MaxNegVerdict::VerifiedUpToBound(bound))
}

#[derive(Clone, Debug)]
pub struct ResolvingReport {
    /// Deflations from `E` onto every generator of the ambient category.
    pub r1: Verdict<()>,
    /// Kernels of ambient deflations between objects of `E` stay in `E`.
    pub r2: Verdict<()>,
}

impl ResolvingReport {
    pub fn holds(&self) -> bool {
        self.r1.is_yes() && self.r2.is_yes()
    }
}

/// The canonical map `⊕ Gᵢ^{dim Hom(Gᵢ, m)} → m` from the generators of `e`.
pub fn right_approximation(e: &ExactSubcat, m: &Module) -> ModuleMap {
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    for g in &e.generators {
        for h in hom_basis(&e.alg, g, m) {
            parts.push(g.clone());
            maps.push(h);
        }
    }
    let sum = direct_sum(&e.alg, &parts);
    let mut total = ModuleMap::zero(&sum.module, m);
    for (h, p) in maps.iter().zip(&sum.proj) {
        total = total.add(&h.compose(p));
    }
    total
}

pub fn check_resolving(e: &ExactSubcat, ambient: &ExactSubcat, bound: usize) -> Result<ResolvingReport> {
    let mut r1 = Verdict::Yes(());
    for (j, m) in ambient.generators.iter().enumerate() {
        let approx = right_approximation(e, m);
        if ambient.is_deflation(&approx)?.is_none() {
            r1 = Verdict::No(format!("no deflation from E onto ambient generator {j}"));
            break;
        }
    }
    let mut r2 = Verdict::Yes(());
    'outer: for (mx, x) in e.objects_up_to(bound) {
        for (my, y) in e.objects_up_to(bound) {
            let (maps, _) = e.sample_maps(&x.module, &y.module);
            for f in maps {
                if ambient.is_deflation(&f)?.is_some() {
                    let (k, _) = kernel(&e.alg, &f);
                    if !e.contains(&k)? {
                        r2 = Verdict::No(format!("deflation {mx:?} -> {my:?} has kernel outside E"));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(ResolvingReport { r1, r2 })
}

/// Indecomposables of total dimension `≤ dim_bound`, closed under extensions with simples.
pub fn indecomposables(alg: &PathAlgebra, dim_bound: usize) -> Result<Vec<Module>> {
    let n = alg.vertex_count();
    let mut found: Vec<Module> = (0..n).map(|v| Module::simple(alg, v)).collect();
    let simples = found.clone();
    let mut i = 0;
    while i < found.len() {
        let m = found[i].clone();
        for s in &simples {
            for (x, y) in [(&m, s), (s, &m)] {
                if x.total_dim() + y.total_dim() > dim_bound {
                    continue;
                }
                let e = ext1(alg, x, y);
                for c in coefficient_patterns(alg.field, e.dim, 64).iter().skip(1) {
                    let ext = e.extension(alg, c);
                    for part in decompose_with_maps(alg, &ext.middle)? {
                        if !found.iter().any(|f| indecomposable_iso(alg, f, &part.module).is_some()) {
                            found.push(part.module);
                        }
                    }
                }
            }
        }
        i += 1;
        if found.len() > 500 {
            return Err(Error::Unsupported("more than 500 indecomposables below the dimension bound".into()));
        }
    }
    found.sort_by(|a, b| a.total_dim().cmp(&b.total_dim()).then(b.dims.cmp(&a.dims)));
    Ok(found)
}

/// `P3`, `I1`, `S2` style label by comparison with the standard modules, else the dimension vector.
pub fn standard_name(alg: &PathAlgebra, m: &Module) -> String {
    let n = alg.vertex_count();
    let label = |v: usize| alg.quiver.vertices[v].clone();
    for v in 0..n {
        if indecomposable_iso(alg, m, &Module::projective(alg, v)).is_some() {
            return format!("P{}", label(v));
        }
    }
    for v in 0..n {
        if indecomposable_iso(alg, m, &Module::injective(alg, v)).is_some() {
            return format!("I{}", label(v));
        }
    }
    for v in 0..n {
        if indecomposable_iso(alg, m, &Module::simple(alg, v)).is_some() {
            return format!("S{}", label(v));
        }
    }
    let dims: Vec<String> = m.dims.iter().map(|d| format!("{d}")).collect();
    format!("M({})", dims.join(","))
}

/// The unique eigenvalue of a matrix with a single eigenvalue, read off the minimal polynomial
/// of a cyclic vector. Works in every characteristic because the eigenvalue lies in the ground field.
fn unique_eigenvalue(b: &Matrix) -> Option<Scalar> {
    let field = b.field();
    let n = b.rows();
    if n == 0 {
        return None;
    }
    let mut w = Matrix::zeros(field, n, 1);
    w.set(0, 0, field.one());
    let mut krylov = vec![w.clone()];
    loop {
        let next = b.mul(krylov.last().expect("nonempty"));
        let refs: Vec<&Matrix> = krylov.iter().collect();
        let span = Matrix::hstack(field, n, &refs);
        if let Some(c) = span.solve(&next).ok().flatten() {
            let m = krylov.len();
            // q(x) = x^m − Σ c_k x^k = (x^δ − λ)^r
            for k in (0..m).rev() {
                let ck = c.get(k, 0);
                if !ck.is_zero() {
                    let delta = m - k;
                    let r = field.from_i64((m / delta) as i64);
                    return Some(ck.mul(&r.inv()?));
                }
            }
            return Some(field.zero());
        }
        krylov.push(next);
    }
}

impl ExactSubcat {
    /// Non-invertible maps `Gᵢ → Gⱼ`.
    pub fn radical(&self, i: usize, j: usize) -> Result<Vec<ModuleMap>> {
        let (gi, gj) = (&self.generators[i], &self.generators[j]);
        let basis = hom_basis(&self.alg, gi, gj);
        if i != j {
            return Ok(basis);
        }
        let v = gi.dims.iter().position(|&d| d > 0).expect("nonzero generator");
        let id = gi.identity();
        let mut out: Vec<ModuleMap> = Vec::new();
        for b in &basis {
            let lambda = unique_eigenvalue(&b.comps[v])
                .ok_or_else(|| Error::SplittingField(format!("endomorphism of generator {i}")))?;
            let nil = b.sub(&id.scale(&lambda));
            if !nil.is_nilpotent_endo() {
                return Err(Error::SplittingField(format!("End of generator {i} is not split local")));
            }
            out.push(nil);
            if span_rank(&out) < out.len() {
                out.pop();
            }
        }
        Ok(out)
    }

    /// Span of composites `Gᵢ → G_k → Gⱼ` of two radical maps.
    pub fn radical_squared(&self, i: usize, j: usize) -> Result<Vec<ModuleMap>> {
        let mut out: Vec<ModuleMap> = Vec::new();
        for k in 0..self.generators.len() {
            let first = self.radical(i, k)?;
            if first.is_empty() {
                continue;
            }
            for psi in self.radical(k, j)? {
                for phi in &first {
                    out.push(psi.compose(phi));
                    if span_rank(&out) < out.len() {
                        out.pop();
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Minimal right `E`-approximation `⊕ Gᵢ^{cᵢ} → m`: per generator, maps not reached by
/// radical maps followed by maps from other generators.
pub fn minimal_right_approximation(e: &ExactSubcat, m: &Module) -> Result<ModuleMap> {
    let alg = &e.alg;
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    for i in 0..e.generators.len() {
        let gi = &e.generators[i];
        let mut span: Vec<ModuleMap> = Vec::new();
        for k in 0..e.generators.len() {
            let rad = e.radical(i, k)?;
            if rad.is_empty() {
                continue;
            }
            for h in hom_basis(alg, &e.generators[k], m) {
                for r in &rad {
                    span.push(h.compose(r));
                    if span_rank(&span) < span.len() {
                        span.pop();
                    }
                }
            }
        }
        for h in hom_basis(alg, gi, m) {
            span.push(h.clone());
            if span_rank(&span) == span.len() {
                parts.push(gi.clone());
                maps.push(h);
            } else {
                span.pop();
            }
        }
    }
    let sum = direct_sum(alg, &parts);
    let mut total = ModuleMap::zero(&sum.module, m);
    for (h, p) in maps.iter().zip(&sum.proj) {
        total = total.add(&h.compose(p));
    }
    Ok(total)
}

/// Minimal left `E`-approximation `m → ⊕ Gᵢ^{cᵢ}`, by duality.
pub fn minimal_left_approximation(e: &ExactSubcat, m: &Module) -> Result<ModuleMap> {
    Ok(minimal_right_approximation(&e.dual(), &m.dual())?.dual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::tests::{a2, dual_numbers};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    struct A2 {
        alg: PathAlgebra,
        p1: Module,
        p2: Module,
        i2: Module,
    }

    fn setup() -> A2 {
        let alg = a2(q());
        A2 { p1: Module::projective(&alg, 0), p2: Module::projective(&alg, 1), i2: Module::injective(&alg, 1), alg }
    }

    #[test]
    fn a2_indecomposables() {
        let s = setup();
        let all = indecomposables(&s.alg, 6).unwrap();
        assert_eq!(all.len(), 3);
        let names: Vec<String> = all.iter().map(|m| standard_name(&s.alg, m)).collect();
        assert_eq!(names, vec!["P1", "I2", "P2"]);
    }

    #[test]
    fn membership_examples() {
        let s = setup();
        let e = ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        assert_eq!(e.membership(&s.p2).unwrap(), Some(vec![1, 0]));
        assert_eq!(e.membership(&s.p1).unwrap(), None);
        let m = direct_sum(&s.alg, &[s.i2.clone(), s.p2.clone(), s.i2.clone()]).module;
        let mem = e.membership_iso(&m).unwrap().unwrap();
        assert_eq!(mem.mult, vec![1, 2]);
        assert!(mem.iso.is_iso());
    }

    #[test]
    fn conflation_examples() {
        let s = setup();
        let all = ExactSubcat::new(&s.alg, vec![s.p1.clone(), s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        let i = hom_basis(&s.alg, &s.p1, &s.p2).remove(0);
        let p = hom_basis(&s.alg, &s.p2, &s.i2).remove(0);
        assert!(all.is_conflation(&i, &p).unwrap().is_conflation());
        let split = ExactSubcat { structure: Structure::Split, ..all.clone() };
        assert!(!split.is_conflation(&i, &p).unwrap().is_conflation());
        let sum = direct_sum(&s.alg, &[s.p1.clone(), s.i2.clone()]);
        assert!(all.is_conflation(&sum.incl[0], &sum.proj[1]).unwrap().is_conflation());
        assert!(split.is_conflation(&sum.incl[0], &sum.proj[1]).unwrap().is_conflation());
    }

    #[test]
    fn inflation_and_deflation_examples() {
        let s = setup();
        let p = hom_basis(&s.alg, &s.p2, &s.i2).remove(0);
        let inj = ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        assert!(inj.is_deflation(&p).unwrap().is_none());
        assert!(inj.is_epi_in_e(&p));
        let all = ExactSubcat::module_category(&s.alg, 6).unwrap();
        assert!(all.is_deflation(&p).unwrap().is_some());
        let i = hom_basis(&s.alg, &s.p1, &s.p2).remove(0);
        assert!(all.is_mono_in_e(&i));
        assert!(all.is_mono_in_e(&s.p2.identity()) && all.is_epi_in_e(&s.p2.identity()));
        let sum = direct_sum(&s.alg, &[s.p1.clone(), s.i2.clone()]);
        assert!(all.is_inflation(&sum.incl[0]).unwrap().is_some());
    }

    #[test]
    fn dual_numbers_mono_epi() {
        let alg = dual_numbers(q());
        let lam = Module::projective(&alg, 0);
        let e = ExactSubcat::new(&alg, vec![lam.clone()], Structure::Split).unwrap();
        let t = hom_basis(&alg, &lam, &lam).into_iter().find(|f| f.is_nilpotent_endo()).unwrap();
        assert!(!e.is_mono_in_e(&t));
        assert!(!e.is_epi_in_e(&t));
    }

    #[test]
    fn resolving_examples() {
        let s = setup();
        let all = ExactSubcat::module_category(&s.alg, 6).unwrap();
        assert!(check_resolving(&all, &all, 1).unwrap().holds());
        let proj = ExactSubcat::new(&s.alg, vec![s.p1.clone(), s.p2.clone()], Structure::Induced).unwrap();
        assert!(check_resolving(&proj, &all, 2).unwrap().holds());
        let inj = ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        assert!(check_resolving(&inj, &all, 1).unwrap().r1.is_no());
    }

    #[test]
    fn maximally_nonnegative_examples() {
        let alg = dual_numbers(q());
        let e = ExactSubcat::new(&alg, vec![Module::projective(&alg, 0)], Structure::Split).unwrap();
        assert!(check_maximally_nonnegative(&e, 2).unwrap().verified());
        let s = setup();
        let inj = ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        match check_maximally_nonnegative(&inj, 1).unwrap() {
            MaxNegVerdict::Counterexample { condition, .. } => assert_eq!(condition, MaxNegCondition::EpiNotDeflation),
            other => panic!("expected counterexample, got {other:?}"),
        }
        let all = ExactSubcat::module_category(&s.alg, 6).unwrap();
        assert!(check_maximally_nonnegative(&all, 1).unwrap().verified());
    }

    #[test]
    fn patterns() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(coefficient_patterns(f5, 2, 100).len(), 25);
        assert_eq!(coefficient_patterns(q(), 2, 100).len(), 9);
        assert_eq!(coefficient_patterns(q(), 0, 100).len(), 1);
        assert!(coefficient_patterns(q(), 3, 100)[0].iter().all(Scalar::is_zero));
    }

    #[test]
    fn radical_and_approximations() {
        let s = setup();
        let e = ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap();
        assert!(e.radical(0, 0).unwrap().is_empty());
        assert_eq!(e.radical(0, 1).unwrap().len(), 1);
        assert!(e.radical_squared(0, 1).unwrap().is_empty());
        let approx = minimal_left_approximation(&e, &s.p1).unwrap();
        assert!(approx.is_injective());
        assert_eq!(approx.target, s.p2);
        let approx = minimal_right_approximation(&e, &s.i2).unwrap();
        assert!(approx.is_iso());
        let d = dual_numbers(FieldSpec::prime(2).unwrap());
        let lam = Module::projective(&d, 0);
        let e = ExactSubcat::new(&d, vec![lam.clone()], Structure::Split).unwrap();
        assert_eq!(e.radical(0, 0).unwrap().len(), 1);
        assert_eq!(e.radical_squared(0, 0).unwrap().len(), 0);
        let two = direct_sum(&d, &[lam.clone(), lam.clone()]).module;
        let approx = minimal_right_approximation(&e, &two).unwrap();
        assert_eq!(approx.source.total_dim(), 4);
    }

    #[test]
    fn eigenvalue_in_characteristic_dividing_size() {
        let f = FieldSpec::prime(2).unwrap();
        // 3 on the diagonal with a nilpotent part, size 2 = characteristic.
        let m = Matrix::from_i64(f, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(unique_eigenvalue(&m), Some(f.one()));
        let f3 = FieldSpec::prime(3).unwrap();
        let m = Matrix::from_i64(f3, 3, 3, &[2, 1, 0, 0, 2, 1, 0, 0, 2]);
        assert_eq!(unique_eigenvalue(&m), Some(f3.from_i64(2)));
    }
}

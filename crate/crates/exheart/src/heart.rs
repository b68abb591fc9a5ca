//! Regions of `D^b(E)`, the hearts `LH^b`, `RH^b`, `LHⁿ`, and t-pairs over an enumerated universe
//! of indecomposable objects.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::acyclic::{factorization, is_resolving, Classifier, Policy};
use crate::complex::Complex;
use crate::derived::{homotopy_hom, hyper_hom};
use crate::error::{Error, Result};
use crate::exact::{indecomposables, minimal_right_approximation, scan_monos_epis, standard_name, ExactSubcat, MaxNegVerdict};
use crate::functor::{FpFunctor, FunctorMap, Transport};
use crate::module::{
    cokernel, decompose, direct_sum, hom_basis, hom_dim, is_isomorphic, kernel, projective_cover_parts, projective_dimension,
    DirectSum, Module, ModuleMap,
};
use crate::quiver::PathAlgebra;
use crate::status::{all_of, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// `E`-acyclic in positive degrees.
    U,
    /// `E`-acyclic in negative degrees.
    V,
    /// Left Ext-acyclic in negative degrees.
    VLeft,
    /// Right Ext-acyclic in positive degrees.
    URight,
    /// `Σ^k` of the inner region.
    Shifted(i32, Box<Region>),
}

#[derive(Clone, Debug)]
pub struct RegionReport {
    pub verdict: Verdict<()>,
    pub evidence: Vec<(i32, Verdict<()>)>,
}

pub fn region_membership(cls: &Classifier, x: &Complex, region: &Region) -> Result<RegionReport> {
    if let Region::Shifted(k, inner) = region {
        return region_membership(cls, &x.shift(-k), inner);
    }
    let e = cls.e();
    let Some((lo, hi)) = x.support() else {
        return Ok(RegionReport { verdict: Verdict::Yes(()), evidence: Vec::new() });
    };
    for n in lo..=hi {
        if !e.contains(x.term(n))? {
            return Err(Error::NotMember(format!("term in degree {n}")));
        }
    }
    let positive = matches!(region, Region::U | Region::URight);
    let mut evidence = Vec::new();
    for n in (lo..=hi).filter(|&n| if positive { n > 0 } else { n < 0 }) {
        let (f, g) = (x.diff(n - 1), x.diff(n));
        let v = match region {
            Region::U | Region::V => factorization(e, &f, &g, false)?.forget(),
            Region::VLeft => cls.left_ext(&f, &g, Policy::Auto)?.forget(),
            _ => cls.right_ext(&f, &g, Policy::Auto)?.forget(),
        };
        evidence.push((n, v));
    }
    Ok(RegionReport { verdict: all_of(evidence.iter().map(|(_, v)| v.clone())), evidence })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Heart {
    LHb,
    RHb,
    /// `LH^b` cut down to complexes `E`-acyclic below degree `−n`.
    LHn(usize),
}

impl Heart {
    pub fn regions(self) -> Vec<Region> {
        match self {
            Heart::LHb => vec![Region::U, Region::VLeft],
            Heart::RHb => vec![Region::V, Region::URight],
            Heart::LHn(n) => vec![Region::U, Region::VLeft, Region::Shifted(n as i32, Box::new(Region::V))],
        }
    }

    pub fn label(self) -> String {
        match self {
            Heart::LHb => "LHb".into(),
            Heart::RHb => "RHb".into(),
            Heart::LHn(n) => format!("LH{n}"),
        }
    }
}

pub fn heart_membership(cls: &Classifier, x: &Complex, which: Heart) -> Result<Verdict<()>> {
    let mut parts = Vec::new();
    for r in which.regions() {
        let v = region_membership(cls, x, &r)?.verdict;
        if v.is_no() {
            return Ok(v);
        }
        parts.push(v);
    }
    Ok(all_of(parts))
}

/// The minimal weak kernel `A → ker g → M`, kept when `(f, g)` is left Ext-acyclic.
pub fn ext_kernel(cls: &Classifier, g: &ModuleMap) -> Result<Option<ModuleMap>> {
    let e = cls.e();
    let alg = &e.alg;
    let (k, kinc) = kernel(alg, g);
    let f = if k.is_zero() {
        ModuleMap::zero(&Module::zero(alg), &g.source)
    } else {
        kinc.compose(&minimal_right_approximation(e, &k)?)
    };
    Ok(cls.left_ext(&f, g, Policy::Auto)?.is_yes().then_some(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomModel {
    /// Chain maps up to homotopy; `D^b(E) = K^b(E)` when every conflation of `E` splits.
    Homotopy,
    /// `D^b(mod Λ)`.
    Ambient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniverseConfig {
    /// Shifts `Σ^k` with `k` in this range.
    pub window: (i32, i32),
    /// Dimension bound for indecomposables when the algebra is not representation-finite hereditary.
    pub dim_bound: usize,
    /// Length of truncated resolutions.
    pub depth: usize,
}

impl Default for UniverseConfig {
    fn default() -> Self {
        UniverseConfig { window: (-3, 3), dim_bound: 6, depth: 3 }
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub shift: i32,
    /// Index into `Universe::bases`.
    pub base: Option<usize>,
    pub complex: Complex,
    pub name: String,
}

impl Candidate {
    pub fn is_stalk(&self) -> bool {
        self.complex.support() == Some((0, 0))
    }
}

/// Indecomposable objects of `D^b(E)` in a shift window, each with a concrete complex over `E`.
#[derive(Clone, Debug)]
pub struct Universe {
    pub e: ExactSubcat,
    pub config: UniverseConfig,
    pub model: HomModel,
    /// The algebra whose indecomposables index the candidates: `Γ = End(T)^op` or `Λ`.
    pub key_alg: PathAlgebra,
    pub bases: Vec<Module>,
    pub candidates: Vec<Candidate>,
    pub transport: Option<Transport>,
    /// Every indecomposable of `D^b(E)` with shift in the window appears exactly once.
    pub complete: bool,
    pub notice: Option<String>,
}

fn rep_finite_hereditary(alg: &PathAlgebra) -> bool {
    alg.is_hereditary_presentation() && alg.quiver.is_dynkin()
}

/// Every generator Ext-projective inside `E`, so all conflations split.
pub fn effectively_split(e: &ExactSubcat) -> bool {
    e.generators.iter().all(|g| e.is_ext_projective(g))
}

impl Universe {
    pub fn new(e: &ExactSubcat, config: UniverseConfig) -> Result<Universe> {
        let alg = &e.alg;
        let (lo, hi) = config.window;
        let mut u = Universe {
            e: e.clone(),
            config,
            model: HomModel::Ambient,
            key_alg: alg.clone(),
            bases: Vec::new(),
            candidates: Vec::new(),
            transport: None,
            complete: false,
            notice: None,
        };
        if effectively_split(e) {
            let tr = Transport::new(e)?;
            let g = tr.gamma.clone();
            let complete = rep_finite_hereditary(&g);
            let bound = if complete { usize::MAX } else { config.dim_bound };
            u.bases = indecomposables(&g, bound)?;
            u.model = HomModel::Homotopy;
            u.complete = complete;
            if !complete {
                u.notice = Some("End(T)^op is not representation-finite hereditary; candidates are truncated resolutions".into());
            }
            for (i, n) in u.bases.iter().enumerate() {
                let (x, full) = gamma_resolution(&tr, n, config.depth)?;
                let lengths: Vec<i32> = if full { vec![x.lo] } else { (1..=config.depth as i32).map(|l| -l).collect() };
                for top in lengths {
                    let y = x.rewindow(top, 0);
                    for k in lo..=hi {
                        let c = y.shift(k);
                        let name = complex_name(alg, &c);
                        u.candidates.push(Candidate { shift: k, base: Some(i), complex: c, name });
                    }
                }
            }
            u.key_alg = g;
            u.transport = Some(tr);
            return Ok(u);
        }
        if rep_finite_hereditary(alg) && is_resolving(e)? {
            u.bases = indecomposables(alg, usize::MAX)?;
            u.complete = true;
            for (i, m) in u.bases.iter().enumerate() {
                let x = approximation_resolution(e, m, alg.vertex_count() + 1)?;
                for k in lo..=hi {
                    let c = x.shift(k);
                    let name = complex_name(alg, &c);
                    u.candidates.push(Candidate { shift: k, base: Some(i), complex: c, name });
                }
            }
            return Ok(u);
        }
        u.notice = Some("neither split nor resolving over a representation-finite hereditary algebra; scanning stalks and two-term complexes".into());
        let mut scan = Vec::new();
        for g in &e.generators {
            scan.push(Complex::stalk(alg, g, 0));
        }
        for a in &e.generators {
            for b in &e.generators {
                for f in hom_basis(alg, a, b) {
                    scan.push(Complex::two_term(alg, &f, -1));
                }
            }
        }
        for x in scan {
            for k in lo..=hi {
                let c = x.shift(k);
                let name = complex_name(alg, &c);
                u.candidates.push(Candidate { shift: k, base: None, complex: c, name });
            }
        }
        Ok(u)
    }

    pub fn alg(&self) -> &PathAlgebra {
        &self.e.alg
    }

    /// `dim Hom(X, Y)` in `D^b(E)`.
    pub fn hom(&self, x: &Complex, y: &Complex) -> usize {
        match self.model {
            HomModel::Homotopy => homotopy_hom(self.alg(), x, y),
            HomModel::Ambient => hyper_hom(self.alg(), x, y),
        }
    }

    /// The candidate isomorphic to `x` in `D^b(E)`, read off from homology over the key algebra.
    pub fn locate(&self, x: &Complex) -> Result<Option<usize>> {
        if !self.complete {
            return Ok(None);
        }
        let y = match &self.transport {
            Some(tr) => transport_complex(tr, x)?,
            None => x.clone(),
        };
        let Some((lo, hi)) = y.support() else { return Ok(None) };
        let sig: Vec<(i32, Module)> = (lo..=hi).map(|n| (n, y.homology(&self.key_alg, n))).filter(|(_, h)| !h.is_zero()).collect();
        let [(n, h)] = sig.as_slice() else { return Ok(None) };
        for (i, c) in self.candidates.iter().enumerate() {
            if c.shift == -n {
                if let Some(b) = c.base {
                    if is_isomorphic(&self.key_alg, &self.bases[b], h)? {
                        return Ok(Some(i));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `T[i][j] = dim Hom(ΣXᵢ, Xⱼ)` over all candidates.
    pub fn suspension_table(&self) -> Vec<Vec<usize>> {
        self.candidates
            .iter()
            .map(|x| {
                let sx = x.complex.shift(1);
                self.candidates.iter().map(|y| self.hom(&sx, &y.complex)).collect()
            })
            .collect()
    }

    pub fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.candidates[i].name.clone()).collect()
    }

    fn sort_by_name(&self, idx: &mut [usize]) {
        idx.sort_by(|&a, &b| {
            let (x, y) = (&self.candidates[a].name, &self.candidates[b].name);
            display_key(x).cmp(&display_key(y)).then(a.cmp(&b))
        });
    }
}

/// Orders names by shift, then projectives, simples, other modules, injectives and finally
/// complexes without a stalk name.
pub fn display_key(name: &str) -> (i32, u8, String) {
    let (base, k) = match name.strip_prefix("shift(").and_then(|r| r.strip_suffix(')')).and_then(|r| r.rsplit_once(',')) {
        Some((b, k)) => (b, k.parse().unwrap_or(0)),
        None => (name, 0),
    };
    let rank = match base.chars().next() {
        Some('P') => 0,
        Some('S') => 1,
        Some('I') => 3,
        Some('[') => 4,
        _ => 2,
    };
    (k, rank, base.to_string())
}

/// A minimal projective resolution over `Γ`, carried to `E` through `proj Γ ≃ E`.
/// The flag says whether it terminated within `depth` steps.
pub fn gamma_resolution(tr: &Transport, n: &Module, depth: usize) -> Result<(Complex, bool)> {
    let g = &tr.gamma;
    let alg = &tr.e.alg;
    let (v0, p0, eps) = projective_cover_parts(g, n);
    let mut terms: Vec<(Vec<usize>, DirectSum)> = vec![(v0, p0)];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let (mut syz, mut inc) = kernel(g, &eps);
    for _ in 0..depth {
        if syz.is_zero() {
            break;
        }
        let (v, p, cov) = projective_cover_parts(g, &syz);
        diffs.push(inc.compose(&cov));
        terms.push((v, p));
        let (s, i) = kernel(g, &cov);
        syz = s;
        inc = i;
    }
    let full = syz.is_zero();
    let e_terms: Vec<Module> = terms
        .iter()
        .rev()
        .map(|(vs, _)| direct_sum(alg, &vs.iter().map(|&v| tr.e.generators[v].clone()).collect::<Vec<_>>()).module)
        .collect();
    let e_diffs: Vec<ModuleMap> = (0..diffs.len())
        .rev()
        .map(|k| {
            let (vs, ps) = &terms[k + 1];
            let (ws, pt) = &terms[k];
            tr.e_map_between(vs, ps, ws, pt, &diffs[k])
        })
        .collect();
    let lo = -(e_terms.len() as i32 - 1);
    Ok((Complex::new(alg, lo, e_terms, e_diffs)?, full))
}

/// Resolution of `m` by minimal right `E`-approximations; each must be onto.
pub fn approximation_resolution(e: &ExactSubcat, m: &Module, depth: usize) -> Result<Complex> {
    let alg = &e.alg;
    let a0 = minimal_right_approximation(e, m)?;
    if !a0.is_surjective() {
        return Err(Error::Unsupported("the minimal E-approximation is not onto".into()));
    }
    let mut terms = vec![a0.source.clone()];
    let mut diffs = Vec::new();
    let (mut k, mut inc) = kernel(alg, &a0);
    while !k.is_zero() {
        if terms.len() > depth {
            return Err(Error::Unsupported(format!("approximation resolution longer than {depth}")));
        }
        let a = minimal_right_approximation(e, &k)?;
        if !a.is_surjective() {
            return Err(Error::Unsupported("the minimal E-approximation of a syzygy is not onto".into()));
        }
        diffs.push(inc.compose(&a));
        terms.push(a.source.clone());
        let (k1, i1) = kernel(alg, &a);
        k = k1;
        inc = i1;
    }
    terms.reverse();
    diffs.reverse();
    let lo = -(terms.len() as i32 - 1);
    Complex::new(alg, lo, terms, diffs)
}

/// `Y(X)`: the complex of `Γ`-modules `Hom(T, Xⁿ)`.
pub fn transport_complex(tr: &Transport, x: &Complex) -> Result<Complex> {
    let alg = &tr.e.alg;
    let Some((lo, hi)) = x.support() else { return Ok(Complex::zero_complex(&tr.gamma)) };
    let rep = |n: i32| FpFunctor::representable(alg, x.term(n));
    let terms = (lo..=hi).map(|n| tr.functor_module(&rep(n))).collect::<Result<Vec<_>>>()?;
    let diffs = (lo..hi)
        .map(|n| tr.map_module(&FunctorMap::new(alg, &rep(n), &rep(n + 1), x.diff(n))?))
        .collect::<Result<Vec<_>>>()?;
    Complex::new(&tr.gamma, lo, terms, diffs)
}

fn shifted_name(name: String, k: i32) -> String {
    if k == 0 {
        name
    } else {
        format!("shift({name},{k})")
    }
}

fn indecomposable_name(alg: &PathAlgebra, m: &Module) -> Option<String> {
    (decompose(alg, m).ok()?.len() == 1).then(|| standard_name(alg, m))
}

/// `M` or `shift(M,k)` for an indecomposable up to shift, else the terms with the lowest degree.
pub fn complex_name(alg: &PathAlgebra, x: &Complex) -> String {
    let Some((lo, hi)) = x.support() else { return "0".into() };
    if lo == hi {
        if let Some(n) = indecomposable_name(alg, x.term(lo)) {
            return shifted_name(n, -lo);
        }
    }
    if alg.is_hereditary_presentation() {
        let hs: Vec<(i32, Module)> = (lo..=hi).map(|n| (n, x.homology(alg, n))).filter(|(_, h)| !h.is_zero()).collect();
        if let [(n, h)] = hs.as_slice() {
            if let Some(name) = indecomposable_name(alg, h) {
                return shifted_name(name, -n);
            }
        }
    }
    let terms: Vec<String> = (lo..=hi)
        .map(|n| match decompose(alg, x.term(n)) {
            Ok(parts) if !parts.is_empty() => parts.iter().map(|p| standard_name(alg, p)).collect::<Vec<_>>().join("+"),
            _ => "0".into(),
        })
        .collect();
    format!("[{}]@{lo}", terms.join(" -> "))
}

#[derive(Clone, Debug)]
pub struct HeartDescription {
    pub which: Heart,
    /// Indices into the universe, sorted by name.
    pub members: Vec<usize>,
    pub names: Vec<String>,
    pub hom_table: Vec<Vec<usize>>,
    /// `Hom(Hᵢ, Σ^{−k} Hⱼ) = 0` for every `k > 0` on the member list.
    pub nonnegative: bool,
    pub undetermined: Vec<String>,
    pub complete: bool,
}

fn members_of(u: &Universe, cls: &Classifier, which: Heart) -> Result<(Vec<usize>, Vec<String>)> {
    let mut members = Vec::new();
    let mut undetermined = Vec::new();
    for (i, c) in u.candidates.iter().enumerate() {
        match heart_membership(cls, &c.complex, which)? {
            Verdict::Yes(()) => members.push(i),
            Verdict::No(_) => {}
            Verdict::Unknown(_) => undetermined.push(c.name.clone()),
        }
    }
    u.sort_by_name(&mut members);
    Ok((members, undetermined))
}

pub fn compute_heart(u: &Universe, cls: &Classifier, which: Heart) -> Result<HeartDescription> {
    let (members, undetermined) = members_of(u, cls, which)?;
    let xs: Vec<&Complex> = members.iter().map(|&i| &u.candidates[i].complex).collect();
    let hom_table = xs.iter().map(|x| xs.iter().map(|y| u.hom(x, y)).collect()).collect();
    let mut nonnegative = true;
    'outer: for x in &xs {
        for y in &xs {
            let (Some((xlo, xhi)), Some((ylo, _))) = (x.support(), y.support()) else { continue };
            let reach = (xhi - ylo + 2).max(xhi - xlo + 2).max(1);
            for k in 1..=reach {
                if u.hom(x, &y.shift(-k)) != 0 {
                    nonnegative = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(HeartDescription {
        which,
        names: u.names(&members),
        members,
        hom_table,
        nonnegative,
        complete: u.complete && undetermined.is_empty(),
        undetermined,
    })
}

/// Candidates in a region, with the undetermined ones listed separately.
pub fn region_members(u: &Universe, cls: &Classifier, region: &Region) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut yes = Vec::new();
    let mut unknown = Vec::new();
    for (i, c) in u.candidates.iter().enumerate() {
        match region_membership(cls, &c.complex, region)?.verdict {
            Verdict::Yes(()) => yes.push(i),
            Verdict::No(_) => {}
            Verdict::Unknown(_) => unknown.push(i),
        }
    }
    Ok((yes, unknown))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPairReport {
    /// Pairs `(X, Y)` with `Hom(ΣX, Y) ≠ 0`.
    pub violations: Vec<(String, String)>,
    /// The candidates right orthogonal to `ΣU` are exactly those in `V`.
    pub right_maximal: bool,
    /// The candidates `X` with `ΣX` left orthogonal to `V` are exactly those in `U`.
    pub left_maximal: bool,
    pub complete: bool,
}

impl TPairReport {
    pub fn orthogonal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Orthogonality and maximality of `(U, V)` relative to the universe, given its suspension table.
pub fn verify_t_pair(u: &Universe, table: &[Vec<usize>], us: &[usize], vs: &[usize]) -> TPairReport {
    let mut violations = Vec::new();
    for &x in us {
        for &y in vs {
            if table[x][y] != 0 {
                violations.push((u.candidates[x].name.clone(), u.candidates[y].name.clone()));
            }
        }
    }
    let n = u.candidates.len();
    let right: Vec<usize> = (0..n).filter(|&y| us.iter().all(|&x| table[x][y] == 0)).collect();
    let left: Vec<usize> = (0..n).filter(|&x| vs.iter().all(|&y| table[x][y] == 0)).collect();
    let same = |a: &[usize], b: &[usize]| {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        a == b
    };
    TPairReport { violations, right_maximal: same(&right, vs), left_maximal: same(&left, us), complete: u.complete }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// `mod Γ` with its own universe and classifier, for `LH^b(E) ≃ mod Γ`.
struct GammaSide {
    u: Universe,
    cls: Classifier,
}

fn gamma_side(u: &Universe) -> Result<(GammaSide, &Transport)> {
    let tr = match (&u.transport, u.complete) {
        (Some(tr), true) => tr,
        _ => return Err(Error::Unsupported("hearts of hearts need split E with End(T)^op representation-finite hereditary".into())),
    };
    let eg = ExactSubcat::module_category(&tr.gamma, usize::MAX)?;
    let ug = Universe::new(&eg, u.config)?;
    let cls = Classifier::new(&eg)?;
    Ok((GammaSide { u: ug, cls }, tr))
}

fn check_lh_is_mod_gamma(u: &Universe, cls: &Classifier) -> Result<()> {
    let (lh, undetermined) = members_of(u, cls, Heart::LHb)?;
    let expected: Vec<usize> = (0..u.candidates.len()).filter(|&i| u.candidates[i].shift == 0).collect();
    if !undetermined.is_empty() || sorted(lh) != expected {
        return Err(Error::Unsupported("LH^b(E) is not the standard heart of D^b(mod Γ)".into()));
    }
    Ok(())
}

/// Matches a `Γ`-side candidate with the `E`-side candidate of the same shift and base.
fn pull_back_gamma(u: &Universe, gs: &GammaSide, idx: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &m in idx {
        let c = &gs.u.candidates[m];
        let b = c.base.expect("complete universe");
        let mut found = None;
        for (i, d) in u.candidates.iter().enumerate() {
            if d.shift == c.shift && is_isomorphic(&u.key_alg, &u.bases[d.base.expect("complete universe")], &gs.u.bases[b])? {
                found = Some(i);
                break;
            }
        }
        out.push(found.ok_or_else(|| Error::Unsupported(format!("{} has no counterpart in the window", c.name)))?);
    }
    Ok(out)
}

/// `RH^b(LH^b(E))` as candidates of the universe of `E`.
pub fn rh_of_lh(u: &Universe, cls: &Classifier) -> Result<Vec<usize>> {
    let (gs, _) = gamma_side(u)?;
    check_lh_is_mod_gamma(u, cls)?;
    let (rh, undetermined) = members_of(&gs.u, &gs.cls, Heart::RHb)?;
    if !undetermined.is_empty() {
        return Err(Error::Unknown("undetermined RH^b membership over Γ".into()));
    }
    let mut out = pull_back_gamma(u, &gs, &rh)?;
    u.sort_by_name(&mut out);
    Ok(out)
}

/// The dual universe over `Λ^op` together with its classifier.
pub fn dual_universe(u: &Universe) -> Result<(Universe, Classifier)> {
    let de = u.e.dual();
    let ud = Universe::new(&de, u.config)?;
    let cls = Classifier::new(&de)?;
    Ok((ud, cls))
}

fn dualize_back(u: &Universe, ud: &Universe, idx: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &m in idx {
        let x = ud.candidates[m].complex.dual(u.alg());
        out.push(u.locate(&x)?.ok_or_else(|| Error::Unsupported(format!("dual of {} not found in the window", ud.candidates[m].name)))?);
    }
    u.sort_by_name(&mut out);
    Ok(out)
}

/// `LH^b(RH^b(E)) = D RH^b(LH^b(DE))`.
pub fn lh_of_rh(u: &Universe) -> Result<Vec<usize>> {
    let (ud, cd) = dual_universe(u)?;
    let idx = rh_of_lh(&ud, &cd)?;
    dualize_back(u, &ud, &idx)
}

#[derive(Clone, Debug)]
pub struct HeartsOfHearts {
    pub lh: Vec<usize>,
    pub rh: Vec<usize>,
    pub rh_of_lh: Vec<usize>,
    pub lh_of_rh: Vec<usize>,
}

impl HeartsOfHearts {
    /// `LH^b(RH^b E) = RH^b E ≠ LH^b E = RH^b(LH^b E)`.
    pub fn separates(&self) -> bool {
        sorted(self.lh_of_rh.clone()) == sorted(self.rh.clone())
            && sorted(self.rh_of_lh.clone()) == sorted(self.lh.clone())
            && sorted(self.lh.clone()) != sorted(self.rh.clone())
    }
}

pub fn hearts_of_hearts(u: &Universe, cls: &Classifier) -> Result<HeartsOfHearts> {
    Ok(HeartsOfHearts {
        lh: members_of(u, cls, Heart::LHb)?.0,
        rh: members_of(u, cls, Heart::RHb)?.0,
        rh_of_lh: rh_of_lh(u, cls)?,
        lh_of_rh: lh_of_rh(u)?,
    })
}

#[derive(Clone, Debug)]
pub struct MaximalTPairs {
    /// `(U^b(E), V^b_ℓ(E))`.
    pub standard: TPairReport,
    /// `(U^b_r(LH^b E), V^b_ℓ(E))` and its heart.
    pub first: TPairReport,
    pub first_heart: Vec<usize>,
    /// `(U^b_r(E), V^b_ℓ(RH^b E))` and its heart.
    pub second: TPairReport,
    pub second_heart: Vec<usize>,
}

/// `U^b_r(LH^b E)` and `V^b_ℓ(E)` through `D^b(E) ≃ D^b(mod Γ)`.
fn first_pair(u: &Universe, cls: &Classifier) -> Result<(Vec<usize>, Vec<usize>)> {
    let (gs, tr) = gamma_side(u)?;
    let mut ur = Vec::new();
    for (i, c) in u.candidates.iter().enumerate() {
        let y = transport_complex(tr, &c.complex)?;
        match region_membership(&gs.cls, &y, &Region::URight)?.verdict {
            Verdict::Yes(()) => ur.push(i),
            Verdict::No(_) => {}
            Verdict::Unknown(r) => return Err(Error::Unknown(r)),
        }
    }
    let (vl, unknown) = region_members(u, cls, &Region::VLeft)?;
    if !unknown.is_empty() {
        return Err(Error::Unknown("undetermined V_ℓ membership".into()));
    }
    Ok((ur, vl))
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    sorted(a.iter().copied().filter(|x| b.contains(x)).collect())
}

pub fn maximal_t_pairs(u: &Universe, cls: &Classifier) -> Result<MaximalTPairs> {
    let table = u.suspension_table();
    let (us, _) = region_members(u, cls, &Region::U)?;
    let (ur_lh, vl) = first_pair(u, cls)?;
    let standard = verify_t_pair(u, &table, &us, &vl);
    let first = verify_t_pair(u, &table, &ur_lh, &vl);
    let mut first_heart = intersect(&ur_lh, &vl);
    u.sort_by_name(&mut first_heart);
    // (U_r(LH DE), V_ℓ(DE)) over Λ^op dualizes to (U_r(E), V_ℓ(RH E)), and Hom(ΣU, V) = Hom(ΣDV, DU).
    let (ud, cd) = dual_universe(u)?;
    let (d_ur_lh, d_vl) = first_pair(&ud, &cd)?;
    let second = verify_t_pair(&ud, &ud.suspension_table(), &d_ur_lh, &d_vl);
    let second_heart = dualize_back(u, &ud, &intersect(&d_ur_lh, &d_vl))?;
    Ok(MaximalTPairs { standard, first, first_heart, second, second_heart })
}

/// The conditions of the characterization of maximal non-negativity, computed independently.
#[derive(Clone, Debug)]
pub struct Characterization {
    /// `LH^b(E)` consists of the stalks of `E` on the universe.
    pub lh_is_e: bool,
    /// `E = LH^b(E) = RH^b(E)` on the universe.
    pub hearts_are_e: bool,
    /// `V^b_ℓ = V^b` on the universe.
    pub vleft_is_v: bool,
    /// `V^b_ℓ = V^b` and `U^b_r = U^b` on the universe.
    pub regions_agree: bool,
    /// Every mono in `E` an inflation.
    pub monos: MaxNegVerdict,
    /// Every mono an inflation and every epi a deflation.
    pub maxneg: MaxNegVerdict,
    pub bound: usize,
    /// No membership stayed undetermined and the universe is complete.
    pub complete: bool,
}

impl Characterization {
    /// The three conditions agree, and so do the two conditions for `E = LH^b(E)`.
    pub fn consistent(&self) -> bool {
        self.hearts_are_e == self.regions_agree
            && self.regions_agree == self.maxneg.verified()
            && self.lh_is_e == self.vleft_is_v
            && self.vleft_is_v == self.monos.verified()
    }
}

pub fn characterize(u: &Universe, cls: &Classifier, bound: usize) -> Result<Characterization> {
    let mut complete = u.complete;
    let mut region = |r: Region| -> Result<Vec<usize>> {
        let (yes, unknown) = region_members(u, cls, &r)?;
        complete &= unknown.is_empty();
        Ok(yes)
    };
    let uu = region(Region::U)?;
    let v = region(Region::V)?;
    let vl = region(Region::VLeft)?;
    let ur = region(Region::URight)?;
    let stalks: Vec<usize> = (0..u.candidates.len()).filter(|&i| u.candidates[i].is_stalk()).collect();
    let lh = intersect(&uu, &vl);
    let rh = intersect(&v, &ur);
    let lh_is_e = lh == stalks;
    let vleft_is_v = vl == v;
    Ok(Characterization {
        lh_is_e,
        hearts_are_e: lh_is_e && rh == stalks,
        vleft_is_v,
        regions_agree: vleft_is_v && ur == uu,
        monos: scan_monos_epis(&u.e, bound, true, false)?,
        maxneg: scan_monos_epis(&u.e, bound, true, true)?,
        bound,
        complete,
    })
}

#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub lh_names: Vec<String>,
    /// Names of the images `coker Y(d_X^{-1})` over the key algebra.
    pub image_names: Vec<String>,
    /// Indecomposables of finite projective dimension on the completion side.
    pub r_names: Vec<String>,
    pub bijective: bool,
    pub lh_table: Vec<Vec<usize>>,
    pub image_table: Vec<Vec<usize>>,
    /// Stalks of `E` go to projectives.
    pub stalks_projective: bool,
    pub verdict: Verdict<()>,
}

impl CrosscheckReport {
    pub fn tables_equal(&self) -> bool {
        self.lh_table == self.image_table
    }
}

/// Compares `LH^b(E)` with `R^b(E)` under `X ↦ coker Y(d_X^{-1})`. For split `E` the completion is
/// `mod Γ` restricted to finite projective dimension; for resolving `E` it is `mod Λ`, reached by `X ↦ H⁰X`.
pub fn completion_crosscheck(u: &Universe, cls: &Classifier) -> Result<CrosscheckReport> {
    let key = &u.key_alg;
    let (lh, undetermined) = members_of(u, cls, Heart::LHb)?;
    let mut images = Vec::new();
    for &i in &lh {
        let x = &u.candidates[i].complex;
        let y = match &u.transport {
            Some(tr) => transport_complex(tr, x)?,
            None => x.clone(),
        };
        images.push(cokernel(key, &y.diff(-1)).0);
    }
    let gldim_bound = key.vertex_count() + 1;
    let r: Vec<&Module> = u.bases.iter().filter(|b| projective_dimension(key, b, gldim_bound).is_some()).collect();
    let mut bijective = images.len() == r.len();
    let mut hit = vec![false; r.len()];
    for m in &images {
        let mut found = false;
        for (j, b) in r.iter().enumerate() {
            if !hit[j] && is_isomorphic(key, m, b)? {
                hit[j] = true;
                found = true;
                break;
            }
        }
        bijective &= found;
    }
    let xs: Vec<&Complex> = lh.iter().map(|&i| &u.candidates[i].complex).collect();
    let lh_table: Vec<Vec<usize>> = xs.iter().map(|x| xs.iter().map(|y| u.hom(x, y)).collect()).collect();
    let image_table: Vec<Vec<usize>> = images.iter().map(|a| images.iter().map(|b| hom_dim(key, a, b)).collect()).collect();
    let stalks_projective = lh
        .iter()
        .zip(&images)
        .filter(|(&i, _)| u.candidates[i].is_stalk())
        .all(|(_, m)| u.transport.is_none() || projective_dimension(key, m, 0).is_some());
    let verdict = if !bijective || lh_table != image_table || !stalks_projective {
        Verdict::No("LH^b and R^b differ on the universe".into())
    } else if !u.complete || !undetermined.is_empty() {
        Verdict::Unknown("consistent up to the enumeration bound".into())
    } else {
        Verdict::Yes(())
    };
    Ok(CrosscheckReport {
        lh_names: u.names(&lh),
        image_names: images.iter().map(|m| standard_name(key, m)).collect(),
        r_names: r.iter().map(|m| standard_name(key, m)).collect(),
        bijective,
        lh_table,
        image_table,
        stalks_projective,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{check_maximally_nonnegative, Structure};
    use crate::linalg::FieldSpec;
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

    fn injectives(s: &A2) -> ExactSubcat {
        let i1 = Module::injective(&s.alg, 0);
        ExactSubcat::new(&s.alg, vec![i1, s.i2.clone()], Structure::Induced).unwrap()
    }

    fn names(u: &Universe, idx: &[usize]) -> Vec<String> {
        let mut v = u.names(idx);
        v.sort();
        v
    }

    #[test]
    fn region_examples() {
        let s = setup();
        let proj = ExactSubcat::new(&s.alg, vec![s.p1.clone(), s.p2.clone()], Structure::Induced).unwrap();
        let cls = Classifier::new(&proj).unwrap();
        let stalk = Complex::stalk(&s.alg, &s.p2, 0);
        for r in [Region::U, Region::V, Region::VLeft, Region::URight] {
            assert!(region_membership(&cls, &stalk, &r).unwrap().verdict.is_yes());
        }
        let f = hom_basis(&s.alg, &s.p1, &s.p2).remove(0);
        let x = Complex::two_term(&s.alg, &f, -1);
        assert!(region_membership(&cls, &x, &Region::VLeft).unwrap().verdict.is_yes());
        assert!(region_membership(&cls, &x, &Region::V).unwrap().verdict.is_no());

        let m = ExactSubcat::module_category(&s.alg, 6).unwrap();
        let cm = Classifier::new(&m).unwrap();
        let g = hom_basis(&s.alg, &s.p2, &s.i2).remove(0);
        let y = Complex::three_term(&s.alg, &f, &g, -1).unwrap();
        assert!(region_membership(&cm, &y, &Region::U).unwrap().verdict.is_yes());
        assert!(region_membership(&cm, &y, &Region::VLeft).unwrap().verdict.is_yes());
        assert_eq!(hyper_hom(&s.alg, &y, &y), 0);
        let shifted = Region::Shifted(1, Box::new(Region::U));
        assert!(region_membership(&cm, &y.shift(1), &shifted).unwrap().verdict.is_yes());
    }

    #[test]
    fn heart_membership_examples() {
        let s = setup();
        let e = injectives(&s);
        let cls = Classifier::new(&e).unwrap();
        let g = hom_basis(&s.alg, &s.p2, &s.i2).remove(0);
        let sp1 = Complex::two_term(&s.alg, &g, -1);
        assert!(heart_membership(&cls, &sp1, Heart::LHb).unwrap().is_yes());
        assert!(heart_membership(&cls, &sp1, Heart::RHb).unwrap().is_no());
        assert!(heart_membership(&cls, &sp1, Heart::LHn(0)).unwrap().is_no());
        assert!(heart_membership(&cls, &sp1, Heart::LHn(1)).unwrap().is_yes());
        let stalk = Complex::stalk(&s.alg, &s.i2, 0);
        for h in [Heart::LHb, Heart::RHb, Heart::LHn(0)] {
            assert!(heart_membership(&cls, &stalk, h).unwrap().is_yes());
        }
    }

    #[test]
    fn ext_kernel_examples() {
        let s = setup();
        let e = injectives(&s);
        let cls = Classifier::new(&e).unwrap();
        let g = hom_basis(&s.alg, &s.p2, &s.i2).remove(0);
        // Mono in E although not injective.
        let f = ext_kernel(&cls, &g).unwrap().unwrap();
        assert!(f.source.is_zero());
        let z = ModuleMap::zero(&s.p2, &s.i2);
        let f = ext_kernel(&cls, &z).unwrap().unwrap();
        assert!(f.is_iso());

        let alg = dual_numbers(q());
        let lam = Module::projective(&alg, 0);
        let e = ExactSubcat::new(&alg, vec![lam.clone()], Structure::Split).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let t = hom_basis(&alg, &lam, &lam).into_iter().find(|h| h.is_nilpotent_endo() && !h.is_zero()).unwrap();
        let f = ext_kernel(&cls, &t).unwrap().unwrap();
        assert_eq!(f.rank(), 1);
        assert!(t.compose(&f).is_zero());
    }

    #[test]
    fn a2_hearts() {
        let s = setup();
        let e = injectives(&s);
        let u = Universe::new(&e, UniverseConfig::default()).unwrap();
        assert!(u.complete);
        assert_eq!(u.candidates.len(), 21);
        let cls = Classifier::new(&e).unwrap();
        let lh = compute_heart(&u, &cls, Heart::LHb).unwrap();
        assert_eq!(lh.names, vec!["P2", "I2", "shift(P1,1)"]);
        assert!(lh.nonnegative && lh.complete);
        let rh = compute_heart(&u, &cls, Heart::RHb).unwrap();
        assert_eq!(rh.names, vec!["P1", "P2", "I2"]);
        assert!(rh.nonnegative);
        // P1 sits in degrees 0, 1 over E.
        let p1 = &u.candidates[rh.members[0]].complex;
        assert_eq!(p1.support(), Some((0, 1)));

        let hh = hearts_of_hearts(&u, &cls).unwrap();
        assert_eq!(names(&u, &hh.rh_of_lh), names(&u, &hh.lh));
        assert_eq!(names(&u, &hh.lh_of_rh), names(&u, &hh.rh));
        assert!(hh.separates());
    }

    #[test]
    fn module_category_and_dual_numbers_hearts() {
        let s = setup();
        let m = ExactSubcat::module_category(&s.alg, 6).unwrap();
        let u = Universe::new(&m, UniverseConfig::default()).unwrap();
        assert_eq!(u.model, HomModel::Ambient);
        let cls = Classifier::new(&m).unwrap();
        for h in [Heart::LHb, Heart::RHb] {
            assert_eq!(compute_heart(&u, &cls, h).unwrap().names, vec!["P1", "P2", "I2"]);
        }

        let alg = dual_numbers(q());
        let lam = Module::projective(&alg, 0);
        let e = ExactSubcat::new(&alg, vec![lam], Structure::Split).unwrap();
        let u = Universe::new(&e, UniverseConfig::default()).unwrap();
        assert!(!u.complete && u.notice.is_some());
        let cls = Classifier::new(&e).unwrap();
        for h in [Heart::LHb, Heart::RHb] {
            let d = compute_heart(&u, &cls, h).unwrap();
            assert_eq!(d.names, vec!["Px"], "{:?}", u.candidates.iter().map(|c| &c.name).collect::<Vec<_>>());
            assert!(d.undetermined.is_empty());
        }
    }

    #[test]
    fn a2_t_pairs() {
        let s = setup();
        let e = injectives(&s);
        let u = Universe::new(&e, UniverseConfig::default()).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let t = maximal_t_pairs(&u, &cls).unwrap();
        assert!(t.standard.orthogonal() && t.standard.right_maximal);
        for r in [&t.first, &t.second] {
            assert!(r.orthogonal() && r.right_maximal && r.left_maximal, "{t:?}");
            assert!(r.orthogonal() && r.right_maximal && r.left_maximal);
        }
        let hh = hearts_of_hearts(&u, &cls).unwrap();
        assert_eq!(names(&u, &t.first_heart), names(&u, &hh.rh_of_lh));
        assert_eq!(names(&u, &t.second_heart), names(&u, &hh.lh_of_rh));

        let m = ExactSubcat::module_category(&s.alg, 6).unwrap();
        let um = Universe::new(&m, UniverseConfig::default()).unwrap();
        let cm = Classifier::new(&m).unwrap();
        let table = um.suspension_table();
        let (us, _) = region_members(&um, &cm, &Region::U).unwrap();
        let (vs, _) = region_members(&um, &cm, &Region::VLeft).unwrap();
        let r = verify_t_pair(&um, &table, &us, &vs);
        assert!(r.orthogonal() && r.right_maximal && r.left_maximal);
    }

    #[test]
    fn crosschecks() {
        let s = setup();
        for gens in [vec![Module::injective(&s.alg, 0), s.i2.clone()], vec![s.p1.clone(), s.p2.clone()]] {
            let e = ExactSubcat::new(&s.alg, gens, Structure::Induced).unwrap();
            let u = Universe::new(&e, UniverseConfig::default()).unwrap();
            let cls = Classifier::new(&e).unwrap();
            let r = completion_crosscheck(&u, &cls).unwrap();
            assert_eq!(r.lh_names.len(), 3);
            assert_eq!(r.r_names.len(), 3);
            assert!(r.bijective && r.tables_equal() && r.stalks_projective);
            assert!(r.verdict.is_yes());
        }
        let m = ExactSubcat::module_category(&s.alg, 6).unwrap();
        let u = Universe::new(&m, UniverseConfig::default()).unwrap();
        let r = completion_crosscheck(&u, &Classifier::new(&m).unwrap()).unwrap();
        assert!(r.verdict.is_yes());
        assert_eq!(r.image_names, vec!["P1", "P2", "I2"]);
    }

    #[test]
    fn characterization_agrees() {
        let s = setup();
        let alg = dual_numbers(q());
        let lam = Module::projective(&alg, 0);
        let cases = vec![
            (injectives(&s), false),
            (ExactSubcat::new(&alg, vec![lam], Structure::Split).unwrap(), true),
            (ExactSubcat::new(&s.alg, vec![s.p1.clone(), s.p2.clone()], Structure::Induced).unwrap(), false),
            (ExactSubcat::module_category(&s.alg, 6).unwrap(), true),
            (ExactSubcat::new(&s.alg, vec![s.p2.clone(), s.i2.clone()], Structure::Induced).unwrap(), false),
        ];
        for (e, maxneg) in cases {
            let u = Universe::new(&e, UniverseConfig::default()).unwrap();
            let cls = Classifier::new(&e).unwrap();
            let c = characterize(&u, &cls, 2).unwrap();
            assert!(c.consistent(), "{c:?}");
            assert_eq!(c.hearts_are_e, maxneg);
            assert_eq!(check_maximally_nonnegative(&e, 2).unwrap().verified(), maxneg);
        }
    }
}

//! Constructions with `Ext_E`-resolutions: complexes in degrees `≤ 0` that are left
//! `Ext_E`-acyclic in every negative degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::acyclic::{ext_lift, Classifier, ExtWitness, Policy};
use crate::complex::{cone, verify_homotopy, ChainMap, Complex};
use crate::error::{input, Error, Result};
use crate::exact::{minimal_right_approximation, ExactSubcat};
use crate::functor::{FpFunctor, FunctorMap, Transport};
use crate::linalg::Matrix;
use crate::module::{combine, hom_basis, is_short_exact, lift_along_mono, lift_through, pullback, solve_in_span, Module, ModuleMap};
use crate::quiver::PathAlgebra;
use crate::status::Verdict;

#[derive(Clone, Debug)]
pub struct ExtResolution {
    pub complex: Complex,
    /// Left `Ext_E`-acyclicity witness in each negative degree of the support.
    pub witnesses: Vec<(i32, ExtWitness)>,
}

impl ExtResolution {
    pub fn certify(cls: &Classifier, x: &Complex) -> Result<Verdict<ExtResolution>> {
        let Some((lo, hi)) = x.support() else {
            return Ok(Verdict::Yes(ExtResolution { complex: x.clone(), witnesses: Vec::new() }));
        };
        if hi > 0 {
            return input(format!("a resolution lives in degrees ≤ 0, found a term in degree {hi}"));
        }
        for n in lo..=hi {
            if !cls.e().contains(x.term(n))? {
                return Err(Error::NotMember(format!("term in degree {n}")));
            }
        }
        let mut witnesses = Vec::new();
        for n in lo..0 {
            match cls.left_ext(&x.diff(n - 1), &x.diff(n), Policy::Auto)? {
                Verdict::Yes(w) => witnesses.push((n, w)),
                Verdict::No(r) => return Ok(Verdict::No(format!("degree {n}: {r}"))),
                Verdict::Unknown(r) => return Ok(Verdict::Unknown(format!("degree {n}: {r}"))),
            }
        }
        Ok(Verdict::Yes(ExtResolution { complex: x.clone(), witnesses }))
    }

    pub fn witness(&self, n: i32) -> Option<&ExtWitness> {
        self.witnesses.iter().find(|(m, _)| *m == n).map(|(_, w)| w)
    }

    /// `coker Y(d^{-1})`.
    pub fn functor(&self) -> FpFunctor {
        FpFunctor::new(self.complex.diff(-1))
    }
}

/// `P^n ⊆ X^n ⊕ W^{n+1}` with `p: W^n ↠ P^n`, `q: P^n → X^n`, `b: P^n → W^{n+1}`.
struct Stage {
    p: ModuleMap,
    q: ModuleMap,
    b: ModuleMap,
}

/// Degree-indexed pieces of a complex `W` and a map `W → X`.
#[derive(Default)]
struct Pieces {
    terms: BTreeMap<i32, Module>,
    diffs: BTreeMap<i32, ModuleMap>,
    g: BTreeMap<i32, ModuleMap>,
}

impl Pieces {
    fn complex(&self, alg: &PathAlgebra) -> Result<Complex> {
        let (Some(&lo), Some(&hi)) = (self.terms.keys().next(), self.terms.keys().next_back()) else {
            return Ok(Complex::zero_complex(alg));
        };
        let terms = (lo..=hi).map(|n| self.terms.get(&n).cloned().unwrap_or_else(|| Module::zero(alg))).collect::<Vec<_>>();
        let diffs = (lo..hi)
            .map(|n| self.diffs.get(&n).cloned().unwrap_or_else(|| ModuleMap::zero(&terms[(n - lo) as usize], &terms[(n - lo + 1) as usize])))
            .collect();
        Complex::new(alg, lo, terms, diffs)
    }
}

fn chain_map(source: &Complex, target: &Complex, comps: &BTreeMap<i32, ModuleMap>) -> Result<ChainMap> {
    let Some(&lo) = comps.keys().next() else { return Ok(ChainMap::zero(source, target)) };
    let hi = *comps.keys().next_back().expect("nonempty");
    let list = (lo..=hi).map(|n| comps.get(&n).cloned().unwrap_or_else(|| ModuleMap::zero(source.term(n), target.term(n)))).collect();
    ChainMap::new(source, target, lo, list)
}

/// The pullback `P^{n−1}` of `a^{n−1}: X^{n−1} → P^n` along `p^n`, with `q^{n−1}` and `b^{n−1}`.
fn next_stage(alg: &PathAlgebra, x: &Complex, n: i32, st: &Stage) -> Result<(Module, ModuleMap, ModuleMap)> {
    let pn = st.q.source.clone();
    let (xn, wn1) = (x.term(n).clone(), st.b.target.clone());
    let incl = ModuleMap::from_blocks(alg, &[pn], &[xn.clone(), wn1.clone()], &[vec![st.q.clone()], vec![st.b.clone()]]);
    let xm = x.term(n - 1).clone();
    let h = ModuleMap::from_blocks(alg, &[xm.clone()], &[xn, wn1.clone()], &[vec![x.diff(n - 1)], vec![ModuleMap::zero(&xm, &wn1)]]);
    let a = lift_along_mono(&incl, &h).ok_or_else(|| Error::Input(format!("the differential of X into degree {n} does not land in the cycles")))?;
    let (pb, b1, q1) = pullback(alg, &st.p, &a);
    Ok((pb, q1, b1))
}

/// Runs the induction below `top`; `step` returns the deflation onto each new `P` and may record extra data.
fn descend(
    alg: &PathAlgebra,
    x: &Complex,
    top: i32,
    start: Stage,
    depth: usize,
    pieces: &mut Pieces,
    mut step: impl FnMut(i32, &ModuleMap, &ModuleMap) -> Result<ModuleMap>,
) -> Result<()> {
    let mut st = start;
    let mut n = top;
    let mut steps = 0;
    loop {
        let (pb, q1, b1) = next_stage(alg, x, n, &st)?;
        if pb.is_zero() && x.support().map_or(true, |(lo, _)| lo >= n - 1) {
            return Ok(());
        }
        steps += 1;
        if steps > depth {
            return Err(Error::Unsupported(format!("the construction did not stop within depth {depth}")));
        }
        let p = step(n - 1, &q1, &b1)?;
        pieces.terms.insert(n - 1, p.source.clone());
        pieces.diffs.insert(n - 1, b1.compose(&p));
        pieces.g.insert(n - 1, q1.compose(&p));
        st = Stage { p, q: q1, b: b1 };
        n -= 1;
    }
}

/// A deflation `p` and `h` with `t ∘ p = d ∘ h`; identity first, then the witness.
fn lift_cycle(e: &ExactSubcat, w: Option<&ExtWitness>, d: &ModuleMap, t: &ModuleMap, degree: i32) -> Result<(ModuleMap, ModuleMap)> {
    if let Some(h) = lift_through(&e.alg, d, t) {
        return Ok((t.source.identity(), h));
    }
    let w = w.ok_or_else(|| Error::Unknown(format!("no acyclicity witness in degree {degree}")))?;
    ext_lift(e, w, d, t)?.ok_or_else(|| Error::Unknown(format!("the witness in degree {degree} does not lift the test map")))
}

fn check_nonpositive(x: &Complex, what: &str) -> Result<()> {
    match x.support() {
        Some((_, hi)) if hi > 0 => input(format!("{what} has a term in degree {hi} > 0")),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub w: Complex,
    /// An `E`-quasi-isomorphism, the identity in degrees `≥ −1`.
    pub g: ChainMap,
    pub f_hat: ChainMap,
}

impl LiftResult {
    pub fn verify(&self, cls: &Classifier, f0: &ModuleMap, f_minus1: &ModuleMap) -> Result<bool> {
        let x = &self.g.target;
        let agrees = (-1..=0).all(|n| *self.w.term(n) == *x.term(n) && self.g.comp(n) == x.term(n).identity());
        Ok(agrees
            && self.g.is_chain_map()
            && self.f_hat.is_chain_map()
            && self.f_hat.comp(0) == *f0
            && self.f_hat.comp(-1) == *f_minus1
            && cls.is_quasi_iso(&self.g)?)
    }
}

/// Extends `f⁰, f^{−1}` to a chain map `W → Y` after an `E`-quasi-isomorphism `W → X`.
pub fn extend_to_chain_map(
    cls: &Classifier,
    x: &Complex,
    y: &ExtResolution,
    f0: &ModuleMap,
    f_minus1: &ModuleMap,
    depth: usize,
) -> Result<LiftResult> {
    let alg = cls.alg();
    let yc = &y.complex;
    check_nonpositive(x, "X")?;
    if f0.source != *x.term(0) || f0.target != *yc.term(0) || f_minus1.source != *x.term(-1) || f_minus1.target != *yc.term(-1) {
        return input("seed maps do not match the complexes");
    }
    if f0.compose(&x.diff(-1)) != yc.diff(-1).compose(f_minus1) {
        return input("the seed square does not commute");
    }
    let mut pieces = Pieces::default();
    let mut f_hat: BTreeMap<i32, ModuleMap> = BTreeMap::new();
    for (n, f) in [(0, f0), (-1, f_minus1)] {
        pieces.terms.insert(n, x.term(n).clone());
        pieces.g.insert(n, x.term(n).identity());
        f_hat.insert(n, f.clone());
    }
    pieces.diffs.insert(-1, x.diff(-1));
    let x1 = x.term(-1);
    let start = Stage { p: x1.identity(), q: x1.identity(), b: x.diff(-1) };
    descend(alg, x, -1, start, depth, &mut pieces, |m, _q1, b1| {
        let t = f_hat[&(m + 1)].compose(b1);
        let (p, h) = lift_cycle(cls.e(), y.witness(m + 1), &yc.diff(m), &t, m + 1)?;
        f_hat.insert(m, h);
        Ok(p)
    })?;
    let w = pieces.complex(alg)?;
    let g = chain_map(&w, x, &pieces.g)?;
    let f_hat = chain_map(&w, yc, &f_hat)?;
    Ok(LiftResult { w, g, f_hat })
}

#[derive(Clone, Debug)]
pub struct HomotopyResult {
    pub w: Complex,
    pub g: ChainMap,
    /// `hⁿ: Wⁿ → Y^{n−1}` with `fⁿgⁿ = d_Y^{n−1}hⁿ + h^{n+1}d_Wⁿ`.
    pub h: Vec<(i32, ModuleMap)>,
}

impl HomotopyResult {
    pub fn verify(&self, cls: &Classifier, f: &ChainMap) -> Result<bool> {
        Ok(self.g.is_chain_map() && verify_homotopy(&f.compose(&self.g), &self.h) && cls.is_quasi_iso(&self.g)?)
    }
}

/// Given `f: X → Y` with `f⁰ = d_Y^{−1} h⁰`, an `E`-quasi-isomorphism `g` with `f ∘ g` null-homotopic.
pub fn null_homotopy_after_qis(cls: &Classifier, f: &ChainMap, y: &ExtResolution, h0: &ModuleMap, depth: usize) -> Result<HomotopyResult> {
    let alg = cls.alg();
    let x = &f.source;
    let yc = &y.complex;
    check_nonpositive(x, "X")?;
    if f.target != *yc {
        return input("the chain map does not land in the resolution");
    }
    if h0.source != *x.term(0) || h0.target != *yc.term(-1) || yc.diff(-1).compose(h0) != f.comp(0) {
        return input("f⁰ does not factor as d_Y^{-1} h⁰");
    }
    let mut pieces = Pieces::default();
    pieces.terms.insert(0, x.term(0).clone());
    pieces.g.insert(0, x.term(0).identity());
    let mut h: BTreeMap<i32, ModuleMap> = BTreeMap::new();
    h.insert(0, h0.clone());
    let x0 = x.term(0);
    let start = Stage { p: x0.identity(), q: x0.identity(), b: x.diff(0) };
    descend(alg, x, 0, start, depth, &mut pieces, |m, q1, b1| {
        let t = f.comp(m).compose(q1).sub(&h[&(m + 1)].compose(b1));
        let (p, hm) = lift_cycle(cls.e(), y.witness(m), &yc.diff(m - 1), &t, m)?;
        h.insert(m, hm);
        Ok(p)
    })?;
    let w = pieces.complex(alg)?;
    let g = chain_map(&w, x, &pieces.g)?;
    Ok(HomotopyResult { w, g, h: h.into_iter().collect() })
}

/// Some `x: src → tgt` with `ops₁(x) + ops₂(y) = target` for some `y`.
fn solve_two(src: &Module, tgt: &Module, first: &[(ModuleMap, ModuleMap)], second: &[ModuleMap], target: &ModuleMap) -> Option<ModuleMap> {
    let mut spanning: Vec<ModuleMap> = first.iter().map(|(_, im)| im.clone()).collect();
    spanning.extend(second.iter().cloned());
    let c = solve_in_span(&spanning, target)?;
    let basis: Vec<ModuleMap> = first.iter().map(|(b, _)| b.clone()).collect();
    Some(combine(src, tgt, &basis, &c[..basis.len()]))
}

#[derive(Clone, Debug)]
pub struct Horseshoe {
    pub w: Complex,
    /// An `E`-quasi-isomorphism `W → Z`.
    pub g: ChainMap,
    /// `Σ^{−1}W → X`.
    pub f: ChainMap,
    pub resolution: Complex,
}

/// Resolution of the middle term of `0 → F' → F → F'' → 0` from resolutions `x` of `F'` and `z` of `F''`.
pub fn horseshoe(
    cls: &Classifier,
    tr: &Transport,
    alpha: &FunctorMap,
    beta: &FunctorMap,
    x: &ExtResolution,
    z: &ExtResolution,
    depth: usize,
) -> Result<Horseshoe> {
    let alg = cls.alg();
    let (xc, zc) = (&x.complex, &z.complex);
    if alpha.source.pres != xc.diff(-1) || beta.target.pres != zc.diff(-1) {
        return input("the end terms are not presented by the given resolutions");
    }
    if alpha.target != beta.source {
        return input("the maps do not compose");
    }
    if !is_short_exact(&tr.map_module(alpha)?, &tr.map_module(beta)?) {
        return input("the sequence of functors is not short exact");
    }
    let ff = &alpha.target.pres;
    let (n, z0, zm1) = (&ff.target, zc.term(0), zc.term(-1));
    // s: Z⁰ → N lifting the canonical Y(Z⁰) → F''.
    let first: Vec<(ModuleMap, ModuleMap)> = hom_basis(alg, z0, n).into_iter().map(|s| (s.clone(), beta.top.compose(&s))).collect();
    let second: Vec<ModuleMap> = hom_basis(alg, z0, zm1).iter().map(|u| zc.diff(-1).compose(u)).collect();
    let s = if z0.is_zero() {
        ModuleMap::zero(z0, n)
    } else {
        solve_two(z0, n, &first, &second, &z0.identity()).ok_or_else(|| Error::Input("Y(Z⁰) → F'' does not lift to F".into()))?
    };
    // f⁰: Z^{−1} → X⁰ with ι f⁰ ≡ −s d_Z^{−1} modulo the relations of F.
    let x0 = xc.term(0);
    let target = s.compose(&zc.diff(-1)).neg();
    let first: Vec<(ModuleMap, ModuleMap)> = hom_basis(alg, zm1, x0).into_iter().map(|m| (m.clone(), alpha.top.compose(&m))).collect();
    let second: Vec<ModuleMap> = hom_basis(alg, zm1, &ff.source).iter().map(|y| ff.compose(y)).collect();
    let f0 = if zm1.is_zero() || x0.is_zero() {
        if !target.is_zero() && solve_in_span(&second, &target).is_none() {
            return input("the composite Y(Z^{-1}) → F does not factor through F'");
        }
        ModuleMap::zero(zm1, x0)
    } else {
        solve_two(zm1, x0, &first, &second, &target).ok_or_else(|| Error::Input("the composite Y(Z^{-1}) → F does not factor through F'".into()))?
    };
    let zm2 = zc.term(-2);
    let fm1 = lift_through(alg, &xc.diff(-1), &f0.compose(&zc.diff(-2)).neg())
        .ok_or_else(|| Error::Input("f⁰ d_Z^{-2} does not factor through d_X^{-1}".into()))?;
    debug_assert_eq!(fm1.source, *zm2);
    let sz = zc.shift(-1);
    let xs = sz.rewindow(sz.lo.min(0), 0);
    let lift = extend_to_chain_map(cls, &xs, x, &f0, &fm1, depth)?;
    // Reattach Z⁰ in degree 1 and shift back.
    let wl = &lift.w;
    let lo = wl.lo.min(0);
    let mut terms: Vec<Module> = (lo..=0).map(|k| wl.term(k).clone()).collect();
    terms.push(z0.clone());
    let mut diffs: Vec<ModuleMap> = (lo..0).map(|k| wl.diff(k)).collect();
    diffs.push(zc.diff(-1).neg());
    let w2 = Complex::new(alg, lo, terms, diffs)?;
    let w = w2.shift(1);
    let mut gc: BTreeMap<i32, ModuleMap> = (lo..=0).map(|k| (k - 1, lift.g.comp(k))).collect();
    gc.insert(0, z0.identity());
    let g = chain_map(&w, zc, &gc)?;
    let fc: BTreeMap<i32, ModuleMap> = (lo..=0).map(|k| (k, lift.f_hat.comp(k))).collect();
    let f = chain_map(&w.shift(-1), xc, &fc)?;
    let resolution = cone(alg, &f).trim();
    Ok(Horseshoe { w, g, f, resolution })
}

#[derive(Clone, Debug)]
pub struct Padded {
    /// Degree 0 is `N ⊕ X⁰`, degree −1 is `M ⊕ X^{−1} ⊕ N`, degree −2 is `X^{−2} ⊕ M`.
    pub complex: Complex,
    pub t: ModuleMap,
    /// `t ∘ section = id`.
    pub section: ModuleMap,
    /// The isomorphism from `X ⊕ (N = N) ⊕ (M = M)`.
    pub iso: ChainMap,
}

/// The `Ext_E`-resolution `X'` with `d^{−1} = f ⊕ t` for `t` split epi, when `coker Y(f) ≅ coker Y(d_X^{−1})`.
pub fn pad_presentation(tr: &Transport, f: &ModuleMap, x: &ExtResolution) -> Result<Padded> {
    let alg = &tr.e.alg;
    let xc = &x.complex;
    let d = xc.diff(-1);
    let ff = FpFunctor::new(f.clone());
    let fd = FpFunctor::new(d.clone());
    let phi = tr.iso(&ff, &fd)?.ok_or_else(|| Error::Input("the cokernels differ".into()))?;
    let psi = phi.inverse().expect("iso");
    let u = induced_top(tr, &ff, &fd, &phi).ok_or_else(|| Error::Input("no lift N → X⁰ of the iso".into()))?;
    let v = induced_top(tr, &fd, &ff, &psi).ok_or_else(|| Error::Input("no lift X⁰ → N of the inverse".into()))?;
    let missing = || Error::Input("the lifted maps do not respect the presentations".into());
    let a = lift_through(alg, &d, &u.compose(f)).ok_or_else(missing)?;
    let b = lift_through(alg, f, &v.compose(&d)).ok_or_else(missing)?;
    let (mm, nn, x0, x1, x2) = (f.source.clone(), f.target.clone(), xc.term(0).clone(), xc.term(-1).clone(), xc.term(-2).clone());
    let k = lift_through(alg, f, &v.compose(&u).sub(&nn.identity())).ok_or_else(missing)?;
    let l = lift_through(alg, &d, &u.compose(&v).sub(&x0.identity())).ok_or_else(missing)?;

    let z = ModuleMap::zero;
    let rows0 = [x0.clone(), nn.clone()];
    let cols1 = [x1.clone(), nn.clone(), mm.clone()];
    // Row operations on (X⁰, N) and column operations on (X^{−1}, N, M).
    let r_add = |to_n_from_x: &ModuleMap, to_x_from_n: &ModuleMap| {
        ModuleMap::from_blocks(alg, &rows0, &rows0, &[vec![x0.identity(), to_x_from_n.clone()], vec![to_n_from_x.clone(), nn.identity()]])
    };
    let c_op = |entries: [[Option<ModuleMap>; 3]; 3]| {
        let blocks: Vec<Vec<ModuleMap>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| match &entries[i][j] {
                        Some(m) => m.clone(),
                        None if i == j => cols1[i].identity(),
                        None => z(&cols1[j], &cols1[i]),
                    })
                    .collect()
            })
            .collect();
        ModuleMap::from_blocks(alg, &cols1, &cols1, &blocks)
    };
    let r1 = r_add(&v, &z(&nn, &x0));
    let r4 = r_add(&z(&x0, &nn), &u.neg());
    let c2 = c_op([[None, None, None], [None, None, Some(f.clone())], [None, None, None]]);
    let c3 = c_op([[None, None, None], [None, None, None], [Some(b.neg()), None, None]]);
    let c5 = c_op([[None, None, Some(a.clone())], [None, None, None], [None, None, None]]);
    let c8 = c_op([[None, None, None], [None, None, None], [None, Some(k.clone()), None]]);
    let rtot = r1.compose(&r4).compose(&r1);
    let ctot = c2.compose(&c3).compose(&c5).compose(&c3).compose(&c8);

    let d1 = ModuleMap::from_blocks(alg, &cols1, &rows0, &[vec![d.clone(), z(&nn, &x0), z(&mm, &x0)], vec![z(&x1, &nn), nn.identity(), z(&mm, &nn)]]);
    let rows0p = [nn.clone(), x0.clone()];
    let cols1p = [mm.clone(), x1.clone(), nn.clone()];
    let swap0 = ModuleMap::from_blocks(alg, &rows0, &rows0p, &[vec![z(&x0, &nn), nn.identity()], vec![x0.identity(), z(&nn, &x0)]]);
    let perm1 = ModuleMap::from_blocks(
        alg,
        &cols1p,
        &cols1,
        &[
            vec![z(&mm, &x1), x1.identity(), z(&nn, &x1)],
            vec![z(&mm, &nn), z(&x1, &nn), nn.identity()],
            vec![mm.identity(), z(&x1, &mm), z(&nn, &mm)],
        ],
    );
    let sigma = swap0.compose(&rtot);
    let tau_inv = ctot.compose(&perm1);
    let tau = tau_inv.inverse().expect("elementary operations are invertible");
    let new_d1 = sigma.compose(&d1).compose(&tau_inv);
    let t = ModuleMap::from_blocks(alg, &[x1.clone(), nn.clone()], &[x0.clone()], &[vec![d.clone(), u.neg()]]);
    let expected = ModuleMap::from_blocks(
        alg,
        &[mm.clone(), x1.clone(), nn.clone()],
        &rows0p,
        &[vec![f.clone(), z(&x1, &nn), z(&nn, &nn)], vec![z(&mm, &x0), d.clone(), u.neg()]],
    );
    if new_d1 != expected {
        return Err(Error::Input("padding identities failed; the presentations are inconsistent".into()));
    }
    let section = ModuleMap::from_blocks(alg, &[x0.clone()], &[x1.clone(), nn.clone()], &[vec![l.neg()], vec![v.neg()]]);
    debug_assert!(t.compose(&section) == x0.identity());

    // X ⊕ C and X' share all degrees except −2, −1, 0.
    let d2 = ModuleMap::from_blocks(alg, &[x2.clone(), mm.clone()], &cols1, &[vec![xc.diff(-2), z(&mm, &x1)], vec![z(&x2, &nn), z(&mm, &nn)], vec![z(&x2, &mm), mm.identity()]]);
    let x3 = xc.term(-3).clone();
    let d3 = ModuleMap::from_blocks(alg, &[x3.clone()], &[x2.clone(), mm.clone()], &[vec![xc.diff(-3)], vec![z(&x3, &mm)]]);
    let lo = xc.lo.min(-2);
    let build = |t0: Module, t1: Module, d1: ModuleMap, d2: ModuleMap| -> Result<Complex> {
        let sum2 = crate::module::direct_sum(alg, &[x2.clone(), mm.clone()]).module;
        let mut terms: Vec<Module> = (lo..-2).map(|k| xc.term(k).clone()).collect();
        terms.extend([sum2, t1, t0]);
        let mut diffs: Vec<ModuleMap> = (lo..-3).map(|k| xc.diff(k)).collect();
        if lo < -2 {
            diffs.push(d3.clone());
        }
        diffs.extend([d2, d1]);
        Complex::new(alg, lo, terms, diffs)
    };
    let plain = build(crate::module::direct_sum(alg, &rows0).module, crate::module::direct_sum(alg, &cols1).module, d1, d2.clone())?;
    let complex = build(sigma.target.clone(), tau.target.clone(), new_d1, tau.compose(&d2))?;
    let mut comps: BTreeMap<i32, ModuleMap> = (lo..=0).map(|k| (k, plain.term(k).identity())).collect();
    comps.insert(0, sigma);
    comps.insert(-1, tau);
    let iso = chain_map(&plain, &complex, &comps)?;
    Ok(Padded { complex, t, section, iso })
}

/// A top map `N → N'` inducing the given `Γ`-module map between `F(T)` and `G(T)`.
pub fn induced_top(tr: &Transport, src: &FpFunctor, tgt: &FpFunctor, phi: &ModuleMap) -> Option<ModuleMap> {
    let alg = &tr.e.alg;
    let field = alg.field;
    let (n, n2) = (&src.pres.target, &tgt.pres.target);
    let basis = hom_basis(alg, n, n2);
    let mut cols: Vec<Vec<crate::linalg::Scalar>> = vec![Vec::new(); basis.len()];
    let mut rhs = Vec::new();
    for (v, g) in tr.e.generators.iter().enumerate() {
        let vs = src.value(alg, g);
        let vt = tgt.value(alg, g);
        for h in &vs.hom {
            for (c, u) in cols.iter_mut().zip(&basis) {
                c.extend(vt.class_of(&u.compose(h)));
            }
            let image = phi.comps[v].mul(&Matrix::column(field, vs.class_of(h)));
            rhs.extend((0..image.rows()).map(|i| image.get(i, 0).clone()));
        }
    }
    if basis.is_empty() {
        return rhs.iter().all(|c| c.is_zero()).then(|| ModuleMap::zero(n, n2));
    }
    let rows = rhs.len();
    let a = Matrix::hstack(field, rows, &cols.iter().map(|c| Matrix::column(field, c.clone())).collect::<Vec<_>>().iter().collect::<Vec<_>>());
    let sol = a.solve(&Matrix::column(field, rhs)).ok()??;
    let coeffs: Vec<_> = (0..basis.len()).map(|i| sol.get(i, 0).clone()).collect();
    Some(combine(n, n2, &basis, &coeffs))
}

#[derive(Clone, Debug)]
pub struct Transfer {
    pub w: Complex,
    /// A quasi-isomorphism for the ambient structure.
    pub f: ChainMap,
}

/// Moves a resolution over the ambient `F` to one with terms in `e`, for `e` resolving in `F`.
pub fn transfer_resolution(ambient: &ExactSubcat, e: &ExactSubcat, x: &ExtResolution, depth: usize) -> Result<Transfer> {
    let alg = &e.alg;
    let xc = &x.complex;
    check_nonpositive(xc, "X")?;
    let cover = |p: &Module, degree: i32| -> Result<ModuleMap> {
        let approx = minimal_right_approximation(e, p)?;
        if ambient.is_deflation(&approx)?.is_none() {
            return Err(Error::NotMember(format!("no deflation from the subcategory onto the object in degree {degree}")));
        }
        Ok(approx)
    };
    let x0 = xc.term(0);
    let p0 = cover(x0, 0)?;
    let mut pieces = Pieces::default();
    pieces.terms.insert(0, p0.source.clone());
    pieces.g.insert(0, p0.clone());
    let start = Stage { p: p0, q: x0.identity(), b: ModuleMap::zero(x0, xc.term(1)) };
    descend(alg, xc, 0, start, depth, &mut pieces, |m, q1, _| cover(&q1.source, m))?;
    let w = pieces.complex(alg)?;
    let f = chain_map(&w, xc, &pieces.g)?;
    Ok(Transfer { w, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Structure;
    use crate::linalg::FieldSpec;
    use crate::module::tests::a2;

    fn setup() -> (PathAlgebra, Module, Module, Module, ModuleMap, ModuleMap) {
        let alg = a2(FieldSpec::Rationals);
        let p1 = Module::projective(&alg, 0);
        let p2 = Module::projective(&alg, 1);
        let i2 = Module::injective(&alg, 1);
        let i = hom_basis(&alg, &p1, &p2).remove(0);
        let g = hom_basis(&alg, &p2, &i2).remove(0);
        (alg, p1, p2, i2, i, g)
    }

    fn certified(cls: &Classifier, x: &Complex) -> ExtResolution {
        match ExtResolution::certify(cls, x).unwrap() {
            Verdict::Yes(r) => r,
            v => panic!("not a resolution: {}", v.label()),
        }
    }

    #[test]
    fn certify_examples() {
        let (alg, _, p2, _, i, g) = setup();
        let cls = Classifier::new(&ExactSubcat::module_category(&alg, 4).unwrap()).unwrap();
        let full = Complex::three_term(&alg, &i, &g, -2).unwrap();
        assert!(ExtResolution::certify(&cls, &full).unwrap().is_yes());
        assert!(ExtResolution::certify(&cls, &Complex::two_term(&alg, &g, -1)).unwrap().is_no());
        assert!(ExtResolution::certify(&cls, &Complex::stalk(&alg, &p2, 0)).unwrap().is_yes());
    }

    #[test]
    fn lift_examples() {
        let (alg, p1, p2, _, i, _) = setup();
        let e = ExactSubcat::new(&alg, vec![p1.clone(), p2.clone()], Structure::Split).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let y = certified(&cls, &Complex::two_term(&alg, &i, -1));
        let r = extend_to_chain_map(&cls, &y.complex, &y, &p2.identity(), &p1.identity(), 6).unwrap();
        assert_eq!(r.w, y.complex);
        assert!(r.verify(&cls, &p2.identity(), &p1.identity()).unwrap());
        let x = Complex::stalk(&alg, &p2, 0);
        let z = ModuleMap::zero(&Module::zero(&alg), &p1);
        let r = extend_to_chain_map(&cls, &x, &y, &p2.identity(), &z, 6).unwrap();
        assert_eq!(r.w.trim(), x);
        assert!(r.verify(&cls, &p2.identity(), &z).unwrap());
        let bad = extend_to_chain_map(&cls, &y.complex, &y, &p2.identity(), &ModuleMap::zero(&p1, &p1), 6);
        assert!(matches!(bad, Err(Error::Input(_))));
    }

    #[test]
    fn lift_over_module_category() {
        let (alg, _, p2, i2, i, g) = setup();
        let e = ExactSubcat::module_category(&alg, 4).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let y = certified(&cls, &Complex::three_term(&alg, &i, &g, -2).unwrap());
        let x = Complex::two_term(&alg, &g, -1);
        let r = extend_to_chain_map(&cls, &x, &y, &i2.identity(), &p2.identity(), 6).unwrap();
        assert!(r.verify(&cls, &i2.identity(), &p2.identity()).unwrap());
        assert_eq!(r.w, x);
    }

    #[test]
    fn null_homotopy_examples() {
        let (alg, p1, p2, _, i, _) = setup();
        let e = ExactSubcat::new(&alg, vec![p1.clone(), p2.clone()], Structure::Split).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let y = certified(&cls, &Complex::two_term(&alg, &i, -1));
        let x = Complex::stalk(&alg, &p1, 0);
        let f = ChainMap::new(&x, &y.complex, 0, vec![i.clone()]).unwrap();
        let r = null_homotopy_after_qis(&cls, &f, &y, &p1.identity(), 6).unwrap();
        assert!(r.verify(&cls, &f).unwrap());
        let zero = ChainMap::zero(&y.complex, &y.complex);
        let r = null_homotopy_after_qis(&cls, &zero, &y, &ModuleMap::zero(&p2, &p1), 6).unwrap();
        assert_eq!(r.w, y.complex);
        assert!(r.verify(&cls, &zero).unwrap());
    }

    #[test]
    fn gaps_in_the_source_are_kept() {
        let (alg, _, p2, i2, _, _) = setup();
        let e = ExactSubcat::module_category(&alg, 4).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let zero = Module::zero(&alg);
        let x = Complex::new(&alg, -2, vec![i2.clone(), zero.clone(), p2.clone()], vec![ModuleMap::zero(&i2, &zero), ModuleMap::zero(&zero, &p2)]).unwrap();
        let y = certified(&cls, &Complex::stalk(&alg, &p2, 0));
        let f = ChainMap::zero(&x, &y.complex);
        let r = null_homotopy_after_qis(&cls, &f, &y, &ModuleMap::zero(&p2, &zero), 6).unwrap();
        assert!(!r.w.term(-2).is_zero());
        assert!(r.verify(&cls, &f).unwrap());
        let l = extend_to_chain_map(&cls, &x, &y, &p2.identity(), &ModuleMap::zero(&zero, &zero), 6).unwrap();
        assert!(l.verify(&cls, &p2.identity(), &ModuleMap::zero(&zero, &zero)).unwrap());
    }

    #[test]
    fn horseshoe_examples() {
        let (alg, p1, p2, i2, i, _) = setup();
        let e = ExactSubcat::module_category(&alg, 4).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let tr = Transport::new(&e).unwrap();
        let x = certified(&cls, &Complex::stalk(&alg, &p1, 0));
        let z = certified(&cls, &Complex::two_term(&alg, &i, -1));
        let fx = x.functor();
        let mid = FpFunctor::representable(&alg, &p2);
        let alpha = FunctorMap::new(&alg, &fx, &mid, i.clone()).unwrap();
        let beta = FunctorMap::new(&alg, &mid, &z.functor(), p2.identity()).unwrap();
        let h = horseshoe(&cls, &tr, &alpha, &beta, &x, &z, 6).unwrap();
        assert!(h.g.is_chain_map() && h.f.is_chain_map());
        assert!(cls.is_quasi_iso(&h.g).unwrap());
        let res = certified(&cls, &h.resolution);
        assert!(tr.is_iso(&res.functor(), &mid).unwrap());
        // Split case.
        let x = certified(&cls, &Complex::stalk(&alg, &p1, 0));
        let z = certified(&cls, &Complex::stalk(&alg, &i2, 0));
        let sum = crate::module::direct_sum(&alg, &[p1.clone(), i2.clone()]);
        let mid = FpFunctor::representable(&alg, &sum.module);
        let alpha = FunctorMap::new(&alg, &x.functor(), &mid, sum.incl[0].clone()).unwrap();
        let beta = FunctorMap::new(&alg, &mid, &z.functor(), sum.proj[1].clone()).unwrap();
        let h = horseshoe(&cls, &tr, &alpha, &beta, &x, &z, 6).unwrap();
        assert!(h.f.is_zero());
        assert!(tr.is_iso(&certified(&cls, &h.resolution).functor(), &mid).unwrap());
        let bad = FunctorMap::new(&alg, &mid, &z.functor(), ModuleMap::zero(&sum.module, &i2)).unwrap();
        assert!(horseshoe(&cls, &tr, &alpha, &bad, &x, &z, 6).is_err());
    }

    #[test]
    fn padding_examples() {
        let (alg, p1, p2, i2, i, g) = setup();
        let e = ExactSubcat::module_category(&alg, 4).unwrap();
        let cls = Classifier::new(&e).unwrap();
        let tr = Transport::new(&e).unwrap();
        let x = certified(&cls, &Complex::three_term(&alg, &i, &g, -2).unwrap());
        for f in [g.clone(), ModuleMap::from_blocks(&alg, &[p2.clone(), p1.clone()], &[i2.clone()], &[vec![g.clone(), ModuleMap::zero(&p1, &i2)]])] {
            let pad = pad_presentation(&tr, &f, &x).unwrap();
            assert!(pad.iso.is_chain_map());
            assert!((-3..=1).all(|n| pad.iso.comp(n).is_iso()));
            assert_eq!(pad.t.compose(&pad.section), pad.t.target.identity());
            assert!(ExtResolution::certify(&cls, &pad.complex).unwrap().is_yes());
            let d = pad.complex.diff(-1);
            assert_eq!(d.source.total_dim(), f.source.total_dim() + pad.t.source.total_dim());
        }
        let y = certified(&cls, &Complex::stalk(&alg, &i2, 0));
        let zf = ModuleMap::zero(&Module::zero(&alg), &i2);
        let pad = pad_presentation(&tr, &zf, &y).unwrap();
        assert!(pad.t.is_surjective());
        assert!(pad_presentation(&tr, &i, &y).is_err());
    }

    #[test]
    fn transfer_example() {
        let (alg, p1, p2, i2, i, _) = setup();
        let ambient = ExactSubcat::module_category(&alg, 4).unwrap();
        let cls = Classifier::new(&ambient).unwrap();
        let e = ExactSubcat::new(&alg, vec![p1.clone(), p2.clone()], Structure::Induced).unwrap();
        let x = certified(&cls, &Complex::stalk(&alg, &i2, 0));
        let t = transfer_resolution(&ambient, &e, &x, 6).unwrap();
        assert_eq!(t.w.trim().terms, vec![p1.clone(), p2.clone()]);
        assert!(hom_basis(&alg, &p1, &p2).len() == 1 && !t.w.diff(-1).is_zero());
        assert!(cls.is_quasi_iso(&t.f).unwrap());
        let same = transfer_resolution(&ambient, &ambient, &x, 6).unwrap();
        assert_eq!(same.w.trim(), x.complex);
        let _ = i;
    }
}

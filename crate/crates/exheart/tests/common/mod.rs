//! Fixtures, lemma checks and instance generators shared by the property and acceptance suites.
#![allow(dead_code)]

use exheart::acyclic::{Classifier, Policy};
use exheart::complex::{chain_map_basis, cone, verify_homotopy, ChainMap, Complex};
use exheart::exact::{ExactSubcat, Structure};
use exheart::extresn::{extend_to_chain_map, horseshoe, induced_top, null_homotopy_after_qis, ExtResolution};
use exheart::fixtures::{a2, dual_numbers};
use exheart::functor::{
    is_effaceable, membership_completion, transported_projective_dimension, weak_kernel_resolution, Completion, FpFunctor, FunctorMap,
    ResolutionOutcome, Transport,
};
use exheart::module::{ext1, find_iso, hom_basis, is_short_exact, maps_matrix, Module, ModuleMap};
use exheart::quiver::PathAlgebra;
use exheart::sample;
use exheart::{FieldSpec, Result};
use rand::Rng;

pub const F5: FieldSpec = FieldSpec::Prime(5);

pub struct Fixture {
    pub name: &'static str,
    pub cls: Classifier,
}

impl Fixture {
    pub fn e(&self) -> &ExactSubcat {
        self.cls.e()
    }

    pub fn alg(&self) -> &PathAlgebra {
        self.cls.alg()
    }
}

fn fixture(name: &'static str, e: ExactSubcat) -> Fixture {
    Fixture { name, cls: Classifier::new(&e).unwrap() }
}

/// Exact structures over `k(1 ← 2)`.
pub fn a2_fixtures(field: FieldSpec) -> Vec<Fixture> {
    let alg = a2(field);
    let (p1, p2) = (Module::projective(&alg, 0), Module::projective(&alg, 1));
    let (i1, i2) = (Module::injective(&alg, 0), Module::injective(&alg, 1));
    vec![
        fixture("mod kA2", ExactSubcat::module_category(&alg, 4).unwrap()),
        fixture("add(I1+I2) induced", ExactSubcat::new(&alg, vec![i1, i2], Structure::Induced).unwrap()),
        fixture("add(P1+P2) split", ExactSubcat::new(&alg, vec![p1, p2], Structure::Split).unwrap()),
    ]
}

/// Exact structures over `k[T]/(T²)`.
pub fn dual_number_fixtures(field: FieldSpec) -> Vec<Fixture> {
    let alg = dual_numbers(field);
    let lam = Module::projective(&alg, 0);
    vec![
        fixture("add(L) split", ExactSubcat::new(&alg, vec![lam.clone()], Structure::Split).unwrap()),
        fixture("add(L) induced", ExactSubcat::new(&alg, vec![lam], Structure::Induced).unwrap()),
        fixture("mod k[T]/T2", ExactSubcat::module_category(&alg, 4).unwrap()),
    ]
}

/// Outcome of one implication `premise ⇒ conclusion` on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    /// The premise failed.
    Vacuous,
    /// Some verdict involved was Unknown.
    Indeterminate,
    Violated(String),
}

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub holds: usize,
    pub vacuous: usize,
    pub indeterminate: usize,
    pub violations: Vec<String>,
}

impl Tally {
    pub fn add(&mut self, c: Check) {
        match c {
            Check::Holds => self.holds += 1,
            Check::Vacuous => self.vacuous += 1,
            Check::Indeterminate => self.indeterminate += 1,
            Check::Violated(s) => self.violations.push(s),
        }
    }

    pub fn merge(&mut self, o: Tally) {
        self.holds += o.holds;
        self.vacuous += o.vacuous;
        self.indeterminate += o.indeterminate;
        self.violations.extend(o.violations);
    }
}

/// Left Ext-acyclicity of `x` at degree `n`; `None` when undetermined.
pub fn acyc(cls: &Classifier, x: &Complex, n: i32) -> Result<Option<bool>> {
    Ok(cls.left_ext(&x.diff(n - 1), &x.diff(n), Policy::Auto)?.as_bool())
}

fn implication(premises: &[Option<bool>], conclusion: Option<bool>, what: impl FnOnce() -> String) -> Check {
    if premises.iter().any(|p| *p == Some(false)) {
        return Check::Vacuous;
    }
    if premises.iter().any(Option::is_none) {
        return Check::Indeterminate;
    }
    match conclusion {
        Some(true) => Check::Holds,
        Some(false) => Check::Violated(what()),
        None => Check::Indeterminate,
    }
}

pub fn degrees(parts: &[&Complex]) -> std::ops::RangeInclusive<i32> {
    let sup: Vec<(i32, i32)> = parts.iter().filter_map(|c| c.support()).collect();
    let lo = sup.iter().map(|s| s.0).min().unwrap_or(0);
    let hi = sup.iter().map(|s| s.1).max().unwrap_or(0);
    lo - 2..=hi + 1
}

/// X at n+1 and Y at n ⇒ cone(f) at n.
pub fn cone_gluing(cls: &Classifier, f: &ChainMap, n: i32) -> Result<Check> {
    let c = cone(cls.alg(), f);
    let px = acyc(cls, &f.source, n + 1)?;
    let py = acyc(cls, &f.target, n)?;
    if px == Some(false) || py == Some(false) {
        return Ok(Check::Vacuous);
    }
    Ok(implication(&[px, py], acyc(cls, &c, n)?, || format!("cone gluing at {n}: {f:?}")))
}

/// (i) X and cone(f) at n ⇒ Y at n; (ii) Y at n and cone(f) at n−1 ⇒ X at n.
pub fn two_out_of_three(cls: &Classifier, f: &ChainMap, n: i32) -> Result<[Check; 2]> {
    let c = cone(cls.alg(), f);
    let (x, y) = (&f.source, &f.target);
    let (xn, yn, cn, cm) = (acyc(cls, x, n)?, acyc(cls, y, n)?, acyc(cls, &c, n)?, acyc(cls, &c, n - 1)?);
    Ok([
        implication(&[xn, cn], yn, || format!("2-of-3 (i) at {n}: {f:?}")),
        implication(&[yn, cm], xn, || format!("2-of-3 (ii) at {n}: {f:?}")),
    ])
}

/// `X` is a retract of `X ⊕ W` and a homotopy retract of `X ⊕ cone(id_Z)`, and conversely.
pub fn retracts(cls: &Classifier, x: &Complex, w: &Complex, z: &Complex, n: i32) -> Result<[Check; 3]> {
    let alg = cls.alg();
    let xw = Complex::direct_sum(alg, &[x.clone(), w.clone()]);
    let cz = cone(alg, &z.identity());
    let xc = Complex::direct_sum(alg, &[x.clone(), cz]);
    let (ax, axw, axc) = (acyc(cls, x, n)?, acyc(cls, &xw, n)?, acyc(cls, &xc, n)?);
    Ok([
        implication(&[axw], ax, || format!("retract of X+W at {n}: {x:?} {w:?}")),
        implication(&[axc], ax, || format!("retract of X+cone(id) at {n}: {x:?} {z:?}")),
        implication(&[ax], axc, || format!("homotopy retract X -> X+cone(id) at {n}: {x:?} {z:?}")),
    ])
}

/// When `d^{n−1}` is a monomorphism in `E`, left Ext- and left Hom-acyclicity agree at `n`.
pub fn mono_bridge(cls: &Classifier, x: &Complex, n: i32) -> Result<Check> {
    let (f, g) = (x.diff(n - 1), x.diff(n));
    if !cls.e().is_mono_in_e(&f) {
        return Ok(Check::Vacuous);
    }
    let r = cls.sequence(&f, &g, n)?;
    Ok(match (r.left_ext.as_bool(), r.left_hom.as_bool()) {
        (Some(a), Some(b)) if a == b => Check::Holds,
        (Some(a), Some(b)) => Check::Violated(format!("mono at {n}: left_ext {a}, left_hom {b}: {x:?}")),
        _ => Check::Indeterminate,
    })
}

pub fn lattice(cls: &Classifier, x: &Complex, n: i32) -> Result<Check> {
    let r = cls.classify(x, n)?;
    Ok(match r.lattice_violation() {
        None if r.flags().iter().any(|v| v.is_unknown()) => Check::Indeterminate,
        None => Check::Holds,
        Some((a, b)) => Check::Violated(format!("{a} without {b} at {n}: {x:?}")),
    })
}

pub fn random_complex<R: Rng>(rng: &mut R, e: &ExactSubcat) -> Complex {
    let len = rng.gen_range(1..=3);
    let lo = rng.gen_range(-2..=0);
    sample::complex(rng, e, lo, len, 1).unwrap()
}

/// Every lemma of the cone/retract/two-out-of-three family on one random instance.
pub fn closure_instance<R: Rng>(rng: &mut R, fx: &Fixture, tally: &mut [Tally; 3]) -> Result<()> {
    let (cls, e) = (&fx.cls, fx.e());
    let x = random_complex(rng, e);
    let y = random_complex(rng, e);
    let f = sample::chain_map(rng, cls.alg(), &x, &y);
    for n in degrees(&[&x, &y]) {
        tally[0].add(cone_gluing(cls, &f, n)?);
        for c in two_out_of_three(cls, &f, n)? {
            tally[2].add(c);
        }
    }
    let w = random_complex(rng, e);
    let z = random_complex(rng, e);
    for n in degrees(&[&x, &w, &z]) {
        for c in retracts(cls, &x, &w, &z, n)? {
            tally[1].add(c);
        }
    }
    Ok(())
}

/// Left-Ext verdict against exactness of `A → B → C`, for `E = mod Λ`.
pub fn abelian_oracle(cls: &Classifier, f: &ModuleMap, g: &ModuleMap) -> Result<Check> {
    let exact = exheart::module::is_exact_at(f, g);
    Ok(match cls.left_ext(f, g, Policy::Auto)?.as_bool() {
        Some(v) if v == exact => Check::Holds,
        Some(v) => Check::Violated(format!("left_ext {v}, exact {exact}: {f:?} {g:?}")),
        None => Check::Indeterminate,
    })
}

/// An `Ext_E`-resolution of a random finitely presented functor, when the weak kernels stop.
pub fn random_resolution<R: Rng>(rng: &mut R, fx: &Fixture, depth: usize) -> Result<Option<ExtResolution>> {
    let e = fx.e();
    let alg = fx.alg();
    let n = sample::nonzero_object(rng, e, 1);
    let m = sample::object(rng, e, 1);
    let f = FpFunctor::new(sample::map(rng, alg, &m, &n));
    let r = weak_kernel_resolution(e, &f, depth)?;
    if r.outcome != ResolutionOutcome::Bounded {
        return Ok(None);
    }
    Ok(ExtResolution::certify(&fx.cls, &r.complex)?.into_yes())
}

trait IntoYes<T> {
    fn into_yes(self) -> Option<T>;
}

impl<T> IntoYes<T> for exheart::status::Verdict<T> {
    fn into_yes(self) -> Option<T> {
        match self {
            exheart::status::Verdict::Yes(t) => Some(t),
            _ => None,
        }
    }
}

/// A random nonpositive complex over `e`.
pub fn random_nonpositive<R: Rng>(rng: &mut R, e: &ExactSubcat) -> Complex {
    let len = rng.gen_range(1..=3);
    sample::complex(rng, e, 1 - len as i32, len, 1).unwrap()
}

/// Random element of the space of chain maps between brutal truncations to degrees −1, 0.
fn seed_square<R: Rng>(rng: &mut R, alg: &PathAlgebra, x: &Complex, y: &Complex) -> (ModuleMap, ModuleMap) {
    let (xt, yt) = (x.rewindow(-1, 0), y.rewindow(-1, 0));
    let f = sample::chain_map(rng, alg, &xt, &yt);
    (f.comp(0), f.comp(-1))
}

pub fn lift_instance<R: Rng>(rng: &mut R, fx: &Fixture) -> Result<Option<bool>> {
    let Some(y) = random_resolution(rng, fx, 6)? else { return Ok(None) };
    let x = random_nonpositive(rng, fx.e());
    let (f0, fm1) = seed_square(rng, fx.alg(), &x, &y.complex);
    let r = extend_to_chain_map(&fx.cls, &x, &y, &f0, &fm1, 8)?;
    Ok(Some(r.verify(&fx.cls, &f0, &fm1)?))
}

/// `f` with `f⁰ = d_Y^{−1} h⁰`: a random null-homotopic map plus a random chain map vanishing in degree 0.
pub fn homotopy_instance<R: Rng>(rng: &mut R, fx: &Fixture) -> Result<Option<bool>> {
    let alg = fx.alg();
    let Some(y) = random_resolution(rng, fx, 6)? else { return Ok(None) };
    let yc = &y.complex;
    let x = random_nonpositive(rng, fx.e());
    let (lo, hi) = (x.lo.min(yc.lo) - 1, 1);
    let hs: Vec<(i32, ModuleMap)> = (lo..=hi).map(|n| (n, sample::map(rng, alg, x.term(n), yc.term(n - 1)))).collect();
    let h = |n: i32| hs.iter().find(|(m, _)| *m == n).map(|(_, h)| h.clone()).unwrap_or_else(|| ModuleMap::zero(x.term(n), yc.term(n - 1)));
    let null = ChainMap::from_fn(&x, yc, lo, hi, |n| yc.diff(n - 1).compose(&h(n)).add(&h(n + 1).compose(&x.diff(n))));
    let basis = chain_map_basis(alg, &x, yc);
    let at0: Vec<ModuleMap> = basis.iter().map(|b| b.comp(0)).collect();
    let len = x.term(0).dims.iter().zip(&yc.term(0).dims).map(|(a, b)| a * b).sum();
    let ker = maps_matrix(alg.field, len, &at0).kernel_basis();
    let mut f = null;
    for j in 0..ker.cols() {
        let c = sample::scalar(rng, alg.field);
        for (i, b) in basis.iter().enumerate() {
            f = f.add(&b.scale(&ker.get(i, j).mul(&c)));
        }
    }
    let r = null_homotopy_after_qis(&fx.cls, &f, &y, &h(0), 8)?;
    Ok(Some(r.verify(&fx.cls, &f)? && verify_homotopy(&f.compose(&r.g), &r.h)))
}

/// A short exact sequence of `Γ`-modules from a random extension class, resolved by the horseshoe.
pub fn horseshoe_instance<R: Rng>(rng: &mut R, fx: &Fixture, tr: &Transport) -> Result<Option<bool>> {
    let alg = fx.alg();
    let Some(x) = random_resolution(rng, fx, 6)? else { return Ok(None) };
    let Some(z) = random_resolution(rng, fx, 6)? else { return Ok(None) };
    let (fl, fr) = (x.functor(), z.functor());
    let g = &tr.gamma;
    let (ml, mr) = (tr.functor_module(&fl)?, tr.functor_module(&fr)?);
    let ext = ext1(g, &mr, &ml);
    let coeffs: Vec<_> = (0..ext.dim).map(|_| sample::scalar(rng, g.field)).collect();
    let sx = ext.extension(g, &coeffs);
    let mid = tr.module_functor(&sx.middle)?;
    let Some(u) = find_iso(g, &sx.middle, &tr.functor_module(&mid)?)? else { return Ok(Some(false)) };
    let phi = u.compose(&sx.inc);
    let psi = sx.proj.compose(&u.inverse().expect("iso"));
    let (Some(ta), Some(tb)) = (induced_top(tr, &fl, &mid, &phi), induced_top(tr, &mid, &fr, &psi)) else {
        return Ok(Some(false));
    };
    let alpha = FunctorMap::new(alg, &fl, &mid, ta)?;
    let beta = FunctorMap::new(alg, &mid, &fr, tb)?;
    let h = horseshoe(&fx.cls, tr, &alpha, &beta, &x, &z, 8)?;
    let res = h.resolution.clone();
    // Termwise X → R → W is split, so every generator sees a short exact sequence.
    let c = cone(alg, &h.f);
    let gens_exact = fx.e().generators.iter().all(|gn| {
        (c.lo..=c.hi()).all(|n| {
            let dim = |m: &Module| hom_basis(alg, gn, m).len();
            dim(c.term(n)) == dim(x.complex.term(n)) + dim(h.w.term(n))
        })
    });
    let certified = ExtResolution::certify(&fx.cls, &res)?.into_yes();
    let presents = match &certified {
        Some(r) => tr.is_iso(&r.functor(), &mid)?,
        None => false,
    };
    let sequence_exact = is_short_exact(&tr.map_module(&alpha)?, &tr.map_module(&beta)?);
    let evaluations_add = fx
        .e()
        .generators
        .iter()
        .all(|gn| FpFunctor::new(res.diff(-1)).evaluate_dim(alg, gn) == fl.evaluate_dim(alg, gn) + fr.evaluate_dim(alg, gn));
    Ok(Some(
        h.g.is_chain_map() && h.f.is_chain_map() && fx.cls.is_quasi_iso(&h.g)? && gens_exact && presents && sequence_exact && evaluations_add,
    ))
}

/// Split `add(T)` over two algebras, for the completion checks.
pub fn split_fixtures(field: FieldSpec) -> Vec<Fixture> {
    let alg = a2(field);
    let (p2, i2) = (Module::projective(&alg, 1), Module::injective(&alg, 1));
    let i1 = Module::injective(&alg, 0);
    let dn = dual_numbers(field);
    vec![
        fixture("add(I1+I2) split", ExactSubcat::new(&alg, vec![i1, i2.clone()], Structure::Split).unwrap()),
        fixture("add(P2+I2) split", ExactSubcat::new(&alg, vec![p2, i2], Structure::Split).unwrap()),
        fixture("add(L) split", ExactSubcat::new(&dn, vec![Module::projective(&dn, 0)], Structure::Split).unwrap()),
    ]
}

/// For a random functor on split `E`: effaceable ⇔ zero, and `R^b` membership ⇔ finite projective dimension over `Γ`.
pub fn split_completion_instance<R: Rng>(rng: &mut R, fx: &Fixture, tr: &Transport) -> Result<[Check; 2]> {
    let e = fx.e();
    let alg = fx.alg();
    let n = sample::nonzero_object(rng, e, 2);
    let m = sample::object(rng, e, 2);
    let f = FpFunctor::new(sample::map(rng, alg, &m, &n));
    let zero = f.is_zero(e);
    let eff = match is_effaceable(e, &f)?.as_bool() {
        Some(v) if v == zero => Check::Holds,
        Some(v) => Check::Violated(format!("effaceable {v}, zero {zero}: {:?}", f.pres)),
        None => Check::Indeterminate,
    };
    let depth = 6;
    let finite = transported_projective_dimension(tr, &f, depth)?.is_some();
    let member = match membership_completion(e, &f, Completion::Rb, depth)?.as_bool() {
        Some(v) if v == finite => Check::Holds,
        Some(v) => Check::Violated(format!("R^b member {v}, finite pd {finite}: {:?}", f.pres)),
        None => Check::Indeterminate,
    };
    Ok([eff, member])
}

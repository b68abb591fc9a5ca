//! Random objects, maps, complexes and sequences inside an exact subcategory.

use alloc::vec::Vec;

use rand::Rng;

use crate::complex::{chain_map_basis, ChainMap, Complex};
use crate::error::Result;
use crate::exact::{minimal_left_approximation, minimal_right_approximation, ExactSubcat};
use crate::linalg::{FieldSpec, Scalar};
use crate::module::{cokernel, combine, hom_basis, kernel, maps_matrix, Module, ModuleMap};
use crate::quiver::PathAlgebra;

/// Uniform over `F_p`; over `Q` a small integer in `[-3, 3]`.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn map<R: Rng + ?Sized>(rng: &mut R, alg: &PathAlgebra, x: &Module, y: &Module) -> ModuleMap {
    let basis = hom_basis(alg, x, y);
    let coeffs: Vec<Scalar> = basis.iter().map(|_| scalar(rng, alg.field)).collect();
    combine(x, y, &basis, &coeffs)
}

/// A random map `x → y` killed by `g` on the left, i.e. with `g ∘ f = 0`.
pub fn map_killed_by<R: Rng + ?Sized>(rng: &mut R, alg: &PathAlgebra, x: &Module, g: &ModuleMap) -> ModuleMap {
    let y = &g.source;
    let basis = hom_basis(alg, x, y);
    let images: Vec<ModuleMap> = basis.iter().map(|b| g.compose(b)).collect();
    let len = x.dims.iter().zip(&g.target.dims).map(|(a, b)| a * b).sum();
    let ker = maps_matrix(alg.field, len, &images).kernel_basis();
    let mut acc = ModuleMap::zero(x, y);
    for j in 0..ker.cols() {
        let coeffs: Vec<Scalar> = (0..basis.len()).map(|i| ker.get(i, j).clone()).collect();
        acc = acc.add(&combine(x, y, &basis, &coeffs).scale(&scalar(rng, alg.field)));
    }
    acc
}

/// A random map `x → y` with `f ∘ d = 0`.
pub fn map_killing<R: Rng + ?Sized>(rng: &mut R, alg: &PathAlgebra, d: &ModuleMap, y: &Module) -> ModuleMap {
    let x = &d.target;
    let basis = hom_basis(alg, x, y);
    let images: Vec<ModuleMap> = basis.iter().map(|b| b.compose(d)).collect();
    let len = d.source.dims.iter().zip(&y.dims).map(|(a, b)| a * b).sum();
    let ker = maps_matrix(alg.field, len, &images).kernel_basis();
    let mut acc = ModuleMap::zero(x, y);
    for j in 0..ker.cols() {
        let coeffs: Vec<Scalar> = (0..basis.len()).map(|i| ker.get(i, j).clone()).collect();
        acc = acc.add(&combine(x, y, &basis, &coeffs).scale(&scalar(rng, alg.field)));
    }
    acc
}

/// An object of `e` with each generator appearing at most `max_mult` times.
pub fn object<R: Rng + ?Sized>(rng: &mut R, e: &ExactSubcat, max_mult: usize) -> Module {
    let mult: Vec<usize> = e.generators.iter().map(|_| rng.gen_range(0..=max_mult)).collect();
    e.object(&mult).module
}

/// Like [`object`] but never zero.
pub fn nonzero_object<R: Rng + ?Sized>(rng: &mut R, e: &ExactSubcat, max_mult: usize) -> Module {
    let mut mult: Vec<usize> = e.generators.iter().map(|_| rng.gen_range(0..=max_mult)).collect();
    if mult.iter().all(|&m| m == 0) {
        let i = rng.gen_range(0..mult.len());
        mult[i] = 1;
    }
    e.object(&mult).module
}

/// Next differential out of `d.target`: either a random map killing `d`, or the
/// cokernel of `d` followed by a left `e`-approximation, which makes the
/// complex as exact as `e` permits at that spot.
fn next_differential<R: Rng + ?Sized>(rng: &mut R, e: &ExactSubcat, d: &ModuleMap, max_mult: usize) -> Result<ModuleMap> {
    let alg = &e.alg;
    if rng.gen_bool(0.5) {
        let (c, q) = cokernel(alg, d);
        let approx = minimal_left_approximation(e, &c)?;
        Ok(approx.compose(&q))
    } else {
        let y = object(rng, e, max_mult);
        Ok(map_killing(rng, alg, d, &y))
    }
}

/// A complex over `e` with `len` terms starting in degree `lo`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R, e: &ExactSubcat, lo: i32, len: usize, max_mult: usize) -> Result<Complex> {
    let alg = &e.alg;
    if len == 0 {
        return Ok(Complex::zero_complex(alg));
    }
    let first = nonzero_object(rng, e, max_mult);
    let mut terms = alloc::vec![first];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    while terms.len() < len {
        let src = terms.last().unwrap().clone();
        let d = match diffs.last() {
            None => {
                let y = object(rng, e, max_mult);
                map(rng, alg, &src, &y)
            }
            Some(prev) => next_differential(rng, e, prev, max_mult)?,
        };
        terms.push(d.target.clone());
        diffs.push(d);
    }
    Complex::new(alg, lo, terms, diffs)
}

pub fn chain_map<R: Rng + ?Sized>(rng: &mut R, alg: &PathAlgebra, x: &Complex, y: &Complex) -> ChainMap {
    let basis = chain_map_basis(alg, x, y);
    let mut acc = ChainMap::zero(x, y);
    for b in &basis {
        acc = acc.add(&b.scale(&scalar(rng, alg.field)));
    }
    acc
}

/// A composable pair `f: A → B`, `g: B → C` in `e` with `g ∘ f = 0`.
///
/// Half of the time `f` covers the kernel of `g` by a right `e`-approximation,
/// so exact and non-exact sequences both show up in bulk.
pub fn sequence<R: Rng + ?Sized>(rng: &mut R, e: &ExactSubcat, max_mult: usize) -> Result<(ModuleMap, ModuleMap)> {
    let alg = &e.alg;
    let b = nonzero_object(rng, e, max_mult);
    let c = object(rng, e, max_mult);
    let g = map(rng, alg, &b, &c);
    if rng.gen_bool(0.5) {
        let (k, kinc) = kernel(alg, &g);
        let approx = minimal_right_approximation(e, &k)?;
        let f = kinc.compose(&approx);
        if rng.gen_bool(0.5) {
            return Ok((f, g));
        }
        // Precompose with a random endomorphism so that f may drop rank.
        let a = &f.source;
        let u = map(rng, alg, a, a);
        return Ok((f.compose(&u), g));
    }
    let a = object(rng, e, max_mult);
    Ok((map_killed_by(rng, alg, &a, &g), g))
}

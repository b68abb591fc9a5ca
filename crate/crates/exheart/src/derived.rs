//! Morphisms in the bounded derived category of `mod Λ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{ChainMap, Complex};
use crate::linalg::{Matrix, Scalar};
use crate::module::{direct_sum, ext1, hom_basis, hom_dim, kernel, projective_cover, Module, ModuleMap};
use crate::quiver::PathAlgebra;

/// A complex of projectives `P` with a quasi-isomorphism `P → X`, built down to some degree.
#[derive(Clone, Debug)]
pub struct ComplexResolution {
    pub p: Complex,
    pub eps: ChainMap,
    /// `P → X` is a quasi-isomorphism, not only in degrees above the truncation.
    pub complete: bool,
}

/// Covers the cycles of the cone of `P → X` degree by degree, from the top of `X` down to `lowest`.
pub fn resolve_complex(alg: &PathAlgebra, x: &Complex, lowest: i32) -> ComplexResolution {
    let zero = Module::zero(alg);
    let Some((xlo, xhi)) = x.support() else {
        let p = Complex::zero_complex(alg);
        return ComplexResolution { eps: ChainMap::zero(&p, x), p, complete: true };
    };
    // Terms and maps indexed by degree, filled from the top.
    let mut terms: Vec<(i32, Module)> = Vec::new();
    let mut diffs: Vec<(i32, ModuleMap)> = Vec::new();
    let mut eps: Vec<(i32, ModuleMap)> = Vec::new();
    let get = |v: &Vec<(i32, Module)>, n: i32| v.iter().find(|(m, _)| *m == n).map(|(_, t)| t.clone()).unwrap_or_else(|| zero.clone());
    let mut complete = false;
    let mut n = xhi;
    while n >= lowest {
        let p1 = get(&terms, n + 1);
        let p2 = get(&terms, n + 2);
        let dp = diffs
            .iter()
            .find(|(m, _)| *m == n + 1)
            .map(|(_, d)| d.clone())
            .unwrap_or_else(|| ModuleMap::zero(&p1, &p2));
        let e1 = eps
            .iter()
            .find(|(m, _)| *m == n + 1)
            .map(|(_, d)| d.clone())
            .unwrap_or_else(|| ModuleMap::zero(&p1, x.term(n + 1)));
        let src = [p1.clone(), x.term(n).clone()];
        let tgt = [p2.clone(), x.term(n + 1).clone()];
        let d = ModuleMap::from_blocks(
            alg,
            &src,
            &tgt,
            &[vec![dp.neg(), ModuleMap::zero(x.term(n), &p2)], vec![e1, x.diff(n)]],
        );
        let (z, zi) = kernel(alg, &d);
        if z.is_zero() && n < xlo {
            complete = true;
            break;
        }
        let (q, cover) = projective_cover(alg, &z);
        let to_sum = zi.compose(&cover);
        let sum = direct_sum(alg, &src);
        let u = sum.proj[0].compose(&to_sum);
        let v = sum.proj[1].compose(&to_sum);
        terms.push((n, q));
        diffs.push((n, u.neg()));
        eps.push((n, v));
        n -= 1;
    }
    let top = xhi;
    let bottom = n + 1;
    let mut p_terms = Vec::new();
    let mut p_diffs = Vec::new();
    for m in bottom..=top {
        p_terms.push(get(&terms, m));
        if m < top {
            p_diffs.push(diffs.iter().find(|(k, _)| *k == m).map(|(_, d)| d.clone()).expect("built"));
        }
    }
    let p = Complex::new(alg, bottom, p_terms, p_diffs).expect("resolution is a complex");
    let comps = (bottom..=top).map(|m| eps.iter().find(|(k, _)| *k == m).map(|(_, e)| e.clone()).expect("built")).collect();
    let eps = ChainMap { source: p.clone(), target: x.clone(), lo: bottom, comps };
    ComplexResolution { p, eps, complete }
}

/// `dim Hom_{D^b}(X, Y)`.
pub fn hyper_hom(alg: &PathAlgebra, x: &Complex, y: &Complex) -> usize {
    let (Some(_), Some((ylo, yhi))) = (x.support(), y.support()) else { return 0 };
    let res = resolve_complex(alg, x, ylo - 1);
    homotopy_classes(alg, &res.p, y, ylo, yhi)
}

/// `dim Hom_{D^b}(X, Σ^k Y)`.
pub fn hyper_ext(alg: &PathAlgebra, x: &Complex, y: &Complex, k: i32) -> usize {
    hyper_hom(alg, x, &y.shift(k))
}

/// `dim Hom_{K^b}(X, Y)`: chain maps modulo null-homotopic ones.
pub fn homotopy_hom(alg: &PathAlgebra, x: &Complex, y: &Complex) -> usize {
    let (Some(_), Some((ylo, yhi))) = (x.support(), y.support()) else { return 0 };
    homotopy_classes(alg, x, y, ylo, yhi)
}

/// Chain maps `P → Y` modulo null-homotopic ones, where only degrees `ylo..=yhi` of `Y` are nonzero.
fn homotopy_classes(alg: &PathAlgebra, p: &Complex, y: &Complex, ylo: i32, yhi: i32) -> usize {
    let field = alg.field;
    let degs: Vec<i32> = (ylo..=yhi).collect();
    let bases: Vec<Vec<ModuleMap>> = degs.iter().map(|&n| hom_basis(alg, p.term(n), y.term(n))).collect();
    let lens: Vec<usize> = degs.iter().map(|&n| ModuleMap::zero(p.term(n), y.term(n)).flatten().len()).collect();
    let nvars: usize = bases.iter().map(Vec::len).sum();
    if nvars == 0 {
        return 0;
    }
    // Chain condition in degree m: φ^{m+1} d_P^m − d_Y^m φ^m = 0.
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for (k, &n) in degs.iter().enumerate() {
        for b in &bases[k] {
            let mut col = Vec::new();
            for m in ylo - 1..=yhi {
                let mut c = ModuleMap::zero(p.term(m), y.term(m + 1));
                if m + 1 == n {
                    c = c.add(&b.compose(&p.diff(m)));
                }
                if m == n {
                    c = c.sub(&y.diff(m).compose(b));
                }
                col.extend(c.flatten());
            }
            cols.push(col);
        }
    }
    let chain_rank = columns_rank(field, &cols);
    let cycles = nvars - chain_rank;
    // Null-homotopic maps d_Y h^n + h^{n+1} d_P, written in the φ coordinates.
    let mut hcols: Vec<Vec<Scalar>> = Vec::new();
    for n in ylo..=yhi + 1 {
        for h in hom_basis(alg, p.term(n), y.term(n - 1)) {
            let mut flat: Vec<Scalar> = Vec::new();
            for (k, &m) in degs.iter().enumerate() {
                let mut c = ModuleMap::zero(p.term(m), y.term(m));
                if m == n - 1 {
                    c = c.add(&h.compose(&p.diff(m)));
                }
                if m == n {
                    c = c.add(&y.diff(m - 1).compose(&h));
                }
                let v = c.flatten();
                debug_assert_eq!(v.len(), lens[k]);
                flat.extend(v);
            }
            hcols.push(flat);
        }
    }
    cycles - columns_rank(field, &hcols)
}

fn columns_rank(field: crate::linalg::FieldSpec, cols: &[Vec<Scalar>]) -> usize {
    let Some(first) = cols.first() else { return 0 };
    let rows = first.len();
    if rows == 0 {
        return 0;
    }
    let mut data = Vec::with_capacity(rows * cols.len());
    for r in 0..rows {
        for c in cols {
            data.push(c[r].clone());
        }
    }
    Matrix::from_scalars(field, rows, cols.len(), data).expect("shape").rank()
}

/// Hereditary shortcut: `X ≅ ⊕ Σ^{−n} Hⁿ(X)`, so only `Hom` and `Ext¹` between homologies contribute.
pub fn hyper_hom_hereditary(alg: &PathAlgebra, x: &Complex, y: &Complex) -> usize {
    let (Some((xa, xb)), Some((ya, yb))) = (x.support(), y.support()) else { return 0 };
    let hx: Vec<(i32, Module)> = (xa..=xb).map(|n| (n, x.homology(alg, n))).filter(|(_, m)| !m.is_zero()).collect();
    let hy: Vec<(i32, Module)> = (ya..=yb).map(|n| (n, y.homology(alg, n))).filter(|(_, m)| !m.is_zero()).collect();
    let mut total = 0;
    for (n, m) in &hx {
        for (k, l) in &hy {
            if n == k {
                total += hom_dim(alg, m, l);
            } else if *k == n - 1 {
                total += ext1(alg, m, l).dim;
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::module::tests::{a2, dual_numbers};

    #[test]
    fn a2_examples() {
        let alg = a2(FieldSpec::Rationals);
        let p1 = Module::projective(&alg, 0);
        let i2 = Module::injective(&alg, 1);
        let sp1 = Complex::stalk(&alg, &p1, -1);
        assert_eq!(hyper_hom(&alg, &Complex::stalk(&alg, &p1, 0), &sp1), 0);
        assert_eq!(hyper_hom(&alg, &Complex::stalk(&alg, &i2, 0), &sp1), 1);
        assert_eq!(hyper_hom_hereditary(&alg, &Complex::stalk(&alg, &i2, 0), &sp1), 1);
        let x = Complex::stalk(&alg, &i2, 0);
        assert_eq!(hyper_hom(&alg, &x, &x), 1);
        assert_eq!(hyper_hom(&alg, &sp1, &Complex::stalk(&alg, &i2, 0)), 0);
    }

    #[test]
    fn resolution_of_injective_stalk() {
        let alg = a2(FieldSpec::Rationals);
        let i2 = Module::injective(&alg, 1);
        let r = resolve_complex(&alg, &Complex::stalk(&alg, &i2, 0), -5);
        assert!(r.complete);
        assert!(r.eps.is_chain_map());
        assert_eq!(r.p.trim().terms.len(), 2);
    }

    #[test]
    fn dual_numbers_self_extensions() {
        let alg = dual_numbers(FieldSpec::Rationals);
        let s = Module::simple(&alg, 0);
        let x = Complex::stalk(&alg, &s, 0);
        for k in 0..4 {
            assert_eq!(hyper_ext(&alg, &x, &x, k), 1);
        }
        assert_eq!(hyper_ext(&alg, &x, &x, -1), 0);
        let lam = Module::projective(&alg, 0);
        let l = Complex::stalk(&alg, &lam, 0);
        assert_eq!(hyper_hom(&alg, &l, &l), 2);
        assert_eq!(hyper_ext(&alg, &l, &l, 1), 0);
    }
}

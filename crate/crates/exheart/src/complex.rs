//! Bounded cochain complexes of modules, chain maps, cones and homotopies.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{cokernel, combine, direct_sum, hom_basis, image, kernel, Module, ModuleMap};
use crate::quiver::PathAlgebra;

/// `X^lo → … → X^hi`; everything outside the window is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    pub lo: i32,
    pub terms: Vec<Module>,
    /// `diffs[k]` is `d^{lo+k}: X^{lo+k} → X^{lo+k+1}`.
    pub diffs: Vec<ModuleMap>,
    zero: Module,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub lo: i32,
    /// `comps[k]` is the component in degree `lo + k`.
    pub comps: Vec<ModuleMap>,
}

impl Complex {
    pub fn new(alg: &PathAlgebra, lo: i32, terms: Vec<Module>, diffs: Vec<ModuleMap>) -> Result<Complex> {
        if terms.is_empty() && !diffs.is_empty() || !terms.is_empty() && diffs.len() + 1 != terms.len() {
            return input("a complex with n terms needs n - 1 differentials");
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source != terms[k] || d.target != terms[k + 1] {
                return input(format!("differential in degree {} does not match its terms", lo + k as i32));
            }
            if let Some(a) = d.commutation_failure(alg) {
                return input(format!("differential in degree {} does not intertwine arrow `{}`", lo + k as i32, alg.quiver.arrows[a].label));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].compose(&diffs[k - 1]).is_zero() {
                return input(format!("d∘d is nonzero at degree {}", lo + k as i32 - 1));
            }
        }
        Ok(Complex { lo, terms, diffs, zero: Module::zero(alg) })
    }

    pub fn zero_complex(alg: &PathAlgebra) -> Complex {
        Complex { lo: 0, terms: Vec::new(), diffs: Vec::new(), zero: Module::zero(alg) }
    }

    pub fn stalk(alg: &PathAlgebra, m: &Module, degree: i32) -> Complex {
        Complex { lo: degree, terms: vec![m.clone()], diffs: Vec::new(), zero: Module::zero(alg) }
    }

    /// The two-term complex `f: X^{deg} → X^{deg+1}`.
    pub fn two_term(alg: &PathAlgebra, f: &ModuleMap, degree: i32) -> Complex {
        Complex { lo: degree, terms: vec![f.source.clone(), f.target.clone()], diffs: vec![f.clone()], zero: Module::zero(alg) }
    }

    /// `f` then `g` in degrees `deg, deg+1, deg+2`.
    pub fn three_term(alg: &PathAlgebra, f: &ModuleMap, g: &ModuleMap, degree: i32) -> Result<Complex> {
        Complex::new(alg, degree, vec![f.source.clone(), f.target.clone(), g.target.clone()], vec![f.clone(), g.clone()])
    }

    pub fn zero_module(&self) -> &Module {
        &self.zero
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn is_empty_window(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: i32) -> &Module {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.terms[(n - self.lo) as usize]
        }
    }

    /// `d^n: X^n → X^{n+1}`.
    pub fn diff(&self, n: i32) -> ModuleMap {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            ModuleMap::zero(self.term(n), self.term(n + 1))
        }
    }

    /// Degrees with a nonzero term.
    pub fn support(&self) -> Option<(i32, i32)> {
        let nz: Vec<i32> = (self.lo..=self.hi()).filter(|&n| !self.term(n).is_zero()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// Same complex on the window `[lo, hi]`.
    pub fn rewindow(&self, lo: i32, hi: i32) -> Complex {
        if hi < lo {
            return Complex { lo, terms: Vec::new(), diffs: Vec::new(), zero: self.zero.clone() };
        }
        let terms = (lo..=hi).map(|n| self.term(n).clone()).collect();
        let diffs = (lo..hi).map(|n| self.diff(n)).collect();
        Complex { lo, terms, diffs, zero: self.zero.clone() }
    }

    /// Drops zero terms at both ends.
    pub fn trim(&self) -> Complex {
        match self.support() {
            Some((a, b)) => self.rewindow(a, b),
            None => Complex { lo: 0, terms: Vec::new(), diffs: Vec::new(), zero: self.zero.clone() },
        }
    }

    /// `Σ^k X`: `(Σ^k X)^n = X^{n+k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        let s = self.zero.field.from_i64(sign);
        Complex {
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn identity(&self) -> ChainMap {
        ChainMap {
            source: self.clone(),
            target: self.clone(),
            lo: self.lo,
            comps: self.terms.iter().map(Module::identity).collect(),
        }
    }

    /// `(DX)^n = D(X^{−n})` over the opposite algebra.
    pub fn dual(&self, opposite: &PathAlgebra) -> Complex {
        let terms: Vec<Module> = self.terms.iter().rev().map(Module::dual).collect();
        let diffs: Vec<ModuleMap> = self.diffs.iter().rev().map(ModuleMap::dual).collect();
        Complex { lo: -self.hi(), terms, diffs, zero: Module::zero(opposite) }
    }

    /// Cohomology `ker d^n / im d^{n−1}` in `mod Λ`.
    pub fn homology(&self, alg: &PathAlgebra, n: i32) -> Module {
        let (_, kinc) = kernel(alg, &self.diff(n));
        let prev = self.diff(n - 1);
        let into_ker = crate::module::lift_along_mono(&kinc, &prev).expect("image lies in the kernel");
        cokernel(alg, &into_ker).0
    }

    pub fn is_exact_everywhere(&self, alg: &PathAlgebra) -> bool {
        (self.lo - 1..=self.hi() + 1).all(|n| self.homology(alg, n).is_zero())
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(Module::total_dim).sum()
    }

    /// Direct sum of complexes.
    pub fn direct_sum(alg: &PathAlgebra, parts: &[Complex]) -> Complex {
        let lo = parts.iter().filter(|c| !c.is_empty_window()).map(|c| c.lo).min().unwrap_or(0);
        let hi = parts.iter().filter(|c| !c.is_empty_window()).map(|c| c.hi()).max().unwrap_or(-1);
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let ts: Vec<Module> = parts.iter().map(|c| c.term(n).clone()).collect();
            terms.push(direct_sum(alg, &ts).module);
            if n < hi {
                let ds: Vec<ModuleMap> = parts.iter().map(|c| c.diff(n)).collect();
                diffs.push(ModuleMap::diag(alg, &ds));
            }
        }
        Complex { lo, terms, diffs, zero: Module::zero(alg) }
    }
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, lo: i32, comps: Vec<ModuleMap>) -> Result<ChainMap> {
        let f = ChainMap { source: source.clone(), target: target.clone(), lo, comps };
        for n in f.window_lo()..=f.window_hi() {
            let c = f.comp(n);
            if c.source != *source.term(n) || c.target != *target.term(n) {
                return input(format!("component in degree {n} does not match the complexes"));
            }
        }
        if let Some(n) = f.chain_failure() {
            return input(format!("not a chain map at degree {n}"));
        }
        Ok(f)
    }

    /// Components given for every degree of `[lo, hi]`, zero elsewhere.
    pub fn from_fn(source: &Complex, target: &Complex, lo: i32, hi: i32, mut f: impl FnMut(i32) -> ModuleMap) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), lo, comps: (lo..=hi).map(&mut f).collect() }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), lo: 0, comps: Vec::new() }
    }

    fn window_lo(&self) -> i32 {
        self.source.lo.min(self.target.lo)
    }

    fn window_hi(&self) -> i32 {
        self.source.hi().max(self.target.hi())
    }

    pub fn comp(&self, n: i32) -> ModuleMap {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            let c = &self.comps[k as usize];
            if c.source == *self.source.term(n) && c.target == *self.target.term(n) {
                return c.clone();
            }
        }
        ModuleMap::zero(self.source.term(n), self.target.term(n))
    }

    /// First degree where `f^{n+1} d_X^n ≠ d_Y^n f^n`.
    pub fn chain_failure(&self) -> Option<i32> {
        (self.window_lo() - 1..=self.window_hi()).find(|&n| {
            let l = self.comp(n + 1).compose(&self.source.diff(n));
            let r = self.target.diff(n).compose(&self.comp(n));
            l != r
        })
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_failure().is_none()
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ChainMap) -> ChainMap {
        let lo = g.source.lo.min(self.target.lo).min(g.target.lo);
        let hi = g.source.hi().max(self.target.hi()).max(g.target.hi());
        ChainMap::from_fn(&g.source, &self.target, lo, hi, |n| self.comp(n).compose(&g.comp(n)))
    }

    pub fn add(&self, o: &ChainMap) -> ChainMap {
        let lo = self.window_lo();
        ChainMap::from_fn(&self.source, &self.target, lo, self.window_hi(), |n| self.comp(n).add(&o.comp(n)))
    }

    pub fn sub(&self, o: &ChainMap) -> ChainMap {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(ModuleMap::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(|m| m.scale(c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        (self.window_lo()..=self.window_hi()).all(|n| self.comp(n).is_zero())
    }

    pub fn shift(&self, k: i32) -> ChainMap {
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            lo: self.lo - k,
            comps: self.comps.clone(),
        }
    }
}

/// `cone(f)^n = X^{n+1} ⊕ Y^n` with differential `[[−d_X, 0], [f, d_Y]]`.
pub fn cone(alg: &PathAlgebra, f: &ChainMap) -> Complex {
    let (x, y) = (&f.source, &f.target);
    let lo = (x.lo - 1).min(y.lo);
    let hi = (x.hi() - 1).max(y.hi());
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        terms.push(direct_sum(alg, &[x.term(n + 1).clone(), y.term(n).clone()]).module);
        if n < hi {
            let blocks = vec![
                vec![x.diff(n + 1).neg(), ModuleMap::zero(y.term(n), x.term(n + 2))],
                vec![f.comp(n + 1), y.diff(n)],
            ];
            diffs.push(ModuleMap::from_blocks(
                alg,
                &[x.term(n + 1).clone(), y.term(n).clone()],
                &[x.term(n + 2).clone(), y.term(n + 1).clone()],
                &blocks,
            ));
        }
    }
    Complex { lo, terms, diffs, zero: Module::zero(alg) }
}

/// The canonical maps `Y → cone(f)` and `cone(f) → ΣX`.
pub fn cone_maps(alg: &PathAlgebra, f: &ChainMap) -> (Complex, ChainMap, ChainMap) {
    let c = cone(alg, f);
    let (x, y) = (&f.source, &f.target);
    let sx = x.shift(1);
    let into = ChainMap::from_fn(y, &c, c.lo, c.hi(), |n| {
        direct_sum(alg, &[x.term(n + 1).clone(), y.term(n).clone()]).incl[1].clone()
    });
    let out = ChainMap::from_fn(&c, &sx, c.lo, c.hi(), |n| {
        direct_sum(alg, &[x.term(n + 1).clone(), y.term(n).clone()]).proj[0].clone()
    });
    (c, into, out)
}

/// `cyl(f) = cone(Σ⁻¹cone(f) → X)` along the projection `(x, y) ↦ x`.
pub fn cylinder(alg: &PathAlgebra, f: &ChainMap) -> Complex {
    let (_, _, out) = cone_maps(alg, f);
    // out: cone(f) → ΣX; shifting by −1 gives Σ⁻¹cone(f) → X.
    let mut pi = out.shift(-1);
    pi.target = f.source.clone();
    cone(alg, &pi)
}

/// `cocyl(f) = cone(Σ⁻¹Y → Σ⁻¹cone(f))` along the inclusion `y ↦ (0, y)`.
pub fn cocylinder(alg: &PathAlgebra, f: &ChainMap) -> Complex {
    let (_, into, _) = cone_maps(alg, f);
    cone(alg, &into.shift(-1))
}

/// Some `h^n: X^n → Y^{n−1}` with `f^n = d_Y^{n−1} h^n + h^{n+1} d_X^n` in every degree.
pub fn null_homotopy(alg: &PathAlgebra, f: &ChainMap) -> Option<Vec<(i32, ModuleMap)>> {
    let (x, y) = (&f.source, &f.target);
    let lo = x.lo.min(y.lo + 1);
    let hi = x.hi().max(y.hi() + 1);
    let bases: Vec<Vec<ModuleMap>> = (lo..=hi).map(|n| hom_basis(alg, x.term(n), y.term(n - 1))).collect();
    let nvars: usize = bases.iter().map(Vec::len).sum();
    let mut var_off = Vec::new();
    let mut acc = 0;
    for b in &bases {
        var_off.push(acc);
        acc += b.len();
    }
    let field = alg.field;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for n in lo - 1..=hi {
        // Equation in degree n involves h^n (index n − lo) and h^{n+1}.
        let target = f.comp(n).flatten();
        let len = target.len();
        if len == 0 {
            continue;
        }
        let mut block = vec![vec![field.zero(); nvars]; len];
        let mut add_var = |idx: i32, map_of: &dyn Fn(&ModuleMap) -> ModuleMap| {
            if idx < 0 || idx as usize >= bases.len() {
                return;
            }
            for (j, h) in bases[idx as usize].iter().enumerate() {
                for (r, c) in map_of(h).flatten().into_iter().enumerate() {
                    block[r][var_off[idx as usize] + j] = c;
                }
            }
        };
        let dy = y.diff(n - 1);
        add_var(n - lo, &|h: &ModuleMap| dy.compose(h));
        let dx = x.diff(n);
        let mut block2 = vec![vec![field.zero(); nvars]; len];
        let idx = n + 1 - lo;
        if idx >= 0 && (idx as usize) < bases.len() {
            for (j, h) in bases[idx as usize].iter().enumerate() {
                for (r, c) in h.compose(&dx).flatten().into_iter().enumerate() {
                    block2[r][var_off[idx as usize] + j] = c;
                }
            }
        }
        for (r, (row, row2)) in block.into_iter().zip(block2).enumerate() {
            rows.push(row.iter().zip(&row2).map(|(a, b)| a.add(b)).collect());
            rhs.push(target[r].clone());
        }
    }
    let h_of = |sol: &Matrix| -> Vec<(i32, ModuleMap)> {
        (lo..=hi)
            .map(|n| {
                let k = (n - lo) as usize;
                let coeffs: Vec<Scalar> = (0..bases[k].len()).map(|j| sol.get(var_off[k] + j, 0).clone()).collect();
                (n, combine(x.term(n), y.term(n - 1), &bases[k], &coeffs))
            })
            .collect()
    };
    if rows.is_empty() {
        return Some(h_of(&Matrix::zeros(field, nvars, 1)));
    }
    let a = Matrix::from_scalars(field, rows.len(), nvars, rows.concat()).expect("shape");
    let b = Matrix::column(field, rhs);
    let sol = a.solve(&b).ok()??;
    Some(h_of(&sol))
}

/// Checks `f^n = d_Y^{n−1} h^n + h^{n+1} d_X^n` for all `n`.
pub fn verify_homotopy(f: &ChainMap, h: &[(i32, ModuleMap)]) -> bool {
    let (x, y) = (&f.source, &f.target);
    let get = |n: i32| -> ModuleMap {
        h.iter()
            .find(|(m, _)| *m == n)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| ModuleMap::zero(x.term(n), y.term(n - 1)))
    };
    let lo = x.lo.min(y.lo) - 1;
    let hi = x.hi().max(y.hi()) + 1;
    (lo..=hi).all(|n| {
        let rhs = y.diff(n - 1).compose(&get(n)).add(&get(n + 1).compose(&x.diff(n)));
        rhs == f.comp(n)
    })
}

/// Pointwise image of `d^{n−1}` inside `X^n`, for diagnostics.
pub fn boundary(alg: &PathAlgebra, x: &Complex, n: i32) -> Module {
    image(alg, &x.diff(n - 1)).0
}

/// A basis of the space of chain maps `X → Y`.
pub fn chain_map_basis(alg: &PathAlgebra, x: &Complex, y: &Complex) -> Vec<ChainMap> {
    let (lo, hi) = match (x.support(), y.support()) {
        (Some((a, b)), Some((c, d))) => (a.max(c), b.min(d)),
        _ => return Vec::new(),
    };
    if lo > hi {
        return Vec::new();
    }
    let field = alg.field;
    let bases: Vec<Vec<ModuleMap>> = (lo..=hi).map(|n| hom_basis(alg, x.term(n), y.term(n))).collect();
    let unknowns: usize = bases.iter().map(Vec::len).sum();
    if unknowns == 0 {
        return Vec::new();
    }
    // One block of equations per degree n in lo-1..=hi: d_Y^n f^n - f^{n+1} d_X^n = 0.
    let block_len = |n: i32| -> usize {
        x.term(n).dims.iter().zip(&y.term(n + 1).dims).map(|(a, b)| a * b).sum()
    };
    let offsets: Vec<usize> = (lo - 1..=hi)
        .scan(0, |acc, n| {
            let o = *acc;
            *acc += block_len(n);
            Some(o)
        })
        .collect();
    let rows: usize = (lo - 1..=hi).map(block_len).sum();
    let mut m = Matrix::zeros(field, rows, unknowns);
    let mut col = 0;
    for (k, basis) in bases.iter().enumerate() {
        let n = lo + k as i32;
        for b in basis {
            let fwd = y.diff(n).compose(b).flatten();
            let back = b.compose(&x.diff(n - 1)).neg().flatten();
            let o_fwd = offsets[(n - lo + 1) as usize];
            let o_back = offsets[(n - lo) as usize];
            for (i, c) in fwd.into_iter().enumerate() {
                m.set(o_fwd + i, col, c);
            }
            for (i, c) in back.into_iter().enumerate() {
                let cur = m.get(o_back + i, col).add(&c);
                m.set(o_back + i, col, cur);
            }
            col += 1;
        }
    }
    let ker = m.kernel_basis();
    (0..ker.cols())
        .map(|j| {
            let mut start = 0;
            ChainMap::from_fn(x, y, lo, hi, |n| {
                let basis = &bases[(n - lo) as usize];
                let coeffs: Vec<Scalar> = (0..basis.len()).map(|i| ker.get(start + i, j).clone()).collect();
                start += basis.len();
                combine(x.term(n), y.term(n), basis, &coeffs)
            })
        })
        .collect()
}

//! Finite-dimensional commutative ℚ-algebras, modules over them, derivations
//! and module homomorphism spaces.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{combine, kernel, solve, Matrix, Subspace};
use crate::report::Report;
use crate::scalar::{q, Scalar};

/// Commutative unital algebra given by structure constants in a ℚ-basis
/// `b_0, …, b_{n-1}`: `b_i b_j = Σ_k mult[(i·n + j)·n + k] b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseRing {
    dim: usize,
    mult: Vec<Scalar>,
    unit: Vec<Scalar>,
}

impl BaseRing {
    pub fn new(dim: usize, mult: Vec<Scalar>, unit: Vec<Scalar>) -> Result<Self> {
        if mult.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::Shape(format!(
                "ring of dim {dim} needs {} structure constants and a unit of length {dim}",
                dim * dim * dim
            )));
        }
        Ok(BaseRing { dim, mult, unit })
    }

    /// The rationals themselves (the point case).
    pub fn rationals() -> Self {
        BaseRing { dim: 1, mult: vec![q(1)], unit: vec![q(1)] }
    }

    /// `ℚ[x]/(x^n)` with basis `1, x, …, x^{n-1}`.
    pub fn truncated_polynomials(n: usize) -> Self {
        assert!(n >= 1);
        let mut mult = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mult[(i * n + j) * n + i + j] = q(1);
                }
            }
        }
        let mut unit = vec![Scalar::zero(); n];
        unit[0] = q(1);
        BaseRing { dim: n, mult, unit }
    }

    /// `ℚ^n` with the standard idempotent basis (functions on `n` points).
    pub fn product_of_rationals(n: usize) -> Self {
        let mut mult = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            mult[(i * n + i) * n + i] = q(1);
        }
        BaseRing { dim: n, mult, unit: vec![q(1); n] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_point(&self) -> bool {
        self.dim == 1
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn mult_tensor(&self) -> &[Scalar] {
        &self.mult
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = q(1);
        v
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `a`.
    pub fn mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Lists every violated axiom with witness basis indices.
    pub fn check(&self) -> Report {
        let n = self.dim;
        let mut r = Report::new();
        for i in 0..n {
            for j in 0..n {
                let bi = self.basis_vector(i);
                let bj = self.basis_vector(j);
                if self.mul(&bi, &bj) != self.mul(&bj, &bi) {
                    r.push("commutativity", vec![i, j], format!("b{i} b{j} != b{j} b{i}"));
                }
                for k in 0..n {
                    let bk = self.basis_vector(k);
                    if self.mul(&self.mul(&bi, &bj), &bk) != self.mul(&bi, &self.mul(&bj, &bk)) {
                        r.push("associativity", vec![i, j, k], format!("(b{i} b{j}) b{k} != b{i} (b{j} b{k})"));
                    }
                }
            }
            let bi = self.basis_vector(i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                r.push("unit", vec![i], format!("unit does not fix b{i}"));
            }
        }
        r
    }

    /// Basis of the derivation space, from the Leibniz linear system.
    pub fn derivations(self: &Arc<Self>) -> DerivationSpace {
        let n = self.dim;
        // Unknown L[k][m] sits at index k·n + m.
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![Scalar::zero(); n * n];
                    for m in 0..n {
                        row[k * n + m] += self.c(i, j, m);
                        row[m * n + i] -= self.c(m, j, k);
                        row[m * n + j] -= self.c(i, m, k);
                    }
                    rows.push(row);
                }
            }
        }
        let sys = Matrix::from_rows(rows, n * n).unwrap();
        let basis = kernel(&sys).basis().iter().map(|v| Matrix::new(n, n, v.clone()).unwrap()).collect();
        DerivationSpace { ring: Arc::clone(self), basis }
    }

    /// True if `l` satisfies the Leibniz rule on all basis pairs.
    pub fn is_derivation(&self, l: &Matrix) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let bi = self.basis_vector(i);
                let bj = self.basis_vector(j);
                let lhs = l.mul_vec(&self.mul(&bi, &bj));
                let a = self.mul(&l.mul_vec(&bi), &bj);
                let b = self.mul(&bi, &l.mul_vec(&bj));
                let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Decomposes the ring into orthogonal primitive idempotents if it is
    /// isomorphic to `ℚ^n`; `None` otherwise.
    pub fn split_idempotents(&self) -> Option<Vec<Vec<Scalar>>> {
        let mut work = vec![self.unit.clone()];
        let mut done: Vec<Vec<Scalar>> = Vec::new();
        while let Some(e) = work.pop() {
            let span: Vec<Vec<Scalar>> = (0..self.dim).map(|k| self.mul(&e, &self.basis_vector(k))).collect();
            let sub = Subspace::span(self.dim, &span);
            if sub.dim() == 0 {
                continue;
            }
            if sub.dim() == 1 {
                done.push(e);
                continue;
            }
            let unit_line = Subspace::span(self.dim, std::slice::from_ref(&e));
            let x = span.iter().find(|v| !unit_line.contains(v))?.clone();
            let coeffs = self.minimal_polynomial(&e, &x);
            let roots = distinct_rational_roots(&coeffs)?;
            if roots.len() != coeffs.len() - 1 {
                return None;
            }
            for (i, li) in roots.iter().enumerate() {
                let mut p = e.clone();
                for (j, lj) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let shifted: Vec<Scalar> = x.iter().zip(&e).map(|(a, b)| a - b * lj).collect();
                    let denom = (li - lj).recip();
                    p = self.mul(&p, &shifted).iter().map(|a| a * &denom).collect();
                }
                work.push(p);
            }
        }
        done.sort_by_key(|v| v.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX));
        Some(done)
    }

    /// Monic minimal polynomial of `x` in the algebra with unit `e`
    /// (constant term first).
    fn minimal_polynomial(&self, e: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        let mut powers = vec![e.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            let m = Matrix::from_columns(self.dim, &powers);
            if let Some(c) = solve(&m, &next).unwrap() {
                let mut coeffs: Vec<Scalar> = c.into_iter().map(|a| -a).collect();
                coeffs.push(q(1));
                return coeffs;
            }
            powers.push(next);
        }
    }
}

/// Distinct rational roots of a polynomial (coefficients constant term first),
/// or `None` when the coefficients are too large to factor by trial division.
fn distinct_rational_roots(coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        if !roots.contains(&Scalar::zero()) {
            roots.push(Scalar::zero());
        }
    }
    if ints.len() <= 1 {
        return Some(roots);
    }
    let a0 = ints[0].abs().to_u64()?;
    let an = ints.last().unwrap().abs().to_u64()?;
    if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
        return None;
    }
    let eval = |x: &Scalar| -> Scalar {
        ints.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + Scalar::from_integer(c.clone()))
    };
    for p in divisors(a0) {
        for qd in divisors(an) {
            for s in [1i64, -1] {
                let cand = Scalar::new(BigInt::from(p) * s, BigInt::from(qd));
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// The derivations of a base ring, stored as `dim × dim` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub ring: Arc<BaseRing>,
    pub basis: Vec<Matrix>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a matrix in the derivation basis, if it is a derivation.
    pub fn coordinates(&self, l: &Matrix) -> Option<Vec<Scalar>> {
        let n = self.ring.dim();
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.data().to_vec()).collect();
        let m = Matrix::from_columns(n * n, &cols);
        solve(&m, l.data()).unwrap()
    }

    /// The derivations as an R-module (`(f·L)(g) = f·L(g)`) together with the
    /// inclusion into derivations, usable as an anchor.
    pub fn as_module(&self) -> (RModule, Vec<Matrix>) {
        let r = &self.ring;
        let action = (0..r.dim())
            .map(|i| {
                let lf = r.mult_matrix(&r.basis_vector(i));
                let cols: Vec<Vec<Scalar>> = self
                    .basis
                    .iter()
                    .map(|l| self.coordinates(&lf.mul(l)).expect("derivations closed under R-multiplication"))
                    .collect();
                Matrix::from_columns(self.dim(), &cols)
            })
            .collect();
        (RModule { ring: Arc::clone(r), dim: self.dim(), action }, self.basis.clone())
    }
}

/// A module over a base ring given by the action matrices of the ring basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RModule {
    ring: Arc<BaseRing>,
    dim: usize,
    action: Vec<Matrix>,
}

impl RModule {
    pub fn new(ring: Arc<BaseRing>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != ring.dim() || action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape(format!(
                "module of dim {dim} over a ring of dim {} needs {} action matrices of size {dim}x{dim}",
                ring.dim(),
                ring.dim()
            )));
        }
        Ok(RModule { ring, dim, action })
    }

    /// Free module `R^rank`; ℚ-basis index `m·dim R + j` is `b_j e_m`.
    pub fn free(ring: Arc<BaseRing>, rank: usize) -> Self {
        let r = ring.dim();
        let action = (0..r)
            .map(|i| {
                let li = ring.mult_matrix(&ring.basis_vector(i));
                let mut m = Matrix::zeros(rank * r, rank * r);
                for k in 0..rank {
                    m.set_block(k * r, k * r, &li);
                }
                m
            })
            .collect();
        RModule { ring, dim: rank * r, action }
    }

    pub fn zero(ring: Arc<BaseRing>) -> Self {
        let action = (0..ring.dim()).map(|_| Matrix::zeros(0, 0)).collect();
        RModule { ring, dim: 0, action }
    }

    /// The ring as a module over itself.
    pub fn ring_module(ring: Arc<BaseRing>) -> Self {
        Self::free(ring, 1)
    }

    pub fn ring(&self) -> &Arc<BaseRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Matrix of multiplication by a ring element.
    pub fn act(&self, f: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, a) in f.iter().zip(&self.action) {
            m.add_assign_scaled(a, c);
        }
        m
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        let ring = &self.ring;
        if self.act(ring.unit()) != Matrix::identity(self.dim) {
            r.push("module-unit", vec![], "unit does not act as the identity");
        }
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let prod = self.act(&ring.mul(&ring.basis_vector(i), &ring.basis_vector(j)));
                if prod != self.action[i].mul(&self.action[j]) {
                    r.push("module-associativity", vec![i, j], format!("(b{i} b{j})·v != b{i}·(b{j}·v)"));
                }
            }
        }
        r
    }

    /// True if `m: self → other` commutes with the ring action.
    pub fn is_linear_map_to(&self, other: &RModule, m: &Matrix) -> bool {
        m.shape() == (other.dim, self.dim)
            && (0..self.ring.dim()).all(|i| m.mul(&self.action[i]) == other.action[i].mul(m))
    }

    pub fn direct_sum(&self, other: &RModule) -> Result<RModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(RModule { ring: Arc::clone(&self.ring), dim: self.dim + other.dim, action })
    }

    /// Submodule spanned by the columns of `basis` (which must be invariant),
    /// expressed in those coordinates.
    pub fn submodule(&self, basis: &Subspace) -> Result<RModule> {
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols: Vec<Vec<Scalar>> = basis
                    .basis()
                    .iter()
                    .map(|v| {
                        basis
                            .coordinates(&a.mul_vec(v))
                            .ok_or_else(|| Error::Precondition("subspace is not a submodule".into()))
                    })
                    .collect::<Result<_>>()?;
                Ok(Matrix::from_columns(basis.dim(), &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RModule { ring: Arc::clone(&self.ring), dim: basis.dim(), action })
    }

    /// Quotient by the submodule `sub`, in the coordinates of the complement
    /// `comp` (so `comp` basis vectors represent the quotient basis).
    pub fn quotient(&self, sub: &Subspace, comp: &Subspace) -> Result<RModule> {
        let full = Matrix::from_columns(self.dim, &[sub.basis(), comp.basis()].concat());
        let inv = full.inverse().ok_or_else(|| Error::Precondition("not a complement".into()))?;
        let k = sub.dim();
        let n = comp.dim();
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols: Vec<Vec<Scalar>> =
                    comp.basis().iter().map(|v| inv.mul_vec(&a.mul_vec(v))[k..].to_vec()).collect();
                Matrix::from_columns(n, &cols)
            })
            .collect();
        Ok(RModule { ring: Arc::clone(&self.ring), dim: n, action })
    }
}

/// The module of R-linear maps `V → W`, realised inside all ℚ-linear maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomModule {
    pub source: RModule,
    pub target: RModule,
    pub module: RModule,
    /// ℚ-basis of the hom space as `target.dim × source.dim` matrices.
    pub maps: Vec<Matrix>,
}

impl HomModule {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Coordinates of an R-linear map in the basis `maps`.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let (w, v) = (self.target.dim(), self.source.dim());
        if m.shape() != (w, v) {
            return None;
        }
        let cols: Vec<Vec<Scalar>> = self.maps.iter().map(|b| b.data().to_vec()).collect();
        solve(&Matrix::from_columns(w * v, &cols), m.data()).unwrap()
    }

    pub fn map_of(&self, coords: &[Scalar]) -> Matrix {
        let (w, v) = (self.target.dim(), self.source.dim());
        let mut m = Matrix::zeros(w, v);
        for (c, b) in coords.iter().zip(&self.maps) {
            m.add_assign_scaled(b, c);
        }
        m
    }

    /// Expresses a linear operator on maps, `φ ↦ op(φ)`, as a matrix in hom
    /// coordinates. Panics if the image leaves the hom space.
    pub fn operator_matrix(&self, op: impl Fn(&Matrix) -> Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> =
            self.maps.iter().map(|b| self.coordinates(&op(b)).expect("operator preserves R-linear maps")).collect();
        Matrix::from_columns(self.dim(), &cols)
    }
}

/// R-linear maps `V → W` as an R-module with `(f·φ)(v) = f·φ(v)`.
pub fn module_hom_space(v: &RModule, w: &RModule) -> Result<HomModule> {
    if v.ring() != w.ring() {
        return Err(Error::RingMismatch);
    }
    let (dv, dw) = (v.dim(), w.dim());
    let ring = v.ring();
    // Unknown φ[a][b] at index a·dv + b; constraint φ·act_V(b_i) = act_W(b_i)·φ.
    let mut rows = Vec::new();
    for i in 0..ring.dim() {
        let av = &v.action()[i];
        let aw = &w.action()[i];
        for a in 0..dw {
            for b in 0..dv {
                let mut row = vec![Scalar::zero(); dw * dv];
                for c in 0..dv {
                    row[a * dv + c] += &av[(c, b)];
                }
                for c in 0..dw {
                    row[c * dv + b] -= &aw[(a, c)];
                }
                rows.push(row);
            }
        }
    }
    let maps: Vec<Matrix> = if rows.is_empty() {
        Subspace::full(dw * dv).basis().iter().map(|x| Matrix::new(dw, dv, x.clone()).unwrap()).collect()
    } else {
        kernel(&Matrix::from_rows(rows, dw * dv).unwrap())
            .basis()
            .iter()
            .map(|x| Matrix::new(dw, dv, x.clone()).unwrap())
            .collect()
    };
    let mut hom = HomModule { source: v.clone(), target: w.clone(), module: RModule::zero(Arc::clone(ring)), maps };
    let action = w.action().iter().map(|aw| hom.operator_matrix(|phi| aw.mul(phi))).collect();
    hom.module = RModule::new(Arc::clone(ring), hom.dim(), action)?;
    Ok(hom)
}

/// Linear combination of ring elements.
pub fn ring_combine(ring: &BaseRing, coeffs: &[Scalar], elems: &[Vec<Scalar>]) -> Vec<Scalar> {
    combine(ring.dim(), coeffs, elems)
}

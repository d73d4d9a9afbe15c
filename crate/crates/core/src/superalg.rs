//! Point-case superalgebra `Ω(A × TI) ⊗ End(𝓔)` with `𝓔 = E ⊕ C[1]`.
//!
//! A monomial is `(mask, n)`: bit 0 of `mask` is `ṫ`, bit `i + 1` is `eⁱ`,
//! and `n` is the power of `t`. Factors are ordered by increasing bit, so
//! `ṫ` always comes first. Matrices act on `𝓔` with `E` in the first `e`
//! coordinates (even) and `C` in the last `c` (odd); `J = diag(1_E, −1_C)`.
//!
//! A superconnection at a point is `d + η` with `η` an odd element; its
//! square is the form-linear element `dη + η²`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::forms::{increasing_tuples, Form};
use crate::linalg::Matrix;
use crate::scalar::{one, Scalar};
use crate::superconn::{GradedElement, SuperData};

pub type Mono = (u32, u32);

/// Sign of `e^{m1} ∧ e^{m2}` reordered to increasing bits; `None` if they
/// share a factor. `Some(true)` means negative.
pub fn wedge_sign(m1: u32, m2: u32) -> Option<bool> {
    if m1 & m2 != 0 {
        return None;
    }
    let mut neg = false;
    let mut m = m2;
    while m != 0 {
        let b = m.trailing_zeros();
        if (m1 >> (b + 1)).count_ones() % 2 == 1 {
            neg = !neg;
        }
        m &= m - 1;
    }
    Some(neg)
}

fn parity(mask: u32) -> bool {
    mask.count_ones() % 2 == 1
}

/// Shape data shared by all elements: `dim A`, `dim E`, `dim C` and the
/// Chevalley–Eilenberg differential of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ctx {
    pub a: usize,
    pub e: usize,
    pub c: usize,
    /// `d eᵏ = Σ coeff · e^{two}` for each `k`.
    dtab: Vec<Vec<(u32, Scalar)>>,
}

impl Ctx {
    pub fn new(alg: &Algebroid, e: usize, c: usize) -> Result<Arc<Ctx>> {
        if !alg.ring().is_point() {
            return Err(Error::UnsupportedRing("this computation is implemented over the rationals only".into()));
        }
        let a = alg.dim();
        if a > 30 {
            return Err(Error::Shape("algebroid too large".into()));
        }
        let dtab = (0..a)
            .map(|k| {
                let mut out = Vec::new();
                for i in 0..a {
                    for j in i + 1..a {
                        let cc = alg.c(i, j, k);
                        if !cc.is_zero() {
                            out.push(((1u32 << (i + 1)) | (1u32 << (j + 1)), -cc.clone()));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Arc::new(Ctx { a, e, c, dtab }))
    }

    pub fn n(&self) -> usize {
        self.e + self.c
    }

    /// `d_A` of a monomial (no `t`-part), as a list of signed monomials.
    pub fn d_mask(&self, m: u32) -> Vec<(u32, Scalar)> {
        let mut out = Vec::new();
        let mut r = 0usize;
        for b in 0..32u32 {
            if m & (1 << b) == 0 {
                continue;
            }
            if b >= 1 {
                let prefix = m & ((1u32 << b) - 1);
                let suffix = m & !((1u32 << (b + 1)) - 1);
                for (two, coeff) in &self.dtab[(b - 1) as usize] {
                    let Some(s1) = wedge_sign(prefix, *two) else { continue };
                    let Some(s2) = wedge_sign(prefix | two, suffix) else { continue };
                    let neg = s1 ^ s2 ^ (r % 2 == 1);
                    out.push((prefix | two | suffix, if neg { -coeff.clone() } else { coeff.clone() }));
                }
            }
            r += 1;
        }
        out
    }

    pub fn j(&self) -> Matrix {
        let mut j = Matrix::identity(self.n());
        for i in self.e..self.n() {
            j[(i, i)] = -one();
        }
        j
    }

    /// `JMJ`: flips the sign of the odd (off-diagonal block) part.
    pub fn j_conj(&self, m: &Matrix) -> Matrix {
        let e = self.e;
        let mut out = m.clone();
        for i in 0..self.n() {
            for k in 0..self.n() {
                if (i < e) != (k < e) {
                    out[(i, k)] = -out[(i, k)].clone();
                }
            }
        }
        out
    }
}

/// An element of `Ω(A × TI) ⊗ End(𝓔)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperEnd {
    ctx: Arc<Ctx>,
    terms: BTreeMap<Mono, Matrix>,
}

impl SuperEnd {
    pub fn zero(ctx: &Arc<Ctx>) -> Self {
        SuperEnd { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn identity(ctx: &Arc<Ctx>) -> Self {
        let mut z = Self::zero(ctx);
        z.add_term((0, 0), &Matrix::identity(ctx.n()), &one());
        z
    }

    pub fn term(ctx: &Arc<Ctx>, mono: Mono, m: Matrix) -> Self {
        let mut z = Self::zero(ctx);
        z.add_term(mono, &m, &one());
        z
    }

    pub fn ctx(&self) -> &Arc<Ctx> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Matrix> {
        &self.terms
    }

    pub fn get(&self, mono: Mono) -> Matrix {
        self.terms.get(&mono).cloned().unwrap_or_else(|| Matrix::zeros(self.ctx.n(), self.ctx.n()))
    }

    pub fn add_term(&mut self, mono: Mono, m: &Matrix, s: &Scalar) {
        if s.is_zero() || m.is_zero() {
            return;
        }
        let n = self.ctx.n();
        let entry = self.terms.entry(mono).or_insert_with(|| Matrix::zeros(n, n));
        entry.add_assign_scaled(m, s);
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SuperEnd) -> SuperEnd {
        let mut out = self.clone();
        for (k, m) in &other.terms {
            out.add_term(*k, m, &one());
        }
        out
    }

    pub fn sub(&self, other: &SuperEnd) -> SuperEnd {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> SuperEnd {
        let mut out = Self::zero(&self.ctx);
        for (k, m) in &self.terms {
            out.add_term(*k, m, s);
        }
        out
    }

    pub fn neg(&self) -> SuperEnd {
        self.scale(&-one())
    }

    pub fn map(&self, f: impl Fn(Mono, &Matrix) -> Matrix) -> SuperEnd {
        let mut out = Self::zero(&self.ctx);
        for (k, m) in &self.terms {
            out.add_term(*k, &f(*k, m), &one());
        }
        out
    }

    /// Product with the Koszul rule `(θ⊗M)(θ'⊗M') = θθ' ⊗ (−1)^{|M||θ'|} MM'`.
    pub fn mul(&self, other: &SuperEnd) -> SuperEnd {
        let mut out = Self::zero(&self.ctx);
        for ((m1, n1), a) in &self.terms {
            let a_j = self.ctx.j_conj(a);
            for ((m2, n2), b) in &other.terms {
                let Some(neg) = wedge_sign(*m1, *m2) else { continue };
                let left = if parity(*m2) { &a_j } else { a };
                let s = if neg { -one() } else { one() };
                out.add_term((m1 | m2, n1 + n2), &left.mul(b), &s);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> SuperEnd {
        let mut out = SuperEnd::identity(&self.ctx);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by a polynomial in `t` (coefficients by power).
    pub fn mul_poly(&self, p: &[Scalar]) -> SuperEnd {
        let mut out = Self::zero(&self.ctx);
        for ((m, n), a) in &self.terms {
            for (i, c) in p.iter().enumerate() {
                out.add_term((*m, n + i as u32), a, c);
            }
        }
        out
    }

    /// `d_{A×TI} = d_A + ṫ ∂_t`, acting on the form part.
    pub fn d(&self) -> SuperEnd {
        let mut out = Self::zero(&self.ctx);
        for ((m, n), a) in &self.terms {
            for (m2, c) in self.ctx.d_mask(*m) {
                out.add_term((m2, *n), a, &c);
            }
            if *n > 0 && m & 1 == 0 {
                out.add_term((m | 1, n - 1), a, &Scalar::from_integer((*n).into()));
            }
        }
        out
    }

    /// `θ⊗M ↦ (−1)^{|θ|} θ⊗JMJ`, the rule `d∘X = dX + π(X)∘d`.
    pub fn pi(&self) -> SuperEnd {
        let ctx = Arc::clone(&self.ctx);
        self.map(|(m, _), a| {
            let b = ctx.j_conj(a);
            if parity(m) {
                b.neg()
            } else {
                b
            }
        })
    }

    /// Splits into total-even and total-odd parts.
    pub fn parity_split(&self) -> (SuperEnd, SuperEnd) {
        let e = self.ctx.e;
        let n = self.ctx.n();
        let (mut even, mut odd) = (Self::zero(&self.ctx), Self::zero(&self.ctx));
        for ((m, t), a) in &self.terms {
            let mut diag = a.clone();
            let mut off = a.clone();
            for i in 0..n {
                for k in 0..n {
                    if (i < e) != (k < e) {
                        diag[(i, k)] = Scalar::zero();
                    } else {
                        off[(i, k)] = Scalar::zero();
                    }
                }
            }
            let (form_even_part, form_odd_part) = if parity(*m) { (off, diag) } else { (diag, off) };
            even.add_term((*m, *t), &form_even_part, &one());
            odd.add_term((*m, *t), &form_odd_part, &one());
        }
        (even, odd)
    }

    /// Graded commutator `[x, y] = xy − (−1)^{|x||y|} yx`, split by parity.
    pub fn supercommutator(&self, other: &SuperEnd) -> SuperEnd {
        let (xe, xo) = self.parity_split();
        let (ye, yo) = other.parity_split();
        let plain = |x: &SuperEnd, y: &SuperEnd| x.mul(y).sub(&y.mul(x));
        let anti = |x: &SuperEnd, y: &SuperEnd| x.mul(y).add(&y.mul(x));
        plain(&xe, &ye).add(&plain(&xe, &yo)).add(&plain(&xo, &ye)).add(&anti(&xo, &yo))
    }

    /// `tr_E − tr_C` on every coefficient.
    pub fn supertrace(&self) -> TiForm {
        let e = self.ctx.e;
        let mut out = TiForm::zero(&self.ctx);
        for (k, a) in &self.terms {
            let mut s = Scalar::zero();
            for i in 0..self.ctx.n() {
                if i < e {
                    s += &a[(i, i)];
                } else {
                    s -= &a[(i, i)];
                }
            }
            out.add(*k, &s);
        }
        out
    }

    /// Termwise transpose adjoint `θ⊗φ ↦ θ⊗(−P_q φᵀ)` with
    /// `P_q = diag(1_E, (−1)^{q+1} 1_C)`, `q = |θ|`: the operator on
    /// `𝓔*`-valued forms determined by the pairing identity.
    pub fn adjoint(&self) -> SuperEnd {
        let e = self.ctx.e;
        let n = self.ctx.n();
        self.map(|(m, _), a| {
            let mut out = a.transpose().neg();
            if m.count_ones() % 2 == 0 {
                for i in e..n {
                    for k in 0..n {
                        out[(i, k)] = -out[(i, k)].clone();
                    }
                }
            }
            out
        })
    }

    /// `G⁻¹ X G` on every coefficient.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> SuperEnd {
        self.map(|_, a| g_inv.mul(a).mul(g))
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }
}

/// Scalar-valued element of `Ω(A × TI)` with polynomial `t`-dependence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiForm {
    ctx: Arc<Ctx>,
    terms: BTreeMap<Mono, Scalar>,
}

impl TiForm {
    pub fn zero(ctx: &Arc<Ctx>) -> Self {
        TiForm { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn add(&mut self, mono: Mono, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
        *entry += s;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &TiForm) -> TiForm {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add(*k, v);
        }
        out
    }

    pub fn minus(&self, other: &TiForm) -> TiForm {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add(*k, &-v.clone());
        }
        out
    }

    pub fn d(&self) -> TiForm {
        let mut out = TiForm::zero(&self.ctx);
        for ((m, n), v) in &self.terms {
            for (m2, c) in self.ctx.d_mask(*m) {
                out.add((m2, *n), &(v * c));
            }
            if *n > 0 && m & 1 == 0 {
                out.add((m | 1, n - 1), &(v * Scalar::from_integer((*n).into())));
            }
        }
        out
    }

    /// Berezin integral: the `ṫ`-coefficient, integrated over `[0, 1]`.
    pub fn berezin(&self) -> MixedForm {
        let mut out = MixedForm::zero(self.ctx.a);
        for ((m, n), v) in &self.terms {
            if m & 1 == 1 {
                out.add_mono(m >> 1, &(v / Scalar::from_integer((n + 1).into())));
            }
        }
        out
    }

    /// The `ṫ`-free part evaluated at `t = s`.
    pub fn eval_even(&self, s: &Scalar) -> MixedForm {
        let mut out = MixedForm::zero(self.ctx.a);
        for ((m, n), v) in &self.terms {
            if m & 1 == 0 {
                let mut p = Scalar::one();
                for _ in 0..*n {
                    p *= s;
                }
                out.add_mono(m >> 1, &(v * p));
            }
        }
        out
    }
}

/// Scalar form of mixed degree on `A`: one component per degree `0..=a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedForm {
    components: Vec<Form>,
}

impl MixedForm {
    pub fn zero(a: usize) -> Self {
        MixedForm { components: (0..=a).map(|p| Form::zero(p, a, 1)).collect() }
    }

    pub fn from_components(components: Vec<Form>) -> Result<Self> {
        let a = components.len().saturating_sub(1);
        if components.iter().enumerate().any(|(p, f)| f.degree() != p || f.dim_a() != a || f.width() != 1) {
            return Err(Error::Shape("mixed form components must be scalar forms of degrees 0..=dim A".into()));
        }
        Ok(MixedForm { components })
    }

    pub fn dim_a(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[Form] {
        &self.components
    }

    pub fn component(&self, p: usize) -> &Form {
        &self.components[p]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Form::is_zero)
    }

    /// Adds `s · e^{mask}` (bit `i` of `mask` is `eⁱ`).
    pub fn add_mono(&mut self, mask: u32, s: &Scalar) {
        let a = self.dim_a();
        let idx: Vec<usize> = (0..a).filter(|i| mask & (1 << i) != 0).collect();
        let f = Form::monomial(a, &idx, s.clone());
        let p = idx.len();
        self.components[p] = self.components[p].add(&f);
    }

    pub fn add(&self, other: &MixedForm) -> MixedForm {
        MixedForm { components: self.components.iter().zip(&other.components).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, other: &MixedForm) -> MixedForm {
        MixedForm { components: self.components.iter().zip(&other.components).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> MixedForm {
        MixedForm { components: self.components.iter().map(|x| x.scale(s)).collect() }
    }

    /// Nonzero degrees.
    pub fn support(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&p| !self.components[p].is_zero()).collect()
    }

    /// If `self = r · other` for a single scalar `r`, returns `r`.
    pub fn ratio_to(&self, other: &MixedForm) -> Option<Scalar> {
        let mut r: Option<Scalar> = None;
        for (x, y) in self.components.iter().zip(&other.components) {
            for (u, v) in x.data().iter().zip(y.data()) {
                if v.is_zero() {
                    if !u.is_zero() {
                        return None;
                    }
                    continue;
                }
                let q = u / v;
                match &r {
                    None => r = Some(q),
                    Some(r0) if *r0 != q => return None,
                    _ => {}
                }
            }
        }
        r
    }
}

/// Converts a form value set into monomials `(mask without ṫ bit, value)`.
fn form_monomials(f: &Form) -> Vec<(u32, Vec<Scalar>)> {
    increasing_tuples(f.dim_a(), f.degree())
        .into_iter()
        .enumerate()
        .map(|(r, t)| (t.iter().fold(0u32, |m, &i| m | (1 << (i + 1))), f.value(r).to_vec()))
        .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// The odd element `η` with `D = d_A + η` for point-case data.
pub fn eta_of(data: &SuperData) -> Result<SuperEnd> {
    let (a, e, c) = data.dims();
    let ctx = Ctx::new(data.algebroid(), e, c)?;
    let n = e + c;
    let mut eta = SuperEnd::zero(&ctx);
    let mut m0 = Matrix::zeros(n, n);
    m0.set_block(0, e, data.core_anchor());
    eta.add_term((0, 0), &m0, &one());
    for i in 0..a {
        let mut m = Matrix::zeros(n, n);
        m.set_block(0, 0, &data.nabla_s().nabla()[i]);
        m.set_block(e, e, &data.nabla_c().nabla()[i]);
        eta.add_term((1 << (i + 1), 0), &m, &one());
    }
    for (r, t) in increasing_tuples(a, 2).into_iter().enumerate() {
        let mut m = Matrix::zeros(n, n);
        m.set_block(e, 0, &data.omega().values()[r].neg());
        eta.add_term(((1 << (t[0] + 1)) | (1 << (t[1] + 1)), 0), &m, &one());
    }
    Ok(eta)
}

/// `(d + η)² = dη + η²`.
pub fn curvature(eta: &SuperEnd) -> SuperEnd {
    eta.d().add(&eta.mul(eta))
}

/// `Ω(A) ⊗ 𝓔`-valued (or `𝓔*`-valued) point element: coordinate vectors by
/// form monomial (`ṫ`-free masks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SVec {
    ctx: Arc<Ctx>,
    terms: BTreeMap<u32, Vec<Scalar>>,
}

impl SVec {
    pub fn zero(ctx: &Arc<Ctx>) -> Self {
        SVec { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn basis(ctx: &Arc<Ctx>, mask: u32, i: usize) -> Self {
        let mut v = Self::zero(ctx);
        let mut x = vec![Scalar::zero(); ctx.n()];
        x[i] = one();
        v.add(mask, &x, &one());
        v
    }

    /// Every `e^{mask} ⊗ basis vector`.
    pub fn all_basis(ctx: &Arc<Ctx>) -> Vec<SVec> {
        let mut out = Vec::new();
        for m in 0..(1u32 << ctx.a) {
            for i in 0..ctx.n() {
                out.push(Self::basis(ctx, m << 1, i));
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<u32, Vec<Scalar>> {
        &self.terms
    }

    pub fn add(&mut self, mask: u32, x: &[Scalar], s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let n = self.ctx.n();
        let entry = self.terms.entry(mask).or_insert_with(|| vec![Scalar::zero(); n]);
        for (o, v) in entry.iter_mut().zip(x) {
            *o += v * s;
        }
        if entry.iter().all(Zero::is_zero) {
            self.terms.remove(&mask);
        }
    }

    pub fn plus(&self, other: &SVec) -> SVec {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add(*m, x, &one());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total parity of a homogeneous basis element (`C` slots odd).
    pub fn parity_of(&self, mask: u32, i: usize) -> bool {
        parity(mask) ^ (i >= self.ctx.e)
    }

    pub fn from_graded(ctx: &Arc<Ctx>, v: &GradedElement) -> Self {
        let mut out = Self::zero(ctx);
        let (e, n) = (ctx.e, ctx.n());
        for f in &v.side {
            for (m, x) in form_monomials(f) {
                let mut y = vec![Scalar::zero(); n];
                y[..e].clone_from_slice(&x);
                out.add(m, &y, &one());
            }
        }
        for f in &v.core {
            for (m, x) in form_monomials(f) {
                let mut y = vec![Scalar::zero(); n];
                y[e..].clone_from_slice(&x);
                out.add(m, &y, &one());
            }
        }
        out
    }

    pub fn to_graded(&self) -> GradedElement {
        let (a, e, c) = (self.ctx.a, self.ctx.e, self.ctx.c);
        let mut g = GradedElement::zero(a, c, e);
        for (m, x) in &self.terms {
            let idx: Vec<usize> = (0..a).filter(|i| m & (1 << (i + 1)) != 0).collect();
            let p = idx.len();
            let side =
                Form::from_fn(p, a, e, |t| if t == idx.as_slice() { x[..e].to_vec() } else { vec![Scalar::zero(); e] });
            let core =
                Form::from_fn(p, a, c, |t| if t == idx.as_slice() { x[e..].to_vec() } else { vec![Scalar::zero(); c] });
            g.side[p] = g.side[p].add(&side);
            g.core[p] = g.core[p].add(&core);
        }
        g
    }

    pub fn d(&self) -> SVec {
        let mut out = Self::zero(&self.ctx);
        for (m, x) in &self.terms {
            for (m2, c) in self.ctx.d_mask(*m) {
                out.add(m2, x, &c);
            }
        }
        out
    }

    /// `(θ⊗M)(ω⊗x) = θω ⊗ (−1)^{|M||ω|} Mx` for the `t`-free, `ṫ`-free part of `x`.
    pub fn act(op: &SuperEnd, v: &SVec) -> SVec {
        let mut out = Self::zero(&v.ctx);
        for ((m1, n1), a) in op.terms() {
            if *n1 != 0 || m1 & 1 != 0 {
                continue;
            }
            for (m2, x) in &v.terms {
                let Some(neg) = wedge_sign(*m1, *m2) else { continue };
                let mat = if parity(*m2) { op.ctx.j_conj(a) } else { a.clone() };
                out.add(m1 | m2, &mat.mul_vec(x), &if neg { -one() } else { one() });
            }
        }
        out
    }

    /// `(d + η) v`.
    pub fn apply(eta: &SuperEnd, v: &SVec) -> SVec {
        v.d().plus(&Self::act(eta, v))
    }
}

/// `⟨ω⊗x, θ⊗ξ⟩ = (−1)^{|x||θ|} ωθ · ξ(x)`, as a map from masks to scalars.
pub fn pairing(v: &SVec, s: &SVec) -> BTreeMap<u32, Scalar> {
    let e = v.ctx.e;
    let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (m1, x) in &v.terms {
        for (m2, xi) in &s.terms {
            let Some(neg) = wedge_sign(*m1, *m2) else { continue };
            for i in 0..x.len() {
                let mut val = &x[i] * &xi[i];
                if val.is_zero() {
                    continue;
                }
                let odd_x = i >= e;
                if neg ^ (odd_x && parity(*m2)) {
                    val = -val;
                }
                *out.entry(m1 | m2).or_insert_with(Scalar::zero) += val;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `d_A` of a scalar form given as masks.
pub fn d_scalar(ctx: &Ctx, f: &BTreeMap<u32, Scalar>) -> BTreeMap<u32, Scalar> {
    let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (m, v) in f {
        for (m2, c) in ctx.d_mask(*m) {
            *out.entry(m2).or_insert_with(Scalar::zero) += v * c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// An operator `X₀ + X₁ ∘ d` on `Ω(A) ⊗ 𝓔` (`d² = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpPair {
    pub x0: SuperEnd,
    pub x1: SuperEnd,
}

impl OpPair {
    /// `d + η`.
    pub fn superconnection(eta: &SuperEnd) -> Self {
        OpPair { x0: eta.clone(), x1: SuperEnd::identity(eta.ctx()) }
    }

    pub fn mul(&self, other: &OpPair) -> OpPair {
        let x0 = self.x0.mul(&other.x0).add(&self.x1.mul(&other.x0.d()));
        let x1 = self.x0.mul(&other.x1).add(&self.x1.mul(&other.x0.pi())).add(&self.x1.mul(&other.x1.d()));
        OpPair { x0, x1 }
    }

    pub fn sub(&self, other: &OpPair) -> OpPair {
        OpPair { x0: self.x0.sub(&other.x0), x1: self.x1.sub(&other.x1) }
    }

    pub fn is_form_linear(&self) -> bool {
        self.x1.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::cartan;
    use crate::scalar::q;

    fn sl2() -> Algebroid {
        // [h,e] = 2e, [h,f] = −2f, [e,f] = h with (h, e, f) = (0, 1, 2).
        let mut br = vec![Scalar::zero(); 27];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            br[(i * 3 + j) * 3 + k] = q(v);
            br[(j * 3 + i) * 3 + k] = q(-v);
        };
        set(0, 1, 1, 2);
        set(0, 2, 2, -2);
        set(1, 2, 0, 1);
        Algebroid::lie_algebra(3, br).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b10, 0b100), Some(false));
        assert_eq!(wedge_sign(0b100, 0b10), Some(true));
        assert_eq!(wedge_sign(0b110, 0b10), None);
        assert_eq!(wedge_sign(0b1010, 0b100), Some(true));
    }

    #[test]
    fn ce_differential_matches_cartan() {
        let alg = Arc::new(sl2());
        let ctx = Ctx::new(&alg, 0, 0).unwrap();
        let triv = Arc::clone(&alg).trivial_connection();
        for p in 0..3 {
            for t in increasing_tuples(3, p) {
                let mask = t.iter().fold(0u32, |m, &i| m | (1 << (i + 1)));
                let f = Form::monomial(3, &t, q(1));
                let expected = cartan(&triv, &f);
                let mut got = MixedForm::zero(3);
                for (m, c) in ctx.d_mask(mask) {
                    got.add_mono(m >> 1, &c);
                }
                assert_eq!(got.component(p + 1), &expected, "d of {t:?}");
            }
        }
    }

    #[test]
    fn d_squares_to_zero() {
        let alg = Arc::new(sl2());
        let ctx = Ctx::new(&alg, 0, 0).unwrap();
        for m in 0..8u32 {
            let once: BTreeMap<u32, Scalar> =
                ctx.d_mask(m << 1).into_iter().fold(BTreeMap::new(), |mut acc, (k, v)| {
                    *acc.entry(k).or_insert_with(Scalar::zero) += v;
                    acc
                });
            assert!(d_scalar(&ctx, &once).is_empty());
        }
    }
}

//! Metrics, adjoint superconnections and Chern–Simons forms (point case).
//!
//! With `η` the odd element of `D = d + η`, the dual superconnection is
//! `D† = d + η†` on `Ω(A) ⊗ 𝓔*`, where `η†` is fixed by
//! `d⟨a, ς⟩ = ⟨Da, ς⟩ + (−1)^{|a|}⟨a, D†ς⟩`. A graded metric `g: 𝓔 → 𝓔*`
//! transports it back: `ᵍD = d + G⁻¹η†G`. On `A × TI`,
//! `T = d + ṫ∂_t + tη + (1 − t)ᵍη`, and
//! `cs_k = ∫₀¹ (ṫ-coefficient of str (T²)ᵏ) dt`.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::{exactness_certificate, Form};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::{one, q, Scalar};
use crate::superalg::{curvature, d_scalar, eta_of, pairing, Ctx, MixedForm, OpPair, SVec, SuperEnd, TiForm};
use crate::superconn::SuperData;

/// Symmetric invertible Gram matrices on `E` and `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMetric {
    gram_e: Matrix,
    gram_c: Matrix,
}

impl GradedMetric {
    pub fn new(gram_e: Matrix, gram_c: Matrix) -> Result<Self> {
        for (name, g) in [("E", &gram_e), ("C", &gram_c)] {
            if !g.is_square() || g.transpose() != *g {
                return Err(Error::Precondition(format!("Gram matrix on {name} is not symmetric")));
            }
            if g.inverse().is_none() {
                return Err(Error::Precondition(format!("Gram matrix on {name} is singular")));
            }
        }
        Ok(GradedMetric { gram_e, gram_c })
    }

    pub fn identity(data: &SuperData) -> Self {
        GradedMetric { gram_e: Matrix::identity(data.side().dim()), gram_c: Matrix::identity(data.core().dim()) }
    }

    /// `PᵀΔP` with `P` unimodular and `Δ` diagonal with entries in `1..=3`.
    pub fn random(rng: &mut ChaCha8Rng, data: &SuperData) -> Self {
        let mut gram = |n: usize| {
            let p = crate::models::random_unimodular(rng, n);
            let mut d = Matrix::zeros(n, n);
            for i in 0..n {
                d[(i, i)] = q(rng.gen_range(1..=3));
            }
            p.transpose().mul(&d).mul(&p)
        };
        let gram_e = gram(data.side().dim());
        let gram_c = gram(data.core().dim());
        GradedMetric { gram_e, gram_c }
    }

    pub fn gram_e(&self) -> &Matrix {
        &self.gram_e
    }

    pub fn gram_c(&self) -> &Matrix {
        &self.gram_c
    }

    /// `blockdiag(gram_E, gram_C)` in the `E`-first layout.
    pub fn matrix(&self) -> Matrix {
        self.gram_e.direct_sum(&self.gram_c)
    }

    fn check_for(&self, data: &SuperData) -> Result<()> {
        if self.gram_e.rows() != data.side().dim() || self.gram_c.rows() != data.core().dim() {
            return Err(Error::Shape("metric does not match the bundle dimensions".into()));
        }
        Ok(())
    }
}

/// A (possibly degree-nonhomogeneous) superconnection `d + η` at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NhSuperOp {
    eta: SuperEnd,
}

impl NhSuperOp {
    pub fn new(eta: SuperEnd) -> Self {
        NhSuperOp { eta }
    }

    pub fn eta(&self) -> &SuperEnd {
        &self.eta
    }

    pub fn ctx(&self) -> &Arc<Ctx> {
        self.eta.ctx()
    }

    pub fn square(&self) -> SuperEnd {
        curvature(&self.eta)
    }

    pub fn is_flat(&self) -> bool {
        self.square().is_zero()
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        SVec::apply(&self.eta, v)
    }

    pub fn as_pair(&self) -> OpPair {
        OpPair::superconnection(&self.eta)
    }
}

fn require_flat(data: &SuperData) -> Result<()> {
    if data.is_flat() {
        Ok(())
    } else {
        Err(Error::NotFlat(format!("conditions {:?} fail", data.is_flat_super().failed_conditions())))
    }
}

/// `D = d + η` for point-case data.
pub fn superconnection(data: &SuperData) -> Result<NhSuperOp> {
    Ok(NhSuperOp::new(eta_of(data)?))
}

/// `D†` on `Ω(A) ⊗ 𝓔*` (dual bases, same layout).
pub fn adjoint_superconnection(data: &SuperData) -> Result<NhSuperOp> {
    require_flat(data)?;
    let out = NhSuperOp::new(eta_of(data)?.adjoint());
    if !out.is_flat() {
        return Err(Error::Internal("the adjoint of a flat superconnection does not square to zero".into()));
    }
    Ok(out)
}

/// `ᵍD = g⁻¹ ∘ D† ∘ g`.
pub fn metric_transport(data: &SuperData, g: &GradedMetric) -> Result<NhSuperOp> {
    g.check_for(data)?;
    let dual = adjoint_superconnection(data)?;
    let gm = g.matrix();
    let gi = gm.inverse().expect("checked invertible");
    let out = NhSuperOp::new(dual.eta().conjugate(&gm, &gi));
    if !out.is_flat() {
        return Err(Error::Internal("metric transport does not square to zero".into()));
    }
    Ok(out)
}

/// `ᵍη` for an arbitrary element (no flatness needed).
pub fn metric_adjoint(eta: &SuperEnd, g: &GradedMetric) -> SuperEnd {
    let gm = g.matrix();
    let gi = gm.inverse().expect("checked invertible");
    eta.adjoint().conjugate(&gm, &gi)
}

/// `T = d_{A×TI} + tη₁ + (1 − t)η₀` interpolating `d + η₀` (at `t = 0`)
/// and `d + η₁` (at `t = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transgression {
    eta0: SuperEnd,
    eta1: SuperEnd,
}

impl Transgression {
    pub fn between(eta0: SuperEnd, eta1: SuperEnd) -> Self {
        Transgression { eta0, eta1 }
    }

    /// `tη₁ + (1 − t)η₀`.
    pub fn eta(&self) -> SuperEnd {
        self.eta1.mul_poly(&[Scalar::zero(), one()]).add(&self.eta0.mul_poly(&[one(), -one()]))
    }

    /// `T²`, form-linear.
    pub fn square(&self) -> SuperEnd {
        curvature(&self.eta())
    }

    /// The `t`-free, `ṫ`-free operator at `t = s`.
    pub fn at(&self, s: &Scalar) -> SuperEnd {
        self.eta1.scale(s).add(&self.eta0.scale(&(one() - s)))
    }

    /// `str (T²)ᵏ`.
    pub fn supertrace_power(&self, k: usize) -> TiForm {
        self.square().pow(k).supertrace()
    }

    /// Berezin integral of `str (T²)ᵏ`.
    pub fn chern_simons(&self, k: usize) -> MixedForm {
        self.supertrace_power(k).berezin()
    }
}

/// `T = tD + (1 − t)ᵍD` over `A × TI`.
pub fn transgression(data: &SuperData, g: &GradedMetric) -> Result<Transgression> {
    let d = superconnection(data)?;
    let gd = metric_transport(data, g)?;
    Ok(Transgression::between(gd.eta().clone(), d.eta().clone()))
}

/// `tr_E − tr_C`, coefficientwise.
pub fn supertrace(x: &SuperEnd) -> TiForm {
    x.supertrace()
}

fn check_closed(data: &SuperData, f: &MixedForm) -> bool {
    let triv = data.algebroid().trivial_connection();
    f.components().iter().all(|w| crate::forms::cartan(&triv, w).is_zero())
}

/// `cs_k(D, g)`; checked to be closed.
pub fn cs_form(data: &SuperData, g: &GradedMetric, k: usize) -> Result<MixedForm> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    require_flat(data)?;
    let tr = transgression(data, g)?;
    let cs = tr.chern_simons(k);
    if !check_closed(data, &cs) {
        return Err(Error::Internal("Chern–Simons form is not closed".into()));
    }
    Ok(cs)
}

/// `str(D(ᵍD D)^{k−1} − (ᵍD D)^{k−1} ᵍD)`.
pub fn cs_closed_form_remark(data: &SuperData, g: &GradedMetric, k: usize) -> Result<MixedForm> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    require_flat(data)?;
    let d = superconnection(data)?.as_pair();
    let gd = metric_transport(data, g)?.as_pair();
    let ctx = Arc::clone(d.x0.ctx());
    let mut p = OpPair { x0: SuperEnd::identity(&ctx), x1: SuperEnd::zero(&ctx) };
    let gdd = gd.mul(&d);
    for _ in 1..k {
        p = p.mul(&gdd);
    }
    let w = d.mul(&p).sub(&p.mul(&gd));
    if !w.is_form_linear() {
        return Err(Error::Internal("the closed-form expression is not form-linear".into()));
    }
    Ok(w.x0.supertrace().eval_even(&Scalar::zero()))
}

/// A primitive `η` with `dη = ω` for a mixed form, degree by degree, under
/// the trivial connection; `None` if some component is not exact.
pub fn mixed_primitive(data: &SuperData, omega: &MixedForm) -> Result<Option<MixedForm>> {
    let alg = data.algebroid();
    let triv = alg.trivial_connection();
    let a = alg.dim();
    let mut prim = MixedForm::zero(a);
    let mut comps: Vec<Form> = prim.components().to_vec();
    for p in 0..=a {
        let w = omega.component(p);
        if w.is_zero() {
            continue;
        }
        if p == 0 {
            return Ok(None);
        }
        match exactness_certificate(&triv, w) {
            Ok(Some(eta)) => comps[p - 1] = eta,
            Ok(None) => return Ok(None),
            Err(Error::NotClosed) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    prim = MixedForm::from_components(comps)?;
    Ok(Some(prim))
}

/// Checks `dη = ω` for a mixed primitive.
pub fn verify_primitive(data: &SuperData, eta: &MixedForm, omega: &MixedForm) -> Result<bool> {
    let triv = data.algebroid().trivial_connection();
    let a = data.algebroid().dim();
    for p in 0..=a {
        let d_eta = if p == 0 { Form::zero(0, a, 1) } else { crate::forms::cartan(&triv, eta.component(p - 1)) };
        if &d_eta != omega.component(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The class of `cs_k` with its certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsClass {
    pub k: usize,
    /// The full (mixed-degree) form.
    pub form: MixedForm,
    /// The degree-`(2k − 1)` component (zero when `2k − 1 > dim A`).
    pub representative: Form,
    /// Primitive of `form − representative`.
    pub other_degrees_primitive: MixedForm,
}

impl CsClass {
    /// Primitive of `other.form − self.form`, if the classes agree.
    pub fn equality_certificate(&self, data: &SuperData, other: &CsClass) -> Result<Option<MixedForm>> {
        if self.k != other.k {
            return Err(Error::Precondition("classes of different k".into()));
        }
        mixed_primitive(data, &other.form.sub(&self.form))
    }

    /// True when the representative is exact.
    pub fn is_zero(&self, data: &SuperData) -> Result<bool> {
        Ok(mixed_primitive(data, &self.form)?.is_some())
    }
}

pub fn cs_class(data: &SuperData, g: &GradedMetric, k: usize) -> Result<CsClass> {
    let form = cs_form(data, g, k)?;
    let a = data.algebroid().dim();
    let deg = 2 * k - 1;
    let representative = if deg <= a { form.component(deg).clone() } else { Form::zero(deg, a, 1) };
    let mut rest = form.clone();
    if deg <= a {
        let mut comps = rest.components().to_vec();
        comps[deg] = Form::zero(deg, a, 1);
        rest = MixedForm::from_components(comps)?;
    }
    let other_degrees_primitive = mixed_primitive(data, &rest)?
        .ok_or_else(|| Error::Internal(format!("components of cs_{k} outside degree {deg} are not exact")))?;
    Ok(CsClass { k, form, representative, other_degrees_primitive })
}

/// Result of [`dual_differential_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDifferentialReport {
    pub report: Report,
    pub square_zero: bool,
}

/// Builds `d_D = d + η†` on `Ω(A) ⊗ 𝓔*`, checks the pairing identity
/// `⟨Da, ς⟩ = d⟨a, ς⟩ − (−1)^{|a|}⟨a, d_D ς⟩` on all basis pairs and
/// whether `d_D² = 0`; the latter must agree with flatness.
pub fn dual_differential_check(data: &SuperData) -> Result<DualDifferentialReport> {
    let eta = eta_of(data)?;
    let dual = eta.adjoint();
    let ctx = Arc::clone(eta.ctx());
    let mut report = Report::new();
    let basis = SVec::all_basis(&ctx);
    let images: Vec<SVec> = basis.iter().map(|v| SVec::apply(&eta, v)).collect();
    let dual_images: Vec<SVec> = basis.iter().map(|v| SVec::apply(&dual, v)).collect();
    'outer: for (ia, a) in basis.iter().enumerate() {
        let (&ma, xa) = a.terms().iter().next().expect("basis vector");
        let slot = xa.iter().position(|x| !x.is_zero()).expect("basis vector");
        let odd = a.parity_of(ma, slot);
        for (is, s) in basis.iter().enumerate() {
            let lhs = d_scalar(&ctx, &pairing(a, s));
            let mut rhs = pairing(&images[ia], s);
            for (m, v) in pairing(a, &dual_images[is]) {
                let v = if odd { -v } else { v };
                *rhs.entry(m).or_insert_with(Scalar::zero) += v;
            }
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                report.push("pairing", vec![ia, is], "the pairing identity fails");
                break 'outer;
            }
        }
    }
    let sq = curvature(&dual);
    let square_zero = sq.is_zero();
    if let Some(((m, _), _)) = sq.terms().iter().next() {
        let witness: Vec<usize> = (0..ctx.a).filter(|i| m & (1 << (i + 1)) != 0).collect();
        report.push("dual-square", witness, "d_D² has a nonzero component on these form indices");
    }
    assert_eq!(square_zero, data.is_flat(), "d_D² = 0 must agree with flatness");
    Ok(DualDifferentialReport { report, square_zero })
}

/// Comparison superconnection `O = d` (`ᵍO = O` for every metric).
pub fn self_adjoint_comparison(data: &SuperData) -> Result<NhSuperOp> {
    let (_, e, c) = data.dims();
    let ctx = Ctx::new(data.algebroid(), e, c)?;
    Ok(NhSuperOp::new(SuperEnd::zero(&ctx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn vacant_and_adjoint_cs1() {
        let d = models::aff1_vacant(q(3)).unwrap();
        let g = GradedMetric::identity(&d);
        let cs = cs_form(&d, &g, 1).unwrap();
        assert_eq!(cs.component(1).data(), &[q(6), q(0)]);
        let alg = Arc::new(models::aff1());
        let d = models::adjoint_point_model(&alg).unwrap();
        let cs = cs_form(&d, &GradedMetric::identity(&d), 1).unwrap();
        assert_eq!(cs.component(1).data(), &[q(-2), q(0)]);
    }

    #[test]
    fn dual_check_on_type1() {
        let d = models::aff1_type1().unwrap();
        let r = dual_differential_check(&d).unwrap();
        assert!(r.report.is_ok(), "{:?}", r.report);
        assert!(r.square_zero);
    }
}

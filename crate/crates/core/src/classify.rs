//! Regular data: splittings of the core-anchor, block form, block-diagonalising
//! gauge, the class `[ω]`, type-0/type-1 builders, normal form and the
//! isomorphism test.
//!
//! In adapted bases `C = K ⊕ Q`, `E = ν ⊕ F` with `F` spanned by `−∂q_j`,
//! the core-anchor is `(0 0; 0 −1)` and flat data has the block shape
//! `∇ˢ = (∇ᵛ 0; Λ ∇ᶠ)`, `∇ᶜ = (∇ᴷ Γ; 0 ∇ᶠ)`, `Ω = (α *; * *)`.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebroid::{Algebroid, Connection};
use crate::error::{Error, Result};
use crate::forms::{CeComplex, HomForm};
use crate::linalg::{image, kernel, ComplementOrder, Matrix, Subspace};
use crate::report::Report;
use crate::ring::{HomModule, RModule};
use crate::scalar::Scalar;
use crate::superconn::SuperData;

/// `C = K ⊕ Q`, `E = ν ⊕ F` with `F = im ∂` and `∂|_Q: Q → F` bijective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSplitting {
    pub k: Subspace,
    pub f: Subspace,
    pub complement_c: Subspace,
    pub complement_e: Subspace,
    /// Columns: basis of `K`, then of `Q`.
    pub basis_c: Matrix,
    /// Columns: basis of `ν`, then `−∂q_j`.
    pub basis_e: Matrix,
}

impl RegularSplitting {
    pub fn rank(&self) -> usize {
        self.f.dim()
    }

    pub fn dim_k(&self) -> usize {
        self.k.dim()
    }

    pub fn dim_nu(&self) -> usize {
        self.complement_e.dim()
    }
}

fn factor_parts(module: &RModule, idem: &[Vec<Scalar>]) -> Vec<Subspace> {
    idem.iter().map(|e| image(&module.act(e))).collect()
}

/// Deterministic splitting with the default complement order.
pub fn regularity(data: &SuperData) -> Result<Option<RegularSplitting>> {
    regularity_with(data, ComplementOrder::LowestFirst)
}

/// Splitting with a chosen greedy complement order. `None` when the rank of
/// `∂` differs between factors of `R ≅ ℚⁿ`.
pub fn regularity_with(data: &SuperData, order: ComplementOrder) -> Result<Option<RegularSplitting>> {
    let d = data.core_anchor();
    let (c, e) = (data.core().dim(), data.side().dim());
    let k = kernel(d);
    let f = image(d);
    let (q, nu) = if k.dim() == c || k.dim() == 0 && f.dim() == e {
        if k.dim() == c {
            (Subspace::zero(c), Subspace::full(e))
        } else {
            (Subspace::full(c), Subspace::zero(e))
        }
    } else {
        let ring = data.algebroid().ring();
        let idem = ring.split_idempotents().ok_or_else(|| {
            Error::UnsupportedRing(
                "splittings of a core-anchor that is neither zero nor bijective need a product of copies of the rationals"
                    .into(),
            )
        })?;
        let cparts = factor_parts(data.core(), &idem);
        let eparts = factor_parts(data.side(), &idem);
        let mut rank = None;
        let mut qv = Vec::new();
        let mut nv = Vec::new();
        for (cp, ep) in cparts.iter().zip(&eparts) {
            let ck = k.intersection(cp);
            let ef = f.intersection(ep);
            let r = cp.dim() - ck.dim();
            match rank {
                None => rank = Some(r),
                Some(r0) if r0 != r => return Ok(None),
                _ => {}
            }
            qv.extend(ck.complement_within(cp, order).basis().iter().cloned());
            nv.extend(ef.complement_within(ep, order).basis().iter().cloned());
        }
        (Subspace::from_independent(c, qv), Subspace::from_independent(e, nv))
    };
    let fv: Vec<Vec<Scalar>> = q.basis().iter().map(|v| d.mul_vec(v).into_iter().map(|x| -x).collect()).collect();
    let mut cc: Vec<Vec<Scalar>> = k.basis().to_vec();
    cc.extend(q.basis().iter().cloned());
    let mut ec: Vec<Vec<Scalar>> = nu.basis().to_vec();
    ec.extend(fv.iter().cloned());
    let basis_c = Matrix::from_columns(c, &cc);
    let basis_e = Matrix::from_columns(e, &ec);
    Ok(Some(RegularSplitting {
        f: Subspace::from_independent(e, fv),
        k,
        complement_c: q,
        complement_e: nu,
        basis_c,
        basis_e,
    }))
}

/// The data rewritten in the adapted bases of a splitting.
pub fn adapted(data: &SuperData, split: &RegularSplitting) -> Result<SuperData> {
    let pe = split.basis_e.inverse().ok_or_else(|| Error::Internal("adapted side basis is singular".into()))?;
    let pc = split.basis_c.inverse().ok_or_else(|| Error::Internal("adapted core basis is singular".into()))?;
    data.change_basis(&pe, &pc)
}

/// The 4-tuple in block form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockData {
    pub dim_k: usize,
    pub dim_nu: usize,
    pub rank: usize,
    pub nabla_nu: Vec<Matrix>,
    pub nabla_k: Vec<Matrix>,
    pub nabla_f: Vec<Matrix>,
    pub lambda: Vec<Matrix>,
    pub gamma: Vec<Matrix>,
    /// Upper-left (`K × ν`) block of `Ω`.
    pub alpha: HomForm,
    /// The whole data in adapted bases.
    pub adapted: SuperData,
}

pub fn block_decompose(data: &SuperData, split: &RegularSplitting) -> Result<BlockData> {
    let ad = adapted(data, split)?;
    let (kd, nd, r) = (split.dim_k(), split.dim_nu(), split.rank());
    let a = data.algebroid().dim();
    let mut out = BlockData {
        dim_k: kd,
        dim_nu: nd,
        rank: r,
        nabla_nu: Vec::new(),
        nabla_k: Vec::new(),
        nabla_f: Vec::new(),
        lambda: Vec::new(),
        gamma: Vec::new(),
        alpha: ad.omega().map(|m| m.block(0, 0, kd, nd)),
        adapted: ad.clone(),
    };
    for x in 0..a {
        let ns = &ad.nabla_s().nabla()[x];
        let nc = &ad.nabla_c().nabla()[x];
        if !ns.block(0, nd, nd, r).is_zero() || !nc.block(kd, 0, r, kd).is_zero() {
            return Err(Error::NotFlat(format!("structural zero block violated along e{x}")));
        }
        let (ff_s, ff_c) = (ns.block(nd, nd, r, r), nc.block(kd, kd, r, r));
        if ff_s != ff_c {
            return Err(Error::NotFlat(format!("the two F-blocks differ along e{x}")));
        }
        out.nabla_nu.push(ns.block(0, 0, nd, nd));
        out.nabla_k.push(nc.block(0, 0, kd, kd));
        out.nabla_f.push(ff_s);
        out.lambda.push(ns.block(nd, 0, r, nd));
        out.gamma.push(nc.block(0, kd, kd, r));
    }
    Ok(out)
}

/// `σ = (0 Γ; Λ 0)` in adapted bases and the block-diagonal result.
pub fn block_diagonalize(data: &SuperData, split: &RegularSplitting) -> Result<(SuperData, HomForm)> {
    if !data.is_flat() {
        return Err(Error::NotFlat("block_diagonalize needs flat data".into()));
    }
    let b = block_decompose(data, split)?;
    let a = data.algebroid().dim();
    let (kd, nd, r) = (b.dim_k, b.dim_nu, b.rank);
    let sigma = HomForm::from_fn(1, a, kd + r, nd + r, |t| {
        let mut m = Matrix::zeros(kd + r, nd + r);
        m.set_block(0, nd, &b.gamma[t[0]]);
        m.set_block(kd, 0, &b.lambda[t[0]]);
        m
    });
    let out = b.adapted.gauge_transform(&sigma)?;
    Ok((out, sigma))
}

/// Checks that adapted data is block diagonal with `Ω_{FF} = −R^F`.
pub fn block_diagonal_report(data: &SuperData, kd: usize, nd: usize) -> Report {
    let mut rep = Report::new();
    let r = data.side().dim() - nd;
    let a = data.algebroid().dim();
    for x in 0..a {
        let ns = &data.nabla_s().nabla()[x];
        let nc = &data.nabla_c().nabla()[x];
        if !ns.block(nd, 0, r, nd).is_zero() || !ns.block(0, nd, nd, r).is_zero() {
            rep.push("side-blocks", vec![x], "∇ˢ is not block diagonal");
        }
        if !nc.block(kd, 0, r, kd).is_zero() || !nc.block(0, kd, kd, r).is_zero() {
            rep.push("core-blocks", vec![x], "∇ᶜ is not block diagonal");
        }
    }
    for (i, t) in crate::forms::increasing_tuples(a, 2).iter().enumerate() {
        let om = &data.omega().values()[i];
        if !om.block(kd, 0, r, nd).is_zero() || !om.block(0, nd, kd, r).is_zero() {
            rep.push("omega-blocks", t.clone(), "Ω is not block diagonal");
        }
        let ff = data.nabla_s().nabla()[t[0]]
            .block(nd, nd, r, r)
            .commutator(&data.nabla_s().nabla()[t[1]].block(nd, nd, r, r))
            .sub(&data.nabla_s().along(&data.algebroid().bracket_basis(t[0], t[1])).block(nd, nd, r, r));
        if om.block(kd, nd, r, r) != ff.neg() {
            rep.push("omega-curvature", t.clone(), "lower-right block of Ω is not −R^F");
        }
    }
    rep
}

/// A class in `H²(A; Hom(ν, K))` with its flat coefficient connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaClass {
    pub omega: HomForm,
    pub hom: HomModule,
    pub connection: Connection,
}

impl OmegaClass {
    pub fn new(omega: HomForm, nabla_nu: &Connection, nabla_k: &Connection) -> Result<Self> {
        let (hom, connection) = Connection::hom(nabla_nu, nabla_k)?;
        Ok(OmegaClass { omega, hom, connection })
    }

    /// `τ` with `d^{Hom}τ = ω`, if the class vanishes.
    pub fn primitive(&self) -> Result<Option<HomForm>> {
        self.primitive_of(&self.omega)
    }

    fn primitive_of(&self, w: &HomForm) -> Result<Option<HomForm>> {
        let f =
            w.to_form(&self.hom).ok_or_else(|| Error::Precondition("ω takes a value that is not R-linear".into()))?;
        let cx = CeComplex::new(&self.connection);
        Ok(cx.exactness_certificate(&f)?.map(|p| HomForm::from_form(&p, &self.hom)))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.primitive()?.is_some())
    }

    /// `τ` with `d^{Hom}τ = other.ω − self.ω`, if the classes agree.
    pub fn difference_primitive(&self, other: &OmegaClass) -> Result<Option<HomForm>> {
        if self.connection != other.connection {
            return Err(Error::ModuleMismatch("classes live in different coefficient systems".into()));
        }
        self.primitive_of(&other.omega.sub(&self.omega))
    }
}

/// Induced flat connections on `ν` and `K` as `Connection`s.
fn induced_connections(data: &SuperData, b: &BlockData, split: &RegularSplitting) -> Result<(Connection, Connection)> {
    let ad = &b.adapted;
    let nu_mod = ad.side().submodule(&Subspace::from_independent(
        ad.side().dim(),
        (0..split.dim_nu()).map(|i| unit(ad.side().dim(), i)).collect(),
    ))?;
    let k_mod = ad.core().submodule(&Subspace::from_independent(
        ad.core().dim(),
        (0..split.dim_k()).map(|i| unit(ad.core().dim(), i)).collect(),
    ))?;
    let alg = Arc::clone(data.algebroid());
    Ok((
        Connection::new(Arc::clone(&alg), nu_mod, b.nabla_nu.clone())?,
        Connection::new(alg, k_mod, b.nabla_k.clone())?,
    ))
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = crate::scalar::one();
    v
}

/// `ω = α + Γ_XΛ_Y − Γ_YΛ_X`, cross-checked against the upper-left block of
/// the block-diagonalised data.
pub fn extract_omega(data: &SuperData, split: &RegularSplitting) -> Result<OmegaClass> {
    let b = block_decompose(data, split)?;
    let a = data.algebroid().dim();
    let omega = HomForm::from_fn(2, a, b.dim_k, b.dim_nu, |t| {
        b.alpha.eval(t).add(&b.gamma[t[0]].mul(&b.lambda[t[1]])).sub(&b.gamma[t[1]].mul(&b.lambda[t[0]]))
    });
    let (diag, _) = block_diagonalize(data, split)?;
    let via_gauge = diag.omega().map(|m| m.block(0, 0, b.dim_k, b.dim_nu));
    if via_gauge != omega {
        return Err(Error::Internal("the two computations of ω disagree".into()));
    }
    let (nnu, nk) = induced_connections(data, &b, split)?;
    OmegaClass::new(omega, &nnu, &nk)
}

fn check_report(name: &str, rep: Report) -> Result<()> {
    if rep.is_ok() {
        Ok(())
    } else {
        let parts: Vec<String> =
            rep.violations.iter().map(|v| format!("{} at {:?}: {}", v.check, v.witness, v.detail)).collect();
        Err(Error::Precondition(format!("{name}: {}", parts.join("; "))))
    }
}

/// `C = E`, `∂ = −1`, `∇ᶜ = ∇ˢ = ∇`, `Ω = −F^∇`; flat for every connection.
pub fn build_type1(alg: &Arc<Algebroid>, side: &RModule, nabla: &Connection) -> Result<SuperData> {
    if nabla.algebroid() != alg || nabla.coeff() != side {
        return Err(Error::ModuleMismatch("connection does not live on the given module".into()));
    }
    let a = alg.dim();
    let n = side.dim();
    let omega = HomForm::from_fn(2, a, n, n, |t| nabla.curvature(t[0], t[1]).neg());
    SuperData::new(
        Arc::clone(alg),
        side.clone(),
        side.clone(),
        Matrix::identity(n).neg(),
        nabla.nabla().to_vec(),
        nabla.nabla().to_vec(),
        omega,
    )
}

/// `∂ = 0` data from flat `∇ˢ`, `∇ᶜ` and a closed `Ω`.
pub fn build_type0(
    alg: &Arc<Algebroid>,
    nabla_s: &Connection,
    nabla_c: &Connection,
    omega: HomForm,
) -> Result<SuperData> {
    let data = SuperData::new(
        Arc::clone(alg),
        nabla_s.coeff().clone(),
        nabla_c.coeff().clone(),
        Matrix::zeros(nabla_s.coeff().dim(), nabla_c.coeff().dim()),
        nabla_c.nabla().to_vec(),
        nabla_s.nabla().to_vec(),
        omega,
    )?;
    check_report("type-0 preconditions", data.conditions_report())?;
    Ok(data)
}

pub fn direct_sum(d1: &SuperData, d2: &SuperData) -> Result<SuperData> {
    d1.direct_sum(d2)
}

/// The invariants `(rank ∂, ∇ᴷ, ∇ᵛ, [ω])`, with `∇ᵛ` and `ω` expressed in
/// the canonical basis of `E/F` (the default-order complement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyingTuple {
    pub rank: usize,
    pub nabla_k: Vec<Matrix>,
    pub nabla_nu: Vec<Matrix>,
    pub omega: OmegaClass,
}

/// Normal form `D₀ ⊕ D₁` with the data to reconstruct the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularNormalForm {
    pub split: RegularSplitting,
    /// Type-0 part on side `ν`, core `K`.
    pub type0: SuperData,
    /// Type-1 part on `F`.
    pub type1: SuperData,
    /// Gauge in the input's bases: `gauge_transform(input, σ)` rewritten in
    /// the adapted bases equals `type0 ⊕ type1`.
    pub sigma: HomForm,
    /// Change from the basis of `ν` to the canonical basis of `E/F`.
    pub canon: Matrix,
    pub tuple: ClassifyingTuple,
}

impl RegularNormalForm {
    pub fn reassemble(&self) -> Result<SuperData> {
        self.type0.direct_sum(&self.type1)
    }

    /// The reassembly with `ν` expressed in the canonical basis of `E/F`.
    pub fn canonical_reassembly(&self) -> Result<SuperData> {
        let n = self.reassemble()?;
        let pe = self.canon.direct_sum(&Matrix::identity(self.split.rank()));
        n.change_basis(&pe, &Matrix::identity(n.core().dim()))
    }

    /// Re-derives the reassembly identity from the input.
    pub fn verify(&self, input: &SuperData) -> Result<bool> {
        let gauged = input.gauge_transform(&self.sigma)?;
        Ok(adapted(&gauged, &self.split)? == self.reassemble()?)
    }
}

pub fn normal_form(data: &SuperData) -> Result<RegularNormalForm> {
    normal_form_with(data, ComplementOrder::LowestFirst)
}

pub fn normal_form_with(data: &SuperData, order: ComplementOrder) -> Result<RegularNormalForm> {
    if !data.is_flat() {
        return Err(Error::NotFlat("normal_form needs flat data".into()));
    }
    let split = regularity_with(data, order)?
        .ok_or_else(|| Error::NotRegular("the core-anchor has different ranks on different factors".into()))?;
    let (diag, sigma_ad) = block_diagonalize(data, &split)?;
    let (kd, nd, r) = (split.dim_k(), split.dim_nu(), split.rank());
    let rep = block_diagonal_report(&diag, kd, nd);
    if !rep.is_ok() {
        return Err(Error::Internal(format!("block diagonalisation failed: {:?}", rep.violations)));
    }
    let sub = |m: &RModule, start: usize, len: usize| {
        m.submodule(&Subspace::from_independent(m.dim(), (start..start + len).map(|i| unit(m.dim(), i)).collect()))
    };
    let alg = Arc::clone(data.algebroid());
    let nu_mod = sub(diag.side(), 0, nd)?;
    let k_mod = sub(diag.core(), 0, kd)?;
    let f_mod = sub(diag.side(), nd, r)?;
    let pick =
        |v: &[Matrix], s: usize, len: usize| -> Vec<Matrix> { v.iter().map(|m| m.block(s, s, len, len)).collect() };
    let nabla_nu = Connection::new(Arc::clone(&alg), nu_mod.clone(), pick(diag.nabla_s().nabla(), 0, nd))?;
    let nabla_k = Connection::new(Arc::clone(&alg), k_mod, pick(diag.nabla_c().nabla(), 0, kd))?;
    let nabla_f = Connection::new(Arc::clone(&alg), f_mod.clone(), pick(diag.nabla_s().nabla(), nd, r))?;
    let omega = diag.omega().map(|m| m.block(0, 0, kd, nd));
    let type0 = build_type0(&alg, &nabla_nu, &nabla_k, omega.clone())?;
    let type1 = build_type1(&alg, &f_mod, &nabla_f)?;

    let pe = split.basis_e.inverse().expect("adapted basis");
    let sigma = sigma_ad.map(|m| split.basis_c.mul(m).mul(&pe));

    // Coordinates of ν's basis along the default-order complement, modulo F.
    let canon = if order == ComplementOrder::LowestFirst {
        Matrix::identity(nd)
    } else {
        let base = regularity_with(data, ComplementOrder::LowestFirst)?.expect("rank does not depend on the order");
        let m = base.basis_e.inverse().expect("adapted basis");
        let coords: Vec<Vec<Scalar>> = split.complement_e.basis().iter().map(|v| m.mul_vec(v)[..nd].to_vec()).collect();
        Matrix::from_columns(nd, &coords)
    };
    let canon_inv = canon.inverse().ok_or_else(|| Error::Internal("quotient change of basis is singular".into()))?;
    let nu_canon = RModule::new(
        Arc::clone(alg.ring()),
        nd,
        nu_mod.action().iter().map(|m| canon.mul(m).mul(&canon_inv)).collect(),
    )?;
    let nabla_nu_canon = nabla_nu.conjugate(nu_canon, &canon, &canon_inv);
    let tuple = ClassifyingTuple {
        rank: r,
        nabla_k: nabla_k.nabla().to_vec(),
        nabla_nu: nabla_nu_canon.nabla().to_vec(),
        omega: OmegaClass::new(omega.map(|m| m.mul(&canon_inv)), &nabla_nu_canon, &nabla_k)?,
    };
    Ok(RegularNormalForm { split, type0, type1, sigma, canon, tuple })
}

/// Which invariant separates two non-isomorphic inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    Algebroid,
    Dimensions { side: (usize, usize), core: (usize, usize) },
    Rank(usize, usize),
    Modules,
    NablaK,
    NablaNu,
    OmegaClass,
}

/// Isomorphism certificate: a gauge `σ` with blocks `τ` on `(K, ν)` and
/// `∇ᶠ₁ − ∇ᶠ₂` on `(F, F)` taking the canonical reassembly of the first
/// normal form to that of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCertificate {
    pub first: RegularNormalForm,
    pub second: RegularNormalForm,
    pub sigma: HomForm,
}

impl IsoCertificate {
    /// Recomputes the chain `d₁ → N₁ → N₂ ← d₂` exactly.
    pub fn verify(&self, d1: &SuperData, d2: &SuperData) -> Result<bool> {
        if !self.first.verify(d1)? || !self.second.verify(d2)? {
            return Ok(false);
        }
        let n1 = self.first.canonical_reassembly()?;
        let n2 = self.second.canonical_reassembly()?;
        Ok(n1.gauge_transform(&self.sigma)? == n2)
    }
}

/// The verdict of [`isomorphic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(Box<IsoCertificate>),
    Distinct(Distinction),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

/// Isomorphism test: equal ranks, equal `∇ᴷ`, `∇ᵛ` tensors under canonical
/// splittings and equal `[ω]`.
pub fn isomorphic(d1: &SuperData, d2: &SuperData) -> Result<IsoVerdict> {
    if d1.algebroid() != d2.algebroid() {
        return Ok(IsoVerdict::Distinct(Distinction::Algebroid));
    }
    let dims = |d: &SuperData| (d.side().dim(), d.core().dim());
    if dims(d1) != dims(d2) {
        return Ok(IsoVerdict::Distinct(Distinction::Dimensions { side: dims(d1), core: dims(d2) }));
    }
    let n1 = normal_form(d1)?;
    let n2 = normal_form(d2)?;
    let (t1, t2) = (&n1.tuple, &n2.tuple);
    if t1.rank != t2.rank {
        return Ok(IsoVerdict::Distinct(Distinction::Rank(t1.rank, t2.rank)));
    }
    let c1 = n1.canonical_reassembly()?;
    let c2 = n2.canonical_reassembly()?;
    if c1.side() != c2.side() || c1.core() != c2.core() {
        return Ok(IsoVerdict::Distinct(Distinction::Modules));
    }
    if t1.nabla_k != t2.nabla_k {
        return Ok(IsoVerdict::Distinct(Distinction::NablaK));
    }
    if t1.nabla_nu != t2.nabla_nu {
        return Ok(IsoVerdict::Distinct(Distinction::NablaNu));
    }
    let Some(tau) = t1.omega.difference_primitive(&t2.omega)? else {
        return Ok(IsoVerdict::Distinct(Distinction::OmegaClass));
    };
    let (kd, nd, r) = (n1.split.dim_k(), n1.split.dim_nu(), n1.split.rank());
    let a = d1.algebroid().dim();
    let (f1, f2) = (n1.type1.nabla_s().nabla(), n2.type1.nabla_s().nabla());
    let sigma = HomForm::from_fn(1, a, kd + r, nd + r, |t| {
        let mut m = Matrix::zeros(kd + r, nd + r);
        m.set_block(0, 0, &tau.eval(t));
        m.set_block(kd, nd, &f1[t[0]].sub(&f2[t[0]]));
        m
    });
    let cert = IsoCertificate { first: n1, second: n2, sigma };
    if !cert.verify(d1, d2)? {
        return Err(Error::Internal("isomorphism certificate does not verify".into()));
    }
    Ok(IsoVerdict::Isomorphic(Box::new(cert)))
}

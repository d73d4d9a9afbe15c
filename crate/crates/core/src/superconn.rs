//! Decomposed VB-algebroid data `(∂, ∇ᶜ, ∇ˢ, Ω)` and the superconnection
//! `D = ∂ + Dᶜ + Dˢ + Ω` on `Ω(A) ⊗ Γ(C[1] ⊕ E)`.
//!
//! Tuple conventions:
//! - `∂: C → E` is an `e × c` matrix, `Ω_{X,Y}: E → C` a `c × e` matrix.
//! - Flatness is the system
//!   `∂∇ᶜ_X = ∇ˢ_X∂`, `Fᶜ_{X,Y} = Ω_{X,Y}∂`, `Fˢ_{X,Y} = ∂Ω_{X,Y}`, `d^{Hom}Ω = 0`.
//! - On forms, `∂(ωα) = (−1)^p ω ∂α`, `Ω(ωε) = (−1)^p ω ∧ Ω(ε)` where the
//!   2-form `Ω(ε)` takes the value `Ω_{Y,X}ε` on `(X, Y)`, and a gauge
//!   `σ ∈ Ω¹(A; Hom(E,C))` acts with total degree 0: `σ(ωε) = ω ∧ σ(ε)`.
//!   With these rules `D² = 0` is equivalent to the flatness system.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::algebroid::{Algebroid, Connection};
use crate::error::{Error, Result};
use crate::forms::{apply_hom_form, cartan, increasing_tuples, Form, FormSpace, HomForm};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::ring::{module_hom_space, RModule};
use crate::scalar::Scalar;

/// The 4-tuple of a decomposed VB-algebroid over `A` with side `E`, core `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperData {
    algebroid: Arc<Algebroid>,
    side: RModule,
    core: RModule,
    core_anchor: Matrix,
    nabla_c: Connection,
    nabla_s: Connection,
    omega: HomForm,
}

impl SuperData {
    /// Validates shapes, R-linearity and connection axioms. Flatness is not
    /// required.
    pub fn new(
        algebroid: Arc<Algebroid>,
        side: RModule,
        core: RModule,
        core_anchor: Matrix,
        nabla_c: Vec<Matrix>,
        nabla_s: Vec<Matrix>,
        omega: HomForm,
    ) -> Result<Self> {
        let (e, c, a) = (side.dim(), core.dim(), algebroid.dim());
        if core_anchor.shape() != (e, c) {
            return Err(Error::Shape(format!("core-anchor must be {e}x{c}")));
        }
        if omega.degree() != 2 || omega.dim_a() != a || omega.shape() != (c, e) {
            return Err(Error::Shape(format!("Ω must be a 2-form with {c}x{e} values on a {a}-dimensional algebroid")));
        }
        if !core.is_linear_map_to(&side, &core_anchor) {
            return Err(Error::Precondition("core-anchor is not R-linear".into()));
        }
        let nabla_c = Connection::new(Arc::clone(&algebroid), core.clone(), nabla_c)?;
        let nabla_s = Connection::new(Arc::clone(&algebroid), side.clone(), nabla_s)?;
        for (name, conn) in [("core", &nabla_c), ("side", &nabla_s)] {
            let rep = conn.check();
            if !rep.is_ok() {
                return Err(Error::Precondition(format!(
                    "{name} connection: {}",
                    rep.violations.iter().map(|v| v.detail.as_str()).collect::<Vec<_>>().join("; ")
                )));
            }
        }
        if !algebroid.ring().is_point() {
            let hom = module_hom_space(&side, &core)?;
            let as_form = omega
                .to_form(&hom)
                .ok_or_else(|| Error::Precondition("Ω takes a value that is not R-linear".into()))?;
            if !FormSpace::new(&algebroid, &hom.module, 2).contains(&as_form) {
                return Err(Error::Precondition("Ω is not R-bilinear".into()));
            }
        }
        Ok(SuperData { algebroid, side, core, core_anchor, nabla_c, nabla_s, omega })
    }

    /// All maps zero.
    pub fn zero(algebroid: Arc<Algebroid>, side: RModule, core: RModule) -> Self {
        let (e, c, a) = (side.dim(), core.dim(), algebroid.dim());
        SuperData {
            nabla_c: Connection::zero(Arc::clone(&algebroid), core.clone()),
            nabla_s: Connection::zero(Arc::clone(&algebroid), side.clone()),
            omega: HomForm::zero(2, a, c, e),
            core_anchor: Matrix::zeros(e, c),
            algebroid,
            side,
            core,
        }
    }

    pub fn algebroid(&self) -> &Arc<Algebroid> {
        &self.algebroid
    }

    pub fn side(&self) -> &RModule {
        &self.side
    }

    pub fn core(&self) -> &RModule {
        &self.core
    }

    pub fn core_anchor(&self) -> &Matrix {
        &self.core_anchor
    }

    pub fn nabla_c(&self) -> &Connection {
        &self.nabla_c
    }

    pub fn nabla_s(&self) -> &Connection {
        &self.nabla_s
    }

    pub fn omega(&self) -> &HomForm {
        &self.omega
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.algebroid.dim(), self.side.dim(), self.core.dim())
    }

    pub fn with_core_anchor(&self, m: Matrix) -> Result<Self> {
        Self::new(
            Arc::clone(&self.algebroid),
            self.side.clone(),
            self.core.clone(),
            m,
            self.nabla_c.nabla().to_vec(),
            self.nabla_s.nabla().to_vec(),
            self.omega.clone(),
        )
    }

    pub fn with_nabla_c(&self, n: Vec<Matrix>) -> Result<Self> {
        Self::new(
            Arc::clone(&self.algebroid),
            self.side.clone(),
            self.core.clone(),
            self.core_anchor.clone(),
            n,
            self.nabla_s.nabla().to_vec(),
            self.omega.clone(),
        )
    }

    pub fn with_nabla_s(&self, n: Vec<Matrix>) -> Result<Self> {
        Self::new(
            Arc::clone(&self.algebroid),
            self.side.clone(),
            self.core.clone(),
            self.core_anchor.clone(),
            self.nabla_c.nabla().to_vec(),
            n,
            self.omega.clone(),
        )
    }

    pub fn with_omega(&self, omega: HomForm) -> Result<Self> {
        Self::new(
            Arc::clone(&self.algebroid),
            self.side.clone(),
            self.core.clone(),
            self.core_anchor.clone(),
            self.nabla_c.nabla().to_vec(),
            self.nabla_s.nabla().to_vec(),
            omega,
        )
    }

    /// `Ω_{X,Y}` for arbitrary ℚ-vectors.
    pub fn omega_at(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let a = self.algebroid.dim();
        let (c, e) = self.omega.shape();
        let mut m = Matrix::zeros(c, e);
        for i in 0..a {
            for j in 0..a {
                let s = &x[i] * &y[j];
                if !s.is_zero() && i != j {
                    m.add_assign_scaled(&self.omega.eval(&[i, j]), &s);
                }
            }
        }
        m
    }

    /// The 2-form by which `Ω` acts on side forms (values `Ω_{Y,X}` on `(X,Y)`).
    pub fn omega_operator_form(&self) -> HomForm {
        self.omega.neg()
    }

    // ---- the superconnection as an operator ----

    pub fn zero_element(&self) -> GradedElement {
        let (a, e, c) = self.dims();
        GradedElement::zero(a, c, e)
    }

    fn check_element(&self, v: &GradedElement) -> Result<()> {
        let (a, e, c) = self.dims();
        if v.core.len() != a + 1 || v.side.len() != a + 1 {
            return Err(Error::Shape("graded element has the wrong number of degrees".into()));
        }
        let ok = v.core.iter().enumerate().all(|(p, f)| f.degree() == p && f.width() == c && f.dim_a() == a)
            && v.side.iter().enumerate().all(|(p, f)| f.degree() == p && f.width() == e && f.dim_a() == a);
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("graded element does not belong to this data".into()))
        }
    }

    /// `∂` on core forms: `(−1)^p ∂ξ`.
    pub fn apply_partial(&self, v: &GradedElement) -> GradedElement {
        let mut out = self.zero_element();
        for (p, f) in v.core.iter().enumerate() {
            let g = f.map_values(&self.core_anchor);
            out.side[p] = if p % 2 == 0 { g } else { g.neg() };
        }
        out
    }

    pub fn apply_dc(&self, v: &GradedElement) -> GradedElement {
        let mut out = self.zero_element();
        let a = self.algebroid.dim();
        for p in 0..a {
            out.core[p + 1] = cartan(&self.nabla_c, &v.core[p]);
        }
        out
    }

    pub fn apply_ds(&self, v: &GradedElement) -> GradedElement {
        let mut out = self.zero_element();
        let a = self.algebroid.dim();
        for p in 0..a {
            out.side[p + 1] = cartan(&self.nabla_s, &v.side[p]);
        }
        out
    }

    pub fn apply_omega(&self, v: &GradedElement) -> GradedElement {
        let mut out = self.zero_element();
        let a = self.algebroid.dim();
        let op = self.omega_operator_form();
        for p in 0..=a.saturating_sub(2) {
            if p + 2 <= a {
                out.core[p + 2] = apply_hom_form(&op, &v.side[p], true);
            }
        }
        out
    }

    /// `D v = ∂v + Dᶜv + Dˢv + Ωv`.
    pub fn apply_d(&self, v: &GradedElement) -> Result<GradedElement> {
        self.check_element(v)?;
        Ok(self.apply_d_unchecked(v))
    }

    pub(crate) fn apply_d_unchecked(&self, v: &GradedElement) -> GradedElement {
        self.apply_partial(v).add(&self.apply_dc(v)).add(&self.apply_ds(v)).add(&self.apply_omega(v))
    }

    /// Basis elements of every form space of `C` and `E`, as graded elements.
    pub fn spanning_set(&self) -> Vec<GradedElement> {
        let (a, _, _) = self.dims();
        let mut out = Vec::new();
        for p in 0..=a {
            for b in FormSpace::new(&self.algebroid, &self.core, p).basis() {
                let mut v = self.zero_element();
                v.core[p] = b.clone();
                out.push(v);
            }
            for b in FormSpace::new(&self.algebroid, &self.side, p).basis() {
                let mut v = self.zero_element();
                v.side[p] = b.clone();
                out.push(v);
            }
        }
        out
    }

    /// `D∘D = 0` on the spanning set.
    pub fn d_squared_vanishes(&self) -> bool {
        self.spanning_set().iter().all(|v| self.apply_d_unchecked(&self.apply_d_unchecked(v)).is_zero())
    }

    // ---- flatness ----

    /// The four flatness conditions, each checked on basis tuples.
    pub fn conditions_report(&self) -> Report {
        let mut rep = Report::new();
        let a = self.algebroid.dim();
        let d = &self.core_anchor;
        for x in 0..a {
            if d.mul(&self.nabla_c.nabla()[x]) != self.nabla_s.nabla()[x].mul(d) {
                rep.push("intertwining", vec![x], format!("condition 1: ∂∇ᶜ_e{x} != ∇ˢ_e{x}∂"));
            }
        }
        for x in 0..a {
            for y in x + 1..a {
                let om = self.omega.eval(&[x, y]);
                if self.nabla_c.curvature(x, y) != om.mul(d) {
                    rep.push("core-curvature", vec![x, y], format!("condition 2: Fᶜ(e{x},e{y}) != Ω∂"));
                }
                if self.nabla_s.curvature(x, y) != d.mul(&om) {
                    rep.push("side-curvature", vec![x, y], format!("condition 3: Fˢ(e{x},e{y}) != ∂Ω"));
                }
            }
        }
        let dom = self.hom_differential(&self.omega);
        for t in increasing_tuples(a, 3) {
            if !dom.eval(&t).is_zero() {
                rep.push("omega-closed", t.clone(), format!("condition 4: DᶜΩ + ΩDˢ != 0 on {t:?}"));
            }
        }
        rep
    }

    /// Both flatness verdicts; panics if they disagree (that would be an
    /// internal sign error).
    pub fn is_flat_super(&self) -> FlatnessReport {
        let conditions = self.conditions_report();
        let d_squared_zero = self.d_squared_vanishes();
        assert_eq!(conditions.is_ok(), d_squared_zero, "flatness conditions and D² disagree: {conditions:?}");
        FlatnessReport { conditions, d_squared_zero }
    }

    pub fn is_flat(&self) -> bool {
        self.is_flat_super().is_flat()
    }

    /// Cartan differential on `Hom(E, C)`-valued forms with
    /// `∇_X φ = ∇ᶜ_X φ − φ ∇ˢ_X`.
    pub fn hom_differential(&self, phi: &HomForm) -> HomForm {
        hom_cartan(&self.algebroid, self.nabla_c.nabla(), self.nabla_s.nabla(), phi)
    }

    // ---- gauge ----

    fn check_sigma(&self, sigma: &HomForm) -> Result<()> {
        let (a, e, c) = self.dims();
        if sigma.degree() != 1 || sigma.dim_a() != a || sigma.shape() != (c, e) {
            return Err(Error::Shape(format!("σ must be a 1-form with {c}x{e} values")));
        }
        if !self.algebroid.ring().is_point() {
            let hom = module_hom_space(&self.side, &self.core)?;
            let f = sigma.to_form(&hom).ok_or_else(|| Error::Precondition("σ is not R-linear".into()))?;
            if !FormSpace::new(&self.algebroid, &hom.module, 1).contains(&f) {
                return Err(Error::Precondition("σ is not R-linear in A".into()));
            }
        }
        Ok(())
    }

    /// `(∂, ∇ᶜ + σ∂, ∇ˢ − ∂σ, Ω − Dᶜσ + σDˢ − σ∂σ)`, evaluated on the tuple:
    /// `∇ᶜ'_X = ∇ᶜ_X + σ_X∂`, `∇ˢ'_X = ∇ˢ_X + ∂σ_X`,
    /// `Ω'_{X,Y} = Ω_{X,Y} + (d^{Hom}σ)_{X,Y} + σ_X∂σ_Y − σ_Y∂σ_X`.
    pub fn gauge_transform(&self, sigma: &HomForm) -> Result<SuperData> {
        self.check_sigma(sigma)?;
        let a = self.algebroid.dim();
        let d = &self.core_anchor;
        let nc: Vec<Matrix> = (0..a).map(|x| self.nabla_c.nabla()[x].add(&sigma.eval(&[x]).mul(d))).collect();
        let ns: Vec<Matrix> = (0..a).map(|x| self.nabla_s.nabla()[x].add(&d.mul(&sigma.eval(&[x])))).collect();
        let ds = self.hom_differential(sigma);
        let (c, e) = self.omega.shape();
        let om = HomForm::from_fn(2, a, c, e, |t| {
            let (sx, sy) = (sigma.eval(&[t[0]]), sigma.eval(&[t[1]]));
            self.omega.eval(t).add(&ds.eval(t)).add(&sx.mul(d).mul(&sy)).sub(&sy.mul(d).mul(&sx))
        });
        SuperData::new(Arc::clone(&self.algebroid), self.side.clone(), self.core.clone(), d.clone(), nc, ns, om)
    }

    /// `D + [σ,D] + ½[σ,[σ,D]]` as an operator, with the 4-tuple read back
    /// from its action on degree-0 elements; checks that the operator equals
    /// the superconnection of the extracted tuple on the spanning set and that
    /// `[σ,[σ,[σ,D]]] = 0`.
    pub fn gauge_transform_exp(&self, sigma: &HomForm) -> Result<SuperData> {
        self.check_sigma(sigma)?;
        let d = Op::D(self);
        let s = Op::Sigma(sigma);
        let c1 = Op::commutator(s.clone(), d.clone());
        let c2 = Op::commutator(s.clone(), c1.clone());
        let c3 = Op::commutator(s.clone(), c2.clone());
        let half = crate::scalar::qr(1, 2);
        let op = Op::Sum(vec![(crate::scalar::one(), d), (crate::scalar::one(), c1), (half, c2)]);
        let out = self.extract_tuple(&op)?;
        for v in self.spanning_set() {
            if op.apply(&v) != out.apply_d_unchecked(&v) {
                return Err(Error::Internal("conjugated operator is not the superconnection of its tuple".into()));
            }
            if !c3.apply(&v).is_zero() {
                return Err(Error::Internal("[σ,[σ,[σ,D]]] does not vanish".into()));
            }
        }
        Ok(out)
    }

    /// Reads `(∂, ∇ᶜ, ∇ˢ, Ω)` off an odd operator from its values on
    /// degree-0 core and side elements.
    pub fn extract_tuple(&self, op: &Op) -> Result<SuperData> {
        let (a, e, c) = self.dims();
        let mut partial = Matrix::zeros(e, c);
        let mut nc = vec![Matrix::zeros(c, c); a];
        let mut ns = vec![Matrix::zeros(e, e); a];
        let mut om = vec![Matrix::zeros(c, e); crate::forms::binomial(a, 2)];
        for j in 0..c {
            let mut v = self.zero_element();
            let mut basis = vec![Scalar::zero(); c];
            basis[j] = crate::scalar::one();
            v.core[0] = Form::from_values(0, a, c, basis).unwrap();
            let w = op.apply(&v);
            for (i, x) in w.side[0].data().iter().enumerate() {
                partial[(i, j)] = x.clone();
            }
            if a >= 1 {
                for x in 0..a {
                    for (i, val) in w.core[1].eval(&[x]).into_iter().enumerate() {
                        nc[x][(i, j)] = val;
                    }
                }
            }
        }
        for j in 0..e {
            let mut v = self.zero_element();
            let mut basis = vec![Scalar::zero(); e];
            basis[j] = crate::scalar::one();
            v.side[0] = Form::from_values(0, a, e, basis).unwrap();
            let w = op.apply(&v);
            for x in 0..a {
                for (i, val) in w.side[1].eval(&[x]).into_iter().enumerate() {
                    ns[x][(i, j)] = val;
                }
            }
            if a >= 2 {
                for (r, t) in increasing_tuples(a, 2).iter().enumerate() {
                    for (i, val) in w.core[2].eval(t).into_iter().enumerate() {
                        om[r][(i, j)] = -val;
                    }
                }
            }
        }
        let om = HomForm::from_values(2, a, c, e, om)?;
        SuperData::new(Arc::clone(&self.algebroid), self.side.clone(), self.core.clone(), partial, nc, ns, om)
    }

    // ---- fat algebroid ----

    /// Bracket of linear sections `X̂ + φ`, `Ŷ + ψ`.
    pub fn fat_bracket(&self, x: &[Scalar], phi: &Matrix, y: &[Scalar], psi: &Matrix) -> (Vec<Scalar>, Matrix) {
        let z = self.algebroid.bracket(x, y);
        let d = &self.core_anchor;
        let (ncx, nsx) = (self.nabla_c.along(x), self.nabla_s.along(x));
        let (ncy, nsy) = (self.nabla_c.along(y), self.nabla_s.along(y));
        let chi = self
            .omega_at(x, y)
            .add(&ncx.mul(psi))
            .sub(&psi.mul(&nsx))
            .sub(&ncy.mul(phi))
            .add(&phi.mul(&nsy))
            .add(&phi.mul(d).mul(psi))
            .sub(&psi.mul(d).mul(phi));
        (z, chi)
    }

    /// `(ψᶜ, ψˢ) = (∇ᶜ_X + φ∂, ∇ˢ_X + ∂φ)`.
    pub fn fat_representations(&self, x: &[Scalar], phi: &Matrix) -> (Matrix, Matrix) {
        let d = &self.core_anchor;
        (self.nabla_c.along(x).add(&phi.mul(d)), self.nabla_s.along(x).add(&d.mul(phi)))
    }

    /// Jacobi identity of the fat bracket on basis triples of `A ⊕ Hom(E,C)`.
    pub fn fat_jacobi_holds(&self) -> Result<bool> {
        let (a, _, _) = self.dims();
        let hom = module_hom_space(&self.side, &self.core)?;
        let (c, e) = self.omega.shape();
        let mut gens: Vec<(Vec<Scalar>, Matrix)> =
            (0..a).map(|i| (self.algebroid.basis_vector(i), Matrix::zeros(c, e))).collect();
        gens.extend(hom.maps.iter().map(|m| (vec![Scalar::zero(); a], m.clone())));
        let br = |u: &(Vec<Scalar>, Matrix), v: &(Vec<Scalar>, Matrix)| self.fat_bracket(&u.0, &u.1, &v.0, &v.1);
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                for k in 0..gens.len() {
                    let t1 = br(&gens[i], &br(&gens[j], &gens[k]));
                    let t2 = br(&gens[j], &br(&gens[k], &gens[i]));
                    let t3 = br(&gens[k], &br(&gens[i], &gens[j]));
                    let zx = t1.0.iter().zip(&t2.0).zip(&t3.0).all(|((p, q), r)| (p + q + r).is_zero());
                    if !zx || !t1.1.add(&t2.1).add(&t3.1).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Maximum absolute entry of `Ω_{[X,Y],Z} + [Ω_{X,Y}, Ẑ] + cycl.` over
    /// basis triples, with `[φ, Ẑ] = φ∇ˢ_Z − ∇ᶜ_Zφ`.
    pub fn jacobi_omega(&self) -> Scalar {
        let a = self.algebroid.dim();
        let mut worst = Scalar::zero();
        for x in 0..a {
            for y in 0..a {
                for z in 0..a {
                    let mut acc = Matrix::zeros(self.core.dim(), self.side.dim());
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        let br = self.algebroid.bracket_basis(p, q);
                        let ez = self.algebroid.basis_vector(r);
                        acc = acc.add(&self.omega_at(&br, &ez));
                        let om = self.omega_at(&self.algebroid.basis_vector(p), &self.algebroid.basis_vector(q));
                        acc = acc.add(&om.mul(&self.nabla_s.nabla()[r])).sub(&self.nabla_c.nabla()[r].mul(&om));
                    }
                    let m = acc.max_abs();
                    if m > worst {
                        worst = m;
                    }
                }
            }
        }
        worst.abs()
    }

    // ---- duals, sums, changes of basis ----

    /// Dual data: side `C*`, core `E*`, `∂' = ∂*`, dual connections, `Ω' = −Ω*`.
    pub fn dualize(&self) -> Result<SuperData> {
        if !self.is_flat() {
            return Err(Error::NotFlat("dualize needs flat data".into()));
        }
        let (c_dual, nabla_s2) = self.nabla_c.dual()?;
        let (e_dual, nabla_c2) = self.nabla_s.dual()?;
        let d = &self.core_anchor;
        // ∂': E* → C*, ξ ↦ ξ∘∂.
        let cols: Vec<Vec<Scalar>> =
            e_dual.maps.iter().map(|xi| c_dual.coordinates(&xi.mul(d)).expect("ξ∘∂ is R-linear")).collect();
        let partial = Matrix::from_columns(c_dual.dim(), &cols);
        let a = self.algebroid.dim();
        let om = HomForm::from_fn(2, a, e_dual.dim(), c_dual.dim(), |t| {
            let w = self.omega.eval(t);
            let cols: Vec<Vec<Scalar>> =
                c_dual.maps.iter().map(|xi| e_dual.coordinates(&xi.mul(&w).neg()).expect("−ξ∘Ω is R-linear")).collect();
            Matrix::from_columns(e_dual.dim(), &cols)
        });
        SuperData::new(
            Arc::clone(&self.algebroid),
            c_dual.module.clone(),
            e_dual.module.clone(),
            partial,
            nabla_c2.nabla().to_vec(),
            nabla_s2.nabla().to_vec(),
            om,
        )
    }

    /// Componentwise direct sum (side `E₁ ⊕ E₂`, core `C₁ ⊕ C₂`).
    pub fn direct_sum(&self, other: &SuperData) -> Result<SuperData> {
        if self.algebroid != other.algebroid {
            return Err(Error::AlgebroidMismatch);
        }
        let a = self.algebroid.dim();
        let om = HomForm::from_fn(2, a, self.core.dim() + other.core.dim(), self.side.dim() + other.side.dim(), |t| {
            self.omega.eval(t).direct_sum(&other.omega.eval(t))
        });
        SuperData::new(
            Arc::clone(&self.algebroid),
            self.side.direct_sum(&other.side)?,
            self.core.direct_sum(&other.core)?,
            self.core_anchor.direct_sum(&other.core_anchor),
            self.nabla_c.direct_sum(&other.nabla_c)?.nabla().to_vec(),
            self.nabla_s.direct_sum(&other.nabla_s)?.nabla().to_vec(),
            om,
        )
    }

    /// The same data in new bases: `p_e: E → E'`, `p_c: C → C'` invertible
    /// and R-linear (module actions are conjugated along).
    pub fn change_basis(&self, p_e: &Matrix, p_c: &Matrix) -> Result<SuperData> {
        let pe_inv = p_e.inverse().ok_or_else(|| Error::Precondition("singular side change of basis".into()))?;
        let pc_inv = p_c.inverse().ok_or_else(|| Error::Precondition("singular core change of basis".into()))?;
        let ring = Arc::clone(self.algebroid.ring());
        let side = RModule::new(
            Arc::clone(&ring),
            self.side.dim(),
            self.side.action().iter().map(|m| p_e.mul(m).mul(&pe_inv)).collect(),
        )?;
        let core =
            RModule::new(ring, self.core.dim(), self.core.action().iter().map(|m| p_c.mul(m).mul(&pc_inv)).collect())?;
        let om = self.omega.map(|m| p_c.mul(m).mul(&pe_inv));
        SuperData::new(
            Arc::clone(&self.algebroid),
            side,
            core,
            p_e.mul(&self.core_anchor).mul(&pc_inv),
            self.nabla_c.nabla().iter().map(|m| p_c.mul(m).mul(&pc_inv)).collect(),
            self.nabla_s.nabla().iter().map(|m| p_e.mul(m).mul(&pe_inv)).collect(),
            om,
        )
    }

    /// Dual-differential report (point case): see [`crate::superalg::dual_differential_check`].
    pub fn is_point(&self) -> bool {
        self.algebroid.ring().is_point()
    }
}

/// Flatness verdicts: the four conditions and `D² = 0` on a spanning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessReport {
    pub conditions: Report,
    pub d_squared_zero: bool,
}

impl FlatnessReport {
    pub fn is_flat(&self) -> bool {
        self.conditions.is_ok() && self.d_squared_zero
    }

    /// Numbers (1–4) of the failed conditions.
    pub fn failed_conditions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (n, name) in [(1, "intertwining"), (2, "core-curvature"), (3, "side-curvature"), (4, "omega-closed")] {
            if self.conditions.has(name) {
                out.push(n);
            }
        }
        out
    }
}

/// Cartan formula for map-valued forms with `∇_X φ = ∇ᵗ_X φ − φ ∇ˢ_X`.
pub fn hom_cartan(alg: &Algebroid, nabla_target: &[Matrix], nabla_source: &[Matrix], phi: &HomForm) -> HomForm {
    let a = alg.dim();
    let p = phi.degree();
    let (rows, cols) = phi.shape();
    if p + 1 > a {
        return HomForm::zero(p + 1, a, rows, cols);
    }
    HomForm::from_fn(p + 1, a, rows, cols, |t| {
        let mut acc = Matrix::zeros(rows, cols);
        for i in 0..=p {
            let rest: Vec<usize> = t.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            let v = phi.eval(&rest);
            let term = nabla_target[t[i]].mul(&v).sub(&v.mul(&nabla_source[t[i]]));
            let s = crate::scalar::sign(i);
            acc.add_assign_scaled(&term, &s);
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let rest: Vec<usize> =
                    t.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
                let mut args = vec![0];
                args.extend(&rest);
                for k in 0..a {
                    let c = alg.c(t[i], t[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    args[0] = k;
                    let s = c * crate::scalar::sign(i + j);
                    acc.add_assign_scaled(&phi.eval(&args), &s);
                }
            }
        }
        acc
    })
}

/// An element of `Ω(A) ⊗ Γ(C[1] ⊕ E)`: core and side forms by form degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    pub core: Vec<Form>,
    pub side: Vec<Form>,
}

impl GradedElement {
    pub fn zero(a: usize, c: usize, e: usize) -> Self {
        GradedElement {
            core: (0..=a).map(|p| Form::zero(p, a, c)).collect(),
            side: (0..=a).map(|p| Form::zero(p, a, e)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.core.iter().chain(&self.side).all(Form::is_zero)
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        GradedElement {
            core: self.core.iter().zip(&other.core).map(|(a, b)| a.add(b)).collect(),
            side: self.side.iter().zip(&other.side).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> GradedElement {
        GradedElement {
            core: self.core.iter().map(|a| a.scale(s)).collect(),
            side: self.side.iter().map(|a| a.scale(s)).collect(),
        }
    }
}

/// `σ` acting on side forms with total degree 0 (no sign).
pub fn apply_sigma(sigma: &HomForm, v: &GradedElement) -> GradedElement {
    let a = sigma.dim_a();
    let (c, e) = sigma.shape();
    let mut out = GradedElement::zero(a, c, e);
    for p in 0..a {
        out.core[p + 1] = apply_hom_form(sigma, &v.side[p], false);
    }
    out
}

/// Operator expressions built from `D` and `σ`.
#[derive(Clone)]
pub enum Op<'a> {
    Identity,
    D(&'a SuperData),
    Sigma(&'a HomForm),
    Sum(Vec<(Scalar, Op<'a>)>),
    /// `Compose(f, g)` applies `g` first.
    Compose(Box<Op<'a>>, Box<Op<'a>>),
}

impl<'a> Op<'a> {
    /// `[x, y] = xy − yx` (σ has total degree 0, so no Koszul sign arises).
    pub fn commutator(x: Op<'a>, y: Op<'a>) -> Op<'a> {
        Op::Sum(vec![
            (crate::scalar::one(), Op::Compose(Box::new(x.clone()), Box::new(y.clone()))),
            (-crate::scalar::one(), Op::Compose(Box::new(y), Box::new(x))),
        ])
    }

    pub fn compose(f: Op<'a>, g: Op<'a>) -> Op<'a> {
        Op::Compose(Box::new(f), Box::new(g))
    }

    pub fn apply(&self, v: &GradedElement) -> GradedElement {
        match self {
            Op::Identity => v.clone(),
            Op::D(d) => d.apply_d_unchecked(v),
            Op::Sigma(s) => apply_sigma(s, v),
            Op::Sum(terms) => {
                let mut acc: Option<GradedElement> = None;
                for (c, t) in terms {
                    let x = t.apply(v).scale(c);
                    acc = Some(match acc {
                        None => x,
                        Some(a) => a.add(&x),
                    });
                }
                acc.unwrap_or_else(|| v.scale(&Scalar::zero()))
            }
            Op::Compose(f, g) => f.apply(&g.apply(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn aff1() -> Arc<Algebroid> {
        Arc::new(crate::models::aff1())
    }

    fn line(alg: &Arc<Algebroid>) -> RModule {
        RModule::free(Arc::clone(alg.ring()), 1)
    }

    #[test]
    fn aff1_identity_anchor_squares_to_zero() {
        let alg = aff1();
        let m = |x: i64| Matrix::from_i64(&[&[x]]);
        let d = SuperData::new(
            Arc::clone(&alg),
            line(&alg),
            line(&alg),
            m(1),
            vec![m(1), m(0)],
            vec![m(1), m(0)],
            HomForm::zero(2, 2, 1, 1),
        )
        .unwrap();
        assert!(d.conditions_report().is_ok());
        for v in d.spanning_set() {
            assert!(d.apply_d(&d.apply_d(&v).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn type1_apply_d_on_core() {
        let alg = aff1();
        let m = |x: i64| Matrix::from_i64(&[&[x]]);
        let nab = vec![m(0), m(1)];
        // F(e1,e2) = −∇_{e2} = −1, so Ω = 1.
        let om = HomForm::from_values(2, 2, 1, 1, vec![m(1)]).unwrap();
        let d = SuperData::new(Arc::clone(&alg), line(&alg), line(&alg), m(-1), nab.clone(), nab, om).unwrap();
        assert!(d.is_flat());
        let mut v = d.zero_element();
        v.core[0] = Form::from_values(0, 2, 1, vec![q(1)]).unwrap();
        let w = d.apply_d(&v).unwrap();
        assert_eq!(w.side[0].data(), &[q(-1)]);
        assert_eq!(w.core[1].data(), &[q(0), q(1)]);
    }

    #[test]
    fn zero_data_is_flat_and_sigma_zero_is_identity() {
        let alg = aff1();
        let d = SuperData::zero(Arc::clone(&alg), line(&alg), line(&alg));
        assert!(d.is_flat());
        let s = HomForm::zero(1, 2, 1, 1);
        assert_eq!(d.gauge_transform(&s).unwrap(), d);
        assert_eq!(d.gauge_transform_exp(&s).unwrap(), d);
    }
}

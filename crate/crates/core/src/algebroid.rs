//! Lie–Rinehart algebroids over a base ring and their connections.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::ring::{module_hom_space, BaseRing, HomModule, RModule};
use crate::scalar::Scalar;

/// Module `A` with bracket structure constants
/// `[e_i, e_j] = Σ_k bracket[(i·a + j)·a + k] e_k` (in the ℚ-basis of `A`)
/// and anchor matrices `anchor[i]` acting on the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebroid {
    ring: Arc<BaseRing>,
    module: RModule,
    bracket: Vec<Scalar>,
    anchor: Vec<Matrix>,
}

impl Algebroid {
    pub fn new(module: RModule, bracket: Vec<Scalar>, anchor: Vec<Matrix>) -> Result<Self> {
        let a = module.dim();
        let r = module.ring().dim();
        if bracket.len() != a * a * a {
            return Err(Error::Shape(format!("bracket of an algebroid of dim {a} needs {} constants", a * a * a)));
        }
        if anchor.len() != a || anchor.iter().any(|m| m.shape() != (r, r)) {
            return Err(Error::Shape(format!("anchor needs {a} matrices of size {r}x{r}")));
        }
        Ok(Algebroid { ring: Arc::clone(module.ring()), module, bracket, anchor })
    }

    /// Lie algebra over the rationals with zero anchor.
    pub fn lie_algebra(dim: usize, bracket: Vec<Scalar>) -> Result<Self> {
        let ring = Arc::new(BaseRing::rationals());
        let module = RModule::free(Arc::clone(&ring), dim);
        let anchor = vec![Matrix::zeros(1, 1); dim];
        Self::new(module, bracket, anchor)
    }

    pub fn ring(&self) -> &Arc<BaseRing> {
        &self.ring
    }

    pub fn module(&self) -> &RModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn anchor(&self) -> &[Matrix] {
        &self.anchor
    }

    pub fn bracket_tensor(&self) -> &[Scalar] {
        &self.bracket
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let a = self.dim();
        &self.bracket[(i * a + j) * a + k]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let a = self.dim();
        self.bracket[(i * a + j) * a..(i * a + j + 1) * a].to_vec()
    }

    /// Bracket of arbitrary ℚ-vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let a = self.dim();
        let mut out = vec![Scalar::zero(); a];
        for i in 0..a {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..a {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    /// Anchor of an arbitrary element, as a matrix on the ring.
    pub fn anchor_of(&self, x: &[Scalar]) -> Matrix {
        let r = self.ring.dim();
        let mut m = Matrix::zeros(r, r);
        for (c, a) in x.iter().zip(&self.anchor) {
            m.add_assign_scaled(a, c);
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = crate::scalar::one();
        v
    }

    /// Lists violated axioms: module axioms, anchor derivations and
    /// R-linearity, antisymmetry, Leibniz, Jacobi, anchor morphism.
    pub fn check(&self) -> Report {
        let mut rep = self.module.check();
        let a = self.dim();
        let ring = &self.ring;
        let r = ring.dim();
        for (x, m) in self.anchor.iter().enumerate() {
            if !ring.is_derivation(m) {
                rep.push("anchor-derivation", vec![x], format!("anchor of e{x} is not a derivation"));
            }
        }
        for i in 0..a {
            for j in i..a {
                let s: Vec<Scalar> =
                    self.bracket_basis(i, j).iter().zip(self.bracket_basis(j, i)).map(|(u, v)| u + v).collect();
                if s.iter().any(|x| !x.is_zero()) {
                    rep.push("antisymmetry", vec![i, j], format!("[e{i},e{j}] + [e{j},e{i}] != 0"));
                }
            }
        }
        for m in 0..r {
            let act = &self.module.action()[m];
            let lf = ring.mult_matrix(&ring.basis_vector(m));
            for x in 0..a {
                if self.anchor_of(&act.column(x)) != lf.mul(&self.anchor[x]) {
                    rep.push("anchor-linearity", vec![m, x], format!("anchor(b{m} e{x}) != b{m} anchor(e{x})"));
                }
            }
        }
        for x in 0..a {
            for m in 0..r {
                let act = &self.module.action()[m];
                let f_anchor = self.anchor[x].column(m);
                let rho_f = self.module.act(&f_anchor);
                for y in 0..a {
                    let lhs = self.bracket(&self.basis_vector(x), &act.column(y));
                    let mut rhs = act.mul_vec(&self.bracket_basis(x, y));
                    for (o, v) in rhs.iter_mut().zip(rho_f.column(y)) {
                        *o += v;
                    }
                    if lhs != rhs {
                        rep.push("leibniz", vec![x, m, y], format!("[e{x}, b{m} e{y}] violates Leibniz"));
                    }
                }
            }
        }
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    let (ei, ej, ek) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej));
                    if t1.iter().zip(&t2).zip(&t3).any(|((u, v), w)| !(u + v + w).is_zero()) {
                        rep.push("jacobi", vec![i, j, k], format!("Jacobi fails on (e{i},e{j},e{k})"));
                    }
                }
            }
        }
        for i in 0..a {
            for j in 0..a {
                let lhs = self.anchor_of(&self.bracket_basis(i, j));
                let rhs = self.anchor[i].commutator(&self.anchor[j]);
                if lhs != rhs {
                    rep.push("anchor-morphism", vec![i, j], format!("anchor[e{i},e{j}] != [anchor e{i}, anchor e{j}]"));
                }
            }
        }
        rep
    }

    /// Direct sum of two Lie algebras over the rationals.
    pub fn lie_direct_sum(&self, other: &Algebroid) -> Result<Algebroid> {
        if !self.ring.is_point() || !other.ring.is_point() {
            return Err(Error::UnsupportedRing("direct sums are built for Lie algebras only".into()));
        }
        let (a, b) = (self.dim(), other.dim());
        let n = a + b;
        let mut br = vec![Scalar::zero(); n * n * n];
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    br[(i * n + j) * n + k] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    br[((a + i) * n + a + j) * n + a + k] = other.c(i, j, k).clone();
                }
            }
        }
        Algebroid::lie_algebra(n, br)
    }

    /// The ring as coefficient module, with `∇_X f = ρ(X) f`.
    pub fn trivial_connection(self: &Arc<Self>) -> Connection {
        let coeff = RModule::ring_module(Arc::clone(&self.ring));
        Connection { algebroid: Arc::clone(self), coeff, nabla: self.anchor.clone() }
    }

    /// `∇_X Y = [X, Y]` on `A` itself (a connection when the anchor vanishes).
    pub fn adjoint_connection(self: &Arc<Self>) -> Connection {
        let a = self.dim();
        let nabla = (0..a)
            .map(|x| {
                let cols: Vec<Vec<Scalar>> = (0..a).map(|y| self.bracket_basis(x, y)).collect();
                Matrix::from_columns(a, &cols)
            })
            .collect();
        Connection { algebroid: Arc::clone(self), coeff: self.module.clone(), nabla }
    }
}

/// An A-connection on a module `W`: `nabla[X]` is the ℚ-linear map `∇_{e_X}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    algebroid: Arc<Algebroid>,
    coeff: RModule,
    nabla: Vec<Matrix>,
}

impl Connection {
    pub fn new(algebroid: Arc<Algebroid>, coeff: RModule, nabla: Vec<Matrix>) -> Result<Self> {
        let w = coeff.dim();
        if coeff.ring() != algebroid.ring() {
            return Err(Error::RingMismatch);
        }
        if nabla.len() != algebroid.dim() || nabla.iter().any(|m| m.shape() != (w, w)) {
            return Err(Error::Shape(format!("connection needs {} matrices of size {w}x{w}", algebroid.dim())));
        }
        Ok(Connection { algebroid, coeff, nabla })
    }

    pub fn zero(algebroid: Arc<Algebroid>, coeff: RModule) -> Self {
        let w = coeff.dim();
        let nabla = vec![Matrix::zeros(w, w); algebroid.dim()];
        Connection { algebroid, coeff, nabla }
    }

    pub fn algebroid(&self) -> &Arc<Algebroid> {
        &self.algebroid
    }

    pub fn coeff(&self) -> &RModule {
        &self.coeff
    }

    pub fn nabla(&self) -> &[Matrix] {
        &self.nabla
    }

    /// `∇_X` for an arbitrary ℚ-vector `X`.
    pub fn along(&self, x: &[Scalar]) -> Matrix {
        let w = self.coeff.dim();
        let mut m = Matrix::zeros(w, w);
        for (c, n) in x.iter().zip(&self.nabla) {
            m.add_assign_scaled(n, c);
        }
        m
    }

    /// Connection axioms on basis tuples.
    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        let alg = &self.algebroid;
        let ring = alg.ring();
        for m in 0..ring.dim() {
            let act_a = &alg.module().action()[m];
            let act_w = &self.coeff.action()[m];
            for x in 0..alg.dim() {
                if self.along(&act_a.column(x)) != act_w.mul(&self.nabla[x]) {
                    rep.push("connection-linearity", vec![m, x], format!("∇ at b{m} e{x} is not R-linear"));
                }
                let rho_f = self.coeff.act(&alg.anchor()[x].column(m));
                let lhs = self.nabla[x].mul(act_w);
                let rhs = act_w.mul(&self.nabla[x]).add(&rho_f);
                if lhs != rhs {
                    rep.push("connection-leibniz", vec![x, m], format!("∇_e{x}(b{m} w) violates Leibniz"));
                }
            }
        }
        rep
    }

    /// `F_{X,Y} = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}` on basis elements.
    pub fn curvature(&self, x: usize, y: usize) -> Matrix {
        self.nabla[x].commutator(&self.nabla[y]).sub(&self.along(&self.algebroid.bracket_basis(x, y)))
    }

    /// Zero curvature on all basis pairs.
    pub fn curvature_vanishes(&self) -> bool {
        let a = self.algebroid.dim();
        (0..a).all(|x| (x + 1..a).all(|y| self.curvature(x, y).is_zero()))
    }

    /// Connection on `Hom(V, W)`: `∇_X φ = ∇^W_X φ − φ ∇^V_X`.
    pub fn hom(source: &Connection, target: &Connection) -> Result<(HomModule, Connection)> {
        if source.algebroid != target.algebroid {
            return Err(Error::AlgebroidMismatch);
        }
        let hom = module_hom_space(&source.coeff, &target.coeff)?;
        let nabla = (0..source.algebroid.dim())
            .map(|x| hom.operator_matrix(|phi| target.nabla[x].mul(phi).sub(&phi.mul(&source.nabla[x]))))
            .collect();
        let conn = Connection { algebroid: Arc::clone(&source.algebroid), coeff: hom.module.clone(), nabla };
        Ok((hom, conn))
    }

    /// Dual connection on `Hom_R(W, R)`: `(∇_X ξ)(w) = ρ(X)(ξ(w)) − ξ(∇_X w)`.
    pub fn dual(&self) -> Result<(HomModule, Connection)> {
        let triv = Arc::clone(&self.algebroid).trivial_connection();
        Connection::hom(self, &triv)
    }

    /// Componentwise direct sum of two connections.
    pub fn direct_sum(&self, other: &Connection) -> Result<Connection> {
        if self.algebroid != other.algebroid {
            return Err(Error::AlgebroidMismatch);
        }
        let coeff = self.coeff.direct_sum(&other.coeff)?;
        let nabla = self.nabla.iter().zip(&other.nabla).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(Connection { algebroid: Arc::clone(&self.algebroid), coeff, nabla })
    }

    /// Same connection transported along a module isomorphism `p: W → W'`
    /// (`∇'_X = p ∇_X p⁻¹`).
    pub fn conjugate(&self, coeff: RModule, p: &Matrix, p_inv: &Matrix) -> Connection {
        let nabla = self.nabla.iter().map(|n| p.mul(n).mul(p_inv)).collect();
        Connection { algebroid: Arc::clone(&self.algebroid), coeff, nabla }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn aff1() -> Algebroid {
        crate::models::aff1()
    }

    #[test]
    fn algebroid_checks() {
        let ab = Algebroid::lie_algebra(2, vec![Scalar::zero(); 8]).unwrap();
        assert!(ab.check().is_ok());
        assert!(aff1().check().is_ok());
        let mut br = aff1().bracket_tensor().to_vec();
        // [e₂, e₁] = +e₂.
        br[5] = q(1);
        let bad = Algebroid::lie_algebra(2, br).unwrap();
        let rep = bad.check();
        assert_eq!(rep.first("antisymmetry").unwrap().witness, vec![0, 1]);
    }

    #[test]
    fn adjoint_is_flat() {
        let a = Arc::new(aff1());
        let ad = a.adjoint_connection();
        assert!(ad.check().is_ok());
        assert!(ad.curvature_vanishes());
    }

    #[test]
    fn abelian_rank_one_connection_is_flat() {
        let a = Arc::new(Algebroid::lie_algebra(2, vec![Scalar::zero(); 8]).unwrap());
        let w = RModule::free(Arc::clone(a.ring()), 1);
        let c = Connection::new(a, w, vec![Matrix::from_i64(&[&[0]]), Matrix::from_i64(&[&[1]])]).unwrap();
        assert!(c.curvature_vanishes());
    }
}

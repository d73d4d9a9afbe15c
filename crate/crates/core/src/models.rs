//! Named examples and seeded random flat instances.
//!
//! Random instances use `ChaCha8Rng::seed_from_u64(seed)`, so a seed gives
//! the same instance on every platform.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{Algebroid, Connection};
use crate::classify::{build_type0, build_type1};
use crate::error::{Error, Result};
use crate::forms::{CeComplex, HomForm};
use crate::linalg::Matrix;
use crate::ring::{BaseRing, RModule};
use crate::scalar::{q, Scalar};
use crate::superconn::SuperData;

/// A model name with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelSpec {
    pub name: String,
    pub parameters: BTreeMap<String, Scalar>,
}

impl ModelSpec {
    pub fn new(name: &str) -> Self {
        ModelSpec { name: name.to_string(), parameters: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: Scalar) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    fn param(&self, key: &str, default: Scalar) -> Scalar {
        self.parameters.get(key).cloned().unwrap_or(default)
    }

    fn check_params(&self, allowed: &[&str]) -> Result<()> {
        match self.parameters.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Precondition(format!("model {} takes no parameter {k:?}", self.name))),
            None => Ok(()),
        }
    }
}

fn structure(dim: usize, entries: &[(usize, usize, usize, i64)]) -> Vec<Scalar> {
    let mut br = vec![Scalar::zero(); dim * dim * dim];
    for &(i, j, k, v) in entries {
        br[(i * dim + j) * dim + k] = q(v);
        br[(j * dim + i) * dim + k] = q(-v);
    }
    br
}

pub fn abelian(n: usize) -> Algebroid {
    Algebroid::lie_algebra(n, vec![Scalar::zero(); n * n * n]).expect("valid shape")
}

/// `[e₁, e₂] = e₂`.
pub fn aff1() -> Algebroid {
    Algebroid::lie_algebra(2, structure(2, &[(0, 1, 1, 1)])).expect("valid shape")
}

/// Basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
pub fn sl2() -> Algebroid {
    Algebroid::lie_algebra(3, structure(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])).expect("valid shape")
}

/// `[e₁, e₂] = e₃`.
pub fn heisenberg() -> Algebroid {
    Algebroid::lie_algebra(3, structure(3, &[(0, 1, 2, 1)])).expect("valid shape")
}

/// Lie algebras by name: `abelian` (parameter `n`), `aff1`, `sl2`,
/// `heisenberg`.
pub fn lie_algebra(spec: &ModelSpec) -> Result<Algebroid> {
    match spec.name.as_str() {
        "abelian" => {
            spec.check_params(&["n"])?;
            let n = spec.param("n", q(2));
            if !n.is_integer() || n < q(0) || n > q(12) {
                return Err(Error::Precondition("abelian(n) needs an integer 0 ≤ n ≤ 12".into()));
            }
            Ok(abelian(n.to_integer().try_into().expect("small")))
        }
        "aff1" => spec.check_params(&[]).map(|_| aff1()),
        "sl2" => spec.check_params(&[]).map(|_| sl2()),
        "heisenberg" => spec.check_params(&[]).map(|_| heisenberg()),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// `E = 0`, `C = A`, `∂ = 0`, `∇ᶜ = ad`, `Ω = 0`.
pub fn adjoint_point_model(alg: &Arc<Algebroid>) -> Result<SuperData> {
    if !alg.ring().is_point() {
        return Err(Error::UnsupportedRing("the adjoint point model needs the rationals as base".into()));
    }
    let ring = Arc::clone(alg.ring());
    let ad = alg.adjoint_connection();
    let a = alg.dim();
    SuperData::new(
        Arc::clone(alg),
        RModule::zero(Arc::clone(&ring)),
        alg.module().clone(),
        Matrix::zeros(0, a),
        ad.nabla().to_vec(),
        vec![Matrix::zeros(0, 0); a],
        HomForm::zero(2, a, a, 0),
    )
}

/// Bundle of Lie algebras `A` (zero anchor) with side `T`, core `A`,
/// `∇ᶜ = ad`, `∇ˢ = 0` and
/// `Ω_{X,Y}φ = [∇̃_φX, Y] + [X, ∇̃_φY] − ∇̃_φ[X,Y]`.
///
/// `t_anchor[j]` is the derivation of `R` by which the `j`-th ℚ-basis vector
/// of `T` acts, and `tilde[j]` is `∇̃` along it, an `a × a` matrix.
pub fn rho_zero_adjoint_model(
    alg: &Arc<Algebroid>,
    t: &RModule,
    t_anchor: &[Matrix],
    tilde: &[Matrix],
) -> Result<SuperData> {
    let a = alg.dim();
    let ring = alg.ring();
    if alg.anchor().iter().any(|m| !m.is_zero()) {
        return Err(Error::Precondition("the algebroid must have zero anchor".into()));
    }
    if t.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let nt = t.dim();
    if t_anchor.len() != nt || tilde.len() != nt || tilde.iter().any(|m| m.shape() != (a, a)) {
        return Err(Error::Shape(format!("need {nt} derivations and {nt} matrices of size {a}x{a}")));
    }
    for (j, l) in t_anchor.iter().enumerate() {
        if l.shape() != (ring.dim(), ring.dim()) || !ring.is_derivation(l) {
            return Err(Error::Precondition(format!("t_anchor[{j}] is not a derivation of the base ring")));
        }
    }
    // R-linearity in φ: ∇̃_{fφ} = f∇̃_φ, and the anchor is R-linear.
    for i in 0..ring.dim() {
        let act_t = &t.action()[i];
        let act_a = &alg.module().action()[i];
        let lf = ring.mult_matrix(&ring.basis_vector(i));
        for j in 0..nt {
            let col = act_t.column(j);
            let mut lhs = Matrix::zeros(a, a);
            let mut anc = Matrix::zeros(ring.dim(), ring.dim());
            for (k, c) in col.iter().enumerate() {
                lhs.add_assign_scaled(&tilde[k], c);
                anc.add_assign_scaled(&t_anchor[k], c);
            }
            if lhs != act_a.mul(&tilde[j]) {
                return Err(Error::Precondition(format!("∇̃ is not R-linear in φ (ring basis {i}, φ {j})")));
            }
            if anc != lf.mul(&t_anchor[j]) {
                return Err(Error::Precondition(format!("t_anchor is not R-linear (ring basis {i}, φ {j})")));
            }
        }
    }
    // Leibniz in the A slot: ∇̃_φ(fX) = φ(f)X + f∇̃_φX.
    for j in 0..nt {
        for i in 0..ring.dim() {
            let act = &alg.module().action()[i];
            let dphi = t_anchor[j].mul_vec(&ring.basis_vector(i));
            let expect = alg.module().act(&dphi).add(&act.mul(&tilde[j]));
            if tilde[j].mul(act) != expect {
                return Err(Error::Precondition(format!("∇̃ fails the Leibniz rule (φ {j}, ring basis {i})")));
            }
        }
    }
    let omega = HomForm::from_fn(2, a, a, nt, |tu| {
        let (x, y) = (alg.basis_vector(tu[0]), alg.basis_vector(tu[1]));
        let cols: Vec<Vec<Scalar>> = (0..nt)
            .map(|j| {
                let tx = tilde[j].mul_vec(&x);
                let ty = tilde[j].mul_vec(&y);
                let b1 = alg.bracket(&tx, &y);
                let b2 = alg.bracket(&x, &ty);
                let b3 = tilde[j].mul_vec(&alg.bracket(&x, &y));
                b1.iter().zip(&b2).zip(&b3).map(|((p, r), s)| p + r - s).collect()
            })
            .collect();
        Matrix::from_columns(a, &cols)
    });
    let ad = alg.adjoint_connection();
    let zero_s = Connection::zero(Arc::clone(alg), t.clone());
    build_type0(alg, &zero_s, &ad, omega)
}

/// `∇̃_φ` acting coefficientwise on a free module `R^m` (basis index
/// `k·dim R + i` is `b_i e_k`).
pub fn coefficientwise_derivative(rank: usize, derivation: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(0, 0);
    for _ in 0..rank {
        out = out.direct_sum(derivation);
    }
    out
}

/// `R = ℚ[x]/(x²)`, `A = R²` with `[e₁, e₂] = s(x)·e₂`, `T = Der(R)` and
/// coefficientwise `∇̃`. `scale` is `s` in the basis `(1, x)`.
pub fn scaled_aff1_rho_zero(scale: [i64; 2]) -> Result<SuperData> {
    let ring = Arc::new(BaseRing::truncated_polynomials(2));
    let module = RModule::free(Arc::clone(&ring), 2);
    // Basis index k·2 + i is x^i e_k.
    let s = [q(scale[0]), q(scale[1])];
    let n = 4;
    let mut br = vec![Scalar::zero(); n * n * n];
    for i in 0..2 {
        for j in 0..2 {
            // [x^i e₁, x^j e₂] = x^{i+j} s(x) e₂.
            for (p, sp) in s.iter().enumerate() {
                let deg = i + j + p;
                if deg < 2 && !sp.is_zero() {
                    let (u, v, w) = (i, 2 + j, 2 + deg);
                    br[(u * n + v) * n + w] += sp;
                    br[(v * n + u) * n + w] -= sp;
                }
            }
        }
    }
    let alg = Arc::new(Algebroid::new(module, br, vec![Matrix::zeros(2, 2); n])?);
    let der = ring.derivations();
    let (t, anchor) = der.as_module();
    let tilde: Vec<Matrix> = anchor.iter().map(|l| coefficientwise_derivative(2, l)).collect();
    rho_zero_adjoint_model(&alg, &t, &anchor, &tilde)
}

/// Flat data with `E = C = ℚ`, `∂ = 1`, `∇ˢ = ∇ᶜ` given by `∇_{e₁} = λ`,
/// `∇_{e₂} = 0`, `Ω = 0` on `aff(1)`.
pub fn aff1_lambda(lambda: Scalar) -> Result<SuperData> {
    let alg = Arc::new(aff1());
    let line = RModule::free(Arc::clone(alg.ring()), 1);
    let m = |x: Scalar| Matrix::scalar(1, x);
    SuperData::new(
        Arc::clone(&alg),
        line.clone(),
        line,
        m(q(1)),
        vec![m(lambda.clone()), m(q(0))],
        vec![m(lambda), m(q(0))],
        HomForm::zero(2, 2, 1, 1),
    )
}

/// Type-1 data on `aff(1)`, `E = ℚ`, `∇_{e₁} = 0`, `∇_{e₂} = 1`.
pub fn aff1_type1() -> Result<SuperData> {
    let alg = Arc::new(aff1());
    let line = RModule::free(Arc::clone(alg.ring()), 1);
    let conn =
        Connection::new(Arc::clone(&alg), line.clone(), vec![Matrix::from_i64(&[&[0]]), Matrix::from_i64(&[&[1]])])?;
    build_type1(&alg, &line, &conn)
}

/// Vacant data (`C = 0`) from a representation of `aff(1)` on `ℚ` with
/// `∇_{e₁} = λ`.
pub fn aff1_vacant(lambda: Scalar) -> Result<SuperData> {
    let alg = Arc::new(aff1());
    let ring = Arc::clone(alg.ring());
    let line = RModule::free(Arc::clone(&ring), 1);
    SuperData::new(
        Arc::clone(&alg),
        line,
        RModule::zero(ring),
        Matrix::zeros(1, 0),
        vec![Matrix::zeros(0, 0); 2],
        vec![Matrix::scalar(1, lambda), Matrix::zeros(1, 1)],
        HomForm::zero(2, 2, 0, 1),
    )
}

/// Type-0 data on abelian `ℚ²` with `E = C = ℚ`, trivial connections and
/// `Ω = c · e¹∧e² ⊗ 1`.
pub fn abelian_type0(c: Scalar) -> Result<SuperData> {
    let alg = Arc::new(abelian(2));
    let line = RModule::free(Arc::clone(alg.ring()), 1);
    let z = Connection::zero(Arc::clone(&alg), line);
    build_type0(&alg, &z, &z, HomForm::from_values(2, 2, 1, 1, vec![Matrix::scalar(1, c)])?)
}

/// Names accepted by [`named_example`].
pub const EXAMPLES: &[&str] = &[
    "aff1-type1",
    "aff1-lambda",
    "aff1-vacant",
    "abelian-type0",
    "adjoint-aff1",
    "adjoint-sl2",
    "adjoint-heisenberg",
    "rho-zero-constant",
    "rho-zero-scaled",
    "zero",
    "random",
];

/// Builds a named example. `random` reads `seed`, `a`, `e`, `c`.
pub fn named_example(spec: &ModelSpec) -> Result<SuperData> {
    let alg_of = |a: Algebroid| Arc::new(a);
    match spec.name.as_str() {
        "aff1-type1" => {
            spec.check_params(&[])?;
            aff1_type1()
        }
        "aff1-lambda" => {
            spec.check_params(&["lambda"])?;
            aff1_lambda(spec.param("lambda", q(1)))
        }
        "aff1-vacant" => {
            spec.check_params(&["lambda"])?;
            aff1_vacant(spec.param("lambda", q(1)))
        }
        "abelian-type0" => {
            spec.check_params(&["c"])?;
            abelian_type0(spec.param("c", q(1)))
        }
        "adjoint-aff1" => adjoint_point_model(&alg_of(aff1())),
        "adjoint-sl2" => adjoint_point_model(&alg_of(sl2())),
        "adjoint-heisenberg" => adjoint_point_model(&alg_of(heisenberg())),
        "rho-zero-constant" => scaled_aff1_rho_zero([1, 0]),
        "rho-zero-scaled" => scaled_aff1_rho_zero([1, 1]),
        "zero" => {
            spec.check_params(&[])?;
            let alg = alg_of(aff1());
            let line = RModule::free(Arc::clone(alg.ring()), 1);
            Ok(SuperData::zero(alg, line.clone(), line))
        }
        "random" => {
            spec.check_params(&["seed", "a", "e", "c"])?;
            let get = |k: &str, d: i64| -> Result<u64> {
                let v = spec.param(k, q(d));
                if !v.is_integer() || v < q(0) {
                    return Err(Error::Precondition(format!("parameter {k} must be a non-negative integer")));
                }
                v.to_integer().try_into().map_err(|_| Error::Precondition(format!("parameter {k} is too large")))
            };
            let dims = (get("a", 2)? as usize, get("e", 2)? as usize, get("c", 2)? as usize);
            random_flat_instance(get("seed", 0)?, dims)
        }
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    q(rng.gen_range(-2..=2))
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    let data = (0..r * c).map(|_| small(rng)).collect();
    Matrix::new(r, c, data).expect("shape")
}

/// Unimodular integer matrix as a product of elementary matrices.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = q(rng.gen_range(-1..=1));
        let mut el = Matrix::identity(n);
        el[(i, j)] = s;
        m = el.mul(&m);
    }
    m
}

/// Lie algebra of dimension `a` drawn from a fixed list.
pub fn random_lie_algebra(rng: &mut ChaCha8Rng, a: usize) -> Algebroid {
    let options: Vec<Algebroid> = match a {
        2 => vec![abelian(2), aff1()],
        3 => vec![abelian(3), heisenberg(), sl2(), aff1().lie_direct_sum(&abelian(1)).expect("sum")],
        4 => vec![
            abelian(4),
            aff1().lie_direct_sum(&aff1()).expect("sum"),
            heisenberg().lie_direct_sum(&abelian(1)).expect("sum"),
            sl2().lie_direct_sum(&abelian(1)).expect("sum"),
        ],
        n => vec![abelian(n)],
    };
    let k = rng.gen_range(0..options.len());
    options.into_iter().nth(k).expect("nonempty")
}

/// Flat representation of dimension `n`: a direct sum of characters
/// (functionals vanishing on `[A, A]`), conjugated by a unimodular matrix.
pub fn random_flat_connection(rng: &mut ChaCha8Rng, alg: &Arc<Algebroid>, n: usize) -> Connection {
    let a = alg.dim();
    let derived: Vec<Vec<Scalar>> =
        (0..a).flat_map(|i| (0..a).map(move |j| (i, j))).map(|(i, j)| alg.bracket_basis(i, j)).collect();
    // Characters: kernel of the transpose of the derived-algebra span.
    let dm = Matrix::from_rows(derived, a).expect("shape");
    let chars = crate::linalg::kernel(&dm);
    let mut diag: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n]; a];
    for slot in 0..n {
        let coeffs: Vec<Scalar> = (0..chars.dim()).map(|_| small(rng)).collect();
        let chi = crate::linalg::combine(a, &coeffs, chars.basis());
        for x in 0..a {
            diag[x][slot] = chi[x].clone();
        }
    }
    let p = random_unimodular(rng, n);
    let p_inv = p.inverse().expect("unimodular");
    let nabla = (0..a)
        .map(|x| {
            let mut d = Matrix::zeros(n, n);
            for i in 0..n {
                d[(i, i)] = diag[x][i].clone();
            }
            p.mul(&d).mul(&p_inv)
        })
        .collect();
    let module = RModule::free(Arc::clone(alg.ring()), n);
    Connection::new(Arc::clone(alg), module, nabla).expect("valid connection")
}

/// A random closed `Ω ∈ Ω²(A; Hom(E, C))` for flat `∇ˢ`, `∇ᶜ`.
pub fn random_closed_omega(rng: &mut ChaCha8Rng, ns: &Connection, nc: &Connection) -> HomForm {
    let (hom, conn) = Connection::hom(ns, nc).expect("same algebroid");
    let a = ns.algebroid().dim();
    let cx = CeComplex::new(&conn);
    let space = cx.space(2);
    let dm = cx.d_matrix(2);
    let cocycles = crate::linalg::kernel(&dm);
    let coeffs: Vec<Scalar> = (0..cocycles.dim()).map(|_| small(rng)).collect();
    let coords = crate::linalg::combine(space.dim(), &coeffs, cocycles.basis());
    if space.dim() == 0 {
        return HomForm::zero(2, a, nc.coeff().dim(), ns.coeff().dim());
    }
    HomForm::from_form(&space.form_of(&coords), &hom)
}

/// Deterministic flat instance with `dims = (dim A, dim E, dim C)`: a
/// type-0 ⊕ type-1 sum, scrambled by a random gauge and random unimodular
/// changes of basis.
pub fn random_flat_instance(seed: u64, dims: (usize, usize, usize)) -> Result<SuperData> {
    let (a, e, c) = dims;
    if a > 4 || e > 4 || c > 4 {
        return Err(Error::Precondition("random instances support dimensions up to 4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = Arc::new(random_lie_algebra(&mut rng, a));
    let r = rng.gen_range(0..=e.min(c));
    let ns = random_flat_connection(&mut rng, &alg, e - r);
    let nc = random_flat_connection(&mut rng, &alg, c - r);
    let omega = random_closed_omega(&mut rng, &ns, &nc);
    let t0 = build_type0(&alg, &ns, &nc, omega)?;
    let f_mod = RModule::free(Arc::clone(alg.ring()), r);
    let nabla_f: Vec<Matrix> = (0..a).map(|_| random_matrix(&mut rng, r, r)).collect();
    let t1 = build_type1(&alg, &f_mod, &Connection::new(Arc::clone(&alg), f_mod.clone(), nabla_f)?)?;
    let sum = t0.direct_sum(&t1)?;
    let sigma = HomForm::from_fn(1, a, c, e, |_| random_matrix(&mut rng, c, e));
    let scrambled = sum.gauge_transform(&sigma)?;
    let pe = random_unimodular(&mut rng, e);
    let pc = random_unimodular(&mut rng, c);
    scrambled.change_basis(&pe, &pc)
}

/// A random gauge compatible with point-case data.
pub fn random_sigma(rng: &mut ChaCha8Rng, data: &SuperData) -> HomForm {
    let (a, e, c) = data.dims();
    HomForm::from_fn(1, a, c, e, |_| random_matrix(rng, c, e))
}

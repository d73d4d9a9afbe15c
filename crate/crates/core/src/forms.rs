//! Algebroid forms `Ω^p(A; W)`, the Chevalley–Eilenberg differential,
//! cohomology and exactness certificates.
//!
//! A form of degree `p` is stored by its values on strictly increasing tuples
//! of basis indices of `A` (lexicographic order); values on other tuples follow
//! by alternation. Evaluation follows the convention
//! `ω(X_0, …, X_p) = ι_{X_p} ⋯ ι_{X_0} ω`.

use num_traits::Zero;

use crate::algebroid::{Algebroid, Connection};
use crate::error::{Error, Result};
use crate::linalg::{image, kernel, ComplementOrder, Matrix, Subspace};
use crate::ring::{HomModule, RModule};
use crate::scalar::{one, Scalar};

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing `p`-tuples from `0..a` in lexicographic order.
pub fn increasing_tuples(a: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(a, p));
    let mut cur = Vec::with_capacity(p);
    fn rec(a: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..a {
            if a - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(a, p, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(a, p, 0, &mut cur, &mut out);
    out
}

/// Lexicographic rank of a strictly increasing tuple.
pub fn tuple_rank(t: &[usize], a: usize) -> usize {
    let p = t.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &c) in t.iter().enumerate() {
        for v in prev..c {
            rank += binomial(a - v - 1, p - i - 1);
        }
        prev = c + 1;
    }
    rank
}

/// Sorts a tuple, returning the sorted tuple and whether the permutation was
/// odd; `None` if an index repeats.
pub fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// Splittings of positions `0..n` into an increasing `I` of size `p` and its
/// increasing complement `J`, with the sign of the permutation `(I, J)`.
pub fn shuffles(n: usize, p: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    increasing_tuples(n, p)
        .into_iter()
        .map(|i| {
            let j: Vec<usize> = (0..n).filter(|x| !i.contains(x)).collect();
            let inversions: usize = i.iter().map(|&x| j.iter().filter(|&&y| y < x).count()).sum();
            (i, j, inversions % 2 == 1)
        })
        .collect()
}

/// A `W`-valued `p`-form; `W` has ℚ-dimension `width`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    degree: usize,
    dim_a: usize,
    width: usize,
    data: Vec<Scalar>,
}

impl Form {
    pub fn zero(degree: usize, dim_a: usize, width: usize) -> Self {
        Form { degree, dim_a, width, data: vec![Scalar::zero(); binomial(dim_a, degree) * width] }
    }

    pub fn from_values(degree: usize, dim_a: usize, width: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != binomial(dim_a, degree) * width {
            return Err(Error::Shape(format!(
                "a {degree}-form on a {dim_a}-dimensional algebroid with {width}-dimensional values needs {} entries",
                binomial(dim_a, degree) * width
            )));
        }
        Ok(Form { degree, dim_a, width, data })
    }

    /// Builds a form from its values on increasing tuples.
    pub fn from_fn(degree: usize, dim_a: usize, width: usize, mut f: impl FnMut(&[usize]) -> Vec<Scalar>) -> Self {
        let mut data = Vec::with_capacity(binomial(dim_a, degree) * width);
        for t in increasing_tuples(dim_a, degree) {
            let v = f(&t);
            assert_eq!(v.len(), width);
            data.extend(v);
        }
        Form { degree, dim_a, width, data }
    }

    /// Scalar-valued monomial `e^{i_1} ∧ ⋯ ∧ e^{i_p}` at a point (width 1).
    pub fn monomial(dim_a: usize, indices: &[usize], coeff: Scalar) -> Self {
        let mut f = Form::zero(indices.len(), dim_a, 1);
        if let Some((s, odd)) = sort_with_sign(indices) {
            let r = tuple_rank(&s, dim_a);
            f.data[r] = if odd { -coeff } else { coeff };
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Value on the increasing tuple with the given rank.
    pub fn value(&self, rank: usize) -> &[Scalar] {
        &self.data[rank * self.width..(rank + 1) * self.width]
    }

    /// Value on an arbitrary tuple of basis indices.
    pub fn eval(&self, idx: &[usize]) -> Vec<Scalar> {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => vec![Scalar::zero(); self.width],
            Some((s, odd)) => {
                let v = self.value(tuple_rank(&s, self.dim_a));
                if odd {
                    v.iter().map(|x| -x).collect()
                } else {
                    v.to_vec()
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Form) {
        assert_eq!(
            (self.degree, self.dim_a, self.width),
            (other.degree, other.dim_a, other.width),
            "form shape mismatch"
        );
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check_same_shape(other);
        Form { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.check_same_shape(other);
        Form { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        Form { data: self.data.iter().map(|a| a * s).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Form {
        Form { data: self.data.iter().map(|a| -a).collect(), ..self.clone() }
    }

    /// Applies a linear map `W → W'` to every value.
    pub fn map_values(&self, m: &Matrix) -> Form {
        assert_eq!(m.cols(), self.width);
        let w2 = m.rows();
        let n = binomial(self.dim_a, self.degree);
        let mut data = Vec::with_capacity(n * w2);
        for r in 0..n {
            data.extend(m.mul_vec(self.value(r)));
        }
        Form { degree: self.degree, dim_a: self.dim_a, width: w2, data }
    }
}

/// A form with values in linear maps `V → W` (matrices `rows × cols`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomForm {
    degree: usize,
    dim_a: usize,
    rows: usize,
    cols: usize,
    data: Vec<Matrix>,
}

impl HomForm {
    pub fn zero(degree: usize, dim_a: usize, rows: usize, cols: usize) -> Self {
        HomForm { degree, dim_a, rows, cols, data: vec![Matrix::zeros(rows, cols); binomial(dim_a, degree)] }
    }

    pub fn from_fn(
        degree: usize,
        dim_a: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(&[usize]) -> Matrix,
    ) -> Self {
        let data = increasing_tuples(dim_a, degree)
            .iter()
            .map(|t| {
                let m = f(t);
                assert_eq!(m.shape(), (rows, cols));
                m
            })
            .collect();
        HomForm { degree, dim_a, rows, cols, data }
    }

    pub fn from_values(degree: usize, dim_a: usize, rows: usize, cols: usize, data: Vec<Matrix>) -> Result<Self> {
        if data.len() != binomial(dim_a, degree) || data.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(Error::Shape(format!(
                "a {degree}-form on a {dim_a}-dimensional algebroid needs {} values of size {rows}x{cols}",
                binomial(dim_a, degree)
            )));
        }
        Ok(HomForm { degree, dim_a, rows, cols, data })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[Matrix] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Matrix::is_zero)
    }

    pub fn eval(&self, idx: &[usize]) -> Matrix {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => Matrix::zeros(self.rows, self.cols),
            Some((s, odd)) => {
                let v = &self.data[tuple_rank(&s, self.dim_a)];
                if odd {
                    v.neg()
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Applies a shape-uniform map to every value. The new shape is read off
    /// `f` applied to a zero matrix, so forms with no values keep it too.
    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> HomForm {
        let (rows, cols) = f(&Matrix::zeros(self.rows, self.cols)).shape();
        let data: Vec<Matrix> = self.data.iter().map(f).collect();
        HomForm { degree: self.degree, dim_a: self.dim_a, rows, cols, data }
    }

    pub fn add(&self, other: &HomForm) -> HomForm {
        assert_eq!((self.degree, self.dim_a), (other.degree, other.dim_a));
        HomForm { data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &HomForm) -> HomForm {
        assert_eq!((self.degree, self.dim_a), (other.degree, other.dim_a));
        HomForm { data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> HomForm {
        self.map(Matrix::neg)
    }

    pub fn scale(&self, s: &Scalar) -> HomForm {
        self.map(|m| m.scale(s))
    }

    /// Coordinates of every value in a hom module, as a `hom.dim()`-wide form.
    pub fn to_form(&self, hom: &HomModule) -> Option<Form> {
        let mut data = Vec::new();
        for m in &self.data {
            data.extend(hom.coordinates(m)?);
        }
        Some(Form { degree: self.degree, dim_a: self.dim_a, width: hom.dim(), data })
    }

    pub fn from_form(form: &Form, hom: &HomModule) -> HomForm {
        assert_eq!(form.width(), hom.dim());
        let n = binomial(form.dim_a(), form.degree());
        let data = (0..n).map(|r| hom.map_of(form.value(r))).collect();
        HomForm { degree: form.degree(), dim_a: form.dim_a(), rows: hom.target.dim(), cols: hom.source.dim(), data }
    }
}

/// Applies a form-linear operator given by a map-valued `q`-form `Φ` of total
/// degree parity `t` to a `p`-form `ξ`:
/// `(Φξ)(X_1…X_{p+q}) = (−1)^{p·t} Σ_{(I,J)} sgn(I,J) Φ(X_J) ξ(X_I)`.
pub fn apply_hom_form(phi: &HomForm, xi: &Form, odd: bool) -> Form {
    assert_eq!(phi.dim_a(), xi.dim_a());
    assert_eq!(phi.shape().1, xi.width(), "operator/form width mismatch");
    let (p, qd, a) = (xi.degree(), phi.degree(), xi.dim_a());
    let n = p + qd;
    let w = phi.shape().0;
    if n > a {
        return Form::zero(n, a, w);
    }
    let global = odd && p % 2 == 1;
    let sh = shuffles(n, p);
    Form::from_fn(n, a, w, |t| {
        let mut acc = vec![Scalar::zero(); w];
        for (i, j, neg) in &sh {
            let xi_i: Vec<usize> = i.iter().map(|&k| t[k]).collect();
            let xj: Vec<usize> = j.iter().map(|&k| t[k]).collect();
            let v = phi.eval(&xj).mul_vec(&xi.eval(&xi_i));
            let flip = *neg ^ global;
            for (o, x) in acc.iter_mut().zip(v) {
                if flip {
                    *o -= x;
                } else {
                    *o += x;
                }
            }
        }
        acc
    })
}

/// Composition `Φ ∘ Ψ` of map-valued forms with the wedge on form parts and
/// the Koszul sign `(−1)^{|Ψ|_form · t_Φ}`, `t_Φ` the total parity of `Φ`.
pub fn compose_hom_forms(phi: &HomForm, psi: &HomForm, phi_odd: bool) -> HomForm {
    assert_eq!(phi.shape().1, psi.shape().0);
    let (p, qd, a) = (psi.degree(), phi.degree(), phi.dim_a());
    let n = p + qd;
    let (rows, cols) = (phi.shape().0, psi.shape().1);
    if n > a {
        return HomForm::zero(n, a, rows, cols);
    }
    let global = phi_odd && p % 2 == 1;
    let sh = shuffles(n, p);
    HomForm::from_fn(n, a, rows, cols, |t| {
        let mut acc = Matrix::zeros(rows, cols);
        for (i, j, neg) in &sh {
            let xi: Vec<usize> = i.iter().map(|&k| t[k]).collect();
            let xj: Vec<usize> = j.iter().map(|&k| t[k]).collect();
            let m = phi.eval(&xj).mul(&psi.eval(&xi));
            let s = if *neg ^ global { -one() } else { one() };
            acc.add_assign_scaled(&m, &s);
        }
        acc
    })
}

/// Wedge `α ∧ β` of a ring-valued form with a module-valued form.
pub fn wedge_scalar(coeff: &RModule, alpha: &Form, beta: &Form) -> Form {
    let ring = coeff.ring();
    assert_eq!(alpha.width(), ring.dim());
    assert_eq!(beta.width(), coeff.dim());
    assert_eq!(alpha.dim_a(), beta.dim_a());
    let (p, qd, a) = (alpha.degree(), beta.degree(), alpha.dim_a());
    let n = p + qd;
    if n > a {
        return Form::zero(n, a, coeff.dim());
    }
    let sh = shuffles(n, p);
    Form::from_fn(n, a, coeff.dim(), |t| {
        let mut acc = vec![Scalar::zero(); coeff.dim()];
        for (i, j, neg) in &sh {
            let xi: Vec<usize> = i.iter().map(|&k| t[k]).collect();
            let xj: Vec<usize> = j.iter().map(|&k| t[k]).collect();
            let v = coeff.act(&alpha.eval(&xi)).mul_vec(&beta.eval(&xj));
            for (o, x) in acc.iter_mut().zip(v) {
                if *neg {
                    *o -= x;
                } else {
                    *o += x;
                }
            }
        }
        acc
    })
}

/// Cartan formula:
/// `(dω)(X_0…X_p) = Σ_i (−1)^i ∇_{X_i} ω(…X̂_i…) + Σ_{i<j} (−1)^{i+j} ω([X_i,X_j], …X̂_i…X̂_j…)`.
pub fn cartan(conn: &Connection, omega: &Form) -> Form {
    let alg = conn.algebroid();
    let a = alg.dim();
    assert_eq!(omega.dim_a(), a);
    assert_eq!(omega.width(), conn.coeff().dim());
    let p = omega.degree();
    let w = omega.width();
    if p + 1 > a {
        return Form::zero(p + 1, a, w);
    }
    Form::from_fn(p + 1, a, w, |t| {
        let mut acc = vec![Scalar::zero(); w];
        for i in 0..=p {
            let rest: Vec<usize> = t.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            let v = conn.nabla()[t[i]].mul_vec(&omega.eval(&rest));
            for (o, x) in acc.iter_mut().zip(v) {
                if i % 2 == 0 {
                    *o += x;
                } else {
                    *o -= x;
                }
            }
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let rest: Vec<usize> =
                    t.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
                let mut args = Vec::with_capacity(p);
                args.push(0);
                args.extend(&rest);
                for k in 0..a {
                    let c = alg.c(t[i], t[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    args[0] = k;
                    let v = omega.eval(&args);
                    let s = if (i + j) % 2 == 0 { c.clone() } else { -c };
                    for (o, x) in acc.iter_mut().zip(v) {
                        if !x.is_zero() {
                            *o += &s * x;
                        }
                    }
                }
            }
        }
        acc
    })
}

/// `Ω^p(A; W)`: alternating R-multilinear maps, as a subspace of the
/// alternating ℚ-multilinear ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpace {
    degree: usize,
    dim_a: usize,
    width: usize,
    basis: Vec<Form>,
    free: Vec<usize>,
    constraints: Option<Matrix>,
}

impl FormSpace {
    pub fn new(alg: &Algebroid, coeff: &RModule, degree: usize) -> Self {
        let a = alg.dim();
        let w = coeff.dim();
        let params = binomial(a, degree) * w;
        let ring = alg.ring();
        if ring.dim() == 1 || degree == 0 {
            let basis = (0..params)
                .map(|i| {
                    let mut d = vec![Scalar::zero(); params];
                    d[i] = one();
                    Form { degree, dim_a: a, width: w, data: d }
                })
                .collect();
            return FormSpace { degree, dim_a: a, width: w, basis, free: (0..params).collect(), constraints: None };
        }
        // ω(f·X_1, X_2…) = f·ω(X_1, X_2…) for every ring basis element f.
        let mut rows = Vec::new();
        let tuples_rest = increasing_tuples(a, degree - 1);
        for m in 0..ring.dim() {
            let act_a = &alg.module().action()[m];
            let act_w = &coeff.action()[m];
            for x1 in 0..a {
                for rest in &tuples_rest {
                    for k in 0..w {
                        let mut row = vec![Scalar::zero(); params];
                        let mut args = Vec::with_capacity(degree);
                        args.push(0);
                        args.extend(rest);
                        for y in 0..a {
                            let c = &act_a[(y, x1)];
                            if c.is_zero() {
                                continue;
                            }
                            args[0] = y;
                            if let Some((s, odd)) = sort_with_sign(&args) {
                                let r = tuple_rank(&s, a);
                                if odd {
                                    row[r * w + k] -= c;
                                } else {
                                    row[r * w + k] += c;
                                }
                            }
                        }
                        args[0] = x1;
                        if let Some((s, odd)) = sort_with_sign(&args) {
                            let r = tuple_rank(&s, a);
                            for l in 0..w {
                                let c = &act_w[(k, l)];
                                if c.is_zero() {
                                    continue;
                                }
                                if odd {
                                    row[r * w + l] += c;
                                } else {
                                    row[r * w + l] -= c;
                                }
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        if rows.is_empty() {
            return FormSpace::new_unconstrained(degree, a, w);
        }
        let cm = Matrix::from_rows(rows, params).unwrap();
        let (rr, piv) = cm.rref();
        let reduced = Matrix::from_rows((0..piv.len()).map(|i| rr.row(i)).collect(), params).unwrap();
        let ker = kernel(&reduced);
        let mut is_pivot = vec![false; params];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..params).filter(|&i| !is_pivot[i]).collect();
        let basis = ker.basis().iter().map(|v| Form { degree, dim_a: a, width: w, data: v.clone() }).collect();
        FormSpace { degree, dim_a: a, width: w, basis, free, constraints: Some(reduced) }
    }

    fn new_unconstrained(degree: usize, a: usize, w: usize) -> Self {
        let params = binomial(a, degree) * w;
        let basis = (0..params)
            .map(|i| {
                let mut d = vec![Scalar::zero(); params];
                d[i] = one();
                Form { degree, dim_a: a, width: w, data: d }
            })
            .collect();
        FormSpace { degree, dim_a: a, width: w, basis, free: (0..params).collect(), constraints: None }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Form] {
        &self.basis
    }

    pub fn contains(&self, f: &Form) -> bool {
        if (f.degree, f.dim_a, f.width) != (self.degree, self.dim_a, self.width) {
            return false;
        }
        match &self.constraints {
            None => true,
            Some(c) => c.mul_vec(&f.data).iter().all(Zero::is_zero),
        }
    }

    /// Coordinates in `basis`, or `None` if the form is not R-multilinear.
    pub fn coordinates(&self, f: &Form) -> Option<Vec<Scalar>> {
        if !self.contains(f) {
            return None;
        }
        Some(self.free.iter().map(|&i| f.data[i].clone()).collect())
    }

    pub fn form_of(&self, coords: &[Scalar]) -> Form {
        let mut f = Form::zero(self.degree, self.dim_a, self.width);
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in f.data.iter_mut().zip(&b.data) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        f
    }
}

/// `H^n` with a deterministic basis of representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Form>,
}

/// The Chevalley–Eilenberg complex of a connection, with precomputed form
/// spaces in every degree `0..=dim A + 1`.
#[derive(Debug, Clone)]
pub struct CeComplex {
    conn: Connection,
    spaces: Vec<FormSpace>,
}

impl CeComplex {
    pub fn new(conn: &Connection) -> Self {
        let a = conn.algebroid().dim();
        let spaces = (0..=a + 1).map(|p| FormSpace::new(conn.algebroid(), conn.coeff(), p)).collect();
        CeComplex { conn: conn.clone(), spaces }
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub fn space(&self, p: usize) -> &FormSpace {
        &self.spaces[p.min(self.spaces.len() - 1)]
    }

    pub fn d(&self, omega: &Form) -> Form {
        cartan(&self.conn, omega)
    }

    /// Matrix of `d: Ω^p → Ω^{p+1}` in form-space coordinates.
    pub fn d_matrix(&self, p: usize) -> Matrix {
        let src = self.space(p);
        let dst = self.space(p + 1);
        let cols: Vec<Vec<Scalar>> = src
            .basis()
            .iter()
            .map(|b| dst.coordinates(&self.d(b)).expect("the differential preserves R-multilinearity"))
            .collect();
        Matrix::from_columns(dst.dim(), &cols)
    }

    /// True iff `d∘d` vanishes on every basis form of every degree.
    pub fn d_squared_vanishes(&self) -> bool {
        let a = self.conn.algebroid().dim();
        (0..a.saturating_sub(1)).all(|p| self.space(p).basis().iter().all(|b| self.d(&self.d(b)).is_zero()))
    }

    pub fn cohomology(&self, n: usize) -> Cohomology {
        let a = self.conn.algebroid().dim();
        if n > a {
            return Cohomology { degree: n, dim: 0, representatives: Vec::new() };
        }
        let dn = self.d_matrix(n);
        let ker = kernel(&dn);
        let im = if n == 0 { Subspace::zero(self.space(0).dim()) } else { image(&self.d_matrix(n - 1)) };
        let reps_coords = im.complement_within(&ker, ComplementOrder::LowestFirst);
        let dim_rank_nullity = ker.dim() - im.dim();
        assert_eq!(dim_rank_nullity, reps_coords.dim(), "cohomology dimension computed two ways");
        let sp = self.space(n);
        Cohomology {
            degree: n,
            dim: reps_coords.dim(),
            representatives: reps_coords.basis().iter().map(|c| sp.form_of(c)).collect(),
        }
    }

    /// Some `η` with `dη = ω` if `ω` is exact, `None` otherwise.
    pub fn exactness_certificate(&self, omega: &Form) -> Result<Option<Form>> {
        let p = omega.degree();
        if omega.width() != self.conn.coeff().dim() || omega.dim_a() != self.conn.algebroid().dim() {
            return Err(Error::ModuleMismatch("form coefficients do not match the connection".into()));
        }
        let sp = self.space(p);
        let coords = sp.coordinates(omega).ok_or_else(|| Error::Precondition("form is not R-multilinear".into()))?;
        if !self.d(omega).is_zero() {
            return Err(Error::NotClosed);
        }
        if p == 0 {
            return Err(Error::Precondition("degree-0 forms have no primitive".into()));
        }
        let dm = self.d_matrix(p - 1);
        match crate::linalg::solve(&dm, &coords)? {
            None => Ok(None),
            Some(x) => {
                let eta = self.space(p - 1).form_of(&x);
                debug_assert_eq!(&self.d(&eta), omega);
                Ok(Some(eta))
            }
        }
    }
}

/// `d_∇ ω` with a module check.
pub fn ce_differential(conn: &Connection, omega: &Form) -> Result<Form> {
    if omega.width() != conn.coeff().dim() || omega.dim_a() != conn.algebroid().dim() {
        return Err(Error::ModuleMismatch("form coefficients do not match the connection".into()));
    }
    Ok(cartan(conn, omega))
}

/// Flatness by curvature and by `d² = 0` on a spanning set; the two must agree.
pub fn is_flat(conn: &Connection) -> bool {
    let by_curvature = conn.curvature_vanishes();
    let by_d2 = CeComplex::new(conn).d_squared_vanishes();
    assert_eq!(by_curvature, by_d2, "curvature and d² verdicts disagree");
    by_curvature
}

pub fn cohomology(conn: &Connection, n: usize) -> Result<Cohomology> {
    if !is_flat(conn) {
        return Err(Error::NotFlat("cohomology needs a flat connection".into()));
    }
    Ok(CeComplex::new(conn).cohomology(n))
}

pub fn exactness_certificate(conn: &Connection, omega: &Form) -> Result<Option<Form>> {
    if !is_flat(conn) {
        return Err(Error::NotFlat("exactness certificates need a flat connection".into()));
    }
    CeComplex::new(conn).exactness_certificate(omega)
}

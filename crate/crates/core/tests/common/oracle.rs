//! Brute-force Chern–Simons evaluator on the explicit vector space
//! `Ω(A) ⊗ 𝓔`: `D` comes from the Cartan-formula operator, `D†` is solved
//! from the pairing identity, and the transgression acts on
//! `t`-polynomials with values in `V ⊕ ṫV`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use vbalg_core::forms::{increasing_tuples, Form};
use vbalg_core::linalg::{solve, Matrix};
use vbalg_core::scalar::Scalar;
use vbalg_core::superconn::{GradedElement, SuperData};

pub struct Layout {
    pub a: usize,
    pub e: usize,
    pub c: usize,
    /// `(mask, slot)` per basis vector.
    pub index: Vec<(u32, usize)>,
}

impl Layout {
    pub fn new(a: usize, e: usize, c: usize) -> Self {
        let mut index = Vec::new();
        for p in 0..=a {
            for t in increasing_tuples(a, p) {
                let m = t.iter().fold(0u32, |m, &i| m | (1 << i));
                for j in 0..e + c {
                    index.push((m, j));
                }
            }
        }
        Layout { a, e, c, index }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    fn position(&self, m: u32, j: usize) -> usize {
        self.index.iter().position(|&x| x == (m, j)).unwrap()
    }

    fn odd_slot(&self, j: usize) -> bool {
        j >= self.e
    }

    fn to_graded(&self, v: &[Scalar]) -> GradedElement {
        let a = self.a;
        let mut core = Vec::new();
        let mut side = Vec::new();
        for p in 0..=a {
            let tuples = increasing_tuples(a, p);
            let mut cd = Vec::new();
            let mut sd = Vec::new();
            for t in &tuples {
                let m = t.iter().fold(0u32, |m, &i| m | (1 << i));
                for j in 0..self.e {
                    sd.push(v[self.position(m, j)].clone());
                }
                for j in self.e..self.e + self.c {
                    cd.push(v[self.position(m, j)].clone());
                }
            }
            side.push(Form::from_values(p, a, self.e, sd).unwrap());
            core.push(Form::from_values(p, a, self.c, cd).unwrap());
        }
        GradedElement { core, side }
    }

    fn flatten_graded(&self, g: &GradedElement) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (pos, &(m, j)) in self.index.iter().enumerate() {
            let p = m.count_ones() as usize;
            let t: Vec<usize> = (0..self.a).filter(|i| m & (1 << i) != 0).collect();
            let rank = increasing_tuples(self.a, p).iter().position(|x| *x == t).unwrap();
            out[pos] =
                if j < self.e { g.side[p].value(rank)[j].clone() } else { g.core[p].value(rank)[j - self.e].clone() };
        }
        out
    }
}

/// `e^I ∧ e^K` as `(mask, sign)`.
fn wedge(i: u32, k: u32) -> Option<(u32, bool)> {
    if i & k != 0 {
        return None;
    }
    let mut neg = false;
    for x in 0..32 {
        if k & (1 << x) != 0 {
            let above = (i >> (x + 1)).count_ones();
            if above % 2 == 1 {
                neg = !neg;
            }
        }
    }
    Some((i | k, neg))
}

/// Matrix of `D` on `V` (columns are images of basis vectors).
pub fn d_matrix(data: &SuperData, l: &Layout) -> Matrix {
    let n = l.dim();
    let mut cols = Vec::new();
    for i in 0..n {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        let g = data.apply_d(&l.to_graded(&v)).unwrap();
        cols.push(l.flatten_graded(&g));
    }
    Matrix::from_columns(n, &cols)
}

/// `d` on scalar forms stored by mask.
fn d_scalar(data: &SuperData, f: &BTreeMap<u32, Scalar>) -> BTreeMap<u32, Scalar> {
    let alg = data.algebroid();
    let a = alg.dim();
    let mut out = BTreeMap::new();
    for (&m, v) in f {
        let t: Vec<usize> = (0..a).filter(|i| m & (1 << i) != 0).collect();
        let form = Form::monomial(a, &t, v.clone());
        let df = vbalg_core::forms::cartan(&alg.trivial_connection(), &form);
        for (r, tt) in increasing_tuples(a, t.len() + 1).iter().enumerate() {
            let x = &df.value(r)[0];
            if !x.is_zero() {
                let mm = tt.iter().fold(0u32, |m, &i| m | (1 << i));
                *out.entry(mm).or_insert_with(Scalar::zero) += x;
            }
        }
    }
    out.retain(|_, v: &mut Scalar| !v.is_zero());
    out
}

/// `⟨x, s⟩` for `x ∈ V`, `s ∈ V*` as mask-indexed scalars.
fn pair(l: &Layout, x: &[Scalar], s: &[Scalar]) -> BTreeMap<u32, Scalar> {
    let mut out = BTreeMap::new();
    for (i, &(mi, ji)) in l.index.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        for (k, &(mk, jk)) in l.index.iter().enumerate() {
            if jk != ji || s[k].is_zero() {
                continue;
            }
            if let Some((m, neg)) = wedge(mi, mk) {
                let flip = l.odd_slot(ji) && mk.count_ones() % 2 == 1;
                let v = &x[i] * &s[k];
                let v = if neg != flip { -v } else { v };
                *out.entry(m).or_insert_with(Scalar::zero) += v;
            }
        }
    }
    out.retain(|_, v: &mut Scalar| !v.is_zero());
    out
}

/// Matrix of `D†` on `V*`, solved from
/// `d⟨x, s⟩ = ⟨Dx, s⟩ + (−1)^{|x|}⟨x, D†s⟩`.
pub fn dagger_matrix(data: &SuperData, l: &Layout, d: &Matrix) -> Matrix {
    let n = l.dim();
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    };
    let masks: Vec<u32> = (0..(1u32 << l.a)).collect();
    let mut cols = Vec::new();
    for s in 0..n {
        let sv = unit(s);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs = Vec::new();
        for x in 0..n {
            let xv = unit(x);
            let (mx, jx) = l.index[x];
            let odd = (mx.count_ones() % 2 == 1) != l.odd_slot(jx);
            let lhs = d_scalar(data, &pair(l, &xv, &sv));
            let dx = d.column(x);
            let dxs = pair(l, &dx, &sv);
            let columns: Vec<BTreeMap<u32, Scalar>> = (0..n).map(|k| pair(l, &xv, &unit(k))).collect();
            for &m in &masks {
                let target = lhs.get(&m).cloned().unwrap_or_else(Scalar::zero)
                    - dxs.get(&m).cloned().unwrap_or_else(Scalar::zero);
                let target = if odd { -target } else { target };
                rows.push(columns.iter().map(|c| c.get(&m).cloned().unwrap_or_else(Scalar::zero)).collect());
                rhs.push(target);
            }
        }
        let m = Matrix::from_rows(rows, n).unwrap();
        let sol = solve(&m, &rhs).unwrap().expect("pairing identity solvable");
        cols.push(sol);
    }
    Matrix::from_columns(n, &cols)
}

/// Slotwise `blockdiag(G_E, G_C)` on `V`.
pub fn slotwise(l: &Layout, g: &Matrix) -> Matrix {
    let n = l.dim();
    let mut out = Matrix::zeros(n, n);
    for (i, &(mi, ji)) in l.index.iter().enumerate() {
        for (k, &(mk, jk)) in l.index.iter().enumerate() {
            if mi == mk {
                out[(i, k)] = g[(ji, jk)].clone();
            }
        }
    }
    out
}

/// Element of `Ω(A × TI) ⊗ 𝓔`: `(t-power, ṫ) ↦ vector`, `ṫ` written first.
type Elem = BTreeMap<(u32, bool), Vec<Scalar>>;

fn add_to(out: &mut Elem, key: (u32, bool), v: &[Scalar], s: &Scalar) {
    let e = out.entry(key).or_insert_with(|| vec![Scalar::zero(); v.len()]);
    for (o, x) in e.iter_mut().zip(v) {
        *o += s * x;
    }
}

/// `T = tD + (1 − t)ᵍD + ṫ∂_t`.
fn apply_t(d: &Matrix, gd: &Matrix, w: &Elem) -> Elem {
    let one = Scalar::one();
    let mut out = Elem::new();
    for (&(n, tdot), v) in w {
        let dv = d.mul_vec(v);
        let gv = gd.mul_vec(v);
        let s = if tdot { -one.clone() } else { one.clone() };
        add_to(&mut out, (n + 1, tdot), &dv, &s);
        add_to(&mut out, (n, tdot), &gv, &s);
        add_to(&mut out, (n + 1, tdot), &gv, &-s.clone());
        if !tdot && n > 0 {
            add_to(&mut out, (n - 1, true), v, &Scalar::from_integer(n.into()));
        }
    }
    out
}

/// `cs_k` by mask (bits are form indices).
pub fn cs(data: &SuperData, gram: &Matrix, k: usize) -> BTreeMap<u32, Scalar> {
    let (a, e, c) = data.dims();
    let l = Layout::new(a, e, c);
    let d = d_matrix(data, &l);
    let dd = dagger_matrix(data, &l, &d);
    let g = slotwise(&l, gram);
    let gi = g.inverse().unwrap();
    let gd = gi.mul(&dd).mul(&g);
    let mut out = BTreeMap::new();
    for j in 0..e + c {
        let pos = l.position(0, j);
        let mut w = Elem::new();
        let mut v = vec![Scalar::zero(); l.dim()];
        v[pos] = Scalar::one();
        w.insert((0, false), v);
        for _ in 0..2 * k {
            w = apply_t(&d, &gd, &w);
        }
        for (&(n, tdot), v) in &w {
            if !tdot {
                continue;
            }
            for (i, &(m, jj)) in l.index.iter().enumerate() {
                if jj != j || v[i].is_zero() {
                    continue;
                }
                let x = &v[i] / Scalar::from_integer((n + 1).into());
                let x = if l.odd_slot(j) { -x } else { x };
                *out.entry(m).or_insert_with(Scalar::zero) += x;
            }
        }
    }
    out.retain(|_, v: &mut Scalar| !v.is_zero());
    out
}

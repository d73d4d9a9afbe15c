//! Shared test instances: seeded flat data, named examples and single-entry
//! perturbations.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vbalg_core::algebroid::Algebroid;
use vbalg_core::forms::{binomial, HomForm};
use vbalg_core::linalg::Matrix;
use vbalg_core::models;
use vbalg_core::scalar::{q, Scalar};
use vbalg_core::superconn::SuperData;

/// `(dim A, dim E, dim C)` for the `i`-th seeded instance, all in `1..=3`.
pub fn dims(i: u64) -> (usize, usize, usize) {
    let i = i as usize;
    (1 + i % 3, 1 + (i / 3) % 3, 1 + (i / 9) % 3)
}

/// `n` seeded flat instances cycling through all dimension triples.
pub fn seeded(n: u64) -> Vec<SuperData> {
    (0..n).map(|i| models::random_flat_instance(1000 + i, dims(i)).unwrap()).collect()
}

/// Named point-case examples.
pub fn named() -> Vec<SuperData> {
    let aff1 = Arc::new(models::aff1());
    let sl2 = Arc::new(models::sl2());
    vec![
        models::aff1_type1().unwrap(),
        models::aff1_lambda(q(1)).unwrap(),
        models::aff1_vacant(q(2)).unwrap(),
        models::abelian_type0(q(1)).unwrap(),
        models::adjoint_point_model(&aff1).unwrap(),
        models::adjoint_point_model(&sl2).unwrap(),
    ]
}

/// `aff(1) ⊕ ℚ` with `[e₁, e₂] = e₂`.
pub fn aff1_plus_line() -> Arc<Algebroid> {
    Arc::new(models::aff1().lie_direct_sum(&models::abelian(1)).unwrap())
}

fn bump(m: &Matrix, i: usize, j: usize, by: &Scalar) -> Matrix {
    let mut out = m.clone();
    out[(i, j)] += by;
    out
}

/// Every place a single entry of the 4-tuple can be changed, as
/// `(component, slot, row, col)`.
pub fn entries(data: &SuperData) -> Vec<(usize, usize, usize, usize)> {
    let (a, e, c) = data.dims();
    let mut out = Vec::new();
    for i in 0..e {
        for j in 0..c {
            out.push((0, 0, i, j));
        }
    }
    for x in 0..a {
        for i in 0..c {
            for j in 0..c {
                out.push((1, x, i, j));
            }
        }
        for i in 0..e {
            for j in 0..e {
                out.push((2, x, i, j));
            }
        }
    }
    for r in 0..binomial(a, 2) {
        for i in 0..c {
            for j in 0..e {
                out.push((3, r, i, j));
            }
        }
    }
    out
}

/// The data with one entry increased by `by`.
pub fn perturb(data: &SuperData, at: (usize, usize, usize, usize), by: &Scalar) -> SuperData {
    let (comp, slot, i, j) = at;
    match comp {
        0 => data.with_core_anchor(bump(data.core_anchor(), i, j, by)).unwrap(),
        1 => {
            let mut n = data.nabla_c().nabla().to_vec();
            n[slot] = bump(&n[slot], i, j, by);
            data.with_nabla_c(n).unwrap()
        }
        2 => {
            let mut n = data.nabla_s().nabla().to_vec();
            n[slot] = bump(&n[slot], i, j, by);
            data.with_nabla_s(n).unwrap()
        }
        _ => {
            let om = data.omega();
            let (rows, cols) = om.shape();
            let mut vals = om.values().to_vec();
            vals[slot] = bump(&vals[slot], i, j, by);
            data.with_omega(HomForm::from_values(2, om.dim_a(), rows, cols, vals).unwrap()).unwrap()
        }
    }
}

/// A random single-entry perturbation by a nonzero amount.
pub fn random_perturbation(rng: &mut ChaCha8Rng, data: &SuperData) -> SuperData {
    let spots = entries(data);
    let at = spots[rng.gen_range(0..spots.len())];
    let by = q([-2, -1, 1, 2][rng.gen_range(0..4)]);
    perturb(data, at, &by)
}

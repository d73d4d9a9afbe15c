mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbalg_core::chern_simons::*;
use vbalg_core::forms::increasing_tuples;
use vbalg_core::linalg::Matrix;
use vbalg_core::models;
use vbalg_core::ring::RModule;
use vbalg_core::scalar::{q, qr, Scalar};
use vbalg_core::superalg::{Ctx, MixedForm, SuperEnd, TiForm};
use vbalg_core::superconn::SuperData;

use common::oracle;

fn by_mask(f: &MixedForm) -> BTreeMap<u32, Scalar> {
    let mut out = BTreeMap::new();
    for p in 0..=f.dim_a() {
        for (r, t) in increasing_tuples(f.dim_a(), p).iter().enumerate() {
            let v = &f.component(p).value(r)[0];
            if *v != q(0) {
                out.insert(t.iter().fold(0u32, |m, &i| m | (1 << i)), v.clone());
            }
        }
    }
    out
}

fn agree(data: &SuperData, g: &GradedMetric, k: usize) -> BTreeMap<u32, Scalar> {
    let ours = by_mask(&cs_form(data, g, k).unwrap());
    let theirs = oracle::cs(data, &g.matrix(), k);
    assert_eq!(ours, theirs, "k = {k}");
    ours
}

fn samples() -> Vec<SuperData> {
    let alg = Arc::new(models::aff1());
    vec![
        models::aff1_vacant(q(3)).unwrap(),
        models::aff1_lambda(qr(1, 2)).unwrap(),
        models::aff1_type1().unwrap(),
        models::abelian_type0(q(2)).unwrap(),
        models::adjoint_point_model(&alg).unwrap(),
        models::random_flat_instance(3, (2, 2, 1)).unwrap(),
        models::random_flat_instance(8, (2, 1, 2)).unwrap(),
        models::random_flat_instance(21, (2, 2, 2)).unwrap(),
    ]
}

#[test]
fn engine_matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in samples() {
        for k in 1..=3 {
            agree(&d, &GradedMetric::identity(&d), k);
            agree(&d, &GradedMetric::random(&mut rng, &d), k);
        }
    }
}

#[test]
fn golden_values() {
    let alg = Arc::new(models::aff1());
    let id = |d: &SuperData| GradedMetric::identity(d);
    for lam in [q(0), q(1), qr(-3, 2)] {
        let d = models::aff1_lambda(lam.clone()).unwrap();
        assert!(agree(&d, &id(&d), 1).is_empty());
        let v = models::aff1_vacant(lam.clone()).unwrap();
        let expected: BTreeMap<u32, Scalar> =
            if lam == q(0) { BTreeMap::new() } else { [(1u32, q(2) * lam)].into_iter().collect() };
        assert_eq!(agree(&v, &id(&v), 1), expected);
    }
    let d = models::adjoint_point_model(&alg).unwrap();
    assert_eq!(agree(&d, &id(&d), 1), [(1u32, q(-2))].into_iter().collect());
    let sl2 = Arc::new(models::sl2());
    let d = models::adjoint_point_model(&sl2).unwrap();
    assert!(by_mask(&cs_form(&d, &id(&d), 1).unwrap()).is_empty());
}

fn five_dim_instance() -> SuperData {
    let alg = Arc::new(models::sl2().lie_direct_sum(&models::aff1()).unwrap());
    models::adjoint_point_model(&alg).unwrap()
}

#[test]
fn remark_formula_ratio_is_one_for_k1() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    for d in samples() {
        let g = GradedMetric::random(&mut rng, &d);
        let cs = cs_form(&d, &g, 1).unwrap();
        let w = cs_closed_form_remark(&d, &g, 1).unwrap();
        if cs.is_zero() {
            assert!(w.is_zero());
        } else {
            assert_eq!(w.ratio_to(&cs), Some(q(1)));
            seen += 1;
        }
    }
    assert!(seen >= 3);
}

#[test]
fn remark_formula_ratio_is_ten_for_k3() {
    let d = five_dim_instance();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seen = 0;
    for _ in 0..5 {
        let g = GradedMetric::random(&mut rng, &d);
        let cs = cs_form(&d, &g, 3).unwrap();
        let w = cs_closed_form_remark(&d, &g, 3).unwrap();
        if cs.is_zero() {
            assert!(w.is_zero());
        } else {
            assert_eq!(cs.support(), vec![5]);
            assert_eq!(w.ratio_to(&cs), Some(q(10)));
            seen += 1;
        }
    }
    assert!(seen >= 3);
}

#[test]
fn even_k_vanishes_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut all = samples();
    all.push(five_dim_instance());
    for d in all {
        let g = GradedMetric::random(&mut rng, &d);
        assert!(cs_form(&d, &g, 2).unwrap().is_zero());
        assert!(cs_closed_form_remark(&d, &g, 2).unwrap().is_zero());
    }
}

#[test]
fn zero_data_gives_zero_everywhere() {
    let alg = Arc::new(models::aff1());
    let r = alg.ring().clone();
    let d = SuperData::zero(Arc::clone(&alg), RModule::free(Arc::clone(&r), 2), RModule::free(r, 1));
    let g = GradedMetric::identity(&d);
    assert!(adjoint_superconnection(&d).unwrap().eta().is_zero());
    assert_eq!(metric_transport(&d, &g).unwrap(), superconnection(&d).unwrap());
    for k in 1..=3 {
        assert!(cs_form(&d, &g, k).unwrap().is_zero());
        assert!(cs_closed_form_remark(&d, &g, k).unwrap().is_zero());
    }
}

fn antisymmetric_vacant() -> SuperData {
    let alg = Arc::new(models::abelian(2));
    let r = alg.ring().clone();
    let d = SuperData::zero(Arc::clone(&alg), RModule::free(Arc::clone(&r), 2), RModule::free(r, 0));
    d.with_nabla_s(vec![Matrix::from_i64(&[&[0, 1], &[-1, 0]]), Matrix::from_i64(&[&[0, 2], &[-2, 0]])]).unwrap()
}

#[test]
fn self_adjoint_data_has_vanishing_cs() {
    let d = antisymmetric_vacant();
    let g = GradedMetric::identity(&d);
    assert_eq!(metric_transport(&d, &g).unwrap(), superconnection(&d).unwrap());
    let t = transgression(&d, &g).unwrap();
    assert!(t.square().is_zero());
    for k in 1..=3 {
        assert!(cs_form(&d, &g, k).unwrap().is_zero());
    }
}

#[test]
fn scalar_grams_give_the_same_transport() {
    for d in samples() {
        let g1 = GradedMetric::identity(&d);
        let (e, c) = (d.side().dim(), d.core().dim());
        let g2 = GradedMetric::new(Matrix::scalar(e, q(2)), Matrix::scalar(c, q(2))).unwrap();
        assert_eq!(metric_transport(&d, &g1).unwrap(), metric_transport(&d, &g2).unwrap());
    }
}

#[test]
fn invalid_metrics_are_rejected() {
    let bad = Matrix::from_i64(&[&[1, 2], &[0, 1]]);
    assert!(GradedMetric::new(bad, Matrix::identity(1)).is_err());
    let singular = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
    assert!(GradedMetric::new(singular, Matrix::identity(1)).is_err());
}

#[test]
fn vacant_adjoint_is_the_dual_representation() {
    let d = models::aff1_vacant(q(3)).unwrap();
    let dag = adjoint_superconnection(&d).unwrap();
    let (_, dual) = d.nabla_s().dual().unwrap();
    let mut expected = SuperEnd::zero(dag.ctx());
    for (i, m) in dual.nabla().iter().enumerate() {
        if !m.is_zero() {
            expected.add_term((1 << (i + 1), 0), m, &q(1));
        }
    }
    assert_eq!(dag.eta(), &expected);
}

#[test]
fn type1_adjoint_squares_to_zero() {
    let d = models::aff1_type1().unwrap();
    assert!(adjoint_superconnection(&d).unwrap().is_flat());
}

#[test]
fn transgression_endpoints_and_cross_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for d in samples() {
        let g = GradedMetric::random(&mut rng, &d);
        let t = transgression(&d, &g).unwrap();
        let eta = superconnection(&d).unwrap().eta().clone();
        let geta = metric_transport(&d, &g).unwrap().eta().clone();
        assert_eq!(t.at(&q(1)), eta);
        assert_eq!(t.at(&q(0)), geta);
        let sq = t.square();
        let diff = eta.sub(&geta);
        let mut dotted = SuperEnd::zero(eta.ctx());
        for (&(m, n), x) in sq.terms() {
            if m & 1 == 1 {
                dotted.add_term((m & !1, n), x, &q(1));
            }
        }
        assert_eq!(dotted, diff);
    }
}

#[test]
fn supertrace_of_identity_is_graded_dimension() {
    let d = models::aff1_lambda(q(1)).unwrap();
    let ctx = superconnection(&d).unwrap().ctx().clone();
    assert!(supertrace(&SuperEnd::identity(&ctx)).is_zero());
    let d = models::aff1_type1().unwrap();
    let ctx = superconnection(&d).unwrap().ctx().clone();
    let anti = SuperEnd::term(&ctx, (0, 0), Matrix::from_i64(&[&[0, 3], &[5, 0]]));
    assert!(supertrace(&anti).is_zero());
}

/// Random element with terms of the given total parity.
fn random_end(rng: &mut ChaCha8Rng, ctx: &Arc<Ctx>, odd: bool) -> SuperEnd {
    let n = ctx.n();
    let mut out = SuperEnd::zero(ctx);
    for mask in 0u32..(1 << ctx.a) {
        let form_odd = mask.count_ones() % 2 == 1;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let block_odd = (i < ctx.e) != (j < ctx.e);
                if block_odd == (odd != form_odd) {
                    m[(i, j)] = q(rng.gen_range(-2..=2));
                }
            }
        }
        out.add_term((mask << 1, 0), &m, &q(1));
    }
    out
}

#[test]
fn supertrace_of_bracket_with_superconnection_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in samples() {
        let eta = superconnection(&d).unwrap().eta().clone();
        for odd in [false, true] {
            let theta = random_end(&mut rng, eta.ctx(), odd);
            let bracket = theta.d().add(&eta.supercommutator(&theta));
            assert_eq!(supertrace(&bracket), supertrace(&theta).d());
        }
    }
}

#[test]
fn chern_lemma_sign_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for d in samples() {
        let ctx = superconnection(&d).unwrap().ctx().clone();
        let g = GradedMetric::random(&mut rng, &d);
        let eta = random_end(&mut rng, &ctx, true);
        let geta = metric_adjoint(&eta, &g);
        let f = vbalg_core::superalg::curvature(&eta);
        let fg = vbalg_core::superalg::curvature(&geta);
        for k in 1..=3 {
            let lhs = supertrace(&f.pow(k));
            let rhs = supertrace(&fg.pow(k));
            let rhs = if k % 2 == 1 { TiForm::zero(&ctx).minus(&rhs) } else { rhs };
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }
}

#[test]
fn fundamental_theorem_of_calculus_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in samples() {
        let ctx = superconnection(&d).unwrap().ctx().clone();
        let t = Transgression::between(random_end(&mut rng, &ctx, true), random_end(&mut rng, &ctx, true));
        for k in 1..=3 {
            let x = t.supertrace_power(k);
            assert!(x.d().is_zero());
            let lhs = x.eval_even(&q(1)).sub(&x.eval_even(&q(0)));
            let cs = x.berezin();
            assert!(verify_primitive(&d, &cs, &lhs).unwrap(), "k = {k}");
        }
    }
}

#[test]
fn comparison_operator_is_self_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for d in samples() {
        let o = self_adjoint_comparison(&d).unwrap();
        let g = GradedMetric::random(&mut rng, &d);
        assert_eq!(&metric_adjoint(o.eta(), &g), o.eta());
        let dd = superconnection(&d).unwrap();
        let t = Transgression::between(o.eta().clone(), dd.eta().clone());
        for k in [1, 3] {
            let x = t.supertrace_power(k);
            let lhs = x.eval_even(&q(1)).sub(&x.eval_even(&q(0)));
            assert!(verify_primitive(&d, &x.berezin(), &lhs).unwrap());
        }
    }
}

#[test]
fn class_is_independent_of_metric_and_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut all = samples();
    all.push(five_dim_instance());
    for d in all {
        for k in [1, 3] {
            let c1 = cs_class(&d, &GradedMetric::random(&mut rng, &d), k).unwrap();
            let c2 = cs_class(&d, &GradedMetric::random(&mut rng, &d), k).unwrap();
            let cert = c1.equality_certificate(&d, &c2).unwrap().expect("metric independence");
            assert!(verify_primitive(&d, &cert, &c2.form.sub(&c1.form)).unwrap());
            let sigma = models::random_sigma(&mut rng, &d);
            let dg = d.gauge_transform(&sigma).unwrap();
            let c3 = cs_class(&dg, &GradedMetric::identity(&dg), k).unwrap();
            let cert = c1.equality_certificate(&d, &c3).unwrap().expect("gauge independence");
            assert!(verify_primitive(&d, &cert, &c3.form.sub(&c1.form)).unwrap());
        }
    }
}

#[test]
fn scrambled_type1_has_the_class_of_the_original() {
    let d = models::aff1_type1().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let sigma = models::random_sigma(&mut rng, &d);
    let s = d.gauge_transform(&sigma).unwrap();
    let c1 = cs_class(&d, &GradedMetric::identity(&d), 1).unwrap();
    let c2 = cs_class(&s, &GradedMetric::identity(&s), 1).unwrap();
    assert!(c1.equality_certificate(&d, &c2).unwrap().is_some());
}

#[test]
fn class_components_outside_the_top_degree_are_certified_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for d in samples() {
        let c = cs_class(&d, &GradedMetric::random(&mut rng, &d), 1).unwrap();
        let rest = c.form.sub(
            &MixedForm::from_components(
                (0..=c.form.dim_a())
                    .map(|p| {
                        if p == 1 {
                            c.representative.clone()
                        } else {
                            vbalg_core::forms::Form::zero(p, c.form.dim_a(), 1)
                        }
                    })
                    .collect(),
            )
            .unwrap(),
        );
        assert!(verify_primitive(&d, &c.other_degrees_primitive, &rest).unwrap());
    }
}

#[test]
fn class_is_additive_over_direct_sums() {
    let d1 = models::aff1_vacant(q(3)).unwrap();
    let alg = Arc::new(models::aff1());
    let d2 = models::adjoint_point_model(&alg).unwrap();
    let s = d1.direct_sum(&d2).unwrap();
    let cs = |d: &SuperData| cs_form(d, &GradedMetric::identity(d), 1).unwrap();
    assert_eq!(cs(&s), cs(&d1).add(&cs(&d2)));
}

#[test]
fn vacant_class_is_the_representation_class() {
    let d = models::aff1_vacant(q(5)).unwrap();
    let c = cs_class(&d, &GradedMetric::identity(&d), 1).unwrap();
    assert_eq!(c.representative.data(), &[q(10), q(0)]);
    assert!(!c.is_zero(&d).unwrap());
}

#[test]
fn non_flat_data_is_rejected() {
    let d = models::aff1_type1().unwrap();
    let bent = d.with_core_anchor(Matrix::from_i64(&[&[2]])).unwrap();
    let g = GradedMetric::identity(&bent);
    assert!(matches!(cs_form(&bent, &g, 1), Err(vbalg_core::Error::NotFlat(_))));
    assert!(adjoint_superconnection(&bent).is_err());
    let r = dual_differential_check(&bent).unwrap();
    assert!(!r.square_zero);
    assert!(r.report.has("dual-square"));
}

#[test]
fn dual_differential_matches_flatness_on_random_instances() {
    for seed in 0..6 {
        let d = models::random_flat_instance(seed, (2, 2, 2)).unwrap();
        let r = dual_differential_check(&d).unwrap();
        assert!(r.report.is_ok() && r.square_zero);
    }
}

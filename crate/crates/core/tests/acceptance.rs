//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbalg_core::algebroid::Connection;
use vbalg_core::chern_simons::{cs_class, cs_closed_form_remark, cs_form, verify_primitive, GradedMetric};
use vbalg_core::classify::{
    build_type1, extract_omega, isomorphic, normal_form, normal_form_with, regularity, ClassifyingTuple, Distinction,
    IsoVerdict,
};
use vbalg_core::forms::increasing_tuples;
use vbalg_core::linalg::ComplementOrder;
use vbalg_core::models;
use vbalg_core::ring::RModule;
use vbalg_core::scalar::{q, Scalar};
use vbalg_core::superalg::MixedForm;
use vbalg_core::superconn::{Op, SuperData};

use common::instances;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, summary: String) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:.2?}, limit {limit:?}");
    Ok(format!("{summary} in {t:.2?}"))
}

/// Flatness conditions hold iff `D² = 0`, on seeded instances and on every
/// single-entry perturbation of them.
fn flatness_equivalence() -> Outcome {
    let start = Instant::now();
    let corpus = instances::seeded(54);
    let mut negatives = 0;
    let mut checked = 0;
    for (i, d) in corpus.iter().enumerate() {
        ensure!(d.algebroid().dim() <= 3, "instance {i} has dim A > 3");
        ensure!(d.conditions_report().is_ok() && d.d_squared_vanishes(), "instance {i} is not flat");
        for at in instances::entries(d) {
            for by in [q(1), q(-2)] {
                let p = instances::perturb(d, at, &by);
                let conds = p.conditions_report().is_ok();
                let square = p.d_squared_vanishes();
                ensure!(conds == square, "instance {i}, entry {at:?}: conditions {conds}, D² = 0 {square}");
                checked += 1;
                if !conds {
                    negatives += 1;
                }
            }
        }
    }
    ensure!(negatives >= 50, "only {negatives} non-flat perturbations");
    within(
        start,
        Duration::from_secs(10),
        format!("{} instances, {checked} perturbations ({negatives} non-flat)", corpus.len()),
    )
}

/// `gauge_transform = gauge_transform_exp` and `[σ,[σ,[σ,D]]] = 0`.
fn gauge_consistency() -> Outcome {
    let start = Instant::now();
    let corpus = instances::seeded(54);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (i, d) in corpus.iter().enumerate() {
        let sigma = models::random_sigma(&mut rng, d);
        let closed = d.gauge_transform(&sigma).map_err(|e| format!("instance {i}: {e}"))?;
        let exp = d.gauge_transform_exp(&sigma).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(closed == exp, "instance {i}: the two gauge transforms differ");
        let s = Op::Sigma(&sigma);
        let c3 = Op::commutator(s.clone(), Op::commutator(s.clone(), Op::commutator(s, Op::D(d))));
        ensure!(d.spanning_set().iter().all(|v| c3.apply(v).is_zero()), "instance {i}: [σ,[σ,[σ,D]]] ≠ 0");
    }
    within(start, Duration::from_secs(10), format!("{} (instance, σ) pairs", corpus.len()))
}

fn five_dim_adjoint() -> SuperData {
    let alg = Arc::new(models::sl2().lie_direct_sum(&models::aff1()).unwrap());
    models::adjoint_point_model(&alg).unwrap()
}

/// The flat instances used by the Chern–Simons criteria.
fn cs_corpus() -> Vec<SuperData> {
    let mut out = instances::named();
    out.extend(instances::seeded(27));
    out.push(five_dim_adjoint());
    out
}

fn without_degree(f: &MixedForm, deg: usize) -> MixedForm {
    let a = f.dim_a();
    let comps = (0..=a).map(|p| if p == deg { vbalg_core::forms::Form::zero(p, a, 1) } else { f.component(p).clone() });
    MixedForm::from_components(comps.collect()).unwrap()
}

/// Closedness, vanishing for even `k`, exactness off the top degree and
/// certified metric and gauge independence.
fn chern_simons_suite() -> Outcome {
    let start = Instant::now();
    let corpus = cs_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let triv_closed = |d: &SuperData, f: &MixedForm| {
        let triv = d.algebroid().trivial_connection();
        f.components().iter().all(|w| vbalg_core::forms::cartan(&triv, w).is_zero())
    };
    let mut certificates = 0;
    for (i, d) in corpus.iter().enumerate() {
        for k in 1..=3 {
            let base = cs_class(d, &GradedMetric::identity(d), k).map_err(|e| format!("instance {i}, k {k}: {e}"))?;
            ensure!(triv_closed(d, &base.form), "instance {i}, k {k}: cs not closed");
            if k == 2 {
                ensure!(base.form.is_zero(), "instance {i}: cs₂ ≠ 0");
                continue;
            }
            let rest = without_degree(&base.form, 2 * k - 1);
            ensure!(
                verify_primitive(d, &base.other_degrees_primitive, &rest).unwrap(),
                "instance {i}, k {k}: components off degree {} not certified exact",
                2 * k - 1
            );
            for _ in 0..3 {
                let g = GradedMetric::random(&mut rng, d);
                let other = cs_class(d, &g, k).unwrap();
                ensure!(triv_closed(d, &other.form), "instance {i}, k {k}: cs not closed for a random metric");
                let eta = base.equality_certificate(d, &other).unwrap();
                let Some(eta) = eta else { return Err(format!("instance {i}, k {k}: metric changes the class")) };
                ensure!(verify_primitive(d, &eta, &other.form.sub(&base.form)).unwrap(), "bad metric certificate");
                certificates += 1;
            }
            for _ in 0..3 {
                let sigma = models::random_sigma(&mut rng, d);
                let dg = d.gauge_transform(&sigma).unwrap();
                let other = cs_class(&dg, &GradedMetric::random(&mut rng, &dg), k).unwrap();
                let eta = base.equality_certificate(d, &other).unwrap();
                let Some(eta) = eta else { return Err(format!("instance {i}, k {k}: gauge changes the class")) };
                ensure!(verify_primitive(d, &eta, &other.form.sub(&base.form)).unwrap(), "bad gauge certificate");
                certificates += 1;
            }
        }
    }
    within(start, Duration::from_secs(60), format!("{} instances, {certificates} certificates", corpus.len()))
}

/// `cs_closed_form_remark / cs_form` is one constant per `k`.
fn remark_ratio() -> Outcome {
    let start = Instant::now();
    let corpus = cs_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut found = Vec::new();
    for k in [1, 3] {
        let mut ratio: Option<Scalar> = None;
        let mut nonzero = 0;
        for (i, d) in corpus.iter().enumerate() {
            let mut metrics = vec![GradedMetric::identity(d)];
            metrics.extend((0..3).map(|_| GradedMetric::random(&mut rng, d)));
            for g in metrics {
                let cs = cs_form(d, &g, k).unwrap();
                let w = cs_closed_form_remark(d, &g, k).unwrap();
                if cs.is_zero() || w.is_zero() {
                    ensure!(cs.is_zero() == w.is_zero(), "instance {i}, k {k}: only one side vanishes");
                    continue;
                }
                let Some(r) = w.ratio_to(&cs) else { return Err(format!("instance {i}, k {k}: not proportional")) };
                match &ratio {
                    Some(r0) => ensure!(*r0 == r, "instance {i}, k {k}: ratio {r} ≠ {r0}"),
                    None => ratio = Some(r),
                }
                nonzero += 1;
            }
        }
        let Some(r) = ratio else { return Err(format!("k {k}: no instance with nonzero cs")) };
        found.push(format!("k={k}: {r} on {nonzero}"));
    }
    within(start, Duration::from_secs(30), format!("ratios {}", found.join(", ")))
}

fn same_tuple(t1: &ClassifyingTuple, t2: &ClassifyingTuple) -> bool {
    t1.rank == t2.rank
        && t1.nabla_k == t2.nabla_k
        && t1.nabla_nu == t2.nabla_nu
        && t1.omega.difference_primitive(&t2.omega).unwrap().is_some()
}

/// Normal-form round trip, tuple invariance, type-1 uniqueness and type-0
/// non-isomorphism.
fn classification() -> Outcome {
    let start = Instant::now();
    let corpus = instances::seeded(54);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, d) in corpus.iter().enumerate() {
        let nf = normal_form(d).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(nf.verify(d).unwrap(), "instance {i}: reassembly is not the gauged input");
        let high = normal_form_with(d, ComplementOrder::HighestFirst).unwrap();
        ensure!(high.verify(d).unwrap(), "instance {i}: reassembly fails for the second splitting");
        ensure!(same_tuple(&nf.tuple, &high.tuple), "instance {i}: the two splittings give different tuples");
        for _ in 0..2 {
            let s = d.gauge_transform(&models::random_sigma(&mut rng, d)).unwrap();
            ensure!(same_tuple(&nf.tuple, &normal_form(&s).unwrap().tuple), "instance {i}: scramble changes the tuple");
        }
    }
    let mut type1 = 0;
    for alg in [Arc::new(models::aff1()), Arc::new(models::sl2()), instances::aff1_plus_line()] {
        for n in 1..=2 {
            let m = RModule::free(Arc::clone(alg.ring()), n);
            let builds: Vec<SuperData> = (0..3)
                .map(|_| {
                    let nabla = (0..alg.dim()).map(|_| models::random_unimodular(&mut rng, n)).collect();
                    build_type1(&alg, &m, &Connection::new(Arc::clone(&alg), m.clone(), nabla).unwrap()).unwrap()
                })
                .collect();
            for x in &builds {
                for y in &builds {
                    let IsoVerdict::Isomorphic(cert) = isomorphic(x, y).unwrap() else {
                        return Err("two type-1 builds reported distinct".into());
                    };
                    ensure!(cert.verify(x, y).unwrap(), "type-1 certificate does not verify");
                    type1 += 1;
                }
            }
        }
    }
    let mut type0 = 0;
    let cs: Vec<i64> = vec![0, 1, 2, -1, 3];
    for &c1 in &cs {
        for &c2 in &cs {
            let d1 = models::abelian_type0(q(c1)).unwrap();
            let d2 = models::abelian_type0(q(c2)).unwrap();
            let split = regularity(&d1).unwrap().unwrap();
            let w1 = extract_omega(&d1, &split).unwrap();
            let w2 = extract_omega(&d2, &regularity(&d2).unwrap().unwrap()).unwrap();
            let distinct_classes = w1.difference_primitive(&w2).unwrap().is_none();
            ensure!(distinct_classes == (c1 != c2), "class comparison wrong for {c1}, {c2}");
            match isomorphic(&d1, &d2).unwrap() {
                IsoVerdict::Distinct(Distinction::OmegaClass) if distinct_classes => type0 += 1,
                IsoVerdict::Isomorphic(_) if !distinct_classes => {}
                v => return Err(format!("type-0 pair {c1}, {c2}: unexpected verdict {v:?}")),
            }
        }
    }
    within(
        start,
        Duration::from_secs(30),
        format!("{} round trips, {type1} type-1 pairs, {type0} distinct type-0 pairs", corpus.len()),
    )
}

/// `[Ω]` for the ρ = 0 adjoint model: zero for the constant bracket, nonzero
/// for the `(1 + x)`-scaled bracket over `ℚ[x]/(x²)`.
fn rho_zero_model() -> Outcome {
    let start = Instant::now();
    let class = |scale: [i64; 2]| {
        let d = models::scaled_aff1_rho_zero(scale).unwrap();
        let split = regularity(&d).unwrap().expect("type-0 data is regular");
        extract_omega(&d, &split).unwrap()
    };
    let constant = class([1, 0]);
    ensure!(constant.primitive().unwrap().is_some(), "constant family: [Ω] ≠ 0");
    let scaled = class([1, 1]);
    ensure!(!scaled.omega.is_zero(), "(1 + x) family: Ω = 0");
    if let Some(tau) = scaled.primitive().unwrap() {
        let tau_values: Vec<String> = tau.values().iter().map(|m| format!("{m:?}")).collect();
        return Err(format!("(1 + x) family: [Ω] = 0, exactness certificate τ = {}", tau_values.join(", ")));
    }
    within(start, Duration::from_secs(10), "constant [Ω] = 0, (1 + x)-scaled [Ω] ≠ 0".into())
}

fn cs1_by_tuple(d: &SuperData) -> Vec<(Vec<usize>, Scalar)> {
    let f = cs_form(d, &GradedMetric::identity(d), 1).unwrap();
    let mut out = Vec::new();
    for p in 0..=f.dim_a() {
        for (r, t) in increasing_tuples(f.dim_a(), p).into_iter().enumerate() {
            let v = f.component(p).value(r)[0].clone();
            if v != q(0) {
                out.push((t, v));
            }
        }
    }
    out
}

/// Frozen oracle values of `cs₁` with identity metrics.
fn golden_values() -> Outcome {
    let start = Instant::now();
    let aff1 = models::aff1_lambda(q(1)).unwrap();
    ensure!(cs1_by_tuple(&aff1).is_empty(), "aff(1), λ = 1: {:?}", cs1_by_tuple(&aff1));
    let vacant = models::aff1_vacant(q(1)).unwrap();
    ensure!(cs1_by_tuple(&vacant) == vec![(vec![0], q(2))], "aff(1) vacant: {:?}", cs1_by_tuple(&vacant));
    let adj = models::adjoint_point_model(&Arc::new(models::aff1())).unwrap();
    ensure!(cs1_by_tuple(&adj) == vec![(vec![0], q(-2))], "adjoint aff(1): {:?}", cs1_by_tuple(&adj));
    let sl2 = models::adjoint_point_model(&Arc::new(models::sl2())).unwrap();
    ensure!(cs1_by_tuple(&sl2).is_empty(), "adjoint sl(2): {:?}", cs1_by_tuple(&sl2));
    within(start, Duration::from_secs(10), "4 golden cs₁ values reproduced".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("flatness equivalence", flatness_equivalence),
        ("gauge consistency", gauge_consistency),
        ("Chern–Simons suite", chern_simons_suite),
        ("remark ratio", remark_ratio),
        ("classification", classification),
        ("ρ = 0 adjoint model", rho_zero_model),
        ("golden values", golden_values),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

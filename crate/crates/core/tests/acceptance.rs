//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Real-data criteria read from `$JFW_DATA_DIR` (default: `data/` at the
//! workspace root); see `scripts/fetch_datasets.py`.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use jacobi_fw::cli::{self, ExperimentConfig, RunSummary};
use jacobi_fw::data::{self, SyntheticProblem};
use jacobi_fw::linalg::{self, DenseMatrix, DenseVector};
use jacobi_fw::objectives::{
    self, HuberRidgeObjective, LinearObjective, LogisticObjective, MatrixCompletionObjective, Objective,
};
use jacobi_fw::oracles::{self, ConstraintSet};
use jacobi_fw::polynomials::{self, JacobiParams, NormOrder};
use jacobi_fw::solvers::{self, Method, SolverConfig, SolverRun, StopReason};
use jacobi_fw::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const IDENTITY_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-8;
const ORTHO_NODES: usize = 64;
const FW_BOUND_SLACK: f64 = 1e-9;
const FW_SLOPE_MAX: f64 = -0.8;
const SLOPE_WINDOW: (usize, usize) = (100, 1000);
const SUITE_ITERS: usize = 1000;
const SUITE_SIZE: usize = 20;
const SUITE_REQUIRED: usize = 18;
const FD_REL_TOL: f64 = 1e-5;
const LMO_TOL: f64 = 1e-8;
const NUCLEAR_SVD_TOL: f64 = 1e-6;
const COEFF_SUM_TOL: f64 = 1e-12;
const MOVIELENS_DENSITY: f64 = 0.0630;
const MOVIELENS_DENSITY_TOL: f64 = 0.0001;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn criterion(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match result {
        Ok(o) => (o.pass, o.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, format!("panicked: {msg}"))
        }
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail.push_str(&format!("; exceeded time limit {:.0?}", limit));
        }
    }
    println!(
        "[{}] {:>2}. {} ({:.2}s): {}",
        if pass { "PASS" } else { "FAIL" },
        id,
        name,
        elapsed.as_secs_f64(),
        detail
    );
    pass
}

fn data_dir() -> PathBuf {
    std::env::var_os("JFW_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn dataset(name: &str) -> PathBuf {
    let p = data_dir().join(name);
    assert!(p.exists(), "{} not found; run `python3 scripts/fetch_datasets.py` or set JFW_DATA_DIR", p.display());
    p
}

fn vec_point(v: Vec<f64>) -> Point {
    Point::Vector(DenseVector::new(v).unwrap())
}

fn identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        // α ∈ (−0.9, 10], β ∈ (−0.9, α]
        let alpha = 10.0 - rng.gen_range(0.0..10.9);
        let beta = alpha - rng.gen_range(0.0..(alpha + 0.9));
        let p = JacobiParams::new(alpha, beta, 0.5).unwrap();
        for k in 0..=200 {
            let r = polynomials::recurrence_coeffs(&p, k).unwrap();
            worst = worst.max((r.a + r.b - r.c - 1.0).abs());
        }
    }
    Outcome::new(worst <= IDENTITY_TOL, format!("max |a+b-c-1| = {worst:.2e} (tol {IDENTITY_TOL:.0e})"))
}

fn orthogonality() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (a, b) in [(0.0, 0.0), (1.2, 1.2), (4.5, 4.5)] {
        let p = JacobiParams::new(a, b, 0.5).unwrap();
        let polys: Vec<_> = (0..=10).map(|k| polynomials::expand_coeffs(&p, k).unwrap()).collect();
        let mut w: f64 = 0.0;
        for i in 0..=10 {
            for j in (i + 1)..=10 {
                w = w.max(polynomials::weighted_inner(&polys[i], &polys[j], a, b, ORTHO_NODES).unwrap().abs());
            }
        }
        // cross-check the inner product against norm polarization for one pair
        let plus =
            polynomials::weighted_poly_norm(&polys[1].combine(1.0, &polys[2], 1.0), a, b, NormOrder::L2, ORTHO_NODES)
                .unwrap();
        let minus =
            polynomials::weighted_poly_norm(&polys[1].combine(1.0, &polys[2], -1.0), a, b, NormOrder::L2, ORTHO_NODES)
                .unwrap();
        w = w.max(((plus - minus) / 4.0).abs());
        parts.push(format!("({a},{b}): {w:.1e}"));
        worst = worst.max(w);
    }
    Outcome::new(worst <= ORTHO_TOL, format!("max |<J_i,J_j>| {} (tol {ORTHO_TOL:.0e})", parts.join(", ")))
}

struct SuiteInstance {
    problem: SyntheticProblem,
    interior: bool,
    fw: SolverRun,
    jfw: SolverRun,
}

/// Seeded synthetic suite: d ≤ 50, condition ≤ 100, alternating interior and boundary optima.
fn synthetic_suite() -> Vec<SuiteInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let jacobi = JacobiParams::new(1.2, 1.2, 2.0 / 3.0).unwrap();
    (0..SUITE_SIZE)
        .map(|i| {
            let d = rng.gen_range(2..=50);
            let condition = 10f64.powf(rng.gen_range(0.0..=2.0));
            let radius = rng.gen_range(0.5..5.0);
            let interior = i % 2 == 0;
            let problem = data::synth_quadratic(d, condition, radius, interior, rng.gen()).unwrap();
            let x0 = Point::zeros(problem.optimum.shape());
            let mut fw_cfg = SolverConfig::fw(SUITE_ITERS).with_reference(Some(problem.f_star));
            let mut jfw_cfg = SolverConfig::jfw(SUITE_ITERS, jacobi).with_reference(Some(problem.f_star));
            // run the full budget: the gap floor would cut the slope window short
            fw_cfg.gap_floor = 0.0;
            jfw_cfg.gap_floor = 0.0;
            let fw = solvers::run_fw(&problem.objective, &problem.set, &x0, &fw_cfg).unwrap();
            let jfw = solvers::run_jfw(&problem.objective, &problem.set, &x0, &jfw_cfg).unwrap();
            SuiteInstance { problem, interior, fw, jfw }
        })
        .collect()
}

fn fw_bound(suite: &[SuiteInstance]) -> Outcome {
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for inst in suite {
        let (l, d) = (inst.problem.smoothness, inst.problem.diameter);
        for r in &inst.fw.trace {
            let bound = solvers::gap_bound_fw(l, d, r.k);
            let sub = r.subopt.unwrap();
            worst_ratio = worst_ratio.max(sub / bound);
            if sub > bound + FW_BOUND_SLACK {
                violations += 1;
            }
        }
    }
    let lengths_ok = suite.iter().all(|s| s.fw.trace.len() == SUITE_ITERS + 1);
    Outcome::new(
        violations == 0 && lengths_ok,
        format!(
            "{violations} violations over k in [0, {SUITE_ITERS}] on {} instances; max subopt/bound = {worst_ratio:.3}",
            suite.len()
        ),
    )
}

fn rate_separation(suite: &[SuiteInstance]) -> Outcome {
    let (kmin, kmax) = SLOPE_WINDOW;
    let mut fw_ok = 0;
    let mut jfw_ok = 0;
    let mut rows = Vec::new();
    for (i, inst) in suite.iter().enumerate() {
        let sf = cli::rate_slope(&inst.fw.trace, kmin, kmax);
        let sj = cli::rate_slope(&inst.jfw.trace, kmin, kmax);
        let ff = inst.fw.trace.last().unwrap().subopt.unwrap();
        let fj = inst.jfw.trace.last().unwrap().subopt.unwrap();
        let (sf, sj) = match (sf, sj) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                rows.push(format!("#{i}: slope error {a:?} / {b:?}"));
                continue;
            }
        };
        if sf <= FW_SLOPE_MAX {
            fw_ok += 1;
        }
        let ok = sj < sf && fj <= 0.5 * ff;
        if ok {
            jfw_ok += 1;
        }
        rows.push(format!(
            "#{i}{}: fw {sf:.2} jfw {sj:.2} ratio {:.2}",
            if inst.interior { "i" } else { "b" },
            fj / ff
        ));
    }
    let pass = fw_ok == suite.len() && jfw_ok >= SUITE_REQUIRED;
    Outcome::new(
        pass,
        format!(
            "FW slope <= {FW_SLOPE_MAX} on {fw_ok}/{}; JFW faster with half the final subopt on {jfw_ok}/{} (need {SUITE_REQUIRED}) [{}]",
            suite.len(),
            suite.len(),
            rows.join("; ")
        ),
    )
}

fn central_difference(obj: &dyn Objective, x: &Point) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.as_slice().len());
    for i in 0..x.as_slice().len() {
        let h = 1e-6 * x.as_slice()[i].abs().max(1.0);
        let mut plus = x.clone();
        plus.as_mut_slice()[i] += h;
        let mut minus = x.clone();
        minus.as_mut_slice()[i] -= h;
        out.push((obj.value(&plus).unwrap() - obj.value(&minus).unwrap()) / (2.0 * h));
    }
    out
}

fn gradient_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gauss = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
    let a = DenseMatrix::from_fn(40, 6, |_, _| gauss(&mut rng));
    let labels: Vec<f64> = (0..40).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let targets: Vec<f64> = (0..40).map(|_| 2.0 * gauss(&mut rng)).collect();
    let mut observed = Vec::new();
    for i in 0..8 {
        for j in 0..7 {
            if rng.gen_bool(0.6) {
                observed.push((i, j, rng.gen_range(1..=5) as f64));
            }
        }
    }
    let quad = data::synth_quadratic(6, 30.0, 1.0, false, 9).unwrap();
    let lin = LinearObjective::new(vec_point((0..6).map(|_| gauss(&mut rng)).collect()));
    let objs: Vec<(&str, Box<dyn Objective>, f64)> = vec![
        ("logistic", Box::new(LogisticObjective::new(a.clone(), labels).unwrap()), 1.0),
        ("huber_ridge", Box::new(HuberRidgeObjective::new(a, targets, 0.5).unwrap()), 1.0),
        ("matrix_completion", Box::new(MatrixCompletionObjective::new(observed, (8, 7), 1.0).unwrap()), 3.0),
        ("quadratic", Box::new(quad.objective), 1.0),
        ("linear", Box::new(lin), 1.0),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, obj, scale) in &objs {
        let mut w: f64 = 0.0;
        for _ in 0..10 {
            let mut x = Point::zeros(obj.shape());
            x.as_mut_slice().iter_mut().for_each(|v| *v = scale * gauss(&mut rng));
            let g = obj.gradient(&x).unwrap();
            let fd = central_difference(obj.as_ref(), &x);
            let err = linalg::norm2(&fd.iter().zip(g.as_slice()).map(|(a, b)| a - b).collect::<Vec<_>>());
            w = w.max(err / g.norm().max(1e-12));
        }
        parts.push(format!("{name} {w:.1e}"));
        worst = worst.max(w);
    }
    Outcome::new(worst <= FD_REL_TOL, format!("max relative error: {}", parts.join(", ")))
}

/// Uniform-ish feasible point: a random boundary-normalized direction scaled into the ball.
fn feasible_point(set: &ConstraintSet, shape: jacobi_fw::Shape, rng: &mut ChaCha8Rng) -> Point {
    let r = set.radius();
    match shape {
        jacobi_fw::Shape::Vector(n) => {
            let v = vec_point((0..n).map(|_| rng.sample(StandardNormal)).collect());
            let (norm, _) = oracles::set_norm(set, &v).unwrap();
            v.scaled(r * rng.gen_range(0.0..=1.0) / norm)
        }
        jacobi_fw::Shape::Matrix(m, n) => {
            // convex combination of rank-one atoms r·u vᵀ with unit u, v
            let atoms = rng.gen_range(1..=5);
            let weights: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum::<f64>() / rng.gen_range(0.0..=1.0f64).max(1e-12);
            let mut x = DenseMatrix::zeros(m, n);
            for w in weights {
                let unit = |k: usize, rng: &mut ChaCha8Rng| {
                    let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                    let nv = linalg::norm2(&v);
                    DenseVector::new(v.into_iter().map(|e| e / nv).collect()).unwrap()
                };
                let atom = DenseMatrix::outer(&unit(m, rng), &unit(n, rng), r * w / total);
                x.as_mut_slice().iter_mut().zip(atom.as_slice()).for_each(|(a, b)| *a += b);
            }
            Point::Matrix(x)
        }
    }
}

fn lmo_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        (ConstraintSet::l2(3.0).unwrap(), jacobi_fw::Shape::Vector(10)),
        (ConstraintSet::l1(3.0).unwrap(), jacobi_fw::Shape::Vector(10)),
        (ConstraintSet::nuclear(2.0).unwrap(), jacobi_fw::Shape::Matrix(6, 5)),
    ];
    let mut failures = 0;
    let mut infeasible = 0;
    for (set, shape) in &cases {
        let points: Vec<Point> = (0..1000).map(|_| feasible_point(set, *shape, &mut rng)).collect();
        infeasible += points.iter().filter(|p| !oracles::contains(set, p, 1e-12)).count();
        for g_idx in 0..100 {
            let mut g = Point::zeros(*shape);
            g.as_mut_slice().iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
            let s = oracles::lmo(set, &g, 1e-12, g_idx).unwrap().point;
            let gs = g.inner(&s).unwrap();
            let slack = LMO_TOL * g.norm() * set.radius();
            failures += points.iter().filter(|v| gs > g.inner(v).unwrap() + slack).count();
        }
    }
    let mut worst_svd: f64 = 0.0;
    for t in 0..100u64 {
        let (m, n) = (rng.gen_range(1..=20), rng.gen_range(1..=20));
        let g = DenseMatrix::from_fn(m, n, |_, _| rng.sample(StandardNormal));
        let sigma = linalg::singular_values(&g)[0];
        let set = ConstraintSet::nuclear(2.5).unwrap();
        let s = oracles::lmo(&set, &Point::Matrix(g.clone()), 1e-12, t).unwrap().point;
        worst_svd = worst_svd.max((s.as_matrix().unwrap().inner(&g) + 2.5 * sigma).abs());
    }
    Outcome::new(
        failures == 0 && infeasible == 0 && worst_svd <= NUCLEAR_SVD_TOL,
        format!(
            "{failures} optimality violations over 3x100x1000 pairs ({infeasible} infeasible samples); \
             nuclear vs SVD max |<G,S> + R sigma_max| = {worst_svd:.1e} (tol {NUCLEAR_SVD_TOL:.0e})"
        ),
    )
}

fn huber_correctness() -> Outcome {
    let exact = objectives::huber(0.3, 0.5) == 0.09 && objectives::huber(1.0, 0.5) == 0.75;
    let mut worst_value: f64 = 0.0;
    let mut grad_jump: f64 = 0.0;
    for delta in [0.5f64, 1.0, 4.0, 0.013, 123.25] {
        for c in [delta, -delta] {
            let outside = if c > 0.0 { f64::from_bits(c.to_bits() + 1) } else { -f64::from_bits((-c).to_bits() + 1) };
            // jump relative to δ²: the true change over one ulp is ~2ε δ²
            worst_value = worst_value
                .max((objectives::huber(outside, delta) - objectives::huber(c, delta)).abs() / (delta * delta));
            grad_jump = grad_jump
                .max((objectives::huber_grad(outside, delta) - objectives::huber_grad(c, delta)).abs() / delta);
        }
    }
    let eps = f64::EPSILON;
    Outcome::new(
        exact && worst_value <= 4.0 * eps && grad_jump <= 4.0 * eps,
        format!(
            "H(0.3)={}, H(1)={} at delta=0.5; value jump {worst_value:.1e}·δ², gradient jump {grad_jump:.1e}·δ across |c|=δ",
            objectives::huber(0.3, 0.5),
            objectives::huber(1.0, 0.5)
        ),
    )
}

fn jfw_identities() -> Outcome {
    let problem = data::synth_quadratic(8, 20.0, 1.0, false, 3).unwrap();
    let x0 = Point::zeros(problem.optimum.shape());
    let mut worst: f64 = 0.0;
    let mut c0_ok = true;
    let mut steps = 0;
    for (a, b, g) in
        [(1.2, 1.2, 2.0 / 3.0), (4.5, 4.5, 2.0 / 3.0), (1450.0, 1450.0, 0.65), (3.0, 0.5, 0.2), (0.0, 0.0, 0.5)]
    {
        let p = JacobiParams::new(a, b, g).unwrap();
        c0_ok &= polynomials::recurrence_coeffs(&p, 0).unwrap().c == 0.0;
        let mut cfg = SolverConfig::jfw(300, p);
        cfg.gap_floor = 0.0;
        let run = solvers::run_jfw(&problem.objective, &problem.set, &x0, &cfg).unwrap();
        c0_ok &= run.jfw_steps.first().is_some_and(|s| s.coeffs.c == 0.0);
        for s in &run.jfw_steps {
            worst = worst.max((s.coefficient_sum() - 1.0).abs());
            steps += 1;
        }
    }
    let frozen = JacobiParams::new(2.0, 2.0, 1.0).unwrap();
    let run = solvers::run_jfw(&problem.objective, &problem.set, &x0, &SolverConfig::jfw(50, frozen)).unwrap();
    let frozen_ok =
        frozen.is_frozen() && run.stop == StopReason::FrozenConfig && run.x_final == x0 && !run.warnings.is_empty();
    let not_frozen = !JacobiParams::new(2.0, 2.0, 0.99).unwrap().is_frozen()
        && !JacobiParams::new(2.0, 1.0, 1.0).unwrap().is_frozen();
    Outcome::new(
        worst <= COEFF_SUM_TOL && c0_ok && frozen_ok && not_frozen,
        format!("max |coefficient sum - 1| = {worst:.1e} over {steps} steps; c_0 = 0: {c0_ok}; frozen detected: {frozen_ok}"),
    )
}

fn experiment_config(body: &str, out: &Path) -> ExperimentConfig {
    ExperimentConfig::from_toml(&format!("{body}\noutput_dir = {:?}\n", out.display().to_string())).unwrap()
}

fn breast_cancer_toml(max_iters: usize, multiplier: usize) -> String {
    format!(
        "task = \"logistic\"\ndataset_path = {:?}\nconstraint = \"l2\"\nradius = 50.0\nmethods = [\"fw\", \"jfw\"]\n\
         alpha = 1.2\nbeta = 1.2\ngamma = {}\nmax_iters = {max_iters}\nseed = 0\nreference = \"long_run\"\n\
         reference_multiplier = {multiplier}",
        dataset("breast-cancer-wisconsin.data").display().to_string(),
        2.0 / 3.0
    )
}

fn pima_toml(max_iters: usize, multiplier: usize) -> String {
    format!(
        "task = \"huber_ridge\"\ndataset_path = {:?}\nconstraint = \"l2\"\nradius = 35.0\nmethods = [\"fw\", \"jfw\"]\n\
         alpha = 1450.0\nbeta = 1450.0\ngamma = 0.65\ndelta = 0.5\nmax_iters = {max_iters}\nseed = 0\n\
         reference = \"long_run\"\nreference_multiplier = {multiplier}",
        dataset("pima-indians-diabetes.data").display().to_string()
    )
}

fn movielens_toml() -> String {
    format!(
        "task = \"matrix_completion\"\ndataset_path = {:?}\nconstraint = \"nuclear\"\nradius = 5.0\n\
         methods = [\"fw\", \"jfw\"]\nalpha = 4.5\nbeta = 4.5\ngamma = {}\ndelta = 4.0\noutlier_fraction = 0.04\n\
         train_fraction = 0.5\nmax_iters = 200\nseed = 0\nreference = \"none\"",
        dataset("u.data").display().to_string(),
        2.0 / 3.0
    )
}

fn by_method(summaries: &[RunSummary], m: Method) -> &RunSummary {
    summaries.iter().find(|s| s.method == m).unwrap()
}

fn experiments() -> Outcome {
    let out = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for (label, toml, limit) in
        [("breast cancer", breast_cancer_toml(1000, 100), 60.0), ("pima", pima_toml(1000, 100), 60.0)]
    {
        let start = Instant::now();
        let s = cli::run_experiment(&experiment_config(&toml, out.path())).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let (f, j) = (by_method(&s, Method::Fw), by_method(&s, Method::Jfw));
        let (fs, js) = (f.final_subopt.unwrap(), j.final_subopt.unwrap());
        let ok = js <= fs && secs < limit;
        pass &= ok;
        parts
            .push(format!("{label}: subopt fw {fs:.3e} jfw {js:.3e} in {secs:.1}s {}", if ok { "ok" } else { "FAIL" }));
    }
    let start = Instant::now();
    let s = cli::run_experiment(&experiment_config(&movielens_toml(), out.path())).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let (f, j) = (by_method(&s, Method::Fw), by_method(&s, Method::Jfw));
    let (fe, je) = (f.final_normalized_error.unwrap(), j.final_normalized_error.unwrap());
    let starts_at_one = [f, j].iter().all(|r| {
        let t = cli::read_trace(&r.trace_path).unwrap();
        t[0].normalized_error == Some(1.0) && t.last().unwrap().normalized_error.unwrap() < 1.0
    });
    let ok = starts_at_one && je <= fe && secs < 600.0;
    pass &= ok;
    parts.push(format!(
        "movielens: test error 1 -> fw {fe:.7} jfw {je:.7} (decreasing: {starts_at_one}) in {secs:.1}s {}",
        if ok { "ok" } else { "FAIL" }
    ));
    Outcome::new(pass, parts.join("; "))
}

fn loaders() -> Outcome {
    let ds = data::load_movielens(dataset("u.data")).unwrap();
    let density = ds.density();
    let counts_ok = ds.len() == 100_000 && ds.n_users == 943 && ds.n_items == 1682;
    let density_ok = (density - MOVIELENS_DENSITY).abs() <= MOVIELENS_DENSITY_TOL;
    let picked = data::select_outliers(ds.len(), 0.04, 0).unwrap();
    let noisy = data::inject_outliers(&ds, 0.04, 0).unwrap();
    let untouched = ds.triples.iter().zip(&noisy.triples).enumerate().all(|(i, (a, b))| {
        if picked.binary_search(&i).is_ok() {
            b.rating == ds.max_rating
        } else {
            a == b
        }
    });
    let (train, test) = data::train_test_split(&noisy, 0.5, 1).unwrap();
    let pass =
        counts_ok && density_ok && picked.len() == 4000 && untouched && train.len() == 50_000 && test.len() == 50_000;
    Outcome::new(
        pass,
        format!(
            "{} triples, {} users, {} items, density {:.4}%; {} outliers injected; split {}/{}",
            ds.len(),
            ds.n_users,
            ds.n_items,
            100.0 * density,
            picked.len(),
            train.len(),
            test.len()
        ),
    )
}

fn trace_bytes(summaries: &[RunSummary]) -> Vec<Vec<u8>> {
    summaries.iter().map(|s| fs::read(&s.trace_path).unwrap()).collect()
}

fn determinism() -> Outcome {
    let synthetic = "task = \"synthetic\"\nconstraint = \"l2\"\nradius = 2.0\nmethods = [\"fw\", \"jfw\"]\n\
                     alpha = 1.2\nbeta = 1.2\ngamma = 0.6666666666666666\ndim = 30\ncondition = 80.0\ninterior = false\n\
                     max_iters = 500\nseed = 11\nreference = \"exact\""
        .to_string();
    let mut checked = Vec::new();
    let mut pass = true;
    for (label, toml) in
        [("synthetic", synthetic), ("breast cancer", breast_cancer_toml(200, 5)), ("pima", pima_toml(200, 5))]
    {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let first = trace_bytes(&cli::run_experiment(&experiment_config(&toml, a.path())).unwrap());
        let second = trace_bytes(&cli::run_experiment(&experiment_config(&toml, b.path())).unwrap());
        let same = first == second && first.iter().all(|t| !t.is_empty());
        pass &= same;
        checked.push(format!("{label}: {}", if same { "identical" } else { "DIFFERENT" }));
    }
    Outcome::new(pass, checked.join(", "))
}

fn main() {
    println!("acceptance suite (data dir: {})", data_dir().display());
    let mut results = vec![
        criterion(1, "Jacobi recurrence identity", Some(Duration::from_secs(1)), identity),
        criterion(2, "orthogonality under the Jacobi weight", Some(Duration::from_secs(1)), orthogonality),
    ];
    let suite_start = Instant::now();
    let suite = panic::catch_unwind(synthetic_suite).ok();
    let suite_secs = suite_start.elapsed();
    let suite = suite.as_deref();
    let need_suite = |f: fn(&[SuiteInstance]) -> Outcome| {
        move || match suite {
            Some(s) => f(s),
            None => Outcome::new(false, "synthetic suite failed to build"),
        }
    };
    println!("     (synthetic suite: {SUITE_SIZE} instances solved by FW and JFW in {:.2}s)", suite_secs.as_secs_f64());
    results.push(criterion(
        3,
        "FW suboptimality bound",
        Some(Duration::from_secs(30).saturating_sub(suite_secs)),
        need_suite(fw_bound),
    ));
    results.push(criterion(
        4,
        "FW/JFW rate separation",
        Some(Duration::from_secs(60).saturating_sub(suite_secs)),
        need_suite(rate_separation),
    ));
    results.push(criterion(5, "gradients vs central differences", Some(Duration::from_secs(10)), gradient_checks));
    results.push(criterion(6, "LMO optimality", Some(Duration::from_secs(30)), lmo_optimality));
    results.push(criterion(7, "Huber values and continuity", None, huber_correctness));
    results.push(criterion(8, "JFW structural identities", None, jfw_identities));
    results.push(criterion(9, "experiment orderings", None, experiments));
    results.push(criterion(10, "data loaders", None, loaders));
    results.push(criterion(11, "byte-identical reruns", None, determinism));
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

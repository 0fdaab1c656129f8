//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use nullbundle::bundle::{global_triv, minkowski, schwarzschild, schwarzschild_outgoing_radial};
use nullbundle::cone::{cone_project, homothety, transition};
use nullbundle::distribution::{
    integrate_explicit, kernel_basis, numerical_rank, theta, theta_components, theta_covector, ExplicitNullODE,
};
use nullbundle::laws::{
    default_sampling, heap_biunitarity, heap_semiheap_distribution, module_distribution, para_associativity,
    partiality_gate, LawConfig, LawReport,
};
use nullbundle::minkowski::{random_lorentz, random_unit};
use nullbundle::spacetime::ScalarField;
use nullbundle::tolerance;
use nullbundle::{ConePoint, Event, FrameVector, GlobalFrame, Orientation, Spacetime};
use nullbundle_cli::{cmd_verify_laws, reports_json, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(100 + criterion);
    r
}

fn spacetimes() -> [Spacetime; 2] {
    [minkowski(), schwarzschild()]
}

fn random_event(rng: &mut ChaCha8Rng, st: &Spacetime) -> Event {
    let x = match st.name() {
        "schwarzschild" => [
            rng.random_range(-10.0..10.0),
            rng.random_range(1.1..10.0),
            rng.random_range(0.1..PI - 0.1),
            rng.random_range(-3.0..3.0),
        ],
        _ => std::array::from_fn(|_| rng.random_range(-10.0..10.0)),
    };
    st.event(x).expect("sampled inside the chart")
}

fn random_cone(rng: &mut ChaCha8Rng, sigma: Orientation) -> ConePoint {
    let n = rng.random_range(0.1..10.0);
    ConePoint::new(sigma, random_unit(rng).map(|c| c * n)).unwrap()
}

fn random_sigma(rng: &mut ChaCha8Rng) -> Orientation {
    if rng.random::<bool>() {
        Orientation::Future
    } else {
        Orientation::Past
    }
}

fn law_summary(reports: &[LawReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{}/{}: {}/{} failed, max {:.2e}", r.spacetime, r.law, r.failures, r.trials, r.max_residual))
        .collect::<Vec<_>>()
        .join("; ")
}

type Law = fn(&Spacetime, &nullbundle::SamplingSet, &LawConfig) -> LawReport;

fn run_law(law: Law, trials: usize, tol: f64) -> Vec<LawReport> {
    let cfg = LawConfig { seed: SEED, trials, tol, ..LawConfig::default() };
    spacetimes().iter().map(|st| law(st, &default_sampling(st).unwrap(), &cfg)).collect()
}

fn laws_pass(reports: &[LawReport], trials: usize, tol: f64) -> bool {
    reports.iter().all(|r| r.pass && r.trials >= trials && r.max_residual <= tol)
}

fn para_associativity_criterion() -> Outcome {
    let start = Instant::now();
    let reports = run_law(para_associativity, 10_000, tolerance::LAW_RESIDUAL);
    let elapsed = start.elapsed();
    let pass = laws_pass(&reports, 10_000, 1e-10) && elapsed < Duration::from_secs(10);
    outcome(pass, format!("{} in {:.2?}", law_summary(&reports), elapsed))
}

fn partiality_criterion() -> Outcome {
    let reports = run_law(partiality_gate, 1_000, tolerance::LAW_RESIDUAL);
    // each trial is one proportional and one non-proportional pair
    outcome(reports.iter().all(|r| r.pass && r.trials == 2_000), law_summary(&reports))
}

fn heap_criterion() -> Outcome {
    let mut reports = run_law(heap_biunitarity, 1_000, tolerance::LAW_RESIDUAL);
    let pass_unit = laws_pass(&reports, 1_000, 1e-14);
    let dist = run_law(heap_semiheap_distribution, 1_000, 1e-10);
    let pass_dist = laws_pass(&dist, 1_000, 1e-10);
    reports.extend(dist);
    outcome(pass_unit && pass_dist, law_summary(&reports))
}

fn module_criterion() -> Outcome {
    let reports = run_law(module_distribution, 1_000, 1e-10);
    outcome(laws_pass(&reports, 1_000, 1e-10), law_summary(&reports))
}

fn distribution_criterion() -> Outcome {
    let mut rng = rng(5);
    let (mut worst_theta, mut min_rank, mut min_norm) = (0.0_f64, usize::MAX, f64::INFINITY);
    for st in spacetimes() {
        for _ in 0..50 {
            let p = random_event(&mut rng, &st);
            let v = random_cone(&mut rng, Orientation::Future);
            let basis = kernel_basis(&v).unwrap();
            for b in &basis {
                worst_theta = worst_theta.max(theta(&v, b).unwrap().abs());
            }
            let rows: Vec<[f64; 7]> = basis.iter().map(|b| b.to_array()).collect();
            min_rank = min_rank.min(numerical_rank(&rows, tolerance::RANK));
            let frame = st.frame_at(&p).unwrap();
            let coord: f64 = theta_components(&v, &frame).unwrap().iter().map(|c| c * c).sum::<f64>().sqrt();
            let fibre: f64 = theta_covector(&v).unwrap().iter().map(|c| c * c).sum::<f64>().sqrt();
            min_norm = min_norm.min(coord).min(fibre);
        }
    }
    let pass = worst_theta <= 1e-12 && min_rank == 6 && min_norm > 1e-8;
    outcome(pass, format!("max |theta| on kernel {worst_theta:.2e}, min rank {min_rank}, min |theta| {min_norm:.2e}"))
}

fn max_rel_diff(a: &ConePoint, b: &ConePoint) -> f64 {
    if a.sigma() != b.sigma() {
        return f64::INFINITY;
    }
    let scale = a.norm().max(1.0);
    a.spatial().iter().zip(b.spatial()).map(|(x, y)| (x - y).abs() / scale).fold(0.0, f64::max)
}

fn transition_criterion() -> Outcome {
    let mut rng = rng(6);
    let (mut worst_route, mut worst_homothety) = (0.0_f64, 0.0_f64);
    for _ in 0..10_000 {
        let l = random_lorentz(&mut rng, 2.0);
        let sigma = random_sigma(&mut rng);
        let c = random_cone(&mut rng, sigma);
        let direct = transition(&l, &c);
        let route = cone_project(&l.apply(&c.embed()), tolerance::CLASSIFY).unwrap();
        worst_route = worst_route.max(max_rel_diff(&direct, &route));
        let lambda = rng.random_range(0.01..100.0);
        let a = transition(&l, &homothety(lambda, &c).unwrap());
        let b = homothety(lambda, &direct).unwrap();
        worst_homothety = worst_homothety.max(max_rel_diff(&a, &b));
    }
    let pass = worst_route <= 1e-12 && worst_homothety <= 1e-12;
    outcome(pass, format!("formula vs embed/transform/project {worst_route:.2e}, homothety {worst_homothety:.2e}"))
}

fn weyl_criterion() -> Outcome {
    let mut rng = rng(7);
    let (mut total, mut agree) = (0usize, 0usize);
    for st in spacetimes() {
        let factors: Vec<ScalarField> = (0..10)
            .map(|_| {
                let a = rng.random_range(-2.0..2.0);
                let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                let c = rng.random_range(-1.0..1.0);
                ScalarField::new(move |x| c + a * (k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>()).sin())
            })
            .collect();
        let rescaled: Vec<Spacetime> = factors.iter().map(|f| st.weyl_transform(f)).collect();
        for i in 0..10_000 {
            let p = random_event(&mut rng, &st);
            // a third of the vectors are exactly null in the original frame
            let v = if i % 3 == 0 {
                let sigma = random_sigma(&mut rng);
                let c = random_cone(&mut rng, sigma);
                st.frame_at(&p).unwrap().coordinate_components(&c.embed())
            } else {
                std::array::from_fn(|_| rng.random_range(-3.0..3.0))
            };
            let expected = st.causal_character(&p, &v, tolerance::CLASSIFY).unwrap();
            for conf in &rescaled {
                total += 1;
                agree += usize::from(conf.causal_character(&p, &v, tolerance::CLASSIFY).unwrap() == expected);
            }
        }
    }
    outcome(agree == total, format!("{agree}/{total} agree"))
}

fn trivialization_criterion() -> Outcome {
    let st = schwarzschild();
    let frames = GlobalFrame::of(&st).unwrap();
    let mut rng = rng(8);
    let (mut worst_frame, mut worst_null, mut oriented) = (0.0_f64, 0.0_f64, true);
    for i in 0..20 {
        for j in 0..10 {
            let r = 1.1 + (10.0 - 1.1) * (i as f64 + 0.5) / 20.0;
            let th = PI * (j as f64 + 0.5) / 10.0;
            let p = st.event([0.0, r, th, 0.3]).unwrap();
            let frame = frames.at(&p).unwrap();
            worst_frame = worst_frame.max(frame.reconstruction_defect(&st.metric().eval(&p)));
            for sigma in [Orientation::Future, Orientation::Past] {
                let c = random_cone(&mut rng, sigma);
                let w = global_triv(&frames, &p, &c).unwrap();
                let scale = FrameVector::norm_sq(&frame.frame_components(&w));
                worst_null = worst_null.max(st.metric().pair(&p, &w, &w).abs() / scale);
                let (_, o) = st.causal_character(&p, &w, tolerance::CLASSIFY).unwrap();
                oriented &= o == Some(sigma);
            }
        }
    }
    let pass = worst_frame <= 1e-10 && worst_null <= 1e-10 && oriented;
    outcome(
        pass,
        format!("orthonormality {worst_frame:.2e}, null residual {worst_null:.2e}, orientation ok {oriented}"),
    )
}

/// `t - r - ln(r - 1)` is constant along outgoing radial null rays.
fn radial_invariant(x: &[f64; 4]) -> f64 {
    x[0] - x[1] - (x[1] - 1.0).ln()
}

fn radial_errors(step: f64) -> (f64, f64, f64) {
    let st = schwarzschild();
    let ode = ExplicitNullODE::new(st.clone(), schwarzschild_outgoing_radial()).unwrap();
    let p0 = st.event([0.0, 2.0, FRAC_PI_2, 0.0]).unwrap();
    let curve = integrate_explicit(&ode, &p0, 5.0, step).unwrap();
    let (mut max_err, mut drift) = (0.0_f64, 0.0_f64);
    for s in curve.samples() {
        // starting at t = 0, r = 2 fixes the constant at -2
        max_err = max_err.max((radial_invariant(&s.x) + 2.0).abs());
        let g = st.metric().eval_coords(&s.x);
        let q: f64 = (0..4).map(|m| g[(m, m)] * s.dx[m] * s.dx[m]).sum();
        drift = drift.max(q.abs() / s.dx.iter().map(|c| c * c).sum::<f64>());
    }
    let end = (radial_invariant(&curve.samples().last().unwrap().x) + 2.0).abs();
    (max_err, drift, end)
}

fn integration_criterion() -> Outcome {
    let (err, drift, _) = radial_errors(1e-3);
    // the order is measured where truncation dominates round-off
    let (_, _, coarse) = radial_errors(0.1);
    let (_, _, fine) = radial_errors(0.05);
    let ratio = coarse / fine;
    let pass = err <= 1e-6 && drift <= 1e-8 && ratio >= 12.0;
    outcome(pass, format!("max error {err:.2e}, drift {drift:.2e}, halving ratio {ratio:.2} (h = 0.1 -> 0.05)"))
}

fn determinism_criterion() -> Outcome {
    let cfg = RunConfig { spacetime: "all".into(), seed: SEED, trials: 200, ..RunConfig::default() };
    let a = reports_json(&cmd_verify_laws(&cfg, false).unwrap().0);
    let b = reports_json(&cmd_verify_laws(&cfg, false).unwrap().0);

    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_nullbundle"))
                .args(["verify-laws", "--spacetime", "all", "--seed", "42", "--trials", "200", "--out"])
                .arg(&path)
                .stderr(Stdio::null())
                .status()
                .unwrap();
            assert!(status.success(), "verify-laws exited with {status}");
            std::fs::read(&path).unwrap()
        })
        .collect();
    let pass = a == b && outputs[0] == outputs[1] && outputs[0] == a.as_bytes();
    outcome(pass, format!("in-process runs identical {}, binary runs identical {}", a == b, outputs[0] == outputs[1]))
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("para-associativity of the null semiheap", para_associativity_criterion),
        ("partiality gate", partiality_criterion),
        ("heap biunitarity and heap/semiheap distribution", heap_criterion),
        ("module distribution", module_criterion),
        ("canonical distribution kernel and rank", distribution_criterion),
        ("chart transition coherence", transition_criterion),
        ("conformal invariance of causal character", weyl_criterion),
        ("Schwarzschild trivialization", trivialization_criterion),
        ("explicit null ODE integration", integration_criterion),
        ("determinism of verify-laws", determinism_criterion),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:2} {verdict} {name} [{:.2?}]: {}", i + 1, start.elapsed(), o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

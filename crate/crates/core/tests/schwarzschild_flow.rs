//! Outgoing radial null geodesics of Schwarzschild against the closed form
//! `t - r - ln(r - 1) = const`.

use nullbundle::bundle::{schwarzschild, schwarzschild_outgoing_radial};
use nullbundle::distribution::{
    integrate_explicit, integrate_explicit_with, is_solution, ExplicitNullODE, IntegrateOptions,
};
use nullbundle::Error;

fn ode() -> ExplicitNullODE {
    ExplicitNullODE::new(schwarzschild(), schwarzschild_outgoing_radial()).unwrap()
}

fn invariant(x: &[f64; 4]) -> f64 {
    x[0] - x[1] - (x[1] - 1.0).ln()
}

fn end_error(step: f64) -> f64 {
    let ode = ode();
    let p0 = ode.spacetime().event([0.0, 2.0, std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
    let curve = integrate_explicit(&ode, &p0, 5.0, step).unwrap();
    (invariant(&curve.samples().last().unwrap().x) + 2.0).abs()
}

#[test]
fn fine_step_matches_closed_form() {
    let ode = ode();
    let p0 = ode.spacetime().event([0.0, 2.0, 1.0, 0.5]).unwrap();
    let curve = integrate_explicit(&ode, &p0, 5.0, 1e-3).unwrap();
    assert_eq!(curve.len(), 5001);
    for s in curve.samples() {
        assert!((invariant(&s.x) + 2.0).abs() <= 1e-6, "t = {}", s.t);
        assert_eq!(&s.x[2..], &[1.0, 0.5]);
        let g = ode.spacetime().metric().eval_coords(&s.x);
        let q: f64 = (0..4).map(|m| g[(m, m)] * s.dx[m] * s.dx[m]).sum();
        let n2: f64 = s.dx.iter().map(|c| c * c).sum();
        assert!(q.abs() <= 1e-8 * n2);
    }
    assert!(is_solution(&curve, &ode, 1e-12).unwrap());
}

#[test]
fn fourth_order_convergence() {
    let (coarse, fine) = (end_error(0.1), end_error(0.05));
    assert!(coarse / fine >= 12.0, "{coarse:e} / {fine:e}");
}

#[test]
fn reverse_integration_retraces() {
    let ode = ode();
    let p0 = ode.spacetime().event([0.0, 2.0, 1.2, 0.0]).unwrap();
    let fwd = integrate_explicit(&ode, &p0, 3.0, 1e-3).unwrap();
    let end = fwd.samples().last().unwrap().x;
    let back = integrate_explicit_with(
        &ode,
        &ode.spacetime().event(end).unwrap(),
        3.0,
        1e-3,
        &IntegrateOptions { reverse: true, ..Default::default() },
    )
    .unwrap();
    let home = back.samples().last().unwrap().x;
    for m in 0..4 {
        assert!((home[m] - p0.coords()[m]).abs() <= 1e-8, "{home:?}");
    }
}

#[test]
fn reverse_integration_toward_horizon_leaves_chart() {
    let ode = ode();
    let p0 = ode.spacetime().event([0.0, 1.5, 1.0, 0.0]).unwrap();
    let err = integrate_explicit_with(&ode, &p0, 50.0, 5.0, &IntegrateOptions { reverse: true, ..Default::default() })
        .unwrap_err();
    assert!(matches!(err, Error::LeftDomain { .. }), "{err:?}");
}

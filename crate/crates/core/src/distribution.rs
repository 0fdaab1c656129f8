//! The canonical one-form on the future null bundle, its kernel distribution,
//! null-curve prolongation and explicit null differential equations.

use std::ops::{Add, Mul};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::bundle::BundlePoint;
use crate::cone::ConePoint;
use crate::heap::NullSection;
use crate::minkowski::{classify, eta_inner, CausalClass, FrameVector, Orientation};
use crate::spacetime::{Event, Frame, Spacetime};
use crate::{Error, Result};

/// Tangent vector to the bundle at `v`: frame components along `e_a` and
/// fibre components along `d/dv^i`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct BundleTangent {
    pub base: FrameVector,
    pub fibre: [f64; 3],
}

impl BundleTangent {
    pub fn new(base: [f64; 4], fibre: [f64; 3]) -> Self {
        Self { base: FrameVector(base), fibre }
    }

    /// Components as a vector of `R^7`: base first, then fibre.
    pub fn to_array(&self) -> [f64; 7] {
        let b = &self.base.0;
        [b[0], b[1], b[2], b[3], self.fibre[0], self.fibre[1], self.fibre[2]]
    }
}

impl Add for BundleTangent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { base: self.base + rhs.base, fibre: std::array::from_fn(|i| self.fibre[i] + rhs.fibre[i]) }
    }
}

impl Mul<f64> for BundleTangent {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { base: self.base * s, fibre: self.fibre.map(|c| c * s) }
    }
}

/// The differential of the bundle projection: drop the fibre part.
pub fn dpi(x: &BundleTangent) -> FrameVector {
    x.base
}

fn future_only(v: &ConePoint) -> Result<()> {
    match v.sigma() {
        Orientation::Future => Ok(()),
        Orientation::Past => Err(Error::PastConeUnsupported),
    }
}

/// `Theta_v(x) = -|v| x^0 + v^i x^i`.
pub fn theta(v: &ConePoint, x: &BundleTangent) -> Result<f64> {
    future_only(v)?;
    let s = v.spatial();
    let b = &x.base.0;
    Ok(-v.norm() * b[0] + s[0] * b[1] + s[1] * b[2] + s[2] * b[3])
}

/// `Theta` as a covector on `R^7` (base then fibre); the fibre part is zero.
pub fn theta_covector(v: &ConePoint) -> Result<[f64; 7]> {
    future_only(v)?;
    let s = v.spatial();
    Ok([-v.norm(), s[0], s[1], s[2], 0.0, 0.0, 0.0])
}

/// Coordinate components `Theta_mu = -|v| e^0_mu + v^i e^i_mu`.
pub fn theta_components(v: &ConePoint, frame: &Frame) -> Result<[f64; 4]> {
    future_only(v)?;
    let s = v.spatial();
    let n = v.norm();
    let d = frame.dual();
    Ok(std::array::from_fn(|mu| -n * d[(0, mu)] + s[0] * d[(1, mu)] + s[1] * d[(2, mu)] + s[2] * d[(3, mu)]))
}

/// Local basis of `ker Theta` at `v`: the three fibre directions `V_i`
/// followed by `X^j = v^j e_0 + |v| e_j`.
pub fn kernel_basis(v: &ConePoint) -> Result<[BundleTangent; 6]> {
    future_only(v)?;
    let s = v.spatial();
    let n = v.norm();
    Ok(std::array::from_fn(|k| {
        if k < 3 {
            let mut fibre = [0.0; 3];
            fibre[k] = 1.0;
            BundleTangent { base: FrameVector::ZERO, fibre }
        } else {
            let j = k - 3;
            let mut base = [s[j], 0.0, 0.0, 0.0];
            base[j + 1] = n;
            BundleTangent { base: FrameVector(base), fibre: [0.0; 3] }
        }
    }))
}

/// Base parts of the `X^j` in coordinate components.
pub fn kernel_basis_coords(v: &ConePoint, frame: &Frame) -> Result<[[f64; 4]; 3]> {
    let basis = kernel_basis(v)?;
    Ok(std::array::from_fn(|j| frame.coordinate_components(&basis[j + 3].base)))
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numerical_rank(rows: &[[f64; 7]], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), 7, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub x: [f64; 4],
    pub dx: [f64; 4],
}

/// A sampled curve with derivatives, parameter strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSamples {
    samples: Vec<CurveSample>,
}

impl CurveSamples {
    pub fn new(samples: Vec<CurveSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySampling);
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].t > w[0].t) {
                return Err(Error::NonIncreasingParameter { index: i + 1 });
            }
        }
        Ok(Self { samples })
    }

    /// Derivatives by central differences, one-sided at the ends.
    pub fn from_positions(points: &[(f64, [f64; 4])]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse("need at least two positions to difference".into()));
        }
        let n = points.len();
        let diff = |a: usize, b: usize| {
            let (ta, xa) = points[a];
            let (tb, xb) = points[b];
            std::array::from_fn(|mu| (xb[mu] - xa[mu]) / (tb - ta))
        };
        let samples = (0..n)
            .map(|i| {
                let dx = match i {
                    0 => diff(0, 1),
                    i if i == n - 1 => diff(n - 2, n - 1),
                    i => diff(i - 1, i + 1),
                };
                CurveSample { t: points[i].0, x: points[i].1, dx }
            })
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `t -> gamma(c t)`: positions unchanged, parameter divided by `c`,
    /// derivatives multiplied by `c`.
    pub fn reparametrized(&self, c: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|s| CurveSample { t: s.t / c, x: s.x, dx: s.dx.map(|d| d * c) }).collect())
    }
}

/// One sample of a prolonged curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedSample {
    pub t: f64,
    pub point: BundlePoint,
}

/// Lift a regular null curve to the bundle: `v^i = e^i_nu dx^nu/dt`, the
/// component from the sign of the frame time component.
pub fn prolong(curve: &CurveSamples, spacetime: &Spacetime, tol: f64) -> Result<Vec<ProlongedSample>> {
    curve
        .samples()
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let p = spacetime.event(s.x)?;
            let frame = spacetime.frame_at(&p)?;
            let a = frame.frame_components(&s.dx);
            match classify(&a, tol) {
                Ok(CausalClass::Null) => {}
                Ok(_) => return Err(Error::NonNullCurve { index }),
                Err(_) => return Err(Error::NotRegular { index }),
            }
            let cone = ConePoint::new(Orientation::from_sign(a.time()), a.spatial())
                .map_err(|_| Error::NotRegular { index })?;
            Ok(ProlongedSample { t: s.t, point: BundlePoint::new(p, cone) })
        })
        .collect()
}

/// `dx/dt = k(x)` for a future-directed null section `k`.
#[derive(Clone, Debug)]
pub struct ExplicitNullODE {
    spacetime: Spacetime,
    k: NullSection,
}

impl ExplicitNullODE {
    pub fn new(spacetime: Spacetime, k: NullSection) -> Result<Self> {
        if k.spacetime() != spacetime.name() {
            return Err(Error::SpacetimeMismatch);
        }
        Ok(Self { spacetime, k })
    }

    pub fn spacetime(&self) -> &Spacetime {
        &self.spacetime
    }

    pub fn field(&self) -> &NullSection {
        &self.k
    }

    /// Coordinate components of `k` at `p`.
    pub fn velocity(&self, p: &Event) -> Result<[f64; 4]> {
        let c = self.k.at(p)?;
        future_only(&c)?;
        Ok(self.spacetime.frame_at(p)?.coordinate_components(&c.embed()))
    }
}

/// Solutions of an implicit null differential equation: curves whose
/// prolongation stays inside a caller-described subset of the bundle.
#[derive(Clone)]
pub struct ImplicitNullODE(Arc<dyn Fn(&BundlePoint) -> bool + Send + Sync>);

impl ImplicitNullODE {
    pub fn new(member: impl Fn(&BundlePoint) -> bool + Send + Sync + 'static) -> Self {
        Self(Arc::new(member))
    }

    pub fn is_solution(&self, curve: &CurveSamples, spacetime: &Spacetime, tol: f64) -> Result<bool> {
        Ok(prolong(curve, spacetime, tol)?.iter().all(|s| (self.0)(&s.point)))
    }
}

/// True iff the curve is a null solution whose derivative matches `k` at every
/// sample, componentwise within `tol * max(1, |k|)`.
pub fn is_solution(curve: &CurveSamples, ode: &ExplicitNullODE, tol: f64) -> Result<bool> {
    let lifted = prolong(curve, &ode.spacetime, crate::tolerance::CLASSIFY.max(tol))?;
    for (s, l) in curve.samples().iter().zip(&lifted) {
        let k = ode.velocity(&l.point.event)?;
        let scale = k.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        if s.dx.iter().zip(&k).any(|(a, b)| (a - b).abs() > tol * scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrateOptions {
    /// Integrate `dx/dt = -k` instead, retracing solutions backwards.
    pub reverse: bool,
    /// Bound on `|g(dx, dx)| / |dx|^2` at every sample.
    pub drift_tol: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { reverse: false, drift_tol: 1e-8 }
    }
}

pub fn integrate_explicit(ode: &ExplicitNullODE, p0: &Event, t_end: f64, step: f64) -> Result<CurveSamples> {
    integrate_explicit_with(ode, p0, t_end, step, &IntegrateOptions::default())
}

/// Classical fourth-order Runge-Kutta for `dx/dt = k(x)` on `[0, t_end]`.
/// The step is shrunk so that a whole number of steps lands on `t_end`.
pub fn integrate_explicit_with(
    ode: &ExplicitNullODE,
    p0: &Event,
    t_end: f64,
    step: f64,
    opts: &IntegrateOptions,
) -> Result<CurveSamples> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::BadStep(step));
    }
    if !(t_end > 0.0) {
        return Err(Error::BadStep(t_end));
    }
    let st = &ode.spacetime;
    let dir = if opts.reverse { -1.0 } else { 1.0 };
    let n = (t_end / step).ceil().max(1.0) as usize;
    let h = t_end / n as f64;

    let rhs = |x: &[f64; 4], t: f64| -> Result<[f64; 4]> {
        let p = st.event(*x).map_err(|_| Error::LeftDomain { t })?;
        Ok(ode.velocity(&p)?.map(|c| dir * c))
    };
    let axpy = |x: &[f64; 4], a: f64, k: &[f64; 4]| -> [f64; 4] { std::array::from_fn(|i| x[i] + a * k[i]) };

    let mut samples = Vec::with_capacity(n + 1);
    let mut x = *p0.coords();
    let mut k1 = rhs(&x, 0.0)?;
    for i in 0..=n {
        let t = i as f64 * h;
        let p = st.event(x).map_err(|_| Error::LeftDomain { t })?;
        let q = st.metric().pair(&p, &k1, &k1);
        let n2: f64 = k1.iter().map(|c| c * c).sum();
        if q.abs() > opts.drift_tol * n2 {
            return Err(Error::StepTooLarge { drift: q.abs() / n2, limit: opts.drift_tol });
        }
        samples.push(CurveSample { t, x, dx: k1 });
        if i == n {
            break;
        }
        let k2 = rhs(&axpy(&x, 0.5 * h, &k1), t + 0.5 * h)?;
        let k3 = rhs(&axpy(&x, 0.5 * h, &k2), t + 0.5 * h)?;
        let k4 = rhs(&axpy(&x, h, &k3), t + h)?;
        x = std::array::from_fn(|m| x[m] + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]));
        k1 = rhs(&x, t + h)?;
    }
    CurveSamples::new(samples)
}

/// `max |Theta(b)|` over the kernel basis at `v`.
pub fn theta_on_kernel(v: &ConePoint) -> Result<f64> {
    kernel_basis(v)?.iter().map(|b| theta(v, b).map(f64::abs)).try_fold(0.0, |m, r| Ok(f64::max(m, r?)))
}

/// `g(v, dpi(x))` by the definition of the one-form.
pub fn theta_by_definition(v: &ConePoint, x: &BundleTangent) -> f64 {
    eta_inner(&v.embed(), &dpi(x))
}

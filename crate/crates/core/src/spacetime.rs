//! Chart-level description of a spacetime `(M, g, tau)`.
//!
//! Fields are evaluation maps over chart coordinates. Nothing here is ever
//! differentiated, so closures are all that is required.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::minkowski::FrameVector;
use crate::{Error, Result};

type CoordFn<T> = Arc<dyn Fn(&[f64; 4]) -> T + Send + Sync>;
type FrameFn = Arc<dyn Fn(&Event) -> Result<Frame> + Send + Sync>;

pub struct Chart {
    name: String,
    labels: [String; 4],
    domain: CoordFn<bool>,
}

impl Chart {
    pub fn new(
        name: impl Into<String>,
        labels: [&str; 4],
        domain: impl Fn(&[f64; 4]) -> bool + Send + Sync + 'static,
    ) -> Arc<Self> {
        Arc::new(Self { name: name.into(), labels: labels.map(String::from), domain: Arc::new(domain) })
    }

    /// Chart covering all of `R^4`.
    pub fn global(name: impl Into<String>, labels: [&str; 4]) -> Arc<Self> {
        Self::new(name, labels, |x| x.iter().all(|c| c.is_finite()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String; 4] {
        &self.labels
    }

    /// Total on `R^4`: non-finite coordinates are simply outside.
    pub fn contains(&self, x: &[f64; 4]) -> bool {
        x.iter().all(|c| c.is_finite()) && (self.domain)(x)
    }

    pub fn event(self: &Arc<Self>, x: [f64; 4]) -> Result<Event> {
        if self.contains(&x) {
            Ok(Event { chart: Arc::clone(self), x })
        } else {
            Err(Error::OutOfDomain { chart: self.name.clone(), coords: x })
        }
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart").field("name", &self.name).field("labels", &self.labels).finish()
    }
}

/// A point of a chart domain.
#[derive(Clone)]
pub struct Event {
    chart: Arc<Chart>,
    x: [f64; 4],
}

impl Event {
    pub fn coords(&self) -> &[f64; 4] {
        &self.x
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && (Arc::ptr_eq(&self.chart, &other.chart) || self.chart.name == other.chart.name)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Event({}: {:?})", self.chart.name, self.x)
    }
}

/// Metric components `g_{mu nu}` over a chart.
#[derive(Clone)]
pub struct MetricField(CoordFn<Matrix4<f64>>);

impl MetricField {
    pub fn new(f: impl Fn(&[f64; 4]) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(m: Matrix4<f64>) -> Self {
        Self::new(move |_| m)
    }

    pub fn minkowski() -> Self {
        Self::constant(eta())
    }

    pub fn eval(&self, p: &Event) -> Matrix4<f64> {
        (self.0)(p.coords())
    }

    pub fn eval_coords(&self, x: &[f64; 4]) -> Matrix4<f64> {
        (self.0)(x)
    }

    /// `g_{mu nu} v^mu w^nu` at `p`.
    pub fn pair(&self, p: &Event, v: &[f64; 4], w: &[f64; 4]) -> f64 {
        (Vector4::from(*v).transpose() * self.eval(p) * Vector4::from(*w))[0]
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MetricField(..)")
    }
}

/// Coordinate components of the time-orientation field `tau`.
#[derive(Clone)]
pub struct TimeOrientation(CoordFn<[f64; 4]>);

impl TimeOrientation {
    pub fn new(f: impl Fn(&[f64; 4]) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// `tau = d/dx^0`.
    pub fn coordinate_time() -> Self {
        Self::new(|_| [1.0, 0.0, 0.0, 0.0])
    }

    pub fn eval(&self, p: &Event) -> [f64; 4] {
        (self.0)(p.coords())
    }
}

impl fmt::Debug for TimeOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TimeOrientation(..)")
    }
}

#[derive(Clone)]
pub struct ScalarField(CoordFn<f64>);

impl ScalarField {
    pub fn new(f: impl Fn(&[f64; 4]) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    pub fn eval(&self, p: &Event) -> f64 {
        (self.0)(p.coords())
    }

    pub fn eval_coords(&self, x: &[f64; 4]) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField(..)")
    }
}

/// Minkowski metric `diag(-1, 1, 1, 1)`.
pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Orthonormal frame at one event.
///
/// `e` holds the vectors `e_a` as columns (`e[(mu, a)] = e_a^mu`), `dual`
/// holds the coframe as rows (`dual[(a, mu)] = e^a_mu`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    e: Matrix4<f64>,
    dual: Matrix4<f64>,
}

impl Frame {
    pub fn from_columns(e: Matrix4<f64>) -> Result<Self> {
        let dual = e.try_inverse().ok_or(Error::DegenerateMetric(0.0))?;
        Ok(Self { e, dual })
    }

    pub fn identity() -> Self {
        Self { e: Matrix4::identity(), dual: Matrix4::identity() }
    }

    pub fn vectors(&self) -> &Matrix4<f64> {
        &self.e
    }

    pub fn dual(&self) -> &Matrix4<f64> {
        &self.dual
    }

    /// `e_a^mu` as a coordinate vector.
    pub fn vector(&self, a: usize) -> [f64; 4] {
        let c = self.e.column(a);
        [c[0], c[1], c[2], c[3]]
    }

    /// `e^a_mu` as a covector.
    pub fn covector(&self, a: usize) -> [f64; 4] {
        let r = self.dual.row(a);
        [r[0], r[1], r[2], r[3]]
    }

    /// `v^a = e^a_mu v^mu`.
    pub fn frame_components(&self, v_coord: &[f64; 4]) -> FrameVector {
        FrameVector::from_vector(&(self.dual * Vector4::from(*v_coord)))
    }

    /// `v^mu = e_a^mu v^a`.
    pub fn coordinate_components(&self, v: &FrameVector) -> [f64; 4] {
        let c = self.e * v.to_vector();
        [c[0], c[1], c[2], c[3]]
    }

    /// `max |E^T g E - eta|`.
    pub fn reconstruction_defect(&self, g: &Matrix4<f64>) -> f64 {
        (self.e.transpose() * g * self.e - eta()).amax()
    }

    /// `max |dual E - I|`.
    pub fn duality_defect(&self) -> f64 {
        (self.dual * self.e - Matrix4::identity()).amax()
    }

    /// Scale every frame vector by `s` (coframe by `1/s`).
    pub fn scaled(&self, s: f64) -> Self {
        Self { e: self.e * s, dual: self.dual / s }
    }
}

/// Ordering of the spatial eigen-directions when building a vierbein.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpatialOrder {
    #[default]
    Ascending,
    Descending,
}

/// Signature test on a metric matrix: `Ok(true)` iff exactly one eigenvalue is
/// negative.
pub fn signature_check_matrix(g: &Matrix4<f64>, tol: f64) -> Result<bool> {
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if let Some(l) = eig.eigenvalues.iter().find(|l| l.abs() <= tol) {
        return Err(Error::DegenerateMetric(*l));
    }
    Ok(eig.eigenvalues.iter().filter(|l| **l < 0.0).count() == 1)
}

pub fn signature_check(g: &MetricField, p: &Event, tol: f64) -> Result<bool> {
    signature_check_matrix(&g.eval(p), tol)
}

/// Orthonormal frame of a Lorentzian matrix from its eigen-decomposition
/// `g = P D P^T`: `e_a = P_a / sqrt|D_a|`, timelike column first, `e_0`
/// future-directed with respect to `tau`, `det E > 0`.
pub fn vierbein_from_matrix(g: &Matrix4<f64>, tau: &[f64; 4], order: SpatialOrder, tol: f64) -> Result<Frame> {
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if let Some(l) = eig.eigenvalues.iter().find(|l| l.abs() <= tol) {
        return Err(Error::DegenerateMetric(*l));
    }
    let negative: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] < 0.0).collect();
    let &[time] = negative.as_slice() else {
        return Err(Error::BadSignature);
    };
    let mut spatial: Vec<usize> = (0..4).filter(|&i| i != time).collect();
    // stable sort keeps index order on ties
    spatial.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if order == SpatialOrder::Descending {
        spatial.reverse();
    }

    let mut e = Matrix4::zeros();
    for (a, &i) in std::iter::once(&time).chain(spatial.iter()).enumerate() {
        let col = eig.eigenvectors.column(i) / eig.eigenvalues[i].abs().sqrt();
        e.set_column(a, &col);
    }
    let tau = Vector4::from(*tau);
    let e0 = e.column(0).into_owned();
    if (e0.transpose() * sym * tau)[0] > 0.0 {
        e.set_column(0, &(-e0));
    }
    if e.determinant() < 0.0 {
        let e1 = e.column(1).into_owned();
        e.set_column(1, &(-e1));
    }
    Frame::from_columns(e)
}

/// A frame at every event of a chart.
#[derive(Clone)]
pub struct VierbeinField(FrameFn);

impl VierbeinField {
    pub fn new(f: impl Fn(&Event) -> Result<Frame> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// Frames with explicitly given columns `e_a^mu`.
    pub fn from_columns(f: impl Fn(&[f64; 4]) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        Self::new(move |p| Frame::from_columns(f(p.coords())))
    }

    /// Frames built pointwise by [`vierbein_from_matrix`].
    pub fn from_metric(g: MetricField, tau: TimeOrientation, order: SpatialOrder) -> Self {
        Self::new(move |p| vierbein_from_matrix(&g.eval(p), &tau.eval(p), order, crate::tolerance::DEGENERATE))
    }

    pub fn eval(&self, p: &Event) -> Result<Frame> {
        (self.0)(p)
    }
}

impl fmt::Debug for VierbeinField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VierbeinField(..)")
    }
}

pub fn vierbein_from_metric(g: &MetricField, tau: &TimeOrientation, p: &Event) -> Result<Frame> {
    vierbein_from_matrix(&g.eval(p), &tau.eval(p), SpatialOrder::Ascending, crate::tolerance::DEGENERATE)
}

pub fn frame_components(frame: &Frame, v_coord: &[f64; 4]) -> FrameVector {
    frame.frame_components(v_coord)
}

pub fn coordinate_components(frame: &Frame, v: &FrameVector) -> [f64; 4] {
    frame.coordinate_components(v)
}

/// `g' = e^{-2f} g`.
pub fn weyl_transform(g: &MetricField, f: &ScalarField) -> MetricField {
    let (g, f) = (g.clone(), f.clone());
    MetricField::new(move |x| g.eval_coords(x) * (-2.0 * f.eval_coords(x)).exp())
}

/// A chart-described spacetime together with the frame field used to express
/// tangent vectors in orthonormal components.
#[derive(Clone, Debug)]
pub struct Spacetime {
    name: String,
    chart: Arc<Chart>,
    metric: MetricField,
    tau: TimeOrientation,
    frames: VierbeinField,
    global: bool,
}

impl Spacetime {
    /// Spacetime whose frames are computed from the metric at each event.
    pub fn new(name: impl Into<String>, chart: Arc<Chart>, metric: MetricField, tau: TimeOrientation) -> Self {
        let frames = VierbeinField::from_metric(metric.clone(), tau.clone(), SpatialOrder::Ascending);
        Self { name: name.into(), chart, metric, tau, frames, global: false }
    }

    /// Replace the frame field with one declared valid over the whole atlas
    /// (the parallelizable case).
    pub fn with_global_frame(mut self, frames: VierbeinField) -> Self {
        self.frames = frames;
        self.global = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn time_orientation(&self) -> &TimeOrientation {
        &self.tau
    }

    pub fn frames(&self) -> &VierbeinField {
        &self.frames
    }

    pub fn has_global_frame(&self) -> bool {
        self.global
    }

    pub fn event(&self, x: [f64; 4]) -> Result<Event> {
        self.chart.event(x)
    }

    pub fn frame_at(&self, p: &Event) -> Result<Frame> {
        self.frames.eval(p)
    }

    /// Causal class and (for non-spacelike vectors) orientation of the
    /// coordinate vector `v` at `p`, judged in the local frame against `tau`.
    pub fn causal_character(
        &self,
        p: &Event,
        v: &[f64; 4],
        tol: f64,
    ) -> Result<(crate::CausalClass, Option<crate::Orientation>)> {
        let frame = self.frame_at(p)?;
        let tau = frame.frame_components(&self.tau.eval(p));
        crate::minkowski::causal_character(&frame.frame_components(v), &tau, tol)
    }

    /// Weyl-rescaled spacetime `e^{-2f} g`; frames are rescaled by `e^{f}`.
    pub fn weyl_transform(&self, f: &ScalarField) -> Self {
        let frames = {
            let (old, f) = (self.frames.clone(), f.clone());
            VierbeinField::new(move |p| Ok(old.eval(p)?.scaled(f.eval(p).exp())))
        };
        Self {
            name: format!("{}/weyl", self.name),
            chart: Arc::clone(&self.chart),
            metric: weyl_transform(&self.metric, f),
            tau: self.tau.clone(),
            frames,
            global: self.global,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::{classify, orientation, CausalClass, LorentzTransform, TAU};

    fn schwarzschild_matrix(r: f64, theta: f64) -> Matrix4<f64> {
        let f = 1.0 - 1.0 / r;
        Matrix4::from_diagonal(&Vector4::new(-f, 1.0 / f, r * r, (r * theta.sin()).powi(2)))
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_check_matrix(&eta(), 1e-12), Ok(true));
        assert_eq!(signature_check_matrix(&schwarzschild_matrix(2.0, std::f64::consts::FRAC_PI_2), 1e-12), Ok(true));
        assert_eq!(signature_check_matrix(&Matrix4::identity(), 1e-12), Ok(false));
        let degenerate = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 0.0, 1.0));
        assert!(matches!(signature_check_matrix(&degenerate, 1e-12), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn chart_domain_is_enforced() {
        let chart = Chart::new("half", ["t", "x", "y", "z"], |x| x[1] > 0.0);
        assert!(chart.event([0.0, 1.0, 0.0, 0.0]).is_ok());
        assert!(matches!(chart.event([0.0, -1.0, 0.0, 0.0]), Err(Error::OutOfDomain { .. })));
        assert!(!chart.contains(&[f64::NAN, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn minkowski_frame_is_identity() {
        let chart = Chart::global("minkowski", ["t", "x", "y", "z"]);
        let p = chart.event([0.3, 1.0, -2.0, 5.0]).unwrap();
        let frame = vierbein_from_metric(&MetricField::minkowski(), &TimeOrientation::coordinate_time(), &p).unwrap();
        assert!((frame.vectors() - Matrix4::identity()).amax() < 1e-14);
        assert_eq!(frame.frame_components(&[1.0, 1.0, 0.0, 0.0]), FrameVector([1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn conformally_scaled_minkowski_frame() {
        // g' = e^{-2 ln 2} eta = eta / 4 has the frame 2 I
        let chart = Chart::global("m", ["t", "x", "y", "z"]);
        let p = chart.event([0.0; 4]).unwrap();
        let g = weyl_transform(&MetricField::minkowski(), &ScalarField::constant(2f64.ln()));
        assert!((g.eval(&p) - eta() / 4.0).amax() < 1e-15);
        let frame = vierbein_from_metric(&g, &TimeOrientation::coordinate_time(), &p).unwrap();
        assert!((frame.vectors() - Matrix4::identity() * 2.0).amax() < 1e-14);
        assert!(frame.reconstruction_defect(&g.eval(&p)) < 1e-14);
    }

    #[test]
    fn schwarzschild_eigen_frame_at_r2() {
        let g = schwarzschild_matrix(2.0, std::f64::consts::FRAC_PI_2);
        let frame = vierbein_from_matrix(&g, &[1.0, 0.0, 0.0, 0.0], SpatialOrder::Ascending, 1e-12).unwrap();
        // eigenvalues 2 < 4 = 4 keep the coordinate order, so the frame is the diagonal one
        let want = Matrix4::from_diagonal(&Vector4::new(2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.5, 0.5));
        assert!((frame.vectors().abs() - want).amax() < 1e-12, "{}", frame.vectors());
        assert!(frame.reconstruction_defect(&g) < 1e-12);
        assert!(frame.vectors()[(0, 0)] > 0.0);

        let v = frame.frame_components(&[2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0, 0.0]);
        assert!((v.0[0] - 1.0).abs() < 1e-12 && (v.0[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_orderings_differ_by_a_restricted_lorentz_transform() {
        let g = Matrix4::new(
            -1.3, 0.2, 0.1, 0.0, //
            0.2, 1.1, 0.3, -0.2, //
            0.1, 0.3, 2.0, 0.4, //
            0.0, -0.2, 0.4, 0.9,
        );
        let tau = [1.0, 0.0, 0.0, 0.0];
        let a = vierbein_from_matrix(&g, &tau, SpatialOrder::Ascending, 1e-12).unwrap();
        let b = vierbein_from_matrix(&g, &tau, SpatialOrder::Descending, 1e-12).unwrap();
        for f in [&a, &b] {
            assert!(f.reconstruction_defect(&g) < 1e-10);
            assert!(f.duality_defect() < 1e-10);
            assert!(f.vectors().determinant() > 0.0);
        }
        let gauge = b.dual() * a.vectors();
        assert!(LorentzTransform::from_matrix(gauge, 1e-10).is_ok(), "{gauge}");
    }

    #[test]
    fn weyl_preserves_causal_character() {
        let chart = Chart::global("m", ["t", "x", "y", "z"]);
        let mink = Spacetime::new("minkowski", chart, MetricField::minkowski(), TimeOrientation::coordinate_time());
        let f = ScalarField::new(|x| 0.3 * x[0].sin() + 0.2 * x[1]);
        let conf = mink.weyl_transform(&f);
        let p = mink.event([0.4, -1.0, 2.0, 0.1]).unwrap();
        let (f0, f1) = (mink.frame_at(&p).unwrap(), conf.frame_at(&p).unwrap());
        assert!(f1.reconstruction_defect(&conf.metric().eval(&p)) < 1e-12);
        for v in [[1.0, 1.0, 0.0, 0.0], [2.0, 0.1, 0.0, 0.0], [0.0, 0.0, 3.0, 0.0], [-1.0, 0.0, 1.0, 0.0]] {
            let (a, b) = (f0.frame_components(&v), f1.frame_components(&v));
            assert_eq!(classify(&a, 1e-9), classify(&b, 1e-9));
            if classify(&a, 1e-9) != Ok(CausalClass::Spacelike) {
                assert_eq!(orientation(&a, &TAU, 1e-9), orientation(&b, &TAU, 1e-9));
            }
        }
    }
}

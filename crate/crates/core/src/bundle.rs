//! The null tangent bundle over a chart: bundle points, local and global
//! trivialisations, named spacetimes and restriction to sampled submanifolds.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};

use crate::cone::{transition, ConePoint};
use crate::heap::NullSection;
use crate::minkowski::{LorentzTransform, Orientation};
use crate::spacetime::{Chart, Event, Frame, MetricField, Spacetime, TimeOrientation, VierbeinField};
use crate::{Error, Result};

/// A point `(p, v)` of the bundle, `v` given in the frame at `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    pub event: Event,
    pub cone: ConePoint,
}

impl BundlePoint {
    pub fn new(event: Event, cone: ConePoint) -> Self {
        Self { event, cone }
    }
}

/// `(p, v) -> p`.
pub fn projection(b: &BundlePoint) -> &Event {
    &b.event
}

/// Bundle chart `(p, v) -> (x^mu, sigma, v^i)`.
pub fn local_triv(b: &BundlePoint) -> Result<([f64; 4], Orientation, [f64; 3])> {
    let x = *b.event.coords();
    if !b.event.chart().contains(&x) {
        return Err(Error::OutOfDomain { chart: b.event.chart().name().to_owned(), coords: x });
    }
    Ok((x, b.cone.sigma(), b.cone.spatial()))
}

/// Inverse bundle chart; the time component is restored as
/// `sigma * sqrt(v^j v^k delta_jk)` by [`ConePoint::embed`].
pub fn local_triv_inverse(chart: &Arc<Chart>, x: [f64; 4], sigma: Orientation, v: [f64; 3]) -> Result<BundlePoint> {
    Ok(BundlePoint { event: chart.event(x)?, cone: ConePoint::new(sigma, v)? })
}

/// A frame field declared valid at every event of the atlas.
#[derive(Clone, Debug)]
pub struct GlobalFrame(VierbeinField);

impl GlobalFrame {
    pub fn new(frames: VierbeinField) -> Self {
        Self(frames)
    }

    pub fn of(spacetime: &Spacetime) -> Result<Self> {
        if spacetime.has_global_frame() {
            Ok(Self(spacetime.frames().clone()))
        } else {
            Err(Error::NoGlobalFrame(spacetime.name().to_owned()))
        }
    }

    pub fn at(&self, p: &Event) -> Result<Frame> {
        self.0.eval(p)
    }
}

/// `(p, v^i) -> sigma |v| e_0|_p + v^i e_i|_p`, in coordinate components.
pub fn global_triv(frame: &GlobalFrame, p: &Event, c: &ConePoint) -> Result<[f64; 4]> {
    if !p.chart().contains(p.coords()) {
        return Err(Error::OutOfDomain { chart: p.chart().name().to_owned(), coords: *p.coords() });
    }
    Ok(frame.at(p)?.coordinate_components(&c.embed()))
}

/// The gauge transform taking components in `from` to components in `to`.
pub fn gauge_between(from: &Frame, to: &Frame, tol: f64) -> Result<LorentzTransform> {
    LorentzTransform::from_matrix(to.dual() * from.vectors(), tol)
}

/// Fibre coordinates of `c` (given in `from`) re-expressed in `to`.
pub fn change_frame(from: &Frame, to: &Frame, c: &ConePoint, tol: f64) -> Result<ConePoint> {
    Ok(transition(&gauge_between(from, to, tol)?, c))
}

pub fn minkowski() -> Spacetime {
    let chart = Chart::global("minkowski", ["t", "x", "y", "z"]);
    Spacetime::new("minkowski", chart, MetricField::minkowski(), TimeOrientation::coordinate_time())
        .with_global_frame(VierbeinField::new(|_| Ok(Frame::identity())))
}

fn lapse(r: f64) -> f64 {
    1.0 - 1.0 / r
}

/// Schwarzschild metric in units with Schwarzschild radius 1.
pub fn schwarzschild_metric(x: &[f64; 4]) -> Matrix4<f64> {
    let (r, theta) = (x[1], x[2]);
    let f = lapse(r);
    Matrix4::from_diagonal(&Vector4::new(-f, 1.0 / f, r * r, r * r * theta.sin().powi(2)))
}

/// Diagonal Schwarzschild vierbein: `e_t^t = (1 - 1/r)^{-1/2}`,
/// `e_r^r = (1 - 1/r)^{1/2}`, `e_theta^theta = 1/r`,
/// `e_phi^phi = 1/(r sin theta)`.
pub fn schwarzschild_vierbein(x: &[f64; 4]) -> Matrix4<f64> {
    let (r, theta) = (x[1], x[2]);
    let s = lapse(r).sqrt();
    Matrix4::from_diagonal(&Vector4::new(1.0 / s, s, 1.0 / r, 1.0 / (r * theta.sin())))
}

/// Exterior Schwarzschild chart `(t, r, theta, phi)` with
/// `r > 1`, `0 < theta < pi`, `-pi < phi < pi`, time-oriented by `d/dt`.
pub fn schwarzschild() -> Spacetime {
    let chart = Chart::new("schwarzschild", ["t", "r", "theta", "phi"], |x| {
        x[1] > 1.0 && x[2] > 0.0 && x[2] < PI && x[3] > -PI && x[3] < PI
    });
    Spacetime::new("schwarzschild", chart, MetricField::new(schwarzschild_metric), TimeOrientation::coordinate_time())
        .with_global_frame(VierbeinField::from_columns(schwarzschild_vierbein))
}

/// Outgoing radial null field `d/dt + (1 - 1/r) d/dr`; in the diagonal frame
/// it is `(+, (sqrt(1 - 1/r), 0, 0))`.
pub fn schwarzschild_outgoing_radial() -> NullSection {
    NullSection::new("schwarzschild", |p| ConePoint::future([lapse(p.coords()[1]).sqrt(), 0.0, 0.0]))
}

/// Names accepted by [`by_name`].
pub const SPACETIMES: [&str; 2] = ["minkowski", "schwarzschild"];

pub fn by_name(name: &str) -> Result<Spacetime> {
    match name {
        "minkowski" => Ok(minkowski()),
        "schwarzschild" => Ok(schwarzschild()),
        other => Err(Error::UnknownSpacetime(other.to_owned())),
    }
}

/// A finite sampling standing in for a submanifold `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldSampling {
    events: Vec<Event>,
}

impl SubmanifoldSampling {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptySampling);
        }
        if let Some(p) = events.iter().find(|p| !p.chart().contains(p.coords())) {
            return Err(Error::OutOfDomain { chart: p.chart().name().to_owned(), coords: *p.coords() });
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn contains(&self, p: &Event) -> bool {
        self.events.iter().any(|q| q == p)
    }
}

/// Bundle points lying over `n`, in input order.
pub fn restrict_points(points: &[BundlePoint], n: &SubmanifoldSampling) -> Vec<BundlePoint> {
    points.iter().filter(|b| n.contains(&b.event)).cloned().collect()
}

/// The section evaluated over `n`: one fibre point per event.
pub fn restrict_section(section: &NullSection, n: &SubmanifoldSampling) -> Result<Vec<BundlePoint>> {
    n.events().iter().map(|p| Ok(BundlePoint::new(p.clone(), section.at(p)?))).collect()
}

//! The split null cone `C_0 = C_0^+ u C_0^-`, its charts and the fibre maps
//! built on them.
//!
//! A [`ConePoint`] stores the component sign explicitly and the spatial
//! triple `v^i`; the time component is recovered as `sigma * |v|`.

use serde::{Deserialize, Serialize};

use crate::minkowski::{classify, CausalClass, FrameVector, LorentzTransform, Orientation};
use crate::{Error, Result};

/// Grading weight of base coordinates `x^mu`.
pub const WEIGHT_BASE: u32 = 0;
/// Grading weight of fibre coordinates `v^i`.
pub const WEIGHT_FIBRE: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    sigma: Orientation,
    v: [f64; 3],
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl ConePoint {
    pub fn new(sigma: Orientation, v: [f64; 3]) -> Result<Self> {
        let n = norm3(&v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroSpatialPart);
        }
        Ok(Self { sigma, v })
    }

    pub fn future(v: [f64; 3]) -> Result<Self> {
        Self::new(Orientation::Future, v)
    }

    pub fn past(v: [f64; 3]) -> Result<Self> {
        Self::new(Orientation::Past, v)
    }

    pub fn sigma(&self) -> Orientation {
        self.sigma
    }

    pub fn spatial(&self) -> [f64; 3] {
        self.v
    }

    /// `sqrt(v^j v^k delta_jk)`.
    pub fn norm(&self) -> f64 {
        norm3(&self.v)
    }

    pub fn embed(&self) -> FrameVector {
        let [x, y, z] = self.v;
        FrameVector([self.sigma.sign() * self.norm(), x, y, z])
    }

    /// The null vector `s * u` for a nonzero real `s`; a negative factor moves
    /// the point to the opposite component.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let sigma = if s < 0.0 { self.sigma.flip() } else { self.sigma };
        Self::new(sigma, self.v.map(|c| c * s))
    }

    /// The point with the same spatial part on the opposite component.
    pub fn mirrored(&self) -> Self {
        Self { sigma: self.sigma.flip(), v: self.v }
    }
}

/// `(x, y, z) -> (+-sqrt(x^2 + y^2 + z^2), x, y, z)`.
pub fn cone_embed(c: &ConePoint, tol: f64) -> Result<FrameVector> {
    if c.norm() <= tol {
        return Err(Error::ZeroSpatialPart);
    }
    Ok(c.embed())
}

/// Inverse chart on the null cone: the sign of the time component and the
/// spatial part.
pub fn cone_project(v: &FrameVector, tol: f64) -> Result<ConePoint> {
    match classify(v, tol)? {
        CausalClass::Null => {}
        _ => return Err(Error::NotNull(v.eta(v))),
    }
    ConePoint::new(Orientation::from_sign(v.time()), v.spatial())
}

/// Fibre scaling by `lambda > 0`.
pub fn homothety(lambda: f64, c: &ConePoint) -> Result<ConePoint> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveScale(lambda));
    }
    ConePoint::new(c.sigma, c.v.map(|x| lambda * x))
}

/// Fibre coordinates after a frame change,
/// `v^{i'} = L^{i'}_i v^i + sigma |v| L^{i'}_0`; the component is preserved
/// because `L` is orthochronous.
pub fn transition(lambda: &LorentzTransform, c: &ConePoint) -> ConePoint {
    let m = lambda.matrix();
    let t = c.sigma.sign() * c.norm();
    let v = std::array::from_fn(|i| {
        m[(i + 1, 0)] * t + m[(i + 1, 1)] * c.v[0] + m[(i + 1, 2)] * c.v[1] + m[(i + 1, 3)] * c.v[2]
    });
    ConePoint { sigma: c.sigma, v }
}

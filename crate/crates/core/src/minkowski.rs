//! Frame-level Minkowski algebra.
//!
//! Vectors are expressed in an orthonormal frame with signature `(-,+,+,+)`,
//! so the metric is the constant matrix `eta = diag(-1, 1, 1, 1)` and the
//! default time orientation is `tau = (1, 0, 0, 0)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Components `v^a` of a tangent vector in an orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVector(pub [f64; 4]);

/// The frame time orientation `(1, 0, 0, 0)`.
pub const TAU: FrameVector = FrameVector([1.0, 0.0, 0.0, 0.0]);

impl FrameVector {
    pub const ZERO: Self = Self([0.0; 4]);

    pub fn new(a: [f64; 4]) -> Self {
        debug_assert!(a.iter().all(|c| c.is_finite()), "non-finite frame vector {a:?}");
        Self(a)
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// Squared Euclidean norm of the components.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn eta(&self, other: &Self) -> f64 {
        eta_inner(self, other)
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::from(self.0)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self([v[0], v[1], v[2], v[3]])
    }
}

impl Add for FrameVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FrameVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FrameVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<f64> for FrameVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl From<[f64; 4]> for FrameVector {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a)
    }
}

/// The Minkowski pairing `-v^0 w^0 + v^1 w^1 + v^2 w^2 + v^3 w^3`.
pub fn eta_inner(v: &FrameVector, w: &FrameVector) -> f64 {
    let (a, b) = (&v.0, &w.0);
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Timelike,
    Null,
    Spacelike,
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Timelike => "timelike",
            Self::Null => "null",
            Self::Spacelike => "spacelike",
        })
    }
}

/// Future or past directed. Also used as the sign of a split-cone component,
/// with `Future` playing the role of `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Future,
    Past,
}

impl Orientation {
    /// `+1.0` for future, `-1.0` for past.
    pub fn sign(self) -> f64 {
        match self {
            Self::Future => 1.0,
            Self::Past => -1.0,
        }
    }

    /// Orientation carrying the sign of `x`; `0.0` counts as future.
    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Self::Past
        } else {
            Self::Future
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Self::Future => Self::Past,
            Self::Past => Self::Future,
        }
    }

    /// Product of signs.
    pub fn times(self, other: Self) -> Self {
        if self == other {
            Self::Future
        } else {
            Self::Past
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Future => "future",
            Self::Past => "past",
        })
    }
}

/// Classify a nonzero frame vector.
///
/// A vector counts as null when `|eta(v,v)| <= tol * max(1, |v|^2)`, with
/// `|v|` the Euclidean norm of its frame components.
pub fn classify(v: &FrameVector, tol: f64) -> Result<CausalClass> {
    if v.0.iter().all(|c| c.abs() <= tol) {
        return Err(Error::ZeroVector);
    }
    let q = eta_inner(v, v);
    if q.abs() <= tol * v.norm_sq().max(1.0) {
        Ok(CausalClass::Null)
    } else if q < 0.0 {
        Ok(CausalClass::Timelike)
    } else {
        Ok(CausalClass::Spacelike)
    }
}

/// Time orientation of a causal vector relative to the timelike `tau`.
///
/// Only meaningful for non-spacelike `v`; the caller is expected to have
/// classified it.
pub fn orientation(v: &FrameVector, tau: &FrameVector, tol: f64) -> Result<Orientation> {
    let p = eta_inner(v, tau);
    if p < -tol {
        Ok(Orientation::Future)
    } else if p > tol {
        Ok(Orientation::Past)
    } else {
        Err(Error::OrientationUndecidable(p))
    }
}

/// Causal class together with the orientation for non-spacelike vectors.
pub fn causal_character(v: &FrameVector, tau: &FrameVector, tol: f64) -> Result<(CausalClass, Option<Orientation>)> {
    let class = classify(v, tol)?;
    let orient = match class {
        CausalClass::Spacelike => None,
        _ => Some(orientation(v, tau, tol)?),
    };
    Ok((class, orient))
}

/// A restricted (proper, orthochronous) Lorentz transformation acting on
/// frame components as `v' = L v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform(Matrix4<f64>);

fn eta_matrix() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

impl LorentzTransform {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Accept `m` if `m^T eta m = eta` within `tol`, `m[0][0] > 0` and
    /// `det m > 0`.
    pub fn from_matrix(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let eta = eta_matrix();
        let defect = (m.transpose() * eta * m - eta).amax();
        if defect > tol * m.amax().powi(2).max(1.0) || m[(0, 0)] <= 0.0 || m.determinant() <= 0.0 {
            return Err(Error::NotRestrictedLorentz);
        }
        Ok(Self(m))
    }

    /// Pure boost along the unit `direction` with the given rapidity.
    ///
    /// A vector at rest in the original frame acquires velocity
    /// `-tanh(rapidity) * direction`, so the x-boost maps `(1,1,0,0)` to
    /// `e^{-rapidity} (1,1,0,0)`.
    pub fn boost(direction: [f64; 3], rapidity: f64) -> Result<Self> {
        let n = Vector3::from(direction);
        let len = n.norm();
        if (len - 1.0).abs() > 1e-9 {
            return Err(Error::BadDirection(len));
        }
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        for i in 0..3 {
            m[(0, i + 1)] = -sh * n[i];
            m[(i + 1, 0)] = -sh * n[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
            }
        }
        Ok(Self(m))
    }

    /// Spatial rotation by `angle` about the unit `axis` (Rodrigues).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = Vector3::from(axis);
        let len = n.norm();
        if (len - 1.0).abs() > 1e-9 {
            return Err(Error::BadDirection(len));
        }
        let k = Matrix3::new(0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0);
        let r = Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos());
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
        Ok(Self(m))
    }

    /// `self` after `other`: `(self.compose(other)) v = self (other v)`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// `eta L^T eta`.
    pub fn inverse(&self) -> Self {
        let eta = eta_matrix();
        Self(eta * self.0.transpose() * eta)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, v: &FrameVector) -> FrameVector {
        FrameVector::from_vector(&(self.0 * v.to_vector()))
    }

    /// `max |L^T eta L - eta|`.
    pub fn isometry_defect(&self) -> f64 {
        let eta = eta_matrix();
        (self.0.transpose() * eta * self.0 - eta).amax()
    }
}

pub fn apply_transform(lambda: &LorentzTransform, v: &FrameVector) -> FrameVector {
    lambda.apply(v)
}

/// Uniformly distributed unit vector in three dimensions.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = p.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return p.map(|c| c / n);
        }
    }
}

/// A null vector with time component `+-|spatial|`, spatial norm drawn
/// uniformly from `scale`.
pub fn random_null<R: Rng + ?Sized>(rng: &mut R, orientation: Orientation, scale: (f64, f64)) -> FrameVector {
    debug_assert!(0.0 < scale.0 && scale.0 <= scale.1);
    let dir = random_unit(rng);
    let s = if scale.0 < scale.1 { rng.random_range(scale.0..scale.1) } else { scale.0 };
    let v = dir.map(|c| c * s);
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    FrameVector([orientation.sign() * norm, v[0], v[1], v[2]])
}

/// [`random_null`] driven by a fresh generator seeded with `seed`.
pub fn random_null_seeded(seed: u64, orientation: Orientation, scale: (f64, f64)) -> FrameVector {
    random_null(&mut ChaCha8Rng::seed_from_u64(seed), orientation, scale)
}

/// Random restricted transform `boost o rotation` with rapidity below
/// `max_rapidity`.
pub fn random_lorentz<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> LorentzTransform {
    let rot =
        LorentzTransform::rotation(random_unit(rng), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .expect("unit axis");
    let boost = LorentzTransform::boost(random_unit(rng), rng.random_range(0.0..max_rapidity)).expect("unit direction");
    boost.compose(&rot)
}

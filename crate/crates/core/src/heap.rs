//! Ternary structures on fields over a spacetime.
//!
//! * Nowhere-vanishing null sections carry the partial bracket
//!   `[u, v, w] = u g(v, w)`, defined only where `v` and `w` are nowhere
//!   proportional. It is para-associative:
//!   `[[a,b,c],d,e] = [a,[d,c,b],e] = [a,b,[c,d,e]]`.
//! * Arbitrary vector fields carry the same bracket as a total operation.
//! * Nowhere-vanishing scalar fields form a heap under `{f1,f2,f3} = f1 f2^-1 f3`.
//!
//! "For every point" is checked over a finite [`SamplingSet`].

use std::fmt;
use std::sync::Arc;

use crate::cone::{homothety, ConePoint};
use crate::minkowski::{eta_inner, FrameVector, Orientation};
use crate::spacetime::{Event, MetricField};
use crate::{Error, Result};

/// Finite evaluation grid for pointwise laws.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingSet {
    events: Vec<Event>,
}

impl SamplingSet {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptySampling);
        }
        Ok(Self { events })
    }

    pub fn single(p: Event) -> Self {
        Self { events: vec![p] }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

type SectionFn = Arc<dyn Fn(&Event) -> Result<ConePoint> + Send + Sync>;
type EventFn<T> = Arc<dyn Fn(&Event) -> T + Send + Sync>;

/// A nowhere-vanishing null vector field, valued in frame components.
#[derive(Clone)]
pub struct NullSection {
    spacetime: Arc<str>,
    eval: SectionFn,
}

impl fmt::Debug for NullSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NullSection({})", self.spacetime)
    }
}

impl NullSection {
    pub fn new(spacetime: &str, eval: impl Fn(&Event) -> Result<ConePoint> + Send + Sync + 'static) -> Self {
        Self { spacetime: spacetime.into(), eval: Arc::new(eval) }
    }

    pub fn constant(spacetime: &str, c: ConePoint) -> Self {
        Self::new(spacetime, move |_| Ok(c))
    }

    pub fn spacetime(&self) -> &str {
        &self.spacetime
    }

    pub fn at(&self, p: &Event) -> Result<ConePoint> {
        (self.eval)(p)
    }

    pub fn values(&self, s: &SamplingSet) -> Result<Vec<ConePoint>> {
        s.events().iter().map(|p| self.at(p)).collect()
    }

    /// Component of the section over `s`; [`Error::SignChange`] if it is not
    /// constant there.
    pub fn orientation_on(&self, s: &SamplingSet) -> Result<Orientation> {
        let values = self.values(s)?;
        let first = values[0].sigma();
        if values.iter().any(|c| c.sigma() != first) {
            return Err(Error::SignChange);
        }
        Ok(first)
    }

    /// Pointwise homothety.
    pub fn homothety(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveScale(lambda));
        }
        let inner = self.clone();
        Ok(Self::new(&self.spacetime, move |p| homothety(lambda, &inner.at(p)?)))
    }

    /// `f u` for a nowhere-vanishing scalar `f`.
    pub fn scale_by(&self, f: &InvertibleScalarField) -> Self {
        let (inner, f) = (self.clone(), f.clone());
        Self::new(&self.spacetime, move |p| {
            let s = f.eval(p);
            if s == 0.0 {
                return Err(Error::ZeroDivisor(s));
            }
            inner.at(p)?.scaled(s)
        })
    }

    /// Map every value to the opposite component keeping its spatial part.
    pub fn mirrored(&self) -> Self {
        let inner = self.clone();
        Self::new(&self.spacetime, move |p| Ok(inner.at(p)?.mirrored()))
    }
}

fn same_spacetime(sections: &[&NullSection]) -> Result<()> {
    let first = &sections[0].spacetime;
    if sections.iter().all(|s| &s.spacetime == first) {
        Ok(())
    } else {
        Err(Error::SpacetimeMismatch)
    }
}

/// `g_p(u_p, v_p)` at every event of `s`.
pub fn g_pair(u: &NullSection, v: &NullSection, s: &SamplingSet) -> Result<Vec<f64>> {
    same_spacetime(&[u, v])?;
    s.events().iter().map(|p| Ok(eta_inner(&u.at(p)?.embed(), &v.at(p)?.embed()))).collect()
}

/// Pairing at `p` if `v_p` and `w_p` are not proportional.
fn defined_pairing(v: &ConePoint, w: &ConePoint, tol: f64) -> Result<f64> {
    let (a, b) = (v.embed(), w.embed());
    let g = eta_inner(&a, &b);
    if g.abs() > tol * a.norm() * b.norm() {
        Ok(g)
    } else {
        Err(Error::ProportionalSections(g))
    }
}

/// True iff `|g(v,w)| > tol |v| |w|` at every event of `s`. For null vectors
/// the pairing vanishes exactly when they are proportional.
pub fn definedness(v: &NullSection, w: &NullSection, s: &SamplingSet, tol: f64) -> Result<bool> {
    same_spacetime(&[v, w])?;
    for p in s.events() {
        if defined_pairing(&v.at(p)?, &w.at(p)?, tol).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partial bracket `[u, v, w] = u g(v, w)`.
///
/// Fails with [`Error::ProportionalSections`] unless `v` and `w` are
/// non-proportional at every sampled event, and with [`Error::SignChange`] if
/// `g(v, w)` changes sign across `s`. The result lies in the component
/// `sigma_u * sign g(v, w)`.
pub fn ternary(u: &NullSection, v: &NullSection, w: &NullSection, s: &SamplingSet, tol: f64) -> Result<NullSection> {
    same_spacetime(&[u, v, w])?;
    let mut sign = None;
    for p in s.events() {
        let g = defined_pairing(&v.at(p)?, &w.at(p)?, tol)?;
        let here = Orientation::from_sign(g);
        if *sign.get_or_insert(here) != here {
            return Err(Error::SignChange);
        }
    }
    let (u, v, w) = (u.clone(), v.clone(), w.clone());
    Ok(NullSection::new(&u.spacetime.clone(), move |p| {
        let g = defined_pairing(&v.at(p)?, &w.at(p)?, tol)?;
        u.at(p)?.scaled(g)
    }))
}

/// `u1 *_w u2 = [u1, w, u2]`.
pub fn binary_fixed(
    w: &NullSection,
    u1: &NullSection,
    u2: &NullSection,
    s: &SamplingSet,
    tol: f64,
) -> Result<NullSection> {
    ternary(u1, w, u2, s, tol)
}

fn max_abs_diff(a: &FrameVector, b: &FrameVector) -> f64 {
    (*a - *b).max_abs()
}

/// Relative residual of the para-associative law for an arbitrary bracket
/// implementation. All three bracketings are compared with each other and with
/// `u1 g(u2,u3) g(u4,u5)`; the result is normalised by the magnitude of the
/// latter.
pub fn para_associativity_residual_with<B>(bracket: B, us: [&NullSection; 5], s: &SamplingSet) -> Result<f64>
where
    B: Fn(&NullSection, &NullSection, &NullSection) -> Result<NullSection>,
{
    let [u1, u2, u3, u4, u5] = us;
    let left = bracket(&bracket(u1, u2, u3)?, u4, u5)?;
    let middle = bracket(u1, &bracket(u4, u3, u2)?, u5)?;
    let right = bracket(u1, u2, &bracket(u3, u4, u5)?)?;
    let mut worst = 0.0_f64;
    for p in s.events() {
        let g23 = eta_inner(&u2.at(p)?.embed(), &u3.at(p)?.embed());
        let g45 = eta_inner(&u4.at(p)?.embed(), &u5.at(p)?.embed());
        let closed = u1.at(p)?.embed() * (g23 * g45);
        let scale = closed.max_abs();
        let sides = [left.at(p)?.embed(), middle.at(p)?.embed(), right.at(p)?.embed()];
        let dev = sides
            .iter()
            .flat_map(|a| sides.iter().map(move |b| max_abs_diff(a, b)))
            .chain(sides.iter().map(|a| max_abs_diff(a, &closed)))
            .fold(0.0, f64::max);
        worst = worst.max(dev / scale);
    }
    Ok(worst)
}

pub fn para_associativity_residual(us: [&NullSection; 5], s: &SamplingSet, tol: f64) -> Result<f64> {
    para_associativity_residual_with(|a, b, c| ternary(a, b, c, s, tol), us, s)
}

/// An arbitrary vector field in coordinate components.
#[derive(Clone)]
pub struct VectorField(EventFn<[f64; 4]>);

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorField(..)")
    }
}

impl VectorField {
    pub fn new(f: impl Fn(&Event) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(v: [f64; 4]) -> Self {
        Self::new(move |_| v)
    }

    pub fn eval(&self, p: &Event) -> [f64; 4] {
        (self.0)(p)
    }
}

/// The total bracket `[x, y, z] = x g(y, z)` on vector fields.
pub fn full_ternary(x: &VectorField, y: &VectorField, z: &VectorField, g: &MetricField) -> VectorField {
    let (x, y, z, g) = (x.clone(), y.clone(), z.clone(), g.clone());
    VectorField::new(move |p| {
        let s = g.pair(p, &y.eval(p), &z.eval(p));
        x.eval(p).map(|c| c * s)
    })
}

/// A scalar field that should not vanish on the sampling of interest.
#[derive(Clone)]
pub struct InvertibleScalarField(EventFn<f64>);

impl fmt::Debug for InvertibleScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("InvertibleScalarField(..)")
    }
}

impl InvertibleScalarField {
    pub fn new(f: impl Fn(&Event) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    pub fn eval(&self, p: &Event) -> f64 {
        (self.0)(p)
    }

    /// Pointwise reciprocal.
    pub fn inverse(&self) -> Self {
        let f = self.clone();
        Self::new(move |p| 1.0 / f.eval(p))
    }

    /// Check `|f| > tol` on `s` and return the (constant) sign.
    pub fn sign_on(&self, s: &SamplingSet, tol: f64) -> Result<Orientation> {
        let mut sign = None;
        for p in s.events() {
            let v = self.eval(p);
            if !(v.abs() > tol) {
                return Err(Error::ZeroDivisor(v));
            }
            let here = Orientation::from_sign(v);
            if *sign.get_or_insert(here) != here {
                return Err(Error::SignChange);
            }
        }
        Ok(sign.expect("sampling sets are nonempty"))
    }
}

/// The heap bracket `{f1, f2, f3} = f1 f2^-1 f3`.
pub fn heap_ternary(
    f1: &InvertibleScalarField,
    f2: &InvertibleScalarField,
    f3: &InvertibleScalarField,
    s: &SamplingSet,
    tol: f64,
) -> Result<InvertibleScalarField> {
    for p in s.events() {
        let v = f2.eval(p);
        if !(v.abs() > tol) {
            return Err(Error::ZeroDivisor(v));
        }
    }
    let (f1, f2, f3) = (f1.clone(), f2.clone(), f3.clone());
    Ok(InvertibleScalarField::new(move |p| f1.eval(p) / f2.eval(p) * f3.eval(p)))
}

fn distribution_residual(
    f: &InvertibleScalarField,
    u: &NullSection,
    v: &NullSection,
    w: &NullSection,
    s: &SamplingSet,
    tol: f64,
) -> Result<f64> {
    f.sign_on(s, tol)?;
    let lhs = ternary(u, v, w, s, tol)?.scale_by(f);
    let rhs = ternary(&u.scale_by(f), &v.scale_by(&f.inverse()), &w.scale_by(f), s, tol)?;
    let mut worst = 0.0_f64;
    for p in s.events() {
        let (a, b) = (lhs.at(p)?.embed(), rhs.at(p)?.embed());
        worst = worst.max(max_abs_diff(&a, &b) / a.max_abs());
    }
    Ok(worst)
}

/// Relative residual of `f [u,v,w] = [f u, f^-1 v, f w]`.
///
/// `f` must be nonzero with a constant sign on `s`, so that every scaled
/// section stays in a single component.
pub fn module_distribution_check(
    f: &InvertibleScalarField,
    u: &NullSection,
    v: &NullSection,
    w: &NullSection,
    s: &SamplingSet,
    tol: f64,
) -> Result<f64> {
    distribution_residual(f, u, v, w, s, tol)
}

/// Relative residual of `h [u,v,w] = [h u, h^-1 v, h w]` with
/// `h = {f1, f2, f3}`.
#[allow(clippy::too_many_arguments)]
pub fn heap_semiheap_distribution_check(
    f1: &InvertibleScalarField,
    f2: &InvertibleScalarField,
    f3: &InvertibleScalarField,
    u: &NullSection,
    v: &NullSection,
    w: &NullSection,
    s: &SamplingSet,
    tol: f64,
) -> Result<f64> {
    let h = heap_ternary(f1, f2, f3, s, tol)?;
    distribution_residual(&h, u, v, w, s, tol)
}

//! Seeded randomized verification of the algebraic laws.
//!
//! Every law draws from its own ChaCha stream derived from the suite seed, so
//! reports are reproducible bit for bit and independent of which other laws
//! run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ConePoint;
use crate::heap::{
    definedness, full_ternary, g_pair, heap_semiheap_distribution_check, heap_ternary, module_distribution_check,
    para_associativity_residual_with, ternary, InvertibleScalarField, NullSection, SamplingSet, VectorField,
};
use crate::minkowski::{eta_inner, random_unit, Orientation};
use crate::spacetime::{Event, MetricField, Spacetime};
use crate::{Error, Result};

/// Outcome of one law over a batch of random trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub spacetime: String,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub seed: u64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LawConfig {
    pub seed: u64,
    pub trials: usize,
    /// Residual bound for the semiheap and distribution laws.
    pub tol: f64,
    /// Relative pairing below which two sections count as proportional.
    pub definedness_tol: f64,
    /// Test hook: flip the component of every bracket output. The
    /// para-associativity suite must catch this.
    pub corrupt_ternary: bool,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            tol: crate::tolerance::LAW_RESIDUAL,
            definedness_tol: crate::tolerance::CLASSIFY,
            corrupt_ternary: false,
        }
    }
}

/// Bound for the heap laws on scalar fields, which involve only a handful of
/// roundings.
pub const HEAP_TOL: f64 = 1e-14;

/// The names of every law run by [`run_suite`], in report order.
pub const LAWS: [&str; 12] = [
    "para_associativity",
    "fibrewise_para_associativity",
    "partiality_gate",
    "ternary_closure",
    "semigroup_associativity",
    "full_ternary_para_associativity",
    "tau_product_associativity",
    "heap_biunitarity",
    "heap_para_associativity",
    "heap_inverse",
    "module_distribution",
    "heap_semiheap_distribution",
];

fn stream(seed: u64, law: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(law as u64 + 1);
    rng
}

/// Default evaluation grid: 20 events spread over the chart. For
/// Schwarzschild the radii are spaced inside `(1.1, 10)`.
pub fn default_sampling(spacetime: &Spacetime) -> Result<SamplingSet> {
    let coords: Vec<[f64; 4]> = match spacetime.name() {
        "minkowski" => (0..20)
            .map(|i| {
                let i = i as f64;
                [0.5 * i - 5.0, 3.0 * i.sin(), 2.0 * (1.3 * i).cos(), 0.1 * i]
            })
            .collect(),
        "schwarzschild" => (0..20)
            .map(|i| {
                let f = i as f64;
                [0.25 * f, 1.1 + 8.9 * (f + 1.0) / 21.0, 0.4 + 2.3 * f / 19.0, -2.5 + 5.0 * f / 19.0]
            })
            .collect(),
        other => return Err(Error::UnknownSpacetime(other.to_owned())),
    };
    SamplingSet::new(coords.into_iter().map(|x| spacetime.event(x)).collect::<Result<_>>()?)
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Orientation {
    if rng.random::<bool>() {
        Orientation::Future
    } else {
        Orientation::Past
    }
}

/// Smooth wave `sum_i amp_i sin(k_i . x + phase_i)` components.
#[derive(Clone, Copy, Debug)]
struct Wave {
    amp: [f64; 3],
    k: [[f64; 4]; 3],
    phase: [f64; 3],
}

impl Wave {
    fn random<R: Rng + ?Sized>(rng: &mut R, amp: f64) -> Self {
        Self {
            amp: std::array::from_fn(|_| rng.random_range(-amp..=amp)),
            k: std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0))),
            phase: std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU)),
        }
    }

    fn at(&self, x: &[f64; 4]) -> [f64; 3] {
        std::array::from_fn(|i| {
            let arg: f64 = self.k[i].iter().zip(x).map(|(a, b)| a * b).sum();
            self.amp[i] * (arg + self.phase[i]).sin()
        })
    }
}

/// A smooth nowhere-vanishing null section in a fixed component: a constant
/// spatial vector of norm in `[0.5, 2]` plus a wave of at most a third of its
/// size.
pub fn random_section<R: Rng + ?Sized>(rng: &mut R, spacetime: &str, sigma: Orientation) -> NullSection {
    let norm = rng.random_range(0.5..2.0);
    let base = random_unit(rng).map(|c| c * norm);
    let wave = Wave::random(rng, norm / 9.0);
    NullSection::new(spacetime, move |p| {
        let w = wave.at(p.coords());
        ConePoint::new(sigma, std::array::from_fn(|i| base[i] + w[i]))
    })
}

/// A smooth scalar `sign * c * exp(a sin(k . x + phase))`, never zero.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, sign: f64) -> InvertibleScalarField {
    let c = rng.random_range(0.5..2.0);
    let a = rng.random_range(0.0..0.5);
    let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    InvertibleScalarField::new(move |p| {
        let arg: f64 = k.iter().zip(p.coords()).map(|(a, b)| a * b).sum();
        sign * c * (a * (arg + phase).sin()).exp()
    })
}

/// `h v` for a random smooth nowhere-vanishing `h`, possibly negative.
pub fn proportional_partner<R: Rng + ?Sized>(rng: &mut R, v: &NullSection) -> NullSection {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    v.scale_by(&random_invertible(rng, sign))
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Unit vector perpendicular to `s`, taken from `hint` when it is not almost
/// parallel to `s`.
fn perpendicular_unit(s: &[f64; 3], hint: &[f64; 3]) -> [f64; 3] {
    let s2 = dot3(s, s);
    for h in [*hint, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
        let d = dot3(&h, s) / s2;
        let q: [f64; 3] = std::array::from_fn(|i| h[i] - d * s[i]);
        let n = dot3(&q, &q).sqrt();
        if n > 0.1 {
            return q.map(|c| c / n);
        }
    }
    unreachable!("two coordinate axes cannot both be parallel to s")
}

/// A section whose spatial direction is `v`'s rotated by an angle in
/// `[0.5, pi - 0.5]`, in a random component and rescaled. The pairing with
/// `v` is then bounded away from zero whatever the components.
pub fn nonproportional_partner<R: Rng + ?Sized>(rng: &mut R, v: &NullSection) -> NullSection {
    let hint = random_unit(rng);
    let (sin, cos) = rng.random_range(0.5..std::f64::consts::PI - 0.5).sin_cos();
    let sigma = random_sign(rng);
    let scale = random_invertible(rng, 1.0);
    let name = v.spacetime().to_owned();
    let v = v.clone();
    NullSection::new(&name, move |p| {
        let s = v.at(p)?.spatial();
        let n = perpendicular_unit(&s, &hint);
        let nxs = cross3(&n, &s);
        let k = scale.eval(p);
        ConePoint::new(sigma, std::array::from_fn(|i| k * (s[i] * cos + nxs[i] * sin)))
    })
}

/// A smooth vector field with arbitrary (not necessarily null) coordinate
/// components.
pub fn random_vector_field<R: Rng + ?Sized>(rng: &mut R) -> VectorField {
    let base: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    let wave = Wave::random(rng, 0.5);
    let t_amp = rng.random_range(-0.5..0.5);
    VectorField::new(move |p| {
        let w = wave.at(p.coords());
        [base[0] + t_amp * w[0] * w[1], base[1] + w[0], base[2] + w[1], base[3] + w[2]]
    })
}

struct Tally {
    trials: usize,
    failures: usize,
    max_residual: f64,
    tol: f64,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Self { trials: 0, failures: 0, max_residual: 0.0, tol }
    }

    fn residual(&mut self, r: f64) {
        self.trials += 1;
        if !(r <= self.tol) {
            self.failures += 1;
        }
        if r.is_nan() {
            self.max_residual = f64::INFINITY;
        } else {
            self.max_residual = self.max_residual.max(r);
        }
    }

    fn outcome(&mut self, ok: bool) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn report(self, law: &str, spacetime: &Spacetime, seed: u64) -> LawReport {
        LawReport {
            law: law.to_owned(),
            spacetime: spacetime.name().to_owned(),
            trials: self.trials,
            failures: self.failures,
            max_residual: self.max_residual,
            tol: self.tol,
            seed,
            pass: self.failures == 0,
        }
    }
}

fn bracket<'a>(
    cfg: &'a LawConfig,
    s: &'a SamplingSet,
) -> impl Fn(&NullSection, &NullSection, &NullSection) -> Result<NullSection> + 'a {
    move |u, v, w| {
        let out = ternary(u, v, w, s, cfg.definedness_tol)?;
        Ok(if cfg.corrupt_ternary { out.mirrored() } else { out })
    }
}

fn is_undefined(e: &Error) -> bool {
    matches!(e, Error::ProportionalSections(_) | Error::SignChange)
}

/// Draw defined quintuples until `trials` have been checked. Undefined draws
/// are redrawn; other errors count as failures.
fn para_associativity_on(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig, law: usize) -> Tally {
    let mut rng = stream(cfg.seed, law);
    let mut tally = Tally::new(cfg.tol);
    let name = spacetime.name();
    let mut redraws = 0usize;
    while tally.trials < cfg.trials {
        let us: [NullSection; 5] = std::array::from_fn(|_| {
            let sigma = random_sign(&mut rng);
            random_section(&mut rng, name, sigma)
        });
        match para_associativity_residual_with(bracket(cfg, s), [&us[0], &us[1], &us[2], &us[3], &us[4]], s) {
            Ok(r) => tally.residual(r),
            Err(e) if is_undefined(&e) && redraws < 10 * cfg.trials => redraws += 1,
            Err(_) => tally.outcome(false),
        }
    }
    tally
}

pub fn para_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    para_associativity_on(spacetime, s, cfg, 0).report(LAWS[0], spacetime, cfg.seed)
}

/// The same law on a single fibre.
pub fn fibrewise_para_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let one = SamplingSet::single(s.events()[0].clone());
    para_associativity_on(spacetime, &one, cfg, 1).report(LAWS[1], spacetime, cfg.seed)
}

/// `trials` proportional pairs must be rejected and `trials` constructed
/// non-proportional pairs accepted. The residual is the largest relative
/// pairing met among the proportional pairs.
pub fn partiality_gate(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 2);
    let mut tally = Tally::new(cfg.definedness_tol);
    let name = spacetime.name();
    for _ in 0..cfg.trials {
        let (su, sv) = (random_sign(&mut rng), random_sign(&mut rng));
        let u = random_section(&mut rng, name, su);
        let v = random_section(&mut rng, name, sv);
        let w = proportional_partner(&mut rng, &v);
        let rejected = matches!(ternary(&u, &v, &w, s, cfg.definedness_tol), Err(Error::ProportionalSections(_)));
        let worst = g_pair(&v, &w, s).and_then(|g| {
            let vs = v.values(s)?;
            let ws = w.values(s)?;
            Ok(g.iter()
                .zip(vs.iter().zip(&ws))
                .map(|(g, (a, b))| g.abs() / (a.embed().norm() * b.embed().norm()))
                .fold(0.0, f64::max))
        });
        match worst {
            Ok(r) => tally.max_residual = tally.max_residual.max(r),
            Err(_) => tally.max_residual = f64::INFINITY,
        }
        tally.outcome(rejected);

        let w = nonproportional_partner(&mut rng, &v);
        tally.outcome(ternary(&u, &v, &w, s, cfg.definedness_tol).is_ok());
    }
    tally.report(LAWS[2], spacetime, cfg.seed)
}

/// Bracket outputs are null and nowhere vanishing on the sampling.
pub fn ternary_closure(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 3);
    let mut tally = Tally::new(crate::tolerance::ROUND_TRIP);
    let name = spacetime.name();
    while tally.trials < cfg.trials {
        let us: [NullSection; 3] = std::array::from_fn(|_| {
            let sigma = random_sign(&mut rng);
            random_section(&mut rng, name, sigma)
        });
        if definedness(&us[1], &us[2], s, cfg.definedness_tol) != Ok(true) {
            continue;
        }
        let r = bracket(cfg, s)(&us[0], &us[1], &us[2]).and_then(|out| {
            out.orientation_on(s)?;
            out.values(s)?.iter().try_fold(0.0_f64, |m, c| {
                let e = c.embed();
                if e.max_abs() == 0.0 {
                    return Err(Error::ZeroSpatialPart);
                }
                Ok(m.max(eta_inner(&e, &e).abs() / e.norm_sq()))
            })
        });
        match r {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[3], spacetime, cfg.seed)
}

fn sections_residual(a: &NullSection, b: &NullSection, s: &SamplingSet) -> Result<f64> {
    s.events().iter().try_fold(0.0_f64, |m, p| {
        let (x, y) = (a.at(p)?.embed(), b.at(p)?.embed());
        Ok(m.max((x - y).max_abs() / x.max_abs()))
    })
}

/// `(a *_w b) *_w c = a *_w (b *_w c)`.
pub fn semigroup_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 4);
    let mut tally = Tally::new(cfg.tol);
    let name = spacetime.name();
    let br = bracket(cfg, s);
    let mut redraws = 0usize;
    while tally.trials < cfg.trials {
        let w = random_section(&mut rng, name, Orientation::Future);
        let [a, b, c]: [NullSection; 3] = std::array::from_fn(|_| {
            let sigma = random_sign(&mut rng);
            random_section(&mut rng, name, sigma)
        });
        let r = (|| {
            let left = br(&br(&a, &w, &b)?, &w, &c)?;
            let right = br(&a, &w, &br(&b, &w, &c)?)?;
            sections_residual(&left, &right, s)
        })();
        match r {
            Ok(r) => tally.residual(r),
            Err(e) if is_undefined(&e) && redraws < 10 * cfg.trials => redraws += 1,
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[4], spacetime, cfg.seed)
}

/// `sum |g_{mu nu}| |a^mu| |b^nu|`, the natural size of `g(a, b)`.
fn abs_pair(g: &MetricField, p: &Event, a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let m = g.eval(p);
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].abs() * a[i].abs() * b[j].abs()).sum()
}

fn max_abs4(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
}

/// The total bracket on vector fields, with no definedness restriction.
pub fn full_ternary_para_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 5);
    let mut tally = Tally::new(cfg.tol);
    let g = spacetime.metric();
    for _ in 0..cfg.trials {
        let xs: [VectorField; 5] = std::array::from_fn(|_| random_vector_field(&mut rng));
        let left = full_ternary(&full_ternary(&xs[0], &xs[1], &xs[2], g), &xs[3], &xs[4], g);
        let middle = full_ternary(&xs[0], &full_ternary(&xs[3], &xs[2], &xs[1], g), &xs[4], g);
        let right = full_ternary(&xs[0], &xs[1], &full_ternary(&xs[2], &xs[3], &xs[4], g), g);
        let mut worst = 0.0_f64;
        for p in s.events() {
            let v: Vec<[f64; 4]> = xs.iter().map(|x| x.eval(p)).collect();
            let scale = max_abs4(&v[0]) * abs_pair(g, p, &v[1], &v[2]) * abs_pair(g, p, &v[3], &v[4]);
            let closed = v[0].map(|c| c * g.pair(p, &v[1], &v[2]) * g.pair(p, &v[3], &v[4]));
            let sides = [left.eval(p), middle.eval(p), right.eval(p), closed];
            for a in &sides {
                for b in &sides {
                    let d = (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
                    worst = worst.max(d / scale);
                }
            }
        }
        tally.residual(worst);
    }
    tally.report(LAWS[5], spacetime, cfg.seed)
}

/// `(x *_tau y) *_tau z = x *_tau (y *_tau z)` with the time orientation.
pub fn tau_product_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 6);
    let mut tally = Tally::new(cfg.tol);
    let g = spacetime.metric();
    let tau = {
        let t = spacetime.time_orientation().clone();
        VectorField::new(move |p| t.eval(p))
    };
    for _ in 0..cfg.trials {
        let [x, y, z]: [VectorField; 3] = std::array::from_fn(|_| random_vector_field(&mut rng));
        let left = full_ternary(&full_ternary(&x, &tau, &y, g), &tau, &z, g);
        let right = full_ternary(&x, &tau, &full_ternary(&y, &tau, &z, g), g);
        let mut worst = 0.0_f64;
        for p in s.events() {
            let t = tau.eval(p);
            let scale = max_abs4(&x.eval(p)) * abs_pair(g, p, &t, &y.eval(p)) * abs_pair(g, p, &t, &z.eval(p));
            let (a, b) = (left.eval(p), right.eval(p));
            let d = (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
            worst = worst.max(d / scale);
        }
        tally.residual(worst);
    }
    tally.report(LAWS[6], spacetime, cfg.seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn random_signed_invertible<R: Rng + ?Sized>(rng: &mut R) -> InvertibleScalarField {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    random_invertible(rng, sign)
}

/// `{f, f, g} = g` and `{g, f, f} = g`.
pub fn heap_biunitarity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 7);
    let mut tally = Tally::new(HEAP_TOL);
    for _ in 0..cfg.trials {
        let f = random_signed_invertible(&mut rng);
        let g = random_signed_invertible(&mut rng);
        let r = heap_ternary(&f, &f, &g, s, 0.0).and_then(|ffg| {
            let gff = heap_ternary(&g, &f, &f, s, 0.0)?;
            Ok(s.events()
                .iter()
                .map(|p| rel(ffg.eval(p), g.eval(p)).max(rel(gff.eval(p), g.eval(p))))
                .fold(0.0, f64::max))
        });
        match r {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[7], spacetime, cfg.seed)
}

/// Para-associativity of `{f1, f2, f3} = f1 f2^-1 f3`.
pub fn heap_para_associativity(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 8);
    let mut tally = Tally::new(HEAP_TOL);
    for _ in 0..cfg.trials {
        let f: [InvertibleScalarField; 5] = std::array::from_fn(|_| random_signed_invertible(&mut rng));
        let h = |a: &_, b: &_, c: &_| heap_ternary(a, b, c, s, 0.0);
        let r = (|| {
            let left = h(&h(&f[0], &f[1], &f[2])?, &f[3], &f[4])?;
            let middle = h(&f[0], &h(&f[3], &f[2], &f[1])?, &f[4])?;
            let right = h(&f[0], &f[1], &h(&f[2], &f[3], &f[4])?)?;
            Ok::<_, Error>(
                s.events()
                    .iter()
                    .map(|p| {
                        let (a, b, c) = (left.eval(p), middle.eval(p), right.eval(p));
                        rel(a, b).max(rel(b, c)).max(rel(a, c))
                    })
                    .fold(0.0, f64::max),
            )
        })();
        match r {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[8], spacetime, cfg.seed)
}

/// `{f1, f2, f3}^-1 = {f1^-1, f2^-1, f3^-1}`.
pub fn heap_inverse(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 9);
    let mut tally = Tally::new(HEAP_TOL);
    for _ in 0..cfg.trials {
        let f: [InvertibleScalarField; 3] = std::array::from_fn(|_| random_signed_invertible(&mut rng));
        let r = (|| {
            let lhs = heap_ternary(&f[0], &f[1], &f[2], s, 0.0)?.inverse();
            let rhs = heap_ternary(&f[0].inverse(), &f[1].inverse(), &f[2].inverse(), s, 0.0)?;
            Ok::<_, Error>(s.events().iter().map(|p| rel(lhs.eval(p), rhs.eval(p))).fold(0.0, f64::max))
        })();
        match r {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[9], spacetime, cfg.seed)
}

fn defined_triple<R: Rng + ?Sized>(rng: &mut R, name: &str, s: &SamplingSet, tol: f64) -> [NullSection; 3] {
    loop {
        let us: [NullSection; 3] = std::array::from_fn(|_| {
            let sigma = random_sign(rng);
            random_section(rng, name, sigma)
        });
        if definedness(&us[1], &us[2], s, tol) == Ok(true) && ternary(&us[0], &us[1], &us[2], s, tol).is_ok() {
            return us;
        }
    }
}

/// `f [u,v,w] = [f u, f^-1 v, f w]` for positive `f`.
pub fn module_distribution(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 10);
    let mut tally = Tally::new(cfg.tol);
    for _ in 0..cfg.trials {
        let [u, v, w] = defined_triple(&mut rng, spacetime.name(), s, cfg.definedness_tol);
        let f = random_invertible(&mut rng, 1.0);
        match module_distribution_check(&f, &u, &v, &w, s, cfg.definedness_tol) {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[10], spacetime, cfg.seed)
}

/// `{f1,f2,f3} [u,v,w] = [{..} u, {..}^-1 v, {..} w]` with the signs of the
/// `f_i` drawn so that `{f1,f2,f3}` is positive.
pub fn heap_semiheap_distribution(spacetime: &Spacetime, s: &SamplingSet, cfg: &LawConfig) -> LawReport {
    let mut rng = stream(cfg.seed, 11);
    let mut tally = Tally::new(cfg.tol);
    for _ in 0..cfg.trials {
        let [u, v, w] = defined_triple(&mut rng, spacetime.name(), s, cfg.definedness_tol);
        let s1 = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let s2 = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let f1 = random_invertible(&mut rng, s1);
        let f2 = random_invertible(&mut rng, s2);
        let f3 = random_invertible(&mut rng, s1 * s2);
        match heap_semiheap_distribution_check(&f1, &f2, &f3, &u, &v, &w, s, cfg.definedness_tol) {
            Ok(r) => tally.residual(r),
            Err(_) => tally.outcome(false),
        }
    }
    tally.report(LAWS[11], spacetime, cfg.seed)
}

/// Every law over the default sampling of `spacetime`, in [`LAWS`] order.
pub fn run_suite(spacetime: &Spacetime, cfg: &LawConfig) -> Result<Vec<LawReport>> {
    let s = default_sampling(spacetime)?;
    type Law = fn(&Spacetime, &SamplingSet, &LawConfig) -> LawReport;
    let laws: [Law; 12] = [
        para_associativity,
        fibrewise_para_associativity,
        partiality_gate,
        ternary_closure,
        semigroup_associativity,
        full_ternary_para_associativity,
        tau_product_associativity,
        heap_biunitarity,
        heap_para_associativity,
        heap_inverse,
        module_distribution,
        heap_semiheap_distribution,
    ];
    Ok(laws.iter().map(|law| law(spacetime, &s, cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{minkowski, schwarzschild};

    fn small(seed: u64) -> LawConfig {
        LawConfig { seed, trials: 40, ..LawConfig::default() }
    }

    #[test]
    fn suites_pass_on_named_spacetimes() {
        for st in [minkowski(), schwarzschild()] {
            let reports = run_suite(&st, &small(7)).unwrap();
            assert_eq!(reports.len(), LAWS.len());
            for r in &reports {
                assert!(r.pass, "{r:?}");
                assert!(r.trials >= 40);
            }
        }
    }

    #[test]
    fn corrupted_bracket_is_caught() {
        let st = minkowski();
        let s = default_sampling(&st).unwrap();
        let cfg = LawConfig { corrupt_ternary: true, ..small(3) };
        let r = para_associativity(&st, &s, &cfg);
        assert!(!r.pass);
        assert!(r.failures > 0);
    }

    #[test]
    fn suites_are_deterministic() {
        let st = schwarzschild();
        assert_eq!(run_suite(&st, &small(99)).unwrap(), run_suite(&st, &small(99)).unwrap());
    }

    #[test]
    fn partners_behave_as_constructed() {
        let st = minkowski();
        let s = default_sampling(&st).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let v = random_section(&mut rng, "minkowski", Orientation::Future);
            assert_eq!(definedness(&v, &proportional_partner(&mut rng, &v), &s, 1e-9), Ok(false));
            let w = nonproportional_partner(&mut rng, &v);
            for (g, (a, b)) in
                g_pair(&v, &w, &s).unwrap().iter().zip(v.values(&s).unwrap().iter().zip(w.values(&s).unwrap()))
            {
                // |cos(angle) -+ 1| >= 1 - cos(0.5)
                assert!(g.abs() >= 0.12 * a.norm() * b.norm(), "{g}");
            }
        }
    }

    #[test]
    fn unknown_spacetime_has_no_default_sampling() {
        let st = minkowski().weyl_transform(&crate::ScalarField::constant(0.0));
        assert!(matches!(default_sampling(&st), Err(Error::UnknownSpacetime(_))));
    }
}

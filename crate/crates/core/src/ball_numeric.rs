//! Double-precision geometry of the unit ball `B(C²)`: the action of
//! `PU(2,1)`, the Bergman distance, membership in the partial Dirichlet
//! domain `F_S`, its Monte-Carlo volume and its circumradius `r₀`.
//!
//! Exact elements are moved to the ball model by `g̃ = Dγ₀gγ₀⁻¹D⁻¹` with
//! `D = diag(1, 1, κ)`, `κ = √(√3 − 1)`; `g̃` preserves `diag(1, 1, −1)`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::lattice::{Constants, Mat3, ProjUnitary};
use crate::orbit_search::KGroup;
use crate::par;

pub type C64 = Complex64;

/// Slack on every `≥ 1` comparison, so that boundary points count as inside.
pub const FS_TOLERANCE: f64 = 1e-9;

/// Below this the third homogeneous coordinate is treated as zero.
pub const PROJECTION_EPS: f64 = 1e-12;

pub fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// `κ = √(r − 1)`.
pub fn kappa() -> f64 {
    (sqrt3() - 1.0).sqrt()
}

/// `½ cosh⁻¹(√3 + 1)`, half the displacement of `bu⁻¹b`.
pub fn r0_closed_form() -> f64 {
    0.5 * (sqrt3() + 1.0).acosh()
}

/// `2√3 − 3`, the bound on `|w|²` over `F_S`.
pub fn rho0_sq_closed_form() -> f64 {
    2.0 * sqrt3() - 3.0
}

fn zeta(k: i32) -> C64 {
    C64::from_polar(1.0, PI * k as f64 / 6.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BallPoint {
    #[serde(serialize_with = "ser_c64")]
    pub z1: C64,
    #[serde(serialize_with = "ser_c64")]
    pub z2: C64,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl BallPoint {
    pub fn new(z1: C64, z2: C64) -> Self {
        BallPoint { z1, z2 }
    }

    pub fn origin() -> Self {
        BallPoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_inside(&self) -> bool {
        self.norm_sqr() < 1.0
    }

    pub fn scale(&self, t: f64) -> BallPoint {
        BallPoint::new(self.z1 * t, self.z2 * t)
    }

    fn inner(&self, w: &BallPoint) -> C64 {
        self.z1 * w.z1.conj() + self.z2 * w.z2.conj()
    }
}

/// A complex `3 × 3` matrix acting on homogeneous coordinates `(z₁, z₂, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericUnitary {
    pub m: [[C64; 3]; 3],
}

impl NumericUnitary {
    pub fn identity() -> Self {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        NumericUnitary { m }
    }

    pub fn mul(&self, rhs: &NumericUnitary) -> NumericUnitary {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|t| self.m[i][t] * rhs.m[t][j]).sum();
            }
        }
        NumericUnitary { m }
    }

    /// `F₀g*F₀`, the inverse of a matrix unitary for `F₀ = diag(1, 1, −1)`.
    pub fn unitary_inverse(&self) -> NumericUnitary {
        let s = [1.0, 1.0, -1.0];
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[j][i].conj() * (s[i] * s[j]);
            }
        }
        NumericUnitary { m }
    }

    /// `max |g*F₀g − F₀|`.
    pub fn unitarity_residual(&self) -> f64 {
        let s = [1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v: C64 = (0..3)
                    .map(|t| self.m[t][i].conj() * self.m[t][j] * s[t])
                    .sum();
                let target = if i == j { s[i] } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    pub fn entry33_abs2(&self) -> f64 {
        self.m[2][2].norm_sqr()
    }

    /// Third row `(g₃₁, g₃₂, g₃₃)`.
    pub fn third_row(&self) -> [C64; 3] {
        self.m[2]
    }

    fn apply(&self, v: [C64; 3]) -> [C64; 3] {
        std::array::from_fn(|i| (0..3).map(|t| self.m[i][t] * v[t]).sum())
    }
}

type CMat = [[C64; 3]; 3];

fn cyc_matrix(m: &Mat3) -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| m.entry(i, j).to_complex()))
}

fn mul3(a: &CMat, b: &CMat) -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|t| a[i][t] * b[t][j]).sum()))
}

fn inverse3(a: &CMat) -> CMat {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1]
    };
    let det: C64 = (0..3).map(|j| a[0][j] * c(0, j)).sum();
    std::array::from_fn(|i| std::array::from_fn(|j| c(j, i) / det))
}

/// `(Dγ₀, γ₀⁻¹D⁻¹)`.
fn conjugators() -> &'static (CMat, CMat) {
    static C: OnceLock<(CMat, CMat)> = OnceLock::new();
    C.get_or_init(|| {
        let g0 = cyc_matrix(&Constants::get().gamma0);
        let mut d = [[C64::new(0.0, 0.0); 3]; 3];
        let mut dinv = d;
        for i in 0..3 {
            let s = if i == 2 { kappa() } else { 1.0 };
            d[i][i] = C64::new(s, 0.0);
            dinv[i][i] = C64::new(1.0 / s, 0.0);
        }
        (mul3(&d, &g0), mul3(&inverse3(&g0), &dinv))
    })
}

/// `g̃ = Dγ₀gγ₀⁻¹D⁻¹` for an exact matrix unitary for `F`.
pub fn mat_to_numeric(g: &Mat3) -> NumericUnitary {
    let (l, r) = conjugators();
    NumericUnitary {
        m: mul3(&mul3(l, &cyc_matrix(g)), r),
    }
}

pub fn to_numeric(g: &ProjUnitary) -> NumericUnitary {
    mat_to_numeric(g.matrix())
}

/// `g.z`, defined by `g̃(z₁, z₂, 1)ᵗ = λ(z₁′, z₂′, 1)ᵗ`.
pub fn act(g: &NumericUnitary, z: &BallPoint) -> Result<BallPoint> {
    let v = g.apply([z.z1, z.z2, C64::new(1.0, 0.0)]);
    if v[2].norm() < PROJECTION_EPS {
        return Err(Error::DegenerateProjection);
    }
    Ok(BallPoint::new(v[0] / v[2], v[1] / v[2]))
}

/// `cosh² d(z, w) = |1 − ⟨z, w⟩|² / ((1 − |z|²)(1 − |w|²))`.
pub fn cosh2_dist(z: &BallPoint, w: &BallPoint) -> f64 {
    let num = (C64::new(1.0, 0.0) - z.inner(w)).norm_sqr();
    num / ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()))
}

pub fn dist(z: &BallPoint, w: &BallPoint) -> f64 {
    cosh2_dist(z, w).max(1.0).sqrt().acosh()
}

/// `d(0, w) = tanh⁻¹|w|`.
pub fn dist_from_origin(w: &BallPoint) -> f64 {
    w.norm().atanh()
}

/// The bounded component `B_ρ` of the complement of the twelve unit discs
/// centred at `ρζ^λ`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CircleFamily {
    pub rho: f64,
    /// `ρ′`, the largest modulus of a point of `B_ρ`.
    pub inner: f64,
    /// `ρ″`, the smallest modulus of a point of the unbounded component.
    pub outer: f64,
}

impl CircleFamily {
    pub fn b1() -> Self {
        let r = sqrt3();
        CircleFamily {
            rho: (r + 1.0) / SQRT_2,
            inner: 1.0,
            outer: r + 1.0,
        }
    }

    pub fn b2() -> Self {
        let r = sqrt3();
        CircleFamily {
            rho: r + 1.0,
            inner: (r + 1.0) / SQRT_2,
            outer: r * (r + 1.0) / SQRT_2,
        }
    }

    pub fn centres(&self) -> [C64; 12] {
        std::array::from_fn(|l| zeta(l as i32) * self.rho)
    }

    pub fn contains(&self, p: C64, tol: f64) -> bool {
        if p.norm() > self.inner + tol {
            return false;
        }
        // |p − ρζ^λ|² ≥ (1 − tol)²
        let lim = (1.0 - tol) * (1.0 - tol);
        (0..12).all(|l| (p - zeta(l) * self.rho).norm_sqr() >= lim)
    }
}

/// The six `B₁` pairs and eight `B₂` pairs `(u₁, u₂)`.
#[derive(Clone, Debug)]
pub struct FsConditions {
    pub b1: CircleFamily,
    pub b2: CircleFamily,
    pub pairs_b1: [(C64, C64); 6],
    pub pairs_b2: [(C64, C64); 8],
}

impl FsConditions {
    pub fn get() -> &'static FsConditions {
        static F: OnceLock<FsConditions> = OnceLock::new();
        F.get_or_init(|| {
            let r = sqrt3();
            let ki = 1.0 / kappa();
            let s = C64::new((r + 1.0).sqrt(), 0.0);
            let zero = C64::new(0.0, 0.0);
            let e = C64::from_polar(ki, -PI / 12.0);
            let zp1 = zeta(1) + 1.0;
            let mut pairs_b1 = [
                (s, zero),
                (zero, s),
                (zero, zero),
                (zero, zero),
                (zero, zero),
                (zero, zero),
            ];
            let mut pairs_b2 = [(zero, zero); 8];
            for nu in 0..4 {
                pairs_b1[2 + nu] = (e, e * zeta(3 * nu as i32));
                let t = zp1 * zeta(1 + 3 * nu as i32) * ki;
                pairs_b2[nu] = (C64::new(ki, 0.0), t);
                pairs_b2[4 + nu] = (t, C64::new(ki, 0.0));
            }
            FsConditions {
                b1: CircleFamily::b1(),
                b2: CircleFamily::b2(),
                pairs_b1,
                pairs_b2,
            }
        })
    }
}

/// Membership in `F_S` by the fourteen circle-family conditions.
pub fn in_fs(w: &BallPoint) -> bool {
    in_fs_tol(w, FS_TOLERANCE)
}

pub fn in_fs_tol(w: &BallPoint, tol: f64) -> bool {
    let f = FsConditions::get();
    f.pairs_b1
        .iter()
        .all(|&(a, b)| f.b1.contains(a * w.z1 + b * w.z2, tol))
        && f.pairs_b2
            .iter()
            .all(|&(a, b)| f.b2.contains(a * w.z1 + b * w.z2, tol))
}

/// Third rows `(g₃₁, g₃₂, g₃₃)` of `g̃`, one per right coset `Kg` in
/// `KbK ∪ Kbu⁻¹bK`. A point `w` lies in `F_S` iff
/// `|g₃₁w₁ + g₃₂w₂ + g₃₃| ≥ 1` for all of them.
#[derive(Clone, Debug)]
pub struct HalfSpaceRows {
    pub rows: Vec<[C64; 3]>,
    /// Number of rows from `KbK` and from `Kbu⁻¹bK`.
    pub counts: [usize; 2],
}

impl HalfSpaceRows {
    /// Elements of `K` have representatives `diag(A, 1)` up to `ζ^ν`, so the
    /// third row of `g` up to `ζ^ν` determines the coset `Kg`.
    pub fn build(k: &KGroup) -> HalfSpaceRows {
        let c = Constants::get();
        let mut rows = Vec::new();
        let mut counts = [0; 2];
        for (slot, gamma) in [c.gamma2(), c.gamma3()].iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for kk in k.elements() {
                let g = gamma.matrix() * kk.matrix();
                let row: [CycInt; 3] = std::array::from_fn(|j| g.entry(2, j).clone());
                let key = (0..12)
                    .scan(row, |r, _| {
                        let out = r.clone();
                        *r = r.clone().map(|x| x.mul_zeta());
                        Some(out)
                    })
                    .min()
                    .expect("twelve rotations");
                if seen.insert(key) {
                    rows.push(mat_to_numeric(&g).third_row());
                    counts[slot] += 1;
                }
            }
        }
        HalfSpaceRows { rows, counts }
    }

    pub fn contains(&self, w: &BallPoint, tol: f64) -> bool {
        self.rows
            .iter()
            .all(|r| (r[0] * w.z1 + r[1] * w.z2 + r[2]).norm() >= 1.0 - tol)
    }
}

/// Uniform direction on the unit sphere of `C²`.
fn random_direction<R: Rng>(rng: &mut R) -> BallPoint {
    let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    BallPoint::new(C64::new(x[0] / n, x[1] / n), C64::new(x[2] / n, x[3] / n))
}

/// A point with `d(0, ·)` distributed as the hyperbolic volume of the ball
/// of radius `radius` (density `∝ sinh³t cosh t`, i.e. `sinh⁴t` uniform).
pub fn random_point_in_hyperbolic_ball<R: Rng>(rng: &mut R, radius: f64) -> BallPoint {
    let s = radius.sinh() * rng.gen::<f64>().powf(0.25);
    let tanh_t = s / (1.0 + s * s).sqrt();
    random_direction(rng).scale(tanh_t)
}

/// Hyperbolic volume of a ball of radius `radius`, normalized so that
/// `dvol = (2/π²) sinh³t cosh t dt dΘ`.
pub fn ball_volume(radius: f64) -> f64 {
    radius.sinh().powi(4)
}

pub const MIN_VOLUME_SAMPLES: u64 = 1_000_000;

/// Samples per independently seeded stream.
const VOLUME_CHUNK: u64 = 1 << 16;

/// Order of the stabilizer `K` of `0` in `Γ`. `F_S` is `K`-invariant and
/// `K` acts freely on a dense open subset, so `F_S` is the union of 288
/// translates of a fundamental domain for `Γ`.
pub const STABILIZER_ORDER: u64 = 288;

#[derive(Clone, Debug, Serialize)]
pub struct VolumeEstimate {
    pub samples: u64,
    pub seed: u64,
    pub radius: f64,
    pub hits: u64,
    /// `vol(F_S)`.
    pub fs_volume: f64,
    pub fs_volume_std_error: f64,
    /// `vol(F_S)/|K|`, the covolume of `Γ`.
    pub estimate: f64,
    pub std_error: f64,
    pub expected: f64,
    pub relative_error: f64,
    /// `estimate + 3σ < 2/864`.
    pub certifies_upper_bound: bool,
}

/// Monte-Carlo estimate of `vol(F_S)`, requiring at least
/// [`MIN_VOLUME_SAMPLES`] samples.
pub fn volume_fs(samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_VOLUME_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "volume needs at least {MIN_VOLUME_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(estimate_volume(samples, seed))
}

/// Number of samples of the hyperbolic ball of radius `r₀ + 10⁻³` landing in
/// `F_S`. Each chunk of samples has its own ChaCha stream, so the count does
/// not depend on the number of worker threads.
pub fn count_hits(samples: u64, seed: u64, radius: f64) -> u64 {
    let chunks = samples.div_ceil(VOLUME_CHUNK);
    par::map_range(chunks as usize, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let n = VOLUME_CHUNK.min(samples - c as u64 * VOLUME_CHUNK);
        (0..n)
            .filter(|_| in_fs(&random_point_in_hyperbolic_ball(&mut rng, radius)))
            .count() as u64
    })
    .into_iter()
    .sum()
}

/// [`volume_fs`] without the minimum sample count; `samples` must be positive.
pub fn estimate_volume(samples: u64, seed: u64) -> VolumeEstimate {
    let radius = r0_closed_form() + 1e-3;
    let hits = count_hits(samples, seed, radius);
    let v = ball_volume(radius);
    let p = hits as f64 / samples as f64;
    let fs_volume = v * p;
    let fs_volume_std_error = v * (p * (1.0 - p) / samples as f64).sqrt();
    let k = STABILIZER_ORDER as f64;
    let estimate = fs_volume / k;
    let std_error = fs_volume_std_error / k;
    let expected = 1.0 / 864.0;
    VolumeEstimate {
        samples,
        seed,
        radius,
        hits,
        fs_volume,
        fs_volume_std_error,
        estimate,
        std_error,
        expected,
        relative_error: (estimate - expected).abs() / expected,
        certifies_upper_bound: estimate + 3.0 * std_error < 2.0 / 864.0,
    }
}

/// Largest `t` with `t·dir ∈ F_S`, by bisection. `F_S` is star-shaped about
/// `0` since geodesics through `0` are straight segments.
pub fn radial_extent(dir: &BallPoint) -> f64 {
    let n = dir.norm();
    let d = dir.scale(1.0 / n);
    let (mut lo, mut hi) = (0.0, 0.999);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if in_fs(&d.scale(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `γ₃.0 = (−(r−1)ζ²/(2κ), (i+1)ζ²/(2κ))`.
pub fn gamma3_origin_closed_form() -> BallPoint {
    let r = sqrt3();
    let k2 = 2.0 * kappa();
    BallPoint::new(
        -zeta(2) * (r - 1.0) / k2,
        (C64::new(1.0, 1.0) * zeta(2)) / k2,
    )
}

/// Corner points `(w₁, κ − w₁)` with `w₁ = 1/κ − e^{−iθ}/√(r+1)`, where two
/// bounding circles meet.
pub fn corner_point(theta: f64) -> BallPoint {
    let r = sqrt3();
    let w1 = C64::new(1.0 / kappa(), 0.0) - C64::from_polar(1.0 / (r + 1.0).sqrt(), -theta);
    BallPoint::new(w1, C64::new(kappa(), 0.0) - w1)
}

#[derive(Clone, Debug, Serialize)]
pub struct R0Report {
    pub r0: f64,
    pub r0_closed_form: f64,
    pub rho0: f64,
    pub rho0_sq: f64,
    pub rho0_sq_closed_form: f64,
    pub maximizer: BallPoint,
    /// `m = (r − 1)·(γ₃.0)`, the midpoint of `[0, γ₃.0]`.
    pub midpoint: BallPoint,
    pub midpoint_in_fs: bool,
    /// `d(0, m)`.
    pub midpoint_radius: f64,
    /// `|b.m − m|`.
    pub b_fixes_midpoint_residual: f64,
    /// `|γ₃.0 − closed form|`.
    pub gamma3_origin_residual: f64,
    pub seeds: usize,
    pub radial_evaluations: u64,
}

/// Maximize `d(0, ·)` over `F_S`.
///
/// Seeds are `resolution` corner points per branch, taken with `w₂` rotated
/// by `i^λ` and with the coordinates swapped; each direction on `S³` is then
/// refined by random hill-climbing with a shrinking step.
pub fn compute_r0(resolution: usize, seed: u64) -> Result<R0Report> {
    let resolution = resolution.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeds = Vec::new();
    for s in 0..resolution {
        let theta = -PI / 12.0 + (PI / 6.0) * s as f64 / (resolution - 1) as f64;
        let p = corner_point(theta);
        for l in 0..4 {
            let rot = zeta(3 * l);
            seeds.push(BallPoint::new(p.z1, p.z2 * rot));
            seeds.push(BallPoint::new(p.z2 * rot, p.z1));
        }
    }
    let mut evals = 0u64;
    let mut best = (0.0, BallPoint::origin());
    for s in &seeds {
        let mut dir = s.scale(1.0 / s.norm());
        let mut val = radial_extent(&dir);
        evals += 1;
        let mut step = 0.05;
        let mut fails = 0;
        while step > 1e-10 {
            let delta = random_direction(&mut rng).scale(step);
            let cand = BallPoint::new(dir.z1 + delta.z1, dir.z2 + delta.z2);
            let cand = cand.scale(1.0 / cand.norm());
            let v = radial_extent(&cand);
            evals += 1;
            if v > val {
                val = v;
                dir = cand;
                fails = 0;
            } else {
                fails += 1;
                if fails >= 40 {
                    step *= 0.5;
                    fails = 0;
                }
            }
        }
        if val > best.0 {
            best = (val, dir.scale(val));
        }
    }
    let rho0 = best.0;

    let c = Constants::get();
    let g3_origin = act(&to_numeric(&c.gamma3()), &BallPoint::origin())?;
    let closed = gamma3_origin_closed_form();
    let m = g3_origin.scale(sqrt3() - 1.0);
    let bm = act(&to_numeric(c.b()), &m)?;
    let diff =
        |a: &BallPoint, b: &BallPoint| ((a.z1 - b.z1).norm_sqr() + (a.z2 - b.z2).norm_sqr()).sqrt();
    Ok(R0Report {
        r0: rho0.atanh(),
        r0_closed_form: r0_closed_form(),
        rho0,
        rho0_sq: rho0 * rho0,
        rho0_sq_closed_form: rho0_sq_closed_form(),
        maximizer: best.1,
        midpoint: m,
        midpoint_in_fs: in_fs(&m),
        midpoint_radius: dist_from_origin(&m),
        b_fixes_midpoint_residual: diff(&bm, &m),
        gamma3_origin_residual: diff(&g3_origin, &closed),
        seeds: seeds.len(),
        radial_evaluations: evals,
    })
}

/// `angle,radius` rows: the Euclidean radial extent of `F_S` along `e^{iφ}u` for the
/// unit vector `u` through `maximizer`, as CSV.
pub fn boundary_profile_csv(maximizer: &BallPoint, samples: usize) -> String {
    let u = maximizer.scale(1.0 / maximizer.norm());
    let mut out = String::from("angle,radius\n");
    for s in 0..samples {
        let phi = 2.0 * PI * s as f64 / samples as f64;
        let rot = C64::from_polar(1.0, phi);
        let r = radial_extent(&BallPoint::new(u.z1 * rot, u.z2 * rot));
        let _ = writeln!(out, "{phi:.9},{r:.12}");
    }
    out
}

/// Fixed point in the ball of an elliptic element of order `order`.
///
/// `g̃ⁿ = cI`; for each `n`th root `ω` of `c`, `Σ (g̃/ω)^m` projects onto an
/// eigenspace, and the fixed point is the eigenline of negative norm.
pub fn elliptic_fixed_point(g: &NumericUnitary, order: u32) -> Option<BallPoint> {
    let mut p = NumericUnitary::identity();
    for _ in 0..order {
        p = p.mul(g);
    }
    let c = p.m[2][2];
    for k in 0..order {
        let omega = C64::from_polar(
            c.norm().powf(1.0 / order as f64),
            (c.arg() + 2.0 * PI * k as f64) / order as f64,
        );
        let h = NumericUnitary {
            m: g.m.map(|row| row.map(|x| x / omega)),
        };
        let mut proj = NumericUnitary {
            m: [[C64::new(0.0, 0.0); 3]; 3],
        };
        let mut pow = NumericUnitary::identity();
        for _ in 0..order {
            for i in 0..3 {
                for j in 0..3 {
                    proj.m[i][j] += pow.m[i][j];
                }
            }
            pow = pow.mul(&h);
        }
        for col in 0..3 {
            let v = [proj.m[0][col], proj.m[1][col], proj.m[2][col]];
            let q = v[0].norm_sqr() + v[1].norm_sqr() - v[2].norm_sqr();
            if v[2].norm() > 1e-9 && q < -1e-9 {
                return Some(BallPoint::new(v[0] / v[2], v[1] / v[2]));
            }
        }
    }
    None
}

/// Polar angle helper for plotting: the argument of `z` in `[0, 2π)`.
pub fn arg_0_2pi(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `acosh(√x)` for a displacement value `x = |g₃₃|²`.
pub fn displacement_from_norm(x: f64) -> f64 {
    x.sqrt().acosh()
}

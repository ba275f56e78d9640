//! The reduction `ρ′ : Γ → PU(3, F₉)` and the torsion-free subgroup
//! `Π = ⟨a₁, a₂, a₃⟩` of index 864.
//!
//! `gZ ∈ Π` iff `det g ∈ ⟨ζ³⟩` and `ρ′(g) ∈ ⟨R, M⟩`, a subgroup of order 21.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use serde::Serialize;

use crate::ball_numeric::{act, dist, elliptic_fixed_point, to_numeric, BallPoint};
use crate::cyclotomic::{CycInt, F9Elem, QuadInt};
use crate::error::{Error, Result};
use crate::lattice::{gamma_alphabet, Constants, DetClass, Mat3, ProjUnitary};
use crate::orbit_search::{closure, gap_bound, GroupBall, KGroup};
use crate::par;
use crate::word::Word;

type F9Mat = [[F9Elem; 3]; 3];

const UNIT_SCALARS: [F9Elem; 4] = [
    F9Elem { x: 1, y: 0 },
    F9Elem { x: 0, y: 1 },
    F9Elem { x: 2, y: 0 },
    F9Elem { x: 0, y: 2 },
];

fn f9_mul(a: &F9Mat, b: &F9Mat) -> F9Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(F9Elem::ZERO, |acc, t| acc + a[i][t] * b[t][j]))
    })
}

fn f9_adjoint(a: &F9Mat) -> F9Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

fn f9_identity() -> F9Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { F9Elem::ONE } else { F9Elem::ZERO })
    })
}

/// An element of `PU(3, F₉)`: a matrix with `m*m = I`, stored as the least
/// of its four multiples by `±1, ±i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjFinMat(F9Mat);

impl ProjFinMat {
    pub fn new(m: F9Mat) -> Result<ProjFinMat> {
        if f9_mul(&f9_adjoint(&m), &m) != f9_identity() {
            return Err(Error::NotUnitary);
        }
        Ok(ProjFinMat::canonical(m))
    }

    fn canonical(m: F9Mat) -> ProjFinMat {
        let best = UNIT_SCALARS
            .iter()
            .map(|&s| m.map(|row| row.map(|x| x * s)))
            .min()
            .expect("four scalars");
        ProjFinMat(best)
    }

    /// Parse rows of `(x, y)` pairs meaning `x + iy`.
    pub fn from_ints(rows: [[(i64, i64); 3]; 3]) -> Result<ProjFinMat> {
        ProjFinMat::new(rows.map(|r| r.map(|(x, y)| F9Elem::from_ints(x, y))))
    }

    pub fn identity() -> ProjFinMat {
        ProjFinMat::canonical(f9_identity())
    }

    pub fn matrix(&self) -> &F9Mat {
        &self.0
    }

    pub fn inv(&self) -> ProjFinMat {
        ProjFinMat::canonical(f9_adjoint(&self.0))
    }

    pub fn pow(&self, n: i64) -> ProjFinMat {
        let base = if n < 0 { self.inv() } else { *self };
        (0..n.unsigned_abs()).fold(ProjFinMat::identity(), |acc, _| &acc * &base)
    }

    pub fn is_identity(&self) -> bool {
        *self == ProjFinMat::identity()
    }

    /// Whether the class contains exactly `m`.
    pub fn represents(&self, m: &F9Mat) -> bool {
        ProjFinMat::canonical(*m) == *self
    }
}

impl Mul for &ProjFinMat {
    type Output = ProjFinMat;
    fn mul(self, rhs: &ProjFinMat) -> ProjFinMat {
        ProjFinMat::canonical(f9_mul(&self.0, &rhs.0))
    }
}

impl fmt::Display for ProjFinMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// `C = ρ(γ₀)` and `C⁻¹` over `F₉`.
fn conjugator() -> &'static (F9Mat, F9Mat) {
    static C: OnceLock<(F9Mat, F9Mat)> = OnceLock::new();
    C.get_or_init(|| {
        let c = reduce_matrix(&Constants::get().gamma0);
        // γ₀ reduces to a unipotent lower-triangular matrix.
        let mut ci = c;
        ci[1][0] = -c[1][0];
        debug_assert_eq!(f9_mul(&c, &ci), f9_identity());
        (c, ci)
    })
}

fn reduce_matrix(m: &Mat3) -> F9Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| m.entry(i, j).reduce_mod_r()))
}

/// `ρ′` on an exact matrix, before passing to the class: the Frobenius
/// conjugate of `Cρ(g)C⁻¹`.
///
/// Under `ρ(ζ) = i` the matrices `Cρ(g)C⁻¹` are conjugate-entrywise to the
/// standard `R` and `M`; composing with `x + iy ↦ x − iy` (a field
/// automorphism, so still a homomorphism onto `PU(3, F₉)`) matches them.
pub fn quotient_matrix(g: &Mat3) -> F9Mat {
    let (c, ci) = conjugator();
    let m = f9_mul(&f9_mul(c, &reduce_matrix(g)), ci);
    m.map(|row| row.map(F9Elem::conj))
}

pub fn quotient_map(g: &ProjUnitary) -> ProjFinMat {
    ProjFinMat::canonical(quotient_matrix(g.matrix()))
}

/// The matrices `R` and `M` generating the image of `Π`.
pub fn printed_r() -> ProjFinMat {
    ProjFinMat::from_ints([
        [(0, -1), (-1, -1), (0, 1)],
        [(1, 0), (-1, 1), (-1, 0)],
        [(-1, 1), (0, 0), (-1, 1)],
    ])
    .expect("R is unitary")
}

pub fn printed_m() -> ProjFinMat {
    ProjFinMat::from_ints([
        [(0, 1), (0, -1), (1, 1)],
        [(-1, -1), (0, 1), (0, -1)],
        [(0, 1), (-1, -1), (0, 1)],
    ])
    .expect("M is unitary")
}

/// Safety bound for closures in `PU(3, F₉)`.
pub const FINITE_CLOSURE_BOUND: usize = 10_000;

pub fn finite_closure(gens: &[ProjFinMat]) -> Result<Vec<ProjFinMat>> {
    let g: Vec<(ProjFinMat, Word)> = gens.iter().map(|&x| (x, Word::empty())).collect();
    Ok(closure(
        ProjFinMat::identity(),
        &g,
        |a, b| a * b,
        FINITE_CLOSURE_BOUND,
    )?
    .0)
}

/// `⟨R, M⟩` as a lookup table.
pub struct PiTable {
    image: HashSet<ProjFinMat>,
}

impl PiTable {
    pub fn build() -> Result<PiTable> {
        Ok(PiTable {
            image: finite_closure(&[printed_r(), printed_m()])?
                .into_iter()
                .collect(),
        })
    }

    pub fn get() -> &'static PiTable {
        static T: OnceLock<PiTable> = OnceLock::new();
        T.get_or_init(|| PiTable::build().expect("<R, M> is finite"))
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn contains_image(&self, x: &ProjFinMat) -> bool {
        self.image.contains(x)
    }

    pub fn contains(&self, g: &ProjUnitary) -> bool {
        self.certificate(g).member()
    }

    pub fn certificate(&self, g: &ProjUnitary) -> PiMembershipCert {
        let image = quotient_map(g);
        PiMembershipCert {
            det_class: g.det_class(),
            image_in_rm: self.image.contains(&image),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PiMembershipCert {
    pub det_class: DetClass,
    pub image_in_rm: bool,
}

impl PiMembershipCert {
    pub fn member(&self) -> bool {
        self.det_class.is_trivial() && self.image_in_rm
    }
}

pub fn pi_contains(g: &ProjUnitary) -> bool {
    PiTable::get().contains(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub pu3_order: usize,
    pub rm_order: usize,
    pub r_order_7: bool,
    pub m_order_3: bool,
    pub m_r_m_inv_is_r2: bool,
    /// `ρ′(−ζa₂) = R` and `ρ′(−a₁a₂) = M` entrywise, not just as classes.
    pub r_matches_exactly: bool,
    pub m_matches_exactly: bool,
    /// `ρ′(−a₃) = R⁻¹` entrywise.
    pub minus_a3_is_r_inverse: bool,
    /// `⟨ρ′(−ζa₂), ρ′(−a₁a₂)⟩ = ⟨R, M⟩`.
    pub images_generate_rm: bool,
    /// `ρ′(a₃) ∈ ⟨R, M⟩`.
    pub a3_image_in_rm: bool,
}

impl QuotientReport {
    pub fn passed(&self) -> bool {
        self.pu3_order == 6048
            && self.rm_order == 21
            && self.r_order_7
            && self.m_order_3
            && self.m_r_m_inv_is_r2
            && self.r_matches_exactly
            && self.m_matches_exactly
            && self.minus_a3_is_r_inverse
            && self.images_generate_rm
            && self.a3_image_in_rm
    }
}

/// `|PU(3, F₉)|` from `ρ′(v), ρ′(bu⁻¹), ρ′(u⁻¹b)`, the subgroup `⟨R, M⟩`, and
/// the images of the generators of `Π`.
pub fn verify_quotient() -> Result<QuotientReport> {
    let c = Constants::get();
    let gens: Vec<ProjFinMat> = ["v", "b u^-1", "u^-1 b"]
        .iter()
        .map(|w| c.word(w).map(|g| quotient_map(&g)))
        .collect::<Result<_>>()?;
    let pu3 = finite_closure(&gens)?;
    let r = printed_r();
    let m = printed_m();
    let rm: HashSet<ProjFinMat> = finite_closure(&[r, m])?.into_iter().collect();

    let minus = |x: Mat3| Mat3::scalar(-CycInt::one()) * x;
    let a1 = c.raw(crate::lattice::letter::A1).clone();
    let a2 = c.raw(crate::lattice::letter::A2).clone();
    let a3 = c.raw(crate::lattice::letter::A3).clone();
    let r_img = quotient_matrix(&minus(Mat3::scalar(CycInt::zeta()) * a2.clone()));
    let m_img = quotient_matrix(&minus(&a1 * &a2));
    let a3_img = quotient_matrix(&minus(a3.clone()));
    let from_images: HashSet<ProjFinMat> =
        finite_closure(&[ProjFinMat::canonical(r_img), ProjFinMat::canonical(m_img)])?
            .into_iter()
            .collect();

    Ok(QuotientReport {
        pu3_order: pu3.len(),
        rm_order: rm.len(),
        r_order_7: r.pow(7).is_identity() && !r.is_identity(),
        m_order_3: m.pow(3).is_identity() && !m.is_identity(),
        m_r_m_inv_is_r2: &(&m * &r) * &m.inv() == r.pow(2),
        r_matches_exactly: r_img == raw_printed_r(),
        m_matches_exactly: m_img == raw_printed_m(),
        minus_a3_is_r_inverse: a3_img == f9_adjoint(&raw_printed_r()),
        images_generate_rm: from_images == rm,
        a3_image_in_rm: rm.contains(&ProjFinMat::canonical(a3_img)),
    })
}

fn raw_printed_r() -> F9Mat {
    [
        [(0, -1), (-1, -1), (0, 1)],
        [(1, 0), (-1, 1), (-1, 0)],
        [(-1, 1), (0, 0), (-1, 1)],
    ]
    .map(|r| r.map(|(x, y)| F9Elem::from_ints(x, y)))
}

fn raw_printed_m() -> F9Mat {
    [
        [(0, 1), (0, -1), (1, 1)],
        [(-1, -1), (0, 1), (0, -1)],
        [(0, 1), (-1, -1), (0, 1)],
    ]
    .map(|r| r.map(|(x, y)| F9Elem::from_ints(x, y)))
}

/// The 864 elements `b^μ k`, `μ = 0, 1, 2`, `k ∈ K`.
pub fn transversal(k: &KGroup) -> Vec<ProjUnitary> {
    let c = Constants::get();
    let mut out = Vec::with_capacity(3 * k.len());
    for mu in 0..3 {
        let bm = c.b().pow(mu);
        for kk in k.elements() {
            out.push(&bm * kk);
        }
    }
    out
}

/// `"b^μ·k<i>"` labels for the transversal, in the order of [`transversal`].
pub fn transversal_labels(k: &KGroup) -> Vec<String> {
    (0..3)
        .flat_map(|mu| (0..k.len()).map(move |i| format!("b^{mu}·k{i}")))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub transversal_size: usize,
    pub pairs_checked: u64,
    pub pairwise_inequivalent: bool,
    /// `[Γ : Γ₁]·|PU(3, F₉)|/|⟨R, M⟩|`.
    pub index: usize,
    pub generators_in_pi: [bool; 3],
    pub generator_det_exponents: [Option<u32>; 3],
}

/// Pairwise `Π`-inequivalence of the transversal, the index, and membership
/// of `a₁, a₂, a₃`.
pub fn verify_index_and_transversal(k: &KGroup, quotient: &QuotientReport) -> Result<IndexReport> {
    let c = Constants::get();
    let table = PiTable::get();
    let t = transversal(k);
    // x ≡ y iff xy⁻¹ ∈ Π; compare (det class, image) through the homomorphism.
    let images: Vec<(DetClass, ProjFinMat)> =
        t.iter().map(|g| (g.det_class(), quotient_map(g))).collect();
    let bad = par::map_range(t.len(), |i| {
        let (di, qi) = images[i];
        for (j, &(dj, qj)) in images.iter().enumerate().skip(i + 1) {
            let det = di * DetClass((3 - dj.0) % 3);
            if det.is_trivial() && table.contains_image(&(&qi * &qj.inv())) {
                return Some((i, j));
            }
        }
        None
    });
    if let Some((i, j)) = bad.into_iter().flatten().next() {
        return Err(Error::ConditionViolated {
            condition: "transversal".into(),
            witness: format!(
                "b^{}k{} ~ b^{}k{}",
                i / k.len(),
                i % k.len(),
                j / k.len(),
                j % k.len()
            ),
        });
    }
    let n = t.len() as u64;
    let gens = [
        crate::lattice::letter::A1,
        crate::lattice::letter::A2,
        crate::lattice::letter::A3,
    ];
    Ok(IndexReport {
        transversal_size: t.len(),
        pairs_checked: n * (n - 1) / 2,
        pairwise_inequivalent: true,
        index: 3 * quotient.pu3_order / quotient.rm_order.max(1),
        generators_in_pi: gens.map(|l| table.contains(c.class(l))),
        generator_det_exponents: gens.map(|l| c.raw(l).det().root_of_unity_exponent()),
    })
}

/// The torsion representatives of orders 2 and 3, up to conjugacy.
pub const TORSION_REPRESENTATIVES: [(&str, u32); 11] = [
    ("v^2", 2),
    ("j^6", 2),
    ("(b u^-1)^2", 2),
    ("u", 3),
    ("u^-1", 3),
    ("j^4", 3),
    ("j^8", 3),
    ("u j^4", 3),
    ("(u j^4)^-1", 3),
    ("b u v", 3),
    ("(b u v)^-1", 3),
];

#[derive(Clone, Debug, Serialize)]
pub struct TorsionRow {
    pub element: String,
    pub expected_order: u32,
    pub order: Option<u32>,
    pub conjugates_checked: usize,
    pub conjugates_in_pi: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub rows: Vec<TorsionRow>,
}

impl TorsionReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.order == Some(r.expected_order) && r.conjugates_in_pi == 0)
    }
}

/// No conjugate `x t x⁻¹` by a transversal element lies in `Π`, computed
/// with exact products.
pub fn verify_torsion_free(k: &KGroup) -> Result<TorsionReport> {
    let c = Constants::get();
    let t = transversal(k);
    let inv: Vec<ProjUnitary> = par::map(&t, ProjUnitary::inv);
    let mut rows = Vec::new();
    for (w, expected) in TORSION_REPRESENTATIVES {
        let g = c.word(w)?;
        let hits = par::map_range(t.len(), |i| pi_contains(&(&(&t[i] * &g) * &inv[i])))
            .into_iter()
            .filter(|&x| x)
            .count();
        rows.push(TorsionRow {
            element: w.to_string(),
            expected_order: expected,
            order: g.order(24),
            conjugates_checked: t.len(),
            conjugates_in_pi: hits,
        });
    }
    let report = TorsionReport { rows };
    if let Some(r) = report.rows.iter().find(|r| r.conjugates_in_pi > 0) {
        return Err(Error::ConditionViolated {
            condition: "torsion-free".into(),
            witness: r.element.clone(),
        });
    }
    Ok(report)
}

/// `lhs = ζ^k · rhs` as exact matrices, where the sides are words in
/// `u, v, b, j, a1, a2, a3`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarIdentity {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub printed_exponent: i64,
    /// The `k` with `lhs = ζ^k rhs` found by exact comparison, if any.
    pub found_exponent: Option<u32>,
    pub holds: bool,
}

fn scalar_identity(name: &str, lhs: &str, k: i64, rhs: &str) -> Result<ScalarIdentity> {
    let c = Constants::get();
    let l = c.word_raw(lhs)?;
    let r = if rhs == "1" {
        Mat3::identity()
    } else {
        c.word_raw(rhs)?
    };
    let found = (0..12u32).find(|&e| l == r.scaled_by_zeta_pow(e as i64));
    Ok(ScalarIdentity {
        name: name.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        printed_exponent: k,
        found_exponent: found,
        holds: found.is_some_and(|e| e as i64 == k.rem_euclid(12)),
    })
}

/// `h_i` and `π′_i` with `h_i (buv) h_i⁻¹ j⁻⁴ = π′_i`; `π′_i = ζ^k · word`.
pub const H_TABLE: [(&str, i64, &str); 6] = [
    ("b^-1 v u j^3", 4, "a2^2 a1 a3^3"),
    ("u^-1 v j", 0, "j^8 a1 j^4"),
    ("b u v^2 j^2", 2, "j^8 a1 a2^3 j^4 a2 a1 a2^-2 a1^-1"),
    ("b^-1 v^2 u j^3", -5, "a3^3 a1^2 a3^3"),
    ("v j^2", -1, "j^4 a1^-1 a2^-1 j^8"),
    ("b v u^-1 v", 1, "a2 a1^-1"),
];

/// `b^μ j⁴ b^{−μ} j⁻⁴ = π_μ` for `μ = 0, 1, −1`.
pub const PI_MU_TABLE: [(i64, i64, &str); 3] = [
    (0, 0, "1"),
    (1, -4, "a2 a1^-2 a3^-3 a1^-1"),
    (-1, 0, "a2^2 a1 a3 a1^-1"),
];

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub pi_mu: Vec<ScalarIdentity>,
    pub pi_mu_in_pi: Vec<bool>,
    pub h_identities: Vec<ScalarIdentity>,
    pub pi_prime_in_pi: Vec<bool>,
    /// Pairs `(μ, k)` with `b^μ k t k⁻¹ b^{−μ} j⁻⁴ ∈ Π`, for `t = buv` and
    /// `t = (buv)⁻¹`.
    pub buv_pairs: usize,
    pub buv_inverse_pairs: usize,
    /// `h_{i′}(buv)^ε h_i⁻¹ ∉ Π` for `i ≠ i′`, `ε = 0, 1, 2`.
    pub distinctness_checked: usize,
    pub distinctness_holds: bool,
    pub stabilizer: Option<StabilizerCheck>,
}

/// The elements of `Γ` fixing `z₀ = Fix(buv)`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCheck {
    pub z0: BallPoint,
    /// `cosh²(2d(0, z₀))`; every `g` fixing `z₀` has `|g₃₃|²` at most this.
    pub cosh2_twice_dist: f64,
    /// The next displacement value above `S`, `6 + 3√3`.
    pub gap: f64,
    pub fixing_elements: Vec<String>,
    pub holds: bool,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.pi_mu.iter().chain(&self.h_identities).all(|x| x.holds)
            && self.pi_mu_in_pi.iter().all(|&x| x)
            && self.pi_prime_in_pi.iter().all(|&x| x)
            && self.buv_pairs == 18
            && self.buv_inverse_pairs == 0
            && self.distinctness_holds
            && self.stabilizer.as_ref().is_none_or(|s| s.holds)
    }
}

/// Fixed points of `j⁴` on `Π\B(C²)`: the identities for `π_μ` and `π′_i`,
/// the count of `(μ, k)` producing fixed points, distinctness of the six
/// points `Π h_i.z₀`, and (given `S`) the stabilizer of `z₀`.
pub fn verify_fixed_point_identities(
    k: &KGroup,
    ball: Option<&GroupBall>,
) -> Result<FixedPointReport> {
    let c = Constants::get();
    let mut pi_mu = Vec::new();
    let mut pi_mu_in_pi = Vec::new();
    for (mu, s, w) in PI_MU_TABLE {
        let lhs = format!("b^{mu} j^4 b^{} j^-4", -mu);
        pi_mu.push(scalar_identity(&format!("pi_{mu}"), &lhs, s, w)?);
        pi_mu_in_pi.push(w == "1" || pi_contains(&c.word(w)?));
    }
    let mut h_identities = Vec::new();
    let mut pi_prime_in_pi = Vec::new();
    for (i, (h, s, w)) in H_TABLE.iter().enumerate() {
        let lhs = format!("({h}) b u v ({h})^-1 j^-4");
        h_identities.push(scalar_identity(&format!("pi'_{}", i + 1), &lhs, *s, w)?);
        pi_prime_in_pi.push(pi_contains(&c.word(w)?));
    }

    let j4_inv = c.j().pow(-4);
    let count = |t: &ProjUnitary| -> usize {
        let tr = transversal(k);
        par::map(&tr, |x| pi_contains(&(&(&(x * t) * &x.inv()) * &j4_inv)))
            .into_iter()
            .filter(|&b| b)
            .count()
    };
    let buv = c.word("b u v")?;
    let buv_pairs = count(&buv);
    let buv_inverse_pairs = count(&buv.inv());

    let hs: Vec<ProjUnitary> = H_TABLE
        .iter()
        .map(|(h, _, _)| c.word(h))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    let mut distinct = true;
    for (i, hi) in hs.iter().enumerate() {
        for (i2, hi2) in hs.iter().enumerate() {
            if i == i2 {
                continue;
            }
            for eps in 0..3 {
                checked += 1;
                if pi_contains(&(&(hi2 * &buv.pow(eps)) * &hi.inv())) {
                    distinct = false;
                }
            }
        }
    }

    let stabilizer = ball.map(stabilizer_of_buv_fixed_point).transpose()?;
    Ok(FixedPointReport {
        pi_mu,
        pi_mu_in_pi,
        h_identities,
        pi_prime_in_pi,
        buv_pairs,
        buv_inverse_pairs,
        distinctness_checked: checked,
        distinctness_holds: distinct,
        stabilizer,
    })
}

/// If `g.z₀ = z₀` then `d(g.0, 0) ≤ 2d(0, z₀)`. When `cosh²(2d(0, z₀))` is
/// below the gap value `6 + 3√3`, every such `g` lies in `S`, so scanning
/// `S` finds the whole stabilizer.
pub fn stabilizer_of_buv_fixed_point(ball: &GroupBall) -> Result<StabilizerCheck> {
    let c = Constants::get();
    let buv = c.word("b u v")?;
    let z0 = elliptic_fixed_point(&to_numeric(&buv), 3).ok_or(Error::DegenerateProjection)?;
    let d = crate::ball_numeric::dist_from_origin(&z0);
    let cosh2 = (2.0 * d).cosh().powi(2);
    let gap = gap_bound().to_f64();
    let idx: Vec<usize> = (0..ball.len()).collect();
    let fixing: Vec<usize> = par::map(&idx, |&i| {
        act(&to_numeric(ball.element(i)), &z0)
            .map(|w| dist(&w, &z0) < 1e-7)
            .unwrap_or(false)
    })
    .into_iter()
    .enumerate()
    .filter_map(|(i, f)| f.then_some(i))
    .collect();
    let expected: HashSet<ProjUnitary> = [ProjUnitary::identity(), buv.clone(), buv.pow(2)].into();
    let found: HashSet<ProjUnitary> = fixing.iter().map(|&i| ball.element(i).clone()).collect();
    let names = fixing
        .iter()
        .map(|&i| {
            let g = ball.element(i);
            if g.is_identity() {
                "1".to_string()
            } else if *g == buv {
                "buv".to_string()
            } else if *g == buv.pow(2) {
                "(buv)^2".to_string()
            } else {
                g.matrix().to_string()
            }
        })
        .collect();
    Ok(StabilizerCheck {
        z0,
        cosh2_twice_dist: cosh2,
        gap,
        fixing_elements: names,
        holds: cosh2 < gap && found == expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianizationReport {
    pub scalar_words: Vec<ScalarIdentity>,
    pub conjugations: Vec<ScalarIdentity>,
    /// Exponent sums in `a₁, a₂, a₃` of the `ζ³` relation word.
    pub relation_exponents: [i64; 3],
    /// `Σ eᵥ f(aᵥ)` for the relation word.
    pub relation_image: [i64; 2],
    /// Exponent sums of the `ζ⁻⁴` word, which must all vanish.
    pub obstruction_exponents: [i64; 3],
    /// `f(j⁴aᵥj⁻⁴)` against `f(aᵥ)·(0 −1; 1 −1)`.
    pub action_rows: Vec<([i64; 2], [i64; 2])>,
}

impl AbelianizationReport {
    pub fn passed(&self) -> bool {
        self.scalar_words
            .iter()
            .chain(&self.conjugations)
            .all(|x| x.holds)
            && self.relation_exponents == [3, -2, 7]
            && self.relation_image == [0, 0]
            && self.obstruction_exponents == [0, 0, 0]
            && self.action_rows.iter().all(|(a, b)| a == b)
    }
}

/// `f(a₁), f(a₂), f(a₃)`.
pub const F_VALUES: [[i64; 2]; 3] = [[1, 3], [-2, 1], [-1, -1]];

/// `(m, n) ↦ (m, n)·(0 −1; 1 −1)`.
pub fn j4_action(v: [i64; 2]) -> [i64; 2] {
    [v[1], -v[0] - v[1]]
}

fn a_exponents(text: &str) -> Result<[i64; 3]> {
    let w = gamma_alphabet().parse(text)?;
    let s = w.exponent_sums(7);
    Ok([s[4], s[5], s[6]])
}

fn f_image(e: [i64; 3]) -> [i64; 2] {
    let mut out = [0, 0];
    for (v, ev) in F_VALUES.iter().zip(e) {
        out[0] += ev * v[0];
        out[1] += ev * v[1];
    }
    out
}

pub const OBSTRUCTION_WORD: &str = "a2^-3 a3^3 a1 a2 a3^-3 a2^3 a3^-1 a1^-1 a2^-1 a1 a3 a1^-1";
pub const RELATION_WORD: &str = "a2^2 a1^-1 a2^-1 a1 a3^3 a1 a2^-3 a3^3 a1 a3 a1";

/// `j⁴aᵥj⁻⁴ = ζ^k · word`.
pub const J4_CONJUGATES: [(&str, i64, &str); 3] = [
    ("j^4 a1 j^-4", 3, "a3 a2^-3 a3^3 a1"),
    ("j^4 a2 j^-4", -1, "a3^-1"),
    (
        "j^4 a3 j^-4",
        -1,
        "a1^-1 a2^-1 a1 a2^2 a1^-1 a2^-1 a1 a3^-1 a1^-1 a2 a1",
    ),
];

pub fn verify_abelianization_identities() -> Result<AbelianizationReport> {
    let scalar_words = vec![
        scalar_identity("obstruction", OBSTRUCTION_WORD, -4, "1")?,
        scalar_identity("relation", RELATION_WORD, 3, "1")?,
    ];
    let mut conjugations = Vec::new();
    let mut action_rows = Vec::new();
    for (i, (lhs, k, rhs)) in J4_CONJUGATES.iter().enumerate() {
        conjugations.push(scalar_identity(
            &format!("j4 a{} j-4", i + 1),
            lhs,
            *k,
            rhs,
        )?);
        action_rows.push((f_image(a_exponents(rhs)?), j4_action(F_VALUES[i])));
    }
    let relation_exponents = a_exponents(RELATION_WORD)?;
    Ok(AbelianizationReport {
        scalar_words,
        conjugations,
        relation_exponents,
        relation_image: f_image(relation_exponents),
        obstruction_exponents: a_exponents(OBSTRUCTION_WORD)?,
        action_rows,
    })
}

/// `|g₃₃|²` of a named element, for reports.
pub fn norm_of(word: &str) -> Result<QuadInt> {
    Ok(Constants::get().word(word)?.entry33_abs2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity() {
        assert!(quotient_map(&ProjUnitary::identity()).is_identity());
    }

    #[test]
    fn printed_generators() {
        let r = printed_r();
        let m = printed_m();
        assert!(r.pow(7).is_identity());
        assert!(m.pow(3).is_identity());
        assert_eq!(&(&m * &r) * &m.inv(), r.pow(2));
        assert_eq!(PiTable::get().len(), 21);
    }

    #[test]
    fn quotient_is_well_defined_on_scalars() {
        let c = Constants::get();
        let b = c.raw(crate::lattice::letter::B);
        let base = ProjFinMat::canonical(quotient_matrix(b));
        for k in 0..12 {
            assert_eq!(
                ProjFinMat::canonical(quotient_matrix(&b.scaled_by_zeta_pow(k))),
                base
            );
        }
    }

    #[test]
    fn quotient_report() {
        let r = verify_quotient().unwrap();
        assert_eq!(r.pu3_order, 6048);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn membership_examples() {
        let c = Constants::get();
        assert!(pi_contains(c.class(crate::lattice::letter::A1)));
        assert!(pi_contains(c.class(crate::lattice::letter::A2)));
        assert!(!pi_contains(c.b()));
        assert!(pi_contains(&ProjUnitary::identity()));
    }

    #[test]
    fn abelianization() {
        let r = verify_abelianization_identities().unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(j4_action(F_VALUES[0]), [3, -4]);
    }

    #[test]
    fn fixed_points_without_ball() {
        let k = KGroup::enumerate().unwrap();
        let r = verify_fixed_point_identities(&k, None).unwrap();
        assert!(r.passed(), "{r:#?}");
    }
}

//! The stabilizer `K = ⟨u, v⟩` of the origin, the ball
//! `S = K ∪ Kγ₂K ∪ Kγ₃K` of elements with `|g₃₃|² ≤ 4 + 2√3`, the closure
//! criterion that certifies `S` is complete, and greedy reduction of an
//! arbitrary element of `Γ` to a word in `b, u, v`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{CycInt, QuadInt};
use crate::error::{Error, Result};
use crate::lattice::{letter, Constants, Mat3, ProjUnitary};
use crate::par;
use crate::word::Word;

/// Inclusive displacement bound defining `S`: `cosh²(r₁) ≥ 4 + 2√3`.
pub fn s_bound() -> QuadInt {
    QuadInt::new(4, 2)
}

/// The next displacement value above `S`: `6 + 3√3`.
pub fn gap_bound() -> QuadInt {
    QuadInt::new(6, 3)
}

/// Breadth-first closure of a finite group under right multiplication by
/// `generators`, recording a shortest word for every element.
pub fn closure<T, F>(
    identity: T,
    generators: &[(T, Word)],
    mul: F,
    bound: usize,
) -> Result<(Vec<T>, Vec<Word>)>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: IndexSet<T> = IndexSet::new();
    let mut words = vec![Word::empty()];
    seen.insert(identity);
    let mut head = 0;
    while head < seen.len() {
        let cur = seen[head].clone();
        for (g, w) in generators {
            let next = mul(&cur, g);
            if seen.insert(next) {
                words.push(&words[head] * w);
                if seen.len() > bound {
                    return Err(Error::ClosureOverflow { bound });
                }
            }
        }
        head += 1;
    }
    Ok((seen.into_iter().collect(), words))
}

/// The finite group `K = ⟨u, v⟩`, the stabilizer of the origin.
#[derive(Debug)]
pub struct KGroup {
    elements: IndexSet<ProjUnitary>,
    words: Vec<Word>,
}

/// Safety bound on the closure of `{u, v}`; exceeding it signals an
/// arithmetic bug.
pub const K_CLOSURE_BOUND: usize = 1000;

impl KGroup {
    pub fn enumerate() -> Result<KGroup> {
        let c = Constants::get();
        let gens = [
            (c.u().clone(), Word::letter(letter::U, 1)),
            (c.u().inv(), Word::letter(letter::U, -1)),
            (c.v().clone(), Word::letter(letter::V, 1)),
            (c.v().inv(), Word::letter(letter::V, -1)),
        ];
        let (elements, words) = closure(
            ProjUnitary::identity(),
            &gens,
            |a, b| a * b,
            K_CLOSURE_BOUND,
        )?;
        Ok(KGroup {
            elements: elements.into_iter().collect(),
            words,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &ProjUnitary> {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &ProjUnitary {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &ProjUnitary) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn contains(&self, g: &ProjUnitary) -> bool {
        self.elements.contains(g)
    }

    /// A shortest word in `u^{±1}, v^{±1}` for the `i`th element.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    /// `{k ∈ K : γ⁻¹kγ ∈ K}` as indices.
    pub fn conjugation_stabilizer(&self, gamma: &ProjUnitary) -> Vec<usize> {
        let gi = gamma.inv();
        (0..self.len())
            .filter(|&i| self.contains(&(&(&gi * self.element(i)) * gamma)))
            .collect()
    }
}

/// One double coset `KγK` inside `S`.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleCoset {
    pub name: String,
    #[serde(skip)]
    pub representative: ProjUnitary,
    pub norm: QuadInt,
    pub size: usize,
    /// Indices into `K` of `{k : γ⁻¹kγ ∈ K}`.
    pub stabilizer: Vec<usize>,
}

/// The set `S` of elements with `|g₃₃|² ≤ 4 + 2√3`.
#[derive(Debug)]
pub struct GroupBall {
    elements: IndexSet<ProjUnitary>,
    norms: Vec<QuadInt>,
    strata: BTreeMap<QuadInt, Vec<u32>>,
    /// `(k₁, j, k₂)` with element `= k₁γ_jk₂`, indices into `K` and `cosets`.
    origin: Vec<(u16, u8, u16)>,
    pub cosets: Vec<DoubleCoset>,
}

impl GroupBall {
    /// `S` as the union of `Kγ_jK` for `γ₁ = 1`, `γ₂ = b`, `γ₃ = bu⁻¹b`,
    /// built from the explicit products `k₁γk₂`.
    pub fn build(k: &KGroup) -> GroupBall {
        let c = Constants::get();
        let reps = [
            ("1", ProjUnitary::identity()),
            ("b", c.gamma2()),
            ("b u^-1 b", c.gamma3()),
        ];
        let mut elements: IndexSet<ProjUnitary> = IndexSet::new();
        let mut origin = Vec::new();
        let mut cosets = Vec::new();
        for (j, (name, gamma)) in reps.into_iter().enumerate() {
            let before = elements.len();
            let right: Vec<Mat3> = k
                .elements()
                .map(|k2| gamma.matrix() * k2.matrix())
                .collect();
            for (i1, k1) in k.elements().enumerate() {
                let row = par::map(&right, |x| ProjUnitary::from_unitary(k1.matrix() * x));
                for (i2, g) in row.into_iter().enumerate() {
                    if elements.insert(g) {
                        origin.push((i1 as u16, j as u8, i2 as u16));
                    }
                }
            }
            cosets.push(DoubleCoset {
                name: name.to_string(),
                norm: gamma.entry33_abs2(),
                size: elements.len() - before,
                stabilizer: k.conjugation_stabilizer(&gamma),
                representative: gamma,
            });
        }
        let norms: Vec<QuadInt> = elements.iter().map(ProjUnitary::entry33_abs2).collect();
        let mut strata: BTreeMap<QuadInt, Vec<u32>> = BTreeMap::new();
        for (i, n) in norms.iter().enumerate() {
            strata.entry(n.clone()).or_default().push(i as u32);
        }
        GroupBall {
            elements,
            norms,
            strata,
            origin,
            cosets,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &ProjUnitary) -> bool {
        self.elements.contains(g)
    }

    pub fn index_of(&self, g: &ProjUnitary) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn element(&self, i: usize) -> &ProjUnitary {
        &self.elements[i]
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &ProjUnitary> {
        self.elements.iter()
    }

    /// A word `k₁ γ_j k₂` for the `i`th element.
    pub fn word(&self, i: usize, k: &KGroup) -> Word {
        let (k1, j, k2) = self.origin[i];
        let gamma = match j {
            0 => Word::empty(),
            1 => Word::letter(letter::B, 1),
            _ => Word::new([(letter::B, 1), (letter::U, -1), (letter::B, 1)]),
        };
        &(k.word(k1 as usize) * &gamma) * k.word(k2 as usize)
    }

    pub fn norm(&self, i: usize) -> &QuadInt {
        &self.norms[i]
    }

    pub fn strata(&self) -> &BTreeMap<QuadInt, Vec<u32>> {
        &self.strata
    }

    /// `(|g₃₃|², count)` in increasing order.
    pub fn strata_sizes(&self) -> Vec<(QuadInt, usize)> {
        self.strata
            .iter()
            .map(|(n, v)| (n.clone(), v.len()))
            .collect()
    }

    /// Whether `g⁻¹ ∈ S` for every `g ∈ S`.
    pub fn is_symmetric(&self) -> bool {
        let idx: Vec<usize> = (0..self.len()).collect();
        par::map(&idx, |&i| self.contains(&self.elements[i].inv()))
            .into_iter()
            .all(|x| x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem21Report {
    /// Every `g ∈ S` has `|g₃₃|² ≤ 4 + 2√3`.
    pub condition_a: bool,
    pub max_norm: QuadInt,
    /// Every product of two elements of `S` that leaves `S` has
    /// `|(gg')₃₃|² ≥ 6 + 3√3`.
    pub condition_b: bool,
    pub reduced_products: usize,
    pub reduced_products_in_s: usize,
    pub min_excluded_norm: QuadInt,
    pub spot_checked_pairs: usize,
    pub spot_check_min_excluded: Option<QuadInt>,
}

/// Check the two hypotheses of the closure criterion on `S`.
///
/// Condition (b) is checked on the 2592 products `γ_i k γ_j`: for
/// `g = k₁γ_ik₂`, `g' = k₃γ_jk₄` we have `gg' = k₁(γ_i k₂k₃ γ_j)k₄`, and both
/// membership in `S` and `|·₃₃|²` are invariant under multiplying by `K` on
/// either side. `spot_checks` random full pairs are checked as well.
pub fn verify_theorem21(
    ball: &GroupBall,
    k: &KGroup,
    spot_checks: usize,
    seed: u64,
) -> Result<Theorem21Report> {
    let bound = s_bound();
    let gap = gap_bound();

    let mut max_norm = QuadInt::from_int(0);
    for (i, n) in ball.norms.iter().enumerate() {
        if *n > bound {
            return Err(Error::ConditionViolated {
                condition: "(a)".into(),
                witness: ball.element(i).matrix().to_string(),
            });
        }
        if *n > max_norm {
            max_norm = n.clone();
        }
    }

    let reps: Vec<ProjUnitary> = ball
        .cosets
        .iter()
        .map(|c| c.representative.clone())
        .collect();
    let mut triples = Vec::with_capacity(reps.len() * reps.len() * k.len());
    for gi in &reps {
        for kk in k.elements() {
            let left = gi * kk;
            for gj in &reps {
                triples.push((left.clone(), gj.clone()));
            }
        }
    }
    let products = par::map(&triples, |(l, r)| l * r);
    let mut min_excluded: Option<QuadInt> = None;
    let mut in_s = 0;
    for p in &products {
        if ball.contains(p) {
            in_s += 1;
            continue;
        }
        let n = p.entry33_abs2();
        if n < gap {
            return Err(Error::ConditionViolated {
                condition: "(b)".into(),
                witness: p.matrix().to_string(),
            });
        }
        if min_excluded.as_ref().is_none_or(|m| n < *m) {
            min_excluded = Some(n);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..spot_checks)
        .map(|_| (rng.gen_range(0..ball.len()), rng.gen_range(0..ball.len())))
        .collect();
    let spot = par::map(&pairs, |&(a, b)| {
        let p = ball.element(a) * ball.element(b);
        if ball.contains(&p) {
            None
        } else {
            Some(p)
        }
    });
    let mut spot_min: Option<QuadInt> = None;
    for p in spot.into_iter().flatten() {
        let n = p.entry33_abs2();
        if n < gap {
            return Err(Error::ConditionViolated {
                condition: "(b) spot check".into(),
                witness: p.matrix().to_string(),
            });
        }
        if spot_min.as_ref().is_none_or(|m| n < *m) {
            spot_min = Some(n);
        }
    }

    Ok(Theorem21Report {
        condition_a: true,
        max_norm,
        condition_b: true,
        reduced_products: products.len(),
        reduced_products_in_s: in_s,
        min_excluded_norm: min_excluded.unwrap_or_else(|| gap.clone()),
        spot_checked_pairs: spot_checks,
        spot_check_min_excluded: spot_min,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinDisplacementReport {
    /// `min |g₃₃|²` over `S ∖ K`.
    pub min_outside_k: QuadInt,
    pub column_identity_checked: usize,
    pub column_identity_holds: bool,
}

/// `|g₁₃|² + |g₁₃ − (r−1)g₂₃|²` and `(r−1)(|g₃₃|² − 1)`, the two sides of
/// the (3,3) entry of `g*Fg = F`.
pub fn column_identity_sides(g: &ProjUnitary) -> (QuadInt, QuadInt) {
    let m = g.matrix();
    let r_minus_1 = &CycInt::r() - &CycInt::one();
    let g13 = m.entry(0, 2);
    let g23 = m.entry(1, 2);
    let lhs = &g13.abs2() + &(g13 - &(&r_minus_1 * g23)).abs2();
    let rhs = &QuadInt::new(-1, 1) * &(&m.entry(2, 2).abs2() - &QuadInt::one());
    (lhs, rhs)
}

pub fn verify_min_displacement(ball: &GroupBall) -> MinDisplacementReport {
    let mut min: Option<QuadInt> = None;
    for (i, g) in ball.elements().enumerate() {
        if g.fixes_origin() {
            continue;
        }
        let n = ball.norm(i);
        if min.as_ref().is_none_or(|m| n < m) {
            min = Some(n.clone());
        }
    }
    let idx: Vec<usize> = (0..ball.len()).collect();
    let holds = par::map(&idx, |&i| {
        let (l, r) = column_identity_sides(ball.element(i));
        l == r
    })
    .into_iter()
    .all(|x| x);
    MinDisplacementReport {
        min_outside_k: min.unwrap_or_default(),
        column_identity_checked: ball.len(),
        column_identity_holds: holds,
    }
}

/// Upper bound on descent steps in [`reduce_to_word`].
pub const MAX_DESCENT_STEPS: usize = 10_000;

/// Write `g ∈ Γ` as a word in `b, u, v` by greedy descent: while `g ∉ K`,
/// replace `g` by `bkg` with `k ∈ K` minimizing `|(bkg)₃₃|²` (ties go to the
/// canonically least `k`).
pub fn reduce_to_word(g: &ProjUnitary, k: &KGroup) -> Result<Word> {
    let c = Constants::get();
    let b = c.raw(letter::B);
    let bk: Vec<Mat3> = k.elements().map(|kk| b * kk.matrix()).collect();
    let mut cur = g.matrix().clone();
    let mut prefix = Word::empty();
    for _ in 0..MAX_DESCENT_STEPS {
        let cls = ProjUnitary::from_unitary(cur.clone());
        if let Some(i) = k.index_of(&cls) {
            return Ok(&prefix * k.word(i));
        }
        let norm = cur.entry(2, 2).abs2();
        let mut best: Option<(QuadInt, usize)> = None;
        for (i, m) in bk.iter().enumerate() {
            let mut e33 = CycInt::zero();
            for t in 0..3 {
                e33 += &(m.entry(2, t) * cur.entry(t, 2));
            }
            let n = e33.abs2();
            let better = match &best {
                None => true,
                Some((bn, bi)) => n < *bn || (n == *bn && k.element(i) < k.element(*bi)),
            };
            if better {
                best = Some((n, i));
            }
        }
        let (bn, bi) = best.expect("K is nonempty");
        if bn >= norm {
            return Err(Error::NoDescent {
                norm: norm.to_string(),
            });
        }
        cur = &bk[bi] * &cur;
        // g = (bk)⁻¹ · (bkg) = k⁻¹ b⁻¹ · cur
        prefix = &(&prefix * &k.word(bi).inverse()) * &Word::letter(letter::B, -1);
    }
    Err(Error::NoDescent {
        norm: "descent did not terminate".into(),
    })
}

/// Canonical key of the double coset `KgK`.
///
/// `gK` is determined by the third column of `g` up to `ζ^ν` (elements of
/// `K` have representatives with zero off-corner third row and column), so
/// `KgK` is determined by the `K`-orbit of that column.
pub fn double_coset_key(g: &ProjUnitary, k: &KGroup) -> [CycInt; 3] {
    let m = g.matrix();
    let col = [
        m.entry(0, 2).clone(),
        m.entry(1, 2).clone(),
        m.entry(2, 2).clone(),
    ];
    let mut best: Option<[CycInt; 3]> = None;
    for kk in k.elements() {
        let km = kk.matrix();
        let mut v: [CycInt; 3] = std::array::from_fn(|i| {
            let mut acc = CycInt::zero();
            for (t, x) in col.iter().enumerate() {
                acc += &(km.entry(i, t) * x);
            }
            acc
        });
        for _ in 0..12 {
            if best.as_ref().is_none_or(|bst| v < *bst) {
                best = Some(v.clone());
            }
            v = v.map(|x| x.mul_zeta());
        }
    }
    best.expect("K is nonempty")
}

#[derive(Clone, Debug, Serialize)]
pub struct BkbReport {
    /// Distinct values of `|(bkb)₃₃|²`, increasing.
    pub distinct_norms: Vec<QuadInt>,
    pub double_cosets: usize,
    /// Number of `k` with `bkb ∈ KbK`.
    pub in_kbk: usize,
}

/// Displacement values and double cosets met by the 288 elements `bkb`.
pub fn bkb_profile(k: &KGroup, ball: &GroupBall) -> BkbReport {
    let c = Constants::get();
    let b = c.b();
    let elems: Vec<ProjUnitary> = k.elements().map(|kk| &(b * kk) * b).collect();
    let norms: BTreeSet<QuadInt> = elems.iter().map(ProjUnitary::entry33_abs2).collect();
    let keys: Vec<[CycInt; 3]> = par::map(&elems, |g| double_coset_key(g, k));
    let distinct: BTreeSet<&[CycInt; 3]> = keys.iter().collect();
    let kbk = &ball.cosets[1];
    let kbk_key = double_coset_key(&kbk.representative, k);
    let in_kbk = elems
        .iter()
        .filter(|g| ball.contains(g) && g.entry33_abs2() == kbk.norm)
        .count();
    debug_assert_eq!(in_kbk, keys.iter().filter(|x| **x == kbk_key).count());
    BkbReport {
        distinct_norms: norms.into_iter().collect(),
        double_cosets: distinct.len(),
        in_kbk,
    }
}

/// Every element of `K` has a representative `diag(A, 1)`.
pub fn k_fixes_origin(k: &KGroup) -> bool {
    k.elements().all(ProjUnitary::fixes_origin)
}

/// Multiplicity of each displacement value over a set of elements.
pub fn norm_histogram<'a, I: IntoIterator<Item = &'a ProjUnitary>>(
    it: I,
) -> HashMap<QuadInt, usize> {
    let mut h = HashMap::new();
    for g in it {
        *h.entry(g.entry33_abs2()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_has_288_elements() {
        let k = KGroup::enumerate().unwrap();
        assert_eq!(k.len(), 288);
        assert!(k.contains(&ProjUnitary::identity()));
        assert!(k_fixes_origin(&k));
        for i in 0..k.len() {
            assert_eq!(Constants::get().eval(k.word(i)), *k.element(i));
        }
    }

    #[test]
    fn j_has_order_12_and_j4_in_k() {
        let c = Constants::get();
        let k = KGroup::enumerate().unwrap();
        // brute-force powers until the identity class
        let mut p = c.j().clone();
        let mut n = 1;
        while !p.is_identity() {
            p = &p * c.j();
            n += 1;
        }
        assert_eq!(n, 12);
        assert!(k.contains(&c.j().pow(4)));
    }

    #[test]
    fn closure_overflow_is_reported() {
        let c = Constants::get();
        let gens = [
            (c.b().clone(), Word::letter(letter::B, 1)),
            (c.u().clone(), Word::letter(letter::U, 1)),
            (c.v().clone(), Word::letter(letter::V, 1)),
        ];
        let r = closure(ProjUnitary::identity(), &gens, |a, b| a * b, 300);
        assert!(matches!(r, Err(Error::ClosureOverflow { bound: 300 })));
    }

    #[test]
    fn column_identity_on_b() {
        let (l, r) = column_identity_sides(Constants::get().b());
        // independent evaluation: |b13|^2 = 2+√3, b23 = 1 so
        // |b13 − (r−1)|^2 + |b13|^2 = (r−1)(1+√3) = 2
        assert_eq!(r, QuadInt::new(2, 0));
        assert_eq!(l, r);
    }

    #[test]
    fn reduce_elements_of_k_have_no_b() {
        let k = KGroup::enumerate().unwrap();
        let w = reduce_to_word(k.element(17), &k).unwrap();
        assert!(w.letters().iter().all(|&(g, _)| g != letter::B));
    }

    #[test]
    fn reduce_random_words_round_trip() {
        let c = Constants::get();
        let k = KGroup::enumerate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(0..=12);
            let w = Word::new((0..len).map(|_| {
                let g = [letter::U, letter::V, letter::B][rng.gen_range(0..3)];
                (g, if rng.gen_bool(0.5) { 1 } else { -1 })
            }));
            let g = c.eval(&w);
            let r = reduce_to_word(&g, &k).unwrap();
            assert_eq!(c.eval(&r), g);
        }
    }

    #[test]
    fn reduce_gamma3_round_trips() {
        let c = Constants::get();
        let k = KGroup::enumerate().unwrap();
        let g = c.gamma3();
        let w = reduce_to_word(&g, &k).unwrap();
        assert_eq!(c.eval(&w), g);
    }

    #[test]
    fn ball_structure() {
        let k = KGroup::enumerate().unwrap();
        let s = GroupBall::build(&k);
        assert_eq!(s.len(), 48672);
        let sizes: Vec<usize> = s.cosets.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![288, 20736, 27648]);
        let c = Constants::get();
        let powers = |g: &ProjUnitary, n: i64| -> BTreeSet<usize> {
            (0..n).map(|e| k.index_of(&g.pow(e)).unwrap()).collect()
        };
        assert_eq!(
            s.cosets[1]
                .stabilizer
                .iter()
                .copied()
                .collect::<BTreeSet<_>>(),
            powers(c.v(), 4)
        );
        assert_eq!(
            s.cosets[2]
                .stabilizer
                .iter()
                .copied()
                .collect::<BTreeSet<_>>(),
            powers(c.u(), 3)
        );
        for i in [0, 5000, 30000, 48671] {
            assert_eq!(c.eval(&s.word(i, &k)), *s.element(i));
        }
        let rep = verify_theorem21(&s, &k, 1000, 1).unwrap();
        assert_eq!(rep.min_excluded_norm, gap_bound());
        let md = verify_min_displacement(&s);
        assert_eq!(md.min_outside_k, QuadInt::new(2, 1));
        assert!(md.column_identity_holds);
        assert!(s.is_symmetric());
        let p = bkb_profile(&k, &s);
        assert_eq!(p.distinct_norms.len(), 10);
        assert_eq!(
            p.distinct_norms[..4],
            [
                QuadInt::new(1, 0),
                QuadInt::new(2, 1),
                QuadInt::new(4, 2),
                QuadInt::new(6, 3)
            ]
        );
        assert_eq!(p.double_cosets, 20);
        assert_eq!(p.in_kbk, 40);
    }
}

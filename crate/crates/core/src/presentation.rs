//! Presentations of `Γ`: the triple-relation presentation on
//! `S₀* = K ∪ KbK`, the short presentation in `u, v, b`, the presentation of
//! `K`, and the relators of a Deligne–Mostow group under `J = buv`, `R₁ = b`,
//! `A₁ = v`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{gamma_alphabet, Constants, Mat3, ProjUnitary};
use crate::orbit_search::{closure, s_bound, GroupBall, KGroup};
use crate::par;
use crate::word::{Alphabet, Word};

/// Generators bound to witness elements, and relators that must evaluate to
/// the identity class.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub witnesses: Vec<ProjUnitary>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn evaluate(&self, w: &Word) -> ProjUnitary {
        let mut acc = Mat3::identity();
        for &(g, e) in w.letters() {
            let m = if e < 0 {
                self.witnesses[g as usize].inv()
            } else {
                self.witnesses[g as usize].clone()
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * m.matrix();
            }
        }
        ProjUnitary::from_unitary(acc)
    }

    /// First relator that does not evaluate to the identity class.
    pub fn check(&self) -> Result<()> {
        for w in &self.relators {
            if !self.evaluate(w).is_identity() {
                return Err(Error::RelatorFails {
                    word: w.display(&self.alphabet).to_string(),
                });
            }
        }
        Ok(())
    }

    /// One relator per line, letters written `name` or `name^e`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.relators {
            let _ = writeln!(out, "{}", w.display(&self.alphabet));
        }
        out
    }
}

/// A relation `g₁g₂g₃ = 1`, as indices into the generator list.
pub type Triple = [u32; 3];

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub generators: usize,
    /// Number of ordered triples in `S₀*` with product `1`.
    pub raw_triples: u64,
    /// `#{g ∈ S₀* : bg ∈ S₀*}`.
    pub b_row_count: usize,
    /// Triples with first entry `1` or `b`, before deduplication.
    pub emitted_before_dedup: usize,
    pub emitted: usize,
    pub rechecked: usize,
    pub certifications: Vec<Certification>,
}

/// A relator written as a product of elements of `S₀*`, reduced to the
/// identity by merging adjacent pairs; each merge is a triple relation.
#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub relator: String,
    pub factors: usize,
    pub steps: Vec<String>,
    pub certified: bool,
}

/// The triple-relation presentation on `S₀* = {g ∈ S : |g₃₃|² < 4 + 2√3}`.
#[derive(Debug)]
pub struct TriplePresentation {
    /// Indices into `S` of the elements of `S₀*`.
    pub generators: Vec<u32>,
    pub triples: Vec<Triple>,
    pub report: TripleReport,
}

impl TriplePresentation {
    /// As a [`Presentation`] with generators named `s0, s1, …`.
    pub fn to_presentation(&self, ball: &GroupBall) -> Presentation {
        let names: Vec<String> = (0..self.generators.len())
            .map(|i| format!("s{i}"))
            .collect();
        Presentation {
            alphabet: Alphabet::new(names),
            witnesses: self
                .generators
                .iter()
                .map(|&i| ball.element(i as usize).clone())
                .collect(),
            relators: self
                .triples
                .iter()
                .map(|t| Word::new(t.iter().map(|&g| (g as u16, 1))))
                .collect(),
        }
    }
}

/// Least rotation of `t` or of its inverse triple, where `inv` maps a
/// generator index to the index of its inverse.
fn canonical_triple(t: Triple, inv: &[u32]) -> Triple {
    let r = [t[2], t[1], t[0]].map(|g| inv[g as usize]);
    let mut best = t;
    for base in [t, r] {
        for s in 0..3 {
            let c = [base[s], base[(s + 1) % 3], base[(s + 2) % 3]];
            if c < best {
                best = c;
            }
        }
    }
    best
}

/// Enumerate the triple relations of `S₀*`, emitting those with first entry
/// `1` or `b`.
///
/// Any triple `(k₁bk₂, g₂, g₃)` is conjugate to `(b, k₂g₂, g₃k₁)`, so up to
/// the relations of `K` these represent all of them. Emitted triples are
/// deduplicated under rotation and inversion, and `recheck_fraction` of them
/// are re-evaluated from scratch.
pub fn extract_triple_relations(
    ball: &GroupBall,
    recheck_fraction: f64,
    seed: u64,
) -> Result<TriplePresentation> {
    let c = Constants::get();
    let bound = s_bound();
    let gens: Vec<u32> = (0..ball.len() as u32)
        .filter(|&i| *ball.norm(i as usize) < bound)
        .collect();
    let mut pos = vec![u32::MAX; ball.len()];
    for (g, &i) in gens.iter().enumerate() {
        pos[i as usize] = g as u32;
    }
    let lookup = |p: &ProjUnitary| -> Option<u32> {
        ball.index_of(p).map(|i| pos[i]).filter(|&g| g != u32::MAX)
    };
    let inv: Vec<u32> = par::map(&gens, |&i| {
        lookup(&ball.element(i as usize).inv()).expect("S0* is symmetric")
    });
    let id = lookup(&ProjUnitary::identity()).expect("identity in S0*");
    let b = lookup(c.b()).expect("b in S0*");

    let k_count = gens
        .iter()
        .filter(|&&i| ball.element(i as usize).fixes_origin())
        .count();
    let b_elem = ball.element(gens[b as usize] as usize);
    let b_row: Vec<Option<(u32, u32)>> = par::map_range(gens.len(), |g| {
        let p = b_elem * ball.element(gens[g] as usize);
        lookup(&p.inv()).map(|g3| (g as u32, g3))
    });
    let b_row: Vec<(u32, u32)> = b_row.into_iter().flatten().collect();

    let mut raw: Vec<Triple> = (0..gens.len() as u32)
        .map(|g| [id, g, inv[g as usize]])
        .collect();
    raw.extend(b_row.iter().map(|&(g2, g3)| [b, g2, g3]));
    let emitted_before_dedup = raw.len();
    let mut seen = HashSet::new();
    let mut triples = Vec::new();
    for t in raw {
        let ct = canonical_triple(t, &inv);
        if seen.insert(ct) {
            triples.push(ct);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_check = ((triples.len() as f64 * recheck_fraction).ceil() as usize).min(triples.len());
    let sample: Vec<&Triple> = triples.choose_multiple(&mut rng, n_check).collect();
    let bad = par::map(&sample, |t| {
        let m = t
            .iter()
            .map(|&g| ball.element(gens[g as usize] as usize).matrix())
            .fold(Mat3::identity(), |acc, m| &acc * m);
        m.scalar_exponent().is_none()
    });
    if let Some(i) = bad.iter().position(|&x| x) {
        return Err(Error::RelatorFails {
            word: format!("{:?}", sample[i]),
        });
    }

    let non_k = gens.len() - k_count;
    let raw_triples =
        (k_count as u64) * (gens.len() as u64) + (non_k as u64) * (b_row.len() as u64);

    let certifications = short_relators()
        .iter()
        .map(|w| certify(w, &lookup))
        .collect();

    Ok(TriplePresentation {
        report: TripleReport {
            generators: gens.len(),
            raw_triples,
            b_row_count: b_row.len(),
            emitted_before_dedup,
            emitted: triples.len(),
            rechecked: n_check,
            certifications,
        },
        generators: gens,
        triples,
    })
}

/// Reduce `text` to the identity by merging adjacent factors whose product
/// lies in `S₀*`, leftmost first.
fn certify(text: &str, lookup: &impl Fn(&ProjUnitary) -> Option<u32>) -> Certification {
    let c = Constants::get();
    let word = gamma_alphabet().parse(text).expect("static relator");
    let mut factors: Vec<ProjUnitary> = Vec::new();
    for &(g, e) in word.letters() {
        let x = if e < 0 {
            c.class(g).inv()
        } else {
            c.class(g).clone()
        };
        for _ in 0..e.unsigned_abs() {
            factors.push(x.clone());
        }
    }
    let n = factors.len();
    let name = |p: &ProjUnitary| match lookup(p) {
        Some(g) => format!("s{g}"),
        None => "?".into(),
    };
    let mut steps = Vec::new();
    let mut certified = factors.iter().all(|f| lookup(f).is_some());
    while certified && factors.len() > 3 {
        let merge = (0..factors.len() - 1).find_map(|i| {
            let p = &factors[i] * &factors[i + 1];
            lookup(&p).map(|_| (i, p))
        });
        match merge {
            Some((i, p)) => {
                steps.push(format!(
                    "{} {} {}",
                    name(&factors[i]),
                    name(&factors[i + 1]),
                    name(&p.inv())
                ));
                factors.splice(i..i + 2, [p]);
            }
            None => certified = false,
        }
    }
    if certified {
        let total = factors
            .iter()
            .fold(ProjUnitary::identity(), |acc, f| &acc * f);
        certified = total.is_identity();
        let mut last: Vec<String> = factors.iter().map(&name).collect();
        while last.len() < 3 {
            last.push(name(&ProjUnitary::identity()));
        }
        steps.push(last.join(" "));
    }
    Certification {
        relator: text.to_string(),
        factors: n,
        steps,
        certified,
    }
}

/// The seven relators of the short presentation.
pub fn short_relators() -> [&'static str; 7] {
    [
        "u^3",
        "v^4",
        "b^3",
        "(uv)^2 (vu)^-2",
        "v b v^-1 b^-1",
        "(buv)^3",
        "(buvu)^2 v",
    ]
}

/// Derived identities `lhs = rhs` used to reduce the triple presentation.
pub fn derived_relations() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = [
        ("b b", "u v u v b u v u"),
        ("b u b", "u b u"),
        ("b u v u^-1 b", "v^-1 u^-1 v^-1 b u^-1"),
        ("b u v u b", "(vu)^-2"),
        ("b u v u^-1 v u b", "v^2 u^-1 v^-1 u^-1 b u^-1 v^-1 u^-1"),
    ]
    .iter()
    .map(|(l, r)| (l.to_string(), r.to_string()))
    .collect();
    for nu in 0..4 {
        out.push((
            format!("b v^{nu} u v u b"),
            format!("v^{} u^-1 v^-1 u^-1", nu - 1),
        ));
    }
    out.push(("(b u^-1)^4".into(), "1".into()));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorReport {
    pub relators: Vec<RelationCheck>,
    pub derived: Vec<RelationCheck>,
}

impl RelatorReport {
    pub fn all_hold(&self) -> bool {
        self.relators.iter().chain(&self.derived).all(|r| r.holds)
    }
}

fn check_identity(lhs: &str, rhs: &str) -> Result<bool> {
    let c = Constants::get();
    let r = if rhs == "1" {
        ProjUnitary::identity()
    } else {
        c.word(rhs)?
    };
    Ok(c.word(lhs)? == r)
}

/// Verify the short presentation's relators and the derived identities.
pub fn verify_presentation_eq35() -> Result<RelatorReport> {
    let mut relators = Vec::new();
    for w in short_relators() {
        relators.push(RelationCheck {
            relation: format!("{w} = 1"),
            holds: check_identity(w, "1")?,
        });
    }
    let mut derived = Vec::new();
    for (l, r) in derived_relations() {
        derived.push(RelationCheck {
            relation: format!("{l} = {r}"),
            holds: check_identity(&l, &r)?,
        });
    }
    let report = RelatorReport { relators, derived };
    if let Some(bad) = report
        .relators
        .iter()
        .chain(&report.derived)
        .find(|r| !r.holds)
    {
        return Err(Error::RelatorFails {
            word: bad.relation.clone(),
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct KPresentationReport {
    pub relators_hold: bool,
    /// Elements reached by words of length at most 12 in `u^{±1}, v^{±1}`.
    pub reached_by_short_words: usize,
    pub order: usize,
    pub j_order: Option<u32>,
}

/// `⟨u, v : u³ = v⁴ = 1, (uv)² = (vu)²⟩` against the matrix group `K`.
pub fn verify_k_presentation(k: &KGroup) -> Result<KPresentationReport> {
    let c = Constants::get();
    let relators_hold = ["u^3", "v^4", "(uv)^2 (vu)^-2"]
        .iter()
        .map(|w| check_identity(w, "1"))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|x| x);
    let gens = [c.u().clone(), c.u().inv(), c.v().clone(), c.v().inv()];
    let mut reached: HashSet<ProjUnitary> = HashSet::from([ProjUnitary::identity()]);
    let mut frontier = vec![ProjUnitary::identity()];
    for _ in 0..12 {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let p = g * s;
                if reached.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(KPresentationReport {
        relators_hold,
        reached_by_short_words: reached.len(),
        order: k.len(),
        j_order: c.j().order(100),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeligneMostowReport {
    pub relations: Vec<RelationCheck>,
}

/// Relators `J³ = R₁³ = A₁⁴ = 1`, `A₁ = (JR₁⁻¹J)²`, `A₁R₁ = R₁A₁` under
/// `J = buv`, `R₁ = b`, `A₁ = v`.
pub fn verify_deligne_mostow() -> Result<DeligneMostowReport> {
    let dm = Alphabet::new(["J", "R1", "A1"]);
    let subst = ["(buv)", "b", "v"];
    let rels = [
        ("J^3", "1"),
        ("R1^3", "1"),
        ("A1^4", "1"),
        ("A1", "(J R1^-1 J)^2"),
        ("A1 R1", "R1 A1"),
    ];
    let to_gamma = |text: &str| -> Result<String> {
        if text == "1" {
            return Ok("1".into());
        }
        let w = dm.parse(text)?;
        let mut out = String::new();
        for &(g, e) in w.letters() {
            let _ = write!(out, "{}^{} ", subst[g as usize], e);
        }
        Ok(out)
    };
    let mut relations = Vec::new();
    for (l, r) in rels {
        let holds = check_identity(&to_gamma(l)?, &to_gamma(r)?)?;
        if !holds {
            return Err(Error::RelatorFails {
                word: format!("{l} = {r}"),
            });
        }
        relations.push(RelationCheck {
            relation: format!("{l} = {r}"),
            holds,
        });
    }
    Ok(DeligneMostowReport { relations })
}

/// The subgroup generated by `gens` as a closure, for cross-checks.
pub fn generated_order(gens: &[ProjUnitary], bound: usize) -> Result<usize> {
    let g: Vec<(ProjUnitary, Word)> = gens.iter().map(|x| (x.clone(), Word::empty())).collect();
    Ok(closure(ProjUnitary::identity(), &g, |a, b| a * b, bound)?
        .0
        .len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_and_derived_relations_hold() {
        let r = verify_presentation_eq35().unwrap();
        assert_eq!(r.relators.len(), 7);
        assert_eq!(r.derived.len(), 10);
        assert!(r.all_hold());
    }

    #[test]
    fn wrong_relation_is_rejected() {
        assert!(!check_identity("b u", "u b").unwrap());
    }

    #[test]
    fn k_presentation() {
        let k = KGroup::enumerate().unwrap();
        let r = verify_k_presentation(&k).unwrap();
        assert!(r.relators_hold);
        assert_eq!(r.reached_by_short_words, 288);
        assert_eq!(r.j_order, Some(12));
    }

    #[test]
    fn deligne_mostow() {
        assert_eq!(verify_deligne_mostow().unwrap().relations.len(), 5);
    }

    #[test]
    fn canonical_triple_is_rotation_and_inversion_invariant() {
        let inv = [0, 2, 1, 3, 5, 4];
        let t = [1, 3, 4];
        let c = canonical_triple(t, &inv);
        assert_eq!(canonical_triple([3, 4, 1], &inv), c);
        assert_eq!(canonical_triple([5, 3, 2], &inv), c);
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let c = Constants::get();
        let a = gamma_alphabet();
        for (x, y) in [("b u v", "u^-1 b"), ("j^3 a1", "a2^-1 v"), ("a3 b", "b^-1")] {
            let wx = a.parse(x).unwrap();
            let wy = a.parse(y).unwrap();
            assert_eq!(c.eval(&(&wx * &wy)), &c.eval(&wx) * &c.eval(&wy));
        }
    }
}

use std::collections::HashSet;
use std::sync::OnceLock;

use ballgroup::ball_numeric::{
    act, displacement_from_norm, dist, dist_from_origin, in_fs, in_fs_tol,
    random_point_in_hyperbolic_ball, rho0_sq_closed_form, to_numeric, BallPoint, HalfSpaceRows,
    FS_TOLERANCE,
};
use ballgroup::cyclotomic::{quad_cmp, CycInt, QuadInt};
use ballgroup::lattice::{letter, Constants, ProjUnitary};
use ballgroup::orbit_search::{GroupBall, KGroup};
use ballgroup::subgroup_pi::{pi_contains, quotient_map};
use ballgroup::word::Word;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn k_group() -> &'static KGroup {
    static K: OnceLock<KGroup> = OnceLock::new();
    K.get_or_init(|| KGroup::enumerate().unwrap())
}

fn ball() -> &'static GroupBall {
    static S: OnceLock<GroupBall> = OnceLock::new();
    S.get_or_init(|| GroupBall::build(k_group()))
}

fn random_word(rng: &mut impl Rng, letters: &[u16], max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    Word::new((0..n).map(|_| {
        (
            letters[rng.gen_range(0..letters.len())],
            if rng.gen() { 1 } else { -1 },
        )
    }))
}

fn random_s_element(rng: &mut impl Rng) -> &'static ProjUnitary {
    let s = ball();
    s.element(rng.gen_range(0..s.len()))
}

fn cyc() -> impl Strategy<Value = CycInt> {
    prop::array::uniform4(-50i64..=50).prop_map(CycInt::from_i64s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn abs2_matches_product_and_float(x in cyc()) {
        let exact = x.abs2();
        let prod = &x * &x.conj();
        prop_assert_eq!(prod.c[0].clone(), exact.a.clone());
        // √3 = ζ + ζ⁻¹ = 2ζ − ζ³ in the basis 1, ζ, ζ², ζ³.
        prop_assert_eq!(prod.c[1].clone(), 2 * exact.b.clone());
        prop_assert_eq!(prod.c[3].clone(), -exact.b.clone());
        prop_assert_eq!(prod.c[2].clone(), 0.into());
        let f = x.to_complex().norm_sqr();
        prop_assert!((exact.to_f64() - f).abs() <= 1e-9 * f.max(1.0));
    }

    #[test]
    fn quad_cmp_agrees_with_float(a in -1_000_000i64..=1_000_000, b in -1_000_000i64..=1_000_000,
                                  c in -1_000_000i64..=1_000_000, d in -1_000_000i64..=1_000_000) {
        let r = 3f64.sqrt();
        let (x, y) = (a as f64 + r * b as f64, c as f64 + r * d as f64);
        prop_assume!((x - y).abs() > 1e-3);
        prop_assert_eq!(quad_cmp(&QuadInt::new(a, b), &QuadInt::new(c, d)), x.partial_cmp(&y).unwrap());
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(x in cyc(), y in cyc()) {
        prop_assert_eq!((&x * &y).reduce_mod_r(), x.reduce_mod_r() * y.reduce_mod_r());
        prop_assert_eq!((&x + &y).reduce_mod_r(), x.reduce_mod_r() + y.reduce_mod_r());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn isometry_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = to_numeric(random_s_element(&mut rng));
        let z = random_point_in_hyperbolic_ball(&mut rng, 1.5);
        let w = random_point_in_hyperbolic_ball(&mut rng, 1.5);
        let d0 = dist(&z, &w);
        let d1 = dist(&act(&g, &z).unwrap(), &act(&g, &w).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-8, "{} vs {}", d0, d1);
    }

    #[test]
    fn exact_and_float_norms_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Constants::get();
        let g = c.eval(&random_word(&mut rng, &[letter::U, letter::V, letter::B, letter::J], 10));
        let exact = g.entry33_abs2().to_f64();
        let float = to_numeric(&g).entry33_abs2();
        prop_assert!((exact - float).abs() <= 1e-9 * exact.max(1.0), "{} vs {}", exact, float);
    }
}

#[test]
fn unitarity_closed_under_products_in_k() {
    let k = k_group();
    for a in k.elements() {
        for b in k.elements() {
            assert!((a.matrix() * b.matrix()).is_unitary());
        }
    }
}

#[test]
fn hash_and_equality_coherent() {
    let mut keys = std::collections::HashMap::new();
    for g in ball().elements() {
        if let Some(prev) = keys.insert(g.key(), g) {
            assert_eq!(prev, g, "hash collision between distinct elements");
        }
    }
    assert_eq!(keys.len(), ball().len());
}

#[test]
fn inverse_is_an_anti_homomorphism_and_involution() {
    let c = Constants::get();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let g = c.eval(&random_word(
            &mut rng,
            &[letter::U, letter::V, letter::B],
            8,
        ));
        let h = c.eval(&random_word(
            &mut rng,
            &[letter::U, letter::V, letter::B],
            8,
        ));
        assert_eq!(g.inv().inv(), g);
        assert_eq!((&g * &h).inv(), &h.inv() * &g.inv());
    }
}

#[test]
fn displacement_matches_exact_norm_on_coset_representatives() {
    for coset in &ball().cosets {
        let g = &coset.representative;
        let from_norm = displacement_from_norm(g.entry33_abs2().to_f64());
        let moved = act(&to_numeric(g), &BallPoint::origin()).unwrap();
        assert!(
            (from_norm - dist_from_origin(&moved)).abs() < 1e-8,
            "{}",
            coset.name
        );
    }
}

#[test]
fn circle_conditions_match_half_spaces() {
    let rows = HalfSpaceRows::build(k_group());
    assert_eq!(rows.rows.len(), 168);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for radius in [0.56, 0.9] {
        let mut inside = 0;
        for _ in 0..100_000 {
            let w = random_point_in_hyperbolic_ball(&mut rng, radius);
            let a = in_fs(&w);
            assert_eq!(a, rows.contains(&w, FS_TOLERANCE), "{w:?}");
            inside += a as usize;
        }
        assert!(inside > 0);
    }
}

#[test]
fn fs_points_satisfy_norm_bound() {
    let bound = rho0_sq_closed_form() + 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut hits = 0;
    for _ in 0..200_000 {
        let w = random_point_in_hyperbolic_ball(&mut rng, 0.84);
        if in_fs(&w) {
            hits += 1;
            assert!(w.norm_sqr() <= bound, "{w:?}");
        }
    }
    assert!(hits > 1000);
}

#[test]
fn fs_is_k_invariant() {
    let k: Vec<_> = k_group().elements().map(to_numeric).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 2000 {
        let w = random_point_in_hyperbolic_ball(&mut rng, 0.84);
        if !in_fs(&w) {
            continue;
        }
        let g = &k[rng.gen_range(0..k.len())];
        assert!(in_fs_tol(&act(g, &w).unwrap(), 1e-8));
        checked += 1;
    }
}

#[test]
fn quotient_map_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let g = random_s_element(&mut rng);
        let h = random_s_element(&mut rng);
        assert_eq!(quotient_map(&(g * h)), &quotient_map(g) * &quotient_map(h));
    }
}

#[test]
fn pi_membership_closed_under_products_and_inverses() {
    let c = Constants::get();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let gens = [letter::A1, letter::A2, letter::A3];
    let mut seen = HashSet::new();
    for _ in 0..500 {
        let g = c.eval(&random_word(&mut rng, &gens, 6));
        let h = c.eval(&random_word(&mut rng, &gens, 6));
        assert!(pi_contains(&g) && pi_contains(&h));
        assert!(pi_contains(&(&g * &h)));
        assert!(pi_contains(&g.inv()));
        seen.insert(g);
    }
    assert!(seen.len() > 200, "{}", seen.len());
}

//! Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ballgroup::ball_numeric::{
    act, compute_r0, dist, dist_from_origin, estimate_volume, in_fs, r0_closed_form,
    random_point_in_hyperbolic_ball, rho0_sq_closed_form, to_numeric, BallPoint, HalfSpaceRows,
    FS_TOLERANCE,
};
use ballgroup::cyclotomic::QuadInt;
use ballgroup::lattice::{letter, Constants, ProjUnitary};
use ballgroup::orbit_search::{verify_theorem21, GroupBall, KGroup};
use ballgroup::presentation::{verify_deligne_mostow, verify_presentation_eq35};
use ballgroup::subgroup_pi::{
    quotient_map, verify_abelianization_identities, verify_fixed_point_identities,
    verify_index_and_transversal, verify_quotient, verify_torsion_free,
};
use ballgroup::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SEED: u64 = 20240607;
const VOLUME_SAMPLES: u64 = 100_000_000;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(
        elapsed < Duration::from_secs(limit_s),
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn criterion_1(k: &mut Option<KGroup>) -> Outcome {
    let t = Instant::now();
    let group = KGroup::enumerate().map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(group.len() == 288, format!("|K| = {}", group.len()))?;
    within(elapsed, 1)?;
    *k = Some(group);
    Ok(format!("|K| = 288 in {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_2(k: &KGroup, s: &mut Option<GroupBall>) -> Outcome {
    let t = Instant::now();
    let ball = GroupBall::build(k);
    let elapsed = t.elapsed();
    let strata: Vec<usize> = ball.strata_sizes().iter().map(|(_, n)| *n).collect();
    ensure(ball.len() == 48_672, format!("|S| = {}", ball.len()))?;
    ensure(
        strata == [288, 20_736, 27_648],
        format!("strata {strata:?}"),
    )?;
    within(elapsed, 30)?;
    *s = Some(ball);
    Ok(format!(
        "|S| = 48672, strata {strata:?} in {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_3() -> Outcome {
    let c = Constants::get();
    let table = [
        (ProjUnitary::identity(), QuadInt::new(1, 0), 0.0),
        (c.gamma2(), QuadInt::new(2, 1), 1.2767),
        (c.gamma3(), QuadInt::new(4, 2), 1.6629),
        (c.gamma4(), QuadInt::new(6, 3), 1.8778),
    ];
    let mut ds = Vec::new();
    for (i, (g, norm, d)) in table.iter().enumerate() {
        let got = g.entry33_abs2();
        ensure(&got == norm, format!("gamma{}: |g33|^2 = {got}", i + 1))?;
        let moved = act(&to_numeric(g), &BallPoint::origin()).map_err(|e| e.to_string())?;
        let dd = dist_from_origin(&moved);
        ensure((dd - d).abs() <= 5e-5, format!("gamma{}: d = {dd}", i + 1))?;
        ds.push(format!("{dd:.4}"));
    }
    Ok(format!("d = {}", ds.join(", ")))
}

fn criterion_4(k: &KGroup, s: &GroupBall) -> Outcome {
    let t = Instant::now();
    let r = verify_theorem21(s, k, 100_000, SEED).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(r.condition_a, "condition (a)")?;
    ensure(r.condition_b, "condition (b)")?;
    ensure(
        r.min_excluded_norm == QuadInt::new(6, 3),
        format!("min excluded {}", r.min_excluded_norm),
    )?;
    within(elapsed, 10)?;
    Ok(format!(
        "(a), (b) hold; min excluded |(gg')33|^2 = {} over {} reduced products in {:.1} s",
        r.min_excluded_norm,
        r.reduced_products,
        elapsed.as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let r = verify_presentation_eq35().map_err(|e| e.to_string())?;
    ensure(
        r.relators.len() == 7,
        format!("{} relators", r.relators.len()),
    )?;
    ensure(
        r.derived.len() == 10,
        format!("{} derived relations", r.derived.len()),
    )?;
    if let Some(bad) = r.relators.iter().chain(&r.derived).find(|x| !x.holds) {
        return Err(format!("fails: {}", bad.relation));
    }
    Ok("7 relators and 10 derived relations hold".into())
}

fn criterion_6() -> Outcome {
    let r = verify_deligne_mostow().map_err(|e| e.to_string())?;
    ensure(r.relations.iter().all(|x| x.holds), "relation fails")?;
    Ok(format!(
        "{} relations hold under J = buv, R1 = b, A1 = v",
        r.relations.len()
    ))
}

fn criterion_7() -> Outcome {
    let r = verify_quotient().map_err(|e| e.to_string())?;
    ensure(r.passed(), format!("{r:?}"))?;
    Ok(format!(
        "|PU(3,F9)| = {}, |<R,M>| = {}, R and M reproduced exactly",
        r.pu3_order, r.rm_order
    ))
}

fn criterion_8(k: &KGroup) -> Outcome {
    let t = Instant::now();
    let q = verify_quotient().map_err(|e| e.to_string())?;
    let idx = verify_index_and_transversal(k, &q).map_err(|e| e.to_string())?;
    let tor = verify_torsion_free(k).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(idx.index == 864 && idx.transversal_size == 864, "index")?;
    ensure(
        idx.pairs_checked == 372_816 && idx.pairwise_inequivalent,
        "transversal",
    )?;
    ensure(idx.generators_in_pi == [true; 3], "a1, a2, a3 in Pi")?;
    ensure(tor.rows.len() == 11 && tor.passed(), format!("{tor:?}"))?;
    within(elapsed, 60)?;
    Ok(format!(
        "index 864, {} pairs inequivalent, 11 x 864 conjugates outside Pi in {:.1} s",
        idx.pairs_checked,
        elapsed.as_secs_f64()
    ))
}

fn criterion_9(k: &KGroup, s: &GroupBall) -> Outcome {
    let fp = verify_fixed_point_identities(k, Some(s)).map_err(|e| e.to_string())?;
    ensure(fp.passed(), format!("{fp:?}"))?;
    let ab = verify_abelianization_identities().map_err(|e| e.to_string())?;
    ensure(ab.passed(), format!("{ab:?}"))?;
    Ok(format!(
        "{} fixed-point identities, {} abelianization identities, exponent sums {:?}",
        fp.pi_mu.len() + fp.h_identities.len(),
        ab.scalar_words.len() + ab.conjugations.len(),
        ab.relation_exponents
    ))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let v = estimate_volume(VOLUME_SAMPLES, SEED);
    let elapsed = t.elapsed();
    ensure(v.samples >= 100_000_000, "too few samples")?;
    ensure(
        v.relative_error < 0.05,
        format!(
            "estimate {} vs 1/864, relative error {}",
            v.estimate, v.relative_error
        ),
    )?;
    ensure(
        v.estimate + 3.0 * v.std_error < 2.0 / 864.0,
        "upper bound not certified",
    )?;
    within(elapsed, 300)?;
    Ok(format!(
        "vol(F_S)/|K| = {:.8} +- {:.1e} (1/864 = {:.8}), {} samples in {:.1} s",
        v.estimate,
        v.std_error,
        1.0 / 864.0,
        v.samples,
        elapsed.as_secs_f64()
    ))
}

fn criterion_11() -> Outcome {
    let r = compute_r0(25, SEED).map_err(|e| e.to_string())?;
    ensure(
        (r.r0 - r0_closed_form()).abs() < 1e-4,
        format!("r0 = {}", r.r0),
    )?;
    ensure(
        (r.rho0_sq - rho0_sq_closed_form()).abs() < 1e-6,
        format!("rho0^2 = {}", r.rho0_sq),
    )?;
    ensure(r.b_fixes_midpoint_residual < 1e-8, "b.m != m")?;
    Ok(format!(
        "r0 = {:.10}, rho0^2 = {:.10}, |b.m - m| = {:.1e}",
        r.r0, r.rho0_sq, r.b_fixes_midpoint_residual
    ))
}

fn criterion_12(k: &KGroup, s: &GroupBall) -> Outcome {
    let c = Constants::get();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pick = |rng: &mut ChaCha8Rng| s.element(rng.gen_range(0..s.len()));

    let mut worst_iso: f64 = 0.0;
    for _ in 0..100 {
        let g = to_numeric(pick(&mut rng));
        let z = random_point_in_hyperbolic_ball(&mut rng, 1.5);
        let w = random_point_in_hyperbolic_ball(&mut rng, 1.5);
        let gz = act(&g, &z).map_err(|e| e.to_string())?;
        let gw = act(&g, &w).map_err(|e| e.to_string())?;
        worst_iso = worst_iso.max((dist(&gz, &gw) - dist(&z, &w)).abs());
    }
    ensure(worst_iso < 1e-8, format!("isometry error {worst_iso}"))?;

    let mut worst_norm: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(0..=10);
        let word = Word::new((0..n).map(|_| {
            let l = [letter::U, letter::V, letter::B, letter::J][rng.gen_range(0..4)];
            (l, if rng.gen() { 1 } else { -1 })
        }));
        let g = c.eval(&word);
        let exact = g.entry33_abs2().to_f64();
        worst_norm = worst_norm.max((exact - to_numeric(&g).entry33_abs2()).abs() / exact);
    }
    ensure(
        worst_norm < 1e-9,
        format!("|g33|^2 relative error {worst_norm}"),
    )?;

    for _ in 0..10_000 {
        let (g, h) = (pick(&mut rng), pick(&mut rng));
        ensure(
            quotient_map(&(g * h)) == &quotient_map(g) * &quotient_map(h),
            "quotient map is not multiplicative",
        )?;
    }

    let rows = HalfSpaceRows::build(k);
    let mut inside = 0;
    for _ in 0..100_000 {
        let w = random_point_in_hyperbolic_ball(&mut rng, 0.9);
        let a = in_fs(&w);
        ensure(
            a == rows.contains(&w, FS_TOLERANCE),
            format!("14 vs 168 disagree at {w:?}"),
        )?;
        inside += a as usize;
    }
    Ok(format!(
        "isometry {worst_iso:.1e}, norms {worst_norm:.1e}, 10^4 homomorphism pairs, 10^5 domain samples ({inside} inside)"
    ))
}

fn run(id: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = t.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1} s]"),
        Err(reason) => println!("FAIL {id:>2} {name}: {reason} [{secs:.1} s]"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    let mut k = None;
    let mut s = None;
    let mut ok = run(1, "stabilizer K", || criterion_1(&mut k));
    let k = k.unwrap_or_else(|| KGroup::enumerate().expect("K"));
    ok &= run(2, "ball S", || criterion_2(&k, &mut s));
    let s = s.unwrap_or_else(|| GroupBall::build(&k));
    ok &= run(3, "distance table", criterion_3);
    ok &= run(4, "closure conditions", || criterion_4(&k, &s));
    ok &= run(5, "presentation", criterion_5);
    ok &= run(6, "Deligne-Mostow relators", criterion_6);
    ok &= run(7, "finite quotient", criterion_7);
    ok &= run(8, "subgroup Pi", || criterion_8(&k));
    ok &= run(9, "fixed points and abelianization", || criterion_9(&k, &s));
    ok &= run(10, "volume", criterion_10);
    ok &= run(11, "circumradius r0", criterion_11);
    ok &= run(12, "property suites", || criterion_12(&k, &s));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use ballgroup::orbit_search::{GroupBall, KGroup};
use ballgroup::presentation::extract_triple_relations;
use ballgroup::{Constants, ProjUnitary};

#[test]
fn triple_relations_on_s0() {
    let k = KGroup::enumerate().unwrap();
    let s = GroupBall::build(&k);
    let tp = extract_triple_relations(&s, 0.01, 3).unwrap();
    let r = &tp.report;
    assert_eq!(r.generators, 21024);
    assert_eq!(r.raw_triples, 77_718_528);
    assert_eq!(r.b_row_count, 3456);
    assert_eq!(r.emitted, 24_478);
    assert_eq!(r.certifications.len(), 7);
    assert!(r.certifications.iter().all(|c| c.certified));

    let p = tp.to_presentation(&s);
    let c = Constants::get();
    let b = s.index_of(c.b()).unwrap() as u32;
    let bi = tp.generators.iter().position(|&g| g == b).unwrap() as u32;
    // (b, b, b) up to rotation
    assert!(tp.triples.contains(&[bi, bi, bi]));
    for w in p.relators.iter().step_by(997) {
        assert!(p.evaluate(w).is_identity());
    }
    assert_eq!(p.evaluate(&p.relators[0]), ProjUnitary::identity());
}

use ballgroup::orbit_search::{GroupBall, KGroup};
use ballgroup::subgroup_pi::{
    verify_fixed_point_identities, verify_index_and_transversal, verify_quotient,
    verify_torsion_free,
};

#[test]
fn index_torsion_and_fixed_points() {
    let k = KGroup::enumerate().unwrap();
    let q = verify_quotient().unwrap();
    let idx = verify_index_and_transversal(&k, &q).unwrap();
    assert_eq!(idx.transversal_size, 864);
    assert_eq!(idx.pairs_checked, 372_816);
    assert_eq!(idx.index, 864);
    assert_eq!(idx.generators_in_pi, [true; 3]);
    assert_eq!(idx.generator_det_exponents, [Some(3), Some(3), Some(6)]);

    let tor = verify_torsion_free(&k).unwrap();
    assert!(tor.passed(), "{tor:#?}");

    let ball = GroupBall::build(&k);
    let fp = verify_fixed_point_identities(&k, Some(&ball)).unwrap();
    assert_eq!(fp.buv_pairs, 18);
    assert_eq!(fp.buv_inverse_pairs, 0);
    assert_eq!(fp.distinctness_checked, 90);
    let st = fp.stabilizer.as_ref().unwrap();
    assert!(st.holds, "{st:#?}");
    assert!(fp.passed());
}

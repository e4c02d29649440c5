mod common;

use cartan_core::characters::{
    class_reps_with, perm_character, shape_instances_2power, verify_chen_composite, verify_chen_prime_power,
    ClassPartition, TableColumn,
};
use common::appendix_expected;

#[test]
fn appendix_table_for_small_e() {
    for e in 1..=4u32 {
        let part = ClassPartition::new(1 << e).unwrap();
        let reps = class_reps_with(&part, e).unwrap();
        assert_eq!(reps.iter().map(|r| r.size).sum::<u64>(), part.group_order());
        for col in TableColumn::all(e) {
            let chi = perm_character(&col.spec(2, e).unwrap(), &part).unwrap();
            for shape in shape_instances_2power(e) {
                let got = chi.at(&part, &shape.matrix(e));
                assert_eq!(got, appendix_expected(&shape, col, e), "e={e} {col} at {shape}");
            }
        }
    }
}

#[test]
fn chen_identities_small() {
    for (p, e) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let r = verify_chen_prime_power(p, e).unwrap();
        assert!(r.holds, "{}", r.label);
    }
    for s in ["6:2=s,3=ns", "6:2=ns,3=s", "6:ns", "10:2=s,5=ns", "12:2=s,3=ns"] {
        let r = verify_chen_composite(&s.parse().unwrap()).unwrap();
        assert!(r.holds, "{s}");
    }
}

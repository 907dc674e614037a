mod common;

use std::collections::HashSet;

use asmass::gf::GaloisField;
use asmass::mass::{partitions_for_genus, RamData};
use asmass::projgeom::enumerate_pgl2;
use common::checks;
use common::FIELDS;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(FIELDS.to_vec())
}

fn lift(r: checks::Check) -> std::result::Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, n) in field_strategy(), seed in any::<u64>()) {
        lift(checks::field_axioms(p, n, seed))?;
    }

    #[test]
    fn as_soundness((p, n) in field_strategy(), seed in any::<u64>()) {
        lift(checks::as_soundness(p, n, seed))?;
    }

    #[test]
    fn as_completeness((p, n) in field_strategy(), seed in any::<u64>()) {
        lift(checks::as_completeness(p, n, seed))?;
    }

    #[test]
    fn action_laws((p, n) in field_strategy(), seed in any::<u64>()) {
        lift(checks::action_laws(p, n, seed))?;
    }

    #[test]
    fn group_axioms((p, n) in field_strategy(), seed in any::<u64>()) {
        lift(checks::group_axioms(p, n, seed))?;
    }

    #[test]
    fn genus_partitions_are_admissible(g in 1u64..12, p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        if let Ok(parts) = partitions_for_genus(g, p) {
            for r in parts {
                prop_assert_eq!(r.genus(), g);
                prop_assert!(RamData::new(p, r.eps().to_vec()).is_ok());
            }
        }
    }
}

#[test]
fn pgl2_order() {
    for (p, n) in FIELDS {
        let k = GaloisField::new(p, n).unwrap();
        let q = k.order() as usize;
        let g = enumerate_pgl2(&k).unwrap();
        assert_eq!(g.len(), q * q * q - q);
        assert_eq!(g.iter().collect::<HashSet<_>>().len(), g.len());
    }
}

#[test]
fn count_v_exhaustive() {
    checks::count_v_exhaustive().unwrap();
}

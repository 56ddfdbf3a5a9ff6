mod common;

use proptest::prelude::*;

use common::config;
use common::props::*;

proptest! {
    #![proptest_config(config(0x5eed_0001))]

    #[test]
    fn spread_matches_box(case in partner()) {
        spread_matches_box_search(case)?;
    }

    #[test]
    fn coset_differences(case in partner()) {
        differences_lie_in_invariance_lattice(case)?;
    }

    #[test]
    fn symmetry(case in partner()) {
        spread_symmetry(case)?;
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0002))]

    #[test]
    fn first_projection(case in projection_case()) {
        first_projection_is_unique(case)?;
    }
}

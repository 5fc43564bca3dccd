mod common;

use proptest::prelude::*;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_differential_squares_to_zero(c in oracle_case()) {
        check_oracle_square_zero(&c)?;
    }

    #[test]
    fn turning_a_page_never_grows_an_entry(c in chart_case()) {
        check_monotone(&c)?;
    }

    #[test]
    fn rational_cyclic_cohomology_vanishes_above_zero(c in cyclic_case()) {
        check_cyclic_rational(&c)?;
    }

    #[test]
    fn page_json_round_trips(p in random_page()) {
        check_json_round_trip(&p)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_reconstructs(m in small_int_matrix()) {
        check_snf(&m)?;
    }
}

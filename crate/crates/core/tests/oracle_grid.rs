//! Closed forms against the Čech and localization oracles on the full
//! `[-10, 10]²` grid of line bundles.

use symcut_core::oracles::GradedCechComplex;
use symcut_core::{
    cech_cohomology_nodal, cech_cohomology_p1, localization_index, Character, EquivBundleCP1,
    GridSpec, LineWeights,
};

fn grid() -> Vec<LineWeights> {
    GridSpec::square(-10, 10)
        .unwrap()
        .points()
        .iter()
        .map(|b| b.summands()[0])
        .collect()
}

#[test]
fn closed_form_matches_cech() {
    for l in grid() {
        let b = EquivBundleCP1::line(l.r_p, l.r_q);
        assert_eq!(b.cohomology(), cech_cohomology_p1(l).unwrap(), "{l}");
    }
}

#[test]
fn mcut_rule_matches_nodal_cech() {
    for l in grid() {
        let cut = EquivBundleCP1::line(l.r_p, l.r_q).cut();
        assert_eq!(
            cut.cohomology().unwrap(),
            cech_cohomology_nodal(&cut).unwrap(),
            "{l}"
        );
    }
}

#[test]
fn localization_matches_cech_index() {
    for l in grid() {
        assert_eq!(
            localization_index(l).unwrap(),
            cech_cohomology_p1(l).unwrap().index_character(),
            "{l}"
        );
    }
}

#[test]
fn every_block_is_graded() {
    for l in grid() {
        assert!(GradedCechComplex::new(l).unwrap().is_graded(), "{l}");
    }
}

#[test]
fn localization_closed_form() {
    // (u^{r_P+1} - u^{r_Q}) / (u - 1), checked by multiplying back
    let u_minus_one = Character::monomial(1, 1) - Character::one();
    for l in grid() {
        let idx = localization_index(l).unwrap();
        assert_eq!(
            &idx * &u_minus_one,
            Character::monomial(l.r_p + 1, 1) - Character::monomial(l.r_q, 1),
            "{l}"
        );
    }
}

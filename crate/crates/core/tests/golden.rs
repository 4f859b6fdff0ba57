//! The fixture registry is frozen: serialization must match the checked-in
//! golden files byte for byte.

use hedonica::fixtures::{FixtureId, load_fixture};
use hedonica::json;

#[test]
fn fixture_serialization_is_pinned() {
    let goldens: [(FixtureId, &str); 9] = [
        (
            FixtureId::Ex1Separability,
            include_str!("golden/ex1_separability.json"),
        ),
        (FixtureId::Ex2Cycle, include_str!("golden/ex2_cycle.json")),
        (
            FixtureId::Ex3NoNashCommonRanking,
            include_str!("golden/ex3_no_nash_common_ranking.json"),
        ),
        (FixtureId::Ex4TieBreak, include_str!("golden/ex4_tie_break.json")),
        (
            FixtureId::Ex5TopCoalition,
            include_str!("golden/ex5_top_coalition.json"),
        ),
        (
            FixtureId::Ex6CoreNotCis,
            include_str!("golden/ex6_core_not_cis.json"),
        ),
        (
            FixtureId::Ex7NoNashCore,
            include_str!("golden/ex7_no_nash_core.json"),
        ),
        (FixtureId::InlineF01m1, include_str!("golden/inline_f_01m1.json")),
        (
            FixtureId::InlineStrongcoreNone,
            include_str!("golden/inline_strongcore_none.json"),
        ),
    ];
    for (id, golden) in goldens {
        let serialized = json::to_string_pretty(&load_fixture(id)).unwrap();
        assert_eq!(serialized, golden, "{id} drifted from its golden file");
    }
}

#[test]
fn golden_files_parse_back_to_the_fixtures() {
    for id in FixtureId::ALL {
        let game = load_fixture(id);
        let golden = json::to_string_pretty(&game).unwrap();
        assert_eq!(json::from_str(&golden).unwrap(), game, "{id}");
    }
}

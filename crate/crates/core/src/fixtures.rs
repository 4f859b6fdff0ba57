//! The built-in example games used throughout the tests and the CLI.
//!
//! Each fixture is constructed exactly as specified, with two documented
//! choices:
//! - `ex2_cycle` leaves some subset weights unspecified ("defined
//!   arbitrarily"); they are all set to 0 here.
//! - Ranking fixtures encode indifference tiers as integer values via tier
//!   numbering (bottom tier 0, one step per tier), which preserves exactly
//!   the ties they rely on.

use crate::games::{
    CommonRanking, GameRepr, NeutrallyAnonymous, SubsetNeutral, UtilityTable,
};
use crate::model::Coalition;
use crate::model::PlayerId;
use crate::rational::rational_int;
use crate::transform::ranking_to_utilities;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixtureId {
    /// n=3 subset-neutral: singleton weights 0, pair weights 1, grand
    /// coalition weight -10. Not separable.
    Ex1Separability,
    /// n=4 subset-neutral with a preference cycle on size-3 coalitions.
    Ex2Cycle,
    /// n=3 common ranking with no Nash stable partition.
    Ex3NoNashCommonRanking,
    /// n=3 common ranking where only the largest-size tie-break keeps the
    /// greedy individually stable.
    Ex4TieBreak,
    /// n=3 utility table with the top-coalition property whose greedy
    /// outcome is not individually stable.
    Ex5TopCoalition,
    /// n=3 neutrally anonymous, f=(0,1,1): a core stable partition that is
    /// not contractually individually stable.
    Ex6CoreNotCis,
    /// n=5 neutrally anonymous, f=(0,2,1,0,0): Nash stable and core stable
    /// partitions both exist, but never together.
    Ex7NoNashCore,
    /// n=3 neutrally anonymous, f=(0,1,-1): neither separable nor
    /// single-peaked in the coalition size.
    InlineF01m1,
    /// n=3 neutrally anonymous, f=(0,1,0): no strong core stable partition.
    InlineStrongcoreNone,
}

impl FixtureId {
    pub const ALL: [FixtureId; 9] = [
        FixtureId::Ex1Separability,
        FixtureId::Ex2Cycle,
        FixtureId::Ex3NoNashCommonRanking,
        FixtureId::Ex4TieBreak,
        FixtureId::Ex5TopCoalition,
        FixtureId::Ex6CoreNotCis,
        FixtureId::Ex7NoNashCore,
        FixtureId::InlineF01m1,
        FixtureId::InlineStrongcoreNone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Ex1Separability => "ex1_separability",
            FixtureId::Ex2Cycle => "ex2_cycle",
            FixtureId::Ex3NoNashCommonRanking => "ex3_no_nash_common_ranking",
            FixtureId::Ex4TieBreak => "ex4_tie_break",
            FixtureId::Ex5TopCoalition => "ex5_top_coalition",
            FixtureId::Ex6CoreNotCis => "ex6_core_not_cis",
            FixtureId::Ex7NoNashCore => "ex7_no_nash_core",
            FixtureId::InlineF01m1 => "inline_f_01m1",
            FixtureId::InlineStrongcoreNone => "inline_strongcore_none",
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FixtureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FixtureId::ALL.iter().map(|id| id.name()).collect();
                format!("unknown fixture `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

fn c(ids: &[u32]) -> Coalition {
    Coalition::from_ids(ids).expect("fixture coalition is valid")
}

fn na(f: &[i64]) -> GameRepr {
    GameRepr::NeutrallyAnonymous(
        NeutrallyAnonymous::from_values(f.iter().map(|&x| rational_int(x)).collect())
            .expect("fixture size function is valid"),
    )
}

fn ex1() -> GameRepr {
    let entries = (1..=7u64).map(|mask| {
        let coalition = Coalition::from_ids(
            &(1..=3u32).filter(|i| mask & (1 << (i - 1)) != 0).collect::<Vec<_>>(),
        )
        .expect("nonempty mask");
        let w = match coalition.size() {
            1 => rational_int(0),
            2 => rational_int(1),
            _ => rational_int(-10),
        };
        (coalition, w)
    });
    GameRepr::SubsetNeutral(SubsetNeutral::from_entries(3, entries).expect("ex1 is complete"))
}

fn ex2() -> GameRepr {
    let ones = [c(&[1, 3]), c(&[2, 4])];
    let entries = (1..=15u64).map(|mask| {
        let coalition = Coalition::from_ids(
            &(1..=4u32).filter(|i| mask & (1 << (i - 1)) != 0).collect::<Vec<_>>(),
        )
        .expect("nonempty mask");
        // {1,3} and {2,4} get weight 1; everything else named in the example
        // gets 0, and the unspecified subsets are set to 0 as well.
        let w = if ones.contains(&coalition) {
            rational_int(1)
        } else {
            rational_int(0)
        };
        (coalition, w)
    });
    GameRepr::SubsetNeutral(SubsetNeutral::from_entries(4, entries).expect("ex2 is complete"))
}

fn ex3() -> GameRepr {
    let tiers = vec![
        vec![c(&[1, 2])],
        vec![c(&[1])],
        vec![c(&[2])],
        vec![c(&[1, 2, 3])],
        vec![c(&[1, 3])],
        vec![c(&[2, 3])],
        vec![c(&[3])],
    ];
    GameRepr::CommonRanking(CommonRanking::from_tiers(3, &tiers).expect("ex3 tiers are complete"))
}

fn ex4() -> GameRepr {
    let tiers = vec![
        vec![c(&[1, 2]), c(&[1, 2, 3])],
        vec![c(&[2])],
        vec![c(&[1])],
        vec![c(&[1, 3])],
        vec![c(&[2, 3])],
        vec![c(&[3])],
    ];
    GameRepr::CommonRanking(CommonRanking::from_tiers(3, &tiers).expect("ex4 tiers are complete"))
}

fn ex5() -> GameRepr {
    let p = |id| PlayerId::new(id).expect("player id is valid");
    let rows = [
        (
            p(1),
            vec![
                vec![c(&[1, 2]), c(&[1, 2, 3])],
                vec![c(&[1])],
                vec![c(&[1, 3])],
            ],
        ),
        (
            p(2),
            vec![
                vec![c(&[1, 2]), c(&[1, 2, 3])],
                vec![c(&[2])],
                vec![c(&[2, 3])],
            ],
        ),
        (
            p(3),
            vec![
                vec![c(&[1, 3]), c(&[2, 3])],
                vec![c(&[1, 2, 3])],
                vec![c(&[3])],
            ],
        ),
    ];
    let mut entries = Vec::new();
    for (player, tiers) in rows {
        for (coalition, value) in
            ranking_to_utilities(3, player, &tiers).expect("ex5 tiers are complete")
        {
            entries.push((player, coalition, value));
        }
    }
    GameRepr::UtilityTable(UtilityTable::from_entries(3, entries).expect("ex5 is complete"))
}

/// Returns the requested fixture, rebuilt from its exact definition.
pub fn load_fixture(id: FixtureId) -> GameRepr {
    match id {
        FixtureId::Ex1Separability => ex1(),
        FixtureId::Ex2Cycle => ex2(),
        FixtureId::Ex3NoNashCommonRanking => ex3(),
        FixtureId::Ex4TieBreak => ex4(),
        FixtureId::Ex5TopCoalition => ex5(),
        FixtureId::Ex6CoreNotCis => na(&[0, 1, 1]),
        FixtureId::Ex7NoNashCore => na(&[0, 2, 1, 0, 0]),
        FixtureId::InlineF01m1 => na(&[0, 1, -1]),
        FixtureId::InlineStrongcoreNone => na(&[0, 1, 0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameKind;

    #[test]
    fn registry_names_roundtrip() {
        for id in FixtureId::ALL {
            assert_eq!(id.name().parse::<FixtureId>().unwrap(), id);
        }
        assert!("nonsense".parse::<FixtureId>().is_err());
    }

    #[test]
    fn fixture_kinds_and_sizes() {
        let expect = [
            (FixtureId::Ex1Separability, GameKind::SubsetNeutral, 3),
            (FixtureId::Ex2Cycle, GameKind::SubsetNeutral, 4),
            (FixtureId::Ex3NoNashCommonRanking, GameKind::CommonRanking, 3),
            (FixtureId::Ex4TieBreak, GameKind::CommonRanking, 3),
            (FixtureId::Ex5TopCoalition, GameKind::UtilityTable, 3),
            (FixtureId::Ex6CoreNotCis, GameKind::NeutrallyAnonymous, 3),
            (FixtureId::Ex7NoNashCore, GameKind::NeutrallyAnonymous, 5),
            (FixtureId::InlineF01m1, GameKind::NeutrallyAnonymous, 3),
            (FixtureId::InlineStrongcoreNone, GameKind::NeutrallyAnonymous, 3),
        ];
        for (id, kind, n) in expect {
            let game = load_fixture(id);
            assert_eq!(game.kind(), kind, "{id}");
            assert_eq!(game.n(), n, "{id}");
        }
    }

    #[test]
    fn ex2_has_the_size_three_cycle() {
        // {1,2,3} beats {1,2,4} for player 1 and the other way round for
        // player 2.
        let game = load_fixture(FixtureId::Ex2Cycle);
        let p1 = PlayerId::new(1).unwrap();
        let p2 = PlayerId::new(2).unwrap();
        assert!(game.strictly_prefers(p1, c(&[1, 2, 3]), c(&[1, 2, 4])).unwrap());
        assert!(game.strictly_prefers(p2, c(&[1, 2, 4]), c(&[1, 2, 3])).unwrap());
    }

    #[test]
    fn ex5_matches_its_rankings() {
        let game = load_fixture(FixtureId::Ex5TopCoalition);
        let p3 = PlayerId::new(3).unwrap();
        assert!(game.strictly_prefers(p3, c(&[1, 3]), c(&[1, 2, 3])).unwrap());
        assert_eq!(
            game.compare(p3, c(&[1, 3]), c(&[2, 3])).unwrap(),
            std::cmp::Ordering::Equal
        );
    }
}

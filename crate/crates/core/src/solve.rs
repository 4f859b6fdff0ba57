//! Constructive solvers and exhaustive oracles.
//!
//! For subset-neutral games the potential `Phi(pi)` sums, over every block,
//! the weights of all nonempty subsets of the block. A strictly profitable
//! unilateral deviation raises `Phi` by exactly the deviator's utility gain,
//! so first-improvement better-response dynamics terminates at a Nash stable
//! partition, and any global `Phi` maximizer is Nash stable.
//!
//! For common-ranking games the greedy that repeatedly extracts a
//! highest-ranked coalition, preferring the largest among ties, yields a
//! partition that is core stable and individually stable. Dropping the
//! largest-size rule (the plain top-coalition greedy) keeps core stability
//! but can lose individual stability.

use crate::games::{
    CommonRanking, CommonRankingCheck, GameError, GameRepr, NeutrallyAnonymous, SUBSET_CAP,
    SubsetNeutral, common_ranking, has_top_coalition_property, top_coalitions,
};
use crate::model::{
    Coalition, DEFAULT_PARTITION_CAP, ModelError, Partition, PlayerId, full_mask, partitions_with_cap,
    subsets,
};
use crate::rational::Rational;
use crate::stability::{DeviationTarget, Notion, satisfies};
use crate::transform::na_to_subset_neutral;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "the {found} representation is not subset-neutral \
         (supported: subset_neutral, neutrally_anonymous)"
    )]
    NotSubsetNeutral { found: &'static str },
    #[error(
        "the {found} representation admits no common ranking: player {player} \
         requires w({above}) > w({below}), which lies on a contradiction cycle"
    )]
    NoCommonRanking {
        found: &'static str,
        player: u32,
        above: String,
        below: String,
    },
    #[error("no top coalition exists for the player pool {pool}")]
    NoTopCoalition { pool: String },
}

/// One applied better-response step: who moved, from where, to where, and
/// the potential before and after. The potential strictly increases at every
/// step, by exactly the mover's utility gain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsStep {
    pub player: PlayerId,
    pub from: Coalition,
    pub to: DeviationTarget,
    pub phi_before: Rational,
    pub phi_after: Rational,
}

pub type DynamicsTrace = Vec<DynamicsStep>;

/// A subset-neutral view of a game: subset-neutral games directly, neutrally
/// anonymous games through the size recursion.
pub fn as_subset_neutral(game: &GameRepr) -> Result<SubsetNeutral, SolveError> {
    match game {
        GameRepr::SubsetNeutral(g) => Ok(g.clone()),
        GameRepr::NeutrallyAnonymous(g) => Ok(na_to_subset_neutral(g)),
        other => Err(SolveError::NotSubsetNeutral {
            found: other.kind().name(),
        }),
    }
}

/// `Phi(pi)`: the sum over blocks of the weights of all nonempty subsets.
pub fn potential(game: &SubsetNeutral, partition: &Partition) -> Result<Rational, GameError> {
    if game.n() != partition.n() {
        return Err(GameError::Dimension {
            what: format!(
                "partition is over {} players but the game has {}",
                partition.n(),
                game.n()
            ),
        });
    }
    let mut phi = Rational::from_integer(0.into());
    for block in partition.blocks() {
        phi += game.subset_sum(block.mask());
    }
    Ok(phi)
}

/// Applies the first strictly improving deviation in scan order (players
/// ascending; destination blocks in canonical order, the empty coalition
/// last) and returns the new partition with the step record. `None` when the
/// partition is Nash stable.
pub fn better_response_step(
    game: &SubsetNeutral,
    partition: &Partition,
) -> Result<Option<(Partition, DynamicsStep)>, GameError> {
    if game.n() != partition.n() {
        return Err(GameError::Dimension {
            what: format!(
                "partition is over {} players but the game has {}",
                partition.n(),
                game.n()
            ),
        });
    }
    for id in 1..=game.n() {
        let player = PlayerId::new(id).map_err(GameError::Model)?;
        let origin = partition.coalition_of(player).map_err(GameError::Model)?;
        let current = game.utility(player, origin)?;
        let mut targets: Vec<(DeviationTarget, Coalition)> = partition
            .blocks()
            .iter()
            .filter(|&&b| b != origin)
            .map(|&b| (DeviationTarget::Block(b), b.with(player)))
            .collect();
        if origin.size() > 1 {
            targets.push((DeviationTarget::Alone, Coalition::singleton(player)));
        }
        for (target, joined) in targets {
            if game.utility(player, joined)? > current {
                let phi_before = potential(game, partition)?;
                let moved = partition
                    .move_player(
                        player,
                        match target {
                            DeviationTarget::Block(b) => Some(b),
                            DeviationTarget::Alone => None,
                        },
                    )
                    .map_err(GameError::Model)?;
                let phi_after = potential(game, &moved)?;
                let step = DynamicsStep {
                    player,
                    from: origin,
                    to: target,
                    phi_before,
                    phi_after,
                };
                return Ok(Some((moved, step)));
            }
        }
    }
    Ok(None)
}

/// Better-response dynamics from `start` (default: all singletons) to a
/// fixed point, which is Nash stable. Terminates because the potential
/// strictly increases and there are finitely many partitions.
pub fn nash_local_search(
    game: &SubsetNeutral,
    start: Option<Partition>,
) -> Result<(Partition, DynamicsTrace), GameError> {
    let mut current = match start {
        Some(p) => p,
        None => Partition::singletons(game.n()).map_err(GameError::Model)?,
    };
    let mut trace = Vec::new();
    while let Some((next, step)) = better_response_step(game, &current)? {
        current = next;
        trace.push(step);
    }
    Ok((current, trace))
}

/// The first potential maximizer in restricted-growth-string order, which is
/// Nash stable. Requires partition enumeration, hence the cap.
pub fn nash_global_optimum(game: &SubsetNeutral) -> Result<Partition, SolveError> {
    nash_global_optimum_with_cap(game, DEFAULT_PARTITION_CAP)
}

pub fn nash_global_optimum_with_cap(
    game: &SubsetNeutral,
    cap: u32,
) -> Result<Partition, SolveError> {
    let mut best: Option<(Partition, Rational)> = None;
    for pi in partitions_with_cap(game.n(), cap)? {
        let phi = potential(game, &pi)?;
        match &best {
            Some((_, best_phi)) if phi <= *best_phi => {}
            _ => best = Some((pi, phi)),
        }
    }
    Ok(best.expect("n >= 1 yields at least one partition").0)
}

/// How the greedy scores coalitions: by the shared ranking function, or by
/// the size function for neutrally anonymous games.
enum Score<'a> {
    Ranking(&'a CommonRanking),
    Certificate(CommonRanking),
    SizeFunction(&'a NeutrallyAnonymous),
}

impl Score<'_> {
    fn of(&self, coalition: Coalition) -> Result<Rational, GameError> {
        match self {
            Score::Ranking(cr) => Ok(cr.weight(coalition)?.clone()),
            Score::Certificate(cr) => Ok(cr.weight(coalition)?.clone()),
            Score::SizeFunction(na) => Ok(na.value_for_size(coalition.size()).clone()),
        }
    }
}

/// The largest-preferring greedy for common-ranking games: repeatedly remove
/// a highest-scoring coalition from the pool, preferring the **largest**
/// among score ties (then the lexicographically smallest member sequence).
/// The result is core stable and individually stable.
///
/// Accepts common-ranking and neutrally anonymous games directly; any other
/// representation is admitted when the common-ranking check certifies a
/// shared ranking, which is then used as the score.
pub fn common_ranking_greedy(game: &GameRepr) -> Result<Partition, SolveError> {
    let n = game.n();
    if n > SUBSET_CAP {
        return Err(SolveError::Game(GameError::CapExceeded {
            op: "common-ranking greedy",
            n,
            cap: SUBSET_CAP,
        }));
    }
    let score = match game {
        GameRepr::CommonRanking(cr) => Score::Ranking(cr),
        GameRepr::NeutrallyAnonymous(na) => Score::SizeFunction(na),
        other => match common_ranking(game)? {
            CommonRankingCheck::Consistent(cr) => Score::Certificate(cr),
            CommonRankingCheck::Inconsistent(conflict) => {
                return Err(SolveError::NoCommonRanking {
                    found: other.kind().name(),
                    player: conflict.player.get(),
                    above: conflict.above.to_string(),
                    below: conflict.below.to_string(),
                });
            }
        },
    };

    let mut pool = full_mask(n);
    let mut blocks = Vec::new();
    while pool != 0 {
        let mut best: Option<(Coalition, Rational)> = None;
        for candidate in subsets(Coalition::from_mask(pool)) {
            let s = score.of(candidate)?;
            let better = match &best {
                None => true,
                Some((b, bs)) => {
                    s > *bs
                        || (s == *bs && candidate.size() > b.size())
                        || (s == *bs
                            && candidate.size() == b.size()
                            && candidate.cmp_members(*b) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((candidate, s));
            }
        }
        let (chosen, _) = best.expect("pool is nonempty");
        blocks.push(chosen);
        pool &= !chosen.mask();
    }
    Ok(Partition::new(n, blocks).map_err(GameError::Model)?)
}

/// The plain top-coalition greedy: repeatedly extract a top coalition of the
/// remaining pool, with the naive tie-break (smallest size, then
/// lexicographically smallest members). Core stable under the top-coalition
/// property, but not guaranteed individually stable.
pub fn top_coalition_greedy(game: &GameRepr) -> Result<Partition, SolveError> {
    if let Some(failing) = has_top_coalition_property(game)? {
        return Err(SolveError::NoTopCoalition {
            pool: failing.to_string(),
        });
    }
    let n = game.n();
    let mut pool = full_mask(n);
    let mut blocks = Vec::new();
    while pool != 0 {
        let ground = Coalition::from_mask(pool);
        let mut tops = top_coalitions(game, ground)?;
        tops.sort_by(|a, b| a.size().cmp(&b.size()).then(a.cmp_members(*b)));
        let chosen = *tops.first().ok_or_else(|| SolveError::NoTopCoalition {
            pool: ground.to_string(),
        })?;
        blocks.push(chosen);
        pool &= !chosen.mask();
    }
    Ok(Partition::new(n, blocks).map_err(GameError::Model)?)
}

/// All partitions satisfying every notion in `notions`, in
/// restricted-growth-string order. The exhaustive ground truth for
/// existence and nonexistence claims.
pub fn enumerate_stable(game: &GameRepr, notions: &[Notion]) -> Result<Vec<Partition>, SolveError> {
    enumerate_stable_with_cap(game, notions, DEFAULT_PARTITION_CAP)
}

pub fn enumerate_stable_with_cap(
    game: &GameRepr,
    notions: &[Notion],
    cap: u32,
) -> Result<Vec<Partition>, SolveError> {
    let mut found = Vec::new();
    for pi in partitions_with_cap(game.n(), cap)? {
        let mut ok = true;
        for &notion in notions {
            if !satisfies(game, &pi, notion)? {
                ok = false;
                break;
            }
        }
        if ok {
            found.push(pi);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, FixtureId};
    use crate::rational::rational_int;
    use crate::stability::{is_core_stable, is_individually_stable, is_nash_stable};

    fn coalition(ids: &[u32]) -> Coalition {
        Coalition::from_ids(ids).unwrap()
    }

    fn parse(text: &str, n: u32) -> Partition {
        Partition::parse(text, n).unwrap()
    }

    fn ex1_neutral() -> SubsetNeutral {
        match fixtures::load_fixture(FixtureId::Ex1Separability) {
            GameRepr::SubsetNeutral(g) => g,
            other => panic!("unexpected kind {:?}", other.kind()),
        }
    }

    #[test]
    fn potential_examples() {
        let game = ex1_neutral();
        assert_eq!(
            potential(&game, &parse("1,2,3", 3)).unwrap(),
            rational_int(-7) // 3*0 + 3*1 + (-10)
        );
        assert_eq!(potential(&game, &parse("1,2|3", 3)).unwrap(), rational_int(1));

        let zero = SubsetNeutral::from_size_values(
            3,
            vec![rational_int(0), rational_int(0), rational_int(0)],
        )
        .unwrap();
        for pi in crate::model::partitions(3).unwrap() {
            assert_eq!(potential(&zero, &pi).unwrap(), rational_int(0));
        }
    }

    #[test]
    fn better_response_first_step_from_singletons() {
        let game = ex1_neutral();
        let start = Partition::singletons(3).unwrap();
        let (next, step) = better_response_step(&game, &start).unwrap().unwrap();
        assert_eq!(step.player.get(), 1);
        assert_eq!(step.to, DeviationTarget::Block(coalition(&[2])));
        assert_eq!(step.phi_before, rational_int(0));
        assert_eq!(step.phi_after, rational_int(1));
        assert_eq!(next, parse("1,2|3", 3));
    }

    #[test]
    fn better_response_none_at_fixed_point() {
        let game = ex1_neutral();
        assert!(better_response_step(&game, &parse("1,2|3", 3)).unwrap().is_none());

        let zero = SubsetNeutral::from_size_values(
            4,
            vec![rational_int(0); 4],
        )
        .unwrap();
        for pi in crate::model::partitions(4).unwrap() {
            assert!(better_response_step(&zero, &pi).unwrap().is_none());
        }
    }

    #[test]
    fn local_search_reaches_nash_stability() {
        let game = ex1_neutral();
        let (result, trace) = nash_local_search(&game, None).unwrap();
        assert_eq!(potential(&game, &result).unwrap(), rational_int(1));
        assert!(
            is_nash_stable(&GameRepr::SubsetNeutral(game.clone()), &result)
                .unwrap()
                .is_stable()
        );
        for step in &trace {
            assert!(step.phi_after > step.phi_before);
        }

        // Example 7 through the neutrally anonymous route.
        let ex7 = fixtures::load_fixture(FixtureId::Ex7NoNashCore);
        let neutral = as_subset_neutral(&ex7).unwrap();
        let (result, _) = nash_local_search(&neutral, None).unwrap();
        assert!(is_nash_stable(&ex7, &result).unwrap().is_stable());

        let one = SubsetNeutral::from_size_values(1, vec![rational_int(0)]).unwrap();
        let (result, trace) = nash_local_search(&one, None).unwrap();
        assert_eq!(result, parse("1", 1));
        assert!(trace.is_empty());
    }

    #[test]
    fn global_optimum_examples() {
        let game = ex1_neutral();
        assert_eq!(nash_global_optimum(&game).unwrap(), parse("1,2|3", 3));

        let zero =
            SubsetNeutral::from_size_values(3, vec![rational_int(0); 3]).unwrap();
        // All partitions tie at 0; the first in RGS order is the grand
        // coalition.
        assert_eq!(nash_global_optimum(&zero).unwrap(), parse("1,2,3", 3));
    }

    #[test]
    fn greedy_examples() {
        let ex4 = fixtures::load_fixture(FixtureId::Ex4TieBreak);
        assert_eq!(common_ranking_greedy(&ex4).unwrap(), parse("1,2,3", 3));

        let ex3 = fixtures::load_fixture(FixtureId::Ex3NoNashCommonRanking);
        let result = common_ranking_greedy(&ex3).unwrap();
        assert_eq!(result, parse("1,2|3", 3));
        assert!(is_core_stable(&ex3, &result).unwrap().is_stable());
        assert!(is_individually_stable(&ex3, &result).unwrap().is_stable());

        let single = GameRepr::NeutrallyAnonymous(
            NeutrallyAnonymous::from_values(vec![rational_int(1)]).unwrap(),
        );
        assert_eq!(common_ranking_greedy(&single).unwrap(), parse("1", 1));
    }

    #[test]
    fn top_coalition_greedy_examples() {
        let ex5 = fixtures::load_fixture(FixtureId::Ex5TopCoalition);
        let result = top_coalition_greedy(&ex5).unwrap();
        assert_eq!(result, parse("1,2|3", 3));
        let verdict = is_individually_stable(&ex5, &result).unwrap();
        let w = verdict.witness().expect("not individually stable");
        assert_eq!(w.player.get(), 3);
        assert_eq!(w.target, DeviationTarget::Block(coalition(&[1, 2])));

        // The naive smallest tie-break on Example 4 picks {1,2} over
        // {1,2,3}, losing individual stability.
        let ex4 = fixtures::load_fixture(FixtureId::Ex4TieBreak);
        let result = top_coalition_greedy(&ex4).unwrap();
        assert_eq!(result, parse("1,2|3", 3));
        assert!(!is_individually_stable(&ex4, &result).unwrap().is_stable());

        let single = GameRepr::NeutrallyAnonymous(
            NeutrallyAnonymous::from_values(vec![rational_int(1)]).unwrap(),
        );
        assert_eq!(top_coalition_greedy(&single).unwrap(), parse("1", 1));
    }

    #[test]
    fn enumerate_stable_examples() {
        let ex3 = fixtures::load_fixture(FixtureId::Ex3NoNashCommonRanking);
        assert!(enumerate_stable(&ex3, &[Notion::Nash]).unwrap().is_empty());

        let ex7 = fixtures::load_fixture(FixtureId::Ex7NoNashCore);
        assert!(
            enumerate_stable(&ex7, &[Notion::Nash, Notion::Core]).unwrap().is_empty()
        );
        assert!(!enumerate_stable(&ex7, &[Notion::Nash]).unwrap().is_empty());
        assert!(!enumerate_stable(&ex7, &[Notion::Core]).unwrap().is_empty());

        let inline = fixtures::load_fixture(FixtureId::InlineStrongcoreNone);
        assert!(
            enumerate_stable(&inline, &[Notion::StrongCore]).unwrap().is_empty()
        );
        assert!(!enumerate_stable(&inline, &[Notion::Core]).unwrap().is_empty());
    }

    #[test]
    fn solver_requires_compatible_kind() {
        let ex5 = fixtures::load_fixture(FixtureId::Ex5TopCoalition);
        assert!(matches!(
            as_subset_neutral(&ex5),
            Err(SolveError::NotSubsetNeutral { found: "utilities" })
        ));
        // Example 5 has no common ranking, so the greedy refuses it with the
        // conflicting pair.
        assert!(matches!(
            common_ranking_greedy(&ex5),
            Err(SolveError::NoCommonRanking { .. })
        ));
    }
}

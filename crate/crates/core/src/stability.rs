//! The five stability checkers, each returning a verdict plus a concrete
//! witness of instability.
//!
//! Scan orders are deterministic so witnesses and CLI output are
//! reproducible: players ascending; destination blocks in canonical partition
//! order with the empty coalition last; blocking coalitions in bitmask order.

use crate::games::{GameError, GameRepr, SUBSET_CAP};
use crate::model::{Coalition, Partition, PlayerId, full_mask, subsets};
use crate::rational::Rational;
use std::fmt;
use std::str::FromStr;

/// The five notions, ordered by the single-deviation chain first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    Nash,
    Individual,
    Contractual,
    Core,
    StrongCore,
}

impl Notion {
    pub const ALL: [Notion; 5] = [
        Notion::Nash,
        Notion::Individual,
        Notion::Contractual,
        Notion::Core,
        Notion::StrongCore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::Nash => "nash",
            Notion::Individual => "is",
            Notion::Contractual => "cis",
            Notion::Core => "core",
            Notion::StrongCore => "strongcore",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nash" => Ok(Notion::Nash),
            "is" => Ok(Notion::Individual),
            "cis" => Ok(Notion::Contractual),
            "core" => Ok(Notion::Core),
            "strongcore" => Ok(Notion::StrongCore),
            other => Err(format!(
                "unknown stability notion `{other}` (expected nash, is, cis, core, or strongcore)"
            )),
        }
    }
}

/// Verdict with a witness type `W` describing the instability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability<W> {
    Stable,
    Unstable(W),
}

impl<W> Stability<W> {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Stability::Stable => None,
            Stability::Unstable(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Stability<V> {
        match self {
            Stability::Stable => Stability::Stable,
            Stability::Unstable(w) => Stability::Unstable(f(w)),
        }
    }
}

/// Where a deviating player moves: an existing block, or out on her own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationTarget {
    Block(Coalition),
    Alone,
}

impl fmt::Display for DeviationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviationTarget::Block(c) => write!(f, "{c}"),
            DeviationTarget::Alone => f.write_str("empty"),
        }
    }
}

/// A profitable unilateral move. For Nash witnesses, `vetoer` carries a
/// destination member hurt by the move when one exists (explaining why the
/// same move does not break individual stability); for IS and CIS witnesses
/// the move is unvetoed and the field is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub player: PlayerId,
    pub target: DeviationTarget,
    pub vetoer: Option<PlayerId>,
}

impl fmt::Display for DeviationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player={} target={}", self.player, self.target)?;
        if let Some(v) = self.vetoer {
            write!(f, " vetoer={v}")?;
        }
        Ok(())
    }
}

/// A blocking coalition. `strict_member` is the first strictly improving
/// member for weak blocking (strong core); `None` for plain blocking, where
/// every member improves strictly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockWitness {
    pub coalition: Coalition,
    pub strict_member: Option<PlayerId>,
}

impl fmt::Display for BlockWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coalition={}", self.coalition)?;
        if let Some(s) = self.strict_member {
            write!(f, " strict={s}")?;
        }
        Ok(())
    }
}

/// Either witness shape, for callers handling all notions uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Deviation(DeviationWitness),
    Blocking(BlockWitness),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Deviation(w) => w.fmt(f),
            Witness::Blocking(w) => w.fmt(f),
        }
    }
}

fn check_partition(game: &GameRepr, partition: &Partition) -> Result<(), GameError> {
    if game.n() != partition.n() {
        return Err(GameError::Dimension {
            what: format!(
                "partition is over {} players but the game has {}",
                partition.n(),
                game.n()
            ),
        });
    }
    Ok(())
}

/// One strictly improving unilateral move in scan order, with the data the
/// checkers need: the mover, the target, the coalition after the move, and
/// the mover's origin block.
struct Move {
    player: PlayerId,
    target: DeviationTarget,
    joined: Coalition,
    origin: Coalition,
}

fn improving_moves(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Vec<Move>, GameError> {
    let mut moves = Vec::new();
    for player in game.players() {
        let origin = partition.coalition_of(player).map_err(GameError::Model)?;
        let current = game.utility(player, origin)?;
        for &block in partition.blocks() {
            if block == origin {
                continue;
            }
            let joined = block.with(player);
            if game.utility(player, joined)? > current {
                moves.push(Move {
                    player,
                    target: DeviationTarget::Block(block),
                    joined,
                    origin,
                });
            }
        }
        if origin.size() > 1 {
            let alone = Coalition::singleton(player);
            if game.utility(player, alone)? > current {
                moves.push(Move {
                    player,
                    target: DeviationTarget::Alone,
                    joined: alone,
                    origin,
                });
            }
        }
    }
    Ok(moves)
}

/// A destination member strictly hurt by the arrival, lowest id first.
fn destination_vetoer(
    game: &GameRepr,
    mv: &Move,
) -> Result<Option<PlayerId>, GameError> {
    let block = match mv.target {
        DeviationTarget::Block(c) => c,
        DeviationTarget::Alone => return Ok(None),
    };
    for j in block.members() {
        if game.utility(j, block)? > game.utility(j, mv.joined)? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// An origin member (other than the mover) strictly hurt by the departure.
fn origin_vetoer(game: &GameRepr, mv: &Move) -> Result<Option<PlayerId>, GameError> {
    let Some(rest) = mv.origin.without(mv.player) else {
        return Ok(None);
    };
    for k in rest.members() {
        if game.utility(k, mv.origin)? > game.utility(k, rest)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Nash stability: no player strictly gains by joining another block or
/// leaving to be alone.
pub fn is_nash_stable(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Stability<DeviationWitness>, GameError> {
    check_partition(game, partition)?;
    match improving_moves(game, partition)?.into_iter().next() {
        None => Ok(Stability::Stable),
        Some(mv) => {
            let vetoer = destination_vetoer(game, &mv)?;
            Ok(Stability::Unstable(DeviationWitness {
                player: mv.player,
                target: mv.target,
                vetoer,
            }))
        }
    }
}

/// Individual stability: every strictly improving move is vetoed by some
/// member of the destination.
pub fn is_individually_stable(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Stability<DeviationWitness>, GameError> {
    check_partition(game, partition)?;
    for mv in improving_moves(game, partition)? {
        if destination_vetoer(game, &mv)?.is_none() {
            return Ok(Stability::Unstable(DeviationWitness {
                player: mv.player,
                target: mv.target,
                vetoer: None,
            }));
        }
    }
    Ok(Stability::Stable)
}

/// Contractual individual stability: every strictly improving move is vetoed
/// by a destination member or by an origin member hurt by the departure.
pub fn is_contractually_individually_stable(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Stability<DeviationWitness>, GameError> {
    check_partition(game, partition)?;
    for mv in improving_moves(game, partition)? {
        if destination_vetoer(game, &mv)?.is_none() && origin_vetoer(game, &mv)?.is_none() {
            return Ok(Stability::Unstable(DeviationWitness {
                player: mv.player,
                target: mv.target,
                vetoer: None,
            }));
        }
    }
    Ok(Stability::Stable)
}

fn check_core_cap(game: &GameRepr, op: &'static str) -> Result<(), GameError> {
    let n = game.n();
    if n > SUBSET_CAP {
        return Err(GameError::CapExceeded {
            op,
            n,
            cap: SUBSET_CAP,
        });
    }
    Ok(())
}

/// Utilities of each player at her current block, indexed by player.
fn current_utilities(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Vec<Rational>, GameError> {
    game.players()
        .map(|i| {
            let block = partition.coalition_of(i).map_err(GameError::Model)?;
            game.utility(i, block)
        })
        .collect()
}

/// Core stability: no coalition makes every member strictly better off.
pub fn is_core_stable(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Stability<BlockWitness>, GameError> {
    check_partition(game, partition)?;
    check_core_cap(game, "core stability check")?;
    let current = current_utilities(game, partition)?;
    let everyone = Coalition::from_mask(full_mask(game.n()));
    for candidate in subsets(everyone) {
        let mut blocks = true;
        for i in candidate.members() {
            if game.utility(i, candidate)? <= current[i.index()] {
                blocks = false;
                break;
            }
        }
        if blocks {
            return Ok(Stability::Unstable(BlockWitness {
                coalition: candidate,
                strict_member: None,
            }));
        }
    }
    Ok(Stability::Stable)
}

/// Strong core stability: no coalition makes every member weakly better off
/// with at least one strict improvement.
pub fn is_strong_core_stable(
    game: &GameRepr,
    partition: &Partition,
) -> Result<Stability<BlockWitness>, GameError> {
    check_partition(game, partition)?;
    check_core_cap(game, "strong core stability check")?;
    let current = current_utilities(game, partition)?;
    let everyone = Coalition::from_mask(full_mask(game.n()));
    for candidate in subsets(everyone) {
        let mut weakly_blocks = true;
        let mut strict_member = None;
        for i in candidate.members() {
            let u = game.utility(i, candidate)?;
            if u < current[i.index()] {
                weakly_blocks = false;
                break;
            }
            if strict_member.is_none() && u > current[i.index()] {
                strict_member = Some(i);
            }
        }
        if weakly_blocks && strict_member.is_some() {
            return Ok(Stability::Unstable(BlockWitness {
                coalition: candidate,
                strict_member,
            }));
        }
    }
    Ok(Stability::Stable)
}

/// All five verdicts for one `(game, partition)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub nash: Stability<DeviationWitness>,
    pub individual: Stability<DeviationWitness>,
    pub contractual: Stability<DeviationWitness>,
    pub core: Stability<BlockWitness>,
    pub strong_core: Stability<BlockWitness>,
}

impl StabilityReport {
    pub fn all_stable(&self) -> bool {
        self.nash.is_stable()
            && self.individual.is_stable()
            && self.contractual.is_stable()
            && self.core.is_stable()
            && self.strong_core.is_stable()
    }

    /// The verdicts in [`Notion::ALL`] order, with witnesses unified.
    pub fn rows(&self) -> Vec<(Notion, Stability<Witness>)> {
        vec![
            (Notion::Nash, self.nash.clone().map(Witness::Deviation)),
            (
                Notion::Individual,
                self.individual.clone().map(Witness::Deviation),
            ),
            (
                Notion::Contractual,
                self.contractual.clone().map(Witness::Deviation),
            ),
            (Notion::Core, self.core.clone().map(Witness::Blocking)),
            (
                Notion::StrongCore,
                self.strong_core.clone().map(Witness::Blocking),
            ),
        ]
    }
}

/// Runs all five checkers.
pub fn classify(game: &GameRepr, partition: &Partition) -> Result<StabilityReport, GameError> {
    Ok(StabilityReport {
        nash: is_nash_stable(game, partition)?,
        individual: is_individually_stable(game, partition)?,
        contractual: is_contractually_individually_stable(game, partition)?,
        core: is_core_stable(game, partition)?,
        strong_core: is_strong_core_stable(game, partition)?,
    })
}

/// One notion's verdict with the witness shape unified.
pub fn check(
    game: &GameRepr,
    partition: &Partition,
    notion: Notion,
) -> Result<Stability<Witness>, GameError> {
    Ok(match notion {
        Notion::Nash => is_nash_stable(game, partition)?.map(Witness::Deviation),
        Notion::Individual => is_individually_stable(game, partition)?.map(Witness::Deviation),
        Notion::Contractual => {
            is_contractually_individually_stable(game, partition)?.map(Witness::Deviation)
        }
        Notion::Core => is_core_stable(game, partition)?.map(Witness::Blocking),
        Notion::StrongCore => is_strong_core_stable(game, partition)?.map(Witness::Blocking),
    })
}

/// Re-evaluates a witness and confirms it certifies the claimed instability.
/// Used by tests; exposed so callers can audit reported witnesses.
pub fn witness_is_sound(
    game: &GameRepr,
    partition: &Partition,
    notion: Notion,
    witness: &Witness,
) -> Result<bool, GameError> {
    match (notion, witness) {
        (Notion::Nash | Notion::Individual | Notion::Contractual, Witness::Deviation(w)) => {
            let origin = partition.coalition_of(w.player).map_err(GameError::Model)?;
            let joined = match w.target {
                DeviationTarget::Block(c) => {
                    if !partition.blocks().contains(&c) || c == origin {
                        return Ok(false);
                    }
                    c.with(w.player)
                }
                DeviationTarget::Alone => {
                    if origin.size() == 1 {
                        return Ok(false);
                    }
                    Coalition::singleton(w.player)
                }
            };
            if game.utility(w.player, joined)? <= game.utility(w.player, origin)? {
                return Ok(false);
            }
            if notion == Notion::Nash {
                return Ok(true);
            }
            // IS and CIS witnesses must be unvetoed at the destination.
            if let DeviationTarget::Block(block) = w.target {
                for j in block.members() {
                    if game.utility(j, block)? > game.utility(j, joined)? {
                        return Ok(false);
                    }
                }
            }
            if notion == Notion::Contractual
                && let Some(rest) = origin.without(w.player)
            {
                for k in rest.members() {
                    if game.utility(k, origin)? > game.utility(k, rest)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        (Notion::Core, Witness::Blocking(w)) => {
            for i in w.coalition.members() {
                let block = partition.coalition_of(i).map_err(GameError::Model)?;
                if game.utility(i, w.coalition)? <= game.utility(i, block)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Notion::StrongCore, Witness::Blocking(w)) => {
            let mut any_strict = false;
            for i in w.coalition.members() {
                let block = partition.coalition_of(i).map_err(GameError::Model)?;
                match game.utility(i, w.coalition)?.cmp(&game.utility(i, block)?) {
                    std::cmp::Ordering::Less => return Ok(false),
                    std::cmp::Ordering::Greater => any_strict = true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            Ok(any_strict)
        }
        _ => Ok(false),
    }
}

/// Convenience used by tests and the enumeration oracle.
pub fn satisfies(game: &GameRepr, partition: &Partition, notion: Notion) -> Result<bool, GameError> {
    Ok(check(game, partition, notion)?.is_stable())
}

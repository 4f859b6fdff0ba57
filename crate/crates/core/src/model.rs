//! Players, coalitions, and coalition partitions.
//!
//! Players are numbered `1..=n`. A [`Coalition`] is a nonempty subset of the
//! players, stored as a bitmask with bit `i-1` standing for player `i`; its
//! observable form is the strictly increasing member sequence. A [`Partition`]
//! is a set of pairwise disjoint coalitions covering `{1..n}`, kept in
//! canonical order (blocks sorted by their minimum member).
//!
//! The module also provides the two enumeration primitives everything else is
//! built on: subset streams over a ground coalition and partition streams in
//! lexicographic restricted-growth-string order.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Hard upper bound on the number of players, fixed by the bitmask width.
pub const MAX_PLAYERS: u32 = 64;

/// Default cap for partition enumeration; B(12) is about 4.2 million.
pub const DEFAULT_PARTITION_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("player id must be between 1 and {max}, got {id}")]
    InvalidPlayerId { id: u32, max: u32 },
    #[error("player {id} is out of range for a game with {n} players")]
    PlayerOutOfRange { id: u32, n: u32 },
    #[error("coalition must be nonempty")]
    EmptyCoalition,
    #[error("duplicate player {id}")]
    DuplicatePlayer { id: u32 },
    #[error("player {id} appears in no block")]
    MissingPlayer { id: u32 },
    #[error("empty block in partition")]
    EmptyBlock,
    #[error("invalid player token `{token}`")]
    InvalidToken { token: String },
    #[error("player {player} is not a member of the ground coalition")]
    NotInGround { player: u32 },
    #[error(
        "partition enumeration for n={n} exceeds the cap of {cap} \
         (the partition count is the Bell number B(n); raise the cap explicitly to proceed)"
    )]
    PartitionCapExceeded { n: u32, cap: u32 },
    #[error("the player count must be between 1 and {max}, got {n}")]
    TooManyPlayers { n: u32, max: u32 },
    #[error("move target {target} is not a block of the partition")]
    TargetNotABlock { target: String },
}

/// A 1-based player identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(u32);

impl PlayerId {
    pub fn new(id: u32) -> Result<Self, ModelError> {
        if id == 0 || id > MAX_PLAYERS {
            return Err(ModelError::InvalidPlayerId {
                id,
                max: MAX_PLAYERS,
            });
        }
        Ok(PlayerId(id))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based index used for array and bitmask addressing.
    pub(crate) fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub(crate) fn from_index(index: usize) -> Self {
        debug_assert!(index < MAX_PLAYERS as usize);
        PlayerId(index as u32 + 1)
    }

    pub(crate) fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bitmask of all players `1..=n`.
pub(crate) fn full_mask(n: u32) -> u64 {
    debug_assert!((1..=MAX_PLAYERS).contains(&n));
    if n == MAX_PLAYERS {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A nonempty set of players in canonical (strictly increasing) member order.
///
/// `Ord` compares the underlying bitmasks; this is the "bitmask order" used
/// for deterministic witness scans. It is *not* lexicographic order on member
/// sequences (see [`Coalition::cmp_members`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition {
    mask: u64,
}

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = PlayerId>) -> Result<Self, ModelError> {
        let mut mask = 0u64;
        for p in members {
            if mask & p.bit() != 0 {
                return Err(ModelError::DuplicatePlayer { id: p.get() });
            }
            mask |= p.bit();
        }
        if mask == 0 {
            return Err(ModelError::EmptyCoalition);
        }
        Ok(Coalition { mask })
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self, ModelError> {
        let members = ids
            .iter()
            .map(|&id| PlayerId::new(id))
            .collect::<Result<Vec<_>, _>>()?;
        Coalition::new(members)
    }

    pub fn singleton(player: PlayerId) -> Self {
        Coalition { mask: player.bit() }
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        debug_assert!(mask != 0, "coalition mask must be nonempty");
        Coalition { mask }
    }

    /// The underlying bitmask: bit `i-1` stands for player `i`.
    pub fn mask(self) -> u64 {
        self.mask
    }

    /// Number of members, `|C|`; at least 1 by the nonemptiness invariant.
    pub fn size(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(self, player: PlayerId) -> bool {
        self.mask & player.bit() != 0
    }

    pub fn min_member(self) -> PlayerId {
        PlayerId::from_index(self.mask.trailing_zeros() as usize)
    }

    pub fn max_member(self) -> PlayerId {
        PlayerId::from_index(63 - self.mask.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn members(self) -> Members {
        Members { rest: self.mask }
    }

    pub fn with(self, player: PlayerId) -> Coalition {
        Coalition {
            mask: self.mask | player.bit(),
        }
    }

    /// Removes a player; `None` if the coalition would become empty.
    pub fn without(self, player: PlayerId) -> Option<Coalition> {
        let mask = self.mask & !player.bit();
        if mask == 0 { None } else { Some(Coalition { mask }) }
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.mask & other.mask == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition {
            mask: self.mask | other.mask,
        }
    }

    /// True when every member is within `1..=n`.
    pub fn fits(self, n: u32) -> bool {
        (1..=MAX_PLAYERS).contains(&n) && self.mask & !full_mask(n) == 0
    }

    /// Lexicographic comparison of the ascending member sequences.
    ///
    /// `{1,4}` sorts before `{2,3}` here, although its bitmask is larger.
    pub fn cmp_members(self, other: Coalition) -> std::cmp::Ordering {
        let mut a = self.members();
        let mut b = other.members();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return std::cmp::Ordering::Equal,
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in self.members() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Coalition {
    type Err = ModelError;

    /// Parses a comma-separated member list such as `1,3`. Whitespace around
    /// tokens is ignored; duplicates are rejected; order is canonicalized.
    fn from_str(s: &str) -> Result<Self, ModelError> {
        if s.trim().is_empty() {
            return Err(ModelError::EmptyCoalition);
        }
        let mut members = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let id: u32 = token.parse().map_err(|_| ModelError::InvalidToken {
                token: token.to_string(),
            })?;
            members.push(PlayerId::new(id)?);
        }
        Coalition::new(members)
    }
}

/// Ascending member iterator of a coalition.
#[derive(Debug, Clone)]
pub struct Members {
    rest: u64,
}

impl Iterator for Members {
    type Item = PlayerId;

    fn next(&mut self) -> Option<PlayerId> {
        if self.rest == 0 {
            return None;
        }
        let index = self.rest.trailing_zeros() as usize;
        self.rest &= self.rest - 1;
        Some(PlayerId::from_index(index))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.rest.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

/// A partition of `{1..n}` into disjoint coalitions, blocks sorted by their
/// minimum member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u32,
    blocks: Vec<Coalition>,
}

impl Partition {
    /// Validates disjointness and coverage, then canonicalizes block order.
    pub fn new(n: u32, mut blocks: Vec<Coalition>) -> Result<Self, ModelError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(ModelError::TooManyPlayers {
                n,
                max: MAX_PLAYERS,
            });
        }
        let full = full_mask(n);
        let mut seen = 0u64;
        for block in &blocks {
            if block.mask() & !full != 0 {
                let id = Coalition::from_mask(block.mask() & !full).min_member().get();
                return Err(ModelError::PlayerOutOfRange { id, n });
            }
            if seen & block.mask() != 0 {
                let id = Coalition::from_mask(seen & block.mask()).min_member().get();
                return Err(ModelError::DuplicatePlayer { id });
            }
            seen |= block.mask();
        }
        if seen != full {
            let id = Coalition::from_mask(full & !seen).min_member().get();
            return Err(ModelError::MissingPlayer { id });
        }
        blocks.sort_by_key(|c| c.min_member());
        Ok(Partition { n, blocks })
    }

    /// The partition of `{1..n}` into singletons.
    pub fn singletons(n: u32) -> Result<Self, ModelError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(ModelError::TooManyPlayers {
                n,
                max: MAX_PLAYERS,
            });
        }
        let blocks = (1..=n)
            .map(|id| Coalition::singleton(PlayerId(id)))
            .collect();
        Ok(Partition { n, blocks })
    }

    /// The one-block partition `{{1..n}}`.
    pub fn grand_coalition(n: u32) -> Result<Self, ModelError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(ModelError::TooManyPlayers {
                n,
                max: MAX_PLAYERS,
            });
        }
        Ok(Partition {
            n,
            blocks: vec![Coalition::from_mask(full_mask(n))],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// The unique block containing `player`.
    pub fn coalition_of(&self, player: PlayerId) -> Result<Coalition, ModelError> {
        if player.get() > self.n {
            return Err(ModelError::PlayerOutOfRange {
                id: player.get(),
                n: self.n,
            });
        }
        // Coverage is a construction invariant, so the lookup always succeeds.
        Ok(*self
            .blocks
            .iter()
            .find(|b| b.contains(player))
            .expect("partition blocks cover all players"))
    }

    /// Moves `player` into `target` (one of the existing blocks) or, with
    /// `None`, into a fresh singleton. Returns the canonicalized result.
    pub fn move_player(
        &self,
        player: PlayerId,
        target: Option<Coalition>,
    ) -> Result<Partition, ModelError> {
        let origin = self.coalition_of(player)?;
        if let Some(t) = target
            && !self.blocks.contains(&t)
        {
            return Err(ModelError::TargetNotABlock {
                target: t.to_string(),
            });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
        for &block in &self.blocks {
            if block == origin {
                if let Some(rest) = block.without(player) {
                    blocks.push(rest);
                }
            } else if Some(block) == target {
                blocks.push(block.with(player));
            } else {
                blocks.push(block);
            }
        }
        if target.is_none() {
            blocks.push(Coalition::singleton(player));
        }
        Partition::new(self.n, blocks)
    }

    /// Parses the `|`/`,` literal format, e.g. `1,2|3`. Whitespace is
    /// ignored; the result is canonical regardless of the input order.
    pub fn parse(text: &str, n: u32) -> Result<Self, ModelError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(ModelError::TooManyPlayers {
                n,
                max: MAX_PLAYERS,
            });
        }
        let mut blocks = Vec::new();
        let mut seen = 0u64;
        for part in text.split('|') {
            let part = part.trim();
            if part.is_empty() {
                return Err(ModelError::EmptyBlock);
            }
            let mut mask = 0u64;
            for token in part.split(',') {
                let token = token.trim();
                let id: u32 = token.parse().map_err(|_| ModelError::InvalidToken {
                    token: token.to_string(),
                })?;
                let player = PlayerId::new(id)?;
                if player.get() > n {
                    return Err(ModelError::PlayerOutOfRange { id, n });
                }
                if seen & player.bit() != 0 || mask & player.bit() != 0 {
                    return Err(ModelError::DuplicatePlayer { id });
                }
                mask |= player.bit();
            }
            seen |= mask;
            blocks.push(Coalition::from_mask(mask));
        }
        Partition::new(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for block in &self.blocks {
            if !first {
                write!(f, "|")?;
            }
            write!(f, "{block}")?;
            first = false;
        }
        Ok(())
    }
}

/// All nonempty subsets of `ground`, in increasing order of the counter over
/// member indices (so for ground `{1,2,3}`: `{1}`, `{2}`, `{1,2}`, `{3}`,
/// `{1,3}`, `{2,3}`, `{1,2,3}`).
pub fn subsets(ground: Coalition) -> Subsets {
    let free: Vec<u64> = ground.members().map(|p| p.bit()).collect();
    // u128 counters: a 64-member ground set has 2^64 subsets.
    let end = 1u128 << free.len();
    Subsets {
        free,
        forced: 0,
        next: 1,
        end,
    }
}

/// All subsets of `ground` containing `player`, in the same counter order
/// over the remaining member indices.
pub fn subsets_containing(ground: Coalition, player: PlayerId) -> Result<Subsets, ModelError> {
    if !ground.contains(player) {
        return Err(ModelError::NotInGround {
            player: player.get(),
        });
    }
    let free: Vec<u64> = ground
        .members()
        .filter(|&p| p != player)
        .map(|p| p.bit())
        .collect();
    let end = 1u128 << free.len();
    Ok(Subsets {
        free,
        forced: player.bit(),
        next: 0,
        end,
    })
}

#[derive(Debug, Clone)]
pub struct Subsets {
    free: Vec<u64>,
    forced: u64,
    next: u128,
    end: u128,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        if self.next >= self.end {
            return None;
        }
        let mut mask = self.forced;
        let mut counter = self.next;
        let mut j = 0;
        while counter != 0 {
            if counter & 1 != 0 {
                mask |= self.free[j];
            }
            counter >>= 1;
            j += 1;
        }
        self.next += 1;
        Some(Coalition::from_mask(mask))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next).min(usize::MAX as u128) as usize;
        (left, Some(left))
    }
}

/// Streams every partition of `{1..n}` exactly once, in lexicographic
/// restricted-growth-string order, under the default cap.
pub fn partitions(n: u32) -> Result<Partitions, ModelError> {
    partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

/// As [`partitions`], with an explicit cap on `n`.
pub fn partitions_with_cap(n: u32, cap: u32) -> Result<Partitions, ModelError> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(ModelError::TooManyPlayers {
            n,
            max: MAX_PLAYERS,
        });
    }
    if n > cap {
        return Err(ModelError::PartitionCapExceeded { n, cap });
    }
    Ok(Partitions {
        n: n as usize,
        rgs: vec![0; n as usize],
        maxes: vec![0; n as usize],
        started: false,
        done: false,
    })
}

/// Iterator over all partitions of `{1..n}`.
///
/// A restricted growth string `a` assigns player `i+1` to block `a[i]`, with
/// `a[0] = 0` and `a[i] <= max(a[0..i]) + 1`. Lexicographic order on these
/// strings starts at the grand coalition and ends at the all-singletons
/// partition.
#[derive(Debug, Clone)]
pub struct Partitions {
    n: usize,
    rgs: Vec<u32>,
    maxes: Vec<u32>,
    started: bool,
    done: bool,
}

impl Partitions {
    fn current(&self) -> Partition {
        let nblocks = (self.maxes[self.n - 1] + 1) as usize;
        let mut masks = vec![0u64; nblocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            masks[b as usize] |= 1u64 << i;
        }
        // Block b's first occurrence precedes block b+1's, so the blocks come
        // out already sorted by minimum member.
        let blocks = masks.into_iter().map(Coalition::from_mask).collect();
        Partition {
            n: self.n as u32,
            blocks,
        }
    }

    fn advance(&mut self) -> bool {
        for j in (1..self.n).rev() {
            if self.rgs[j] <= self.maxes[j - 1] {
                self.rgs[j] += 1;
                self.maxes[j] = self.maxes[j - 1].max(self.rgs[j]);
                for k in j + 1..self.n {
                    self.rgs[k] = 0;
                    self.maxes[k] = self.maxes[j];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

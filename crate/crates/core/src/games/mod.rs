//! The preference representations and the single exact utility contract.
//!
//! Every representation exposes `utility(i, C)` as an exact [`Rational`], and
//! preferences are always derived from exact comparisons of those values: for
//! coalitions `C`, `D` containing `i`, player `i` weakly prefers `C` to `D`
//! iff `utility(i, C) >= utility(i, D)`.

mod predicates;

pub use predicates::{
    AnonymityViolation, CommonRankingCheck, CommonRankingConflict, SeparabilityViolation,
    common_ranking, find_anonymity_violation, find_separability_violation, find_top_coalition,
    has_top_coalition_property, top_coalitions,
};

use crate::model::{Coalition, ModelError, PlayerId, full_mask, subsets_containing};
use crate::rational::{Rational, pascal_row};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use thiserror::Error;

/// Cap on `n` for anything that materializes or scans all `2^n - 1`
/// coalitions: dense representations, the profile predicates, core checks.
pub const SUBSET_CAP: u32 = 16;

/// Cap on `n` for the top-coalition property scan, which examines every
/// nonempty ground set and all of its subsets.
pub const TOP_COALITION_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("player {player} is not a member of coalition {coalition}")]
    NotAMember { player: u32, coalition: String },
    #[error("missing entry for player {player}, coalition {coalition}")]
    MissingEntry { player: u32, coalition: String },
    #[error("missing weight for coalition {coalition}")]
    MissingWeight { coalition: String },
    #[error("duplicate entry for {what}")]
    DuplicateEntry { what: String },
    #[error("unexpected entry for {what}")]
    UnexpectedEntry { what: String },
    #[error("dimension mismatch: {what}")]
    Dimension { what: String },
    #[error("{op} requires n <= {cap}, got n = {n}")]
    CapExceeded { op: &'static str, n: u32, cap: u32 },
    #[error("representation is not symmetric: v_{i}({j}) != v_{j}({i})")]
    NotSymmetric { i: u32, j: u32 },
    #[error("expected a {expected} representation, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
}

fn check_player(n: u32, player: PlayerId) -> Result<(), GameError> {
    if player.get() > n {
        return Err(GameError::Model(ModelError::PlayerOutOfRange {
            id: player.get(),
            n,
        }));
    }
    Ok(())
}

fn check_coalition(n: u32, coalition: Coalition) -> Result<(), GameError> {
    if !coalition.fits(n) {
        let id = coalition.max_member().get();
        return Err(GameError::Model(ModelError::PlayerOutOfRange { id, n }));
    }
    Ok(())
}

fn check_membership(n: u32, player: PlayerId, coalition: Coalition) -> Result<(), GameError> {
    check_player(n, player)?;
    check_coalition(n, coalition)?;
    if !coalition.contains(player) {
        return Err(GameError::NotAMember {
            player: player.get(),
            coalition: coalition.to_string(),
        });
    }
    Ok(())
}

fn check_dense_cap(n: u32, op: &'static str) -> Result<(), GameError> {
    if n == 0 {
        return Err(GameError::Dimension {
            what: "n must be at least 1".to_string(),
        });
    }
    if n > SUBSET_CAP {
        return Err(GameError::CapExceeded {
            op,
            n,
            cap: SUBSET_CAP,
        });
    }
    Ok(())
}

/// A complete per-player utility table: one value for every coalition the
/// player belongs to. Missing entries are a construction-time error.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable {
    n: u32,
    rows: Vec<BTreeMap<u64, Rational>>,
}

impl UtilityTable {
    pub fn from_entries(
        n: u32,
        entries: impl IntoIterator<Item = (PlayerId, Coalition, Rational)>,
    ) -> Result<Self, GameError> {
        check_dense_cap(n, "utility table construction")?;
        let mut rows: Vec<BTreeMap<u64, Rational>> = vec![BTreeMap::new(); n as usize];
        for (player, coalition, value) in entries {
            check_membership(n, player, coalition)?;
            if rows[player.index()].insert(coalition.mask(), value).is_some() {
                return Err(GameError::DuplicateEntry {
                    what: format!("player {player}, coalition {coalition}"),
                });
            }
        }
        for id in 1..=n {
            let player = PlayerId::new(id)?;
            let row = &rows[player.index()];
            if row.len() != 1 << (n - 1) {
                let missing = subsets_containing(Coalition::from_mask(full_mask(n)), player)
                    .expect("player is in the grand coalition")
                    .find(|c| !row.contains_key(&c.mask()))
                    .expect("some coalition is missing");
                return Err(GameError::MissingEntry {
                    player: id,
                    coalition: missing.to_string(),
                });
            }
        }
        Ok(UtilityTable { n, rows })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, player: PlayerId, coalition: Coalition) -> Result<&Rational, GameError> {
        check_membership(self.n, player, coalition)?;
        self.rows[player.index()]
            .get(&coalition.mask())
            .ok_or_else(|| GameError::MissingEntry {
                player: player.get(),
                coalition: coalition.to_string(),
            })
    }

    /// Entries of one player's row, in bitmask order.
    pub fn row(&self, player: PlayerId) -> impl Iterator<Item = (Coalition, &Rational)> {
        self.rows[player.index()]
            .iter()
            .map(|(&mask, v)| (Coalition::from_mask(mask), v))
    }
}

/// Additively separable preferences: `u_i(C) = sum of v_i(j) for j in C`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivelySeparable {
    n: u32,
    v: Vec<Vec<Rational>>,
}

impl AdditivelySeparable {
    pub fn from_matrix(v: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let n = v.len() as u32;
        if n == 0 || n > crate::model::MAX_PLAYERS {
            return Err(GameError::Dimension {
                what: format!("matrix must be square with 1..={} rows", crate::model::MAX_PLAYERS),
            });
        }
        if let Some(row) = v.iter().find(|row| row.len() != n as usize) {
            return Err(GameError::Dimension {
                what: format!("expected {n} columns, found a row with {}", row.len()),
            });
        }
        Ok(AdditivelySeparable { n, v })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `v_i(j)`.
    pub fn value(&self, i: PlayerId, j: PlayerId) -> &Rational {
        &self.v[i.index()][j.index()]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.v
    }

    /// `v_i(j) = v_j(i)` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n as usize;
        (0..n).all(|i| (i + 1..n).all(|j| self.v[i][j] == self.v[j][i]))
    }

    /// `v_i(j) >= 0` whenever `v_j(i) >= 0`, for all pairs.
    pub fn is_mutual(&self) -> bool {
        let zero = Rational::zero();
        let n = self.n as usize;
        (0..n).all(|i| {
            (0..n).all(|j| i == j || self.v[j][i] < zero || self.v[i][j] >= zero)
        })
    }

    fn utility(&self, player: PlayerId, coalition: Coalition) -> Rational {
        coalition
            .members()
            .map(|j| &self.v[player.index()][j.index()])
            .fold(Rational::zero(), |acc, v| acc + v)
    }
}

/// Subset-additive preferences: `u_i(C)` sums `v_i` over every subset of `C`
/// containing `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetAdditive {
    n: u32,
    rows: Vec<BTreeMap<u64, Rational>>,
}

impl SubsetAdditive {
    pub fn from_entries(
        n: u32,
        entries: impl IntoIterator<Item = (PlayerId, Coalition, Rational)>,
    ) -> Result<Self, GameError> {
        check_dense_cap(n, "subset-additive construction")?;
        let table = UtilityTable::from_entries(n, entries)?;
        Ok(SubsetAdditive {
            n,
            rows: table.rows,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `v_i(C)`, the weight of one subset (not the summed utility).
    pub fn weight(&self, player: PlayerId, coalition: Coalition) -> Result<&Rational, GameError> {
        check_membership(self.n, player, coalition)?;
        self.rows[player.index()]
            .get(&coalition.mask())
            .ok_or_else(|| GameError::MissingEntry {
                player: player.get(),
                coalition: coalition.to_string(),
            })
    }

    pub fn row(&self, player: PlayerId) -> impl Iterator<Item = (Coalition, &Rational)> {
        self.rows[player.index()]
            .iter()
            .map(|(&mask, v)| (Coalition::from_mask(mask), v))
    }

    fn utility(&self, player: PlayerId, coalition: Coalition) -> Rational {
        let row = &self.rows[player.index()];
        subsets_containing(coalition, player)
            .expect("membership checked by caller")
            .map(|c| &row[&c.mask()])
            .fold(Rational::zero(), |acc, v| acc + v)
    }
}

#[derive(Debug, Clone)]
enum SubsetNeutralValues {
    /// One weight per nonempty coalition, indexed by `mask - 1`.
    PerCoalition(Vec<Rational>),
    /// One weight per coalition size, indexed by `size - 1`. Used for the
    /// size-recursive conversion from neutrally anonymous games, where
    /// materializing all `2^n - 1` weights would be wasteful.
    BySize(Vec<Rational>),
}

/// Subset-neutral preferences: a single set function `w` shared by everyone,
/// with `u_i(C)` summing `w` over the subsets of `C` containing `i`.
#[derive(Debug, Clone)]
pub struct SubsetNeutral {
    n: u32,
    values: SubsetNeutralValues,
    /// Lazily built table of `sum of w over all nonempty subsets` per mask
    /// (dense storage) or per size (by-size storage).
    subset_sums: OnceLock<Vec<Rational>>,
}

impl PartialEq for SubsetNeutral {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        match (&self.values, &other.values) {
            (SubsetNeutralValues::PerCoalition(a), SubsetNeutralValues::PerCoalition(b)) => a == b,
            (SubsetNeutralValues::BySize(a), SubsetNeutralValues::BySize(b)) => a == b,
            // Mixed storages compare by the weight function itself.
            _ => (1..=full_mask(self.n)).all(|mask| {
                let c = Coalition::from_mask(mask);
                self.weight(c).ok() == other.weight(c).ok()
            }),
        }
    }
}

impl SubsetNeutral {
    pub fn from_entries(
        n: u32,
        entries: impl IntoIterator<Item = (Coalition, Rational)>,
    ) -> Result<Self, GameError> {
        check_dense_cap(n, "subset-neutral construction")?;
        let size = full_mask(n) as usize;
        let mut values: Vec<Option<Rational>> = vec![None; size];
        for (coalition, value) in entries {
            check_coalition(n, coalition)?;
            let slot = &mut values[(coalition.mask() - 1) as usize];
            if slot.is_some() {
                return Err(GameError::DuplicateEntry {
                    what: format!("coalition {coalition}"),
                });
            }
            *slot = Some(value);
        }
        let mut filled = Vec::with_capacity(size);
        for (index, slot) in values.into_iter().enumerate() {
            match slot {
                Some(v) => filled.push(v),
                None => {
                    return Err(GameError::MissingWeight {
                        coalition: Coalition::from_mask(index as u64 + 1).to_string(),
                    });
                }
            }
        }
        Ok(SubsetNeutral {
            n,
            values: SubsetNeutralValues::PerCoalition(filled),
            subset_sums: OnceLock::new(),
        })
    }

    /// A neutral function whose weight depends only on coalition size;
    /// `values[k-1]` is the weight of every size-`k` coalition.
    pub fn from_size_values(n: u32, values: Vec<Rational>) -> Result<Self, GameError> {
        if n == 0 || n > crate::model::MAX_PLAYERS {
            return Err(GameError::Dimension {
                what: format!("n must be in 1..={}", crate::model::MAX_PLAYERS),
            });
        }
        if values.len() != n as usize {
            return Err(GameError::Dimension {
                what: format!("expected {n} size values, got {}", values.len()),
            });
        }
        Ok(SubsetNeutral {
            n,
            values: SubsetNeutralValues::BySize(values),
            subset_sums: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_size_indexed(&self) -> bool {
        matches!(self.values, SubsetNeutralValues::BySize(_))
    }

    /// `w(C)`.
    pub fn weight(&self, coalition: Coalition) -> Result<&Rational, GameError> {
        check_coalition(self.n, coalition)?;
        Ok(match &self.values {
            SubsetNeutralValues::PerCoalition(v) => &v[(coalition.mask() - 1) as usize],
            SubsetNeutralValues::BySize(v) => &v[coalition.size() - 1],
        })
    }

    /// `sum of w(D) over all nonempty D subseteq mask`; `0` for the empty mask.
    ///
    /// Dense storage uses a cached zeta transform over the subset lattice;
    /// by-size storage uses cached per-size binomial sums.
    pub(crate) fn subset_sum(&self, mask: u64) -> Rational {
        debug_assert!(mask & !full_mask(self.n) == 0);
        let sums = self.subset_sums.get_or_init(|| match &self.values {
            SubsetNeutralValues::PerCoalition(w) => {
                let size = 1usize << self.n;
                let mut g = Vec::with_capacity(size);
                g.push(Rational::zero());
                g.extend(w.iter().cloned());
                for b in 0..self.n {
                    let bit = 1usize << b;
                    for m in 0..size {
                        if m & bit != 0 {
                            let lower = g[m ^ bit].clone();
                            g[m] += lower;
                        }
                    }
                }
                g
            }
            SubsetNeutralValues::BySize(w) => {
                // sums[s] = sum over k of binom(s, k) * w_k.
                let n = self.n as usize;
                let mut sums = Vec::with_capacity(n + 1);
                sums.push(Rational::zero());
                for s in 1..=n {
                    let row = pascal_row(s);
                    let mut total = Rational::zero();
                    for (k, weight) in w.iter().take(s).enumerate() {
                        total += weight * Rational::from(row[k + 1].clone());
                    }
                    sums.push(total);
                }
                sums
            }
        });
        match &self.values {
            SubsetNeutralValues::PerCoalition(_) => sums[mask as usize].clone(),
            SubsetNeutralValues::BySize(_) => sums[mask.count_ones() as usize].clone(),
        }
    }

    pub fn utility(&self, player: PlayerId, coalition: Coalition) -> Result<Rational, GameError> {
        check_membership(self.n, player, coalition)?;
        let with = self.subset_sum(coalition.mask());
        let without = self.subset_sum(coalition.mask() & !player.bit());
        Ok(with - without)
    }

    /// The weight map expanded per coalition, in bitmask order. For by-size
    /// storage this requires `n` within [`SUBSET_CAP`].
    pub fn entries(&self) -> Result<Vec<(Coalition, Rational)>, GameError> {
        check_dense_cap(self.n, "subset-neutral expansion")?;
        Ok((1..=full_mask(self.n))
            .map(|mask| {
                let c = Coalition::from_mask(mask);
                let w = self
                    .weight(c)
                    .expect("weight is total on nonempty subsets")
                    .clone();
                (c, w)
            })
            .collect())
    }
}

/// A concrete carrier for anonymous profiles: per-player scores indexed by
/// coalition size.
#[derive(Debug, Clone, PartialEq)]
pub struct Anonymous {
    n: u32,
    g: Vec<Vec<Rational>>,
}

impl Anonymous {
    pub fn from_rows(g: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let n = g.len() as u32;
        if n == 0 || n > crate::model::MAX_PLAYERS {
            return Err(GameError::Dimension {
                what: format!("expected 1..={} rows", crate::model::MAX_PLAYERS),
            });
        }
        if let Some(row) = g.iter().find(|row| row.len() != n as usize) {
            return Err(GameError::Dimension {
                what: format!("expected {n} size scores per player, found {}", row.len()),
            });
        }
        Ok(Anonymous { n, g })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Player `i`'s score for coalitions of the given size.
    pub fn score(&self, player: PlayerId, size: usize) -> &Rational {
        &self.g[player.index()][size - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.g
    }
}

/// Neutrally anonymous preferences: a single size function `f` shared by
/// everyone.
#[derive(Debug, Clone, PartialEq)]
pub struct NeutrallyAnonymous {
    f: Vec<Rational>,
}

impl NeutrallyAnonymous {
    pub fn from_values(f: Vec<Rational>) -> Result<Self, GameError> {
        let n = f.len() as u32;
        if n == 0 || n > crate::model::MAX_PLAYERS {
            return Err(GameError::Dimension {
                what: format!("expected 1..={} size values", crate::model::MAX_PLAYERS),
            });
        }
        Ok(NeutrallyAnonymous { f })
    }

    pub fn n(&self) -> u32 {
        self.f.len() as u32
    }

    /// `f(size)`.
    pub fn value_for_size(&self, size: usize) -> &Rational {
        &self.f[size - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.f
    }
}

/// Common-ranking preferences: everyone ranks coalitions by one shared
/// function `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonRanking {
    n: u32,
    w: Vec<Rational>,
}

impl CommonRanking {
    pub fn from_entries(
        n: u32,
        entries: impl IntoIterator<Item = (Coalition, Rational)>,
    ) -> Result<Self, GameError> {
        let neutral = SubsetNeutral::from_entries(n, entries)?;
        match neutral.values {
            SubsetNeutralValues::PerCoalition(w) => Ok(CommonRanking { n, w }),
            SubsetNeutralValues::BySize(_) => unreachable!("from_entries builds dense storage"),
        }
    }

    /// Builds `w` from ordered indifference tiers, best first: the tier `t`
    /// counted from the bottom gets value `t - 1`. The tiers must partition
    /// all nonempty subsets of `{1..n}`.
    pub fn from_tiers(n: u32, tiers: &[Vec<Coalition>]) -> Result<Self, GameError> {
        check_dense_cap(n, "common-ranking construction")?;
        let mut entries = Vec::new();
        for (depth, tier) in tiers.iter().enumerate() {
            let value = crate::rational::rational_int((tiers.len() - 1 - depth) as i64);
            for &coalition in tier {
                entries.push((coalition, value.clone()));
            }
        }
        CommonRanking::from_entries(n, entries)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `w(C)`.
    pub fn weight(&self, coalition: Coalition) -> Result<&Rational, GameError> {
        check_coalition(self.n, coalition)?;
        Ok(&self.w[(coalition.mask() - 1) as usize])
    }

    pub fn entries(&self) -> impl Iterator<Item = (Coalition, &Rational)> {
        self.w
            .iter()
            .enumerate()
            .map(|(index, v)| (Coalition::from_mask(index as u64 + 1), v))
    }
}

/// The kind tag of a [`GameRepr`]; the names double as the JSON `kind` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    UtilityTable,
    AdditivelySeparable,
    SubsetAdditive,
    SubsetNeutral,
    Anonymous,
    NeutrallyAnonymous,
    CommonRanking,
}

impl GameKind {
    pub fn name(self) -> &'static str {
        match self {
            GameKind::UtilityTable => "utilities",
            GameKind::AdditivelySeparable => "additively_separable",
            GameKind::SubsetAdditive => "subset_additive",
            GameKind::SubsetNeutral => "subset_neutral",
            GameKind::Anonymous => "anonymous",
            GameKind::NeutrallyAnonymous => "neutrally_anonymous",
            GameKind::CommonRanking => "common_ranking",
        }
    }
}

impl std::fmt::Display for GameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A hedonic game in one of the seven supported representations.
#[derive(Debug, Clone, PartialEq)]
pub enum GameRepr {
    UtilityTable(UtilityTable),
    AdditivelySeparable(AdditivelySeparable),
    SubsetAdditive(SubsetAdditive),
    SubsetNeutral(SubsetNeutral),
    Anonymous(Anonymous),
    NeutrallyAnonymous(NeutrallyAnonymous),
    CommonRanking(CommonRanking),
}

impl GameRepr {
    pub fn n(&self) -> u32 {
        match self {
            GameRepr::UtilityTable(g) => g.n(),
            GameRepr::AdditivelySeparable(g) => g.n(),
            GameRepr::SubsetAdditive(g) => g.n(),
            GameRepr::SubsetNeutral(g) => g.n(),
            GameRepr::Anonymous(g) => g.n(),
            GameRepr::NeutrallyAnonymous(g) => g.n(),
            GameRepr::CommonRanking(g) => g.n(),
        }
    }

    pub fn kind(&self) -> GameKind {
        match self {
            GameRepr::UtilityTable(_) => GameKind::UtilityTable,
            GameRepr::AdditivelySeparable(_) => GameKind::AdditivelySeparable,
            GameRepr::SubsetAdditive(_) => GameKind::SubsetAdditive,
            GameRepr::SubsetNeutral(_) => GameKind::SubsetNeutral,
            GameRepr::Anonymous(_) => GameKind::Anonymous,
            GameRepr::NeutrallyAnonymous(_) => GameKind::NeutrallyAnonymous,
            GameRepr::CommonRanking(_) => GameKind::CommonRanking,
        }
    }

    /// Exact utility of `coalition` for `player`, who must be a member.
    pub fn utility(&self, player: PlayerId, coalition: Coalition) -> Result<Rational, GameError> {
        check_membership(self.n(), player, coalition)?;
        Ok(match self {
            GameRepr::UtilityTable(g) => g.get(player, coalition)?.clone(),
            GameRepr::AdditivelySeparable(g) => g.utility(player, coalition),
            GameRepr::SubsetAdditive(g) => g.utility(player, coalition),
            GameRepr::SubsetNeutral(g) => g.utility(player, coalition)?,
            GameRepr::Anonymous(g) => g.score(player, coalition.size()).clone(),
            GameRepr::NeutrallyAnonymous(g) => g.value_for_size(coalition.size()).clone(),
            GameRepr::CommonRanking(g) => g.weight(coalition)?.clone(),
        })
    }

    /// Exact three-way comparison of two coalitions from `player`'s point of
    /// view: `Greater` means the first is strictly preferred.
    pub fn compare(
        &self,
        player: PlayerId,
        first: Coalition,
        second: Coalition,
    ) -> Result<Ordering, GameError> {
        let a = self.utility(player, first)?;
        let b = self.utility(player, second)?;
        Ok(a.cmp(&b))
    }

    pub fn strictly_prefers(
        &self,
        player: PlayerId,
        first: Coalition,
        second: Coalition,
    ) -> Result<bool, GameError> {
        Ok(self.compare(player, first, second)? == Ordering::Greater)
    }

    /// All players `1..=n`.
    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (1..=self.n()).map(|id| PlayerId::new(id).expect("1..=n is in range"))
    }

    /// The grand coalition `{1..n}`.
    pub fn grand_coalition(&self) -> Coalition {
        Coalition::from_mask(full_mask(self.n()))
    }
}

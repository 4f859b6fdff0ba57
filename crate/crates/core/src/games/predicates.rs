//! Profile-class predicates: separability, anonymity, the common ranking
//! property, and top coalitions.
//!
//! Every predicate works on any [`GameRepr`] through the exact utility
//! contract, scans in a documented deterministic order, and returns a
//! concrete counterexample on failure.

use super::{CommonRanking, GameError, GameRepr, SUBSET_CAP, TOP_COALITION_CAP};
use crate::model::{Coalition, PlayerId, full_mask, subsets, subsets_containing};
use crate::rational::Rational;
use std::collections::BTreeMap;

fn check_cap(n: u32, cap: u32, op: &'static str) -> Result<(), GameError> {
    if n > cap {
        return Err(GameError::CapExceeded { op, n, cap });
    }
    Ok(())
}

/// A triple violating separability: adding `joiner` to `context` moves
/// `player` in the opposite direction from the pairwise comparison
/// `{player, joiner}` vs `{player}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityViolation {
    pub player: PlayerId,
    pub joiner: PlayerId,
    pub context: Coalition,
}

/// Checks both biconditionals of separability for every `(i, C, j)` with
/// `i` in `C` and `j` outside; scan order is players ascending, then `C` in
/// bitmask order, then `j` ascending. Returns the first violation, or `None`
/// when the profile is separable.
pub fn find_separability_violation(
    game: &GameRepr,
) -> Result<Option<SeparabilityViolation>, GameError> {
    let n = game.n();
    check_cap(n, SUBSET_CAP, "separability check")?;
    let everyone = game.grand_coalition();
    for i in game.players() {
        let alone = Coalition::singleton(i);
        let u_alone = game.utility(i, alone)?;
        for context in subsets_containing(everyone, i)? {
            let u_context = game.utility(i, context)?;
            for j in game.players() {
                if context.contains(j) {
                    continue;
                }
                let u_pair = game.utility(i, alone.with(j))?;
                let u_extended = game.utility(i, context.with(j))?;
                let weak_matches = (u_extended >= u_context) == (u_pair >= u_alone);
                let strict_matches = (u_extended > u_context) == (u_pair > u_alone);
                if !weak_matches || !strict_matches {
                    return Ok(Some(SeparabilityViolation {
                        player: i,
                        joiner: j,
                        context,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Two same-size coalitions a player is not indifferent between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnonymityViolation {
    pub player: PlayerId,
    pub first: Coalition,
    pub second: Coalition,
}

/// Anonymity requires exact indifference between any two same-size coalitions
/// containing the player. Scans players ascending and coalitions in bitmask
/// order, comparing each coalition with the first one seen of its size.
pub fn find_anonymity_violation(game: &GameRepr) -> Result<Option<AnonymityViolation>, GameError> {
    let n = game.n();
    check_cap(n, SUBSET_CAP, "anonymity check")?;
    let everyone = game.grand_coalition();
    for i in game.players() {
        let mut first_of_size: Vec<Option<(Coalition, Rational)>> = vec![None; n as usize + 1];
        for coalition in subsets_containing(everyone, i)? {
            let u = game.utility(i, coalition)?;
            if let Some((first, u_first)) = &first_of_size[coalition.size()] {
                if &u != u_first {
                    return Ok(Some(AnonymityViolation {
                        player: i,
                        first: *first,
                        second: coalition,
                    }));
                }
            } else {
                first_of_size[coalition.size()] = Some((coalition, u));
            }
        }
    }
    Ok(None)
}

/// A strict requirement that cannot be honored by any shared ranking:
/// `player` demands `w(above) > w(below)`, but the two coalitions lie on a
/// cycle of such demands (or are forced equal by other players).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonRankingConflict {
    pub player: PlayerId,
    pub above: Coalition,
    pub below: Coalition,
}

/// Outcome of the common-ranking check: either a witnessing shared function
/// `w` consistent with every player's comparisons, or a conflict.
#[derive(Debug, Clone, PartialEq)]
pub enum CommonRankingCheck {
    Consistent(CommonRanking),
    Inconsistent(CommonRankingConflict),
}

impl CommonRankingCheck {
    pub fn is_consistent(&self) -> bool {
        matches!(self, CommonRankingCheck::Consistent(_))
    }
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(size: usize) -> Self {
        Dsu {
            parent: (0..size as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Deterministic: smaller index wins.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Iterative Tarjan SCC; returns a component id per node.
fn strongly_connected_components(num_nodes: usize, adjacency: &[Vec<u32>]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; num_nodes];
    let mut low = vec![0u32; num_nodes];
    let mut on_stack = vec![false; num_nodes];
    let mut comp = vec![UNSET; num_nodes];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();

    for start in 0..num_nodes as u32 {
        if index[start as usize] != UNSET {
            continue;
        }
        call.push((start, 0));
        index[start as usize] = next_index;
        low[start as usize] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start as usize] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adjacency[v as usize].len() {
                let w = adjacency[v as usize][*edge];
                *edge += 1;
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("stack holds the component");
                        on_stack[w as usize] = false;
                        comp[w as usize] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Decides whether one shared function `w` can reproduce every player's
/// comparisons.
///
/// Per player, coalitions of `N_i` are sorted by utility; ties are merged
/// with a union-find and one strict edge is added between adjacent utility
/// levels (transitivity supplies the rest). The profile has a common ranking
/// iff the contracted constraint graph is acyclic; a witnessing `w` is then
/// read off by longest-path level numbering, so unconstrained coalitions
/// simply share level 0.
pub fn common_ranking(game: &GameRepr) -> Result<CommonRankingCheck, GameError> {
    let n = game.n();
    check_cap(n, SUBSET_CAP, "common-ranking check")?;
    let num_nodes = full_mask(n) as usize;
    let everyone = game.grand_coalition();

    let mut dsu = Dsu::new(num_nodes);
    // Strict demands (above, below, player), in scan order.
    let mut demands: Vec<(u64, u64, PlayerId)> = Vec::new();

    for i in game.players() {
        let mut ranked: Vec<(u64, Rational)> = Vec::new();
        for coalition in subsets_containing(everyone, i)? {
            ranked.push((coalition.mask(), game.utility(i, coalition)?));
        }
        // Best first; ties in bitmask order for determinism.
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut tier_start = 0;
        for k in 1..=ranked.len() {
            if k == ranked.len() || ranked[k].1 != ranked[tier_start].1 {
                for pair in ranked[tier_start..k].windows(2) {
                    dsu.union((pair[0].0 - 1) as u32, (pair[1].0 - 1) as u32);
                }
                if k < ranked.len() {
                    demands.push((ranked[tier_start].0, ranked[k].0, i));
                }
                tier_start = k;
            }
        }
    }

    // An equality group with an internal strict demand is already a conflict;
    // otherwise look for cycles among the contracted strict edges.
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); num_nodes];
    for &(above, below, player) in &demands {
        let ra = dsu.find((above - 1) as u32);
        let rb = dsu.find((below - 1) as u32);
        if ra == rb {
            return Ok(CommonRankingCheck::Inconsistent(CommonRankingConflict {
                player,
                above: Coalition::from_mask(above),
                below: Coalition::from_mask(below),
            }));
        }
        adjacency[ra as usize].push(rb);
    }

    let comp = strongly_connected_components(num_nodes, &adjacency);
    for &(above, below, player) in &demands {
        let ra = dsu.find((above - 1) as u32);
        let rb = dsu.find((below - 1) as u32);
        if comp[ra as usize] == comp[rb as usize] {
            return Ok(CommonRankingCheck::Inconsistent(CommonRankingConflict {
                player,
                above: Coalition::from_mask(above),
                below: Coalition::from_mask(below),
            }));
        }
    }

    // Acyclic: longest path to a sink, memoized depth-first.
    let mut level: Vec<Option<u64>> = vec![None; num_nodes];
    for start in 0..num_nodes as u32 {
        if level[start as usize].is_some() {
            continue;
        }
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            let mut ready = true;
            let mut best = 0u64;
            for &w in &adjacency[v as usize] {
                match level[w as usize] {
                    Some(l) => best = best.max(l + 1),
                    None => {
                        stack.push(w);
                        ready = false;
                    }
                }
            }
            if ready {
                level[v as usize] = Some(best);
                stack.pop();
            }
        }
    }

    let entries = (1..=full_mask(n)).map(|mask| {
        let root = dsu.find((mask - 1) as u32);
        let l = level[root as usize].expect("all roots were leveled");
        (
            Coalition::from_mask(mask),
            crate::rational::rational_int(l as i64),
        )
    });
    Ok(CommonRankingCheck::Consistent(CommonRanking::from_entries(
        n, entries,
    )?))
}

/// Per-member utilities over all subsets of a ground set, with the maximum.
struct GroundView {
    utilities: BTreeMap<(u32, u64), Rational>,
    best: BTreeMap<u32, Rational>,
}

impl GroundView {
    fn build(game: &GameRepr, ground: Coalition) -> Result<Self, GameError> {
        let mut utilities = BTreeMap::new();
        let mut best: BTreeMap<u32, Rational> = BTreeMap::new();
        for i in ground.members() {
            for coalition in subsets_containing(ground, i)? {
                let u = game.utility(i, coalition)?;
                let record = best.entry(i.get()).or_insert_with(|| u.clone());
                if u > *record {
                    *record = u.clone();
                }
                utilities.insert((i.get(), coalition.mask()), u);
            }
        }
        Ok(GroundView { utilities, best })
    }

    fn is_top(&self, candidate: Coalition) -> bool {
        candidate.members().all(|i| {
            self.utilities[&(i.get(), candidate.mask())] == self.best[&i.get()]
        })
    }
}

/// All top coalitions of `ground`, in bitmask order. A subset `S` is a top
/// coalition when every member attains, at `S`, her maximum utility over all
/// subsets of `ground` containing her.
pub fn top_coalitions(game: &GameRepr, ground: Coalition) -> Result<Vec<Coalition>, GameError> {
    if ground.size() as u32 > SUBSET_CAP {
        return Err(GameError::CapExceeded {
            op: "top-coalition search",
            n: ground.size() as u32,
            cap: SUBSET_CAP,
        });
    }
    let view = GroundView::build(game, ground)?;
    Ok(subsets(ground).filter(|&s| view.is_top(s)).collect())
}

/// The preferred top coalition of `ground`: candidates are ordered by size
/// descending, then lexicographically by member sequence, and the first one
/// is returned. `None` when `ground` has no top coalition.
pub fn find_top_coalition(
    game: &GameRepr,
    ground: Coalition,
) -> Result<Option<Coalition>, GameError> {
    let mut candidates = top_coalitions(game, ground)?;
    candidates.sort_by(|a, b| b.size().cmp(&a.size()).then(a.cmp_members(*b)));
    Ok(candidates.into_iter().next())
}

/// Scans every nonempty ground set in bitmask order; returns the first one
/// without a top coalition, or `None` when the property holds.
pub fn has_top_coalition_property(game: &GameRepr) -> Result<Option<Coalition>, GameError> {
    let n = game.n();
    check_cap(n, TOP_COALITION_CAP, "top-coalition property check")?;
    for mask in 1..=full_mask(n) {
        let ground = Coalition::from_mask(mask);
        let view = GroundView::build(game, ground)?;
        if !subsets(ground).any(|s| view.is_top(s)) {
            return Ok(Some(ground));
        }
    }
    Ok(None)
}

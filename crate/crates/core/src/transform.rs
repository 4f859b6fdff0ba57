//! Representation converters.
//!
//! Every converter preserves utilities exactly:
//! - [`to_subset_additive`] turns any evaluable game into a subset-additive
//!   one by the bottom-up recursion `v_i(C) = u_i(C) - sum of v_i over the
//!   proper subsets of C containing i`.
//! - [`na_to_subset_neutral`] turns a size function `f` into a neutral set
//!   function `w`; since same-size sets share a weight, the recursion runs
//!   over sizes with binomial multiplicities.
//! - [`symmetric_as_to_subset_neutral`] embeds a symmetric additively
//!   separable matrix as a set function that vanishes above pairs.

use crate::games::{
    AdditivelySeparable, GameError, GameRepr, NeutrallyAnonymous, SUBSET_CAP, SubsetAdditive,
    SubsetNeutral,
};
use crate::model::{Coalition, PlayerId, full_mask, subsets_containing};
use crate::rational::{Rational, pascal_row};
use num_traits::Zero;

/// Rewrites any game as a subset-additive one reproducing every utility
/// exactly. Per player, subsets are processed in order of increasing
/// cardinality (ties in bitmask order); the order among same-size sets does
/// not affect the result.
pub fn to_subset_additive(game: &GameRepr) -> Result<SubsetAdditive, GameError> {
    let n = game.n();
    if n > SUBSET_CAP {
        return Err(GameError::CapExceeded {
            op: "subset-additive conversion",
            n,
            cap: SUBSET_CAP,
        });
    }
    let everyone = game.grand_coalition();
    let mut entries = Vec::new();
    for i in game.players() {
        let mut coalitions: Vec<Coalition> = subsets_containing(everyone, i)?.collect();
        coalitions.sort_by_key(|c| (c.size(), c.mask()));
        // weights[mask] = v_i for the already-processed subsets.
        let mut weights: std::collections::BTreeMap<u64, Rational> = std::collections::BTreeMap::new();
        for coalition in coalitions {
            let mut value = game.utility(i, coalition)?;
            for sub in subsets_containing(coalition, i)? {
                if sub != coalition {
                    value -= &weights[&sub.mask()];
                }
            }
            weights.insert(coalition.mask(), value.clone());
            entries.push((i, coalition, value));
        }
    }
    SubsetAdditive::from_entries(n, entries)
}

/// Size-indexed weights `w_1..w_n` with `w_k = f(k) - sum over j < k of
/// binom(k-1, j-1) * w_j`, packaged as a size-indexed subset-neutral game.
/// The result satisfies `f(|C|) = sum of w over the subsets of C containing
/// any fixed member`.
pub fn na_to_subset_neutral(game: &NeutrallyAnonymous) -> SubsetNeutral {
    let f = game.values();
    let n = f.len();
    let mut w: Vec<Rational> = Vec::with_capacity(n);
    for k in 1..=n {
        let row = pascal_row(k - 1);
        let mut value = f[k - 1].clone();
        for (j, weight) in w.iter().enumerate() {
            // j is 0-based: w_{j+1} occurs binom(k-1, j) times among the
            // proper subsets of a size-k set containing the fixed member.
            value -= weight * Rational::from(row[j].clone());
        }
        w.push(value);
    }
    SubsetNeutral::from_size_values(n as u32, w).expect("size values match n")
}

/// `w({i}) = v_i(i)`, `w({i,j}) = v_i(j)`, and `w(C) = 0` for `|C| > 2`.
/// Requires symmetry, which the embedding depends on.
pub fn symmetric_as_to_subset_neutral(
    game: &AdditivelySeparable,
) -> Result<SubsetNeutral, GameError> {
    let n = game.n();
    if n > SUBSET_CAP {
        return Err(GameError::CapExceeded {
            op: "symmetric embedding",
            n,
            cap: SUBSET_CAP,
        });
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let pi = PlayerId::new(i)?;
            let pj = PlayerId::new(j)?;
            if game.value(pi, pj) != game.value(pj, pi) {
                return Err(GameError::NotSymmetric { i, j });
            }
        }
    }
    let entries = (1..=full_mask(n)).map(|mask| {
        let c = Coalition::from_mask(mask);
        let w = match c.size() {
            1 => {
                let i = c.min_member();
                game.value(i, i).clone()
            }
            2 => game.value(c.min_member(), c.max_member()).clone(),
            _ => Rational::zero(),
        };
        (c, w)
    });
    SubsetNeutral::from_entries(n, entries)
}

/// Turns one player's ranking, given as indifference tiers from best to
/// worst, into integer utilities: the tier `t` counted from the bottom gets
/// value `t - 1`. The tiers must partition the coalitions containing the
/// player.
pub fn ranking_to_utilities(
    n: u32,
    player: PlayerId,
    tiers: &[Vec<Coalition>],
) -> Result<Vec<(Coalition, Rational)>, GameError> {
    let mut entries = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (depth, tier) in tiers.iter().enumerate() {
        let value = crate::rational::rational_int((tiers.len() - 1 - depth) as i64);
        for &coalition in tier {
            if !coalition.fits(n) {
                return Err(GameError::Model(crate::model::ModelError::PlayerOutOfRange {
                    id: coalition.max_member().get(),
                    n,
                }));
            }
            if !coalition.contains(player) {
                return Err(GameError::NotAMember {
                    player: player.get(),
                    coalition: coalition.to_string(),
                });
            }
            if !seen.insert(coalition.mask()) {
                return Err(GameError::DuplicateEntry {
                    what: format!("coalition {coalition}"),
                });
            }
            entries.push((coalition, value.clone()));
        }
    }
    if seen.len() != 1 << (n - 1) {
        let missing = subsets_containing(Coalition::from_mask(full_mask(n)), player)?
            .find(|c| !seen.contains(&c.mask()))
            .expect("some coalition is missing");
        return Err(GameError::MissingEntry {
            player: player.get(),
            coalition: missing.to_string(),
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::UtilityTable;
    use crate::rational::rational_int;

    fn coalition(ids: &[u32]) -> Coalition {
        Coalition::from_ids(ids).unwrap()
    }

    fn player(id: u32) -> PlayerId {
        PlayerId::new(id).unwrap()
    }

    #[test]
    fn subset_additive_base_cases() {
        let one = UtilityTable::from_entries(
            1,
            vec![(player(1), coalition(&[1]), rational_int(7))],
        )
        .unwrap();
        let sa = to_subset_additive(&GameRepr::UtilityTable(one)).unwrap();
        assert_eq!(sa.weight(player(1), coalition(&[1])).unwrap(), &rational_int(7));

        let two = UtilityTable::from_entries(
            2,
            vec![
                (player(1), coalition(&[1]), rational_int(0)),
                (player(1), coalition(&[1, 2]), rational_int(5)),
                (player(2), coalition(&[2]), rational_int(0)),
                (player(2), coalition(&[1, 2]), rational_int(0)),
            ],
        )
        .unwrap();
        let sa = to_subset_additive(&GameRepr::UtilityTable(two)).unwrap();
        assert_eq!(sa.weight(player(1), coalition(&[1])).unwrap(), &rational_int(0));
        assert_eq!(sa.weight(player(1), coalition(&[1, 2])).unwrap(), &rational_int(5));
    }

    #[test]
    fn na_recursion_examples() {
        let na = NeutrallyAnonymous::from_values(vec![
            rational_int(0),
            rational_int(1),
            rational_int(-1),
        ])
        .unwrap();
        let sn = na_to_subset_neutral(&na);
        let by_size: Vec<_> = (1..=3u64)
            .map(|k| {
                sn.weight(Coalition::from_mask((1 << k) - 1)).unwrap().clone()
            })
            .collect();
        assert_eq!(by_size, vec![rational_int(0), rational_int(1), rational_int(-3)]);
        // f(3) reconstructed: 0 + 2*1 + (-3).
        assert_eq!(
            sn.utility(player(1), coalition(&[1, 2, 3])).unwrap(),
            rational_int(-1)
        );

        let zeros = NeutrallyAnonymous::from_values(vec![rational_int(0); 4]).unwrap();
        let sn = na_to_subset_neutral(&zeros);
        for k in 1..=4u64 {
            assert_eq!(
                sn.weight(Coalition::from_mask((1 << k) - 1)).unwrap(),
                &rational_int(0)
            );
        }

        let ex7 = NeutrallyAnonymous::from_values(vec![
            rational_int(0),
            rational_int(2),
            rational_int(1),
            rational_int(0),
            rational_int(0),
        ])
        .unwrap();
        let sn = na_to_subset_neutral(&ex7);
        let by_size: Vec<_> = (1..=5u64)
            .map(|k| {
                sn.weight(Coalition::from_mask((1 << k) - 1)).unwrap().clone()
            })
            .collect();
        assert_eq!(
            by_size,
            vec![
                rational_int(0),
                rational_int(2),
                rational_int(-3),
                rational_int(3),
                rational_int(-2),
            ]
        );
        // f(5) = 0 + 4*2 + 6*(-3) + 4*3 + (-2) = 0.
        assert_eq!(
            sn.utility(player(1), coalition(&[1, 2, 3, 4, 5])).unwrap(),
            rational_int(0)
        );
    }

    #[test]
    fn symmetric_embedding_examples() {
        let m = AdditivelySeparable::from_matrix(vec![
            vec![rational_int(0), rational_int(1)],
            vec![rational_int(1), rational_int(0)],
        ])
        .unwrap();
        let sn = symmetric_as_to_subset_neutral(&m).unwrap();
        assert_eq!(sn.weight(coalition(&[1])).unwrap(), &rational_int(0));
        assert_eq!(sn.weight(coalition(&[2])).unwrap(), &rational_int(0));
        assert_eq!(sn.weight(coalition(&[1, 2])).unwrap(), &rational_int(1));

        let zero = AdditivelySeparable::from_matrix(vec![vec![rational_int(0); 3]; 3]).unwrap();
        let sn = symmetric_as_to_subset_neutral(&zero).unwrap();
        for mask in 1..=7u64 {
            assert_eq!(sn.weight(Coalition::from_mask(mask)).unwrap(), &rational_int(0));
        }

        let skew = AdditivelySeparable::from_matrix(vec![
            vec![rational_int(0), rational_int(2)],
            vec![rational_int(1), rational_int(0)],
        ])
        .unwrap();
        assert_eq!(
            symmetric_as_to_subset_neutral(&skew).unwrap_err(),
            GameError::NotSymmetric { i: 1, j: 2 }
        );
    }

    #[test]
    fn ranking_tiers_to_utilities() {
        let tiers = vec![
            vec![coalition(&[1, 2]), coalition(&[1, 2, 3])],
            vec![coalition(&[1])],
            vec![coalition(&[1, 3])],
        ];
        let row = ranking_to_utilities(3, player(1), &tiers).unwrap();
        let lookup: std::collections::BTreeMap<_, _> =
            row.into_iter().map(|(c, v)| (c.mask(), v)).collect();
        assert_eq!(lookup[&coalition(&[1, 2]).mask()], rational_int(2));
        assert_eq!(lookup[&coalition(&[1, 2, 3]).mask()], rational_int(2));
        assert_eq!(lookup[&coalition(&[1]).mask()], rational_int(1));
        assert_eq!(lookup[&coalition(&[1, 3]).mask()], rational_int(0));

        // A single tier of everything maps to all zeros.
        let all: Vec<Coalition> =
            subsets_containing(coalition(&[1, 2]), player(1)).unwrap().collect();
        let row = ranking_to_utilities(2, player(1), &[all]).unwrap();
        assert!(row.iter().all(|(_, v)| v == &rational_int(0)));

        // Example 5, player 3's tiers.
        let tiers = vec![
            vec![coalition(&[1, 3]), coalition(&[2, 3])],
            vec![coalition(&[1, 2, 3])],
            vec![coalition(&[3])],
        ];
        let row = ranking_to_utilities(3, player(3), &tiers).unwrap();
        let lookup: std::collections::BTreeMap<_, _> =
            row.into_iter().map(|(c, v)| (c.mask(), v)).collect();
        assert_eq!(lookup[&coalition(&[1, 3]).mask()], rational_int(2));
        assert_eq!(lookup[&coalition(&[2, 3]).mask()], rational_int(2));
        assert_eq!(lookup[&coalition(&[1, 2, 3]).mask()], rational_int(1));
        assert_eq!(lookup[&coalition(&[3]).mask()], rational_int(0));
    }

    #[test]
    fn ranking_tiers_validate() {
        let missing = ranking_to_utilities(3, player(1), &[vec![coalition(&[1])]]);
        assert!(matches!(missing, Err(GameError::MissingEntry { .. })));

        let duplicated = ranking_to_utilities(
            2,
            player(1),
            &[vec![coalition(&[1])], vec![coalition(&[1]), coalition(&[1, 2])]],
        );
        assert!(matches!(duplicated, Err(GameError::DuplicateEntry { .. })));
    }
}

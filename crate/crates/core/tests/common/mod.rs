//! Helpers shared by the integration test suites.

use hedonica::games::GameRepr;
use hedonica::generator::{GeneratorKind, GeneratorSpec, generate};
use hedonica::model::{Coalition, Partition, PlayerId};

#[allow(dead_code)]
pub fn coalition(ids: &[u32]) -> Coalition {
    Coalition::from_ids(ids).unwrap()
}

#[allow(dead_code)]
pub fn player(id: u32) -> PlayerId {
    PlayerId::new(id).unwrap()
}

#[allow(dead_code)]
pub fn parse(text: &str, n: u32) -> Partition {
    Partition::parse(text, n).unwrap()
}

/// Bell numbers B(0..=upto) by the Bell-triangle recurrence: an oracle
/// independent of the partition enumerator.
#[allow(dead_code)]
pub fn bell_numbers(upto: usize) -> Vec<u128> {
    let mut bell = vec![1u128];
    let mut row = vec![1u128];
    for _ in 1..=upto {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        bell.push(next[0]);
        row = next;
    }
    bell
}

/// `count` seeded games cycling through the generator kinds, with `n` drawn
/// from `1..=max_n`.
#[allow(dead_code)]
pub fn random_games(count: u64, max_n: u32, lo: i64, hi: i64) -> Vec<GameRepr> {
    (0..count)
        .map(|seed| {
            let kind = GeneratorKind::ALL[(seed % GeneratorKind::ALL.len() as u64) as usize];
            let n = (seed % max_n as u64) as u32 + 1;
            generate(&GeneratorSpec {
                kind,
                n,
                seed,
                lo,
                hi,
            })
            .unwrap()
        })
        .collect()
}

/// `count` seeded games of one kind, with `n` drawn from `1..=max_n`.
#[allow(dead_code)]
pub fn random_games_of(
    kind: GeneratorKind,
    count: u64,
    max_n: u32,
    lo: i64,
    hi: i64,
) -> Vec<GameRepr> {
    (0..count)
        .map(|seed| {
            let n = (seed % max_n as u64) as u32 + 1;
            generate(&GeneratorSpec {
                kind,
                n,
                seed: seed.wrapping_mul(0x9e3779b9) + 17,
                lo,
                hi,
            })
            .unwrap()
        })
        .collect()
}

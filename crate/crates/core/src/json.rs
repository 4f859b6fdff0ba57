//! The JSON instance format.
//!
//! One object per game: `{"n": int, "kind": string, ...}` with a
//! kind-specific payload:
//! - `"utilities"`: map player id -> map coalition-key -> value
//! - `"additively_separable"`: `"v"` as a row-major n*n matrix
//! - `"subset_additive"`: `"v"` as per-player coalition-key maps
//! - `"subset_neutral"`, `"common_ranking"`: `"w"` as a coalition-key map
//! - `"neutrally_anonymous"`: `"f"` as an array of length n
//! - `"anonymous"`: `"g"` as an n*n array of per-player size scores
//!
//! A coalition-key is the ascending member list joined by commas, e.g.
//! `"1,3"`. Values are JSON integers or strings holding an integer, a finite
//! decimal, or a `p/q` ratio. Non-integer JSON number literals are rejected:
//! they would pass through floating point and lose exactness.

use crate::games::{
    AdditivelySeparable, Anonymous, CommonRanking, GameError, GameRepr, NeutrallyAnonymous,
    SubsetAdditive, SubsetNeutral, UtilityTable,
};
use crate::model::{Coalition, ModelError, PlayerId};
use crate::rational::{Rational, RationalParseError, parse_rational};
use num_traits::ToPrimitive;
use serde_json::{Map, Value, json};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rational(#[from] RationalParseError),
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{field}`: expected {expected}")]
    WrongType {
        field: &'static str,
        expected: &'static str,
    },
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error(
        "non-integer number {0}: write decimals and ratios as strings (e.g. \"0.5\", \"1/3\") \
         to keep values exact"
    )]
    InexactNumber(f64),
    #[error("duplicate key for coalition {0}")]
    DuplicateKey(String),
    #[error("invalid player key `{0}`")]
    InvalidPlayerKey(String),
}

fn rational_to_value(r: &Rational) -> Value {
    if r.is_integer()
        && let Some(i) = r.numer().to_i64()
    {
        return json!(i);
    }
    Value::String(r.to_string())
}

fn value_to_rational(v: &Value) -> Result<Rational, JsonError> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(crate::rational::rational_int(i))
            } else if let Some(u) = num.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(JsonError::InexactNumber(num.as_f64().unwrap_or(f64::NAN)))
            }
        }
        Value::String(s) => Ok(parse_rational(s)?),
        _ => Err(JsonError::WrongType {
            field: "value",
            expected: "an integer or a numeric string",
        }),
    }
}

fn coalition_map(entries: impl Iterator<Item = (Coalition, Value)>) -> Value {
    let mut map = Map::new();
    for (c, v) in entries {
        map.insert(c.to_string(), v);
    }
    Value::Object(map)
}

/// Serializes a game to the instance schema.
pub fn to_value(game: &GameRepr) -> Result<Value, JsonError> {
    let n = game.n();
    let kind = game.kind().name();
    let payload = match game {
        GameRepr::UtilityTable(g) => {
            let mut players = Map::new();
            for player in game.players() {
                players.insert(
                    player.to_string(),
                    coalition_map(g.row(player).map(|(c, v)| (c, rational_to_value(v)))),
                );
            }
            ("utilities", Value::Object(players))
        }
        GameRepr::SubsetAdditive(g) => {
            let mut players = Map::new();
            for player in game.players() {
                players.insert(
                    player.to_string(),
                    coalition_map(g.row(player).map(|(c, v)| (c, rational_to_value(v)))),
                );
            }
            ("v", Value::Object(players))
        }
        GameRepr::AdditivelySeparable(g) => {
            let rows: Vec<Value> = g
                .matrix()
                .iter()
                .map(|row| Value::Array(row.iter().map(rational_to_value).collect()))
                .collect();
            ("v", Value::Array(rows))
        }
        GameRepr::SubsetNeutral(g) => {
            let entries = g.entries()?;
            (
                "w",
                coalition_map(entries.iter().map(|(c, v)| (*c, rational_to_value(v)))),
            )
        }
        GameRepr::CommonRanking(g) => (
            "w",
            coalition_map(g.entries().map(|(c, v)| (c, rational_to_value(v)))),
        ),
        GameRepr::NeutrallyAnonymous(g) => (
            "f",
            Value::Array(g.values().iter().map(rational_to_value).collect()),
        ),
        GameRepr::Anonymous(g) => {
            let rows: Vec<Value> = g
                .rows()
                .iter()
                .map(|row| Value::Array(row.iter().map(rational_to_value).collect()))
                .collect();
            ("g", Value::Array(rows))
        }
    };
    Ok(json!({ "n": n, "kind": kind, payload.0: payload.1 }))
}

pub fn to_string_pretty(game: &GameRepr) -> Result<String, JsonError> {
    Ok(serde_json::to_string_pretty(&to_value(game)?)?)
}

fn get<'v>(obj: &'v Map<String, Value>, field: &'static str) -> Result<&'v Value, JsonError> {
    obj.get(field).ok_or(JsonError::MissingField(field))
}

fn parse_coalition_key(key: &str) -> Result<Coalition, JsonError> {
    Ok(key.parse::<Coalition>()?)
}

fn parse_weight_map(v: &Value, field: &'static str) -> Result<Vec<(Coalition, Rational)>, JsonError> {
    let obj = v.as_object().ok_or(JsonError::WrongType {
        field,
        expected: "a map from coalition keys to values",
    })?;
    let mut seen = std::collections::BTreeSet::new();
    let mut entries = Vec::new();
    for (key, value) in obj {
        let coalition = parse_coalition_key(key)?;
        if !seen.insert(coalition.mask()) {
            return Err(JsonError::DuplicateKey(coalition.to_string()));
        }
        entries.push((coalition, value_to_rational(value)?));
    }
    Ok(entries)
}

fn parse_player_table(
    v: &Value,
    field: &'static str,
) -> Result<Vec<(PlayerId, Coalition, Rational)>, JsonError> {
    let obj = v.as_object().ok_or(JsonError::WrongType {
        field,
        expected: "a map from player ids to coalition maps",
    })?;
    let mut entries = Vec::new();
    for (player_key, row) in obj {
        let id: u32 = player_key
            .trim()
            .parse()
            .map_err(|_| JsonError::InvalidPlayerKey(player_key.clone()))?;
        let player = PlayerId::new(id)?;
        let mut seen = std::collections::BTreeSet::new();
        let row = row.as_object().ok_or(JsonError::WrongType {
            field,
            expected: "a map from coalition keys to values",
        })?;
        for (key, value) in row {
            let coalition = parse_coalition_key(key)?;
            if !seen.insert(coalition.mask()) {
                return Err(JsonError::DuplicateKey(format!("{player}:{coalition}")));
            }
            entries.push((player, coalition, value_to_rational(value)?));
        }
    }
    Ok(entries)
}

fn parse_matrix(v: &Value, field: &'static str) -> Result<Vec<Vec<Rational>>, JsonError> {
    let rows = v.as_array().ok_or(JsonError::WrongType {
        field,
        expected: "an array of rows",
    })?;
    rows.iter()
        .map(|row| {
            let cells = row.as_array().ok_or(JsonError::WrongType {
                field,
                expected: "an array of values per row",
            })?;
            cells.iter().map(value_to_rational).collect()
        })
        .collect()
}

/// Parses a game from the instance schema.
pub fn from_value(value: &Value) -> Result<GameRepr, JsonError> {
    let obj = value.as_object().ok_or(JsonError::WrongType {
        field: "instance",
        expected: "a JSON object",
    })?;
    let n_raw = get(obj, "n")?.as_u64().ok_or(JsonError::WrongType {
        field: "n",
        expected: "a positive integer",
    })?;
    if n_raw == 0 || n_raw > crate::model::MAX_PLAYERS as u64 {
        return Err(JsonError::Model(ModelError::TooManyPlayers {
            n: n_raw.min(u32::MAX as u64) as u32,
            max: crate::model::MAX_PLAYERS,
        }));
    }
    let n = n_raw as u32;
    let kind = get(obj, "kind")?.as_str().ok_or(JsonError::WrongType {
        field: "kind",
        expected: "a string",
    })?;
    let game = match kind {
        "utilities" => {
            let entries = parse_player_table(get(obj, "utilities")?, "utilities")?;
            GameRepr::UtilityTable(UtilityTable::from_entries(n, entries)?)
        }
        "subset_additive" => {
            let entries = parse_player_table(get(obj, "v")?, "v")?;
            GameRepr::SubsetAdditive(SubsetAdditive::from_entries(n, entries)?)
        }
        "additively_separable" => {
            let v = parse_matrix(get(obj, "v")?, "v")?;
            if v.len() != n as usize {
                return Err(JsonError::Game(GameError::Dimension {
                    what: format!("expected {n} rows, got {}", v.len()),
                }));
            }
            GameRepr::AdditivelySeparable(AdditivelySeparable::from_matrix(v)?)
        }
        "subset_neutral" => {
            let entries = parse_weight_map(get(obj, "w")?, "w")?;
            GameRepr::SubsetNeutral(SubsetNeutral::from_entries(n, entries)?)
        }
        "common_ranking" => {
            let entries = parse_weight_map(get(obj, "w")?, "w")?;
            GameRepr::CommonRanking(CommonRanking::from_entries(n, entries)?)
        }
        "neutrally_anonymous" => {
            let f = get(obj, "f")?.as_array().ok_or(JsonError::WrongType {
                field: "f",
                expected: "an array of length n",
            })?;
            if f.len() != n as usize {
                return Err(JsonError::Game(GameError::Dimension {
                    what: format!("expected {n} values in f, got {}", f.len()),
                }));
            }
            let values = f.iter().map(value_to_rational).collect::<Result<_, _>>()?;
            GameRepr::NeutrallyAnonymous(NeutrallyAnonymous::from_values(values)?)
        }
        "anonymous" => {
            let g = parse_matrix(get(obj, "g")?, "g")?;
            if g.len() != n as usize {
                return Err(JsonError::Game(GameError::Dimension {
                    what: format!("expected {n} rows in g, got {}", g.len()),
                }));
            }
            GameRepr::Anonymous(Anonymous::from_rows(g)?)
        }
        other => return Err(JsonError::UnknownKind(other.to_string())),
    };
    if game.n() != n {
        return Err(JsonError::Game(GameError::Dimension {
            what: format!("payload describes {} players, n says {n}", game.n()),
        }));
    }
    Ok(game)
}

pub fn from_str(text: &str) -> Result<GameRepr, JsonError> {
    let value: Value = serde_json::from_str(text)?;
    from_value(&value)
}

//! File formats: Bayesian/normal-form game descriptions, strategy profiles,
//! and joint priors, all as UTF-8 JSON with rationals travelling as strings
//! (`"5/16"`) so nothing ever rounds.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::classical::{BayesianGame, MixedProfile, PureProfile};
use crate::error::{Error, Result};
use crate::prob::{Dist, Kernel};
use crate::rational;
use crate::value::{FiniteSet, Value};

/// On-disk description of a Bayesian game. Normal-form games are the
/// single-type special case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameFile {
    pub players: Vec<String>,
    pub types: BTreeMap<String, Vec<String>>,
    pub actions: BTreeMap<String, Vec<String>>,
    pub prior: Vec<PriorEntry>,
    pub utilities: Vec<UtilityEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PriorEntry {
    pub types: BTreeMap<String, String>,
    pub p: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UtilityEntry {
    pub types: BTreeMap<String, String>,
    pub actions: BTreeMap<String, String>,
    pub u: BTreeMap<String, String>,
}

/// On-disk strategy profile: player → type label → action label → weight.
pub type ProfileFile = BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>;

/// On-disk joint prior over a hidden space and an observation space, used by
/// the posterior-update command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PriorFile {
    pub theta: Vec<String>,
    pub observation: Vec<String>,
    pub weights: Vec<PriorWeight>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PriorWeight {
    pub theta: String,
    pub x: String,
    pub p: String,
}

pub fn parse_game(path: &Path) -> Result<BayesianGame> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_game_str(&text)
}

pub fn parse_game_str(text: &str) -> Result<BayesianGame> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed game file: {e}")))?;
    game_from_file(&file)
}

/// Look up each player's labelled space, erroring with the field path.
fn player_spaces(
    players: &[String],
    table: &BTreeMap<String, Vec<String>>,
    field: &str,
) -> Result<Vec<FiniteSet>> {
    let mut out = Vec::new();
    for p in players {
        let labels = table.get(p).ok_or_else(|| {
            Error::validation(field, format!("missing entry for player {p:?}"))
        })?;
        if labels.is_empty() {
            return Err(Error::validation(
                format!("{field}.{p}"),
                "empty label list",
            ));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::validation(
                format!("{field}.{p}"),
                "duplicate label",
            ));
        }
        out.push(FiniteSet::atoms(labels.clone()));
    }
    Ok(out)
}

fn labelled_profile(
    players: &[String],
    spaces: &[FiniteSet],
    entry: &BTreeMap<String, String>,
    field: &str,
) -> Result<Vec<Value>> {
    for key in entry.keys() {
        if !players.contains(key) {
            return Err(Error::validation(field, format!("unknown player {key:?}")));
        }
    }
    let mut out = Vec::new();
    for (i, p) in players.iter().enumerate() {
        let label = entry.get(p).ok_or_else(|| {
            Error::validation(field, format!("missing entry for player {p:?}"))
        })?;
        let v = Value::atom(label.clone());
        if !spaces[i].contains(&v) {
            return Err(Error::validation(
                format!("{field}.{p}"),
                format!("unknown label {label:?}"),
            ));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn game_from_file(file: &GameFile) -> Result<BayesianGame> {
    if file.players.is_empty() {
        return Err(Error::validation("players", "at least one player required"));
    }
    let types = player_spaces(&file.players, &file.types, "types")?;
    let actions = player_spaces(&file.players, &file.actions, "actions")?;

    let mut prior = BTreeMap::new();
    for (i, entry) in file.prior.iter().enumerate() {
        let profile = labelled_profile(&file.players, &types, &entry.types, &format!("prior[{i}]"))?;
        let p = rational::parse(&entry.p)
            .map_err(|e| Error::validation(format!("prior[{i}].p"), e.to_string()))?;
        if prior.insert(profile, p).is_some() {
            return Err(Error::validation(
                format!("prior[{i}]"),
                "duplicate type profile",
            ));
        }
    }

    let mut utilities = BTreeMap::new();
    for (i, entry) in file.utilities.iter().enumerate() {
        let field = format!("utilities[{i}]");
        let t = labelled_profile(&file.players, &types, &entry.types, &field)?;
        let a = labelled_profile(&file.players, &actions, &entry.actions, &field)?;
        let mut us = Vec::new();
        for p in &file.players {
            let raw = entry.u.get(p).ok_or_else(|| {
                Error::validation(format!("{field}.u"), format!("missing utility for {p:?}"))
            })?;
            us.push(
                rational::parse(raw)
                    .map_err(|e| Error::validation(format!("{field}.u.{p}"), e.to_string()))?,
            );
        }
        if utilities.insert((a, t), us).is_some() {
            return Err(Error::validation(field, "duplicate utility cell"));
        }
    }

    BayesianGame::new(file.players.clone(), types, actions, prior, utilities)
}

pub fn game_to_file(game: &BayesianGame) -> GameFile {
    let players = game.players().to_vec();
    let label = |v: &Value| v.text();
    let types: BTreeMap<String, Vec<String>> = players
        .iter()
        .zip(game.types())
        .map(|(p, space)| (p.clone(), space.elements().iter().map(label).collect()))
        .collect();
    let actions: BTreeMap<String, Vec<String>> = players
        .iter()
        .zip(game.actions())
        .map(|(p, space)| (p.clone(), space.elements().iter().map(label).collect()))
        .collect();

    let type_grid = crate::value::cartesian_product(
        &game.types().iter().map(FiniteSet::elements).collect::<Vec<_>>(),
    );
    let mut prior = Vec::new();
    for profile in &type_grid {
        let p = game.prior_weight(profile);
        if p != rational::zero() {
            prior.push(PriorEntry {
                types: players
                    .iter()
                    .cloned()
                    .zip(profile.iter().map(label))
                    .collect(),
                p: rational::to_string(&p),
            });
        }
    }

    let action_grid = crate::value::cartesian_product(
        &game.actions().iter().map(FiniteSet::elements).collect::<Vec<_>>(),
    );
    let mut utilities = Vec::new();
    for t in &type_grid {
        for a in &action_grid {
            let mut u = BTreeMap::new();
            for (i, p) in players.iter().enumerate() {
                u.insert(
                    p.clone(),
                    rational::to_string(&game.utility(a, t, i).expect("total grid")),
                );
            }
            utilities.push(UtilityEntry {
                types: players.iter().cloned().zip(t.iter().map(label)).collect(),
                actions: players.iter().cloned().zip(a.iter().map(label)).collect(),
                u,
            });
        }
    }

    GameFile {
        players,
        types,
        actions,
        prior,
        utilities,
    }
}

pub fn parse_profile(path: &Path, game: &BayesianGame) -> Result<MixedProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_profile_str(&text, game)
}

pub fn parse_profile_str(text: &str, game: &BayesianGame) -> Result<MixedProfile> {
    let file: ProfileFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed profile file: {e}")))?;
    profile_from_file(&file, game)
}

pub fn profile_from_file(file: &ProfileFile, game: &BayesianGame) -> Result<MixedProfile> {
    let mut strategies = Vec::new();
    for (i, player) in game.players().iter().enumerate() {
        let per_type = file.get(player).ok_or_else(|| {
            Error::validation("profile", format!("missing player {player:?}"))
        })?;
        let actions = game.actions()[i].clone();
        let mut table = BTreeMap::new();
        for t in game.types()[i].elements() {
            let row = per_type.get(&t.text()).ok_or_else(|| {
                Error::validation(
                    format!("profile.{player}"),
                    format!("missing type {:?}", t.text()),
                )
            })?;
            let mut weights = BTreeMap::new();
            for (action_label, weight) in row {
                let a = Value::atom(action_label.clone());
                if !actions.contains(&a) {
                    return Err(Error::validation(
                        format!("profile.{player}.{}", t.text()),
                        format!("unknown action {action_label:?}"),
                    ));
                }
                weights.insert(
                    a,
                    rational::parse(weight).map_err(|e| {
                        Error::validation(
                            format!("profile.{player}.{}.{action_label}", t.text()),
                            e.to_string(),
                        )
                    })?,
                );
            }
            let dist = Dist::from_weights(actions.clone(), weights).map_err(|e| {
                Error::validation(format!("profile.{player}.{}", t.text()), e.to_string())
            })?;
            // A profile row must already be normalized; from_weights rescales,
            // so verify the stated weights actually summed to 1.
            let stated: rational::Rational = row
                .values()
                .map(|w| rational::parse(w))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum();
            if stated != rational::one() {
                return Err(Error::validation(
                    format!("profile.{player}.{}", t.text()),
                    format!("weights sum to {}, not 1", rational::to_string(&stated)),
                ));
            }
            table.insert(t, dist);
        }
        strategies.push(Kernel::new(game.types()[i].clone(), actions, table)?);
    }
    Ok(MixedProfile { strategies })
}

pub fn profile_to_file(game: &BayesianGame, s: &MixedProfile) -> ProfileFile {
    let mut out = ProfileFile::new();
    for (i, player) in game.players().iter().enumerate() {
        let mut per_type = BTreeMap::new();
        for t in game.types()[i].elements() {
            let d = s.strategies[i].apply(&t).expect("total kernel");
            let row: BTreeMap<String, String> = d
                .iter()
                .map(|(a, w)| (a.text(), rational::to_string(w)))
                .collect();
            per_type.insert(t.text(), row);
        }
        out.insert(player.clone(), per_type);
    }
    out
}

pub fn pure_profile_to_file(game: &BayesianGame, pure: &PureProfile) -> ProfileFile {
    let mut out = ProfileFile::new();
    for (i, player) in game.players().iter().enumerate() {
        let mut per_type = BTreeMap::new();
        for (t, a) in &pure[i] {
            per_type.insert(t.text(), BTreeMap::from([(a.text(), "1".to_string())]));
        }
        out.insert(player.clone(), per_type);
    }
    out
}

pub fn parse_prior(path: &Path) -> Result<Dist> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_prior_str(&text)
}

pub fn parse_prior_str(text: &str) -> Result<Dist> {
    let file: PriorFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed prior file: {e}")))?;
    let theta = FiniteSet::atoms(file.theta.clone());
    let obs = FiniteSet::atoms(file.observation.clone());
    let space = FiniteSet::product(&theta, &obs);
    let mut weights = BTreeMap::new();
    for (i, w) in file.weights.iter().enumerate() {
        let v = Value::pair(Value::atom(w.theta.clone()), Value::atom(w.x.clone()));
        if !space.contains(&v) {
            return Err(Error::validation(
                format!("weights[{i}]"),
                format!("unknown pair ({},{})", w.theta, w.x),
            ));
        }
        let p = rational::parse(&w.p)
            .map_err(|e| Error::validation(format!("weights[{i}].p"), e.to_string()))?;
        if weights.insert(v, p).is_some() {
            return Err(Error::validation(
                format!("weights[{i}]"),
                "duplicate pair",
            ));
        }
    }
    Dist::from_weights(space, weights)
        .map_err(|e| Error::validation("weights", e.to_string()))
}

/// `{"value": "weight"}` with values rendered in their text form.
pub fn dist_to_json(d: &Dist) -> Json {
    let map: BTreeMap<String, String> = d
        .iter()
        .map(|(v, w)| (v.text(), rational::to_string(w)))
        .collect();
    json!(map)
}

pub fn kernel_to_json(k: &Kernel) -> Json {
    let mut table = BTreeMap::new();
    for x in k.domain().elements() {
        table.insert(x.text(), dist_to_json(k.apply(&x).expect("total kernel")));
    }
    json!(table)
}

/// Interfaces, residual, and both kernel tables; used by golden tests.
pub fn lens_to_json(l: &crate::lens::Lens) -> Json {
    json!({
        "source": {
            "covariant": space_to_json(&l.source().covariant),
            "contravariant": space_to_json(&l.source().contravariant),
        },
        "target": {
            "covariant": space_to_json(&l.target().covariant),
            "contravariant": space_to_json(&l.target().contravariant),
        },
        "residual": space_to_json(l.residual()),
        "forward": kernel_to_json(l.forward()),
        "backward": kernel_to_json(l.backward()),
    })
}

pub fn context_to_json(c: &crate::context::Context) -> Json {
    json!({
        "theta": space_to_json(c.theta()),
        "history": dist_to_json(c.history()),
        "continuation": kernel_to_json(c.continuation()),
    })
}

/// Atoms as strings, numbers as `"n/d"` strings, pairs as two-element arrays.
pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Atom(a) => json!(a),
        Value::Num(r) => json!(rational::to_string(r)),
        Value::Pair(l, r) => json!([value_to_json(l), value_to_json(r)]),
    }
}

pub fn space_to_json(s: &FiniteSet) -> Json {
    json!(s.elements().iter().map(value_to_json).collect::<Vec<_>>())
}

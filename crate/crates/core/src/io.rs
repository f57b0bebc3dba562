//! JSON documents for games, imperfect arenas, strategies and verdicts. All
//! documents are written with sorted keys.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{Arena, MooreStrategy, NatureGame, Owner, Player};
use crate::graph::PointedGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<Owner>,
    pub priority: u32,
}

/// `{"vertices":[{"id","owner","priority"}],"edges":[[src,dst]],"initial"}`,
/// plus an optional free-form `provenance` block on derived games.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(String, String)>,
    pub initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaEDoc {
    pub from: String,
    pub action: String,
    pub to: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaADoc {
    pub from: String,
    pub to: Vec<String>,
}

/// Imperfect-information arena document. Vertices missing from
/// `observations` form singleton classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImperfectDoc {
    pub vertices: Vec<VertexDoc>,
    pub actions: Vec<String>,
    pub delta_e: Vec<DeltaEDoc>,
    pub delta_a: Vec<DeltaADoc>,
    #[serde(default)]
    pub observations: Vec<Vec<String>>,
    pub initial: String,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered by key, so a round trip through
    // `Value` sorts every object.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_game_doc(text: &str) -> Result<GameDoc> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_game(text: &str) -> Result<NatureGame> {
    NatureGame::from_doc(&parse_game_doc(text)?)
}

pub fn parse_imperfect_doc(text: &str) -> Result<ImperfectDoc> {
    Ok(serde_json::from_str(text)?)
}

/// A pointed graph from a game document; owners are ignored and may be absent.
pub fn graph_from_doc(doc: &GameDoc) -> Result<PointedGraph> {
    let mut d = doc.clone();
    for v in &mut d.vertices {
        v.owner.get_or_insert(Owner::Nature);
    }
    Ok(NatureGame::from_doc(&d)?.graph())
}

/// Strategy document: `up` lists only the entries that change memory, `move`
/// lists the player's moves per memory state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub player: Player,
    pub memory: Vec<String>,
    pub initial_memory: usize,
    pub up: Vec<UpDoc>,
    #[serde(rename = "move")]
    pub moves: Vec<MoveDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpDoc {
    pub memory: usize,
    pub vertex: String,
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveDoc {
    pub memory: usize,
    pub vertex: String,
    pub to: String,
}

pub fn strategy_to_doc(s: &MooreStrategy, arena: &impl Arena, labels: Option<&[String]>) -> StrategyDoc {
    let memory = (0..s.memory_size())
        .map(|m| labels.and_then(|l| l.get(m).cloned()).unwrap_or_else(|| m.to_string()))
        .collect();
    let mut up = Vec::new();
    let mut moves = Vec::new();
    for m in 0..s.memory_size() {
        for v in 0..arena.vertex_count() {
            if s.up(m, v) != m {
                up.push(UpDoc {
                    memory: m,
                    vertex: arena.id(v).to_string(),
                    next: s.up(m, v),
                });
            }
            if arena.owner(v) == s.player().owner() {
                if let Some(w) = s.next(m, v) {
                    moves.push(MoveDoc {
                        memory: m,
                        vertex: arena.id(v).to_string(),
                        to: arena.id(w).to_string(),
                    });
                }
            }
        }
    }
    StrategyDoc {
        player: s.player(),
        memory,
        initial_memory: s.initial_memory(),
        up,
        moves,
    }
}

pub fn strategy_from_doc(doc: &StrategyDoc, game: &NatureGame) -> Result<MooreStrategy> {
    let n = game.len();
    let size = doc.memory.len();
    let lookup = |id: &str| {
        game.index_of(id)
            .ok_or_else(|| Error::Format(format!("strategy mentions unknown vertex `{id}`")))
    };
    let mut up: Vec<Vec<usize>> = (0..size).map(|m| vec![m; n]).collect();
    let mut moves = vec![vec![None; n]; size];
    for u in &doc.up {
        if u.memory >= size {
            return Err(Error::Format(format!("memory index {} out of range", u.memory)));
        }
        up[u.memory][lookup(&u.vertex)?] = u.next;
    }
    for mv in &doc.moves {
        if mv.memory >= size {
            return Err(Error::Format(format!("memory index {} out of range", mv.memory)));
        }
        moves[mv.memory][lookup(&mv.vertex)?] = Some(lookup(&mv.to)?);
    }
    let s = MooreStrategy::new(doc.player, doc.initial_memory, up, moves)?;
    s.validate_for(game)?;
    Ok(s)
}

/// The machine-readable answer of every CLI command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub question: String,
    pub answer: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub provenance: Value,
}

impl Verdict {
    pub fn yes_no(question: impl Into<String>, yes: bool) -> Self {
        Verdict {
            question: question.into(),
            answer: Value::String(if yes { "yes" } else { "no" }.into()),
            witness: None,
            provenance: Value::Object(Default::default()),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Value::String("yes".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn keys_are_sorted() {
        let s = to_canonical_json(&fixtures::fig3().to_doc()).unwrap();
        let e = s.find("\"edges\"").unwrap();
        let i = s.find("\"initial\"").unwrap();
        let v = s.find("\"vertices\"").unwrap();
        assert!(e < i && i < v);
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"vertices":[{"id":"a","owner":"eloise","priority":0}],"edges":[["a","a"]],"initial":"a","extra":1}"#;
        assert!(parse_game(text).is_err());
        let text = r#"{"vertices":[{"id":"a","owner":"eloise","priority":0,"x":2}],"edges":[["a","a"]],"initial":"a"}"#;
        assert!(parse_game(text).is_err());
    }

    #[test]
    fn game_round_trip() {
        for g in [fixtures::fig3(), fixtures::fig5(), fixtures::t1(), fixtures::t2()] {
            let text = to_canonical_json(&g.to_doc()).unwrap();
            let back = parse_game(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(to_canonical_json(&back.to_doc()).unwrap(), text);
        }
    }

    #[test]
    fn strategy_round_trip() {
        let g = fixtures::fig5();
        let s = MooreStrategy::lowest(Player::Eloise, &g);
        let doc = strategy_to_doc(&s, &g, None);
        assert_eq!(strategy_from_doc(&doc, &g).unwrap(), s);
    }

    #[test]
    fn graph_docs_need_no_owners() {
        let text = r#"{"vertices":[{"id":"a","priority":1}],"edges":[["a","a"]],"initial":"a"}"#;
        let g = graph_from_doc(&parse_game_doc(text).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
    }
}

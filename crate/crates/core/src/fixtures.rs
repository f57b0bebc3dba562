//! The worked examples used as regression fixtures.

use crate::game::{GameBuilder, NatureGame, Owner};
use crate::imperfect::ImperfectArena;
use crate::io::{DeltaADoc, DeltaEDoc, ImperfectDoc, VertexDoc};

/// Two Nature vertices, complete graph; vertex 1 is the Büchi target.
pub fn fig3() -> NatureGame {
    GameBuilder::new()
        .vertex("1", Owner::Nature, 0)
        .vertex("2", Owner::Nature, 1)
        .edges("1", &["1", "2"])
        .edges("2", &["1", "2"])
        .initial("1")
        .build()
        .expect("fixture")
}

/// Abelard may delay arbitrarily long before handing over to Nature, who
/// either loses at once (vL) or passes to Eloise.
pub fn fig5() -> NatureGame {
    GameBuilder::new()
        .vertex("vA", Owner::Abelard, 0)
        .vertex("vN", Owner::Nature, 1)
        .vertex("vL", Owner::Eloise, 1)
        .vertex("vE", Owner::Eloise, 1)
        .vertex("vW", Owner::Eloise, 0)
        .edges("vA", &["vA", "vN"])
        .edges("vN", &["vL", "vE"])
        .edge("vE", "vN")
        .edge("vE", "vW")
        .edge("vL", "vL")
        .edge("vW", "vW")
        .initial("vA")
        .build()
        .expect("fixture")
}

/// Alternating one-player game whose only losing branch is (e n)^ω.
pub fn t1() -> NatureGame {
    GameBuilder::new()
        .vertex("e", Owner::Eloise, 1)
        .vertex("n", Owner::Nature, 1)
        .vertex("g", Owner::Eloise, 0)
        .vertex("m", Owner::Nature, 0)
        .edge("e", "n")
        .edges("n", &["e", "g"])
        .edge("g", "m")
        .edge("m", "g")
        .initial("e")
        .build()
        .expect("fixture")
}

/// Like [`t1`] but Nature can move into a losing trap.
pub fn t2() -> NatureGame {
    GameBuilder::new()
        .vertex("e", Owner::Eloise, 0)
        .vertex("n", Owner::Nature, 1)
        .vertex("b", Owner::Eloise, 1)
        .vertex("nb", Owner::Nature, 1)
        .edge("e", "n")
        .edges("n", &["e", "b"])
        .edge("b", "nb")
        .edge("nb", "b")
        .initial("e")
        .build()
        .expect("fixture")
}

/// Two Nature vertices, every priority 1, all four edges.
pub fn all_odd_clique() -> NatureGame {
    GameBuilder::new()
        .vertex("a", Owner::Nature, 1)
        .vertex("b", Owner::Nature, 1)
        .edges("a", &["a", "b"])
        .edges("b", &["a", "b"])
        .build()
        .expect("fixture")
}

fn fig7_doc(one_player: bool) -> ImperfectDoc {
    let eloise = ["v0", "v1", "v00", "v01", "v10", "v11", "f", "l"];
    let mut vertices = vec![VertexDoc {
        id: "v".into(),
        owner: Some(if one_player { Owner::Eloise } else { Owner::Abelard }),
        priority: 1,
    }];
    vertices.extend(eloise.iter().map(|id| VertexDoc {
        id: (*id).into(),
        owner: Some(Owner::Eloise),
        priority: u32::from(*id != "f"),
    }));
    let t = |from: &str, action: &str, to: &[&str]| DeltaEDoc {
        from: from.into(),
        action: action.into(),
        to: to.iter().map(|s| (*s).into()).collect(),
    };
    let mut delta_e = vec![
        t("v0", "#", &["v00", "v01"]),
        t("v1", "#", &["v10", "v11"]),
        t("v00", "0", &["f"]),
        t("v00", "N", &["f"]),
        t("v00", "1", &["l"]),
        t("v01", "0", &["f"]),
        t("v01", "1", &["l"]),
        t("v01", "N", &["l"]),
        t("v10", "1", &["f"]),
        t("v10", "0", &["l"]),
        t("v10", "N", &["l"]),
        t("v11", "1", &["f"]),
        t("v11", "N", &["f"]),
        t("v11", "0", &["l"]),
        t("f", "#", &["v"]),
        t("l", "#", &["v"]),
    ];
    let mut delta_a = Vec::new();
    if one_player {
        delta_e.push(t("v", "#", &["v0"]));
    } else {
        delta_a.push(DeltaADoc {
            from: "v".into(),
            to: vec!["v0".into(), "v1".into()],
        });
    }
    ImperfectDoc {
        vertices,
        actions: ["#", "0", "1", "N"].iter().map(|s| (*s).into()).collect(),
        delta_e,
        delta_a,
        observations: vec![
            vec!["v0".into(), "v1".into()],
            vec!["v00".into(), "v01".into(), "v10".into(), "v11".into()],
        ],
        initial: "v".into(),
    }
}

/// Abelard picks a bit, Nature a second one, and Eloise sees neither. She
/// reaches the Büchi target `f` by naming Abelard's bit, or by passing with
/// `N` when the two bits agree.
pub fn fig7() -> ImperfectArena {
    ImperfectArena::from_doc(&fig7_doc(false)).expect("fixture")
}

/// Fig. 7 with Abelard's move fixed to the left branch, so the arena has no
/// Abelard vertex.
pub fn fig7_one_player() -> ImperfectArena {
    ImperfectArena::from_doc(&fig7_doc(true)).expect("fixture")
}

pub fn fig7_document() -> ImperfectDoc {
    fig7_doc(false)
}

//! Graphviz rendering. Eloise vertices are circles, Abelard vertices boxes
//! and Nature vertices diamonds; gadget vertices of reduced games are
//! styled by role and flagged edges (obey, top) are dashed.

use std::fmt::Write as _;
use std::path::Path;

use crate::condition::Flag;
use crate::error::{Error, Result};
use crate::game::{Arena, NatureGame, Owner, Player};
use crate::parity::ParityGame;
use crate::reduced::{ReducedGame, Role};

fn shape(owner: Owner) -> &'static str {
    match owner {
        Owner::Eloise => "circle",
        Owner::Abelard => "box",
        Owner::Nature => "diamond",
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn header(out: &mut String, name: &str, initial: &str) {
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  __start [shape=point];");
    let _ = writeln!(out, "  __start -> {};", quote(initial));
}

pub fn game_to_dot(g: &NatureGame) -> String {
    let mut out = String::new();
    header(&mut out, "game", g.id(g.initial()));
    for v in 0..g.len() {
        let _ = writeln!(
            out,
            "  {} [shape={}, label={}];",
            quote(g.id(v)),
            shape(g.owners()[v]),
            quote(&format!("{}\\n{}", g.id(v), g.priorities()[v]))
        );
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -> {};", quote(g.id(u)), quote(g.id(v)));
    }
    out.push_str("}\n");
    out
}

pub fn parity_to_dot(p: &ParityGame) -> String {
    let mut out = String::new();
    header(&mut out, "parity", p.id(p.initial()));
    for v in 0..p.len() {
        let _ = writeln!(
            out,
            "  {} [shape={}, label={}];",
            quote(p.id(v)),
            shape(p.player(v).owner()),
            quote(&format!("{}\\n{}", p.id(v), p.priorities()[v]))
        );
    }
    for v in 0..p.len() {
        for &w in &p.adjacency()[v] {
            let _ = writeln!(out, "  {} -> {};", quote(p.id(v)), quote(p.id(w)));
        }
    }
    out.push_str("}\n");
    out
}

fn role_style(role: &Role) -> &'static str {
    match role {
        Role::Original(_) => "solid",
        Role::Start => "dotted",
        Role::AvoidChoice { .. } | Role::Distribution { .. } => "filled",
        Role::Budget { .. } => "rounded",
        Role::Query { .. } => "dashed",
        Role::Direction { top: true, .. } => "bold",
        Role::Direction { top: false, .. } => "filled",
    }
}

pub fn reduced_to_dot(r: &ReducedGame) -> String {
    let eg = &r.events;
    let mut out = String::new();
    header(&mut out, r.condition.name(), &eg.ids[eg.initial]);
    for v in 0..r.len() {
        let owner = match eg.owners[v] {
            Player::Eloise => Owner::Eloise,
            Player::Abelard => Owner::Abelard,
        };
        let role = &r.roles[v];
        let extra = if matches!(role, Role::Direction { top: true, .. }) {
            ", peripheries=2"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {} [shape={}, style={}, tooltip={}{}];",
            quote(&eg.ids[v]),
            shape(owner),
            role_style(role),
            quote(role.kind()),
            extra
        );
    }
    for v in 0..r.len() {
        for &(w, ev) in &eg.edges[v] {
            let mut attrs = Vec::new();
            if let Some(f) = ev.flag {
                attrs.push(format!("label={}", quote(f.name())));
                if matches!(f, Flag::Obey | Flag::Top) {
                    attrs.push("style=dashed".into());
                }
            }
            let attrs = if attrs.is_empty() {
                String::new()
            } else {
                format!(" [{}]", attrs.join(", "))
            };
            let _ = writeln!(out, "  {} -> {}{};", quote(&eg.ids[v]), quote(&eg.ids[w]), attrs);
        }
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::Io("empty output path".into()));
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

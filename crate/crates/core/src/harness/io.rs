//! Plain-text edge lists and JSON decompositions.
//!
//! ```text
//! # comments run to the end of the line
//! digraph 3
//! 0 1
//! 1 2 2
//! 2 0 1
//! ```
//!
//! The header is `digraph n` or `graph n`. Each edge line is `u v [m]`; a
//! missing `m` means one copy, and repeated lines add up.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DigraphBuilder, GraphBuilder, MultiDigraph, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "graph")]
pub enum AnyGraph {
    Directed(MultiDigraph),
    Undirected(Multigraph),
}

impl AnyGraph {
    pub fn n(&self) -> usize {
        match self {
            AnyGraph::Directed(d) => d.n(),
            AnyGraph::Undirected(g) => g.n(),
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, AnyGraph::Directed(_))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let (header, pairs): (&str, Vec<(usize, usize, u32)>) = match self {
            AnyGraph::Directed(d) => ("digraph", d.pairs().collect()),
            AnyGraph::Undirected(g) => ("graph", g.pairs().collect()),
        };
        out.push_str(&format!("{header} {}\n", self.n()));
        for (u, v, m) in pairs {
            if m == 1 {
                out.push_str(&format!("{u} {v}\n"));
            } else {
                out.push_str(&format!("{u} {v} {m}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl From<MultiDigraph> for AnyGraph {
    fn from(d: MultiDigraph) -> Self {
        AnyGraph::Directed(d)
    }
}

impl From<Multigraph> for AnyGraph {
    fn from(g: Multigraph) -> Self {
        AnyGraph::Undirected(g)
    }
}

enum Partial {
    Directed(DigraphBuilder),
    Undirected(GraphBuilder),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    if tok.starts_with('-') {
        return Err(parse_err(line, format!("negative {what} `{tok}`")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn parse(text: &str) -> Result<AnyGraph> {
    let mut builder: Option<Partial> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(b) = builder.as_mut() else {
            if toks.len() != 2 || !matches!(toks[0], "digraph" | "graph") {
                return Err(parse_err(line, "expected header `digraph n` or `graph n`"));
            }
            let n: usize = parse_int(line, toks[1], "vertex count")?;
            builder = Some(if toks[0] == "digraph" {
                Partial::Directed(DigraphBuilder::new(n))
            } else {
                Partial::Undirected(GraphBuilder::new(n))
            });
            continue;
        };
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(line, "expected `u v` or `u v m`"));
        }
        let u: usize = parse_int(line, toks[0], "vertex")?;
        let v: usize = parse_int(line, toks[1], "vertex")?;
        let m: u32 = match toks.get(2) {
            Some(t) => parse_int(line, t, "multiplicity")?,
            None => 1,
        };
        let added = match b {
            Partial::Directed(b) => b.add_copies(u, v, m).map(|_| ()),
            Partial::Undirected(b) => b.add_copies(u, v, m).map(|_| ()),
        };
        added.map_err(|e| parse_err(line, e.to_string()))?;
    }
    match builder {
        Some(Partial::Directed(b)) => Ok(AnyGraph::Directed(b.build())),
        Some(Partial::Undirected(b)) => Ok(AnyGraph::Undirected(b.build())),
        None => Err(parse_err(text.lines().count().max(1), "missing header")),
    }
}

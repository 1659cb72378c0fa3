//! Small simple graphs used as motif templates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Structural families with closed-form density routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotifFamily {
    /// Single edge; simultaneously `Path(2)` and `Star(2)`.
    Edge,
    Cycle(usize),
    /// One center joined to `v - 1` leaves; `v` counts all nodes.
    Star(usize),
    /// Path on `v` nodes.
    Path(usize),
}

/// Simple unweighted graph on nodes `0..v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MotifFile", into = "MotifFile")]
pub struct Motif {
    v: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MotifFile {
    v: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<MotifFile> for Motif {
    type Error = Error;
    fn try_from(f: MotifFile) -> Result<Self> {
        Motif::new(f.v, f.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Motif> for MotifFile {
    fn from(m: Motif) -> Self {
        MotifFile {
            v: m.v,
            edges: m.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl Motif {
    /// Validates and canonicalizes an edge list (pairs stored as `(min, max)`, sorted).
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(v: usize, edges: I) -> Result<Self> {
        if v == 0 {
            return Err(Error::Domain("motif needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= v || b >= v {
                return Err(Error::Domain(format!(
                    "edge ({a}, {b}) refers to a node outside 0..{v}"
                )));
            }
            if a == b {
                return Err(Error::Domain(format!("self-loop at node {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Domain(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Motif {
            v,
            edges: set.into_iter().collect(),
        })
    }

    pub fn edge() -> Self {
        Motif {
            v: 2,
            edges: vec![(0, 1)],
        }
    }

    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::Domain(format!("cycle length must be at least 3, got {len}")));
        }
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len)))
    }

    /// Star on `v` nodes: node 0 joined to nodes `1..v`.
    pub fn star(v: usize) -> Result<Self> {
        if v < 2 {
            return Err(Error::Domain(format!("star needs at least 2 nodes, got {v}")));
        }
        Self::new(v, (1..v).map(|i| (0, i)))
    }

    pub fn path(v: usize) -> Result<Self> {
        if v < 2 {
            return Err(Error::Domain(format!("path needs at least 2 nodes, got {v}")));
        }
        Self::new(v, (1..v).map(|i| (i - 1, i)))
    }

    pub fn complete(v: usize) -> Result<Self> {
        Self::new(v, (0..v).flat_map(|a| ((a + 1)..v).map(move |b| (a, b))))
    }

    /// Node count `v(F)`.
    pub fn nodes(&self) -> usize {
        self.v
    }

    /// Edge count `e(F)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.v];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.v];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Recognizes cycles, stars and paths up to isomorphism.
    pub fn family(&self) -> Option<MotifFamily> {
        let (v, e) = (self.v, self.edges.len());
        if v < 2 || !self.is_connected() {
            return None;
        }
        if v == 2 {
            return Some(MotifFamily::Edge);
        }
        let deg = self.degrees();
        let max = *deg.iter().max().unwrap();
        if e == v && deg.iter().all(|&d| d == 2) {
            return Some(MotifFamily::Cycle(v));
        }
        if e == v - 1 {
            if max == v - 1 {
                return Some(MotifFamily::Star(v));
            }
            if max <= 2 {
                return Some(MotifFamily::Path(v));
            }
        }
        None
    }
}

impl FromStr for Motif {
    type Err = Error;

    /// Parses `edge`, `C<n>`, `S<n>`, `P<n>`, `K<n>` (node counts) or a JSON
    /// object `{"v": .., "edges": [[a, b], ..]}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("edge") {
            return Ok(Motif::edge());
        }
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse {
                context: "motif".into(),
                detail: e.to_string(),
            });
        }
        let parse_err = || Error::Parse {
            context: "motif".into(),
            detail: format!("expected edge, C<n>, S<n>, P<n>, K<n> or a JSON motif, got {s:?}"),
        };
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(parse_err)?;
        let n: usize = chars.as_str().parse().map_err(|_| parse_err())?;
        match head.to_ascii_uppercase() {
            'C' => Motif::cycle(n),
            'S' => Motif::star(n),
            'P' => Motif::path(n),
            'K' => Motif::complete(n),
            _ => Err(parse_err()),
        }
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            Some(MotifFamily::Edge) => write!(f, "K2"),
            Some(MotifFamily::Cycle(n)) => write!(f, "C{n}"),
            Some(MotifFamily::Star(n)) => write!(f, "S{n}"),
            Some(MotifFamily::Path(n)) => write!(f, "P{n}"),
            None => {
                let file = MotifFile::from(self.clone());
                write!(f, "{}", serde_json::to_string(&file).map_err(|_| fmt::Error)?)
            }
        }
    }
}

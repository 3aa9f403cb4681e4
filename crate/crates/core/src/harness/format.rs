//! The line-oriented `.rc` instance format.
//!
//! ```text
//! space <name>
//! vertex <id> <x> <y>
//! edge <id> <id>
//! cycle <name> <id> <id> <id> ...
//! ribbon <name> outer=<cycle> inner=<cycle> [bridge=<id>:<id> ...]
//! adjacent <id> <id>
//! probe <name> pointwise <id> = <v> ...
//! probe <name> holistic <ribbon-or-cycle> = <v> ...
//! map <name> <id> -> <id>
//! ```
//!
//! `#` starts a comment. Declarations must follow the things they name.
//! `render` writes the canonical form: sections in the order above, blank
//! lines between sections, pointwise probe and map lines in vertex order.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use crate::complex::{CellComplex, Edge, Point2};
use crate::dynamics::VertexMap;
use crate::elemset::{Carrier, ElemSet};
use crate::proximity::{FeatureVector, HolisticEntry, ProbeAssignment, ProximitySpace};
use crate::scalar::Scalar;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeBody {
    /// One vector per vertex, in vertex order.
    Pointwise(Vec<FeatureVector>),
    /// `(ribbon or cycle name, vector)` in declaration order.
    Holistic(Vec<(String, FeatureVector)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeDecl {
    pub name: String,
    pub body: ProbeBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    /// Image of each vertex, in vertex order.
    pub targets: Vec<String>,
}

/// A parsed instance file.
#[derive(Debug, Clone)]
pub struct Document {
    pub complex: CellComplex,
    pub adjacent: Vec<(String, String)>,
    pub probes: Vec<ProbeDecl>,
    pub maps: Vec<MapDecl>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        render(self) == render(other)
    }
}

impl Document {
    pub fn new(complex: CellComplex) -> Self {
        Document {
            complex,
            adjacent: Vec::new(),
            probes: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.complex.name
    }

    pub fn carrier(&self) -> Result<Carrier, HarnessError> {
        Ok(Carrier::new(
            self.complex.vertices().iter().map(|v| v.id.clone()),
        )?)
    }

    pub fn probe(&self, name: &str) -> Option<&ProbeDecl> {
        self.probes.iter().find(|p| p.name == name)
    }

    pub fn map_decl(&self, name: &str) -> Option<&MapDecl> {
        self.maps.iter().find(|m| m.name == name)
    }

    /// Vertex ids of a named ribbon or cycle.
    pub fn named_set(&self, name: &str) -> Option<BTreeSet<String>> {
        if let Some(r) = self.complex.ribbon(name) {
            return Some(r.vertex_ids());
        }
        self.complex
            .cycle(name)
            .map(|c| c.vertices().iter().cloned().collect())
    }

    /// Resolves a ribbon or cycle name, or a comma-separated id list (with
    /// optional braces), to a subset of the carrier.
    pub fn resolve_set(&self, spec: &str) -> Result<ElemSet, HarnessError> {
        let carrier = self.carrier()?;
        if let Some(ids) = self.named_set(spec) {
            return Ok(carrier.set_of(ids)?);
        }
        let inner = spec.trim().trim_start_matches('{').trim_end_matches('}');
        let ids: Vec<&str> = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        carrier
            .set_of(ids)
            .map_err(|_| HarnessError::UnknownSet(spec.to_string()))
    }

    /// The proximity space on the vertices: spatial nearness is shared
    /// vertices plus the declared `adjacent` pairs, and the probe is the
    /// named one.
    pub fn space(&self, probe: Option<&str>) -> Result<ProximitySpace, HarnessError> {
        let carrier = self.carrier()?;
        let pairs: Vec<(usize, usize)> = self
            .adjacent
            .iter()
            .map(|(a, b)| {
                (
                    carrier.index_of(a).expect("checked"),
                    carrier.index_of(b).expect("checked"),
                )
            })
            .collect();
        let mut space = ProximitySpace::new(carrier.clone()).with_adjacency(pairs)?;
        if let Some(name) = probe {
            let decl = self
                .probe(name)
                .ok_or_else(|| HarnessError::UnknownProbe(name.to_string()))?;
            let assignment = match &decl.body {
                ProbeBody::Pointwise(values) => ProbeAssignment::pointwise(name, values.clone())?,
                ProbeBody::Holistic(entries) => {
                    let mut out = Vec::new();
                    for (set_name, value) in entries {
                        let ids = self
                            .named_set(set_name)
                            .ok_or_else(|| HarnessError::UnknownSet(set_name.clone()))?;
                        out.push(HolisticEntry {
                            name: set_name.clone(),
                            set: carrier.set_of(ids)?,
                            value: value.clone(),
                        });
                    }
                    ProbeAssignment::holistic(name, out)?
                }
            };
            space = space.with_probe(assignment)?;
        }
        Ok(space)
    }

    /// The first declared probe, if any.
    pub fn default_probe(&self) -> Option<&str> {
        self.probes.first().map(|p| p.name.as_str())
    }

    pub fn map(&self, name: &str) -> Result<VertexMap, HarnessError> {
        let decl = self
            .map_decl(name)
            .ok_or_else(|| HarnessError::UnknownMap(name.to_string()))?;
        let carrier = self.carrier()?;
        let table = decl
            .targets
            .iter()
            .map(|t| carrier.index_of(t).expect("checked"))
            .collect();
        Ok(VertexMap::endo(table)?)
    }
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    col: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: line[..s].chars().count() + 1,
        });
    }
    out
}

struct Parser {
    doc: Option<Document>,
    line: usize,
    /// Pointwise probes under construction, with their first line.
    pointwise: HashMap<String, (usize, Vec<Option<FeatureVector>>)>,
    maps: HashMap<String, (usize, Vec<Option<String>>)>,
    /// Order in which probes and maps were first declared.
    probe_order: Vec<String>,
    holistic: HashMap<String, Vec<(String, FeatureVector)>>,
    map_order: Vec<String>,
}

impl Parser {
    fn err(&self, col: usize, msg: impl fmt::Display) -> ParseError {
        ParseError {
            line: self.line,
            col,
            msg: msg.to_string(),
        }
    }

    fn expect_args(&self, toks: &[Token<'_>], n: usize, usage: &str) -> Result<(), ParseError> {
        if toks.len() != n + 1 {
            let col = toks.get(n + 1).or(toks.last()).map_or(1, |t| t.col);
            return Err(self.err(col, format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn doc(&mut self, col: usize) -> Result<&mut Document, ParseError> {
        let line = self.line;
        self.doc.as_mut().ok_or(ParseError {
            line,
            col,
            msg: "no space declared".into(),
        })
    }

    fn vertex_index(&mut self, tok: &Token<'_>) -> Result<usize, ParseError> {
        let col = tok.col;
        let found = self
            .doc(col)?
            .complex
            .vertices()
            .iter()
            .position(|v| v.id == tok.text);
        found.ok_or_else(|| self.err(col, format!("unknown vertex `{}`", tok.text)))
    }

    fn scalar(&self, tok: &Token<'_>) -> Result<Scalar, ParseError> {
        tok.text.parse().map_err(|e| self.err(tok.col, e))
    }

    fn vector(&self, toks: &[Token<'_>], col: usize) -> Result<FeatureVector, ParseError> {
        if toks.is_empty() {
            return Err(self.err(col, "expected at least one value after `=`"));
        }
        Ok(FeatureVector(
            toks.iter()
                .map(|t| self.scalar(t))
                .collect::<Result<_, _>>()?,
        ))
    }

    fn statement(&mut self, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &toks[0];
        match head.text {
            "space" => {
                self.expect_args(toks, 1, "space <name>")?;
                if self.doc.is_some() {
                    return Err(self.err(head.col, "space already declared"));
                }
                self.doc = Some(Document::new(CellComplex::new(toks[1].text)));
            }
            "vertex" => {
                self.expect_args(toks, 3, "vertex <id> <x> <y>")?;
                let p = Point2::new(self.scalar(&toks[2])?, self.scalar(&toks[3])?);
                let line = self.line;
                let doc = self.doc(head.col)?;
                doc.complex
                    .add_vertex(toks[1].text, p)
                    .map_err(|e| ParseError {
                        line,
                        col: toks[1].col,
                        msg: e.to_string(),
                    })?;
            }
            "edge" => {
                self.expect_args(toks, 2, "edge <id> <id>")?;
                let line = self.line;
                let doc = self.doc(head.col)?;
                doc.complex
                    .add_edge(toks[1].text, toks[2].text)
                    .map_err(|e| ParseError {
                        line,
                        col: toks[1].col,
                        msg: e.to_string(),
                    })?;
            }
            "cycle" => {
                if toks.len() < 3 {
                    return Err(self.err(head.col, "expected `cycle <name> <id> <id> <id> ...`"));
                }
                let ids: Vec<&str> = toks[2..].iter().map(|t| t.text).collect();
                let line = self.line;
                let doc = self.doc(head.col)?;
                doc.complex
                    .add_cycle(toks[1].text, &ids)
                    .map_err(|e| ParseError {
                        line,
                        col: toks[1].col,
                        msg: e.to_string(),
                    })?;
            }
            "ribbon" => self.ribbon(toks)?,
            "adjacent" => {
                self.expect_args(toks, 2, "adjacent <id> <id>")?;
                self.vertex_index(&toks[1])?;
                self.vertex_index(&toks[2])?;
                if toks[1].text == toks[2].text {
                    return Err(self.err(toks[2].col, "a vertex cannot be adjacent to itself"));
                }
                let pair = (toks[1].text.to_string(), toks[2].text.to_string());
                self.doc(head.col)?.adjacent.push(pair);
            }
            "probe" => self.probe(toks)?,
            "map" => {
                self.expect_args(toks, 4, "map <name> <id> -> <id>")?;
                if toks[3].text != "->" {
                    return Err(self.err(toks[3].col, "expected `->`"));
                }
                let from = self.vertex_index(&toks[2])?;
                self.vertex_index(&toks[4])?;
                let n = self.doc(head.col)?.complex.vertices().len();
                let line = self.line;
                let name = toks[1].text.to_string();
                if !self.maps.contains_key(&name) {
                    self.map_order.push(name.clone());
                }
                let (_, table) = self
                    .maps
                    .entry(name)
                    .or_insert_with(|| (line, vec![None; n]));
                if table.len() != n {
                    return Err(self.err(head.col, "vertices declared after a map began"));
                }
                if table[from].replace(toks[4].text.to_string()).is_some() {
                    return Err(
                        self.err(toks[2].col, format!("map assigns `{}` twice", toks[2].text))
                    );
                }
            }
            other => return Err(self.err(head.col, format!("unknown declaration `{other}`"))),
        }
        Ok(())
    }

    fn ribbon(&mut self, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &toks[0];
        if toks.len() < 2 {
            return Err(self.err(
                head.col,
                "expected `ribbon <name> outer=<cycle> inner=<cycle> ...`",
            ));
        }
        let (mut outer, mut inner, mut bridges) = (None, None, Vec::new());
        for t in &toks[2..] {
            let Some((key, value)) = t.text.split_once('=') else {
                return Err(self.err(t.col, format!("expected key=value, got `{}`", t.text)));
            };
            match key {
                "outer" if outer.is_none() => outer = Some(value),
                "inner" if inner.is_none() => inner = Some(value),
                "bridge" => {
                    let (a, b) = value
                        .split_once(':')
                        .ok_or_else(|| self.err(t.col, "expected bridge=<id>:<id>"))?;
                    bridges.push(Edge::new(a, b).map_err(|e| self.err(t.col, e))?);
                }
                "outer" | "inner" => return Err(self.err(t.col, format!("`{key}` given twice"))),
                _ => return Err(self.err(t.col, format!("unknown ribbon key `{key}`"))),
            }
        }
        let (Some(outer), Some(inner)) = (outer, inner) else {
            return Err(self.err(head.col, "a ribbon needs outer= and inner="));
        };
        let line = self.line;
        let doc = self.doc(head.col)?;
        doc.complex
            .add_ribbon(toks[1].text, outer, inner, &bridges)
            .map_err(|e| ParseError {
                line,
                col: toks[1].col,
                msg: e.to_string(),
            })?;
        Ok(())
    }

    fn probe(&mut self, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &toks[0];
        if toks.len() < 6 || toks[4].text != "=" {
            let col = toks.get(4).map_or(head.col, |t| t.col);
            return Err(self.err(
                col,
                "expected `probe <name> <pointwise|holistic> <target> = <v> ...`",
            ));
        }
        let name = toks[1].text.to_string();
        let value = self.vector(&toks[5..], toks[4].col)?;
        let kind = toks[2].text;
        let other_kind = match kind {
            "pointwise" => self.holistic.contains_key(&name),
            "holistic" => self.pointwise.contains_key(&name),
            _ => return Err(self.err(toks[2].col, format!("unknown probe kind `{kind}`"))),
        };
        if other_kind {
            return Err(self.err(
                toks[2].col,
                format!("probe `{name}` mixes pointwise and holistic lines"),
            ));
        }
        if !self.pointwise.contains_key(&name) && !self.holistic.contains_key(&name) {
            self.probe_order.push(name.clone());
        }
        let arity = match kind {
            "pointwise" => self
                .pointwise
                .get(&name)
                .and_then(|(_, v)| v.iter().flatten().next())
                .map(|v| v.len()),
            _ => self
                .holistic
                .get(&name)
                .and_then(|v| v.first())
                .map(|(_, v)| v.len()),
        };
        if arity.is_some_and(|a| a != value.len()) {
            return Err(self.err(
                toks[5].col,
                format!(
                    "probe `{name}` expects {} values per line",
                    arity.unwrap_or(0)
                ),
            ));
        }
        if kind == "pointwise" {
            let at = self.vertex_index(&toks[3])?;
            let n = self.doc(head.col)?.complex.vertices().len();
            let line = self.line;
            let (_, table) = self
                .pointwise
                .entry(name)
                .or_insert_with(|| (line, vec![None; n]));
            if table.len() != n {
                return Err(self.err(head.col, "vertices declared after a probe began"));
            }
            if table[at].replace(value).is_some() {
                return Err(self.err(
                    toks[3].col,
                    format!("probe assigns `{}` twice", toks[3].text),
                ));
            }
        } else {
            let set = toks[3].text.to_string();
            if self.doc(head.col)?.named_set(&set).is_none() {
                return Err(self.err(toks[3].col, format!("unknown ribbon or cycle `{set}`")));
            }
            let entries = self.holistic.entry(name).or_default();
            if entries.iter().any(|(s, _)| *s == set) {
                return Err(self.err(toks[3].col, format!("probe assigns `{set}` twice")));
            }
            entries.push((set, value));
        }
        Ok(())
    }

    fn finish(mut self) -> Result<Document, ParseError> {
        let Some(mut doc) = self.doc.take() else {
            return Err(ParseError {
                line: self.line.max(1),
                col: 1,
                msg: "no space declared".into(),
            });
        };
        let ids: Vec<String> = doc
            .complex
            .vertices()
            .iter()
            .map(|v| v.id.clone())
            .collect();
        for name in &self.probe_order {
            let body = if let Some((line, table)) = self.pointwise.remove(name) {
                let mut values = Vec::with_capacity(table.len());
                for (i, v) in table.into_iter().enumerate() {
                    values.push(v.ok_or_else(|| ParseError {
                        line,
                        col: 1,
                        msg: format!("probe `{name}` has no value for `{}`", ids[i]),
                    })?);
                }
                ProbeBody::Pointwise(values)
            } else {
                ProbeBody::Holistic(self.holistic.remove(name).unwrap_or_default())
            };
            doc.probes.push(ProbeDecl {
                name: name.clone(),
                body,
            });
        }
        for name in &self.map_order {
            let (line, table) = self.maps.remove(name).expect("recorded");
            let mut targets = Vec::with_capacity(table.len());
            for (i, t) in table.into_iter().enumerate() {
                targets.push(t.ok_or_else(|| ParseError {
                    line,
                    col: 1,
                    msg: format!("map `{name}` has no image for `{}`", ids[i]),
                })?);
            }
            doc.maps.push(MapDecl {
                name: name.clone(),
                targets,
            });
        }
        Ok(doc)
    }
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser {
        doc: None,
        line: 0,
        pointwise: HashMap::new(),
        maps: HashMap::new(),
        probe_order: Vec::new(),
        holistic: HashMap::new(),
        map_order: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let line = raw.split_once('#').map_or(raw, |(code, _)| code);
        let toks = tokens(line);
        if !toks.is_empty() {
            p.statement(&toks)?;
        }
    }
    p.line = p.line.max(1);
    p.finish()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text of a document.
pub fn render(doc: &Document) -> String {
    let c = &doc.complex;
    let mut sections: Vec<String> = vec![format!("space {}\n", c.name)];
    let mut push = |s: String| {
        if !s.is_empty() {
            sections.push(s);
        }
    };

    let mut s = String::new();
    for v in c.vertices() {
        writeln!(s, "vertex {} {} {}", v.id, v.position.x, v.position.y).unwrap();
    }
    push(s);

    let mut s = String::new();
    for e in c.edges() {
        let (a, b) = e.endpoints();
        writeln!(s, "edge {a} {b}").unwrap();
    }
    push(s);

    let mut s = String::new();
    for cy in c.cycles() {
        writeln!(s, "cycle {} {}", cy.name, cy.vertices().join(" ")).unwrap();
    }
    push(s);

    let mut s = String::new();
    for r in c.ribbons() {
        write!(
            s,
            "ribbon {} outer={} inner={}",
            r.name, r.outer.name, r.inner.name
        )
        .unwrap();
        for b in r.bridges() {
            let (a, z) = b.endpoints();
            let (o, i) = if r.outer.contains(a) { (a, z) } else { (z, a) };
            write!(s, " bridge={o}:{i}").unwrap();
        }
        s.push('\n');
    }
    push(s);

    let mut s = String::new();
    for (a, b) in &doc.adjacent {
        writeln!(s, "adjacent {a} {b}").unwrap();
    }
    push(s);

    for p in &doc.probes {
        let mut s = String::new();
        match &p.body {
            ProbeBody::Pointwise(values) => {
                for (v, value) in c.vertices().iter().zip(values) {
                    writeln!(
                        s,
                        "probe {} pointwise {} = {}",
                        p.name,
                        v.id,
                        join(&value.0)
                    )
                    .unwrap();
                }
            }
            ProbeBody::Holistic(entries) => {
                for (set, value) in entries {
                    writeln!(s, "probe {} holistic {} = {}", p.name, set, join(&value.0)).unwrap();
                }
            }
        }
        push(s);
    }

    for m in &doc.maps {
        let mut s = String::new();
        for (v, t) in c.vertices().iter().zip(&m.targets) {
            writeln!(s, "map {} {} -> {}", m.name, v.id, t).unwrap();
        }
        push(s);
    }
    sections.join("\n")
}

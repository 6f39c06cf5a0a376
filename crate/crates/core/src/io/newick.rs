//! Extended Newick for X-networks and plain Newick with repeated labels for
//! MUL-trees.
//!
//! A hybrid vertex is written once with its subtree, `(...)#H1`, and
//! referenced elsewhere as `#H1`. A tagged vertex with a name and no
//! children, `b#H1`, is read as a hybrid whose only child is the leaf `b`.
//! Branch lengths, comments and names of interior vertices are ignored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::canonical::{subtree_ids, Interner};
use crate::model::{Label, ModelError, MulTree, PseudoDag, VertexId, XNetwork};
use crate::validate::{validate, Claim, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("not a valid {claim}: {report}{}", locate(.locations))]
    Invalid {
        claim: Claim,
        report: ValidationReport,
        /// Where each offending vertex occurs in the text.
        locations: Vec<(VertexId, Position)>,
    },
}

fn locate(locs: &[(VertexId, Position)]) -> String {
    if locs.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = locs.iter().map(|(v, p)| format!("{v} at {p}")).collect();
    format!(" ({})", parts.join(", "))
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.col,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            at: self.pos(),
            message: message.into(),
        })
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and `[...]` comments.
    fn skip(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek_raw() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('[') => {
                    let at = self.pos();
                    while let Some(c) = self.bump() {
                        if c == ']' {
                            break;
                        }
                        if self.peek_raw().is_none() && c != ']' {
                            return Err(ParseError::Syntax {
                                at,
                                message: "unterminated comment".into(),
                            });
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn peek(&mut self) -> Result<Option<char>, ParseError> {
        self.skip()?;
        Ok(self.peek_raw())
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek()? {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn name(&mut self) -> Result<Option<String>, ParseError> {
        match self.peek()? {
            Some('\'') => {
                let at = self.pos();
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('\'') if self.peek_raw() == Some('\'') => {
                            self.bump();
                            s.push('\'');
                        }
                        Some('\'') => return Ok(Some(s)),
                        Some(c) => s.push(c),
                        None => {
                            return Err(ParseError::Syntax {
                                at,
                                message: "unterminated quoted label".into(),
                            })
                        }
                    }
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(c) = self.peek_raw() {
                    if is_special(c) || c.is_whitespace() {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok((!s.is_empty()).then_some(s))
            }
        }
    }

    /// `:length` (possibly several colon fields); the values are ignored.
    fn skip_lengths(&mut self) -> Result<(), ParseError> {
        while self.peek()? == Some(':') {
            self.bump();
            self.skip()?;
            while let Some(c) = self.peek_raw() {
                if is_special(c) || c.is_whitespace() {
                    break;
                }
                self.bump();
            }
        }
        Ok(())
    }
}

fn is_special(c: char) -> bool {
    matches!(c, '(' | ')' | ',' | ';' | ':' | '[' | ']' | '\'' | '#')
}

#[derive(Default)]
struct Builder {
    arcs: Vec<(u32, u32)>,
    count: u32,
    labels: BTreeMap<VertexId, Label>,
    at: Vec<Position>,
    tags: HashMap<String, (u32, bool)>,
}

impl Builder {
    fn vertex(&mut self, at: Position) -> u32 {
        self.count += 1;
        self.at.push(at);
        self.count - 1
    }
}

/// Parses one `;`-terminated subtree and returns its vertex.
fn subtree(lx: &mut Lexer, b: &mut Builder, hybrids: bool) -> Result<u32, ParseError> {
    let start = {
        lx.skip()?;
        lx.pos()
    };
    let mut children = Vec::new();
    if lx.peek()? == Some('(') {
        lx.bump();
        loop {
            children.push(subtree(lx, b, hybrids)?);
            match lx.peek()? {
                Some(',') => {
                    lx.bump();
                }
                Some(')') => {
                    lx.bump();
                    break;
                }
                Some(c) => return lx.err(format!("expected ',' or ')', found '{c}'")),
                None => return lx.err("unexpected end of input inside '('"),
            }
        }
    }
    let name = lx.name()?;
    let tag = if lx.peek()? == Some('#') {
        if !hybrids {
            return lx.err("hybrid tags are not allowed in a MUL-tree");
        }
        lx.bump();
        match lx.name()? {
            Some(t) => Some(t),
            None => return lx.err("empty hybrid tag"),
        }
    } else {
        None
    };
    lx.skip_lengths()?;

    let v = match &tag {
        None => b.vertex(start),
        Some(t) => match b.tags.get(t).copied() {
            Some((v, defined)) => {
                if defined && (!children.is_empty() || name.is_some()) {
                    return Err(ParseError::Syntax {
                        at: start,
                        message: format!("hybrid #{t} is given a subtree twice"),
                    });
                }
                if !defined && (!children.is_empty() || name.is_some()) {
                    b.tags.insert(t.clone(), (v, true));
                    b.at[v as usize] = start;
                }
                v
            }
            None => {
                let v = b.vertex(start);
                b.tags.insert(t.clone(), (v, !children.is_empty() || name.is_some()));
                v
            }
        },
    };
    for c in children.iter() {
        b.arcs.push((v, *c));
    }
    match (name, children.is_empty(), tag.is_some()) {
        (Some(n), true, false) => {
            b.labels.insert(VertexId(v), n);
        }
        (Some(n), true, true) => {
            // labelled hybrid leaf: hang the leaf below the hybrid vertex
            let leaf = b.vertex(start);
            b.arcs.push((v, leaf));
            b.labels.insert(VertexId(leaf), n);
        }
        _ => {}
    }
    Ok(v)
}

fn parse_doc(text: &str, hybrids: bool) -> Result<(PseudoDag, BTreeMap<VertexId, Label>, Vec<Position>), ParseError> {
    let mut lx = Lexer::new(text);
    let mut b = Builder::default();
    if lx.peek()?.is_none() {
        return lx.err("empty input");
    }
    let root = subtree(&mut lx, &mut b, hybrids)?;
    lx.expect(';')?;
    if let Some(c) = lx.peek()? {
        return lx.err(format!("unexpected '{c}' after ';'"));
    }
    for (t, (_, defined)) in &b.tags {
        if !*defined {
            return Err(ParseError::Syntax {
                at: lx.pos(),
                message: format!("hybrid #{t} is never given a subtree"),
            });
        }
    }
    let g = PseudoDag::from_arcs(b.count as usize, root, b.arcs.iter().copied());
    Ok((g, b.labels, b.at))
}

fn offending(report: &ValidationReport) -> Vec<VertexId> {
    report
        .violations
        .iter()
        .filter_map(|v| {
            use crate::validate::Violation::*;
            match v {
                MissingRoot { root } | RootHasParent { root } => Some(*root),
                ExtraSource { vertex }
                | Cycle { vertex }
                | Unreachable { vertex }
                | TreeVertexOutdegree { vertex, .. }
                | HybridOutdegree { vertex, .. }
                | LeafDegree { vertex, .. }
                | UnlabelledLeaf { vertex }
                | LabelOnNonLeaf { vertex, .. }
                | HybridIndegree { vertex, .. }
                | HybridInTree { vertex }
                | UnaryVertex { vertex } => Some(*vertex),
                ParallelArc { tail, .. } => Some(*tail),
                DuplicateLabel { vertices, .. } => vertices.first().copied(),
                LabelOnMissingVertex { .. } | NoTaxa => None,
            }
        })
        .collect()
}

fn invalid(claim: Claim, report: ValidationReport, at: &[Position]) -> ParseError {
    let locations = offending(&report)
        .into_iter()
        .filter(|v| v.index() < at.len())
        .map(|v| (v, at[v.index()]))
        .collect();
    ParseError::Invalid {
        claim,
        report,
        locations,
    }
}

/// Parses extended Newick into an X-network, numbered breadth-first from
/// the root.
pub fn parse_enewick(text: &str) -> Result<XNetwork, ParseError> {
    let (g, labels, at) = parse_doc(text, true)?;
    let report = validate(&g, &labels, Claim::XNetwork);
    if !report.is_valid() {
        return Err(invalid(Claim::XNetwork, report, &at));
    }
    Ok(XNetwork::new(g, labels).expect("validated").compacted())
}

/// Parses Newick with repeated labels into a MUL-tree.
pub fn parse_mulnewick(text: &str) -> Result<MulTree, ParseError> {
    let (g, labels, at) = parse_doc(text, false)?;
    let report = validate(&g, &labels, Claim::MulTree);
    if !report.is_valid() {
        return Err(invalid(Claim::MulTree, report, &at));
    }
    match MulTree::new(g, labels) {
        Ok(m) => Ok(m.compacted()),
        Err(ModelError::Invalid { claim, report }) => Err(invalid(claim, report, &at)),
        Err(e) => unreachable!("{e}"),
    }
}

/// Quotes a label when it would not survive unquoted.
pub fn quote_label(l: &str) -> String {
    let plain = !l.is_empty() && !l.chars().any(|c| is_special(c) || c.is_whitespace());
    if plain {
        l.to_string()
    } else {
        format!("'{}'", l.replace('\'', "''"))
    }
}

/// Prints extended Newick. Children are ordered by (smallest taxon below,
/// number of taxa below, structural rank); hybrids are numbered `#H1, #H2,
/// ...` in order of first appearance, with the subtree written at that
/// appearance. The rank only depends on the shape below a vertex, so
/// printing a reparsed network gives the same text.
pub fn print_enewick(n: &XNetwork) -> String {
    let g = n.graph();
    let order = g.topological_order().expect("acyclic");
    let mut sets: Vec<BTreeSet<&Label>> = vec![BTreeSet::new(); g.id_bound()];
    let mut height = vec![0usize; g.id_bound()];
    for &v in order.iter().rev() {
        if let Some(l) = n.label(v) {
            sets[v.index()].insert(l);
        }
        for &c in g.children(v) {
            let s = sets[c.index()].clone();
            sets[v.index()].extend(s);
            height[v.index()] = height[v.index()].max(height[c.index()] + 1);
        }
    }
    let rank = structural_ranks(n, &height);
    let mut keys: Vec<Option<(Label, usize, usize)>> = vec![None; g.id_bound()];
    for v in g.vertices() {
        let s = &sets[v.index()];
        let first = s.iter().next().map(|l| (*l).clone()).unwrap_or_default();
        keys[v.index()] = Some((first, s.len(), rank[v.index()]));
    }
    let mut tags: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = String::new();
    write_vertex(n, g.root(), &keys, &mut tags, &mut out);
    out.push(';');
    out
}

/// Ranks vertices level by level (by height) on the tuple (label, hybrid,
/// sorted child ranks), so equal ranks mean isomorphic sub-DAGs once they
/// are unfolded.
fn structural_ranks(n: &XNetwork, height: &[usize]) -> Vec<usize> {
    let g = n.graph();
    let mut by_height: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        by_height.entry(height[v.index()]).or_default().push(v);
    }
    let mut rank = vec![0usize; g.id_bound()];
    let mut next = 0;
    for vs in by_height.values() {
        let sig = |v: VertexId| {
            let mut kids: Vec<usize> = g.children(v).iter().map(|c| rank[c.index()]).collect();
            kids.sort_unstable();
            (n.label(v).cloned(), g.is_hybrid(v), kids)
        };
        let sigs: Vec<_> = vs.iter().map(|&v| sig(v)).collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        for (&v, s) in vs.iter().zip(&sigs) {
            rank[v.index()] = next + distinct.binary_search(s).expect("present");
        }
        next += distinct.len();
    }
    rank
}

fn write_vertex(
    n: &XNetwork,
    v: VertexId,
    keys: &[Option<(Label, usize, usize)>],
    tags: &mut BTreeMap<VertexId, usize>,
    out: &mut String,
) {
    let g = n.graph();
    let hybrid = g.is_hybrid(v);
    if hybrid {
        if let Some(k) = tags.get(&v) {
            out.push_str(&format!("#H{k}"));
            return;
        }
        let k = tags.len() + 1;
        tags.insert(v, k);
    }
    if let Some(l) = n.label(v) {
        out.push_str(&quote_label(l));
    } else {
        let mut kids = g.children(v).to_vec();
        kids.sort_by(|a, b| keys[a.index()].cmp(&keys[b.index()]));
        out.push('(');
        for (i, c) in kids.into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_vertex(n, c, keys, tags, out);
        }
        out.push(')');
    }
    if hybrid {
        out.push_str(&format!("#H{}", tags[&v]));
    }
}

/// Prints a MUL-tree with children ordered by canonical code, so isomorphic
/// MUL-trees print identically.
pub fn print_mulnewick(m: &MulTree) -> String {
    let mut interner = Interner::default();
    let ids = subtree_ids(m.tree(), m.labels(), &mut interner);
    let mut out = String::new();
    write_mul(m, m.root(), &ids, &interner, &mut out);
    out.push(';');
    out
}

fn write_mul(m: &MulTree, v: VertexId, ids: &[u32], interner: &Interner, out: &mut String) {
    if let Some(l) = m.label(v) {
        out.push_str(&quote_label(l));
        return;
    }
    let mut kids = m.tree().children(v).to_vec();
    kids.sort_by(|a, b| interner.code(ids[a.index()]).cmp(interner.code(ids[b.index()])));
    out.push('(');
    for (i, c) in kids.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_mul(m, c, ids, interner, out);
    }
    out.push(')');
}

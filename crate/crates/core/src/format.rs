//! Text, JSON and Graphviz forms of quivers and presentations.
//!
//! Text format, one declaration per line (or separated by `;`), `#` starts a comment:
//!
//! ```text
//! vertices 1 2 3
//! arrow a: 1 -> 2
//! arrow b: 2 -> 3
//! rel zero: a b
//! rel comm: a b = c d          # a b - c d, optionally `= 2*c d`
//! rel general: a b - 2*c d + e f
//! ```

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::linalg::Coeff;
use crate::quiver::Quiver;
use crate::relations::{AlgebraPresentation, Path, Relation, RelationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    Colon,
    Eq,
    Plus,
    Minus,
    Star,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '/')
}

fn tokenize(stmt: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = stmt.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let col = col0 + stmt[..off].chars().count();
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c == '-' {
            if chars.get(i + 1).map(|p| p.1) == Some('>') {
                out.push((Tok::Arrow, col));
                i += 2;
            } else {
                out.push((Tok::Minus, col));
                i += 1;
            }
        } else if is_word_char(c) {
            let start = off;
            while i < chars.len() && is_word_char(chars[i].1) {
                i += 1;
            }
            let end = chars.get(i).map_or(stmt.len(), |p| p.0);
            out.push((Tok::Word(stmt[start..end].to_string()), col));
        } else {
            return Err(ParseError::new(
                line,
                col,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    Ok(out)
}

struct Stmt {
    line: usize,
    end_col: usize,
    toks: Vec<(Tok, usize)>,
}

impl Stmt {
    fn err_at(&self, idx: usize, msg: impl Into<String>) -> ParseError {
        let col = self.toks.get(idx).map_or(self.end_col, |t| t.1);
        ParseError::new(self.line, col, msg)
    }

    fn word(&self, idx: usize, what: &str) -> Result<&str, ParseError> {
        match self.toks.get(idx) {
            Some((Tok::Word(w), _)) => Ok(w),
            _ => Err(self.err_at(idx, format!("expected {what}"))),
        }
    }

    fn expect(&self, idx: usize, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.toks.get(idx) {
            Some((t, _)) if *t == tok => Ok(()),
            _ => Err(self.err_at(idx, format!("expected {what}"))),
        }
    }
}

fn statements(text: &str) -> Result<Vec<Stmt>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut col = 1;
        for piece in content.split(';') {
            let toks = tokenize(piece, line, col)?;
            let width = piece.chars().count();
            if !toks.is_empty() {
                out.push(Stmt {
                    line,
                    end_col: col + width,
                    toks,
                });
            }
            col += width + 1;
        }
    }
    Ok(out)
}

fn parse_coeff(s: &str) -> Option<Coeff> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().ok()?;
    let den: num_bigint::BigInt = den.parse().ok()?;
    (!den.is_zero()).then(|| Coeff::new(num, den))
}

/// Parses a quiver with relations. Commutativity relations are normalized to
/// coefficients `(1, -1)`.
pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, ParseError> {
    let mut q = Quiver::with_vertices(0);
    let mut labels: Vec<String> = Vec::new();
    let mut rel_stmts = Vec::new();
    for st in statements(text)? {
        let head = st.word(0, "`vertices`, `arrow` or `rel`")?;
        match head {
            "vertices" => {
                if st.toks.len() == 1 {
                    return Err(st.err_at(1, "expected vertex names"));
                }
                for i in 1..st.toks.len() {
                    let name = st.word(i, "vertex name")?;
                    if labels.iter().any(|l| l == name) {
                        return Err(st.err_at(i, format!("duplicate vertex `{name}`")));
                    }
                    labels.push(name.to_string());
                }
                q = rebuild_vertices(&q, &labels);
            }
            "arrow" => {
                let name = st.word(1, "arrow name")?;
                st.expect(2, Tok::Colon, "`:`")?;
                let src = st.word(3, "source vertex")?;
                st.expect(4, Tok::Arrow, "`->`")?;
                let tgt = st.word(5, "target vertex")?;
                if st.toks.len() > 6 {
                    return Err(st.err_at(6, "unexpected token after arrow"));
                }
                let s = q
                    .vertex_by_name(src)
                    .ok_or_else(|| st.err_at(3, format!("unknown vertex `{src}`")))?;
                let t = q
                    .vertex_by_name(tgt)
                    .ok_or_else(|| st.err_at(5, format!("unknown vertex `{tgt}`")))?;
                q.add_arrow(name, s, t)
                    .map_err(|e| st.err_at(1, e.to_string()))?;
            }
            "rel" => rel_stmts.push(st),
            other => return Err(st.err_at(0, format!("unknown declaration `{other}`"))),
        }
    }
    let relations = rel_stmts
        .iter()
        .map(|st| parse_relation(&q, st))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgebraPresentation::new(q, relations))
}

fn rebuild_vertices(q: &Quiver, labels: &[String]) -> Quiver {
    let mut out = Quiver::with_vertices(labels.len());
    for (i, l) in labels.iter().enumerate() {
        // A name equal to its own index is the unlabelled rendering of that vertex.
        if *l != i.to_string() {
            out.set_label(i, Some(l.clone()));
        }
    }
    for a in q.arrows() {
        out.add_arrow(a.name.clone(), a.source, a.target)
            .expect("existing arrow stays valid");
    }
    out
}

fn parse_relation(q: &Quiver, st: &Stmt) -> Result<Relation, ParseError> {
    let kind = st.word(1, "relation kind (`zero`, `comm` or `general`)")?;
    st.expect(2, Tok::Colon, "`:`")?;
    let mut i = 3;
    let mut terms: Vec<(Coeff, Path)> = Vec::new();
    let mut sign = Coeff::one();
    let mut first = true;
    loop {
        if i >= st.toks.len() {
            return Err(st.err_at(i, "expected a path"));
        }
        if first && kind == "general" && st.toks[i].0 == Tok::Minus {
            sign = -sign;
            i += 1;
        }
        first = false;
        // Optional `coef *` prefix.
        let mut coeff = sign.clone();
        if let (Some((Tok::Word(w), _)), Some((Tok::Star, _))) =
            (st.toks.get(i), st.toks.get(i + 1))
        {
            let c = parse_coeff(w).ok_or_else(|| st.err_at(i, format!("bad coefficient `{w}`")))?;
            if c.is_zero() {
                return Err(st.err_at(i, "zero coefficient"));
            }
            coeff *= c;
            i += 2;
        }
        let start = i;
        let mut names = Vec::new();
        while let Some((Tok::Word(w), _)) = st.toks.get(i) {
            names.push(w.as_str());
            i += 1;
        }
        if names.is_empty() {
            return Err(st.err_at(i, "expected a path"));
        }
        let path = Path::from_names(q, &names).map_err(|e| st.err_at(start, e.to_string()))?;
        terms.push((coeff, path));
        match (kind, st.toks.get(i).map(|t| &t.0)) {
            (_, None) => break,
            ("comm", Some(Tok::Eq)) if terms.len() == 1 => {
                sign = -Coeff::one();
                i += 1;
            }
            ("general", Some(Tok::Plus)) => {
                sign = Coeff::one();
                i += 1;
            }
            ("general", Some(Tok::Minus)) => {
                sign = -Coeff::one();
                i += 1;
            }
            _ => return Err(st.err_at(i, "unexpected token in relation")),
        }
    }
    let expected = match kind {
        "zero" => Some(1),
        "comm" => Some(2),
        "general" => None,
        other => return Err(st.err_at(1, format!("unknown relation kind `{other}`"))),
    };
    if let Some(n) = expected {
        if terms.len() != n {
            return Err(st.err_at(3, format!("`{kind}` relation needs {n} path(s)")));
        }
    }
    let rel = Relation::new(q, terms).map_err(|e| st.err_at(3, e.to_string()))?;
    if expected.is_some() && rel.kind() == RelationKind::General {
        return Err(st.err_at(3, "relation kind mismatch"));
    }
    Ok(rel)
}

pub fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    parse_presentation(text).map(|p| p.quiver)
}

pub fn quiver_to_text(q: &Quiver) -> String {
    let mut s = String::from("vertices");
    for v in 0..q.vertex_count() {
        s.push(' ');
        s.push_str(&q.vertex_name(v));
    }
    s.push('\n');
    for a in q.arrows() {
        s.push_str(&format!(
            "arrow {}: {} -> {}\n",
            a.name,
            q.vertex_name(a.source),
            q.vertex_name(a.target)
        ));
    }
    s
}

pub fn presentation_to_text(p: &AlgebraPresentation) -> String {
    let mut s = quiver_to_text(&p.quiver);
    for r in &p.relations {
        s.push_str(&r.display(&p.quiver));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<usize, String>>,
    pub arrows: Vec<ArrowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub kind: RelationKind,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    #[serde(flatten)]
    pub quiver: QuiverJson,
    pub relations: Vec<RelationJson>,
}

pub fn quiver_to_json(q: &Quiver) -> QuiverJson {
    let labels: BTreeMap<usize, String> = q
        .vertices()
        .iter()
        .filter_map(|v| v.label.clone().map(|l| (v.id, l)))
        .collect();
    QuiverJson {
        vertices: (0..q.vertex_count()).collect(),
        labels: (!labels.is_empty()).then_some(labels),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowJson {
                name: a.name.clone(),
                source: a.source,
                target: a.target,
            })
            .collect(),
    }
}

pub fn quiver_from_json(j: &QuiverJson) -> Result<Quiver, crate::error::QuiverError> {
    if j.vertices.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(crate::error::QuiverError::UnknownVertex(
            "vertex ids must be 0..n in order".into(),
        ));
    }
    let mut q = Quiver::with_vertices(j.vertices.len());
    if let Some(labels) = &j.labels {
        for (&v, l) in labels {
            if v >= q.vertex_count() {
                return Err(crate::error::QuiverError::UnknownVertex(v.to_string()));
            }
            q.set_label(v, Some(l.clone()));
        }
    }
    for a in &j.arrows {
        q.add_arrow(a.name.clone(), a.source, a.target)?;
    }
    Ok(q)
}

pub fn relation_to_json(q: &Quiver, r: &Relation) -> RelationJson {
    RelationJson {
        kind: r.kind(),
        terms: r
            .terms()
            .iter()
            .map(|(c, p)| TermJson {
                coeff: c.to_string(),
                path: p.names(q).into_iter().map(String::from).collect(),
            })
            .collect(),
    }
}

pub fn presentation_to_json(p: &AlgebraPresentation) -> PresentationJson {
    PresentationJson {
        quiver: quiver_to_json(&p.quiver),
        relations: p
            .relations
            .iter()
            .map(|r| relation_to_json(&p.quiver, r))
            .collect(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph; arrows named in `dashed` are drawn dashed.
pub fn quiver_to_dot(q: &Quiver, dashed: &HashSet<String>) -> String {
    let mut s = String::from("digraph {\n");
    for v in 0..q.vertex_count() {
        s.push_str(&format!(
            "  v{v} [label=\"{}\"];\n",
            dot_escape(&q.vertex_name(v))
        ));
    }
    for a in q.arrows() {
        let style = if dashed.contains(&a.name) {
            ", style=dashed"
        } else {
            ""
        };
        s.push_str(&format!(
            "  v{} -> v{} [label=\"{}\"{style}];\n",
            a.source,
            a.target,
            dot_escape(&a.name)
        ));
    }
    s.push_str("}\n");
    s
}

pub fn serialize_quiver(q: &Quiver, format: Format) -> String {
    match format {
        Format::Text => quiver_to_text(q),
        Format::Json => {
            serde_json::to_string_pretty(&quiver_to_json(q)).expect("serializable") + "\n"
        }
        Format::Dot => quiver_to_dot(q, &HashSet::new()),
    }
}

/// Arrow index map sending each arrow of `from` to an unused arrow of `to`
/// joining `perm[source]` and `perm[target]`.
fn arrow_map(from: &Quiver, to: &Quiver, perm: &[usize]) -> Vec<usize> {
    let mut used = vec![false; to.arrow_count()];
    from.arrows()
        .iter()
        .map(|a| {
            let (s, t) = (perm[a.source], perm[a.target]);
            let idx = (0..to.arrow_count())
                .find(|&i| !used[i] && to.arrow(i).source == s && to.arrow(i).target == t)
                .expect("isomorphic quivers have matching arrows");
            used[idx] = true;
            idx
        })
        .collect()
}

/// Presentation transported to the canonical labelling of its quiver, with
/// relations sorted. Among the images under automorphisms of the canonical
/// quiver the lexicographically smallest relation list is kept, so isomorphic
/// presentations of quivers without multiple arrows serialize identically.
pub fn canonical_presentation(p: &AlgebraPresentation) -> AlgebraPresentation {
    let cf = crate::canonical::canonical_form(&p.quiver);
    let cq = cf.quiver;
    let base_map = arrow_map(&p.quiver, &cq, &cf.permutation);
    let base: Vec<Relation> = p
        .relations
        .iter()
        .map(|r| {
            r.transported(&cq, &base_map)
                .expect("transported relation stays valid")
        })
        .collect();
    let autos = if base.is_empty() {
        vec![]
    } else {
        crate::canonical::automorphisms(&cq)
    };
    let mut best: Option<(Vec<String>, Vec<Relation>)> = None;
    for sigma in autos.iter().map(Some).chain(std::iter::once(None)) {
        let mut rels: Vec<Relation> = match sigma {
            None => base.clone(),
            Some(sigma) => {
                let m = arrow_map(&cq, &cq, sigma);
                base.iter()
                    .map(|r| {
                        r.transported(&cq, &m)
                            .expect("automorphism keeps relations valid")
                    })
                    .collect()
            }
        };
        rels.sort_by_key(|r| r.display(&cq));
        rels.dedup();
        let key: Vec<String> = rels.iter().map(|r| r.display(&cq)).collect();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, rels));
        }
    }
    let relations = best.map(|(_, r)| r).unwrap_or_default();
    AlgebraPresentation::new(cq, relations)
}

/// Text serialization of [`canonical_presentation`].
pub fn canonical_text(p: &AlgebraPresentation) -> String {
    presentation_to_text(&canonical_presentation(p))
}

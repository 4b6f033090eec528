//! Recursive query algebra over scored element sets.
//!
//! A query is a tree of eight operators (`OR`, `AND`, `WITHOUT`, `SEQ`, `IN`,
//! `IN+`, `SAME+`, `FILTER`) over term leaves. Every node evaluates to a
//! [`ResultSet`]: elements paired with a relevance value in `[0, 1]`.

mod eval;
pub mod ops;
mod sexpr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::QueryError;
use crate::index::{ContextId, DocId};
use crate::ingest::NodeInterval;
use crate::path_sim::QueryPath;

pub use eval::{EvalOptions, Evaluator};
pub use sexpr::parse_query;

/// Relevance in an in+ combination when none is given.
pub const DEFAULT_BETA: f64 = 0.5;

/// (document, preorder node id)
pub type ElementKey = (DocId, u32);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoredElement {
    pub doc_id: DocId,
    pub node_id: u32,
    pub interval: NodeInterval,
    pub context_id: ContextId,
    pub value: f64,
}

impl ScoredElement {
    pub fn key(&self) -> ElementKey {
        (self.doc_id, self.node_id)
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.value = value;
        self
    }
}

/// At most one entry per element; entries with value 0 are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultSet(BTreeMap<ElementKey, ScoredElement>);

impl ResultSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces; a non-positive value removes the element instead.
    pub fn insert(&mut self, e: ScoredElement) {
        if e.value > 0.0 {
            self.0.insert(e.key(), e);
        } else {
            self.0.remove(&e.key());
        }
    }

    pub fn get(&self, key: &ElementKey) -> Option<&ScoredElement> {
        self.0.get(key)
    }

    pub fn value(&self, key: &ElementKey) -> Option<f64> {
        self.0.get(key).map(|e| e.value)
    }

    pub fn contains(&self, key: &ElementKey) -> bool {
        self.0.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elements in (document, node) order.
    pub fn iter(&self) -> impl Iterator<Item = &ScoredElement> {
        self.0.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &ElementKey> {
        self.0.keys()
    }

    pub fn docs(&self) -> BTreeSet<DocId> {
        self.0.keys().map(|k| k.0).collect()
    }

    pub fn in_doc(&self, doc: DocId) -> impl Iterator<Item = &ScoredElement> {
        self.0.range((doc, 0)..=(doc, u32::MAX)).map(|(_, e)| e)
    }
}

impl FromIterator<ScoredElement> for ResultSet {
    fn from_iter<T: IntoIterator<Item = ScoredElement>>(iter: T) -> Self {
        let mut r = ResultSet::new();
        for e in iter {
            r.insert(e);
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqItem {
    Term(String),
    Wildcard,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryTree {
    Term(String),
    Seq(Vec<SeqItem>),
    Or(Vec<QueryTree>),
    And(Vec<QueryTree>),
    Without(Box<QueryTree>, Box<QueryTree>),
    In {
        path: QueryPath,
        children: Vec<QueryTree>,
    },
    InPlus {
        path: QueryPath,
        beta: f64,
        children: Vec<QueryTree>,
    },
    SamePlus(Vec<QueryTree>),
    Filter {
        support: Box<QueryTree>,
        target: Box<QueryTree>,
    },
}

impl QueryTree {
    pub fn op_name(&self) -> &'static str {
        match self {
            QueryTree::Term(_) => "TERM",
            QueryTree::Seq(_) => "SEQ",
            QueryTree::Or(_) => "OR",
            QueryTree::And(_) => "AND",
            QueryTree::Without(..) => "WITHOUT",
            QueryTree::In { .. } => "IN",
            QueryTree::InPlus { .. } => "IN+",
            QueryTree::SamePlus(_) => "SAME+",
            QueryTree::Filter { .. } => "FILTER",
        }
    }

    pub fn children(&self) -> Vec<&QueryTree> {
        match self {
            QueryTree::Term(_) | QueryTree::Seq(_) => Vec::new(),
            QueryTree::Or(c) | QueryTree::And(c) | QueryTree::SamePlus(c) => c.iter().collect(),
            QueryTree::In { children, .. } | QueryTree::InPlus { children, .. } => children.iter().collect(),
            QueryTree::Without(a, b) => vec![a, b],
            QueryTree::Filter { support, target } => vec![support, target],
        }
    }

    /// Checks arities and parameters without touching any index.
    pub fn validate(&self) -> Result<(), QueryError> {
        let need_some = |op: &'static str, n: usize| {
            if n == 0 {
                Err(QueryError::Arity {
                    op,
                    expected: "at least 1",
                    got: 0,
                })
            } else {
                Ok(())
            }
        };
        match self {
            QueryTree::Term(t) if t.is_empty() => {
                return Err(QueryError::Syntax {
                    position: 0,
                    message: "empty term".into(),
                })
            }
            QueryTree::Term(_) | QueryTree::Without(..) | QueryTree::Filter { .. } => {}
            QueryTree::Seq(items) => {
                if !items.iter().any(|i| matches!(i, SeqItem::Term(_))) {
                    return Err(QueryError::EmptySequence);
                }
            }
            QueryTree::Or(c) => need_some("OR", c.len())?,
            QueryTree::And(c) => need_some("AND", c.len())?,
            QueryTree::SamePlus(c) => need_some("SAME+", c.len())?,
            QueryTree::In { children, .. } => need_some("IN", children.len())?,
            QueryTree::InPlus { children, beta, .. } => {
                need_some("IN+", children.len())?;
                if !(0.0..=1.0).contains(beta) {
                    return Err(QueryError::Beta(*beta));
                }
            }
        }
        self.children().into_iter().try_for_each(QueryTree::validate)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, stem: &str) -> fmt::Result {
    if sexpr::is_bare_stem(stem) {
        f.write_str(stem)
    } else {
        write!(f, "\"{stem}\"")
    }
}

fn fmt_path(f: &mut fmt::Formatter<'_>, path: &QueryPath) -> fmt::Result {
    f.write_str("[")?;
    for t in path.tags() {
        write!(f, "/{t}")?;
    }
    f.write_str("/]")
}

/// Canonical s-expression form, re-readable by [`parse_query`].
impl fmt::Display for QueryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryTree::Term(t) => fmt_term(f, t),
            QueryTree::Seq(items) => {
                f.write_str("(SEQ")?;
                for i in items {
                    f.write_str(" ")?;
                    match i {
                        SeqItem::Term(t) => fmt_term(f, t)?,
                        SeqItem::Wildcard => f.write_str("*")?,
                    }
                }
                f.write_str(")")
            }
            QueryTree::In { path, children } => {
                f.write_str("(IN ")?;
                fmt_path(f, path)?;
                children.iter().try_for_each(|c| write!(f, " {c}"))?;
                f.write_str(")")
            }
            QueryTree::InPlus { path, beta, children } => {
                f.write_str("(IN+ ")?;
                fmt_path(f, path)?;
                if *beta != DEFAULT_BETA {
                    write!(f, " {beta}")?;
                }
                children.iter().try_for_each(|c| write!(f, " {c}"))?;
                f.write_str(")")
            }
            other => {
                write!(f, "({}", other.op_name())?;
                for c in other.children() {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

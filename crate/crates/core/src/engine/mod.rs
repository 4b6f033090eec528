//! Ranked search over a committed index.

mod explain;
mod focused;
mod format;

use serde::Serialize;

use crate::algebra::{parse_query, EvalOptions, Evaluator, QueryTree, ResultSet};
use crate::error::{QueryError, SearchError};
use crate::index::{ContextIndex, DocId};
use crate::ingest::IngestConfig;
use crate::nexi::{parse_nexi, translate, Strategy};
use crate::path_sim::CostMatrix;

pub use explain::{explain, Explanation, ExplanationDetail};
pub use focused::{highest_ancestor, propagate_max};
pub use format::{render, OutputFormat};

/// Number of results kept when a request does not say otherwise.
pub const DEFAULT_CUTOFF: usize = 1500;

#[derive(Debug, Clone)]
pub struct SearchRequest {
    /// A NEXI castitle (starts with `/`) or an s-expression query.
    pub query: String,
    /// Applies to NEXI input; s-expressions carry their own operators.
    pub strategy: Strategy,
    pub cutoff: usize,
    /// Overlap-free output: scores propagate to ancestors and only the topmost survive.
    pub focused: bool,
    pub costs: CostMatrix,
}

impl SearchRequest {
    pub fn new(query: impl Into<String>) -> Self {
        SearchRequest {
            query: query.into(),
            strategy: Strategy::default(),
            cutoff: DEFAULT_CUTOFF,
            focused: false,
            costs: CostMatrix::default(),
        }
    }

    pub fn is_nexi(&self) -> bool {
        self.query.trim_start().starts_with('/')
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedHit {
    pub rank: usize,
    pub doc_id: DocId,
    pub node_id: u32,
    pub locator: String,
    pub path: String,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RankedList {
    pub hits: Vec<RankedHit>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RankedHit> {
        self.hits.iter()
    }
}

/// Turns request text into an operator tree.
pub fn compile(request: &SearchRequest, config: &IngestConfig) -> Result<QueryTree, QueryError> {
    if request.cutoff == 0 {
        return Err(QueryError::Syntax {
            position: 0,
            message: "cutoff must be at least 1".into(),
        });
    }
    if request.is_nexi() {
        translate(&parse_nexi(request.query.trim())?, &request.strategy, config)
    } else {
        parse_query(&request.query, config)
    }
}

/// Evaluates a request to its full (untruncated) result set.
pub fn evaluate(index: &ContextIndex, request: &SearchRequest, config: &IngestConfig) -> Result<ResultSet, SearchError> {
    let tree = compile(request, config)?;
    let evaluator = Evaluator::new(index, EvalOptions { costs: request.costs.clone() });
    let mut results = evaluator.eval(&tree)?;
    if request.focused {
        results = highest_ancestor(&propagate_max(&results, index));
    }
    Ok(results)
}

pub fn search(index: &ContextIndex, request: &SearchRequest, config: &IngestConfig) -> Result<RankedList, SearchError> {
    let results = evaluate(index, request, config)?;
    Ok(rank(index, &results, request.cutoff))
}

/// Sorts by score (descending), then document and node id, and keeps `cutoff` hits.
pub fn rank(index: &ContextIndex, results: &ResultSet, cutoff: usize) -> RankedList {
    let mut all: Vec<_> = results.iter().collect();
    all.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.key().cmp(&b.key())));
    let hits = all
        .into_iter()
        .take(cutoff)
        .enumerate()
        .map(|(i, e)| {
            let doc = index.document(e.doc_id);
            RankedHit {
                rank: i + 1,
                doc_id: e.doc_id,
                node_id: e.node_id,
                locator: doc.map(|d| d.locator.clone()).unwrap_or_default(),
                path: doc.and_then(|d| d.element_path(e.node_id)).unwrap_or_default(),
                score: e.value,
            }
        })
        .collect();
    RankedList { hits }
}

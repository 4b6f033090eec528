use std::collections::{BTreeMap, HashMap, HashSet};

use super::ops::{self, WeightedArg};
use super::{QueryTree, ResultSet, ScoredElement, SeqItem};
use crate::error::QueryError;
use crate::index::{ContextId, ContextIndex, DocId};
use crate::path_sim::{edit_distance, similarity, CostMatrix, QueryPath};

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    /// Costs for the vague (`IN+`) structural similarity.
    pub costs: CostMatrix,
}

/// Bottom-up evaluation of query trees against an index.
///
/// The support argument of `FILTER` is evaluated at document scope: each
/// conjunct (or disjunct) of a top-level `AND`/`OR` is lifted to the document
/// root with `max` before being combined, since support clauses usually
/// describe different elements of the same document.
pub struct Evaluator<'a> {
    index: &'a ContextIndex,
    options: EvalOptions,
}

impl<'a> Evaluator<'a> {
    pub fn new(index: &'a ContextIndex, options: EvalOptions) -> Self {
        Evaluator { index, options }
    }

    pub fn index(&self) -> &'a ContextIndex {
        self.index
    }

    pub fn options(&self) -> &EvalOptions {
        &self.options
    }

    pub fn eval(&self, tree: &QueryTree) -> Result<ResultSet, QueryError> {
        tree.validate()?;
        Ok(self.node(tree))
    }

    pub(crate) fn node(&self, tree: &QueryTree) -> ResultSet {
        match tree {
            QueryTree::Term(stem) => self.term(stem),
            QueryTree::Seq(items) => self.seq(items),
            QueryTree::Or(c) => ops::or(&self.all(c)),
            QueryTree::And(c) => ops::and(&self.all(c)),
            QueryTree::Without(a, b) => ops::without(&self.node(a), &self.node(b)),
            QueryTree::In { path, children } => {
                let path = self.mapped(path);
                let mut cache = HashMap::new();
                ops::within(&self.all(children), |ctx| {
                    *cache.entry(ctx).or_insert_with(|| self.strict_match(&path, ctx))
                })
            }
            QueryTree::InPlus { path, beta, children } => {
                let path = self.mapped(path);
                let mut cache = HashMap::new();
                ops::within_vague(&self.all(children), *beta, |ctx| {
                    *cache.entry(ctx).or_insert_with(|| self.sigma(&path, ctx))
                })
            }
            QueryTree::SamePlus(children) => {
                ops::same_plus(self.index.stats().total_docs, &self.weighted_args(children))
            }
            QueryTree::Filter { support, target } => ops::filter(&self.support(support), &self.node(target)),
        }
    }

    fn all(&self, children: &[QueryTree]) -> Vec<ResultSet> {
        children.iter().map(|c| self.node(c)).collect()
    }

    pub(crate) fn weighted_args(&self, children: &[QueryTree]) -> Vec<WeightedArg> {
        children
            .iter()
            .map(|c| {
                let results = self.node(c);
                let doc_freq = match c {
                    QueryTree::Term(stem) => self.index.stats().doc_freq(stem),
                    _ => results.docs().len() as u64,
                };
                WeightedArg { doc_freq, results }
            })
            .collect()
    }

    pub(crate) fn support(&self, tree: &QueryTree) -> ResultSet {
        match tree {
            QueryTree::And(c) => ops::and(&c.iter().map(|t| self.lift(&self.node(t))).collect::<Vec<_>>()),
            QueryTree::Or(c) => ops::or(&c.iter().map(|t| self.lift(&self.node(t))).collect::<Vec<_>>()),
            other => self.lift(&self.node(other)),
        }
    }

    /// Collapses each document's elements onto its root, keeping the maximum.
    pub fn lift(&self, results: &ResultSet) -> ResultSet {
        let mut best: BTreeMap<DocId, f64> = BTreeMap::new();
        for e in results.iter() {
            let v = best.entry(e.doc_id).or_insert(0.0);
            *v = v.max(e.value);
        }
        best.into_iter()
            .filter_map(|(doc, value)| {
                let root = self.index.document(doc)?.root();
                Some(ScoredElement {
                    doc_id: doc,
                    node_id: root.node_id(),
                    interval: root.interval,
                    context_id: root.context_id?,
                    value,
                })
            })
            .collect()
    }

    pub(crate) fn mapped(&self, path: &QueryPath) -> QueryPath {
        path.map_tags(|t| self.index.map_tag(t))
    }

    /// Exact structural match: the query tags form a subsequence of the context.
    pub(crate) fn strict_match(&self, path: &QueryPath, ctx: ContextId) -> bool {
        match self.index.dictionary().get(ctx) {
            Some(c) => edit_distance(&path.tags(), c.tags(), &CostMatrix::default()) == 0.0,
            None => false,
        }
    }

    pub(crate) fn sigma(&self, path: &QueryPath, ctx: ContextId) -> f64 {
        match self.index.dictionary().get(ctx) {
            Some(c) => similarity(&path.tags(), c.tags(), &self.options.costs),
            None => 0.0,
        }
    }

    fn element(&self, doc: DocId, node: u32, value: f64) -> Option<ScoredElement> {
        let rec = self.index.document(doc)?.node(node)?;
        Some(ScoredElement {
            doc_id: doc,
            node_id: node,
            interval: rec.interval,
            context_id: rec.context_id?,
            value,
        })
    }

    fn term(&self, stem: &str) -> ResultSet {
        self.index
            .lookup(stem)
            .iter()
            .map(|p| ScoredElement {
                doc_id: p.doc_id,
                node_id: p.node_id(),
                interval: p.interval,
                context_id: p.context_id,
                value: 1.0,
            })
            .collect()
    }

    fn seq(&self, items: &[SeqItem]) -> ResultSet {
        // (doc, position) -> owning node, per distinct pattern term
        let mut located: HashMap<&str, HashMap<(DocId, u32), u32>> = HashMap::new();
        for item in items {
            if let SeqItem::Term(t) = item {
                located.entry(t.as_str()).or_insert_with(|| {
                    self.index
                        .lookup(t)
                        .iter()
                        .map(|p| ((p.doc_id, p.position), p.node_id()))
                        .collect()
                });
            }
        }
        let Some((anchor_offset, anchor)) = items.iter().enumerate().find_map(|(i, it)| match it {
            SeqItem::Term(t) => Some((i, t.as_str())),
            SeqItem::Wildcard => None,
        }) else {
            return ResultSet::new();
        };

        let mut hits: HashSet<(DocId, u32)> = HashSet::new();
        for p in self.index.lookup(anchor) {
            let Some(start) = p.position.checked_sub(anchor_offset as u32) else {
                continue;
            };
            let (doc, node) = (p.doc_id, p.node_id());
            let Some(record) = self.index.document(doc).and_then(|d| d.node(node)) else {
                continue;
            };
            let matched = items.iter().enumerate().all(|(i, item)| {
                let pos = start + i as u32;
                match item {
                    SeqItem::Term(t) => located[t.as_str()].get(&(doc, pos)) == Some(&node),
                    SeqItem::Wildcard => record.owns_position(pos),
                }
            });
            if matched {
                hits.insert((doc, node));
            }
        }
        hits.into_iter()
            .filter_map(|(doc, node)| self.element(doc, node, 1.0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_document, IngestConfig};

    fn index(docs: &[&str]) -> ContextIndex {
        let cfg = IngestConfig::default();
        let mut idx = ContextIndex::new();
        for (i, d) in docs.iter().enumerate() {
            idx.index_document(&parse_document(&format!("d{i}"), d.as_bytes(), &cfg).unwrap())
                .unwrap();
        }
        idx
    }

    fn seq(words: &[&str]) -> QueryTree {
        QueryTree::Seq(
            words
                .iter()
                .map(|w| if *w == "*" { SeqItem::Wildcard } else { SeqItem::Term(w.to_string()) })
                .collect(),
        )
    }

    #[test]
    fn term_presence() {
        let idx = index(&["<a><b>cat cat</b><c>cat</c><d>dog</d></a>"]);
        let ev = Evaluator::new(&idx, EvalOptions::default());
        let r = ev.eval(&QueryTree::Term("cat".into())).unwrap();
        assert_eq!(r.keys().copied().collect::<Vec<_>>(), [(0, 1), (0, 2)]);
        assert!(r.iter().all(|e| e.value == 1.0));
        assert!(ev.eval(&QueryTree::Term("zebra".into())).unwrap().is_empty());
    }

    #[test]
    fn sequence_with_wildcard() {
        let idx = index(&["<a><p>message fatal erreur</p><p>message erreur fatal</p></a>"]);
        let ev = Evaluator::new(&idx, EvalOptions::default());
        let r = ev.eval(&seq(&["messag", "*", "erreur"])).unwrap();
        assert_eq!(r.keys().copied().collect::<Vec<_>>(), [(0, 1)]);
        let r = ev.eval(&seq(&["messag", "erreur"])).unwrap();
        assert_eq!(r.keys().copied().collect::<Vec<_>>(), [(0, 2)]);
        assert_eq!(ev.eval(&seq(&["*", "*"])), Err(QueryError::EmptySequence));
    }

    #[test]
    fn sequence_stays_inside_one_element() {
        // "string" and "match" are adjacent in the document but owned by different elements
        let idx = index(&["<a><p>string</p><p>matching</p><p>approximate <i>x</i> algorithm</p></a>"]);
        let ev = Evaluator::new(&idx, EvalOptions::default());
        assert!(ev.eval(&seq(&["string", "match"])).unwrap().is_empty());
        // wildcard slot owned by a child element does not count
        assert!(ev.eval(&seq(&["approxim", "*", "algorithm"])).unwrap().is_empty());
        // leading wildcard needs an owned token before the anchor
        assert!(ev.eval(&seq(&["*", "string"])).unwrap().is_empty());
    }

    #[test]
    fn strict_and_vague_structure() {
        let idx = index(&["<article><fm><au>yates</au></fm><bm><bb>yates</bb></bm></article>"]);
        let ev = Evaluator::new(&idx, EvalOptions::default());
        let path = QueryPath::new(["article", "bb"]).unwrap();
        let yates = vec![QueryTree::Term("yate".into())];
        let strict = ev
            .eval(&QueryTree::In { path: path.clone(), children: yates.clone() })
            .unwrap();
        assert_eq!(strict.keys().copied().collect::<Vec<_>>(), [(0, 4)]);
        let vague = ev
            .eval(&QueryTree::InPlus { path, beta: 0.5, children: yates })
            .unwrap();
        assert_eq!(vague.value(&(0, 4)), Some(1.0));
        assert_eq!(vague.value(&(0, 2)), Some(0.5 * 0.5 + 0.5));
    }

    #[test]
    fn support_is_lifted_to_document_root() {
        let idx = index(&[
            "<article><bb>baeza</bb><sec>string</sec><sec>approximate</sec></article>",
            "<article><bb>baeza</bb><sec>approximate</sec></article>",
        ]);
        let ev = Evaluator::new(&idx, EvalOptions::default());
        let tree = QueryTree::Filter {
            support: Box::new(QueryTree::And(vec![
                QueryTree::Term("baeza".into()),
                QueryTree::Term("string".into()),
            ])),
            target: Box::new(QueryTree::Term("approxim".into())),
        };
        let r = ev.eval(&tree).unwrap();
        assert_eq!(r.keys().copied().collect::<Vec<_>>(), [(0, 3)]);
        assert_eq!(r.value(&(0, 3)), Some(1.0));
    }
}

//! Overlap removal for focused retrieval.

use crate::algebra::{ResultSet, ScoredElement};
use crate::index::ContextIndex;

/// Gives every ancestor of a scored element the maximum of its own value and
/// the values scored below it.
pub fn propagate_max(results: &ResultSet, index: &ContextIndex) -> ResultSet {
    let mut out = results.clone();
    for e in results.iter() {
        let Some(doc) = index.document(e.doc_id) else { continue };
        let mut parent = doc.node(e.node_id).and_then(|n| n.parent);
        while let Some(p) = parent {
            let Some(rec) = doc.node(p) else { break };
            let key = (e.doc_id, p);
            match out.value(&key) {
                Some(v) if v >= e.value => {}
                _ => {
                    if let Some(context_id) = rec.context_id {
                        out.insert(ScoredElement {
                            doc_id: e.doc_id,
                            node_id: p,
                            interval: rec.interval,
                            context_id,
                            value: e.value,
                        });
                    }
                }
            }
            parent = rec.parent;
        }
    }
    out
}

/// Keeps the topmost scored elements of each document: those with no scored
/// ancestor. Survivors never contain one another.
pub fn highest_ancestor(results: &ResultSet) -> ResultSet {
    let mut out = ResultSet::new();
    let mut last: Option<&ScoredElement> = None;
    // (doc, preorder id) order: a node's only possible covering survivor is the latest one
    for e in results.iter() {
        match last {
            Some(s) if s.doc_id == e.doc_id && s.interval.has_descendant(e.node_id) => {}
            _ => {
                out.insert(*e);
                last = Some(e);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_document, IngestConfig};

    fn fixture() -> ContextIndex {
        let mut idx = ContextIndex::new();
        let doc = "<article><sec><p>cat</p><p>dog</p></sec><sec><p>fish</p></sec></article>";
        idx.index_document(&parse_document("d", doc.as_bytes(), &IngestConfig::default()).unwrap())
            .unwrap();
        idx
    }

    fn scored(idx: &ContextIndex, items: &[(u32, f64)]) -> ResultSet {
        let doc = idx.document(0).unwrap();
        items
            .iter()
            .map(|&(n, v)| {
                let rec = doc.node(n).unwrap();
                ScoredElement {
                    doc_id: 0,
                    node_id: n,
                    interval: rec.interval,
                    context_id: rec.context_id.unwrap(),
                    value: v,
                }
            })
            .collect()
    }

    #[test]
    fn leaf_value_reaches_unscored_ancestors() {
        let idx = fixture();
        let r = propagate_max(&scored(&idx, &[(2, 0.8)]), &idx);
        assert_eq!(r.value(&(0, 1)), Some(0.8));
        assert_eq!(r.value(&(0, 0)), Some(0.8));
        assert!(!r.contains(&(0, 4)));
    }

    #[test]
    fn higher_parent_keeps_its_value() {
        let idx = fixture();
        let r = propagate_max(&scored(&idx, &[(1, 0.9), (2, 0.4)]), &idx);
        assert_eq!(r.value(&(0, 1)), Some(0.9));
        assert_eq!(r.value(&(0, 0)), Some(0.9));
        assert_eq!(r.value(&(0, 2)), Some(0.4));
    }

    #[test]
    fn topmost_survive() {
        let idx = fixture();
        let chain = highest_ancestor(&scored(&idx, &[(0, 0.8), (1, 0.8)]));
        assert_eq!(chain.keys().copied().collect::<Vec<_>>(), [(0, 0)]);
        let siblings = highest_ancestor(&scored(&idx, &[(1, 0.3), (2, 0.9), (4, 0.5)]));
        assert_eq!(siblings.keys().copied().collect::<Vec<_>>(), [(0, 1), (0, 4)]);
    }
}

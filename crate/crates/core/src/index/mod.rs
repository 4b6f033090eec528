//! Contextual inverted index.
//!
//! Every posting records the document, the context path of the owning node,
//! the token position and the node's interval label, so structural filters
//! and ancestry tests never need the source document.

mod codec;
mod store;

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::IndexError;
use crate::ingest::{render_element_path, ContextPath, DocumentTree, NodeInterval};

pub use codec::PostingCodec;
pub use store::FORMAT_VERSION;

pub type DocId = u32;
pub type ContextId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PostingEntry {
    pub doc_id: DocId,
    pub context_id: ContextId,
    pub position: u32,
    pub interval: NodeInterval,
}

impl PostingEntry {
    pub fn node_id(&self) -> u32 {
        self.interval.low
    }
}

/// Bijection between dense context ids and context paths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextDictionary {
    paths: Vec<ContextPath>,
    ids: HashMap<ContextPath, ContextId>,
}

impl ContextDictionary {
    pub fn intern(&mut self, path: ContextPath) -> ContextId {
        if let Some(&id) = self.ids.get(&path) {
            return id;
        }
        let id = self.paths.len() as ContextId;
        self.ids.insert(path.clone(), id);
        self.paths.push(path);
        id
    }

    pub fn id_of(&self, path: &ContextPath) -> Option<ContextId> {
        self.ids.get(path).copied()
    }

    pub fn get(&self, id: ContextId) -> Option<&ContextPath> {
        self.paths.get(id as usize)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Entries in id order.
    pub fn iter(&self) -> impl Iterator<Item = (ContextId, &ContextPath)> {
        self.paths.iter().enumerate().map(|(i, p)| (i as ContextId, p))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub total_docs: u64,
    pub doc_freq: BTreeMap<String, u64>,
}

impl CorpusStats {
    /// Number of documents containing `stem`; 0 for unknown terms.
    pub fn doc_freq(&self, stem: &str) -> u64 {
        self.doc_freq.get(stem).copied().unwrap_or(0)
    }
}

/// Structural record of one element, kept so results can be rendered,
/// propagated to ancestors and checked for token ownership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub interval: NodeInterval,
    pub parent: Option<u32>,
    /// `None` for elements whose subtree holds no indexed token.
    pub context_id: Option<ContextId>,
    pub source_tag: String,
    pub ordinal: u32,
    /// Inclusive position ranges of the tokens this node owns directly.
    pub runs: Vec<(u32, u32)>,
}

impl NodeRecord {
    pub fn node_id(&self) -> u32 {
        self.interval.low
    }

    pub fn owns_position(&self, position: u32) -> bool {
        self.runs.iter().any(|&(a, b)| a <= position && position <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentRecord {
    pub locator: String,
    /// Indexed by preorder node id.
    pub nodes: Vec<NodeRecord>,
}

impl DocumentRecord {
    pub fn node(&self, node_id: u32) -> Option<&NodeRecord> {
        self.nodes.get(node_id as usize)
    }

    pub fn root(&self) -> &NodeRecord {
        &self.nodes[0]
    }

    /// `/tag[ordinal]/...` rendering of a node's location.
    pub fn element_path(&self, node_id: u32) -> Option<String> {
        let mut chain = Vec::new();
        let mut cur = self.node(node_id);
        while let Some(n) = cur {
            chain.push(n);
            cur = n.parent.and_then(|p| self.node(p));
        }
        if chain.is_empty() {
            return None;
        }
        Some(render_element_path(
            chain.iter().rev().map(|n| (n.source_tag.as_str(), n.ordinal)),
        ))
    }

    /// Resolves an `/tag[ordinal]/...` path back to a node id.
    pub fn find_by_path(&self, path: &str) -> Option<u32> {
        (0..self.nodes.len() as u32).find(|&id| self.element_path(id).as_deref() == Some(path))
    }
}

/// The index: term lists, context dictionary, corpus statistics and the
/// document table. Built by a single writer; read-only once committed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextIndex {
    terms: BTreeMap<String, Vec<PostingEntry>>,
    dictionary: ContextDictionary,
    stats: CorpusStats,
    docs: Vec<DocumentRecord>,
    tag_classes: BTreeMap<String, String>,
    locators: HashSet<String>,
}

impl ContextIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// An index whose queries apply the same tag-class mapping used at ingest.
    pub fn with_tag_classes(tag_classes: BTreeMap<String, String>) -> Self {
        ContextIndex {
            tag_classes,
            ..Self::default()
        }
    }

    pub fn index_document(&mut self, tree: &DocumentTree) -> Result<DocId, IndexError> {
        if self.locators.contains(&tree.doc_ref) {
            return Err(IndexError::DuplicateDocument(tree.doc_ref.clone()));
        }
        let doc_id = self.docs.len() as DocId;

        let count = tree.node_count();
        let mut parents: Vec<Option<u32>> = vec![None; count];
        let mut subtree_tokens = vec![0usize; count];
        let mut paths: Vec<Vec<String>> = vec![Vec::new(); count];
        let mut stack: Vec<(&crate::ingest::ElementNode, Option<u32>)> = vec![(&tree.root, None)];
        let mut preorder = Vec::with_capacity(count);
        while let Some((node, parent)) = stack.pop() {
            let id = node.node_id as usize;
            parents[id] = parent;
            let mut path = parent.map(|p| paths[p as usize].clone()).unwrap_or_default();
            path.push(node.tag.clone());
            paths[id] = path;
            subtree_tokens[id] = node.tokens.len();
            preorder.push(node);
            stack.extend(node.children.iter().rev().map(|c| (c, Some(node.node_id))));
        }
        for id in (1..count).rev() {
            if let Some(p) = parents[id] {
                subtree_tokens[p as usize] += subtree_tokens[id];
            }
        }

        let mut records = Vec::with_capacity(count);
        let mut postings: Vec<(&str, PostingEntry)> = Vec::with_capacity(tree.token_count());
        for node in preorder {
            let id = node.node_id as usize;
            let context_id = (subtree_tokens[id] > 0)
                .then(|| self.dictionary.intern(ContextPath::new(std::mem::take(&mut paths[id]))));
            for tok in &node.tokens {
                postings.push((
                    tok.stem.as_str(),
                    PostingEntry {
                        doc_id,
                        context_id: context_id.expect("token owner has a context"),
                        position: tok.position,
                        interval: node.interval,
                    },
                ));
            }
            records.push(NodeRecord {
                interval: node.interval,
                parent: parents[id],
                context_id,
                source_tag: node.source_tag.clone(),
                ordinal: node.ordinal,
                runs: runs(node.tokens.iter().map(|t| t.position)),
            });
        }

        postings.sort_by(|a, b| a.0.cmp(b.0).then(a.1.position.cmp(&b.1.position)));
        let mut last: Option<&str> = None;
        for (stem, entry) in postings {
            if last != Some(stem) {
                *self.stats.doc_freq.entry(stem.to_string()).or_insert(0) += 1;
                last = Some(stem);
            }
            self.terms.entry(stem.to_string()).or_default().push(entry);
        }
        self.stats.total_docs += 1;
        self.locators.insert(tree.doc_ref.clone());
        self.docs.push(DocumentRecord {
            locator: tree.doc_ref.clone(),
            nodes: records,
        });
        Ok(doc_id)
    }

    /// Postings for `stem`, sorted by (document, position).
    pub fn lookup(&self, stem: &str) -> &[PostingEntry] {
        self.terms.get(stem).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contexts_matching(&self, predicate: impl Fn(&ContextPath) -> bool) -> Vec<ContextId> {
        self.dictionary
            .iter()
            .filter(|(_, p)| predicate(p))
            .map(|(id, _)| id)
            .collect()
    }

    pub fn dictionary(&self) -> &ContextDictionary {
        &self.dictionary
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &[PostingEntry])> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn document(&self, doc_id: DocId) -> Option<&DocumentRecord> {
        self.docs.get(doc_id as usize)
    }

    pub fn documents(&self) -> impl Iterator<Item = (DocId, &DocumentRecord)> {
        self.docs.iter().enumerate().map(|(i, d)| (i as DocId, d))
    }

    pub fn doc_by_locator(&self, locator: &str) -> Option<DocId> {
        self.docs
            .iter()
            .position(|d| d.locator == locator)
            .map(|i| i as DocId)
    }

    pub fn tag_classes(&self) -> &BTreeMap<String, String> {
        &self.tag_classes
    }

    pub fn map_tag(&self, tag: &str) -> String {
        self.tag_classes.get(tag).cloned().unwrap_or_else(|| tag.to_string())
    }

    /// Recounts corpus statistics from the raw postings.
    pub fn recompute_stats(&self) -> CorpusStats {
        let mut doc_freq = BTreeMap::new();
        for (term, list) in &self.terms {
            let docs: HashSet<DocId> = list.iter().map(|p| p.doc_id).collect();
            doc_freq.insert(term.clone(), docs.len() as u64);
        }
        CorpusStats {
            total_docs: self.docs.len() as u64,
            doc_freq,
        }
    }

    fn from_parts(
        terms: BTreeMap<String, Vec<PostingEntry>>,
        dictionary: ContextDictionary,
        stats: CorpusStats,
        docs: Vec<DocumentRecord>,
        tag_classes: BTreeMap<String, String>,
    ) -> Self {
        let locators = docs.iter().map(|d| d.locator.clone()).collect();
        ContextIndex {
            terms,
            dictionary,
            stats,
            docs,
            tag_classes,
            locators,
        }
    }
}

fn runs(positions: impl Iterator<Item = u32>) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for p in positions {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == p => *end = p,
            _ => out.push((p, p)),
        }
    }
    out
}

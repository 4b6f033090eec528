//! Per-operator score breakdown for one element.

use std::fmt;

use serde::Serialize;

use super::{compile, SearchRequest};
use crate::algebra::{ops, ElementKey, EvalOptions, Evaluator, QueryTree, ResultSet, DEFAULT_BETA};
use crate::error::SearchError;
use crate::index::ContextIndex;
use crate::ingest::IngestConfig;
use crate::path_sim::{align, best_similarity, EditOp};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExplanationDetail {
    None,
    Term { stem: String },
    /// Strict structure: the query path must be a tag subsequence of the context.
    Strict { query_path: String, context: String, matched: bool },
    Vague {
        query_path: String,
        context: String,
        beta: f64,
        sigma: f64,
        distance: f64,
        script: Vec<EditOp>,
        content: Option<f64>,
        /// Most similar context ending in the query's last tag, if any.
        best_candidate: Option<(String, f64)>,
    },
    Weights { lambdas: Vec<f64>, doc_freqs: Vec<u64>, tau: f64 },
    Filter { support: Option<f64>, note: Option<String> },
}

/// Value of one operator node for the element under study; `value` is `None`
/// when the element is absent from that node's result set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub op: String,
    pub value: Option<f64>,
    pub detail: ExplanationDetail,
    pub children: Vec<Explanation>,
}

impl Explanation {
    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let v = self.value.map(|v| format!("{v:.6}")).unwrap_or_else(|| "absent".into());
        write!(f, "{pad}{} = {v}", self.op)?;
        match &self.detail {
            ExplanationDetail::None => {}
            ExplanationDetail::Term { stem } => write!(f, " [{stem}]")?,
            ExplanationDetail::Strict { query_path, context, matched } => {
                write!(f, " path {query_path} vs {context}: {}", if *matched { "match" } else { "no match" })?
            }
            ExplanationDetail::Vague {
                query_path,
                context,
                beta,
                sigma,
                distance,
                script,
                content,
                best_candidate,
            } => {
                write!(f, " beta={beta} sigma={sigma:.6} (distance {distance}) path {query_path} vs {context}")?;
                if let Some(c) = content {
                    write!(f, " content={c:.6}")?;
                }
                let s: Vec<String> = script.iter().map(ToString::to_string).collect();
                write!(f, " script [{}]", s.join(" "))?;
                if let Some((ctx, sim)) = best_candidate {
                    write!(f, " best candidate {ctx} sigma={sim:.6}")?;
                }
            }
            ExplanationDetail::Weights { lambdas, doc_freqs, tau } => {
                let l: Vec<String> = lambdas.iter().map(|l| format!("{l:.6}")).collect();
                write!(f, " tau={tau:.6} lambda=[{}] df={doc_freqs:?}", l.join(", "))?;
            }
            ExplanationDetail::Filter { support, note } => {
                if let Some(s) = support {
                    write!(f, " support={s:.6}")?;
                }
                if let Some(n) = note {
                    write!(f, " ({n})")?;
                }
            }
        }
        writeln!(f)?;
        self.children.iter().try_for_each(|c| c.write(f, depth + 1))
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

struct Explainer<'e, 'i> {
    ev: &'e Evaluator<'i>,
}

impl Explainer<'_, '_> {
    fn context_string(&self, key: ElementKey) -> String {
        self.ev
            .index()
            .document(key.0)
            .and_then(|d| d.node(key.1))
            .and_then(|n| n.context_id)
            .and_then(|c| self.ev.index().dictionary().get(c))
            .map(|p| p.to_string())
            .unwrap_or_default()
    }

    fn node(&self, tree: &QueryTree, key: ElementKey) -> Explanation {
        let results = self.ev.node(tree);
        let value = results.value(&key);
        let (detail, children) = match tree {
            QueryTree::Term(stem) => (ExplanationDetail::Term { stem: stem.clone() }, vec![]),
            QueryTree::Seq(_) => (ExplanationDetail::None, vec![]),
            QueryTree::Or(c) | QueryTree::And(c) => (ExplanationDetail::None, self.all(c, key)),
            QueryTree::Without(a, b) => (ExplanationDetail::None, vec![self.node(a, key), self.node(b, key)]),
            QueryTree::In { path, children } => {
                let mapped = self.ev.mapped(path);
                let matched = self
                    .ev
                    .index()
                    .document(key.0)
                    .and_then(|d| d.node(key.1))
                    .and_then(|n| n.context_id)
                    .is_some_and(|c| self.ev.strict_match(&mapped, c));
                (
                    ExplanationDetail::Strict {
                        query_path: mapped.to_string(),
                        context: self.context_string(key),
                        matched,
                    },
                    self.all(children, key),
                )
            }
            QueryTree::InPlus { path, beta, children } => {
                let mapped = self.ev.mapped(path);
                let context = self.context_string(key);
                let ctx_tags: Vec<&str> = context.split('/').filter(|t| !t.is_empty()).collect();
                let a = align(&mapped.tags(), &ctx_tags, &self.ev.options().costs);
                let content = ops::and(&children.iter().map(|c| self.ev.node(c)).collect::<Vec<_>>()).value(&key);
                let dict = self.ev.index().dictionary();
                let last = mapped.last().to_string();
                let candidates = self.ev.index().contexts_matching(|p| p.last() == last);
                let best = best_similarity(
                    &mapped.tags(),
                    candidates.iter().filter_map(|&c| dict.get(c).map(|p| (c, p.tags()))),
                    &self.ev.options().costs,
                );
                (
                    ExplanationDetail::Vague {
                        query_path: mapped.to_string(),
                        context,
                        beta: *beta,
                        sigma: a.similarity,
                        distance: a.distance,
                        script: a.script,
                        content,
                        best_candidate: best
                            .witness
                            .and_then(|c| dict.get(c))
                            .map(|p| (p.to_string(), best.similarity)),
                    },
                    self.all(children, key),
                )
            }
            QueryTree::SamePlus(c) => {
                let args = self.ev.weighted_args(c);
                let total = self.ev.index().stats().total_docs;
                let lambdas: Vec<f64> = args.iter().map(|a| ops::discrimination_weight(a.doc_freq, total)).collect();
                let tau = 1.0 / lambdas.iter().sum::<f64>();
                (
                    ExplanationDetail::Weights {
                        lambdas,
                        doc_freqs: args.iter().map(|a| a.doc_freq).collect(),
                        tau,
                    },
                    self.all(c, key),
                )
            }
            QueryTree::Filter { support, target } => {
                let lifted = self.ev.support(support);
                let doc_support = lifted.in_doc(key.0).map(|e| e.value).fold(None, |m: Option<f64>, v| {
                    Some(m.map_or(v, |m| m.max(v)))
                });
                let note = doc_support.is_none().then(|| "no support in document".to_string());
                let support_child = self.support_node(support, key);
                (
                    ExplanationDetail::Filter { support: doc_support, note },
                    vec![support_child, self.node(target, key)],
                )
            }
        };
        Explanation {
            op: op_label(tree),
            value,
            detail,
            children,
        }
    }

    fn all(&self, children: &[QueryTree], key: ElementKey) -> Vec<Explanation> {
        children.iter().map(|c| self.node(c, key)).collect()
    }

    /// Support side: each clause is explained at its best element in the document.
    fn support_node(&self, tree: &QueryTree, key: ElementKey) -> Explanation {
        let clauses: Vec<&QueryTree> = match tree {
            QueryTree::And(c) | QueryTree::Or(c) => c.iter().collect(),
            other => vec![other],
        };
        let children = clauses
            .into_iter()
            .map(|c| {
                let best = best_in_doc(&self.ev.node(c), key.0);
                let mut e = self.node(c, best.unwrap_or((key.0, 0)));
                if best.is_none() {
                    e.value = None;
                }
                e
            })
            .collect();
        let value = self.ev.support(tree).in_doc(key.0).next().map(|e| e.value);
        Explanation {
            op: match tree {
                QueryTree::And(_) | QueryTree::Or(_) => format!("support {}", tree.op_name()),
                _ => "support".to_string(),
            },
            value,
            detail: ExplanationDetail::None,
            children,
        }
    }
}

fn best_in_doc(results: &ResultSet, doc: u32) -> Option<ElementKey> {
    results
        .in_doc(doc)
        .max_by(|a, b| a.value.total_cmp(&b.value).then(b.node_id.cmp(&a.node_id)))
        .map(|e| e.key())
}

fn op_label(tree: &QueryTree) -> String {
    match tree {
        QueryTree::Term(t) => format!("TERM {t}"),
        QueryTree::Seq(_) => tree.to_string(),
        QueryTree::InPlus { beta, .. } if *beta != DEFAULT_BETA => format!("IN+ beta={beta}"),
        other => other.op_name().to_string(),
    }
}

/// Explains how the request scores the element at `path` (as rendered in
/// results, e.g. `/article[1]/sec[2]`) of document `locator`.
pub fn explain(
    index: &ContextIndex,
    request: &SearchRequest,
    config: &IngestConfig,
    locator: &str,
    path: &str,
) -> Result<Explanation, SearchError> {
    let tree = compile(request, config)?;
    let doc = index
        .doc_by_locator(locator)
        .ok_or_else(|| SearchError::NotFound(format!("no document {locator:?}")))?;
    let node = index
        .document(doc)
        .and_then(|d| d.find_by_path(path))
        .ok_or_else(|| SearchError::NotFound(format!("no element {path} in {locator}")))?;
    let ev = Evaluator::new(index, EvalOptions { costs: request.costs.clone() });
    let explanation = Explainer { ev: &ev }.node(&tree, (doc, node));
    if !mentions(&explanation) {
        return Err(SearchError::NotFound(format!("{locator} {path} is not in the result set")));
    }
    Ok(explanation)
}

/// Whether the element has a value anywhere outside the support side.
fn mentions(e: &Explanation) -> bool {
    e.value.is_some() || e.children.iter().filter(|c| !c.op.starts_with("support")).any(mentions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_document;

    fn corpus(docs: &[&str]) -> ContextIndex {
        let cfg = IngestConfig::default();
        let mut idx = ContextIndex::new();
        for (i, d) in docs.iter().enumerate() {
            idx.index_document(&parse_document(&format!("d{i}"), d.as_bytes(), &cfg).unwrap())
                .unwrap();
        }
        idx
    }

    #[test]
    fn vague_hit_recomputes() {
        let idx = corpus(&["<article><fm><au>yates</au></fm></article>"]);
        let req = SearchRequest::new("(IN+ [/article/bb/] yates)");
        let e = explain(&idx, &req, &IngestConfig::default(), "d0", "/article[1]/fm[1]/au[1]").unwrap();
        let ExplanationDetail::Vague { beta, sigma, content, .. } = &e.detail else { panic!("{e:?}") };
        assert_eq!(*sigma, 0.5);
        assert_eq!(e.value, Some(beta * sigma + (1.0 - beta) * content.unwrap()));
    }

    #[test]
    fn same_plus_weights_sum_to_inverse_tau() {
        let idx = corpus(&["<a><b>cat dog</b></a>", "<a><b>cat</b></a>", "<a><b>fish</b></a>"]);
        let req = SearchRequest::new("(SAME+ cat dog)");
        let e = explain(&idx, &req, &IngestConfig::default(), "d0", "/a[1]/b[1]").unwrap();
        let ExplanationDetail::Weights { lambdas, tau, .. } = &e.detail else { panic!() };
        assert!((lambdas.iter().sum::<f64>() - 1.0 / tau).abs() < 1e-12);
        assert!((e.value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unsupported_target_is_reported() {
        let idx = corpus(&["<article><sec>approximate</sec></article>", "<article><bb>baeza</bb></article>"]);
        let req = SearchRequest::new("(FILTER baeza approximate)");
        let e = explain(&idx, &req, &IngestConfig::default(), "d0", "/article[1]/sec[1]").unwrap();
        assert_eq!(e.value, None);
        let ExplanationDetail::Filter { support, note } = &e.detail else { panic!() };
        assert_eq!(*support, None);
        assert_eq!(note.as_deref(), Some("no support in document"));
        assert!(e.to_string().contains("no support in document"));
    }

    #[test]
    fn unknown_elements_are_not_found() {
        let idx = corpus(&["<article><sec>approximate</sec><p>cat</p></article>"]);
        let req = SearchRequest::new("approximate");
        let cfg = IngestConfig::default();
        assert!(matches!(explain(&idx, &req, &cfg, "d0", "/article[1]/p[1]"), Err(SearchError::NotFound(_))));
        assert!(matches!(explain(&idx, &req, &cfg, "d9", "/article[1]"), Err(SearchError::NotFound(_))));
        assert!(matches!(explain(&idx, &req, &cfg, "d0", "/article[1]/sec[4]"), Err(SearchError::NotFound(_))));
    }
}

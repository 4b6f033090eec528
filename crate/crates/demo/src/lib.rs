//! WebAssembly bindings for the browser demo.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` with
//! a JSON payload, so the logic can be tested natively.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use xcas_core::engine::{self, SearchRequest};
use xcas_core::index::ContextIndex;
use xcas_core::ingest::{parse_document, IngestConfig};
use xcas_core::nexi::{parse_nexi, translate, ContentMode, Interpretation, Strategy};
use xcas_core::path_sim::{align, CostMatrix, EditOp};

#[derive(Deserialize)]
pub struct InputDocument {
    pub name: String,
    pub xml: String,
}

#[derive(Serialize)]
struct Aligned {
    distance: f64,
    similarity: f64,
    subsequence: bool,
    script: Vec<EditOp>,
}

#[derive(Serialize)]
struct Hit {
    rank: usize,
    doc: String,
    path: String,
    score: f64,
}

#[derive(Serialize)]
struct SearchOutput {
    query: String,
    documents: usize,
    skipped: Vec<String>,
    hits: Vec<Hit>,
}

fn split_path(p: &str) -> Vec<&str> {
    p.split('/').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn strategy(interpretation: &str, phrases: &str, beta: f64) -> Result<Strategy, String> {
    let i: Interpretation = interpretation.parse()?;
    let m: ContentMode = phrases.parse()?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(format!("beta must be within [0, 1], got {beta}"));
    }
    let mut s = Strategy::new(i, m);
    s.beta = beta;
    Ok(s)
}

/// Aligns a query path against a context path, e.g. `/article//sec` and `/article/bdy/sec`.
pub fn align_paths_json(query: &str, context: &str, costs: &str) -> Result<String, String> {
    let q = split_path(query);
    let c = split_path(context);
    if q.is_empty() {
        return Err("query path is empty".into());
    }
    let costs: CostMatrix = if costs.trim().is_empty() {
        CostMatrix::default()
    } else {
        costs.parse()?
    };
    let a = align(&q, &c, &costs);
    let out = Aligned {
        distance: a.distance,
        similarity: a.similarity,
        subsequence: xcas_core::path_sim::is_subsequence(&q, &c),
        script: a.script,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Indexes `docs` (a JSON array of `{name, xml}`) in memory and runs `query`.
pub fn search_corpus_json(
    docs: &str,
    query: &str,
    interpretation: &str,
    phrases: &str,
    beta: f64,
    top: usize,
) -> Result<String, String> {
    let docs: Vec<InputDocument> = serde_json::from_str(docs).map_err(|e| format!("documents: {e}"))?;
    let cfg = IngestConfig::default();
    let mut index = ContextIndex::with_tag_classes(cfg.tag_classes.clone());
    let mut skipped = Vec::new();
    for d in &docs {
        let ok = parse_document(&d.name, d.xml.as_bytes(), &cfg)
            .map_err(|e| e.to_string())
            .and_then(|tree| index.index_document(&tree).map_err(|e| e.to_string()));
        if let Err(e) = ok {
            skipped.push(format!("{}: {e}", d.name));
        }
    }
    if index.doc_count() == 0 {
        return Err("no documents could be indexed".into());
    }
    let mut req = SearchRequest::new(query);
    req.strategy = strategy(interpretation, phrases, beta)?;
    req.cutoff = top.max(1);
    let compiled = engine::compile(&req, &cfg).map_err(|e| e.to_string())?;
    let list = engine::search(&index, &req, &cfg).map_err(|e| e.to_string())?;
    let out = SearchOutput {
        query: compiled.to_string(),
        documents: index.doc_count(),
        skipped,
        hits: list
            .iter()
            .map(|h| Hit {
                rank: h.rank,
                doc: h.locator.clone(),
                path: h.path.clone(),
                score: h.score,
            })
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Translates a NEXI topic under one strategy into an operator tree.
pub fn translate_topic_text(topic: &str, interpretation: &str, phrases: &str, beta: f64) -> Result<String, String> {
    let t = parse_nexi(topic).map_err(|e| e.to_string())?;
    let s = strategy(interpretation, phrases, beta)?;
    translate(&t, &s, &IngestConfig::default())
        .map(|q| q.to_string())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn align_paths(query: &str, context: &str, costs: &str) -> Result<String, JsError> {
    align_paths_json(query, context, costs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn search_corpus(
    docs: &str,
    query: &str,
    interpretation: &str,
    phrases: &str,
    beta: f64,
    top: usize,
) -> Result<String, JsError> {
    search_corpus_json(docs, query, interpretation, phrases, beta, top).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn translate_topic(topic: &str, interpretation: &str, phrases: &str, beta: f64) -> Result<String, JsError> {
    translate_topic_text(topic, interpretation, phrases, beta).map_err(|e| JsError::new(&e))
}

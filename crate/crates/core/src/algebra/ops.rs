//! The score-combination operators, as pure functions over result sets.

use std::collections::BTreeMap;

use super::{ElementKey, ResultSet, ScoredElement};
use crate::index::{ContextId, DocId};

/// Union; each element takes the maximum value over the children holding it.
pub fn or(children: &[ResultSet]) -> ResultSet {
    let mut out: BTreeMap<ElementKey, ScoredElement> = BTreeMap::new();
    for child in children {
        for e in child.iter() {
            out.entry(e.key())
                .and_modify(|cur| cur.value = cur.value.max(e.value))
                .or_insert(*e);
        }
    }
    out.into_values().collect()
}

/// Intersection; each element takes the minimum value over the children.
pub fn and(children: &[ResultSet]) -> ResultSet {
    let Some((first, rest)) = children.split_first() else {
        return ResultSet::new();
    };
    first
        .iter()
        .filter_map(|e| {
            rest.iter()
                .try_fold(e.value, |acc, r| r.value(&e.key()).map(|v| acc.min(v)))
                .map(|v| e.with_value(v))
        })
        .collect()
}

/// `max(0, v0 - v1)` over the elements of `r0`; missing in `r1` counts as 0.
pub fn without(r0: &ResultSet, r1: &ResultSet) -> ResultSet {
    r0.iter()
        .map(|e| e.with_value((e.value - r1.value(&e.key()).unwrap_or(0.0)).max(0.0)))
        .collect()
}

/// Strict structural restriction: `min(content, delta)` with `delta` in {0, 1}.
pub fn within(children: &[ResultSet], mut matches: impl FnMut(ContextId) -> bool) -> ResultSet {
    and(children)
        .iter()
        .filter(|e| matches(e.context_id))
        .copied()
        .collect()
}

/// Vague structural weighting: `beta * sigma + (1 - beta) * content`.
pub fn within_vague(children: &[ResultSet], beta: f64, mut sigma: impl FnMut(ContextId) -> f64) -> ResultSet {
    and(children)
        .iter()
        .map(|e| e.with_value(beta * sigma(e.context_id) + (1.0 - beta) * e.value))
        .collect()
}

/// Discrimination weight of a sub-query found in `doc_freq` of `total_docs` documents.
pub fn discrimination_weight(doc_freq: u64, total_docs: u64) -> f64 {
    1.0 - ((1.0 + doc_freq as f64) / (1.0 + total_docs as f64)).ln()
}

/// One argument of `same+`: its result set and the number of documents it occurs in.
#[derive(Debug, Clone)]
pub struct WeightedArg {
    pub doc_freq: u64,
    pub results: ResultSet,
}

/// `tau * sum_k lambda_k * v_k`, with `tau` normalizing over all arguments so
/// an element found by every argument with value 1 scores exactly 1.
pub fn same_plus(total_docs: u64, args: &[WeightedArg]) -> ResultSet {
    let lambdas: Vec<f64> = args
        .iter()
        .map(|a| discrimination_weight(a.doc_freq, total_docs))
        .collect();
    let tau = 1.0 / lambdas.iter().sum::<f64>();
    let mut acc: BTreeMap<ElementKey, ScoredElement> = BTreeMap::new();
    for (arg, lambda) in args.iter().zip(&lambdas) {
        for e in arg.results.iter() {
            acc.entry(e.key())
                .and_modify(|cur| cur.value += lambda * e.value)
                .or_insert_with(|| e.with_value(lambda * e.value));
        }
    }
    acc.into_values()
        .map(|e| {
            let v = e.value * tau;
            // rounding can push a full match a hair above 1
            e.with_value(v.min(1.0))
        })
        .collect()
}

/// Keeps targets whose document holds a support element and averages the
/// target value with the best support value of that document.
pub fn filter(support: &ResultSet, target: &ResultSet) -> ResultSet {
    let mut best: BTreeMap<DocId, f64> = BTreeMap::new();
    for e in support.iter() {
        let v = best.entry(e.doc_id).or_insert(0.0);
        *v = v.max(e.value);
    }
    target
        .iter()
        .filter_map(|e| best.get(&e.doc_id).map(|s| e.with_value((e.value + s) / 2.0)))
        .collect()
}

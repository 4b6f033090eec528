//! Structural similarity between a query path and indexed context paths.
//!
//! The distance is a Levenshtein-style edit distance over tag sequences with
//! separate costs for deleting a context tag, inserting a query tag and
//! substituting one for the other. It measures the cheapest way to turn the
//! context into the query, so it is not symmetric in general. Under the default
//! costs (free deletion, unit insertion and mismatch) a query scores 0 exactly
//! when its tags form a subsequence of the context, which models the
//! descendant-only steps of NEXI paths.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::QueryError;

/// Tolerance used when comparing similarities computed in floating point.
pub const SIMILARITY_EPS: f64 = 1e-12;

/// Pluggable substitution cost for two different tags, in `[0, 1]`.
pub type SubstitutionFn = Arc<dyn Fn(&str, &str) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CostMatrix {
    /// Cost of dropping a context tag.
    pub delete: f64,
    /// Cost of inserting a query tag that the context lacks.
    pub insert: f64,
    /// Cost of aligning two different tags when no custom function is set.
    pub mismatch: f64,
    custom: Option<SubstitutionFn>,
}

impl CostMatrix {
    pub const MAX_COST: f64 = 1.0;

    pub fn new(delete: f64, insert: f64, mismatch: f64) -> Result<Self, String> {
        for (name, v) in [("delete", delete), ("insert", insert), ("substitute", mismatch)] {
            if !(0.0..=Self::MAX_COST).contains(&v) {
                return Err(format!("{name} cost {v} outside [0, 1]"));
            }
        }
        Ok(CostMatrix {
            delete,
            insert,
            mismatch,
            custom: None,
        })
    }

    /// Replaces the mismatch cost with `f`. Equal tags still cost 0; results
    /// are clamped into `[0, 1]`.
    pub fn with_substitution(mut self, f: SubstitutionFn) -> Self {
        self.custom = Some(f);
        self
    }

    #[inline]
    pub fn substitute(&self, query_tag: &str, context_tag: &str) -> f64 {
        if query_tag == context_tag {
            return 0.0;
        }
        match &self.custom {
            Some(f) => f(query_tag, context_tag).clamp(0.0, Self::MAX_COST),
            None => self.mismatch,
        }
    }
}

impl Default for CostMatrix {
    fn default() -> Self {
        CostMatrix {
            delete: 0.0,
            insert: 1.0,
            mismatch: 1.0,
            custom: None,
        }
    }
}

impl fmt::Debug for CostMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostMatrix")
            .field("delete", &self.delete)
            .field("insert", &self.insert)
            .field("mismatch", &self.mismatch)
            .field("custom", &self.custom.is_some())
            .finish()
    }
}

impl fmt::Display for CostMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delete={} insert={} substitute={}",
            self.delete, self.insert, self.mismatch
        )
    }
}

/// Parses `delete=0 insert=1 substitute=1`; missing keys keep their defaults.
impl FromStr for CostMatrix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let d = CostMatrix::default();
        let (mut delete, mut insert, mut mismatch) = (d.delete, d.insert, d.mismatch);
        for item in s.split(|c: char| c.is_whitespace() || c == ',').filter(|i| !i.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {item:?}"))?;
            let v: f64 = v.parse().map_err(|_| format!("bad number in {item:?}"))?;
            match k {
                "delete" => delete = v,
                "insert" => insert = v,
                "substitute" => mismatch = v,
                _ => return Err(format!("unknown cost {k:?}")),
            }
        }
        CostMatrix::new(delete, insert, mismatch)
    }
}

/// One step of a query path. The attribute condition is carried through
/// parsing but never evaluated; it always counts as absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryStep {
    pub tag: String,
    pub condition: Option<String>,
}

/// Sequence of descendant-axis steps, e.g. `//article//sec`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryPath(Vec<QueryStep>);

impl QueryPath {
    pub fn new<S: Into<String>>(tags: impl IntoIterator<Item = S>) -> Result<Self, QueryError> {
        let steps: Vec<QueryStep> = tags
            .into_iter()
            .map(|t| QueryStep {
                tag: t.into(),
                condition: None,
            })
            .collect();
        if steps.is_empty() {
            return Err(QueryError::EmptyPath);
        }
        Ok(QueryPath(steps))
    }

    pub fn steps(&self) -> &[QueryStep] {
        &self.0
    }

    pub fn tags(&self) -> Vec<&str> {
        self.0.iter().map(|s| s.tag.as_str()).collect()
    }

    pub fn last(&self) -> &str {
        &self.0[self.0.len() - 1].tag
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies a tag rewrite (tag-class mapping) to every step.
    pub fn map_tags(&self, f: impl Fn(&str) -> String) -> QueryPath {
        QueryPath(
            self.0
                .iter()
                .map(|s| QueryStep {
                    tag: f(&s.tag),
                    condition: s.condition.clone(),
                })
                .collect(),
        )
    }

    pub fn concat(&self, tail: &[String]) -> QueryPath {
        let mut steps = self.0.clone();
        steps.extend(tail.iter().map(|t| QueryStep {
            tag: t.clone(),
            condition: None,
        }));
        QueryPath(steps)
    }
}

impl fmt::Display for QueryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "//{}", s.tag)?;
        }
        Ok(())
    }
}

/// One elementary operation of an optimal edit script.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    Keep { tag: String },
    Substitute { context: String, query: String, cost: f64 },
    Delete { tag: String, cost: f64 },
    Insert { tag: String, cost: f64 },
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Keep { tag } => write!(f, "={tag}"),
            EditOp::Substitute { context, query, cost } => write!(f, "~{context}->{query}({cost})"),
            EditOp::Delete { tag, cost } => write!(f, "-{tag}({cost})"),
            EditOp::Insert { tag, cost } => write!(f, "+{tag}({cost})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alignment {
    pub distance: f64,
    pub similarity: f64,
    pub script: Vec<EditOp>,
}

fn table<Q: AsRef<str>, C: AsRef<str>>(query: &[Q], context: &[C], costs: &CostMatrix) -> Vec<Vec<f64>> {
    let (n, m) = (context.len(), query.len());
    let mut d = vec![vec![0.0; m + 1]; n + 1];
    for i in 1..=n {
        d[i][0] = d[i - 1][0] + costs.delete;
    }
    for j in 1..=m {
        d[0][j] = d[0][j - 1] + costs.insert;
    }
    for i in 1..=n {
        let c = context[i - 1].as_ref();
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + costs.substitute(query[j - 1].as_ref(), c);
            let del = d[i - 1][j] + costs.delete;
            let ins = d[i][j - 1] + costs.insert;
            d[i][j] = sub.min(del).min(ins);
        }
    }
    d
}

/// Minimal cost of transforming `context` into `query`.
pub fn edit_distance<Q: AsRef<str>, C: AsRef<str>>(query: &[Q], context: &[C], costs: &CostMatrix) -> f64 {
    // two rolling rows over the query
    let m = query.len();
    let mut prev: Vec<f64> = (0..=m).map(|j| j as f64 * costs.insert).collect();
    let mut cur = vec![0.0; m + 1];
    for c in context {
        let c = c.as_ref();
        cur[0] = prev[0] + costs.delete;
        for j in 1..=m {
            let sub = prev[j - 1] + costs.substitute(query[j - 1].as_ref(), c);
            cur[j] = sub.min(prev[j] + costs.delete).min(cur[j - 1] + costs.insert);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

pub fn similarity_from_distance(distance: f64) -> f64 {
    1.0 / (1.0 + distance)
}

pub fn similarity<Q: AsRef<str>, C: AsRef<str>>(query: &[Q], context: &[C], costs: &CostMatrix) -> f64 {
    similarity_from_distance(edit_distance(query, context, costs))
}

/// Distance plus one optimal edit script, in context order.
pub fn align<Q: AsRef<str>, C: AsRef<str>>(query: &[Q], context: &[C], costs: &CostMatrix) -> Alignment {
    let d = table(query, context, costs);
    let (mut i, mut j) = (context.len(), query.len());
    let mut script = Vec::new();
    while i > 0 || j > 0 {
        let here = d[i][j];
        if i > 0 && j > 0 {
            let (q, c) = (query[j - 1].as_ref(), context[i - 1].as_ref());
            let sub = costs.substitute(q, c);
            if (d[i - 1][j - 1] + sub - here).abs() <= SIMILARITY_EPS {
                script.push(if q == c {
                    EditOp::Keep { tag: c.to_string() }
                } else {
                    EditOp::Substitute {
                        context: c.to_string(),
                        query: q.to_string(),
                        cost: sub,
                    }
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && (d[i - 1][j] + costs.delete - here).abs() <= SIMILARITY_EPS {
            script.push(EditOp::Delete {
                tag: context[i - 1].as_ref().to_string(),
                cost: costs.delete,
            });
            i -= 1;
        } else {
            script.push(EditOp::Insert {
                tag: query[j - 1].as_ref().to_string(),
                cost: costs.insert,
            });
            j -= 1;
        }
    }
    script.reverse();
    let distance = d[context.len()][query.len()];
    Alignment {
        distance,
        similarity: similarity_from_distance(distance),
        script,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestMatch<K> {
    /// 0 when there were no candidates.
    pub similarity: f64,
    pub witness: Option<K>,
}

/// Highest similarity over a candidate set. Ties keep the first candidate, so
/// callers iterate in dictionary-id order.
pub fn best_similarity<'c, K, Q, C, I>(query: &[Q], candidates: I, costs: &CostMatrix) -> BestMatch<K>
where
    Q: AsRef<str>,
    C: AsRef<str> + 'c,
    I: IntoIterator<Item = (K, &'c [C])>,
{
    let mut best = BestMatch {
        similarity: 0.0,
        witness: None,
    };
    for (key, context) in candidates {
        let s = similarity(query, context, costs);
        if best.witness.is_none() || s > best.similarity {
            best = BestMatch {
                similarity: s,
                witness: Some(key),
            };
        }
    }
    best
}

/// Whether `query` is a (not necessarily contiguous) subsequence of `context`.
pub fn is_subsequence<Q: AsRef<str>, C: AsRef<str>>(query: &[Q], context: &[C]) -> bool {
    let mut it = context.iter();
    query
        .iter()
        .all(|q| it.any(|c| c.as_ref() == q.as_ref()))
}

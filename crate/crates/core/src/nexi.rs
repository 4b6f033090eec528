//! The NEXI content-and-structure subset `//A[B]` and `//A[B]//C[D]`, and its
//! translation into operator trees under the retrieval strategies.
//!
//! ```text
//! //article[about(./bb, Baeza-Yates) and about(./sec, string matching)]//sec[about(., approximate algorithm)]
//! ```

use std::fmt;
use std::str::FromStr;

use quick_xml::events::Event;
use quick_xml::reader::Reader;
use quick_xml::XmlVersion;

use crate::algebra::{QueryTree, SeqItem, DEFAULT_BETA};
use crate::error::QueryError;
use crate::ingest::{predefined_entity, tokenize, IngestConfig};
use crate::path_sim::QueryPath;

/// `about(./rel, phrase)`; an empty `rel` is the context step itself (`.`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AboutClause {
    pub rel: Vec<String>,
    pub phrase: String,
}

/// One `//path[about(...) and ...]` step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NexiStep {
    pub path: Vec<String>,
    pub clauses: Vec<AboutClause>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopicForm {
    /// `//A[B]`
    Simple,
    /// `//A[B]//C[D]`
    Complex,
}

/// A parsed content-and-structure topic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasTopic {
    steps: Vec<NexiStep>,
}

/// A support or target condition with its absolute path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathClause {
    pub path: Vec<String>,
    pub phrases: Vec<String>,
}

impl CasTopic {
    pub fn steps(&self) -> &[NexiStep] {
        &self.steps
    }

    pub fn form(&self) -> TopicForm {
        if self.steps.len() == 2 {
            TopicForm::Complex
        } else {
            TopicForm::Simple
        }
    }

    /// Absolute tags of each step, concatenated up to and including step `i`.
    fn prefix(&self, i: usize) -> Vec<String> {
        self.steps[..=i].iter().flat_map(|s| s.path.iter().cloned()).collect()
    }

    /// Index of the clause in the last step that acts as the target.
    ///
    /// `about(., ...)` clauses of the last step are the target; when there is
    /// none, the first clause of the last step takes that role.
    fn target_clauses(&self) -> Vec<usize> {
        let last = self.steps.last().expect("parsed topics have a step");
        let dots: Vec<usize> = (0..last.clauses.len()).filter(|&i| last.clauses[i].rel.is_empty()).collect();
        if dots.is_empty() {
            vec![0]
        } else {
            dots
        }
    }

    pub fn target(&self) -> PathClause {
        let li = self.steps.len() - 1;
        let idx = self.target_clauses();
        let last = &self.steps[li];
        let mut path = self.prefix(li);
        path.extend(last.clauses[idx[0]].rel.iter().cloned());
        PathClause {
            path,
            phrases: idx.iter().map(|&i| last.clauses[i].phrase.clone()).collect(),
        }
    }

    pub fn target_path(&self) -> Vec<String> {
        self.target().path
    }

    pub fn target_about(&self) -> Vec<String> {
        self.target().phrases
    }

    /// Every non-target clause, with its path made absolute.
    pub fn support_clauses(&self) -> Vec<PathClause> {
        let li = self.steps.len() - 1;
        let target = self.target_clauses();
        let mut out = Vec::new();
        for (si, step) in self.steps.iter().enumerate() {
            let prefix = self.prefix(si);
            for (ci, c) in step.clauses.iter().enumerate() {
                if si == li && target.contains(&ci) {
                    continue;
                }
                let mut path = prefix.clone();
                path.extend(c.rel.iter().cloned());
                out.push(PathClause {
                    path,
                    phrases: vec![c.phrase.clone()],
                });
            }
        }
        out
    }
}

impl fmt::Display for CasTopic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            for t in &step.path {
                write!(f, "//{t}")?;
            }
            f.write_str("[")?;
            for (i, c) in step.clauses.iter().enumerate() {
                if i > 0 {
                    f.write_str(" and ")?;
                }
                f.write_str("about(.")?;
                for t in &c.rel {
                    write!(f, "/{t}")?;
                }
                write!(f, ", {})", c.phrase)?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl FromStr for CasTopic {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_nexi(s)
    }
}

struct Cursor<'a> {
    src: &'a str,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.at..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.at = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.at += s.len();
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            position: self.at,
            message: message.into(),
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), QueryError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected {s:?}")))
        }
    }

    fn name(&mut self) -> Result<String, QueryError> {
        self.skip_ws();
        let r = self.rest();
        match r.chars().next() {
            Some('*') => return Err(QueryError::Unsupported("wildcard element step".into())),
            Some('(') => return Err(QueryError::Unsupported("tag alternation".into())),
            Some('@') => return Err(QueryError::Unsupported("attribute step".into())),
            _ => {}
        }
        let len = r
            .find(|c: char| !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')))
            .unwrap_or(r.len());
        if len == 0 {
            return Err(self.err("expected an element name"));
        }
        self.at += len;
        Ok(r[..len].to_string())
    }

    /// `/a//b` style tag sequence; at least one step when `required`.
    fn tags(&mut self, required: bool) -> Result<Vec<String>, QueryError> {
        let mut tags = Vec::new();
        loop {
            self.skip_ws();
            if self.rest().starts_with('/') {
                self.at += if self.rest().starts_with("//") { 2 } else { 1 };
                tags.push(self.name()?);
            } else {
                break;
            }
        }
        if required && tags.is_empty() {
            return Err(self.err("expected a path starting with '/'"));
        }
        Ok(tags)
    }

    fn about(&mut self) -> Result<AboutClause, QueryError> {
        self.skip_ws();
        let r = self.rest();
        if r.starts_with("not") && r[3..].trim_start().starts_with('(') {
            return Err(QueryError::Unsupported("not()".into()));
        }
        if r.starts_with('@') {
            return Err(QueryError::Unsupported("attribute predicate".into()));
        }
        if !self.eat("about") {
            return Err(self.err("expected about("));
        }
        self.expect("(")?;
        self.expect(".")?;
        let rel = self.tags(false)?;
        self.expect(",")?;
        let start = self.at;
        let mut quoted = false;
        let mut end = None;
        for (i, c) in self.rest().char_indices() {
            match c {
                '"' => quoted = !quoted,
                ')' if !quoted => {
                    end = Some(i);
                    break;
                }
                '(' if !quoted => return Err(QueryError::Unsupported("parenthesis inside about()".into())),
                _ => {}
            }
        }
        let Some(end) = end else {
            self.at = self.src.len();
            return Err(self.err("unterminated about("));
        };
        let phrase = self.src[start..start + end].trim().to_string();
        if phrase.is_empty() {
            return Err(self.err("empty about() phrase"));
        }
        self.at = start + end + 1;
        Ok(AboutClause { rel, phrase })
    }

    fn step(&mut self) -> Result<NexiStep, QueryError> {
        let path = self.tags(true)?;
        self.expect("[")?;
        let mut clauses = vec![self.about()?];
        loop {
            self.skip_ws();
            if self.eat("]") {
                break;
            }
            let word: String = self.rest().chars().take_while(|c| c.is_alphabetic()).collect();
            match word.to_ascii_lowercase().as_str() {
                "and" => {
                    self.at += word.len();
                    clauses.push(self.about()?);
                }
                "or" => return Err(QueryError::Unsupported("or between about clauses".into())),
                _ => {
                    if self.rest().starts_with(['<', '>', '=', '!', '+', '-']) {
                        return Err(QueryError::Unsupported("arithmetic comparison".into()));
                    }
                    return Err(self.err("expected 'and' or ']'"));
                }
            }
        }
        Ok(NexiStep { path, clauses })
    }
}

/// Parses a castitle in the supported subset.
pub fn parse_nexi(text: &str) -> Result<CasTopic, QueryError> {
    let mut c = Cursor { src: text, at: 0 };
    let mut steps = vec![c.step()?];
    c.skip_ws();
    if !c.rest().is_empty() {
        steps.push(c.step()?);
        c.skip_ws();
        if c.rest().starts_with('/') {
            return Err(QueryError::Unsupported("more than two filtered steps".into()));
        }
        if !c.rest().is_empty() {
            return Err(c.err("trailing input"));
        }
    }
    Ok(CasTopic { steps })
}

/// Reads the castitle (and topic id, when present) from an INEX topic file.
pub fn read_topic_file(xml: &str) -> Result<(Option<String>, String), QueryError> {
    let mut reader = Reader::from_str(xml);
    let mut id = None;
    let mut inside = false;
    let mut castitle: Option<String> = None;
    let bad = |e: &dyn fmt::Display| QueryError::Syntax {
        position: 0,
        message: format!("topic file: {e}"),
    };
    loop {
        match reader.read_event().map_err(|e| bad(&e))? {
            Event::Start(e) => {
                let name = e.name().as_ref().to_string();
                if name == "inex_topic" || name == "topic" {
                    for a in e.attributes().flatten() {
                        let key = a.key.as_ref();
                        if key == "topic_id" || key == "id" {
                            id = Some(a.normalized_value(XmlVersion::default()).map_err(|e| bad(&e))?.to_string());
                        }
                    }
                }
                inside = name == "castitle";
                if inside {
                    castitle = Some(String::new());
                }
            }
            Event::Text(t) if inside => castitle.as_mut().unwrap().push_str(&t.xml10_content()),
            Event::CData(t) if inside => castitle.as_mut().unwrap().push_str(&t.xml10_content()),
            Event::GeneralRef(r) if inside => {
                let expanded = match r.resolve_char_ref() {
                    Ok(Some(c)) => c.to_string(),
                    _ => predefined_entity(&r.xml10_content()).to_string(),
                };
                castitle.as_mut().unwrap().push_str(&expanded);
            }
            Event::End(_) => {
                if inside {
                    break;
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    match castitle {
        Some(t) if !t.trim().is_empty() => Ok((id, t.trim().to_string())),
        _ => Err(QueryError::Syntax {
            position: 0,
            message: "topic file has no castitle".into(),
        }),
    }
}

/// Stems of a phrase through the indexing pipeline.
pub fn phrase_to_terms(phrase: &str, config: &IngestConfig) -> Vec<String> {
    tokenize(phrase, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    /// Content only; no structural operator.
    Co,
    VagueTargetVagueSupport,
    VagueTargetStrictSupport,
    StrictTargetVagueSupport,
    StrictTargetStrictSupport,
}

impl Interpretation {
    pub const ALL: [Interpretation; 5] = [
        Interpretation::Co,
        Interpretation::VagueTargetVagueSupport,
        Interpretation::VagueTargetStrictSupport,
        Interpretation::StrictTargetVagueSupport,
        Interpretation::StrictTargetStrictSupport,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Interpretation::Co => "co",
            Interpretation::VagueTargetVagueSupport => "vv",
            Interpretation::VagueTargetStrictSupport => "vs",
            Interpretation::StrictTargetVagueSupport => "sv",
            Interpretation::StrictTargetStrictSupport => "ss",
        }
    }

    /// (target vague, support vague); `None` for content only.
    fn vagueness(self) -> Option<(bool, bool)> {
        match self {
            Interpretation::Co => None,
            Interpretation::VagueTargetVagueSupport => Some((true, true)),
            Interpretation::VagueTargetStrictSupport => Some((true, false)),
            Interpretation::StrictTargetVagueSupport => Some((false, true)),
            Interpretation::StrictTargetStrictSupport => Some((false, false)),
        }
    }
}

impl FromStr for Interpretation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Interpretation::ALL
            .into_iter()
            .find(|i| i.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy {s:?} (expected co, vv, vs, sv or ss)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentMode {
    /// Every term is a separate `SAME+` argument.
    SamePlus,
    /// Quoted phrases and hyphenated compounds become `SEQ` patterns.
    Seq,
}

impl FromStr for ContentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sameplus" | "same+" => Ok(ContentMode::SamePlus),
            "seq" => Ok(ContentMode::Seq),
            _ => Err(format!("unknown phrase mode {s:?} (expected seq or sameplus)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    pub interpretation: Interpretation,
    pub mode: ContentMode,
    pub beta: f64,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            interpretation: Interpretation::VagueTargetVagueSupport,
            mode: ContentMode::SamePlus,
            beta: DEFAULT_BETA,
        }
    }
}

impl Strategy {
    pub fn new(interpretation: Interpretation, mode: ContentMode) -> Self {
        Strategy {
            interpretation,
            mode,
            ..Strategy::default()
        }
    }
}

struct PhraseItem {
    negated: bool,
    text: String,
}

fn phrase_items(phrase: &str) -> Vec<PhraseItem> {
    let mut items = Vec::new();
    let mut chars = phrase.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut negated = false;
        if c == '-' || c == '+' {
            negated = c == '-';
            chars.next();
        }
        if chars.peek() == Some(&'"') {
            chars.next();
            let text: String = chars.by_ref().take_while(|&c| c != '"').collect();
            items.push(PhraseItem { negated, text });
        } else {
            let mut text = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                text.push(c);
                chars.next();
            }
            items.push(PhraseItem { negated, text });
        }
    }
    items
}

fn item_trees(item: &PhraseItem, mode: ContentMode, config: &IngestConfig) -> Vec<QueryTree> {
    let stems = phrase_to_terms(&item.text, config);
    if mode == ContentMode::Seq && stems.len() > 1 {
        return vec![QueryTree::Seq(stems.into_iter().map(SeqItem::Term).collect())];
    }
    stems.into_iter().map(QueryTree::Term).collect()
}

/// Content part of a clause: `SAME+` over the positive terms, minus any
/// `-term`s through `WITHOUT`. `None` when nothing indexable remains.
fn content(phrases: &[String], mode: ContentMode, config: &IngestConfig) -> Option<QueryTree> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for item in phrases.iter().flat_map(|p| phrase_items(p)) {
        let trees = item_trees(&item, mode, config);
        if item.negated { &mut neg } else { &mut pos }.extend(trees);
    }
    if pos.is_empty() {
        return None;
    }
    let same = QueryTree::SamePlus(pos);
    Some(if neg.is_empty() {
        same
    } else {
        QueryTree::Without(Box::new(same), Box::new(QueryTree::Or(neg)))
    })
}

fn structural(
    clause: &PathClause,
    vague: Option<bool>,
    strategy: &Strategy,
    config: &IngestConfig,
) -> Result<Option<QueryTree>, QueryError> {
    let Some(body) = content(&clause.phrases, strategy.mode, config) else {
        return Ok(None);
    };
    Ok(Some(match vague {
        None => body,
        Some(true) => QueryTree::InPlus {
            path: QueryPath::new(clause.path.clone())?,
            beta: strategy.beta,
            children: vec![body],
        },
        Some(false) => QueryTree::In {
            path: QueryPath::new(clause.path.clone())?,
            children: vec![body],
        },
    }))
}

/// Builds the operator tree for a topic under a strategy.
///
/// Support clauses are joined by `AND` and filter the target clause. Clauses
/// left without any indexable term are dropped; a target with none is an error.
pub fn translate(topic: &CasTopic, strategy: &Strategy, config: &IngestConfig) -> Result<QueryTree, QueryError> {
    if !(0.0..=1.0).contains(&strategy.beta) {
        return Err(QueryError::Beta(strategy.beta));
    }
    let (target_vague, support_vague) = match strategy.interpretation.vagueness() {
        Some((t, s)) => (Some(t), Some(s)),
        None => (None, None),
    };
    let target = structural(&topic.target(), target_vague, strategy, config)?.ok_or_else(|| QueryError::Syntax {
        position: 0,
        message: "target clause has no indexable terms".into(),
    })?;
    let mut supports = Vec::new();
    for clause in topic.support_clauses() {
        if let Some(t) = structural(&clause, support_vague, strategy, config)? {
            supports.push(t);
        }
    }
    let tree = match supports.len() {
        0 => target,
        1 => QueryTree::Filter {
            support: Box::new(supports.remove(0)),
            target: Box::new(target),
        },
        _ => QueryTree::Filter {
            support: Box::new(QueryTree::And(supports)),
            target: Box::new(target),
        },
    };
    tree.validate()?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_query;

    const T280: &str = "//article[ about(./bb, Baeza-Yates) and about(./sec, string matching)]//sec[about(., approximate algorithm)]";

    fn cfg() -> IngestConfig {
        IngestConfig::default()
    }

    fn tags(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn topic_280_structure() {
        let t = parse_nexi(T280).unwrap();
        assert_eq!(t.form(), TopicForm::Complex);
        assert_eq!(t.target_path(), tags(&["article", "sec"]));
        assert_eq!(t.target_about(), ["approximate algorithm"]);
        let s = t.support_clauses();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].path, tags(&["article", "bb"]));
        assert_eq!(s[0].phrases, ["Baeza-Yates"]);
        assert_eq!(s[1].path, tags(&["article", "sec"]));
        assert_eq!(s[1].phrases, ["string matching"]);
    }

    #[test]
    fn minimal_simple_topic() {
        let t = parse_nexi("//article[about(., xml)]").unwrap();
        assert_eq!(t.form(), TopicForm::Simple);
        assert_eq!(t.target_path(), tags(&["article"]));
        assert_eq!(t.target_about(), ["xml"]);
        assert!(t.support_clauses().is_empty());
        let co = translate(&t, &Strategy::new(Interpretation::Co, ContentMode::SamePlus), &cfg()).unwrap();
        assert_eq!(co, QueryTree::SamePlus(vec![QueryTree::Term("xml".into())]));
    }

    #[test]
    fn simple_form_without_dot_clause() {
        let t = parse_nexi("//article[about(.//bb, Baeza) and about(./fm, xml)]").unwrap();
        assert_eq!(t.target_path(), tags(&["article", "bb"]));
        assert_eq!(t.support_clauses()[0].path, tags(&["article", "fm"]));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_nexi("//a[about("), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse_nexi("//a[about(., x) or about(., y)]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(parse_nexi("//a[not(about(., x))]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(parse_nexi("//a[@year > 2000]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(parse_nexi("//a[about(., x) and .//yr > 2000]"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse_nexi("//a[about(., x) > 3]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(parse_nexi("//*[about(., x)]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(parse_nexi("//article//(sec|p)[about(., x)]"), Err(QueryError::Unsupported(_))));
        assert!(matches!(
            parse_nexi("//a[about(., x)]//b[about(., y)]//c[about(., z)]"),
            Err(QueryError::Unsupported(_))
        ));
        assert!(matches!(parse_nexi("//a[about(., )]"), Err(QueryError::Syntax { .. })));
        assert!(parse_nexi("").is_err());
    }

    #[test]
    fn print_round_trips() {
        for src in [
            T280,
            "//article[about(., xml)]",
            "//article//bdy[about(.//p, \"information retrieval\" -web) and about(./sec, ranking)]",
        ] {
            let t = parse_nexi(src).unwrap();
            assert_eq!(parse_nexi(&t.to_string()).unwrap(), t, "{t}");
        }
    }

    #[test]
    fn phrase_terms() {
        assert_eq!(phrase_to_terms("Baeza-Yates", &cfg()), ["baeza", "yate"]);
        assert_eq!(phrase_to_terms("approximate algorithm", &cfg()), ["approxim", "algorithm"]);
        assert!(phrase_to_terms("", &cfg()).is_empty());
    }

    fn table_row(interp: Interpretation, mode: ContentMode) -> QueryTree {
        translate(&parse_nexi(T280).unwrap(), &Strategy::new(interp, mode), &cfg()).unwrap()
    }

    #[test]
    fn translation_rows() {
        use ContentMode::*;
        use Interpretation::*;
        let expect = |s: &str| parse_query(s, &cfg()).unwrap();
        assert_eq!(
            table_row(Co, Seq),
            expect("(FILTER (AND (SAME+ (SEQ Baeza Yates)) (SAME+ string matching)) (SAME+ approximate algorithm))")
        );
        assert_eq!(
            table_row(VagueTargetVagueSupport, SamePlus),
            expect(
                "(FILTER (AND (IN+ [/article/bb/] (SAME+ Baeza Yates)) (IN+ [/article/sec/] (SAME+ string matching))) \
                 (IN+ [/article/sec/] (SAME+ approximate algorithm)))"
            )
        );
        assert_eq!(
            table_row(StrictTargetVagueSupport, SamePlus),
            expect(
                "(FILTER (AND (IN+ [/article/bb/] (SAME+ Baeza Yates)) (IN+ [/article/sec/] (SAME+ string matching))) \
                 (IN [/article/sec/] (SAME+ approximate algorithm)))"
            )
        );
    }

    #[test]
    fn translation_is_total() {
        let t = parse_nexi(T280).unwrap();
        for i in Interpretation::ALL {
            for m in [ContentMode::SamePlus, ContentMode::Seq] {
                translate(&t, &Strategy::new(i, m), &cfg()).unwrap();
            }
        }
    }

    #[test]
    fn minus_terms_become_without() {
        let t = parse_nexi("//article[about(., xml -html)]").unwrap();
        let tree = translate(&t, &Strategy::new(Interpretation::Co, ContentMode::SamePlus), &cfg()).unwrap();
        assert_eq!(tree, parse_query("(WITHOUT (SAME+ xml) (OR html))", &cfg()).unwrap());
    }

    #[test]
    fn quoted_phrase_in_seq_mode() {
        let t = parse_nexi("//article[about(., \"string matching\" fast)]").unwrap();
        let seq = translate(&t, &Strategy::new(Interpretation::Co, ContentMode::Seq), &cfg()).unwrap();
        assert_eq!(seq, parse_query("(SAME+ (SEQ string matching) fast)", &cfg()).unwrap());
        let flat = translate(&t, &Strategy::new(Interpretation::Co, ContentMode::SamePlus), &cfg()).unwrap();
        assert_eq!(flat, parse_query("(SAME+ string matching fast)", &cfg()).unwrap());
    }

    #[test]
    fn stopword_only_target_is_an_error() {
        let t = parse_nexi("//article[about(., the of)]").unwrap();
        assert!(translate(&t, &Strategy::default(), &cfg()).is_err());
    }

    #[test]
    fn topic_file_castitle() {
        let xml = r#"<?xml version="1.0"?>
<inex_topic topic_id="280" query_type="CAS">
  <castitle>//article[about(./bb, Baeza-Yates) and about(./sec, string matching)]//sec[about(., approximate algorithm)]</castitle>
  <description>sections about approximate algorithms</description>
</inex_topic>"#;
        let (id, title) = read_topic_file(xml).unwrap();
        assert_eq!(id.as_deref(), Some("280"));
        assert_eq!(parse_nexi(&title).unwrap(), parse_nexi(T280).unwrap());
        assert!(read_topic_file("<inex_topic/>").is_err());
    }
}

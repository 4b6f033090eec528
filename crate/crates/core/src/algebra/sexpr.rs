//! S-expression query syntax.
//!
//! ```text
//! (FILTER (AND (IN+ [/article/bb/] (SAME+ Baeza Yates))
//!              (IN+ [/article/sec/] (SAME+ string matching)))
//!         (IN+ [/article/sec/] (SAME+ approximate algorithm)))
//! ```
//!
//! Operator names are case-insensitive. Bare words go through the indexing
//! pipeline (a word may yield zero or several stems); `"quoted"` words are
//! taken verbatim as stems. `IN+` accepts an optional beta after its path and
//! `*` is the one-token wildcard inside `SEQ`.

use super::{QueryTree, SeqItem, DEFAULT_BETA};
use crate::error::QueryError;
use crate::ingest::{tokenize, IngestConfig};
use crate::path_sim::QueryPath;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Path(Vec<String>),
    Word(String),
    Quoted(String),
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, QueryError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    let err = |position: usize, message: &str| QueryError::Syntax {
        position,
        message: message.to_string(),
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::Close));
                i += 1;
            }
            '[' => {
                let end = chars[i..]
                    .iter()
                    .position(|&(_, c)| c == ']')
                    .ok_or_else(|| err(pos, "unterminated path"))?;
                let body: String = chars[i + 1..i + end].iter().map(|&(_, c)| c).collect();
                let tags: Vec<String> = body
                    .split('/')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(str::to_string)
                    .collect();
                if tags.is_empty() {
                    return Err(err(pos, "empty path"));
                }
                out.push((pos, Tok::Path(tags)));
                i += end + 1;
            }
            '"' => {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&(_, c)| c == '"')
                    .ok_or_else(|| err(pos, "unterminated quote"))?;
                let body: String = chars[i + 1..i + 1 + end].iter().map(|&(_, c)| c).collect();
                if body.is_empty() {
                    return Err(err(pos, "empty quoted term"));
                }
                out.push((pos, Tok::Quoted(body)));
                i += end + 2;
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].1.is_whitespace() && !"()[]\"".contains(chars[i].1) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Word(word)));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    config: &'a IngestConfig,
    end: usize,
}

impl Parser<'_> {
    fn position(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            position: self.position(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn stems(&self, word: &str) -> Vec<String> {
        tokenize(word, self.config)
    }

    /// Arguments up to the closing parenthesis: sub-expressions and terms.
    fn operands(&mut self) -> Result<Vec<QueryTree>, QueryError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.bump();
                    return Ok(out);
                }
                Some(Tok::Open) => out.push(self.expr()?),
                Some(Tok::Word(w)) => {
                    let w = w.clone();
                    if w == "*" {
                        return Err(self.err("wildcard outside SEQ"));
                    }
                    self.bump();
                    out.extend(self.stems(&w).into_iter().map(QueryTree::Term));
                }
                Some(Tok::Quoted(q)) => {
                    let q = q.clone();
                    self.bump();
                    out.push(QueryTree::Term(q));
                }
                Some(Tok::Path(_)) => return Err(self.err("unexpected path")),
                None => return Err(self.err("missing ')'")),
            }
        }
    }

    fn path(&mut self) -> Result<QueryPath, QueryError> {
        match self.bump() {
            Some(Tok::Path(tags)) => QueryPath::new(tags),
            _ => {
                self.at -= 1;
                Err(self.err("expected [/path/]"))
            }
        }
    }

    fn expr(&mut self) -> Result<QueryTree, QueryError> {
        match self.bump() {
            Some(Tok::Open) => {}
            Some(Tok::Word(w)) => {
                let mut stems = self.stems(&w);
                return match stems.len() {
                    1 => Ok(QueryTree::Term(stems.remove(0))),
                    _ => Err(QueryError::Syntax {
                        position: self.toks[self.at - 1].0,
                        message: format!("{w:?} is not a single indexable term"),
                    }),
                };
            }
            Some(Tok::Quoted(q)) => return Ok(QueryTree::Term(q)),
            _ => {
                self.at = self.at.saturating_sub(1);
                return Err(self.err("expected '(' or a term"));
            }
        }
        let op = match self.bump() {
            Some(Tok::Word(w)) => w.to_ascii_uppercase(),
            _ => {
                self.at -= 1;
                return Err(self.err("expected an operator name"));
            }
        };
        let tree = match op.as_str() {
            "OR" => QueryTree::Or(self.operands()?),
            "AND" => QueryTree::And(self.operands()?),
            "SAME+" => QueryTree::SamePlus(self.operands()?),
            "WITHOUT" | "FILTER" => {
                let mut args = self.operands()?;
                if args.len() != 2 {
                    return Err(QueryError::Arity {
                        op: if op == "WITHOUT" { "WITHOUT" } else { "FILTER" },
                        expected: "2",
                        got: args.len(),
                    });
                }
                let second = Box::new(args.pop().unwrap());
                let first = Box::new(args.pop().unwrap());
                if op == "WITHOUT" {
                    QueryTree::Without(first, second)
                } else {
                    QueryTree::Filter {
                        support: first,
                        target: second,
                    }
                }
            }
            "IN" => {
                let path = self.path()?;
                QueryTree::In {
                    path,
                    children: self.operands()?,
                }
            }
            "IN+" => {
                let path = self.path()?;
                let mut beta = DEFAULT_BETA;
                if let Some(Tok::Word(w)) = self.peek() {
                    if let Ok(b) = w.parse::<f64>() {
                        beta = b;
                        self.bump();
                    }
                }
                QueryTree::InPlus {
                    path,
                    beta,
                    children: self.operands()?,
                }
            }
            "SEQ" => {
                let mut items = Vec::new();
                loop {
                    match self.bump() {
                        Some(Tok::Close) => break,
                        Some(Tok::Word(w)) if w == "*" => items.push(SeqItem::Wildcard),
                        Some(Tok::Word(w)) => items.extend(self.stems(&w).into_iter().map(SeqItem::Term)),
                        Some(Tok::Quoted(q)) => items.push(SeqItem::Term(q)),
                        None => return Err(self.err("missing ')'")),
                        Some(_) => {
                            self.at -= 1;
                            return Err(self.err("SEQ takes terms and '*' only"));
                        }
                    }
                }
                QueryTree::Seq(items)
            }
            other => {
                self.at -= 1;
                return Err(self.err(format!("unknown operator {other:?}")));
            }
        };
        Ok(tree)
    }
}

/// Parses and validates an s-expression query.
pub fn parse_query(input: &str, config: &IngestConfig) -> Result<QueryTree, QueryError> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
        config,
        end: input.len(),
    };
    let tree = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.err("trailing input after query"));
    }
    tree.validate()?;
    Ok(tree)
}

/// Whether a stem prints as a bare word and reads back unchanged.
pub(super) fn is_bare_stem(stem: &str) -> bool {
    let cfg = IngestConfig::default();
    tokenize(stem, &cfg) == [stem]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QueryTree as Q;

    fn parse(s: &str) -> Result<QueryTree, QueryError> {
        parse_query(s, &IngestConfig::default())
    }

    #[test]
    fn topic_280_vague() {
        let t = parse(
            "(FILTER (AND (IN+ [/article/bb/] (SAME+ Baeza Yates)) (IN+ [/article/sec/] (SAME+ string matching))) \
             (IN+ [/article/sec/] (SAME+ approximate algorithm)))",
        )
        .unwrap();
        let Q::Filter { support, target } = &t else { panic!() };
        let Q::And(clauses) = support.as_ref() else { panic!() };
        assert_eq!(clauses.len(), 2);
        let Q::InPlus { path, beta, children } = &clauses[0] else { panic!() };
        assert_eq!(path.tags(), ["article", "bb"]);
        assert_eq!(*beta, DEFAULT_BETA);
        assert_eq!(children, &[Q::SamePlus(vec![Q::Term("baeza".into()), Q::Term("yate".into())])]);
        assert!(matches!(target.as_ref(), Q::InPlus { .. }));
    }

    #[test]
    fn case_insensitive_ops_and_beta() {
        let t = parse("(in+ [/a/] 0.25 (seq message * \"erreur\"))").unwrap();
        assert_eq!(
            t,
            Q::InPlus {
                path: QueryPath::new(["a"]).unwrap(),
                beta: 0.25,
                children: vec![Q::Seq(vec![
                    SeqItem::Term("messag".into()),
                    SeqItem::Wildcard,
                    SeqItem::Term("erreur".into())
                ])]
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "(FILTER (AND (IN [/article/bb/] (SAME+ Baeza Yates)) (IN+ [/article/sec/] 0.7 (SAME+ string matching))) (SAME+ (SEQ approximate * algorithm)))",
            "(WITHOUT (OR xml retrieval) (AND \"ponies\" html))",
        ] {
            let t = parse(src).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap(), t, "{t}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("(FILTER cat)"), Err(QueryError::Arity { op: "FILTER", got: 1, .. })));
        assert!(matches!(parse("(WITHOUT cat dog fish)"), Err(QueryError::Arity { .. })));
        assert!(matches!(parse("(AND cat"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("(NEAR cat dog)"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("(IN (SAME+ cat))"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("(IN [/a/ x)"), Err(QueryError::Syntax { .. })));
        assert_eq!(parse("(SEQ * the)"), Err(QueryError::EmptySequence));
        assert!(matches!(parse("(OR the)"), Err(QueryError::Arity { .. })));
        assert!(matches!(parse("cat dog"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("(IN+ [/a/] 2 x)"), Err(QueryError::Beta(_))));
    }

    #[test]
    fn single_term() {
        assert_eq!(parse("Cats").unwrap(), Q::Term("cat".into()));
    }
}

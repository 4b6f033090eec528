use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xcas_core::engine::{search, SearchRequest};
use xcas_core::index::{ContextIndex, PostingCodec};
use xcas_core::ingest::{context_of, parse_document, tokenize, IngestConfig};

const WORDS: [&str; 12] = [
    "xml", "retrieval", "vague", "structure", "index", "context", "string", "matching", "approximate", "algorithm",
    "ranking", "element",
];

fn corpus(seed: u64, n: usize) -> Vec<String> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut s = String::from("<article><fm><ti>");
            for _ in 0..r.gen_range(1..5) {
                s.push_str(WORDS[r.gen_range(0..WORDS.len())]);
                s.push(' ');
            }
            s.push_str("</ti></fm><bdy>");
            for _ in 0..r.gen_range(1..5) {
                s.push_str("<sec><p>");
                for _ in 0..r.gen_range(5..40) {
                    s.push_str(WORDS[r.gen_range(0..WORDS.len())]);
                    s.push(' ');
                }
                s.push_str("</p><p/></sec>");
            }
            s.push_str("</bdy></article>");
            s
        })
        .collect()
}

fn build(docs: &[String]) -> ContextIndex {
    let cfg = IngestConfig::default();
    let mut idx = ContextIndex::new();
    for (i, d) in docs.iter().enumerate() {
        idx.index_document(&parse_document(&format!("{i}.xml"), d.as_bytes(), &cfg).unwrap())
            .unwrap();
    }
    idx
}

fn dir_size(dir: &std::path::Path) -> u64 {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().metadata().unwrap().len())
        .sum()
}

#[test]
fn committed_size_is_bounded_by_input() {
    let docs = corpus(1, 200);
    let input: u64 = docs.iter().map(|d| d.len() as u64).sum();
    let idx = build(&docs);
    let tmp = tempfile::tempdir().unwrap();
    for (name, codec) in [("delta", PostingCodec::Delta), ("plain", PostingCodec::Plain)] {
        let path = tmp.path().join(name);
        idx.commit_with(&path, codec).unwrap();
        let size = dir_size(&path);
        assert!(size < 4 * input, "{name}: {size} bytes for {input} input bytes");
        assert_eq!(ContextIndex::open(&path).unwrap(), idx);
    }
    assert!(dir_size(&tmp.path().join("delta")) < dir_size(&tmp.path().join("plain")));
}

#[test]
fn document_frequencies_match_brute_force() {
    let docs = corpus(2, 60);
    let idx = build(&docs);
    let cfg = IngestConfig::default();
    let mut expected: BTreeMap<String, u64> = BTreeMap::new();
    for d in &docs {
        // text between tags only
        let text: String = d
            .split('<')
            .map(|chunk| chunk.split_once('>').map_or(chunk, |(_, t)| t))
            .collect::<Vec<_>>()
            .join(" ");
        let stems: BTreeSet<String> = tokenize(&text, &cfg).into_iter().collect();
        for s in stems {
            *expected.entry(s).or_default() += 1;
        }
    }
    assert_eq!(idx.stats().doc_freq, expected);
    assert_eq!(idx.recompute_stats(), *idx.stats());
    assert_eq!(idx.stats().total_docs, 60);
}

#[test]
fn dictionary_holds_exactly_the_contexts_with_content() {
    let docs = corpus(3, 30);
    let idx = build(&docs);
    let cfg = IngestConfig::default();
    let mut expected = BTreeSet::new();
    for d in &docs {
        let tree = parse_document("x", d.as_bytes(), &cfg).unwrap();
        for n in tree.nodes() {
            if n.descendants_and_self().any(|e| !e.tokens.is_empty()) {
                expected.insert(context_of(n, &tree).to_string());
            }
        }
    }
    let got: BTreeSet<String> = idx.dictionary().iter().map(|(_, p)| p.to_string()).collect();
    assert_eq!(got, expected);
}

#[test]
fn search_is_deterministic_and_truncation_stable() {
    let idx = build(&corpus(4, 80));
    let cfg = IngestConfig::default();
    let mut req = SearchRequest::new(
        "//article[about(./fm, xml retrieval)]//sec[about(., approximate string matching)]",
    );
    let full = search(&idx, &req, &cfg).unwrap();
    assert!(full.len() > 20);
    assert_eq!(search(&idx, &req, &cfg).unwrap(), full);
    for cutoff in [1, 5, 20] {
        req.cutoff = cutoff;
        assert_eq!(search(&idx, &req, &cfg).unwrap().hits, full.hits[..cutoff]);
    }
    assert!(full.hits.windows(2).all(|w| w[0].score >= w[1].score));
    assert!(full.iter().enumerate().all(|(i, h)| h.rank == i + 1));
}

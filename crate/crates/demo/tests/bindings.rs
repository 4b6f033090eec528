use serde_json::Value;

use xcas_demo::{align_paths_json, search_corpus_json, translate_topic_text};

const DOCS: &str = r#"[
  {"name": "one.xml", "xml": "<article><fm><au>Navarro</au></fm><bdy><sec>approximate algorithm</sec></bdy></article>"},
  {"name": "two.xml", "xml": "<article><fm><au>Baeza</au></fm><bdy><sec>exact algorithm</sec></bdy></article>"},
  {"name": "bad.xml", "xml": "<article><sec>unclosed</article>"}
]"#;

#[test]
fn alignment_of_a_subsequence_is_free() {
    let v: Value = serde_json::from_str(&align_paths_json("/article//sec", "/article/bdy/sec", "").unwrap()).unwrap();
    assert_eq!(v["distance"], 0.0);
    assert_eq!(v["similarity"], 1.0);
    assert_eq!(v["subsequence"], true);
    assert_eq!(v["script"].as_array().unwrap().len(), 3);
}

#[test]
fn alignment_counts_insertions_and_honours_costs() {
    let v: Value = serde_json::from_str(&align_paths_json("article/sec/p", "article/sec", "").unwrap()).unwrap();
    assert_eq!(v["distance"], 1.0);
    assert_eq!(v["similarity"], 0.5);
    let v: Value =
        serde_json::from_str(&align_paths_json("article/sec/p", "article/sec", "delete=0 insert=0.5 substitute=1").unwrap())
            .unwrap();
    assert_eq!(v["distance"], 0.5);
    assert!(align_paths_json("", "article", "").is_err());
    assert!(align_paths_json("a", "b", "insert=2").is_err());
}

#[test]
fn search_ranks_in_memory_documents() {
    let q = "//article[about(.//au, navarro)]//sec[about(., approximate algorithm)]";
    let v: Value = serde_json::from_str(&search_corpus_json(DOCS, q, "vv", "sameplus", 0.5, 10).unwrap()).unwrap();
    assert_eq!(v["documents"], 2);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 1);
    let hits = v["hits"].as_array().unwrap();
    assert_eq!(hits[0]["doc"], "one.xml");
    assert_eq!(hits[0]["path"], "/article[1]/bdy[1]/sec[1]");
    assert_eq!(hits[0]["score"], 1.0);
    assert!(v["query"].as_str().unwrap().starts_with("(FILTER"));

    let v: Value = serde_json::from_str(&search_corpus_json(DOCS, q, "ss", "sameplus", 0.5, 10).unwrap()).unwrap();
    assert_eq!(v["hits"].as_array().unwrap().len(), 1);
}

#[test]
fn search_reports_bad_input() {
    assert!(search_corpus_json("not json", "(SAME+ x)", "vv", "sameplus", 0.5, 10).is_err());
    assert!(search_corpus_json("[]", "(SAME+ x)", "vv", "sameplus", 0.5, 10).is_err());
    assert!(search_corpus_json(DOCS, "(SAME+", "vv", "sameplus", 0.5, 10).is_err());
    assert!(search_corpus_json(DOCS, "(SAME+ x)", "qq", "sameplus", 0.5, 10).is_err());
}

#[test]
fn translation_follows_the_strategy() {
    let t = "//article[about(.//fm//au, Navarro)]//sec[about(., approximate algorithm)]";
    assert_eq!(
        translate_topic_text(t, "vs", "sameplus", 0.5).unwrap(),
        "(FILTER (IN [/article/fm/au/] (SAME+ navarro)) (IN+ [/article/sec/] (SAME+ approxim algorithm)))"
    );
    assert!(translate_topic_text(t, "co", "seq", 0.5).unwrap().starts_with("(FILTER"));
    assert!(translate_topic_text(t, "vv", "sameplus", 1.5).is_err());
    assert!(translate_topic_text("//a[about(., x) or about(., y)]", "vv", "sameplus", 0.5).is_err());
}

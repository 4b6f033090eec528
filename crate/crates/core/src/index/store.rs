//! On-disk layout of a committed index.
//!
//! ```text
//! VERSION       "xcas-index <n>"
//! terms.kv      binary, keys in ascending byte order (see below)
//! contexts.tsv  id TAB /tag/tag/...
//! stats.tsv     "#docs" TAB N, then term TAB doc_freq
//! docs.tsv      doc_id TAB locator (\t \n \\ escaped)
//! nodes.tsv     doc TAB node TAB high TAB parent|- TAB context|- TAB tag TAB ordinal TAB runs|-
//! tagmap.tsv    tag TAB class
//! ```
//!
//! `terms.kv` starts with the magic `XCTERMS1`, a codec byte and a u64 term
//! count; each entry is a u32 key length, the key bytes, a u32 posting count
//! and the encoded postings. All fixed-width integers are little-endian.
//!
//! A commit writes into a sibling temporary directory and renames it into
//! place, so a reader never sees a partially written index.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::codec::{get_u32, get_u64, PostingCodec};
use super::{ContextDictionary, ContextIndex, CorpusStats, DocumentRecord, NodeRecord, PostingEntry};
use crate::error::IndexError;
use crate::ingest::{ContextPath, NodeInterval};

pub const FORMAT_VERSION: u32 = 1;
const VERSION_PREFIX: &str = "xcas-index";
const TERMS_MAGIC: &[u8; 8] = b"XCTERMS1";

impl ContextIndex {
    /// Writes the index to `dir`, which must not exist yet.
    pub fn commit(&self, dir: &Path) -> Result<(), IndexError> {
        self.commit_with(dir, PostingCodec::default())
    }

    pub fn commit_with(&self, dir: &Path, codec: PostingCodec) -> Result<(), IndexError> {
        if self.doc_count() == 0 {
            return Err(IndexError::EmptyIndex);
        }
        if dir.exists() {
            return Err(IndexError::AlreadyExists(dir.to_path_buf()));
        }
        let tmp = temp_sibling(dir);
        if tmp.exists() {
            fs::remove_dir_all(&tmp).map_err(|e| IndexError::io(&tmp, e))?;
        }
        fs::create_dir_all(&tmp).map_err(|e| IndexError::io(&tmp, e))?;
        let result = self.write_files(&tmp, codec).and_then(|()| {
            fs::rename(&tmp, dir).map_err(|e| IndexError::io(dir, e))
        });
        if result.is_err() {
            let _ = fs::remove_dir_all(&tmp);
        }
        result
    }

    fn write_files(&self, dir: &Path, codec: PostingCodec) -> Result<(), IndexError> {
        let mut terms = Vec::new();
        terms.extend_from_slice(TERMS_MAGIC);
        terms.push(codec.tag());
        terms.extend_from_slice(&(self.terms.len() as u64).to_le_bytes());
        for (key, list) in &self.terms {
            terms.extend_from_slice(&(key.len() as u32).to_le_bytes());
            terms.extend_from_slice(key.as_bytes());
            terms.extend_from_slice(&(list.len() as u32).to_le_bytes());
            codec.encode(list, &mut terms);
        }
        write(dir, "terms.kv", &terms)?;

        let mut contexts = String::new();
        for (id, path) in self.dictionary.iter() {
            let _ = writeln!(contexts, "{id}\t{path}");
        }
        write(dir, "contexts.tsv", contexts.as_bytes())?;

        let mut stats = format!("#docs\t{}\n", self.stats.total_docs);
        for (term, df) in &self.stats.doc_freq {
            let _ = writeln!(stats, "{term}\t{df}");
        }
        write(dir, "stats.tsv", stats.as_bytes())?;

        let mut docs = String::new();
        let mut nodes = String::new();
        for (doc_id, doc) in self.documents() {
            let _ = writeln!(docs, "{doc_id}\t{}", escape(&doc.locator));
            for n in &doc.nodes {
                let runs = if n.runs.is_empty() {
                    "-".to_string()
                } else {
                    n.runs
                        .iter()
                        .map(|(a, b)| format!("{a}-{b}"))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                let _ = writeln!(
                    nodes,
                    "{doc_id}\t{}\t{}\t{}\t{}\t{}\t{}\t{runs}",
                    n.interval.low,
                    n.interval.high,
                    opt(n.parent),
                    opt(n.context_id),
                    n.source_tag,
                    n.ordinal,
                );
            }
        }
        write(dir, "docs.tsv", docs.as_bytes())?;
        write(dir, "nodes.tsv", nodes.as_bytes())?;

        let mut tagmap = String::new();
        for (tag, class) in &self.tag_classes {
            let _ = writeln!(tagmap, "{tag}\t{class}");
        }
        write(dir, "tagmap.tsv", tagmap.as_bytes())?;

        // VERSION last: its presence marks a complete directory
        write(dir, "VERSION", format!("{VERSION_PREFIX} {FORMAT_VERSION}\n").as_bytes())
    }

    pub fn open(dir: &Path) -> Result<ContextIndex, IndexError> {
        let version = fs::read_to_string(dir.join("VERSION")).map_err(|e| IndexError::io(dir.join("VERSION"), e))?;
        if version.trim() != format!("{VERSION_PREFIX} {FORMAT_VERSION}") {
            return Err(IndexError::Version(version.trim().to_string()));
        }

        let terms = read_terms(&fs::read(dir.join("terms.kv")).map_err(|e| IndexError::io(dir.join("terms.kv"), e))?)?;

        let mut dictionary = ContextDictionary::default();
        for (line_no, line) in read_lines(dir, "contexts.tsv")?.iter().enumerate() {
            let (id, path) = line
                .split_once('\t')
                .ok_or_else(|| IndexError::corrupt("contexts.tsv", format!("line {}", line_no + 1)))?;
            let id: u32 = parse_num("contexts.tsv", id)?;
            let path: ContextPath = path.parse().map_err(|e: String| IndexError::corrupt("contexts.tsv", e))?;
            if dictionary.intern(path) != id {
                return Err(IndexError::corrupt("contexts.tsv", "ids are not dense"));
            }
        }

        let mut stats = CorpusStats::default();
        for (i, line) in read_lines(dir, "stats.tsv")?.iter().enumerate() {
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| IndexError::corrupt("stats.tsv", format!("line {}", i + 1)))?;
            let v: u64 = parse_num("stats.tsv", v)?;
            if i == 0 {
                if k != "#docs" {
                    return Err(IndexError::corrupt("stats.tsv", "missing #docs header"));
                }
                stats.total_docs = v;
            } else {
                stats.doc_freq.insert(k.to_string(), v);
            }
        }

        let mut docs: Vec<DocumentRecord> = Vec::new();
        for line in read_lines(dir, "docs.tsv")? {
            let (id, loc) = line
                .split_once('\t')
                .ok_or_else(|| IndexError::corrupt("docs.tsv", "missing tab"))?;
            if parse_num::<usize>("docs.tsv", id)? != docs.len() {
                return Err(IndexError::corrupt("docs.tsv", "ids are not dense"));
            }
            docs.push(DocumentRecord {
                locator: unescape(loc),
                nodes: Vec::new(),
            });
        }

        for line in read_lines(dir, "nodes.tsv")? {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 8 {
                return Err(IndexError::corrupt("nodes.tsv", format!("expected 8 fields: {line:?}")));
            }
            let doc: usize = parse_num("nodes.tsv", f[0])?;
            let low: u32 = parse_num("nodes.tsv", f[1])?;
            let high: u32 = parse_num("nodes.tsv", f[2])?;
            let record = NodeRecord {
                interval: NodeInterval { low, high },
                parent: parse_opt("nodes.tsv", f[3])?,
                context_id: parse_opt("nodes.tsv", f[4])?,
                source_tag: f[5].to_string(),
                ordinal: parse_num("nodes.tsv", f[6])?,
                runs: parse_runs(f[7])?,
            };
            let target = docs
                .get_mut(doc)
                .ok_or_else(|| IndexError::corrupt("nodes.tsv", format!("unknown document {doc}")))?;
            if low as usize != target.nodes.len() || low > high {
                return Err(IndexError::corrupt("nodes.tsv", "node ids out of order"));
            }
            target.nodes.push(record);
        }
        if docs.iter().any(|d| d.nodes.is_empty()) {
            return Err(IndexError::corrupt("nodes.tsv", "document without nodes"));
        }

        let mut tag_classes = BTreeMap::new();
        for line in read_lines(dir, "tagmap.tsv")? {
            let (t, c) = line
                .split_once('\t')
                .ok_or_else(|| IndexError::corrupt("tagmap.tsv", "missing tab"))?;
            tag_classes.insert(t.to_string(), c.to_string());
        }

        Ok(ContextIndex::from_parts(terms, dictionary, stats, docs, tag_classes))
    }
}

fn read_terms(buf: &[u8]) -> Result<BTreeMap<String, Vec<PostingEntry>>, IndexError> {
    let bad = |m: String| IndexError::corrupt("terms.kv", m);
    if buf.len() < 17 || &buf[..8] != TERMS_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let codec = PostingCodec::from_tag(buf[8]).ok_or_else(|| bad(format!("unknown codec {}", buf[8])))?;
    let mut cursor = 9;
    let count = get_u64(buf, &mut cursor).map_err(bad)?;
    let mut terms = BTreeMap::new();
    let mut previous: Option<String> = None;
    for _ in 0..count {
        let klen = get_u32(buf, &mut cursor).map_err(bad)? as usize;
        let key = buf
            .get(cursor..cursor + klen)
            .ok_or_else(|| bad("truncated key".into()))?;
        let key = String::from_utf8(key.to_vec()).map_err(|_| bad("key is not UTF-8".into()))?;
        cursor += klen;
        if previous.as_ref().is_some_and(|p| *p >= key) {
            return Err(bad(format!("keys out of order at {key:?}")));
        }
        let n = get_u32(buf, &mut cursor).map_err(bad)? as usize;
        let list = codec.decode(buf, &mut cursor, n).map_err(bad)?;
        if list.windows(2).any(|w| (w[0].doc_id, w[0].position) >= (w[1].doc_id, w[1].position)) {
            return Err(bad(format!("postings for {key:?} not sorted")));
        }
        previous = Some(key.clone());
        terms.insert(key, list);
    }
    if cursor != buf.len() {
        return Err(bad("trailing bytes".into()));
    }
    Ok(terms)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), IndexError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| IndexError::io(path, e))
}

fn read_lines(dir: &Path, name: &str) -> Result<Vec<String>, IndexError> {
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|e| IndexError::io(path, e))?;
    Ok(text.lines().filter(|l| !l.is_empty()).map(str::to_string).collect())
}

fn parse_num<T: std::str::FromStr>(file: &str, s: &str) -> Result<T, IndexError> {
    s.parse().map_err(|_| IndexError::corrupt(file, format!("bad number {s:?}")))
}

fn parse_opt(file: &str, s: &str) -> Result<Option<u32>, IndexError> {
    if s == "-" {
        Ok(None)
    } else {
        parse_num(file, s).map(Some)
    }
}

fn parse_runs(s: &str) -> Result<Vec<(u32, u32)>, IndexError> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|r| {
            let (a, b) = r
                .split_once('-')
                .ok_or_else(|| IndexError::corrupt("nodes.tsv", format!("bad run {r:?}")))?;
            Ok((parse_num("nodes.tsv", a)?, parse_num("nodes.tsv", b)?))
        })
        .collect()
}

fn opt(v: Option<u32>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn temp_sibling(dir: &Path) -> PathBuf {
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "index".into());
    dir.with_file_name(format!(".{name}.tmp-{}", std::process::id()))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('t') => out.push('\t'),
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_document, IngestConfig};

    fn small() -> ContextIndex {
        let cfg = IngestConfig::parse("p1=p", None).unwrap();
        let mut idx = ContextIndex::with_tag_classes(cfg.tag_classes.clone());
        for (name, src) in [
            ("a.xml", "<article><sec><p1>approximate string matching</p1></sec></article>"),
            ("weird\tname.xml", "<article><bb>Baeza-Yates</bb><sec>string <b/>algorithms</sec></article>"),
            ("c.xml", "<article><fm><au>Navarro</au></fm></article>"),
        ] {
            idx.index_document(&parse_document(name, src.as_bytes(), &cfg).unwrap()).unwrap();
        }
        idx
    }

    #[test]
    fn round_trip_both_codecs() {
        let idx = small();
        for codec in [PostingCodec::Plain, PostingCodec::Delta] {
            let dir = tempfile::tempdir().unwrap();
            let target = dir.path().join("idx");
            idx.commit_with(&target, codec).unwrap();
            let back = ContextIndex::open(&target).unwrap();
            assert_eq!(back, idx);
            assert_eq!(back.lookup("string"), idx.lookup("string"));
        }
    }

    #[test]
    fn empty_index_refused() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            ContextIndex::new().commit(&dir.path().join("x")),
            Err(IndexError::EmptyIndex)
        ));
        assert!(!dir.path().join("x").exists());
    }

    #[test]
    fn existing_directory_refused() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(small().commit(dir.path()), Err(IndexError::AlreadyExists(_))));
    }

    #[test]
    fn version_mismatch_detected() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("idx");
        small().commit(&target).unwrap();
        fs::write(target.join("VERSION"), "xcas-index 99\n").unwrap();
        assert!(matches!(ContextIndex::open(&target), Err(IndexError::Version(v)) if v == "xcas-index 99"));
    }

    #[test]
    fn corrupt_terms_detected() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("idx");
        small().commit(&target).unwrap();
        let mut bytes = fs::read(target.join("terms.kv")).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(target.join("terms.kv"), bytes).unwrap();
        assert!(matches!(ContextIndex::open(&target), Err(IndexError::Corrupt { .. })));
    }

    #[test]
    fn no_temp_left_behind() {
        let dir = tempfile::tempdir().unwrap();
        small().commit(&dir.path().join("idx")).unwrap();
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, ["idx"]);
    }

    #[test]
    fn escaping() {
        for s in ["plain", "tab\there", "new\nline", "back\\slash\\t"] {
            assert_eq!(unescape(&escape(s)), s);
        }
    }
}
